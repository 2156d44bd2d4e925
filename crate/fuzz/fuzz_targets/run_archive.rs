//! Run archives come from disk and may be truncated or tampered with.
//! Decoding must never panic, and anything that does decode must satisfy
//! the front's shape invariant and re-serialize cleanly.

#![no_main]

use libfuzzer_sys::fuzz_target;
use moa_cli::archive::RunArchive;

fuzz_target!(|data: &[u8]| {
    let Ok(archive) = serde_json::from_slice::<RunArchive>(data) else {
        return;
    };
    for s in archive.front.members() {
        assert_eq!(s.objectives.values().len(), archive.front.objective_count());
    }
    let _ = serde_json::to_string(&archive);
});
