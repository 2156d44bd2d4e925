//! Same contract as run archives: a manifest is untrusted JSON and the
//! decoder must fail gracefully on anything malformed.

#![no_main]

use libfuzzer_sys::fuzz_target;
use moa_cli::archive::StudyManifest;

fuzz_target!(|data: &[u8]| {
    let Ok(manifest) = serde_json::from_slice::<StudyManifest>(data) else {
        return;
    };
    let _ = serde_json::to_string(&manifest);
});
