//! Study configs are hand-edited text, so the parser sees arbitrary bytes.
//! It must reject garbage with an error, never a panic.

#![no_main]

use libfuzzer_sys::fuzz_target;
use moa_cli::config::parse_study_config;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let _ = parse_study_config(text);
});
