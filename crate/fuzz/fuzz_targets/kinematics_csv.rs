//! Kinematics tables are exported from spreadsheets, so column order and
//! whitespace vary. The reader must parse or reject without panicking.

#![no_main]

use libfuzzer_sys::fuzz_target;
use moa_cli::csv_io::parse_kinematics_csv;

fuzz_target!(|data: &[u8]| {
    let _ = parse_kinematics_csv(data, "fuzz");
});
