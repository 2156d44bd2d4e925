//! Front CSVs are both emitted and ingested, but ingestion also accepts
//! files from other tools. Accepted input must come out rectangular: one
//! value per declared column on every row.

#![no_main]

use libfuzzer_sys::fuzz_target;
use moa_cli::csv_io::parse_front_csv;

fuzz_target!(|data: &[u8]| {
    if let Ok(front) = parse_front_csv(data, "fuzz", None) {
        let rows = front.runs.len();
        assert_eq!(front.parameters.len(), rows);
        assert_eq!(front.raw_objectives.len(), rows);
        for objectives in &front.raw_objectives {
            assert_eq!(objectives.len(), front.specs.len());
        }
    }
    // Exercise the label-extraction path as well.
    if let Ok(front) = parse_front_csv(data, "fuzz", Some("label")) {
        let labels = front.labels.expect("a found label column yields labels");
        assert_eq!(labels.len(), front.runs.len());
    }
});
