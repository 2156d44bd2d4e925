//! CSV emission and ingestion. Fronts serialize one row per solution —
//! run id, parameters, then objectives in their declared physical
//! orientation — with headers that encode column roles: `p:<name>` for
//! parameters, `o:<name>:<min|max>` for objectives. Reals use '.' decimals
//! at full round-trip precision.

use std::fs;
use std::path::Path;

use moa::pareto::{ObjectiveVector, ParameterVector, Solution};
use moa::problems::{externalize, KinematicRecord, ObjectiveSense, ObjectiveSpec};

use crate::{data_err, CliResult};

/// Write a file atomically: temp file in the same directory, then rename.
pub fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, contents).map_err(|e| data_err(format!("cannot write {}: {e}", tmp.display())))?;
    fs::rename(&tmp, path)
        .map_err(|e| data_err(format!("cannot move {} into place: {e}", tmp.display())))?;
    Ok(())
}

fn sense_tag(sense: ObjectiveSense) -> &'static str {
    match sense {
        ObjectiveSense::Minimize => "min",
        ObjectiveSense::Maximize => "max",
    }
}

pub fn objective_header(spec: &ObjectiveSpec) -> String {
    format!("o:{}:{}", spec.name, sense_tag(spec.sense))
}

/// Render rows to CSV text and write atomically.
pub fn write_csv(path: &Path, header: &[String], rows: &[Vec<String>]) -> CliResult<()> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(header)
        .map_err(|e| data_err(format!("cannot format {}: {e}", path.display())))?;
    for row in rows {
        wtr.write_record(row)
            .map_err(|e| data_err(format!("cannot format {}: {e}", path.display())))?;
    }
    let bytes = wtr
        .into_inner()
        .map_err(|e| data_err(format!("cannot format {}: {e}", path.display())))?;
    let text = String::from_utf8(bytes).expect("csv output is UTF-8");
    write_atomic(path, &text)
}

/// One row per solution: run id, parameters, raw-orientation objectives.
pub fn write_front_csv(
    path: &Path,
    members: &[(u64, &Solution)],
    param_names: &[String],
    specs: &[ObjectiveSpec],
) -> CliResult<()> {
    let mut header = vec!["run".to_string()];
    header.extend(param_names.iter().map(|n| format!("p:{n}")));
    header.extend(specs.iter().map(objective_header));
    let rows: Vec<Vec<String>> = members
        .iter()
        .map(|(run, s)| {
            let mut row = vec![run.to_string()];
            row.extend(s.parameters.values().iter().map(|v| format!("{v}")));
            row.extend(
                externalize(specs, &s.objectives)
                    .iter()
                    .map(|v| format!("{v}")),
            );
            row
        })
        .collect();
    write_csv(path, &header, &rows)
}

/// Objective-only rows (used for the worst attainment surface, whose
/// corner points have no parameters).
pub fn write_corners_csv(
    path: &Path,
    corners: &[ObjectiveVector],
    specs: &[ObjectiveSpec],
) -> CliResult<()> {
    let header: Vec<String> = specs.iter().map(objective_header).collect();
    let rows: Vec<Vec<String>> = corners
        .iter()
        .map(|c| {
            externalize(specs, c)
                .iter()
                .map(|v| format!("{v}"))
                .collect()
        })
        .collect();
    write_csv(path, &header, &rows)
}

/// A front read back from CSV, still in raw (physical) orientation.
#[derive(Debug, Clone)]
pub struct FrontCsv {
    pub param_names: Vec<String>,
    pub specs: Vec<ObjectiveSpec>,
    pub runs: Vec<u64>,
    pub parameters: Vec<ParameterVector>,
    /// Raw orientation, aligned with `specs`.
    pub raw_objectives: Vec<Vec<f64>>,
    pub labels: Option<Vec<String>>,
}

/// Parse a front CSV. Column roles come from the header; `label_column`
/// (when given) names any extra column to read as a class label.
pub fn read_front_csv(path: &Path, label_column: Option<&str>) -> CliResult<FrontCsv> {
    let bytes =
        fs::read(path).map_err(|e| data_err(format!("cannot read {}: {e}", path.display())))?;
    parse_front_csv(&bytes, &path.display().to_string(), label_column)
}

/// Decode front-CSV bytes. `source` names the input in error messages.
pub fn parse_front_csv(
    bytes: &[u8],
    source: &str,
    label_column: Option<&str>,
) -> CliResult<FrontCsv> {
    let mut rdr = csv::ReaderBuilder::new().flexible(false).from_reader(bytes);
    let headers = rdr
        .headers()
        .map_err(|e| data_err(format!("{source}: {e}")))?
        .clone();

    let mut run_col = None;
    let mut param_cols = Vec::new();
    let mut param_names = Vec::new();
    let mut objective_cols = Vec::new();
    let mut specs = Vec::new();
    let mut label_col = None;
    for (i, h) in headers.iter().enumerate() {
        let h = h.trim();
        if h == "run" {
            run_col = Some(i);
        } else if let Some(name) = h.strip_prefix("p:") {
            param_cols.push(i);
            param_names.push(name.to_string());
        } else if let Some(rest) = h.strip_prefix("o:") {
            let Some((name, sense)) = rest.rsplit_once(':') else {
                return Err(data_err(format!(
                    "{source}: objective header '{h}' must look like o:<name>:<min|max>"
                )));
            };
            let sense = match sense {
                "min" => ObjectiveSense::Minimize,
                "max" => ObjectiveSense::Maximize,
                other => {
                    return Err(data_err(format!(
                        "{source}: objective header '{h}' has unknown sense '{other}'"
                    )))
                }
            };
            objective_cols.push(i);
            specs.push(ObjectiveSpec {
                name: name.to_string(),
                sense,
            });
        } else if Some(h) == label_column {
            label_col = Some(i);
        }
    }
    if let Some(wanted) = label_column {
        if label_col.is_none() {
            return Err(data_err(format!(
                "{source}: label column '{wanted}' not found in header"
            )));
        }
    }
    if objective_cols.len() < 2 {
        return Err(data_err(format!(
            "{source}: a front needs at least 2 objective columns, found {}",
            objective_cols.len()
        )));
    }

    let mut out = FrontCsv {
        param_names,
        specs,
        runs: Vec::new(),
        parameters: Vec::new(),
        raw_objectives: Vec::new(),
        labels: label_col.map(|_| Vec::new()),
    };
    for (idx, record) in rdr.records().enumerate() {
        let row = idx + 2; // header is line 1
        let record = record.map_err(|e| data_err(format!("{source} row {row}: {e}")))?;
        let number = |col: usize| -> CliResult<f64> {
            record[col].trim().parse().map_err(|_| {
                data_err(format!(
                    "{source} row {row}: cannot parse '{}' in column '{}' as a number",
                    &record[col], &headers[col]
                ))
            })
        };
        out.runs.push(match run_col {
            Some(c) => record[c].trim().parse().map_err(|_| {
                data_err(format!(
                    "{source} row {row}: cannot parse run id '{}'",
                    &record[c]
                ))
            })?,
            None => 0,
        });
        let params: Vec<f64> = param_cols
            .iter()
            .map(|&c| number(c))
            .collect::<CliResult<_>>()?;
        out.parameters.push(if params.is_empty() {
            // Objective-only CSVs still need a placeholder parameter to
            // form solutions.
            ParameterVector::new(vec![0.0]).expect("placeholder parameter")
        } else {
            ParameterVector::new(params)
                .map_err(|e| data_err(format!("{source} row {row}: {e}")))?
        });
        out.raw_objectives.push(
            objective_cols
                .iter()
                .map(|&c| number(c))
                .collect::<CliResult<_>>()?,
        );
        if let (Some(labels), Some(c)) = (out.labels.as_mut(), label_col) {
            labels.push(record[c].trim().to_string());
        }
    }
    Ok(out)
}

const KINEMATIC_COLUMNS: [&str; 9] = [
    "a_DI", "p_DI", "r_TWi", "a_TWi", "p_TWi", "r_TWe", "a_TWe", "p_TWe", "U",
];

/// Read kinematic records (one flapping configuration per row) with the
/// columns a_DI, p_DI, r_TWi, a_TWi, p_TWi, r_TWe, a_TWe, p_TWe, U.
pub fn read_kinematics_csv(path: &Path) -> CliResult<Vec<KinematicRecord>> {
    let bytes =
        fs::read(path).map_err(|e| data_err(format!("cannot read {}: {e}", path.display())))?;
    parse_kinematics_csv(&bytes, &path.display().to_string())
}

/// Decode kinematics-CSV bytes. `source` names the input in error messages.
pub fn parse_kinematics_csv(bytes: &[u8], source: &str) -> CliResult<Vec<KinematicRecord>> {
    let mut rdr = csv::ReaderBuilder::new().from_reader(bytes);
    let headers = rdr
        .headers()
        .map_err(|e| data_err(format!("{source}: {e}")))?
        .clone();
    let mut cols = Vec::new();
    for name in KINEMATIC_COLUMNS {
        let Some(i) = headers.iter().position(|h| h.trim() == name) else {
            return Err(data_err(format!(
                "{source}: missing kinematic column '{name}'"
            )));
        };
        cols.push(i);
    }
    let mut records = Vec::new();
    for (idx, record) in rdr.records().enumerate() {
        let row = idx + 2;
        let record = record.map_err(|e| data_err(format!("{source} row {row}: {e}")))?;
        let mut v = [0.0f64; 9];
        for (slot, &c) in v.iter_mut().zip(&cols) {
            *slot = record[c].trim().parse().map_err(|_| {
                data_err(format!(
                    "{source} row {row}: cannot parse '{}' in column '{}' as a number",
                    &record[c], &headers[c]
                ))
            })?;
        }
        records.push(KinematicRecord {
            a_di: v[0],
            p_di: v[1],
            r_twi: v[2],
            a_twi: v[3],
            p_twi: v[4],
            r_twe: v[5],
            a_twe: v[6],
            p_twe: v[7],
            cruise_speed: v[8],
        });
    }
    Ok(records)
}
