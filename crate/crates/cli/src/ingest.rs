//! Strict CSV and JSON ingestion with line-numbered diagnostics.
//!
//! Units CSV:   `name,capacity_mw,availability`
//! Records CSV: `timestamp,demand_mw,wind_mw` with ISO-8601 timestamps.

use std::collections::HashSet;
use std::path::Path;

use chrono::NaiveDateTime;
use serde::Deserialize;
use thiserror::Error;

use adequacy_core::copt::{CapacityDistribution, GeneratingUnit};
use adequacy_core::risk::DemandWindRecord;

pub const UNITS_HEADER: &str = "name,capacity_mw,availability";
pub const RECORDS_HEADER: &str = "timestamp,demand_mw,wind_mw";

const TIMESTAMP_FORMATS: [&str; 4] =
    ["%Y-%m-%dT%H:%M:%S", "%Y-%m-%dT%H:%M", "%Y-%m-%d %H:%M:%S", "%Y-%m-%d %H:%M"];

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: expected header `{expected}`, found `{found}`")]
    Header { path: String, expected: &'static str, found: String },
    #[error("{path}:{line}: {message}")]
    Row { path: String, line: u64, message: String },
    #[error("{path}: {message}")]
    Json { path: String, message: String },
}

fn row_err(path: &Path, line: u64, message: impl Into<String>) -> IngestError {
    IngestError::Row { path: path.display().to_string(), line, message: message.into() }
}

fn open_csv(path: &Path, expected_header: &'static str) -> Result<csv::Reader<std::fs::File>, IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(source) => {
                IngestError::Io { path: path.display().to_string(), source }
            }
            other => IngestError::Json {
                path: path.display().to_string(),
                message: format!("{other:?}"),
            },
        })?;
    let found = reader
        .headers()
        .map_err(|e| row_err(path, 1, e.to_string()))?
        .iter()
        .collect::<Vec<_>>()
        .join(",");
    if found != expected_header {
        return Err(IngestError::Header {
            path: path.display().to_string(),
            expected: expected_header,
            found,
        });
    }
    Ok(reader)
}

fn record_line(record: &csv::StringRecord) -> u64 {
    record.position().map(|p| p.line()).unwrap_or(0)
}

fn parse_field<T: std::str::FromStr>(
    path: &Path,
    record: &csv::StringRecord,
    index: usize,
    name: &str,
) -> Result<T, IngestError> {
    let line = record_line(record);
    let raw = record
        .get(index)
        .ok_or_else(|| row_err(path, line, format!("missing `{name}` column")))?;
    raw.trim()
        .parse()
        .map_err(|_| row_err(path, line, format!("cannot parse `{name}` from `{raw}`")))
}

fn parse_timestamp(path: &Path, record: &csv::StringRecord, raw: &str) -> Result<NaiveDateTime, IngestError> {
    for format in TIMESTAMP_FORMATS {
        if let Ok(ts) = NaiveDateTime::parse_from_str(raw.trim(), format) {
            return Ok(ts);
        }
    }
    Err(row_err(
        path,
        record_line(record),
        format!("cannot parse `timestamp` from `{raw}` (expected ISO-8601, e.g. 2006-02-12T17:00:00)"),
    ))
}

/// Reads a generating-unit fleet, validating capacities and availabilities
/// row by row.
pub fn read_units_csv(path: &Path) -> Result<Vec<GeneratingUnit>, IngestError> {
    let mut reader = open_csv(path, UNITS_HEADER)?;
    let mut units = Vec::new();
    for row in reader.records() {
        let record = row.map_err(|e| row_err(path, 0, e.to_string()))?;
        let line = record_line(&record);
        if record.len() != 3 {
            return Err(row_err(path, line, format!("expected 3 columns, found {}", record.len())));
        }
        let name = record.get(0).unwrap_or("").trim().to_string();
        if name.is_empty() {
            return Err(row_err(path, line, "unit name is empty"));
        }
        let capacity: f64 = parse_field(path, &record, 1, "capacity_mw")?;
        let availability: f64 = parse_field(path, &record, 2, "availability")?;
        let unit = GeneratingUnit::new(name, capacity, availability)
            .map_err(|e| row_err(path, line, e.to_string()))?;
        units.push(unit);
    }
    if units.is_empty() {
        return Err(row_err(path, 1, "file contains no unit rows"));
    }
    Ok(units)
}

/// Reads a demand-wind series; timestamps must be unique and values finite
/// and non-negative.
pub fn read_records_csv(path: &Path) -> Result<Vec<DemandWindRecord>, IngestError> {
    let mut reader = open_csv(path, RECORDS_HEADER)?;
    let mut records = Vec::new();
    let mut seen = HashSet::new();
    for row in reader.records() {
        let record = row.map_err(|e| row_err(path, 0, e.to_string()))?;
        let line = record_line(&record);
        if record.len() != 3 {
            return Err(row_err(path, line, format!("expected 3 columns, found {}", record.len())));
        }
        let raw_ts = record.get(0).unwrap_or("");
        let timestamp = parse_timestamp(path, &record, raw_ts)?;
        if !seen.insert(timestamp) {
            return Err(row_err(path, line, format!("duplicate timestamp `{raw_ts}`")));
        }
        let demand: f64 = parse_field(path, &record, 1, "demand_mw")?;
        let wind: f64 = parse_field(path, &record, 2, "wind_mw")?;
        let rec = DemandWindRecord::new(timestamp, demand, wind)
            .map_err(|e| row_err(path, line, e.to_string()))?;
        records.push(rec);
    }
    if records.is_empty() {
        return Err(row_err(path, 1, "file contains no record rows"));
    }
    Ok(records)
}

pub fn write_records_csv(path: &Path, records: &[DemandWindRecord]) -> Result<(), IngestError> {
    let mut out = String::from(RECORDS_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{}\n",
            r.timestamp.format("%Y-%m-%dT%H:%M:%S"),
            r.demand_mw,
            r.wind_mw
        ));
    }
    std::fs::write(path, out).map_err(|source| IngestError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Serialized capacity distribution, as produced by the `copt` and `synth`
/// subcommands and accepted back through `--copt`. Extra fields in the file
/// are ignored.
#[derive(Debug, Deserialize)]
pub struct CoptDump {
    pub grid_step_mw: f64,
    pub support_mw: Vec<f64>,
    pub pmf: Vec<f64>,
}

pub fn read_copt_json(path: &Path) -> Result<CapacityDistribution, IngestError> {
    let text = std::fs::read_to_string(path).map_err(|source| IngestError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let dump: CoptDump = serde_json::from_str(&text).map_err(|e| IngestError::Json {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    if dump.support_mw.len() != dump.pmf.len() {
        return Err(IngestError::Json {
            path: path.display().to_string(),
            message: format!(
                "support_mw has {} entries but pmf has {}",
                dump.support_mw.len(),
                dump.pmf.len()
            ),
        });
    }
    let points: Vec<(f64, f64)> =
        dump.support_mw.iter().copied().zip(dump.pmf.iter().copied()).collect();
    CapacityDistribution::from_pmf(dump.grid_step_mw, &points).map_err(|e| IngestError::Json {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Collapses half-hourly (or finer) records to one per calendar hour,
/// keeping the record with the higher demand in each hour (earlier record
/// on ties) and stamping it with the hour.
pub fn aggregate_to_hours(records: &[DemandWindRecord]) -> Vec<DemandWindRecord> {
    use chrono::Timelike;
    use std::collections::BTreeMap;
    let mut by_hour: BTreeMap<NaiveDateTime, DemandWindRecord> = BTreeMap::new();
    for r in records {
        let hour = r.timestamp.date().and_hms_opt(r.timestamp.hour(), 0, 0).unwrap();
        let candidate = DemandWindRecord { timestamp: hour, ..r.clone() };
        by_hour
            .entry(hour)
            .and_modify(|best| {
                if candidate.demand_mw > best.demand_mw {
                    *best = candidate.clone();
                }
            })
            .or_insert(candidate);
    }
    by_hour.into_values().collect()
}
