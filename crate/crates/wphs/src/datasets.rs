//! Ingestion and serialization of family lists, plus the embedded
//! 95-family index-1 threefold database.
//!
//! CSV schema: header `id,weights,degree`, weights `;`-separated.
//! JSON schema: array of `{id, weights, degree, quasi_smooth?, terminal?}`.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::family::{Error, HypersurfaceFamily, Result};

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyRecord {
    pub id: u64,
    pub weights: Vec<u64>,
    pub degree: u64,
    #[serde(default = "default_true")]
    pub quasi_smooth: bool,
    #[serde(default = "default_true")]
    pub terminal: bool,
}

impl FamilyRecord {
    pub fn to_family(&self) -> Result<HypersurfaceFamily> {
        Ok(HypersurfaceFamily::new(self.weights.clone(), self.degree)?
            .with_id(self.id)
            .with_flags(self.quasi_smooth, self.terminal))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

fn validate_record(rec: &FamilyRecord, row: usize, expected_index: Option<i64>) -> Result<()> {
    let fail = |field: &'static str, reason: String| Error::Validation { row, field, reason };
    if rec.id == 0 {
        return Err(fail("id", "id must be positive".into()));
    }
    let family = rec
        .to_family()
        .map_err(|e| fail("weights", e.to_string()))?;
    if !family.ambient().is_wellformed_ambient() {
        return Err(fail("weights", "ambient space is not well-formed".into()));
    }
    if family.is_linear_cone() {
        return Err(fail(
            "degree",
            "family is a linear cone (degree equals a weight)".into(),
        ));
    }
    if let Some(expected) = expected_index {
        let found = family.fano_index();
        if found != expected {
            return Err(fail(
                "degree",
                format!("Fano index must be {expected} for this list, found {found}"),
            ));
        }
    }
    Ok(())
}

fn parse_csv(source: &str, expected_index: Option<i64>) -> Result<Vec<FamilyRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(source.as_bytes());
    {
        let headers = reader.headers().map_err(|e| Error::Parse {
            row: 1,
            reason: e.to_string(),
        })?;
        if headers.iter().collect::<Vec<_>>() != ["id", "weights", "degree"] {
            return Err(Error::Parse {
                row: 1,
                reason: format!(
                    "expected header `id,weights,degree`, found `{}`",
                    headers.iter().collect::<Vec<_>>().join(",")
                ),
            });
        }
    }
    let mut out = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 2; // 1-based, after the header line
        let record = record.map_err(|e| Error::Parse {
            row,
            reason: e.to_string(),
        })?;
        if record.len() != 3 {
            return Err(Error::Parse {
                row,
                reason: format!("expected 3 fields, found {}", record.len()),
            });
        }
        let id: u64 = record[0].trim().parse().map_err(|_| Error::Parse {
            row,
            reason: format!("id `{}` is not a positive integer", &record[0]),
        })?;
        let weights = record[1]
            .split(';')
            .map(|p| {
                p.trim().parse::<u64>().map_err(|_| Error::Parse {
                    row,
                    reason: format!("weight `{p}` is not a positive integer"),
                })
            })
            .collect::<Result<Vec<u64>>>()?;
        let degree: u64 = record[2].trim().parse().map_err(|_| Error::Parse {
            row,
            reason: format!("degree `{}` is not a positive integer", &record[2]),
        })?;
        let rec = FamilyRecord {
            id,
            weights,
            degree,
            quasi_smooth: true,
            terminal: true,
        };
        validate_record(&rec, row, expected_index)?;
        out.push(rec);
    }
    Ok(out)
}

fn parse_json(source: &str, expected_index: Option<i64>) -> Result<Vec<FamilyRecord>> {
    let records: Vec<FamilyRecord> = serde_json::from_str(source).map_err(|e| Error::Parse {
        row: e.line(),
        reason: e.to_string(),
    })?;
    for (i, rec) in records.iter().enumerate() {
        validate_record(rec, i + 1, expected_index)?;
    }
    Ok(records)
}

/// Parses and validates a family list. `expected_index` enforces the Fano
/// index contract of curated lists (1 for the embedded threefolds).
pub fn parse_family_stream(
    mut source: impl Read,
    format: Format,
    expected_index: Option<i64>,
) -> Result<Vec<FamilyRecord>> {
    let mut buf = String::new();
    source.read_to_string(&mut buf).map_err(|e| Error::Parse {
        row: 0,
        reason: format!("read failed: {e}"),
    })?;
    match format {
        Format::Csv => parse_csv(&buf, expected_index),
        Format::Json => parse_json(&buf, expected_index),
    }
}

pub fn serialize_csv(records: &[FamilyRecord], mut sink: impl Write) -> Result<()> {
    let io_err = |e: std::io::Error| Error::InvalidInput(format!("write failed: {e}"));
    writeln!(sink, "id,weights,degree").map_err(io_err)?;
    for r in records {
        let weights = r
            .weights
            .iter()
            .map(|w| w.to_string())
            .collect::<Vec<_>>()
            .join(";");
        writeln!(sink, "{},{},{}", r.id, weights, r.degree).map_err(io_err)?;
    }
    Ok(())
}

pub fn serialize_json(records: &[FamilyRecord], mut sink: impl Write) -> Result<()> {
    let text = serde_json::to_string_pretty(records)
        .map_err(|e| Error::InvalidInput(format!("serialization failed: {e}")))?;
    writeln!(sink, "{text}").map_err(|e| Error::InvalidInput(format!("write failed: {e}")))
}

const THREEFOLD_CSV: &str = include_str!("../data/fano3_index1.csv");

/// The 95 terminal quasi-smooth index-1 Fano threefold hypersurface
/// families, numbered by degree then weights.
pub fn embedded_threefold_families() -> Vec<FamilyRecord> {
    parse_csv(THREEFOLD_CSV, Some(1)).expect("embedded threefold list is valid")
}
