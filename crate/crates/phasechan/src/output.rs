//! Machine-readable emission of result tables.
//!
//! CSV: `# key=value` metadata comment lines, a header row, then one row per
//! record; floats use shortest round-trip formatting, so printed values parse
//! back bit-for-bit. JSON: one object with `meta` and `rows`.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use crate::AppError;

/// Run metadata embedded in every output so it can reproduce itself.
pub type Meta = BTreeMap<String, String>;

pub fn base_meta() -> Meta {
    let mut m = Meta::new();
    m.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    m
}

pub fn write_csv<T: Serialize, W: Write>(
    meta: &Meta,
    rows: &[T],
    mut writer: W,
) -> Result<(), AppError> {
    for (k, v) in meta {
        writeln!(writer, "# {k}={v}")?;
    }
    let mut csv = csv::Writer::from_writer(writer);
    for row in rows {
        csv.serialize(row)?;
    }
    csv.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize, W: Write>(
    meta: &Meta,
    rows: &[T],
    mut writer: W,
) -> Result<(), AppError> {
    #[derive(Serialize)]
    struct Document<'a, T> {
        meta: &'a Meta,
        rows: &'a [T],
    }
    serde_json::to_writer_pretty(&mut writer, &Document { meta, rows })?;
    writeln!(writer)?;
    Ok(())
}

/// Output format selected on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn write<T: Serialize, W: Write>(
        &self,
        meta: &Meta,
        rows: &[T],
        writer: W,
    ) -> Result<(), AppError> {
        match self {
            Format::Csv => write_csv(meta, rows, writer),
            Format::Json => write_json(meta, rows, writer),
        }
    }
}

impl std::str::FromStr for Format {
    type Err = AppError;

    fn from_str(s: &str) -> Result<Self, AppError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(AppError::Usage(format!("unknown format '{other}'"))),
        }
    }
}
