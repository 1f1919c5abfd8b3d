//! Field records and reference tables.
//!
//! The data files under `data/` are compiled into the library. Setting
//! `LEOPOLDT_DATA_DIR` to a directory makes the loaders read
//! `quadratic_fields.toml`, `cubic_fields.toml` and `reference_tables.toml`
//! from there instead; every record is validated on load.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::cubic::CubicFieldRecord;
use crate::error::DataError;
use crate::quadratic::QuadFieldRecord;

pub const DATA_DIR_ENV: &str = "LEOPOLDT_DATA_DIR";

pub const QUADRATIC_FILE: &str = "quadratic_fields.toml";
pub const CUBIC_FILE: &str = "cubic_fields.toml";
pub const TABLES_FILE: &str = "reference_tables.toml";

const FORMAT_VERSION: u32 = 1;

const EMBEDDED_QUADRATIC: &str = include_str!("../data/quadratic_fields.toml");
const EMBEDDED_CUBIC: &str = include_str!("../data/cubic_fields.toml");
const EMBEDDED_TABLES: &str = include_str!("../data/reference_tables.toml");

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DataSource {
    Embedded,
    Dir(PathBuf),
}

impl DataSource {
    /// The directory named by `LEOPOLDT_DATA_DIR`, or the embedded copy.
    pub fn from_env() -> Self {
        match std::env::var_os(DATA_DIR_ENV) {
            Some(dir) if !dir.is_empty() => Self::Dir(dir.into()),
            _ => Self::Embedded,
        }
    }

    fn read(&self, name: &str) -> Result<(String, String), DataError> {
        match self {
            Self::Embedded => {
                let text = match name {
                    QUADRATIC_FILE => EMBEDDED_QUADRATIC,
                    CUBIC_FILE => EMBEDDED_CUBIC,
                    _ => EMBEDDED_TABLES,
                };
                Ok((format!("<embedded>/{name}"), text.to_string()))
            }
            Self::Dir(dir) => {
                let path = dir.join(name);
                let label = path.display().to_string();
                std::fs::read_to_string(&path)
                    .map(|text| (label.clone(), text))
                    .map_err(|source| DataError::Io { path: label, source })
            }
        }
    }

    pub fn dir(&self) -> Option<&Path> {
        match self {
            Self::Dir(d) => Some(d),
            Self::Embedded => None,
        }
    }
}

fn parse<T: for<'de> Deserialize<'de>>(path: &str, text: &str) -> Result<T, DataError> {
    toml::from_str(text).map_err(|e| DataError::Parse {
        path: path.to_string(),
        message: e.to_string(),
    })
}

fn invalid(path: &str, message: impl Into<String>) -> DataError {
    DataError::Invalid {
        path: path.to_string(),
        message: message.into(),
    }
}

fn check_version(path: &str, v: u32) -> Result<(), DataError> {
    if v == FORMAT_VERSION {
        Ok(())
    } else {
        Err(invalid(path, format!("unsupported format_version {v}")))
    }
}

fn check_ascending(path: &str, key: &str, primes: &[u64]) -> Result<(), DataError> {
    if primes.windows(2).all(|w| w[0] < w[1]) {
        Ok(())
    } else {
        Err(invalid(path, format!("{key}: primes must be strictly ascending")))
    }
}

// ---------------------------------------------------------------------------
// field records

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QuadFile {
    format_version: u32,
    field: Vec<QuadEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QuadEntry {
    d: i64,
    class_number: u64,
    unit: Option<[i64; 2]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CubicFile {
    format_version: u32,
    field: Vec<CubicEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CubicEntry {
    delta: i64,
    poly: Vec<i64>,
    ramified: Vec<u64>,
    class_number_e: Option<u64>,
    unit: Option<[i64; 3]>,
}

pub fn load_quadratic_fields(src: &DataSource) -> Result<Vec<QuadFieldRecord>, DataError> {
    let (path, text) = src.read(QUADRATIC_FILE)?;
    let file: QuadFile = parse(&path, &text)?;
    check_version(&path, file.format_version)?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(file.field.len());
    for e in file.field {
        if !seen.insert(e.d) {
            return Err(invalid(&path, format!("duplicate record D = {}", e.d)));
        }
        let rec = match e.unit {
            Some([a, b]) => QuadFieldRecord::with_unit(e.d, e.class_number, a, b),
            None => QuadFieldRecord::new(e.d, e.class_number),
        }
        .map_err(|err| invalid(&path, format!("D = {}: {err}", e.d)))?;
        out.push(rec);
    }
    Ok(out)
}

pub fn load_cubic_fields(src: &DataSource) -> Result<Vec<CubicFieldRecord>, DataError> {
    let (path, text) = src.read(CUBIC_FILE)?;
    let file: CubicFile = parse(&path, &text)?;
    check_version(&path, file.format_version)?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(file.field.len());
    for e in file.field {
        if !seen.insert(e.delta) {
            return Err(invalid(&path, format!("duplicate record delta = {}", e.delta)));
        }
        let rec = CubicFieldRecord::new(
            e.delta,
            &e.poly,
            Some(&e.ramified),
            e.class_number_e,
            e.unit,
        )
        .map_err(|err| invalid(&path, format!("delta = {}: {err}", e.delta)))?;
        out.push(rec);
    }
    Ok(out)
}

pub fn quadratic_field(src: &DataSource, d: i64) -> Result<Option<QuadFieldRecord>, DataError> {
    Ok(load_quadratic_fields(src)?.into_iter().find(|r| r.d() == d))
}

pub fn cubic_field(src: &DataSource, delta: i64) -> Result<Option<CubicFieldRecord>, DataError> {
    Ok(load_cubic_fields(src)?.into_iter().find(|r| r.delta() == delta))
}

// ---------------------------------------------------------------------------
// reference tables

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TableId {
    QuadTable,
    H5Table,
    CubicOrdinaryTable,
}

impl TableId {
    pub const ALL: [TableId; 3] = [Self::QuadTable, Self::H5Table, Self::CubicOrdinaryTable];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::QuadTable => "quad_table",
            Self::H5Table => "h5_table",
            Self::CubicOrdinaryTable => "cubic_ordinary_table",
        }
    }
}

impl std::str::FromStr for TableId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("unknown table {s:?}"))
    }
}

impl serde::Serialize for TableId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl std::fmt::Display for TableId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One row of a reference table: a field key (`D` or `Δ`) and the primes
/// printed against it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub key: i64,
    pub primes: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReferenceTable {
    pub id: TableId,
    /// Upper end of the prime range the table was computed over.
    pub pmax: Option<u64>,
    pub rows: Vec<TableRow>,
}

impl ReferenceTable {
    pub fn row(&self, key: i64) -> Option<&TableRow> {
        self.rows.iter().find(|r| r.key == key)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TablesFile {
    format_version: u32,
    quad_table: RawTable<QuadRow>,
    h5_table: RawTable<CubicRow>,
    cubic_ordinary_table: RawTable<CubicRow>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTable<R> {
    pmax: Option<u64>,
    rows: Vec<R>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QuadRow {
    d: i64,
    primes: Vec<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CubicRow {
    delta: i64,
    primes: Vec<u64>,
}

fn build_table(
    path: &str,
    id: TableId,
    pmax: Option<u64>,
    rows: Vec<(i64, Vec<u64>)>,
) -> Result<ReferenceTable, DataError> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(rows.len());
    for (key, primes) in rows {
        if !seen.insert(key) {
            return Err(invalid(path, format!("{id}: duplicate row {key}")));
        }
        check_ascending(path, &format!("{id} row {key}"), &primes)?;
        out.push(TableRow { key, primes });
    }
    Ok(ReferenceTable { id, pmax, rows: out })
}

pub fn load_reference_tables(src: &DataSource) -> Result<Vec<ReferenceTable>, DataError> {
    let (path, text) = src.read(TABLES_FILE)?;
    let file: TablesFile = parse(&path, &text)?;
    check_version(&path, file.format_version)?;
    let quad = file.quad_table.rows.into_iter().map(|r| (r.d, r.primes)).collect();
    let h5 = file.h5_table.rows.into_iter().map(|r| (r.delta, r.primes)).collect();
    let cubic = file
        .cubic_ordinary_table
        .rows
        .into_iter()
        .map(|r| (r.delta, r.primes))
        .collect();
    Ok(vec![
        build_table(&path, TableId::QuadTable, file.quad_table.pmax, quad)?,
        build_table(&path, TableId::H5Table, file.h5_table.pmax, h5)?,
        build_table(
            &path,
            TableId::CubicOrdinaryTable,
            file.cubic_ordinary_table.pmax,
            cubic,
        )?,
    ])
}

pub fn reference_table(src: &DataSource, id: TableId) -> Result<ReferenceTable, DataError> {
    Ok(load_reference_tables(src)?
        .into_iter()
        .find(|t| t.id == id)
        .expect("all tables are loaded"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_data_loads() {
        let quad = load_quadratic_fields(&DataSource::Embedded).unwrap();
        assert_eq!(quad.len(), 18);
        assert!(quad.iter().all(|r| r.d() >= 2 && r.d() <= 30));
        let cubic = load_cubic_fields(&DataSource::Embedded).unwrap();
        assert_eq!(cubic.len(), 14);
        let tables = load_reference_tables(&DataSource::Embedded).unwrap();
        assert_eq!(tables.len(), 3);
        let t3 = &tables[2];
        assert_eq!(t3.pmax, Some(200_000));
        assert_eq!(t3.row(-76).unwrap().primes, vec![125743]);
    }

    #[test]
    fn table_ids_parse() {
        for t in TableId::ALL {
            assert_eq!(t.as_str().parse::<TableId>().unwrap(), t);
        }
        assert!("table_one".parse::<TableId>().is_err());
    }

    #[test]
    fn validation_errors() {
        let dir = tempfile::tempdir().unwrap();
        let src = DataSource::Dir(dir.path().to_path_buf());
        assert!(matches!(load_quadratic_fields(&src), Err(DataError::Io { .. })));

        let write = |body: &str| std::fs::write(dir.path().join(QUADRATIC_FILE), body).unwrap();
        write("format_version = 1\n[[field]]\nd = 4\nclass_number = 1\n");
        assert!(matches!(load_quadratic_fields(&src), Err(DataError::Invalid { .. })));
        write("format_version = 1\n[[field]]\nd = 2\nclass_number = 1\nunit = [2, 1]\n");
        assert!(matches!(load_quadratic_fields(&src), Err(DataError::Invalid { .. })));
        write("format_version = 1\n[[field]]\nd = 2\nclass_numbr = 1\n");
        assert!(matches!(load_quadratic_fields(&src), Err(DataError::Parse { .. })));
        write("format_version = 2\nfield = []\n");
        assert!(matches!(load_quadratic_fields(&src), Err(DataError::Invalid { .. })));

        std::fs::write(
            dir.path().join(CUBIC_FILE),
            "format_version = 1\n[[field]]\ndelta = -23\npoly = [1, 0, -1, -1]\nramified = [3]\n",
        )
        .unwrap();
        assert!(matches!(load_cubic_fields(&src), Err(DataError::Invalid { .. })));
    }
}
