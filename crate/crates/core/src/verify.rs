//! Recomputes the reference tables and diffs them against the shipped data.

use std::fmt;

use serde::Serialize;

use crate::cubic::{
    ordinary_from_z, ordinary_test, scan_cubic, z_for_unit, CubicFieldRecord, CubicMode,
};
use crate::data::{
    load_cubic_fields, load_quadratic_fields, reference_table, DataSource, ReferenceTable, TableId,
};
use crate::error::{DataError, Rejection, ScanError};
use crate::primes::PrimeRange;
use crate::quadratic::{quad_unit_test, scan_quadratic, QuadFieldRecord};
use crate::report::ExclusionReason;
use crate::ring::frobenius_order;
use crate::scan::ScanOptions;

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Scan(#[from] ScanError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DiffKind {
    /// Printed, not found. `reason` is set when the prime was excluded
    /// rather than tested; `unfiltered_hit` tells whether the bare
    /// criterion would have flagged it.
    Missing {
        reason: Option<ExclusionReason>,
        unfiltered_hit: Option<bool>,
    },
    /// Found, not printed.
    Extra,
    /// Printed, but outside the scan by construction (quadratic `p < 3`).
    ExcludedByDesign { reason: ExclusionReason },
    /// Printed, but above the requested `pmax`.
    OutOfRange,
    /// No field record for this row.
    NoRecord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiffEntry {
    pub key: i64,
    /// Absent for `NoRecord`.
    pub p: Option<u64>,
    #[serde(flatten)]
    pub kind: DiffKind,
}

impl DiffEntry {
    pub fn is_failure(&self) -> bool {
        !matches!(
            self.kind,
            DiffKind::ExcludedByDesign { .. } | DiffKind::OutOfRange
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableDiff {
    pub table: TableId,
    pub pmax: Option<u64>,
    pub rows_checked: usize,
    pub entries: Vec<DiffEntry>,
}

impl TableDiff {
    /// True when every entry is a documented, by-design difference.
    pub fn is_pass(&self) -> bool {
        self.entries.iter().all(|e| !e.is_failure())
    }

    pub fn failures(&self) -> impl Iterator<Item = &DiffEntry> {
        self.entries.iter().filter(|e| e.is_failure())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("diff serializes")
    }
}

fn key_label(table: TableId, key: i64) -> String {
    match table {
        TableId::QuadTable => format!("D={key}"),
        _ => format!("Delta={key}"),
    }
}

impl fmt::Display for TableDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.is_pass() { "PASS" } else { "FAIL" };
        write!(f, "{}: {} ({} rows", self.table, verdict, self.rows_checked)?;
        if let Some(pmax) = self.pmax {
            write!(f, ", pmax {pmax}")?;
        }
        writeln!(f, ")")?;
        for e in &self.entries {
            let key = key_label(self.table, e.key);
            let p = e.p.map(|p| format!(" p={p}")).unwrap_or_default();
            let what = match &e.kind {
                DiffKind::Missing {
                    reason,
                    unfiltered_hit,
                } => {
                    let mut s = "missing".to_string();
                    if let Some(r) = reason {
                        s += &format!(", excluded: {r}");
                    }
                    match unfiltered_hit {
                        Some(true) => s += ", criterion holds without the filter",
                        Some(false) => s += ", criterion fails even without the filter",
                        None => {}
                    }
                    s
                }
                DiffKind::Extra => "extra".to_string(),
                DiffKind::ExcludedByDesign { reason } => format!("excluded-by-design ({reason})"),
                DiffKind::OutOfRange => "beyond pmax, not checked".to_string(),
                DiffKind::NoRecord => "no field record".to_string(),
            };
            writeln!(f, "  {key}{p}: {what}")?;
        }
        Ok(())
    }
}

/// Diffs one reference table against a fresh computation. `pmax` defaults
/// to the range the table was computed over.
pub fn verify_tables(
    which: TableId,
    pmax: Option<u64>,
    opts: &ScanOptions,
    src: &DataSource,
) -> Result<TableDiff, VerifyError> {
    let table = reference_table(src, which)?;
    let pmax = pmax.or(table.pmax);
    match which {
        TableId::QuadTable => verify_quad(&table, pmax.unwrap_or(10_000), opts, src),
        TableId::H5Table => verify_h5(&table, src),
        TableId::CubicOrdinaryTable => verify_cubic(&table, pmax.unwrap_or(200_000), opts, src),
    }
}

// Merges expected and found prime lists into diff entries.
fn diff_row(
    key: i64,
    expected: &[u64],
    found: &[u64],
    pmax: Option<u64>,
    explain: impl Fn(u64) -> DiffKind,
) -> Vec<DiffEntry> {
    let mut out = Vec::new();
    for &p in expected {
        if found.contains(&p) {
            continue;
        }
        let kind = if pmax.is_some_and(|m| p > m) {
            DiffKind::OutOfRange
        } else {
            explain(p)
        };
        out.push(DiffEntry {
            key,
            p: Some(p),
            kind,
        });
    }
    for &p in found {
        if !expected.contains(&p) {
            out.push(DiffEntry {
                key,
                p: Some(p),
                kind: DiffKind::Extra,
            });
        }
    }
    out.sort_by_key(|e| e.p);
    out
}

fn no_record(key: i64) -> DiffEntry {
    DiffEntry {
        key,
        p: None,
        kind: DiffKind::NoRecord,
    }
}

fn explain_quad(rec: &QuadFieldRecord, p: u64) -> DiffKind {
    match rec.exclusion(p) {
        Some(reason @ ExclusionReason::BelowMinP) => DiffKind::ExcludedByDesign { reason },
        Some(reason) => DiffKind::Missing {
            reason: Some(reason),
            unfiltered_hit: None,
        },
        None => DiffKind::Missing {
            reason: None,
            unfiltered_hit: quad_unit_test(rec, p).ok(),
        },
    }
}

fn verify_quad(
    table: &ReferenceTable,
    pmax: u64,
    opts: &ScanOptions,
    src: &DataSource,
) -> Result<TableDiff, VerifyError> {
    let fields = load_quadratic_fields(src)?;
    // the published range is 1 < p < pmax
    let range = PrimeRange::new(2, pmax.saturating_sub(1).max(2)).map_err(ScanError::from)?;
    let mut entries = Vec::new();
    for row in &table.rows {
        let Some(rec) = fields.iter().find(|r| r.d() == row.key) else {
            entries.push(no_record(row.key));
            continue;
        };
        let found = scan_quadratic(rec, range, opts)?.hit_primes();
        entries.extend(diff_row(row.key, &row.primes, &found, Some(range.hi()), |p| {
            explain_quad(rec, p)
        }));
    }
    Ok(TableDiff {
        table: table.id,
        pmax: Some(pmax),
        rows_checked: table.rows.len(),
        entries,
    })
}

fn verify_h5(table: &ReferenceTable, src: &DataSource) -> Result<TableDiff, VerifyError> {
    let fields = load_cubic_fields(src)?;
    let mut entries = Vec::new();
    for row in &table.rows {
        let Some(rec) = fields.iter().find(|r| r.delta() == row.key) else {
            entries.push(no_record(row.key));
            continue;
        };
        let found: Vec<u64> = rec.h5().reduced.iter().copied().collect();
        entries.extend(diff_row(row.key, &row.primes, &found, None, |_| {
            DiffKind::Missing {
                reason: None,
                unfiltered_hit: None,
            }
        }));
    }
    Ok(TableDiff {
        table: table.id,
        pmax: None,
        rows_checked: table.rows.len(),
        entries,
    })
}

/// Whether the bare ordinarity criterion holds at `p`, ignoring the
/// hypothesis filter. `None` when the criterion does not apply.
fn ordinary_unfiltered(rec: &CubicFieldRecord, p: u64) -> Option<bool> {
    if p < 5 || p % 3 != 1 || rec.delta().unsigned_abs() % p == 0 {
        return None;
    }
    if frobenius_order(rec.spec(), p).ok()? != 3 {
        return None;
    }
    let z = z_for_unit(rec.spec(), &rec.unit().triple, p).ok()?;
    if z.is_zero() {
        return Some(false);
    }
    ordinary_from_z(rec.spec(), &z).ok()
}

fn explain_cubic(rec: &CubicFieldRecord, p: u64) -> DiffKind {
    let reason = match ordinary_test(rec, p) {
        Err(Rejection::Excluded { reason, .. }) => Some(reason),
        _ => None,
    };
    DiffKind::Missing {
        reason,
        unfiltered_hit: ordinary_unfiltered(rec, p),
    }
}

fn verify_cubic(
    table: &ReferenceTable,
    pmax: u64,
    opts: &ScanOptions,
    src: &DataSource,
) -> Result<TableDiff, VerifyError> {
    let fields = load_cubic_fields(src)?;
    let range = PrimeRange::new(2, pmax.max(2)).map_err(ScanError::from)?;
    let mut entries = Vec::new();
    for row in &table.rows {
        let Some(rec) = fields.iter().find(|r| r.delta() == row.key) else {
            entries.push(no_record(row.key));
            continue;
        };
        let found = scan_cubic(rec, range, CubicMode::Ordinary, opts)?.hit_primes();
        entries.extend(diff_row(row.key, &row.primes, &found, Some(pmax), |p| {
            explain_cubic(rec, p)
        }));
    }
    Ok(TableDiff {
        table: table.id,
        pmax: Some(pmax),
        rows_checked: table.rows.len(),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h5_table_has_empty_diff() {
        let d = verify_tables(TableId::H5Table, None, &ScanOptions::serial(), &DataSource::Embedded)
            .unwrap();
        assert!(d.entries.is_empty(), "{d}");
        assert_eq!(d.rows_checked, 14);
    }

    #[test]
    fn small_cubic_range_marks_large_entries_out_of_range() {
        let d = verify_tables(
            TableId::CubicOrdinaryTable,
            Some(3000),
            &ScanOptions::with_workers(2),
            &DataSource::Embedded,
        )
        .unwrap();
        let beyond: Vec<_> = d
            .entries
            .iter()
            .filter(|e| e.kind == DiffKind::OutOfRange)
            .map(|e| (e.key, e.p.unwrap()))
            .collect();
        assert_eq!(beyond, vec![(-76, 125743), (-104, 12697), (-108, 3511)]);
        // everything the scan finds below 3000 is printed
        assert!(d.entries.iter().all(|e| e.kind != DiffKind::Extra), "{d}");
    }

    #[test]
    fn display_lists_entries() {
        let d = TableDiff {
            table: TableId::QuadTable,
            pmax: Some(100),
            rows_checked: 1,
            entries: vec![DiffEntry {
                key: 14,
                p: Some(2),
                kind: DiffKind::ExcludedByDesign {
                    reason: ExclusionReason::BelowMinP,
                },
            }],
        };
        assert!(d.is_pass());
        let s = d.to_string();
        assert!(s.starts_with("quad_table: PASS"));
        assert!(s.contains("D=14 p=2: excluded-by-design (below_min_p)"));
        assert!(d.to_json().contains("\"kind\": \"excluded_by_design\""));
    }
}
