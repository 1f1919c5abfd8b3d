//! Scan verdicts, aggregated reports and their serializations.
//!
//! CSV column order is fixed: `field,p,mode,aux`, where `aux` holds the
//! auxiliary residues of a hit (the z-coefficients for cubic scans)
//! separated by `;`. The JSON form carries the full metadata.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::primes::PrimeRange;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExclusionReason {
    BelowMinP,
    Ramified,
    DividesClassNumber,
    #[serde(rename = "hyp1_divides_6")]
    Hyp1DividesSix,
    Hyp2Ramified,
    Hyp3ClassNumber,
    Hyp4Even,
    #[serde(rename = "hyp5_in_H5")]
    Hyp5InH5,
    #[serde(rename = "frobenius_order_not_3")]
    FrobeniusOrderNot3,
    #[serde(rename = "residue_2_mod_3")]
    ResidueTwoModThree,
    ZeroZ,
}

impl ExclusionReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::BelowMinP => "below_min_p",
            Self::Ramified => "ramified",
            Self::DividesClassNumber => "divides_class_number",
            Self::Hyp1DividesSix => "hyp1_divides_6",
            Self::Hyp2Ramified => "hyp2_ramified",
            Self::Hyp3ClassNumber => "hyp3_class_number",
            Self::Hyp4Even => "hyp4_even",
            Self::Hyp5InH5 => "hyp5_in_H5",
            Self::FrobeniusOrderNot3 => "frobenius_order_not_3",
            Self::ResidueTwoModThree => "residue_2_mod_3",
            Self::ZeroZ => "zero_z",
        }
    }
}

impl std::fmt::Display for ExclusionReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Status {
    Hit { aux: Vec<u64> },
    Clear,
    Excluded { reason: ExclusionReason },
}

/// Outcome for a single prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanVerdict {
    pub p: u64,
    #[serde(flatten)]
    pub status: Status,
}

impl ScanVerdict {
    pub fn hit(p: u64, aux: Vec<u64>) -> Self {
        Self {
            p,
            status: Status::Hit { aux },
        }
    }

    pub fn clear(p: u64) -> Self {
        Self {
            p,
            status: Status::Clear,
        }
    }

    pub fn excluded(p: u64, reason: ExclusionReason) -> Self {
        Self {
            p,
            status: Status::Excluded { reason },
        }
    }

    pub fn is_hit(&self) -> bool {
        matches!(self.status, Status::Hit { .. })
    }

    pub fn is_excluded(&self) -> bool {
        matches!(self.status, Status::Excluded { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hit {
    pub p: u64,
    pub aux: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Excluded {
    pub p: u64,
    pub reason: ExclusionReason,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub tool_version: String,
    pub field_id: String,
    pub range: PrimeRange,
    pub mode: String,
    pub wall_time_ms: u64,
    pub workers: usize,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub metadata: ReportMetadata,
    pub hits: Vec<Hit>,
    pub excluded: Option<Vec<Excluded>>,
    pub clear_count: u64,
    pub checksum: String,
}

// Only the scan content enters the checksum; timing and worker count do not.
#[derive(Serialize)]
struct Canonical<'a> {
    field_id: &'a str,
    range: &'a PrimeRange,
    mode: &'a str,
    hits: &'a [Hit],
    excluded: &'a Option<Vec<Excluded>>,
    clear_count: u64,
}

impl ScanReport {
    /// Builds a report from verdicts that are already in ascending order.
    pub fn assemble(metadata: ReportMetadata, verdicts: Vec<ScanVerdict>, full: bool) -> Self {
        let mut hits = Vec::new();
        let mut excluded = Vec::new();
        let mut clear_count = 0;
        for v in verdicts {
            match v.status {
                Status::Hit { aux } => hits.push(Hit { p: v.p, aux }),
                Status::Clear => clear_count += 1,
                Status::Excluded { reason } => excluded.push(Excluded { p: v.p, reason }),
            }
        }
        debug_assert!(hits.windows(2).all(|w| w[0].p < w[1].p));
        let mut report = Self {
            metadata,
            hits,
            excluded: full.then_some(excluded),
            clear_count,
            checksum: String::new(),
        };
        report.checksum = report.compute_checksum();
        report
    }

    pub fn compute_checksum(&self) -> String {
        let canonical = Canonical {
            field_id: &self.metadata.field_id,
            range: &self.metadata.range,
            mode: &self.metadata.mode,
            hits: &self.hits,
            excluded: &self.excluded,
            clear_count: self.clear_count,
        };
        let bytes = serde_json::to_vec(&canonical).expect("canonical form serializes");
        hex::encode(Sha256::digest(bytes))
    }

    pub fn hit_primes(&self) -> Vec<u64> {
        self.hits.iter().map(|h| h.p).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub const CSV_HEADER: &'static str = "field,p,mode,aux";

    /// One line per hit, without the header.
    pub fn csv_rows(&self) -> String {
        let mut out = String::new();
        for h in &self.hits {
            let aux: Vec<String> = h.aux.iter().map(u64::to_string).collect();
            let _ = writeln!(
                out,
                "{},{},{},{}",
                self.metadata.field_id,
                h.p,
                self.metadata.mode,
                aux.join(";")
            );
        }
        out
    }

    pub fn to_csv(&self) -> String {
        format!("{}\n{}", Self::CSV_HEADER, self.csv_rows())
    }
}
