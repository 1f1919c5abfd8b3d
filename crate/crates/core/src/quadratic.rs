//! Real quadratic fields: fundamental units from continued fractions and the
//! unit congruence `ε^(p²−1) ≡ 1 (mod p²)` that detects a nonvanishing
//! mod-p obstruction group.

use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{FieldError, Rejection, ScanError};
use crate::primes::{isqrt, PrimeRange};
use crate::report::{ExclusionReason, ReportMetadata, ScanReport, TOOL_VERSION};
use crate::ring::{Modulus, OrderSpec, QuotientRing};
use crate::scan::{run_verdicts, verdict_from, ScanOptions};

/// Smallest prime the quadratic scan considers.
pub const MIN_SCAN_PRIME: u64 = 3;

/// Integral basis of the maximal order: `ω = √D` or `ω = (1+√D)/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisKind {
    Sqrt,
    Half,
}

impl BasisKind {
    pub fn for_d(d: i64) -> Self {
        if d.rem_euclid(4) == 1 {
            BasisKind::Half
        } else {
            BasisKind::Sqrt
        }
    }

    /// Trace of `ω`.
    fn trace(self) -> i64 {
        match self {
            BasisKind::Sqrt => 0,
            BasisKind::Half => 1,
        }
    }
}

/// A unit `a + bω`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadUnit {
    pub a: BigInt,
    pub b: BigInt,
    pub norm_sign: i8,
}

/// `N(a + bω)`.
pub fn quad_norm(d: i64, basis: BasisKind, a: &BigInt, b: &BigInt) -> BigInt {
    match basis {
        BasisKind::Sqrt => a * a - BigInt::from(d) * b * b,
        BasisKind::Half => a * a + a * b - BigInt::from((d - 1) / 4) * b * b,
    }
}

pub fn is_squarefree(n: i64) -> bool {
    let n = n.unsigned_abs();
    if n == 0 {
        return false;
    }
    let mut d = 2u64;
    let mut m = n;
    while d * d <= m {
        if m % d == 0 {
            m /= d;
            if m % d == 0 {
                return false;
            }
        }
        d += 1;
    }
    true
}

impl QuadUnit {
    fn from_coeffs(d: i64, basis: BasisKind, a: BigInt, b: BigInt) -> Result<Self, FieldError> {
        if b.is_zero() {
            return Err(FieldError::TrivialUnit);
        }
        let n = quad_norm(d, basis, &a, &b);
        let norm_sign = if n.is_one() {
            1
        } else if n == -BigInt::one() {
            -1
        } else {
            return Err(FieldError::NotAUnit(format!("{a} + {b}ω"), n.to_string()));
        };
        Ok(Self { a, b, norm_sign })
    }
}

/// Fundamental unit of `Z[ω]` for squarefree `D ≥ 2`.
///
/// Runs the `(P, Q)` recurrence for the complete quotients
/// `(P + √D)/Q` of `ω`. The expansion is purely periodic from the first
/// partial quotient on; with period length `l` and convergents `h/k`, the
/// unit is `h_{l−1} − k_{l−1}·ω'`, which on the basis `1, ω` reads
/// `(h − k·tr ω) + k·ω`.
pub fn fundamental_unit_quadratic(d: i64) -> Result<QuadUnit, FieldError> {
    if d < 2 {
        return Err(FieldError::BadQuadraticD(d));
    }
    if !is_squarefree(d) {
        return Err(FieldError::NotSquarefree(d));
    }
    let basis = BasisKind::for_d(d);
    let s = isqrt(d as u64) as i64;
    let (p0, q0) = match basis {
        BasisKind::Sqrt => (0i64, 1i64),
        BasisKind::Half => (1, 2),
    };

    let a0 = (p0 + s).div_euclid(q0);
    // convergents h_j / k_j, starting from h_{-1} = 1, k_{-1} = 0
    let (mut h_prev, mut k_prev) = (BigInt::one(), BigInt::zero());
    let (mut h, mut k) = (BigInt::from(a0), BigInt::one());

    let p1 = a0 * q0 - p0;
    let q1 = (d - p1 * p1) / q0;
    let (mut pj, mut qj) = (p1, q1);
    loop {
        let aj = (pj + s) / qj;
        let p_next = aj * qj - pj;
        let q_next = (d - p_next * p_next) / qj;
        if (p_next, q_next) == (p1, q1) {
            break;
        }
        let h_next = BigInt::from(aj) * &h + &h_prev;
        let k_next = BigInt::from(aj) * &k + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
        pj = p_next;
        qj = q_next;
    }

    let a = &h - &k * basis.trace();
    QuadUnit::from_coeffs(d, basis, a, k)
}

/// Per-field data for the quadratic scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadFieldRecord {
    d: i64,
    basis: BasisKind,
    field_disc: i64,
    class_number: u64,
    unit: QuadUnit,
}

impl QuadFieldRecord {
    /// Record with the unit computed from the continued fraction of `ω`.
    pub fn new(d: i64, class_number: u64) -> Result<Self, FieldError> {
        let unit = fundamental_unit_quadratic(d)?;
        Self::assemble(d, class_number, unit)
    }

    /// Record with an explicitly supplied unit `a + bω`, checked to have
    /// norm ±1.
    pub fn with_unit(d: i64, class_number: u64, a: i64, b: i64) -> Result<Self, FieldError> {
        if d < 2 {
            return Err(FieldError::BadQuadraticD(d));
        }
        if !is_squarefree(d) {
            return Err(FieldError::NotSquarefree(d));
        }
        let unit = QuadUnit::from_coeffs(d, BasisKind::for_d(d), a.into(), b.into())?;
        Self::assemble(d, class_number, unit)
    }

    fn assemble(d: i64, class_number: u64, unit: QuadUnit) -> Result<Self, FieldError> {
        if class_number == 0 {
            return Err(FieldError::BadClassNumber);
        }
        let basis = BasisKind::for_d(d);
        let field_disc = match basis {
            BasisKind::Sqrt => 4 * d,
            BasisKind::Half => d,
        };
        Ok(Self {
            d,
            basis,
            field_disc,
            class_number,
            unit,
        })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn basis(&self) -> BasisKind {
        self.basis
    }

    pub fn field_disc(&self) -> i64 {
        self.field_disc
    }

    pub fn class_number(&self) -> u64 {
        self.class_number
    }

    pub fn unit(&self) -> &QuadUnit {
        &self.unit
    }

    pub fn field_id(&self) -> String {
        format!("D={}", self.d)
    }

    /// Minimal polynomial of `ω`: `x² − D` or `x² − x − (D−1)/4`.
    pub fn spec(&self) -> OrderSpec {
        match self.basis {
            BasisKind::Sqrt => OrderSpec::quadratic(-self.d, 0),
            BasisKind::Half => OrderSpec::quadratic(-(self.d - 1) / 4, -1),
        }
    }

    /// First failing precondition of the unit test at `p`, if any.
    pub fn exclusion(&self, p: u64) -> Option<ExclusionReason> {
        if p < MIN_SCAN_PRIME {
            Some(ExclusionReason::BelowMinP)
        } else if self.field_disc % p as i64 == 0 {
            Some(ExclusionReason::Ramified)
        } else if self.class_number % p == 0 {
            Some(ExclusionReason::DividesClassNumber)
        } else {
            None
        }
    }

    /// `ε` reduced into `Z[ω]/m`.
    pub fn unit_in(&self, ring: &QuotientRing) -> crate::ring::OrderElem {
        let m = BigInt::from(ring.modulus().m());
        let a = self.unit.a.mod_floor(&m).to_u64().expect("reduced");
        let b = self.unit.b.mod_floor(&m).to_u64().expect("reduced");
        ring.elem_from_residues(&[a, b]).expect("degree 2")
    }
}

/// True exactly when `ε^(p²−1) ≡ 1 (mod p²)`.
pub fn quad_unit_test(rec: &QuadFieldRecord, p: u64) -> Result<bool, Rejection> {
    if let Some(reason) = rec.exclusion(p) {
        return Err(Rejection::Excluded { p, reason });
    }
    let ring = QuotientRing::new(&rec.spec(), Modulus::new(p, 2)?);
    let eps = rec.unit_in(&ring);
    let e = p as u128 * p as u128 - 1;
    Ok(ring.pow(&eps, e).is_one())
}

pub fn scan_quadratic(
    rec: &QuadFieldRecord,
    range: PrimeRange,
    opts: &ScanOptions,
) -> Result<ScanReport, ScanError> {
    let start = Instant::now();
    let verdicts = run_verdicts(range, opts, |p| {
        let outcome = quad_unit_test(rec, p).map(|hit| hit.then(Vec::new));
        verdict_from(p, outcome).map(Some)
    })?;
    let metadata = ReportMetadata {
        tool_version: TOOL_VERSION.to_string(),
        field_id: rec.field_id(),
        range,
        mode: "quad_unit".to_string(),
        wall_time_ms: start.elapsed().as_millis() as u64,
        workers: opts.workers,
        warnings: Vec::new(),
    };
    Ok(ScanReport::assemble(metadata, verdicts, opts.full_verdicts))
}
