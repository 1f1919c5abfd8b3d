//! Complex cubic fields and the S₃ scans.
//!
//! For an inert prime `p` the quotient `O_K/p` is the field `F_{p³}`, so the
//! fundamental unit satisfies `ε^(p³−1) ≡ 1 (mod p)`. Writing
//! `ε^(p³−1) = 1 + z·p (mod p²)` defines `z ∈ O_K/p`. The obstruction group
//! vanishes exactly when `z ≠ 0`, and for `p ≡ 1 (mod 3)` the ordinary
//! Selmer condition is non-trivial exactly when `z^(3(p−1)) = 1`.

use std::collections::BTreeSet;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{FieldError, Rejection, RingError, ScanError};
use crate::primes::PrimeRange;
use crate::report::{ExclusionReason, ReportMetadata, ScanReport, TOOL_VERSION};
use crate::ring::{frobenius_order, Modulus, OrderElem, OrderSpec, QuotientRing};
use crate::scan::{run_verdicts, verdict_from, ScanOptions};

/// Coefficient box used when no explicit bound is requested.
pub const DEFAULT_UNIT_BOUND: i64 = 8;

// largest box the exhaustive certificate may grow to
const MAX_CERTIFY_BOUND: i64 = 60;

/// `a + bθ + cθ²` as `[a, b, c]`.
pub type UnitTriple = [i64; 3];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    /// Too small to be a proper power, by Artin's lower bound on the
    /// fundamental unit of a complex cubic field.
    Artin,
    /// Every unit smaller than the candidate would lie in a searched box.
    Exhaustive,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CertifiedUnit {
    pub triple: UnitTriple,
    /// Image under the real embedding; always `> 1`.
    pub real_value: f64,
    pub norm: i64,
    pub certificate: Certificate,
}

// ---------------------------------------------------------------------------
// exact arithmetic in Z[θ]

fn int_mul(spec: &OrderSpec, x: &[i128; 3], y: &[i128; 3]) -> [i128; 3] {
    let c = spec.low_coeffs();
    let (c0, c1, c2) = (c[0] as i128, c[1] as i128, c[2] as i128);
    let mut r = [0i128; 5];
    for i in 0..3 {
        for j in 0..3 {
            r[i + j] += x[i] * y[j];
        }
    }
    for k in [4usize, 3] {
        let t = r[k];
        r[k] = 0;
        r[k - 1] -= c2 * t;
        r[k - 2] -= c1 * t;
        r[k - 3] -= c0 * t;
    }
    [r[0], r[1], r[2]]
}

/// Matrix of multiplication by `g` on the basis `1, θ, θ²` (columns are
/// `g`, `gθ`, `gθ²`).
fn mult_matrix(spec: &OrderSpec, g: &UnitTriple) -> [[i128; 3]; 3] {
    let g = [g[0] as i128, g[1] as i128, g[2] as i128];
    let mut cols = [[0i128; 3]; 3];
    let mut basis = [1i128, 0, 0];
    for col in cols.iter_mut() {
        *col = int_mul(spec, &g, &basis);
        basis = int_mul(spec, &basis, &[0, 1, 0]);
    }
    // transpose to row-major
    let mut m = [[0i128; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = cols[j][i];
        }
    }
    m
}

fn det3(m: &[[i128; 3]; 3]) -> i128 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// `N(a + bθ + cθ²)`, i.e. `Res(f, a + bx + cx²)` for monic `f`.
pub fn cubic_norm(spec: &OrderSpec, g: &UnitTriple) -> i128 {
    det3(&mult_matrix(spec, g))
}

/// Inverse of a unit in `Z[θ]`, from the adjugate of its multiplication
/// matrix. Returns `None` when the norm is not ±1.
pub fn unit_inverse(spec: &OrderSpec, g: &UnitTriple) -> Option<UnitTriple> {
    let m = mult_matrix(spec, g);
    let det = det3(&m);
    if det.abs() != 1 {
        return None;
    }
    // first column of adj(m) solves m·v = e0 up to the determinant
    let v = [
        m[1][1] * m[2][2] - m[1][2] * m[2][1],
        -(m[1][0] * m[2][2] - m[1][2] * m[2][0]),
        m[1][0] * m[2][1] - m[1][1] * m[2][0],
    ];
    Some([
        (v[0] * det) as i64,
        (v[1] * det) as i64,
        (v[2] * det) as i64,
    ])
}

// ---------------------------------------------------------------------------
// embeddings

/// The unique real root of a cubic with negative discriminant.
pub fn real_root(spec: &OrderSpec) -> f64 {
    let f = |x: f64| spec.coeffs().iter().fold(0.0, |acc, &c| acc * x + c as f64);
    let bound = 1.0 + spec.low_coeffs().iter().map(|c| c.abs() as f64).fold(0.0, f64::max);
    let (mut lo, mut hi) = (-bound, bound);
    // f(−B) < 0 < f(B) for monic odd degree
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Real root followed by the complex-conjugate pair.
fn embeddings(spec: &OrderSpec) -> [Complex64; 3] {
    let r = real_root(spec);
    let c = spec.low_coeffs();
    // f(x) = (x − r)(x² + s·x + t)
    let s = c[2] as f64 + r;
    let t = c[1] as f64 + r * s;
    let disc = s * s - 4.0 * t;
    let im = (-disc).max(0.0).sqrt() / 2.0;
    [
        Complex64::new(r, 0.0),
        Complex64::new(-s / 2.0, im),
        Complex64::new(-s / 2.0, -im),
    ]
}

fn eval_real(triple: &UnitTriple, r: f64) -> f64 {
    triple[0] as f64 + triple[1] as f64 * r + triple[2] as f64 * r * r
}

/// Bound on the coefficients of any unit whose real image lies in `(1, u]`.
/// Its complex images then have modulus `u^(−1/2) < 1`; the coefficients
/// come back through the inverse Vandermonde matrix of the embeddings.
fn coefficient_bound(spec: &OrderSpec, u: f64) -> i64 {
    let roots = embeddings(spec);
    let v: Vec<[Complex64; 3]> = roots
        .iter()
        .map(|&r| [Complex64::new(1.0, 0.0), r, r * r])
        .collect();
    let det = v[0][0] * (v[1][1] * v[2][2] - v[1][2] * v[2][1])
        - v[0][1] * (v[1][0] * v[2][2] - v[1][2] * v[2][0])
        + v[0][2] * (v[1][0] * v[2][1] - v[1][1] * v[2][0]);
    let cof = |i: usize, j: usize| {
        let rows: Vec<usize> = (0..3).filter(|&k| k != i).collect();
        let cols: Vec<usize> = (0..3).filter(|&k| k != j).collect();
        let minor = v[rows[0]][cols[0]] * v[rows[1]][cols[1]]
            - v[rows[0]][cols[1]] * v[rows[1]][cols[0]];
        if (i + j) % 2 == 0 {
            minor
        } else {
            -minor
        }
    };
    let mut bound: f64 = 0.0;
    for j in 0..3 {
        // row j of V⁻¹ is column j of the cofactor matrix over det
        let w: Vec<f64> = (0..3).map(|i| (cof(i, j) / det).norm()).collect();
        bound = bound.max(w[0] * u + w[1] + w[2]);
    }
    bound.ceil() as i64 + 1
}

/// Smallest unit `> 1` in the box `|a|, |b|, |c| ≤ bound`, ordered by
/// `|log|u||`.
fn search_box(spec: &OrderSpec, bound: i64) -> Option<(UnitTriple, f64)> {
    let r = real_root(spec);
    let mut best: Option<(UnitTriple, f64)> = None;
    for a in -bound..=bound {
        for b in -bound..=bound {
            for c in -bound..=bound {
                if b == 0 && c == 0 {
                    continue;
                }
                let t = [a, b, c];
                if cubic_norm(spec, &t).abs() != 1 {
                    continue;
                }
                let size = eval_real(&t, r).abs().ln().abs();
                if size < 1e-9 {
                    continue;
                }
                if best.is_none_or(|(_, s)| size < s - 1e-12) {
                    best = Some((t, size));
                }
            }
        }
    }
    best
}

fn normalize(spec: &OrderSpec, t: UnitTriple) -> UnitTriple {
    let r = real_root(spec);
    let mut t = t;
    if eval_real(&t, r) < 0.0 {
        t = [-t[0], -t[1], -t[2]];
    }
    if eval_real(&t, r) < 1.0 {
        t = unit_inverse(spec, &t).expect("unit");
    }
    t
}

/// Searches for the fundamental unit of `Z[θ]` for a complex cubic `θ`, and
/// certifies it.
pub fn find_fundamental_unit(spec: &OrderSpec, coeff_bound: i64) -> Result<CertifiedUnit, FieldError> {
    if spec.degree() != 3 {
        return Err(RingError::UnsupportedDegree(spec.degree()).into());
    }
    let delta = spec.discriminant();
    if delta >= 0 {
        return Err(FieldError::NotComplexCubic(delta));
    }
    let (found, _) = search_box(spec, coeff_bound).ok_or(FieldError::UnitNotFound(coeff_bound))?;
    let mut triple = normalize(spec, found);
    let r = real_root(spec);
    let mut value = eval_real(&triple, r);

    let artin = (delta.unsigned_abs() as f64 - 24.0) / 4.0;
    let certificate = if artin > 0.0 && value < artin.powf(2.0 / 3.0) {
        Certificate::Artin
    } else {
        let mut searched = coeff_bound;
        loop {
            let needed = coefficient_bound(spec, value);
            if needed <= searched {
                break;
            }
            if needed > MAX_CERTIFY_BOUND {
                return Err(FieldError::UnitNotFound(needed));
            }
            let (t, _) = search_box(spec, needed).expect("box contains the current unit");
            triple = normalize(spec, t);
            value = eval_real(&triple, r);
            searched = needed;
        }
        Certificate::Exhaustive
    };
    Ok(CertifiedUnit {
        triple,
        real_value: value,
        norm: cubic_norm(spec, &triple) as i64,
        certificate,
    })
}

// ---------------------------------------------------------------------------
// field records and hypotheses

/// Distinct prime divisors of `n`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Primes dividing `l² − 1` for some `l` in the ramified set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H5Set {
    pub raw: BTreeSet<u64>,
    /// `raw` without 2 and 3, the form in which the sets are usually listed.
    pub reduced: BTreeSet<u64>,
}

pub fn h5_set(ramified: &[u64]) -> H5Set {
    let mut raw = BTreeSet::new();
    for &l in ramified {
        // l² − 1 = (l − 1)(l + 1)
        raw.extend(prime_factors(l - 1));
        raw.extend(prime_factors(l + 1));
    }
    let reduced = raw.iter().copied().filter(|&p| p > 3).collect();
    H5Set { raw, reduced }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CubicFieldRecord {
    delta: i64,
    spec: OrderSpec,
    ramified: Vec<u64>,
    class_number_e: Option<u64>,
    unit: CertifiedUnit,
    h5: H5Set,
}

impl CubicFieldRecord {
    /// Validates the polynomial against `delta` and computes a certified
    /// fundamental unit. An explicit `unit` must generate the same unit
    /// group; it is then normalized to its representative `> 1`.
    pub fn new(
        delta: i64,
        poly: &[i64],
        ramified: Option<&[u64]>,
        class_number_e: Option<u64>,
        unit: Option<UnitTriple>,
    ) -> Result<Self, FieldError> {
        if delta >= 0 {
            return Err(FieldError::NotComplexCubic(delta));
        }
        let spec = OrderSpec::from_coeffs(poly)?.expect_discriminant(delta)?;
        if spec.degree() != 3 {
            return Err(RingError::UnsupportedDegree(spec.degree()).into());
        }
        let actual = prime_factors(delta.unsigned_abs());
        if let Some(given) = ramified {
            let mut given = given.to_vec();
            given.sort_unstable();
            given.dedup();
            if given != actual {
                return Err(FieldError::RamifiedSetMismatch { given, actual });
            }
        }
        if class_number_e == Some(0) {
            return Err(FieldError::BadClassNumber);
        }
        let certified = find_fundamental_unit(&spec, DEFAULT_UNIT_BOUND)?;
        if let Some(t) = unit {
            let n = cubic_norm(&spec, &t);
            if n.abs() != 1 {
                return Err(FieldError::NotAUnit(format!("{t:?}"), n.to_string()));
            }
            if t[1] == 0 && t[2] == 0 {
                return Err(FieldError::TrivialUnit);
            }
            if normalize(&spec, t) != certified.triple {
                return Err(FieldError::NotAUnit(
                    format!("{t:?} (not a fundamental unit)"),
                    n.to_string(),
                ));
            }
        }
        let h5 = h5_set(&actual);
        Ok(Self {
            delta,
            spec,
            ramified: actual,
            class_number_e,
            unit: certified,
            h5,
        })
    }

    pub fn delta(&self) -> i64 {
        self.delta
    }

    pub fn spec(&self) -> &OrderSpec {
        &self.spec
    }

    pub fn ramified(&self) -> &[u64] {
        &self.ramified
    }

    pub fn class_number_e(&self) -> Option<u64> {
        self.class_number_e
    }

    pub fn unit(&self) -> &CertifiedUnit {
        &self.unit
    }

    pub fn h5(&self) -> &H5Set {
        &self.h5
    }

    pub fn field_id(&self) -> String {
        format!("Delta={}", self.delta)
    }

    pub fn warnings(&self) -> Vec<String> {
        if self.class_number_e.is_none() {
            vec![format!(
                "{}: class number of the Galois closure not supplied; hypothesis 3 not applied",
                self.field_id()
            )]
        } else {
            Vec::new()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HypOutcome {
    Pass,
    Excluded(ExclusionReason),
}

/// Checks the five standing hypotheses in order and reports the first that
/// fails.
pub fn hyp_filter(rec: &CubicFieldRecord, p: u64) -> HypOutcome {
    use ExclusionReason::*;
    let outcome = if p == 2 || p == 3 {
        Some(Hyp1DividesSix)
    } else if rec.delta.unsigned_abs() % p == 0 {
        Some(Hyp2Ramified)
    } else if rec.class_number_e.is_some_and(|h| h % p == 0) {
        Some(Hyp3ClassNumber)
    } else if p % 2 == 0 {
        Some(Hyp4Even)
    } else if rec.h5.raw.contains(&p) {
        Some(Hyp5InH5)
    } else {
        None
    };
    outcome.map_or(HypOutcome::Pass, HypOutcome::Excluded)
}

// ---------------------------------------------------------------------------
// the z-invariant

/// `z ∈ O_K/p` with `ε^(p³−1) = 1 + z·p (mod p²)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZValue {
    pub p: u64,
    pub coeffs: [u64; 3],
}

impl ZValue {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// Computes `z` for an arbitrary unit triple, checking the Fermat step
/// `ε^(p³−1) ≡ 1 (mod p)`. Meaningful only for `p` inert in `K`.
pub fn z_for_unit(spec: &OrderSpec, unit: &UnitTriple, p: u64) -> Result<ZValue, Rejection> {
    let ring = QuotientRing::new(spec, Modulus::new(p, 2)?);
    let eps = ring.elem(unit)?;
    let e = (p as u128).pow(3) - 1;
    let u = ring.pow(&eps, e);
    z_from_power(p, &u)
}

fn z_from_power(p: u64, u: &OrderElem) -> Result<ZValue, Rejection> {
    let c = u.coeffs();
    if c[0] % p != 1 || c[1] % p != 0 || c[2] % p != 0 {
        return Err(Rejection::FermatStep {
            p,
            value: u.to_string(),
        });
    }
    Ok(ZValue {
        p,
        coeffs: [(c[0] - 1) / p, c[1] / p, c[2] / p],
    })
}

fn check_qualifying(rec: &CubicFieldRecord, p: u64) -> Result<(), Rejection> {
    if let HypOutcome::Excluded(reason) = hyp_filter(rec, p) {
        return Err(Rejection::Excluded { p, reason });
    }
    if frobenius_order(&rec.spec, p)? != 3 {
        return Err(Rejection::Excluded {
            p,
            reason: ExclusionReason::FrobeniusOrderNot3,
        });
    }
    Ok(())
}

/// The z-invariant at a prime passing all hypotheses with Frobenius of
/// order 3.
pub fn z_value(rec: &CubicFieldRecord, p: u64) -> Result<ZValue, Rejection> {
    check_qualifying(rec, p)?;
    z_for_unit(&rec.spec, &rec.unit.triple, p)
}

/// Vanishing criterion from a computed `z`.
pub fn h2_vanishes(z: &ZValue) -> bool {
    !z.is_zero()
}

/// True when the obstruction group vanishes at `p`, i.e. `z ≠ 0`.
pub fn h2_vanishing_test(rec: &CubicFieldRecord, p: u64) -> Result<bool, Rejection> {
    z_value(rec, p).map(|z| h2_vanishes(&z))
}

/// `z^(3(p−1)) = 1` in `O_K/p`.
pub fn ordinary_from_z(spec: &OrderSpec, z: &ZValue) -> Result<bool, RingError> {
    let ring = QuotientRing::new(spec, Modulus::new(z.p, 1)?);
    let zr = ring.elem_from_residues(&z.coeffs)?;
    Ok(ring.pow(&zr, 3 * (z.p as u128 - 1)).is_one())
}

pub fn ordinary_test(rec: &CubicFieldRecord, p: u64) -> Result<bool, Rejection> {
    ordinary_z(rec, p).map(|(hit, _)| hit)
}

fn ordinary_z(rec: &CubicFieldRecord, p: u64) -> Result<(bool, ZValue), Rejection> {
    check_qualifying(rec, p)?;
    if p % 3 != 1 {
        return Err(Rejection::Excluded {
            p,
            reason: ExclusionReason::ResidueTwoModThree,
        });
    }
    let z = z_for_unit(&rec.spec, &rec.unit.triple, p)?;
    if z.is_zero() {
        return Err(Rejection::Excluded {
            p,
            reason: ExclusionReason::ZeroZ,
        });
    }
    Ok((ordinary_from_z(&rec.spec, &z)?, z))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CubicMode {
    /// Hits are primes where `z = 0`, i.e. the obstruction group is nonzero.
    H2,
    /// Hits are primes `p ≡ 1 (mod 3)` with `z^(3(p−1)) = 1`.
    Ordinary,
}

impl CubicMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            CubicMode::H2 => "h2",
            CubicMode::Ordinary => "ordinary",
        }
    }
}

pub fn scan_cubic(
    rec: &CubicFieldRecord,
    range: PrimeRange,
    mode: CubicMode,
    opts: &ScanOptions,
) -> Result<ScanReport, ScanError> {
    let start = Instant::now();
    let verdicts = run_verdicts(range, opts, |p| {
        let outcome = match mode {
            CubicMode::H2 => z_value(rec, p).map(|z| z.is_zero().then(|| z.coeffs.to_vec())),
            CubicMode::Ordinary => {
                ordinary_z(rec, p).map(|(hit, z)| hit.then(|| z.coeffs.to_vec()))
            }
        };
        verdict_from(p, outcome).map(Some)
    })?;
    let metadata = ReportMetadata {
        tool_version: TOOL_VERSION.to_string(),
        field_id: rec.field_id(),
        range,
        mode: mode.as_str().to_string(),
        wall_time_ms: start.elapsed().as_millis() as u64,
        workers: opts.workers,
        warnings: rec.warnings(),
    };
    Ok(ScanReport::assemble(metadata, verdicts, opts.full_verdicts))
}
