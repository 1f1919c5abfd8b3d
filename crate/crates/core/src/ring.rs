//! Arithmetic in finite quotient rings `Z[θ]/(p^k)` of monogenic orders of
//! degree 2 or 3.
//!
//! An order is described by the monic polynomial `f` with `Z[θ] = Z[x]/(f)`.
//! Elements of `O/p^k O` are stored as coefficient vectors on the power basis
//! `1, θ, θ²`, each coefficient reduced into `[0, p^k)`. Residues fit in 63
//! bits and every product is formed in `u128` before reduction, so no
//! arbitrary-precision arithmetic is involved in the hot loop.

use std::fmt;

use crate::error::RingError;
use crate::primes::is_prime;

/// A monic polynomial of degree 2 or 3 together with its discriminant.
///
/// `low` holds the non-leading coefficients from the constant term upwards,
/// so `x³ + c2·x² + c1·x + c0` is stored as `[c0, c1, c2]`. For a quadratic
/// `low[2]` is zero and unused.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OrderSpec {
    degree: usize,
    low: [i64; 3],
    discriminant: i64,
}

impl OrderSpec {
    /// Builds a spec from the coefficients of a monic polynomial, highest
    /// degree first (`[1, c2, c1, c0]` for a cubic).
    pub fn from_coeffs(coeffs: &[i64]) -> Result<Self, RingError> {
        match coeffs {
            [1, c1, c0] => Ok(Self::quadratic(*c0, *c1)),
            [1, c2, c1, c0] => Ok(Self::cubic(*c0, *c1, *c2)),
            [lead, ..] if coeffs.len() == 3 || coeffs.len() == 4 => {
                Err(RingError::NotMonic { leading: *lead })
            }
            _ => Err(RingError::UnsupportedDegree(coeffs.len().saturating_sub(1))),
        }
    }

    /// `x² + c1·x + c0`.
    pub fn quadratic(c0: i64, c1: i64) -> Self {
        let discriminant = c1 * c1 - 4 * c0;
        Self {
            degree: 2,
            low: [c0, c1, 0],
            discriminant,
        }
    }

    /// `x³ + c2·x² + c1·x + c0`.
    pub fn cubic(c0: i64, c1: i64, c2: i64) -> Self {
        Self {
            degree: 3,
            low: [c0, c1, c2],
            discriminant: cubic_discriminant(c0, c1, c2),
        }
    }

    /// Checks the stored discriminant against an externally supplied value.
    pub fn expect_discriminant(self, expected: i64) -> Result<Self, RingError> {
        if self.discriminant != expected {
            return Err(RingError::DiscriminantMismatch {
                expected,
                actual: self.discriminant,
            });
        }
        Ok(self)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn discriminant(&self) -> i64 {
        self.discriminant
    }

    /// Non-leading coefficients, constant term first (length = degree).
    pub fn low_coeffs(&self) -> &[i64] {
        &self.low[..self.degree]
    }

    /// All coefficients, leading term first.
    pub fn coeffs(&self) -> Vec<i64> {
        let mut out = vec![1];
        out.extend(self.low_coeffs().iter().rev());
        out
    }

    /// Evaluates `f(x)` over the integers.
    pub fn eval(&self, x: i128) -> i128 {
        self.coeffs().iter().fold(0i128, |acc, &c| acc * x + c as i128)
    }
}

impl fmt::Display for OrderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{}", self.degree)?;
        for (power, &c) in self.low_coeffs().iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { '-' } else { '+' };
            match power {
                0 => write!(f, " {} {}", sign, c.abs())?,
                1 if c.abs() == 1 => write!(f, " {} x", sign)?,
                1 => write!(f, " {} {}x", sign, c.abs())?,
                _ if c.abs() == 1 => write!(f, " {} x^{}", sign, power)?,
                _ => write!(f, " {} {}x^{}", sign, c.abs(), power)?,
            }
        }
        Ok(())
    }
}

/// Discriminant of `x³ + c2·x² + c1·x + c0`.
pub fn cubic_discriminant(c0: i64, c1: i64, c2: i64) -> i64 {
    let (a, b, c) = (c2 as i128, c1 as i128, c0 as i128);
    let d = a * a * b * b - 4 * b * b * b - 4 * a * a * a * c - 27 * c * c + 18 * a * b * c;
    d as i64
}

/// A prime power modulus `m = p^k` with `k ∈ {1, 2}` and `m < 2⁶³`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Modulus {
    p: u64,
    k: u32,
    m: u64,
}

impl Modulus {
    pub fn new(p: u64, k: u32) -> Result<Self, RingError> {
        if !is_prime(p) {
            return Err(RingError::NotPrime(p));
        }
        if !(1..=2).contains(&k) {
            return Err(RingError::BadExponent(k));
        }
        let m = p
            .checked_pow(k)
            .filter(|&m| m < 1 << 63)
            .ok_or(RingError::ModulusTooLarge { p, k })?;
        Ok(Self { p, k, m })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// Reduces a signed integer into `[0, m)`.
    pub fn reduce(&self, x: i128) -> u64 {
        x.rem_euclid(self.m as i128) as u64
    }

    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.m as u128) as u64
    }
}

/// An element of `O/mO`: coefficients on `1, θ, θ²`, unused slots zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OrderElem {
    coeffs: [u64; 3],
    degree: u8,
}

impl OrderElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs[..self.degree as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }
}

impl fmt::Display for OrderElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// The ring `Z[θ]/(f, m)` with reduction constants precomputed mod `m`.
///
/// `x_pow[0]` and `x_pow[1]` are the residues of `θ^d` and `θ^(d+1)` on the
/// power basis, which is all that is needed to reduce a product of two
/// elements of degree `< d`.
#[derive(Clone, Copy, Debug)]
pub struct QuotientRing {
    spec: OrderSpec,
    modulus: Modulus,
    x_pow: [[u64; 3]; 2],
}

impl QuotientRing {
    pub fn new(spec: &OrderSpec, modulus: Modulus) -> Self {
        let neg: Vec<u64> = spec
            .low_coeffs()
            .iter()
            .map(|&c| modulus.reduce(-(c as i128)))
            .collect();
        let x_pow = match spec.degree {
            2 => {
                // x² = n0 + n1·x; x³ is never needed
                [[neg[0], neg[1], 0], [0, 0, 0]]
            }
            _ => {
                let (n0, n1, n2) = (neg[0], neg[1], neg[2]);
                // x⁴ = n2·x³ + n1·x² + n0·x
                let x4 = [
                    modulus.mul(n2, n0),
                    (modulus.mul(n2, n1) + n0) % modulus.m,
                    (modulus.mul(n2, n2) + n1) % modulus.m,
                ];
                [[n0, n1, n2], x4]
            }
        };
        Self {
            spec: *spec,
            modulus,
            x_pow,
        }
    }

    pub fn spec(&self) -> &OrderSpec {
        &self.spec
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    fn degree(&self) -> usize {
        self.spec.degree
    }

    fn wrap(&self, coeffs: [u64; 3]) -> OrderElem {
        OrderElem {
            coeffs,
            degree: self.spec.degree as u8,
        }
    }

    pub fn zero(&self) -> OrderElem {
        self.wrap([0; 3])
    }

    pub fn one(&self) -> OrderElem {
        self.wrap([1 % self.modulus.m, 0, 0])
    }

    /// The generator `θ`.
    pub fn theta(&self) -> OrderElem {
        self.wrap([0, 1, 0])
    }

    /// Reduces integer coefficients (constant term first) into the ring.
    pub fn elem(&self, coeffs: &[i64]) -> Result<OrderElem, RingError> {
        if coeffs.len() != self.degree() {
            return Err(RingError::LengthMismatch {
                expected: self.degree(),
                actual: coeffs.len(),
            });
        }
        let mut out = [0u64; 3];
        for (slot, &c) in out.iter_mut().zip(coeffs) {
            *slot = self.modulus.reduce(c as i128);
        }
        Ok(self.wrap(out))
    }

    /// Like [`QuotientRing::elem`] but for residues already in `[0, m)`.
    pub fn elem_from_residues(&self, coeffs: &[u64]) -> Result<OrderElem, RingError> {
        if coeffs.len() != self.degree() {
            return Err(RingError::LengthMismatch {
                expected: self.degree(),
                actual: coeffs.len(),
            });
        }
        let mut out = [0u64; 3];
        for (slot, &c) in out.iter_mut().zip(coeffs) {
            if c >= self.modulus.m {
                return Err(RingError::Unreduced {
                    value: c,
                    m: self.modulus.m,
                });
            }
            *slot = c;
        }
        Ok(self.wrap(out))
    }

    pub fn add(&self, a: &OrderElem, b: &OrderElem) -> OrderElem {
        let m = self.modulus.m;
        let mut out = [0u64; 3];
        for i in 0..3 {
            out[i] = ((a.coeffs[i] as u128 + b.coeffs[i] as u128) % m as u128) as u64;
        }
        self.wrap(out)
    }

    pub fn sub(&self, a: &OrderElem, b: &OrderElem) -> OrderElem {
        let m = self.modulus.m;
        let mut out = [0u64; 3];
        for i in 0..3 {
            out[i] = ((a.coeffs[i] as u128 + m as u128 - b.coeffs[i] as u128) % m as u128) as u64;
        }
        self.wrap(out)
    }

    pub fn neg(&self, a: &OrderElem) -> OrderElem {
        self.sub(&self.zero(), a)
    }

    pub fn mul(&self, a: &OrderElem, b: &OrderElem) -> OrderElem {
        let m = self.modulus.m as u128;
        let (x, y) = (&a.coeffs, &b.coeffs);
        if self.degree() == 2 {
            let r0 = (x[0] as u128 * y[0] as u128) % m;
            let r1 = (x[0] as u128 * y[1] as u128 + x[1] as u128 * y[0] as u128) % m;
            let r2 = (x[1] as u128 * y[1] as u128) % m;
            let t = &self.x_pow[0];
            let c0 = (r0 + r2 * t[0] as u128) % m;
            let c1 = (r1 + r2 * t[1] as u128) % m;
            return self.wrap([c0 as u64, c1 as u64, 0]);
        }
        let mut r = [0u128; 5];
        for i in 0..3 {
            for j in 0..3 {
                r[i + j] += x[i] as u128 * y[j] as u128;
            }
        }
        for v in r.iter_mut() {
            *v %= m;
        }
        let (t3, t4) = (&self.x_pow[0], &self.x_pow[1]);
        let mut out = [0u64; 3];
        for j in 0..3 {
            out[j] = ((r[j] + r[3] * t3[j] as u128 + r[4] * t4[j] as u128) % m) as u64;
        }
        self.wrap(out)
    }

    /// Multiplies every coefficient by an integer scalar.
    pub fn scale(&self, a: &OrderElem, s: u64) -> OrderElem {
        let s = s % self.modulus.m;
        let mut out = [0u64; 3];
        for i in 0..3 {
            out[i] = self.modulus.mul(a.coeffs[i], s);
        }
        self.wrap(out)
    }

    /// `a^e` by left-to-right binary exponentiation; `a⁰ = 1`.
    pub fn pow(&self, a: &OrderElem, e: u128) -> OrderElem {
        let mut acc = self.one();
        if e == 0 {
            return acc;
        }
        for bit in (0..128 - e.leading_zeros()).rev() {
            acc = self.mul(&acc, &acc);
            if (e >> bit) & 1 == 1 {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    /// Lifts a residue mod a smaller power of the same prime, e.g. to map an
    /// element of `O/p` into this ring.
    pub fn reduce_from(&self, a: &OrderElem) -> OrderElem {
        let m = self.modulus.m;
        let mut out = a.coeffs;
        for c in out.iter_mut() {
            *c %= m;
        }
        self.wrap(out)
    }
}

/// Product of two elements in `(Z/m)[x]/(f)`.
pub fn elem_mul(a: &OrderElem, b: &OrderElem, spec: &OrderSpec, modulus: Modulus) -> OrderElem {
    QuotientRing::new(spec, modulus).mul(a, b)
}

/// `a^e` in `(Z/m)[x]/(f)`. Exponents up to `p³` need the full 128 bits.
pub fn elem_pow(a: &OrderElem, e: u128, spec: &OrderSpec, modulus: Modulus) -> OrderElem {
    QuotientRing::new(spec, modulus).pow(a, e)
}

fn ensure_unramified(spec: &OrderSpec, p: u64) -> Result<(), RingError> {
    if !is_prime(p) {
        return Err(RingError::NotPrime(p));
    }
    if (spec.discriminant as i128).rem_euclid(p as i128) == 0 {
        return Err(RingError::Ramified {
            p,
            discriminant: spec.discriminant,
        });
    }
    Ok(())
}

/// Number of distinct roots of `f` modulo `p`, computed as
/// `deg gcd(x^p − x, f)` over `F_p`.
pub fn root_count_mod_p(spec: &OrderSpec, p: u64) -> Result<usize, RingError> {
    ensure_unramified(spec, p)?;
    let ring = QuotientRing::new(spec, Modulus::new(p, 1)?);
    let xp = ring.pow(&ring.theta(), p as u128);
    let g = ring.sub(&xp, &ring.theta());

    let f: Vec<u64> = spec
        .low_coeffs()
        .iter()
        .map(|&c| (c as i128).rem_euclid(p as i128) as u64)
        .chain(std::iter::once(1))
        .collect();
    let d = poly_gcd_mod_p(f, g.coeffs().to_vec(), p);
    Ok(d.len() - 1)
}

/// Order of Frobenius at an unramified `p` for a cubic spec, read off the
/// factorization type of `f` mod `p`: 3 roots give order 1, one root gives
/// order 2, no root (p inert) gives order 3.
pub fn frobenius_order(spec: &OrderSpec, p: u64) -> Result<u32, RingError> {
    if spec.degree != 3 {
        return Err(RingError::UnsupportedDegree(spec.degree));
    }
    match root_count_mod_p(spec, p)? {
        3 => Ok(1),
        1 => Ok(2),
        0 => Ok(3),
        n => unreachable!("squarefree cubic with {n} roots"),
    }
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut base, mut e, mut acc) = (a as u128 % p as u128, p - 2, 1u128);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u128;
        }
        base = base * base % p as u128;
        e >>= 1;
    }
    acc as u64
}

fn make_monic(v: &mut [u64], p: u64) {
    if let Some(&lead) = v.last() {
        let inv = inv_mod(lead, p) as u128;
        for c in v.iter_mut() {
            *c = (*c as u128 * inv % p as u128) as u64;
        }
    }
}

/// Monic gcd over `F_p`; coefficient vectors are constant term first.
/// The gcd of a nonzero polynomial with zero is the (monic) polynomial itself.
pub(crate) fn poly_gcd_mod_p(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        make_monic(&mut b, p);
        // a mod b, with b monic
        while a.len() >= b.len() {
            let lead = *a.last().unwrap() as u128;
            let shift = a.len() - b.len();
            for (i, &bc) in b.iter().enumerate() {
                let t = (lead * bc as u128 % p as u128) as u64;
                a[shift + i] = (a[shift + i] + p - t) % p;
            }
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    make_monic(&mut a, p);
    a
}
