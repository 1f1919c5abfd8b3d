//! Quotient ring arithmetic against a schoolbook oracle, ring axioms, and
//! Frobenius behaviour at inert primes.

use leopoldt::primes::{is_prime, primes_below, primes_in, PrimeRange};
use leopoldt::ring::{frobenius_order, root_count_mod_p, Modulus, OrderElem, OrderSpec, QuotientRing};
use proptest::prelude::*;

// Multiply coefficient vectors and divide by the monic polynomial, all in
// wide signed integers, reducing mod m only at the end.
fn oracle_mul(spec: &OrderSpec, a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
    let n = spec.degree();
    let mut prod = vec![0i128; 2 * n - 1];
    for i in 0..n {
        for j in 0..n {
            prod[i + j] = (prod[i + j] + a[i] as i128 * b[j] as i128).rem_euclid(m as i128);
        }
    }
    let low = spec.low_coeffs();
    for k in (n..prod.len()).rev() {
        let t = prod[k];
        prod[k] = 0;
        for (i, &c) in low.iter().enumerate() {
            prod[k - n + i] = (prod[k - n + i] - t * c as i128).rem_euclid(m as i128);
        }
    }
    prod[..n].iter().map(|&x| x as u64).collect()
}

fn all_elems(ring: &QuotientRing) -> Vec<OrderElem> {
    let m = ring.modulus().m();
    let n = ring.spec().degree();
    let total = m.pow(n as u32);
    (0..total)
        .map(|mut i| {
            let mut c = vec![0u64; n];
            for x in c.iter_mut() {
                *x = i % m;
                i /= m;
            }
            ring.elem_from_residues(&c).unwrap()
        })
        .collect()
}

fn small_moduli() -> Vec<Modulus> {
    let mut out = Vec::new();
    for p in [2u64, 3, 5, 7] {
        for k in [1, 2] {
            if p.pow(k) <= 9 {
                out.push(Modulus::new(p, k).unwrap());
            }
        }
    }
    out
}

#[test]
fn quadratic_rings_exhaustive() {
    for spec in [OrderSpec::quadratic(-2, 0), OrderSpec::quadratic(-1, -1), OrderSpec::quadratic(5, 3)] {
        for md in small_moduli() {
            let ring = QuotientRing::new(&spec, md);
            let elems = all_elems(&ring);
            for a in &elems {
                for b in &elems {
                    let ab = ring.mul(a, b);
                    assert_eq!(ab.coeffs(), oracle_mul(&spec, a.coeffs(), b.coeffs(), md.m()));
                    assert_eq!(ab, ring.mul(b, a));
                    for c in &elems {
                        assert_eq!(ring.mul(&ab, c), ring.mul(a, &ring.mul(b, c)));
                        assert_eq!(
                            ring.mul(a, &ring.add(b, c)),
                            ring.add(&ab, &ring.mul(a, c))
                        );
                    }
                }
                assert_eq!(ring.mul(a, &ring.one()), *a);
                assert!(ring.add(a, &ring.neg(a)).is_zero());
            }
        }
    }
}

#[test]
fn cubic_rings_exhaustive() {
    let specs = [OrderSpec::cubic(-1, -1, 0), OrderSpec::cubic(2, 1, 1), OrderSpec::cubic(-2, 0, 0)];
    for spec in specs {
        for md in small_moduli() {
            let ring = QuotientRing::new(&spec, md);
            let elems = all_elems(&ring);
            for a in &elems {
                for b in &elems {
                    let ab = ring.mul(a, b);
                    assert_eq!(ab.coeffs(), oracle_mul(&spec, a.coeffs(), b.coeffs(), md.m()));
                    assert_eq!(ab, ring.mul(b, a));
                }
            }
            // associativity on all triples is 729³ at m = 9; stay at m ≤ 4
            if md.m() <= 4 {
                for a in &elems {
                    for b in &elems {
                        let ab = ring.mul(a, b);
                        for c in &elems {
                            assert_eq!(ring.mul(&ab, c), ring.mul(a, &ring.mul(b, c)));
                            assert_eq!(ring.mul(a, &ring.add(b, c)), ring.add(&ab, &ring.mul(a, c)));
                        }
                    }
                }
            }
        }
    }
}

fn prime_strategy() -> impl Strategy<Value = u64> {
    prop_oneof![
        (2u64..2000).prop_filter("prime", |&p| is_prime(p)),
        (1u64 << 30..1u64 << 31).prop_filter("prime", |&p| is_prime(p)),
    ]
}

fn spec_strategy() -> impl Strategy<Value = OrderSpec> {
    prop_oneof![
        (-30i64..=30, -30i64..=30).prop_map(|(c0, c1)| OrderSpec::quadratic(c0, c1)),
        (-30i64..=30, -30i64..=30, -30i64..=30).prop_map(|(c0, c1, c2)| OrderSpec::cubic(c0, c1, c2)),
    ]
}

fn elem_strategy(n: usize, m: u64) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0..m, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn mul_matches_oracle(
        (spec, p, k, a, b, c) in (spec_strategy(), prime_strategy(), 1u32..=2).prop_flat_map(|(spec, p, k)| {
            let m = p.pow(k);
            let n = spec.degree();
            (Just(spec), Just(p), Just(k), elem_strategy(n, m), elem_strategy(n, m), elem_strategy(n, m))
        })
    ) {
        let md = Modulus::new(p, k).unwrap();
        let ring = QuotientRing::new(&spec, md);
        let (x, y, z) = (
            ring.elem_from_residues(&a).unwrap(),
            ring.elem_from_residues(&b).unwrap(),
            ring.elem_from_residues(&c).unwrap(),
        );
        let xy = ring.mul(&x, &y);
        prop_assert_eq!(xy.coeffs(), &oracle_mul(&spec, &a, &b, md.m())[..]);
        prop_assert_eq!(ring.mul(&xy, &z), ring.mul(&x, &ring.mul(&y, &z)));
        prop_assert_eq!(ring.mul(&x, &ring.add(&y, &z)), ring.add(&xy, &ring.mul(&x, &z)));
        prop_assert_eq!(ring.sub(&ring.add(&x, &y), &y), x);
    }

    #[test]
    fn pow_is_additive(
        (spec, p, k, a) in (spec_strategy(), prime_strategy(), 1u32..=2).prop_flat_map(|(spec, p, k)| {
            let n = spec.degree();
            (Just(spec), Just(p), Just(k), elem_strategy(n, p.pow(k)))
        }),
        e1 in 0u128..1u128 << 70,
        e2 in 0u128..1u128 << 70,
    ) {
        let ring = QuotientRing::new(&spec, Modulus::new(p, k).unwrap());
        let x = ring.elem_from_residues(&a).unwrap();
        prop_assert_eq!(ring.pow(&x, e1 + e2), ring.mul(&ring.pow(&x, e1), &ring.pow(&x, e2)));
        prop_assert!(ring.pow(&x, 0).is_one());
        prop_assert_eq!(ring.pow(&x, 1), x);
    }
}

// At an inert prime O/p is F_{p³}: θ^(p³) = θ but θ^p ≠ θ.
#[test]
fn inert_primes_give_cubic_extensions() {
    for spec in [OrderSpec::cubic(-1, -1, 0), OrderSpec::cubic(-2, 0, 0), OrderSpec::cubic(2, 1, 1)] {
        let mut inert = 0;
        for p in primes_below(5000) {
            if spec.discriminant() % p as i64 == 0 {
                continue;
            }
            let ring = QuotientRing::new(&spec, Modulus::new(p, 1).unwrap());
            let th = ring.theta();
            let p3 = (p as u128).pow(3);
            let roots = root_count_mod_p(&spec, p).unwrap();
            if roots == 0 {
                inert += 1;
                assert_eq!(ring.pow(&th, p3), th, "p = {p}");
                assert_ne!(ring.pow(&th, p as u128), th, "p = {p}");
                assert_eq!(frobenius_order(&spec, p).unwrap(), 3);
            }
            // θ^(p³) = θ only when every irreducible factor has degree 1 or 3
            let fixed = ring.pow(&th, p3) == th;
            assert_eq!(fixed, roots != 1, "p = {p}, roots = {roots}");
        }
        assert!(inert > 100);
    }
}

// Frobenius has order 3 on a third of the primes for an S3 field.
#[test]
fn order_three_density() {
    let range = PrimeRange::new(5, 1_000_000).unwrap();
    for spec in [OrderSpec::cubic(-1, -1, 0), OrderSpec::cubic(-1, 1, 0)] {
        let (mut total, mut order3) = (0u64, 0u64);
        for p in primes_in(range).unwrap() {
            if spec.discriminant() % p as i64 == 0 {
                continue;
            }
            total += 1;
            if frobenius_order(&spec, p).unwrap() == 3 {
                order3 += 1;
            }
        }
        let density = order3 as f64 / total as f64;
        assert!((density - 1.0 / 3.0).abs() < 0.01, "density {density}");
    }
}

#[test]
fn root_counts_match_brute_force() {
    let specs = [OrderSpec::cubic(-1, -1, 0), OrderSpec::cubic(1, 1, 1), OrderSpec::quadratic(-5, 0)];
    for spec in specs {
        for p in primes_below(400) {
            if spec.discriminant() % p as i64 == 0 {
                assert!(root_count_mod_p(&spec, p).is_err());
                continue;
            }
            let brute = (0..p as i128).filter(|&x| spec.eval(x).rem_euclid(p as i128) == 0).count();
            assert_eq!(root_count_mod_p(&spec, p).unwrap(), brute, "{spec} at p = {p}");
        }
    }
}
