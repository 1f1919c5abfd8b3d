//! Exact heuristic values: injectivity probabilities, level-raising
//! densities and the multiplicity distribution.
//!
//!     cargo run --example heuristics

use leopoldt::heuristics::{
    complement, injective_probability, level_raising_densities, mertens_count,
    multiplicity_distribution,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (p, n, m) in [(2, 1, 1), (2, 2, 3), (3, 2, 2), (5, 3, 4)] {
        let v = injective_probability(p, n, m)?;
        println!("P(injective) p={p} n={n} m={m}: {v} = {:.6}", v.approx());
    }

    for p in [3u64, 5, 11] {
        let d = level_raising_densities(p)?;
        let shown: Vec<String> = d.iter().map(|v| v.to_string()).collect();
        println!("densities at p = {p}: {}", shown.join(", "));
    }

    for k0 in [3u64, 5, 7, 11] {
        let first = multiplicity_distribution(k0, 1)?;
        println!("k0 = {k0:>2}: P(mult 1) = {first}, P(mult > 1) = {}", complement(&first)?);
    }
    for i in 1..=5 {
        let v = multiplicity_distribution(3, i)?;
        println!("k0 = 3, multiplicity {i}: {v} = {:.4}", v.approx());
    }

    let m = mertens_count(1_000_000)?;
    println!("sum 1/p for p <= 10^6: {:.5} (log log x = {:.5})", m.sum, m.loglog);
    Ok(())
}
