//! Seeded Monte-Carlo estimate of the injectivity probability, compared
//! with the exact value. Results do not depend on the worker count.
//!
//!     cargo run --release --example monte_carlo

use leopoldt::heuristics::{injective_probability, monte_carlo_injective_with_workers};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (p, n, m) = (2, 2, 3);
    let exact = injective_probability(p, n, m)?;
    for workers in [1, 4] {
        let r = monte_carlo_injective_with_workers(p, n, m, 1_000_000, 42, workers)?;
        println!(
            "{workers} workers: {} / {} = {:.5} ± {:.5}",
            r.successes, r.trials, r.frequency, r.std_error
        );
    }
    println!("exact: {exact} = {:.5}", exact.approx());
    Ok(())
}
