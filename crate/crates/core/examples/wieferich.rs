//! Wieferich primes to a few bases, with the 1/p model's prediction.
//!
//!     cargo run --release --example wieferich

use leopoldt::heuristics::{expected_exceptional_count, wieferich_scan, ExceptionModel};
use leopoldt::PrimeRange;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let pmax = 10_000_000;
    let range = PrimeRange::new(2, pmax)?;
    for base in [2u64, 3, 5, 7, 10] {
        println!("base {base:>2}: {:?}", wieferich_scan(base, range)?);
    }
    let expected = expected_exceptional_count(pmax, ExceptionModel::OneOverP)?;
    println!("expected per base under the 1/p model: {expected:.3}");
    Ok(())
}
