//! The H² vanishing test: look for primes p ≤ 10⁵ where ε^(p³−1) ≡ 1
//! mod p² for a complex cubic unit ε.
//!
//!     cargo run --release --example h2_check

use leopoldt::data::{load_cubic_fields, DataSource};
use leopoldt::{scan_cubic, CubicMode, PrimeRange, ScanOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let range = PrimeRange::new(2, 100_000)?;
    let opts = ScanOptions::default();
    let mut total = 0;
    for rec in load_cubic_fields(&DataSource::from_env())? {
        let report = scan_cubic(&rec, range, CubicMode::H2, &opts)?;
        println!(
            "{:<10} tested {:>5}  hits {:?}",
            rec.field_id(),
            report.clear_count + report.hits.len() as u64,
            report.hit_primes()
        );
        total += report.hits.len();
    }
    println!("total hits: {total}");
    Ok(())
}
