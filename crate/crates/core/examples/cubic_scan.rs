//! Complex cubic fields: certified units and the ordinary primes up to
//! 2·10⁵ that survive the hypothesis filter.
//!
//!     cargo run --release --example cubic_scan

use leopoldt::data::{load_cubic_fields, DataSource};
use leopoldt::{scan_cubic, CubicMode, PrimeRange, ScanOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let range = PrimeRange::new(2, 200_000)?;
    let opts = ScanOptions::default();
    for rec in load_cubic_fields(&DataSource::from_env())? {
        let unit = rec.unit();
        let report = scan_cubic(&rec, range, CubicMode::Ordinary, &opts)?;
        println!(
            "{:<10} f = {:?}  unit {:?} ({:?})  hits {:?}",
            rec.field_id(),
            rec.spec().coeffs(),
            unit.triple,
            unit.certificate,
            report.hit_primes()
        );
    }
    Ok(())
}
