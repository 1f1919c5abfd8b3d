//! Real quadratic fields: fundamental units and the primes p < 10⁴ with
//! ε^(p²−1) ≡ 1 mod p².
//!
//!     cargo run --release --example quad_scan

use leopoldt::data::{load_quadratic_fields, DataSource};
use leopoldt::{scan_quadratic, PrimeRange, ScanOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let range = PrimeRange::new(3, 9_999)?;
    let opts = ScanOptions::default();
    for rec in load_quadratic_fields(&DataSource::from_env())? {
        let u = rec.unit();
        let report = scan_quadratic(&rec, range, &opts)?;
        println!(
            "{:<5} h = {}  unit ({}, {}) norm {:+}  hits {:?}",
            rec.field_id(),
            rec.class_number(),
            u.a,
            u.b,
            u.norm_sign,
            report.hit_primes()
        );
    }
    Ok(())
}
