//! Recompute every reference table and print the differences.
//!
//!     cargo run --release --example verify_tables

use leopoldt::data::{DataSource, TableId};
use leopoldt::verify::verify_tables;
use leopoldt::ScanOptions;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let src = DataSource::from_env();
    for id in TableId::ALL {
        let diff = verify_tables(id, None, &ScanOptions::default(), &src)?;
        print!("{diff}");
    }
    Ok(())
}
