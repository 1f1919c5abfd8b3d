//! H5 sets: primes dividing l² − 1 for the primes l ramified in each field.
//!
//!     cargo run --example h5_sets

use leopoldt::data::{load_cubic_fields, DataSource};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for rec in load_cubic_fields(&DataSource::from_env())? {
        let h5 = rec.h5();
        println!(
            "{:<10} ramified {:?}  H5 {:?}  listed {:?}",
            rec.field_id(),
            rec.ramified(),
            h5.raw,
            h5.reduced
        );
    }
    Ok(())
}
