//! Arithmetic in Z[θ]/(f, p^k): powers, Frobenius order and root counts.
//!
//!     cargo run --example ring_arithmetic

use leopoldt::ring::{frobenius_order, root_count_mod_p};
use leopoldt::{Modulus, OrderSpec, QuotientRing};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // x³ − x − 1, discriminant −23
    let spec = OrderSpec::from_coeffs(&[1, 0, -1, -1])?.expect_discriminant(-23)?;
    let p = 13;
    let ring = QuotientRing::new(&spec, Modulus::new(p, 2)?);
    let theta = ring.theta();
    let e = (p as u128).pow(3) - 1;
    println!("theta^(p^3 - 1) mod {}^2 = {:?}", p, ring.pow(&theta, e).coeffs());

    for q in [2u64, 3, 5, 7, 11, 13, 59] {
        println!(
            "p = {q:>2}: {} roots mod p, Frobenius order {}",
            root_count_mod_p(&spec, q)?,
            frobenius_order(&spec, q)?
        );
    }
    Ok(())
}
