//! Representations `m = a² + 4b²` and the ideals `𝔞 = (a, 2b + √m)`.
//!
//! `cargo run --example reps -- 1885`

use twotorsion::arith::validate_m;
use twotorsion::ideals::{ideal_a, two_b_plus_sqrt_m, verify_square_principal};
use twotorsion::reps::enumerate_reps;

fn main() -> twotorsion::Result<()> {
    let m = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(1885);
    let f = validate_m(m)?;
    println!("m = {m}, t = {}", f.t());
    for rep in enumerate_reps(&f)? {
        let a = ideal_a(&rep)?;
        println!(
            "{m} = {}² + 4·{}²   𝔞 = {a}   𝔞² = ({}): {}",
            rep.a,
            rep.b,
            two_b_plus_sqrt_m(&rep),
            verify_square_principal(&rep)?
        );
    }
    Ok(())
}
