//! Ramified ideals `𝔟ₑ`, their classes, and generators of the principal ones.
//!
//! `cargo run --example ideals -- 1885`

use twotorsion::arith::validate_m;
use twotorsion::forms::{principal_generator, ClassGroup, Strictness};
use twotorsion::ideals::{exponent_vector, ideal_b};
use twotorsion::quadfield::{fundamental_unit, normalize_generator};

fn main() -> twotorsion::Result<()> {
    let m = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(1885);
    let primes: Vec<u64> = validate_m(m)?.primes().collect();
    let eps = fundamental_unit(m)?.eps;
    let g = ClassGroup::new(m)?;
    let t = primes.len();
    for mask in 0..1u64 << t {
        let e = exponent_vector(mask, t);
        let b = ideal_b(m, &primes, &e)?;
        let form = b.to_form()?;
        let label = g.label(&form, Strictness::Wide)?;
        let gen = principal_generator(&form)?.map(|a| normalize_generator(&a, &eps));
        let ps: Vec<String> = primes
            .iter()
            .zip(&e)
            .filter(|(_, &x)| x)
            .map(|(p, _)| p.to_string())
            .collect();
        match gen {
            Some(alpha) => println!("𝔟{{{}}} = {b} = ({alpha})", ps.join(",")),
            None => println!("𝔟{{{}}} = {b}  class {label}", ps.join(",")),
        }
    }
    Ok(())
}
