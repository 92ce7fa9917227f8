//! Cyclic quartic fields `Q(√(m + 2b√m))` of conductor `m`.
//!
//! `cargo run --example quartic -- 65`

use twotorsion::arith::validate_m;
use twotorsion::quartic::{
    disc_check, enumerate_quartic_characters, legendre_identity_check, min_poly, same_field_check,
};
use twotorsion::reps::enumerate_reps;

fn main() -> twotorsion::Result<()> {
    let m = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(65);
    let f = validate_m(m)?;
    let chars = enumerate_quartic_characters(f.t());
    println!(
        "{} character pairs {{χ, χ³}} with all exponents odd:",
        chars.len()
    );
    for (chi, inv) in &chars {
        println!("  {chi} {inv}");
    }
    for rep in enumerate_reps(&f)? {
        let poly = min_poly(m, &rep)?;
        println!(
            "b = {:>3}: {poly}  irreducible {}  disc = m³·square {}  same field {}",
            rep.b,
            poly.is_irreducible(),
            disc_check(&poly, m),
            same_field_check(m, &rep)
        );
        // m·1² = 1·a² + 1·(2b)²
        let ok = legendre_identity_check(m as i64, 1, 1, 1, rep.a as i64, 2 * rep.b as i64)?;
        println!("        2(√m + a)(√m + 2b) = (√m + a + 2b)²: {ok}");
    }
    Ok(())
}
