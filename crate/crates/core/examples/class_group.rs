//! Class groups through cycles of reduced indefinite forms, in both the
//! narrow and the ordinary (wide) sense.
//!
//! `cargo run --example class_group -- 1885`

use twotorsion::arith::validate_m;
use twotorsion::forms::{ClassGroup, Strictness};

fn main() -> twotorsion::Result<()> {
    let m = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(1885);
    let primes: Vec<u64> = validate_m(m)?.primes().collect();
    let g = ClassGroup::new(m)?;
    println!(
        "{} cycles of reduced forms of discriminant {m}",
        g.cycles().len()
    );
    for cycle in g.cycles() {
        let shown: Vec<String> = cycle.iter().take(4).map(|f| f.to_string()).collect();
        let more = if cycle.len() > 4 { " …" } else { "" };
        println!("  length {:>3}: {}{more}", cycle.len(), shown.join(" → "));
    }
    for s in [Strictness::Narrow, Strictness::Wide] {
        let two = g.two_torsion(s)?;
        let c = g.ambiguous(&primes, s)?;
        println!(
            "{s:?}: h = {}, |Cl[2]| = {}, |C| = {}",
            g.class_number(s),
            two.len(),
            c.len()
        );
    }
    Ok(())
}
