//! The full classification for `m = 5·13·29`, where `N(ε) = +1`.
//!
//! `cargo run --example verify_1885`

use twotorsion::verify::classify;

fn main() -> twotorsion::Result<()> {
    let m = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(1885);
    let report = classify(m)?;
    let unit = report.unit.as_ref().expect("unit is computed for valid m");
    println!("m = {m}: ε = {}, N(ε) = {:+}", unit.eps.text, unit.norm);
    if let Some(b) = &report.branch_b {
        for pair in &b.pairs {
            let reps: Vec<String> = pair
                .reps
                .iter()
                .map(|r| format!("({}, {})", r.a, r.b))
                .collect();
            println!("  same class: {}", reps.join(", "));
        }
        if let Some(rel) = &b.relation {
            println!(
                "  principal ramified ideal over {:?}: ({})",
                rel.primes, rel.alpha.text
            );
        }
    }
    if let Some(a) = &report.branch_a {
        if let (Some(alpha), Some(eta)) = (&a.alpha, &a.eta) {
            println!("  principal 𝔞 = ({}), η = {}", alpha.text, eta.text);
        }
    }
    for c in &report.checks {
        println!(
            "  {:<40} {}",
            c.name,
            if c.passed { "ok" } else { "FAILED" }
        );
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("reports serialize")
    );
    Ok(())
}
