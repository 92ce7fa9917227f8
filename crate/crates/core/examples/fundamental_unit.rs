//! Fundamental units from the continued fraction of `(1 + √m)/2`.
//!
//! `cargo run --example fundamental_unit -- 5 65 205 1885`

use twotorsion::quadfield::fundamental_unit;

fn main() -> twotorsion::Result<()> {
    let mut args: Vec<u64> = std::env::args()
        .skip(1)
        .filter_map(|s| s.parse().ok())
        .collect();
    if args.is_empty() {
        args = vec![5, 13, 65, 205, 1885];
    }
    for m in args {
        let u = fundamental_unit(m)?;
        println!(
            "m = {m:>6}  period {:>3}  N(ε) = {:+}  ε = {}",
            u.cycle.period(),
            u.norm,
            u.eps
        );
    }
    Ok(())
}
