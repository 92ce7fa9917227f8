//! Classify every admissible `m` in a range in parallel and tally the two
//! cases `N(ε) = ±1` by number of prime factors.
//!
//! `cargo run --release --example scan -- 1 20000`

use std::collections::BTreeMap;

use twotorsion::verify::{scan_with, Branch, Options, ScanFilter};

fn main() -> twotorsion::Result<()> {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .filter_map(|s| s.parse().ok())
        .collect();
    let (lo, hi) = match args[..] {
        [lo, hi, ..] => (lo, hi),
        _ => (1, 20_000),
    };
    let mut by_t: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    let summary = scan_with(
        lo,
        hi,
        &ScanFilter::default(),
        &Options::default(),
        0,
        |r| {
            let entry = by_t.entry(r.t).or_default();
            match r.branch {
                Some(Branch::A) => entry.0 += 1,
                Some(Branch::B) => entry.1 += 1,
                None => {}
            }
            Ok(())
        },
    )?;
    println!(" t   N(ε) = -1   N(ε) = +1");
    for (t, (a, b)) in by_t {
        println!("{t:>2}   {a:>9}   {b:>9}");
    }
    println!(
        "{} fields in [{lo}, {hi}], {} failures",
        summary.reports, summary.failures
    );
    Ok(())
}
