//! Machine-word number theory used to get hold of `m = p₁⋯p_t`: primality,
//! factorization, square roots of −1 modulo primes and Cornacchia's
//! algorithm for `p = c² + 4d²`.
//!
//! Everything here works on `u64` with `u128` intermediates, which is far
//! beyond the range where the class-group side of the crate is practical.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, InvalidReason, Result};

/// Seed used when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 0;

const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

/// Bases for which Miller–Rabin is deterministic below 3.3·10²⁴.
const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Prime factorization of a positive integer, primes ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Number of distinct prime factors.
    pub fn t(&self) -> usize {
        self.factors.len()
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, n);
        }
        base = mul_mod(base, base, n);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Pollard rho with Brent's cycle detection. Returns a nontrivial divisor of
/// the odd composite `n`.
fn brent_rho(n: u64, rng: &mut ChaCha8Rng) -> u64 {
    const BATCH: u64 = 128;
    loop {
        let c = rng.gen_range(1..n);
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let mut y = rng.gen_range(0..n);
        let (mut x, mut ys) = (y, y);
        let mut g = 1;
        let mut r = 1u64;
        let mut q = 1u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            // the batch overshot; step back one at a time
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
}

fn push_prime_factors(n: u64, rng: &mut ChaCha8Rng, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    if let Some(r) = is_perfect_square_u64(n) {
        push_prime_factors(r, rng, out);
        push_prime_factors(r, rng, out);
        return;
    }
    let d = brent_rho(n, rng);
    push_prime_factors(d, rng, out);
    push_prime_factors(n / d, rng, out);
}

/// Factor `n` with the default seed.
pub fn factor(n: u64) -> Factorization {
    factor_seeded(n, DEFAULT_SEED)
}

/// Factor `n`: trial division up to 10⁶, then Brent–Pollard rho on the
/// cofactor. The result does not depend on `seed`; only the work done does.
pub fn factor_seeded(n: u64, seed: u64) -> Factorization {
    assert!(n >= 1, "factor: n must be positive");
    let mut rest = n;
    let mut primes = Vec::new();
    let mut push_div = |d: u64, rest: &mut u64| {
        while (*rest).is_multiple_of(d) {
            *rest /= d;
            primes.push(d);
        }
    };
    push_div(2, &mut rest);
    push_div(3, &mut rest);
    let mut d = 5;
    while d <= TRIAL_DIVISION_LIMIT && d * d <= rest {
        push_div(d, &mut rest);
        push_div(d + 2, &mut rest);
        d += 6;
    }
    if rest > 1 {
        if d * d > rest {
            primes.push(rest);
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            push_prime_factors(rest, &mut rng, &mut primes);
        }
    }
    primes.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    Factorization { n, factors }
}

/// True iff `f` describes a squarefree product of at least one prime, all of
/// them `≡ 1 (mod 4)`.
pub fn is_valid_m(f: &Factorization) -> bool {
    invalid_reason(f).is_none()
}

pub fn invalid_reason(f: &Factorization) -> Option<InvalidReason> {
    if f.factors.is_empty() {
        return Some(InvalidReason::NoPrimeFactor);
    }
    for &(p, e) in &f.factors {
        if e > 1 {
            return Some(InvalidReason::NotSquarefree { prime: p });
        }
    }
    f.factors
        .iter()
        .find(|&&(p, _)| p % 4 != 1)
        .map(|&(p, _)| InvalidReason::BadCongruence { prime: p })
}

/// Factor `m` and check that it is an admissible field parameter.
pub fn validate_m(m: u64) -> Result<Factorization> {
    if m == 0 {
        return Err(Error::InvalidM {
            m,
            reason: InvalidReason::NoPrimeFactor,
        });
    }
    let f = factor(m);
    match invalid_reason(&f) {
        None => Ok(f),
        Some(reason) => Err(Error::InvalidM { m, reason }),
    }
}

fn check_prime_1_mod_4(p: u64) -> Result<()> {
    if p % 4 == 1 && is_prime(p) {
        Ok(())
    } else {
        Err(Error::InvalidPrime { p })
    }
}

/// Square root of −1 modulo a prime `p ≡ 1 (mod 4)`, normalized to `r ≤ p − r`.
pub fn sqrt_minus_one_mod_p(p: u64) -> Result<u64> {
    sqrt_minus_one_mod_p_seeded(p, DEFAULT_SEED)
}

pub fn sqrt_minus_one_mod_p_seeded(p: u64, seed: u64) -> Result<u64> {
    check_prime_1_mod_4(p)?;
    if p == 5 {
        return Ok(2);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p);
    let r = loop {
        let c = rng.gen_range(2..p - 1);
        // c is a non-residue iff c^((p-1)/2) = -1, and then c^((p-1)/4) squares to -1
        if pow_mod(c, (p - 1) / 2, p) == p - 1 {
            break pow_mod(c, (p - 1) / 4, p);
        }
    };
    Ok(r.min(p - r))
}

/// Cornacchia's algorithm: the unique `(c, d)` with `p = c² + 4d²`,
/// `c` odd, `c, d > 0`.
pub fn cornacchia_two_squares(p: u64) -> Result<(u64, u64)> {
    let r = sqrt_minus_one_mod_p(p)?;
    // Euclid on (p, r) stopped at the first remainder below √p
    let (mut prev, mut u) = (p, r);
    while u * u > p {
        (prev, u) = (u, prev % u);
    }
    let v = is_perfect_square_u64(p - u * u)
        .ok_or_else(|| Error::Inconsistency(format!("Cornacchia failed for p = {p}")))?;
    let (odd, even) = if u % 2 == 1 { (u, v) } else { (v, u) };
    Ok((odd, even / 2))
}

pub fn is_perfect_square_u64(n: u64) -> Option<u64> {
    let r = n.sqrt();
    (r * r == n).then_some(r)
}

/// Nonnegative square root of `n` when `n` is a perfect square.
pub fn is_perfect_square(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// `floor(√n)`.
pub fn isqrt(n: u64) -> u64 {
    n.sqrt()
}

/// Extended gcd on `i128`: returns `(g, x, y)` with `ax + by = g ≥ 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let e = a.extended_gcd(&b);
    if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}
