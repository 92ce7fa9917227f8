//! Representations `m = a² + 4b²` built from the Gaussian prime factors of `m`.

use std::ops::Mul;

use serde::Serialize;

use crate::arith::{cornacchia_two_squares, invalid_reason, Factorization};
use crate::{Error, Result};

/// Gaussian integer `re + im·i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GaussInt {
    pub re: i128,
    pub im: i128,
}

impl GaussInt {
    pub const ONE: GaussInt = GaussInt { re: 1, im: 0 };

    pub fn new(re: i128, im: i128) -> Self {
        GaussInt { re, im }
    }

    pub fn conj(self) -> Self {
        GaussInt::new(self.re, -self.im)
    }

    pub fn norm(self) -> i128 {
        self.re * self.re + self.im * self.im
    }
}

impl Mul for GaussInt {
    type Output = GaussInt;

    fn mul(self, rhs: GaussInt) -> GaussInt {
        GaussInt::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

/// One representation `m = a² + 4b²` with `a` odd and `a, b > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TwoSquares {
    pub a: u64,
    pub b: u64,
    #[serde(skip)]
    pub m: u64,
}

impl TwoSquares {
    /// Checks the defining identity and the sign/parity normalization.
    pub fn new(m: u64, a: u64, b: u64) -> Result<Self> {
        let ok = a % 2 == 1
            && b > 0
            && (a as u128) * (a as u128) + 4 * (b as u128) * (b as u128) == m as u128;
        if ok {
            Ok(TwoSquares { a, b, m })
        } else {
            Err(Error::InvalidRep { m, a, b })
        }
    }

    /// The Gaussian integer `a + 2b·i`.
    pub fn gaussian(&self) -> GaussInt {
        GaussInt::new(self.a as i128, 2 * self.b as i128)
    }
}

/// All `2^(t−1)` essentially different representations of `m`, ascending in `a`.
///
/// Every representation comes from a product of one Gaussian prime above
/// each `pⱼ`; conjugating all factors at once only flips the sign of the
/// imaginary part, so the first factor is never conjugated.
pub fn enumerate_reps(f: &Factorization) -> Result<Vec<TwoSquares>> {
    if let Some(reason) = invalid_reason(f) {
        return Err(Error::InvalidM { m: f.n(), reason });
    }
    let m = f.n();
    let factors = f
        .primes()
        .map(|p| cornacchia_two_squares(p).map(|(c, d)| GaussInt::new(c as i128, 2 * d as i128)))
        .collect::<Result<Vec<_>>>()?;
    let t = factors.len();
    let mut reps = Vec::with_capacity(1 << (t - 1));
    for pattern in 0u64..(1 << (t - 1)) {
        let mu = factors
            .iter()
            .enumerate()
            .fold(GaussInt::ONE, |acc, (j, &g)| {
                let conj = j > 0 && pattern >> (j - 1) & 1 == 1;
                acc * if conj { g.conj() } else { g }
            });
        let (x, y) = (mu.re.unsigned_abs() as u64, mu.im.unsigned_abs() as u64);
        let (a, two_b) = if x % 2 == 1 { (x, y) } else { (y, x) };
        if two_b % 2 != 0 {
            return Err(Error::Inconsistency(format!(
                "odd components in {mu:?} for m = {m}"
            )));
        }
        reps.push(TwoSquares::new(m, a, two_b / 2)?);
    }
    reps.sort();
    if reps.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Inconsistency(format!(
            "repeated representation of m = {m}"
        )));
    }
    Ok(reps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{factor, is_perfect_square_u64, is_valid_m};
    use num_integer::Integer;
    use proptest::prelude::*;

    fn exhaustive(m: u64) -> Vec<(u64, u64)> {
        (1..)
            .step_by(2)
            .take_while(|a| a * a < m)
            .filter_map(|a| {
                let r = m - a * a;
                r.is_multiple_of(4)
                    .then(|| is_perfect_square_u64(r / 4))
                    .flatten()
                    .map(|b| (a, b))
            })
            .collect()
    }

    fn pairs(reps: &[TwoSquares]) -> Vec<(u64, u64)> {
        reps.iter().map(|r| (r.a, r.b)).collect()
    }

    #[test]
    fn examples() {
        let r = enumerate_reps(&factor(1885)).unwrap();
        assert_eq!(pairs(&r), vec![(11, 21), (21, 19), (27, 17), (43, 3)]);
        assert_eq!(pairs(&enumerate_reps(&factor(5)).unwrap()), vec![(1, 1)]);
        assert_eq!(
            pairs(&enumerate_reps(&factor(65)).unwrap()),
            vec![(1, 4), (7, 2)]
        );
        assert_eq!(exhaustive(65), vec![(1, 4), (7, 2)]);
    }

    #[test]
    fn rejects_invalid_m() {
        assert!(enumerate_reps(&factor(21)).is_err());
        assert!(enumerate_reps(&factor(25)).is_err());
        assert!(enumerate_reps(&factor(1)).is_err());
    }

    #[test]
    fn rep_constructor_checks_identity() {
        assert!(TwoSquares::new(65, 7, 2).is_ok());
        assert!(TwoSquares::new(65, 8, 1).is_err());
        assert!(TwoSquares::new(65, 4, 0).is_err());
    }

    #[test]
    fn matches_exhaustive_search_below_2e4() {
        for m in 5..20_000u64 {
            let f = factor(m);
            if !is_valid_m(&f) {
                continue;
            }
            let reps = enumerate_reps(&f).unwrap();
            assert_eq!(reps.len(), 1 << (f.t() - 1), "m = {m}");
            assert_eq!(pairs(&reps), exhaustive(m), "m = {m}");
            assert!(reps.iter().all(|r| r.a.gcd(&r.b) == 1));
        }
    }

    proptest! {
        #[test]
        fn gaussian_mul_laws(
            a in (-1000i128..1000, -1000i128..1000),
            b in (-1000i128..1000, -1000i128..1000),
            c in (-1000i128..1000, -1000i128..1000),
        ) {
            let (a, b, c) = (GaussInt::new(a.0, a.1), GaussInt::new(b.0, b.1), GaussInt::new(c.0, c.1));
            prop_assert_eq!(a * b, b * a);
            prop_assert_eq!((a * b) * c, a * (b * c));
            prop_assert_eq!((a * b).norm(), a.norm() * b.norm());
            prop_assert!(a.norm() >= 0);
        }
    }
}
