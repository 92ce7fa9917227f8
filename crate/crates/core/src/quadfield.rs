//! Arithmetic in the maximal order `O_K = Z[(1+√m)/2]` of `K = Q(√m)`,
//! `m ≡ 1 (mod 4)`, and the fundamental unit via continued fractions.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{factor, isqrt};
use crate::{Error, InvalidReason, Result};

/// The element `(x + y√m)/2` of `O_K`; `x ≡ y (mod 2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadInt {
    x: BigInt,
    y: BigInt,
    m: u64,
}

impl QuadInt {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>, m: u64) -> Result<Self> {
        let (x, y) = (x.into(), y.into());
        if x.is_odd() != y.is_odd() {
            return Err(Error::NotIntegral {
                x: x.to_string(),
                y: y.to_string(),
            });
        }
        Ok(QuadInt { x, y, m })
    }

    pub(crate) fn new_unchecked(x: BigInt, y: BigInt, m: u64) -> Self {
        debug_assert!(x.is_odd() == y.is_odd());
        QuadInt { x, y, m }
    }

    /// The rational integer `n`.
    pub fn from_int(n: impl Into<BigInt>, m: u64) -> Self {
        QuadInt::new_unchecked(n.into() * 2, BigInt::zero(), m)
    }

    /// `u + v√m` with integer `u, v`.
    pub fn from_parts(u: impl Into<BigInt>, v: impl Into<BigInt>, m: u64) -> Self {
        QuadInt::new_unchecked(u.into() * 2, v.into() * 2, m)
    }

    pub fn one(m: u64) -> Self {
        QuadInt::from_int(1, m)
    }

    pub fn sqrt_m(m: u64) -> Self {
        QuadInt::from_parts(0, 1, m)
    }

    /// `(1 + √m)/2`.
    pub fn omega(m: u64) -> Self {
        QuadInt::new_unchecked(BigInt::one(), BigInt::one(), m)
    }

    pub fn x(&self) -> &BigInt {
        &self.x
    }

    pub fn y(&self) -> &BigInt {
        &self.y
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    fn same_field(&self, other: &QuadInt) -> Result<()> {
        if self.m == other.m {
            Ok(())
        } else {
            Err(Error::MixedField {
                left: self.m,
                right: other.m,
            })
        }
    }

    pub fn try_mul(&self, other: &QuadInt) -> Result<QuadInt> {
        self.same_field(other)?;
        Ok(self * other)
    }

    pub fn try_add(&self, other: &QuadInt) -> Result<QuadInt> {
        self.same_field(other)?;
        Ok(self + other)
    }

    /// The Galois conjugate `(x − y√m)/2`.
    pub fn conj(&self) -> QuadInt {
        QuadInt::new_unchecked(self.x.clone(), -&self.y, self.m)
    }

    pub fn norm(&self) -> BigInt {
        (&self.x * &self.x - BigInt::from(self.m) * &self.y * &self.y) / 4
    }

    pub fn trace(&self) -> &BigInt {
        &self.x
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.y.is_zero() && self.x == BigInt::from(2)
    }

    pub fn is_unit(&self) -> bool {
        self.norm().abs().is_one()
    }

    /// Rational integer value, if `y = 0`.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.y.is_zero().then(|| &self.x / 2)
    }

    /// Sign of the real number `(x + y√m)/2`, computed exactly.
    pub fn signum(&self) -> Ordering {
        let zero = BigInt::zero();
        match (self.x.cmp(&zero), self.y.cmp(&zero)) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (sx, sy) if sx == sy => sx,
            (sx, _) => {
                // x and y have opposite signs: |x| versus |y|√m decides
                let lhs = &self.x * &self.x;
                let rhs = BigInt::from(self.m) * &self.y * &self.y;
                match lhs.cmp(&rhs) {
                    Ordering::Greater => sx,
                    Ordering::Less => sx.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    /// Compare the real numbers `self` and `other`.
    pub fn cmp_real(&self, other: &QuadInt) -> Ordering {
        (self - other).signum()
    }

    pub fn pow(&self, mut k: u32) -> QuadInt {
        let mut base = self.clone();
        let mut acc = QuadInt::one(self.m);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self / other` when the quotient lies in `O_K`.
    pub fn div_exact(&self, other: &QuadInt) -> Option<QuadInt> {
        if self.m != other.m || other.is_zero() {
            return None;
        }
        let n = other.norm();
        let num = self * &other.conj();
        let (qx, rx) = num.x.div_rem(&n);
        let (qy, ry) = num.y.div_rem(&n);
        if !rx.is_zero() || !ry.is_zero() || qx.is_odd() != qy.is_odd() {
            return None;
        }
        Some(QuadInt::new_unchecked(qx, qy, self.m))
    }

    /// Approximate real value, for display only.
    pub fn to_f64(&self) -> f64 {
        let x: f64 = self.x.to_string().parse().unwrap_or(f64::NAN);
        let y: f64 = self.y.to_string().parse().unwrap_or(f64::NAN);
        (x + y * (self.m as f64).sqrt()) / 2.0
    }
}

impl Mul for &QuadInt {
    type Output = QuadInt;

    /// Panics if the operands live in different fields; see [`QuadInt::try_mul`].
    fn mul(self, rhs: &QuadInt) -> QuadInt {
        assert_eq!(self.m, rhs.m, "QuadInt: mixed fields");
        let m = BigInt::from(self.m);
        let x = (&self.x * &rhs.x + m * &self.y * &rhs.y) / 2;
        let y = (&self.x * &rhs.y + &self.y * &rhs.x) / 2;
        QuadInt::new_unchecked(x, y, self.m)
    }
}

impl Add for &QuadInt {
    type Output = QuadInt;

    fn add(self, rhs: &QuadInt) -> QuadInt {
        assert_eq!(self.m, rhs.m, "QuadInt: mixed fields");
        QuadInt::new_unchecked(&self.x + &rhs.x, &self.y + &rhs.y, self.m)
    }
}

impl Sub for &QuadInt {
    type Output = QuadInt;

    fn sub(self, rhs: &QuadInt) -> QuadInt {
        assert_eq!(self.m, rhs.m, "QuadInt: mixed fields");
        QuadInt::new_unchecked(&self.x - &rhs.x, &self.y - &rhs.y, self.m)
    }
}

impl Neg for &QuadInt {
    type Output = QuadInt;

    fn neg(self) -> QuadInt {
        QuadInt::new_unchecked(-&self.x, -&self.y, self.m)
    }
}

impl fmt::Display for QuadInt {
    /// `u + v√m` when both halves are integral, `(x + y√m)/2` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (num_x, num_y, den) = if self.x.is_even() {
            (&self.x / 2, &self.y / 2, false)
        } else {
            (self.x.clone(), self.y.clone(), true)
        };
        let body = if num_y.is_zero() {
            num_x.to_string()
        } else {
            let sign = if num_y.is_negative() { "-" } else { "+" };
            let coeff = num_y.abs();
            let coeff = if coeff.is_one() {
                String::new()
            } else {
                coeff.to_string()
            };
            if num_x.is_zero() {
                format!(
                    "{}{coeff}√{}",
                    if num_y.is_negative() { "-" } else { "" },
                    self.m
                )
            } else {
                format!("{num_x} {sign} {coeff}√{}", self.m)
            }
        };
        if den {
            write!(f, "({body})/2")
        } else {
            f.write_str(&body)
        }
    }
}

/// One period of the continued fraction of `(P₀ + √m)/Q₀`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CfCycle {
    pub m: u64,
    /// `(P, Q)` of the first reduced complete quotient, where the period starts.
    pub seed: (i64, i64),
    pub quotients: Vec<u64>,
}

impl CfCycle {
    pub fn period(&self) -> usize {
        self.quotients.len()
    }
}

/// The fundamental unit `ε > 1` of `O_K` together with its norm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalUnit {
    pub eps: QuadInt,
    pub norm: i32,
    pub cycle: CfCycle,
}

fn check_field_parameter(m: u64) -> Result<()> {
    let s = isqrt(m);
    if m < 5 || m % 4 != 1 || s * s == m || m > i64::MAX as u64 / 4 {
        return Err(Error::BadDiscriminant(m as i64));
    }
    if let Some(&(p, _)) = factor(m).factors().iter().find(|&&(_, e)| e > 1) {
        return Err(Error::InvalidM {
            m,
            reason: InvalidReason::NotSquarefree { prime: p },
        });
    }
    Ok(())
}

/// Expand `ω = (1 + √m)/2` over one period. The first complete quotient
/// that returns to `Q = 2` closes the period; the convergent just before it
/// yields `ε = p − qω̄`.
pub fn fundamental_unit(m: u64) -> Result<FundamentalUnit> {
    check_field_parameter(m)?;
    let s = isqrt(m) as i64;
    let mi = m as i64;
    let (mut p_cf, mut q_cf) = (1i64, 2i64);
    // convergents p_k/q_k, seeded with p₋₁ = 1, p₋₂ = 0, q₋₁ = 0, q₋₂ = 1
    let (mut p_prev, mut p_cur) = (BigInt::zero(), BigInt::one());
    let (mut q_prev, mut q_cur) = (BigInt::one(), BigInt::zero());
    let mut quotients = Vec::new();
    let mut seed = None;
    loop {
        let a = (p_cf + s) / q_cf;
        if seed.is_some() && q_cf == 2 {
            // this quotient closes the period and stays out of the convergents
            quotients.push(a as u64);
            break;
        }
        let p_next = &p_cur * a + &p_prev;
        let q_next = &q_cur * a + &q_prev;
        p_prev = std::mem::replace(&mut p_cur, p_next);
        q_prev = std::mem::replace(&mut q_cur, q_next);
        if seed.is_some() {
            quotients.push(a as u64);
        }
        p_cf = a * q_cf - p_cf;
        q_cf = (mi - p_cf * p_cf) / q_cf;
        seed.get_or_insert((p_cf, q_cf));
    }
    let seed = seed.expect("set on the first pass");
    let eps = QuadInt::new(&p_cur * 2 - &q_cur, q_cur.clone(), m)?;
    let norm = if quotients.len() % 2 == 0 { 1 } else { -1 };
    let actual = eps.norm();
    if actual != BigInt::from(norm) {
        return Err(Error::Inconsistency(format!(
            "unit of m = {m} has norm {actual}, period parity predicts {norm}"
        )));
    }
    Ok(FundamentalUnit {
        eps,
        norm,
        cycle: CfCycle { m, seed, quotients },
    })
}

/// Writes a unit as `sign · ε^k`; `None` if `eta` is not a unit.
pub fn solve_unit_equation(eta: &QuadInt, eps: &QuadInt) -> Option<(i8, i64)> {
    if eta.m() != eps.m()
        || !eta.is_unit()
        || eps.cmp_real(&QuadInt::one(eps.m())) != Ordering::Greater
    {
        return None;
    }
    let one = QuadInt::one(eta.m());
    let (sign, mut cur) = if eta.is_positive() {
        (1i8, eta.clone())
    } else {
        (-1i8, -eta)
    };
    let mut k = 0i64;
    while cur.cmp_real(&one) == Ordering::Greater {
        cur = cur.div_exact(eps)?;
        k += 1;
    }
    while cur.cmp_real(&one) == Ordering::Less {
        cur = &cur * eps;
        k -= 1;
    }
    cur.is_one().then_some((sign, k))
}

/// Choose the associate `±α·ε^k` that is positive with
/// `1 ≤ α/|σ(α)| < ε²`, giving generators a canonical form.
pub fn normalize_generator(alpha: &QuadInt, eps: &QuadInt) -> QuadInt {
    let mut a = if alpha.is_positive() {
        alpha.clone()
    } else {
        -alpha
    };
    let eps_conj_abs = if eps.conj().is_positive() {
        eps.conj()
    } else {
        -&eps.conj()
    };
    // α/|σα| ≥ 1  ⟺  α ≥ |σα|; multiplying by ε scales the ratio by ε²
    let ratio_ge = |a: &QuadInt, bound: &QuadInt| {
        let c = a.conj();
        let c_abs = if c.is_positive() { c } else { -&c };
        a.cmp_real(&(&c_abs * bound)) != Ordering::Less
    };
    let one = QuadInt::one(a.m());
    let eps_sq = eps * eps;
    while !ratio_ge(&a, &one) {
        a = &a * eps;
    }
    while ratio_ge(&a, &eps_sq) {
        a = &a * &eps_conj_abs;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::is_perfect_square_u64;
    use proptest::prelude::*;

    fn q(x: i64, y: i64, m: u64) -> QuadInt {
        QuadInt::new(x, y, m).unwrap()
    }

    /// Smallest `y ≥ 1` with `x² − m y² = ±4`, searched up to `ymax`.
    fn brute_force_unit(m: u64, ymax: u64) -> Option<(u64, u64, i32)> {
        for y in 1..=ymax {
            let my2 = m as u128 * y as u128 * y as u128;
            for (v, sign) in [(my2 - 4, -1), (my2 + 4, 1)] {
                if let Some(x) = u64::try_from(v).ok().and_then(is_perfect_square_u64) {
                    return Some((x, y, sign));
                }
            }
        }
        None
    }

    #[test]
    fn ring_examples() {
        let one = q(2, 0, 5);
        assert_eq!(&one * &one, one);
        assert_eq!(q(1, 1, 5).norm(), BigInt::from(-1));
        assert_eq!(q(1042, 24, 1885).norm(), BigInt::from(1));
        assert!(QuadInt::new(1, 2, 5).is_err());
        assert!(q(1, 1, 5).try_mul(&q(1, 1, 13)).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(q(1042, 24, 1885).to_string(), "521 + 12√1885");
        assert_eq!(q(1, 1, 5).to_string(), "(1 + √5)/2");
        assert_eq!(q(0, 2, 5).to_string(), "√5");
        assert_eq!(q(4, -2, 5).to_string(), "2 - √5");
    }

    #[test]
    fn fundamental_unit_examples() {
        let u = fundamental_unit(5).unwrap();
        assert_eq!((u.eps.clone(), u.norm), (q(1, 1, 5), -1));
        let u = fundamental_unit(65).unwrap();
        assert_eq!((u.eps.clone(), u.norm), (QuadInt::from_parts(8, 1, 65), -1));
        assert_eq!(u.cycle.quotients, vec![1, 1, 7]);
        let u = fundamental_unit(1885).unwrap();
        assert_eq!(
            (u.eps.clone(), u.norm),
            (QuadInt::from_parts(521, 12, 1885), 1)
        );
        // the square of 2√65 + 3√29, expanded by hand: 4·65 + 9·29 + 12√1885
        assert_eq!(4 * 65 + 9 * 29, 521);
        assert!(fundamental_unit(9).is_err());
        assert!(fundamental_unit(7).is_err());
    }

    #[test]
    fn cycle_returns_to_seed() {
        for m in [5u64, 13, 65, 85, 1885, 4181] {
            let u = fundamental_unit(m).unwrap();
            let s = isqrt(m) as i64;
            let (mut p, mut qq) = u.cycle.seed;
            for &a in &u.cycle.quotients {
                assert_eq!((p + s) / qq, a as i64);
                p = a as i64 * qq - p;
                qq = (m as i64 - p * p) / qq;
            }
            assert_eq!((p, qq), u.cycle.seed, "m = {m}");
        }
    }

    #[test]
    fn fundamental_unit_matches_brute_force() {
        // squarefree m ≡ 1 mod 4 whose unit has y ≤ 10⁵; the rest are
        // covered by the frozen table in the integration tests
        let mut checked = 0;
        for m in (5..2000u64).step_by(4) {
            let Ok(u) = fundamental_unit(m) else { continue };
            let Some((x, y, sign)) = brute_force_unit(m, 100_000) else {
                assert!(u.eps.y() > &BigInt::from(100_000));
                continue;
            };
            assert_eq!(u.eps, q(x as i64, y as i64, m), "m = {m}");
            assert_eq!(u.norm, sign);
            assert_eq!(u.norm, if u.cycle.period() % 2 == 0 { 1 } else { -1 });
            checked += 1;
        }
        assert!(checked > 200);
    }

    #[test]
    fn rejects_non_fundamental_parameters() {
        assert!(fundamental_unit(45).is_err());
        assert!(fundamental_unit(3).is_err());
        assert!(fundamental_unit(25).is_err());
    }

    #[test]
    fn no_unit_between_one_and_eps() {
        // every unit in (1, ε) would have a smaller y in x² − m y² = ±4
        for m in [5u64, 13, 17, 29, 37, 41, 53, 61, 65, 85] {
            let u = fundamental_unit(m).unwrap();
            let ymax: i64 = u.eps.y().try_into().unwrap();
            for y in 1..ymax {
                for x in -200i64..200 {
                    if (x - y) % 2 != 0 {
                        continue;
                    }
                    let v = q(x, y, m);
                    if v.is_unit() && v.is_positive() {
                        assert!(
                            v.cmp_real(&QuadInt::one(m)) != Ordering::Greater
                                || v.cmp_real(&u.eps) != Ordering::Less
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn unit_equation_examples() {
        let eps = fundamental_unit(5).unwrap().eps;
        assert_eq!(solve_unit_equation(&QuadInt::one(5), &eps), Some((1, 0)));
        assert_eq!(solve_unit_equation(&(&eps * &eps), &eps), Some((1, 2)));
        assert_eq!(
            solve_unit_equation(&QuadInt::from_parts(2, 1, 5), &eps),
            Some((1, 3))
        );
        assert_eq!(eps.pow(3), QuadInt::from_parts(2, 1, 5));
        assert_eq!(solve_unit_equation(&-&eps.conj(), &eps), Some((1, -1)));
        assert_eq!(solve_unit_equation(&QuadInt::from_int(2, 5), &eps), None);
    }

    #[test]
    fn normalized_generator_of_norm_29() {
        let eps = fundamental_unit(1885).unwrap().eps;
        let alpha = QuadInt::from_parts(87, 2, 1885);
        assert_eq!(alpha.norm(), BigInt::from(29));
        let twisted = -&(&alpha * &eps.pow(3));
        assert_eq!(normalize_generator(&twisted, &eps), alpha);
        assert_eq!(normalize_generator(&alpha.conj(), &eps), alpha);
    }

    fn element(m: u64) -> impl Strategy<Value = QuadInt> {
        (-10_000i64..10_000, -10_000i64..10_000)
            .prop_map(move |(x, y)| q(x, y + (x - y).rem_euclid(2), m))
    }

    proptest! {
        #[test]
        fn ring_laws(a in element(1885), b in element(1885), c in element(1885)) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(a.conj().conj(), a.clone());
            prop_assert_eq!((&a * &b).norm(), a.norm() * b.norm());
            prop_assert_eq!((&a * &a.conj()).as_integer(), Some(a.norm()));
            if !b.is_zero() {
                prop_assert_eq!((&a * &b).div_exact(&b), Some(a.clone()));
            }
        }
    }
}
