//! Integral ideals of `O_K` in Hermite normal form, and the ideals
//! `𝔞 = (2b + √m, a)`, `𝔭ⱼ` and `𝔟ₑ = ∏ 𝔭ⱼ^{eⱼ}`.
//!
//! An ideal is stored as `s·[a, (l + √m)/2]`: the Z-module with basis
//! `s·a` and `s·(l + √m)/2`, with `l` odd, `l² ≡ m (mod 4a)` and `l` in the
//! window `(−a, a]`. With that window two ideals are equal exactly when
//! their normal forms agree componentwise.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::forms::{self, QForm};
use crate::quadfield::QuadInt;
use crate::reps::TwoSquares;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IdealNF {
    #[serde(skip)]
    m: u64,
    /// Largest rational integer dividing the ideal.
    scale: u64,
    /// Norm of the primitive part.
    a: u64,
    l: i64,
}

/// Coordinates `(u, v)` of `u + v·ω`, `ω = (1 + √m)/2`.
fn coords(z: &QuadInt) -> (BigInt, BigInt) {
    ((z.x() - z.y()) / 2, z.y().clone())
}

/// Hermite normal form `{(d1, 0), (u0, d2)}` of the lattice spanned by
/// `vectors`, with `0 ≤ u0 < d1`.
fn hermite(mut vectors: Vec<(BigInt, BigInt)>) -> Option<(BigInt, BigInt, BigInt)> {
    // gather the gcd of the ω-coordinates into a single vector
    let mut pivot: Option<(BigInt, BigInt)> = None;
    let mut zero_v = Vec::new();
    for (u, v) in vectors.drain(..) {
        if v.is_zero() {
            zero_v.push(u);
            continue;
        }
        match pivot.take() {
            None => pivot = Some((u, v)),
            Some((pu, pv)) => {
                let e = pv.extended_gcd(&v);
                let (g, x, y) = (e.gcd, e.x, e.y);
                // [x y; -v/g pv/g] is unimodular
                let new_pivot = (&x * &pu + &y * &u, g.clone());
                let rest = (-(&v / &g) * &pu + (&pv / &g) * &u, BigInt::zero());
                zero_v.push(rest.0);
                pivot = Some(new_pivot);
            }
        }
    }
    let (mut u0, mut d2) = pivot?;
    let mut d1 = zero_v
        .into_iter()
        .fold(BigInt::zero(), |acc, u| acc.gcd(&u));
    if d1.is_zero() {
        return None;
    }
    if d2.is_negative() {
        d2 = -d2;
        u0 = -u0;
    }
    d1 = d1.abs();
    u0 = u0.mod_floor(&d1);
    Some((d1, u0, d2))
}

impl IdealNF {
    /// Build `scale·[a, (l + √m)/2]`, checking `l` odd and `l² ≡ m (mod 4a)`.
    pub fn new(m: u64, scale: u64, a: u64, l: i64) -> Result<Self> {
        let bad = || Error::Inconsistency(format!("[{a}, ({l} + √{m})/2] is not an ideal"));
        if a == 0 || scale == 0 || l.rem_euclid(2) != 1 {
            return Err(bad());
        }
        let four_a = 4 * a as i128;
        if (l as i128 * l as i128 - m as i128).rem_euclid(four_a) != 0 {
            return Err(bad());
        }
        let two_a = 2 * a as i64;
        let mut l = l.rem_euclid(two_a);
        if l > a as i64 {
            l -= two_a;
        }
        Ok(IdealNF { m, scale, a, l })
    }

    pub fn unit(m: u64) -> Self {
        IdealNF {
            m,
            scale: 1,
            a: 1,
            l: 1,
        }
    }

    /// The ideal generated (over `O_K`) by the given elements.
    pub fn from_generators(m: u64, gens: &[QuadInt]) -> Result<Self> {
        let omega = QuadInt::omega(m);
        let mut vectors = Vec::with_capacity(2 * gens.len());
        for g in gens {
            if g.m() != m {
                return Err(Error::MixedField {
                    left: m,
                    right: g.m(),
                });
            }
            vectors.push(coords(g));
            vectors.push(coords(&(g * &omega)));
        }
        Self::from_lattice(m, vectors)
    }

    pub fn principal(alpha: &QuadInt) -> Result<Self> {
        Self::from_generators(alpha.m(), std::slice::from_ref(alpha))
    }

    /// Normal form of an O_K-ideal given by a spanning set of its Z-module.
    fn from_lattice(m: u64, vectors: Vec<(BigInt, BigInt)>) -> Result<Self> {
        let (d1, u0, d2) = hermite(vectors)
            .ok_or_else(|| Error::Inconsistency("zero or rank-one ideal lattice".into()))?;
        let (a, r) = d1.div_rem(&d2);
        let (half, r2) = u0.div_rem(&d2);
        if !r.is_zero() || !r2.is_zero() {
            return Err(Error::Inconsistency(format!(
                "lattice ({d1}, 0), ({u0}, {d2}) is not an ideal of m = {m}"
            )));
        }
        let conv = |v: BigInt| v.to_u64().ok_or_else(|| Error::Overflow(v.to_string()));
        let two = BigInt::from(2);
        let l = (half * &two + 1u32).mod_floor(&(&a * &two));
        let l = l.to_i64().ok_or_else(|| Error::Overflow(l.to_string()))?;
        IdealNF::new(m, conv(d2)?, conv(a)?, l)
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn scale(&self) -> u64 {
        self.scale
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn l(&self) -> i64 {
        self.l
    }

    pub fn norm(&self) -> u128 {
        self.scale as u128 * self.scale as u128 * self.a as u128
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.scale == 1 && self.a == 1
    }

    /// Z-basis `s·a`, `s·(l + √m)/2`.
    pub fn basis(&self) -> [QuadInt; 2] {
        let s = BigInt::from(self.scale);
        [
            QuadInt::from_int(&s * self.a, self.m),
            QuadInt::new_unchecked(&s * self.l, s, self.m),
        ]
    }

    pub fn contains(&self, z: &QuadInt) -> bool {
        if z.m() != self.m {
            return false;
        }
        // z = x·s·a + y·s·(l + √m)/2 with x, y ∈ Z
        let s = BigInt::from(self.scale);
        let (zx, zy) = (z.x(), z.y());
        let (y, ry) = zy.div_rem(&s);
        if !ry.is_zero() {
            return false;
        }
        let rest = zx - &y * &s * self.l;
        rest.is_multiple_of(&(&s * self.a * 2))
    }

    fn same_field(&self, other: &IdealNF) -> Result<()> {
        if self.m == other.m {
            Ok(())
        } else {
            Err(Error::MixedField {
                left: self.m,
                right: other.m,
            })
        }
    }

    /// Product via the four products of basis elements.
    pub fn mul(&self, other: &IdealNF) -> Result<IdealNF> {
        self.same_field(other)?;
        let [x1, x2] = self.basis();
        let [y1, y2] = other.basis();
        let vectors = [&x1 * &y1, &x1 * &y2, &x2 * &y1, &x2 * &y2]
            .iter()
            .map(coords)
            .collect();
        Self::from_lattice(self.m, vectors)
    }

    pub fn conj(&self) -> IdealNF {
        IdealNF::new(self.m, self.scale, self.a, -self.l).expect("conjugate of an ideal")
    }

    /// The form `(a, l, (l² − m)/(4a))` of the primitive part.
    pub fn to_form(&self) -> Result<QForm> {
        QForm::from_ab(self.a as i64, self.l, self.m as i64)
    }

    /// An ideal whose form is properly equivalent to `f`.
    pub fn from_form(f: &QForm) -> Result<IdealNF> {
        let g = forms::with_positive_a(f)?;
        IdealNF::new(g.disc() as u64, 1, g.a() as u64, g.b())
    }

    /// Primitive part; same class.
    pub fn primitive(&self) -> IdealNF {
        IdealNF { scale: 1, ..*self }
    }
}

impl fmt::Display for IdealNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.scale != 1 {
            write!(f, "{}·", self.scale)?;
        }
        write!(f, "[{}, ({} + √{})/2]", self.a, self.l, self.m)
    }
}

/// `𝔞 = (a, 2b + √m)` for the representation `m = a² + 4b²`.
pub fn ideal_a(rep: &TwoSquares) -> Result<IdealNF> {
    let rep = TwoSquares::new(rep.m, rep.a, rep.b)?;
    let m = rep.m;
    IdealNF::from_generators(m, &[QuadInt::from_int(rep.a, m), two_b_plus_sqrt_m(&rep)])
}

/// `2b + √m`, whose principal ideal is `𝔞²`.
pub fn two_b_plus_sqrt_m(rep: &TwoSquares) -> QuadInt {
    QuadInt::from_parts(2 * rep.b, 1, rep.m)
}

/// Whether `ideal_a(rep)²` equals `(2b + √m)`.
pub fn verify_square_principal(rep: &TwoSquares) -> Result<bool> {
    let a = ideal_a(rep)?;
    Ok(a.mul(&a)? == IdealNF::principal(&two_b_plus_sqrt_m(rep))?)
}

/// The prime `𝔭` above `p | m`; `𝔭² = (p)`.
pub fn ramified_prime(m: u64, p: u64) -> Result<IdealNF> {
    if p < 2 || !m.is_multiple_of(p) || !crate::arith::is_prime(p) {
        return Err(Error::NotRamified { m, p });
    }
    IdealNF::from_generators(m, &[QuadInt::from_int(p, m), QuadInt::sqrt_m(m)])
}

/// `𝔟ₑ = ∏ 𝔭ⱼ^{eⱼ}` over the primes of `m` in ascending order.
pub fn ideal_b(m: u64, primes: &[u64], e: &[bool]) -> Result<IdealNF> {
    if primes.len() != e.len() {
        return Err(Error::ExponentLength {
            expected: primes.len(),
            got: e.len(),
        });
    }
    let mut acc = IdealNF::unit(m);
    for (&p, &bit) in primes.iter().zip(e) {
        if bit {
            acc = acc.mul(&ramified_prime(m, p)?)?;
        }
    }
    Ok(acc)
}

/// Bit vector of `mask` over `t` primes, bit `j` ↔ `pⱼ`.
pub fn exponent_vector(mask: u64, t: usize) -> Vec<bool> {
    (0..t).map(|j| mask >> j & 1 == 1).collect()
}

impl IdealNF {
    /// `(n)` for a positive rational integer `n`.
    pub fn rational(m: u64, n: u64) -> IdealNF {
        IdealNF {
            m,
            scale: n,
            a: 1,
            l: 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::factor;
    use crate::forms::{equivalent, Strictness};
    use crate::reps::enumerate_reps;
    use proptest::prelude::*;

    fn rep(m: u64, a: u64, b: u64) -> TwoSquares {
        TwoSquares::new(m, a, b).unwrap()
    }

    /// Every `l` in the window satisfying the congruences, by exhaustion.
    fn l_by_search(m: u64, a: u64, two_b: i64) -> Vec<i64> {
        let a_i = a as i64;
        (-a_i + 1..=a_i)
            .filter(|l| l.rem_euclid(2) == 1)
            .filter(|l| (l - two_b).rem_euclid(a_i) == 0)
            .filter(|l| (l * l - m as i64).rem_euclid(4 * a_i) == 0)
            .collect()
    }

    #[test]
    fn ideal_a_examples() {
        assert_eq!(ideal_a(&rep(5, 1, 1)).unwrap(), IdealNF::unit(5));
        let i = ideal_a(&rep(1885, 43, 3)).unwrap();
        assert_eq!(l_by_search(1885, 43, 6), vec![-37]);
        assert_eq!((i.a(), i.l(), i.scale()), (43, -37, 1));
        let i = ideal_a(&rep(65, 7, 2)).unwrap();
        assert_eq!(l_by_search(65, 7, 4), vec![-3]);
        assert_eq!((i.a(), i.l()), (7, -3));
        assert!(ideal_a(&TwoSquares { a: 3, b: 1, m: 65 }).is_err());
    }

    #[test]
    fn square_principal_examples() {
        assert!(verify_square_principal(&rep(5, 1, 1)).unwrap());
        for r in enumerate_reps(&factor(1885)).unwrap() {
            assert!(verify_square_principal(&r).unwrap());
        }
        assert!(verify_square_principal(&rep(65, 7, 2)).unwrap());
    }

    #[test]
    fn ramified_examples() {
        let p5 = ramified_prime(1885, 5).unwrap();
        assert_eq!((p5.a(), p5.l()), (5, 5));
        assert_eq!(p5.mul(&p5).unwrap(), IdealNF::rational(1885, 5));
        assert_eq!(p5.to_form().unwrap(), QForm::new(5, 5, -93).unwrap());
        let p29 = ramified_prime(1885, 29).unwrap();
        assert_eq!(
            p29,
            IdealNF::principal(&QuadInt::from_parts(87, 2, 1885)).unwrap()
        );
        assert!(ramified_prime(1885, 7).is_err());
    }

    #[test]
    fn ideal_b_examples() {
        let primes = [5, 13, 29];
        assert!(ideal_b(1885, &primes, &[false; 3]).unwrap().is_unit_ideal());
        let all = ideal_b(1885, &primes, &[true; 3]).unwrap();
        assert_eq!(all, IdealNF::principal(&QuadInt::sqrt_m(1885)).unwrap());
        assert_eq!(all.norm(), 1885);
        assert_eq!(
            ideal_b(1885, &primes, &[true, false, false]).unwrap(),
            ramified_prime(1885, 5).unwrap()
        );
        assert!(ideal_b(1885, &primes, &[true]).is_err());
    }

    #[test]
    fn form_dictionary() {
        let m = 1885;
        assert_eq!(
            IdealNF::unit(m).to_form().unwrap(),
            QForm::principal(m).unwrap()
        );
        let f = QForm::new(-5, 5, 93).unwrap();
        let i = IdealNF::from_form(&f).unwrap();
        assert!(equivalent(&i.to_form().unwrap(), &f, Strictness::Narrow).unwrap());
    }

    #[test]
    fn contains_and_norm() {
        let i = ideal_a(&rep(1885, 43, 3)).unwrap();
        assert!(i.contains(&QuadInt::from_int(43, 1885)));
        assert!(i.contains(&QuadInt::from_parts(6, 1, 1885)));
        assert!(!i.contains(&QuadInt::one(1885)));
        assert_eq!(i.mul(&i.conj()).unwrap(), IdealNF::rational(1885, 43));
    }

    fn ideal_strategy(m: u64) -> impl Strategy<Value = IdealNF> {
        // primitive ideals from the forms (a, b, ·) with small a
        (1u64..400, 0i64..400).prop_filter_map("no such ideal", move |(a, k)| {
            let l = 2 * k + 1;
            IdealNF::new(m, 1, a, l).ok()
        })
    }

    proptest! {
        #[test]
        fn multiplication_laws(i in ideal_strategy(1885), j in ideal_strategy(1885), k in ideal_strategy(1885)) {
            prop_assert_eq!(i.mul(&j).unwrap(), j.mul(&i).unwrap());
            prop_assert_eq!(i.mul(&j).unwrap().mul(&k).unwrap(), i.mul(&j.mul(&k).unwrap()).unwrap());
            prop_assert_eq!(i.mul(&i.conj()).unwrap(), IdealNF::rational(1885, i.norm() as u64));
            prop_assert_eq!(i.mul(&j).unwrap().norm(), i.norm() * j.norm());
            let back = IdealNF::from_form(&i.to_form().unwrap()).unwrap();
            prop_assert_eq!(back, i);
        }
    }
}
