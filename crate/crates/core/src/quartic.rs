//! Cyclic quartic fields of conductor `m`: counting them through exponent
//! vectors of quartic characters, and the explicit generators
//! `√(m + 2b√m)` attached to the representations `m = a² + 4b²`.
//!
//! The field discriminant itself is not computed. `disc_check` tests the
//! necessary condition that the polynomial discriminant is `m³` times a
//! nonzero square.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::arith::is_perfect_square;
use crate::quadfield::QuadInt;
use crate::reps::TwoSquares;
use crate::{Error, Result};

/// Exponents `eⱼ ∈ Z/4` of `χ = ∏ χⱼ^{eⱼ}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CharVector(pub Vec<u8>);

impl CharVector {
    pub fn new(e: Vec<u8>) -> Self {
        CharVector(e.into_iter().map(|x| x % 4).collect())
    }

    /// Order of `χ`: the lcm of the component orders.
    pub fn order(&self) -> u8 {
        self.0
            .iter()
            .map(|&e| match e % 4 {
                0 => 1,
                2 => 2,
                _ => 4,
            })
            .fold(1, |acc, o| acc.lcm(&o))
    }

    /// `χ³ = χ⁻¹`.
    pub fn inverse(&self) -> Self {
        CharVector(self.0.iter().map(|&e| (4 - e % 4) % 4).collect())
    }

    pub fn all_odd(&self) -> bool {
        self.0.iter().all(|e| e % 2 == 1)
    }
}

impl fmt::Display for CharVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u8::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// The characters with every exponent odd, paired as `{χ, χ³}`; one pair per
/// cyclic quartic field of discriminant `m³`. The first entry of each pair
/// starts with exponent 1.
pub fn enumerate_quartic_characters(t: usize) -> Vec<(CharVector, CharVector)> {
    if t == 0 {
        return Vec::new();
    }
    (0u64..1 << (t - 1))
        .map(|mask| {
            let mut e = vec![1u8];
            e.extend((0..t - 1).map(|j| if mask >> j & 1 == 1 { 3 } else { 1 }));
            let chi = CharVector(e);
            let inv = chi.inverse();
            (chi, inv)
        })
        .collect()
}

/// `x⁴ + p·x² + q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct QuarticPoly {
    #[serde(serialize_with = "crate::verify::ser_bigint")]
    pub p: BigInt,
    #[serde(serialize_with = "crate::verify::ser_bigint")]
    pub q: BigInt,
}

impl QuarticPoly {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Self {
        QuarticPoly {
            p: p.into(),
            q: q.into(),
        }
    }

    /// Coefficients, constant term first.
    pub fn coefficients(&self) -> [BigInt; 5] {
        [
            self.q.clone(),
            BigInt::zero(),
            self.p.clone(),
            BigInt::zero(),
            BigInt::from(1),
        ]
    }

    /// Discriminant as the resultant of `f` and `f'` (monic, degree 4, so
    /// no sign or leading-coefficient correction).
    pub fn discriminant(&self) -> BigInt {
        let f = self.coefficients();
        let df: Vec<BigInt> = (1..5).map(|i| &f[i] * i).collect();
        resultant(&f, &df)
    }

    /// Irreducibility over Q. A monic `x⁴ + px² + q` factors over Z only as
    /// `(x² + v)(x² + w)` (so `p² − 4q` is a square) or as
    /// `(x² + cx + s)(x² − cx + s)` (so `q = s²` and `2s − p = c²`).
    pub fn is_irreducible(&self) -> bool {
        if self.q.is_zero() {
            return false;
        }
        if is_perfect_square(&(&self.p * &self.p - &self.q * 4)).is_some() {
            return false;
        }
        match is_perfect_square(&self.q) {
            None => true,
            Some(s) => [s.clone(), -s]
                .iter()
                .all(|s| is_perfect_square(&(s * 2 - &self.p)).is_none()),
        }
    }
}

impl fmt::Display for QuarticPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = |v: &BigInt| if v.is_negative() { "-" } else { "+" };
        write!(
            f,
            "x^4 {} {}x^2 {} {}",
            sign(&self.p),
            self.p.abs(),
            sign(&self.q),
            self.q.abs()
        )
    }
}

/// Determinant of an integer matrix by fraction-free (Bareiss) elimination.
fn determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    a[n - 1][n - 1].clone() * sign
}

/// Resultant of two polynomials (coefficients constant term first) via the
/// Sylvester matrix.
pub fn resultant(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let (n, k) = (f.len() - 1, g.len() - 1);
    let size = n + k;
    let mut rows = Vec::with_capacity(size);
    for i in 0..k {
        let mut row = vec![BigInt::zero(); size];
        for (j, c) in f.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..n {
        let mut row = vec![BigInt::zero(); size];
        for (j, c) in g.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    determinant(rows)
}

/// `x⁴ − 2m·x² + a²m`, the minimal polynomial of `√(m + 2b√m)`.
pub fn min_poly(m: u64, rep: &TwoSquares) -> Result<QuarticPoly> {
    let rep = TwoSquares::new(m, rep.a, rep.b)?;
    let poly = QuarticPoly::new(-2 * BigInt::from(m), BigInt::from(rep.a).pow(2) * m);
    // θ² = m + 2b√m must be a root of y² + p·y + q
    let theta_sq = QuadInt::from_parts(m, 2 * rep.b, m);
    let value = &(&theta_sq * &theta_sq)
        + &(&(&theta_sq * &QuadInt::from_int(poly.p.clone(), m))
            + &QuadInt::from_int(poly.q.clone(), m));
    if !value.is_zero() {
        return Err(Error::Inconsistency(format!(
            "{poly} does not vanish at √(m + 2b√m)"
        )));
    }
    Ok(poly)
}

/// True iff the polynomial discriminant is `m³` times a nonzero square.
pub fn disc_check(poly: &QuarticPoly, m: u64) -> bool {
    let d = poly.discriminant();
    if d.is_zero() {
        return false;
    }
    let m3 = BigInt::from(m).pow(3);
    let (quot, rem) = d.div_rem(&m3);
    rem.is_zero() && is_perfect_square(&quot).is_some()
}

/// Element of the free Z-module on `√S`, `S ⊆ {A, B, C}`; index bit 0 ↔ A,
/// bit 1 ↔ B, bit 2 ↔ C.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Radicals {
    coeff: [BigInt; 8],
}

impl Radicals {
    fn zero() -> Self {
        Radicals {
            coeff: Default::default(),
        }
    }

    fn term(index: usize, c: BigInt) -> Self {
        let mut r = Radicals::zero();
        r.coeff[index] = c;
        r
    }

    fn add(&self, other: &Radicals) -> Radicals {
        let mut r = self.clone();
        for (x, y) in r.coeff.iter_mut().zip(&other.coeff) {
            *x += y;
        }
        r
    }

    fn scale(&self, k: &BigInt) -> Radicals {
        let mut r = self.clone();
        for x in r.coeff.iter_mut() {
            *x *= k;
        }
        r
    }

    /// `√S·√T = (∏_{S∩T} value)·√(S △ T)`.
    fn mul(&self, other: &Radicals, values: &[BigInt; 3]) -> Radicals {
        let mut r = Radicals::zero();
        for i in 0..8 {
            if self.coeff[i].is_zero() {
                continue;
            }
            for j in 0..8 {
                if other.coeff[j].is_zero() {
                    continue;
                }
                let common = i & j;
                let mut c = &self.coeff[i] * &other.coeff[j];
                for (bit, v) in values.iter().enumerate() {
                    if common >> bit & 1 == 1 {
                        c *= v;
                    }
                }
                r.coeff[i ^ j] += c;
            }
        }
        r
    }
}

/// Expands `2(x√A + y√B)(x√A + z√C)` and `(x√A + y√B + z√C)²` over the
/// radical basis and compares them. Fails with
/// [`Error::ConstraintUnsatisfied`] unless `Ax² − By² − Cz² = 0` and
/// `A, B, C ≥ 0`.
pub fn legendre_identity_check(a: i64, b: i64, c: i64, x: i64, y: i64, z: i64) -> Result<bool> {
    let big = |v: i64| BigInt::from(v);
    let constraint = big(a) * x * x - big(b) * y * y - big(c) * z * z;
    if a < 0 || b < 0 || c < 0 || !constraint.is_zero() {
        return Err(Error::ConstraintUnsatisfied(format!(
            "A x² − B y² − C z² = {constraint} for (A, B, C) = ({a}, {b}, {c})"
        )));
    }
    let values = [big(a), big(b), big(c)];
    let sa = Radicals::term(0b001, big(x));
    let sb = Radicals::term(0b010, big(y));
    let sc = Radicals::term(0b100, big(z));
    let lhs = sa.add(&sb).mul(&sa.add(&sc), &values).scale(&big(2));
    let sum = sa.add(&sb).add(&sc);
    let rhs = sum.mul(&sum, &values);
    Ok(lhs == rhs)
}

/// Checks `2(√m + a)(√m + 2b) = (√m + a + 2b)²` in `O_K`, so that
/// `m + 2b√m` and `2m + 2a√m` differ by a square factor in `K`.
pub fn same_field_check(m: u64, rep: &TwoSquares) -> bool {
    if TwoSquares::new(m, rep.a, rep.b).is_err() {
        return false;
    }
    let sqrt_m = QuadInt::sqrt_m(m);
    let a = QuadInt::from_int(rep.a, m);
    let two_b = QuadInt::from_int(2 * rep.b, m);
    let lhs = &(&QuadInt::from_int(2, m) * &(&sqrt_m + &a)) * &(&sqrt_m + &two_b);
    let sum = &(&sqrt_m + &a) + &two_b;
    lhs == &sum * &sum
}
