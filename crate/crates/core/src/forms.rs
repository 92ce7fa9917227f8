//! Indefinite binary quadratic forms `ax² + bxy + cy²` of discriminant
//! `D = b² − 4ac = m`, used as the computational model of ideal classes of
//! the maximal order.
//!
//! Reduction follows the usual right-neighbour (rho) step: for a reduced
//! form the step stays inside the finite set of reduced forms of the
//! discriminant, and the reduced forms of one proper equivalence class make
//! up exactly one cycle. Classes are therefore labelled by the
//! lexicographically least form of their cycle.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::arith::{ext_gcd, isqrt};
use crate::quadfield::QuadInt;
use crate::{Error, Result};

const MAX_REDUCTION_STEPS: usize = 100_000;

/// A primitive form with positive non-square discriminant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QForm {
    a: i64,
    b: i64,
    c: i64,
}

impl QForm {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        let d = b as i128 * b as i128 - 4 * a as i128 * c as i128;
        if d <= 0 || d > i64::MAX as i128 / 4 || isqrt(d as u64).pow(2) == d as u64 {
            return Err(Error::BadDiscriminant(
                d.clamp(i64::MIN as i128, i64::MAX as i128) as i64,
            ));
        }
        if a.gcd(&b).gcd(&c) != 1 {
            return Err(Error::NonPrimitive { a, b, c });
        }
        Ok(QForm { a, b, c })
    }

    /// Build from `a, b`, solving for `c`.
    pub fn from_ab(a: i64, b: i64, d: i64) -> Result<Self> {
        let num = b as i128 * b as i128 - d as i128;
        if a == 0 || num % (4 * a as i128) != 0 {
            return Err(Error::Inconsistency(format!(
                "no form ({a}, {b}, ·) of discriminant {d}"
            )));
        }
        QForm::new(a, b, narrow_i64(num / (4 * a as i128))?)
    }

    /// `(1, 1, (1 − m)/4)`, the identity class for odd discriminants.
    pub fn principal(m: u64) -> Result<Self> {
        QForm::from_ab(1, 1, m as i64)
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn coefficients(&self) -> (i64, i64, i64) {
        (self.a, self.b, self.c)
    }

    /// `0 < b < √D` and `√D − b < 2|a| < √D + b`.
    pub fn is_reduced(&self) -> bool {
        let s = isqrt(self.disc() as u64) as i64;
        let a2 = 2 * self.a.abs();
        0 < self.b && self.b <= s && a2 + self.b > s && a2 - self.b <= s
    }

    /// `(a, −b, c)`, the inverse class.
    pub fn inverse(&self) -> QForm {
        QForm {
            a: self.a,
            b: -self.b,
            c: self.c,
        }
    }

    /// `(−a, b, −c)`: same ideal class up to a generator of negative norm.
    pub fn negate(&self) -> QForm {
        QForm {
            a: -self.a,
            b: self.b,
            c: -self.c,
        }
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        BigInt::from(self.a) * x * x + BigInt::from(self.b) * x * y + BigInt::from(self.c) * y * y
    }

    /// The form `(x, y) ↦ F(t·(x, y))`.
    pub fn transform(&self, t: &Transform) -> Result<QForm> {
        let [[p, q], [r, s]] = &t.0;
        let (a, b, c) = (
            BigInt::from(self.a),
            BigInt::from(self.b),
            BigInt::from(self.c),
        );
        let na = self.eval(p, r);
        let nb = &a * p * q * 2 + &b * (p * s + q * r) + &c * r * s * 2;
        let nc = self.eval(q, s);
        let conv = |v: BigInt| i64::try_from(v).map_err(|e| Error::Overflow(e.to_string()));
        QForm::new(conv(na)?, conv(nb)?, conv(nc)?)
    }
}

impl fmt::Display for QForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

impl Serialize for QForm {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        [self.a.to_string(), self.b.to_string(), self.c.to_string()].serialize(ser)
    }
}

fn narrow_i64(v: i128) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::Overflow(format!("{v} does not fit in 64 bits")))
}

/// A matrix in `SL₂(Z)` acting on forms by substitution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transform(pub [[BigInt; 2]; 2]);

impl Transform {
    pub fn identity() -> Self {
        Transform([
            [BigInt::one(), BigInt::zero()],
            [BigInt::zero(), BigInt::one()],
        ])
    }

    pub fn from_i64(m: [[i64; 2]; 2]) -> Self {
        Transform(m.map(|row| row.map(BigInt::from)))
    }

    pub fn det(&self) -> BigInt {
        let [[p, q], [r, s]] = &self.0;
        p * s - q * r
    }

    pub fn then(&self, other: &Transform) -> Transform {
        let a = &self.0;
        let b = &other.0;
        let entry = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
        Transform([[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]])
    }
}

/// Narrow (proper, `SL₂`) or wide (ordinary ideal class) equivalence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strictness {
    Narrow,
    Wide,
}

/// One rho step. Returns the neighbour and the `s` of the substitution
/// matrix `[[0, −1], [1, s]]`.
fn rho_step(f: &QForm, sqrt_floor: i64) -> Result<(QForm, i64)> {
    let (b, c) = (f.b as i128, f.c as i128);
    let d = f.disc() as i128;
    let abs_c = c.abs();
    let two_c = 2 * abs_c;
    let s = sqrt_floor as i128;
    // the unique b' ≡ −b (mod 2c) in the window prescribed by |c|
    let nb = if abs_c > s {
        let r = (-b).rem_euclid(two_c);
        if r > abs_c {
            r - two_c
        } else {
            r
        }
    } else {
        s - (s + b).rem_euclid(two_c)
    };
    let nc = (nb * nb - d) / (4 * c);
    let step = (nb + b) / (2 * c);
    Ok((
        QForm {
            a: f.c,
            b: narrow_i64(nb)?,
            c: narrow_i64(nc)?,
        },
        narrow_i64(step)?,
    ))
}

pub fn rho(f: &QForm) -> Result<QForm> {
    rho_step(f, isqrt(f.disc() as u64) as i64).map(|(g, _)| g)
}

fn step_matrix(s: i64) -> Transform {
    Transform::from_i64([[0, -1], [1, s]])
}

/// Reduce `f`; the transform `t` satisfies `f.transform(t) == reduced`.
pub fn reduce(f: &QForm) -> Result<(QForm, Transform)> {
    let sqrt_floor = isqrt(f.disc() as u64) as i64;
    let mut cur = *f;
    let mut t = Transform::identity();
    for _ in 0..MAX_REDUCTION_STEPS {
        if cur.is_reduced() {
            return Ok((cur, t));
        }
        let (next, s) = rho_step(&cur, sqrt_floor)?;
        t = t.then(&step_matrix(s));
        cur = next;
    }
    Err(Error::Inconsistency(format!(
        "reduction of {f} did not terminate"
    )))
}

/// Reduce without tracking the transform.
pub fn reduced_form(f: &QForm) -> Result<QForm> {
    let sqrt_floor = isqrt(f.disc() as u64) as i64;
    let mut cur = *f;
    for _ in 0..MAX_REDUCTION_STEPS {
        if cur.is_reduced() {
            return Ok(cur);
        }
        cur = rho_step(&cur, sqrt_floor)?.0;
    }
    Err(Error::Inconsistency(format!(
        "reduction of {f} did not terminate"
    )))
}

/// The cycle of reduced forms through `reduce(f)`, starting there.
pub fn cycle(f: &QForm) -> Result<Vec<QForm>> {
    let start = reduced_form(f)?;
    let sqrt_floor = isqrt(start.disc() as u64) as i64;
    let mut out = vec![start];
    let mut cur = rho_step(&start, sqrt_floor)?.0;
    while cur != start {
        if out.len() > MAX_REDUCTION_STEPS {
            return Err(Error::Inconsistency(format!("cycle of {f} did not close")));
        }
        out.push(cur);
        cur = rho_step(&cur, sqrt_floor)?.0;
    }
    Ok(out)
}

/// A properly equivalent form with positive first coefficient.
pub fn with_positive_a(f: &QForm) -> Result<QForm> {
    if f.a > 0 {
        return Ok(*f);
    }
    // first coefficients alternate in sign along a reduced cycle
    cycle(f)?
        .into_iter()
        .find(|g| g.a > 0)
        .ok_or_else(|| Error::Inconsistency(format!("cycle of {f} has no positive form")))
}

/// Gauss composition (Dirichlet's united forms); the result is reduced.
pub fn compose(f: &QForm, g: &QForm) -> Result<QForm> {
    if f.disc() != g.disc() {
        return Err(Error::DiscriminantMismatch {
            left: f.disc(),
            right: g.disc(),
        });
    }
    let d = f.disc() as i128;
    let f = with_positive_a(f)?;
    let g = with_positive_a(g)?;
    let (a1, b1) = (f.a as i128, f.b as i128);
    let (a2, b2, c2) = (g.a as i128, g.b as i128, g.c as i128);
    let s = (b1 + b2) / 2;
    let (d1, _, y) = ext_gcd(a1, a2);
    let (e, p, q) = ext_gcd(d1, s);
    // e = u·a1 + v·a2 + w·s
    let (v, w) = (p * y, q);
    let a3 = (a1 / e) * (a2 / e);
    let mut b3 = b2 + 2 * (a2 / e) * (v * (s - b2) - w * c2);
    b3 = b3.rem_euclid(2 * a3);
    if b3 > a3 {
        b3 -= 2 * a3;
    }
    let num = b3 * b3 - d;
    if num % (4 * a3) != 0 {
        return Err(Error::Inconsistency(format!(
            "composition of {f} and {g} failed"
        )));
    }
    let h = QForm::new(
        narrow_i64(a3)?,
        narrow_i64(b3)?,
        narrow_i64(num / (4 * a3))?,
    )?;
    reduced_form(&h)
}

/// Proper (narrow) or ordinary (wide) equivalence.
pub fn equivalent(f: &QForm, g: &QForm, strictness: Strictness) -> Result<bool> {
    if f.disc() != g.disc() {
        return Err(Error::DiscriminantMismatch {
            left: f.disc(),
            right: g.disc(),
        });
    }
    let cyc = cycle(f)?;
    let target = reduced_form(g)?;
    if cyc.contains(&target) {
        return Ok(true);
    }
    Ok(strictness == Strictness::Wide && cyc.contains(&reduced_form(&g.negate())?))
}

/// A generator of the ideal `[|a|, (b + √m)/2]` attached to `f` when that
/// ideal is principal, found by following reduction and the cycle until a
/// form with first coefficient ±1 appears.
///
/// If `f ∘ T` has first coefficient ±1 then `α = T₀₀·a + T₁₀·(b + √m)/2`
/// lies in the ideal and has norm `±a`, so it generates it.
pub fn principal_generator(f: &QForm) -> Result<Option<QuadInt>> {
    let m = f.disc() as u64;
    let sqrt_floor = isqrt(m) as i64;
    let (start, mut t) = reduce(f)?;
    let mut cur = start;
    loop {
        if cur.a.abs() == 1 {
            break;
        }
        let (next, s) = rho_step(&cur, sqrt_floor)?;
        t = t.then(&step_matrix(s));
        cur = next;
        if cur == start {
            return Ok(None);
        }
    }
    let [[t00, _], [t10, _]] = &t.0;
    let x = t00 * 2 * f.a + t10 * f.b;
    let alpha = QuadInt::new(x, t10.clone(), m)?;
    let expected = BigInt::from(f.a) * cur.a;
    if alpha.norm() != expected {
        return Err(Error::Inconsistency(format!(
            "generator {alpha} of {f} has norm {}, expected {expected}",
            alpha.norm()
        )));
    }
    Ok(Some(alpha))
}

/// The form of the ramified prime above `p | m`: `(p, p, (p² − m)/(4p))`.
pub fn ramified_form(m: u64, p: u64) -> Result<QForm> {
    if p < 2 || !m.is_multiple_of(p) {
        return Err(Error::NotRamified { m, p });
    }
    QForm::from_ab(p as i64, p as i64, m as i64)
}

/// Canonical name of a class: the least reduced form of its cycle
/// (narrow), or of the union of the cycles of `F` and `−F` (wide).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ClassLabel {
    pub rep: QForm,
    pub strictness: Strictness,
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep)
    }
}

/// Every reduced form of discriminant `m`, partitioned into cycles, with
/// lookup tables for both strictness modes. Built once per `m` and then
/// read-only.
#[derive(Clone, Debug)]
pub struct ClassGroup {
    m: u64,
    cycles: Vec<Vec<QForm>>,
    cycle_of: HashMap<QForm, usize>,
    wide_of_cycle: Vec<usize>,
    narrow_labels: Vec<QForm>,
    wide_labels: Vec<QForm>,
    principal: usize,
}

/// All reduced forms of discriminant `m`, by direct enumeration.
pub fn reduced_forms(m: u64) -> Result<Vec<QForm>> {
    let s = isqrt(m) as i64;
    let mi = m as i64;
    let mut out = Vec::new();
    for b in (1..=s).filter(|b| (b - mi).rem_euclid(2) == 0) {
        let n = (mi - b * b) / 4;
        // 2|a| > s − b and 2|a| ≤ s + b
        let lo = (s - b) / 2 + 1;
        let hi = (s + b) / 2;
        for abs_a in lo.max(1)..=hi {
            if n % abs_a != 0 {
                continue;
            }
            for a in [abs_a, -abs_a] {
                if let Ok(f) = QForm::new(a, b, -n / a) {
                    out.push(f);
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

impl ClassGroup {
    pub fn new(m: u64) -> Result<Self> {
        let principal_form = QForm::principal(m)?;
        let forms = reduced_forms(m)?;
        let mut cycle_of = HashMap::with_capacity(forms.len());
        let mut cycles = Vec::new();
        for f in &forms {
            if cycle_of.contains_key(f) {
                continue;
            }
            let cyc = cycle(f)?;
            for g in &cyc {
                if cycle_of.insert(*g, cycles.len()).is_some() {
                    return Err(Error::Inconsistency(format!("{g} lies on two cycles")));
                }
            }
            cycles.push(cyc);
        }
        if cycle_of.len() != forms.len() {
            return Err(Error::Inconsistency(format!(
                "cycles of m = {m} reach forms outside the enumeration"
            )));
        }
        let narrow_labels: Vec<QForm> = cycles
            .iter()
            .map(|c| *c.iter().min().expect("cycles are nonempty"))
            .collect();
        let mut wide_of_cycle = vec![usize::MAX; cycles.len()];
        let mut wide_labels = Vec::new();
        for i in 0..cycles.len() {
            if wide_of_cycle[i] != usize::MAX {
                continue;
            }
            let j = cycle_of[&cycles[i][0].negate()];
            wide_of_cycle[i] = wide_labels.len();
            wide_of_cycle[j] = wide_labels.len();
            wide_labels.push(narrow_labels[i].min(narrow_labels[j]));
        }
        let principal = cycle_of[&reduced_form(&principal_form)?];
        Ok(ClassGroup {
            m,
            cycles,
            cycle_of,
            wide_of_cycle,
            narrow_labels,
            wide_labels,
            principal,
        })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn cycles(&self) -> &[Vec<QForm>] {
        &self.cycles
    }

    pub fn class_number(&self, strictness: Strictness) -> usize {
        match strictness {
            Strictness::Narrow => self.cycles.len(),
            Strictness::Wide => self.wide_labels.len(),
        }
    }

    fn check_disc(&self, f: &QForm) -> Result<()> {
        if f.disc() == self.m as i64 {
            Ok(())
        } else {
            Err(Error::DiscriminantMismatch {
                left: self.m as i64,
                right: f.disc(),
            })
        }
    }

    fn cycle_index(&self, f: &QForm) -> Result<usize> {
        self.check_disc(f)?;
        let r = reduced_form(f)?;
        self.cycle_of
            .get(&r)
            .copied()
            .ok_or_else(|| Error::Inconsistency(format!("{r} missing from the class table")))
    }

    pub fn label(&self, f: &QForm, strictness: Strictness) -> Result<ClassLabel> {
        let i = self.cycle_index(f)?;
        let rep = match strictness {
            Strictness::Narrow => self.narrow_labels[i],
            Strictness::Wide => self.wide_labels[self.wide_of_cycle[i]],
        };
        Ok(ClassLabel { rep, strictness })
    }

    pub fn identity(&self, strictness: Strictness) -> ClassLabel {
        let rep = match strictness {
            Strictness::Narrow => self.narrow_labels[self.principal],
            Strictness::Wide => self.wide_labels[self.wide_of_cycle[self.principal]],
        };
        ClassLabel { rep, strictness }
    }

    pub fn is_principal(&self, f: &QForm, strictness: Strictness) -> Result<bool> {
        Ok(self.label(f, strictness)? == self.identity(strictness))
    }

    pub fn equivalent(&self, f: &QForm, g: &QForm, strictness: Strictness) -> Result<bool> {
        Ok(self.label(f, strictness)? == self.label(g, strictness)?)
    }

    /// Labels of all classes, ascending.
    pub fn classes(&self, strictness: Strictness) -> Vec<ClassLabel> {
        let reps = match strictness {
            Strictness::Narrow => &self.narrow_labels,
            Strictness::Wide => &self.wide_labels,
        };
        let mut out: Vec<_> = reps
            .iter()
            .map(|&rep| ClassLabel { rep, strictness })
            .collect();
        out.sort();
        out
    }

    pub fn multiply(&self, x: &ClassLabel, y: &ClassLabel) -> Result<ClassLabel> {
        let strictness = x.strictness.max(y.strictness);
        self.label(&compose(&x.rep, &y.rep)?, strictness)
    }

    /// Classes `X` with `X²` trivial.
    pub fn two_torsion(&self, strictness: Strictness) -> Result<Vec<ClassLabel>> {
        let id = self.identity(strictness);
        let mut out = Vec::new();
        for x in self.classes(strictness) {
            if self.multiply(&x, &x)? == id {
                out.push(x);
            }
        }
        Ok(out)
    }

    /// The subgroup generated by the classes of the ramified primes.
    pub fn ambiguous(&self, primes: &[u64], strictness: Strictness) -> Result<Vec<ClassLabel>> {
        let mut group = BTreeSet::from([self.identity(strictness)]);
        for &p in primes {
            let gen = self.label(&ramified_form(self.m, p)?, strictness)?;
            let mut next = group.clone();
            for x in &group {
                next.insert(self.multiply(x, &gen)?);
            }
            group = next;
        }
        Ok(group.into_iter().collect())
    }
}

/// All classes of order dividing two in the ordinary class group.
pub fn two_torsion_classes(m: u64) -> Result<Vec<ClassLabel>> {
    ClassGroup::new(m)?.two_torsion(Strictness::Wide)
}

/// The subgroup of the ordinary class group generated by ramified primes.
pub fn ambiguous_classes(m: u64) -> Result<Vec<ClassLabel>> {
    let f = crate::arith::validate_m(m)?;
    let primes: Vec<u64> = f.primes().collect();
    ClassGroup::new(m)?.ambiguous(&primes, Strictness::Wide)
}
