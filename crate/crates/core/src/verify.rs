//! Per-`m` classification of the classes `[𝔞ⱼ]` and `[𝔟ₑ]`, and range scans.
//!
//! The statements checked, for `m = p₁⋯p_t` and `ε` the fundamental unit:
//!
//! * `N(ε) = −1` (branch a): the `[𝔞ⱼ]` are pairwise distinct, exhaust
//!   `Cl(K)[2]`, and exactly one `𝔞ⱼ = (α)` is principal; then
//!   `η = (2b + √m)/α²` is a unit of norm −1, an odd power of `ε` up to sign.
//! * `N(ε) = +1` (branch b): no `[𝔞ⱼ]` lies in the subgroup `C` generated by
//!   the ramified primes, `[Cl(K)[2] : C] = 2`, every class outside `C` is
//!   hit by exactly two `𝔞ⱼ`, and every class of `C` by exactly two
//!   complementary pairs `{𝔟ₑ, 𝔟_ē}`.
//! * Some nontrivial `𝔟ₑ` (`e ≠ 0…0, 1…1`) is principal iff `N(ε) = +1`.
//!
//! Failed checks are recorded in the [`Report`]; they never abort a scan.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::arith::{factor_seeded, invalid_reason, DEFAULT_SEED};
use crate::forms::{self, ClassGroup, ClassLabel, QForm, Strictness};
use crate::ideals::{
    exponent_vector, ideal_a, ideal_b, two_b_plus_sqrt_m, verify_square_principal, IdealNF,
};
use crate::quadfield::{
    fundamental_unit, normalize_generator, solve_unit_equation, FundamentalUnit, QuadInt,
};
use crate::reps::{enumerate_reps, TwoSquares};
use crate::{Error, Result};

/// Version of the report and summary layout; see `schema/report.schema.json`.
pub const SCHEMA_VERSION: &str = "1.0.0";

pub(crate) fn ser_bigint<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Which equivalence notions to label classes with.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum,
)]
#[serde(rename_all = "lowercase")]
pub enum Modes {
    Narrow,
    Wide,
    #[default]
    Both,
}

impl Modes {
    pub fn includes(self, s: Strictness) -> bool {
        match self {
            Modes::Both => true,
            Modes::Narrow => s == Strictness::Narrow,
            Modes::Wide => s == Strictness::Wide,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    pub seed: u64,
    /// Modes whose class labels appear in the report. The classification checks are
    /// always decided with wide equivalence.
    pub modes: Modes,
    /// Record wall-clock time per report (breaks byte-identical output).
    pub timing: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: DEFAULT_SEED,
            modes: Modes::Both,
            timing: false,
        }
    }
}

/// `(x + y√m)/2` with both coordinates as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Element {
    #[serde(serialize_with = "ser_bigint")]
    pub x: BigInt,
    #[serde(serialize_with = "ser_bigint")]
    pub y: BigInt,
    pub text: String,
}

impl From<&QuadInt> for Element {
    fn from(z: &QuadInt) -> Self {
        Element {
            x: z.x().clone(),
            y: z.y().clone(),
            text: z.to_string(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct UnitRecord {
    pub eps: Element,
    pub norm: i32,
    pub period: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClassInfo {
    pub label: QForm,
    pub principal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RepRecord {
    /// 1-based position in ascending order of `a`.
    pub index: usize,
    pub a: u64,
    pub b: u64,
    pub ideal: String,
    pub form: QForm,
    pub class: BTreeMap<Strictness, ClassInfo>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RamifiedRecord {
    /// Exponent bits, one per prime in ascending order.
    pub e: String,
    pub primes: Vec<u64>,
    pub ideal: String,
    pub class: BTreeMap<Strictness, ClassInfo>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupRecord {
    pub class_number: usize,
    pub two_torsion: Vec<QForm>,
    /// The subgroup `C` generated by the ramified primes.
    pub ambiguous: Vec<QForm>,
    /// `[Cl[2] : C]`, or 0 if `C` is not inside `Cl[2]`.
    pub index: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, clap::ValueEnum)]
pub enum Branch {
    #[serde(rename = "a")]
    #[value(name = "a")]
    A,
    #[serde(rename = "b")]
    #[value(name = "b")]
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RepRef {
    pub a: u64,
    pub b: u64,
}

impl From<&TwoSquares> for RepRef {
    fn from(r: &TwoSquares) -> Self {
        RepRef { a: r.a, b: r.b }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BranchA {
    pub principal_rep: Option<RepRef>,
    pub alpha: Option<Element>,
    pub eta: Option<Element>,
    pub eta_norm: Option<i32>,
    /// `η = sign · ε^exponent`.
    pub eta_sign: Option<i8>,
    pub eta_exponent: Option<i64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RepClass {
    pub class: QForm,
    pub reps: Vec<RepRef>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Relation {
    pub e: String,
    pub primes: Vec<u64>,
    pub alpha: Element,
    #[serde(serialize_with = "ser_bigint")]
    pub alpha_norm: BigInt,
    /// `α² / ∏ pⱼ^{eⱼ}`.
    pub unit: Element,
}

#[derive(Clone, Debug, Serialize)]
pub struct BranchB {
    /// Wide classes of the `𝔞ⱼ` with the representations landing in each.
    pub pairs: Vec<RepClass>,
    pub relation: Option<Relation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: Option<String>,
}

/// Everything computed for one `m`.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub record: &'static str,
    pub m: u64,
    pub primes: Vec<u64>,
    pub t: usize,
    pub unit: Option<UnitRecord>,
    pub reps: Vec<RepRecord>,
    pub ramified: Vec<RamifiedRecord>,
    pub groups: BTreeMap<Strictness, GroupRecord>,
    pub branch: Option<Branch>,
    pub branch_a: Option<BranchA>,
    pub branch_b: Option<BranchB>,
    pub checks: Vec<Check>,
    pub failures: usize,
    pub passed: bool,
    /// Set when an internal inconsistency stopped the classification.
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_us: Option<u64>,
}

impl Report {
    fn empty(m: u64, primes: Vec<u64>) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            record: "report",
            m,
            t: primes.len(),
            primes,
            unit: None,
            reps: Vec::new(),
            ramified: Vec::new(),
            groups: BTreeMap::new(),
            branch: None,
            branch_a: None,
            branch_b: None,
            checks: Vec::new(),
            failures: 0,
            passed: false,
            error: None,
            elapsed_us: None,
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn record(&mut self, name: &'static str, passed: bool, detail: impl FnOnce() -> String) {
        self.checks.push(Check {
            name,
            passed,
            detail: (!passed).then(detail),
        });
    }

    fn finish(&mut self) {
        self.failures =
            self.checks.iter().filter(|c| !c.passed).count() + usize::from(self.error.is_some());
        self.passed = self.failures == 0;
    }
}

fn bits(e: &[bool]) -> String {
    e.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn selected(primes: &[u64], e: &[bool]) -> Vec<u64> {
    primes
        .iter()
        .zip(e)
        .filter(|(_, &b)| b)
        .map(|(&p, _)| p)
        .collect()
}

/// `η = (2b + √m)/α²`; a unit whenever `(α) = 𝔞` for this representation.
pub fn eta_unit(rep: &TwoSquares, alpha: &QuadInt) -> Result<QuadInt> {
    if alpha.m() != rep.m {
        return Err(Error::MixedField {
            left: rep.m,
            right: alpha.m(),
        });
    }
    let num = two_b_plus_sqrt_m(rep);
    let eta = num
        .div_exact(&(alpha * alpha))
        .ok_or_else(|| Error::Inconsistency(format!("{num} is not divisible by ({alpha})²")))?;
    if !eta.is_unit() {
        return Err(Error::Inconsistency(format!(
            "(2b + √m)/α² = {eta} is not a unit"
        )));
    }
    Ok(eta)
}

/// A generator of `ideal` in canonical form, if the ideal is principal.
fn ideal_generator(ideal: &IdealNF, eps: &QuadInt) -> Result<Option<QuadInt>> {
    let Some(alpha) = forms::principal_generator(&ideal.to_form()?)? else {
        return Ok(None);
    };
    let alpha = normalize_generator(&alpha, eps);
    if IdealNF::principal(&alpha)? != *ideal {
        return Err(Error::Inconsistency(format!(
            "{alpha} does not generate {ideal}"
        )));
    }
    Ok(Some(alpha))
}

fn relation_search(m: u64, primes: &[u64], eps: &QuadInt) -> Result<Option<(Vec<bool>, QuadInt)>> {
    let t = primes.len();
    let full = (1u64 << t) - 1;
    let mut masks: Vec<u64> = (1..full).collect();
    masks.sort_by_key(|&mask| (mask.count_ones(), mask));
    for mask in masks {
        let e = exponent_vector(mask, t);
        if let Some(alpha) = ideal_generator(&ideal_b(m, primes, &e)?, eps)? {
            return Ok(Some((e, alpha)));
        }
    }
    Ok(None)
}

/// A principal `𝔟ₑ = (α)` with `e ∉ {0…0, 1…1}`, searched by increasing
/// number of primes; `α` is normalized as in [`normalize_generator`].
pub fn find_ramified_relation(m: u64) -> Result<Option<(Vec<bool>, QuadInt)>> {
    let f = factor_seeded(m, DEFAULT_SEED);
    if let Some(reason) = invalid_reason(&f) {
        return Err(Error::InvalidM { m, reason });
    }
    let primes: Vec<u64> = f.primes().collect();
    let unit = fundamental_unit(m)?;
    relation_search(m, &primes, &unit.eps)
}

/// Classifies `m` with default options.
pub fn classify(m: u64) -> Result<Report> {
    classify_with(m, &Options::default())
}

/// Errors only for invalid `m`; internal failures land in `Report::error`.
pub fn classify_with(m: u64, opts: &Options) -> Result<Report> {
    let start = Instant::now();
    let f = factor_seeded(m, opts.seed);
    if let Some(reason) = invalid_reason(&f) {
        return Err(Error::InvalidM { m, reason });
    }
    let primes: Vec<u64> = f.primes().collect();
    let mut report = Report::empty(m, primes.clone());
    // m is valid, so any error from here on is recorded rather than raised
    if let Err(e) = fill(&mut report, &primes, opts) {
        report.error = Some(e.to_string());
    }
    report.finish();
    if opts.timing {
        report.elapsed_us = Some(start.elapsed().as_micros() as u64);
    }
    Ok(report)
}

fn class_info(
    group: &ClassGroup,
    f: &QForm,
    modes: Modes,
) -> Result<BTreeMap<Strictness, ClassInfo>> {
    let mut out = BTreeMap::new();
    for s in [Strictness::Narrow, Strictness::Wide] {
        if modes.includes(s) {
            out.insert(
                s,
                ClassInfo {
                    label: group.label(f, s)?.rep,
                    principal: group.is_principal(f, s)?,
                },
            );
        }
    }
    Ok(out)
}

fn fill(report: &mut Report, primes: &[u64], opts: &Options) -> Result<()> {
    let m = report.m;
    let t = primes.len();
    let wide = Strictness::Wide;
    let unit: FundamentalUnit = fundamental_unit(m)?;
    let eps = unit.eps.clone();
    report.unit = Some(UnitRecord {
        eps: Element::from(&eps),
        norm: unit.norm,
        period: unit.cycle.period(),
    });

    let group = ClassGroup::new(m)?;
    let reps = enumerate_reps(&factor_seeded(m, opts.seed))?;
    let rep_ideals = reps.iter().map(ideal_a).collect::<Result<Vec<_>>>()?;
    let rep_forms = rep_ideals
        .iter()
        .map(IdealNF::to_form)
        .collect::<Result<Vec<_>>>()?;
    for (j, ((r, ideal), form)) in reps.iter().zip(&rep_ideals).zip(&rep_forms).enumerate() {
        report.reps.push(RepRecord {
            index: j + 1,
            a: r.a,
            b: r.b,
            ideal: ideal.to_string(),
            form: *form,
            class: class_info(&group, form, opts.modes)?,
        });
    }

    let vectors: Vec<Vec<bool>> = (0..1u64 << t)
        .map(|mask| exponent_vector(mask, t))
        .collect();
    let mut b_forms = Vec::with_capacity(vectors.len());
    for e in &vectors {
        let ideal = ideal_b(m, primes, e)?;
        let form = ideal.to_form()?;
        report.ramified.push(RamifiedRecord {
            e: bits(e),
            primes: selected(primes, e),
            ideal: ideal.to_string(),
            class: class_info(&group, &form, opts.modes)?,
        });
        b_forms.push(form);
    }

    for s in [Strictness::Narrow, Strictness::Wide] {
        if !opts.modes.includes(s) {
            continue;
        }
        let two = group.two_torsion(s)?;
        let amb = group.ambiguous(primes, s)?;
        let inside = amb.iter().all(|c| two.contains(c));
        report.groups.insert(
            s,
            GroupRecord {
                class_number: group.class_number(s),
                index: if inside { two.len() / amb.len() } else { 0 },
                two_torsion: two.iter().map(|c| c.rep).collect(),
                ambiguous: amb.iter().map(|c| c.rep).collect(),
            },
        );
    }

    // classification checks, all with wide equivalence
    let a_labels = rep_forms
        .iter()
        .map(|f| group.label(f, wide))
        .collect::<Result<Vec<ClassLabel>>>()?;
    let b_labels = b_forms
        .iter()
        .map(|f| group.label(f, wide))
        .collect::<Result<Vec<ClassLabel>>>()?;
    let two: BTreeSet<ClassLabel> = group.two_torsion(wide)?.into_iter().collect();
    let amb: BTreeSet<ClassLabel> = group.ambiguous(primes, wide)?.into_iter().collect();
    let id = group.identity(wide);

    let mut square_failures = Vec::new();
    for r in &reps {
        if !verify_square_principal(r)? {
            square_failures.push(format!("({}, {})", r.a, r.b));
        }
    }
    report.record("square_principal", square_failures.is_empty(), || {
        format!("𝔞² ≠ (2b + √m) for {}", square_failures.join(", "))
    });

    let expected = 1usize << (t - 1);
    report.record("two_torsion_size", two.len() == expected, || {
        format!("|Cl[2]| = {}, expected {expected}", two.len())
    });

    let mut mismatched = Vec::new();
    for i in 0..rep_forms.len() {
        for j in i + 1..rep_forms.len() {
            let claimed = a_labels[i] == a_labels[j];
            if forms::equivalent(&rep_forms[i], &rep_forms[j], wide)? != claimed {
                mismatched.push(format!("𝔞{} vs 𝔞{}", i + 1, j + 1));
            }
        }
    }
    for (e, (bf, bl)) in vectors.iter().zip(b_forms.iter().zip(&b_labels)) {
        let claimed = *bl == id;
        if forms::equivalent(bf, &QForm::principal(m)?, wide)? != claimed {
            mismatched.push(format!("𝔟{} vs 1", bits(e)));
        }
    }
    report.record("equivalences_reverified", mismatched.is_empty(), || {
        mismatched.join(", ")
    });

    if t == 1 {
        report.record("prime_m_negative_unit", unit.norm == -1, || {
            "N(ε) = +1 for prime m".to_string()
        });
    }

    let relation = relation_search(m, primes, &eps)?;
    report.record(
        "ramified_relation_iff_positive_norm",
        relation.is_some() == (unit.norm == 1),
        || {
            format!(
                "N(ε) = {}, relation found: {}",
                unit.norm,
                relation.is_some()
            )
        },
    );

    if unit.norm == -1 {
        report.branch = Some(Branch::A);
        let distinct: BTreeSet<&ClassLabel> = a_labels.iter().collect();
        report.record("a_distinct", distinct.len() == a_labels.len(), || {
            format!("{} classes among {} ideals", distinct.len(), a_labels.len())
        });
        let as_set: BTreeSet<ClassLabel> = a_labels.iter().copied().collect();
        report.record(
            "a_bijection",
            as_set == two && distinct.len() == a_labels.len(),
            || "the classes [𝔞ⱼ] do not biject onto Cl[2]".to_string(),
        );
        let principal: Vec<usize> = (0..reps.len()).filter(|&j| a_labels[j] == id).collect();
        report.record("a_unique_principal", principal.len() == 1, || {
            format!("{} principal ideals 𝔞ⱼ", principal.len())
        });
        let mut branch = BranchA {
            principal_rep: None,
            alpha: None,
            eta: None,
            eta_norm: None,
            eta_sign: None,
            eta_exponent: None,
        };
        let mut eta_ok = false;
        let mut odd_ok = false;
        if let Some(&j) = principal.first() {
            let rep = &reps[j];
            branch.principal_rep = Some(rep.into());
            let alpha = ideal_generator(&rep_ideals[j], &eps)?.ok_or_else(|| {
                Error::Inconsistency(format!(
                    "𝔞 for ({}, {}) is wide-principal without a generator",
                    rep.a, rep.b
                ))
            })?;
            let eta = eta_unit(rep, &alpha)?;
            let norm = if eta.norm() == BigInt::from(-1) {
                -1
            } else {
                1
            };
            eta_ok = norm == -1;
            if let Some((sign, k)) = solve_unit_equation(&eta, &eps) {
                odd_ok = k % 2 != 0;
                branch.eta_sign = Some(sign);
                branch.eta_exponent = Some(k);
            }
            branch.alpha = Some(Element::from(&alpha));
            branch.eta = Some(Element::from(&eta));
            branch.eta_norm = Some(norm);
        }
        report.record("a_eta_norm", eta_ok, || "N(η) ≠ −1".to_string());
        report.record("a_eta_odd_power", odd_ok, || {
            "η is not ±ε^k with k odd".to_string()
        });
        report.branch_a = Some(branch);
    } else {
        report.branch = Some(Branch::B);
        let hits: Vec<&ClassLabel> = a_labels.iter().filter(|c| amb.contains(c)).collect();
        report.record("b_disjoint", hits.is_empty(), || {
            format!("{} ideals 𝔞ⱼ have classes in C", hits.len())
        });
        let mut counts: BTreeMap<ClassLabel, Vec<RepRef>> = BTreeMap::new();
        for (r, c) in reps.iter().zip(&a_labels) {
            counts.entry(*c).or_default().push(r.into());
        }
        let double =
            t >= 2 && counts.len() == 1 << (t - 2) && counts.values().all(|v| v.len() == 2);
        report.record("b_double_cover", double, || {
            let sizes: Vec<usize> = counts.values().map(Vec::len).collect();
            format!("class sizes {sizes:?}")
        });
        let complement: BTreeSet<ClassLabel> = two.difference(&amb).copied().collect();
        let as_set: BTreeSet<ClassLabel> = counts.keys().copied().collect();
        report.record("b_surjective", as_set == complement, || {
            format!(
                "{} of {} classes outside C are hit",
                as_set.intersection(&complement).count(),
                complement.len()
            )
        });
        report.record(
            "b_index_two",
            amb.is_subset(&two) && two.len() == 2 * amb.len(),
            || format!("|Cl[2]| = {}, |C| = {}", two.len(), amb.len()),
        );
        // 𝔟ₑ𝔟_ē = (√m), so e and its complement always share a class
        let full = (1u64 << t) - 1;
        let mut pair_counts: BTreeMap<ClassLabel, usize> = BTreeMap::new();
        let mut complement_ok = true;
        for mask in 0..=full {
            let (i, j) = (mask as usize, (full ^ mask) as usize);
            complement_ok &= b_labels[i] == b_labels[j];
            if mask < full ^ mask {
                *pair_counts.entry(b_labels[i]).or_default() += 1;
            }
        }
        let cover = complement_ok
            && pair_counts.keys().copied().collect::<BTreeSet<_>>() == amb
            && pair_counts.values().all(|&n| n == 2);
        report.record("b_ramified_cover", cover, || {
            let sizes: Vec<usize> = pair_counts.values().copied().collect();
            format!("pairs {{e, ē}} per class of C: {sizes:?}")
        });
        let relation = match relation {
            Some((e, alpha)) => {
                let n: u64 = selected(primes, &e).iter().product();
                let unit_part = (&alpha * &alpha)
                    .div_exact(&QuadInt::from_int(n, m))
                    .filter(|u| u.is_unit() && u.norm() == BigInt::from(1));
                report.record("b_relation_unit", unit_part.is_some(), || {
                    format!("α²/{n} is not a unit of norm +1")
                });
                unit_part.map(|u| Relation {
                    e: bits(&e),
                    primes: selected(primes, &e),
                    alpha_norm: alpha.norm(),
                    alpha: Element::from(&alpha),
                    unit: Element::from(&u),
                })
            }
            None => None,
        };
        report.branch_b = Some(BranchB {
            pairs: counts
                .into_iter()
                .map(|(class, reps)| RepClass {
                    class: class.rep,
                    reps,
                })
                .collect(),
            relation,
        });
    }
    Ok(())
}

/// Restrictions applied to the valid `m` of a scan.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ScanFilter {
    pub t_min: Option<usize>,
    pub t_max: Option<usize>,
    pub branch: Option<Branch>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub schema_version: &'static str,
    pub record: &'static str,
    pub m_min: u64,
    pub m_max: u64,
    pub seed: u64,
    pub reports: usize,
    pub branch_a: usize,
    pub branch_b: usize,
    /// Reports with at least one failed check or an internal error.
    pub failures: usize,
    pub errors: usize,
    pub io_errors: usize,
    pub failed_m: Vec<u64>,
}

/// Valid `m` in `[min, max]`, ascending.
pub fn valid_m(min: u64, max: u64, seed: u64) -> impl Iterator<Item = u64> {
    let start = min.max(5);
    let first = start + (4 + 1 - start % 4) % 4;
    (first..=max)
        .step_by(4)
        .filter(move |&m| invalid_reason(&factor_seeded(m, seed)).is_none())
}

const CHUNK: usize = 256;

/// Classifies every valid `m` in `[min, max]` on `jobs` threads (0 picks
/// the rayon default) and hands the reports to `sink` in ascending order.
/// A failing `sink` is counted in the summary and the scan continues.
pub fn scan_with<F>(
    min: u64,
    max: u64,
    filter: &ScanFilter,
    opts: &Options,
    jobs: usize,
    mut sink: F,
) -> Result<Summary>
where
    F: FnMut(&Report) -> std::io::Result<()>,
{
    if min > max {
        return Err(Error::InvalidRange { min, max });
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Inconsistency(format!("thread pool: {e}")))?;
    let mut summary = Summary {
        schema_version: SCHEMA_VERSION,
        record: "summary",
        m_min: min,
        m_max: max,
        seed: opts.seed,
        ..Summary::default()
    };
    let candidates: Vec<u64> = valid_m(min, max, opts.seed)
        .filter(|&m| {
            let t = factor_seeded(m, opts.seed).t();
            filter.t_min.is_none_or(|lo| t >= lo) && filter.t_max.is_none_or(|hi| t <= hi)
        })
        .collect();
    for chunk in candidates.chunks(CHUNK) {
        let reports: Vec<Result<Report>> =
            pool.install(|| chunk.par_iter().map(|&m| classify_with(m, opts)).collect());
        for report in reports {
            let report = report?;
            if filter.branch.is_some() && report.branch != filter.branch {
                continue;
            }
            summary.reports += 1;
            match report.branch {
                Some(Branch::A) => summary.branch_a += 1,
                Some(Branch::B) => summary.branch_b += 1,
                None => {}
            }
            if report.error.is_some() {
                summary.errors += 1;
            }
            if !report.passed {
                summary.failures += 1;
                summary.failed_m.push(report.m);
            }
            if sink(&report).is_err() {
                summary.io_errors += 1;
            }
        }
    }
    Ok(summary)
}

/// Collects a whole scan in memory.
pub fn scan(
    min: u64,
    max: u64,
    filter: &ScanFilter,
    opts: &Options,
) -> Result<(Vec<Report>, Summary)> {
    let mut out = Vec::new();
    let summary = scan_with(min, max, filter, opts, 0, |r| {
        out.push(r.clone());
        Ok(())
    })?;
    Ok((out, summary))
}
