//! Command-line front end: one subcommand per pipeline stage, output as
//! text, JSON (NDJSON for scans) or CSV.
//!
//! Exit codes: 0 success, 1 checks failed, 2 usage or input error,
//! 3 internal inconsistency (including panics, which are caught).

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::arith::{factor_seeded, invalid_reason};
use crate::forms::{ClassGroup, Strictness};
use crate::ideals::{ideal_a, ramified_prime, two_b_plus_sqrt_m, verify_square_principal};
use crate::quadfield::{fundamental_unit, normalize_generator};
use crate::quartic::{
    disc_check, enumerate_quartic_characters, min_poly, same_field_check, CharVector,
};
use crate::reps::{enumerate_reps, TwoSquares};
use crate::verify::{
    self, Branch, Element, Modes, Options, Report, ScanFilter, Summary, SCHEMA_VERSION,
};
use crate::{forms, Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECKS_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

/// Settings shared by every subcommand. Each flag can also be set through
/// the environment variable `TWOTORSION_<NAME>`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Args)]
pub struct RunConfig {
    /// Seed for the randomized factoring and square-root steps.
    #[arg(long, global = true, env = "TWOTORSION_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Equivalence notions to report class labels for.
    #[arg(long, global = true, env = "TWOTORSION_STRICTNESS", value_enum, default_value_t = Modes::Both)]
    pub strictness: Modes,
    /// Output format; scans emit NDJSON or CSV rows plus a summary.
    #[arg(long, global = true, env = "TWOTORSION_FORMAT", value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads for scans; 0 uses every core.
    #[arg(long, global = true, env = "TWOTORSION_JOBS", default_value_t = 0)]
    pub jobs: usize,
    /// Write output here instead of stdout.
    #[arg(long, global = true, env = "TWOTORSION_OUT")]
    pub out: Option<PathBuf>,
    /// Record per-report timings (output is then no longer reproducible).
    #[arg(long, global = true, env = "TWOTORSION_TIMING")]
    pub timing: bool,
    /// Progress on stderr; repeat for more.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            strictness: Modes::Both,
            format: Format::Text,
            jobs: 0,
            out: None,
            timing: false,
            verbose: 0,
        }
    }
}

impl RunConfig {
    pub fn options(&self) -> Options {
        Options {
            seed: self.seed,
            modes: self.strictness,
            timing: self.timing,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "twotorsion",
    version,
    about = "Order-2 ideal classes of real quadratic fields Q(√m)"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Representations m = a² + 4b², a odd.
    Reps { m: u64 },
    /// Fundamental unit and its norm.
    Unit { m: u64 },
    /// Class group, 2-torsion and the ramified subgroup.
    Classgroup { m: u64 },
    /// The ideals 𝔞 of each representation and the ramified primes.
    Ideals { m: u64 },
    /// Quartic characters and the fields Q(√(m + 2b√m)).
    Quartic { m: u64 },
    /// Full classification report for one m.
    Verify { m: u64 },
    /// Reports for every valid m in [min, max].
    Scan {
        /// Smallest m to consider.
        min: u64,
        /// Largest m to consider.
        max: u64,
        /// Keep only m with at least this many prime factors.
        #[arg(long)]
        t_min: Option<usize>,
        /// Keep only m with at most this many prime factors.
        #[arg(long)]
        t_max: Option<usize>,
        /// Keep only m on this branch (a: N(ε) = −1, b: N(ε) = +1).
        #[arg(long, value_enum)]
        branch: Option<Branch>,
    },
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Never panics.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let prev_hook = panic::take_hook();
    panic::set_hook(Box::new(|_| {}));
    let outcome = panic::catch_unwind(AssertUnwindSafe(|| execute(&cli)));
    panic::set_hook(prev_hook);
    match outcome {
        Ok(Ok(code)) => code,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            if e.is_input_error() {
                EXIT_USAGE
            } else {
                EXIT_INTERNAL
            }
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            eprintln!("internal error: {msg}");
            EXIT_INTERNAL
        }
    }
}

fn open_output(cfg: &RunConfig) -> Result<Box<dyn Write>> {
    Ok(match &cfg.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn execute(cli: &Cli) -> Result<i32> {
    let cfg = &cli.config;
    let mut out = open_output(cfg)?;
    let code = match &cli.command {
        Command::Reps { m } => cmd_reps(*m, cfg, &mut out)?,
        Command::Unit { m } => cmd_unit(*m, cfg, &mut out)?,
        Command::Classgroup { m } => cmd_classgroup(*m, cfg, &mut out)?,
        Command::Ideals { m } => cmd_ideals(*m, cfg, &mut out)?,
        Command::Quartic { m } => cmd_quartic(*m, cfg, &mut out)?,
        Command::Verify { m } => cmd_verify(*m, cfg, &mut out)?,
        Command::Scan {
            min,
            max,
            t_min,
            t_max,
            branch,
        } => {
            let filter = ScanFilter {
                t_min: *t_min,
                t_max: *t_max,
                branch: *branch,
            };
            cmd_scan(*min, *max, &filter, cfg, &mut out)?
        }
    };
    out.flush()?;
    Ok(code)
}

fn validated(m: u64, seed: u64) -> Result<Vec<u64>> {
    let f = factor_seeded(m, seed);
    match invalid_reason(&f) {
        Some(reason) => Err(Error::InvalidM { m, reason }),
        None => Ok(f.primes().collect()),
    }
}

fn write_json(out: &mut dyn Write, value: &impl Serialize) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

fn write_csv<R: Serialize>(out: &mut dyn Write, rows: &[R]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => Error::Io(e),
        other => Error::Inconsistency(format!("csv: {other:?}")),
    }
}

#[derive(Serialize)]
struct RepRow {
    schema_version: &'static str,
    m: u64,
    a: u64,
    b: u64,
}

pub fn cmd_reps(m: u64, cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let reps = enumerate_reps(&factor_seeded(m, cfg.seed))?;
    match cfg.format {
        Format::Text => {
            for r in &reps {
                writeln!(out, "{m} = {}² + 4·{}²", r.a, r.b)?;
            }
        }
        Format::Json => write_json(out, &reps)?,
        Format::Csv => {
            let rows: Vec<RepRow> = reps
                .iter()
                .map(|r| RepRow {
                    schema_version: SCHEMA_VERSION,
                    m,
                    a: r.a,
                    b: r.b,
                })
                .collect();
            write_csv(out, &rows)?;
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct UnitRow {
    schema_version: &'static str,
    m: u64,
    x: String,
    y: String,
    text: String,
    norm: i32,
    period: usize,
}

pub fn cmd_unit(m: u64, cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    validated(m, cfg.seed)?;
    let u = fundamental_unit(m)?;
    let eps = Element::from(&u.eps);
    match cfg.format {
        Format::Text => {
            writeln!(out, "ε = {}", eps.text)?;
            writeln!(out, "N(ε) = {}", u.norm)?;
            writeln!(out, "period = {}", u.cycle.period())?;
        }
        Format::Json => write_json(
            out,
            &json!({
                "schema_version": SCHEMA_VERSION,
                "m": m,
                "eps": eps,
                "norm": u.norm,
                "period": u.cycle.period(),
                "quotients": u.cycle.quotients,
            }),
        )?,
        Format::Csv => write_csv(
            out,
            &[UnitRow {
                schema_version: SCHEMA_VERSION,
                m,
                x: eps.x.to_string(),
                y: eps.y.to_string(),
                text: eps.text.clone(),
                norm: u.norm,
                period: u.cycle.period(),
            }],
        )?,
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ClassRow {
    schema_version: &'static str,
    m: u64,
    strictness: Strictness,
    class: String,
    two_torsion: bool,
    ambiguous: bool,
    principal: bool,
}

fn strictness_list(modes: Modes) -> Vec<Strictness> {
    [Strictness::Narrow, Strictness::Wide]
        .into_iter()
        .filter(|&s| modes.includes(s))
        .collect()
}

pub fn cmd_classgroup(m: u64, cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let primes = validated(m, cfg.seed)?;
    let g = ClassGroup::new(m)?;
    let mut rows = Vec::new();
    for s in strictness_list(cfg.strictness) {
        let two = g.two_torsion(s)?;
        let amb = g.ambiguous(&primes, s)?;
        let id = g.identity(s);
        for c in g.classes(s) {
            rows.push(ClassRow {
                schema_version: SCHEMA_VERSION,
                m,
                strictness: s,
                class: c.rep.to_string(),
                two_torsion: two.contains(&c),
                ambiguous: amb.contains(&c),
                principal: c == id,
            });
        }
    }
    match cfg.format {
        Format::Text => {
            for s in strictness_list(cfg.strictness) {
                let name = if s == Strictness::Wide {
                    "wide"
                } else {
                    "narrow"
                };
                let mine: Vec<&ClassRow> = rows.iter().filter(|r| r.strictness == s).collect();
                let two = mine.iter().filter(|r| r.two_torsion).count();
                let amb = mine.iter().filter(|r| r.ambiguous).count();
                writeln!(
                    out,
                    "{name}: h = {}, |Cl[2]| = {two}, |C| = {amb}",
                    mine.len()
                )?;
                for r in mine {
                    let mut tags = Vec::new();
                    if r.principal {
                        tags.push("principal");
                    }
                    if r.two_torsion {
                        tags.push("order ≤ 2");
                    }
                    if r.ambiguous {
                        tags.push("in C");
                    }
                    writeln!(out, "  {}  {}", r.class, tags.join(", "))?;
                }
            }
        }
        Format::Json => {
            let mut groups = serde_json::Map::new();
            for s in strictness_list(cfg.strictness) {
                let mine: Vec<&ClassRow> = rows.iter().filter(|r| r.strictness == s).collect();
                let pick = |f: fn(&ClassRow) -> bool| -> Vec<&str> {
                    mine.iter()
                        .filter(|r| f(r))
                        .map(|r| r.class.as_str())
                        .collect()
                };
                let key = serde_json::to_value(s).map_err(io::Error::from)?;
                groups.insert(
                    key.as_str().unwrap_or_default().to_string(),
                    json!({
                        "class_number": mine.len(),
                        "classes": pick(|_| true),
                        "two_torsion": pick(|r| r.two_torsion),
                        "ambiguous": pick(|r| r.ambiguous),
                    }),
                );
            }
            write_json(
                out,
                &json!({"schema_version": SCHEMA_VERSION, "m": m, "groups": groups}),
            )?;
        }
        Format::Csv => write_csv(out, &rows)?,
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct IdealRow {
    schema_version: &'static str,
    m: u64,
    kind: &'static str,
    /// `a,b` for a representation, `p` for a ramified prime.
    source: String,
    ideal: String,
    form: String,
    principal: bool,
    generator: Option<String>,
    square_principal: Option<bool>,
}

pub fn cmd_ideals(m: u64, cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let primes = validated(m, cfg.seed)?;
    let eps = fundamental_unit(m)?.eps;
    let mut rows = Vec::new();
    let generator = |f: &forms::QForm| -> Result<Option<String>> {
        Ok(forms::principal_generator(f)?.map(|a| normalize_generator(&a, &eps).to_string()))
    };
    for r in enumerate_reps(&factor_seeded(m, cfg.seed))? {
        let ideal = ideal_a(&r)?;
        let form = ideal.to_form()?;
        let gen = generator(&form)?;
        rows.push(IdealRow {
            schema_version: SCHEMA_VERSION,
            m,
            kind: "rep",
            source: format!("{},{}", r.a, r.b),
            ideal: ideal.to_string(),
            form: form.to_string(),
            principal: gen.is_some(),
            generator: gen,
            square_principal: Some(verify_square_principal(&r)?),
        });
    }
    for &p in &primes {
        let ideal = ramified_prime(m, p)?;
        let form = ideal.to_form()?;
        let gen = generator(&form)?;
        rows.push(IdealRow {
            schema_version: SCHEMA_VERSION,
            m,
            kind: "ramified",
            source: p.to_string(),
            ideal: ideal.to_string(),
            form: form.to_string(),
            principal: gen.is_some(),
            generator: gen,
            square_principal: None,
        });
    }
    match cfg.format {
        Format::Text => {
            for r in &rows {
                let label = if r.kind == "rep" {
                    format!("𝔞({})", r.source)
                } else {
                    format!("𝔭{}", r.source)
                };
                let status = match &r.generator {
                    Some(g) => format!("principal, generated by {g}"),
                    None => "not principal".to_string(),
                };
                writeln!(out, "{label} = {}  form {}  {status}", r.ideal, r.form)?;
            }
            for r in enumerate_reps(&factor_seeded(m, cfg.seed))? {
                writeln!(out, "𝔞({},{})² = ({})", r.a, r.b, two_b_plus_sqrt_m(&r))?;
            }
        }
        Format::Json => write_json(
            out,
            &json!({"schema_version": SCHEMA_VERSION, "m": m, "ideals": rows}),
        )?,
        Format::Csv => write_csv(out, &rows)?,
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct QuarticRow {
    schema_version: &'static str,
    m: u64,
    a: u64,
    b: u64,
    polynomial: String,
    p: String,
    q: String,
    discriminant: String,
    irreducible: bool,
    disc_check: bool,
    same_field: bool,
}

fn quartic_rows(m: u64, reps: &[TwoSquares]) -> Result<Vec<QuarticRow>> {
    reps.iter()
        .map(|r| {
            let poly = min_poly(m, r)?;
            Ok(QuarticRow {
                schema_version: SCHEMA_VERSION,
                m,
                a: r.a,
                b: r.b,
                polynomial: poly.to_string(),
                p: poly.p.to_string(),
                q: poly.q.to_string(),
                discriminant: poly.discriminant().to_string(),
                irreducible: poly.is_irreducible(),
                disc_check: disc_check(&poly, m),
                same_field: same_field_check(m, r),
            })
        })
        .collect()
}

pub fn cmd_quartic(m: u64, cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let f = factor_seeded(m, cfg.seed);
    let reps = enumerate_reps(&f)?;
    let chars = enumerate_quartic_characters(f.t());
    let rows = quartic_rows(m, &reps)?;
    let ok = rows
        .iter()
        .all(|r| r.irreducible && r.disc_check && r.same_field);
    match cfg.format {
        Format::Text => {
            writeln!(
                out,
                "{} cyclic quartic fields of conductor {m} with discriminant m³",
                chars.len()
            )?;
            for (chi, inv) in &chars {
                writeln!(out, "  χ = {chi}, χ³ = {inv}")?;
            }
            for r in &rows {
                writeln!(
                    out,
                    "√({m} + {}√{m}): {}  disc = {}  irreducible: {}  m³·square: {}  same field as √(2m + 2a√m): {}",
                    2 * r.b,
                    r.polynomial,
                    r.discriminant,
                    r.irreducible,
                    r.disc_check,
                    r.same_field
                )?;
            }
        }
        Format::Json => {
            let characters: Vec<[&CharVector; 2]> = chars.iter().map(|(a, b)| [a, b]).collect();
            write_json(
                out,
                &json!({
                    "schema_version": SCHEMA_VERSION,
                    "m": m,
                    "t": f.t(),
                    "characters": characters,
                    "fields": rows,
                }),
            )?
        }
        Format::Csv => write_csv(out, &rows)?,
    }
    Ok(if ok { EXIT_OK } else { EXIT_CHECKS_FAILED })
}

#[derive(Serialize)]
struct ReportRow {
    schema_version: &'static str,
    m: u64,
    t: usize,
    primes: String,
    unit_norm: Option<i32>,
    unit_x: Option<String>,
    unit_y: Option<String>,
    period: Option<usize>,
    class_number_narrow: Option<usize>,
    class_number_wide: Option<usize>,
    two_torsion_wide: Option<usize>,
    ambiguous_wide: Option<usize>,
    branch: Option<Branch>,
    relation_e: Option<String>,
    failed_checks: String,
    error: Option<String>,
    passed: bool,
}

impl From<&Report> for ReportRow {
    fn from(r: &Report) -> Self {
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
        let wide = r.groups.get(&Strictness::Wide);
        ReportRow {
            schema_version: SCHEMA_VERSION,
            m: r.m,
            t: r.t,
            primes: join(&r.primes),
            unit_norm: r.unit.as_ref().map(|u| u.norm),
            unit_x: r.unit.as_ref().map(|u| u.eps.x.to_string()),
            unit_y: r.unit.as_ref().map(|u| u.eps.y.to_string()),
            period: r.unit.as_ref().map(|u| u.period),
            class_number_narrow: r.groups.get(&Strictness::Narrow).map(|g| g.class_number),
            class_number_wide: wide.map(|g| g.class_number),
            two_torsion_wide: wide.map(|g| g.two_torsion.len()),
            ambiguous_wide: wide.map(|g| g.ambiguous.len()),
            branch: r.branch,
            relation_e: r
                .branch_b
                .as_ref()
                .and_then(|b| b.relation.as_ref())
                .map(|rel| rel.e.clone()),
            failed_checks: r
                .checks
                .iter()
                .filter(|c| !c.passed)
                .map(|c| c.name)
                .collect::<Vec<_>>()
                .join(" "),
            error: r.error.clone(),
            passed: r.passed,
        }
    }
}

fn write_report_text(out: &mut dyn Write, r: &Report) -> Result<()> {
    let primes: Vec<String> = r.primes.iter().map(u64::to_string).collect();
    writeln!(out, "m = {} = {}", r.m, primes.join("·"))?;
    if let Some(u) = &r.unit {
        writeln!(out, "ε = {}, N(ε) = {:+}", u.eps.text, u.norm)?;
    }
    for (s, g) in &r.groups {
        let name = if *s == Strictness::Wide {
            "wide"
        } else {
            "narrow"
        };
        writeln!(
            out,
            "{name}: h = {}, |Cl[2]| = {}, |C| = {}",
            g.class_number,
            g.two_torsion.len(),
            g.ambiguous.len()
        )?;
    }
    for rep in &r.reps {
        let classes: Vec<String> = rep
            .class
            .iter()
            .map(|(s, c)| {
                let name = if *s == Strictness::Wide {
                    "wide"
                } else {
                    "narrow"
                };
                let p = if c.principal { ", principal" } else { "" };
                format!("{name} {}{p}", c.label)
            })
            .collect();
        writeln!(
            out,
            "𝔞{} (a, b) = ({}, {}): {}",
            rep.index,
            rep.a,
            rep.b,
            classes.join("; ")
        )?;
    }
    match (r.branch, &r.branch_a, &r.branch_b) {
        (Some(Branch::A), Some(a), _) => {
            writeln!(out, "branch a")?;
            if let (Some(rep), Some(alpha), Some(eta)) = (&a.principal_rep, &a.alpha, &a.eta) {
                writeln!(
                    out,
                    "  principal: 𝔞 for ({}, {}) = ({})",
                    rep.a, rep.b, alpha.text
                )?;
                writeln!(
                    out,
                    "  η = {}, N(η) = {}",
                    eta.text,
                    a.eta_norm.unwrap_or(0)
                )?;
                if let (Some(s), Some(k)) = (a.eta_sign, a.eta_exponent) {
                    let sign = if s < 0 { "−" } else { "" };
                    writeln!(out, "  η = {sign}ε^{k}")?;
                }
            }
        }
        (Some(Branch::B), _, Some(b)) => {
            writeln!(out, "branch b")?;
            for pair in &b.pairs {
                let members: Vec<String> = pair
                    .reps
                    .iter()
                    .map(|x| format!("({}, {})", x.a, x.b))
                    .collect();
                writeln!(out, "  class {}: {}", pair.class, members.join(" ~ "))?;
            }
            if let Some(rel) = &b.relation {
                let ps: Vec<String> = rel.primes.iter().map(u64::to_string).collect();
                writeln!(
                    out,
                    "  relation: 𝔟 over {{{}}} = ({})",
                    ps.join(", "),
                    rel.alpha.text
                )?;
            }
        }
        _ => {}
    }
    for c in &r.checks {
        let status = if c.passed { "pass" } else { "FAIL" };
        match &c.detail {
            Some(d) => writeln!(out, "  [{status}] {}: {d}", c.name)?,
            None => writeln!(out, "  [{status}] {}", c.name)?,
        }
    }
    if let Some(e) = &r.error {
        writeln!(out, "  error: {e}")?;
    }
    Ok(())
}

fn report_exit_code(r: &Report) -> i32 {
    if r.error.is_some() {
        EXIT_INTERNAL
    } else if r.passed {
        EXIT_OK
    } else {
        EXIT_CHECKS_FAILED
    }
}

pub fn cmd_verify(m: u64, cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let r = verify::classify_with(m, &cfg.options())?;
    match cfg.format {
        Format::Text => write_report_text(out, &r)?,
        Format::Json => write_json(out, &r)?,
        Format::Csv => write_csv(out, &[ReportRow::from(&r)])?,
    }
    Ok(report_exit_code(&r))
}

fn write_summary_text(out: &mut dyn Write, s: &Summary) -> io::Result<()> {
    writeln!(
        out,
        "summary: {} reports in [{}, {}], branch a {}, branch b {}, failures {}, errors {}",
        s.reports, s.m_min, s.m_max, s.branch_a, s.branch_b, s.failures, s.errors
    )
}

pub fn cmd_scan(
    min: u64,
    max: u64,
    filter: &ScanFilter,
    cfg: &RunConfig,
    out: &mut dyn Write,
) -> Result<i32> {
    let opts = cfg.options();
    let verbose = cfg.verbose;
    let summary = match cfg.format {
        Format::Json => verify::scan_with(min, max, filter, &opts, cfg.jobs, |r| {
            if verbose > 1 {
                eprintln!("m = {}", r.m);
            }
            serde_json::to_writer(&mut *out, r)?;
            writeln!(out)
        })?,
        Format::Text => verify::scan_with(min, max, filter, &opts, cfg.jobs, |r| {
            if verbose > 1 {
                eprintln!("m = {}", r.m);
            }
            let status = if r.passed { "ok" } else { "FAIL" };
            let branch = match r.branch {
                Some(Branch::A) => "a",
                Some(Branch::B) => "b",
                None => "-",
            };
            let norm = r.unit.as_ref().map_or(0, |u| u.norm);
            writeln!(
                out,
                "{:>10}  t={}  N(ε)={:+}  branch {branch}  {status}",
                r.m, r.t, norm
            )
        })?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            let s = verify::scan_with(min, max, filter, &opts, cfg.jobs, |r| {
                if verbose > 1 {
                    eprintln!("m = {}", r.m);
                }
                w.serialize(ReportRow::from(r)).map_err(io::Error::other)
            })?;
            w.flush()?;
            s
        }
    };
    match cfg.format {
        Format::Json => {
            serde_json::to_writer(&mut *out, &summary).map_err(io::Error::from)?;
            writeln!(out)?;
        }
        Format::Text => write_summary_text(out, &summary)?,
        Format::Csv => {
            write!(out, "# ")?;
            serde_json::to_writer(&mut *out, &summary).map_err(io::Error::from)?;
            writeln!(out)?;
        }
    }
    if verbose > 0 {
        write_summary_text(&mut io::stderr(), &summary)?;
    }
    let clean = summary.failures == 0 && summary.io_errors == 0;
    Ok(if clean { EXIT_OK } else { EXIT_CHECKS_FAILED })
}
