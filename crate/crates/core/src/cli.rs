//! Command-line front end. Every subcommand prints one JSON object on
//! standard output (or an aligned table with `--pretty`).
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 parse/input error,
//! 3 precondition failure, 4 inconclusive bounded search.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::arith::{Field, RationalField};
use crate::error::{Error, Result};
use crate::frobenius::{
    fedder_cech_agreement, fedder_general, fedder_principal, frobenius_closure_member,
    frobenius_injective_window, random_hypersurface, segre_frational_probe, CechClass, CechContext,
    FrobeniusVerdict, ProbeFactor,
};
use crate::graded::{a_invariant_ci, segre_presentation, RingSpec};
use crate::local_cohomology::{a_invariant_segre, is_cm_segre, kunneth, lc_dim_oracle, lc_table_ci};
use crate::poly::{scan_variables, Ideal, PolyRing};
use crate::qdivisor::{
    a_invariant_from_omega, demazure_ring, riemann_roch_space, section_hilbert, verify_hypersurface_family,
    Base, BaseField, DivisorFile, QDivisorP1,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_INCONCLUSIVE: i32 = 4;

/// Window used to cross-check a ring file's complete-intersection claim.
const CI_CHECK_WINDOW: i64 = 30;

/// Inclusive degree range written `LO..HI` (or a single degree).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl FromStr for Window {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parse = |t: &str| t.trim().parse::<i64>().map_err(|_| format!("bad degree {t:?}"));
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b)?),
            None => {
                let n = parse(s)?;
                (n, n)
            }
        };
        if lo > hi {
            return Err(format!("empty window {lo}..{hi}"));
        }
        Ok(Window { lo, hi })
    }
}

/// A pair of variable names written `g1,g2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarPair(pub String, pub String);

impl FromStr for VarPair {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.split_once(',') {
            Some((a, b)) if !a.trim().is_empty() && !b.trim().is_empty() => {
                Ok(VarPair(a.trim().into(), b.trim().into()))
            }
            _ => Err(format!("expected two variable names `g1,g2`, got {s:?}")),
        }
    }
}

/// A Čech class written `A,B:NUMERATOR`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassSpec {
    pub a: u32,
    pub b: u32,
    pub numerator: String,
}

impl FromStr for ClassSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let err = || format!("expected `A,B:NUMERATOR`, got {s:?}");
        let (exps, numerator) = s.split_once(':').ok_or_else(err)?;
        let (a, b) = exps.split_once(',').ok_or_else(err)?;
        let a: u32 = a.trim().parse().map_err(|_| err())?;
        let b: u32 = b.trim().parse().map_err(|_| err())?;
        if a == 0 || b == 0 {
            return Err("Čech exponents must be positive".into());
        }
        Ok(ClassSpec {
            a,
            b,
            numerator: numerator.trim().into(),
        })
    }
}

#[derive(Parser, Debug)]
#[command(name = "segre", version, about = "Graded rings, local cohomology and Frobenius tests in characteristic p")]
struct Cli {
    /// Print an aligned table instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct SopArg {
    /// System of parameters `g1,g2` (default: last pair of variable names that works).
    #[arg(long)]
    sop: Option<VarPair>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hilbert series in closed form plus coefficients on a window.
    Hilbert {
        ring: String,
        #[arg(long, default_value = "0..20", allow_hyphen_values = true)]
        window: Window,
    },
    /// a-invariant of a graded complete intersection.
    AInv { ring: String },
    /// Local cohomology table of R # S through the Künneth formula.
    Kunneth {
        first: String,
        second: String,
        #[arg(long, default_value = "-30..10", allow_hyphen_values = true)]
        window: Window,
    },
    /// Cohen–Macaulay test for R # S.
    CmCheck { first: String, second: String },
    /// a-invariant of R # S.
    ASegre { first: String, second: String },
    /// Fedder's F-purity criterion for comma-separated generators.
    Fedder {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..65536))]
        p: u32,
        generators: String,
    },
    /// Bounded Frobenius-closure membership search.
    FrobClosure {
        ring: String,
        #[arg(long)]
        ideal: String,
        #[arg(long)]
        element: String,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(0..=8))]
        emax: u32,
    },
    /// Run a Čech-class script (make / frobenius / scale / sub / zero / degree).
    Cech {
        ring: String,
        script: String,
        #[command(flatten)]
        sop: SopArg,
    },
    /// Injectivity of F^e on [H^2]_n over a window.
    FrobInjective {
        ring: String,
        /// Degrees to test (default: the socle degree a(R)).
        #[arg(long, allow_hyphen_values = true)]
        window: Option<Window>,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=4))]
        e: u32,
        #[command(flatten)]
        sop: SopArg,
    },
    /// dim [H^2]_n by truncated Čech complexes, next to the dual formula.
    LcOracle {
        ring: String,
        #[arg(long, allow_hyphen_values = true)]
        degree: i64,
        #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u32).range(1..=200))]
        tmax: u32,
        #[command(flatten)]
        sop: SopArg,
    },
    /// Search for e with c1 F^e(eta1) and c2 F^e(eta2) both nonzero.
    FrationalProbe {
        first: String,
        second: String,
        /// Class in the first ring, `A,B:NUMERATOR`.
        #[arg(long)]
        eta1: ClassSpec,
        #[arg(long)]
        eta2: ClassSpec,
        #[arg(long, default_value = "1")]
        c1: String,
        #[arg(long, default_value = "1")]
        c2: String,
        #[arg(long)]
        sop1: Option<VarPair>,
        #[arg(long)]
        sop2: Option<VarPair>,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..=6))]
        emax: u32,
    },
    /// dim H^0(⌊nD⌋) on a window, optionally with bases.
    Sections {
        divisor: String,
        #[arg(long, default_value = "0..20", allow_hyphen_values = true)]
        window: Window,
        #[arg(long)]
        basis: bool,
    },
    /// Generators and relations of the section ring of a Q-divisor.
    Demazure {
        divisor: String,
        #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(i64).range(1..=400))]
        degree_bound: i64,
    },
    /// Generators and minimal relations of R # S.
    SegrePresent {
        first: String,
        second: String,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(i64).range(1..=200))]
        degree_bound: i64,
        /// Also run Fedder's criterion on the relation ideal.
        #[arg(long)]
        fedder: bool,
    },
    /// Rebuild the section ring of the hypersurface divisor for p = 6k ± 1.
    VerifyRemark {
        #[arg(long, value_parser = clap::value_parser!(u32).range(5..=101))]
        p: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=17))]
        k: u32,
        /// "Q" or a prime >= 3.
        #[arg(long, default_value = "Q")]
        base: String,
    },
    /// Fedder vs Čech F-purity agreement on seeded random hypersurfaces.
    Consistency {
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..=1000))]
        count: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Result of a subcommand: structured output plus exit code.
struct Outcome {
    value: Value,
    code: i32,
}

impl Outcome {
    fn ok(value: Value) -> Self {
        Outcome { value, code: EXIT_OK }
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse(_) | Error::Io { .. } => EXIT_PARSE,
        _ => EXIT_PRECONDITION,
    }
}

/// Parses `args` (including the program name), runs the command and writes
/// its output to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(outcome) => {
            let text = if cli.pretty {
                render_pretty(&outcome.value)
            } else {
                render_inline(&outcome.value)
            };
            let _ = writeln!(out, "{text}");
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn read_file(path: &str) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_string(),
        source,
    })
}

fn in_file(path: &str, e: Error) -> Error {
    match e {
        Error::Parse(m) => Error::Parse(format!("{path}: {m}")),
        Error::Precondition(m) => Error::Precondition(format!("{path}: {m}")),
        other => other,
    }
}

/// Loads a ring file and cross-checks a complete-intersection claim against
/// standard-monomial counts.
pub fn load_ring(path: &str) -> Result<RingSpec> {
    let ring = RingSpec::parse_json(&read_file(path)?).map_err(|e| in_file(path, e))?;
    if ring.is_complete_intersection() && !ring.relations().is_empty() {
        let confirmed = ring
            .verify_complete_intersection(CI_CHECK_WINDOW)
            .map_err(|e| in_file(path, e))?;
        if !confirmed {
            return Err(Error::Precondition(format!(
                "{path}: relations do not form a complete intersection (closed-form Hilbert series disagrees with enumeration on [0, {CI_CHECK_WINDOW}])"
            )));
        }
    }
    Ok(ring)
}

fn load_divisor_file(path: &str) -> Result<DivisorFile> {
    DivisorFile::parse_json(&read_file(path)?).map_err(|e| in_file(path, e))
}

fn context(ring: RingSpec, sop: &Option<VarPair>) -> Result<CechContext> {
    match sop {
        Some(VarPair(a, b)) => CechContext::with_named_sop(ring, a, b),
        None => CechContext::with_default_sop(ring),
    }
}

fn verdict_value(v: &FrobeniusVerdict) -> (Value, i32) {
    match v {
        FrobeniusVerdict::Confirmed { e } => (json!({"verdict": "confirmed", "e": e}), EXIT_OK),
        FrobeniusVerdict::Refuted { e, reason } => {
            (json!({"verdict": "refuted", "e": e, "reason": reason}), EXIT_OK)
        }
        FrobeniusVerdict::Inconclusive { e_max } => {
            (json!({"verdict": "inconclusive", "e_max": e_max}), EXIT_INCONCLUSIVE)
        }
    }
}

fn class_value(ctx: &CechContext, class: &CechClass) -> Result<Value> {
    Ok(json!({
        "class": ctx.format(class),
        "degree": class.degree(),
        "zero": ctx.is_zero(class)?,
    }))
}

macro_rules! with_base {
    ($file:expr, $path:expr, |$d:ident| $body:expr) => {{
        let file = $file;
        match file.base.resolve().map_err(|e| in_file($path, e))? {
            Base::Rational => {
                let $d = QDivisorP1::from_file(RationalField, &file).map_err(|e| in_file($path, e))?;
                $body
            }
            Base::Prime(f) => {
                let $d = QDivisorP1::from_file(f, &file).map_err(|e| in_file($path, e))?;
                $body
            }
        }
    }};
}

fn execute(command: &Command) -> Result<Outcome> {
    match command {
        Command::Hilbert { ring, window } => hilbert(ring, *window),
        Command::AInv { ring } => {
            let r = load_ring(ring)?;
            Ok(Outcome::ok(json!({"a_invariant": a_invariant_ci(&r)?})))
        }
        Command::Kunneth { first, second, window } => kunneth_cmd(first, second, *window),
        Command::CmCheck { first, second } => {
            let (a, b) = (load_ring(first)?, load_ring(second)?);
            let verdict = is_cm_segre(&a, &b)?;
            let mut obj = Map::new();
            obj.insert("cohen_macaulay".into(), json!(verdict.cohen_macaulay));
            obj.insert("a_invariant".into(), json!(a_invariant_segre(&a, &b)?));
            if let Some(w) = verdict.witness {
                obj.insert(
                    "witness".into(),
                    json!({"k": w.k, "degree": w.degree, "term": w.term, "dimension": w.dimension}),
                );
            }
            Ok(Outcome::ok(Value::Object(obj)))
        }
        Command::ASegre { first, second } => {
            let (a, b) = (load_ring(first)?, load_ring(second)?);
            Ok(Outcome::ok(json!({"a_invariant": a_invariant_segre(&a, &b)?})))
        }
        Command::Fedder { p, generators } => fedder_cmd(*p, generators),
        Command::FrobClosure {
            ring,
            ideal,
            element,
            emax,
        } => {
            let r = load_ring(ring)?;
            let i = Ideal::parse(r.ring(), ideal).map_err(|e| in_file("--ideal", e))?;
            let g = r.ring().parse(element).map_err(|e| in_file("--element", e))?;
            let (value, code) = verdict_value(&frobenius_closure_member(&r, &i, &g, *emax)?);
            Ok(Outcome { value, code })
        }
        Command::Cech { ring, script, sop } => cech_cmd(ring, script, &sop.sop),
        Command::FrobInjective { ring, window, e, sop } => {
            let ctx = context(load_ring(ring)?, &sop.sop)?;
            let window = match window {
                Some(w) => *w,
                None => {
                    let a = a_invariant_ci(ctx.ring())?;
                    Window { lo: a, hi: a }
                }
            };
            let report = frobenius_injective_window(&ctx, window.lo..=window.hi, *e)?;
            let (g1, g2) = ctx.sop_names();
            let witnesses = report
                .witnesses
                .iter()
                .map(|c| json!({"class": ctx.format(c), "degree": c.degree()}))
                .collect::<Vec<_>>();
            let checked = report
                .checked
                .iter()
                .map(|(n, d)| json!({"degree": n, "dimension": d}))
                .collect::<Vec<_>>();
            Ok(Outcome::ok(json!({
                "injective": report.injective,
                "sop": [g1, g2],
                "e": e,
                "window": [window.lo, window.hi],
                "degrees": checked,
                "witnesses": witnesses,
            })))
        }
        Command::LcOracle { ring, degree, tmax, sop } => {
            let ctx = context(load_ring(ring)?, &sop.sop)?;
            let value = lc_dim_oracle(ctx.ring(), ctx.sop(), *degree, *tmax)?;
            let dual = ctx.expected_dimension(*degree)?;
            let (g1, g2) = ctx.sop_names();
            let agrees = dual == value.dimension;
            Ok(Outcome {
                value: json!({
                    "degree": degree,
                    "sop": [g1, g2],
                    "dimension": value.dimension,
                    "dual_dimension": dual,
                    "agrees": agrees,
                    "stabilized_at": value.stabilized_at,
                    "certified_from": value.certified_from,
                }),
                code: if agrees { EXIT_OK } else { EXIT_MISMATCH },
            })
        }
        Command::FrationalProbe {
            first,
            second,
            eta1,
            eta2,
            c1,
            c2,
            sop1,
            sop2,
            emax,
        } => {
            let cr = context(load_ring(first)?, sop1)?;
            let cs = context(load_ring(second)?, sop2)?;
            let class1 = cr
                .make_parsed(&eta1.numerator, eta1.a, eta1.b)
                .map_err(|e| in_file("--eta1", e))?;
            let class2 = cs
                .make_parsed(&eta2.numerator, eta2.a, eta2.b)
                .map_err(|e| in_file("--eta2", e))?;
            let m1 = cr.ring().ring().parse(c1).map_err(|e| in_file("--c1", e))?;
            let m2 = cs.ring().ring().parse(c2).map_err(|e| in_file("--c2", e))?;
            let verdict = segre_frational_probe(
                ProbeFactor { context: &cr, class: &class1, multiplier: &m1 },
                ProbeFactor { context: &cs, class: &class2, multiplier: &m2 },
                *emax,
            )?;
            let (mut value, code) = verdict_value(&verdict);
            let obj = value.as_object_mut().expect("object");
            obj.insert("eta1".into(), json!(cr.format(&class1)));
            obj.insert("eta2".into(), json!(cs.format(&class2)));
            obj.insert("degree".into(), json!(class1.degree()));
            Ok(Outcome { value, code })
        }
        Command::Sections { divisor, window, basis } => {
            with_base!(load_divisor_file(divisor)?, divisor, |d| sections_cmd(&d, *window, *basis))
        }
        Command::Demazure { divisor, degree_bound } => {
            with_base!(load_divisor_file(divisor)?, divisor, |d| demazure_cmd(&d, *degree_bound))
        }
        Command::SegrePresent {
            first,
            second,
            degree_bound,
            fedder,
        } => {
            let (a, b) = (load_ring(first)?, load_ring(second)?);
            let pres = segre_presentation(&a, &b, *degree_bound)?;
            let generators = pres
                .generators
                .iter()
                .enumerate()
                .map(|(i, g)| json!({"name": format!("g{}", i + 1), "degree": g.degree, "element": g.element.to_string()}))
                .collect::<Vec<_>>();
            let relations = pres.relations.iter().map(|r| r.to_string()).collect::<Vec<_>>();
            let mut obj = Map::new();
            obj.insert("generators".into(), json!(generators));
            obj.insert("relations".into(), json!(relations));
            obj.insert("certified_up_to".into(), json!(pres.certified_up_to));
            if *fedder {
                obj.insert("f_pure".into(), json!(fedder_general(&pres.relation_ideal()?)?));
            }
            Ok(Outcome::ok(Value::Object(obj)))
        }
        Command::VerifyRemark { p, k, base } => {
            let base_field = match base.parse::<u32>() {
                Ok(q) => BaseField::Prime(q),
                Err(_) => BaseField::Name(base.clone()),
            };
            match base_field.resolve().map_err(|e| in_file("--base", e))? {
                Base::Rational => verify_remark_cmd(RationalField, *p, *k, base),
                Base::Prime(f) => verify_remark_cmd(f, *p, *k, base),
            }
        }
        Command::Consistency { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let primes = [2u32, 3, 5];
            let mut cases = Vec::new();
            let mut agreements = 0;
            for i in 0..*count {
                let p = primes[i as usize % primes.len()];
                let ring = random_hypersurface(&mut rng, p)?;
                let (fedder, cech) = fedder_cech_agreement(&ring)?;
                agreements += (fedder == cech) as u32;
                cases.push(json!({"p": p, "f": ring.relations()[0].to_string(), "fedder": fedder, "cech": cech}));
            }
            Ok(Outcome {
                value: json!({"seed": seed, "count": count, "agreements": agreements, "cases": cases}),
                code: if agreements == *count { EXIT_OK } else { EXIT_MISMATCH },
            })
        }
    }
}

fn hilbert(path: &str, window: Window) -> Result<Outcome> {
    let r = load_ring(path)?;
    let mut obj = Map::new();
    if r.is_complete_intersection() {
        let hs = r.hilbert_series()?;
        obj.insert("series".into(), json!(hs.to_string()));
        obj.insert("denominator".into(), json!(hs.denominator()));
        obj.insert("dimension".into(), json!(r.dimension()?));
    }
    let coefficients: Vec<u64> = (window.lo..=window.hi)
        .map(|n| -> Result<u64> {
            if n < 0 {
                return Ok(0);
            }
            if r.is_complete_intersection() {
                Ok(r.hilbert_series()?.coefficient(n).max(0) as u64)
            } else {
                Ok(r.dimension_by_enumeration(n))
            }
        })
        .collect::<Result<_>>()?;
    obj.insert("window".into(), json!([window.lo, window.hi]));
    obj.insert("coefficients".into(), json!(coefficients));
    Ok(Outcome::ok(Value::Object(obj)))
}

fn kunneth_cmd(first: &str, second: &str, window: Window) -> Result<Outcome> {
    let (a, b) = (load_ring(first)?, load_ring(second)?);
    let ta = lc_table_ci(&a)?;
    let tb = lc_table_ci(&b)?;
    let kt = kunneth(&ta, &tb, (&a.hilbert_series()?, &b.hilbert_series()?))?;
    let values = |f: &crate::local_cohomology::GradedDimFunction| {
        (window.lo..=window.hi).map(|n| f.value_at(n)).collect::<Vec<_>>()
    };
    let entries = kt
        .table
        .entries()
        .iter()
        .enumerate()
        .map(|(k, f)| {
            let terms = kt.terms[k]
                .iter()
                .filter(|t| !t.function.is_identically_zero())
                .map(|t| json!({"term": t.label, "top_degree": t.function.top_degree()}))
                .collect::<Vec<_>>();
            json!({
                "k": k,
                "zero": f.is_identically_zero(),
                "top_degree": f.top_degree(),
                "nonzero_terms": terms,
                "values": values(f),
            })
        })
        .collect::<Vec<_>>();
    Ok(Outcome::ok(json!({
        "dimension": kt.table.dimension(),
        "window": [window.lo, window.hi],
        "entries": entries,
    })))
}

fn fedder_cmd(p: u32, text: &str) -> Result<Outcome> {
    let names = scan_variables(text);
    if names.is_empty() {
        return Err(Error::Parse("no variables in the generators".into()));
    }
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let ring = PolyRing::standard(p, &refs)?;
    let ideal = Ideal::parse(&ring, text)?;
    let f_pure = match ideal.generators() {
        [f] => fedder_principal(f)?,
        _ => fedder_general(&ideal)?,
    };
    Ok(Outcome::ok(json!({"f_pure": f_pure})))
}

/// One statement of a Čech script.
enum Statement {
    Assign { name: String, op: String, value: CechClass },
    Query { name: String, op: String },
}

fn cech_cmd(ring: &str, script_path: &str, sop: &Option<VarPair>) -> Result<Outcome> {
    let ctx = context(load_ring(ring)?, sop)?;
    let script = read_file(script_path)?;
    let mut env: Vec<(String, CechClass)> = Vec::new();
    let mut steps = Vec::new();
    for (idx, raw) in script.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = |e: Error| match e {
            Error::Parse(m) => Error::Parse(format!("{script_path}:{line_no}: {m}")),
            Error::Precondition(m) => Error::Precondition(format!("{script_path}:{line_no}: {m}")),
            other => other,
        };
        let statement = parse_statement(&ctx, &env, line).map_err(at)?;
        match statement {
            Statement::Assign { name, op, value } => {
                let mut step = Map::new();
                step.insert("line".into(), json!(line_no));
                step.insert("op".into(), json!(op));
                step.insert("name".into(), json!(name));
                if let Value::Object(fields) = class_value(&ctx, &value).map_err(at)? {
                    step.extend(fields);
                }
                steps.push(Value::Object(step));
                env.retain(|(n, _)| *n != name);
                env.push((name, value));
            }
            Statement::Query { name, op } => {
                let class = &env.iter().find(|(n, _)| *n == name).expect("checked").1;
                let result = match op.as_str() {
                    "zero" => json!(ctx.is_zero(class).map_err(at)?),
                    _ => json!(class.degree()),
                };
                steps.push(json!({"line": line_no, "op": op, "name": name, "result": result}));
            }
        }
    }
    let (g1, g2) = ctx.sop_names();
    Ok(Outcome::ok(json!({"sop": [g1, g2], "steps": steps})))
}

fn parse_statement(ctx: &CechContext, env: &[(String, CechClass)], line: &str) -> Result<Statement> {
    let lookup = |name: &str| -> Result<CechClass> {
        env.iter()
            .find(|(n, _)| n == name)
            .map(|(_, c)| c.clone())
            .ok_or_else(|| Error::Parse(format!("unknown class {name:?}")))
    };
    let number = |t: Option<&str>, what: &str| -> Result<u32> {
        t.and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse(format!("expected {what}")))
    };
    if let Some((lhs, rhs)) = line.split_once('=') {
        let name = lhs.trim();
        if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(Error::Parse(format!("bad class name {name:?}")));
        }
        let mut words = rhs.split_whitespace();
        let op = words.next().ok_or_else(|| Error::Parse("missing operation".into()))?;
        let value = match op {
            "make" => {
                let a = number(words.next(), "exponent a")?;
                let b = number(words.next(), "exponent b")?;
                let numerator: Vec<&str> = words.collect();
                ctx.make_parsed(&numerator.join(" "), a, b)?
            }
            "frobenius" => {
                let class = lookup(words.next().unwrap_or(""))?;
                let e = number(words.next(), "Frobenius exponent")?;
                ctx.frobenius(&class, e)?
            }
            "scale" => {
                let mut rest: Vec<&str> = words.collect();
                let class = lookup(rest.pop().unwrap_or(""))?;
                let c = ctx.ring().ring().parse(&rest.join(" "))?;
                ctx.scale(&c, &class)?
            }
            "sub" => {
                let x = lookup(words.next().unwrap_or(""))?;
                let y = lookup(words.next().unwrap_or(""))?;
                ctx.sub(&x, &y)?
            }
            other => return Err(Error::Parse(format!("unknown operation {other:?}"))),
        };
        return Ok(Statement::Assign {
            name: name.into(),
            op: op.into(),
            value,
        });
    }
    let mut words = line.split_whitespace();
    let op = words.next().unwrap_or("");
    if op != "zero" && op != "degree" {
        return Err(Error::Parse(format!("unknown statement {line:?}")));
    }
    let name = words.next().unwrap_or("");
    lookup(name)?;
    Ok(Statement::Query {
        name: name.into(),
        op: op.into(),
    })
}

fn sections_cmd<F: Field>(d: &QDivisorP1<F>, window: Window, with_basis: bool) -> Result<Outcome> {
    let dims = section_hilbert(d, window.lo, window.hi);
    let mut obj = Map::new();
    obj.insert("divisor".into(), json!(d.to_string()));
    obj.insert("degree".into(), json!(crate::arith::format_rational(&d.degree())));
    obj.insert("ample".into(), json!(d.is_ample()));
    obj.insert("window".into(), json!([window.lo, window.hi]));
    obj.insert("dimensions".into(), json!(dims));
    if with_basis {
        let bases = (window.lo..=window.hi)
            .filter_map(|n| {
                let e = d.scale(n).floor();
                let basis = riemann_roch_space(&e);
                (!basis.is_empty()).then(|| {
                    json!({
                        "n": n,
                        "floor": e.to_string(),
                        "basis": basis.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                    })
                })
            })
            .collect::<Vec<_>>();
        obj.insert("bases".into(), json!(bases));
    }
    Ok(Outcome::ok(Value::Object(obj)))
}

fn demazure_cmd<F: Field>(d: &QDivisorP1<F>, bound: i64) -> Result<Outcome> {
    let ring = demazure_ring(d, bound)?;
    let names = ring.generator_names();
    let generators = ring
        .generators
        .iter()
        .zip(&names)
        .map(|(g, n)| json!({"name": n, "degree": g.degree, "section": g.function.to_string()}))
        .collect::<Vec<_>>();
    let relations = ring
        .relations
        .iter()
        .map(|r| json!({"degree": r.degree, "relation": r.display(d.field(), &names)}))
        .collect::<Vec<_>>();
    Ok(Outcome::ok(json!({
        "divisor": d.to_string(),
        "generators": generators,
        "relations": relations,
        "certified_up_to": ring.certified_up_to,
        "a_invariant": a_invariant_from_omega(d)?,
    })))
}

fn verify_remark_cmd<F: Field>(field: F, p: u32, k: u32, base: &str) -> Result<Outcome> {
    let report = verify_hypersurface_family(field.clone(), p, k)?;
    let names: Vec<String> = ["z", "y", "x"].iter().map(|s| s.to_string()).collect();
    let generators = report
        .ring
        .generators
        .iter()
        .zip(&names)
        .map(|(g, n)| json!({"name": n, "degree": g.degree, "section": g.function.to_string()}))
        .collect::<Vec<_>>();
    let relations = report
        .ring
        .relations
        .iter()
        .map(|r| r.display(&field, &names))
        .collect::<Vec<_>>();
    let ok = report.all_ok();
    Ok(Outcome {
        value: json!({
            "p": p,
            "k": k,
            "base": base,
            "divisor": report.divisor.to_string(),
            "generator_degrees": report.generator_degrees,
            "generators": generators,
            "relations": relations,
            "generators_match": report.generators_match,
            "relation_matches": report.relation_matches,
            "identity_holds": report.identity_holds,
            "hilbert_matches": report.hilbert_matches,
            "a_invariant": report.a_invariant,
            "ok": ok,
        }),
        code: if ok { EXIT_OK } else { EXIT_MISMATCH },
    })
}

/// Single-line JSON with `", "` and `": "` separators.
pub fn render_inline(v: &Value) -> String {
    let mut s = String::new();
    write_inline(&mut s, v);
    s
}

fn write_inline(s: &mut String, v: &Value) {
    match v {
        Value::Object(map) => {
            s.push('{');
            for (i, (k, val)) in map.iter().enumerate() {
                if i > 0 {
                    s.push_str(", ");
                }
                s.push_str(&Value::String(k.clone()).to_string());
                s.push_str(": ");
                write_inline(s, val);
            }
            s.push('}');
        }
        Value::Array(items) => {
            s.push('[');
            for (i, val) in items.iter().enumerate() {
                if i > 0 {
                    s.push_str(", ");
                }
                write_inline(s, val);
            }
            s.push(']');
        }
        other => s.push_str(&other.to_string()),
    }
}

/// `key  value` lines; arrays of objects become indented rows.
pub fn render_pretty(v: &Value) -> String {
    let mut s = String::new();
    let Value::Object(map) = v else {
        return render_inline(v);
    };
    let width = map.keys().map(|k| k.len()).max().unwrap_or(0);
    for (k, val) in map {
        match val {
            Value::Array(items) if items.iter().any(|x| x.is_object()) => {
                let _ = writeln!(s, "{k}:");
                for item in items {
                    let cells: Vec<String> = match item {
                        Value::Object(m) => m.iter().map(|(kk, vv)| format!("{kk}={}", scalar(vv))).collect(),
                        other => vec![scalar(other)],
                    };
                    let _ = writeln!(s, "  {}", cells.join("  "));
                }
            }
            _ => {
                let _ = writeln!(s, "{k:<width$}  {}", scalar(val));
            }
        }
    }
    s.trim_end().to_string()
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => render_inline(other),
    }
}
