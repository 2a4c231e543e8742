//! Command-line front end. Every subcommand writes a JSON report (to `--out`
//! or stdout) and returns an exit code: 0 when all audits pass, 1 when an
//! audit fails, 2 on invalid input.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::algebra::field::{format_rational, int, is_prime, parse_rational, Rational};
use crate::constructions::data::FIBER_Z;
use crate::constructions::{
    audit_construction3, build_construction1, build_construction2, construction3_data,
    AuditReport, Construction1Spec, Construction3Options,
};
use crate::error::{Error, Result};
use crate::fibration::{DegeneracyData, FiberedSpace, SpaceJson};
use crate::modp::{
    proper_intersection_audit, reduce_space, smoothness_certificate, BranchCurve, DiscriminantCurve,
    IntersectionVerdict, DEFAULT_PRIMES,
};
use crate::propagate::{
    density_witness, from_json_lines, generate_points, points_of, to_json_lines, Backend, PropagateConfig,
    StreamItem, TranslationSource,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_AUDIT_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "cyrat", version, about = "Exact rational points on elliptically fibered varieties over Q")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Seed of every pseudo-random draw.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Prime ladder for finite-field audits.
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_PRIMES.to_vec())]
    pub primes: Vec<u64>,
    /// Report path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Optional CSV summary table.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Pencil construction over P1 with fibers C x Y.
    Construct1 {
        #[command(flatten)]
        common: Common,
        /// Dimension parameter (at least 3).
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    /// Tower of (2,...,2) hypersurfaces in products of P1.
    Construct2 {
        #[command(flatten)]
        common: Common,
        /// Height of the tower (at least 1).
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Threefold over P2 built from the Enriques data.
    Construct3 {
        #[command(flatten)]
        common: Common,
        /// Also run the finite-field step (smoothness and proper intersection).
        #[arg(long)]
        full_audit: bool,
        /// Primes for the proper-intersection count.
        #[arg(long, value_delimiter = ',', default_values_t = crate::constructions::enriques::INTERSECTION_PRIMES.to_vec())]
        intersection_primes: Vec<u64>,
    },
    /// Translation orbits of rational points, as JSON lines.
    Propagate {
        #[command(flatten)]
        common: Common,
        /// Space file, or a construction report carrying one.
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 20)]
        orbit: usize,
        #[arg(long, default_value_t = 10)]
        fibers: usize,
        #[arg(long, default_value_t = 10_000)]
        height_cap: u64,
        #[arg(long, value_enum, default_value_t = BackendArg::Qrt)]
        backend: BackendArg,
        /// Constant second section in fiber coordinates, comma separated.
        #[arg(long, value_delimiter = ',')]
        section: Option<Vec<String>>,
        /// Seed point in ambient coordinates; repeatable. Searched when absent.
        #[arg(long = "seed-point", value_delimiter = ',', num_args = 1..)]
        seed_points: Vec<String>,
        /// Coordinate bound of the seed search.
        #[arg(long, default_value_t = 2)]
        search_bound: i64,
    },
    /// Forms of one multidegree vanishing on a point stream.
    Density {
        #[command(flatten)]
        common: Common,
        /// Point stream (JSON lines).
        #[arg(long = "in")]
        input: PathBuf,
        /// Space file the stream lives on.
        #[arg(long)]
        space: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        multidegree: Vec<i64>,
    },
    /// Finite-field smoothness of a space file, or the intersection audit of the threefold.
    ModpAudit {
        #[command(flatten)]
        common: Common,
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Run the discriminant/branch intersection count of the threefold.
        #[arg(long)]
        intersection: bool,
    },
    /// Re-run a construction report, or check a point stream against its space.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long = "in")]
        input: PathBuf,
        /// Space file, required for point streams.
        #[arg(long)]
        space: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Weierstrass,
    Qrt,
    Cubic,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Weierstrass => Backend::Weierstrass,
            BackendArg::Qrt => Backend::Qrt,
            BackendArg::Cubic => Backend::Cubic,
        }
    }
}

/// Outcome of a subcommand: the report body and whether every audit passed.
struct Outcome {
    report: Value,
    pass: bool,
    csv: Option<String>,
    /// Verbatim file body instead of the JSON report (point streams).
    raw: Option<String>,
}

impl Outcome {
    fn json(report: Value, pass: bool) -> Self {
        Outcome { report, pass, csv: None, raw: None }
    }
}

/// Parses `args` (program name first) and runs the subcommand.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_PASS };
        }
    };
    let common = common_of(&cli.command).clone();
    match validate_primes(&common.primes).and_then(|_| dispatch(cli.command)) {
        Ok(o) => match emit(&common, &o) {
            Ok(()) => {
                if o.pass {
                    EXIT_PASS
                } else {
                    EXIT_AUDIT_FAILED
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_INVALID
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            let code = exit_code(&e);
            let report = json!({ "error": e.to_string() });
            if code == EXIT_AUDIT_FAILED && emit(&common, &Outcome::json(report, false)).is_err() {
                return EXIT_INVALID;
            }
            code
        }
    }
}

/// Invalid input maps to 2, every other failure is an audit failure.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) | Error::BadPrime(..) | Error::TooLarge(_) => EXIT_INVALID,
        _ => EXIT_AUDIT_FAILED,
    }
}

fn common_of(c: &Command) -> &Common {
    match c {
        Command::Construct1 { common, .. }
        | Command::Construct2 { common, .. }
        | Command::Construct3 { common, .. }
        | Command::Propagate { common, .. }
        | Command::Density { common, .. }
        | Command::ModpAudit { common, .. }
        | Command::Verify { common, .. } => common,
    }
}

fn validate_primes(ps: &[u64]) -> Result<()> {
    if ps.is_empty() {
        return Err(Error::InvalidInput("empty prime ladder".into()));
    }
    match ps.iter().find(|&&p| !is_prime(p) || p < 5) {
        Some(p) => Err(Error::InvalidInput(format!("{p} is not a prime of the ladder (primes >= 5)"))),
        None => Ok(()),
    }
}

fn write_file(path: &Path, body: &str) -> Result<()> {
    std::fs::write(path, body).map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

fn emit(common: &Common, o: &Outcome) -> Result<()> {
    let body = match &o.raw {
        Some(raw) => raw.clone(),
        None => {
            let mut s = serde_json::to_string_pretty(&o.report).expect("reports serialize");
            s.push('\n');
            s
        }
    };
    match &common.out {
        Some(p) => write_file(p, &body)?,
        None => print!("{body}"),
    }
    if let (Some(p), Some(csv)) = (&common.csv, &o.csv) {
        write_file(p, csv)?;
    }
    Ok(())
}

fn dispatch(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Construct1 { common, n } => construct1(&common, n),
        Command::Construct2 { common, n } => construct2(&common, n),
        Command::Construct3 { common, full_audit, intersection_primes } => {
            validate_primes(&intersection_primes)?;
            construct3(&common, full_audit, intersection_primes)
        }
        Command::Propagate { common: _, input, orbit, fibers, height_cap, backend, section, seed_points, search_bound } => {
            if fibers == 0 || height_cap == 0 {
                return Err(Error::InvalidInput("budgets must be positive".into()));
            }
            let cfg = PropagateConfig { orbit, fibers, backend: backend.into(), height_cap };
            propagate(&input, &cfg, section, &seed_points, search_bound)
        }
        Command::Density { common: _, input, space, multidegree } => density(&input, &space, &multidegree),
        Command::ModpAudit { common, input, intersection } => modp_audit(&common, input.as_deref(), intersection),
        Command::Verify { common: _, input, space } => verify(&input, space.as_deref()),
    }
}

fn with_audit(mut report: Value, audit: &AuditReport) -> (Value, String) {
    report["audit"] = serde_json::to_value(audit).expect("audit serializes");
    (report, audit.to_csv())
}

fn construct1(common: &Common, n: usize) -> Result<Outcome> {
    let spec = Construction1Spec { n, seed: common.seed, primes: common.primes.clone(), ..Default::default() };
    let b = build_construction1(&spec)?;
    let report = json!({
        "construction": "construct1",
        "seed": common.seed,
        "n": n,
        "primes": common.primes,
        "d": b.d.to_string(),
        "spaces": { "S": b.s.to_json(), "Y": b.y.to_json(), "X": b.x.to_json() },
        "space": b.x.to_json(),
    });
    let (report, csv) = with_audit(report, &b.audit);
    Ok(Outcome { report, pass: !b.audit.any_fail() && b.audit.all_pass(), csv: Some(csv), raw: None })
}

fn construct2(common: &Common, n: usize) -> Result<Outcome> {
    let c = build_construction2(n, common.seed, &common.primes)?;
    let levels: Vec<FiberedSpace> = (1..=n).map(|k| c.tower.level(k)).collect::<Result<_>>()?;
    let forms: Vec<String> = levels.iter().map(|s| s.equations()[0].display_with(&s.ambient().var_names())).collect();
    let report = json!({
        "construction": "construct2",
        "seed": common.seed,
        "n": n,
        "primes": common.primes,
        "attempts": c.tower.attempts,
        "forms": forms,
        "levels": levels.iter().map(|s| s.to_json()).collect::<Vec<_>>(),
        "space": levels.last().expect("n >= 1").to_json(),
    });
    let (report, csv) = with_audit(report, &c.audit);
    Ok(Outcome { report, pass: c.audit.all_pass(), csv: Some(csv), raw: None })
}

fn construct3(common: &Common, full_audit: bool, intersection_primes: Vec<u64>) -> Result<Outcome> {
    let opts = Construction3Options { full_audit, primes: common.primes.clone(), intersection_primes, seed: common.seed };
    let data = construction3_data();
    let audit = audit_construction3(&data, &opts);
    let report = json!({
        "construction": "construct3",
        "seed": common.seed,
        "full_audit": full_audit,
        "primes": common.primes,
        "intersection_primes": opts.intersection_primes,
        "space": data.threefold.to_json(),
    });
    let (report, csv) = with_audit(report, &audit);
    Ok(Outcome { report, pass: !audit.any_fail(), csv: Some(csv), raw: None })
}

/// A space file, or any JSON object with a `space` field holding one.
pub fn load_space(path: &Path) -> Result<FiberedSpace> {
    let text = read_file(path)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("bad JSON in {}: {e}", path.display())))?;
    let sj = v.get("space").cloned().unwrap_or(v);
    let sj: SpaceJson = serde_json::from_value(sj).map_err(|e| Error::InvalidInput(format!("not a space file: {e}")))?;
    FiberedSpace::from_json(&sj)
}

fn parse_point(parts: &[String]) -> Result<Vec<Rational>> {
    parts.iter().map(|s| parse_rational(s)).collect()
}

/// Rational points with integer coordinates in `[-bound, bound]`, one per
/// base point, in lexicographic search order.
pub fn search_seeds(space: &FiberedSpace, bound: i64, max: usize) -> Vec<Vec<Rational>> {
    let n = space.ambient().nvars();
    let mut seen_base = std::collections::BTreeSet::new();
    let mut out = vec![];
    let mut digits = vec![-bound; n];
    loop {
        let p: Vec<Rational> = digits.iter().map(|&x| int(x)).collect();
        if let Ok(q) = space.ambient().normalize(&p) {
            if space.contains(&q) {
                let (b, _) = space.split(&q);
                let key: Vec<String> = b.iter().map(format_rational).collect();
                if seen_base.insert(key) {
                    out.push(q);
                    if out.len() >= max {
                        return out;
                    }
                }
            }
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if digits[i] < bound {
                digits[i] += 1;
                break;
            }
            digits[i] = -bound;
        }
    }
}

fn propagate(
    input: &Path,
    cfg: &PropagateConfig,
    section: Option<Vec<String>>,
    seed_points: &[String],
    bound: i64,
) -> Result<Outcome> {
    let space = load_space(input)?;
    let nv = space.ambient().nvars();
    let seeds: Vec<Vec<Rational>> = if seed_points.is_empty() {
        search_seeds(&space, bound, cfg.fibers)
    } else {
        if seed_points.len() % nv != 0 {
            return Err(Error::InvalidInput(format!("seed points need {nv} coordinates each")));
        }
        let pts = seed_points.chunks(nv).map(parse_point).collect::<Result<Vec<_>>>()?;
        if let Some(p) = pts.iter().find(|p| !space.contains(p)) {
            let s: Vec<String> = p.iter().map(format_rational).collect();
            return Err(Error::InvalidInput(format!("seed point ({}) is not on the space", s.join(", "))));
        }
        pts
    };
    if seeds.is_empty() {
        return Err(Error::NoSeed);
    }
    let source = match section {
        Some(s) => TranslationSource::Section(parse_point(&s)?),
        None => TranslationSource::Qrt,
    };
    let items = generate_points(&space, &source, &seeds, cfg);
    let mut csv = String::from("seed,base,points,skipped\n");
    for i in 0..seeds.len().min(cfg.fibers) {
        let pts = items.iter().filter(|it| matches!(it, StreamItem::Point(r) if r.seed == i)).count();
        let skipped = items.iter().any(|it| matches!(it, StreamItem::Skip(r) if r.seed == i));
        let base: Vec<String> = space.split(&seeds[i]).0.iter().map(format_rational).collect();
        csv.push_str(&format!("{i},{},{pts},{skipped}\n", base.join(":")));
    }
    let pass = items.iter().any(|it| matches!(it, StreamItem::Point(_)));
    Ok(Outcome { report: Value::Null, pass, csv: Some(csv), raw: Some(to_json_lines(&items)) })
}

fn density(input: &Path, space: &Path, multidegree: &[i64]) -> Result<Outcome> {
    let space = load_space(space)?;
    let items = from_json_lines(&read_file(input)?)?;
    let pts = points_of(&space, &items);
    if let Some(i) = pts.iter().position(|p| p.len() != space.ambient().nvars() || !space.contains(p)) {
        return Err(Error::InvalidInput(format!("stream point {i} is not on the space")));
    }
    let w = density_witness(space.ambient(), &pts, multidegree)?;
    let report = serde_json::to_value(&w).expect("witness serializes");
    Ok(Outcome::json(report, true))
}

fn modp_audit(common: &Common, input: Option<&Path>, intersection: bool) -> Result<Outcome> {
    let space = match input {
        Some(p) => load_space(p)?,
        None => construction3_data().threefold,
    };
    let mut certs = vec![];
    let mut certified = None;
    for &p in &common.primes {
        let c = smoothness_certificate(&reduce_space(&space, p)?)?;
        let done = c.is_certified();
        certs.push(c);
        if done {
            certified = Some(p);
            break;
        }
    }
    let mut report = json!({
        "space_id": space.name(),
        "certified_at": certified,
        "smoothness": serde_json::to_value(&certs).expect("serializable"),
    });
    let mut csv = String::from("p,status\n");
    for c in &certs {
        csv.push_str(&format!("{},{}\n", c.p, if c.is_certified() { "certified" } else { "inconclusive" }));
    }
    let mut pass = certified.is_some();
    if intersection {
        let deg = DegeneracyData::new(&space, FIBER_Z)?;
        let r = proper_intersection_audit(&DiscriminantCurve(&deg), &BranchCurve(&deg), &common.primes, common.seed)?;
        pass &= r.verdict == Some(IntersectionVerdict::ProperLikely);
        report["intersection"] = serde_json::to_value(&r).expect("serializable");
    }
    Ok(Outcome { report, pass, csv: Some(csv), raw: None })
}

fn verify(input: &Path, space: Option<&Path>) -> Result<Outcome> {
    let text = read_file(input)?;
    if let Ok(v) = serde_json::from_str::<Value>(&text) {
        if let Some(kind) = v.get("construction").and_then(|k| k.as_str()) {
            return verify_report(kind, &v);
        }
    }
    let space = load_space(space.ok_or_else(|| Error::InvalidInput("point streams need --space".into()))?)?;
    let items = from_json_lines(&text)?;
    let pts = points_of(&space, &items);
    let bad: Vec<usize> = (0..pts.len()).filter(|&i| !space.contains(&pts[i])).collect();
    let report = json!({ "points": pts.len(), "off_space": bad });
    Ok(Outcome::json(report, bad.is_empty()))
}

fn field<T: serde::de::DeserializeOwned>(v: &Value, key: &str) -> Result<T> {
    serde_json::from_value(v.get(key).cloned().unwrap_or(Value::Null))
        .map_err(|e| Error::InvalidInput(format!("report field {key}: {e}")))
}

/// Re-runs the construction with the recorded configuration and compares audits.
fn verify_report(kind: &str, v: &Value) -> Result<Outcome> {
    let common = Common { seed: field(v, "seed")?, primes: field(v, "primes")?, out: None, csv: None };
    validate_primes(&common.primes)?;
    let rerun = match kind {
        "construct1" => construct1(&common, field(v, "n")?)?,
        "construct2" => construct2(&common, field(v, "n")?)?,
        "construct3" => {
            let ip: Vec<u64> = field(v, "intersection_primes")?;
            validate_primes(&ip)?;
            construct3(&common, field(v, "full_audit")?, ip)?
        }
        other => return Err(Error::InvalidInput(format!("unknown construction {other:?}"))),
    };
    let same = rerun.report == *v;
    let report = json!({ "construction": kind, "reproduced": same, "audit_pass": rerun.pass });
    Ok(Outcome::json(report, same && rerun.pass))
}
