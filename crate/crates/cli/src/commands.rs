use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use clap::{Args, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use dni::approx::{probe_slow_growth, ApproximatingPair, AuxiliaryFn};
use dni::cf::{convergents, cylinder, expand, PartialQuotients, RealInput};
use dni::classify::{check_k3psi, classify_point, order_statistic, K3_LOOKAHEAD};
use dni::dimfun::{probe_esl, probe_quasi_monotone, probe_superlinear, DimensionFunction};
use dni::experiments::{
    audit_frostman, build_mass_distribution_with_cap, covering_critical_exponent, default_windows, mc_lebesgue,
};
use dni::precision::parse_exact;
use dni::probe::dyadic_exponents;
use dni::report::{to_csv, to_json};
use dni::series::{compare_series, eval_series, Cutoff, SeriesKind, SeriesSpec};
use dni::Error;

use crate::Format;

pub enum Failure {
    Invalid(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Invalid(msg.into())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Partial quotients of a real input.
    Expand(ExpandArgs),
    /// Cylinder interval of a quotient address.
    Cylinder(CylinderArgs),
    /// Growth-condition probes for a dimension function.
    ProbeF(ProbeFArgs),
    /// Convert between psi and Psi and report validity flags.
    TransformPsi(TransformArgs),
    /// Evaluate a dichotomy series.
    Series(SeriesArgs),
    /// Per-scale ratio of two series.
    CompareSeries(CompareArgs),
    /// Improvability evidence for a point.
    Classify(ClassifyArgs),
    /// Order statistic log(a_n a_{n+1}) / log q_n.
    Order(OrderArgs),
    /// Covering-sum critical exponent for Psi(q) = q^tau.
    Dimension(DimensionArgs),
    /// Monte-Carlo G-event frequencies under the Gauss measure.
    McLebesgue(McArgs),
    /// Mass distribution, Claim ratios and Frostman audit.
    MassCheck(MassArgs),
}

/// `--Psi` takes an auxiliary-function spec, `--psi` an approximating-function spec.
#[derive(Debug, Args, Serialize)]
pub struct PairArgs {
    /// Auxiliary function, e.g. `logpow:1`, `pow:1/2`, `const:10`.
    #[arg(long = "Psi", conflicts_with = "psi")]
    #[serde(rename = "Psi", skip_serializing_if = "Option::is_none")]
    pub aux: Option<String>,
    /// Approximating function, e.g. `recip:1/2`, `shift:1`, `logdeficit`.
    #[arg(long = "psi")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi: Option<String>,
}

impl PairArgs {
    fn resolve(&self) -> Result<AuxiliaryFn, Failure> {
        match (&self.aux, &self.psi) {
            (Some(a), None) => Ok(a.parse()?),
            (None, Some(p)) => Ok(ApproximatingPair::parse(&format!("psi={p}"))?.aux().clone()),
            _ => Err(invalid("give exactly one of --Psi or --psi")),
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct ExpandArgs {
    /// Real input: `113/355`, `golden`, `cf:3,7,16`, `quad:P,D,Q`, `periodic:1;2`, `0.123+-1e-20`, `gen:e-2`.
    #[arg(long)]
    pub x: String,
    #[arg(long, default_value_t = 20)]
    pub depth: usize,
    /// Working precision in bits for decimal inputs.
    #[arg(long, default_value_t = 256)]
    pub prec: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct CylinderArgs {
    /// Comma-separated partial quotients.
    #[arg(long)]
    pub a: String,
}

#[derive(Debug, Args, Serialize)]
pub struct ProbeFArgs {
    /// Dimension function: `power:1/2`, `ilog:1`, `exotic:1/2`, optionally `c*` prefixed.
    #[arg(long)]
    pub f: String,
    /// Comma-separated `B` values for the ESL probe.
    #[arg(long, default_value = "2,4,8,16")]
    pub b_grid: String,
    /// Grid `x = 2^-m` for `m` from `x-from` to `x-to` in steps of `x-step`.
    #[arg(long, default_value_t = 8)]
    pub x_from: u32,
    #[arg(long, default_value_t = 160)]
    pub x_to: u32,
    #[arg(long, default_value_t = 8)]
    pub x_step: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct TransformArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub pair: PairArgs,
    /// Exponents `x` for the slow-growth probe `Psi(Q^x) / Psi(Q)`.
    #[arg(long, default_value = "2")]
    pub slow_x: String,
}

#[derive(Debug, Args, Serialize)]
pub struct SeriesArgs {
    /// MAIN, KW, JARNIK, LOGJARNIK, PQ or PQ-RESTRICTED.
    #[arg(long)]
    pub kind: String,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
    #[command(flatten)]
    #[serde(flatten)]
    pub pair: PairArgs,
    /// Last dyadic block.
    #[arg(long, conflicts_with = "terms")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kmax: Option<u32>,
    /// Direct summation up to this `q`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terms: Option<u64>,
    /// First block (or first `q` with --terms).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub start: Option<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct CompareArgs {
    /// Numerator series kind.
    #[arg(long, default_value = "MAIN")]
    pub a: String,
    /// Denominator series kind.
    #[arg(long)]
    pub b: String,
    #[arg(long)]
    pub f: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub pair: PairArgs,
    /// Scale window `lo:hi`.
    #[arg(long, default_value = "10:40")]
    pub window: String,
    /// Largest admissible max/min ratio.
    #[arg(long, default_value_t = 50.0)]
    pub bound: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub x: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub pair: PairArgs,
    #[arg(long, default_value_t = 200)]
    pub depth: usize,
    /// Tail window; defaults to depth / 2.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    /// Also test |x - p_n/q_n| < 1/(3 q_n^2 Psi(q_n)).
    #[arg(long)]
    pub k3: bool,
    #[arg(long, default_value_t = 256)]
    pub prec: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct OrderArgs {
    #[arg(long)]
    pub x: String,
    #[arg(long, default_value_t = 200)]
    pub depth: usize,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    #[arg(long, default_value_t = 256)]
    pub prec: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct DimensionArgs {
    #[arg(long)]
    pub tau: f64,
    #[arg(long = "K", default_value_t = 40)]
    #[serde(rename = "K")]
    pub k: u32,
    /// Spacing of the s grid on (0, 1].
    #[arg(long, default_value_t = 0.01)]
    pub s_step: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct McArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub pair: PairArgs,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 1000)]
    pub depth: usize,
    /// Comma-separated `start:end` windows; defaults to dyadic windows and the top half.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub windows: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct MassArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub pair: PairArgs,
    #[arg(long)]
    pub f: String,
    /// Base interval `lo,hi` inside [0, 1].
    #[arg(long, default_value = "0,1")]
    pub b0: String,
    #[arg(long, default_value_t = 4)]
    pub n0: u32,
    #[arg(long, default_value_t = 8)]
    pub n1: u32,
    /// Target C for the normalizer and the Frostman bound.
    #[arg(long = "C", default_value_t = 1.0)]
    #[serde(rename = "C")]
    pub c: f64,
    #[arg(long, default_value_t = 1000)]
    pub balls: usize,
    #[arg(long, default_value_t = 6)]
    pub scales: u32,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, default_value_t = 1024)]
    pub q_cap: u64,
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, Failure> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| invalid(format!("{what}: cannot parse `{}`", t.trim())))
        })
        .collect()
}

fn parse_range(s: &str, what: &str) -> Result<(u64, u64), Failure> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| invalid(format!("{what}: expected `lo:hi`, got `{s}`")))?;
    let p = |t: &str| {
        t.trim()
            .parse::<u64>()
            .map_err(|_| invalid(format!("{what}: cannot parse `{}`", t.trim())))
    };
    Ok((p(a)?, p(b)?))
}

fn real_input(x: &str, prec: u32) -> Result<RealInput, Failure> {
    Ok(RealInput::parse_with_precision(x, prec)?)
}

/// Artifact payloads: JSON document and CSV table.
struct Artifacts {
    json: String,
    csv: String,
}

fn artifacts<T: Serialize, R: Serialize>(name: &str, config: &Value, result: &T, rows: &[R]) -> Result<Artifacts, Failure> {
    Ok(Artifacts {
        json: to_json(name, config, result)?,
        csv: to_csv(config, rows)?,
    })
}

fn config<A: Serialize>(name: &str, args: &A) -> Result<Value, Failure> {
    let mut v = serde_json::to_value(args).map_err(|e| Failure::Internal(e.to_string()))?;
    if let Value::Object(m) = &mut v {
        m.insert("command".into(), Value::String(name.into()));
        m.insert("version".into(), Value::String(env!("CARGO_PKG_VERSION").into()));
    }
    Ok(v)
}

fn write(name: &str, art: Artifacts, format: Format, out: Option<&Path>, summary: &mut String) -> Result<(), Failure> {
    let Some(dir) = out else { return Ok(()) };
    fs::create_dir_all(dir).map_err(|e| Failure::Internal(format!("{}: {e}", dir.display())))?;
    let (ext, body) = match format {
        Format::Json => ("json", art.json),
        Format::Csv => ("csv", art.csv),
    };
    let path = dir.join(format!("{name}.{ext}"));
    fs::write(&path, body).map_err(|e| Failure::Internal(format!("{}: {e}", path.display())))?;
    let _ = writeln!(summary, "wrote {}", path.display());
    Ok(())
}

pub fn run(cmd: &Command, format: Format, out: Option<&Path>) -> Outcome {
    let (name, mut summary, art) = match cmd {
        Command::Expand(a) => ("expand", run_expand(a)?),
        Command::Cylinder(a) => ("cylinder", run_cylinder(a)?),
        Command::ProbeF(a) => ("probe-f", run_probe_f(a)?),
        Command::TransformPsi(a) => ("transform-psi", run_transform(a)?),
        Command::Series(a) => ("series", run_series(a)?),
        Command::CompareSeries(a) => ("compare-series", run_compare(a)?),
        Command::Classify(a) => ("classify", run_classify(a)?),
        Command::Order(a) => ("order", run_order(a)?),
        Command::Dimension(a) => ("dimension", run_dimension(a)?),
        Command::McLebesgue(a) => ("mc-lebesgue", run_mc(a)?),
        Command::MassCheck(a) => ("mass-check", run_mass(a)?),
    }
    .flatten();
    write(name, art, format, out, &mut summary)?;
    Ok(summary)
}

trait Flatten {
    fn flatten(self) -> (&'static str, String, Artifacts);
}

impl Flatten for (&'static str, (String, Artifacts)) {
    fn flatten(self) -> (&'static str, String, Artifacts) {
        (self.0, self.1 .0, self.1 .1)
    }
}

type Run = Result<(String, Artifacts), Failure>;

#[derive(Serialize)]
struct QuotientRow {
    n: usize,
    a: String,
    p: String,
    q: String,
    certified: bool,
}

fn run_expand(a: &ExpandArgs) -> Run {
    let cfg = config("expand", a)?;
    let x = real_input(&a.x, a.prec)?;
    let pq = expand(&x, a.depth)?;
    let c = convergents(&pq)?;
    let rows: Vec<QuotientRow> = (1..=pq.len())
        .map(|n| QuotientRow {
            n,
            a: pq.get(n).unwrap().to_string(),
            p: c.p(n as isize).to_string(),
            q: c.q(n as isize).to_string(),
            certified: n <= pq.certified_depth(),
        })
        .collect();
    let mut s = format!("{pq}\n");
    if !pq.is_fully_certified() {
        let _ = writeln!(s, "certified depth: {}", pq.certified_depth());
    }
    if pq.is_terminated() {
        let _ = writeln!(s, "terminated: rational input");
    }
    let result = json!({
        "quotients": pq.entries().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        "certified_depth": pq.certified_depth(),
        "terminated": pq.is_terminated(),
    });
    Ok((s, artifacts("expand", &cfg, &result, &rows)?))
}

#[derive(Serialize)]
struct CylinderRow {
    left: String,
    right: String,
    closed_end: String,
    length: String,
    lower_bound: String,
    upper_bound: String,
}

fn run_cylinder(a: &CylinderArgs) -> Run {
    let cfg = config("cylinder", a)?;
    let v: Vec<u64> = parse_list(&a.a, "--a")?;
    let pq = PartialQuotients::from_slice(&v)?;
    let c = cylinder(&pq)?;
    let (lo, hi) = c.length_bounds();
    let row = CylinderRow {
        left: c.left().to_string(),
        right: c.right().to_string(),
        closed_end: format!("{:?}", c.closed_end()).to_lowercase(),
        length: c.length().to_string(),
        lower_bound: lo.to_string(),
        upper_bound: hi.to_string(),
    };
    let (open_l, open_r) = match c.closed_end() {
        dni::cf::ClosedEnd::Left => ("[", ")"),
        dni::cf::ClosedEnd::Right => ("(", "]"),
    };
    let s = format!(
        "I({pq}) = {open_l}{}, {}{open_r}\nlength = {}\n",
        row.left, row.right, row.length
    );
    Ok((s, artifacts("cylinder", &cfg, &row, std::slice::from_ref(&row))?))
}

#[derive(Serialize)]
struct ProbeRow {
    condition: String,
    verdict: String,
    constant: Option<f64>,
    rule: String,
}

fn run_probe_f(a: &ProbeFArgs) -> Run {
    let cfg = config("probe-f", a)?;
    let f: DimensionFunction = a.f.parse()?;
    let xs = dyadic_exponents(a.x_from, a.x_to, a.x_step);
    if xs.len() < 2 {
        return Err(invalid("x grid needs at least two points"));
    }
    let bs: Vec<u32> = parse_list(&a.b_grid, "--b-grid")?;
    let reports = vec![
        probe_superlinear(&f, &xs)?,
        probe_quasi_monotone(&f, &xs)?,
        probe_esl(&f, &bs, &xs)?,
    ];
    let rows: Vec<ProbeRow> = reports
        .iter()
        .map(|r| ProbeRow {
            condition: serde_json::to_value(r.condition)
                .ok()
                .and_then(|v| v.as_str().map(String::from))
                .unwrap_or_default(),
            verdict: r.verdict.to_string(),
            constant: r.constant,
            rule: r.rule.to_string(),
        })
        .collect();
    let mut s = format!("f = {f}\n");
    for r in &rows {
        let _ = writeln!(s, "{:<24} {}", r.condition, r.verdict);
    }
    Ok((s, artifacts("probe-f", &cfg, &reports, &rows)?))
}

#[derive(Serialize)]
struct FlagRow {
    flag: &'static str,
    from: Option<f64>,
    to: Option<f64>,
}

fn run_transform(a: &TransformArgs) -> Run {
    let cfg = config("transform-psi", a)?;
    let pair = match (&a.pair.aux, &a.pair.psi) {
        (Some(x), None) => ApproximatingPair::parse(&format!("Psi={x}"))?,
        (None, Some(x)) => ApproximatingPair::parse(&format!("psi={x}"))?,
        _ => return Err(invalid("give exactly one of --Psi or --psi")),
    };
    let xs: Vec<f64> = parse_list(&a.slow_x, "--slow-x")?;
    let slow = probe_slow_growth(pair.aux(), &xs, &dni::approx::default_q_exponents())?;
    let fl = pair.flags();
    let rows = vec![
        FlagRow { flag: "t_psi_below_one", from: fl.t_psi_below_one.map(|r| r.from), to: fl.t_psi_below_one.map(|r| r.to) },
        FlagRow { flag: "t_psi_nondecreasing", from: fl.t_psi_nondecreasing.map(|r| r.from), to: fl.t_psi_nondecreasing.map(|r| r.to) },
        FlagRow { flag: "psi_nonincreasing", from: fl.psi_nonincreasing.map(|r| r.from), to: fl.psi_nonincreasing.map(|r| r.to) },
        FlagRow { flag: "aux_nondecreasing", from: fl.aux_nondecreasing.map(|r| r.from), to: fl.aux_nondecreasing.map(|r| r.to) },
        FlagRow { flag: "aux_at_least_one", from: fl.aux_at_least_one.map(|r| r.from), to: fl.aux_at_least_one.map(|r| r.to) },
    ];
    let mut s = format!("psi = {}\nPsi = {}\nt0 = {}\n", pair.psi(), pair.aux(), pair.t0());
    for r in &rows {
        match (r.from, r.to) {
            (Some(f), Some(t)) => {
                let _ = writeln!(s, "{:<22} on [{f:.4e}, {t:.4e}]", r.flag);
            }
            _ => {
                let _ = writeln!(s, "{:<22} not verified at the end of the grid", r.flag);
            }
        }
    }
    let _ = writeln!(s, "slow growth: {}", slow.verdict);
    let result = json!({
        "psi": pair.psi().to_string(),
        "Psi": pair.aux().to_string(),
        "t0": pair.t0().to_string(),
        "flags": fl,
        "slow_growth": slow,
    });
    Ok((s, artifacts("transform-psi", &cfg, &result, &rows)?))
}

fn series_spec(kind: &str, f: Option<&str>, aux: AuxiliaryFn, cutoff: Cutoff, start: Option<u64>) -> Result<SeriesSpec, Failure> {
    let kind: SeriesKind = kind.parse()?;
    let f = f.map(str::parse::<DimensionFunction>).transpose()?;
    let mut spec = SeriesSpec::new(kind, f, aux, cutoff);
    spec.start = start;
    Ok(spec)
}

fn run_series(a: &SeriesArgs) -> Run {
    let cfg = config("series", a)?;
    let cutoff = match (a.kmax, a.terms) {
        (Some(k), None) => Cutoff::Blocks(k),
        (None, Some(q)) => Cutoff::Terms(q),
        (None, None) => Cutoff::Blocks(30),
        _ => return Err(invalid("--kmax and --terms are exclusive")),
    };
    let spec = series_spec(&a.kind, a.f.as_deref(), a.pair.resolve()?, cutoff, a.start)?;
    let r = eval_series(&spec)?;
    let mut s = format!("{}\n", dni::series::describe(&spec));
    if let Some(last) = r.blocks.last() {
        let _ = writeln!(s, "blocks {}..={}, partial sum {:.6e}", r.blocks[0].k, last.k, last.cumsum);
    }
    if let Some(g) = r.geometric_slope {
        let _ = writeln!(s, "tail log2 slope {g:.4}");
    }
    let _ = writeln!(s, "verdict: {}", r.verdict);
    Ok((s, artifacts("series", &cfg, &r, &r.blocks)?))
}

#[derive(Serialize)]
struct RatioRow {
    m: u64,
    ratio: f64,
}

fn run_compare(a: &CompareArgs) -> Run {
    let cfg = config("compare-series", a)?;
    let window = parse_range(&a.window, "--window")?;
    let k_max = u32::try_from(window.1).map_err(|_| invalid("--window upper end too large"))?;
    let aux = a.pair.resolve()?;
    let sa = series_spec(&a.a, Some(&a.f), aux.clone(), Cutoff::Blocks(k_max), None)?;
    let sb = series_spec(&a.b, Some(&a.f), aux, Cutoff::Blocks(k_max), None)?;
    let r = compare_series(&sa, &sb, window, a.bound)?;
    let rows: Vec<RatioRow> = r.ratios.iter().map(|&(m, ratio)| RatioRow { m, ratio }).collect();
    let s = format!(
        "{} / {}\nband {:.4}, growth {:.4}, log-log slope {:.4}\nverdict: {}\n",
        r.a,
        r.b,
        r.band,
        r.growth,
        r.loglog_slope,
        serde_json::to_value(r.verdict).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
    );
    Ok((s, artifacts("compare-series", &cfg, &r, &rows)?))
}

#[derive(Serialize)]
struct EventRow {
    n: usize,
    an: String,
    an1: String,
    qn_digits: usize,
    kind: String,
    k3: Option<String>,
}

fn kebab<T: Serialize>(v: T) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|v| v.as_str().map(String::from))
        .unwrap_or_default()
}

fn run_classify(a: &ClassifyArgs) -> Run {
    let cfg = config("classify", a)?;
    let aux = a.pair.resolve()?;
    let x = real_input(&a.x, a.prec)?;
    let pq = expand(&x, a.depth + 1 + if a.k3 { K3_LOOKAHEAD } else { 0 })?;
    let report = classify_point(&a.x, &pq, &aux, a.depth, a.window)?;
    let k3 = if a.k3 { Some(check_k3psi(&pq, &aux, a.depth)?) } else { None };
    let rows: Vec<EventRow> = report
        .events
        .iter()
        .map(|e| EventRow {
            n: e.n,
            an: e.an.to_string(),
            an1: e.an1.to_string(),
            qn_digits: e.qn_digits,
            kind: kebab(e.kind),
            k3: k3
                .as_ref()
                .and_then(|k| k.iter().find(|r| r.n == e.n))
                .map(|r| kebab(r.outcome)),
        })
        .collect();
    let mut s = format!("x = {}, Psi = {}, depth {}, window {}\n", a.x, aux, report.depth, report.window);
    let _ = writeln!(s, "G-events: {}", report.g_event_count());
    if let Some(t) = report.tau_hat {
        let _ = writeln!(s, "tau_hat: {t:.4}");
    }
    if let Some(k) = &k3 {
        let sat = k.iter().filter(|r| r.outcome == dni::classify::K3Outcome::Satisfied).count();
        let _ = writeln!(s, "K(3Psi) satisfied at {sat} of {} indices", k.len());
    }
    let _ = writeln!(s, "verdict: {}", report.verdict);
    let result = json!({ "report": report, "k3": k3 });
    Ok((s, artifacts("classify", &cfg, &result, &rows)?))
}

#[derive(Serialize)]
struct OrderRow {
    n: usize,
    value: f64,
    running_max: f64,
}

fn run_order(a: &OrderArgs) -> Run {
    let cfg = config("order", a)?;
    let x = real_input(&a.x, a.prec)?;
    let pq = expand(&x, a.depth + 1)?;
    let window = a.window.unwrap_or_else(|| dni::classify::default_window(a.depth));
    let o = order_statistic(&pq, a.depth, window)?;
    let rows: Vec<OrderRow> = o
        .values
        .iter()
        .zip(&o.running)
        .map(|(&(n, value), &(_, running_max))| OrderRow { n, value, running_max })
        .collect();
    let s = match o.tau_hat {
        Some(t) => format!("tau_hat({}) = {t:.4} over window {window}\n", a.depth),
        None => "tau_hat undefined: depth < 2\n".to_string(),
    };
    Ok((s, artifacts("order", &cfg, &o, &rows)?))
}

fn run_dimension(a: &DimensionArgs) -> Run {
    let cfg = config("dimension", a)?;
    if !(a.s_step > 0.0 && a.s_step <= 0.5) {
        return Err(invalid("--s-step must lie in (0, 0.5]"));
    }
    let n = (1.0 / a.s_step).floor() as u32;
    let grid: Vec<f64> = (1..=n).map(|i| f64::from(i) * a.s_step).collect();
    let r = covering_critical_exponent(a.tau, a.k, &grid)?;
    let s = format!(
        "tau = {}, K = {}\ns* = {:.4}, reference 2/(tau+2) = {:.4}, |error| = {:.4}\n",
        a.tau,
        a.k,
        r.estimate(),
        r.reference,
        r.error
    );
    Ok((s, artifacts("dimension", &cfg, &r, &r.rows)?))
}

fn run_mc(a: &McArgs) -> Run {
    let cfg = config("mc-lebesgue", a)?;
    let aux = a.pair.resolve()?;
    let windows: Vec<(usize, usize)> = match &a.windows {
        Some(w) => w
            .split(',')
            .map(|t| parse_range(t, "--windows").map(|(s, e)| (s as usize, e as usize)))
            .collect::<Result<_, _>>()?,
        None => default_windows(a.depth),
    };
    let t = mc_lebesgue(&aux, a.samples, a.depth, &windows, a.seed)?;
    let mut s = format!("Psi = {}, {} samples, depth {}, seed {}\n", t.aux, t.samples, t.depth, t.seed);
    for r in &t.rows {
        let _ = writeln!(s, "[{}, {}]  fraction {:.4}", r.window_start, r.window_end, r.fraction);
    }
    Ok((s, artifacts("mc-lebesgue", &cfg, &t, &t.rows)?))
}

fn run_mass(a: &MassArgs) -> Run {
    let cfg = config("mass-check", a)?;
    let aux = a.pair.resolve()?;
    let f: DimensionFunction = a.f.parse()?;
    let (lo, hi) = a
        .b0
        .split_once(',')
        .ok_or_else(|| invalid(format!("--b0: expected `lo,hi`, got `{}`", a.b0)))?;
    let b0 = (parse_exact(lo.trim())?, parse_exact(hi.trim())?);
    let d = build_mass_distribution_with_cap(&aux, &f, b0, a.n0, a.n1, a.c, a.q_cap)?;
    let report = d.report();
    let audit = audit_frostman(&d, a.c, a.balls, a.scales, a.seed)?;
    let mut s = format!(
        "words {}, Omega = {:.6}, Omega >= C: {}, total mass exactly 1: {}\n",
        report.words, report.omega, report.omega_meets_target, report.total_mass_is_one
    );
    if let Some(c) = &report.claim {
        let _ = writeln!(s, "Claim ratio #A'/#A in [{:.4}, {:.4}], band {:.4}", c.min_ratio, c.max_ratio, c.band);
    }
    let _ = writeln!(s, "Frostman audit: {} balls, max ratio {:.4}", audit.balls, audit.max_ratio);
    let result = json!({ "mass": report, "audit": audit });
    Ok((s, artifacts("mass-check", &cfg, &result, &audit.rows)?))
}
