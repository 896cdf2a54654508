//! The `toricap` command line.
//!
//! Results are JSON objects (or CSV where noted) with every rational written
//! as a `"p/q"` string. Exit status 0 means success, 2 means the input was
//! rejected, 3 means the computation could not reach a verdict.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::bounds::{
    c2_convex_4d, c2_polydisk, gap_below, highdim_veps_threshold, polydisk_gap, scan_veps,
    veps_analysis, OuterWitness, VepsReport,
};
use crate::capacities::{
    ch_concave, ch_convex, ch_convex_vertices, formula_gate, n_k, volume, VolumeOf,
    DEFAULT_ECH_HORIZON,
};
use crate::domains::{make_veps, Domain, EllipsoidSpec};
use crate::error::Error;
use crate::packing::{
    cremona_feasible, ech_feasible, embed_concave_into_ball, Certificate, EchVerdict,
    PackingInstance, ReductionTrace, Verdict, DEFAULT_STEP_LIMIT,
};
use crate::rational::{format_rational, parse_rational, parse_rational_list, to_decimal, Rational};
use crate::weights::{weights_concave, weights_ellipsoid, DEFAULT_MAX_STEPS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNDECIDED: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "toricap", version, about = "Exact capacities of toric domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format; `scan-veps` defaults to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Add decimal renderings of top-level rational fields.
    #[arg(long, global = true)]
    decimals: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Default)]
struct DomainArgs {
    /// Domain description file (JSON).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Inline domain description (JSON).
    #[arg(long)]
    domain: Option<String>,
    /// Shortcut for the quadrilateral family, `{"type":"veps","eps":EPS}`.
    #[arg(long)]
    eps: Option<String>,
    /// Shortcut for an ellipsoid (or, with --polydisk, a polydisk).
    #[arg(long)]
    axes: Option<String>,
    #[arg(long, requires = "axes")]
    polydisk: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// k-th smallest element of { m·a_i }.
    Nk {
        #[arg(long)]
        axes: String,
        #[arg(long)]
        k: usize,
    },
    /// Combinatorial capacity c_k of a domain.
    Cap {
        #[command(flatten)]
        domain: DomainArgs,
        #[arg(long)]
        k: usize,
    },
    /// The common value of all 2-normalized capacities.
    C2 {
        #[command(flatten)]
        domain: DomainArgs,
    },
    /// Ball-packing weights of a concave 4-d domain.
    Weights {
        #[command(flatten)]
        domain: DomainArgs,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: usize,
    },
    /// Decide a ball packing into B(mu).
    Pack {
        #[command(flatten)]
        domain: DomainArgs,
        #[arg(long)]
        mu: Option<String>,
        /// Comma separated ball sizes.
        #[arg(long)]
        weights: Option<String>,
        /// Emit the reduction trace as CSV.
        #[arg(long)]
        trace: bool,
        #[arg(long, default_value_t = DEFAULT_ECH_HORIZON)]
        kmax: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: usize,
    },
    /// Decide int(X_Ω) ↪ B(mu) for a concave domain.
    EmbedBall {
        #[command(flatten)]
        domain: DomainArgs,
        #[arg(long)]
        mu: String,
        #[arg(long)]
        trace: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: usize,
    },
    /// 2-normalized capacities of V_eps.
    Veps {
        #[arg(long)]
        eps: String,
    },
    /// `veps` over a grid start:stop:step.
    ScanVeps {
        #[arg(long)]
        grid: String,
    },
    /// Polydisk gap certificate for k-normalized capacities in C^n.
    Gap {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u32,
    },
    /// The V_eps threshold n!/(2n-1)^n.
    Threshold {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        eps: Option<String>,
    },
}

/// What a run produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Input(String, String),
    Undecided(String, String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let kind = error_kind(&e).to_string();
        if e.is_input_error() {
            Failure::Input(kind, e.to_string())
        } else {
            Failure::Undecided(kind, e.to_string())
        }
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::ParseRational(_) => "parse",
        Error::DimensionMismatch { .. } => "dimension-mismatch",
        Error::UnsupportedDimension(_) => "unsupported-dimension",
        Error::Degenerate(_) => "degenerate",
        Error::InvalidRegion(_) => "invalid-region",
        Error::OutOfRange(_) => "out-of-range",
        Error::NotConvex => "not-convex",
        Error::NotConcave => "not-concave",
        Error::EmptyAxes => "empty",
        Error::NonPositive(_) => "non-positive",
        Error::Nontermination { .. } => "nontermination",
        Error::Inconclusive(_) => "inconclusive",
        Error::CheckFailed(_) => "check-failed",
        Error::GateFailed(_) => "gate-failed",
        Error::Schema(_) => "schema",
    }
}

fn input(kind: &str, msg: impl Into<String>) -> Failure {
    Failure::Input(kind.to_string(), msg.into())
}

enum Rendered {
    Json(Value),
    Csv(String),
}

fn q(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

fn qs(rs: &[Rational]) -> Value {
    Value::Array(rs.iter().map(q).collect())
}

fn parse_q(s: &str) -> Result<Rational, Failure> {
    parse_rational(s).map_err(Failure::from)
}

/// Parses the command line and runs it.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => error_outcome(EXIT_INPUT, "usage", text.trim()),
            };
        }
    };
    let default_format = match cli.command {
        Command::ScanVeps { .. } => Format::Csv,
        _ => Format::Json,
    };
    let format = cli.format.unwrap_or(default_format);
    match dispatch(&cli.command, format) {
        Ok(Rendered::Csv(s)) => Outcome {
            code: EXIT_OK,
            stdout: s,
            stderr: String::new(),
        },
        Ok(Rendered::Json(v)) => {
            let v = match cli.decimals {
                Some(d) => with_decimals(v, d),
                None => v,
            };
            let stdout = match format {
                Format::Json => format!("{}\n", serde_json::to_string(&v).expect("serializable")),
                Format::Csv => flat_csv(&v),
            };
            Outcome {
                code: EXIT_OK,
                stdout,
                stderr: String::new(),
            }
        }
        Err(Failure::Input(kind, msg)) => error_outcome(EXIT_INPUT, &kind, &msg),
        Err(Failure::Undecided(kind, msg)) => error_outcome(EXIT_UNDECIDED, &kind, &msg),
    }
}

fn error_outcome(code: i32, kind: &str, msg: &str) -> Outcome {
    let v = json!({"error": {"kind": kind, "message": msg}});
    Outcome {
        code,
        stdout: format!("{}\n", serde_json::to_string(&v).expect("serializable")),
        stderr: format!("toricap: {msg}\n"),
    }
}

fn with_decimals(v: Value, digits: usize) -> Value {
    let Value::Object(mut map) = v else { return v };
    let mut dec = Map::new();
    for (k, val) in &map {
        if let Value::String(s) = val {
            if let Ok(r) = parse_rational(s) {
                dec.insert(k.clone(), Value::String(to_decimal(&r, digits)));
            }
        }
    }
    map.insert("decimal".into(), Value::Object(dec));
    Value::Object(map)
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(xs) => xs.iter().map(csv_cell).collect::<Vec<_>>().join(";"),
        other => other.to_string(),
    }
}

fn flat_csv(v: &Value) -> String {
    let Value::Object(map) = v else {
        return format!("{}\n", csv_cell(v));
    };
    let scalar: Vec<(&String, &Value)> = map.iter().filter(|(_, v)| !v.is_object()).collect();
    let header: Vec<&str> = scalar.iter().map(|(k, _)| k.as_str()).collect();
    let row: Vec<String> = scalar
        .iter()
        .map(|(_, v)| csv_escape(&csv_cell(v)))
        .collect();
    format!("{}\n{}\n", header.join(","), row.join(","))
}

fn load_domain(args: &DomainArgs) -> Result<Domain, Failure> {
    let sources = [
        args.input.is_some(),
        args.domain.is_some(),
        args.eps.is_some(),
        args.axes.is_some(),
    ];
    match sources.iter().filter(|&&s| s).count() {
        0 => {
            return Err(input(
                "usage",
                "one of --input, --domain, --eps or --axes is required",
            ))
        }
        1 => {}
        _ => {
            return Err(input(
                "usage",
                "give only one of --input, --domain, --eps, --axes",
            ))
        }
    }
    if let Some(path) = &args.input {
        let text = std::fs::read_to_string(path)
            .map_err(|e| input("io", format!("cannot read {}: {e}", path.display())))?;
        return Ok(Domain::from_json_str(&text)?);
    }
    if let Some(text) = &args.domain {
        return Ok(Domain::from_json_str(text)?);
    }
    if let Some(eps) = &args.eps {
        let eps = parse_q(eps)?;
        let region = make_veps(&eps)?;
        return Ok(Domain::Veps { eps, region });
    }
    let axes = parse_rational_list(args.axes.as_deref().unwrap_or_default())?;
    Ok(if args.polydisk {
        Domain::Polydisk(crate::domains::PolydiskSpec::new(axes)?)
    } else {
        Domain::Ellipsoid(EllipsoidSpec::new(axes)?)
    })
}

fn dispatch(cmd: &Command, format: Format) -> Result<Rendered, Failure> {
    match cmd {
        Command::Nk { axes, k } => {
            let axes = parse_rational_list(axes)?;
            let value = n_k(&axes, *k)?;
            Ok(Rendered::Json(
                json!({"axes": qs(&axes), "k": k, "value": q(&value)}),
            ))
        }
        Command::Cap { domain, k } => cmd_cap(&load_domain(domain)?, *k),
        Command::C2 { domain } => cmd_c2(&load_domain(domain)?),
        Command::Weights { domain, max_steps } => cmd_weights(&load_domain(domain)?, *max_steps),
        Command::Pack {
            domain,
            mu,
            weights,
            trace,
            kmax,
            max_steps,
        } => cmd_pack(
            domain,
            mu.as_deref(),
            weights.as_deref(),
            *trace,
            *kmax,
            *max_steps,
        ),
        Command::EmbedBall {
            domain,
            mu,
            trace,
            max_steps,
        } => {
            let region = load_domain(domain)?.region_2d()?;
            let mu = parse_q(mu)?;
            let report = embed_concave_into_ball(&region, &mu, *max_steps)?;
            if report.verdict() == Verdict::Inconclusive {
                return Err(Failure::Undecided(
                    "inconclusive".into(),
                    "Cremona reduction hit its step limit".into(),
                ));
            }
            if *trace {
                return Ok(Rendered::Csv(report.trace.to_csv()));
            }
            Ok(Rendered::Json(json!({
                "mu": q(&mu),
                "verdict": report.verdict().as_str(),
                "weights": qs(&report.weights.weights),
                "trace": trace_json(&report.trace),
            })))
        }
        Command::Veps { eps } => Ok(Rendered::Json(veps_json(&veps_analysis(&parse_q(eps)?)?))),
        Command::ScanVeps { grid } => {
            let grid = parse_grid(grid)?;
            let reports = scan_veps(&grid)?;
            match format {
                Format::Csv => Ok(Rendered::Csv(veps_csv(&reports))),
                Format::Json => Ok(Rendered::Json(
                    json!({"rows": reports.iter().map(veps_json).collect::<Vec<_>>()}),
                )),
            }
        }
        Command::Gap { k, n } => {
            let g = polydisk_gap(*k, *n)?;
            Ok(Rendered::Json(json!({
                "k": g.k,
                "n": g.n,
                "in_theorem_range": g.in_theorem_range,
                "inequality_violated": g.inequality_violated,
                "gap_proven": g.gap_proven,
                "chain": g.chain,
            })))
        }
        Command::Threshold { n, eps } => {
            let t = highdim_veps_threshold(*n)?;
            let mut out = json!({"n": n, "threshold": q(&t)});
            if let Some(eps) = eps {
                let eps = parse_q(eps)?;
                out["eps"] = q(&eps);
                out["gap_below"] = Value::Bool(gap_below(&eps, *n)?);
            }
            Ok(Rendered::Json(out))
        }
    }
}

fn cmd_cap(domain: &Domain, k: usize) -> Result<Rendered, Failure> {
    formula_gate()?;
    let (engine, value, vol) = match domain {
        Domain::Ellipsoid(e) => (
            "ellipsoid",
            n_k(e.axes(), k)?,
            volume(VolumeOf::Ellipsoid(e)),
        ),
        Domain::Polydisk(p) => (
            "convex",
            ch_convex_vertices(&p.moment_vertices(), k)?,
            volume(VolumeOf::Polydisk(p)),
        ),
        Domain::Polygon(r) | Domain::Veps { region: r, .. } => {
            let flags = r.flags();
            let vol = volume(VolumeOf::Region(r));
            match (flags.convex, flags.concave) {
                (true, true) => {
                    let a = ch_convex(r, k)?;
                    let b = ch_concave(r, k)?;
                    if a != b {
                        return Err(Error::CheckFailed(
                            "convex and concave formulas disagree".into(),
                        )
                        .into());
                    }
                    ("convex+concave", a, vol)
                }
                (true, false) => ("convex", ch_convex(r, k)?, vol),
                (false, true) => ("concave", ch_concave(r, k)?, vol),
                (false, false) => {
                    return Err(input(
                        "unsupported-domain",
                        "region is neither convex nor concave",
                    ));
                }
            }
        }
    };
    Ok(Rendered::Json(json!({
        "domain": domain.to_json(),
        "k": k,
        "engine": engine,
        "value": q(&value),
        "volume": q(&vol),
    })))
}

fn cmd_c2(domain: &Domain) -> Result<Rendered, Failure> {
    formula_gate()?;
    match domain {
        Domain::Polydisk(p) if p.dim() != 2 => Ok(Rendered::Json(json!({
            "domain": domain.to_json(),
            "value": q(&c2_polydisk(p.axes())?),
            "basis": "theorem",
        }))),
        Domain::Ellipsoid(e) if e.dim() != 2 => Ok(Rendered::Json(json!({
            "domain": domain.to_json(),
            "value": q(&n_k(e.axes(), 2)?),
            "basis": "ellipsoid",
        }))),
        _ => {
            let r = c2_convex_4d(&domain.region_2d()?)?;
            let outer = match &r.outer {
                OuterWitness::Polydisk { a, b } => {
                    json!({"type": "polydisk", "axes": [q(a), q(b)]})
                }
                OuterWitness::Ball { w } => json!({"type": "ball", "radius": q(w)}),
            };
            Ok(Rendered::Json(json!({
                "domain": domain.to_json(),
                "value": q(&r.value),
                "a": q(&r.a),
                "w": q(&r.w),
                "inner_region": r.inner_region.vertices().iter().map(|p| [format_rational(&p.x), format_rational(&p.y)]).collect::<Vec<_>>(),
                "inner_ellipsoid": [q(&r.inner_ellipsoid.0), q(&r.inner_ellipsoid.1)],
                "outer": outer,
                "basis": "sandwich",
            })))
        }
    }
}

fn cmd_weights(domain: &Domain, max_steps: usize) -> Result<Rendered, Failure> {
    let (seq, area) = match domain {
        Domain::Ellipsoid(e) if e.dim() == 2 => {
            let (a, b) = (&e.axes()[0], &e.axes()[1]);
            (
                weights_ellipsoid(a, b)?,
                a * b / Rational::from_integer(2.into()),
            )
        }
        _ => {
            let region = domain.region_2d()?;
            (weights_concave(&region, max_steps)?, region.area())
        }
    };
    Ok(Rendered::Json(json!({
        "weights": qs(&seq.weights),
        "sum_sq": q(&seq.sum_of_squares()),
        "area": q(&area),
    })))
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct PackJson {
    mu: String,
    #[serde(default)]
    weights: Option<Vec<String>>,
    #[serde(default)]
    domain: Option<Value>,
}

fn cmd_pack(
    domain: &DomainArgs,
    mu: Option<&str>,
    weights: Option<&str>,
    trace: bool,
    kmax: usize,
    max_steps: usize,
) -> Result<Rendered, Failure> {
    let (mu, ws) = if let Some(path) = &domain.input {
        let text = std::fs::read_to_string(path)
            .map_err(|e| input("io", format!("cannot read {}: {e}", path.display())))?;
        let raw: PackJson =
            serde_json::from_str(&text).map_err(|e| input("schema", e.to_string()))?;
        let mu = parse_q(&raw.mu)?;
        let ws = match (raw.weights, raw.domain) {
            (Some(ws), None) => ws
                .iter()
                .map(|s| parse_q(s))
                .collect::<Result<Vec<_>, _>>()?,
            (None, Some(d)) => {
                let region = Domain::from_json(&d)?.region_2d()?;
                weights_concave(&region, max_steps)?.weights
            }
            _ => {
                return Err(input(
                    "schema",
                    "give exactly one of \"weights\" or \"domain\"",
                ))
            }
        };
        (mu, ws)
    } else {
        let mu = parse_q(mu.ok_or_else(|| input("usage", "--mu is required"))?)?;
        let ws = match weights {
            Some(w) => parse_rational_list(w)?,
            None => {
                let region = load_domain(domain)?.region_2d()?;
                weights_concave(&region, max_steps)?.weights
            }
        };
        (mu, ws)
    };
    let inst = PackingInstance::new(mu, ws)?;
    let t = cremona_feasible(&inst, DEFAULT_STEP_LIMIT);
    if t.verdict == Verdict::Inconclusive {
        return Err(Failure::Undecided(
            "inconclusive".into(),
            "Cremona reduction hit its step limit".into(),
        ));
    }
    if trace {
        return Ok(Rendered::Csv(t.to_csv()));
    }
    let ech = match ech_feasible(&inst, kmax) {
        EchVerdict::FeasibleUpTo(h) => {
            json!({"verdict": "feasible_up_to_horizon", "horizon": h, "obstruction_k": null})
        }
        EchVerdict::Infeasible { k, .. } => {
            json!({"verdict": "infeasible", "horizon": kmax, "obstruction_k": k})
        }
    };
    Ok(Rendered::Json(json!({
        "mu": q(inst.mu()),
        "weights": qs(inst.weights()),
        "verdict": t.verdict.as_str(),
        "trace": trace_json(&t),
        "ech": ech,
    })))
}

fn ints(xs: &[num::BigInt]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

fn trace_json(t: &ReductionTrace) -> Value {
    let certificate = match &t.certificate {
        Certificate::Reduced { mu, weights } => {
            json!({"kind": "reduced", "mu": mu.to_string(), "weights": ints(weights)})
        }
        Certificate::NegativeEntry { mu, weights } => {
            json!({"kind": "negative-entry", "mu": mu.to_string(), "weights": ints(weights)})
        }
        Certificate::WeightExceedsTarget { mu, weight } => {
            json!({"kind": "weight-exceeds-target", "mu": mu.to_string(), "weight": weight.to_string()})
        }
        Certificate::Volume { sum_sq, mu_sq } => {
            json!({"kind": "volume", "sum_sq": sum_sq.to_string(), "mu_sq": mu_sq.to_string()})
        }
        Certificate::StepLimit { steps } => json!({"kind": "step-limit", "steps": steps}),
    };
    json!({"scale": t.scale.to_string(), "steps": t.steps.len(), "certificate": certificate})
}

fn veps_json(r: &VepsReport) -> Value {
    let mut v = json!({
        "eps": q(&r.eps),
        "regime": r.regime.label(),
        "c2_min": q(&r.c2_min),
        "c2_max_lower": q(&r.c2_max_lower),
        "c2_max_upper": r.c2_max_upper.as_ref().map(q),
        "equal": r.equal,
    });
    if r.equal {
        v["c2_max"] = q(&r.c2_min);
    }
    if let Some(c) = &r.sqrt_certificate {
        v["sqrt_certificate"] = q(c);
    }
    v
}

fn veps_csv(rows: &[VepsReport]) -> String {
    let mut out = String::from("eps,c2_min,c2_max_lower,c2_max_upper,equal,regime\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            format_rational(&r.eps),
            format_rational(&r.c2_min),
            format_rational(&r.c2_max_lower),
            r.c2_max_upper
                .as_ref()
                .map(format_rational)
                .unwrap_or_default(),
            r.equal,
            csv_escape(r.regime.label())
        ));
    }
    out
}

/// `start:stop:step`, inclusive of `stop` when it lies on the grid.
pub fn parse_grid(s: &str) -> Result<Vec<Rational>, Error> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Schema(format!(
            "grid must be start:stop:step, got {s:?}"
        )));
    }
    let start = parse_rational(parts[0])?;
    let stop = parse_rational(parts[1])?;
    let step = parse_rational(parts[2])?;
    if step <= Rational::from_integer(0.into()) {
        return Err(Error::NonPositive(step));
    }
    let mut out = Vec::new();
    let mut x = start;
    while x <= stop {
        out.push(x.clone());
        x += &step;
        if out.len() > 100_000 {
            return Err(Error::OutOfRange("grid has more than 100000 points".into()));
        }
    }
    Ok(out)
}
