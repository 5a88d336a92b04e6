//! `xpq`: command-line access to the ×p,×q toolkit.
//!
//! Every subcommand writes one JSON document (or CSV / text with `--format`)
//! to stdout. Exit codes: 0 success, 1 usage or input error, 2 domain error,
//! 3 a `check` suite failed.

pub mod checks;
pub mod gen;

use std::ffi::OsString;
use std::io::{self, Read, Write};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use xpq_core::dynamics::{
    enumerate_minimal_sets, fixed_points, lift_sequence, stabilizer_lattice, SolenoidPoint,
    SystemParams,
};
use xpq_core::exact::{dependence_witness, QmodZ};
use xpq_core::groupalg::{icc_witness, GroupAlgebraElement, GroupElement, GroupElementRepr};
use xpq_core::ktheory::{k_theory_of_group, mult_map_ker_coker};
use xpq_core::primspace::{closure, limit_set, PrimPoint, SequenceDesc};
use xpq_core::traces::{check_pq_invariance, moments, trace_eval, TraceSpec, TraceValue};

use checks::{CheckConfig, SUITES};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Parser)]
#[command(name = "xpq", version, about = "Exact computations for the ×p,×q system and its group C*-algebra")]
pub struct Cli {
    #[arg(short, global = true, default_value_t = 2, value_parser = clap::value_parser!(u64).range(2..))]
    pub p: u64,

    #[arg(short, global = true, default_value_t = 3, value_parser = clap::value_parser!(u64).range(2..))]
    pub q: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads for enumeration; output does not depend on it.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

/// JSON arguments accept inline JSON, `@path`, a bare path, or `-` for stdin.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Finite minimal invariant sets with denominator up to a bound.
    Orbits {
        #[arg(long, env = "XPQ_MAX_DENOMINATOR", default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        max_den: u64,
    },
    /// Stabilizer lattice of the points with denominator r.
    Stabilizer {
        #[arg(short, long)]
        r: BigInt,
    },
    /// Fixed points of the shift (m, n).
    #[command(allow_negative_numbers = true)]
    Fix {
        #[arg(short, long)]
        m: i64,
        #[arg(short, long)]
        n: i64,
        /// Only list points with denominator at most this.
        #[arg(long)]
        bound: Option<BigInt>,
    },
    /// Coordinates x_0, ..., x_depth of the solenoid point over x.
    Lift {
        #[arg(short, long)]
        x: QmodZ,
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// Evaluate a trace on a group algebra element.
    TraceEval {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        element: String,
    },
    /// tau(u_(n,0,0)) for |n| <= n-max.
    Moments {
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 20)]
        n_max: u32,
    },
    /// Whether the moments are invariant under n -> pn and n -> qn.
    Invariance {
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 200)]
        n_max: u32,
    },
    /// K-groups of the group C*-algebra.
    Ktheory,
    /// Kernel and cokernel of multiplication by m on Z/n.
    Lemma36 {
        #[arg(short, long, value_parser = clap::value_parser!(u64).range(1..))]
        m: u64,
        #[arg(short, long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    /// Closure of a finite set of primitive ideals (JSON list of points).
    PrimClosure {
        #[arg(long)]
        points: String,
    },
    /// Limit set of a sequence described by its tail.
    PrimLimit {
        #[arg(long)]
        sequence: String,
    },
    /// Distinct conjugates of a non-identity group element.
    IccWitness {
        #[arg(long)]
        element: String,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// Whether p and q are multiplicatively independent.
    MultIndep,
    /// Run the oracle suites: a name, a criterion number, or all.
    Check {
        suite: Option<String>,
        /// Scale randomized trial counts (500 = full size).
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        trials: Option<u64>,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Domain(#[from] xpq_core::Error),
    #[error("{0} check suite(s) failed")]
    CheckFailed(usize),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Domain(_) => 2,
            CliError::CheckFailed(_) => 3,
        }
    }
}

/// A command result in every format it supports.
struct Rendered {
    json: Value,
    csv: Option<String>,
    pretty: Option<String>,
}

impl Rendered {
    fn json<T: Serialize>(value: &T) -> Result<Self, CliError> {
        Ok(Rendered {
            json: to_value(value)?,
            csv: None,
            pretty: None,
        })
    }
}

fn to_value<T: Serialize>(value: &T) -> Result<Value, CliError> {
    serde_json::to_value(value).map_err(|e| CliError::Usage(format!("cannot encode output: {e}")))
}

fn bigint_value(n: &BigInt) -> Value {
    n.to_i64().map_or_else(|| Value::String(n.to_string()), Value::from)
}

fn read_input(arg: &str) -> Result<String, CliError> {
    let trimmed = arg.trim_start();
    if arg == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(arg.to_string());
    }
    let path = arg.strip_prefix('@').unwrap_or(arg);
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))
}

fn parse_json<T: serde::de::DeserializeOwned>(arg: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(&read_input(arg)?).map_err(|e| CliError::Usage(format!("invalid {what}: {e}")))
}

fn parse_element(arg: &str, params: &SystemParams) -> Result<GroupAlgebraElement, CliError> {
    GroupAlgebraElement::from_json(&read_input(arg)?, params)
        .map_err(|e| CliError::Usage(format!("invalid group algebra element: {e}")))
}

fn execute(cli: &Cli, params: &SystemParams) -> Result<Rendered, CliError> {
    match &cli.command {
        Command::Orbits { max_den } => {
            let orbits = enumerate_minimal_sets(params, *max_den)?;
            let mut csv = String::from("r,size,index,basis,points\n");
            let mut pretty = String::new();
            for o in &orbits {
                let [[a, b], [_, c]] = o.stabilizer().basis();
                let pts: Vec<String> = o.points().iter().map(|x| x.coord().to_string()).collect();
                csv.push_str(&format!(
                    "{},{},{},{a} {b};0 {c},{}\n",
                    o.denominator(),
                    o.len(),
                    o.stabilizer().index(),
                    pts.join(" ")
                ));
                pretty.push_str(&format!(
                    "r = {:<4} |O| = {:<4} L = <({a}, {b}), (0, {c})>  {{{}}}\n",
                    o.denominator(),
                    o.len(),
                    pts.join(", ")
                ));
            }
            Ok(Rendered {
                json: to_value(&orbits)?,
                csv: Some(csv),
                pretty: Some(pretty),
            })
        }
        Command::Stabilizer { r } => {
            let lattice = stabilizer_lattice(params, r)?;
            let repr = lattice.to_repr();
            Ok(Rendered::json(&json!({"r": bigint_value(r), "basis": repr.basis, "index": repr.index}))?)
        }
        Command::Fix { m, n, bound } => {
            let fp = fixed_points(params, (*m, *n), bound.as_ref())?;
            Rendered::json(&json!({"m": m, "n": n, "count": bigint_value(&fp.count), "points": fp.points}))
        }
        Command::Lift { x, depth } => {
            let point = SolenoidPoint::new(params, x.clone())?;
            Rendered::json(&json!({"x": x, "depth": depth, "lift": lift_sequence(params, &point, *depth)}))
        }
        Command::TraceEval { spec, element } => {
            let spec: TraceSpec = parse_json(spec, "trace spec")?;
            let a = parse_element(element, params)?;
            Rendered::json(&TraceValue::from(trace_eval(&spec, &a)?))
        }
        Command::Moments { spec, n_max } => {
            let spec: TraceSpec = parse_json(spec, "trace spec")?;
            let seq = moments(&spec, params, *n_max)?;
            let mut csv = String::from("n,re,im,exact\n");
            let mut pretty = String::new();
            for (n, v) in seq.values() {
                let approx = v.approx();
                let exact = v.as_rational().map(|r| r.to_string()).unwrap_or_default();
                csv.push_str(&format!("{n},{},{},{exact}\n", approx.re, approx.im));
                pretty.push_str(&format!("{n:>6}  {:>+.12} {:>+.12}i  {exact}\n", approx.re, approx.im));
            }
            Ok(Rendered {
                json: to_value(&seq)?,
                csv: Some(csv),
                pretty: Some(pretty),
            })
        }
        Command::Invariance { spec, n_max } => {
            let spec: TraceSpec = parse_json(spec, "trace spec")?;
            let seq = moments(&spec, params, *n_max)?;
            let invariant = check_pq_invariance(&seq, params)?;
            Rendered::json(&json!({"kind": spec.kind(), "n_max": n_max, "invariant": invariant}))
        }
        Command::Ktheory => {
            let report = k_theory_of_group(params.p(), params.q())?;
            let pretty = format!(
                "K0 = {}\nK1 = {}\nclosed form: {} (gcd {})\nmatch: {}\n",
                report.k0, report.k1, report.closed_form.group, report.closed_form.gcd, report.matches
            );
            let mut r = Rendered::json(&report)?;
            r.pretty = Some(pretty);
            Ok(r)
        }
        Command::Lemma36 { m, n } => {
            let (ker, coker) = mult_map_ker_coker(*m, *n)?;
            Rendered::json(&json!({
                "m": m,
                "n": n,
                "gcd": num_integer::gcd(*m, *n),
                "kernel": to_value(&ker)?,
                "cokernel": to_value(&coker)?,
            }))
        }
        Command::PrimClosure { points } => {
            let points: Vec<PrimPoint> = parse_json(points, "point list")?;
            Rendered::json(&closure(&points))
        }
        Command::PrimLimit { sequence } => {
            let seq: SequenceDesc = parse_json(sequence, "sequence")?;
            Rendered::json(&limit_set(&seq))
        }
        Command::IccWitness { element, count } => {
            let repr: GroupElementRepr = parse_json(element, "group element")?;
            let g = GroupElement::from_repr(&repr, params)
                .map_err(|e| CliError::Usage(format!("invalid group element: {e}")))?;
            let conj = icc_witness(params, &g, *count)?;
            Rendered::json(&json!({"element": to_value(&g)?, "conjugates": to_value(&conj)?}))
        }
        Command::MultIndep => {
            let witness = dependence_witness(params.p(), params.q())?;
            Rendered::json(&json!({
                "independent": witness.is_none(),
                "witness": witness.map(|(r, s)| json!({"r": r, "s": s})),
            }))
        }
        Command::Check { suite, trials } => {
            let mut cfg = CheckConfig {
                seed: cli.seed,
                ..CheckConfig::default()
            };
            if let Some(t) = trials {
                cfg = cfg.with_trials(*t as usize);
            }
            let selected: Vec<_> = match suite.as_deref() {
                None | Some("all") => SUITES.iter().collect(),
                Some(name) => vec![checks::suite(name).ok_or_else(|| {
                    let names: Vec<&str> = SUITES.iter().map(|s| s.name).collect();
                    CliError::Usage(format!("unknown suite {name:?}; expected one of {}", names.join(", ")))
                })?],
            };
            let reports: Vec<_> = selected.iter().map(|s| s.run(&cfg)).collect();
            let pretty = reports
                .iter()
                .map(|r| {
                    let tag = if r.passed { "PASS" } else { "FAIL" };
                    format!("[{tag}] criterion {} {}: {}\n", r.criterion, r.suite, r.detail)
                })
                .collect();
            Ok(Rendered {
                json: to_value(&reports)?,
                csv: None,
                pretty: Some(pretty),
            })
        }
    }
}

fn check_failures(cli: &Cli, json: &Value) -> usize {
    match cli.command {
        Command::Check { .. } => json
            .as_array()
            .map_or(0, |rs| rs.iter().filter(|r| r["passed"] != Value::Bool(true)).count()),
        _ => 0,
    }
}

fn run_parsed(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let params = SystemParams::new(cli.p, cli.q)?;
    if let Some((r, s)) = dependence_witness(cli.p, cli.q)? {
        writeln!(
            err,
            "warning: p = {} and q = {} are multiplicatively dependent ({}^{r} = {}^{s}); \
             results assuming independence do not apply",
            cli.p, cli.q, cli.p, cli.q
        )?;
    }
    let rendered = match cli.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start thread pool: {e}")))?
            .install(|| execute(cli, &params))?,
        None => execute(cli, &params)?,
    };
    let text = match cli.format {
        Format::Json => format!("{}\n", rendered.json),
        Format::Pretty => match &rendered.pretty {
            Some(p) => p.clone(),
            None => format!(
                "{}\n",
                serde_json::to_string_pretty(&rendered.json).expect("values always encode")
            ),
        },
        Format::Csv => rendered
            .csv
            .clone()
            .ok_or_else(|| CliError::Usage("csv output is only available for orbits and moments".into()))?,
    };
    out.write_all(text.as_bytes())?;
    match check_failures(cli, &rendered.json) {
        0 => Ok(()),
        n => Err(CliError::CheckFailed(n)),
    }
}

/// Parses `argv` (program name first) and runs it; returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let shown = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(shown.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(shown.as_bytes());
                    1
                }
            };
        }
    };
    match run_parsed(&cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("xpq").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["ktheory"]).0, 0);
        assert_eq!(call(&["frobnicate"]).0, 1);
        assert_eq!(call(&["ktheory", "-p", "1"]).0, 1);
        assert_eq!(call(&["stabilizer", "-r", "4"]).0, 2);
        assert_eq!(call(&["fix", "-m", "0", "-n", "0"]).0, 2);
        assert_eq!(call(&["ktheory", "--format", "csv"]).0, 1);
        assert_eq!(call(&["check", "nope"]).0, 1);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn dependent_pair_warns() {
        let (code, out, err) = call(&["mult-indep", "-p", "4", "-q", "8"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), r#"{"independent":false,"witness":{"r":3,"s":2}}"#);
        assert!(err.contains("dependent"));
        assert!(call(&["mult-indep"]).2.is_empty());
    }

    #[test]
    fn negative_shift() {
        let (code, out, _) = call(&["fix", "-m", "-1", "-n", "1"]);
        assert_eq!(code, 0);
        // 3/2 - 1 = 1/2
        assert!(out.contains(r#""count":1"#), "{out}");
    }
}
