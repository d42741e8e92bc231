//! The `clo` command line: construct, verify and measure circuit bundles.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::approximation::{
    approximate_circuit, approximate_clo, count_errors, default_params, positive_error_bound, negative_error_bound, ApproxParams,
};
use crate::circuits::{emit_bundle, normal_form, parse_circuit_bundle, parse_family, verify_separation};
use crate::constructions::Construction;
use crate::error::{Error, Result};
use crate::experiments::{dichotomy_measure_with, flatten, phase_report};
use crate::math::{format_rational, parse_rational};
use crate::rectangles::{locality_exact, locality_mc, max_overlap, LocalityMode, LocalityReport, RectFamily};
use crate::testsets::TestSuite;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "clo", version, about = "Monotone circuits with local oracles on k-clique test sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Clone)]
struct Common {
    /// Seed for every randomized step.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads for Monte-Carlo sampling.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Clone)]
struct ApproxArgs {
    /// Indicator width (default floor(sqrt(k))).
    #[arg(long)]
    ell: Option<usize>,
    /// Sunflower size (default ceil(10 sqrt(k) log2 n)).
    #[arg(long)]
    p: Option<usize>,
    /// Indicator budget (default (p-1)^ell ell!).
    #[arg(long)]
    m: Option<u64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Mc,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Emit the bundle of a named construction.
    Construct {
        /// single-oracle, triangle, trivial-dnf or lex.
        name: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long)]
        ell: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Check that a bundle accepts every clique and rejects every multipartite graph.
    Verify {
        bundle: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Locality of the rectangles of a bundle or family file.
    Locality {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Largest number of U-sides sharing one clique.
    Overlap {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Rewrite a bundle as an OR of oracle-free circuits gated by rectangles.
    NormalForm {
        bundle: PathBuf,
        /// Largest oracle subset size (default: the overlap number).
        #[arg(long)]
        d: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Approximate every oracle-free part of a bundle and compare with the original.
    Approx {
        bundle: PathBuf,
        #[arg(long)]
        d: Option<usize>,
        #[command(flatten)]
        params: ApproxArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Approximation errors of an oracle-free bundle against the error bounds.
    Errors {
        bundle: PathBuf,
        #[command(flatten)]
        params: ApproxArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Accepted V-measure and rejected U-measure of a flat bundle.
    Dichotomy {
        bundle: PathBuf,
        /// Locality threshold for the hypothesis flag, as a fraction or decimal.
        #[arg(long, default_value = "1/16")]
        mu_threshold: String,
        #[command(flatten)]
        common: Common,
    },
    /// Size and locality of one circuit per locality regime for triangles.
    PhaseReport {
        #[arg(long)]
        n: usize,
        /// Regime margin, as a fraction or decimal.
        #[arg(long, default_value = "0.1")]
        eps: String,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[command(flatten)]
        common: Common,
    },
}

/// Outcome of a command: a report plus whether it counts as a pass.
struct Outcome {
    body: String,
    pass: bool,
}

fn envelope(command: &str, params: Value, result: impl Serialize) -> Result<String> {
    let v = json!({
        "tool": "clo",
        "version": VERSION,
        "command": command,
        "params": params,
        "result": serde_json::to_value(result).map_err(|e| Error::Invariant(e.to_string()))?,
    });
    Ok(serde_json::to_string_pretty(&v).expect("json value serializes") + "\n")
}

fn load_family(path: &Path) -> Result<RectFamily> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io_at(path, e))?;
    let is_bundle = serde_json::from_str::<Value>(&text)
        .map_err(|e| Error::Schema { path: ".".into(), message: e.to_string() })?
        .get("nodes")
        .is_some();
    if is_bundle {
        Ok(parse_circuit_bundle(path)?.family)
    } else {
        parse_family(&text)
    }
}

fn resolve_params(a: &ApproxArgs, n: usize, k: usize) -> Result<ApproxParams> {
    let d = default_params(n, k)?;
    let ell = a.ell.unwrap_or(d.ell);
    let p = a.p.unwrap_or(d.p);
    let m = match a.m {
        Some(m) => m,
        None if a.ell.is_none() && a.p.is_none() => d.m,
        None => {
            let mut m: u64 = 1;
            for i in 1..=ell as u64 {
                m = m.saturating_mul((p as u64).saturating_sub(1)).saturating_mul(i);
            }
            m.max(1)
        }
    };
    ApproxParams::new(ell, p, m)
}

fn run_command(cmd: &Command) -> Result<(Outcome, Option<PathBuf>)> {
    let common = match cmd {
        Command::Construct { common, .. }
        | Command::Verify { common, .. }
        | Command::Locality { common, .. }
        | Command::Overlap { common, .. }
        | Command::NormalForm { common, .. }
        | Command::Approx { common, .. }
        | Command::Errors { common, .. }
        | Command::Dichotomy { common, .. }
        | Command::PhaseReport { common, .. } => common,
    };
    let base = json!({"seed": common.seed, "workers": common.workers});
    let with = |extra: Value| {
        let mut b = base.clone();
        if let (Value::Object(b), Value::Object(e)) = (&mut b, extra) {
            b.extend(e);
        }
        b
    };
    let outcome = match cmd {
        Command::Construct { name, n, k, ell, .. } => {
            let c: Construction = name.parse()?;
            let bundle = c.build(*n, *k, *ell)?;
            Outcome { body: emit_bundle(&bundle) + "\n", pass: true }
        }
        Command::Verify { bundle, .. } => {
            let b = parse_circuit_bundle(bundle)?;
            let suite = TestSuite::new(b.n, b.k)?;
            let r = verify_separation(&b.circuit, &b.family, &suite)?;
            let pass = r.passed();
            let params = with(json!({"bundle": bundle, "n": b.n, "k": b.k, "size": b.circuit.size()}));
            Outcome { body: envelope("verify", params, r)?, pass }
        }
        Command::Locality { file, mode, samples, .. } => {
            let family = load_family(file)?;
            let report = match mode {
                Mode::Exact => {
                    let suite = TestSuite::new(family.n, family.k)?;
                    LocalityReport::exact(&locality_exact(&family, &suite)?)
                }
                Mode::Mc => locality_mc(&family, *samples, common.seed, common.workers)?,
            };
            let mut params = with(json!({"file": file, "n": family.n, "k": family.k, "rects": family.len(), "mode": report.mode}));
            if report.mode == LocalityMode::Mc {
                params["samples"] = json!(samples);
            }
            Outcome { body: envelope("locality", params, report)?, pass: true }
        }
        Command::Overlap { file, .. } => {
            let family = load_family(file)?;
            let suite = TestSuite::new(family.n, family.k)?;
            let d = max_overlap(&family, &suite)?;
            let params = with(json!({"file": file, "n": family.n, "k": family.k}));
            Outcome { body: envelope("overlap", params, json!({"max_overlap": d}))?, pass: true }
        }
        Command::NormalForm { bundle, d, .. } => {
            let b = parse_circuit_bundle(bundle)?;
            let suite = TestSuite::new(b.n, b.k)?;
            let d = match d {
                Some(d) => *d,
                None => max_overlap(&b.family, &suite)?,
            };
            let nf = normal_form(&b.circuit, &b.family, d, &suite)?;
            let params = with(json!({"bundle": bundle, "n": b.n, "k": b.k, "d": d}));
            let result = json!({"entries": nf.summary(), "checked_members": nf.checked_members, "equivalent": true});
            Outcome { body: envelope("normal-form", params, result)?, pass: true }
        }
        Command::Approx { bundle, d, params, .. } => {
            let b = parse_circuit_bundle(bundle)?;
            let suite = TestSuite::new(b.n, b.k)?;
            let d = match d {
                Some(d) => *d,
                None => max_overlap(&b.family, &suite)?,
            };
            let ap = resolve_params(params, b.n, b.k)?;
            let r = approximate_clo(&b.circuit, &b.family, d, &ap, &suite)?;
            let pass = r.union_bound_holds;
            let p = with(json!({"bundle": bundle, "n": b.n, "k": b.k, "d": d, "ell": ap.ell, "p": ap.p, "m": ap.m}));
            Outcome { body: envelope("approx", p, r)?, pass }
        }
        Command::Errors { bundle, params, .. } => {
            let b = parse_circuit_bundle(bundle)?;
            let suite = TestSuite::new(b.n, b.k)?;
            let ap = resolve_params(params, b.n, b.k)?;
            let c = b.circuit.binarize();
            let a = approximate_circuit(&c, &ap)?;
            let e = count_errors(&c, &a, &suite)?;
            let s = c.size();
            let b7 = positive_error_bound(s, &ap, b.n, b.k);
            let b8 = negative_error_bound(s, &ap, b.n, b.k);
            let pass = num_bigint::BigInt::from(e.e_plus) <= b7 && e.e_minus <= b8;
            let p = with(json!({"bundle": bundle, "n": b.n, "k": b.k, "ell": ap.ell, "p": ap.p, "m": ap.m}));
            let result = json!({
                "size": s,
                "approximator": a,
                "errors": e,
                "e_plus_bound": b7.to_string(),
                "e_minus_bound": b8.to_string(),
                "within_bounds": pass,
            });
            Outcome { body: envelope("errors", p, result)?, pass }
        }
        Command::Dichotomy { bundle, mu_threshold, .. } => {
            let b = parse_circuit_bundle(bundle)?;
            let suite = TestSuite::new(b.n, b.k)?;
            let mu = parse_rational(mu_threshold)?;
            let clauses = flatten(&b.circuit, &b.family)?;
            let r = dichotomy_measure_with(&clauses, &suite, &mu)?;
            let p = with(json!({"bundle": bundle, "n": b.n, "k": b.k, "mu_threshold": format_rational(&mu)}));
            Outcome { body: envelope("dichotomy", p, r)?, pass: true }
        }
        Command::PhaseReport { n, eps, format, .. } => {
            let eps = parse_rational(eps)?;
            let r = phase_report(*n, &eps)?;
            let pass = r.all_ok();
            let body = match format {
                Format::Csv => r.to_csv(),
                Format::Json => {
                    let p = with(json!({"n": n, "k": 3, "eps": format_rational(&eps)}));
                    envelope("phase-report", p, &r)?
                }
            };
            Outcome { body, pass }
        }
    };
    Ok((outcome, common.out.clone()))
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Precondition(_) | Error::Invariant(_) => 1,
        _ => 2,
    }
}

/// Runs the CLI on `args` (program name first) and returns the exit code:
/// 0 on success, 1 on a verification failure, 2 on usage or input errors.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(stderr, "{e}") } else { write!(stdout, "{e}") };
            return code;
        }
    };
    match run_command(&cli.command) {
        Ok((outcome, out)) => {
            let written = match &out {
                Some(path) => std::fs::write(path, &outcome.body),
                None => stdout.write_all(outcome.body.as_bytes()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: {}", Error::io_at(out.as_deref().unwrap_or(Path::new("<stdout>")), e));
                return 2;
            }
            if outcome.pass {
                0
            } else {
                let _ = writeln!(stderr, "verification failed");
                1
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}
