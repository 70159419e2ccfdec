//! `bruhat`: decompose matrices over Q_p and run the verification suites.
//!
//! Exit codes: 0 success, 1 malformed input or failed suite, 2 singular
//! matrix, 3 insufficient precision, 4 unknown suite.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use bruhat_core::json::{decomposition_to_json, matrix_from_json};
use bruhat_core::{rb_decompose, Error, OrderingPreset, RunConfig, Suite};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "bruhat", version, about = "p-adic r·b decompositions and verification suites")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

/// Each flag overrides the same key of `--config`.
#[derive(clap::Args, Debug)]
struct Opts {
    /// JSON file with any of the keys below
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    p: Option<u32>,
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Relative precision in p-adic digits
    #[arg(long, global = true)]
    precision: Option<u32>,
    #[arg(long, global = true, env = "BRUHAT_SEED")]
    seed: Option<u64>,
    /// Trials per suite (each suite has its own default)
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// Ordering of W: default or paper-n3
    #[arg(long, global = true)]
    preset: Option<String>,
    /// Character as JSON, e.g. '{"p":3,"m":1,"chi":[{"c":"1","e":0},…]}'
    #[arg(long, global = true)]
    chi: Option<String>,
    /// Valuation window V for sampled entries
    #[arg(long, global = true)]
    valwindow: Option<i64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Factor a matrix as r·b; reads JSON from the argument or stdin
    Decompose {
        /// JSON matrix, e.g. '[["9","0","1"],["1","0","0"],["3","1","0"]]'; `-` or absent reads stdin
        matrix: Option<String>,
    },
    /// Run a verification suite and print its report
    Verify {
        /// One of: reconstruction, disjointness, n0-invariance,
        /// bplus-monotonicity, cell-inclusion, bruhat-oracle, theta-lemma,
        /// nprime-invariance, quotient-formula, counterexample,
        /// precision-honesty
        suite: String,
    },
    /// Print the effective configuration
    Config,
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::SingularToPrecision | Error::DivisionByZero => 2,
        Error::InsufficientPrecision(_) => 3,
        _ => 1,
    }
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    println!("{}", json!({"error": msg.to_string(), "exit_code": code}));
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn build_config(opts: &Opts) -> Result<RunConfig, Error> {
    let mut cfg = match &opts.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    if let Some(p) = opts.p {
        cfg.p = p;
    }
    if let Some(n) = opts.n {
        cfg.n = n;
    }
    if let Some(prec) = opts.precision {
        cfg.precision = prec;
    }
    if let Some(seed) = opts.seed {
        cfg.seed = seed;
    }
    if let Some(t) = opts.trials {
        cfg.trials = Some(t);
    }
    if let Some(preset) = &opts.preset {
        cfg.preset = preset.parse::<OrderingPreset>()?;
    }
    if let Some(chi) = &opts.chi {
        let v: Value = serde_json::from_str(chi).map_err(|e| Error::InvalidInput(format!("--chi: {e}")))?;
        cfg.chi = Some(v);
    }
    if let Some(v) = opts.valwindow {
        cfg.valwindow = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn read_matrix_text(arg: Option<String>) -> Result<String, Error> {
    match arg.as_deref() {
        Some("-") | None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Error::InvalidInput(format!("stdin: {e}")))?;
            Ok(s)
        }
        Some(s) => Ok(s.to_string()),
    }
}

fn decompose(cfg: &RunConfig, arg: Option<String>) -> ExitCode {
    let text = match read_matrix_text(arg) {
        Ok(t) => t,
        Err(e) => return fail(1, e),
    };
    let v: Value = match serde_json::from_str(&text) {
        Ok(v) => v,
        Err(e) => return fail(1, format!("matrix JSON: {e}")),
    };
    // accept a bare matrix or a replayed failure witness {"g": …}
    let m = v.get("g").unwrap_or(&v);
    let g = match matrix_from_json(m, cfg.p, cfg.precision) {
        Ok(g) => g,
        Err(e) => return fail(1, e),
    };
    match rb_decompose(&g) {
        Ok(d) => {
            println!("{}", decomposition_to_json(&d, cfg.precision));
            eprintln!("w = {} (p = {}, precision {})", d.w, cfg.p, cfg.precision);
            ExitCode::SUCCESS
        }
        Err(e) => fail(exit_code_for(&e), e),
    }
}

fn verify(cfg: &RunConfig, name: &str) -> ExitCode {
    let suite: Suite = match name.parse() {
        Ok(s) => s,
        Err(e) => return fail(4, e),
    };
    match suite.run(cfg) {
        Ok(report) => {
            println!("{}", serde_json::to_string(&report).expect("report serializes"));
            eprintln!("{}", report.summary());
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => fail(exit_code_for(&e), e),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let cfg = match build_config(&cli.opts) {
        Ok(cfg) => cfg,
        Err(e) => return fail(1, e),
    };
    match cli.command {
        Command::Decompose { matrix } => decompose(&cfg, matrix),
        Command::Verify { suite } => verify(&cfg, &suite),
        Command::Config => {
            println!("{}", cfg.to_json());
            ExitCode::SUCCESS
        }
    }
}
