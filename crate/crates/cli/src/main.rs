//! `wpcert` — certify expectation bounds on probabilistic while-programs.
//!
//! Three subcommands:
//!
//! * `check`    — mechanically check an annotated proof-rule application
//!               described by a TOML file and report a certificate;
//! * `wp`       — apply the weakest-preexpectation or expected-runtime
//!               transformer to a program, symbolically or numerically;
//! * `simulate` — estimate program quantities by seeded Monte-Carlo
//!               simulation.
//!
//! Exit codes: 0 the check was ACCEPTED (or the command simply succeeded),
//! 1 REJECTED, 2 INCONCLUSIVE, 3 usage or input error.

mod annotation;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use annotation::Rule;
use wpcert_core::certificates::{
    prove_lower_ert, prove_lower_mciver, prove_lower_ost, prove_upper_park, CertConfig, Verdict,
};
use wpcert_core::simulator::{
    estimate_ert, estimate_induced_process, estimate_looping_time, estimate_post, Estimate,
    SimConfig,
};
use wpcert_core::syntax::{parse_domain, parse_expectation, parse_program, parse_state, Expr};
use wpcert_core::transformers::{
    eval_transformer, transform_loopfree, BoundedValue, FixpointConfig, TransformerKind,
};

const EXIT_ACCEPTED: u8 = 0;
const EXIT_REJECTED: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_ERROR: u8 = 3;

#[derive(Parser)]
#[command(
    name = "wpcert",
    version,
    about = "Certify wp/ert bounds on probabilistic while-programs"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check an annotated proof-rule application and print a certificate.
    Check(CheckArgs),
    /// Apply the wp or ert transformer to a program.
    Wp(WpArgs),
    /// Estimate program quantities by seeded Monte-Carlo simulation.
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct CheckArgs {
    /// TOML annotation file describing the program, rule, and bounds.
    annotations: PathBuf,
    /// Comparison tolerance; also the fixed-point sweep tolerance. The
    /// float-comparison tolerance is this value, but at least 1e-6.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Master seed for simulation-based side conditions.
    #[arg(long, value_parser = parse_seed, default_value = "0xC0FFEE")]
    seed: u64,
    /// Trajectories per state for simulation-based side conditions.
    #[arg(long, default_value_t = 2000)]
    samples: u64,
    /// Guard-evaluation cap per loop entry before a trajectory is abandoned.
    #[arg(long, default_value_t = 10_000)]
    step_cap: u64,
    /// Worker threads for simulation (estimates are thread-count invariant).
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Also write the JSON report to this path.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Wp,
    Ert,
}

impl From<KindArg> for TransformerKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Wp => TransformerKind::Wp,
            KindArg::Ert => TransformerKind::Ert,
        }
    }
}

#[derive(Args)]
struct WpArgs {
    /// Program source file.
    program: PathBuf,
    /// Post-expectation (wp) or continuation runtime (ert).
    #[arg(long)]
    post: String,
    /// Which transformer to apply.
    #[arg(long, value_enum, default_value_t = KindArg::Wp)]
    kind: KindArg,
    /// Print the transformed expectation symbolically (loop-free programs).
    #[arg(long)]
    symbolic: bool,
    /// Evaluate numerically at one state, e.g. "a = 1, b = 0".
    #[arg(long, value_name = "STATE")]
    state: Option<String>,
    /// Evaluate numerically at every state of a domain,
    /// e.g. "a in {0,1}; b in 0..10".
    #[arg(long, value_name = "DOMAIN")]
    domain: Option<String>,
    /// Fixed-point sweep tolerance for numeric evaluation.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum What {
    /// Expected value of --f over terminating runs.
    Post,
    /// Expected accumulated runtime plus --f at the final state.
    Ert,
    /// Looping time statistics (program must be a while loop).
    LoopingTime,
    /// Mean of the induced stopped process at index --n-index
    /// (program must be a while loop; needs --f and --I).
    Induced,
}

#[derive(Args)]
struct SimulateArgs {
    /// Program source file.
    program: PathBuf,
    /// Quantity to estimate.
    #[arg(long, value_enum)]
    what: What,
    /// Initial state, e.g. "a = 1, b = 0".
    #[arg(long, value_name = "STATE")]
    state: String,
    /// Post-expectation (--what post, induced) or continuation runtime
    /// (--what ert, defaults to 0).
    #[arg(long, value_name = "EXPR")]
    f: Option<String>,
    /// Invariant that fills the induced process after stopping
    /// (--what induced).
    #[arg(long = "I", value_name = "EXPR")]
    invariant: Option<String>,
    /// Process index n (--what induced).
    #[arg(long, value_name = "N")]
    n_index: Option<u64>,
    /// Number of independent trajectories.
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    /// Master seed (decimal or 0x-hex); printed with every estimate.
    #[arg(long, value_parser = parse_seed, default_value = "0xC0FFEE")]
    seed: u64,
    /// Guard-evaluation cap per loop entry before a trajectory is abandoned.
    #[arg(long, default_value_t = 10_000)]
    step_cap: u64,
    /// Worker threads (estimates are thread-count invariant).
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Print the estimate as JSON instead of text.
    #[arg(long)]
    json: bool,
}

fn parse_seed(text: &str) -> Result<u64, String> {
    let parsed = if let Some(hex) = text.strip_prefix("0x").or_else(|| text.strip_prefix("0X")) {
        u64::from_str_radix(hex, 16)
    } else {
        text.parse()
    };
    parsed.map_err(|e| format!("invalid seed `{text}`: {e}"))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_ERROR,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.cmd {
        Cmd::Check(args) => cmd_check(args),
        Cmd::Wp(args) => cmd_wp(args),
        Cmd::Simulate(args) => cmd_simulate(args),
    }
}

fn cmd_check(args: &CheckArgs) -> Result<u8> {
    let started = Instant::now();
    let loaded = annotation::load(&args.annotations)?;

    let mut cfg = CertConfig::default();
    cfg.tol = args.tol;
    cfg.float_tol = args.tol.max(1e-6);
    cfg.fixpoint.abs_tol = args.tol;
    cfg.evidence_samples = args.samples;
    cfg.sim.seed = args.seed;
    cfg.sim.step_cap = args.step_cap;
    cfg.sim.threads = args.threads;

    let cert = match loaded.rule {
        Rule::ParkUpper => prove_upper_park(loaded.kind, &loaded.ann, &cfg)?,
        Rule::Ost(rule) => prove_lower_ost(rule, &loaded.ann, &cfg)?,
        Rule::Mciver(variant) => prove_lower_mciver(variant, &loaded.ann, &cfg)?,
        Rule::ErtLower => prove_lower_ert(&loaded.ann, &cfg)?,
    };

    print!("{}", report::render_human(&cert));
    if let Some(path) = &args.json {
        let rep = report::Report::new(&cert, &cfg, started.elapsed());
        let mut text = serde_json::to_string_pretty(&rep)?;
        text.push('\n');
        std::fs::write(path, text)
            .with_context(|| format!("cannot write report `{}`", path.display()))?;
    }

    Ok(match cert.verdict {
        Verdict::Accepted => EXIT_ACCEPTED,
        Verdict::Rejected => EXIT_REJECTED,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    })
}

fn render_value(bv: &BoundedValue) -> String {
    let mut flags =
        if bv.converged { "converged".to_string() } else { "not converged".to_string() };
    if bv.is_lower_bound_only {
        flags.push_str(", lower bound only");
    }
    format!("{} ({flags})", bv.value)
}

fn cmd_wp(args: &WpArgs) -> Result<u8> {
    let src = std::fs::read_to_string(&args.program)
        .with_context(|| format!("cannot read program `{}`", args.program.display()))?;
    let prog = parse_program(&src)
        .with_context(|| format!("parse error in `{}`", args.program.display()))?;
    let post = parse_expectation(&args.post).context("in --post")?;
    let kind: TransformerKind = args.kind.into();

    let modes = args.symbolic as usize
        + args.state.is_some() as usize
        + args.domain.is_some() as usize;
    if modes != 1 {
        bail!("choose exactly one of --symbolic, --state, or --domain");
    }

    if args.symbolic {
        let result = transform_loopfree(kind, &prog, &post)?;
        println!("{result}");
        return Ok(0);
    }

    let cfg = FixpointConfig { abs_tol: args.tol, ..FixpointConfig::default() };
    if let Some(state_text) = &args.state {
        let s = parse_state(state_text).context("in --state")?;
        let bv = eval_transformer(kind, &prog, &post, &s, &cfg)?;
        println!("{}", render_value(&bv));
    } else if let Some(domain_text) = &args.domain {
        let dom = parse_domain(domain_text).context("in --domain")?;
        for s in dom.enumerate() {
            let bv = eval_transformer(kind, &prog, &post, &s, &cfg)?;
            println!("{s}: {}", render_value(&bv));
        }
    }
    Ok(0)
}

fn require_flag<'a, T>(value: &'a Option<T>, what: What, flag: &str) -> Result<&'a T> {
    value.as_ref().ok_or_else(|| {
        let name = match what {
            What::Post => "post",
            What::Ert => "ert",
            What::LoopingTime => "looping-time",
            What::Induced => "induced",
        };
        anyhow::anyhow!("--what {name} requires {flag}")
    })
}

fn print_estimate(label: &str, est: &Estimate, json: bool) -> Result<()> {
    if json {
        let mut text = serde_json::to_string_pretty(est)?;
        text.push('\n');
        print!("{text}");
    } else {
        println!("seed = {} (0x{:x})", est.seed, est.seed);
        println!("{label} = {}", est.mean);
        println!("stderr = {}", est.stderr);
        println!("samples = {}", est.n_samples);
        println!("nonterminated_fraction = {}", est.nonterminated_fraction);
    }
    Ok(())
}

fn cmd_simulate(args: &SimulateArgs) -> Result<u8> {
    let src = std::fs::read_to_string(&args.program)
        .with_context(|| format!("cannot read program `{}`", args.program.display()))?;
    let prog = parse_program(&src)
        .with_context(|| format!("parse error in `{}`", args.program.display()))?;
    let init = parse_state(&args.state).context("in --state")?;

    let cfg = SimConfig {
        samples: args.samples,
        seed: args.seed,
        step_cap: args.step_cap,
        threads: args.threads,
    };

    let parse_f = |text: &String| parse_expectation(text).context("in --f");
    match args.what {
        What::Post => {
            let f = parse_f(require_flag(&args.f, args.what, "--f")?)?;
            let est = estimate_post(&prog, &f, &init, &cfg)?;
            print_estimate("mean", &est, args.json)?;
        }
        What::Ert => {
            let f = match &args.f {
                Some(text) => parse_f(text)?,
                None => Expr::int(0),
            };
            let est = estimate_ert(&prog, &f, &init, &cfg)?;
            print_estimate("mean", &est, args.json)?;
        }
        What::LoopingTime => {
            let est = estimate_looping_time(&prog, &init, &cfg)?;
            if args.json {
                let mut text = serde_json::to_string_pretty(&est)?;
                text.push('\n');
                print!("{text}");
            } else {
                println!("seed = {} (0x{:x})", est.time.seed, est.time.seed);
                println!("mean = {}", est.time.mean);
                println!("stderr = {}", est.time.stderr);
                println!("samples = {}", est.time.n_samples);
                println!("termination_frequency = {}", est.termination_frequency);
                println!("max_observed = {}", est.max_observed);
            }
        }
        What::Induced => {
            let f = parse_f(require_flag(&args.f, args.what, "--f")?)?;
            let inv_text = require_flag(&args.invariant, args.what, "--I")?;
            let invariant = parse_expectation(inv_text).context("in --I")?;
            let n = *require_flag(&args.n_index, args.what, "--n-index")?;
            let est = estimate_induced_process(&prog, &f, &invariant, n, &init, &cfg)?;
            print_estimate("mean", &est, args.json)?;
        }
    }
    Ok(0)
}
