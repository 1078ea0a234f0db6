//! `inclsolve` — run and verify extragradient-family solvers on equation and
//! inclusion benchmarks.
//!
//! Exit codes: `0` success / all certificates pass, `1` certificate failure,
//! `2` usage or configuration error, `3` numeric failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use inclsolve::harness::{
    emit_plotdata, presets, run_experiment, verify_preset, ExperimentConfig,
};
use inclsolve::instrumentation::Trace;
use inclsolve::problem_zoo;
use inclsolve::Error;

#[derive(Parser)]
#[command(name = "inclsolve", about = "Extragradient-family solvers with convergence certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)] // single short-lived CLI value
enum Command {
    /// Run one experiment and optionally write its metrics to CSV.
    Run(RunArgs),
    /// List the problem registry.
    ListProblems,
    /// List the preset registry.
    ListPresets,
    /// Run one preset with certificate checking and report the verdict.
    Verify {
        /// Preset identifier (see `list-presets`).
        #[arg(long)]
        preset: String,
    },
}

#[derive(clap::Args)]
struct RunArgs {
    /// JSON manifest with ExperimentConfig fields; CLI flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Problem identifier (see `list-problems`).
    #[arg(long)]
    problem: Option<String>,
    /// Method tag: fw, fbs, eg, peg, fbfs, past_fbfs, rfbs, gr, eag, feg,
    /// peag, aeg, apeg.
    #[arg(long)]
    method: Option<String>,
    /// Stepsize, or "auto" for the window midpoint rule.
    #[arg(long)]
    eta: Option<String>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    /// Number of iterations.
    #[arg(long)]
    iters: Option<usize>,
    /// Seed for the deterministic starting point.
    #[arg(long)]
    seed: Option<u64>,
    /// Evaluate all applicable convergence certificates.
    #[arg(long)]
    check: bool,
    /// Allow stepsizes outside the admissible window (disables checking).
    #[arg(long)]
    override_window: bool,
    /// Output CSV path for per-iteration metrics.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Optional long-format plot-data CSV path.
    #[arg(long)]
    plot_out: Option<PathBuf>,
}

fn exit_for(err: &Error) -> ExitCode {
    match err {
        Error::Numeric(_) => ExitCode::from(3),
        _ => ExitCode::from(2),
    }
}

fn report_and_code(trace: &Trace) -> ExitCode {
    let last = trace.rows.last().expect("trace has at least one row");
    println!(
        "{} / {}: {} iterations, res_norm {:.6e}, best {:.6e}",
        trace.meta.problem_id, trace.meta.method, trace.meta.iterations, last.res_norm, last.best_res
    );
    for note in &trace.not_applicable {
        println!("  not applicable: {note}");
    }
    if !trace.meta.checked {
        return ExitCode::SUCCESS;
    }
    let checked: Vec<_> = trace.certificates.iter().filter(|c| !c.informational).collect();
    println!("  certificates checked: {}", checked.len());
    if let Some(f) = trace.first_failure() {
        println!(
            "  FAIL {} at k={}: lhs {:.12e} > rhs {:.12e} (slack {:.3e})",
            f.kind.as_str(),
            f.k,
            f.lhs,
            f.rhs,
            f.slack
        );
        ExitCode::from(1)
    } else {
        println!("  all certificates pass");
        ExitCode::SUCCESS
    }
}

fn cmd_run(args: RunArgs) -> ExitCode {
    let mut cfg = match &args.config {
        Some(path) => match ExperimentConfig::from_json_file(path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {e}");
                return exit_for(&e);
            }
        },
        None => ExperimentConfig::default(),
    };
    if let Some(p) = args.problem {
        cfg.problem_id = p;
    }
    if let Some(m) = args.method {
        cfg.method = m;
    }
    if let Some(e) = args.eta {
        if e == "auto" {
            cfg.eta = None;
        } else {
            match e.parse::<f64>() {
                Ok(v) => cfg.eta = Some(v),
                Err(_) => {
                    eprintln!("error: --eta must be a number or \"auto\", got \"{e}\"");
                    return ExitCode::from(2);
                }
            }
        }
    }
    if args.beta.is_some() {
        cfg.beta = args.beta;
    }
    if args.omega.is_some() {
        cfg.omega = args.omega;
    }
    if args.gamma.is_some() {
        cfg.gamma = args.gamma;
    }
    if args.rho.is_some() {
        cfg.rho = args.rho;
    }
    if let Some(n) = args.iters {
        cfg.iterations = n;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    cfg.check_theorems |= args.check;
    cfg.override_window |= args.override_window;
    if let Some(out) = &args.out {
        cfg.output_path = out.to_string_lossy().into_owned();
    }
    if cfg.problem_id.is_empty() {
        eprintln!("error: --problem (or a config file) is required");
        return ExitCode::from(2);
    }
    match run_experiment(&cfg) {
        Ok(trace) => {
            if let Some(plot) = &args.plot_out {
                if let Err(e) = emit_plotdata(std::slice::from_ref(&trace), plot) {
                    eprintln!("error: {e}");
                    return exit_for(&e);
                }
            }
            report_and_code(&trace)
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_for(&e)
        }
    }
}

fn cmd_list_problems() -> ExitCode {
    println!("{:<16} {:>4} {:>8} {:>8} {:>8}  description", "id", "dim", "L", "mu", "rho");
    for (id, description) in problem_zoo::list() {
        let p = problem_zoo::lookup(&id).expect("registry ids resolve");
        println!(
            "{:<16} {:>4} {:>8} {:>8} {:>8}  {}",
            id, p.dim, p.l, p.mu, p.rho, description
        );
    }
    ExitCode::SUCCESS
}

fn cmd_list_presets() -> ExitCode {
    println!("{:<20} {:<16} {:<10}  description", "id", "problem", "method");
    for p in presets() {
        println!("{:<20} {:<16} {:<10}  {}", p.id, p.problem_id, p.method.as_str(), p.description);
    }
    ExitCode::SUCCESS
}

fn cmd_verify(preset: &str) -> ExitCode {
    match verify_preset(preset) {
        Ok(trace) => {
            println!("preset {preset}:");
            report_and_code(&trace)
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_for(&e)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::ListProblems => cmd_list_problems(),
        Command::ListPresets => cmd_list_presets(),
        Command::Verify { preset } => cmd_verify(&preset),
    }
}
