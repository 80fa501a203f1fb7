//! `nct`: batch driver for the verification suites.

mod config;
mod report;
mod star;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nct::torus::Torus;
use serde_json::json;

use config::{parse_config, RunConfig, SUITES};
use report::{summary, Report};
use suites::{default_budget, run_suite, RunParams, SuiteInput};

#[derive(Parser)]
#[command(name = "nct", version, about = "Exact checks for quantized complex tori and their duals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites on a configuration file.
    Run {
        config: PathBuf,
        /// Suites to run (default: the config's `checks`).
        #[arg(long = "suite", value_name = "NAME")]
        suites: Vec<String>,
        /// Window radius; overrides NCT_WINDOW and the config.
        #[arg(long)]
        window: Option<i64>,
        /// Truncation order N (terms below h^N are kept).
        #[arg(long)]
        order: Option<usize>,
        /// Write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include wall times (the report is then no longer reproducible).
        #[arg(long)]
        timings: bool,
        /// Enumerate every window tuple even when that is expensive.
        #[arg(long)]
        full_window: bool,
    },
    /// Star product of two expressions, checked against the Taylor oracle.
    Star {
        lhs: String,
        rhs: String,
        /// Slots `NAME:vars:kind` separated by `;`; kind is comm, pi=M or opp=M.
        #[arg(long)]
        slots: String,
        #[arg(long, default_value_t = 4)]
        order: usize,
    },
    /// Print the dual lattice basis and B-field of a configuration.
    DualLattice { config: PathBuf },
}

fn load(path: &PathBuf) -> Result<RunConfig, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_config(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn config_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn window_from_env() -> Result<Option<i64>, String> {
    match std::env::var("NCT_WINDOW") {
        Ok(v) => v.trim().parse::<i64>().map(Some).map_err(|_| format!("NCT_WINDOW: `{v}` is not an integer")),
        Err(_) => Ok(None),
    }
}

#[allow(clippy::too_many_arguments)]
fn run(
    path: &PathBuf,
    suites: Vec<String>,
    window: Option<i64>,
    order: Option<usize>,
    out: Option<PathBuf>,
    timings: bool,
    full_window: bool,
) -> ExitCode {
    let mut cfg = match load(path) {
        Ok(c) => c,
        Err(e) => return config_error(&e),
    };
    if let Some(bad) = suites.iter().find(|s| !SUITES.contains(&s.as_str())) {
        return config_error(&format!("unknown suite `{bad}`; known: {}", SUITES.join(", ")));
    }
    if !suites.is_empty() {
        cfg.checks = suites;
    }
    let env = match window_from_env() {
        Ok(w) => w,
        Err(e) => return config_error(&e),
    };
    if let Some(w) = window.or(env) {
        cfg.window = w;
    }
    if cfg.window < 0 {
        return config_error("window radius must be nonnegative");
    }
    if let Some(n) = order {
        if n < 2 {
            return config_error("truncation order must be at least 2");
        }
        cfg.torus.order = n;
    }
    let torus = match Torus::new(cfg.torus.clone()) {
        Ok(t) => t,
        Err(e) => return config_error(&e.to_string()),
    };
    let params =
        RunParams { window: cfg.window, budget: if full_window { u128::MAX } else { default_budget(torus.g()) } };
    let input = SuiteInput { cfg: &cfg, torus: &torus, params };
    let mut report = Report {
        config: cfg.name.clone(),
        g: torus.g(),
        order: torus.order(),
        window: cfg.window,
        records: Vec::new(),
    };
    let mut names = cfg.checks.clone();
    names.dedup();
    for name in &names {
        report.records.extend(run_suite(name, &input));
    }
    report.sort();
    let json = report.to_json(timings);
    if let Some(p) = out {
        let text = serde_json::to_string_pretty(&json).expect("report serializes") + "\n";
        if let Err(e) = std::fs::write(&p, text) {
            eprintln!("error: {}: {e}", p.display());
            return ExitCode::from(2);
        }
    }
    print!("{}", summary(&json));
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn dual_lattice(path: &PathBuf) -> ExitCode {
    let cfg = match load(path) {
        Ok(c) => c,
        Err(e) => return config_error(&e),
    };
    let torus = match Torus::new(cfg.torus) {
        Ok(t) => t,
        Err(e) => return config_error(&e.to_string()),
    };
    let show = |m: &[Vec<nct::coeff::GRat>]| -> Vec<Vec<String>> {
        m.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
    };
    let out = json!({
        "dual_basis": show(&torus.dual.vectors),
        "bfield": show(&torus.bform.matrix),
    });
    println!("{}", serde_json::to_string_pretty(&out).expect("serializes"));
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, suites, window, order, out, timings, full_window } => {
            run(&config, suites, window, order, out, timings, full_window)
        }
        Command::Star { lhs, rhs, slots, order } => match star::star_repl(&lhs, &rhs, &slots, order) {
            Ok(o) => {
                println!("{}", o.product);
                println!("oracle {}", if o.oracle_ok { "OK" } else { "MISMATCH" });
                if o.oracle_ok {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                }
            }
            Err(e) => config_error(&e),
        },
        Command::DualLattice { config } => dual_lattice(&config),
    }
}
