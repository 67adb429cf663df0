//! Command-line front end: single-shot simulation, parameter sweeps and the
//! solver/invariant verification suite.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use hetnet_cs::experiments::{
    emit_csv, run_method, run_sweep, run_verification, Method, SweepSpec, SweepVariable,
};
use hetnet_cs::metrics::evaluate;
use hetnet_cs::scenario::{build_scenario, ChannelSnapshot, ScenarioConfig};
use hetnet_cs::{all_on, Scenario};

/// Environment variable naming the default scenario config file.
const CONFIG_ENV: &str = "HETNET_CS_CONFIG";

#[derive(Parser)]
#[command(
    name = "hetnet-cs",
    about = "Cell-switching power optimization for heterogeneous networks",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one switching method on one scenario and print its scorecard.
    Simulate(SimulateArgs),
    /// Sweep a parameter grid over methods and seeds, writing CSV.
    Sweep(SweepArgs),
    /// Run the solver-vs-oracle and invariant checks.
    Verify,
}

#[derive(Args)]
struct SimulateArgs {
    /// Switching method: all-on, sorting, no-qos or proposed.
    #[arg(long, default_value = "proposed")]
    method: Method,
    /// Traffic scale in (0, 1].
    #[arg(long)]
    alpha: Option<f64>,
    /// QoS threshold, dBm.
    #[arg(long, allow_negative_numbers = true)]
    pmin: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    users_per_sbs: Option<usize>,
    /// Scenario config file (JSON); falls back to $HETNET_CS_CONFIG.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Number of channel re-draws to evaluate.
    #[arg(long, default_value_t = 1)]
    steps: u64,
}

#[derive(Args)]
struct SweepArgs {
    /// Swept parameter: alpha or pmin.
    #[arg(long)]
    var: SweepVariable,
    /// Comma-separated, strictly increasing grid values.
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    grid: Vec<f64>,
    /// Comma-separated method list; defaults to all four.
    #[arg(long, value_delimiter = ',')]
    methods: Vec<Method>,
    /// Number of seeds (0..n-1).
    #[arg(long, default_value_t = 20)]
    seeds: u64,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    config: Option<PathBuf>,
}

fn load_config(path: &Option<PathBuf>) -> Result<ScenarioConfig> {
    let resolved = match path {
        Some(p) => Some(p.clone()),
        None => std::env::var_os(CONFIG_ENV).map(PathBuf::from),
    };
    match resolved {
        Some(p) => {
            let text = std::fs::read_to_string(&p)
                .with_context(|| format!("reading config {}", p.display()))?;
            serde_json::from_str(&text)
                .with_context(|| format!("parsing config {}", p.display()))
        }
        None => Ok(ScenarioConfig::default()),
    }
}

fn simulate(args: &SimulateArgs) -> Result<()> {
    let mut cfg = load_config(&args.config)?;
    if let Some(alpha) = args.alpha {
        cfg.alpha = alpha;
    }
    if let Some(pmin) = args.pmin {
        cfg.p_min_dbm = pmin;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(users) = args.users_per_sbs {
        cfg.users_per_sbs = users;
    }
    if args.steps == 0 {
        bail!("--steps must be at least 1");
    }

    let scenario: Scenario = build_scenario(&cfg)?;
    let reference = all_on(&scenario).total_power_w;
    println!(
        "scenario: {} cells, {} users, alpha={}, pmin={} dBm, seed={}",
        scenario.sbs_count(),
        scenario.users.len(),
        scenario.traffic.alpha,
        scenario.p_min_dbm,
        scenario.seed
    );

    for step in 0..args.steps {
        let snapshot = ChannelSnapshot::draw(&scenario, step)?;
        let decision = run_method(args.method, &scenario, &snapshot)?;
        let report = evaluate(&scenario, &decision, reference);
        println!(
            "step {step}: method={} power={:.2} W (all-on {:.2} W, savings {:.2}%) \
             served={:.3}/{:.3} outages={} lambda_m={:.4} cells_off={}/{}",
            args.method,
            report.total_power_w,
            reference,
            report.savings_vs_all_on_pct,
            report.served_traffic_qos,
            report.offered_traffic,
            report.outage_count,
            report.lambda_m,
            decision.off_count(),
            scenario.sbs_count()
        );
    }
    Ok(())
}

fn sweep(args: &SweepArgs) -> Result<()> {
    let base = load_config(&args.config)?;
    let methods = if args.methods.is_empty() {
        Method::ALL.to_vec()
    } else {
        args.methods.clone()
    };
    if args.seeds == 0 {
        bail!("--seeds must be at least 1");
    }
    let spec = SweepSpec {
        variable: args.var,
        grid: args.grid.clone(),
        methods,
        seeds: (0..args.seeds).collect(),
        base,
    };
    let table = run_sweep(&spec)?;
    emit_csv(&table, &args.out)?;
    println!(
        "wrote {} rows to {} ({} grid points, {} seeds)",
        table.rows.len(),
        args.out.display(),
        spec.grid.len(),
        spec.seeds.len()
    );
    Ok(())
}

fn verify() -> ExitCode {
    let report = run_verification();
    for check in &report.checks {
        let status = if check.passed { "ok  " } else { "FAIL" };
        println!("{status} {:<24} {}", check.name, check.detail);
    }
    if report.passed() {
        println!("all checks passed");
        ExitCode::SUCCESS
    } else {
        eprintln!("verification failed");
        ExitCode::FAILURE
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate(args) => simulate(args),
        Command::Sweep(args) => sweep(args),
        Command::Verify => return verify(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
