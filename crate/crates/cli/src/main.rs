use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qflow_cli::config::{ExperimentConfig, FlowSelector};
use qflow_cli::output::{
    resolve_out_dir, write_checkpoint, write_json, write_trajectory_csv,
};
use qflow_cli::suites::{find_suite, SuiteReport, SUITE_TABLE};
use qflow_core::heatflow::{run_flow, ProximalConfig};
use qflow_core::jko::{run_jko, JkoConfig};
use qflow_core::space::{build_space, Exponents};
use qflow_core::transport::ProbabilityVector;

/// Numerical laboratory for q-heat flows and entropy gradient flows on
/// finite weighted graphs.
#[derive(Parser)]
#[command(name = "qflow", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured flows and suites, writing trajectory CSVs and
    /// report JSONs
    Run(RunArgs),
    /// Run named verification suites
    Verify(VerifyArgs),
    /// List the verification suites and what each one checks
    ListSuites,
    /// Emit a space description JSON
    Space(SpaceArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML config file; flags below override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    /// space spec, e.g. path:32, grid2d:5x5, unit:64, file:space.json
    #[arg(long)]
    space: Option<String>,
    #[arg(long)]
    p: Option<f64>,
    /// heat | jko | both
    #[arg(long)]
    flow: Option<FlowSelector>,
    #[arg(long = "T")]
    t_final: Option<f64>,
    /// comma-separated strictly decreasing step sweep, e.g. 1e-2,5e-3
    #[arg(long, value_delimiter = ',')]
    tau: Option<Vec<f64>>,
    /// uniform | bump | spike | two-bumps | file:PATH
    #[arg(long)]
    initial: Option<String>,
    /// suites to run after the flows (repeatable)
    #[arg(long = "suite")]
    suites: Vec<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct VerifyArgs {
    /// suite name, or "all" (repeatable)
    #[arg(long = "suite", default_value = "all")]
    suites: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// also write the suite reports as JSON into this directory
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SpaceArgs {
    /// space spec, e.g. path:32, cycle:8, grid2d:5x5, unit:64
    #[arg(long)]
    kind: String,
    /// output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run(args) => run_command(args),
        Command::Verify(args) => verify_command(args),
        Command::ListSuites => {
            for suite in SUITE_TABLE {
                println!("{} -> {}", suite.name, suite.verifies);
            }
            ExitCode::SUCCESS
        }
        Command::Space(args) => space_command(args),
    }
}

const EXIT_CONTRACT_FAILURE: u8 = 1;
const EXIT_CONFIG_ERROR: u8 = 2;

fn config_error(message: &str) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(EXIT_CONFIG_ERROR)
}

fn resolve_config(args: &RunArgs) -> Result<ExperimentConfig, String> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::from_toml_file(path)?,
        None => ExperimentConfig {
            space: "unit:32".into(),
            p: 2.5,
            flow: FlowSelector::Both,
            t_final: 0.1,
            tau: vec![1e-2],
            initial: "bump".into(),
            weight: None,
            suites: vec![],
            out_dir: None,
            seed: 0,
        },
    };
    if let Some(space) = &args.space {
        cfg.space = space.clone();
    }
    if let Some(p) = args.p {
        cfg.p = p;
    }
    if let Some(flow) = args.flow {
        cfg.flow = flow;
    }
    if let Some(t) = args.t_final {
        cfg.t_final = t;
    }
    if let Some(tau) = &args.tau {
        cfg.tau = tau.clone();
    }
    if let Some(initial) = &args.initial {
        cfg.initial = initial.clone();
    }
    if !args.suites.is_empty() {
        cfg.suites = args.suites.clone();
    }
    if let Some(out) = &args.out {
        cfg.out_dir = Some(out.clone());
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run_command(args: RunArgs) -> ExitCode {
    let cfg = match resolve_config(&args) {
        Ok(cfg) => cfg,
        Err(e) => return config_error(&e),
    };
    let out_dir = resolve_out_dir(None, cfg.out_dir.as_deref());
    if let Err(e) = std::fs::create_dir_all(&out_dir) {
        return config_error(&format!("cannot create {}: {e}", out_dir.display()));
    }

    let space = match cfg.build_space() {
        Ok(s) => s,
        Err(e) => return config_error(&e),
    };
    let f0 = match cfg.build_initial(&space) {
        Ok(f) => f,
        Err(e) => return config_error(&e),
    };
    let weight = cfg.build_weight(&space);
    let exps = match Exponents::new(cfg.p) {
        Ok(e) => e,
        Err(e) => return config_error(&e.to_string()),
    };

    // residual tolerance scaled to the initial operator magnitude so fine
    // grids and coarse graphs get comparable relative accuracy
    let lap0 = qflow_core::calculus::q_laplacian(&f0, exps.q);
    let prox_tol = 1e-10 * (1.0 + lap0.inner_mu(&lap0).sqrt());

    let mut all_passed = true;
    for &tau in &cfg.tau {
        let tag = format!("tau{tau:e}");
        if matches!(cfg.flow, FlowSelector::Heat | FlowSelector::Both) {
            let prox = ProximalConfig::new(tau).with_tol(prox_tol);
            match run_flow(&f0, cfg.t_final, &prox, &exps, weight.as_ref()) {
                Ok(traj) => {
                    let csv = out_dir.join(format!("heat-{tag}.csv"));
                    let ckpt = out_dir.join(format!("heat-{tag}.states.json"));
                    if write_trajectory_csv(&csv, &traj).is_err()
                        || write_checkpoint(&ckpt, &traj).is_err()
                    {
                        return config_error("cannot write trajectory outputs");
                    }
                    println!("heat {tag}: {} steps -> {}", traj.len() - 1, csv.display());
                }
                Err(e) => {
                    eprintln!("heat {tag} failed: {e}");
                    all_passed = false;
                }
            }
        }
        if matches!(cfg.flow, FlowSelector::Jko | FlowSelector::Both) {
            if (cfg.p - 2.0).abs() < 1e-9 {
                eprintln!("jko {tag} skipped: the entropy functional needs p != 2");
                all_passed = false;
            } else {
                let jko_cfg = JkoConfig::new(tau, cfg.p);
                let mu0 = match ProbabilityVector::from_density(&f0) {
                    Ok(m) => m,
                    Err(e) => return config_error(&e.to_string()),
                };
                match run_jko(&mu0, cfg.t_final, &jko_cfg) {
                    Ok(run) => {
                        let csv = out_dir.join(format!("jko-{tag}.csv"));
                        if write_trajectory_csv(&csv, &run.trajectory).is_err()
                            || write_json(
                                &out_dir.join(format!("jko-{tag}.ledger.json")),
                                &run.ledger,
                            )
                            .is_err()
                        {
                            return config_error("cannot write trajectory outputs");
                        }
                        println!(
                            "jko {tag}: {} steps, entropy drop {:.6e} -> {}",
                            run.trajectory.len() - 1,
                            run.ledger.entropy_drop(),
                            csv.display()
                        );
                    }
                    Err(e) => {
                        eprintln!("jko {tag} failed: {e}");
                        all_passed = false;
                    }
                }
            }
        }
    }

    let mut summary = Vec::new();
    for name in &cfg.suites {
        let Some(suite) = find_suite(name) else {
            return config_error(&format!("unknown suite '{name}'"));
        };
        let report = (suite.run)(cfg.seed);
        print_suite(&report);
        if !report.passed() {
            all_passed = false;
        }
        if write_json(&out_dir.join(format!("suite-{name}.json")), &report).is_err() {
            return config_error("cannot write suite report");
        }
        summary.push(report);
    }
    let _ = write_json(
        &out_dir.join("summary.json"),
        &serde_json::json!({
            "config": cfg,
            "suites_passed": summary.iter().map(|r| (r.suite, r.passed())).collect::<Vec<_>>(),
            "all_passed": all_passed,
        }),
    );

    if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_CONTRACT_FAILURE)
    }
}

fn print_suite(report: &SuiteReport) {
    for check in &report.checks {
        println!(
            "[{}] {}/{}: observed {:.6e} vs threshold {:.6e} ({})",
            if check.passed { "PASS" } else { "FAIL" },
            report.suite,
            check.name,
            check.observed,
            check.threshold,
            check.detail
        );
    }
}

fn verify_command(args: VerifyArgs) -> ExitCode {
    let selected: Vec<&qflow_cli::suites::Suite> = if args.suites.iter().any(|s| s == "all") {
        SUITE_TABLE.iter().collect()
    } else {
        let mut out = Vec::new();
        for name in &args.suites {
            match find_suite(name) {
                Some(s) => out.push(s),
                None => return config_error(&format!("unknown suite '{name}'")),
            }
        }
        out
    };

    if let Some(dir) = &args.out {
        if let Err(e) = std::fs::create_dir_all(dir) {
            return config_error(&format!("cannot create {}: {e}", dir.display()));
        }
    }

    let mut all_passed = true;
    for suite in selected {
        let report = (suite.run)(args.seed);
        print_suite(&report);
        if let Some(dir) = &args.out {
            if write_json(&dir.join(format!("suite-{}.json", suite.name)), &report).is_err() {
                return config_error("cannot write suite report");
            }
        }
        if !report.passed() {
            all_passed = false;
        }
    }
    if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_CONTRACT_FAILURE)
    }
}

fn space_command(args: SpaceArgs) -> ExitCode {
    let spec = match qflow_cli::config::parse_space_spec(&args.kind) {
        Ok(s) => s,
        Err(e) => return config_error(&e),
    };
    let space = match build_space(&spec) {
        Ok(s) => s,
        Err(e) => return config_error(&e.to_string()),
    };
    let text = serde_json::to_string_pretty(&space.to_description()).expect("serializes");
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                return config_error(&format!("cannot write {}: {e}", path.display()));
            }
            println!("wrote {}", path.display());
        }
        None => println!("{text}"),
    }
    ExitCode::SUCCESS
}
