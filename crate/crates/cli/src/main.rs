//! Benchmark CLI: coefficient tables, dispersion curves, comparison runs,
//! epsilon sweeps, rate fits and the velocity-reconstruction probe.
//!
//! Exit codes: 0 success, 2 config error, 3 blow-up in the reference run,
//! 4 elliptic non-convergence, 1 anything else.

use anyhow::Context;
use clap::{Parser, Subcommand};
use intwave_core::error::Error as CoreError;
use intwave_core::gn::{dispersion_omega, shear_instability_threshold, shear_system_stability, ShearMode};
use intwave_core::harness::{
    csv_to_dat, parse_sweep_csv, run_comparison, run_ztov_probe, series_to_csv, sweep_epsilon,
    sweep_to_csv, ExperimentConfig,
};
use intwave_core::params::{
    base_coeffs, critical_defect, decoupled_coeffs, reconstruction_coeffs, unidirectional_coeffs,
};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "intwave",
    version,
    about = "Two-layer internal-wave models: reference solver, scalar approximations, error benchmarks"
)]
struct Cli {
    /// TOML config file; every key is optional (see --seed-config)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Print a commented config template and exit
    #[arg(long)]
    seed_config: bool,

    /// Output directory for emitted files
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    /// Also emit gnuplot-ready .dat files next to the CSVs
    #[arg(long, global = true)]
    dat: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the coefficient tables for the configured parameters
    Coeffs,
    /// Emit omega(k) curves and the ill-posed-system instability threshold
    Dispersion,
    /// One comparison run; emits an error time series
    Run,
    /// Epsilon sweep; emits checkpoint errors and fitted slopes
    Sweep,
    /// Fit convergence slopes from a previously written sweep CSV
    Rates {
        /// Path to the sweep CSV
        file: PathBuf,
    },
    /// Velocity-reconstruction probe on the reference run
    Ztov,
}

fn load_config(path: &Option<PathBuf>) -> anyhow::Result<ExperimentConfig> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .with_context(|| format!("reading config {}", p.display()))?;
            Ok(ExperimentConfig::from_toml(&text)?)
        }
        None => Ok(ExperimentConfig::default()),
    }
}

fn write_outputs(
    out_dir: &Path,
    stem: &str,
    csv: &str,
    sidecar: &serde_json::Value,
    dat: bool,
) -> anyhow::Result<()> {
    std::fs::create_dir_all(out_dir)?;
    let csv_path = out_dir.join(format!("{stem}.csv"));
    std::fs::write(&csv_path, csv)?;
    let json_path = out_dir.join(format!("{stem}.json"));
    std::fs::write(&json_path, format!("{:#}\n", sidecar))?;
    if dat {
        std::fs::write(out_dir.join(format!("{stem}.dat")), csv_to_dat(csv))?;
    }
    println!("wrote {}", csv_path.display());
    println!("wrote {}", json_path.display());
    Ok(())
}

fn provenance(cfg: &ExperimentConfig) -> serde_json::Value {
    serde_json::json!({
        "package": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "config": cfg,
    })
}

fn cmd_coeffs(cfg: &ExperimentConfig) -> anyhow::Result<()> {
    let p = cfg.params_for(cfg.regime.epsilon)?;
    println!(
        "parameters: epsilon = {}, mu = {}, gamma = {}, delta = {}, theta = {}, lambda = {}",
        p.epsilon, p.mu, p.gamma, p.delta, p.theta, p.lambda
    );
    println!("critical defect delta^2 - gamma = {:.17}", critical_defect(&p));
    let b = base_coeffs(&p);
    println!("\nbase (coupled-system) coefficients:");
    println!("  alpha1 = {:.17}", b.alpha1);
    println!("  alpha2 = {:.17}", b.alpha2);
    println!("  alpha3 = {:.17}", b.alpha3);
    println!("  nu     = {:.17}", b.nu);
    println!("  kappa1 = {:.17}", b.kappa1);
    println!("  kappa2 = {:.17}", b.kappa2);
    println!("  kappa3 = {:.17}", b.kappa3);
    let print_scalar = |name: &str, c: intwave_core::params::ScalarCoeffs| {
        println!("\n{name}:");
        println!("  beta (nu_t) = {:.17}", c.beta);
        println!("  alpha1      = {:.17}", c.alpha1);
        println!("  alpha2      = {:.17}", c.alpha2);
        println!("  alpha3      = {:.17}", c.alpha3);
        println!("  nu (nu_x)   = {:.17}", c.nu);
        println!("  kappa1      = {:.17}", c.kappa1);
        println!("  kappa2      = {:.17}", c.kappa2);
        println!("  direction   = {:+}", c.direction);
    };
    print_scalar("decoupled right-going", decoupled_coeffs(&p, 1.0));
    print_scalar("decoupled left-going", decoupled_coeffs(&p, -1.0));
    print_scalar("unidirectional", unidirectional_coeffs(&p));
    print_scalar("reconstruction (weights pinned to 0)", reconstruction_coeffs(&p));
    Ok(())
}

fn cmd_dispersion(cfg: &ExperimentConfig, out: &Path, dat: bool) -> anyhow::Result<()> {
    let p = cfg.params_for(cfg.regime.epsilon)?;
    let k_max = std::f64::consts::PI / cfg.grid.dx;
    let mut csv = String::from("k,omega_mean_velocity,omega_shear,shear_growth_rate\n");
    let samples = 400;
    for i in 0..=samples {
        let k = k_max * i as f64 / samples as f64;
        let omega = dispersion_omega(k, &p);
        let (shear_re, shear_growth) = match shear_system_stability(k, &p) {
            ShearMode::Real(w) => (format!("{w:.16e}"), String::new()),
            ShearMode::Unstable { growth_rate } => (String::new(), format!("{growth_rate:.16e}")),
        };
        csv.push_str(&format!("{k:.16e},{omega:.16e},{shear_re},{shear_growth}\n"));
    }
    let threshold = shear_instability_threshold(&p);
    println!("shear-velocity system ill-posed above k = {threshold:.6}");
    let sidecar = serde_json::json!({
        "provenance": provenance(cfg),
        "instability_threshold_k": threshold,
    });
    write_outputs(out, "dispersion", &csv, &sidecar, dat)
}

fn cmd_run(cfg: &ExperimentConfig, out: &Path, dat: bool) -> anyhow::Result<()> {
    let series = run_comparison(cfg)?;
    let csv = series_to_csv(&series);
    let sidecar = serde_json::json!({
        "provenance": provenance(cfg),
        "meta": series.meta,
    });
    write_outputs(out, "run", &csv, &sidecar, dat)
}

fn cmd_sweep(cfg: &ExperimentConfig, out: &Path, dat: bool) -> anyhow::Result<()> {
    let table = sweep_epsilon(cfg)?;
    let csv = sweep_to_csv(&table);
    for fit in &table.slopes {
        println!(
            "slope[{} @ {}] = {:.4} +- {:.4} ({} points)",
            fit.model, fit.tag, fit.slope, fit.stderr, fit.points
        );
    }
    for (eps, msg) in &table.failures {
        eprintln!("run at epsilon = {eps} failed: {msg}");
    }
    let sidecar = serde_json::json!({
        "provenance": provenance(cfg),
        "table": table,
    });
    write_outputs(out, "sweep", &csv, &sidecar, dat)
}

fn cmd_rates(file: &Path) -> anyhow::Result<()> {
    let text = std::fs::read_to_string(file)
        .with_context(|| format!("reading sweep CSV {}", file.display()))?;
    let rows = parse_sweep_csv(&text)?;
    let mut keys: Vec<(String, String)> = rows
        .iter()
        .map(|r| (r.1.clone(), r.4.clone()))
        .filter(|(_, tag)| !tag.is_empty())
        .collect();
    keys.sort();
    keys.dedup();
    for (model, tag) in keys {
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.1 == model && r.4 == tag && r.2 > 0.0)
            .map(|r| (r.0, r.2))
            .collect();
        if pts.len() < 2 {
            continue;
        }
        let (slope, stderr) = intwave_core::harness::convergence_rate(&pts)?;
        println!("slope[{model} @ {tag}] = {slope:.4} +- {stderr:.4} ({} points)", pts.len());
    }
    Ok(())
}

fn cmd_ztov(cfg: &ExperimentConfig, out: &Path, dat: bool) -> anyhow::Result<()> {
    let series = run_ztov_probe(cfg)?;
    let csv = series_to_csv(&series);
    let sidecar = serde_json::json!({
        "provenance": provenance(cfg),
        "meta": series.meta,
    });
    write_outputs(out, "ztov", &csv, &sidecar, dat)
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<CoreError>() {
        Some(CoreError::Config(_)) | Some(CoreError::InvalidParameter(_)) => 2,
        // a depth-floor violation is the reference run physically breaking
        // down, reported like a blow-up
        Some(CoreError::BlowUp { .. }) | Some(CoreError::DepthViolation { .. }) => 3,
        Some(CoreError::EllipticNonConvergence { .. }) => 4,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.seed_config {
        print!("{}", ExperimentConfig::template());
        return ExitCode::SUCCESS;
    }
    let run = || -> anyhow::Result<()> {
        let cfg = load_config(&cli.config)?;
        cfg.validate()?;
        match &cli.command {
            Some(Command::Coeffs) => cmd_coeffs(&cfg),
            Some(Command::Dispersion) => cmd_dispersion(&cfg, &cli.out, cli.dat),
            Some(Command::Run) => cmd_run(&cfg, &cli.out, cli.dat),
            Some(Command::Sweep) => cmd_sweep(&cfg, &cli.out, cli.dat),
            Some(Command::Rates { file }) => cmd_rates(file),
            Some(Command::Ztov) => cmd_ztov(&cfg, &cli.out, cli.dat),
            None => anyhow::bail!("missing subcommand; see --help"),
        }
    };
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
