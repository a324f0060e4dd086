use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use msface::formats::tables;
use msface::harness::{run_grid, write_report, Artifact, Report};
use msface::{generate_synthetic, scan_dataset, ExperimentConfig, Harness, Overrides};

/// Multispectral face identification experiments.
#[derive(Debug, Parser)]
#[command(name = "msface", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic dataset under `root`.
    Synth(Common),
    /// Catalog `root` and report missing captures.
    Scan(Common),
    /// Write per-sensor distance tables and truth labels for one split.
    Extract(Common),
    /// Identification rate against the window size.
    Sweep(Common),
    /// Single-sensor illumination mismatch matrix.
    Mismatch(Common),
    /// Two- and three-sensor fusion matrix.
    Fuse(Common),
    /// Weight search over distance tables given by `tables` and `truth`.
    Grid(Common),
}

#[derive(Debug, clap::Args)]
struct Common {
    /// Config file of `key = value` lines.
    #[arg(long, short = 'c', value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(flatten)]
    overrides: Overrides,
}

impl Common {
    fn load(&self) -> msface::Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_file(path)?,
            None => ExperimentConfig::default(),
        };
        cfg.apply_overrides(&self.overrides)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn print_rows(report: &Report) {
    for r in &report.rows {
        let rate = r.rate.map_or("NA".to_string(), |x| x.to_string());
        println!(
            "{:<12} norm={:<3} {}->{} S{} k={:<5} {:<7} {}",
            r.sensor_label(),
            if r.normalized { "YES" } else { "NO" },
            r.train_illumination,
            r.test_illumination,
            r.test_session,
            r.coefficients,
            r.rule.name(),
            rate
        );
    }
}

fn experiment(c: &Common, name: &str, op: fn(&Harness) -> msface::Result<Report>) -> msface::Result<()> {
    let cfg = c.load()?;
    let harness = Harness::open(cfg.clone())?;
    let report = op(&harness)?;
    write_report(&cfg.out, name, &cfg, &report)?;
    print_rows(&report);
    Ok(())
}

fn run(cli: Cli) -> msface::Result<()> {
    match cli.command {
        Command::Synth(c) => {
            let cfg = c.load()?;
            let catalog = generate_synthetic(&cfg.synth_params()?, &cfg.root)?;
            println!("wrote {} captures under {}", catalog.len(), cfg.root.display());
        }
        Command::Scan(c) => {
            let cfg = c.load()?;
            let catalog = scan_dataset(&cfg.root, cfg.strict)?;
            let missing: String = catalog.missing().iter().map(|k| format!("{k}\n")).collect();
            let report = Report {
                artifacts: vec![
                    Artifact { name: "catalog.csv".into(), bytes: tables::catalog_csv(&catalog).into_bytes() },
                    Artifact { name: "missing.txt".into(), bytes: missing.into_bytes() },
                ],
                ..Default::default()
            };
            write_report(&cfg.out, "scan", &cfg, &report)?;
            println!(
                "{} captures, {} persons, {} missing{}",
                catalog.len(),
                catalog.person_count(),
                catalog.missing().len(),
                if catalog.is_complete() { " (complete)" } else { "" }
            );
        }
        Command::Grid(c) => {
            let cfg = c.load()?;
            let (result, report) = run_grid(&cfg)?;
            write_report(&cfg.out, "grid", &cfg, &report)?;
            let beta = result.best_beta().map_or(String::new(), |b| format!(" beta={b}"));
            println!(
                "best alpha={}{beta} rate={} in_simplex={} [{}]",
                result.best_alpha(),
                result.best_rate(),
                result.best_in_simplex(),
                tables::DIAGNOSTIC_LABEL
            );
        }
        Command::Extract(c) => experiment(&c, "extract", Harness::extract)?,
        Command::Sweep(c) => experiment(&c, "sweep", Harness::sweep_window_sizes)?,
        Command::Mismatch(c) => experiment(&c, "mismatch", Harness::run_mismatch_matrix)?,
        Command::Fuse(c) => experiment(&c, "fuse", Harness::run_fusion_matrix)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
