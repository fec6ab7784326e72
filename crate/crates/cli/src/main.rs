mod artifacts;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand};
use normsim::sweeps::{
    distribution_settings, h_variance_report, kappa_output_contrast, run_sweep, similarity_csv, similarity_table,
    sweep_csv, variance_csv, SweepDimension, SweepSetting, SweepSpec, DEFAULT_SWEEP_REPLICATES,
};
use normsim::{run_matrix, run_replicates, Environment, Scenario, ScenarioConfig, ValueType};
use serde_json::json;

use artifacts::{Manifest, OutDir};
use config::RunConfig;

/// Environment variable naming the default output directory.
const OUT_DIR_ENV: &str = "NORMSIM_OUT_DIR";
const DEFAULT_OUT_DIR: &str = "normsim-out";
const DEFAULT_SEED: u64 = 42;
const DEFAULT_REPLICATES: usize = 50;

/// Exit status when runs completed but a diagnostic check failed.
const EXIT_DIAGNOSTICS: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "normsim", version, about = "Simulate norm-driven time allocation in a workforce")]
struct Cli {
    /// Base seed; replicate i uses seed + i.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Replicates per scenario (default 50; 15 for sweeps).
    #[arg(long, global = true)]
    replicates: Option<usize>,
    /// Output directory [default: $NORMSIM_OUT_DIR or ./normsim-out].
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// key=value configuration file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override one configuration key, e.g. `--set kappa=1`.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    overrides: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one scenario and write its metrics, plot data and manifest.
    Run {
        #[arg(long)]
        scenario: Option<String>,
        #[arg(long)]
        environment: Option<String>,
    },
    /// Run all nine scenarios in one or more environments.
    Matrix {
        #[arg(long, value_delimiter = ',')]
        environments: Vec<String>,
    },
    /// Sweep one parameter across all scenarios.
    Sweep {
        /// dist, h, kappa or environment.
        #[arg(long)]
        dim: String,
        /// Values of the swept parameter (h, kappa, environment).
        #[arg(long, value_delimiter = ',')]
        values: Vec<String>,
        /// Share of the dominant type in the skewed type mixes.
        #[arg(long, default_value_t = 0.7)]
        shares: f64,
        /// Restrict to these scenarios.
        #[arg(long, value_delimiter = ',')]
        scenarios: Vec<String>,
    },
    /// Compare aggregate output across the three norm environments.
    Similarity,
}

fn usage(msg: impl std::fmt::Display) -> ! {
    Cli::command().error(ErrorKind::InvalidValue, msg).exit()
}

fn parse_or_usage<T: std::str::FromStr>(s: &str) -> T
where
    T::Err: std::fmt::Display,
{
    s.parse().unwrap_or_else(|e| usage(e))
}

struct Setup {
    cfg: RunConfig,
    seed: u64,
    out: OutDir,
    started: f64,
}

impl Setup {
    fn new(cli: &Cli) -> Result<Self> {
        let started = artifacts::unix_now();
        let mut cfg = match &cli.config {
            Some(path) => RunConfig::load(path).unwrap_or_else(|e| usage(format!("{e:#}"))),
            None => RunConfig::default(),
        };
        cfg.apply_overrides(&cli.overrides).unwrap_or_else(|e| usage(format!("{e:#}")));
        if let Some(r) = cli.replicates {
            cfg.replicates = Some(r);
        }
        if cfg.replicates == Some(0) {
            usage("--replicates must be at least 1");
        }
        if let Err(e) = cfg.params.validate() {
            usage(e);
        }
        let seed = cli.seed.or(cfg.seed).unwrap_or(DEFAULT_SEED);
        let root = cli
            .out_dir
            .clone()
            .or_else(|| cfg.out_dir.clone())
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
        let out = OutDir::create(&root)?;
        Ok(Setup { cfg, seed, out, started })
    }

    fn replicates(&self, default: usize) -> usize {
        self.cfg.replicates.unwrap_or(default)
    }

    fn finish(
        mut self,
        command: &'static str,
        name: &str,
        replicates: usize,
        extra: serde_json::Value,
        ok: bool,
        err: f64,
    ) -> Result<bool> {
        let manifest = Manifest {
            command,
            started: self.started,
            seed: self.seed,
            replicates,
            params: self.cfg.params.clone(),
            extra,
            diagnostics_ok: ok,
            max_budget_error: err,
        };
        let name = format!("{name}_manifest.json");
        let mut listed = self.out.written().to_vec();
        listed.push(name.clone());
        self.out.write(&name, &manifest.to_json(&listed))?;
        if !ok {
            eprintln!("diagnostics failed: budget error {err:e} or norms out of bounds");
        }
        eprintln!("wrote {} files to {}", listed.len(), self.out.root().display());
        Ok(ok)
    }
}

fn max_error<'a>(sets: impl IntoIterator<Item = &'a normsim::ReplicateSet>) -> (bool, f64) {
    sets.into_iter().fold((true, 0.0f64), |(ok, err), s| {
        let e = s.replicates.iter().map(|r| r.max_budget_error).fold(0.0, f64::max);
        (ok && s.diagnostics_ok(), err.max(e))
    })
}

fn cmd_run(cli: &Cli, scenario: Option<&str>, environment: Option<&str>) -> Result<bool> {
    let mut s = Setup::new(cli)?;
    let scenario: Scenario = match scenario {
        Some(name) => parse_or_usage(name),
        None => s.cfg.scenario.unwrap_or_else(|| usage("no scenario given (use --scenario or `scenario =` in the config)")),
    };
    let env: Environment = match environment {
        Some(e) => parse_or_usage(e),
        None => s.cfg.environments[0],
    };
    let config = ScenarioConfig::new(scenario, env);
    let n = s.replicates(DEFAULT_REPLICATES);
    let set = run_replicates(config, &s.cfg.params, n, s.seed)?;
    let stem = artifacts::stem(&config);
    s.out.write(&format!("{stem}.csv"), &set.mean.to_csv())?;
    s.out.write(&format!("{stem}_plot_ogo.csv"), &artifacts::ogo_plot(&set.mean))?;
    s.out.write(&format!("{stem}_plot_times.csv"), &artifacts::times_plot(&set.mean))?;
    s.out.write(&format!("{stem}_plot_types.csv"), &artifacts::types_plot(&set.mean))?;
    s.out.write(&format!("{stem}_replicates.csv"), &artifacts::replicates_csv(&set))?;

    let m = &set.mean;
    println!(
        "{stem}: %OGO {:.2} -> {:.2}, aggregate output {:.2}, labor cost {:.2}",
        m.first().map_or(f64::NAN, |r| r.pct_ogo),
        m.last().map_or(f64::NAN, |r| r.pct_ogo),
        m.aggregate_output(),
        m.labor_cost()
    );
    let (ok, err) = max_error([&set]);
    let extra = json!({ "scenario": scenario.name(), "environment": env.name() });
    s.finish("run", &stem, n, extra, ok, err)
}

fn cmd_matrix(cli: &Cli, environments: &[String]) -> Result<bool> {
    let mut s = Setup::new(cli)?;
    let envs: Vec<Environment> = if environments.is_empty() {
        s.cfg.environments.clone()
    } else {
        environments.iter().map(|e| parse_or_usage(e)).collect()
    };
    let n = s.replicates(DEFAULT_REPLICATES);
    let sets = run_matrix(&s.cfg.params, &envs, n, s.seed)?;
    for (cfg, set) in &sets {
        s.out.write(&format!("{}.csv", artifacts::stem(cfg)), &set.mean.to_csv())?;
    }
    s.out.write("comparison.csv", &artifacts::comparison_csv(&sets))?;
    let summary = artifacts::summary_csv(&sets);
    s.out.write("summary.csv", &summary)?;
    if envs.len() > 1 {
        s.out.write("similarity.csv", &similarity_csv(&similarity_table(&sets)))?;
    }
    print!("{summary}");
    let (ok, err) = max_error(sets.values());
    let extra = json!({ "environments": envs.iter().map(|e| e.name()).collect::<Vec<_>>() });
    s.finish("matrix", "matrix", n, extra, ok, err)
}

fn sweep_settings(dim: SweepDimension, values: &[String], shares: f64) -> Vec<SweepSetting> {
    let floats = |default: &[f64]| -> Vec<f64> {
        if values.is_empty() {
            default.to_vec()
        } else {
            values.iter().map(|v| parse_or_usage(v)).collect()
        }
    };
    match dim {
        SweepDimension::Dist => distribution_settings(shares).unwrap_or_else(|e| usage(e)),
        SweepDimension::H => floats(&[0.1, 0.5, 1.0]).into_iter().map(SweepSetting::H).collect(),
        SweepDimension::Kappa => floats(&[0.0, 0.5, 1.0]).into_iter().map(SweepSetting::Kappa).collect(),
        SweepDimension::Environment => {
            if values.is_empty() {
                Environment::ALL.into_iter().map(SweepSetting::Environment).collect()
            } else {
                values.iter().map(|v| SweepSetting::Environment(parse_or_usage(v))).collect()
            }
        }
    }
}

fn cmd_sweep(cli: &Cli, dim: &str, values: &[String], shares: f64, scenarios: &[String]) -> Result<bool> {
    let dim: SweepDimension = parse_or_usage(dim);
    let settings = sweep_settings(dim, values, shares);
    let mut s = Setup::new(cli)?;
    let n = s.replicates(DEFAULT_SWEEP_REPLICATES);
    let mut spec = SweepSpec::new(dim, settings).unwrap_or_else(|e| usage(e)).with_replicates(n);
    if !scenarios.is_empty() {
        spec = spec.with_scenarios(scenarios.iter().map(|v| parse_or_usage(v)).collect());
    }
    // probe every constellation before committing to the long run
    for c in spec.constellations(&s.cfg.params) {
        if let Err(e) = c.params.validate() {
            usage(e);
        }
    }
    let cells = run_sweep(&spec, &s.cfg.params, s.seed)?;
    s.out.write(&format!("sweep_{}.csv", dim.name()), &sweep_csv(&cells))?;
    let mut extra = json!({
        "dimension": dim.name(),
        "settings": spec.settings.iter().map(|x| x.label()).collect::<Vec<_>>(),
        "scenarios": spec.scenarios.iter().map(|x| x.name()).collect::<Vec<_>>(),
        "constellations": spec.constellation_count(),
        "runs": spec.run_count(),
    });
    let mut ok = cells.iter().all(|c| c.diagnostics_ok);

    if dim == SweepDimension::H {
        let hs: Vec<f64> = spec
            .settings
            .iter()
            .filter_map(|x| match x {
                SweepSetting::H(h) => Some(*h),
                _ => None,
            })
            .collect();
        let scenario = spec.scenarios.first().copied().unwrap_or(Scenario::Base);
        let report = h_variance_report(&s.cfg.params, ScenarioConfig::global(scenario), &hs, n, s.seed)?;
        s.out.write("h_variance.csv", &variance_csv(&report))?;
        for r in &report {
            let (c, v) = r.tail_mean(100);
            println!("h={}: last-100-step deviation variance cooperation {c:.4}, shirking {v:.4}", r.h);
        }
        extra["variance_scenario"] = json!(scenario.name());
    }
    if dim == SweepDimension::Kappa {
        if let Some(k) = kappa_output_contrast(&cells, 0.0, 1.0) {
            println!("kappa 0 -> 1: mean relative output change {:+.4}", k.overall);
            for t in ValueType::ALL {
                println!("  {:>2} change relative to other types {:+.4}", t.label(), k.for_type(t));
            }
            extra["kappa_contrast"] = serde_json::to_value(k)?;
        }
    }
    for c in &cells {
        if !c.diagnostics_ok {
            ok = false;
            eprintln!("diagnostics failed in {} / {}", c.constellation.label, c.constellation.config.scenario);
        }
    }
    println!("{} constellations, {} runs", spec.constellation_count(), spec.run_count());
    s.finish("sweep", &format!("sweep_{}", dim.name()), n, extra, ok, f64::NAN)
}

fn cmd_similarity(cli: &Cli) -> Result<bool> {
    let mut s = Setup::new(cli)?;
    let n = s.replicates(DEFAULT_REPLICATES);
    let sets = run_matrix(&s.cfg.params, &Environment::ALL, n, s.seed)?;
    let csv = similarity_csv(&similarity_table(&sets));
    s.out.write("similarity.csv", &csv)?;
    print!("{csv}");
    let (ok, err) = max_error(sets.values());
    s.finish("similarity", "similarity", n, json!({}), ok, err)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { scenario, environment } => cmd_run(&cli, scenario.as_deref(), environment.as_deref()),
        Command::Matrix { environments } => cmd_matrix(&cli, environments),
        Command::Sweep {
            dim,
            values,
            shares,
            scenarios,
        } => cmd_sweep(&cli, dim, values, *shares, scenarios),
        Command::Similarity => cmd_similarity(&cli),
    };
    match result.context("normsim failed") {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_DIAGNOSTICS),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
