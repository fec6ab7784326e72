//! CSV and JSON artifacts written by the commands.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use normsim::metrics::fmt_num;
use normsim::{Environment, MetricsSeries, ModelParams, ReplicateSet, Scenario, ScenarioConfig, ValueType};
use serde_json::{json, Value};

/// File stem of one scenario run: the scenario name, suffixed with the
/// environment unless it is global.
pub fn stem(config: &ScenarioConfig) -> String {
    match config.environment {
        Environment::Global => config.scenario.name().to_string(),
        env => format!("{}_{}", config.scenario.name(), env.name()),
    }
}

/// Collects everything a command writes so the manifest can list it.
pub struct OutDir {
    root: PathBuf,
    written: Vec<String>,
}

impl OutDir {
    pub fn create(root: &Path) -> Result<Self> {
        std::fs::create_dir_all(root).with_context(|| format!("creating output directory {}", root.display()))?;
        Ok(OutDir {
            root: root.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        let path = self.root.join(name);
        std::fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        self.written.push(name.to_string());
        Ok(())
    }

    pub fn written(&self) -> &[String] {
        &self.written
    }
}

pub fn unix_now() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

/// Group %OGO per step.
pub fn ogo_plot(series: &MetricsSeries) -> String {
    let mut out = String::from("step,pct_ogo\n");
    for r in series.rows() {
        let _ = writeln!(out, "{},{}", r.step, fmt_num(r.pct_ogo));
    }
    out
}

/// Average time per activity per step.
pub fn times_plot(series: &MetricsSeries) -> String {
    let mut out = String::from("step,production,cooperation,shirking\n");
    for r in series.rows() {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            r.step,
            fmt_num(r.mean_production),
            fmt_num(r.mean_cooperation),
            fmt_num(r.mean_shirking)
        );
    }
    out
}

/// Per-type times and output per step, long format.
pub fn types_plot(series: &MetricsSeries) -> String {
    let mut out = String::from("step,type,production,cooperation,shirking,output\n");
    for r in series.rows() {
        for t in ValueType::ALL {
            let s = r.type_stats(t);
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.step,
                t.label(),
                fmt_num(s.production),
                fmt_num(s.cooperation),
                fmt_num(s.shirking),
                fmt_num(s.output)
            );
        }
    }
    out
}

pub fn replicates_csv(set: &ReplicateSet) -> String {
    let mut out =
        String::from("seed,aggregate_output,labor_cost,final_pct_ogo,mode_clamps,truncations,max_budget_error\n");
    for r in &set.replicates {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.seed,
            fmt_num(r.aggregate_output),
            fmt_num(r.labor_cost),
            fmt_num(r.final_pct_ogo),
            fmt_num(r.mode_clamps),
            fmt_num(r.truncations),
            fmt_num(r.max_budget_error)
        );
    }
    out
}

/// %OGO per step with one column per scenario run.
pub fn comparison_csv(sets: &BTreeMap<ScenarioConfig, ReplicateSet>) -> String {
    let ordered = ordered(sets);
    let mut out = String::from("step");
    for (cfg, _) in &ordered {
        let _ = write!(out, ",{}", stem(cfg));
    }
    out.push('\n');
    let steps = ordered.first().map_or(0, |(_, s)| s.mean.len());
    for i in 0..steps {
        let _ = write!(out, "{}", i + 1);
        for (_, set) in &ordered {
            out.push(',');
            out.push_str(&fmt_num(set.mean.rows()[i].pct_ogo));
        }
        out.push('\n');
    }
    out
}

/// Whole-run figures per scenario run; labor cost is relative to Base in the
/// same environment.
pub fn summary_csv(sets: &BTreeMap<ScenarioConfig, ReplicateSet>) -> String {
    let mut out = String::from(
        "scenario,environment,first_pct_ogo,final_pct_ogo,aggregate_output,labor_cost,labor_cost_vs_base,\
         mean_production,mean_cooperation,mean_shirking\n",
    );
    for (cfg, set) in ordered(sets) {
        let m = &set.mean;
        let base_cost = sets
            .get(&ScenarioConfig::new(Scenario::Base, cfg.environment))
            .map_or(f64::NAN, |b| b.mean.labor_cost());
        let avg = |f: fn(&normsim::StepMetrics) -> f64| m.column(f).iter().sum::<f64>() / m.len() as f64;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            cfg.scenario.name(),
            cfg.environment.name(),
            fmt_num(m.first().map_or(f64::NAN, |r| r.pct_ogo)),
            fmt_num(m.last().map_or(f64::NAN, |r| r.pct_ogo)),
            fmt_num(m.aggregate_output()),
            fmt_num(m.labor_cost()),
            fmt_num(m.labor_cost() / base_cost),
            fmt_num(avg(|r| r.mean_production)),
            fmt_num(avg(|r| r.mean_cooperation)),
            fmt_num(avg(|r| r.mean_shirking)),
        );
    }
    out
}

/// Environment-major, then scenarios in their canonical order.
fn ordered(sets: &BTreeMap<ScenarioConfig, ReplicateSet>) -> Vec<(&ScenarioConfig, &ReplicateSet)> {
    let mut v: Vec<_> = sets.iter().collect();
    v.sort_by_key(|(c, _)| (c.environment, Scenario::ALL.iter().position(|&s| s == c.scenario)));
    v
}

pub struct Manifest {
    pub command: &'static str,
    pub started: f64,
    pub seed: u64,
    pub replicates: usize,
    pub params: ModelParams,
    pub extra: Value,
    pub diagnostics_ok: bool,
    pub max_budget_error: f64,
}

impl Manifest {
    pub fn to_json(&self, outputs: &[String]) -> String {
        let finished = unix_now();
        let seeds: Vec<u64> = (0..self.replicates)
            .map(|i| normsim::engine::replicate_seed(self.seed, i))
            .collect();
        let doc = json!({
            "tool": "normsim",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "argv": std::env::args().collect::<Vec<_>>(),
            "started_unix": self.started,
            "finished_unix": finished,
            "elapsed_seconds": finished - self.started,
            "seed": self.seed,
            "replicates": self.replicates,
            "replicate_seeds": seeds,
            "params": self.params,
            "details": self.extra,
            "diagnostics": {
                "ok": self.diagnostics_ok,
                "max_budget_error": self.max_budget_error,
            },
            "outputs": outputs,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("manifest serializes");
        s.push('\n');
        s
    }
}
