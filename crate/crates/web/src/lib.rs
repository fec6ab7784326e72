//! Browser bindings: run a scenario, compare all nine, and inspect the
//! deviation distributions an agent draws from.
//!
//! Every export is a thin wrapper over a plain Rust function so the logic is
//! testable off the browser.

use normsim::behavior::{cooperation_distribution, shirking_distribution};
use normsim::{
    run_replicates, Environment, ManagementStance, MetricsSeries, ModelParams, PayScheme, Scenario, ScenarioConfig,
    ValueType,
};
use wasm_bindgen::prelude::*;

/// Replicate-averaged series of one scenario.
#[wasm_bindgen]
pub struct Trajectory {
    series: MetricsSeries,
}

#[wasm_bindgen]
impl Trajectory {
    pub fn steps(&self) -> usize {
        self.series.len()
    }

    pub fn pct_ogo(&self) -> Vec<f64> {
        self.series.column(|r| r.pct_ogo)
    }

    pub fn production(&self) -> Vec<f64> {
        self.series.column(|r| r.mean_production)
    }

    pub fn cooperation(&self) -> Vec<f64> {
        self.series.column(|r| r.mean_cooperation)
    }

    pub fn shirking(&self) -> Vec<f64> {
        self.series.column(|r| r.mean_shirking)
    }

    pub fn norm_cooperation(&self) -> Vec<f64> {
        self.series.column(|r| r.norm_cooperation)
    }

    pub fn norm_shirking(&self) -> Vec<f64> {
        self.series.column(|r| r.norm_shirking)
    }

    /// Mean output of one type: 0 = C, 1 = O, 2 = SE, 3 = ST.
    pub fn type_output(&self, type_index: usize) -> Vec<f64> {
        let k = type_index.min(3);
        self.series.column(|r| r.per_type[k].output)
    }

    pub fn aggregate_output(&self) -> f64 {
        self.series.aggregate_output()
    }

    pub fn labor_cost(&self) -> f64 {
        self.series.labor_cost()
    }

    pub fn csv(&self) -> String {
        self.series.to_csv()
    }
}

fn params(steps: usize) -> ModelParams {
    ModelParams {
        steps: steps.clamp(1, 5000),
        ..ModelParams::default()
    }
}

pub fn simulate_series(
    scenario: &str,
    environment: &str,
    replicates: usize,
    seed: u64,
    steps: usize,
) -> Result<MetricsSeries, String> {
    let scenario: Scenario = scenario.parse().map_err(|e| format!("{e}"))?;
    let env: Environment = environment.parse().map_err(|e| format!("{e}"))?;
    run_replicates(ScenarioConfig::new(scenario, env), &params(steps), replicates.max(1), seed)
        .map(|s| s.mean)
        .map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn simulate(
    scenario: &str,
    environment: &str,
    replicates: usize,
    seed: u64,
    steps: usize,
) -> Result<Trajectory, JsError> {
    simulate_series(scenario, environment, replicates, seed, steps)
        .map(|series| Trajectory { series })
        .map_err(|e| JsError::new(&e))
}

/// %OGO per step of all nine scenarios, concatenated in canonical scenario order.
pub fn compare_series(replicates: usize, seed: u64, steps: usize) -> Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for s in Scenario::ALL {
        let set = run_replicates(ScenarioConfig::global(s), &params(steps), replicates.max(1), seed)
            .map_err(|e| e.to_string())?;
        out.extend(set.mean.column(|r| r.pct_ogo));
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn compare_scenarios(replicates: usize, seed: u64, steps: usize) -> Result<Vec<f64>, JsError> {
    compare_series(replicates, seed, steps).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn scenario_names() -> Vec<String> {
    Scenario::ALL.iter().map(|s| s.name().to_string()).collect()
}

fn stance_of(s: &str) -> Result<ManagementStance, String> {
    match s.to_ascii_lowercase().as_str() {
        "trusting" => Ok(ManagementStance::Trusting),
        "neutral" => Ok(ManagementStance::Neutral),
        "controlling" => Ok(ManagementStance::Controlling),
        _ => Err(format!("unknown management stance `{s}`")),
    }
}

fn scheme_of(s: &str) -> Result<PayScheme, String> {
    match s.to_ascii_lowercase().as_str() {
        "none" | "fixed" => Ok(PayScheme::FixedWage),
        "individual" | "competitive" => Ok(PayScheme::Individual),
        "group" | "cooperative" => Ok(PayScheme::Group),
        _ => Err(format!("unknown pay scheme `{s}`")),
    }
}

fn type_of(s: &str) -> Result<ValueType, String> {
    ValueType::ALL
        .into_iter()
        .find(|t| t.label().eq_ignore_ascii_case(s))
        .ok_or_else(|| format!("unknown value type `{s}`"))
}

/// Density of the shirking (`activity = "shirking"`) or cooperation
/// distribution, sampled at `points` evenly spaced hours on `[0, tau]`.
/// Returns `x` values followed by densities.
pub fn density_curve(
    value_type: &str,
    stance: &str,
    scheme: &str,
    activity: &str,
    norm: f64,
    points: usize,
) -> Result<Vec<f64>, String> {
    let profile = type_of(value_type)?.profile();
    let norm = norm.max(0.0);
    let dev = match activity {
        "shirking" => shirking_distribution(&profile, norm, stance_of(stance)?),
        "cooperation" => cooperation_distribution(&profile, norm, scheme_of(scheme)?),
        _ => return Err(format!("unknown activity `{activity}`")),
    }
    .map_err(|e| e.to_string())?
    .distribution;
    let tau = ModelParams::default().tau;
    let points = points.clamp(2, 2000);
    let xs: Vec<f64> = (0..points).map(|i| tau * i as f64 / (points - 1) as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| dev.pdf(x)).collect();
    Ok(xs.into_iter().chain(ys).collect())
}

#[wasm_bindgen]
pub fn deviation_density(
    value_type: &str,
    stance: &str,
    scheme: &str,
    activity: &str,
    norm: f64,
    points: usize,
) -> Result<Vec<f64>, JsError> {
    density_curve(value_type, stance, scheme, activity, norm, points).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simulate_matches_engine() {
        let s = simulate_series("trusting", "global", 2, 9, 30).unwrap();
        let direct = run_replicates(ScenarioConfig::global(Scenario::Trusting), &params(30), 2, 9).unwrap();
        assert_eq!(s, direct.mean);
        assert!(simulate_series("nope", "global", 1, 1, 5).is_err());
        assert!(simulate_series("base", "everywhere", 1, 1, 5).is_err());
    }

    #[test]
    fn comparison_layout() {
        let v = compare_series(1, 3, 12).unwrap();
        assert_eq!(v.len(), 9 * 12);
        assert_eq!(scenario_names().len(), 9);
    }

    #[test]
    fn density_integrates_to_one() {
        let v = density_curve("O", "controlling", "none", "shirking", 10.0 / 3.0, 2001).unwrap();
        let (xs, ys) = v.split_at(2001);
        let dx = xs[1] - xs[0];
        let area: f64 = ys.windows(2).map(|w| 0.5 * (w[0] + w[1]) * dx).sum();
        assert!((area - 1.0).abs() < 1e-3, "{area}");
        // O types shirk more under control: the mode sits above the norm
        let peak = xs[ys.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0];
        assert!(peak > 10.0 / 3.0);
        assert!(density_curve("X", "neutral", "none", "shirking", 3.0, 10).is_err());
        assert!(density_curve("C", "neutral", "bonus", "cooperation", 3.0, 10).is_err());
    }
}
