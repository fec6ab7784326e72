//! Sensitivity sweeps: type mix, norm adjustment rate, task interdependence
//! and norm environment, summarized over whole runs.

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::behavior::ValueType;
use crate::engine::{map_indices, run_matrix, run_replicates, ModelParams, ReplicateSet, Scenario, ScenarioConfig};
use crate::error::ModelError;
use crate::metrics::{fmt_num, MetricsSeries};
use crate::norms::Environment;

pub const DEFAULT_SWEEP_REPLICATES: usize = 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SweepDimension {
    Dist,
    H,
    Kappa,
    Environment,
}

impl SweepDimension {
    pub fn name(self) -> &'static str {
        match self {
            SweepDimension::Dist => "dist",
            SweepDimension::H => "h",
            SweepDimension::Kappa => "kappa",
            SweepDimension::Environment => "environment",
        }
    }
}

impl fmt::Display for SweepDimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepDimension {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "dist" => Ok(SweepDimension::Dist),
            "h" => Ok(SweepDimension::H),
            "kappa" => Ok(SweepDimension::Kappa),
            "environment" | "env" => Ok(SweepDimension::Environment),
            _ => Err(ModelError::InvalidParameter {
                name: "dimension",
                reason: format!("unknown sweep dimension `{s}` (expected dist, h, kappa or environment)"),
            }),
        }
    }
}

/// One value of a swept dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum SweepSetting {
    Dist { label: String, shares: [f64; 4] },
    H(f64),
    Kappa(f64),
    Environment(Environment),
}

impl SweepSetting {
    pub fn dimension(&self) -> SweepDimension {
        match self {
            SweepSetting::Dist { .. } => SweepDimension::Dist,
            SweepSetting::H(_) => SweepDimension::H,
            SweepSetting::Kappa(_) => SweepDimension::Kappa,
            SweepSetting::Environment(_) => SweepDimension::Environment,
        }
    }

    pub fn label(&self) -> String {
        match self {
            SweepSetting::Dist { label, .. } => label.clone(),
            SweepSetting::H(h) => format!("h={h}"),
            SweepSetting::Kappa(k) => format!("kappa={k}"),
            SweepSetting::Environment(e) => e.name().to_string(),
        }
    }

    fn apply(&self, params: &mut ModelParams, env: &mut Environment, dist_label: &mut String) {
        match self {
            SweepSetting::Dist { label, shares } => {
                params.dist = *shares;
                *dist_label = label.clone();
            }
            SweepSetting::H(h) => params.h = *h,
            SweepSetting::Kappa(k) => params.kappa = *k,
            SweepSetting::Environment(e) => *env = *e,
        }
    }
}

/// The uniform mix plus one mix per type in which that type holds `share`
/// and the other three split the rest evenly.
pub fn distribution_settings(share: f64) -> Result<Vec<SweepSetting>, ModelError> {
    if !(0.0..=1.0).contains(&share) {
        return Err(ModelError::InvalidParameter {
            name: "share",
            reason: format!("dominant share must lie in [0, 1], got {share}"),
        });
    }
    let rest = (1.0 - share) / 3.0;
    let mut out = vec![SweepSetting::Dist {
        label: "uniform".into(),
        shares: [0.25; 4],
    }];
    for t in ValueType::ALL {
        let mut shares = [rest; 4];
        shares[t.index()] = share;
        out.push(SweepSetting::Dist {
            label: format!("{}-dominant", t.label()),
            shares,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub dimension: SweepDimension,
    pub settings: Vec<SweepSetting>,
    pub replicates: usize,
    pub scenarios: Vec<Scenario>,
}

impl SweepSpec {
    /// All nine scenarios at the default replicate count.
    pub fn new(dimension: SweepDimension, settings: Vec<SweepSetting>) -> Result<Self, ModelError> {
        if settings.is_empty() {
            return Err(ModelError::InvalidParameter {
                name: "values",
                reason: "a sweep needs at least one value".into(),
            });
        }
        if let Some(s) = settings.iter().find(|s| s.dimension() != dimension) {
            return Err(ModelError::InvalidParameter {
                name: "values",
                reason: format!("setting `{}` does not belong to the {dimension} dimension", s.label()),
            });
        }
        Ok(SweepSpec {
            dimension,
            settings,
            replicates: DEFAULT_SWEEP_REPLICATES,
            scenarios: Scenario::ALL.to_vec(),
        })
    }

    pub fn with_replicates(mut self, replicates: usize) -> Self {
        self.replicates = replicates;
        self
    }

    pub fn with_scenarios(mut self, scenarios: Vec<Scenario>) -> Self {
        self.scenarios = scenarios;
        self
    }

    /// One constellation per setting and scenario, all other parameters from `base`.
    pub fn constellations(&self, base: &ModelParams) -> Vec<Constellation> {
        self.settings
            .iter()
            .flat_map(|setting| {
                self.scenarios.iter().map(move |&scenario| {
                    let mut params = base.clone();
                    let mut env = Environment::Global;
                    let mut dist_label = dist_label_of(&base.dist);
                    setting.apply(&mut params, &mut env, &mut dist_label);
                    Constellation {
                        label: setting.label(),
                        dist_label,
                        params,
                        config: ScenarioConfig::new(scenario, env),
                    }
                })
            })
            .collect()
    }

    pub fn constellation_count(&self) -> usize {
        self.settings.len() * self.scenarios.len()
    }

    pub fn run_count(&self) -> usize {
        self.constellation_count() * self.replicates
    }
}

fn dist_label_of(dist: &[f64; 4]) -> String {
    if dist.iter().all(|&p| (p - 0.25).abs() < 1e-12) {
        "uniform".into()
    } else {
        dist.iter().map(|p| format!("{p}")).collect::<Vec<_>>().join("/")
    }
}

/// A fully specified parameter set and scenario.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constellation {
    pub label: String,
    pub dist_label: String,
    pub params: ModelParams,
    pub config: ScenarioConfig,
}

/// Every type mix (at `share`) crossed with every `h`, every `kappa` and all
/// nine scenarios, in the global environment.
pub fn full_cross(base: &ModelParams, share: f64, hs: &[f64], kappas: &[f64]) -> Result<Vec<Constellation>, ModelError> {
    let dists = distribution_settings(share)?;
    let mut out = Vec::with_capacity(dists.len() * hs.len() * kappas.len() * 9);
    for d in &dists {
        for &h in hs {
            for &kappa in kappas {
                for scenario in Scenario::ALL {
                    let mut params = ModelParams { h, kappa, ..base.clone() };
                    let mut env = Environment::Global;
                    let mut dist_label = String::new();
                    d.apply(&mut params, &mut env, &mut dist_label);
                    out.push(Constellation {
                        label: format!("{dist_label};h={h};kappa={kappa}"),
                        dist_label,
                        params,
                        config: ScenarioConfig::global(scenario),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Mean, sample standard deviation and median of a sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub std: f64,
    pub median: f64,
}

impl Summary {
    /// NaN entries are ignored; an empty sample summarizes to NaN.
    pub fn of(values: &[f64]) -> Self {
        let mut v: Vec<f64> = values.iter().copied().filter(|x| !x.is_nan()).collect();
        let n = v.len();
        if n == 0 {
            return Summary {
                mean: f64::NAN,
                std: f64::NAN,
                median: f64::NAN,
            };
        }
        let mean = v.iter().sum::<f64>() / n as f64;
        let std = if n < 2 {
            0.0
        } else {
            (v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64).sqrt()
        };
        v.sort_by(f64::total_cmp);
        let median = if n % 2 == 1 {
            v[n / 2]
        } else {
            0.5 * (v[n / 2 - 1] + v[n / 2])
        };
        Summary { mean, std, median }
    }
}

/// Whole-run statistics of one type's replicate-averaged series.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypeSummary {
    pub output: Summary,
    pub production: Summary,
    pub shirking: Summary,
    pub cooperation: Summary,
}

impl TypeSummary {
    pub fn of(series: &MetricsSeries, t: ValueType) -> Self {
        let k = t.index();
        TypeSummary {
            output: Summary::of(&series.column(|r| r.per_type[k].output)),
            production: Summary::of(&series.column(|r| r.per_type[k].production)),
            shirking: Summary::of(&series.column(|r| r.per_type[k].shirking)),
            cooperation: Summary::of(&series.column(|r| r.per_type[k].cooperation)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub constellation: Constellation,
    /// Indexed by [`ValueType::index`].
    pub types: [TypeSummary; 4],
    pub aggregate_output: f64,
    pub diagnostics_ok: bool,
}

impl SweepCell {
    fn of(constellation: Constellation, set: &ReplicateSet) -> Self {
        SweepCell {
            types: ValueType::ALL.map(|t| TypeSummary::of(&set.mean, t)),
            aggregate_output: set.mean.aggregate_output(),
            diagnostics_ok: set.diagnostics_ok(),
            constellation,
        }
    }

    pub fn type_summary(&self, t: ValueType) -> &TypeSummary {
        &self.types[t.index()]
    }
}

/// Runs every constellation with replicates `base_seed..base_seed + replicates`.
pub fn run_constellations(
    constellations: Vec<Constellation>,
    replicates: usize,
    base_seed: u64,
) -> Result<Vec<SweepCell>, ModelError> {
    let sets = map_indices(constellations.len(), |k| {
        let c = &constellations[k];
        run_replicates(c.config, &c.params, replicates, base_seed)
    });
    constellations
        .into_iter()
        .zip(sets)
        .map(|(c, s)| s.map(|s| SweepCell::of(c, &s)))
        .collect()
}

pub fn run_sweep(spec: &SweepSpec, params: &ModelParams, base_seed: u64) -> Result<Vec<SweepCell>, ModelError> {
    run_constellations(spec.constellations(params), spec.replicates, base_seed)
}

pub const SWEEP_KEY_COLUMNS: [&str; 7] = ["setting", "dist", "h", "kappa", "environment", "scenario", "type"];
pub const SWEEP_METRICS: [&str; 4] = ["output", "production", "shirking", "cooperation"];

/// Header: the key columns, then `{metric}_{mean,std,median}` per metric.
pub fn sweep_columns() -> Vec<String> {
    let mut cols: Vec<String> = SWEEP_KEY_COLUMNS.iter().map(|c| c.to_string()).collect();
    for m in SWEEP_METRICS {
        for s in ["mean", "std", "median"] {
            cols.push(format!("{m}_{s}"));
        }
    }
    cols
}

/// One row per constellation and type.
pub fn sweep_csv(cells: &[SweepCell]) -> String {
    let mut out = sweep_columns().join(",");
    out.push('\n');
    for cell in cells {
        let c = &cell.constellation;
        for t in ValueType::ALL {
            let ts = cell.type_summary(t);
            let _ = write!(
                out,
                "{},{},{},{},{},{},{}",
                c.label,
                c.dist_label,
                c.params.h,
                c.params.kappa,
                c.config.environment.name(),
                c.config.scenario.name(),
                t.label()
            );
            for s in [ts.output, ts.production, ts.shirking, ts.cooperation] {
                for v in [s.mean, s.std, s.median] {
                    out.push(',');
                    out.push_str(&fmt_num(v));
                }
            }
            out.push('\n');
        }
    }
    out
}

/// Aggregate output of one scenario in one environment, compared across environments.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimilarityRow {
    pub scenario: Scenario,
    pub environment: Environment,
    /// Aggregate output.
    pub y: f64,
    /// Mean aggregate output across environments.
    pub y_bar: f64,
    /// `(y - y_bar) / y_bar`.
    pub rel_dev: f64,
    /// Sample standard deviation of `y` across environments.
    pub std: f64,
    /// `std / y`.
    pub pct_y: f64,
}

pub fn similarity_rows(scenario: Scenario, outputs: &[(Environment, f64)]) -> Vec<SimilarityRow> {
    let ys: Vec<f64> = outputs.iter().map(|&(_, y)| y).collect();
    let s = Summary::of(&ys);
    outputs
        .iter()
        .map(|&(environment, y)| SimilarityRow {
            scenario,
            environment,
            y,
            y_bar: s.mean,
            rel_dev: (y - s.mean) / s.mean,
            std: s.std,
            pct_y: s.std / y,
        })
        .collect()
}

/// Similarity rows for every scenario present in a matrix result.
pub fn similarity_table(sets: &BTreeMap<ScenarioConfig, ReplicateSet>) -> Vec<SimilarityRow> {
    let mut by_scenario: BTreeMap<Scenario, Vec<(Environment, f64)>> = BTreeMap::new();
    for (cfg, set) in sets {
        by_scenario
            .entry(cfg.scenario)
            .or_default()
            .push((cfg.environment, set.mean.aggregate_output()));
    }
    by_scenario
        .into_iter()
        .flat_map(|(s, outs)| similarity_rows(s, &outs))
        .collect()
}

pub fn environment_similarity(
    params: &ModelParams,
    n_replicates: usize,
    base_seed: u64,
) -> Result<Vec<SimilarityRow>, ModelError> {
    let sets = run_matrix(params, &Environment::ALL, n_replicates, base_seed)?;
    Ok(similarity_table(&sets))
}

pub const SIMILARITY_COLUMNS: [&str; 7] = ["scenario", "environment", "y", "y_bar", "rel_dev", "std", "pct_y"];

pub fn similarity_csv(rows: &[SimilarityRow]) -> String {
    let mut out = SIMILARITY_COLUMNS.join(",");
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.scenario.name(),
            r.environment.name(),
            fmt_num(r.y),
            fmt_num(r.y_bar),
            fmt_num(r.rel_dev),
            fmt_num(r.std),
            fmt_num(r.pct_y)
        );
    }
    out
}

/// Replicate-averaged deviation-variance series for one adjustment rate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarianceSeries {
    pub h: f64,
    pub cooperation: Vec<f64>,
    pub shirking: Vec<f64>,
}

impl VarianceSeries {
    /// Mean over the last `k` steps, as `(cooperation, shirking)`.
    pub fn tail_mean(&self, k: usize) -> (f64, f64) {
        let tail = |v: &[f64]| {
            let k = k.min(v.len()).max(1);
            v[v.len().saturating_sub(k)..].iter().sum::<f64>() / k as f64
        };
        (tail(&self.cooperation), tail(&self.shirking))
    }
}

pub fn h_variance_report(
    params: &ModelParams,
    config: ScenarioConfig,
    h_values: &[f64],
    n_replicates: usize,
    base_seed: u64,
) -> Result<Vec<VarianceSeries>, ModelError> {
    h_values
        .iter()
        .map(|&h| {
            let p = ModelParams { h, ..params.clone() };
            let set = run_replicates(config, &p, n_replicates, base_seed)?;
            Ok(VarianceSeries {
                h,
                cooperation: set.mean.column(|r| r.var_dev_cooperation),
                shirking: set.mean.column(|r| r.var_dev_shirking),
            })
        })
        .collect()
}

/// Long format: `h,step,var_dev_cooperation,var_dev_shirking`.
pub fn variance_csv(series: &[VarianceSeries]) -> String {
    let mut out = String::from("h,step,var_dev_cooperation,var_dev_shirking\n");
    for s in series {
        for (i, (c, v)) in s.cooperation.iter().zip(&s.shirking).enumerate() {
            let _ = writeln!(out, "{},{},{},{}", s.h, i + 1, fmt_num(*c), fmt_num(*v));
        }
    }
    out
}

/// Output response to moving task interdependence from `low` to `high`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KappaContrast {
    pub low: f64,
    pub high: f64,
    /// Mean over matched (constellation, type) cells of the relative change
    /// `(y_high - y_low) / y_low` in whole-run mean output.
    pub overall: f64,
    /// Per type: its mean absolute change minus the mean change of the other
    /// three types. Indexed by [`ValueType::index`].
    pub per_type: [f64; 4],
    pub matched_cells: usize,
}

impl KappaContrast {
    pub fn for_type(&self, t: ValueType) -> f64 {
        self.per_type[t.index()]
    }
}

/// Pairs cells that differ only in `kappa`. `None` when nothing matches.
pub fn kappa_output_contrast(cells: &[SweepCell], low: f64, high: f64) -> Option<KappaContrast> {
    let key = |c: &Constellation| {
        (
            c.dist_label.clone(),
            c.params.h.to_bits(),
            c.config,
            c.params.numagents,
            c.params.steps,
        )
    };
    let lows: BTreeMap<_, &SweepCell> = cells
        .iter()
        .filter(|c| c.constellation.params.kappa == low)
        .map(|c| (key(&c.constellation), c))
        .collect();
    let mut rel = Vec::new();
    let mut deltas: [Vec<f64>; 4] = Default::default();
    let mut matched = 0;
    for hi in cells.iter().filter(|c| c.constellation.params.kappa == high) {
        let Some(lo) = lows.get(&key(&hi.constellation)) else {
            continue;
        };
        matched += 1;
        for t in ValueType::ALL {
            let (yl, yh) = (lo.type_summary(t).output.mean, hi.type_summary(t).output.mean);
            if yl.is_nan() || yh.is_nan() {
                continue;
            }
            deltas[t.index()].push(yh - yl);
            rel.push(if yl == 0.0 && yh == 0.0 { 0.0 } else { (yh - yl) / yl });
        }
    }
    if matched == 0 {
        return None;
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let d: Vec<f64> = deltas.iter().map(|v| mean(v)).collect();
    let per_type = std::array::from_fn(|k| {
        let others: Vec<f64> = (0..4).filter(|&j| j != k).map(|j| d[j]).filter(|x| !x.is_nan()).collect();
        d[k] - mean(&others)
    });
    Some(KappaContrast {
        low,
        high,
        overall: mean(&rel),
        per_type,
        matched_cells: matched,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ModelParams {
        ModelParams {
            steps: 40,
            ..ModelParams::default()
        }
    }

    #[test]
    fn summary_stats() {
        let s = Summary::of(&[1.0, 3.0, 2.0, 10.0]);
        assert_eq!(s.mean, 4.0);
        assert_eq!(s.median, 2.5);
        assert!((s.std - (50.0f64 / 3.0).sqrt()).abs() < 1e-12);
        let one = Summary::of(&[7.0, f64::NAN]);
        assert_eq!((one.mean, one.std, one.median), (7.0, 0.0, 7.0));
        assert!(Summary::of(&[]).mean.is_nan());
    }

    #[test]
    fn distribution_mixes() {
        let d = distribution_settings(0.7).unwrap();
        assert_eq!(d.len(), 5);
        match &d[1] {
            SweepSetting::Dist { label, shares } => {
                assert_eq!(label, "C-dominant");
                assert_eq!(shares[0], 0.7);
                assert!((shares[1] - 0.1).abs() < 1e-12);
                assert!((shares.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(distribution_settings(1.5).is_err());
    }

    #[test]
    fn spec_validation_and_counts() {
        assert!(SweepSpec::new(SweepDimension::H, vec![]).is_err());
        assert!(SweepSpec::new(SweepDimension::H, vec![SweepSetting::Kappa(0.0)]).is_err());
        let spec = SweepSpec::new(SweepDimension::Dist, distribution_settings(0.7).unwrap()).unwrap();
        assert_eq!(spec.constellation_count(), 45);
        assert_eq!(spec.run_count(), 675);
        let cross = full_cross(&ModelParams::default(), 0.7, &[0.1, 0.5, 1.0], &[0.0, 0.5, 1.0]).unwrap();
        assert_eq!(cross.len(), 405);
        assert_eq!(cross.len() * DEFAULT_SWEEP_REPLICATES, 6075);
        assert_eq!("kappa".parse::<SweepDimension>().unwrap(), SweepDimension::Kappa);
        assert!("tau".parse::<SweepDimension>().is_err());
    }

    #[test]
    fn default_cell_matches_direct_run() {
        let p = small();
        let spec = SweepSpec::new(SweepDimension::Kappa, vec![SweepSetting::Kappa(0.5)])
            .unwrap()
            .with_scenarios(vec![Scenario::Base])
            .with_replicates(3);
        let cells = run_sweep(&spec, &p, 11).unwrap();
        let direct = run_replicates(ScenarioConfig::global(Scenario::Base), &p, 3, 11).unwrap();
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].aggregate_output, direct.mean.aggregate_output());
        assert_eq!(cells[0].types[2], TypeSummary::of(&direct.mean, ValueType::SE));
        let csv = sweep_csv(&cells);
        assert_eq!(csv.lines().count(), 5);
        assert!(csv.lines().nth(1).unwrap().starts_with("kappa=0.5,uniform,0.1,0.5,global,base,C,"));
    }

    #[test]
    fn identical_environments_have_no_spread() {
        let rows = similarity_rows(
            Scenario::Base,
            &[(Environment::Global, 1640.0), (Environment::Global, 1640.0), (Environment::Global, 1640.0)],
        );
        assert!(rows.iter().all(|r| r.rel_dev == 0.0 && r.std == 0.0));
        let rows = similarity_rows(
            Scenario::Base,
            &[
                (Environment::Global, 1642.992),
                (Environment::Neighbours, 1647.488),
                (Environment::Random, 1637.854),
            ],
        );
        assert!((rows[0].y_bar - 1642.778).abs() < 1e-3);
        assert!((rows[0].std - 4.821).abs() < 1e-3);
        assert!((rows[1].rel_dev - 0.003).abs() < 5e-4);
    }

    #[test]
    fn variance_report_is_deterministic() {
        let p = small();
        let cfg = ScenarioConfig::global(Scenario::Base);
        let a = h_variance_report(&p, cfg, &[0.1, 1.0], 2, 5).unwrap();
        let b = h_variance_report(&p, cfg, &[0.1, 1.0], 2, 5).unwrap();
        assert_eq!(a, b);
        assert_eq!(a[0].cooperation.len(), 40);
        let lone = ModelParams {
            numagents: 1,
            ..small()
        };
        let v = h_variance_report(&lone, cfg, &[0.5], 1, 5).unwrap();
        assert!(v[0].cooperation.iter().chain(&v[0].shirking).all(|&x| x == 0.0));
        assert_eq!(variance_csv(&a).lines().count(), 81);
    }

    #[test]
    fn kappa_contrast_of_identical_settings_is_zero() {
        let p = small();
        let spec = SweepSpec::new(SweepDimension::Kappa, vec![SweepSetting::Kappa(0.0)])
            .unwrap()
            .with_scenarios(vec![Scenario::Base, Scenario::Cooperative])
            .with_replicates(2);
        let cells = run_sweep(&spec, &p, 3).unwrap();
        let c = kappa_output_contrast(&cells, 0.0, 0.0).unwrap();
        assert_eq!(c.overall, 0.0);
        assert!(c.per_type.iter().all(|&x| x == 0.0));
        assert_eq!(c.matched_cells, 2);
        assert!(kappa_output_contrast(&cells, 0.0, 1.0).is_none());
    }
}
