//! Step loop, scenario matrix, seeding, and replicate averaging.
//!
//! Each step runs the same phases in a fixed order: every agent allocates its
//! day against the norms in force, outputs are produced, rewards are paid,
//! norms are updated from the behavior just observed, and a metrics row is
//! recorded. Random numbers are consumed in a fixed order as well: per agent in
//! id order a shirking uniform, a cooperation uniform and, under the
//! random-order budget rule, an order uniform; then peer draws when norms are
//! formed from random peers.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::behavior::{
    allocate_time, BehaviorContext, BehaviorProfile, DayDraws, BudgetRule, ManagementStance, PayScheme, TimeAllocation,
    ValueType,
};
use crate::error::ModelError;
use crate::metrics::{MetricsSeries, StepMetrics, TypeStats};
use crate::norms::{
    sample_peers, update_global, update_neighbours, update_random, Environment, GridTopology, NormFormula, NormPair,
    NormState,
};
use crate::production::{coop_received, optimal_group_output, output};
use crate::rewards::{bonuses, reward, RewardParams};

/// The nine stance by pay-scheme combinations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Scenario {
    Base,
    Trusting,
    Controlling,
    Cooperative,
    Competitive,
    Trustcoop,
    Trustcomp,
    Contrcoop,
    Contrcomp,
}

impl Scenario {
    pub const ALL: [Scenario; 9] = [
        Scenario::Base,
        Scenario::Trusting,
        Scenario::Controlling,
        Scenario::Cooperative,
        Scenario::Competitive,
        Scenario::Trustcoop,
        Scenario::Trustcomp,
        Scenario::Contrcoop,
        Scenario::Contrcomp,
    ];

    pub fn stance(self) -> ManagementStance {
        use Scenario::*;
        match self {
            Base | Cooperative | Competitive => ManagementStance::Neutral,
            Trusting | Trustcoop | Trustcomp => ManagementStance::Trusting,
            Controlling | Contrcoop | Contrcomp => ManagementStance::Controlling,
        }
    }

    pub fn scheme(self) -> PayScheme {
        use Scenario::*;
        match self {
            Base | Trusting | Controlling => PayScheme::FixedWage,
            Cooperative | Trustcoop | Contrcoop => PayScheme::Group,
            Competitive | Trustcomp | Contrcomp => PayScheme::Individual,
        }
    }

    pub fn from_parts(stance: ManagementStance, scheme: PayScheme) -> Scenario {
        Scenario::ALL
            .into_iter()
            .find(|s| s.stance() == stance && s.scheme() == scheme)
            .expect("every stance/scheme pair names a scenario")
    }

    pub fn name(self) -> &'static str {
        use Scenario::*;
        match self {
            Base => "base",
            Trusting => "trusting",
            Controlling => "controlling",
            Cooperative => "cooperative",
            Competitive => "competitive",
            Trustcoop => "trustcoop",
            Trustcomp => "trustcomp",
            Contrcoop => "contrcoop",
            Contrcomp => "contrcomp",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase();
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == key)
            .ok_or_else(|| ModelError::UnknownScenario(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub environment: Environment,
}

impl ScenarioConfig {
    pub fn new(scenario: Scenario, environment: Environment) -> Self {
        ScenarioConfig { scenario, environment }
    }

    pub fn global(scenario: Scenario) -> Self {
        ScenarioConfig::new(scenario, Environment::Global)
    }

    pub fn stance(&self) -> ManagementStance {
        self.scenario.stance()
    }

    pub fn scheme(&self) -> PayScheme {
        self.scenario.scheme()
    }
}

/// Model parameters. Defaults are the reference setup: 100 agents, 500 steps,
/// 8 random peers, uniform types, `kappa = 0.5`, `tau = 10`, `w = 1`, `h = 0.1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub numagents: usize,
    pub steps: usize,
    pub numpeers: usize,
    /// Shares of C, O, SE and ST agents.
    pub dist: [f64; 4],
    pub kappa: f64,
    pub tau: f64,
    pub wage: f64,
    pub h: f64,
    pub budget_rule: BudgetRule,
    pub norm_formula: NormFormula,
    /// Starting norms; `None` means a third of the budget for both.
    pub initial_norms: Option<NormPair>,
    /// Drop every mode offset so all deviations are symmetric (diagnostic).
    pub zero_offsets: bool,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            numagents: 100,
            steps: 500,
            numpeers: 8,
            dist: [0.25; 4],
            kappa: 0.5,
            tau: 10.0,
            wage: 1.0,
            h: 0.1,
            budget_rule: BudgetRule::RandomOrder,
            norm_formula: NormFormula::WeightedAverage,
            initial_norms: None,
            zero_offsets: false,
        }
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<(), ModelError> {
        if self.numagents == 0 {
            return Err(ModelError::EmptyPopulation);
        }
        let sum: f64 = self.dist.iter().sum();
        if (sum - 1.0).abs() > 1e-9 || self.dist.iter().any(|&p| !(p >= 0.0)) {
            return Err(ModelError::InvalidTypeDistribution { sum });
        }
        crate::production::ProductionParams::new(self.kappa, self.tau)?;
        if !(0.0..=1.0).contains(&self.h) {
            return Err(ModelError::InvalidParameter {
                name: "h",
                reason: format!("adjustment rate must lie in [0, 1], got {}", self.h),
            });
        }
        if !(self.wage >= 0.0 && self.wage.is_finite()) {
            return Err(ModelError::InvalidParameter {
                name: "wage",
                reason: format!("hourly wage must be non-negative, got {}", self.wage),
            });
        }
        if let Some(n) = self.initial_norms {
            if !(n.cooperation >= 0.0 && n.shirking >= 0.0 && n.cooperation.is_finite() && n.shirking.is_finite()) {
                return Err(ModelError::InvalidParameter {
                    name: "initial_norms",
                    reason: format!("norms must be non-negative, got {n:?}"),
                });
            }
        }
        Ok(())
    }

    pub fn starting_norms(&self) -> NormPair {
        self.initial_norms
            .unwrap_or_else(|| NormPair::new(self.tau / 3.0, self.tau / 3.0))
    }

    pub fn optimal_group_output(&self) -> f64 {
        optimal_group_output(self.tau, self.kappa)
    }
}

/// Exact per-type head counts by largest remainder.
pub fn type_quotas(dist: &[f64; 4], agents: usize) -> [usize; 4] {
    let raw: Vec<f64> = dist.iter().map(|p| p * agents as f64).collect();
    let mut counts = [0usize; 4];
    for (c, r) in counts.iter_mut().zip(&raw) {
        *c = r.floor() as usize;
    }
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..4).collect();
    // stable: ties go to the earlier type
    order.sort_by(|&a, &b| {
        let fa = raw[a] - raw[a].floor();
        let fb = raw[b] - raw[b].floor();
        fb.partial_cmp(&fa).unwrap_or(std::cmp::Ordering::Equal)
    });
    for &t in order.iter().take(agents.saturating_sub(assigned)) {
        counts[t] += 1;
    }
    counts
}

/// Everything one step produced, agent by agent.
#[derive(Clone, Debug, PartialEq)]
pub struct StepDetail {
    pub norms_before: NormState,
    pub allocations: Vec<TimeAllocation>,
    pub coop_received: Vec<f64>,
    pub outputs: Vec<f64>,
    pub bonuses: Vec<f64>,
    pub rewards: Vec<f64>,
    pub mode_clamps: u32,
    pub truncations: u32,
}

#[derive(Clone, Debug)]
pub struct ModelState {
    config: ScenarioConfig,
    params: ModelParams,
    seed: u64,
    rng: ChaCha8Rng,
    types: Vec<ValueType>,
    profiles: Vec<BehaviorProfile>,
    norms: NormState,
    topology: Option<GridTopology>,
    steps_done: usize,
}

impl ModelState {
    pub fn new(config: ScenarioConfig, params: ModelParams, seed: u64) -> Result<Self, ModelError> {
        params.validate()?;
        let n = params.numagents;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);

        let quotas = type_quotas(&params.dist, n);
        let mut types: Vec<ValueType> = ValueType::ALL
            .iter()
            .zip(quotas)
            .flat_map(|(&t, q)| std::iter::repeat(t).take(q))
            .collect();
        types.shuffle(&mut rng);

        let topology = match config.environment {
            Environment::Neighbours => Some(GridTopology::for_population(n)?),
            _ => None,
        };
        if config.environment == Environment::Random && params.numpeers >= n {
            return Err(ModelError::TooManyPeers {
                peers: params.numpeers,
                population: n,
            });
        }
        if config.environment == Environment::Random && params.numpeers == 0 {
            return Err(ModelError::InvalidParameter {
                name: "numpeers",
                reason: "random peer sets need at least one peer".into(),
            });
        }

        let start = params.starting_norms();
        let norms = match config.environment {
            Environment::Global => NormState::Global(start),
            _ => NormState::PerAgent(vec![start; n]),
        };
        let profiles = types
            .iter()
            .map(|t| {
                let p = t.profile();
                if params.zero_offsets {
                    p.without_offsets()
                } else {
                    p
                }
            })
            .collect();

        Ok(ModelState {
            config,
            params,
            seed,
            rng,
            types,
            profiles,
            norms,
            topology,
            steps_done: 0,
        })
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.config
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn types(&self) -> &[ValueType] {
        &self.types
    }

    pub fn norms(&self) -> &NormState {
        &self.norms
    }

    pub fn steps_done(&self) -> usize {
        self.steps_done
    }

    pub fn topology(&self) -> Option<&GridTopology> {
        self.topology.as_ref()
    }

    /// Runs one step drawing from the state's own random stream.
    pub fn step(&mut self) -> Result<(StepMetrics, StepDetail), ModelError> {
        let n = self.params.numagents;
        let with_order = self.params.budget_rule == BudgetRule::RandomOrder;
        let draws: Vec<DayDraws> = (0..n)
            .map(|_| {
                let shirk = self.rng.gen::<f64>();
                let coop = self.rng.gen::<f64>();
                let order = if with_order { self.rng.gen::<f64>() } else { 0.5 };
                DayDraws::with_order(shirk, coop, order)
            })
            .collect();
        let peers = match self.config.environment {
            Environment::Random => Some(sample_peers(&mut self.rng, n, self.params.numpeers)?),
            _ => None,
        };
        self.step_with_draws(&draws, peers.as_deref())
    }

    /// Runs one step with explicit uniform draws per agent and, for the random
    /// environment, explicit peer sets.
    pub fn step_with_draws(
        &mut self,
        draws: &[DayDraws],
        peers: Option<&[Vec<usize>]>,
    ) -> Result<(StepMetrics, StepDetail), ModelError> {
        let n = self.params.numagents;
        if draws.len() != n {
            return Err(ModelError::LengthMismatch {
                expected: n,
                actual: draws.len(),
            });
        }
        let p = &self.params;
        let ctx = BehaviorContext {
            stance: self.config.stance(),
            scheme: self.config.scheme(),
            tau: p.tau,
            budget_rule: p.budget_rule,
        };

        // (1) act
        let mut allocations = Vec::with_capacity(n);
        let mut mode_clamps = 0;
        let mut truncations = 0;
        for (i, &d) in draws.iter().enumerate() {
            let out = allocate_time(&self.profiles[i], self.norms.for_agent(i), &ctx, d)?;
            mode_clamps += out.mode_clamps;
            truncations += out.truncated as u32;
            allocations.push(out.allocation);
        }

        // (2) produce
        let received = coop_received(&allocations);
        let outputs: Vec<f64> = allocations
            .iter()
            .zip(&received)
            .map(|(a, &c)| output(a.production, c, p.kappa))
            .collect();

        // (3) pay
        let reward_params = RewardParams::new(p.wage, p.tau, ctx.scheme);
        let bonus = bonuses(&outputs, ctx.scheme.lambda());
        let rewards: Vec<f64> = bonus.iter().map(|&b| reward(&reward_params, b)).collect();

        // (4) update norms
        let next = match (&self.norms, self.config.environment) {
            (NormState::Global(prev), _) => NormState::Global(update_global(*prev, &allocations, p.h)?),
            (NormState::PerAgent(prev), Environment::Neighbours) => {
                let grid = self.topology.as_ref().expect("neighbours environment has a grid");
                NormState::PerAgent(update_neighbours(prev, &allocations, grid, p.h, p.norm_formula)?)
            }
            (NormState::PerAgent(prev), _) => {
                let peers = peers.ok_or(ModelError::InvalidParameter {
                    name: "peers",
                    reason: "random environment needs peer sets".into(),
                })?;
                NormState::PerAgent(update_random(prev, &allocations, peers, p.h, p.norm_formula)?)
            }
        };
        let norms_before = std::mem::replace(&mut self.norms, next);
        self.steps_done += 1;

        let detail = StepDetail {
            norms_before,
            allocations,
            coop_received: received,
            outputs,
            bonuses: bonus,
            rewards,
            mode_clamps,
            truncations,
        };
        // (5) record
        let metrics = self.summarize(&detail);
        Ok((metrics, detail))
    }

    fn summarize(&self, d: &StepDetail) -> StepMetrics {
        let n = self.params.numagents as f64;
        let tau = self.params.tau;
        let mut per_type = [TypeStats::default(); 4];
        let mut counts = [0usize; 4];
        for (i, t) in self.types.iter().enumerate() {
            let k = t.index();
            counts[k] += 1;
            let a = &d.allocations[i];
            per_type[k].production += a.production;
            per_type[k].cooperation += a.cooperation;
            per_type[k].shirking += a.shirking;
            per_type[k].output += d.outputs[i];
        }
        for (s, &c) in per_type.iter_mut().zip(&counts) {
            *s = if c == 0 { TypeStats::nan() } else { s.scaled(1.0 / c as f64) };
        }

        let mean = |f: &dyn Fn(&TimeAllocation) -> f64| d.allocations.iter().map(f).sum::<f64>() / n;
        let mean_output = d.outputs.iter().sum::<f64>() / n;

        let dev_c: Vec<f64> = d
            .allocations
            .iter()
            .enumerate()
            .map(|(i, a)| a.cooperation - d.norms_before.for_agent(i).cooperation)
            .collect();
        let dev_s: Vec<f64> = d
            .allocations
            .iter()
            .enumerate()
            .map(|(i, a)| a.shirking - d.norms_before.for_agent(i).shirking)
            .collect();
        let norm_mean = d.norms_before.mean();

        let max_budget_error = d
            .allocations
            .iter()
            .map(|a| (a.total() - tau).abs())
            .fold(0.0, f64::max);

        StepMetrics {
            step: self.steps_done,
            per_type,
            mean_production: mean(&|a| a.production),
            mean_cooperation: mean(&|a| a.cooperation),
            mean_shirking: mean(&|a| a.shirking),
            mean_output,
            pct_ogo: 100.0 * mean_output / self.params.optimal_group_output(),
            norm_cooperation: norm_mean.cooperation,
            norm_shirking: norm_mean.shirking,
            var_dev_cooperation: population_variance(&dev_c),
            var_dev_shirking: population_variance(&dev_s),
            total_reward: d.rewards.iter().sum(),
            total_bonus: self.config.scheme().mu() * d.bonuses.iter().sum::<f64>(),
            mode_clamps: d.mode_clamps as f64,
            truncations: d.truncations as f64,
            max_budget_error,
        }
    }
}

/// Population variance; a single observation has variance 0.
pub fn population_variance(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n
}

pub fn init_model(config: ScenarioConfig, params: &ModelParams, seed: u64) -> Result<ModelState, ModelError> {
    ModelState::new(config, params.clone(), seed)
}

/// One complete run.
pub fn run(config: ScenarioConfig, params: &ModelParams, seed: u64) -> Result<MetricsSeries, ModelError> {
    let mut state = init_model(config, params, seed)?;
    let mut rows = Vec::with_capacity(params.steps);
    for _ in 0..params.steps {
        rows.push(state.step()?.0);
    }
    Ok(MetricsSeries::new(rows))
}

pub const BUDGET_TOLERANCE: f64 = 1e-9;

/// Whole-run figures kept for every replicate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplicateSummary {
    pub seed: u64,
    pub aggregate_output: f64,
    pub labor_cost: f64,
    pub final_pct_ogo: f64,
    pub mode_clamps: f64,
    pub truncations: f64,
    /// Largest `|t_p + t_c + t_s - tau|` seen in any step.
    pub max_budget_error: f64,
    /// Whether the norms in force stayed inside `[0, tau]` throughout.
    pub norms_in_bounds: bool,
}

impl ReplicateSummary {
    fn of(seed: u64, series: &MetricsSeries, tau: f64) -> Self {
        let inside = |x: f64| (0.0..=tau).contains(&x);
        ReplicateSummary {
            seed,
            aggregate_output: series.aggregate_output(),
            labor_cost: series.labor_cost(),
            final_pct_ogo: series.last().map_or(f64::NAN, |r| r.pct_ogo),
            mode_clamps: series.rows().iter().map(|r| r.mode_clamps).sum(),
            truncations: series.rows().iter().map(|r| r.truncations).sum(),
            max_budget_error: series.rows().iter().map(|r| r.max_budget_error).fold(0.0, f64::max),
            norms_in_bounds: series
                .rows()
                .iter()
                .all(|r| inside(r.norm_cooperation) && inside(r.norm_shirking)),
        }
    }

    /// Budget conserved to `1e-9` and norms within bounds.
    pub fn diagnostics_ok(&self) -> bool {
        self.max_budget_error <= BUDGET_TOLERANCE && self.norms_in_bounds
    }
}

/// Replicate-averaged series plus per-replicate summaries.
#[derive(Clone, Debug, PartialEq)]
pub struct ReplicateSet {
    pub config: ScenarioConfig,
    pub mean: MetricsSeries,
    pub replicates: Vec<ReplicateSummary>,
}

impl ReplicateSet {
    pub fn diagnostics_ok(&self) -> bool {
        self.replicates.iter().all(ReplicateSummary::diagnostics_ok)
    }

    pub fn seeds(&self) -> Vec<u64> {
        self.replicates.iter().map(|r| r.seed).collect()
    }
}

/// Seed of replicate `index`: `base_seed + index`.
pub fn replicate_seed(base_seed: u64, index: usize) -> u64 {
    base_seed.wrapping_add(index as u64)
}

#[cfg(feature = "parallel")]
pub(crate) fn map_indices<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..count).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_indices<T, F>(count: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..count).map(f).collect()
}

pub fn run_replicates(
    config: ScenarioConfig,
    params: &ModelParams,
    n_replicates: usize,
    base_seed: u64,
) -> Result<ReplicateSet, ModelError> {
    if n_replicates == 0 {
        return Err(ModelError::InvalidParameter {
            name: "replicates",
            reason: "need at least one replicate".into(),
        });
    }
    params.validate()?;
    let runs: Vec<(u64, MetricsSeries)> = map_indices(n_replicates, |i| {
        let seed = replicate_seed(base_seed, i);
        run(config, params, seed).map(|s| (seed, s))
    })
    .into_iter()
    .collect::<Result<_, _>>()?;
    let replicates = runs.iter().map(|(seed, s)| ReplicateSummary::of(*seed, s, params.tau)).collect();
    let series: Vec<&MetricsSeries> = runs.iter().map(|(_, s)| s).collect();
    Ok(ReplicateSet {
        config,
        mean: MetricsSeries::average(&series),
        replicates,
    })
}

/// All nine scenarios for each requested environment.
pub fn run_matrix(
    params: &ModelParams,
    environments: &[Environment],
    n_replicates: usize,
    base_seed: u64,
) -> Result<BTreeMap<ScenarioConfig, ReplicateSet>, ModelError> {
    let configs: Vec<ScenarioConfig> = environments
        .iter()
        .flat_map(|&env| Scenario::ALL.into_iter().map(move |s| ScenarioConfig::new(s, env)))
        .collect();
    let sets = map_indices(configs.len(), |k| run_replicates(configs[k], params, n_replicates, base_seed));
    configs
        .into_iter()
        .zip(sets)
        .map(|(c, s)| s.map(|s| (c, s)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(n: usize, steps: usize) -> ModelParams {
        ModelParams {
            numagents: n,
            steps,
            ..ModelParams::default()
        }
    }

    #[test]
    fn scenario_grid() {
        assert_eq!(Scenario::Base.stance(), ManagementStance::Neutral);
        assert_eq!(Scenario::Trustcomp.scheme(), PayScheme::Individual);
        assert_eq!(Scenario::Contrcoop.stance(), ManagementStance::Controlling);
        for s in Scenario::ALL {
            assert_eq!(Scenario::from_parts(s.stance(), s.scheme()), s);
            assert_eq!(s.name().parse::<Scenario>().unwrap(), s);
        }
        assert_eq!("TRUSTING".parse::<Scenario>().unwrap(), Scenario::Trusting);
        assert!("laissez-faire".parse::<Scenario>().is_err());
    }

    #[test]
    fn quotas() {
        assert_eq!(type_quotas(&[0.25; 4], 100), [25; 4]);
        assert_eq!(type_quotas(&[0.7, 0.1, 0.1, 0.1], 100), [70, 10, 10, 10]);
        assert_eq!(type_quotas(&[0.25; 4], 10), [3, 3, 2, 2]);
        assert_eq!(type_quotas(&[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.0], 10).iter().sum::<usize>(), 10);
    }

    #[test]
    fn init_counts_types_exactly() {
        let s = init_model(ScenarioConfig::global(Scenario::Base), &ModelParams::default(), 9).unwrap();
        for t in ValueType::ALL {
            assert_eq!(s.types().iter().filter(|&&x| x == t).count(), 25);
        }
        let skew = ModelParams {
            dist: [0.7, 0.1, 0.1, 0.1],
            ..ModelParams::default()
        };
        let s = init_model(ScenarioConfig::global(Scenario::Base), &skew, 9).unwrap();
        assert_eq!(s.types().iter().filter(|&&x| x == ValueType::C).count(), 70);
        assert_eq!(s.norms(), &NormState::Global(NormPair::new(10.0 / 3.0, 10.0 / 3.0)));
    }

    #[test]
    fn init_rejects_bad_params() {
        let bad = ModelParams {
            dist: [0.5, 0.5, 0.5, 0.0],
            ..ModelParams::default()
        };
        assert!(matches!(
            init_model(ScenarioConfig::global(Scenario::Base), &bad, 1),
            Err(ModelError::InvalidTypeDistribution { .. })
        ));
        assert!(matches!(
            init_model(ScenarioConfig::new(Scenario::Base, Environment::Neighbours), &small(7, 1), 1),
            Err(ModelError::NonRectangularPopulation { agents: 7 })
        ));
        assert!(matches!(
            init_model(ScenarioConfig::new(Scenario::Base, Environment::Random), &small(8, 1), 1),
            Err(ModelError::TooManyPeers { .. })
        ));
    }

    #[test]
    fn same_seed_same_state() {
        let a = init_model(ScenarioConfig::global(Scenario::Base), &ModelParams::default(), 5).unwrap();
        let b = init_model(ScenarioConfig::global(Scenario::Base), &ModelParams::default(), 5).unwrap();
        assert_eq!(a.types(), b.types());
        let mut a = a;
        let mut b = b;
        assert_eq!(a.step().unwrap(), b.step().unwrap());
    }

    #[test]
    fn frozen_norms_with_zero_rate() {
        let params = ModelParams {
            h: 0.0,
            steps: 50,
            ..ModelParams::default()
        };
        for env in Environment::ALL {
            let mut s = init_model(ScenarioConfig::new(Scenario::Controlling, env), &params, 2).unwrap();
            for _ in 0..50 {
                s.step().unwrap();
            }
            for i in 0..params.numagents {
                assert_eq!(s.norms().for_agent(i), params.starting_norms());
            }
        }
    }

    #[test]
    fn collapsed_norms_step() {
        let params = ModelParams {
            initial_norms: Some(NormPair::new(0.0, 0.0)),
            ..small(10, 1)
        };
        let mut s = init_model(ScenarioConfig::global(Scenario::Trustcoop), &params, 4).unwrap();
        let (m, d) = s.step().unwrap();
        assert!(d.allocations.iter().all(|a| a.production == 10.0 && a.cooperation == 0.0));
        assert!(d.outputs.iter().all(|&o| o == 0.0));
        assert_eq!(m.pct_ogo, 0.0);
    }

    #[test]
    fn single_agent_has_zero_deviation_variance() {
        let params = small(1, 20);
        let series = run(ScenarioConfig::global(Scenario::Base), &params, 1).unwrap();
        assert!(series.rows().iter().all(|r| r.var_dev_cooperation == 0.0 && r.var_dev_shirking == 0.0));
    }

    #[test]
    fn variance_helper() {
        assert_eq!(population_variance(&[3.0]), 0.0);
        assert_eq!(population_variance(&[]), 0.0);
        assert_eq!(population_variance(&[1.0, 3.0]), 1.0);
    }

    #[test]
    fn replicate_seeds_are_additive() {
        let set = run_replicates(ScenarioConfig::global(Scenario::Base), &small(12, 5), 3, 40).unwrap();
        assert_eq!(set.seeds(), vec![40, 41, 42]);
        let single = run_replicates(ScenarioConfig::global(Scenario::Base), &small(12, 5), 1, 40).unwrap();
        assert_eq!(single.mean, run(ScenarioConfig::global(Scenario::Base), &small(12, 5), 40).unwrap());
    }

    #[test]
    fn matrix_cardinality() {
        let m = run_matrix(&small(9, 3), &Environment::ALL, 1, 0).unwrap();
        assert_eq!(m.len(), 27);
        assert!(m.values().all(|s| s.mean.len() == 3));
    }
}
