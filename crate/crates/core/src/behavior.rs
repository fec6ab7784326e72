//! Value types, their deviation distributions, and the daily time allocation.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distributions::Triangular;
use crate::error::ModelError;
use crate::norms::NormPair;

/// Dominant personal value of an agent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ValueType {
    /// Conservation: conformity and security.
    C,
    /// Openness to change: self-direction.
    O,
    /// Self-enhancement: power and achievement.
    SE,
    /// Self-transcendence: benevolence and universalism.
    ST,
}

impl ValueType {
    pub const ALL: [ValueType; 4] = [ValueType::C, ValueType::O, ValueType::SE, ValueType::ST];

    pub fn index(self) -> usize {
        match self {
            ValueType::C => 0,
            ValueType::O => 1,
            ValueType::SE => 2,
            ValueType::ST => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ValueType::C => "C",
            ValueType::O => "O",
            ValueType::SE => "SE",
            ValueType::ST => "ST",
        }
    }

    pub fn profile(self) -> BehaviorProfile {
        BehaviorProfile::for_type(self)
    }
}

impl fmt::Display for ValueType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Management stance toward employees.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ManagementStance {
    Trusting,
    Neutral,
    Controlling,
}

impl ManagementStance {
    /// Numeric stance: 0 trusting, 0.5 neutral, 1 controlling.
    pub fn sigma(self) -> f64 {
        match self {
            ManagementStance::Trusting => 0.0,
            ManagementStance::Neutral => 0.5,
            ManagementStance::Controlling => 1.0,
        }
    }
}

/// Remuneration regime. The fixed wage has no bonus (`mu = 0`); the two
/// pay-for-performance plans pay on individual (`lambda = 0`) or group
/// (`lambda = 1`) output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PayScheme {
    FixedWage,
    Individual,
    Group,
}

impl PayScheme {
    pub fn from_flags(mu: u8, lambda: u8) -> Result<Self, ModelError> {
        match (mu, lambda) {
            (0, 0) | (0, 1) => Ok(PayScheme::FixedWage),
            (1, 0) => Ok(PayScheme::Individual),
            (1, 1) => Ok(PayScheme::Group),
            _ => Err(ModelError::InvalidParameter {
                name: "mu/lambda",
                reason: format!("both must be 0 or 1, got mu={mu} lambda={lambda}"),
            }),
        }
    }

    pub fn mu(self) -> f64 {
        match self {
            PayScheme::FixedWage => 0.0,
            _ => 1.0,
        }
    }

    /// Reward interdependence. Normalized to 0 for the fixed wage.
    pub fn lambda(self) -> f64 {
        match self {
            PayScheme::Group => 1.0,
            _ => 0.0,
        }
    }
}

/// Per-type behavioral parameters.
///
/// `gamma` and `phi` shift the mode by a multiple of `norm * delta`; `rho`
/// shifts the cooperation mode by a multiple of the bare cooperation norm.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BehaviorProfile {
    pub delta: f64,
    pub gamma: f64,
    pub phi_trusting: f64,
    pub phi_controlling: f64,
    pub rho_individual: f64,
    pub rho_group: f64,
}

impl BehaviorProfile {
    pub fn for_type(value_type: ValueType) -> Self {
        match value_type {
            ValueType::C => BehaviorProfile {
                delta: 1.0 / 3.0,
                gamma: 0.0,
                phi_trusting: 0.5,
                phi_controlling: -0.5,
                rho_individual: 0.0,
                rho_group: 0.0,
            },
            ValueType::O => BehaviorProfile {
                delta: 1.0,
                gamma: 0.0,
                phi_trusting: -0.5,
                phi_controlling: 0.5,
                rho_individual: 0.0,
                rho_group: 0.0,
            },
            ValueType::SE => BehaviorProfile {
                delta: 2.0 / 3.0,
                gamma: -0.5,
                phi_trusting: 0.0,
                phi_controlling: 0.0,
                rho_individual: -0.5,
                rho_group: 0.1,
            },
            ValueType::ST => BehaviorProfile {
                delta: 2.0 / 3.0,
                gamma: 0.5,
                phi_trusting: 0.0,
                phi_controlling: 0.0,
                rho_individual: -0.1,
                rho_group: 0.5,
            },
        }
    }

    /// Same deviation width, all mode offsets removed.
    pub fn without_offsets(self) -> Self {
        BehaviorProfile {
            delta: self.delta,
            gamma: 0.0,
            phi_trusting: 0.0,
            phi_controlling: 0.0,
            rho_individual: 0.0,
            rho_group: 0.0,
        }
    }

    pub fn phi(&self, stance: ManagementStance) -> f64 {
        match stance {
            ManagementStance::Trusting => self.phi_trusting,
            ManagementStance::Neutral => 0.0,
            ManagementStance::Controlling => self.phi_controlling,
        }
    }

    pub fn rho(&self, scheme: PayScheme) -> f64 {
        match scheme {
            PayScheme::FixedWage => 0.0,
            PayScheme::Individual => self.rho_individual,
            PayScheme::Group => self.rho_group,
        }
    }
}

/// One agent's working day. The three parts always sum to the daily budget.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TimeAllocation {
    pub production: f64,
    pub cooperation: f64,
    pub shirking: f64,
}

impl TimeAllocation {
    pub fn total(&self) -> f64 {
        self.production + self.cooperation + self.shirking
    }
}

/// How an over-committed day (intended shirking plus intended cooperation
/// above the budget) is cut back.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BudgetRule {
    /// Shirking is realized in full; cooperation gets what remains.
    ShirkFirst,
    /// Cooperation is realized in full; shirking gets what remains.
    CoopFirst,
    /// Both are scaled down by the same factor to fill the budget exactly.
    Proportional,
    /// A third uniform draw decides which activity is served first.
    RandomOrder,
}

impl FromStr for BudgetRule {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "shirkfirst" => Ok(BudgetRule::ShirkFirst),
            "coopfirst" => Ok(BudgetRule::CoopFirst),
            "proportional" => Ok(BudgetRule::Proportional),
            "randomorder" => Ok(BudgetRule::RandomOrder),
            _ => Err(ModelError::InvalidParameter {
                name: "budget_rule",
                reason: format!("expected shirk-first, coop-first, proportional or random-order, got '{s}'"),
            }),
        }
    }
}

impl fmt::Display for BudgetRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BudgetRule::ShirkFirst => "shirk-first",
            BudgetRule::CoopFirst => "coop-first",
            BudgetRule::Proportional => "proportional",
            BudgetRule::RandomOrder => "random-order",
        })
    }
}

/// Symmetric support `[norm (1 - delta), norm (1 + delta)]` around a norm.
pub fn deviation_bounds(norm: f64, delta: f64) -> (f64, f64) {
    (norm * (1.0 - delta), norm * (1.0 + delta))
}

/// A deviation distribution together with whether its raw mode had to be
/// pulled back into the support.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Deviation {
    pub distribution: Triangular,
    pub mode_clamped: bool,
}

fn skewed(norm: f64, delta: f64, offset: f64) -> Result<Deviation, ModelError> {
    let (lower, upper) = deviation_bounds(norm, delta);
    let raw = norm + offset;
    let mode = raw.clamp(lower, upper);
    Ok(Deviation {
        distribution: Triangular::new(lower, mode, upper)?,
        mode_clamped: mode != raw,
    })
}

pub fn shirking_distribution(
    profile: &BehaviorProfile,
    shirk_norm: f64,
    stance: ManagementStance,
) -> Result<Deviation, ModelError> {
    let offset = profile.phi(stance) * shirk_norm * profile.delta;
    skewed(shirk_norm, profile.delta, offset)
}

pub fn cooperation_distribution(
    profile: &BehaviorProfile,
    coop_norm: f64,
    scheme: PayScheme,
) -> Result<Deviation, ModelError> {
    let offset = profile.gamma * coop_norm * profile.delta
        + scheme.mu() * profile.rho(scheme) * coop_norm;
    skewed(coop_norm, profile.delta, offset)
}

/// Scenario context an agent acts in.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BehaviorContext {
    pub stance: ManagementStance,
    pub scheme: PayScheme,
    pub tau: f64,
    pub budget_rule: BudgetRule,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AllocationOutcome {
    pub allocation: TimeAllocation,
    pub intended_shirking: f64,
    pub intended_cooperation: f64,
    /// Number of mode clamps (0, 1 or 2) in building the two distributions.
    pub mode_clamps: u32,
    /// Intended shirking plus cooperation exceeded the budget.
    pub truncated: bool,
}

/// Uniform draws consumed by one agent in one day.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DayDraws {
    pub shirk: f64,
    pub coop: f64,
    /// Only read by [`BudgetRule::RandomOrder`]: below 0.5 serves shirking first.
    pub order: f64,
}

impl DayDraws {
    pub fn new(shirk: f64, coop: f64) -> Self {
        DayDraws { shirk, coop, order: 0.5 }
    }

    pub fn with_order(shirk: f64, coop: f64, order: f64) -> Self {
        DayDraws { shirk, coop, order }
    }
}

/// Realizes one day: samples shirking and cooperation, fits both into the
/// budget, and leaves the rest to individual work.
pub fn allocate_time(
    profile: &BehaviorProfile,
    norms: NormPair,
    ctx: &BehaviorContext,
    draws: DayDraws,
) -> Result<AllocationOutcome, ModelError> {
    let shirk = shirking_distribution(profile, norms.shirking, ctx.stance)?;
    let coop = cooperation_distribution(profile, norms.cooperation, ctx.scheme)?;
    let intended_shirking = shirk.distribution.sample(draws.shirk);
    let intended_cooperation = coop.distribution.sample(draws.coop);
    let tau = ctx.tau;

    let truncated = intended_shirking + intended_cooperation > tau;
    let (shirking, cooperation) = if !truncated {
        (intended_shirking, intended_cooperation)
    } else {
        let shirk_first = |s: f64, c: f64| {
            let s = s.min(tau);
            (s, c.min(tau - s))
        };
        let coop_first = |s: f64, c: f64| {
            let c = c.min(tau);
            (s.min(tau - c), c)
        };
        match ctx.budget_rule {
            BudgetRule::ShirkFirst => shirk_first(intended_shirking, intended_cooperation),
            BudgetRule::CoopFirst => coop_first(intended_shirking, intended_cooperation),
            BudgetRule::RandomOrder if draws.order < 0.5 => shirk_first(intended_shirking, intended_cooperation),
            BudgetRule::RandomOrder => coop_first(intended_shirking, intended_cooperation),
            BudgetRule::Proportional => {
                let scale = tau / (intended_shirking + intended_cooperation);
                let s = intended_shirking * scale;
                (s, tau - s)
            }
        }
    };
    let production = (tau - shirking - cooperation).max(0.0);

    Ok(AllocationOutcome {
        allocation: TimeAllocation {
            production,
            cooperation,
            shirking,
        },
        intended_shirking,
        intended_cooperation,
        mode_clamps: shirk.mode_clamped as u32 + coop.mode_clamped as u32,
        truncated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    fn ctx(stance: ManagementStance, scheme: PayScheme, rule: BudgetRule) -> BehaviorContext {
        BehaviorContext {
            stance,
            scheme,
            tau: 10.0,
            budget_rule: rule,
        }
    }

    #[test]
    fn bounds() {
        assert_eq!(deviation_bounds(3.0, 1.0), (0.0, 6.0));
        let (lo, hi) = deviation_bounds(3.0, 1.0 / 3.0);
        assert!(close(lo, 2.0) && close(hi, 4.0));
        assert_eq!(deviation_bounds(0.0, 2.0 / 3.0), (0.0, 0.0));
    }

    #[test]
    fn shirking_examples() {
        let o = ValueType::O.profile();
        let d = shirking_distribution(&o, 3.0, ManagementStance::Controlling).unwrap();
        assert_eq!(d.distribution, Triangular::new(0.0, 4.5, 6.0).unwrap());
        assert!(!d.mode_clamped);

        let c = ValueType::C.profile();
        let d = shirking_distribution(&c, 3.0, ManagementStance::Neutral).unwrap().distribution;
        assert!(close(d.lower(), 2.0) && close(d.mode(), 3.0) && close(d.upper(), 4.0));

        let d = shirking_distribution(&c, 3.0, ManagementStance::Trusting).unwrap().distribution;
        assert!(close(d.lower(), 2.0) && close(d.mode(), 3.5) && close(d.upper(), 4.0));
    }

    #[test]
    fn cooperation_examples() {
        let st = ValueType::ST.profile();
        let d = cooperation_distribution(&st, 3.0, PayScheme::FixedWage).unwrap().distribution;
        assert!(close(d.lower(), 1.0) && close(d.mode(), 4.0) && close(d.upper(), 5.0));

        let se = ValueType::SE.profile();
        let dev = cooperation_distribution(&se, 3.0, PayScheme::Individual).unwrap();
        let d = dev.distribution;
        assert!(close(d.lower(), 1.0) && close(d.mode(), 1.0) && close(d.upper(), 5.0));
        assert!(dev.mode_clamped);

        let c = ValueType::C.profile();
        let d = cooperation_distribution(&c, 3.0, PayScheme::Group).unwrap().distribution;
        assert!(close(d.lower(), 2.0) && close(d.mode(), 3.0) && close(d.upper(), 4.0));
    }

    #[test]
    fn stance_offsets_are_antisymmetric() {
        for t in [ValueType::C, ValueType::O] {
            let p = t.profile();
            assert_eq!(p.phi(ManagementStance::Trusting), -p.phi(ManagementStance::Controlling));
            assert_eq!(p.phi(ManagementStance::Neutral), 0.0);
        }
        for t in [ValueType::SE, ValueType::ST] {
            let p = t.profile();
            assert_eq!(p.phi(ManagementStance::Trusting), 0.0);
            assert_eq!(p.phi(ManagementStance::Controlling), 0.0);
        }
    }

    #[test]
    fn median_draws_reproduce_norm_allocation() {
        let t = 10.0 / 3.0;
        let norms = NormPair::new(t, t);
        for vt in [ValueType::C, ValueType::O] {
            let out = allocate_time(
                &vt.profile(),
                norms,
                &ctx(ManagementStance::Neutral, PayScheme::FixedWage, BudgetRule::ShirkFirst),
                DayDraws::new(0.5, 0.5),
            )
            .unwrap();
            let a = out.allocation;
            assert!(close(a.shirking, t) && close(a.cooperation, t) && close(a.production, t));
        }
    }

    fn o_type_overcommitted(rule: BudgetRule, shirk_norm: f64, coop_norm: f64, us: f64, uc: f64) -> AllocationOutcome {
        allocate_time(
            &ValueType::O.profile(),
            NormPair::new(coop_norm, shirk_norm),
            &ctx(ManagementStance::Neutral, PayScheme::FixedWage, rule),
            DayDraws::new(us, uc),
        )
        .unwrap()
    }

    #[test]
    fn shirk_first_leaves_no_individual_work() {
        // O-type shirking on Triangular(0, 4, 8): u = 0.9296875 gives 6.5.
        // Cooperation on Triangular(0, 4, 8): the median draw gives 4.0.
        let out = o_type_overcommitted(BudgetRule::ShirkFirst, 4.0, 4.0, 0.9296875, 0.5);
        assert!(close(out.intended_shirking, 6.5));
        assert!(close(out.intended_cooperation, 4.0));
        let a = out.allocation;
        assert!(close(a.shirking, 6.5) && close(a.cooperation, 3.5) && a.production == 0.0);
        assert!(out.truncated);
    }

    #[test]
    fn shirking_above_budget_is_capped() {
        // Shirking norm 6 with delta 1 has support [0, 12]; u = 0.875 gives 9,
        // u = 0.96875 gives 12 - sqrt(0.03125 * 72) = 10.5.
        let out = o_type_overcommitted(BudgetRule::ShirkFirst, 6.0, 2.0, 0.96875, 0.5);
        assert!(close(out.intended_shirking, 10.5));
        let a = out.allocation;
        assert_eq!((a.shirking, a.cooperation, a.production), (10.0, 0.0, 0.0));
    }

    #[test]
    fn coop_first_and_proportional() {
        let out = o_type_overcommitted(BudgetRule::CoopFirst, 4.0, 4.0, 0.9296875, 0.5);
        let a = out.allocation;
        assert!(close(a.cooperation, 4.0) && close(a.shirking, 6.0) && a.production == 0.0);

        let out = o_type_overcommitted(BudgetRule::Proportional, 4.0, 4.0, 0.9296875, 0.5);
        let a = out.allocation;
        assert!(close(a.shirking, 6.5 * 10.0 / 10.5));
        assert!(close(a.cooperation, 4.0 * 10.0 / 10.5));
        assert_eq!(a.production, 0.0);
    }

    #[test]
    fn collapsed_norms_give_full_individual_work() {
        let out = allocate_time(
            &ValueType::ST.profile(),
            NormPair::new(0.0, 0.0),
            &ctx(ManagementStance::Trusting, PayScheme::Group, BudgetRule::Proportional),
            DayDraws::new(0.3, 0.9),
        )
        .unwrap();
        assert_eq!(out.allocation, TimeAllocation { production: 10.0, cooperation: 0.0, shirking: 0.0 });
    }

    #[test]
    fn budget_rule_parses() {
        assert_eq!("shirk-first".parse::<BudgetRule>().unwrap(), BudgetRule::ShirkFirst);
        assert_eq!("Coop_First".parse::<BudgetRule>().unwrap(), BudgetRule::CoopFirst);
        assert_eq!("proportional".parse::<BudgetRule>().unwrap(), BudgetRule::Proportional);
        assert!("random".parse::<BudgetRule>().is_err());
    }

    #[test]
    fn scheme_flags() {
        assert_eq!(PayScheme::from_flags(0, 1).unwrap(), PayScheme::FixedWage);
        assert_eq!(PayScheme::from_flags(1, 0).unwrap(), PayScheme::Individual);
        assert_eq!(PayScheme::Group.lambda(), 1.0);
        assert_eq!(PayScheme::FixedWage.lambda(), 0.0);
        assert!(PayScheme::from_flags(2, 0).is_err());
    }
}
