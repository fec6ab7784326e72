//! Randomized invariants of the model building blocks and the engine.

use crate::behavior::{allocate_time, BehaviorContext, DayDraws};
use crate::norms::update_global;
use crate::production::{coop_received, mean_coop_others, output};
use crate::rewards::bonuses;
use crate::{
    BudgetRule, ManagementStance, ModelParams, ModelState, NormPair, PayScheme, Scenario, ScenarioConfig,
    TimeAllocation, Triangular, ValueType,
};
use proptest::prelude::*;

fn value_type() -> impl Strategy<Value = ValueType> {
    prop::sample::select(ValueType::ALL.to_vec())
}

fn stance() -> impl Strategy<Value = ManagementStance> {
    prop::sample::select(vec![ManagementStance::Trusting, ManagementStance::Neutral, ManagementStance::Controlling])
}

fn scheme() -> impl Strategy<Value = PayScheme> {
    prop::sample::select(vec![PayScheme::FixedWage, PayScheme::Individual, PayScheme::Group])
}

fn rule() -> impl Strategy<Value = BudgetRule> {
    prop::sample::select(vec![
        BudgetRule::ShirkFirst,
        BudgetRule::CoopFirst,
        BudgetRule::Proportional,
        BudgetRule::RandomOrder,
    ])
}

fn allocation() -> impl Strategy<Value = TimeAllocation> {
    (0.0..10.0f64, 0.0..1.0f64).prop_map(|(c, f)| {
        let s = (10.0 - c) * f;
        TimeAllocation {
            production: 10.0 - c - s,
            cooperation: c,
            shirking: s,
        }
    })
}

proptest! {
    #[test]
    fn day_fills_budget_exactly(
        t in value_type(), st in stance(), sc in scheme(), r in rule(),
        nc in 0.0..10.0f64, ns in 0.0..10.0f64,
        us in 0.0..=1.0f64, uc in 0.0..=1.0f64, uo in 0.0..1.0f64,
    ) {
        let ctx = BehaviorContext { stance: st, scheme: sc, tau: 10.0, budget_rule: r };
        let out = allocate_time(&t.profile(), NormPair::new(nc, ns), &ctx, DayDraws::with_order(us, uc, uo)).unwrap();
        let a = out.allocation;
        prop_assert!(a.production >= 0.0 && a.cooperation >= 0.0 && a.shirking >= 0.0);
        prop_assert!((a.total() - 10.0).abs() <= 1e-9);
        prop_assert!(a.shirking <= out.intended_shirking + 1e-12);
        prop_assert!(a.cooperation <= out.intended_cooperation + 1e-12);
        prop_assert_eq!(out.truncated, out.intended_shirking + out.intended_cooperation > 10.0);
    }

    #[test]
    fn samples_stay_in_support(a in 0.0..5.0f64, w1 in 0.0..5.0f64, w2 in 0.0..5.0f64, u in 0.0..=1.0f64) {
        let tri = Triangular::new(a, a + w1, a + w1 + w2).unwrap();
        let x = tri.sample(u);
        prop_assert!(x >= tri.lower() && x <= tri.upper());
        prop_assert!((tri.cdf(x) - u).abs() < 1e-9 || tri.is_degenerate());
    }

    #[test]
    fn cdf_is_monotone(a in 0.0..5.0f64, w1 in 0.0..5.0f64, w2 in 0.01..5.0f64, x in -1.0..16.0f64, dx in 0.0..2.0f64) {
        let tri = Triangular::new(a, a + w1, a + w1 + w2).unwrap();
        prop_assert!(tri.cdf(x) <= tri.cdf(x + dx));
        prop_assert!((0.0..=1.0).contains(&tri.cdf(x)));
    }

    #[test]
    fn global_norm_is_convex(
        prev_c in 0.0..10.0f64, prev_s in 0.0..10.0f64,
        allocs in prop::collection::vec(allocation(), 1..40),
        h in 0.0..=1.0f64,
    ) {
        let next = update_global(NormPair::new(prev_c, prev_s), &allocs, h).unwrap();
        let n = allocs.len() as f64;
        let oc = allocs.iter().map(|a| a.cooperation).sum::<f64>() / n;
        let os = allocs.iter().map(|a| a.shirking).sum::<f64>() / n;
        prop_assert!(next.cooperation >= prev_c.min(oc) - 1e-12 && next.cooperation <= prev_c.max(oc) + 1e-12);
        prop_assert!(next.shirking >= prev_s.min(os) - 1e-12 && next.shirking <= prev_s.max(os) + 1e-12);
    }

    #[test]
    fn shared_sum_cooperation_matches_direct(allocs in prop::collection::vec(allocation(), 2..40)) {
        let fast = coop_received(&allocs);
        for (i, f) in fast.iter().enumerate() {
            prop_assert!((f - mean_coop_others(&allocs, i).unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn output_never_exceeds_optimum(tp in 0.0..10.0f64, f in 0.0..1.0f64, kappa in 0.0..=1.0f64) {
        // an agent that gets back as much cooperation as it gives
        let c = (10.0 - tp) * f;
        let o = output(tp, c, kappa);
        prop_assert!(o <= crate::production::optimal_group_output(tp + c, kappa) + 1e-9);
    }

    #[test]
    fn bonus_mass_is_lambda_invariant(outs in prop::collection::vec(0.0..10.0f64, 1..100), lambda in 0.0..=1.0f64) {
        let ind: f64 = bonuses(&outs, 0.0).iter().sum();
        let mixed: f64 = bonuses(&outs, lambda).iter().sum();
        prop_assert!((ind - mixed).abs() <= 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn engine_rows_are_consistent(seed in any::<u64>(), s in prop::sample::select(Scenario::ALL.to_vec())) {
        let params = ModelParams { steps: 30, ..ModelParams::default() };
        let mut state = ModelState::new(ScenarioConfig::global(s), params.clone(), seed).unwrap();
        for _ in 0..params.steps {
            let (m, d) = state.step().unwrap();
            prop_assert!(m.max_budget_error <= 1e-9);
            let n = d.outputs.len() as f64;
            prop_assert!((m.mean_output - d.outputs.iter().sum::<f64>() / n).abs() < 1e-12);
            prop_assert!((m.total_reward - d.rewards.iter().sum::<f64>()).abs() < 1e-9);
            prop_assert!(m.pct_ogo >= 0.0);
            let norms = state.norms().mean();
            prop_assert!((0.0..=10.0).contains(&norms.cooperation) && (0.0..=10.0).contains(&norms.shirking));
        }
    }
}
