//! Bonuses, total rewards, and labor cost. Output units convert 1:1 to currency.

use crate::behavior::PayScheme;
use crate::error::ModelError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RewardParams {
    pub wage: f64,
    pub scheme: PayScheme,
    pub base_wage: f64,
}

impl RewardParams {
    pub fn new(wage: f64, tau: f64, scheme: PayScheme) -> Self {
        RewardParams {
            wage,
            scheme,
            base_wage: wage * tau,
        }
    }
}

pub fn bonus(outputs: &[f64], i: usize, lambda: f64) -> Result<f64, ModelError> {
    if outputs.is_empty() {
        return Err(ModelError::EmptyPopulation);
    }
    let group_mean = outputs.iter().sum::<f64>() / outputs.len() as f64;
    Ok((1.0 - lambda) * outputs[i] + lambda * group_mean)
}

/// Bonuses for every agent, sharing one group mean.
pub fn bonuses(outputs: &[f64], lambda: f64) -> Vec<f64> {
    if outputs.is_empty() {
        return Vec::new();
    }
    let group_mean = outputs.iter().sum::<f64>() / outputs.len() as f64;
    outputs
        .iter()
        .map(|&o| if lambda == 0.0 { o } else { (1.0 - lambda) * o + lambda * group_mean })
        .collect()
}

pub fn reward(params: &RewardParams, bonus: f64) -> f64 {
    params.base_wage + params.scheme.mu() * bonus
}

/// Sum over steps of the per-step population reward totals.
pub fn cumulative_labor_cost(step_totals: &[f64]) -> f64 {
    step_totals.iter().sum()
}
