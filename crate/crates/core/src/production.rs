//! Cobb-Douglas output and the optimal-group-output normalizer.

use crate::behavior::TimeAllocation;
use crate::error::ModelError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProductionParams {
    pub kappa: f64,
    pub tau: f64,
}

impl ProductionParams {
    pub fn new(kappa: f64, tau: f64) -> Result<Self, ModelError> {
        if !(0.0..=1.0).contains(&kappa) {
            return Err(ModelError::InvalidParameter {
                name: "kappa",
                reason: format!("task interdependence must lie in [0, 1], got {kappa}"),
            });
        }
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(ModelError::InvalidParameter {
                name: "tau",
                reason: format!("daily time budget must be positive, got {tau}"),
            });
        }
        Ok(ProductionParams { kappa, tau })
    }

    pub fn optimal_group_output(&self) -> f64 {
        optimal_group_output(self.tau, self.kappa)
    }
}

/// `base^exp` with `0^0 = 1`.
fn power(base: f64, exp: f64) -> f64 {
    if exp == 0.0 {
        1.0
    } else {
        base.powf(exp)
    }
}

/// Mean cooperation time of everyone except agent `i`.
pub fn mean_coop_others(allocations: &[TimeAllocation], i: usize) -> Result<f64, ModelError> {
    let n = allocations.len();
    if n < 2 {
        return Err(ModelError::TooFewAgents { required: 2, actual: n });
    }
    let others: f64 = allocations
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, a)| a.cooperation)
        .sum();
    Ok(others / (n - 1) as f64)
}

/// Co-worker cooperation for every agent from one shared sum.
///
/// A lone agent has no co-workers and receives no cooperation.
pub fn coop_received(allocations: &[TimeAllocation]) -> Vec<f64> {
    let n = allocations.len();
    if n < 2 {
        return vec![0.0; n];
    }
    let total: f64 = allocations.iter().map(|a| a.cooperation).sum();
    let others = (n - 1) as f64;
    allocations
        .iter()
        .map(|a| ((total - a.cooperation) / others).max(0.0))
        .collect()
}

/// `t_p^(1 - kappa) * coop^kappa`.
pub fn output(production_time: f64, mean_coop: f64, kappa: f64) -> f64 {
    power(production_time, 1.0 - kappa) * power(mean_coop, kappa)
}

pub fn optimal_group_output(tau: f64, kappa: f64) -> f64 {
    output(tau * (1.0 - kappa), tau * kappa, kappa)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coop(c: f64) -> TimeAllocation {
        TimeAllocation {
            production: 0.0,
            cooperation: c,
            shirking: 10.0 - c,
        }
    }

    #[test]
    fn mean_coop_others_examples() {
        let all3 = vec![coop(3.0); 5];
        for i in 0..5 {
            assert_eq!(mean_coop_others(&all3, i).unwrap(), 3.0);
        }
        let v = vec![coop(0.0), coop(6.0), coop(3.0)];
        assert_eq!(mean_coop_others(&v, 0).unwrap(), 4.5);

        let mut lone = vec![coop(0.0); 100];
        lone[17] = coop(10.0);
        assert_eq!(mean_coop_others(&lone, 17).unwrap(), 0.0);
        assert_eq!(
            mean_coop_others(&[coop(1.0)], 0),
            Err(ModelError::TooFewAgents { required: 2, actual: 1 })
        );
    }

    #[test]
    fn shared_sum_matches_direct() {
        let v: Vec<_> = (0..7).map(|i| coop(i as f64 * 0.7)).collect();
        let fast = coop_received(&v);
        for i in 0..7 {
            assert!((fast[i] - mean_coop_others(&v, i).unwrap()).abs() < 1e-12);
        }
        assert_eq!(coop_received(&[coop(2.0)]), vec![0.0]);
    }

    #[test]
    fn output_examples() {
        assert!((output(5.0, 5.0, 0.5) - 5.0).abs() < 1e-12);
        assert_eq!(output(4.0, 0.0, 0.5), 0.0);
        assert!((output(3.44, 3.29, 0.5) - 3.364_164_086).abs() < 1e-6);
        assert_eq!(output(0.0, 4.0, 0.0), 0.0);
        assert_eq!(output(0.0, 4.0, 1.0), 4.0);
        assert_eq!(output(7.0, 0.0, 0.0), 7.0);
        assert_eq!(output(0.0, 0.0, 0.0), 0.0);
        assert_eq!(output(0.0, 0.0, 1.0), 0.0);
    }

    #[test]
    fn ogo_examples() {
        assert!((optimal_group_output(10.0, 0.5) - 5.0).abs() < 1e-12);
        assert_eq!(optimal_group_output(10.0, 0.0), 10.0);
        assert_eq!(optimal_group_output(10.0, 1.0), 10.0);
        let p = ProductionParams::new(0.5, 10.0).unwrap();
        assert!((p.optimal_group_output() - 5.0).abs() < 1e-12);
        assert!(ProductionParams::new(1.2, 10.0).is_err());
        assert!(ProductionParams::new(0.5, 0.0).is_err());
    }
}
