//! Per-step metrics rows, series, and their CSV form.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::behavior::ValueType;

/// Mean times and output of one value type in one step.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TypeStats {
    pub production: f64,
    pub cooperation: f64,
    pub shirking: f64,
    pub output: f64,
}

impl TypeStats {
    pub fn nan() -> Self {
        TypeStats {
            production: f64::NAN,
            cooperation: f64::NAN,
            shirking: f64::NAN,
            output: f64::NAN,
        }
    }

    pub fn scaled(self, k: f64) -> Self {
        TypeStats {
            production: self.production * k,
            cooperation: self.cooperation * k,
            shirking: self.shirking * k,
            output: self.output * k,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StepMetrics {
    /// 1-based step index.
    pub step: usize,
    /// Indexed by [`ValueType::index`].
    pub per_type: [TypeStats; 4],
    pub mean_production: f64,
    pub mean_cooperation: f64,
    pub mean_shirking: f64,
    pub mean_output: f64,
    /// Mean output as a percentage of the optimal group output.
    pub pct_ogo: f64,
    /// Norms in force during the step (population mean for local norms).
    pub norm_cooperation: f64,
    pub norm_shirking: f64,
    /// Population variance of realized minus applicable norm.
    pub var_dev_cooperation: f64,
    pub var_dev_shirking: f64,
    pub total_reward: f64,
    pub total_bonus: f64,
    pub mode_clamps: f64,
    pub truncations: f64,
    pub max_budget_error: f64,
}

const TAIL_COLUMNS: [&str; 14] = [
    "mean_production",
    "mean_cooperation",
    "mean_shirking",
    "mean_output",
    "pct_ogo",
    "norm_cooperation",
    "norm_shirking",
    "var_dev_cooperation",
    "var_dev_shirking",
    "total_reward",
    "total_bonus",
    "mode_clamps",
    "truncations",
    "max_budget_error",
];

impl StepMetrics {
    /// CSV header, in the order [`StepMetrics::values`] emits.
    pub fn columns() -> Vec<String> {
        let mut cols = vec!["step".to_string()];
        for t in ValueType::ALL {
            for m in ["production", "cooperation", "shirking", "output"] {
                cols.push(format!("{}_{}", t.label(), m));
            }
        }
        cols.extend(TAIL_COLUMNS.iter().map(|c| c.to_string()));
        cols
    }

    /// All numeric fields after `step`, in column order.
    pub fn values(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(30);
        for s in &self.per_type {
            v.extend([s.production, s.cooperation, s.shirking, s.output]);
        }
        v.extend([
            self.mean_production,
            self.mean_cooperation,
            self.mean_shirking,
            self.mean_output,
            self.pct_ogo,
            self.norm_cooperation,
            self.norm_shirking,
            self.var_dev_cooperation,
            self.var_dev_shirking,
            self.total_reward,
            self.total_bonus,
            self.mode_clamps,
            self.truncations,
            self.max_budget_error,
        ]);
        v
    }

    pub fn from_values(step: usize, v: &[f64]) -> Self {
        let mut per_type = [TypeStats::default(); 4];
        for (k, s) in per_type.iter_mut().enumerate() {
            *s = TypeStats {
                production: v[4 * k],
                cooperation: v[4 * k + 1],
                shirking: v[4 * k + 2],
                output: v[4 * k + 3],
            };
        }
        let t = &v[16..];
        StepMetrics {
            step,
            per_type,
            mean_production: t[0],
            mean_cooperation: t[1],
            mean_shirking: t[2],
            mean_output: t[3],
            pct_ogo: t[4],
            norm_cooperation: t[5],
            norm_shirking: t[6],
            var_dev_cooperation: t[7],
            var_dev_shirking: t[8],
            total_reward: t[9],
            total_bonus: t[10],
            mode_clamps: t[11],
            truncations: t[12],
            max_budget_error: t[13],
        }
    }

    pub fn type_stats(&self, t: ValueType) -> &TypeStats {
        &self.per_type[t.index()]
    }
}

/// Locale-independent number formatting; NaN becomes an empty field.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        format!("{x}")
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricsSeries {
    rows: Vec<StepMetrics>,
}

impl MetricsSeries {
    pub fn new(rows: Vec<StepMetrics>) -> Self {
        MetricsSeries { rows }
    }

    pub fn rows(&self) -> &[StepMetrics] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn first(&self) -> Option<&StepMetrics> {
        self.rows.first()
    }

    pub fn last(&self) -> Option<&StepMetrics> {
        self.rows.last()
    }

    pub fn column<F: Fn(&StepMetrics) -> f64>(&self, f: F) -> Vec<f64> {
        self.rows.iter().map(f).collect()
    }

    /// Sum over steps of the group mean output.
    pub fn aggregate_output(&self) -> f64 {
        self.rows.iter().map(|r| r.mean_output).sum()
    }

    /// Sum over steps of all rewards paid.
    pub fn labor_cost(&self) -> f64 {
        self.rows.iter().map(|r| r.total_reward).sum()
    }

    /// Step-wise mean over several series of equal length.
    pub fn average(series: &[&MetricsSeries]) -> MetricsSeries {
        let Some(first) = series.first() else {
            return MetricsSeries::default();
        };
        let k = series.len() as f64;
        let rows = (0..first.len())
            .map(|i| {
                let mut acc = first.rows[i].values();
                for s in &series[1..] {
                    for (a, v) in acc.iter_mut().zip(s.rows[i].values()) {
                        *a += v;
                    }
                }
                acc.iter_mut().for_each(|a| *a /= k);
                StepMetrics::from_values(first.rows[i].step, &acc)
            })
            .collect();
        MetricsSeries { rows }
    }

    pub fn to_csv(&self) -> String {
        let mut out = StepMetrics::columns().join(",");
        out.push('\n');
        for r in &self.rows {
            let _ = write!(out, "{}", r.step);
            for v in r.values() {
                out.push(',');
                out.push_str(&fmt_num(v));
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(step: usize, x: f64) -> StepMetrics {
        let mut v: Vec<f64> = (0..30).map(|i| x + i as f64).collect();
        v[4] = f64::NAN;
        StepMetrics::from_values(step, &v)
    }

    #[test]
    fn values_round_trip() {
        let r = row(3, 1.5);
        let back = StepMetrics::from_values(3, &r.values());
        assert_eq!(back.values()[5..], r.values()[5..]);
        assert_eq!(StepMetrics::columns().len(), 1 + r.values().len());
    }

    #[test]
    fn averaging() {
        let a = MetricsSeries::new(vec![row(1, 0.0), row(2, 2.0)]);
        let b = MetricsSeries::new(vec![row(1, 2.0), row(2, 4.0)]);
        let m = MetricsSeries::average(&[&a, &b]);
        assert_eq!(m.rows()[0].mean_output, row(1, 1.0).mean_output);
        assert_eq!(m.rows()[1].step, 2);
        assert!(m.rows()[0].per_type[1].production.is_nan());
    }

    #[test]
    fn csv_shape() {
        let s = MetricsSeries::new(vec![row(1, 0.25), row(2, 0.5)]);
        let csv = s.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("step,C_production,C_cooperation"));
        assert!(lines[1].starts_with("1,0.25,1.25,2.25,3.25,,"));
        assert_eq!(lines[1].split(',').count(), StepMetrics::columns().len());
    }
}
