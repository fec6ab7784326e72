//! Agent-based simulation of how employees split a working day between
//! individual tasks, cooperation and shirking when their behavior is anchored
//! by descriptive social norms and shaped by personal values, management
//! stance, and pay-for-performance schemes.

pub mod behavior;
pub mod distributions;
pub mod engine;
pub mod error;
pub mod metrics;
pub mod norms;
pub mod production;
pub mod rewards;
pub mod sweeps;

#[cfg(test)]
mod proptests;

pub use behavior::{BudgetRule, ManagementStance, PayScheme, TimeAllocation, ValueType};
pub use distributions::Triangular;
pub use engine::{run, run_matrix, run_replicates, ModelParams, ModelState, ReplicateSet, Scenario, ScenarioConfig};
pub use error::ModelError;
pub use metrics::{MetricsSeries, StepMetrics};
pub use norms::{Environment, NormFormula, NormPair, NormState};
pub use sweeps::{run_sweep, SweepCell, SweepDimension, SweepSetting, SweepSpec};
