//! Tolerance Monte Carlo, power estimation and RTL/CMOS comparisons.

mod power;
mod report;
mod tolerance;

pub use power::{power_estimate, Activity, PowerModel};
pub use report::{compare_report, measure, Delta, Expectation, Metrics, Models, Report};
pub use tolerance::{
    analytic_worst_case, logic_failure_rate, perturb_sensitivity, PerturbationMode, PerturbationSpec, Sensitivity,
};
