//! Bracket, normalized and metric flows, integrated with an adaptive
//! Dormand–Prince scheme.

pub mod bracket_flow;
pub mod companion;
pub mod diagnostics;
pub mod integrator;
pub mod metric_flow;

pub use bracket_flow::{
    bracket_velocity, integrate_bracket_flow, integrate_normalized_flow, normalization_rate,
    normalized_velocity, FlowSample, FlowTrace, Termination,
};
pub use companion::{integrate_norm_companion, CompanionSample, CompanionTrace};
pub use diagnostics::{fixed_point_residual, Diagnostics};
pub use integrator::{integrate, Control, IntegratorConfig, Outcome, Stop};
pub use metric_flow::{integrate_metric_flow, MetricSample, MetricTrace};
