//! Blow-ups, the reduction tree and the combinatorics of its divisor.

mod chart;
mod curve;
mod dot;
mod invariants;
mod tree;

pub use chart::{blowup, chart_map, strict_transform_equation, BlowupCharts, ChartKind};
pub use curve::{lift_param, push_down_param, push_to_origin, strict_transform_curve, Passage};
pub use dot::{default_leaf_label, export_dot};
pub use invariants::{
    component_valence, component_weight, real_tangency_excess, real_tangency_excess_at, relative_weights, tangency_excess,
};
pub use tree::{reduce_singularities, BlowUp, Component, ReductionTree, TreePoint, DEPTH_CAP};
