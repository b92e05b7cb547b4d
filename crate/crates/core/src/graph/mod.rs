//! Weighted graphs, their path metrics and the symmetry structure induced by
//! a measure.

mod generators;
mod metrics;
mod paths;
mod symmetry;
mod weighted;

pub use generators::{circle_graph, path_graph, sequence_graph, two_apex_graph};
pub use metrics::{d_p, d_p_mu, e_p, lip_constant, q_p};
pub use paths::{PathMetric, PathResult, MAX_P};
pub use symmetry::{
    check_t2, symmetry_classes, BoundCheck, SymmetryClasses, T2Report, DEFAULT_SYMMETRY_TOL, T2_SLACK,
};
pub use weighted::{IndexFunction, WeightedGraph};
