use serde::{Deserialize, Serialize};

/// Numerical tolerances shared by the LP kernel and the metric routines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Primal feasibility and complementary slackness.
    pub feas: f64,
    pub duality_gap: f64,
    /// Smallest acceptable pivot magnitude.
    pub pivot: f64,
    /// Slack allowed when checking metric axioms.
    pub metric: f64,
    /// Threshold on `d_{p,mu}` below which two vertices are grouped.
    pub symmetry: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            feas: 1e-9,
            duality_gap: 1e-7,
            pivot: 1e-11,
            metric: 1e-7,
            symmetry: 1e-8,
        }
    }
}
