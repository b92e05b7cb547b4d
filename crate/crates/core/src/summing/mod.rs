//! Eccentric p-summing constants, Pietsch measures and eccentrically
//! p-approximating constants on finite metric spaces.

mod approx;
mod measure;
mod pietsch;

pub use approx::{approximating_constant, verify_mixed_domination, ApproximatingConstant};
pub use measure::{Constant, ProbabilityMeasure, MASS_TOL};
pub use pietsch::{
    pietsch_functional, pietsch_map, summing_ratio_oracle, verify_domination, verify_map_domination,
    DominationReport, MetricMap, PairSlack, PietschCertificate, DEGENERATE_REL, TINY,
};
