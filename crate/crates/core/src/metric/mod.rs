//! Finite metric spaces, eccentric pseudometrics, sequence proximity
//! functionals and Arens-Eells molecule norms.

mod arens_eells;
mod matrix;
mod proximity;
mod sequence;
mod space;

pub use arens_eells::{ae_norm, lipschitz_excess, AeNorm};
pub use matrix::SquareMatrix;
pub(crate) use proximity::check_p;
pub use proximity::{
    d_ac, d_cc, d_wc, eccentric_pairing, eccentric_pseudometric, empirical_norming_constant,
    CcValue, WcMethod, WcMode, WcResult,
};
pub use sequence::{LipschitzFunctional, Molecule, PairSequence, MOLECULE_SUM_TOL};
pub use space::{
    is_pseudometric_matrix, validate_matrix, validate_metric, FiniteMetricSpace, ValidationReport,
    Violation,
};
