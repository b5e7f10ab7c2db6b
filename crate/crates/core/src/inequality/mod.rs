//! Numerical checks of the stated inequalities, one report per instance.

mod corpus;
mod elementary;
mod lemma;
mod majorant;

use serde::Serialize;

pub use corpus::{run_suite, Suite, SuiteSummary};
pub use elementary::{check_calculus, check_pointwise_product, PointwiseReport};
pub use lemma::{check_lemma1, check_lemma2, RandomEulerSpec, TestFunction};
pub use majorant::{check_majorant, MajorantInstance};

/// Relative slack granted to the right-hand side.
pub const REL_TOLERANCE: f64 = 1e-6;
/// Absolute slack granted to the right-hand side.
pub const ABS_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InequalityReport {
    pub suite: Suite,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`
    pub slack: f64,
    pub holds: bool,
    pub seed: u64,
}

impl InequalityReport {
    /// Report for the claim `lhs <= rhs`.
    pub fn new(suite: Suite, lhs: f64, rhs: f64, seed: u64) -> Self {
        let holds = lhs <= rhs * (1.0 + REL_TOLERANCE) + ABS_TOLERANCE;
        Self {
            suite,
            lhs,
            rhs,
            slack: rhs - lhs,
            holds,
            seed,
        }
    }
}
