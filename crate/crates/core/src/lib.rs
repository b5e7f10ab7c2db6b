//! Computational toolkit for smooth numbers in arithmetic progressions.

// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod contour;
pub mod dirichlet;
pub mod error;
pub mod experiments;
pub mod inequality;
pub mod primes;
pub mod quadrature;
pub mod smooth;

pub use analytic::{euler_product, saddle_alpha, SaddlePoint, SmoothingKernel};
pub use contour::{contour_psi, ContourPlan, ContourResult, ContourSpec};
pub use dirichlet::{character_group, Angle, CharacterGroup, DirichletCharacter};
pub use error::{Error, Result};
pub use experiments::{ExperimentConfig, OutputFormat, ResultRecord};
pub use inequality::{InequalityReport, Suite};
pub use smooth::{count_smooth, count_smooth_weighted, BigX, SmoothCount, SmoothCountQuery};
