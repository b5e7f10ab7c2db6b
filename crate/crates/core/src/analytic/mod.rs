//! Kernel, saddle point, Euler products and prime sums.

pub mod chebyshev;
pub mod euler;
pub mod kernel;
pub mod saddle;
pub mod sums;

pub use chebyshev::{
    r_parameter, smoothed_chebyshev, smoothed_chebyshev_with, ChebyshevWeight, SmoothedChebyshev,
};
pub use euler::{euler_product, euler_product_with, EulerProductValue, NEAR_POLE_GUARD};
pub use kernel::SmoothingKernel;
pub use saddle::{asymptotic_alpha, saddle_alpha, Regime, SaddlePoint};
pub use sums::{
    log_l_variation, prime_deficit_sum, range_partition, rodosskii2_sum, DeficitWeight, KRange,
    RodosskiiReport,
};
