//! The pointwise Euler-factor chain and `1 + ct >= (1+t)^c`.

use num_complex::Complex64;
use serde::Serialize;

use super::{InequalityReport, Suite};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointwiseReport {
    /// `|1 + (1 - chi(p) p^-it) / (p^alpha - 1)|`
    pub factor: f64,
    /// `1 + sum_k (1 - Re chi(p) p^-it) / p^(k alpha)`
    pub series: f64,
    /// `exp((1 - Re chi(p) p^-it) / p^alpha)`
    pub exponential: f64,
    /// `series <= factor`
    pub first: InequalityReport,
    /// `exponential <= series`
    pub second: InequalityReport,
}

impl PointwiseReport {
    pub fn holds(&self) -> bool {
        self.first.holds && self.second.holds
    }
}

pub fn check_pointwise_product(
    p: u64,
    chi_p: Complex64,
    t: f64,
    alpha: f64,
    seed: u64,
) -> Result<PointwiseReport> {
    let n = chi_p.norm();
    if !(n == 0.0 || (n - 1.0).abs() <= 1e-12) {
        return Err(Error::Hypothesis(format!(
            "chi(p) must be 0 or on the unit circle, got |chi(p)| = {n}"
        )));
    }
    let pa = (p as f64).powf(alpha);
    if !(p >= 2 && pa > 1.0 && t.is_finite()) {
        return Err(Error::Domain(format!(
            "need p^alpha > 1, got p = {p}, alpha = {alpha}"
        )));
    }
    let twisted = chi_p * Complex64::from_polar(1.0, -t * (p as f64).ln());
    let deficit = (1.0 - twisted.re).max(0.0);
    let factor =
        (Complex64::new(1.0, 0.0) + (Complex64::new(1.0, 0.0) - twisted) / (pa - 1.0)).norm();
    // the geometric series sums to deficit / (p^alpha - 1)
    let series = 1.0 + deficit / (pa - 1.0);
    let exponential = (deficit / pa).exp();
    Ok(PointwiseReport {
        factor,
        series,
        exponential,
        first: InequalityReport::new(Suite::Pointwise, series, factor, seed),
        second: InequalityReport::new(Suite::Pointwise, exponential, series, seed),
    })
}

/// `(1+t)^c <= 1 + ct` for `c in [0, 1]`, `t >= 0`.
pub fn check_calculus(c: f64, t: f64, seed: u64) -> Result<InequalityReport> {
    if !((0.0..=1.0).contains(&c) && t >= 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!(
            "need c in [0, 1] and t >= 0, got c = {c}, t = {t}"
        )));
    }
    Ok(InequalityReport::new(
        Suite::Calculus,
        (1.0 + t).powf(c),
        1.0 + c * t,
        seed,
    ))
}
