//! Prime sums measuring how far `chi(p) p^-it` is from 1, and related reports.

use num_complex::Complex64;
use serde::Serialize;

use crate::analytic::euler::euler_product;
use crate::dirichlet::DirichletCharacter;
use crate::error::{Error, Result};
use crate::primes::primes_up_to_real;
use crate::quadrature::Neumaier;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "alpha")]
pub enum DeficitWeight {
    /// `log p / p`
    LogPOverP,
    /// `p^-alpha`
    PowerAlpha(f64),
}

impl DeficitWeight {
    fn at(self, p: f64) -> f64 {
        match self {
            DeficitWeight::LogPOverP => p.ln() / p,
            DeficitWeight::PowerAlpha(a) => p.powf(-a),
        }
    }
}

/// `sum_{lo <= p <= y, p not dividing q} (1 - Re(chi(p) p^-it)) weight(p)`.
pub fn prime_deficit_sum(
    chi: &DirichletCharacter,
    t: f64,
    y: f64,
    lo: f64,
    weight: DeficitWeight,
) -> Result<f64> {
    if !(2.0 <= lo && lo <= y) {
        return Err(Error::Domain(format!(
            "prime range needs 2 <= lo <= y, got lo = {lo}, y = {y}"
        )));
    }
    let q = chi.modulus();
    let mut acc = Neumaier::default();
    for &p in primes_up_to_real(y).iter() {
        let pf = p as f64;
        if pf < lo || (q > 1 && q % p as u64 == 0) {
            continue;
        }
        let twist = Complex64::from_polar(1.0, -t * pf.ln());
        let deficit = (1.0 - (chi.evaluate(p as u64) * twist).re).max(0.0);
        acc.add(deficit * weight.at(pf));
    }
    Ok(acc.sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RodosskiiReport {
    pub sum: f64,
    /// Whether the order of the character exceeds the threshold.
    pub order_exceeds: bool,
    pub order: u64,
    /// `log y / (5 (B + 1)^2)`
    pub reference: f64,
}

/// The `log p / p` deficit sum over `[sqrt y, y]`, with the order flag for
/// threshold `B`.
pub fn rodosskii2_sum(
    chi: &DirichletCharacter,
    t: f64,
    y: f64,
    order_threshold: u64,
) -> Result<RodosskiiReport> {
    let sum = prime_deficit_sum(chi, t, y, y.sqrt().max(2.0), DeficitWeight::LogPOverP)?;
    let order = chi.order();
    let b = order_threshold as f64;
    Ok(RodosskiiReport {
        sum,
        order_exceeds: order > order_threshold,
        order,
        reference: y.ln() / (5.0 * (b + 1.0) * (b + 1.0)),
    })
}

/// `|log L(sigma + it, chi; y) - log L(alpha + it, chi; y)|`.
pub fn log_l_variation(
    chi: &DirichletCharacter,
    y: f64,
    alpha: f64,
    sigma: f64,
    t: f64,
) -> Result<f64> {
    if !(0.0 < sigma && sigma <= alpha) {
        return Err(Error::Domain(format!(
            "need 0 < sigma <= alpha, got sigma = {sigma}, alpha = {alpha}"
        )));
    }
    let lo = euler_product(Complex64::new(sigma, t), chi, y)?;
    let hi = euler_product(Complex64::new(alpha, t), chi, y)?;
    Ok((lo.log_value - hi.log_value).norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KRange {
    Basic,
    Rodosskii,
    Problem,
}

/// Classify `k` against `sqrt u` and `4 A log A + D`; ties go to the higher range.
pub fn range_partition(k: f64, u: f64, q: u64, a: f64, d: f64) -> Result<KRange> {
    if !(k >= 0.0) {
        return Err(Error::Domain(format!("k must be nonnegative, got {k}")));
    }
    let max = (q as f64).ln() / 2.0;
    if k > max {
        return Err(Error::OutOfRange { k, max });
    }
    let rodosskii_floor = 4.0 * a * a.ln() + d;
    Ok(if k >= u.sqrt() {
        KRange::Basic
    } else if k >= rodosskii_floor {
        KRange::Rodosskii
    } else {
        KRange::Problem
    })
}
