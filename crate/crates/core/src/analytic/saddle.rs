//! The saddle point `alpha(x, y)` of `x^s L(s, chi_0; y)` on the real axis.
//!
//! `alpha` solves `sum_{p <= y} log p / (p^alpha - 1) = log x`, optionally with the
//! primes dividing a modulus `q` removed.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::primes::primes_up_to_real;

const BRACKET_LO: f64 = 1e-6;
const BRACKET_HI: f64 = 2.0;
const MAX_ITER: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `y > log x`
    LargeY,
    /// `y <= log x`
    SmallY,
}

#[derive(Debug, Clone, Serialize)]
pub struct SaddlePoint {
    pub x: f64,
    pub y: f64,
    pub alpha: f64,
    /// `|sum log p / (p^alpha - 1) - log x|` at the returned `alpha`.
    pub residual: f64,
    pub regime: Regime,
    pub iterations: usize,
    /// `log x / log y`
    pub u: f64,
    /// `log x / log q`, when a modulus `q >= 2` was given.
    pub v: Option<f64>,
    /// `min(v, y)`
    pub w: Option<f64>,
    /// Whether primes dividing the modulus were excluded.
    pub coprime: bool,
}

impl SaddlePoint {
    /// `1 - log(u log u) / log y`, the large-`y` asymptotic form.
    pub fn asymptotic(&self) -> Option<f64> {
        asymptotic_alpha(self.x, self.y)
    }
}

/// `1 - log(u log u) / log y`, defined for `u > 1`.
pub fn asymptotic_alpha(x: f64, y: f64) -> Option<f64> {
    let u = x.ln() / y.ln();
    (u > 1.0).then(|| 1.0 - (u * u.ln()).ln() / y.ln())
}

/// Solve for `alpha(x, y)`.
///
/// When `modulus` is given, `v` and `w` are filled in; the primes dividing it are
/// dropped from the defining sum only if `coprime` is set.
pub fn saddle_alpha(x: f64, y: f64, modulus: Option<u64>, coprime: bool) -> Result<SaddlePoint> {
    if !(y >= 2.0 && x >= y && x.is_finite()) {
        return Err(Error::Domain(format!(
            "saddle point needs 2 <= y <= x, got x = {x}, y = {y}"
        )));
    }
    let logs: Vec<f64> = primes_up_to_real(y)
        .iter()
        .filter(|&&p| !(coprime && modulus.is_some_and(|q| q % p as u64 == 0)))
        .map(|&p| (p as f64).ln())
        .collect();
    let (alpha, residual, iterations) =
        solve(&logs, x.ln()).ok_or(Error::NoConvergence { x, y })?;
    let log_x = x.ln();
    let u = log_x / y.ln();
    let v = modulus.filter(|&q| q >= 2).map(|q| log_x / (q as f64).ln());
    Ok(SaddlePoint {
        x,
        y,
        alpha,
        residual,
        regime: if y > log_x {
            Regime::LargeY
        } else {
            Regime::SmallY
        },
        iterations,
        u,
        v,
        w: v.map(|v| v.min(y)),
        coprime,
    })
}

/// `sum log p / (p^a - 1)` and its derivative in `a`.
fn saddle_sum(logs: &[f64], a: f64) -> (f64, f64) {
    let mut f = 0.0;
    let mut df = 0.0;
    for &lp in logs {
        let m = (a * lp).exp_m1();
        f += lp / m;
        df -= lp * lp * (m + 1.0) / (m * m);
    }
    (f, df)
}

/// Safeguarded Newton on the bracket `[BRACKET_LO, BRACKET_HI]`.
fn solve(logs: &[f64], log_x: f64) -> Option<(f64, f64, usize)> {
    let g = |a: f64| {
        let (f, df) = saddle_sum(logs, a);
        (f - log_x, df)
    };
    let (mut lo, mut hi) = (BRACKET_LO, BRACKET_HI);
    let (g_lo, _) = g(lo);
    let (g_hi, _) = g(hi);
    // g is decreasing: need g(lo) >= 0 >= g(hi)
    if !(g_lo >= 0.0 && g_hi <= 0.0) {
        return None;
    }
    let tol = 1e-13 * log_x.max(1.0);
    let mut a = 0.5 * (lo + hi);
    for iter in 1..=MAX_ITER {
        let (val, der) = g(a);
        if val.abs() <= tol {
            return Some((a, val.abs(), iter));
        }
        if val > 0.0 {
            lo = a;
        } else {
            hi = a;
        }
        let newton = a - val / der;
        a = if newton > lo && newton < hi && der < 0.0 {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            let (val, _) = g(a);
            return Some((a, val.abs(), iter));
        }
    }
    let (val, _) = g(a);
    (val.abs() <= 1e-9 * log_x).then_some((a, val.abs(), MAX_ITER))
}
