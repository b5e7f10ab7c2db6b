//! The C^9 smoothing weight and its Mellin transform.
//!
//! On the transition interval `(lo, hi)` the weight is the order-9 smoothstep
//! (degree 19) of `z = (hi - t) / (hi - lo)`, written in Bernstein form
//! `S(z) = sum_{k=10}^{19} C(19,k) z^k (1-z)^(19-k)` so every term is
//! nonnegative. `S'(z) = 19 C(18,9) z^9 (1-z)^9`, which makes all derivatives
//! up to order 9 vanish at both ends.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{gl16, NeumaierComplex};

/// Smoothstep order; the polynomial has degree `2 * ORDER + 1`.
pub const SMOOTHSTEP_ORDER: usize = 9;
pub const SMOOTHSTEP_DEGREE: usize = 2 * SMOOTHSTEP_ORDER + 1;

/// `19 * C(18, 9)`, the leading constant of `S'`.
const DERIVATIVE_SCALE: f64 = 923_780.0;

/// Number of integrations by parts used on the high-frequency Mellin route.
const IBP_ORDER: usize = 10;
/// `|s|` above which the integrated-by-parts route is used.
const IBP_THRESHOLD: f64 = 12.0;

const fn binomial_row_19() -> [f64; 20] {
    let mut row = [0.0; 20];
    let mut c = 1u64;
    let mut k = 0;
    while k < 20 {
        row[k] = c as f64;
        c = c * (19 - k as u64) / (k as u64 + 1);
        k += 1;
    }
    row
}

const BINOM_19: [f64; 20] = binomial_row_19();

/// A smoothing weight equal to 1 on `[0, lo]`, 0 on `[hi, inf)`, smoothstep in between.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoothingKernel {
    lo: f64,
    hi: f64,
}

impl Default for SmoothingKernel {
    fn default() -> Self {
        Self { lo: 0.5, hi: 2.0 }
    }
}

impl SmoothingKernel {
    /// Rescaled kernel with transition on `(lo, hi)`.
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo > 0.0 && hi > lo && hi.is_finite()) {
            return Err(Error::Domain(format!(
                "kernel needs 0 < lo < hi, got lo = {lo}, hi = {hi}"
            )));
        }
        Ok(Self { lo, hi })
    }

    /// The kernel squeezed between `1_[0, 1-eps]` and `1_[0, 1]`.
    pub fn unsmoothing_lower(eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::Domain(format!("eps must lie in (0, 1), got {eps}")));
        }
        Self::new(1.0 - eps, 1.0)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn degree(&self) -> usize {
        SMOOTHSTEP_DEGREE
    }

    fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Kernel value at `t >= 0`.
    pub fn eval(&self, t: f64) -> f64 {
        if t <= self.lo {
            return 1.0;
        }
        if t >= self.hi {
            return 0.0;
        }
        smoothstep((self.hi - t) / self.width()).min(1.0)
    }

    /// `1 - Phi(t)`, accurate near `lo` where `Phi` rounds to 1.
    pub fn complement(&self, t: f64) -> f64 {
        if t <= self.lo {
            return 0.0;
        }
        if t >= self.hi {
            return 1.0;
        }
        smoothstep((t - self.lo) / self.width()).min(1.0)
    }

    /// `m`-th derivative in `t`. Zero outside the open transition interval for `m >= 1`.
    pub fn derivative(&self, m: usize, t: f64) -> f64 {
        if m == 0 {
            return self.eval(t);
        }
        if t <= self.lo || t >= self.hi {
            return 0.0;
        }
        let h = self.width();
        let z = (self.hi - t) / h;
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        sign * DERIVATIVE_SCALE * bump_derivative(m - 1, z) / h.powi(m as i32)
    }

    /// Mellin transform `int_0^inf Phi(t) t^(s-1) dt`, `Re(s) > 0`.
    pub fn mellin(&self, s: Complex64) -> Result<Complex64> {
        if !(s.re > 0.0) || !s.im.is_finite() {
            return Err(Error::Domain(format!(
                "Mellin transform needs Re(s) > 0, got {s}"
            )));
        }
        Ok(if s.norm() < IBP_THRESHOLD {
            self.mellin_direct(s)
        } else {
            self.mellin_by_parts(s)
        })
    }

    /// `lo^s / s + int_lo^hi Phi(t) t^(s-1) dt`.
    pub fn mellin_direct(&self, s: Complex64) -> Complex64 {
        let head = (s * self.lo.ln()).exp() / s;
        head + self.transition_integral(s - 1.0, |t| self.eval(t))
    }

    /// `int Phi^(10)(t) t^(s+9) dt / (s (s+1) ... (s+9))`; boundary terms vanish since
    /// `Phi^(j)` is zero at both ends for `1 <= j <= 9`.
    pub fn mellin_by_parts(&self, s: Complex64) -> Complex64 {
        let integral = self.transition_integral(s + (IBP_ORDER as f64 - 1.0), |t| {
            self.derivative(IBP_ORDER, t)
        });
        let mut denom = Complex64::new(1.0, 0.0);
        for j in 0..IBP_ORDER {
            denom *= s + j as f64;
        }
        integral / denom
    }

    /// `int_lo^hi f(t) t^w dt`, panelled in `log t` so each panel sees at most one radian of phase.
    fn transition_integral<F: Fn(f64) -> f64>(&self, w: Complex64, f: F) -> Complex64 {
        let (a, b) = (self.lo.ln(), self.hi.ln());
        let count = ((w.im.abs() * (b - a)).ceil() as usize).max(8);
        let h = (b - a) / count as f64;
        let rule = gl16();
        let mut acc = NeumaierComplex::default();
        for i in 0..count {
            let lo = a + h * i as f64;
            let hi = if i + 1 == count { b } else { lo + h };
            for (u, wt) in rule.on(lo, hi) {
                let t = u.exp();
                // t^w dt = e^{u w} e^u du
                let v = ((w + 1.0) * u).exp() * (f(t) * wt);
                acc.add(v);
            }
        }
        acc.sum()
    }

    /// Measured `sup |Phi(s)| |s| (|s|+1)^8` over `0 < Re(s) <= 2`, scanned on a grid and
    /// inflated by 5% for the grid spacing. Cached per kernel.
    pub fn decay_constant(&self) -> f64 {
        static CACHE: OnceLock<Mutex<HashMap<(u64, u64), f64>>> = OnceLock::new();
        let key = (self.lo.to_bits(), self.hi.to_bits());
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(&c) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
            return c;
        }
        let sigmas = [1e-3, 0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0];
        let mut sup: f64 = 0.0;
        for &sigma in &sigmas {
            let mut t = 0.0;
            while t <= 200.0 {
                sup = sup.max(self.decay_product(Complex64::new(sigma, t)));
                t += if t < 20.0 { 0.05 } else { 0.5 };
            }
        }
        let c = 1.05 * sup;
        cache
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .insert(key, c);
        c
    }

    /// `|Phi(s)| |s| (|s|+1)^8`.
    pub fn decay_product(&self, s: Complex64) -> f64 {
        let m = self.mellin(s).expect("Re(s) > 0").norm();
        let r = s.norm();
        m * r * (r + 1.0).powi(8)
    }
}

/// Order-9 smoothstep on `[0, 1]`.
fn smoothstep(z: f64) -> f64 {
    const D: usize = SMOOTHSTEP_DEGREE;
    let w = 1.0 - z;
    let mut zp = [1.0; D + 1];
    let mut wp = [1.0; D + 1];
    for e in 1..=D {
        zp[e] = zp[e - 1] * z;
        wp[e] = wp[e - 1] * w;
    }
    let mut acc = 0.0;
    for k in (SMOOTHSTEP_ORDER + 1)..=D {
        acc += BINOM_19[k] * zp[k] * wp[D - k];
    }
    acc
}

fn falling(n: usize, k: usize) -> f64 {
    (0..k).map(|i| (n - i) as f64).product()
}

fn binom(n: usize, k: usize) -> f64 {
    falling(n, k) / falling(k, k)
}

/// Leibniz coefficients `C(j,i) (9)_i (9)_(j-i) (-1)^(j-i)` for the bump derivatives.
fn leibniz_table() -> &'static [[f64; SMOOTHSTEP_ORDER + 1]; 2 * SMOOTHSTEP_ORDER + 1] {
    static TABLE: OnceLock<[[f64; SMOOTHSTEP_ORDER + 1]; 2 * SMOOTHSTEP_ORDER + 1]> =
        OnceLock::new();
    TABLE.get_or_init(|| {
        const N: usize = SMOOTHSTEP_ORDER;
        let mut table = [[0.0; N + 1]; 2 * N + 1];
        for (j, row) in table.iter_mut().enumerate() {
            for i in j.saturating_sub(N)..=j.min(N) {
                let k = j - i;
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                row[i] = sign * binom(j, i) * falling(N, i) * falling(N, k);
            }
        }
        table
    })
}

/// `d^j/dz^j [z^9 (1-z)^9]` by Leibniz.
fn bump_derivative(j: usize, z: f64) -> f64 {
    const N: usize = SMOOTHSTEP_ORDER;
    if j > 2 * N {
        return 0.0;
    }
    let w = 1.0 - z;
    let mut zp = [1.0; N + 1];
    let mut wp = [1.0; N + 1];
    for e in 1..=N {
        zp[e] = zp[e - 1] * z;
        wp[e] = wp[e - 1] * w;
    }
    let row = &leibniz_table()[j];
    let mut acc = 0.0;
    for i in j.saturating_sub(N)..=j.min(N) {
        acc += row[i] * zp[N - i] * wp[N - (j - i)];
    }
    acc
}
