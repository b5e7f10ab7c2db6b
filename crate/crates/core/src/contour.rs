//! `Psi(x, y; chi, Phi)` as `(1/2 pi) int L(c+it, chi; y) x^(c+it) Phi(c+it) dt`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{euler_product, saddle_alpha, SmoothingKernel};
use crate::dirichlet::DirichletCharacter;
use crate::error::{Error, Result};
use crate::quadrature::{gl16, gl8, panels, GaussLegendre, Neumaier, NeumaierComplex};
use crate::smooth::{count_smooth_weighted, SmoothCountQuery};

/// Relative accuracy of a single Mellin evaluation, folded into the error estimate.
const MELLIN_REL_ACCURACY: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    /// Abscissa `c > 0`.
    pub c: f64,
    /// Half-height `T > 0` of the truncated segment.
    pub half_height: f64,
    pub panel_width: f64,
    /// Gauss-Legendre points per panel; the error estimate uses half as many.
    pub order: usize,
}

impl ContourSpec {
    /// Abscissa at the saddle point and the widest admissible panels.
    pub fn at_saddle(x: f64, y: f64, half_height: f64) -> Result<Self> {
        let sp = saddle_alpha(x, y, None, false)?;
        Ok(Self {
            c: sp.alpha,
            half_height,
            panel_width: max_panel_width(x),
            order: 16,
        })
    }

    pub fn with_panel_width(mut self, width: f64) -> Self {
        self.panel_width = width;
        self
    }

    pub fn validate(&self, x: f64) -> Result<()> {
        if !(self.c > 0.0 && self.half_height > 0.0 && self.half_height.is_finite()) {
            return Err(Error::Domain(format!(
                "need c > 0 and T > 0, got c = {}, T = {}",
                self.c, self.half_height
            )));
        }
        if !(self.panel_width > 0.0 && self.panel_width <= max_panel_width(x) * (1.0 + 1e-12)) {
            return Err(Error::Domain(format!(
                "panel width {} must lie in (0, {}]",
                self.panel_width,
                max_panel_width(x)
            )));
        }
        if self.order < 2 {
            return Err(Error::Domain("quadrature order must be at least 2".into()));
        }
        Ok(())
    }
}

/// `min(1, 2 pi / log x)`: one oscillation of `x^it` per panel.
pub fn max_panel_width(x: f64) -> f64 {
    let lx = x.ln();
    if lx > 0.0 {
        (2.0 * PI / lx).min(1.0)
    } else {
        1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContourResult {
    pub value: Complex64,
    pub tail_bound: f64,
    pub quadrature_error_estimate: f64,
}

/// Rule of the requested order, sharing the cached 16- and 8-point rules.
fn rule(order: usize) -> std::borrow::Cow<'static, GaussLegendre> {
    match order {
        16 => std::borrow::Cow::Borrowed(gl16()),
        8 => std::borrow::Cow::Borrowed(gl8()),
        n => std::borrow::Cow::Owned(GaussLegendre::new(n)),
    }
}

#[derive(Debug, Clone, Copy)]
struct Node {
    t: f64,
    w: f64,
    /// `x^s Phi(s)` at `s = c + it`; the value at `c - it` is its conjugate.
    weight: Complex64,
}

#[derive(Debug, Clone)]
struct Panel {
    fine: Vec<Node>,
    coarse: Vec<Node>,
}

/// The character-independent part of the contour integral: nodes on panels mirrored
/// about 0 with `x^s Phi(s)` precomputed, reusable for every character mod any `q`.
#[derive(Debug, Clone)]
pub struct ContourPlan {
    x: f64,
    y: f64,
    kernel: SmoothingKernel,
    spec: ContourSpec,
    panels: Vec<Panel>,
}

impl ContourPlan {
    pub fn new(x: f64, y: f64, kernel: &SmoothingKernel, spec: &ContourSpec) -> Result<Self> {
        spec.validate(x)?;
        let lx = x.ln();
        let fine_rule = rule(spec.order);
        let coarse_rule = rule((spec.order / 2).max(1));
        let nodes = |r: &GaussLegendre, a: f64, b: f64| -> Result<Vec<Node>> {
            r.on(a, b)
                .map(|(t, w)| {
                    let s = Complex64::new(spec.c, t);
                    Ok(Node {
                        t,
                        w,
                        weight: (s * lx).exp() * kernel.mellin(s)?,
                    })
                })
                .collect()
        };
        let panels = panels(0.0, spec.half_height, spec.panel_width)
            .into_par_iter()
            .map(|(a, b)| {
                Ok(Panel {
                    fine: nodes(&fine_rule, a, b)?,
                    coarse: nodes(&coarse_rule, a, b)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            x,
            y,
            kernel: *kernel,
            spec: *spec,
            panels,
        })
    }

    pub fn spec(&self) -> &ContourSpec {
        &self.spec
    }

    /// Evaluate the truncated integral for one character.
    pub fn evaluate(&self, chi: &DirichletCharacter) -> Result<ContourResult> {
        let c = self.spec.c;
        let y = self.y;
        let side = |node: &Node| -> Result<(Complex64, f64)> {
            let up = euler_product(Complex64::new(c, node.t), chi, y)?.value * node.weight;
            let down =
                euler_product(Complex64::new(c, -node.t), chi, y)?.value * node.weight.conj();
            Ok((up + down, up.norm() + down.norm()))
        };
        let parts = self
            .panels
            .par_iter()
            .map(|panel| {
                let mut fine = NeumaierComplex::default();
                let mut magnitude = Neumaier::default();
                for node in &panel.fine {
                    let (v, m) = side(node)?;
                    fine.add(v * node.w);
                    magnitude.add(m * node.w);
                }
                let mut coarse = NeumaierComplex::default();
                for node in &panel.coarse {
                    coarse.add(side(node)?.0 * node.w);
                }
                Ok((
                    fine.sum(),
                    (fine.sum() - coarse.sum()).norm(),
                    magnitude.sum(),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        // fixed-order reduction over panel index
        let mut value = NeumaierComplex::default();
        let mut err = Neumaier::default();
        let mut magnitude = Neumaier::default();
        for (v, e, m) in parts {
            value.add(v);
            err.add(e);
            magnitude.add(m);
        }
        let principal = DirichletCharacter::principal(chi.modulus())?;
        let l0 = euler_product(Complex64::new(c, 0.0), &principal, y)?
            .value
            .re;
        Ok(ContourResult {
            value: value.sum() / (2.0 * PI),
            tail_bound: truncation_bound(c, self.spec.half_height, l0, self.x, &self.kernel)?,
            quadrature_error_estimate: (err.sum() + MELLIN_REL_ACCURACY * magnitude.sum())
                / (2.0 * PI),
        })
    }
}

/// Truncated contour integral for `Psi(x, y; chi, Phi)`.
pub fn contour_psi(
    x: f64,
    chi: &DirichletCharacter,
    y: f64,
    kernel: &SmoothingKernel,
    spec: &ContourSpec,
) -> Result<ContourResult> {
    ContourPlan::new(x, y, kernel, spec)?.evaluate(chi)
}

/// `C_Phi x^c L(c, chi_0; y) / (8 T^8)` for `T >= 1`, where `C_Phi` is the measured
/// decay constant. Below `T = 1` the `|Phi(s)| <= C_Phi / |s|` part of the range is added.
pub fn truncation_bound(
    c: f64,
    half_height: f64,
    chi0_value: f64,
    x: f64,
    kernel: &SmoothingKernel,
) -> Result<f64> {
    if !(c > 0.0 && half_height > 0.0) {
        return Err(Error::Domain(format!(
            "need c > 0 and T > 0, got c = {c}, T = {half_height}"
        )));
    }
    let cphi = kernel.decay_constant();
    let scale = x.powf(c) * chi0_value.abs();
    let t = half_height.max(1.0);
    let mut bound = cphi * scale / (8.0 * t.powi(8));
    if half_height < 1.0 {
        bound += scale * cphi / PI * ((1.0 / c).asinh() - (half_height / c).asinh());
    }
    Ok(bound)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscillatingIntegral {
    pub value: Complex64,
    /// `|value| log x`
    pub scaled: f64,
}

/// `int_t0^t1 x^(ir) Phi(beta + ir) dr` on the widest admissible panels.
pub fn oscillating_integral(
    t0: f64,
    t1: f64,
    x: f64,
    beta: f64,
    kernel: &SmoothingKernel,
) -> Result<OscillatingIntegral> {
    oscillating_integral_with(t0, t1, x, beta, kernel, max_panel_width(x))
}

pub fn oscillating_integral_with(
    t0: f64,
    t1: f64,
    x: f64,
    beta: f64,
    kernel: &SmoothingKernel,
    panel_width: f64,
) -> Result<OscillatingIntegral> {
    if !(0.0 <= t0 && t0 <= t1)
        || !(0.75..=1.5).contains(&beta)
        || !(x >= 1.0)
        || !(panel_width > 0.0)
    {
        return Err(Error::Domain(format!(
            "need 0 <= t0 <= t1, beta in [3/4, 3/2], x >= 1, got t0 = {t0}, t1 = {t1}, beta = {beta}, x = {x}"
        )));
    }
    let lx = x.ln();
    let mut acc = NeumaierComplex::default();
    for (a, b) in panels(t0, t1, panel_width) {
        for (r, w) in gl16().on(a, b) {
            let phase = Complex64::from_polar(1.0, r * lx);
            acc.add(phase * kernel.mellin(Complex64::new(beta, r))? * w);
        }
    }
    let value = acc.sum();
    Ok(OscillatingIntegral {
        value,
        scaled: value.norm() * lx,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MainTermRatio {
    pub ratio: f64,
    /// `Psi(x, y; chi_0, Phi)` by enumeration.
    pub exact: f64,
    /// `x^alpha L(alpha, chi_0; y) Phi(alpha) / sqrt(2 pi (1 + log x / y) log x log y)`
    pub lower: f64,
    pub alpha: f64,
}

pub fn main_term_ratio(x: f64, y: f64, q: u64, kernel: &SmoothingKernel) -> Result<MainTermRatio> {
    let alpha = saddle_alpha(x, y, None, false)?.alpha;
    let principal = DirichletCharacter::principal(q)?;
    let exact = count_smooth_weighted(
        &SmoothCountQuery::new(x, y).coprime_to(q),
        kernel,
        Some(&principal),
    )?
    .value
    .re;
    let s = Complex64::new(alpha, 0.0);
    let l0 = euler_product(s, &principal, y)?.value.re;
    let lx = x.ln();
    let denom = (2.0 * PI * (1.0 + lx / y) * lx * y.ln()).sqrt();
    let lower = x.powf(alpha) * l0 * kernel.mellin(s)?.re / denom;
    Ok(MainTermRatio {
        ratio: exact / lower,
        exact,
        lower,
        alpha,
    })
}
