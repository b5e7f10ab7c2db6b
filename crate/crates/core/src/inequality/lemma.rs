//! Integration-by-parts bounds for `int G F ds` along a vertical segment, where `G`
//! is a finite Euler product with `|g(p)| <= 1`.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{InequalityReport, Suite};
use crate::analytic::{euler_product_with, SmoothingKernel};
use crate::error::{Error, Result};
use crate::primes::primes_up_to_real;
use crate::quadrature::{gl16, panels, Neumaier, NeumaierComplex};

const MAX_Y: f64 = 60.0;
const MAX_LEVELS: usize = 6;
const REFINE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RandomEulerSpec {
    pub y: f64,
    pub beta: f64,
    pub r: f64,
    /// `(p, g(p))` for every prime `p <= y`.
    pub coefficients: Vec<(u64, Complex64)>,
}

impl RandomEulerSpec {
    pub fn new(y: f64, beta: f64, r: f64, g: impl Fn(u64) -> Complex64) -> Result<Self> {
        if !(y <= MAX_Y) || !(0.75..=1.3).contains(&beta) || !(r > 0.0 && r <= 6.0) {
            return Err(Error::Domain(format!(
                "need y <= {MAX_Y}, beta in [0.75, 1.3], r in (0, 6], got y = {y}, beta = {beta}, r = {r}"
            )));
        }
        let coefficients: Vec<(u64, Complex64)> = primes_up_to_real(y)
            .iter()
            .map(|&p| (p as u64, g(p as u64)))
            .collect();
        if let Some((p, v)) = coefficients.iter().find(|(_, v)| v.norm() > 1.0 + 1e-15) {
            return Err(Error::Hypothesis(format!(
                "|g({p})| = {} exceeds 1",
                v.norm()
            )));
        }
        Ok(Self {
            y,
            beta,
            r,
            coefficients,
        })
    }

    /// A seeded instance: `y` in `[0, 60]`, and `g(p)` on the unit circle half the time,
    /// otherwise uniform in modulus.
    pub fn sample(rng: &mut ChaCha8Rng) -> Self {
        let y = rng.gen_range(0.0..=MAX_Y);
        let beta = rng.gen_range(0.75..=1.3);
        let r = rng.gen_range(1e-3..=6.0);
        let coefficients = primes_up_to_real(y)
            .iter()
            .map(|&p| {
                let modulus = if rng.gen_bool(0.5) {
                    1.0
                } else {
                    rng.gen_range(0.0..=1.0)
                };
                (
                    p as u64,
                    Complex64::from_polar(modulus, rng.gen_range(0.0..std::f64::consts::TAU)),
                )
            })
            .collect();
        Self {
            y,
            beta,
            r,
            coefficients,
        }
    }

    fn split(&self) -> (Vec<(u64, Complex64)>, Vec<(u64, Complex64)>) {
        let root = self.y.max(0.0).sqrt();
        self.coefficients
            .iter()
            .partition(|(p, _)| (*p as f64) <= root)
    }
}

/// The function `F` integrated against `G`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum TestFunction {
    Zero,
    /// `scale * x^s Phi(s)`
    KernelMellin {
        x: f64,
        kernel: SmoothingKernel,
        scale: f64,
    },
    /// `scale * P(s) e^(mu s)` with `Im mu > 0`, so it decays up the segment.
    PolyExp {
        coefficients: Vec<Complex64>,
        mu: Complex64,
        scale: f64,
    },
}

impl TestFunction {
    pub fn sample(rng: &mut ChaCha8Rng) -> Self {
        if rng.gen_bool(0.5) {
            TestFunction::KernelMellin {
                x: rng.gen_range(1.0f64..14.0).exp(),
                kernel: SmoothingKernel::default(),
                scale: 1.0,
            }
        } else {
            let degree = rng.gen_range(0..=3);
            let coefficients = (0..=degree)
                .map(|_| Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)))
                .collect();
            let mu = Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(0.05..=2.0));
            TestFunction::PolyExp {
                coefficients,
                mu,
                scale: 1.0,
            }
        }
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        match self {
            TestFunction::Zero => TestFunction::Zero,
            TestFunction::KernelMellin { x, kernel, scale } => TestFunction::KernelMellin {
                x: *x,
                kernel: *kernel,
                scale: scale * lambda,
            },
            TestFunction::PolyExp {
                coefficients,
                mu,
                scale,
            } => TestFunction::PolyExp {
                coefficients: coefficients.clone(),
                mu: *mu,
                scale: scale * lambda,
            },
        }
    }

    pub fn eval(&self, s: Complex64) -> Result<Complex64> {
        Ok(match self {
            TestFunction::Zero => Complex64::new(0.0, 0.0),
            TestFunction::KernelMellin { x, kernel, scale } => {
                (s * x.ln()).exp() * kernel.mellin(s)? * *scale
            }
            TestFunction::PolyExp {
                coefficients,
                mu,
                scale,
            } => {
                let p = coefficients
                    .iter()
                    .rev()
                    .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * s + c);
                p * (mu * s).exp() * *scale
            }
        })
    }

    /// Angular frequency of `F` along the segment.
    fn frequency(&self) -> f64 {
        match self {
            TestFunction::Zero => 0.0,
            TestFunction::KernelMellin { x, .. } => x.ln(),
            TestFunction::PolyExp { mu, .. } => mu.re.abs() + mu.im.abs(),
        }
    }
}

/// The integrals along `s = beta + i tau`, `0 <= tau <= r`.
#[derive(Debug, Clone, Copy)]
struct SegmentIntegrals {
    /// `|int G F ds|`
    lhs: f64,
    /// `sup_t |int_t^r F ds|`, or with the large-prime product factor for `M*`.
    sup: f64,
    /// `int |G'/G|^2 d|s|`
    log_deriv_sq: f64,
    /// `int |H|^2 d|s|`, `H = G` or `G*`.
    norm_sq: f64,
}

/// One quadrature pass on panels no wider than `width`. The supremum is taken over
/// the panel boundaries.
fn segment_pass(
    spec: &RandomEulerSpec,
    f: &TestFunction,
    small: Option<&[(u64, Complex64)]>,
    large: Option<&[(u64, Complex64)]>,
    width: f64,
) -> Result<SegmentIntegrals> {
    let rule = gl16();
    let i = Complex64::new(0.0, 1.0);
    let all = &spec.coefficients;
    let mut lhs = NeumaierComplex::default();
    let mut log_deriv_sq = Neumaier::default();
    let mut norm_sq = Neumaier::default();
    let pans = panels(0.0, spec.r, width);
    let mut f_parts = Vec::with_capacity(pans.len());
    for &(a, b) in &pans {
        let mut f_part = NeumaierComplex::default();
        for (tau, w) in rule.on(a, b) {
            let s = Complex64::new(spec.beta, tau);
            let g = euler_product_with(s, all.iter().copied())?;
            let fv = f.eval(s)?;
            lhs.add(g.value * fv * i * w);
            f_part.add(fv * i * w);
            log_deriv_sq.add(g.log_deriv.norm_sqr() * w);
            let h = match small {
                Some(sm) => euler_product_with(s, sm.iter().copied())?.value,
                None => g.value,
            };
            norm_sq.add(h.norm_sqr() * w);
        }
        f_parts.push(f_part.sum());
    }
    // tail integrals int_{t_k}^{r} F ds at every panel boundary, down to t = 0
    let mut sup: f64 = 0.0;
    let mut tail = NeumaierComplex::default();
    let weight_at = |t: f64| -> Result<f64> {
        Ok(match large {
            Some(lg) => euler_product_with(Complex64::new(spec.beta, t), lg.iter().copied())?
                .value
                .norm(),
            None => 1.0,
        })
    };
    for (k, &(a, _)) in pans.iter().enumerate().rev() {
        tail.add(f_parts[k]);
        sup = sup.max(tail.sum().norm() * weight_at(a)?);
    }
    Ok(SegmentIntegrals {
        lhs: lhs.sum().norm(),
        sup,
        log_deriv_sq: log_deriv_sq.sum(),
        norm_sq: norm_sq.sum(),
    })
}

/// Halve the panel width until every quantity is stable.
fn segment_integrals(
    spec: &RandomEulerSpec,
    f: &TestFunction,
    small: Option<&[(u64, Complex64)]>,
    large: Option<&[(u64, Complex64)]>,
) -> Result<SegmentIntegrals> {
    let freq = f.frequency() + spec.y.max(2.0).ln();
    // start fine enough that the supremum grid resolves F, then refine the integrals
    let mut width = (0.25 / freq).min(0.05);
    let mut prev = segment_pass(spec, f, small, large, width)?;
    for _ in 0..MAX_LEVELS {
        width /= 2.0;
        let next = segment_pass(spec, f, small, large, width)?;
        let close = |a: f64, b: f64| (a - b).abs() <= REFINE_TOL * a.abs().max(b.abs()).max(1e-300);
        let converged = close(prev.lhs, next.lhs)
            && close(prev.log_deriv_sq, next.log_deriv_sq)
            && close(prev.norm_sq, next.norm_sq);
        prev = next;
        if converged {
            break;
        }
    }
    Ok(prev)
}

/// `|int G F| <= M (|G(beta)| + sqrt(int |G'/G|^2 int |G|^2))`.
pub fn check_lemma1(
    spec: &RandomEulerSpec,
    f: &TestFunction,
    seed: u64,
) -> Result<InequalityReport> {
    let seg = segment_integrals(spec, f, None, None)?;
    let g_beta = euler_product_with(
        Complex64::new(spec.beta, 0.0),
        spec.coefficients.iter().copied(),
    )?
    .value
    .norm();
    let rhs = seg.sup * (g_beta + (seg.log_deriv_sq * seg.norm_sq).sqrt());
    Ok(InequalityReport::new(Suite::Lemma1, seg.lhs, rhs, seed))
}

/// The same bound with `G*` over `p <= sqrt y` and `M*` carrying the product over
/// `sqrt y < p <= y`.
pub fn check_lemma2(
    spec: &RandomEulerSpec,
    f: &TestFunction,
    seed: u64,
) -> Result<InequalityReport> {
    let (small, large) = spec.split();
    let seg = segment_integrals(spec, f, Some(&small), Some(&large))?;
    let g_star = euler_product_with(Complex64::new(spec.beta, 0.0), small.iter().copied())?
        .value
        .norm();
    let rhs = seg.sup * (g_star + (seg.log_deriv_sq * seg.norm_sq).sqrt());
    Ok(InequalityReport::new(Suite::Lemma2, seg.lhs, rhs, seed))
}

/// A seeded mean-value instance: random Euler product plus test function.
pub(super) fn sample_instance(seed: u64) -> (RandomEulerSpec, TestFunction) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = RandomEulerSpec::sample(&mut rng);
    let f = TestFunction::sample(&mut rng);
    (spec, f)
}
