//! Gauss–Legendre rules, composite panel integration and compensated sums.

use std::sync::OnceLock;

use num_complex::Complex64;

/// An `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre order must be positive");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi initial guess, then Newton on P_n.
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, z);
                dp = d;
                let dz = p / d;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, z);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Map the rule onto `[a, b]`, yielding `(node, weight)` pairs.
    pub fn on(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let mut acc = Neumaier::default();
        for (t, w) in self.on(a, b) {
            acc.add(w * f(t));
        }
        acc.sum()
    }

    pub fn integrate_complex<F: FnMut(f64) -> Complex64>(
        &self,
        a: f64,
        b: f64,
        mut f: F,
    ) -> Complex64 {
        let mut acc = NeumaierComplex::default();
        for (t, w) in self.on(a, b) {
            acc.add(f(t) * w);
        }
        acc.sum()
    }
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Shared 16- and 8-point rules.
pub fn gl16() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(16))
}

pub fn gl8() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(8))
}

/// Split `[a, b]` into equal panels no wider than `max_width`.
pub fn panels(a: f64, b: f64, max_width: f64) -> Vec<(f64, f64)> {
    if b <= a {
        return Vec::new();
    }
    let count = ((b - a) / max_width).ceil().max(1.0) as usize;
    let h = (b - a) / count as f64;
    (0..count)
        .map(|i| {
            let lo = a + h * i as f64;
            let hi = if i + 1 == count {
                b
            } else {
                a + h * (i + 1) as f64
            };
            (lo, hi)
        })
        .collect()
}

/// Composite rule on equal panels.
pub fn composite_complex<F: FnMut(f64) -> Complex64>(
    rule: &GaussLegendre,
    a: f64,
    b: f64,
    max_width: f64,
    mut f: F,
) -> Complex64 {
    let mut acc = NeumaierComplex::default();
    for (lo, hi) in panels(a, b, max_width) {
        acc.add(rule.integrate_complex(lo, hi, &mut f));
    }
    acc.sum()
}

pub fn composite<F: FnMut(f64) -> f64>(
    rule: &GaussLegendre,
    a: f64,
    b: f64,
    max_width: f64,
    mut f: F,
) -> f64 {
    let mut acc = Neumaier::default();
    for (lo, hi) in panels(a, b, max_width) {
        acc.add(rule.integrate(lo, hi, &mut f));
    }
    acc.sum()
}

/// Neumaier (improved Kahan) summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn sum(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Debug, Default, Clone, Copy)]
pub struct NeumaierComplex {
    re: Neumaier,
    im: Neumaier,
}

impl NeumaierComplex {
    pub fn add(&mut self, v: Complex64) {
        self.re.add(v.re);
        self.im.add(v.im);
    }

    pub fn sum(&self) -> Complex64 {
        Complex64::new(self.re.sum(), self.im.sum())
    }
}
