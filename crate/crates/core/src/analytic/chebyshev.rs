//! Smoothed Chebyshev sums `sum_{n <= Ry} w(n) Lambda(n) chi(n) n^-s`.

use num_complex::Complex64;
use serde::Serialize;

use crate::dirichlet::DirichletCharacter;
use crate::error::{Error, Result};
use crate::primes::primes_up_to_real;
use crate::quadrature::NeumaierComplex;

/// The weight `w(n)`: 1 up to `y`, linear in `log n` down to 0 at `Ry`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChebyshevWeight {
    pub y: f64,
    pub r: f64,
}

impl ChebyshevWeight {
    pub fn new(y: f64, r: f64) -> Result<Self> {
        if !(y >= 2.0 && r > 1.0 && r.is_finite()) {
            return Err(Error::Domain(format!(
                "weight needs y >= 2 and R > 1, got y = {y}, R = {r}"
            )));
        }
        Ok(Self { y, r })
    }

    pub fn eval(&self, n: f64) -> f64 {
        if n < 1.0 {
            0.0
        } else if n <= self.y {
            1.0
        } else if n <= self.r * self.y {
            (1.0 - (n / self.y).ln() / self.r.ln()).max(0.0)
        } else {
            0.0
        }
    }

    pub fn cutoff(&self) -> f64 {
        self.r * self.y
    }
}

/// `R = max{2, y^(y^(-k / (2 log q)))}`.
pub fn r_parameter(y: f64, k: f64, q: u64) -> f64 {
    let inner = y.powf(-k / (2.0 * (q as f64).ln()));
    y.powf(inner).max(2.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmoothedChebyshev {
    pub value: Complex64,
    pub weight: ChebyshevWeight,
    pub terms: usize,
}

/// The sum with `R` taken from `(k, q_for_r)`.
pub fn smoothed_chebyshev(
    s: Complex64,
    chi: &DirichletCharacter,
    y: f64,
    k: f64,
    q_for_r: u64,
) -> Result<SmoothedChebyshev> {
    if q_for_r < 3 {
        return Err(Error::Domain(format!("R needs q >= 3, got {q_for_r}")));
    }
    if !(k >= 0.0) {
        return Err(Error::Domain(format!("k must be nonnegative, got {k}")));
    }
    let weight = ChebyshevWeight::new(y, r_parameter(y, k, q_for_r))?;
    smoothed_chebyshev_with(s, chi, weight)
}

/// The sum for an explicit weight.
pub fn smoothed_chebyshev_with(
    s: Complex64,
    chi: &DirichletCharacter,
    weight: ChebyshevWeight,
) -> Result<SmoothedChebyshev> {
    if !(s.re > 0.0) {
        return Err(Error::Domain(format!(
            "Chebyshev sum needs Re(s) > 0, got {s}"
        )));
    }
    let cutoff = weight.cutoff();
    let mut acc = NeumaierComplex::default();
    let mut terms = 0;
    for &p in primes_up_to_real(cutoff).iter() {
        let p = p as u64;
        let lp = (p as f64).ln();
        let mut n = p;
        loop {
            let w = weight.eval(n as f64);
            if w > 0.0 {
                let v = chi.evaluate(n);
                if v.re != 0.0 || v.im != 0.0 {
                    acc.add(v * (-s * (n as f64).ln()).exp() * (w * lp));
                    terms += 1;
                }
            }
            match n.checked_mul(p) {
                Some(next) if (next as f64) <= cutoff => n = next,
                _ => break,
            }
        }
    }
    Ok(SmoothedChebyshev {
        value: acc.sum(),
        weight,
        terms,
    })
}
