//! The factor-3 majorant inequality for trigonometric sums, in closed form.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::{InequalityReport, Suite};
use crate::error::{Error, Result};

pub const MAX_TERMS: usize = 30;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MajorantInstance {
    pub lambdas: Vec<f64>,
    pub coefficients: Vec<Complex64>,
    pub majorants: Vec<f64>,
    pub half_width: f64,
}

impl MajorantInstance {
    pub fn new(
        lambdas: Vec<f64>,
        coefficients: Vec<Complex64>,
        majorants: Vec<f64>,
        half_width: f64,
    ) -> Result<Self> {
        let n = lambdas.len();
        if coefficients.len() != n || majorants.len() != n {
            return Err(Error::InvalidQuery(
                "lambda, a and A must have equal lengths".into(),
            ));
        }
        if n > MAX_TERMS {
            return Err(Error::InvalidQuery(format!(
                "at most {MAX_TERMS} terms, got {n}"
            )));
        }
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::Domain(format!(
                "T must be positive, got {half_width}"
            )));
        }
        for (i, (a, &big)) in coefficients.iter().zip(&majorants).enumerate() {
            if a.norm() > big {
                return Err(Error::Hypothesis(format!(
                    "|a_{}| = {} exceeds A_{} = {big}",
                    i + 1,
                    a.norm(),
                    i + 1
                )));
            }
        }
        Ok(Self {
            lambdas,
            coefficients,
            majorants,
            half_width,
        })
    }
}

/// `int_{-T}^{T} e^(2 pi i d t) dt`
fn kernel(d: f64, half_width: f64) -> f64 {
    let z = 2.0 * PI * d * half_width;
    if z.abs() < 1e-4 {
        2.0 * half_width * (1.0 - z * z / 6.0)
    } else {
        z.sin() / (PI * d)
    }
}

fn mean_square<C: Copy + Into<Complex64>>(lambdas: &[f64], coeffs: &[C], half_width: f64) -> f64 {
    let mut acc = 0.0;
    for (n, &an) in coeffs.iter().enumerate() {
        let an: Complex64 = an.into();
        for (m, &am) in coeffs.iter().enumerate() {
            let am: Complex64 = am.into();
            acc += (an * am.conj()).re * kernel(lambdas[n] - lambdas[m], half_width);
        }
    }
    acc
}

/// `int |sum a_n e(lambda_n t)|^2 <= 3 int |sum A_n e(lambda_n t)|^2` over `[-T, T]`.
pub fn check_majorant(instance: &MajorantInstance, seed: u64) -> InequalityReport {
    let lhs = mean_square(
        &instance.lambdas,
        &instance.coefficients,
        instance.half_width,
    );
    let rhs = 3.0 * mean_square(&instance.lambdas, &instance.majorants, instance.half_width);
    InequalityReport::new(Suite::Majorant, lhs, rhs, seed)
}
