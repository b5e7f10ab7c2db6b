//! Truncated Euler products `L(s, chi; y) = prod_{p <= y} (1 - chi(p) p^-s)^-1`.

use num_complex::Complex64;
use serde::Serialize;

use crate::dirichlet::DirichletCharacter;
use crate::error::{Error, Result};
use crate::primes::primes_up_to_real;
use crate::quadrature::NeumaierComplex;

/// Factors closer than this to zero are rejected.
pub const NEAR_POLE_GUARD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EulerProductValue {
    pub value: Complex64,
    /// Sum of the principal logs of the individual factors.
    pub log_value: Complex64,
    /// `L'/L`
    pub log_deriv: Complex64,
}

/// `L(s, chi; y)` with its logarithm and logarithmic derivative.
pub fn euler_product(s: Complex64, chi: &DirichletCharacter, y: f64) -> Result<EulerProductValue> {
    if !(s.re > 0.0) {
        return Err(Error::Domain(format!(
            "Euler product needs Re(s) > 0, got {s}"
        )));
    }
    let primes = primes_up_to_real(y);
    let q = chi.modulus();
    euler_product_with(
        s,
        primes
            .iter()
            .filter(|&&p| q == 1 || q % p as u64 != 0)
            .map(|&p| (p as u64, chi.evaluate(p as u64))),
    )
}

/// Product of `(1 - g p^-s)^-1` over arbitrary `(p, g)` pairs.
pub fn euler_product_with<I>(s: Complex64, coefficients: I) -> Result<EulerProductValue>
where
    I: IntoIterator<Item = (u64, Complex64)>,
{
    let mut value = Complex64::new(1.0, 0.0);
    let mut log_value = NeumaierComplex::default();
    let mut log_deriv = NeumaierComplex::default();
    for (p, g) in coefficients {
        if g == Complex64::new(0.0, 0.0) {
            continue;
        }
        let lp = (p as f64).ln();
        let a = g * (-s * lp).exp();
        let factor = Complex64::new(1.0, 0.0) - a;
        if factor.norm() < NEAR_POLE_GUARD {
            return Err(Error::NearPole {
                p,
                re: s.re,
                im: s.im,
                guard: NEAR_POLE_GUARD,
            });
        }
        value /= factor;
        log_value.add(-factor.ln());
        log_deriv.add(-a * lp / factor);
    }
    Ok(EulerProductValue {
        value,
        log_value: log_value.sum(),
        log_deriv: log_deriv.sum(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirichlet::CharacterGroup;
    use crate::primes::factorize;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn small_products() {
        let trivial = DirichletCharacter::trivial();
        let v = euler_product(c(2.0, 0.0), &trivial, 3.0).unwrap();
        assert!((v.value - c(1.5, 0.0)).norm() < 1e-15);
        let chi0 = DirichletCharacter::principal(2).unwrap();
        let v = euler_product(c(2.0, 0.0), &chi0, 3.0).unwrap();
        assert!((v.value - c(9.0 / 8.0, 0.0)).norm() < 1e-15);
    }

    /// Sum of chi(n) n^-s over 10-smooth n <= N, with the tail bounded by
    /// sum_{n > N} n^-sigma.
    #[test]
    fn matches_smooth_dirichlet_series() {
        let n_max = 100_000u64;
        for q in [1u64, 3, 4, 7] {
            let group = CharacterGroup::new(q).unwrap();
            for chi in group.characters() {
                for s in [c(2.0, 0.0), c(1.5, 3.0), c(2.5, -7.0)] {
                    let mut partial = c(0.0, 0.0);
                    for n in 1..=n_max {
                        if factorize(n).iter().all(|&(p, _)| p <= 10) {
                            partial += chi.evaluate(n) * (-s * (n as f64).ln()).exp();
                        }
                    }
                    let tail = (n_max as f64).powf(1.0 - s.re) / (s.re - 1.0);
                    let v = euler_product(s, &chi, 10.0).unwrap();
                    assert!((v.value - partial).norm() <= tail, "q={q} s={s}");
                }
            }
        }
    }

    #[test]
    fn log_is_consistent_with_value() {
        let group = CharacterGroup::new(11).unwrap();
        for chi in group.characters() {
            for s in [c(0.3, 0.0), c(0.7, 14.0), c(1.1, -40.0)] {
                let v = euler_product(s, &chi, 500.0).unwrap();
                let rel = (v.log_value.exp() - v.value).norm() / v.value.norm();
                assert!(rel < 1e-10, "{rel}");
            }
        }
    }

    #[test]
    fn log_derivative_matches_central_difference() {
        let group = CharacterGroup::new(5).unwrap();
        let s = c(0.8, 5.0);
        for chi in group.characters() {
            let exact = euler_product(s, &chi, 100.0).unwrap().log_deriv;
            let diff = |h: f64| {
                let hp = euler_product(s + h, &chi, 100.0).unwrap().log_value;
                let hm = euler_product(s - h, &chi, 100.0).unwrap().log_value;
                ((hp - hm) / (2.0 * h) - exact).norm()
            };
            let (e1, e2) = (diff(1e-4), diff(5e-5));
            // O(h^2): halving h should cut the error by ~4, unless already at rounding
            assert!(e1 < 1e-6);
            assert!(e2 < e1 / 2.5 || e2 < 1e-9, "{e1} {e2}");
        }
    }

    #[test]
    fn guards() {
        let trivial = DirichletCharacter::trivial();
        assert!(euler_product(c(0.0, 1.0), &trivial, 10.0).is_err());
        // 1 - 2^-s vanishes at s = 2 pi i / log 2, approached from the right
        let s = c(1e-14, 2.0 * std::f64::consts::PI / 2f64.ln());
        assert!(matches!(
            euler_product(s, &trivial, 2.0),
            Err(Error::NearPole { p: 2, .. })
        ));
        let empty = euler_product(c(1.0, 0.0), &trivial, 1.0).unwrap();
        assert_eq!(empty.value, c(1.0, 0.0));
    }
}
