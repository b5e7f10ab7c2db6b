//! Exact counts of y-smooth numbers, plain, weighted, by residue class, and for
//! huge `x` given as a power when `y` is tiny.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::SmoothingKernel;
use crate::dirichlet::DirichletCharacter;
use crate::error::{Error, Result};
use crate::primes::{gcd, primes_up_to_real};
use crate::quadrature::{Neumaier, NeumaierComplex};

pub const DEFAULT_CEILING: u64 = 100_000_000;
pub const CEILING_ENV: &str = "SMOOTHLAB_CEILING";
/// Most primes the power path will enumerate over.
pub const MAX_BIGX_PRIMES: usize = 25;
const LOG_GUARD: f64 = 1e-9;

/// The enumeration ceiling, read once from `SMOOTHLAB_CEILING` if set.
pub fn enumeration_ceiling() -> u64 {
    static CEILING: OnceLock<u64> = OnceLock::new();
    *CEILING.get_or_init(|| {
        std::env::var(CEILING_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<f64>().ok())
            .filter(|v| v.is_finite() && *v >= 1.0)
            .map_or(DEFAULT_CEILING, |v| v as u64)
    })
}

/// `x = base^exponent`, never materialized on the fast path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigX {
    pub base: u64,
    pub exponent: u32,
}

impl BigX {
    pub fn new(base: u64, exponent: u32) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidQuery(format!(
                "power base must be at least 2, got {base}"
            )));
        }
        Ok(Self { base, exponent })
    }

    pub fn ln(&self) -> f64 {
        self.exponent as f64 * (self.base as f64).ln()
    }

    fn exact(&self) -> BigUint {
        BigUint::from(self.base).pow(self.exponent)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoothCountQuery {
    pub x: Option<f64>,
    pub bigx: Option<BigX>,
    pub y: f64,
    pub q: u64,
    pub a: Option<u64>,
}

impl SmoothCountQuery {
    /// `Psi(x, y)`.
    pub fn new(x: f64, y: f64) -> Self {
        Self {
            x: Some(x),
            bigx: None,
            y,
            q: 1,
            a: None,
        }
    }

    pub fn power(bigx: BigX, y: f64) -> Self {
        Self {
            x: None,
            bigx: Some(bigx),
            y,
            q: 1,
            a: None,
        }
    }

    /// Restrict to `n` coprime to `q`.
    pub fn coprime_to(mut self, q: u64) -> Self {
        self.q = q;
        self
    }

    /// Restrict to `n = a (mod q)`.
    pub fn in_class(mut self, a: u64, q: u64) -> Self {
        self.q = q;
        self.a = Some(a);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.y >= 2.0) || self.y.is_nan() {
            return Err(Error::InvalidQuery(format!(
                "y must be at least 2, got {}",
                self.y
            )));
        }
        if self.q == 0 {
            return Err(Error::InvalidQuery("modulus must be at least 1".into()));
        }
        match (self.x, self.bigx) {
            (Some(_), Some(_)) => {
                return Err(Error::InvalidQuery("set x or bigx, not both".into()))
            }
            (None, None) => {
                return Err(Error::InvalidQuery("one of x and bigx is required".into()))
            }
            (Some(x), None) if !(x >= 1.0 && x.is_finite()) => {
                return Err(Error::InvalidQuery(format!(
                    "x must be a finite real >= 1, got {x}"
                )))
            }
            _ => {}
        }
        if let Some(a) = self.a {
            if a >= self.q {
                return Err(Error::InvalidQuery(format!(
                    "residue {a} not in [0, {})",
                    self.q
                )));
            }
            if gcd(a, self.q) != 1 {
                return Err(Error::InvalidResidue { a, q: self.q });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SmoothCount {
    pub value: u64,
    pub exact: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightedCount {
    pub value: Complex64,
    pub exact: bool,
}

pub fn is_smooth(n: u64, y: f64) -> bool {
    let mut n = n;
    let mut p = 2u64;
    while p * p <= n {
        if (p as f64) > y {
            return false;
        }
        while n % p == 0 {
            n /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    n == 1 || (n as f64) <= y
}

/// Primes `<= min(y, limit)` not dividing `q`.
fn admissible_primes(y: f64, q: u64, limit: u64) -> Vec<u64> {
    primes_up_to_real(y.min(limit.max(1) as f64))
        .iter()
        .map(|&p| p as u64)
        .filter(|&p| q % p != 0 || q == 1)
        .collect()
}

/// Visit every product of `primes` that is `<= limit`, including 1.
pub(crate) fn for_each_smooth<F: FnMut(u64)>(limit: u64, primes: &[u64], mut visit: F) {
    fn go<F: FnMut(u64)>(n: u64, from: usize, limit: u64, primes: &[u64], visit: &mut F) {
        visit(n);
        let room = limit / n;
        for (j, &p) in primes.iter().enumerate().skip(from) {
            if p > room {
                break;
            }
            go(n * p, j, limit, primes, visit);
        }
    }
    if limit >= 1 {
        go(1, 0, limit, primes, &mut visit);
    }
}

fn plain_limit(x: f64) -> Result<u64> {
    let ceiling = enumeration_ceiling();
    if x > ceiling as f64 {
        return Err(Error::ThresholdExceeded { x, ceiling });
    }
    Ok(x.floor() as u64)
}

/// `Psi(x, y)`, `Psi_q(x, y)` or `Psi(x, y; q, a)` according to the query.
pub fn count_smooth(query: &SmoothCountQuery) -> Result<SmoothCount> {
    query.validate()?;
    if let Some(bigx) = query.bigx {
        if query.a.is_some() {
            return Err(Error::InvalidQuery(
                "the power path counts coprime classes only".into(),
            ));
        }
        return count_smooth_bigx(bigx, query.y, query.q);
    }
    let limit = plain_limit(query.x.unwrap_or_default())?;
    let primes = admissible_primes(query.y, query.q, limit);
    let mut count = 0u64;
    match query.a {
        None => for_each_smooth(limit, &primes, |_| count += 1),
        Some(a) => for_each_smooth(limit, &primes, |n| count += u64::from(n % query.q == a)),
    }
    Ok(SmoothCount {
        value: count,
        exact: true,
    })
}

/// `Psi(x, y; q, a)` for every `a`, indexed by residue (non-coprime classes are 0).
pub fn count_by_residue(x: f64, y: f64, q: u64) -> Result<Vec<u64>> {
    SmoothCountQuery::new(x, y).coprime_to(q).validate()?;
    let limit = plain_limit(x)?;
    let primes = admissible_primes(y, q, limit);
    let mut hist = vec![0u64; q as usize];
    for_each_smooth(limit, &primes, |n| hist[(n % q) as usize] += 1);
    Ok(hist)
}

/// `sum Phi(n/x)` over y-smooth `n = a (mod q)` (coprime to `q` without `a`), or
/// `sum chi(n) Phi(n/x)` over y-smooth `n` when a character is given.
pub fn count_smooth_weighted(
    query: &SmoothCountQuery,
    kernel: &SmoothingKernel,
    chi: Option<&DirichletCharacter>,
) -> Result<WeightedCount> {
    query.validate()?;
    let Some(x) = query.x else {
        return Err(Error::InvalidQuery("weighted counts need a plain x".into()));
    };
    plain_limit(x)?;
    let limit = (kernel.hi() * x).floor() as u64;
    if let Some(chi) = chi {
        if chi.modulus() != query.q {
            return Err(Error::ModulusMismatch {
                chi: chi.modulus(),
                q: query.q,
            });
        }
        if query.a.is_some() {
            return Err(Error::InvalidQuery(
                "give a residue or a character, not both".into(),
            ));
        }
        // primes dividing q contribute chi = 0, so they are skipped outright
        let primes = admissible_primes(query.y, query.q, limit);
        let mut acc = NeumaierComplex::default();
        for_each_smooth(limit, &primes, |n| {
            let w = kernel.eval(n as f64 / x);
            if w > 0.0 {
                acc.add(chi.evaluate(n) * w);
            }
        });
        return Ok(WeightedCount {
            value: acc.sum(),
            exact: true,
        });
    }
    let primes = admissible_primes(query.y, query.q, limit);
    let mut acc = Neumaier::default();
    for_each_smooth(limit, &primes, |n| {
        if query.a.is_none_or(|a| n % query.q == a) {
            acc.add(kernel.eval(n as f64 / x));
        }
    });
    Ok(WeightedCount {
        value: Complex64::new(acc.sum(), 0.0),
        exact: true,
    })
}

/// `Psi_q(base^exponent, y)` by counting exponent vectors.
pub fn count_smooth_bigx(bigx: BigX, y: f64, q: u64) -> Result<SmoothCount> {
    let bigx = BigX::new(bigx.base, bigx.exponent)?;
    if !(y >= 2.0) || q == 0 {
        return Err(Error::InvalidQuery(format!(
            "need y >= 2 and q >= 1, got y = {y}, q = {q}"
        )));
    }
    let all = primes_up_to_real(y);
    if all.len() > MAX_BIGX_PRIMES {
        return Err(Error::TooManyPrimes {
            y,
            count: all.len(),
            max: MAX_BIGX_PRIMES,
        });
    }
    let primes: Vec<u64> = all
        .iter()
        .map(|&p| p as u64)
        .filter(|&p| q == 1 || q % p != 0)
        .collect();
    let Some((&last, rest)) = primes.split_last() else {
        return Ok(SmoothCount {
            value: 1,
            exact: true,
        });
    };
    let mut lattice = Lattice {
        primes: rest,
        logs: rest.iter().map(|&p| (p as f64).ln()).collect(),
        last,
        last_log: (last as f64).ln(),
        target: bigx,
        target_log: bigx.ln(),
        band: LOG_GUARD * bigx.ln().max(1.0),
        exact_target: None,
        exps: vec![0; rest.len()],
        count: 0,
    };
    lattice.walk(0, 0.0)?;
    Ok(SmoothCount {
        value: lattice.count,
        exact: true,
    })
}

struct Lattice<'a> {
    primes: &'a [u64],
    logs: Vec<f64>,
    last: u64,
    last_log: f64,
    target: BigX,
    target_log: f64,
    band: f64,
    exact_target: Option<BigUint>,
    exps: Vec<u32>,
    count: u64,
}

impl Lattice<'_> {
    fn walk(&mut self, from: usize, used: f64) -> Result<()> {
        self.count_last(used)?;
        for j in from..self.primes.len() {
            let next = used + self.logs[j];
            if next > self.target_log + self.band {
                break;
            }
            self.exps[j] += 1;
            if next > self.target_log - self.band && !self.fits_exact(0) {
                self.exps[j] -= 1;
                break;
            }
            self.walk(j, next)?;
            self.exps[j] -= 1;
        }
        Ok(())
    }

    /// Add the number of admissible powers of the last prime at this node.
    fn count_last(&mut self, used: f64) -> Result<()> {
        let room = self.target_log - used;
        let mut k = (room / self.last_log).floor().max(0.0) as u32;
        // settle any power whose log lands inside the guard band exactly
        while (k as f64 + 1.0) * self.last_log <= room + self.band && self.fits_exact(k + 1) {
            k += 1;
        }
        while k > 0 && k as f64 * self.last_log > room - self.band && !self.fits_exact(k) {
            k -= 1;
        }
        self.count = self
            .count
            .checked_add(k as u64 + 1)
            .ok_or_else(|| Error::InvalidQuery("count overflows u64".into()))?;
        Ok(())
    }

    fn fits_exact(&mut self, last_exp: u32) -> bool {
        let target = self.exact_target.get_or_insert_with(|| self.target.exact());
        let mut n = BigUint::from(self.last).pow(last_exp);
        for (&p, &e) in self.primes.iter().zip(&self.exps) {
            if e > 0 {
                n *= BigUint::from(p).pow(e);
            }
        }
        n <= *target
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnnolaEstimate {
    pub main_term: f64,
    /// `y^2 / (log x log y)`
    pub error_factor: f64,
    /// Number of primes `p <= y` not dividing `q`.
    pub primes: usize,
    /// Whether `y <= sqrt(log x)`.
    pub in_regime: bool,
}

/// `(1/k!) prod_{p <= y, p not dividing q} log x / log p`.
pub fn ennola_estimate(bigx: BigX, y: f64, q: u64) -> Result<EnnolaEstimate> {
    let bigx = BigX::new(bigx.base, bigx.exponent)?;
    if !(y >= 2.0) || q == 0 {
        return Err(Error::InvalidQuery(format!(
            "need y >= 2 and q >= 1, got y = {y}, q = {q}"
        )));
    }
    let log_x = bigx.ln();
    let primes: Vec<f64> = primes_up_to_real(y)
        .iter()
        .filter(|&&p| q == 1 || q % p as u64 != 0)
        .map(|&p| p as f64)
        .collect();
    let log_main: f64 = primes.iter().map(|p| (log_x / p.ln()).ln()).sum::<f64>()
        - (1..=primes.len()).map(|k| (k as f64).ln()).sum::<f64>();
    let in_regime = y <= log_x.sqrt();
    if !in_regime {
        log::warn!("Ennola estimate outside 2 <= y <= sqrt(log x): y = {y}, log x = {log_x}");
    }
    Ok(EnnolaEstimate {
        main_term: log_main.exp(),
        error_factor: y * y / (log_x * y.ln()),
        primes: primes.len(),
        in_regime,
    })
}
