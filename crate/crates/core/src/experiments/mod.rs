//! Equidistribution, coset and unsmoothing studies over a grid of `(x, y, q)`.

mod export;
mod studies;

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::analytic::SmoothingKernel;
use crate::error::{Error, Result};
use crate::primes::gcd;

pub use export::{export_results, format_significant, write_plot_data};
pub use studies::{
    run_coset, run_equidistribution, run_experiment, run_unsmoothing, unsmoothing_ratio,
    CosetRecord, CosetReport, DiscrepancySummary, Equidistribution, ExperimentOutput, Unsmoothing,
    UnsmoothingFit, UnsmoothingRecord,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Study {
    Equidistribution,
    Coset,
    Unsmoothing,
}

/// Stand-in for the subgroup `H`, which cannot be built without zero data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subgroup {
    /// The `b`-th powers in `(Z/qZ)*`.
    Powers(u64),
    /// Explicit elements per modulus.
    Explicit(BTreeMap<u64, Vec<u64>>),
}

impl Subgroup {
    /// Sorted elements of `H` mod `q`, checked to form a subgroup of `(Z/qZ)*`.
    pub fn elements(&self, q: u64) -> Result<Vec<u64>> {
        if q < 2 {
            return Err(Error::InvalidSubgroup(format!(
                "modulus must be at least 2, got {q}"
            )));
        }
        let units: Vec<u64> = (1..q).filter(|&a| gcd(a, q) == 1).collect();
        let mut h: Vec<u64> = match self {
            Subgroup::Powers(b) => units
                .iter()
                .map(|&a| crate::primes::pow_mod(a, *b, q))
                .collect(),
            Subgroup::Explicit(map) => map
                .get(&q)
                .ok_or_else(|| Error::InvalidSubgroup(format!("no elements given for q = {q}")))?
                .iter()
                .map(|&a| a % q)
                .collect(),
        };
        h.sort_unstable();
        h.dedup();
        if let Some(&a) = h.iter().find(|&&a| gcd(a, q) != 1) {
            return Err(Error::InvalidSubgroup(format!("{a} is not coprime to {q}")));
        }
        if !h.contains(&1) {
            return Err(Error::InvalidSubgroup(format!(
                "subgroup mod {q} must contain 1"
            )));
        }
        for &a in &h {
            for &b in &h {
                if h.binary_search(&(a * b % q)).is_err() {
                    return Err(Error::InvalidSubgroup(format!(
                        "{a} * {b} mod {q} leaves the set"
                    )));
                }
            }
        }
        Ok(h)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelConfig {
    pub lo: f64,
    pub hi: f64,
}

impl Default for KernelConfig {
    fn default() -> Self {
        let k = SmoothingKernel::default();
        Self {
            lo: k.lo(),
            hi: k.hi(),
        }
    }
}

fn default_studies() -> Vec<Study> {
    vec![Study::Equidistribution]
}

fn default_order_threshold() -> u64 {
    2
}

fn default_a() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub qs: Vec<u64>,
    #[serde(default)]
    pub kernel: KernelConfig,
    #[serde(default)]
    pub epsilons: Vec<f64>,
    /// Character order threshold; also the default power for the coset subgroup.
    #[serde(rename = "B", default = "default_order_threshold")]
    pub order_threshold: u64,
    #[serde(rename = "A", default = "default_a")]
    pub a_const: f64,
    #[serde(rename = "D", default)]
    pub d_const: f64,
    #[serde(default)]
    pub subgroup: Option<Subgroup>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default = "default_studies")]
    pub studies: Vec<Study>,
}

impl ExperimentConfig {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>, qs: Vec<u64>) -> Self {
        Self {
            xs,
            ys,
            qs,
            kernel: KernelConfig::default(),
            epsilons: Vec::new(),
            order_threshold: default_order_threshold(),
            a_const: default_a(),
            d_const: 0.0,
            subgroup: None,
            output: None,
            format: OutputFormat::Csv,
            studies: default_studies(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self =
            serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.xs.is_empty() || self.ys.is_empty() || self.qs.is_empty() {
            return Err(Error::InvalidConfig(
                "xs, ys and qs must be nonempty".into(),
            ));
        }
        for &x in &self.xs {
            for &y in &self.ys {
                if !(y >= 2.0 && y <= x && x.is_finite()) {
                    return Err(Error::InvalidConfig(format!(
                        "grid point needs 2 <= y <= x, got x = {x}, y = {y}"
                    )));
                }
            }
        }
        if let Some(&q) = self.qs.iter().find(|&&q| q < 2) {
            return Err(Error::InvalidConfig(format!(
                "moduli must be at least 2, got {q}"
            )));
        }
        if let Some(&e) = self.epsilons.iter().find(|e| !(0.0..=1.0).contains(*e)) {
            return Err(Error::InvalidConfig(format!("epsilon {e} outside [0, 1]")));
        }
        self.kernel()?;
        Ok(())
    }

    pub fn kernel(&self) -> Result<SmoothingKernel> {
        SmoothingKernel::new(self.kernel.lo, self.kernel.hi)
    }

    pub fn subgroup(&self) -> Subgroup {
        self.subgroup
            .clone()
            .unwrap_or(Subgroup::Powers(self.order_threshold))
    }

    /// Every `(x, y, q)` in grid order.
    pub fn grid(&self) -> Vec<(f64, f64, u64)> {
        let mut out = Vec::new();
        for &x in &self.xs {
            for &y in &self.ys {
                for &q in &self.qs {
                    out.push((x, y, q));
                }
            }
        }
        out
    }
}

/// One residue class at one grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub x: f64,
    pub y: f64,
    pub q: u64,
    pub a: u64,
    pub count: u64,
    /// `Psi_q(x, y) / phi(q)`
    pub expected: f64,
    /// `|count phi(q) / Psi_q - 1|`, or 0 when `Psi_q = 0`.
    pub discrepancy: f64,
    pub u: f64,
    pub v: f64,
    pub w: f64,
    pub alpha: f64,
}

impl ResultRecord {
    fn key(&self) -> (f64, f64, u64, u64) {
        (self.x, self.y, self.q, self.a)
    }
}

pub(crate) fn sort_records(records: &mut [ResultRecord]) {
    records.sort_by(|l, r| {
        let (a, b) = (l.key(), r.key());
        a.0.total_cmp(&b.0)
            .then(a.1.total_cmp(&b.1))
            .then(a.2.cmp(&b.2))
            .then(a.3.cmp(&b.3))
    });
}
