use rayon::prelude::*;
use serde::Serialize;

use super::{sort_records, ExperimentConfig, ResultRecord, Study, Subgroup};
use crate::analytic::saddle_alpha;
use crate::error::Result;
use crate::primes::{euler_phi, gcd, primes_up_to_real};
use crate::smooth::{count_by_residue, for_each_smooth, SmoothCountQuery};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscrepancySummary {
    pub x: f64,
    pub y: f64,
    pub q: u64,
    pub v: f64,
    /// `Psi_q(x, y)`
    pub total: u64,
    /// Largest discrepancy over the classes.
    pub max_discrepancy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Equidistribution {
    pub records: Vec<ResultRecord>,
    pub summaries: Vec<DiscrepancySummary>,
}

struct GridPoint {
    hist: Vec<u64>,
    total: u64,
    u: f64,
    v: f64,
    w: f64,
    alpha: f64,
}

fn grid_point(x: f64, y: f64, q: u64) -> Result<GridPoint> {
    let hist = count_by_residue(x, y, q)?;
    let total = hist.iter().sum();
    let sp = saddle_alpha(x, y, Some(q), false)?;
    let v = sp.v.unwrap_or(f64::INFINITY);
    Ok(GridPoint {
        hist,
        total,
        u: sp.u,
        v,
        w: sp.w.unwrap_or(y),
        alpha: sp.alpha,
    })
}

/// One record per coprime class at every grid point, plus the per-point maximum.
pub fn run_equidistribution(config: &ExperimentConfig) -> Result<Equidistribution> {
    config.validate()?;
    let per_point = config
        .grid()
        .into_par_iter()
        .map(|(x, y, q)| {
            let gp = grid_point(x, y, q)?;
            let phi = euler_phi(q) as f64;
            let expected = gp.total as f64 / phi;
            let records: Vec<ResultRecord> = (0..q)
                .filter(|&a| gcd(a, q) == 1)
                .map(|a| {
                    let count = gp.hist[a as usize];
                    let discrepancy = if gp.total > 0 {
                        (count as f64 * phi / gp.total as f64 - 1.0).abs()
                    } else {
                        0.0
                    };
                    ResultRecord {
                        x,
                        y,
                        q,
                        a,
                        count,
                        expected,
                        discrepancy,
                        u: gp.u,
                        v: gp.v,
                        w: gp.w,
                        alpha: gp.alpha,
                    }
                })
                .collect();
            let max_discrepancy = records.iter().map(|r| r.discrepancy).fold(0.0, f64::max);
            Ok((
                records,
                DiscrepancySummary {
                    x,
                    y,
                    q,
                    v: gp.v,
                    total: gp.total,
                    max_discrepancy,
                },
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut records = Vec::new();
    let mut summaries = Vec::new();
    for (r, s) in per_point {
        records.extend(r);
        summaries.push(s);
    }
    sort_records(&mut records);
    summaries.sort_by(|a, b| {
        a.x.total_cmp(&b.x)
            .then(a.y.total_cmp(&b.y))
            .then(a.q.cmp(&b.q))
    });
    Ok(Equidistribution { records, summaries })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CosetRecord {
    pub x: f64,
    pub y: f64,
    pub q: u64,
    /// Smallest element of the coset `aH`.
    pub coset: u64,
    pub a: u64,
    pub b: u64,
    /// `|Psi(x, y; q, a) - Psi(x, y; q, b)|`
    pub difference: u64,
    /// `difference * phi(q) / Psi_q(x, y)`
    pub normalized: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CosetReport {
    /// Always true: `H` is supplied, not derived.
    pub surrogate: bool,
    pub subgroup: Subgroup,
    pub records: Vec<CosetRecord>,
}

/// Pairwise class differences inside each coset of `H`.
pub fn run_coset(config: &ExperimentConfig, subgroup: &Subgroup) -> Result<CosetReport> {
    config.validate()?;
    let per_point = config
        .grid()
        .into_par_iter()
        .map(|(x, y, q)| {
            let h = subgroup.elements(q)?;
            let hist = count_by_residue(x, y, q)?;
            let total: u64 = hist.iter().sum();
            let phi = euler_phi(q) as f64;
            let mut seen = vec![false; q as usize];
            let mut out = Vec::new();
            for a0 in (1..q).filter(|&a| gcd(a, q) == 1) {
                if seen[a0 as usize] {
                    continue;
                }
                let mut coset: Vec<u64> = h.iter().map(|&g| a0 * g % q).collect();
                coset.sort_unstable();
                for &c in &coset {
                    seen[c as usize] = true;
                }
                for (i, &a) in coset.iter().enumerate() {
                    for &b in &coset[i + 1..] {
                        let difference = hist[a as usize].abs_diff(hist[b as usize]);
                        let normalized = if total > 0 {
                            difference as f64 * phi / total as f64
                        } else {
                            0.0
                        };
                        out.push(CosetRecord {
                            x,
                            y,
                            q,
                            coset: coset[0],
                            a,
                            b,
                            difference,
                            normalized,
                        });
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut records: Vec<CosetRecord> = per_point.into_iter().flatten().collect();
    records.sort_by(|l, r| {
        l.x.total_cmp(&r.x)
            .then(l.y.total_cmp(&r.y))
            .then(l.q.cmp(&r.q))
            .then((l.a, l.b).cmp(&(r.a, r.b)))
    });
    Ok(CosetReport {
        surrogate: true,
        subgroup: subgroup.clone(),
        records,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnsmoothingRecord {
    pub x: f64,
    pub y: f64,
    pub q: u64,
    pub epsilon: f64,
    /// `(Psi_q(x, y) - Psi_q((1 - eps) x, y)) / Psi_q(x, y)`
    pub ratio: f64,
    pub v: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnsmoothingFit {
    pub x: f64,
    pub y: f64,
    pub q: u64,
    pub v: f64,
    /// Least-squares slope of ratio against epsilon, through the origin.
    pub slope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Unsmoothing {
    pub records: Vec<UnsmoothingRecord>,
    pub fits: Vec<UnsmoothingFit>,
}

/// Sorted y-smooth `n <= x` coprime to `q`.
fn smooth_values(x: f64, y: f64, q: u64) -> Result<Vec<u64>> {
    let query = SmoothCountQuery::new(x, y).coprime_to(q);
    query.validate()?;
    let limit = x.floor() as u64;
    // reuse the ceiling check of the counting path
    crate::smooth::count_smooth(&query)?;
    let primes: Vec<u64> = primes_up_to_real(y.min(limit.max(1) as f64))
        .iter()
        .map(|&p| p as u64)
        .filter(|&p| q == 1 || q % p != 0)
        .collect();
    let mut values = Vec::new();
    for_each_smooth(limit, &primes, |n| values.push(n));
    values.sort_unstable();
    Ok(values)
}

fn ratios(values: &[u64], x: f64, epsilons: &[f64]) -> Vec<f64> {
    let total = values.len() as f64;
    epsilons
        .iter()
        .map(|&eps| {
            if total == 0.0 {
                return 0.0;
            }
            // x - eps x rather than (1 - eps) x keeps integer thresholds exact
            let threshold = x - eps * x;
            let below = values.partition_point(|&n| (n as f64) <= threshold) as f64;
            (total - below) / total
        })
        .collect()
}

/// The unsmoothing ratio at a single point; `q = 1` gives the unrestricted count.
pub fn unsmoothing_ratio(x: f64, y: f64, q: u64, epsilon: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(crate::error::Error::Domain(format!(
            "epsilon {epsilon} outside [0, 1]"
        )));
    }
    Ok(ratios(&smooth_values(x, y, q)?, x, &[epsilon])[0])
}

pub fn run_unsmoothing(config: &ExperimentConfig) -> Result<Unsmoothing> {
    config.validate()?;
    let per_point = config
        .grid()
        .into_par_iter()
        .map(|(x, y, q)| {
            let values = smooth_values(x, y, q)?;
            let rs = ratios(&values, x, &config.epsilons);
            let v = x.ln() / (q as f64).ln();
            let records: Vec<UnsmoothingRecord> = config
                .epsilons
                .iter()
                .zip(&rs)
                .map(|(&epsilon, &ratio)| UnsmoothingRecord {
                    x,
                    y,
                    q,
                    epsilon,
                    ratio,
                    v,
                })
                .collect();
            let sxx: f64 = config.epsilons.iter().map(|e| e * e).sum();
            let sxy: f64 = config.epsilons.iter().zip(&rs).map(|(e, r)| e * r).sum();
            let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
            Ok((records, UnsmoothingFit { x, y, q, v, slope }))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut records = Vec::new();
    let mut fits = Vec::new();
    for (r, f) in per_point {
        records.extend(r);
        fits.push(f);
    }
    Ok(Unsmoothing { records, fits })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentOutput {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equidistribution: Option<Equidistribution>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coset: Option<CosetReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unsmoothing: Option<Unsmoothing>,
}

/// Every study named in the config.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    config.validate()?;
    let mut out = ExperimentOutput {
        equidistribution: None,
        coset: None,
        unsmoothing: None,
    };
    for study in &config.studies {
        match study {
            Study::Equidistribution => out.equidistribution = Some(run_equidistribution(config)?),
            Study::Coset => out.coset = Some(run_coset(config, &config.subgroup())?),
            Study::Unsmoothing => out.unsmoothing = Some(run_unsmoothing(config)?),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smooth::count_smooth;

    #[test]
    fn hundred_five_three() {
        let eq =
            run_equidistribution(&ExperimentConfig::new(vec![100.0], vec![5.0], vec![3])).unwrap();
        let counts: Vec<u64> = eq.records.iter().map(|r| r.count).collect();
        assert_eq!(counts, vec![8, 7]);
        assert_eq!(eq.summaries[0].total, 15);
        assert!((eq.summaries[0].max_discrepancy - 1.0 / 15.0).abs() < 1e-15);
        assert!((eq.records[0].expected - 7.5).abs() < 1e-15);
    }

    #[test]
    fn single_class_modulus() {
        let eq = run_equidistribution(&ExperimentConfig::new(
            vec![1000.0, 5e4],
            vec![7.0, 30.0],
            vec![2],
        ))
        .unwrap();
        assert!(eq.records.iter().all(|r| r.a == 1 && r.discrepancy == 0.0));
    }

    #[test]
    fn row_sums_conserved() {
        let config = ExperimentConfig::new(vec![3e4], vec![11.0, 40.0], vec![5, 9, 12]);
        let eq = run_equidistribution(&config).unwrap();
        for s in &eq.summaries {
            let sum: u64 = eq
                .records
                .iter()
                .filter(|r| (r.x, r.y, r.q) == (s.x, s.y, s.q))
                .map(|r| r.count)
                .sum();
            let psi_q = count_smooth(&SmoothCountQuery::new(s.x, s.y).coprime_to(s.q))
                .unwrap()
                .value;
            assert_eq!(sum, psi_q);
        }
        let rows: u64 =
            config.qs.iter().map(|&q| euler_phi(q)).sum::<u64>() * config.ys.len() as u64;
        assert_eq!(eq.records.len() as u64, rows);
    }

    #[test]
    fn cosets() {
        let config = ExperimentConfig::new(vec![1e4], vec![20.0], vec![5]);
        let squares = run_coset(&config, &Subgroup::Powers(2)).unwrap();
        assert!(squares.surrogate);
        let hist = count_by_residue(1e4, 20.0, 5).unwrap();
        let one_four = squares
            .records
            .iter()
            .find(|r| (r.a, r.b) == (1, 4))
            .unwrap();
        assert_eq!(one_four.difference, hist[1].abs_diff(hist[4]));
        assert_eq!(squares.records.len(), 2);
        // index 1: every pair lies in the single coset
        let whole = run_coset(&config, &Subgroup::Powers(1)).unwrap();
        assert_eq!(whole.records.len(), 6);
        assert!(whole.records.iter().all(|r| r.coset == 1));
    }

    #[test]
    fn unsmoothing_fixture_and_ends() {
        assert_eq!(unsmoothing_ratio(100.0, 5.0, 1, 0.0).unwrap(), 0.0);
        assert_eq!(unsmoothing_ratio(100.0, 5.0, 1, 1.0).unwrap(), 1.0);
        assert_eq!(unsmoothing_ratio(100.0, 5.0, 1, 0.1).unwrap(), 2.0 / 34.0);
        let mut config = ExperimentConfig::new(vec![1e5], vec![30.0], vec![3, 7]);
        config.epsilons = vec![0.0, 0.05, 0.1, 0.2];
        let u = run_unsmoothing(&config).unwrap();
        assert_eq!(u.records.len(), 8);
        assert!(u.fits.iter().all(|f| f.slope > 0.0 && f.slope < 5.0));
    }
}
