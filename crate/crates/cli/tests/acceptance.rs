//! One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use smoothlab::contour::max_panel_width;
use smoothlab::contour::oscillating_integral_with;
use smoothlab::experiments::{run_equidistribution, run_unsmoothing, unsmoothing_ratio};
use smoothlab::inequality::{run_suite, Suite, SuiteSummary};
use smoothlab::primes::{euler_phi, gcd};
use smoothlab::smooth::{count_smooth_bigx, ennola_estimate};
use smoothlab::{
    character_group, count_smooth_weighted, saddle_alpha, BigX, ContourPlan, ContourSpec,
    ExperimentConfig, SmoothCountQuery, SmoothingKernel,
};

type Outcome = Result<String, String>;

const XS: [f64; 3] = [1e3, 1e4, 1e5];
const YS: [f64; 3] = [10.0, 30.0, 100.0];
const QS: [u64; 6] = [3, 4, 5, 7, 8, 12];
const CONTOUR_T: f64 = 100.0;

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn contour_oracle() -> Outcome {
    let start = Instant::now();
    let kernel = SmoothingKernel::default();
    let (mut checked, mut worst_rel, mut worst_env) = (0usize, 0.0f64, 0.0f64);
    let mut failures = Vec::new();
    for x in XS {
        for y in YS {
            let spec = ContourSpec::at_saddle(x, y, CONTOUR_T).map_err(|e| e.to_string())?;
            let plan = ContourPlan::new(x, y, &kernel, &spec).map_err(|e| e.to_string())?;
            for q in QS {
                for chi in character_group(q).map_err(|e| e.to_string())? {
                    let direct = count_smooth_weighted(
                        &SmoothCountQuery::new(x, y).coprime_to(q),
                        &kernel,
                        Some(&chi),
                    )
                    .map_err(|e| e.to_string())?
                    .value;
                    let r = plan.evaluate(&chi).map_err(|e| e.to_string())?;
                    let err = (r.value - direct).norm();
                    let envelope = r.tail_bound + 10.0 * r.quadrature_error_estimate;
                    worst_env = worst_env.max(err / envelope);
                    let rel_ok = if direct.norm() > 1.0 {
                        worst_rel = worst_rel.max(err / direct.norm());
                        err <= 1e-6 * direct.norm()
                    } else {
                        true
                    };
                    if err > envelope || !rel_ok {
                        failures.push(format!(
                            "x={x} y={y} q={q} chi={} err={err:.3e}",
                            chi.index()
                        ));
                    }
                    checked += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let detail = format!(
        "{checked} (x, y, chi) points at T = {CONTOUR_T}, worst rel err {worst_rel:.2e}, worst err/envelope {worst_env:.2e}, {:.1}s{}",
        elapsed.as_secs_f64(),
        if failures.is_empty() { String::new() } else { format!("; failures: {}", failures.join(", ")) }
    );
    ensure(
        failures.is_empty() && elapsed < Duration::from_secs(600),
        detail,
    )
}

fn character_decomposition() -> Outcome {
    let kernel = SmoothingKernel::default();
    let (mut checked, mut worst) = (0usize, 0.0f64);
    for x in XS {
        for y in YS {
            for q in QS {
                let chars = character_group(q).map_err(|e| e.to_string())?;
                let base = SmoothCountQuery::new(x, y).coprime_to(q);
                let weighted: Vec<Complex64> = chars
                    .iter()
                    .map(|chi| count_smooth_weighted(&base, &kernel, Some(chi)).map(|w| w.value))
                    .collect::<Result<_, _>>()
                    .map_err(|e| e.to_string())?;
                let phi = euler_phi(q) as f64;
                for a in (1..q).filter(|&a| gcd(a, q) == 1) {
                    let recon: Complex64 = chars
                        .iter()
                        .zip(&weighted)
                        .map(|(chi, w)| chi.evaluate(a).conj() * w)
                        .sum::<Complex64>()
                        / phi;
                    let direct = count_smooth_weighted(
                        &SmoothCountQuery::new(x, y).in_class(a, q),
                        &kernel,
                        None,
                    )
                    .map_err(|e| e.to_string())?
                    .value;
                    worst = worst.max((recon - direct).norm());
                    checked += 1;
                }
            }
        }
    }
    ensure(
        worst <= 1e-9,
        format!("{checked} classes, worst absolute error {worst:.2e}"),
    )
}

fn inequality_corpus() -> Outcome {
    let plan = [
        (Suite::Lemma1, 1_000),
        (Suite::Lemma2, 1_000),
        (Suite::Majorant, 10_000),
        (Suite::Pointwise, 10_000),
        (Suite::Calculus, 0),
    ];
    let mut parts = Vec::new();
    let mut violations = 0;
    for (suite, n) in plan {
        let reports = run_suite(suite, n, 0).map_err(|e| e.to_string())?;
        let s = SuiteSummary::from_reports(suite, &reports);
        violations += s.violations;
        parts.push(format!("{suite} {}/{}", s.violations, s.instances));
    }
    ensure(
        violations == 0,
        format!("violations/instances: {}", parts.join(", ")),
    )
}

fn saddle_point() -> Outcome {
    let xs = [1e3, 1e4, 1e6, 1e9, 1e12, 1e20, 1e40, 1e80];
    let ys = [2.0, 5.0, 10.0, 30.0, 100.0, 1e3, 1e4, 1e5];
    let (mut converged, mut asym_checked, mut worst_res, mut worst_asym) = (0, 0, 0.0f64, 0.0f64);
    let mut failures = Vec::new();
    for x in xs {
        for y in ys.into_iter().filter(|&y| y <= x) {
            let Ok(sp) = saddle_alpha(x, y, None, false) else {
                continue;
            };
            converged += 1;
            let lx = x.ln();
            worst_res = worst_res.max(sp.residual / lx);
            if sp.residual > 1e-9 * lx {
                failures.push(format!("residual x={x} y={y}"));
            }
            if y > lx && sp.u >= 3.0 {
                let a = sp.asymptotic().expect("u > 1");
                let gap = (sp.alpha - a).abs() * y.ln();
                worst_asym = worst_asym.max(gap);
                asym_checked += 1;
                if gap > 5.0 {
                    failures.push(format!("asymptotic x={x} y={y}"));
                }
            }
        }
    }
    ensure(
        failures.is_empty() && asym_checked > 0,
        format!(
            "{converged} converged, max residual/log x {worst_res:.2e}; {asym_checked} asymptotic checks, max |gap| log y {worst_asym:.3}{}",
            if failures.is_empty() { String::new() } else { format!("; failures: {}", failures.join(", ")) }
        ),
    )
}

fn sup_decay(kernel: &SmoothingKernel, ns: usize, nt: usize) -> f64 {
    let mut sup = 0.0f64;
    for i in 0..=ns {
        let sigma = 0.5 + i as f64 / ns as f64;
        for j in 0..=nt {
            let t = 1.0 + 99.0 * j as f64 / nt as f64;
            sup = sup.max(kernel.decay_product(Complex64::new(sigma, t)));
        }
    }
    sup
}

fn mellin_bounds() -> Outcome {
    let kernel = SmoothingKernel::default();
    let mut worst = f64::INFINITY;
    for i in 1..=50 {
        let c = i as f64 / 50.0;
        let v = kernel
            .mellin(Complex64::new(c, 0.0))
            .map_err(|e| e.to_string())?
            .re;
        worst = worst.min(v * 2.0 * c);
    }
    let coarse = sup_decay(&kernel, 10, 99);
    let fine = sup_decay(&kernel, 20, 198);
    let ratio = fine.max(coarse) / fine.min(coarse);
    ensure(
        worst >= 1.0 && ratio <= 2.0 && fine <= kernel.decay_constant(),
        format!(
            "min 2c Phi(c) = {worst:.4} over 50 points; sup decay product {coarse:.4e} -> {fine:.4e} (ratio {ratio:.4}), C = {:.4e}",
            kernel.decay_constant()
        ),
    )
}

fn ennola() -> Outcome {
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for y in [3.0f64, 5.0] {
        for q in [1u64, 7] {
            for target in [200.0f64, 500.0, 1000.0] {
                let exponent = (target / std::f64::consts::LN_2).round() as u32;
                let bigx = BigX::new(2, exponent).map_err(|e| e.to_string())?;
                let exact = count_smooth_bigx(bigx, y, q)
                    .map_err(|e| e.to_string())?
                    .value as f64;
                let est = ennola_estimate(bigx, y, q).map_err(|e| e.to_string())?;
                let lx = bigx.ln();
                let dev = (est.main_term / exact - 1.0).abs();
                let bound = 3.0 * y * y / (lx * y.ln());
                worst = worst.max(dev / bound);
                if dev > bound {
                    failures.push(format!("y={y} q={q} 2^{exponent}: {dev:.3e} > {bound:.3e}"));
                }
            }
        }
    }
    ensure(
        failures.is_empty(),
        format!(
            "12 points (x = 2^k), worst deviation/bound {worst:.3}{}",
            if failures.is_empty() {
                String::new()
            } else {
                format!("; {}", failures.join(", "))
            }
        ),
    )
}

fn equidistribution() -> Outcome {
    let fixture = run_equidistribution(&ExperimentConfig::new(vec![100.0], vec![5.0], vec![3]))
        .map_err(|e| e.to_string())?;
    let counts: Vec<u64> = fixture.records.iter().map(|r| r.count).collect();
    let trend = run_equidistribution(&ExperimentConfig::new(vec![1e4, 1e7], vec![50.0], vec![7]))
        .map_err(|e| e.to_string())?;
    let (d_lo, d_hi) = (
        trend.summaries[0].max_discrepancy,
        trend.summaries[1].max_discrepancy,
    );
    ensure(
        counts == [8, 7] && d_hi < d_lo,
        format!(
            "(100, 5, 3) counts {counts:?}; q = 7, y = 50: D(1e4) = {d_lo:.6}, D(1e7) = {d_hi:.6}"
        ),
    )
}

fn unsmoothing() -> Outcome {
    let mut ends_ok = true;
    for (x, y, q) in [(100.0, 5.0, 1), (1e5, 30.0, 7), (1e6, 100.0, 3)] {
        let r0 = unsmoothing_ratio(x, y, q, 0.0).map_err(|e| e.to_string())?;
        let r1 = unsmoothing_ratio(x, y, q, 1.0).map_err(|e| e.to_string())?;
        ends_ok &= r0 == 0.0 && r1 == 1.0;
    }
    let fixture = unsmoothing_ratio(100.0, 5.0, 1, 0.1).map_err(|e| e.to_string())?;
    let mut config = ExperimentConfig::new(
        vec![1e4, 1e5, 1e6, 1e7],
        vec![10.0, 30.0, 100.0],
        vec![3, 5, 7],
    );
    config.epsilons = vec![0.01, 0.02, 0.05, 0.1];
    let fits = run_unsmoothing(&config).map_err(|e| e.to_string())?.fits;
    let eligible: Vec<_> = fits.iter().filter(|f| f.v >= 5.0).collect();
    let max_slope = eligible.iter().map(|f| f.slope).fold(0.0, f64::max);
    ensure(
        ends_ok && fixture == 2.0 / 34.0 && !eligible.is_empty() && max_slope <= 5.0,
        format!(
            "ratio(0) = 0 and ratio(1) = 1: {ends_ok}; (100, 5, 0.1) -> {fixture:.6} (2/34 = {:.6}); max slope {max_slope:.4} over {} points with v >= 5",
            2.0 / 34.0,
            eligible.len()
        ),
    )
}

fn oscillating() -> Outcome {
    let kernel = SmoothingKernel::default();
    let sup = |refine: f64| -> Result<f64, String> {
        [1e3, 1e6, 1e9]
            .iter()
            .map(|&x| {
                oscillating_integral_with(0.0, 3.0, x, 1.0, &kernel, max_panel_width(x) / refine)
                    .map(|r| r.scaled)
                    .map_err(|e| e.to_string())
            })
            .try_fold(0.0f64, |m, v| v.map(|v| m.max(v)))
    };
    let (base, fine) = (sup(1.0)?, sup(4.0)?);
    let ratio = base.max(fine) / base.min(fine);
    ensure(
        ratio <= 2.0 && base.is_finite(),
        format!("sup |I| log x = {base:.6} (panels /4: {fine:.6}, ratio {ratio:.6})"),
    )
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_smoothlab"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    let mut bytes = out.stdout;
    bytes.extend(out.stderr);
    bytes.extend(format!("{:?}", out.status.code()).bytes());
    Ok(bytes)
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("smoothlab-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let csv = dir.join("records.csv");
    let plot = dir.join("plot.csv");
    let config = dir.join("config.json");
    std::fs::write(
        &config,
        format!(
            r#"{{"xs": [1e4, 1e5], "ys": [10, 50], "qs": [5, 7, 12], "epsilons": [0.01, 0.1],
               "studies": ["equidistribution", "coset", "unsmoothing"], "output": {:?}}}"#,
            csv.to_str().unwrap()
        ),
    )
    .map_err(|e| e.to_string())?;
    let (config, plot_s) = (
        config.to_str().unwrap().to_owned(),
        plot.to_str().unwrap().to_owned(),
    );
    let invocations: Vec<Vec<&str>> = vec![
        vec!["count", "--x", "1e6", "--y", "30", "--q", "7", "--a", "3"],
        vec![
            "--json",
            "count",
            "--base",
            "3",
            "--exponent",
            "200",
            "--y",
            "7",
            "--q",
            "5",
        ],
        vec!["--json", "saddle", "1e9", "50", "--coprime-q", "12"],
        vec!["--json", "lfun", "0.7", "12.5", "12", "3", "100"],
        vec!["lfun", "--list-chars", "24"],
        vec![
            "--json", "contour", "--x", "1e4", "--y", "30", "--q", "8", "--chi", "3",
        ],
        vec![
            "verify",
            "--suite",
            "all",
            "--seeds",
            "4",
            "--seed-base",
            "17",
        ],
        vec![
            "--json",
            "experiment",
            "--config",
            &config,
            "--emit-plot-data",
            &plot_s,
        ],
    ];
    let mut mismatched = Vec::new();
    for args in &invocations {
        let first = run_cli(args)?;
        let files_first = (std::fs::read(&csv).ok(), std::fs::read(&plot).ok());
        let second = run_cli(args)?;
        let files_second = (std::fs::read(&csv).ok(), std::fs::read(&plot).ok());
        if first != second || files_first != files_second {
            mismatched.push(args.join(" "));
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    ensure(
        mismatched.is_empty(),
        format!(
            "{} invocations run twice{}",
            invocations.len(),
            if mismatched.is_empty() {
                ", all byte-identical".into()
            } else {
                format!("; differing: {}", mismatched.join(" | "))
            }
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("contour vs direct sum", contour_oracle),
        ("character decomposition", character_decomposition),
        ("inequality corpus", inequality_corpus),
        ("saddle point", saddle_point),
        ("Mellin bounds", mellin_bounds),
        ("Ennola formula", ennola),
        ("equidistribution trend", equidistribution),
        ("unsmoothing", unsmoothing),
        ("oscillating integral", oscillating),
        ("CLI determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (tag, detail) = match check() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!(
            "{tag} criterion {:>2} ({name}): {detail} [{:.1}s]",
            i + 1,
            start.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
