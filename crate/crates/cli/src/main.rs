use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use smoothlab::analytic::euler_product;
use smoothlab::experiments::{
    export_results, format_significant, run_experiment, write_plot_data, ExperimentOutput,
};
use smoothlab::inequality::{run_suite, Suite, SuiteSummary};
use smoothlab::{
    count_smooth, saddle_alpha, BigX, CharacterGroup, ContourPlan, ContourSpec, ExperimentConfig,
    SmoothCountQuery, SmoothingKernel,
};

#[derive(Parser)]
#[command(
    name = "smoothlab",
    version,
    about = "Smooth numbers in arithmetic progressions"
)]
struct Cli {
    /// Emit JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count y-smooth n <= x, optionally coprime to q or in a class a mod q.
    Count(CountArgs),
    /// Solve for the saddle point alpha(x, y).
    Saddle {
        x: f64,
        y: f64,
        /// Drop the primes dividing q from the defining sum.
        #[arg(long)]
        coprime_q: Option<u64>,
    },
    /// Evaluate the truncated Euler product L(s, chi; y), or list the characters mod q.
    Lfun(LfunArgs),
    /// Reconstruct the smoothed character sum from the truncated contour integral.
    Contour(ContourArgs),
    /// Run seeded inequality checks; exits nonzero on any violation.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[arg(long, default_value_t = 10)]
        seeds: u64,
        #[arg(long, default_value_t = 0)]
        seed_base: u64,
    },
    /// Run the studies described by a JSON config.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Write (v, D) pairs from the equidistribution study.
        #[arg(long)]
        emit_plot_data: Option<PathBuf>,
    },
}

#[derive(Args)]
struct CountArgs {
    #[arg(long, required_unless_present = "base", conflicts_with_all = ["base", "exponent"])]
    x: Option<f64>,
    /// Take x = base^exponent on the exact power path.
    #[arg(long, requires = "exponent")]
    base: Option<u64>,
    #[arg(long, requires = "base")]
    exponent: Option<u32>,
    #[arg(long)]
    y: f64,
    #[arg(long, default_value_t = 1)]
    q: u64,
    #[arg(long)]
    a: Option<u64>,
}

#[derive(Args)]
#[command(args_conflicts_with_subcommands = true)]
struct LfunArgs {
    /// Print the character table mod q instead.
    #[arg(long, value_name = "Q", conflicts_with_all = ["s_re", "s_im", "q", "chi_index", "y"])]
    list_chars: Option<u64>,
    #[arg(required_unless_present = "list_chars", allow_negative_numbers = true)]
    s_re: Option<f64>,
    #[arg(required_unless_present = "list_chars", allow_negative_numbers = true)]
    s_im: Option<f64>,
    #[arg(required_unless_present = "list_chars")]
    q: Option<u64>,
    #[arg(required_unless_present = "list_chars")]
    chi_index: Option<u64>,
    #[arg(required_unless_present = "list_chars")]
    y: Option<f64>,
}

#[derive(Args)]
struct ContourArgs {
    #[arg(long)]
    x: f64,
    #[arg(long)]
    y: f64,
    #[arg(long)]
    q: u64,
    #[arg(long, default_value_t = 0)]
    chi: u64,
    /// Half-height of the truncated segment.
    #[arg(long = "T", default_value_t = 100.0)]
    half_height: f64,
    /// Defaults to min(1, 2 pi / log x).
    #[arg(long)]
    panel_width: Option<f64>,
    /// Abscissa; defaults to alpha(x, y).
    #[arg(long)]
    c: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Lemma1,
    Lemma2,
    Majorant,
    Pointwise,
    Calculus,
    All,
}

impl SuiteArg {
    fn suites(self) -> Vec<Suite> {
        match self {
            SuiteArg::Lemma1 => vec![Suite::Lemma1],
            SuiteArg::Lemma2 => vec![Suite::Lemma2],
            SuiteArg::Majorant => vec![Suite::Majorant],
            SuiteArg::Pointwise => vec![Suite::Pointwise],
            SuiteArg::Calculus => vec![Suite::Calculus],
            SuiteArg::All => Suite::ALL.to_vec(),
        }
    }
}

fn g(v: f64) -> String {
    format_significant(v, 12)
}

fn complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{} {sign} {}i", g(z.re), g(z.im.abs()))
}

fn emit_json<T: Serialize>(out: &mut impl Write, value: &T) -> Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn count(args: CountArgs, json: bool, out: &mut impl Write) -> Result<()> {
    let mut query = match (args.x, args.base, args.exponent) {
        (Some(x), _, _) => SmoothCountQuery::new(x, args.y),
        (None, Some(b), Some(e)) => SmoothCountQuery::power(BigX::new(b, e)?, args.y),
        _ => bail!("give --x or both --base and --exponent"),
    };
    query = match args.a {
        Some(a) => query.in_class(a, args.q),
        None => query.coprime_to(args.q),
    };
    let result = count_smooth(&query)?;
    if json {
        emit_json(
            out,
            &json!({ "query": query, "count": result.value, "exact": result.exact }),
        )
    } else {
        writeln!(out, "{}", result.value)?;
        Ok(())
    }
}

fn saddle(x: f64, y: f64, coprime_q: Option<u64>, json: bool, out: &mut impl Write) -> Result<()> {
    let sp = saddle_alpha(x, y, coprime_q, coprime_q.is_some())?;
    let asym = sp.asymptotic();
    if json {
        return emit_json(out, &json!({ "saddle": sp, "asymptotic": asym }));
    }
    writeln!(out, "alpha       {}", g(sp.alpha))?;
    writeln!(out, "residual    {}", g(sp.residual))?;
    writeln!(out, "iterations  {}", sp.iterations)?;
    writeln!(out, "u           {}", g(sp.u))?;
    if let Some(a) = asym {
        writeln!(out, "asymptotic  {}", g(a))?;
    }
    Ok(())
}

fn list_chars(q: u64, json: bool, out: &mut impl Write) -> Result<()> {
    let group = CharacterGroup::new(q)?;
    let generators = group.generators();
    let rows: Vec<_> = group
        .characters()
        .iter()
        .map(|chi| {
            let values: Vec<[u64; 2]> = chi
                .generator_values()
                .iter()
                .map(|a| [a.num, a.den])
                .collect();
            json!({
                "modulus": q,
                "index": chi.index(),
                "order": chi.order(),
                "conductor": chi.conductor(),
                "primitive": chi.is_primitive(),
                "values": values,
            })
        })
        .collect();
    if json {
        return emit_json(
            out,
            &json!({ "modulus": q, "generators": generators, "characters": rows }),
        );
    }
    let gens: Vec<String> = generators.iter().map(u64::to_string).collect();
    writeln!(out, "modulus {q}, generators [{}]", gens.join(", "))?;
    writeln!(
        out,
        "index  order  conductor  values (k/n for exp(2 pi i k/n))"
    )?;
    for chi in group.characters() {
        let values: Vec<String> = chi
            .generator_values()
            .iter()
            .map(|a| format!("{}/{}", a.num, a.den))
            .collect();
        writeln!(
            out,
            "{:>5}  {:>5}  {:>9}  {}",
            chi.index(),
            chi.order(),
            chi.conductor(),
            values.join(" ")
        )?;
    }
    Ok(())
}

fn lfun(args: LfunArgs, json: bool, out: &mut impl Write) -> Result<()> {
    if let Some(q) = args.list_chars {
        return list_chars(q, json, out);
    }
    let (Some(re), Some(im), Some(q), Some(index), Some(y)) =
        (args.s_re, args.s_im, args.q, args.chi_index, args.y)
    else {
        bail!("lfun needs s-re s-im q chi-index y");
    };
    let chi = CharacterGroup::new(q)?.character(index)?;
    let s = Complex64::new(re, im);
    let v = euler_product(s, &chi, y)?;
    if json {
        return emit_json(
            out,
            &json!({ "s": s, "q": q, "chi": index, "y": y, "result": v }),
        );
    }
    writeln!(out, "L         {}", complex(v.value))?;
    writeln!(out, "log L     {}", complex(v.log_value))?;
    writeln!(out, "L'/L      {}", complex(v.log_deriv))?;
    Ok(())
}

fn contour(args: ContourArgs, json: bool, out: &mut impl Write) -> Result<()> {
    let mut spec = ContourSpec::at_saddle(args.x, args.y, args.half_height)?;
    if let Some(c) = args.c {
        spec.c = c;
    }
    if let Some(w) = args.panel_width {
        spec = spec.with_panel_width(w);
    }
    let chi = CharacterGroup::new(args.q)?.character(args.chi)?;
    let result =
        ContourPlan::new(args.x, args.y, &SmoothingKernel::default(), &spec)?.evaluate(&chi)?;
    if json {
        return emit_json(out, &json!({ "spec": spec, "result": result }));
    }
    writeln!(out, "c            {}", g(spec.c))?;
    writeln!(out, "value        {}", complex(result.value))?;
    writeln!(out, "tail_bound   {}", g(result.tail_bound))?;
    writeln!(out, "quad_error   {}", g(result.quadrature_error_estimate))?;
    Ok(())
}

fn verify(suite: SuiteArg, seeds: u64, seed_base: u64, out: &mut impl Write) -> Result<bool> {
    let mut clean = true;
    for s in suite.suites() {
        let reports = run_suite(s, seeds, seed_base)?;
        for r in &reports {
            emit_json(out, r)?;
        }
        let summary = SuiteSummary::from_reports(s, &reports);
        eprintln!(
            "{}: {} instances, {} violations, min rhs/lhs {}",
            s,
            summary.instances,
            summary.violations,
            summary.min_ratio.map_or("n/a".into(), g)
        );
        clean &= summary.violations == 0;
    }
    Ok(clean)
}

fn experiment(
    config: PathBuf,
    plot: Option<PathBuf>,
    json: bool,
    out: &mut impl Write,
) -> Result<()> {
    let text = std::fs::read_to_string(&config)
        .with_context(|| format!("reading {}", config.display()))?;
    let cfg =
        ExperimentConfig::from_json(&text).with_context(|| format!("in {}", config.display()))?;
    let output: ExperimentOutput = run_experiment(&cfg)?;
    if let (Some(path), Some(eq)) = (&cfg.output, &output.equidistribution) {
        export_results(&eq.records, cfg.format, path)?;
    }
    if let Some(path) = plot {
        let Some(eq) = &output.equidistribution else {
            bail!("--emit-plot-data needs the equidistribution study in the config");
        };
        write_plot_data(&eq.summaries, &path)?;
    }
    if json {
        return emit_json(out, &output);
    }
    if let Some(eq) = &output.equidistribution {
        writeln!(out, "equidistribution: {} records", eq.records.len())?;
        writeln!(
            out,
            "{:>14} {:>8} {:>6} {:>10} {:>14}",
            "x", "y", "q", "v", "D"
        )?;
        for s in &eq.summaries {
            writeln!(
                out,
                "{:>14} {:>8} {:>6} {:>10} {:>14}",
                g(s.x),
                g(s.y),
                s.q,
                g(s.v),
                g(s.max_discrepancy)
            )?;
        }
    }
    if let Some(c) = &output.coset {
        let worst = c.records.iter().map(|r| r.normalized).fold(0.0, f64::max);
        writeln!(
            out,
            "coset (surrogate H): {} pairs, max normalized difference {}",
            c.records.len(),
            g(worst)
        )?;
    }
    if let Some(u) = &output.unsmoothing {
        writeln!(out, "unsmoothing: {} ratios", u.records.len())?;
        writeln!(
            out,
            "{:>14} {:>8} {:>6} {:>10} {:>14}",
            "x", "y", "q", "v", "slope"
        )?;
        for f in &u.fits {
            writeln!(
                out,
                "{:>14} {:>8} {:>6} {:>10} {:>14}",
                g(f.x),
                g(f.y),
                f.q,
                g(f.v),
                g(f.slope)
            )?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let json = cli.json;
    let mut clean = true;
    match cli.command {
        Command::Count(args) => count(args, json, &mut out)?,
        Command::Saddle { x, y, coprime_q } => saddle(x, y, coprime_q, json, &mut out)?,
        Command::Lfun(args) => lfun(args, json, &mut out)?,
        Command::Contour(args) => contour(args, json, &mut out)?,
        Command::Verify {
            suite,
            seeds,
            seed_base,
        } => clean = verify(suite, seeds, seed_base, &mut out)?,
        Command::Experiment {
            config,
            emit_plot_data,
        } => experiment(config, emit_plot_data, json, &mut out)?,
    }
    out.flush()?;
    Ok(clean)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
