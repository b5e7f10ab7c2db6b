use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::{sort_records, DiscrepancySummary, OutputFormat, ResultRecord};
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 11] = [
    "x",
    "y",
    "q",
    "a",
    "count",
    "expected",
    "discrepancy",
    "u",
    "v",
    "w",
    "alpha",
];
const SIGNIFICANT: usize = 12;

/// `%.12g`-style formatting: fixed notation for moderate exponents, trailing zeros trimmed.
pub fn format_significant(v: f64, digits: usize) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let m = trim_zeros(mantissa);
        format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Write records sorted by `(x, y, q, a)` as CSV or JSON.
pub fn export_results(records: &[ResultRecord], format: OutputFormat, path: &Path) -> Result<()> {
    let mut rows = records.to_vec();
    sort_records(&mut rows);
    let file = File::create(path).map_err(io_err(path))?;
    match format {
        OutputFormat::Csv => {
            let csv_err = |source| Error::Csv {
                path: path.to_path_buf(),
                source,
            };
            let mut w = csv::Writer::from_writer(BufWriter::new(file));
            w.write_record(CSV_HEADER).map_err(csv_err)?;
            for r in &rows {
                let g = |v: f64| format_significant(v, SIGNIFICANT);
                w.write_record([
                    g(r.x),
                    g(r.y),
                    r.q.to_string(),
                    r.a.to_string(),
                    r.count.to_string(),
                    g(r.expected),
                    g(r.discrepancy),
                    g(r.u),
                    g(r.v),
                    g(r.w),
                    g(r.alpha),
                ])
                .map_err(csv_err)?;
            }
            w.flush().map_err(io_err(path))?;
        }
        OutputFormat::Json => {
            let mut w = BufWriter::new(file);
            serde_json::to_writer_pretty(&mut w, &rows).map_err(|source| Error::Json {
                path: path.to_path_buf(),
                source,
            })?;
            writeln!(w).map_err(io_err(path))?;
            w.flush().map_err(io_err(path))?;
        }
    }
    Ok(())
}

/// `(v, D)` pairs, one per grid point, as a two-column CSV.
pub fn write_plot_data(summaries: &[DiscrepancySummary], path: &Path) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    w.write_record(["v", "D", "x", "y", "q"]).map_err(csv_err)?;
    for s in summaries {
        let g = |v: f64| format_significant(v, SIGNIFICANT);
        w.write_record([
            g(s.v),
            g(s.max_discrepancy),
            g(s.x),
            g(s.y),
            s.q.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(io_err(path))?;
    Ok(())
}
