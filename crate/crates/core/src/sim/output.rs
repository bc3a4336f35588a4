use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use super::{AggregateResult, PointResult};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::InvalidParameter(format!("unknown format {other:?}"))),
        }
    }
}

pub const CSV_HEADER: [&str; 8] = [
    "sweep_var",
    "sweep_value",
    "method",
    "mean_sum_dof",
    "std_sum_dof",
    "mean_K",
    "trials",
    "seed",
];

/// `%.{digits}g`-style formatting.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent");
    if exp < -4 || exp >= digits as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_csv<W: Write>(out: W, rows: &[AggregateResult]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.sweep_var.to_string(),
            format_sig(r.sweep_value, 12),
            r.method.to_string(),
            format_sig(r.mean_sum_dof, 12),
            format_sig(r.std_sum_dof, 12),
            format_sig(r.mean_users, 12),
            r.trials.to_string(),
            r.seed.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::Io {
        path: "<csv>".into(),
        source: e,
    })?;
    Ok(())
}

#[derive(Serialize)]
struct JsonRow<'a> {
    #[serde(flatten)]
    aggregate: &'a AggregateResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    per_trial: Option<PerTrial>,
}

#[derive(Serialize)]
struct PerTrial {
    seed: Vec<u64>,
    #[serde(rename = "K")]
    users: Vec<usize>,
    sum_dof: Vec<Option<f64>>,
    transmissions: Vec<u64>,
    rounds: Vec<usize>,
}

pub fn write_json<W: Write>(out: W, points: &[PointResult], per_trial: bool) -> Result<()> {
    let rows: Vec<JsonRow> = points
        .iter()
        .flat_map(|p| {
            p.aggregates.iter().map(move |a| JsonRow {
                aggregate: a,
                per_trial: per_trial.then(|| {
                    let outs: Vec<_> = p
                        .trials
                        .iter()
                        .filter_map(|t| t.outcome(a.method).map(|o| (t, o)))
                        .collect();
                    PerTrial {
                        seed: outs.iter().map(|(t, _)| t.seed).collect(),
                        users: outs.iter().map(|(t, _)| t.users).collect(),
                        sum_dof: outs.iter().map(|(_, o)| o.sum_dof).collect(),
                        transmissions: outs.iter().map(|(_, o)| o.transmissions).collect(),
                        rounds: outs
                            .iter()
                            .map(|(_, o)| o.partitions.iter().copied().max().unwrap_or(0))
                            .collect(),
                    }
                }),
            })
        })
        .collect();
    serde_json::to_writer_pretty(out, &serde_json::json!({ "results": rows }))?;
    Ok(())
}

/// Writes results to `path`, or stdout when `path` is `None`.
pub fn emit_results(
    points: &[PointResult],
    format: OutputFormat,
    per_trial: bool,
    path: Option<&Path>,
) -> Result<()> {
    let io_err = |p: &Path| {
        let p = p.to_path_buf();
        move |e| Error::Io { path: p, source: e }
    };
    let sink: Box<dyn Write> = match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(io_err(p))?)),
        None => Box::new(std::io::stdout().lock()),
    };
    let rows: Vec<AggregateResult> = points.iter().flat_map(|p| p.aggregates.clone()).collect();
    match format {
        OutputFormat::Csv => write_csv(sink, &rows),
        OutputFormat::Json => {
            let mut sink = sink;
            write_json(&mut sink, points, per_trial)?;
            writeln!(sink).map_err(io_err(path.unwrap_or(Path::new("<stdout>"))))?;
            sink.flush()
                .map_err(io_err(path.unwrap_or(Path::new("<stdout>"))))
        }
    }
}
