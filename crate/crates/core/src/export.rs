//! CSV output for trajectories, probes and study results, plus readers that
//! re-parse the same schemas. Numbers are written in scientific notation with
//! 17 significant digits, which round-trips `f64` exactly.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use crate::dynamics::{StepProbes, Trajectory};
use crate::error::{HisdError, Result};
use crate::harness::{
    ConvergenceTable, ErrorReport, IndexRobustReport, LemmaScalingReport, PathwayReport, ScalingFit,
};
use crate::scalar::Scalar;

pub fn format_number<T: Scalar>(v: T) -> String {
    format!("{:.16e}", v)
}

fn opt<T: Scalar>(v: Option<T>) -> String {
    v.map(format_number).unwrap_or_default()
}

pub fn trajectory_header(d: usize, k: usize) -> Vec<String> {
    let mut h = vec!["t".to_string()];
    h.extend((1..=d).map(|j| format!("x_{j}")));
    for i in 1..=k {
        h.extend((1..=d).map(|j| format!("v_{i}_{j}")));
    }
    h
}

pub const PROBES_HEADER: [&str; 9] = [
    "n",
    "t",
    "retraction_defect",
    "max_tilde_cross",
    "max_tilde_norm_defect",
    "max_transport_shift",
    "max_hat_cross",
    "max_hat_norm_defect",
    "max_gs_shift",
];

pub fn convergence_header(k: usize) -> Vec<String> {
    let mut h: Vec<String> = ["tau", "err_x", "rate_x", "err_v_avg", "rate_avg"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    for i in 1..=k {
        h.push(format!("err_v_{i}"));
        h.push(format!("rate_v_{i}"));
    }
    h
}

pub const LEMMA_SAMPLES_HEADER: [&str; 3] = ["probe", "tau", "max_value"];
pub const LEMMA_SUMMARY_HEADER: [&str; 2] = ["probe", "exponent"];
pub const INDEX_ROBUST_HEADER: [&str; 6] = ["k", "alpha", "beta", "err_x", "err_v_avg", "total"];
pub const PATHWAY_HEADER: [&str; 4] = ["initial", "tau", "cauchy_diff", "endpoint_distance"];

/// `t, x_1..x_d, v_1_1..v_k_d`, one row per snapshot.
pub fn write_trajectory<T: Scalar, W: Write>(out: W, traj: &Trajectory<T>) -> Result<()> {
    let first = traj.states.first().ok_or_else(|| HisdError::InvalidArgument("empty trajectory".into()))?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(trajectory_header(first.dimension(), first.k()))?;
    for (state, &t) in traj.states.iter().zip(&traj.times) {
        let mut row = vec![format_number(t)];
        row.extend(state.x.iter().map(|&v| format_number(v)));
        row.extend(state.frame.iter().flatten().map(|&v| format_number(v)));
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

/// One row per step `n = 1..N`, with `t = t_n` the time after the step.
pub fn write_probes<T: Scalar, W: Write>(out: W, traj: &Trajectory<T>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(PROBES_HEADER)?;
    for (i, p) in traj.probes.iter().enumerate() {
        let n = i + 1;
        let mut row = vec![n.to_string(), format_number(T::of(n as f64) * traj.params.tau)];
        row.extend(p.values().iter().map(|&v| format_number(v)));
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_convergence<T: Scalar, W: Write>(out: W, table: &ConvergenceTable<T>) -> Result<()> {
    let k = table.rows.first().map_or(0, |r| r.errors.err_v.len());
    let mut w = csv::Writer::from_writer(out);
    w.write_record(convergence_header(k))?;
    for row in &table.rows {
        let e = &row.errors;
        let mut rec = vec![
            format_number(e.tau),
            format_number(e.err_x),
            opt(row.rate_x),
            format_number(e.err_v_avg),
            opt(row.rate_avg),
        ];
        for (ev, rv) in e.err_v.iter().zip(&row.rate_v) {
            rec.push(format_number(*ev));
            rec.push(opt(*rv));
        }
        w.write_record(rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_lemma_samples<T: Scalar, W: Write>(out: W, report: &LemmaScalingReport<T>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(LEMMA_SAMPLES_HEADER)?;
    for p in &report.probes {
        for &(tau, v) in &p.samples {
            w.write_record([p.probe.to_string(), format_number(tau), format_number(v)])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_lemma_summary<T: Scalar, W: Write>(out: W, report: &LemmaScalingReport<T>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(LEMMA_SUMMARY_HEADER)?;
    for p in &report.probes {
        let e = match p.fit {
            ScalingFit::Exponent(e) => format_number(e),
            ScalingFit::ExactZero => "exact-zero".to_string(),
        };
        w.write_record([p.probe.to_string(), e])?;
    }
    w.flush()?;
    Ok(())
}

/// Index sweep table; `with_v_sum` appends an `err_v_sum` column.
pub fn write_index_robust<T: Scalar, W: Write>(out: W, report: &IndexRobustReport<T>, with_v_sum: bool) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = INDEX_ROBUST_HEADER.to_vec();
    if with_v_sum {
        header.push("err_v_sum");
    }
    w.write_record(&header)?;
    for row in &report.rows {
        let e = &row.errors;
        let mut rec = vec![
            row.k.to_string(),
            format_number(row.alpha),
            format_number(row.beta),
            format_number(e.err_x),
            format_number(e.err_v_avg),
            format_number(e.total()),
        ];
        if with_v_sum {
            rec.push(format_number(e.err_v_sum()));
        }
        w.write_record(rec)?;
    }
    w.flush()?;
    Ok(())
}

/// `initial` is the zero-based position of the initial state in the study.
pub fn write_pathway<T: Scalar, W: Write>(out: W, reports: &[PathwayReport<T>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(PATHWAY_HEADER)?;
    for (i, r) in reports.iter().enumerate() {
        for row in &r.rows {
            w.write_record([
                i.to_string(),
                format_number(row.tau),
                opt(row.cauchy_diff),
                format_number(row.endpoint_distance),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Creates `path` and hands a buffered writer to `body`.
pub fn write_file<F>(path: &Path, body: F) -> Result<()>
where
    F: FnOnce(&mut BufWriter<File>) -> Result<()>,
{
    let mut file = BufWriter::new(File::create(path)?);
    body(&mut file)?;
    file.flush()?;
    Ok(())
}

/// A parsed CSV: header plus cells, numeric where parsable, `None` when empty.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Number(f64),
    Empty,
    Text(String),
}

impl Cell {
    pub fn number(&self) -> Option<f64> {
        match self {
            Cell::Number(v) => Some(*v),
            _ => None,
        }
    }
}

impl Table {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }
}

/// Parses a CSV, checking that its header equals `expected_header` when given.
pub fn read_table<R: Read>(input: R, expected_header: Option<&[String]>) -> Result<Table> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if let Some(expected) = expected_header {
        if header != expected {
            return Err(HisdError::InvalidArgument(format!(
                "unexpected header {header:?}, expected {expected:?}"
            )));
        }
    }
    let mut rows = Vec::new();
    for record in r.records() {
        let record = record?;
        if record.len() != header.len() {
            return Err(HisdError::InvalidArgument(format!(
                "row has {} fields, header has {}",
                record.len(),
                header.len()
            )));
        }
        rows.push(
            record
                .iter()
                .map(|c| {
                    if c.is_empty() {
                        Cell::Empty
                    } else if let Ok(v) = c.parse::<f64>() {
                        Cell::Number(v)
                    } else {
                        Cell::Text(c.to_string())
                    }
                })
                .collect(),
        );
    }
    Ok(Table { header, rows })
}

/// Reads back a table written by [`write_convergence`], returning the
/// error reports and the stored rate columns `(rate_x, rate_avg, rate_v)`.
#[allow(clippy::type_complexity)]
pub fn read_convergence<R: Read>(
    input: R,
) -> Result<(Vec<ErrorReport<f64>>, Vec<(Option<f64>, Option<f64>, Vec<Option<f64>>)>)> {
    let table = read_table(input, None)?;
    let k = table.header.len().saturating_sub(5) / 2;
    if table.header != convergence_header(k) {
        return Err(HisdError::InvalidArgument(format!(
            "not a convergence table header: {:?}",
            table.header
        )));
    }
    let need = |c: &Cell| {
        c.number()
            .ok_or_else(|| HisdError::InvalidArgument("missing numeric field in convergence table".into()))
    };
    let mut reports = Vec::new();
    let mut rates = Vec::new();
    for row in &table.rows {
        let mut err_v = Vec::with_capacity(k);
        let mut rate_v = Vec::with_capacity(k);
        for i in 0..k {
            err_v.push(need(&row[5 + 2 * i])?);
            rate_v.push(row[6 + 2 * i].number());
        }
        reports.push(ErrorReport {
            tau: need(&row[0])?,
            err_x: need(&row[1])?,
            err_v,
            err_v_avg: need(&row[3])?,
        });
        rates.push((row[2].number(), row[4].number(), rate_v));
    }
    Ok((reports, rates))
}

/// Parses a probes CSV back into per-step records.
pub fn read_probes<R: Read>(input: R) -> Result<Vec<StepProbes<f64>>> {
    let header: Vec<String> = PROBES_HEADER.iter().map(|s| s.to_string()).collect();
    let table = read_table(input, Some(&header))?;
    table
        .rows
        .iter()
        .map(|row| {
            let mut vals = [0.0; 7];
            for (i, v) in vals.iter_mut().enumerate() {
                *v = row[2 + i]
                    .number()
                    .ok_or_else(|| HisdError::InvalidArgument("non-numeric probe value".into()))?;
            }
            Ok(StepProbes::from_values(vals))
        })
        .collect()
}
