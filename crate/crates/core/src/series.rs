//! Core time-series containers and sliding-window iteration.
//!
//! A [`MultivariateTimeSeries`] holds an `N x T` matrix of finite values
//! (rows are variates, columns are time steps) plus optional per-step
//! ground-truth labels used only for evaluation. Every downstream stage
//! consumes [`Window`]s produced by [`MultivariateTimeSeries::windows`].

use std::fmt::Write as _;
use std::path::Path;

use ndarray::Array2;

use crate::error::{Error, Result};

/// An N-variate series over T time steps, optionally labeled.
#[derive(Debug, Clone, PartialEq)]
pub struct MultivariateTimeSeries {
    values: Array2<f64>,
    labels: Option<Vec<usize>>,
}

impl MultivariateTimeSeries {
    /// Builds a series from an `N x T` matrix, validating finiteness.
    pub fn new(values: Array2<f64>, labels: Option<Vec<usize>>) -> Result<Self> {
        let (n, t) = values.dim();
        if n == 0 || t == 0 {
            return Err(Error::shape(format!(
                "series must have N >= 1 and T >= 1, got N={n}, T={t}"
            )));
        }
        if let Some(((r, c), v)) = values.indexed_iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::numeric(format!(
                "non-finite value {v} at variate {r}, time step {c}"
            )));
        }
        if let Some(ref l) = labels {
            if l.len() != t {
                return Err(Error::shape(format!(
                    "label sequence length {} does not match T={t}",
                    l.len()
                )));
            }
        }
        Ok(Self { values, labels })
    }

    /// Number of variates N.
    pub fn num_dims(&self) -> usize {
        self.values.nrows()
    }

    /// Number of time steps T.
    pub fn len(&self) -> usize {
        self.values.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.values.ncols() == 0
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    /// Materializes every lattice window: starts at `0, B, 2B, ...` with the
    /// last start being the largest multiple of B such that `start + P <= T`.
    pub fn windows(&self, cfg: &SlidingWindowConfig) -> Result<Vec<Window>> {
        let t = self.len();
        let p = cfg.window_size;
        if p > t {
            return Err(Error::shape(format!(
                "window size P={p} exceeds series length T={t}"
            )));
        }
        Ok(lattice_starts(cfg, t)
            .map(|start| self.window_at(start, p))
            .collect())
    }

    /// Lattice windows plus, when `(T - P) mod B != 0`, one extra window
    /// anchored at `start = T - P`. The extra anchor guarantees that every
    /// time step is covered by at least one window, which per-step state
    /// assignment requires.
    pub fn windows_covering(&self, cfg: &SlidingWindowConfig) -> Result<Vec<Window>> {
        let mut out = self.windows(cfg)?;
        let tail = self.len() - cfg.window_size;
        if out.last().map(|w| w.start) != Some(tail) {
            out.push(self.window_at(tail, cfg.window_size));
        }
        Ok(out)
    }

    fn window_at(&self, start: usize, p: usize) -> Window {
        let data = self
            .values
            .slice(ndarray::s![.., start..start + p])
            .to_owned();
        Window { data, start }
    }
}

/// A copied `N x P` slice of the source series starting at `start`.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    pub data: Array2<f64>,
    pub start: usize,
}

impl Window {
    pub fn len(&self) -> usize {
        self.data.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.data.ncols() == 0
    }

    pub fn num_dims(&self) -> usize {
        self.data.nrows()
    }
}

/// Sliding-window geometry: window size P and step size B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SlidingWindowConfig {
    pub window_size: usize,
    pub step_size: usize,
}

impl SlidingWindowConfig {
    pub fn new(window_size: usize, step_size: usize) -> Result<Self> {
        let cfg = Self {
            window_size,
            step_size,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.window_size < 2 {
            return Err(Error::config(format!(
                "window_size must be >= 2, got {}",
                self.window_size
            )));
        }
        if self.step_size == 0 || self.step_size > self.window_size {
            return Err(Error::config(format!(
                "step_size must satisfy 1 <= B <= P, got B={}, P={}",
                self.step_size, self.window_size
            )));
        }
        Ok(())
    }
}

fn lattice_starts(cfg: &SlidingWindowConfig, t: usize) -> impl Iterator<Item = usize> {
    let p = cfg.window_size;
    let b = cfg.step_size;
    (0..=(t - p) / b).map(move |i| i * b)
}

/// Number of lattice windows whose span `[start, start + P)` contains step
/// `t`. Interior steps are covered by exactly `floor(P / B)` windows; steps
/// near either boundary by fewer.
pub fn coverage_count(t: usize, cfg: &SlidingWindowConfig, series_len: usize) -> Result<usize> {
    if t >= series_len {
        return Err(Error::shape(format!(
            "time step {t} out of range for T={series_len}"
        )));
    }
    if cfg.window_size > series_len {
        return Err(Error::shape(format!(
            "window size P={} exceeds series length T={series_len}",
            cfg.window_size
        )));
    }
    let p = cfg.window_size;
    let b = cfg.step_size;
    let last_start = ((series_len - p) / b) * b;
    // Window start s covers t iff s <= t < s + P, i.e. s in [t - P + 1, t].
    let lo = t.saturating_sub(p - 1).div_ceil(b); // first lattice index >= t - P + 1
    let hi = (t / b).min(last_start / b); // last lattice index <= t
    Ok(if hi >= lo { hi - lo + 1 } else { 0 })
}

/// One detected state index per time step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSequence {
    pub states: Vec<usize>,
}

impl StateSequence {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Number of distinct state indices present.
    pub fn distinct(&self) -> usize {
        let mut seen: Vec<usize> = self.states.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }
}

/// Reads a series from CSV: rows are time steps, columns are variates, with
/// an optional header auto-detected by a non-numeric first row. When
/// `has_label_column` is set, the final column is parsed as non-negative
/// integer ground truth.
pub fn load_csv(path: impl AsRef<Path>, has_label_column: bool) -> Result<MultivariateTimeSeries> {
    let path = path.as_ref();
    let raw = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_csv(&raw, has_label_column)
}

fn parse_csv(raw: &str, has_label_column: bool) -> Result<MultivariateTimeSeries> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(raw.as_bytes());

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut labels: Vec<usize> = Vec::new();
    let mut width: Option<usize> = None;

    for (idx, record) in reader.records().enumerate() {
        let file_row = idx + 1;
        let record = record.map_err(|e| Error::Parse {
            row: file_row,
            col: 1,
            message: e.to_string(),
        })?;
        // Header detection: a first row with any non-numeric cell is skipped.
        if idx == 0 && record.iter().any(|f| f.trim().parse::<f64>().is_err()) {
            width = Some(record.len());
            continue;
        }
        if let Some(w) = width {
            if record.len() != w {
                return Err(Error::Parse {
                    row: file_row,
                    col: record.len(),
                    message: format!("ragged row: expected {w} columns, found {}", record.len()),
                });
            }
        } else {
            width = Some(record.len());
        }

        let ncols = record.len();
        if has_label_column && ncols < 2 {
            return Err(Error::Parse {
                row: file_row,
                col: ncols,
                message: "label column requested but row has fewer than 2 columns".into(),
            });
        }
        let value_cols = if has_label_column { ncols - 1 } else { ncols };
        let mut row = Vec::with_capacity(value_cols);
        for (c, field) in record.iter().enumerate().take(value_cols) {
            let v: f64 = field.trim().parse().map_err(|_| Error::Parse {
                row: file_row,
                col: c + 1,
                message: format!("non-numeric cell `{field}`"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    row: file_row,
                    col: c + 1,
                    message: format!("non-finite value `{field}`"),
                });
            }
            row.push(v);
        }
        if has_label_column {
            let field = record.get(ncols - 1).unwrap_or("");
            labels.push(parse_label(field).ok_or_else(|| Error::Parse {
                row: file_row,
                col: ncols,
                message: format!("label must be a non-negative integer, got `{field}`"),
            })?);
        }
        rows.push(row);
    }

    if rows.is_empty() {
        return Err(Error::Parse {
            row: 1,
            col: 1,
            message: "empty file: no data rows".into(),
        });
    }
    let t = rows.len();
    let n = rows[0].len();
    if n == 0 {
        return Err(Error::Parse {
            row: 1,
            col: 1,
            message: "no numeric columns".into(),
        });
    }
    // Stored transposed: variates are rows.
    let mut values = Array2::zeros((n, t));
    for (step, row) in rows.iter().enumerate() {
        for (dim, v) in row.iter().enumerate() {
            values[(dim, step)] = *v;
        }
    }
    MultivariateTimeSeries::new(values, if has_label_column { Some(labels) } else { None })
}

fn parse_label(field: &str) -> Option<usize> {
    let trimmed = field.trim();
    if let Ok(v) = trimmed.parse::<usize>() {
        return Some(v);
    }
    // Tolerate integral floats such as "2.0".
    let f: f64 = trimmed.parse().ok()?;
    if f.fract() == 0.0 && f >= 0.0 && f <= usize::MAX as f64 {
        Some(f as usize)
    } else {
        None
    }
}

/// Writes the CSV layout accepted by [`load_csv`], with a header row and
/// values printed at full round-trip precision.
pub fn save_csv(series: &MultivariateTimeSeries, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let n = series.num_dims();
    let mut out = String::new();
    for dim in 0..n {
        if dim > 0 {
            out.push(',');
        }
        let _ = write!(out, "v{dim}");
    }
    if series.labels().is_some() {
        out.push_str(",label");
    }
    out.push('\n');
    for t in 0..series.len() {
        for dim in 0..n {
            if dim > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}", series.values()[(dim, t)]);
        }
        if let Some(labels) = series.labels() {
            let _ = write!(out, ",{}", labels[t]);
        }
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|e| Error::io(path, e))
}
