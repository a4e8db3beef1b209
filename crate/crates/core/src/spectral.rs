//! Real-valued discrete Fourier transform and frequency-band compression.
//!
//! A length-P real signal maps to `K = floor(P/2) + 1` one-sided complex
//! bins. Compression picks the contiguous band of `Q` bins with the highest
//! cumulative energy summed over all variates, then inverse-transforms that
//! band as if it were the full one-sided spectrum of a shorter signal of
//! length `P' = 2 * (Q - 1)`. The band is chosen jointly over variates but
//! each row is transformed independently.

use std::cell::RefCell;

use ndarray::{Array2, ArrayView2};
use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// One-sided spectrum of an `N x P` window: `N x K` complex bins.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub components: Array2<Complex64>,
    pub source_length: usize,
}

impl Spectrum {
    /// Number of one-sided bins K.
    pub fn num_bins(&self) -> usize {
        self.components.ncols()
    }

    pub fn num_dims(&self) -> usize {
        self.components.nrows()
    }
}

/// Width Q of the retained contiguous frequency band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct CompressorConfig {
    pub bandwidth: usize,
}

impl CompressorConfig {
    pub fn new(bandwidth: usize) -> Result<Self> {
        let cfg = Self { bandwidth };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.bandwidth < 2 {
            return Err(Error::config(format!(
                "bandwidth must be >= 2, got {}",
                self.bandwidth
            )));
        }
        Ok(())
    }
}

impl Default for CompressorConfig {
    fn default() -> Self {
        Self { bandwidth: 33 }
    }
}

/// Band-compressed window: `N x P'` time-domain data with `P' = 2(Q - 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompressedWindow {
    pub data: Array2<f64>,
    pub band_start: usize,
    pub bandwidth: usize,
}

/// Computes the one-sided spectrum of each row: bin `k` holds
/// `sum_p x[p] * exp(-i 2 pi k p / P)` for `k = 0..K`.
pub fn forward_rdft(window: &ArrayView2<f64>) -> Result<Spectrum> {
    let (n, p) = window.dim();
    if p < 2 {
        return Err(Error::shape(format!("window length must be >= 2, got {p}")));
    }
    if let Some(((r, c), v)) = window.indexed_iter().find(|(_, v)| !v.is_finite()) {
        return Err(Error::numeric(format!(
            "non-finite input {v} at ({r}, {c})"
        )));
    }
    let k = p / 2 + 1;
    let fft = PLANNER.with(|pl| pl.borrow_mut().plan_fft_forward(p));
    let mut components = Array2::zeros((n, k));
    let mut buf = vec![Complex64::default(); p];
    for (row_idx, row) in window.outer_iter().enumerate() {
        for (b, &x) in buf.iter_mut().zip(row.iter()) {
            *b = Complex64::new(x, 0.0);
        }
        fft.process(&mut buf);
        for (bin, &value) in buf.iter().take(k).enumerate() {
            components[(row_idx, bin)] = value;
        }
    }
    Ok(Spectrum {
        components,
        source_length: p,
    })
}

/// Inverts a one-sided spectrum back to a length-`out_length` real signal by
/// extending it with conjugate symmetry and applying the 1/P-normalized
/// inverse transform.
pub fn inverse_rdft(spectrum: &Spectrum, out_length: usize) -> Result<Array2<f64>> {
    let k = spectrum.num_bins();
    if out_length < 2 || k != out_length / 2 + 1 {
        return Err(Error::shape(format!(
            "spectrum with {k} bins cannot produce output length {out_length} \
             (need K = floor(P/2) + 1)"
        )));
    }
    let n = spectrum.num_dims();
    let p = out_length;
    let fft = PLANNER.with(|pl| pl.borrow_mut().plan_fft_inverse(p));
    let mut out = Array2::zeros((n, p));
    let mut buf = vec![Complex64::default(); p];
    for (row_idx, row) in spectrum.components.outer_iter().enumerate() {
        for (bin, slot) in buf.iter_mut().enumerate() {
            *slot = if bin < k {
                row[bin]
            } else {
                row[p - bin].conj()
            };
        }
        fft.process(&mut buf);
        for (step, &value) in buf.iter().enumerate() {
            out[(row_idx, step)] = value.re / p as f64;
        }
    }
    Ok(out)
}

/// Energy of each candidate band placement: entry `k` is the squared
/// magnitude of bins `k..k+Q` summed over every variate, for
/// `k = 0..=K - Q`.
pub fn cumulative_energy(spectrum: &Spectrum, cfg: &CompressorConfig) -> Result<Vec<f64>> {
    let k_bins = spectrum.num_bins();
    let q = cfg.bandwidth;
    if q > k_bins {
        return Err(Error::config(format!(
            "bandwidth Q={q} exceeds spectrum bin count K={k_bins}"
        )));
    }
    let per_bin: Vec<f64> = (0..k_bins)
        .map(|bin| {
            spectrum
                .components
                .column(bin)
                .iter()
                .map(|c| c.norm_sqr())
                .sum()
        })
        .collect();
    Ok((0..=k_bins - q)
        .map(|start| per_bin[start..start + q].iter().sum())
        .collect())
}

/// Index of the first maximal entry.
pub fn select_band(energies: &[f64]) -> usize {
    let mut best = 0;
    for (idx, &e) in energies.iter().enumerate().skip(1) {
        if e > energies[best] {
            best = idx;
        }
    }
    best
}

/// Full compression pipeline: transform, pick the highest-energy band,
/// re-index it to baseband, and inverse-transform at length `2(Q - 1)`.
pub fn compress(window: &ArrayView2<f64>, cfg: &CompressorConfig) -> Result<CompressedWindow> {
    cfg.validate()?;
    let spectrum = forward_rdft(window)?;
    let energies = cumulative_energy(&spectrum, cfg)?;
    let band_start = select_band(&energies);
    let q = cfg.bandwidth;
    let band = spectrum
        .components
        .slice(ndarray::s![.., band_start..band_start + q])
        .to_owned();
    let out_length = 2 * (q - 1);
    let data = inverse_rdft(
        &Spectrum {
            components: band,
            source_length: out_length,
        },
        out_length,
    )?;
    Ok(CompressedWindow {
        data,
        band_start,
        bandwidth: q,
    })
}

/// Like [`compress`], but re-embeds the selected band into an otherwise-zero
/// full spectrum and inverse-transforms at the original length, for fidelity
/// assessment against the original window.
pub fn reconstruct_full(window: &ArrayView2<f64>, cfg: &CompressorConfig) -> Result<Array2<f64>> {
    cfg.validate()?;
    let (n, p) = window.dim();
    let spectrum = forward_rdft(window)?;
    let energies = cumulative_energy(&spectrum, cfg)?;
    let band_start = select_band(&energies);
    let q = cfg.bandwidth;
    let mut masked = Array2::zeros((n, spectrum.num_bins()));
    masked
        .slice_mut(ndarray::s![.., band_start..band_start + q])
        .assign(&spectrum.components.slice(ndarray::s![.., band_start..band_start + q]));
    inverse_rdft(
        &Spectrum {
            components: masked,
            source_length: p,
        },
        p,
    )
}

/// Mean absolute percentage error between two equally-shaped matrices, with
/// the denominator floored at 1e-8 to guard zero crossings.
pub fn mape(original: &ArrayView2<f64>, reconstruction: &ArrayView2<f64>) -> f64 {
    const EPS: f64 = 1e-8;
    assert_eq!(original.dim(), reconstruction.dim(), "shape mismatch in mape");
    let total: f64 = original
        .iter()
        .zip(reconstruction.iter())
        .map(|(o, r)| (o - r).abs() / (o.abs() + EPS))
        .sum();
    total / original.len() as f64
}
