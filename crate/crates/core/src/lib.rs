//! Unsupervised state detection for multivariate time series.
//!
//! The pipeline processes an N-variate series of length T in five stages:
//!
//! 1. [`series`] — sliding windows over the raw series;
//! 2. [`spectral`] — per-window frequency-band compression that keeps the
//!    most energetic contiguous band of the one-sided spectrum;
//! 3. [`decompose`] + [`encoder`] — moving-average trend/seasonal split and
//!    a dual-view embedding (fixed random 1-D convolutions, global max
//!    pooling, small trainable linear heads);
//! 4. [`contrastive`] — self-supervised training of the linear heads with a
//!    loss that filters likely false-negative pairs before contrasting;
//! 5. [`dpgmm`] + [`pipeline`] — Dirichlet-process Gaussian-mixture
//!    clustering of the embeddings and per-step state assignment, either
//!    offline or as a stream with an adaptive clustering threshold.
//!
//! [`metrics`] provides ARI/NMI for evaluation against ground truth and
//! [`synth`] generates labeled piecewise-stationary test series.

pub mod contrastive;
pub mod decompose;
pub mod dpgmm;
pub mod encoder;
mod error;
pub mod metrics;
pub mod pipeline;
pub mod series;
pub mod spectral;
pub mod synth;

pub use error::{Error, Result};
pub use series::{MultivariateTimeSeries, SlidingWindowConfig, StateSequence, Window};
