//! Wavelet-based time-reassigned synchrosqueezing (WTSST), its iterated
//! multisynchrosqueezing form (WTMSST), and the reassignment method, for
//! transient signals whose group delay is a smooth function of frequency.
//!
//! The usual path is [`signal`] → [`mwt::mwt`] → [`gd::gd_estimate`] →
//! [`squeeze::wtsst`] / [`squeeze::wtmsst`] → [`squeeze::reconstruct_time`],
//! or [`pipeline::transform`] for all of it at once.

pub mod cli;
pub mod error;
pub mod gd;
pub mod matrix;
pub mod metrics;
pub mod mwt;
pub mod pipeline;
pub mod render;
pub mod signal;
mod spectral;
pub mod squeeze;
pub mod tfr;
pub mod wavelet;

pub use error::{Error, Result};
pub use gd::{gd_estimate, gd_iterate, GdMap, IterMode, ThresholdConfig};
pub use matrix::{RealMatrix, SignalMeta, TfMatrix};
pub use mwt::mwt;
pub use pipeline::{transform, Method, TransformOutput};
pub use signal::{ComplexSpectrum, DiscreteSignal};
pub use squeeze::{reconstruct_time, wtmsst, wtsst, SqueezeMethod, SqueezeResult};
pub use wavelet::{make_scale_grid, ScaleGrid, WaveletSpec, Weight};
