//! One-call transforms from a signal to a time-frequency representation.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gd::{
    check_iterations, gd_estimate, gd_iterate, if_estimate, GdMap, IterMode, ThresholdConfig,
};
use crate::matrix::{RealMatrix, TfMatrix};
use crate::mwt::{mwt, mwt_many};
use crate::signal::DiscreteSignal;
use crate::squeeze::{conservation_residual, rm, wtsst, SqueezeMethod, SqueezeResult};
use crate::tfr::TfrData;
use crate::wavelet::{ScaleGrid, WaveletSpec, Weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Mwt,
    Wtsst,
    Wtmsst { n: usize, mode: IterMode },
    Rm,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Mwt => "mwt",
            Method::Wtsst => "wtsst",
            Method::Wtmsst { .. } => "wtmsst",
            Method::Rm => "rm",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Wtmsst { n, .. } => write!(f, "wtmsst(N={n})"),
            m => f.write_str(m.name()),
        }
    }
}

impl FromStr for IterMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(IterMode::Linear),
            "exp" | "exponential" => Ok(IterMode::Exponential),
            _ => Err(Error::Argument(format!(
                "unknown iteration mode {s:?}, expected linear or exp"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TransformOutput {
    /// Plain transform `W`.
    pub plain: TfMatrix,
    /// Delay map used for squeezing, already composed for WTMSST.
    pub gd: Option<GdMap>,
    pub squeezed: Option<SqueezeResult>,
}

impl TransformOutput {
    /// The representation the method produces: `W` for the plain transform,
    /// the squeezed matrix otherwise.
    pub fn matrix(&self) -> &TfMatrix {
        self.squeezed.as_ref().map_or(&self.plain, |s| &s.s)
    }

    /// File payload: reassigned energy as a real matrix for RM, the complex
    /// matrix otherwise.
    pub fn to_tfr(&self) -> Result<TfrData> {
        let m = self.matrix();
        match &self.squeezed {
            Some(s) if s.method == SqueezeMethod::Rm => {
                let energy = RealMatrix::from_vec(
                    m.as_slice().iter().map(|z| z.re).collect(),
                    m.rows(),
                    m.cols(),
                )?;
                Ok(TfrData::from_real(&energy, m.meta().fs, m.meta().t0))
            }
            _ => Ok(TfrData::from_matrix(m)),
        }
    }

    /// Per-row conservation gap for synchrosqueezed outputs.
    pub fn conservation_residual(&self) -> Option<Result<f64>> {
        match (&self.gd, &self.squeezed) {
            (Some(gd), Some(s)) if s.is_invertible() => {
                Some(conservation_residual(&self.plain, gd, &s.s))
            }
            _ => None,
        }
    }
}

/// Runs the transform and, if asked, the squeeze.
pub fn transform(
    x: &DiscreteSignal,
    grid: &ScaleGrid,
    spec: &WaveletSpec,
    method: Method,
    threshold: ThresholdConfig,
) -> Result<TransformOutput> {
    threshold.validate()?;
    if let Method::Wtmsst { n, mode } = method {
        // fail before the transform work
        check_iterations(n, mode)?;
    }
    if method == Method::Mwt {
        return Ok(TransformOutput {
            plain: mwt(x, grid, spec, Weight::Plain)?,
            gd: None,
            squeezed: None,
        });
    }
    let weights: &[Weight] = if method == Method::Rm {
        &[Weight::Plain, Weight::TimeWeighted, Weight::FreqWeighted]
    } else {
        &[Weight::Plain, Weight::TimeWeighted]
    };
    let mut mats = mwt_many(x, grid, spec, weights)?.into_iter();
    let plain = mats.next().expect("plain");
    let wtg = mats.next().expect("time weighted");
    let gd = gd_estimate(&plain, &wtg, threshold)?;
    let (gd, squeezed) = match method {
        Method::Wtsst => {
            let s = wtsst(&plain, &gd)?;
            (gd, s)
        }
        Method::Wtmsst { n, mode } => {
            let composed = gd_iterate(&gd, n, mode)?;
            let mut s = wtsst(&plain, &composed)?;
            s.method = SqueezeMethod::Wtmsst { n, mode };
            (composed, s)
        }
        Method::Rm => {
            let wxi = mats.next().expect("frequency weighted");
            let ifm = if_estimate(&plain, &wxi, threshold)?;
            let s = rm(&plain, &gd, &ifm)?;
            (gd, s)
        }
        Method::Mwt => unreachable!(),
    };
    Ok(TransformOutput {
        plain,
        gd: Some(gd),
        squeezed: Some(squeezed),
    })
}
