//! Thin wrappers over `rustfft` with the normalization used throughout the
//! crate: the forward transform is unscaled and the inverse carries `1/L`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

pub(crate) struct Plans {
    pub forward: Arc<dyn Fft<f64>>,
    pub inverse: Arc<dyn Fft<f64>>,
    len: usize,
}

impl Plans {
    pub fn new(len: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            forward: planner.plan_fft_forward(len),
            inverse: planner.plan_fft_inverse(len),
            len,
        }
    }

    pub fn forward_in_place(&self, buf: &mut [Complex64]) {
        debug_assert_eq!(buf.len(), self.len);
        self.forward.process(buf);
    }

    pub fn inverse_in_place(&self, buf: &mut [Complex64]) {
        debug_assert_eq!(buf.len(), self.len);
        self.inverse.process(buf);
        let scale = 1.0 / self.len as f64;
        for v in buf.iter_mut() {
            *v *= scale;
        }
    }
}

pub(crate) fn fft(data: &[Complex64]) -> Vec<Complex64> {
    let mut buf = data.to_vec();
    if !buf.is_empty() {
        Plans::new(buf.len()).forward_in_place(&mut buf);
    }
    buf
}

pub(crate) fn ifft(data: &[Complex64]) -> Vec<Complex64> {
    let mut buf = data.to_vec();
    if !buf.is_empty() {
        Plans::new(buf.len()).inverse_in_place(&mut buf);
    }
    buf
}

/// `exp(-2πi j / len)` for `j in 0..len`. Indexing with `(k * n) % len`
/// gives exactly periodic bin-aligned phase factors.
pub(crate) fn twiddles(len: usize) -> Vec<Complex64> {
    (0..len)
        .map(|j| Complex64::from_polar(1.0, -2.0 * PI * j as f64 / len as f64))
        .collect()
}
