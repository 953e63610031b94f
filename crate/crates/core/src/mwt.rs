//! Modified wavelet transform, computed one scale row at a time in the
//! frequency domain.
//!
//! Row `k` is `IDFT(X ⊙ row_k)[n] · e^{-iω_k nT}` where `X` is the full DFT of
//! the signal and `row_k` comes from [`window_row`]. The `1/L` of the inverse
//! DFT absorbs the `Δξ/2π` of the continuous integral together with the `T`
//! that maps DFT bins to `x̂(ξ)`, so a unit sample at `n₀` gives
//! `|W[k, n₀]| = T·g(0)/a_k` (a unit-area impulse gives `g(0)/a_k`), and
//! `Σ_n W[k, n] = X[bin_k]·ĝ(0)` holds exactly.
//!
//! The convolution is circular. Columns closer than `a_k·d` to either edge
//! mix in content from the other end of the record; see
//! [`ScaleGrid::interior_columns`].

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::{SignalMeta, TfMatrix};
use crate::signal::DiscreteSignal;
use crate::spectral::{twiddles, Plans};
use crate::wavelet::{window_row, ScaleGrid, WaveletSpec, Weight};

/// Largest record the direct oracle accepts.
pub const ORACLE_MAX_LEN: usize = 256;

fn check_grid(x: &DiscreteSignal, grid: &ScaleGrid) -> Result<SignalMeta> {
    if grid.signal_len() != x.len() {
        return Err(Error::Dimension(format!(
            "grid built for L = {}, signal has L = {}",
            grid.signal_len(),
            x.len()
        )));
    }
    if grid.sample_rate_hz() != x.sample_rate_hz() {
        return Err(Error::Dimension(format!(
            "grid built for fs = {}, signal has fs = {}",
            grid.sample_rate_hz(),
            x.sample_rate_hz()
        )));
    }
    Ok(SignalMeta {
        len: x.len(),
        fs: x.sample_rate_hz(),
        t0: x.t0(),
    })
}

/// Transform for one window weighting.
pub fn mwt(
    x: &DiscreteSignal,
    grid: &ScaleGrid,
    spec: &WaveletSpec,
    weight: Weight,
) -> Result<TfMatrix> {
    let mut out = mwt_many(x, grid, spec, &[weight])?;
    Ok(out.pop().expect("one weight in, one matrix out"))
}

/// Several weightings sharing a single forward DFT of `x`.
pub fn mwt_many(
    x: &DiscreteSignal,
    grid: &ScaleGrid,
    spec: &WaveletSpec,
    weights: &[Weight],
) -> Result<Vec<TfMatrix>> {
    let meta = check_grid(x, grid)?;
    let len = meta.len;
    let plans = Plans::new(len);
    let mut spectrum = x.samples().to_vec();
    plans.forward_in_place(&mut spectrum);
    let tw = twiddles(len);

    Ok(weights
        .iter()
        .map(|&weight| {
            let mut m = TfMatrix::zeros(grid.clone(), meta);
            m.as_mut_slice()
                .par_chunks_mut(len)
                .enumerate()
                .for_each(|(k, out)| {
                    let row = window_row(spec, grid.scales()[k], weight, len, meta.fs);
                    for ((o, xs), r) in out.iter_mut().zip(&spectrum).zip(&row) {
                        *o = xs * r;
                    }
                    plans.inverse_in_place(out);
                    let bin = grid.bin(k);
                    for (n, o) in out.iter_mut().enumerate() {
                        *o *= tw[(bin * n) % len];
                    }
                });
            m
        })
        .collect())
}

/// The plain, frequency-weighted and time-weighted transforms.
#[derive(Debug, Clone)]
pub struct MwtSet {
    pub plain: TfMatrix,
    pub freq_weighted: TfMatrix,
    pub time_weighted: TfMatrix,
}

pub fn mwt_set(x: &DiscreteSignal, grid: &ScaleGrid, spec: &WaveletSpec) -> Result<MwtSet> {
    let mut v = mwt_many(
        x,
        grid,
        spec,
        &[Weight::Plain, Weight::FreqWeighted, Weight::TimeWeighted],
    )?;
    let time_weighted = v.pop().unwrap();
    let freq_weighted = v.pop().unwrap();
    let plain = v.pop().unwrap();
    Ok(MwtSet {
        plain,
        freq_weighted,
        time_weighted,
    })
}

/// Plain transform by direct time-domain summation, `O(K·L²)`.
///
/// For each scale the window is recovered numerically by inverse-transforming
/// the sampled `ĝ` row with an explicit DFT sum, giving the periodized
/// `g_k(s)`; then
/// `W[k, n] = (T/a_k)·Σ_j x[j]·g_k((n - j) mod L)·e^{-iω_k jT}`.
/// No FFT is involved, so this checks the frequency-domain engine
/// independently.
pub fn direct_mwt_oracle(
    x: &DiscreteSignal,
    grid: &ScaleGrid,
    spec: &WaveletSpec,
) -> Result<TfMatrix> {
    let meta = check_grid(x, grid)?;
    let len = meta.len;
    if len > ORACLE_MAX_LEN {
        return Err(Error::OracleGuard(format!(
            "direct summation is limited to L <= {ORACLE_MAX_LEN}, got {len}"
        )));
    }
    let dt = 1.0 / meta.fs;
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut out = TfMatrix::zeros(grid.clone(), meta);
    for k in 0..grid.len() {
        let a = grid.scales()[k];
        let omega = grid.omegas()[k];
        let row = window_row(spec, a, Weight::Plain, len, meta.fs);
        // g_k(s) = (a/T)·e^{-iω sT}·(1/L)·Σ_m ĝ(a(ξ_m - ω))·e^{2πims/L}
        let g: Vec<Complex64> = (0..len)
            .map(|s| {
                let acc: Complex64 = row
                    .iter()
                    .enumerate()
                    .map(|(m, r)| {
                        let phase = two_pi * ((m * s) % len) as f64 / len as f64;
                        r * Complex64::from_polar(1.0, phase)
                    })
                    .sum();
                acc / len as f64 * (a / dt) * Complex64::from_polar(1.0, -omega * s as f64 * dt)
            })
            .collect();
        for n in 0..len {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, xj) in x.samples().iter().enumerate() {
                let lag = (n + len - j) % len;
                acc += xj * g[lag] * Complex64::from_polar(1.0, -omega * j as f64 * dt);
            }
            out.row_mut(k)[n] = acc * (dt / a);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::synth_dirac;
    use crate::wavelet::make_scale_grid;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_signal(len: usize, fs: f64, seed: u64) -> DiscreteSignal {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v: Vec<f64> = (0..len).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
        DiscreteSignal::from_real(&v, fs, 0.0).unwrap()
    }

    fn frob(m: &TfMatrix) -> f64 {
        m.as_slice()
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    #[test]
    fn matches_direct_oracle() {
        let spec = WaveletSpec::default();
        let x = random_signal(64, 64.0, 5);
        let grid = crate::wavelet::make_scale_grid_band(64, 64.0, &spec, 17, 32).unwrap();
        assert_eq!(grid.len(), 16);
        let fast = mwt(&x, &grid, &spec, Weight::Plain).unwrap();
        let slow = direct_mwt_oracle(&x, &grid, &spec).unwrap();
        let diff = fast.combine(1.0.into(), &slow, (-1.0).into()).unwrap();
        assert!(frob(&diff) / frob(&slow) < 1e-10);
    }

    #[test]
    fn oracle_guard() {
        let spec = WaveletSpec::default();
        let x = random_signal(512, 512.0, 1);
        let grid = make_scale_grid(512, 512.0, &spec, 200).unwrap();
        assert!(matches!(
            direct_mwt_oracle(&x, &grid, &spec),
            Err(Error::OracleGuard(_))
        ));
    }

    #[test]
    fn zero_signal_gives_zero_matrix() {
        let spec = WaveletSpec::default();
        let x = DiscreteSignal::from_real(&[0.0; 32], 32.0, 0.0).unwrap();
        let grid = make_scale_grid(32, 32.0, &spec, 1).unwrap();
        for w in [Weight::Plain, Weight::FreqWeighted, Weight::TimeWeighted] {
            assert!(mwt(&x, &grid, &spec, w)
                .unwrap()
                .as_slice()
                .iter()
                .all(|z| z.norm() == 0.0));
        }
        assert!(direct_mwt_oracle(&x, &grid, &spec)
            .unwrap()
            .as_slice()
            .iter()
            .all(|z| z.norm() == 0.0));
    }

    #[test]
    fn grid_mismatch_is_dimension_error() {
        let spec = WaveletSpec::default();
        let x = random_signal(64, 64.0, 2);
        let grid = make_scale_grid(128, 64.0, &spec, 1).unwrap();
        assert!(matches!(
            mwt(&x, &grid, &spec, Weight::Plain),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn dirac_rows_follow_scaled_window() {
        let spec = WaveletSpec::default();
        let (len, fs) = (200, 200.0);
        let x = synth_dirac(0.5, len, fs).unwrap();
        let grid = make_scale_grid(len, fs, &spec, 1).unwrap();
        let w = mwt(&x, &grid, &spec, Weight::Plain).unwrap();
        let dt = 1.0 / fs;
        for k in 0..grid.len() {
            if grid.interior_columns(k, &spec).is_empty() {
                continue;
            }
            let a = grid.scales()[k];
            let row = w.row(k);
            let peak = (0..len)
                .max_by(|&i, &j| row[i].norm().total_cmp(&row[j].norm()))
                .unwrap();
            assert_eq!(peak, 100, "row {k}");
            // circular convolution: sum the periodic images of the window
            for (n, z) in row.iter().enumerate() {
                let want: f64 = (-3..=3)
                    .map(|j: i32| {
                        let lag = 100.0 - n as f64 + (j * len as i32) as f64;
                        spec.window_time(lag * dt / a)
                    })
                    .sum::<f64>()
                    * dt
                    / a;
                assert!((z.norm() - want).abs() < 1e-6 * dt / a, "row {k} col {n}");
            }
        }
    }

    #[test]
    fn row_sum_is_center_bin() {
        let spec = WaveletSpec::default();
        let x = random_signal(96, 10.0, 8);
        let grid = make_scale_grid(96, 10.0, &spec, 3).unwrap();
        let w = mwt(&x, &grid, &spec, Weight::Plain).unwrap();
        let spec_x = crate::signal::spectrum(&x);
        for k in 0..grid.len() {
            let s: Complex64 = w.row(k).iter().sum();
            let want = spec_x.bins[grid.bin(k)] * spec.window_peak();
            assert!((s - want).norm() < 1e-10 * want.norm().max(1.0));
        }
    }

    #[test]
    fn linearity() {
        let spec = WaveletSpec::default();
        let x = random_signal(128, 128.0, 1);
        let y = random_signal(128, 128.0, 2);
        let (alpha, beta) = (Complex64::new(0.7, -1.1), Complex64::new(-2.0, 0.4));
        let z = DiscreteSignal::new(
            x.samples()
                .iter()
                .zip(y.samples())
                .map(|(a, b)| alpha * a + beta * b)
                .collect(),
            128.0,
            0.0,
        )
        .unwrap();
        let grid = make_scale_grid(128, 128.0, &spec, 1).unwrap();
        let wx = mwt(&x, &grid, &spec, Weight::Plain).unwrap();
        let wy = mwt(&y, &grid, &spec, Weight::Plain).unwrap();
        let wz = mwt(&z, &grid, &spec, Weight::Plain).unwrap();
        let lin = wx.combine(alpha, &wy, beta).unwrap();
        let diff = wz.combine(1.0.into(), &lin, (-1.0).into()).unwrap();
        assert!(frob(&diff) / frob(&wz) < 1e-12);
    }

    #[test]
    fn circular_shift_covariance() {
        let spec = WaveletSpec::default();
        let (len, fs) = (128, 128.0);
        // periodic two-tone signal, exact on the DFT grid
        let v: Vec<f64> = (0..len)
            .map(|n| {
                let t = n as f64 / len as f64;
                (2.0 * std::f64::consts::PI * 9.0 * t).cos()
                    + 0.5 * (2.0 * std::f64::consts::PI * 30.0 * t).sin()
            })
            .collect();
        let shift = 11;
        let shifted: Vec<f64> = (0..len).map(|n| v[(n + len - shift) % len]).collect();
        let x = DiscreteSignal::from_real(&v, fs, 0.0).unwrap();
        let xs = DiscreteSignal::from_real(&shifted, fs, 0.0).unwrap();
        let grid = make_scale_grid(len, fs, &spec, 1).unwrap();
        let w = mwt(&x, &grid, &spec, Weight::Plain).unwrap();
        let ws = mwt(&xs, &grid, &spec, Weight::Plain).unwrap();
        let scale = w.max_abs();
        for k in 0..grid.len() {
            let phase = Complex64::from_polar(1.0, -grid.omegas()[k] * shift as f64 / fs);
            for n in 0..len {
                let want = w.get(k, (n + len - shift) % len) * phase;
                assert!((ws.get(k, n) - want).norm() < 1e-10 * scale);
            }
        }
    }

    #[test]
    fn freq_weighted_is_scaled_time_derivative() {
        let spec = WaveletSpec::default();
        let (len, fs) = (128, 50.0);
        let x = random_signal(len, fs, 3);
        let grid = make_scale_grid(len, fs, &spec, 1).unwrap();
        let w = mwt(&x, &grid, &spec, Weight::Plain).unwrap();
        let wxi = mwt(&x, &grid, &spec, Weight::FreqWeighted).unwrap();
        let step = 2.0 * std::f64::consts::PI * fs / len as f64;
        for k in 0..grid.len() {
            // spectral derivative in b of the row
            let mut r = crate::spectral::fft(w.row(k));
            // W's DFT index q carries the demodulated frequency (m - bin)Δξ
            // of the undemodulated bin m = (q + bin) mod L
            let bin = grid.bin(k) as f64;
            for (q, v) in r.iter_mut().enumerate() {
                let m = ((q + grid.bin(k)) % len) as f64;
                *v *= Complex64::new(0.0, (m - bin) * step);
            }
            let d = crate::spectral::ifft(&r);
            let a = grid.scales()[k];
            let scale = wxi.max_abs();
            for (n, &dn) in d.iter().enumerate() {
                let want = dn * a / Complex64::i();
                assert!(
                    (wxi.get(k, n) - want).norm() < 1e-8 * scale,
                    "row {k} n {n}: {} vs {}",
                    wxi.get(k, n),
                    want
                );
            }
        }
    }
}
