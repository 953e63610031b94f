//! Sampled signals, their spectra, and the synthetic test signals used to
//! exercise the transforms.
//!
//! Spectra follow the plain DFT convention `X[m] = Σ x[n] e^{-2πimn/L}` with
//! bin `m` at angular frequency `ξ_m = m·Δξ`, `Δξ = 2π·fs/L`. The analytic
//! spectrum keeps bins `0..=L/2` and zeroes the rest without doubling, so a
//! real signal is recovered from its analytic part as `2·Re{·}` (DC and the
//! Nyquist bin are the only bins this double counts).

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::spectral;

/// Shortest record the transforms accept.
pub const MIN_LEN: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteSignal {
    samples: Vec<Complex64>,
    sample_rate_hz: f64,
    t0: f64,
}

impl DiscreteSignal {
    pub fn new(samples: Vec<Complex64>, sample_rate_hz: f64, t0: f64) -> Result<Self> {
        if samples.len() < MIN_LEN {
            return Err(Error::Range(format!(
                "signal length {} is below the minimum of {MIN_LEN}",
                samples.len()
            )));
        }
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
            return Err(Error::Range(format!(
                "sample rate must be positive, got {sample_rate_hz}"
            )));
        }
        if !t0.is_finite() {
            return Err(Error::Range("start time must be finite".into()));
        }
        if let Some(i) = samples
            .iter()
            .position(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::Range(format!("sample {i} is not finite")));
        }
        Ok(Self {
            samples,
            sample_rate_hz,
            t0,
        })
    }

    pub fn from_real(samples: &[f64], sample_rate_hz: f64, t0: f64) -> Result<Self> {
        Self::new(
            samples.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
            sample_rate_hz,
            t0,
        )
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    /// Sampling interval `T`.
    pub fn dt(&self) -> f64 {
        1.0 / self.sample_rate_hz
    }

    pub fn time_of(&self, n: usize) -> f64 {
        self.t0 + n as f64 * self.dt()
    }

    pub fn is_real(&self) -> bool {
        self.samples.iter().all(|z| z.im == 0.0)
    }

    pub fn real_part(&self) -> Vec<f64> {
        self.samples.iter().map(|z| z.re).collect()
    }

    /// Mean power `Σ|x|²/L`.
    pub fn power(&self) -> f64 {
        self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() / self.len() as f64
    }

    /// `2·Re{x}` as a real signal; inverts the analytic-signal convention.
    pub fn real_from_analytic(&self) -> DiscreteSignal {
        DiscreteSignal {
            samples: self
                .samples
                .iter()
                .map(|z| Complex64::new(2.0 * z.re, 0.0))
                .collect(),
            sample_rate_hz: self.sample_rate_hz,
            t0: self.t0,
        }
    }

    pub(crate) fn with_samples(&self, samples: Vec<Complex64>) -> DiscreteSignal {
        DiscreteSignal {
            samples,
            sample_rate_hz: self.sample_rate_hz,
            t0: self.t0,
        }
    }
}

/// Spectrum on the DFT grid `ξ_m = m·freq_step_rad`, all `L` bins retained.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSpectrum {
    pub bins: Vec<Complex64>,
    pub freq_step_rad: f64,
}

impl ComplexSpectrum {
    pub fn zeros(len: usize, freq_step_rad: f64) -> Self {
        Self {
            bins: vec![Complex64::new(0.0, 0.0); len],
            freq_step_rad,
        }
    }

    pub fn len(&self) -> usize {
        self.bins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    pub fn omega(&self, m: usize) -> f64 {
        m as f64 * self.freq_step_rad
    }

    /// Inverse DFT back to the time domain.
    pub fn to_signal(&self, sample_rate_hz: f64, t0: f64) -> Result<DiscreteSignal> {
        DiscreteSignal::new(spectral::ifft(&self.bins), sample_rate_hz, t0)
    }
}

/// Full DFT of `x`.
pub fn spectrum(x: &DiscreteSignal) -> ComplexSpectrum {
    ComplexSpectrum {
        bins: spectral::fft(x.samples()),
        freq_step_rad: 2.0 * PI * x.sample_rate_hz() / x.len() as f64,
    }
}

/// DFT with strictly negative frequencies (bins above `L/2`) zeroed.
pub fn analytic_spectrum(x: &DiscreteSignal) -> ComplexSpectrum {
    let mut s = spectrum(x);
    let half = s.len() / 2;
    for b in s.bins.iter_mut().skip(half + 1) {
        *b = Complex64::new(0.0, 0.0);
    }
    s
}

/// Spectral amplitude of a [`ChirpModel`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AmplitudeProfile {
    Constant(f64),
    /// `exp(-(ω - center)² / (2·width²))`, both in rad/s.
    Gaussian {
        center: f64,
        width: f64,
    },
}

impl AmplitudeProfile {
    pub fn at(&self, omega: f64) -> f64 {
        match *self {
            AmplitudeProfile::Constant(a) => a,
            AmplitudeProfile::Gaussian { center, width } => {
                let u = (omega - center) / width;
                (-0.5 * u * u).exp()
            }
        }
    }
}

/// Frequency-domain mode `A(ω)·e^{iφ(ω)}` with `φ(ω) = β₀ + β₁ω + β₂ω²/2`.
///
/// The group delay `-φ'(ω) = -β₁ - β₂ω` is measured in seconds from the start
/// of the record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChirpModel {
    pub beta: [f64; 3],
    pub amplitude: AmplitudeProfile,
    /// Support `[ω_lo, ω_hi]` in rad/s.
    pub band: [f64; 2],
}

impl ChirpModel {
    pub fn new(beta: [f64; 3], amplitude: AmplitudeProfile, band: [f64; 2]) -> Result<Self> {
        let model = Self {
            beta,
            amplitude,
            band,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        let [lo, hi] = self.band;
        if !(lo >= 0.0 && hi > lo && hi.is_finite()) {
            return Err(Error::Range(format!("invalid band [{lo}, {hi}]")));
        }
        if let AmplitudeProfile::Gaussian { width, .. } = self.amplitude {
            if !width.is_finite() || width <= 0.0 {
                return Err(Error::Argument(
                    "Gaussian profile width must be positive".into(),
                ));
            }
        }
        // -φ' is affine, so checking the band ends covers the whole band.
        if self.group_delay(lo) <= 0.0 || self.group_delay(hi) <= 0.0 {
            return Err(Error::Argument(
                "group delay must be positive over the band".into(),
            ));
        }
        Ok(())
    }

    pub fn phase(&self, omega: f64) -> f64 {
        let [b0, b1, b2] = self.beta;
        b0 + b1 * omega + 0.5 * b2 * omega * omega
    }

    /// `φ'(ω)`.
    pub fn phase_slope(&self, omega: f64) -> f64 {
        self.beta[1] + self.beta[2] * omega
    }

    /// `φ''(ω)`, constant for this model.
    pub fn phase_curvature(&self) -> f64 {
        self.beta[2]
    }

    /// `-φ'(ω)` in seconds.
    pub fn group_delay(&self, omega: f64) -> f64 {
        -self.phase_slope(omega)
    }

    pub fn value(&self, omega: f64) -> Complex64 {
        if omega < self.band[0] || omega > self.band[1] {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(self.amplitude.at(omega), self.phase(omega))
    }

    /// The model sampled on the nonnegative DFT bins `0..=L/2`.
    pub fn sampled_spectrum(&self, len: usize, fs: f64) -> ComplexSpectrum {
        let step = 2.0 * PI * fs / len as f64;
        let mut s = ComplexSpectrum::zeros(len, step);
        for m in 0..=len / 2 {
            s.bins[m] = self.value(m as f64 * step);
        }
        s
    }
}

/// Unit sample at `round(t0·fs)`, halves rounded up.
pub fn synth_dirac(t0_s: f64, len: usize, fs: f64) -> Result<DiscreteSignal> {
    check_record(len, fs)?;
    let duration = len as f64 / fs;
    if !(t0_s >= 0.0 && t0_s < duration) {
        return Err(Error::Range(format!(
            "impulse time {t0_s} s lies outside the record [0, {duration})"
        )));
    }
    let idx = ((t0_s * fs) + 0.5).floor() as usize;
    if idx >= len {
        return Err(Error::Range(format!(
            "impulse time {t0_s} s rounds past the last sample"
        )));
    }
    let mut samples = vec![Complex64::new(0.0, 0.0); len];
    samples[idx] = Complex64::new(1.0, 0.0);
    DiscreteSignal::new(samples, fs, 0.0)
}

/// Analytic signal whose spectrum on bins `0..=L/2` is exactly the model.
pub fn synth_gd_chirp(model: &ChirpModel, len: usize, fs: f64) -> Result<DiscreteSignal> {
    check_record(len, fs)?;
    model.validate()?;
    if model.band[1] > PI * fs {
        return Err(Error::Range(format!(
            "band edge {} rad/s exceeds Nyquist {} rad/s",
            model.band[1],
            PI * fs
        )));
    }
    model.sampled_spectrum(len, fs).to_signal(fs, 0.0)
}

/// Exponentially damped sine launched at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampedTone {
    pub carrier_hz: f64,
    pub decay_per_s: f64,
}

/// Identical damped tones launched every `round(period_s·fs)` samples.
pub fn synth_pulse_train(
    period_s: f64,
    n_pulses: usize,
    len: usize,
    fs: f64,
    pulse: DampedTone,
) -> Result<DiscreteSignal> {
    check_record(len, fs)?;
    if n_pulses == 0 {
        return Err(Error::Argument(
            "pulse train needs at least one pulse".into(),
        ));
    }
    if !period_s.is_finite() || period_s <= 0.0 {
        return Err(Error::Argument("pulse period must be positive".into()));
    }
    if n_pulses as f64 * period_s * fs > len as f64 {
        return Err(Error::Range(format!(
            "{n_pulses} pulses of period {period_s} s do not fit in {len} samples"
        )));
    }
    let spacing = (period_s * fs).round() as usize;
    let mut samples = vec![0.0; len];
    for p in 0..n_pulses {
        let start = p * spacing;
        for (i, v) in samples.iter_mut().enumerate().skip(start) {
            let t = (i - start) as f64 / fs;
            *v += (-pulse.decay_per_s * t).exp() * (2.0 * PI * pulse.carrier_hz * t).sin();
        }
    }
    DiscreteSignal::from_real(&samples, fs, 0.0)
}

/// The two dispersive modes used by the concentration studies: a weakly
/// chirped low band and a later, wider high band.
pub fn two_mode_models(fs: f64) -> Result<[ChirpModel; 2]> {
    let nyquist = PI * fs;
    let hz = 2.0 * PI;
    Ok([
        ChirpModel::new(
            [0.0, -0.3, -2e-4],
            AmplitudeProfile::Gaussian {
                center: 50.0 * hz,
                width: 15.0 * hz,
            },
            [0.0, nyquist],
        )?,
        ChirpModel::new(
            [0.0, -1.2, 1e-4],
            AmplitudeProfile::Gaussian {
                center: 150.0 * hz,
                width: 30.0 * hz,
            },
            [0.0, nyquist],
        )?,
    ])
}

/// Real two-mode transient built from [`two_mode_models`].
pub fn synth_two_mode(len: usize, fs: f64) -> Result<DiscreteSignal> {
    check_record(len, fs)?;
    let models = two_mode_models(fs)?;
    let mut spec = models[0].sampled_spectrum(len, fs);
    let second = models[1].sampled_spectrum(len, fs);
    for (a, b) in spec.bins.iter_mut().zip(&second.bins) {
        *a += *b;
    }
    let analytic = spec.to_signal(fs, 0.0)?;
    Ok(analytic.real_from_analytic())
}

/// Adds white Gaussian noise scaled so that `10·log10(P_x/P_w) = snr_db`
/// exactly, using the realized noise power. `snr_db = +∞` returns `x`.
///
/// The noise is drawn from ChaCha20 seeded with `seed`, converted to normals
/// with the Box–Muller transform (`u1` taken from `(0, 1]`). Complex signals
/// get independent real and imaginary noise.
pub fn add_noise_snr(x: &DiscreteSignal, snr_db: f64, seed: u64) -> Result<DiscreteSignal> {
    let px = x.power();
    if px == 0.0 {
        return Err(Error::UndefinedSnr);
    }
    if snr_db == f64::INFINITY {
        return Ok(x.clone());
    }
    if !snr_db.is_finite() {
        return Err(Error::Argument(format!(
            "SNR must be finite or +inf, got {snr_db}"
        )));
    }
    let complex = !x.is_real();
    let n = x.len();
    let mut gauss = BoxMuller::new(seed);
    let noise: Vec<Complex64> = (0..n)
        .map(|_| {
            let re = gauss.next();
            let im = if complex { gauss.next() } else { 0.0 };
            Complex64::new(re, im)
        })
        .collect();
    let pw = noise.iter().map(|z| z.norm_sqr()).sum::<f64>() / n as f64;
    let scale = (px / (pw * 10f64.powf(snr_db / 10.0))).sqrt();
    let samples = x
        .samples()
        .iter()
        .zip(&noise)
        .map(|(s, w)| s + w * scale)
        .collect();
    Ok(x.with_samples(samples))
}

struct BoxMuller {
    rng: ChaCha20Rng,
    spare: Option<f64>,
}

impl BoxMuller {
    fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha20Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    fn next(&mut self) -> f64 {
        if let Some(v) = self.spare.take() {
            return v;
        }
        let u1 = 1.0 - self.rng.gen::<f64>();
        let u2 = self.rng.gen::<f64>();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * PI * u2;
        self.spare = Some(r * theta.sin());
        r * theta.cos()
    }
}

fn check_record(len: usize, fs: f64) -> Result<()> {
    if len < MIN_LEN {
        return Err(Error::Range(format!(
            "record length {len} is below the minimum of {MIN_LEN}"
        )));
    }
    if !(fs.is_finite() && fs > 0.0) {
        return Err(Error::Range(format!(
            "sample rate must be positive, got {fs}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real_random(len: usize, seed: u64) -> DiscreteSignal {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let v: Vec<f64> = (0..len).map(|_| rng.gen::<f64>() - 0.5).collect();
        DiscreteSignal::from_real(&v, 1.0, 0.0).unwrap()
    }

    #[test]
    fn dirac_placement() {
        let x = synth_dirac(0.5, 200, 200.0).unwrap();
        assert_eq!(x.samples()[100], Complex64::new(1.0, 0.0));
        assert_eq!(x.samples().iter().filter(|z| z.norm() > 0.0).count(), 1);

        let x = synth_dirac(0.0, 8, 1.0).unwrap();
        assert_eq!(x.samples()[0].re, 1.0);

        let x = synth_dirac(0.4999, 200, 200.0).unwrap();
        assert_eq!(x.samples()[100].re, 1.0);
    }

    #[test]
    fn dirac_rejects_times_outside_record() {
        assert!(matches!(synth_dirac(1.0, 200, 200.0), Err(Error::Range(_))));
        assert!(matches!(
            synth_dirac(-0.1, 200, 200.0),
            Err(Error::Range(_))
        ));
        // rounds onto index 200
        assert!(matches!(
            synth_dirac(0.9999, 200, 200.0),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn short_or_bad_signals_rejected() {
        assert!(DiscreteSignal::from_real(&[0.0; 7], 1.0, 0.0).is_err());
        assert!(DiscreteSignal::from_real(&[0.0; 8], 0.0, 0.0).is_err());
        assert!(DiscreteSignal::from_real(&[f64::NAN; 8], 1.0, 0.0).is_err());
    }

    #[test]
    fn chirp_spectrum_round_trip() {
        let fs = 200.0;
        let model = ChirpModel::new(
            [0.1, -0.3, -0.002],
            AmplitudeProfile::Gaussian {
                center: 2.0 * PI * 45.0,
                width: 2.0 * PI * 15.0,
            },
            [0.0, PI * fs],
        )
        .unwrap();
        let x = synth_gd_chirp(&model, 256, fs).unwrap();
        let got = spectrum(&x);
        let want = model.sampled_spectrum(256, fs);
        for (g, w) in got.bins.iter().zip(&want.bins) {
            assert!((g - w).norm() < 1e-10);
        }
    }

    #[test]
    fn constant_gd_chirp_is_a_delayed_impulse() {
        let fs = 200.0;
        let model = ChirpModel::new(
            [0.0, -0.5, 0.0],
            AmplitudeProfile::Constant(1.0),
            [0.0, PI * fs],
        )
        .unwrap();
        let x = synth_gd_chirp(&model, 200, fs).unwrap();
        let peak = x
            .samples()
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .unwrap()
            .0;
        assert_eq!(peak, 100);
    }

    #[test]
    fn zero_amplitude_chirp_is_silent() {
        let model = ChirpModel::new(
            [0.0, -0.5, 0.0],
            AmplitudeProfile::Constant(0.0),
            [0.0, 100.0],
        )
        .unwrap();
        let x = synth_gd_chirp(&model, 64, 64.0).unwrap();
        assert!(x.samples().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn chirp_band_past_nyquist_rejected() {
        let model = ChirpModel::new(
            [0.0, -0.5, 0.0],
            AmplitudeProfile::Constant(1.0),
            [0.0, 1000.0],
        )
        .unwrap();
        assert!(matches!(
            synth_gd_chirp(&model, 64, 100.0),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn chirp_model_requires_positive_delay() {
        let r = ChirpModel::new(
            [0.0, 0.5, 0.0],
            AmplitudeProfile::Constant(1.0),
            [0.0, 10.0],
        );
        assert!(r.is_err());
    }

    #[test]
    fn pulse_train_envelope_autocorrelation_peaks_at_period() {
        let pulse = DampedTone {
            carrier_hz: 1060.0,
            decay_per_s: 800.0,
        };
        let x = synth_pulse_train(0.0093, 8, 8192, 25600.0, pulse).unwrap();
        let env: Vec<f64> = analytic_spectrum(&x)
            .to_signal(25600.0, 0.0)
            .unwrap()
            .samples()
            .iter()
            .map(|z| 2.0 * z.norm())
            .collect();
        let mean = env.iter().sum::<f64>() / env.len() as f64;
        let centered: Vec<f64> = env.iter().map(|v| v - mean).collect();
        let best = (100..400)
            .max_by(|&a, &b| {
                let ac = |lag: usize| -> f64 {
                    centered
                        .iter()
                        .zip(&centered[lag..])
                        .map(|(u, v)| u * v)
                        .sum()
                };
                ac(a).total_cmp(&ac(b))
            })
            .unwrap();
        assert_eq!(best, 238);
        assert!(synth_pulse_train(0.0093, 40, 8192, 25600.0, pulse).is_err());
    }

    #[test]
    fn single_pulse_starts_at_zero() {
        let pulse = DampedTone {
            carrier_hz: 100.0,
            decay_per_s: 50.0,
        };
        let x = synth_pulse_train(0.01, 1, 64, 1000.0, pulse).unwrap();
        assert_eq!(x.samples()[0].re, 0.0);
        assert!((x.samples()[1].re - (2.0 * PI * 0.1).sin() * (-0.05f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn noise_scaling_is_exact() {
        let x = real_random(512, 3);
        let y = add_noise_snr(&x, 0.0, 11).unwrap();
        let pw: f64 = y
            .samples()
            .iter()
            .zip(x.samples())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            / 512.0;
        assert!((pw / x.power() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn noise_is_deterministic_per_seed() {
        let x = real_random(128, 1);
        let a = add_noise_snr(&x, 10.0, 42).unwrap();
        let b = add_noise_snr(&x, 10.0, 42).unwrap();
        let c = add_noise_snr(&x, 10.0, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(add_noise_snr(&x, f64::INFINITY, 1).unwrap(), x);
        assert!(a.is_real());
    }

    #[test]
    fn noise_on_zero_signal_is_undefined() {
        let x = DiscreteSignal::from_real(&[0.0; 16], 1.0, 0.0).unwrap();
        assert!(matches!(
            add_noise_snr(&x, 10.0, 1),
            Err(Error::UndefinedSnr)
        ));
    }

    #[test]
    fn analytic_spectrum_single_tone() {
        let len = 64;
        let v: Vec<f64> = (0..len)
            .map(|n| (2.0 * PI * 5.0 * n as f64 / len as f64).cos())
            .collect();
        let x = DiscreteSignal::from_real(&v, 1.0, 0.0).unwrap();
        let s = analytic_spectrum(&x);
        for (m, b) in s.bins.iter().enumerate() {
            if m == 5 {
                // no doubling: half the cosine's energy sits here
                assert!((b.re - 32.0).abs() < 1e-9 && b.im.abs() < 1e-9);
            } else {
                assert!(b.norm() < 1e-9, "bin {m} = {b}");
            }
        }
    }

    #[test]
    fn analytic_round_trip_recovers_real_part() {
        let x = real_random(64, 9);
        let mut s = analytic_spectrum(&x);
        // 2·Re over-counts DC and Nyquist; halve them before doubling back.
        s.bins[0] *= 0.5;
        s.bins[32] *= 0.5;
        let back = s.to_signal(1.0, 0.0).unwrap().real_from_analytic();
        for (a, b) in back.samples().iter().zip(x.samples()) {
            assert!((a.re - b.re).abs() < 1e-10);
        }
        let zero = DiscreteSignal::from_real(&[0.0; 16], 1.0, 0.0).unwrap();
        assert!(analytic_spectrum(&zero)
            .bins
            .iter()
            .all(|b| b.norm() == 0.0));
    }

    #[test]
    fn parseval_on_full_spectrum() {
        let x = real_random(100, 4);
        let fs = 37.0;
        let x = DiscreteSignal::from_real(&x.real_part(), fs, 0.0).unwrap();
        let t = x.dt();
        let s = spectrum(&x);
        let time = x.samples().iter().map(|z| z.norm_sqr()).sum::<f64>() * t;
        // x̂(ξ) ≈ T·X[m] on the continuous axis
        let freq =
            s.bins.iter().map(|b| (b * t).norm_sqr()).sum::<f64>() / (2.0 * PI) * s.freq_step_rad;
        assert!((time - freq).abs() / time < 1e-10);
    }
}
