//! The `tfsqueeze` command-line front end.
//!
//! Exit codes: 0 on success, 1 for I/O and data errors (unreadable or
//! malformed files, undefined metrics, mismatched inputs), 2 for usage and
//! parameter errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::gd::{gd_estimate, gd_iterate, IterMode, ThresholdConfig};
use crate::metrics::{
    pulse_peaks, reconstruction_error, renyi_entropy, renyi_entropy_energies, tfes, TfesConfig,
    DEFAULT_ALPHA,
};
use crate::mwt::mwt_many;
use crate::pipeline::{transform, Method};
use crate::render::{write_heatmap, Axes, Colormap, Scale};
use crate::signal::{
    add_noise_snr, synth_dirac, synth_gd_chirp, synth_pulse_train, synth_two_mode,
    AmplitudeProfile, ChirpModel, DampedTone, DiscreteSignal,
};
use crate::squeeze::{reconstruct_time, wtsst};
use crate::tfr::{
    read_signal_csv_file, read_tfr_file, write_entropy_csv, write_intervals_csv,
    write_signal_csv_file, write_tfes_csv, write_tfr_file, EntropyRow, TfrData,
};
use crate::wavelet::{make_scale_grid, make_scale_grid_band, ScaleGrid, WaveletSpec, Weight};

const HZ: f64 = 2.0 * std::f64::consts::PI;

#[derive(Debug, Parser)]
#[command(
    name = "tfsqueeze",
    version,
    about = "Time-reassigned synchrosqueezing of transient signals"
)]
pub struct Cli {
    /// Worker threads for row-parallel stages; output bytes never depend on it.
    #[arg(long, global = true, env = "TFSQUEEZE_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthesize a test signal as CSV.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Transform a signal CSV into a TFR1 file.
    Transform(TransformArgs),
    /// Concentration and fault-signature metrics.
    Metrics {
        #[command(subcommand)]
        metric: MetricCmd,
    },
    /// Render a TFR1 file as a PNG heatmap.
    Render(RenderArgs),
}

#[derive(Debug, Args)]
pub struct Record {
    /// Sample rate, Hz.
    #[arg(long)]
    pub fs: f64,
    /// Number of samples.
    #[arg(long)]
    pub len: usize,
}

#[derive(Debug, Args)]
pub struct GenCommon {
    #[arg(long)]
    pub out: PathBuf,
    /// Add white Gaussian noise at this SNR, dB.
    #[arg(long, allow_negative_numbers = true)]
    pub snr_db: Option<f64>,
    /// Noise seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum GenKind {
    /// Unit impulse.
    Dirac {
        /// Impulse time, s.
        #[arg(long)]
        t0: f64,
        #[command(flatten)]
        record: Record,
        #[command(flatten)]
        common: GenCommon,
    },
    /// Analytic mode with phase β₀ + β₁ω + β₂ω²/2 (group delay -β₁ - β₂ω).
    Chirp {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        beta0: f64,
        #[arg(long, allow_negative_numbers = true)]
        beta1: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        beta2: f64,
        /// Center of a Gaussian amplitude profile, Hz (constant amplitude if absent).
        #[arg(long, requires = "amp_width_hz")]
        amp_center_hz: Option<f64>,
        #[arg(long, requires = "amp_center_hz")]
        amp_width_hz: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        band_lo_hz: f64,
        /// Upper band edge, Hz [default: fs/2].
        #[arg(long)]
        band_hi_hz: Option<f64>,
        #[command(flatten)]
        record: Record,
        #[command(flatten)]
        common: GenCommon,
    },
    /// Train of damped tones.
    Pulses {
        #[arg(long)]
        period_ms: f64,
        /// Number of pulses [default: as many as fit].
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, default_value_t = 1060.0)]
        carrier_hz: f64,
        /// Decay rate, 1/s.
        #[arg(long, default_value_t = 1000.0)]
        decay: f64,
        #[command(flatten)]
        record: Record,
        #[command(flatten)]
        common: GenCommon,
    },
    /// Real two-mode dispersive transient.
    Twomode {
        #[command(flatten)]
        record: Record,
        #[command(flatten)]
        common: GenCommon,
    },
}

#[derive(Debug, Args)]
pub struct WaveletArgs {
    /// Wavelet carrier ω₀, rad.
    #[arg(long, default_value_t = 6.0)]
    pub omega0: f64,
    /// Gaussian window parameter σ.
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
}

impl WaveletArgs {
    fn spec(&self) -> Result<WaveletSpec> {
        WaveletSpec::gaussian(self.omega0, self.sigma)
    }
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[arg(value_parser = ["mwt", "wtsst", "wtmsst", "rm"])]
    pub method: String,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub wavelet: WaveletArgs,
    /// Lowest analyzed DFT bin.
    #[arg(long, default_value_t = 1)]
    pub k_min: usize,
    /// Highest analyzed DFT bin [default: L/2].
    #[arg(long)]
    pub k_max: Option<usize>,
    /// Support threshold Υ.
    #[arg(long, default_value_t = 1e-3)]
    pub threshold: f64,
    /// Whether Υ is relative to the largest |W| or absolute.
    #[arg(long, default_value = "relative", value_parser = ["relative", "absolute"])]
    pub threshold_mode: String,
    /// Group-delay iterations N for wtmsst.
    #[arg(long, default_value_t = 10)]
    pub iters: usize,
    /// Composition scheme; exp needs N to be a power of two.
    #[arg(long, default_value = "linear", value_parser = ["linear", "exp", "exponential"])]
    pub iter_mode: String,
    /// Write the reconstructed signal to this CSV (wtsst, wtmsst).
    #[arg(long)]
    pub reconstruct: Option<PathBuf>,
    /// Write the delay map used for squeezing as a real TFR1 file (NaN off the support).
    #[arg(long)]
    pub dump_gd: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum MetricCmd {
    /// Rényi entropy of a TFR1 file, or an SNR sweep over synthesized noise.
    Entropy(EntropyArgs),
    /// Time-frequency envelope spectrum and pulse intervals.
    Tfes(TfesArgs),
    /// Relative L2 error between two signal CSVs.
    ReconError(ReconArgs),
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    /// TFR1 file in single mode; clean signal CSV in sweep mode (two-mode transient if absent).
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    /// Rényi order α.
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    pub alpha: f64,
    /// Method label written in single mode [default: input file stem].
    #[arg(long)]
    pub label: Option<String>,
    /// SNR values, dB: `a:b[:step]` (a, multiples of step between, b; step defaults to 5) or a comma list.
    #[arg(long, allow_hyphen_values = true)]
    pub sweep_snr: Option<String>,
    /// Noise realizations per SNR; trial t uses seed + t.
    #[arg(long, default_value_t = 5)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Sample rate of the built-in sweep signal, Hz.
    #[arg(long, default_value_t = 512.0)]
    pub fs: f64,
    /// Length of the built-in sweep signal.
    #[arg(long, default_value_t = 1024)]
    pub len: usize,
    /// Iterations N for the wtmsst column of a sweep.
    #[arg(long, default_value_t = 10)]
    pub iters: usize,
    #[command(flatten)]
    pub wavelet: WaveletArgs,
    #[arg(long, default_value_t = 1)]
    pub k_min: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub threshold: f64,
}

#[derive(Debug, Args)]
pub struct TfesArgs {
    /// Squeezed TFR1 file.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write detected pulse intervals here.
    #[arg(long)]
    pub intervals: Option<PathBuf>,
    /// Minimum pulse separation, ms.
    #[arg(long, default_value_t = 2.0)]
    pub min_sep_ms: f64,
    /// Pulse peaks must exceed this fraction of the envelope maximum.
    #[arg(long, default_value_t = 0.5)]
    pub peak_fraction: f64,
    /// First DFT bin of the file's grid [default: grid ends at L/2].
    #[arg(long)]
    pub k_min: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ReconArgs {
    #[arg(long)]
    pub reference: PathBuf,
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Intensity scale; log clamps at 1e-8 of the maximum.
    #[arg(long, default_value = "linear", value_parser = ["linear", "log"])]
    pub scale: String,
    #[arg(long, default_value = "viridis", value_parser = ["gray", "hot", "viridis"])]
    pub colormap: String,
    /// First DFT bin of the file's grid [default: grid ends at L/2].
    #[arg(long)]
    pub k_min: Option<usize>,
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// 1 for data and I/O failures, 2 for bad parameters.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_data_error() || matches!(e, Error::Dimension(_)) {
        1
    } else {
        2
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.threads {
        Some(0) => Err(Error::Argument("--threads must be at least 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Argument(format!("cannot start {n} threads: {e}")))?;
            pool.install(|| dispatch(cli.command))
        }
        None => dispatch(cli.command),
    }
}

fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::Gen { kind } => cmd_gen(kind),
        Command::Transform(args) => cmd_transform(&args),
        Command::Metrics { metric } => match metric {
            MetricCmd::Entropy(args) => cmd_entropy(&args),
            MetricCmd::Tfes(args) => cmd_tfes(&args),
            MetricCmd::ReconError(args) => cmd_recon_error(&args),
        },
        Command::Render(args) => cmd_render(&args),
    }
}

fn cmd_gen(kind: GenKind) -> Result<()> {
    let (name, x, common) = match kind {
        GenKind::Dirac { t0, record, common } => {
            ("dirac", synth_dirac(t0, record.len, record.fs)?, common)
        }
        GenKind::Chirp {
            beta0,
            beta1,
            beta2,
            amp_center_hz,
            amp_width_hz,
            band_lo_hz,
            band_hi_hz,
            record,
            common,
        } => {
            let amplitude = match (amp_center_hz, amp_width_hz) {
                (Some(c), Some(w)) => AmplitudeProfile::Gaussian {
                    center: c * HZ,
                    width: w * HZ,
                },
                _ => AmplitudeProfile::Constant(1.0),
            };
            let hi = band_hi_hz.unwrap_or(record.fs / 2.0);
            let model =
                ChirpModel::new([beta0, beta1, beta2], amplitude, [band_lo_hz * HZ, hi * HZ])?;
            (
                "chirp",
                synth_gd_chirp(&model, record.len, record.fs)?,
                common,
            )
        }
        GenKind::Pulses {
            period_ms,
            count,
            carrier_hz,
            decay,
            record,
            common,
        } => {
            let period_s = period_ms * 1e-3;
            if !period_s.is_finite() || period_s <= 0.0 {
                return Err(Error::Argument("--period-ms must be positive".into()));
            }
            let spacing = (period_s * record.fs).round().max(1.0) as usize;
            let count = count.unwrap_or_else(|| record.len.div_ceil(spacing).max(1));
            let count = if count as f64 * period_s * record.fs > record.len as f64 && count > 1 {
                count - 1
            } else {
                count
            };
            let tone = DampedTone {
                carrier_hz,
                decay_per_s: decay,
            };
            (
                "pulses",
                synth_pulse_train(period_s, count, record.len, record.fs, tone)?,
                common,
            )
        }
        GenKind::Twomode { record, common } => {
            ("twomode", synth_two_mode(record.len, record.fs)?, common)
        }
    };
    let x = match common.snr_db {
        Some(snr) => add_noise_snr(&x, snr, common.seed)?,
        None => x,
    };
    write_signal_csv_file(&common.out, &x)?;
    let noise = common.snr_db.map_or(String::new(), |s| {
        format!(", noise {s} dB SNR (seed {})", common.seed)
    });
    println!(
        "wrote {}: {name}, {} {} samples at {} Hz{noise}",
        common.out.display(),
        x.len(),
        if x.is_real() { "real" } else { "complex" },
        x.sample_rate_hz()
    );
    Ok(())
}

fn threshold_config(value: f64, mode: &str) -> Result<ThresholdConfig> {
    let cfg = match mode {
        "relative" => ThresholdConfig::Relative(value),
        "absolute" => ThresholdConfig::Absolute(value),
        other => return Err(Error::Argument(format!("unknown threshold mode {other:?}"))),
    };
    cfg.validate()?;
    Ok(cfg)
}

fn grid_for(
    x: &DiscreteSignal,
    spec: &WaveletSpec,
    k_min: usize,
    k_max: Option<usize>,
) -> Result<ScaleGrid> {
    match k_max {
        Some(k_max) => make_scale_grid_band(x.len(), x.sample_rate_hz(), spec, k_min, k_max),
        None => make_scale_grid(x.len(), x.sample_rate_hz(), spec, k_min),
    }
}

fn cmd_transform(args: &TransformArgs) -> Result<()> {
    let spec = args.wavelet.spec()?;
    let threshold = threshold_config(args.threshold, &args.threshold_mode)?;
    let mode: IterMode = args.iter_mode.parse()?;
    let method = match args.method.as_str() {
        "mwt" => Method::Mwt,
        "wtsst" => Method::Wtsst,
        "wtmsst" => Method::Wtmsst {
            n: args.iters,
            mode,
        },
        "rm" => Method::Rm,
        other => return Err(Error::Argument(format!("unknown method {other:?}"))),
    };
    if args.reconstruct.is_some() && matches!(method, Method::Mwt | Method::Rm) {
        return Err(Error::Argument(format!(
            "--reconstruct is not available for {method}"
        )));
    }
    if args.dump_gd.is_some() && method == Method::Mwt {
        return Err(Error::Argument("--dump-gd needs a squeezing method".into()));
    }
    let x = read_signal_csv_file(&args.input)?;
    let grid = grid_for(&x, &spec, args.k_min, args.k_max)?;
    let out = transform(&x, &grid, &spec, method, threshold)?;
    let m = out.matrix();
    let meta = m.meta();
    let data = out.to_tfr()?;
    write_tfr_file(&args.out, &data)?;
    println!(
        "wrote {}: {method}, K = {} rows (bins {}..={}), L = {}",
        args.out.display(),
        m.rows(),
        grid.first_bin(),
        grid.bin(grid.len() - 1),
        m.cols()
    );
    if let Some(res) = out.conservation_residual() {
        println!("conservation residual (max over rows): {:e}", res?);
    }
    if let Some(path) = &args.dump_gd {
        let gd = out
            .gd
            .as_ref()
            .expect("squeezing methods carry a delay map");
        write_tfr_file(path, &TfrData::from_real(gd.delays(), meta.fs, meta.t0))?;
        println!(
            "wrote {}: delay map, {} valid cells",
            path.display(),
            gd.count()
        );
    }
    if let Some(s) = out.squeezed.as_ref().filter(|s| s.is_invertible()) {
        let analytic = reconstruct_time(s, &spec)?;
        let y = if x.is_real() {
            analytic.real_from_analytic()
        } else {
            analytic
        };
        let err = reconstruction_error(&x, &y)?;
        println!(
            "reconstruction rel_l2 = {:e} ({:.2} dB)",
            err.rel_l2, err.snr_db
        );
        if let Some(path) = &args.reconstruct {
            write_signal_csv_file(path, &y)?;
            println!("wrote {}: reconstruction", path.display());
        }
    }
    Ok(())
}

/// SNR list from `a:b[:step]` or `a,b,c`.
pub fn parse_snr_list(s: &str) -> Result<Vec<f64>> {
    let bad = || Error::Argument(format!("cannot parse SNR list {s:?}"));
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
    let list = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() > 3 {
            return Err(bad());
        }
        let (a, b) = (num(parts[0])?, num(parts[1])?);
        let step = parts.get(2).map_or(Ok(5.0), |t| num(t))?;
        if !(a.is_finite() && b.is_finite() && a <= b && step > 0.0) {
            return Err(bad());
        }
        let mut v = vec![a];
        let mut m = (a / step).floor() + 1.0;
        while m * step < b {
            v.push(m * step);
            m += 1.0;
        }
        if b > a {
            v.push(b);
        }
        v
    } else {
        s.split(',').map(num).collect::<Result<Vec<_>>>()?
    };
    if list.is_empty() || list.iter().any(|v| !v.is_finite()) {
        return Err(bad());
    }
    Ok(list)
}

fn cmd_entropy(args: &EntropyArgs) -> Result<()> {
    let rows = match &args.sweep_snr {
        Some(list) => entropy_sweep(args, &parse_snr_list(list)?)?,
        None => {
            let path = args
                .input
                .as_ref()
                .ok_or_else(|| Error::Argument("entropy needs --input or --sweep-snr".into()))?;
            let data = read_tfr_file(path)?;
            let energies: Vec<f64> = data.magnitudes().iter().map(|m| m * m).collect();
            let entropy = renyi_entropy_energies(&energies, args.alpha)?;
            let method = args.label.clone().unwrap_or_else(|| stem(path));
            println!(
                "{method}: Rényi entropy (alpha = {}) = {entropy}",
                args.alpha
            );
            vec![EntropyRow {
                method,
                snr_db: None,
                alpha: args.alpha,
                entropy,
            }]
        }
    };
    write_entropy_csv(BufWriter::new(File::create(&args.out)?), &rows)?;
    println!("wrote {}: {} rows", args.out.display(), rows.len());
    Ok(())
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map_or_else(|| "tfr".to_string(), |s| s.to_string_lossy().into_owned())
}

/// Mean entropy of |W|, WTSST and WTMSST(N) per SNR, averaged over trials.
fn entropy_sweep(args: &EntropyArgs, snrs: &[f64]) -> Result<Vec<EntropyRow>> {
    if args.trials == 0 {
        return Err(Error::Argument("--trials must be at least 1".into()));
    }
    let spec = args.wavelet.spec()?;
    let threshold = threshold_config(args.threshold, "relative")?;
    crate::gd::check_iterations(args.iters, IterMode::Linear)?;
    let clean = match &args.input {
        Some(path) => read_signal_csv_file(path)?,
        None => synth_two_mode(args.len, args.fs)?,
    };
    let grid = make_scale_grid(clean.len(), clean.sample_rate_hz(), &spec, args.k_min)?;
    let labels = [
        "mwt".to_string(),
        "wtsst".to_string(),
        format!("wtmsst(N={})", args.iters),
    ];
    let mut rows = Vec::new();
    for &snr in snrs {
        let mut sums = [0.0; 3];
        for t in 0..args.trials {
            let x = add_noise_snr(&clean, snr, args.seed.wrapping_add(t))?;
            let mats = mwt_many(&x, &grid, &spec, &[Weight::Plain, Weight::TimeWeighted])?;
            let (w, wtg) = (&mats[0], &mats[1]);
            let gd = gd_estimate(w, wtg, threshold)?;
            let s1 = wtsst(w, &gd)?;
            let sn = wtsst(w, &gd_iterate(&gd, args.iters, IterMode::Linear)?)?;
            sums[0] += renyi_entropy(w, args.alpha)?;
            sums[1] += renyi_entropy(&s1.s, args.alpha)?;
            sums[2] += renyi_entropy(&sn.s, args.alpha)?;
        }
        let means = sums.map(|s| s / args.trials as f64);
        println!(
            "snr {snr} dB: {} = {:.4}, {} = {:.4}, {} = {:.4}",
            labels[0], means[0], labels[1], means[1], labels[2], means[2]
        );
        for (label, entropy) in labels.iter().zip(means) {
            rows.push(EntropyRow {
                method: label.clone(),
                snr_db: Some(snr),
                alpha: args.alpha,
                entropy,
            });
        }
    }
    Ok(rows)
}

fn cmd_tfes(args: &TfesArgs) -> Result<()> {
    let cfg = TfesConfig {
        min_separation_s: args.min_sep_ms * 1e-3,
        peak_fraction: args.peak_fraction,
        ..TfesConfig::default()
    };
    if !(cfg.peak_fraction > 0.0 && cfg.peak_fraction <= 1.0) {
        return Err(Error::Range("--peak-fraction must lie in (0, 1]".into()));
    }
    let data = read_tfr_file(&args.input)?;
    let s = data.into_matrix(&WaveletSpec::default(), args.k_min)?;
    let res = tfes(&s, &cfg)?;
    let grid = s.grid();
    let row_hz: Vec<f64> = (0..grid.len()).map(|k| grid.freq_hz(k)).collect();
    write_tfes_csv(
        BufWriter::new(File::create(&args.out)?),
        &row_hz,
        &res.spectrum_peak,
    )?;
    println!(
        "best row {} ({} Hz), dominant envelope frequency {} Hz, {} intervals",
        res.best_row,
        row_hz[res.best_row],
        res.dominant_hz,
        res.intervals_s.len()
    );
    if let Some(path) = &args.intervals {
        let meta = s.meta();
        let peaks = pulse_peaks(&res.envelope, meta.fs, &cfg)?;
        let starts: Vec<f64> = peaks
            .iter()
            .map(|&p| meta.t0 + p as f64 / meta.fs)
            .collect();
        write_intervals_csv(
            BufWriter::new(File::create(path)?),
            &starts,
            &res.intervals_s,
        )?;
        println!("wrote {}", path.display());
    }
    println!("wrote {}", args.out.display());
    Ok(())
}

fn cmd_recon_error(args: &ReconArgs) -> Result<()> {
    let x = read_signal_csv_file(&args.reference)?;
    let y = read_signal_csv_file(&args.input)?;
    let err = reconstruction_error(&x, &y)?;
    println!("rel_l2 = {:e}, snr_db = {}", err.rel_l2, err.snr_db);
    Ok(())
}

fn cmd_render(args: &RenderArgs) -> Result<()> {
    let scale: Scale = args.scale.parse()?;
    let cmap: Colormap = args.colormap.parse()?;
    let data = read_tfr_file(&args.input)?;
    let first = data.first_bin(args.k_min)?;
    let step_hz = data.fs / data.cols as f64;
    let axes = Axes {
        t_start_s: data.t0,
        t_end_s: data.t0 + (data.cols - 1) as f64 / data.fs,
        f_low_hz: first as f64 * step_hz,
        f_high_hz: (first + data.rows - 1) as f64 * step_hz,
    };
    let mags = data.magnitudes();
    write_heatmap(
        BufWriter::new(File::create(&args.out)?),
        &mags,
        data.rows,
        data.cols,
        scale,
        cmap,
        &axes,
    )?;
    println!(
        "wrote {}: {} x {} pixels, {} scale",
        args.out.display(),
        data.cols,
        data.rows,
        args.scale
    );
    Ok(())
}
