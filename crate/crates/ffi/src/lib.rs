//! C ABI over `tfsqueeze`.
//!
//! Signals and transform results cross the boundary as opaque handles that
//! the caller releases with the matching `*_free` function. Every fallible
//! call returns a [`TfsStatus`]; on failure the message is kept per thread
//! and can be read with [`tfs_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::fs::File;
use std::io::BufWriter;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use tfsqueeze::gd::{IterMode, ThresholdConfig};
use tfsqueeze::pipeline::{transform, Method, TransformOutput};
use tfsqueeze::signal::{synth_dirac, DiscreteSignal};
use tfsqueeze::squeeze::reconstruct_time;
use tfsqueeze::tfr::write_tfr;
use tfsqueeze::wavelet::{make_scale_grid, make_scale_grid_band, WaveletSpec};
use tfsqueeze::{metrics, Error};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TfsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Dimension = 3,
    /// The data has no energy or power where some is required.
    Undefined = 4,
    Format = 5,
    Io = 6,
    Unsupported = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TfsMethod {
    Mwt = 0,
    Wtsst = 1,
    Wtmsst = 2,
    Rm = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TfsIterMode {
    Linear = 0,
    Exponential = 1,
}

/// Transform settings. Start from [`tfs_params_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct TfsParams {
    pub method: TfsMethod,
    pub omega0: f64,
    pub sigma: f64,
    /// First frequency bin, at least 1.
    pub k_min: usize,
    /// Last frequency bin; 0 selects every bin below Nyquist.
    pub k_max: usize,
    /// Support threshold, relative to the largest magnitude unless
    /// `threshold_absolute` is set.
    pub threshold: f64,
    pub threshold_absolute: bool,
    /// Iterations for [`TfsMethod::Wtmsst`].
    pub n_iter: usize,
    pub iter_mode: TfsIterMode,
}

/// Opaque signal handle.
pub struct TfsSignal(DiscreteSignal);

/// Opaque transform result.
pub struct TfsTransform {
    out: TransformOutput,
    spec: WaveletSpec,
    real_input: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(err: &Error) -> TfsStatus {
    match err {
        Error::Range(_) | Error::Argument(_) | Error::EmptySelection | Error::OracleGuard(_) => {
            TfsStatus::InvalidArgument
        }
        Error::Dimension(_) => TfsStatus::Dimension,
        Error::UndefinedSnr | Error::Undefined(_) => TfsStatus::Undefined,
        Error::Unsupported(_) => TfsStatus::Unsupported,
        Error::Format { .. } => TfsStatus::Format,
        Error::Io(_) => TfsStatus::Io,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (TfsStatus, String)>) -> TfsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TfsStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            TfsStatus::Panic
        }
    }
}

fn lib(err: Error) -> (TfsStatus, String) {
    (status_of(&err), err.to_string())
}

fn null(what: &str) -> (TfsStatus, String) {
    (TfsStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (TfsStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

/// Copies the calling thread's last error message into `buf` as a
/// NUL-terminated string, truncating to `cap` bytes. Returns the full
/// message length excluding the terminator.
///
/// # Safety
/// `buf` must be null or valid for `cap` bytes.
#[no_mangle]
pub unsafe extern "C" fn tfs_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && cap > 0 {
            let n = msg.len().min(cap - 1);
            ptr::copy_nonoverlapping(msg.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

#[no_mangle]
pub extern "C" fn tfs_params_default() -> TfsParams {
    let spec = WaveletSpec::default();
    TfsParams {
        method: TfsMethod::Wtsst,
        omega0: spec.omega0,
        sigma: spec.sigma,
        k_min: 1,
        k_max: 0,
        threshold: 1e-3,
        threshold_absolute: false,
        n_iter: 10,
        iter_mode: TfsIterMode::Linear,
    }
}

/// Wraps `len` real samples taken at `fs` Hz starting at time `t0`.
///
/// # Safety
/// `samples` must be valid for `len` reads and `out` for one write.
#[no_mangle]
pub unsafe extern "C" fn tfs_signal_from_real(
    samples: *const f64,
    len: usize,
    fs: f64,
    t0: f64,
    out: *mut *mut TfsSignal,
) -> TfsStatus {
    guard(|| {
        if samples.is_null() || out.is_null() {
            return Err(null("samples or out"));
        }
        let x =
            DiscreteSignal::from_real(slice::from_raw_parts(samples, len), fs, t0).map_err(lib)?;
        put(out, TfsSignal(x));
        Ok(())
    })
}

/// Unit impulse at `t0_s` seconds in a record of `len` samples.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn tfs_signal_dirac(
    t0_s: f64,
    len: usize,
    fs: f64,
    out: *mut *mut TfsSignal,
) -> TfsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        put(out, TfsSignal(synth_dirac(t0_s, len, fs).map_err(lib)?));
        Ok(())
    })
}

/// # Safety
/// `sig` must be a live handle; returns 0 for null.
#[no_mangle]
pub unsafe extern "C" fn tfs_signal_len(sig: *const TfsSignal) -> usize {
    sig.as_ref().map_or(0, |s| s.0.len())
}

/// Copies the real parts of the samples into `buf`, which must hold
/// exactly `tfs_signal_len` values.
///
/// # Safety
/// `sig` must be a live handle and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn tfs_signal_copy_real(
    sig: *const TfsSignal,
    buf: *mut f64,
    len: usize,
) -> TfsStatus {
    guard(|| {
        let s = &deref(sig, "signal")?.0;
        if buf.is_null() {
            return Err(null("buf"));
        }
        if len != s.len() {
            return Err(lib(Error::Dimension(format!(
                "buffer holds {len}, signal has {}",
                s.len()
            ))));
        }
        let dst = slice::from_raw_parts_mut(buf, len);
        for (d, z) in dst.iter_mut().zip(s.samples()) {
            *d = z.re;
        }
        Ok(())
    })
}

/// # Safety
/// `sig` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tfs_signal_free(sig: *mut TfsSignal) {
    if !sig.is_null() {
        drop(Box::from_raw(sig));
    }
}

fn method_of(p: &TfsParams) -> Method {
    match p.method {
        TfsMethod::Mwt => Method::Mwt,
        TfsMethod::Wtsst => Method::Wtsst,
        TfsMethod::Rm => Method::Rm,
        TfsMethod::Wtmsst => Method::Wtmsst {
            n: p.n_iter,
            mode: match p.iter_mode {
                TfsIterMode::Linear => IterMode::Linear,
                TfsIterMode::Exponential => IterMode::Exponential,
            },
        },
    }
}

/// Runs the transform selected by `params` on `sig`.
///
/// # Safety
/// `sig` and `params` must be valid, `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn tfs_transform(
    sig: *const TfsSignal,
    params: *const TfsParams,
    out: *mut *mut TfsTransform,
) -> TfsStatus {
    guard(|| {
        let x = &deref(sig, "signal")?.0;
        let p = deref(params, "params")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = WaveletSpec::gaussian(p.omega0, p.sigma).map_err(lib)?;
        let grid = match p.k_max {
            0 => make_scale_grid(x.len(), x.sample_rate_hz(), &spec, p.k_min),
            k_max => make_scale_grid_band(x.len(), x.sample_rate_hz(), &spec, p.k_min, k_max),
        }
        .map_err(lib)?;
        let threshold = if p.threshold_absolute {
            ThresholdConfig::Absolute(p.threshold)
        } else {
            ThresholdConfig::Relative(p.threshold)
        };
        let res = transform(x, &grid, &spec, method_of(p), threshold).map_err(lib)?;
        put(
            out,
            TfsTransform {
                out: res,
                spec,
                real_input: x.is_real(),
            },
        );
        Ok(())
    })
}

/// Rows (frequency bins) and columns (samples) of the result.
///
/// # Safety
/// `t` must be a live handle, `rows` and `cols` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn tfs_transform_dims(
    t: *const TfsTransform,
    rows: *mut usize,
    cols: *mut usize,
) -> TfsStatus {
    guard(|| {
        let m = deref(t, "transform")?.out.matrix();
        if rows.is_null() || cols.is_null() {
            return Err(null("rows or cols"));
        }
        *rows = m.rows();
        *cols = m.cols();
        Ok(())
    })
}

/// Copies the result row-major into `re` and `im`, each holding
/// `rows * cols` values. For RM the energy is in `re` and `im` is zero.
///
/// # Safety
/// `t` must be a live handle; `re` and `im` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn tfs_transform_copy(
    t: *const TfsTransform,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> TfsStatus {
    guard(|| {
        let m = deref(t, "transform")?.out.matrix();
        if re.is_null() || im.is_null() {
            return Err(null("re or im"));
        }
        let cells = m.as_slice();
        if len != cells.len() {
            return Err(lib(Error::Dimension(format!(
                "buffers hold {len}, matrix has {}",
                cells.len()
            ))));
        }
        let (re, im) = (
            slice::from_raw_parts_mut(re, len),
            slice::from_raw_parts_mut(im, len),
        );
        for ((r, i), z) in re.iter_mut().zip(im.iter_mut()).zip(cells) {
            *r = z.re;
            *i = z.im;
        }
        Ok(())
    })
}

/// Writes the result as a TFR1 file.
///
/// # Safety
/// `t` must be a live handle and `path` a NUL-terminated UTF-8 string.
#[no_mangle]
pub unsafe extern "C" fn tfs_transform_write_tfr(
    t: *const TfsTransform,
    path: *const c_char,
) -> TfsStatus {
    guard(|| {
        let t = deref(t, "transform")?;
        if path.is_null() {
            return Err(null("path"));
        }
        let path = CStr::from_ptr(path).to_str().map_err(|_| {
            (
                TfsStatus::InvalidArgument,
                "path is not valid UTF-8".to_string(),
            )
        })?;
        let data = t.out.to_tfr().map_err(lib)?;
        let file = File::create(path).map_err(|e| lib(e.into()))?;
        write_tfr(BufWriter::new(file), &data).map_err(lib)
    })
}

/// Inverts a WTSST or WTMSST result back to a time signal. Real input gives
/// a real signal.
///
/// # Safety
/// `t` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn tfs_transform_reconstruct(
    t: *const TfsTransform,
    out: *mut *mut TfsSignal,
) -> TfsStatus {
    guard(|| {
        let t = deref(t, "transform")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let s = t
            .out
            .squeezed
            .as_ref()
            .filter(|s| s.is_invertible())
            .ok_or_else(|| {
                (
                    TfsStatus::Unsupported,
                    "reconstruction needs a WTSST or WTMSST result".to_string(),
                )
            })?;
        let y = reconstruct_time(s, &t.spec).map_err(lib)?;
        put(
            out,
            TfsSignal(if t.real_input {
                y.real_from_analytic()
            } else {
                y
            }),
        );
        Ok(())
    })
}

/// Rényi entropy of order `alpha` of the result's energy distribution.
///
/// # Safety
/// `t` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn tfs_transform_renyi_entropy(
    t: *const TfsTransform,
    alpha: f64,
    out: *mut f64,
) -> TfsStatus {
    guard(|| {
        let t = deref(t, "transform")?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = metrics::renyi_entropy(t.out.matrix(), alpha).map_err(lib)?;
        Ok(())
    })
}

/// # Safety
/// `t` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tfs_transform_free(t: *mut TfsTransform) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}
