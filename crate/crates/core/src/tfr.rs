//! File formats: the `TFR1` binary matrix container, signal CSV, and the
//! metric CSV tables.
//!
//! `TFR1` layout, all little-endian:
//!
//! | bytes | field |
//! |-------|-------|
//! | 4 | magic `TFR1` |
//! | 4 | `u32` K (rows) |
//! | 4 | `u32` L (columns) |
//! | 8 | `f64` sample rate, Hz |
//! | 8 | `f64` start time, s |
//! | 1 | `u8` kind: 0 complex, 1 real |
//! | … | row-major `f64` values, `(re, im)` pairs for complex |
//!
//! The grid's first bin is not stored. Readers assume the grid ends at
//! Nyquist (`k_min = L/2 + 1 - K`) unless told otherwise.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{RealMatrix, SignalMeta, TfMatrix};
use crate::signal::DiscreteSignal;
use crate::wavelet::{make_scale_grid_band, WaveletSpec};

pub const MAGIC: &[u8; 4] = b"TFR1";
pub const HEADER_LEN: usize = 29;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TfrKind {
    Complex = 0,
    Real = 1,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TfrPayload {
    Complex(Vec<Complex64>),
    Real(Vec<f64>),
}

/// Contents of a `TFR1` file.
#[derive(Debug, Clone, PartialEq)]
pub struct TfrData {
    pub rows: usize,
    pub cols: usize,
    pub fs: f64,
    pub t0: f64,
    pub payload: TfrPayload,
}

impl TfrData {
    pub fn kind(&self) -> TfrKind {
        match self.payload {
            TfrPayload::Complex(_) => TfrKind::Complex,
            TfrPayload::Real(_) => TfrKind::Real,
        }
    }

    pub fn from_matrix(m: &TfMatrix) -> Self {
        let meta = m.meta();
        Self {
            rows: m.rows(),
            cols: m.cols(),
            fs: meta.fs,
            t0: meta.t0,
            payload: TfrPayload::Complex(m.as_slice().to_vec()),
        }
    }

    pub fn from_real(m: &RealMatrix, fs: f64, t0: f64) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            fs,
            t0,
            payload: TfrPayload::Real(m.as_slice().to_vec()),
        }
    }

    /// First grid bin implied by the file: `k_min` if given, else the grid
    /// is assumed to end at bin `L/2`.
    pub fn first_bin(&self, k_min: Option<usize>) -> Result<usize> {
        if self.rows == 0 {
            return Err(Error::format("TFR1 header", "field K is zero"));
        }
        match k_min {
            Some(k) => Ok(k),
            None => (self.cols / 2 + 1)
                .checked_sub(self.rows)
                .filter(|&k| k >= 1)
                .ok_or_else(|| {
                    Error::format(
                        "TFR1 header",
                        format!(
                            "K = {} rows cannot end at Nyquist for L = {}",
                            self.rows, self.cols
                        ),
                    )
                }),
        }
    }

    /// Rebuilds a complex matrix with its scale grid. Real payloads become
    /// complex values with zero imaginary part.
    pub fn into_matrix(self, spec: &WaveletSpec, k_min: Option<usize>) -> Result<TfMatrix> {
        let first = self.first_bin(k_min)?;
        let grid = make_scale_grid_band(self.cols, self.fs, spec, first, first + self.rows - 1)?;
        let meta = SignalMeta {
            len: self.cols,
            fs: self.fs,
            t0: self.t0,
        };
        let coeffs = match self.payload {
            TfrPayload::Complex(v) => v,
            TfrPayload::Real(v) => v.into_iter().map(|r| Complex64::new(r, 0.0)).collect(),
        };
        TfMatrix::from_coeffs(coeffs, grid, meta)
    }

    /// Magnitudes, row-major.
    pub fn magnitudes(&self) -> Vec<f64> {
        match &self.payload {
            TfrPayload::Complex(v) => v.iter().map(|z| z.norm()).collect(),
            TfrPayload::Real(v) => v.iter().map(|r| r.abs()).collect(),
        }
    }
}

pub fn write_tfr<W: Write>(mut w: W, data: &TfrData) -> Result<()> {
    let dim = |n: usize, what: &str| {
        u32::try_from(n).map_err(|_| Error::Range(format!("{what} = {n} does not fit in u32")))
    };
    let mut head = Vec::with_capacity(HEADER_LEN);
    head.extend_from_slice(MAGIC);
    head.extend_from_slice(&dim(data.rows, "K")?.to_le_bytes());
    head.extend_from_slice(&dim(data.cols, "L")?.to_le_bytes());
    head.extend_from_slice(&data.fs.to_le_bytes());
    head.extend_from_slice(&data.t0.to_le_bytes());
    head.push(data.kind() as u8);
    w.write_all(&head)?;
    match &data.payload {
        TfrPayload::Complex(v) => {
            for z in v {
                w.write_all(&z.re.to_le_bytes())?;
                w.write_all(&z.im.to_le_bytes())?;
            }
        }
        TfrPayload::Real(v) => {
            for r in v {
                w.write_all(&r.to_le_bytes())?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn read_exact_field<R: Read>(r: &mut R, buf: &mut [u8], field: &str) -> Result<()> {
    r.read_exact(buf).map_err(|e| match e.kind() {
        io::ErrorKind::UnexpectedEof => {
            Error::format("TFR1 header", format!("truncated at field {field}"))
        }
        _ => Error::Io(e),
    })
}

pub fn read_tfr<R: Read>(mut r: R) -> Result<TfrData> {
    let mut magic = [0u8; 4];
    read_exact_field(&mut r, &mut magic, "magic")?;
    if &magic != MAGIC {
        return Err(Error::format("TFR1 header", format!("bad magic {magic:?}")));
    }
    let mut b4 = [0u8; 4];
    let mut b8 = [0u8; 8];
    read_exact_field(&mut r, &mut b4, "K")?;
    let rows = u32::from_le_bytes(b4) as usize;
    read_exact_field(&mut r, &mut b4, "L")?;
    let cols = u32::from_le_bytes(b4) as usize;
    read_exact_field(&mut r, &mut b8, "fs")?;
    let fs = f64::from_le_bytes(b8);
    if !(fs.is_finite() && fs > 0.0) {
        return Err(Error::format(
            "TFR1 header",
            format!("field fs = {fs} is not a positive rate"),
        ));
    }
    read_exact_field(&mut r, &mut b8, "t0")?;
    let t0 = f64::from_le_bytes(b8);
    if !t0.is_finite() {
        return Err(Error::format("TFR1 header", "field t0 is not finite"));
    }
    let mut kind = [0u8; 1];
    read_exact_field(&mut r, &mut kind, "kind")?;
    let per_cell = match kind[0] {
        0 => 2,
        1 => 1,
        k => {
            return Err(Error::format(
                "TFR1 header",
                format!("field kind = {k} is not 0 or 1"),
            ))
        }
    };
    let cells = rows
        .checked_mul(cols)
        .ok_or_else(|| Error::format("TFR1 header", "fields K x L overflow"))?;
    let mut raw = Vec::new();
    r.read_to_end(&mut raw)?;
    let expected = cells * per_cell * 8;
    if raw.len() != expected {
        return Err(Error::format(
            "TFR1 data",
            format!(
                "expected {expected} bytes for {rows} x {cols}, found {}",
                raw.len()
            ),
        ));
    }
    let values: Vec<f64> = raw
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect();
    let payload = if per_cell == 2 {
        TfrPayload::Complex(
            values
                .chunks_exact(2)
                .map(|p| Complex64::new(p[0], p[1]))
                .collect(),
        )
    } else {
        TfrPayload::Real(values)
    };
    Ok(TfrData {
        rows,
        cols,
        fs,
        t0,
        payload,
    })
}

pub fn write_tfr_file(path: impl AsRef<Path>, data: &TfrData) -> Result<()> {
    write_tfr(BufWriter::new(File::create(path)?), data)
}

pub fn read_tfr_file(path: impl AsRef<Path>) -> Result<TfrData> {
    read_tfr(BufReader::new(File::open(path)?))
}

/// Writes `# fs_hz=<f> t0_s=<f>` and one sample per line; the imaginary
/// column is omitted when every sample is real.
pub fn write_signal_csv<W: Write>(mut w: W, x: &DiscreteSignal) -> Result<()> {
    writeln!(w, "# fs_hz={} t0_s={}", x.sample_rate_hz(), x.t0())?;
    let real = x.is_real();
    for z in x.samples() {
        if real {
            writeln!(w, "{}", z.re)?;
        } else {
            writeln!(w, "{},{}", z.re, z.im)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_signal_csv<R: BufRead>(r: R) -> Result<DiscreteSignal> {
    let mut lines = r.lines().enumerate();
    let header = match lines.next() {
        Some((_, line)) => line?,
        None => return Err(Error::format("signal CSV", "empty file")),
    };
    let (fs, t0) = parse_header(&header)?;
    let mut samples = Vec::new();
    for (i, line) in lines {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split(',');
        let num = |s: Option<&str>| -> Result<f64> {
            let s = s.ok_or_else(|| {
                Error::format("signal CSV", format!("line {}: missing value", i + 1))
            })?;
            s.trim().parse().map_err(|_| {
                Error::format("signal CSV", format!("line {}: cannot parse {s:?}", i + 1))
            })
        };
        let re = num(parts.next())?;
        let im = match parts.next() {
            Some(s) => num(Some(s))?,
            None => 0.0,
        };
        if parts.next().is_some() {
            return Err(Error::format(
                "signal CSV",
                format!("line {}: more than two columns", i + 1),
            ));
        }
        samples.push(Complex64::new(re, im));
    }
    DiscreteSignal::new(samples, fs, t0).map_err(|e| Error::format("signal CSV", e.to_string()))
}

fn parse_header(line: &str) -> Result<(f64, f64)> {
    let body = line
        .strip_prefix('#')
        .ok_or_else(|| Error::format("signal CSV", "first line must be `# fs_hz=<f> t0_s=<f>`"))?;
    let (mut fs, mut t0) = (None, None);
    for item in body.split_whitespace() {
        let (key, value) = item.split_once('=').ok_or_else(|| {
            Error::format(
                "signal CSV",
                format!("header item {item:?} is not key=value"),
            )
        })?;
        let v: f64 = value.parse().map_err(|_| {
            Error::format(
                "signal CSV",
                format!("header {key} = {value:?} is not a number"),
            )
        })?;
        match key {
            "fs_hz" => fs = Some(v),
            "t0_s" => t0 = Some(v),
            _ => {}
        }
    }
    let fs = fs.ok_or_else(|| Error::format("signal CSV", "header lacks fs_hz"))?;
    Ok((fs, t0.unwrap_or(0.0)))
}

pub fn write_signal_csv_file(path: impl AsRef<Path>, x: &DiscreteSignal) -> Result<()> {
    write_signal_csv(BufWriter::new(File::create(path)?), x)
}

pub fn read_signal_csv_file(path: impl AsRef<Path>) -> Result<DiscreteSignal> {
    read_signal_csv(BufReader::new(File::open(path)?))
}

/// One line of `entropy.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyRow {
    pub method: String,
    /// `None` when the noise level is unknown, written as an empty field.
    pub snr_db: Option<f64>,
    pub alpha: f64,
    pub entropy: f64,
}

pub fn write_entropy_csv<W: Write>(mut w: W, rows: &[EntropyRow]) -> Result<()> {
    writeln!(w, "method,snr_db,alpha,entropy")?;
    for r in rows {
        let snr = r.snr_db.map_or_else(String::new, |v| v.to_string());
        writeln!(w, "{},{},{},{}", r.method, snr, r.alpha, r.entropy)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_tfes_csv<W: Write>(mut w: W, row_hz: &[f64], spectrum_peak: &[f64]) -> Result<()> {
    writeln!(w, "row_hz,spectrum_peak")?;
    for (f, p) in row_hz.iter().zip(spectrum_peak) {
        writeln!(w, "{f},{p}")?;
    }
    w.flush()?;
    Ok(())
}

/// `t_start_s` is the time of the earlier peak of each pair.
pub fn write_intervals_csv<W: Write>(
    mut w: W,
    starts_s: &[f64],
    intervals_s: &[f64],
) -> Result<()> {
    writeln!(w, "t_start_s,interval_s")?;
    for (t, d) in starts_s.iter().zip(intervals_s) {
        writeln!(w, "{t},{d}")?;
    }
    w.flush()?;
    Ok(())
}
