//! Magnitude heatmaps as 8-bit RGB PNG: time along x, frequency up the y axis.

use std::io::Write;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Smallest magnitude, relative to the maximum, that log scaling resolves.
pub const LOG_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    /// `log10(|v|/max)` clamped at [`LOG_FLOOR`], mapped onto the full range.
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Colormap {
    Gray,
    Hot,
    Viridis,
}

impl FromStr for Scale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Scale::Linear),
            "log" => Ok(Scale::Log),
            _ => Err(Error::Argument(format!(
                "unknown scale {s:?}, expected linear or log"
            ))),
        }
    }
}

impl FromStr for Colormap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gray" => Ok(Colormap::Gray),
            "hot" => Ok(Colormap::Hot),
            "viridis" => Ok(Colormap::Viridis),
            _ => Err(Error::Argument(format!(
                "unknown colormap {s:?}, expected gray, hot or viridis"
            ))),
        }
    }
}

const VIRIDIS: [[f64; 3]; 9] = [
    [68.0, 1.0, 84.0],
    [72.0, 40.0, 120.0],
    [62.0, 74.0, 137.0],
    [49.0, 104.0, 142.0],
    [38.0, 130.0, 142.0],
    [31.0, 158.0, 137.0],
    [53.0, 183.0, 121.0],
    [109.0, 205.0, 89.0],
    [253.0, 231.0, 37.0],
];

impl Colormap {
    /// RGB for a level in `[0, 1]`.
    pub fn rgb(self, v: f64) -> [u8; 3] {
        let v = v.clamp(0.0, 1.0);
        let byte = |x: f64| (x.clamp(0.0, 1.0) * 255.0).round() as u8;
        match self {
            Colormap::Gray => [byte(v); 3],
            Colormap::Hot => [byte(3.0 * v), byte(3.0 * v - 1.0), byte(3.0 * v - 2.0)],
            Colormap::Viridis => {
                let x = v * (VIRIDIS.len() - 1) as f64;
                let i = (x.floor() as usize).min(VIRIDIS.len() - 2);
                let f = x - i as f64;
                let mix =
                    |c: usize| (VIRIDIS[i][c] * (1.0 - f) + VIRIDIS[i + 1][c] * f).round() as u8;
                [mix(0), mix(1), mix(2)]
            }
        }
    }
}

/// Axis ranges written into the image's text chunks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axes {
    pub t_start_s: f64,
    pub t_end_s: f64,
    pub f_low_hz: f64,
    pub f_high_hz: f64,
}

/// Maps magnitudes to levels in `[0, 1]`. An all-zero input maps to zeros.
pub fn levels(magnitudes: &[f64], scale: Scale) -> Vec<f64> {
    let max = magnitudes.iter().copied().fold(0.0, f64::max);
    if max <= 0.0 {
        return vec![0.0; magnitudes.len()];
    }
    let floor_db = LOG_FLOOR.log10();
    magnitudes
        .iter()
        .map(|&m| match scale {
            Scale::Linear => m / max,
            Scale::Log => 1.0 - (m / max).max(LOG_FLOOR).log10() / floor_db,
        })
        .collect()
}

/// Writes a `cols × rows` RGB PNG of a row-major magnitude matrix. Row 0 is
/// drawn at the bottom.
pub fn write_heatmap<W: Write>(
    out: W,
    magnitudes: &[f64],
    rows: usize,
    cols: usize,
    scale: Scale,
    cmap: Colormap,
    axes: &Axes,
) -> Result<()> {
    if rows == 0 || cols == 0 || magnitudes.len() != rows * cols {
        return Err(Error::Dimension(format!(
            "{} values for a {rows} x {cols} image",
            magnitudes.len()
        )));
    }
    let width = u32::try_from(cols).map_err(|_| Error::Range("image too wide".into()))?;
    let height = u32::try_from(rows).map_err(|_| Error::Range("image too tall".into()))?;
    let lv = levels(magnitudes, scale);
    let mut pixels = Vec::with_capacity(rows * cols * 3);
    for k in (0..rows).rev() {
        for v in &lv[k * cols..(k + 1) * cols] {
            pixels.extend_from_slice(&cmap.rgb(*v));
        }
    }
    let mut enc = png::Encoder::new(out, width, height);
    enc.set_color(png::ColorType::Rgb);
    enc.set_depth(png::BitDepth::Eight);
    let text = [
        (
            "x_axis",
            format!("time [s] {} .. {}", axes.t_start_s, axes.t_end_s),
        ),
        (
            "y_axis",
            format!("frequency [Hz] {} .. {}", axes.f_low_hz, axes.f_high_hz),
        ),
        (
            "scale",
            match scale {
                Scale::Linear => "linear".to_string(),
                Scale::Log => format!("log, floor {LOG_FLOOR:e} of max"),
            },
        ),
    ];
    for (key, value) in text {
        enc.add_text_chunk(key.to_string(), value)
            .map_err(png_err)?;
    }
    let mut writer = enc.write_header().map_err(png_err)?;
    writer.write_image_data(&pixels).map_err(png_err)?;
    writer.finish().map_err(png_err)?;
    Ok(())
}

fn png_err(e: png::EncodingError) -> Error {
    match e {
        png::EncodingError::IoError(io) => Error::Io(io),
        other => Error::format("PNG", other.to_string()),
    }
}
