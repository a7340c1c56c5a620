use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

/// Grayscale image with values scaled to `[0, 1]` by the file's maxval.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    /// Row-major, top row first.
    pub data: Vec<f64>,
}

fn tokens(bytes: &[u8], count: usize) -> Result<(Vec<usize>, usize)> {
    let mut out = Vec::with_capacity(count);
    let mut i = 0;
    while out.len() < count {
        while i < bytes.len() && (bytes[i].is_ascii_whitespace() || bytes[i] == b'#') {
            if bytes[i] == b'#' {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            } else {
                i += 1;
            }
        }
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        if start == i {
            return Err(Error::Pgm(format!("expected a number at byte {start}")));
        }
        let s = std::str::from_utf8(&bytes[start..i]).expect("ascii digits");
        out.push(s.parse().map_err(|_| Error::Pgm(format!("number too large: {s}")))?);
    }
    Ok((out, i))
}

/// Parses a binary (`P5`) or ASCII (`P2`) PGM with maxval at most 255.
pub fn parse_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let binary = match bytes.get(..2) {
        Some(b"P5") => true,
        Some(b"P2") => false,
        _ => return Err(Error::Pgm("missing P5/P2 magic number".into())),
    };
    let (head, pos) = tokens(&bytes[2..], 3)?;
    let (width, height, maxval) = (head[0], head[1], head[2]);
    if width == 0 || height == 0 {
        return Err(Error::Pgm(format!("empty image {width}×{height}")));
    }
    if maxval == 0 || maxval > 255 {
        return Err(Error::Pgm(format!("maxval {maxval} not in 1..=255")));
    }
    let count = width * height;
    let raw: Vec<usize> = if binary {
        let start = 2 + pos + 1;
        let body = bytes
            .get(start..start + count)
            .ok_or_else(|| Error::Pgm(format!("truncated raster, expected {count} bytes")))?;
        body.iter().map(|&b| b as usize).collect()
    } else {
        tokens(&bytes[2 + pos..], count)?.0
    };
    if let Some(v) = raw.iter().find(|&&v| v > maxval) {
        return Err(Error::Pgm(format!("sample {v} exceeds maxval {maxval}")));
    }
    Ok(GrayImage {
        width,
        height,
        data: raw.into_iter().map(|v| v as f64 / maxval as f64).collect(),
    })
}

pub fn read_pgm(path: &Path) -> Result<GrayImage> {
    let bytes = std::fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_pgm(&bytes)
}

/// Encodes as `P5`, maxval 255, mapping `[min, max]` of the data linearly onto `[0, 255]`.
/// A constant image maps to 0. Returns the bytes and the `(min, max)` used.
pub fn encode_pgm(width: usize, height: usize, data: &[f64]) -> Result<(Vec<u8>, (f64, f64))> {
    crate::error::check_len("PGM raster", width * height, data.len())?;
    let lo = data.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = data.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Pgm("raster contains non-finite values".into()));
    }
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    let span = hi - lo;
    out.extend(data.iter().map(|&v| {
        if span > 0.0 {
            ((v - lo) / span * 255.0).round().clamp(0.0, 255.0) as u8
        } else {
            0
        }
    }));
    Ok((out, (lo, hi)))
}

pub fn write_pgm(path: &Path, width: usize, height: usize, data: &[f64]) -> Result<(f64, f64)> {
    let (bytes, range) = encode_pgm(width, height, data)?;
    let mut f = std::fs::File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    f.write_all(&bytes)?;
    Ok(range)
}
