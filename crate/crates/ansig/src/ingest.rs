//! Point-set and image ingestion: CSV point files, PGM images, and two simple
//! image-to-points extractors (intensity threshold and gradient magnitude).
//!
//! Image pixels map to complex points as col + i * (height - 1 - row), so the
//! y axis points up and extracted shapes keep their visual orientation.

use num_complex::Complex64;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use crate::error::{AnsigError, Result};
use crate::shape::PointSet;

/// Row-major grayscale grid with intensities in [0, max_val].
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub max_val: u16,
    pub values: Vec<u16>,
}

impl GrayImage {
    pub fn get(&self, row: usize, col: usize) -> u16 {
        self.values[row * self.width + col]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Dark,
    Bright,
}

fn io_err(path: &Path, e: std::io::Error) -> AnsigError {
    AnsigError::Io {
        path: path.display().to_string(),
        source: e,
    }
}

/// Reads a CSV file with one "x,y" pair per line.
pub fn read_points(path: &Path) -> Result<PointSet> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut points = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let parse = |s: &str| -> Result<f64> {
            s.trim().parse::<f64>().map_err(|_| AnsigError::Parse {
                path: path.display().to_string(),
                line: idx + 1,
                msg: format!("bad number '{}'", s.trim()),
            })
        };
        let (x, y) = line.split_once(',').ok_or_else(|| AnsigError::Parse {
            path: path.display().to_string(),
            line: idx + 1,
            msg: String::from("expected 'x,y'"),
        })?;
        points.push(Complex64::new(parse(x)?, parse(y)?));
    }
    if points.is_empty() {
        return Err(AnsigError::Parse {
            path: path.display().to_string(),
            line: 0,
            msg: String::from("empty point file"),
        });
    }
    PointSet::new(points)
}

/// Writes points as CSV with 17 significant digits, enough for an exact
/// double round-trip.
pub fn write_points(path: &Path, z: &PointSet) -> Result<()> {
    let mut out = Vec::new();
    for p in z.points() {
        writeln!(out, "{:.16e},{:.16e}", p.re, p.im).expect("in-memory write");
    }
    fs::write(path, out).map_err(|e| io_err(path, e))
}

struct PgmCursor<'a> {
    data: &'a [u8],
    pos: usize,
    path: String,
}

impl<'a> PgmCursor<'a> {
    fn error(&self, msg: impl Into<String>) -> AnsigError {
        AnsigError::Format {
            path: self.path.clone(),
            msg: format!("byte {}: {}", self.pos, msg.into()),
        }
    }

    /// Next whitespace-delimited token, skipping '#' comments.
    fn token(&mut self) -> Result<&'a [u8]> {
        loop {
            while self.pos < self.data.len() && self.data[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
            if self.pos < self.data.len() && self.data[self.pos] == b'#' {
                while self.pos < self.data.len() && self.data[self.pos] != b'\n' {
                    self.pos += 1;
                }
                continue;
            }
            break;
        }
        let start = self.pos;
        while self.pos < self.data.len() && !self.data[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("unexpected end of header"));
        }
        Ok(&self.data[start..self.pos])
    }

    fn number(&mut self) -> Result<u64> {
        let tok = self.token()?;
        std::str::from_utf8(tok)
            .ok()
            .and_then(|s| s.parse::<u64>().ok())
            .ok_or_else(|| self.error("expected a decimal number"))
    }
}

/// Parses a PGM image, either ASCII (P2) or binary (P5).
pub fn read_pgm(path: &Path) -> Result<GrayImage> {
    let data = fs::read(path).map_err(|e| io_err(path, e))?;
    let mut cur = PgmCursor {
        data: &data,
        pos: 0,
        path: path.display().to_string(),
    };
    let magic = cur.token()?;
    let binary = match magic {
        b"P2" => false,
        b"P5" => true,
        _ => return Err(cur.error("bad magic, expected P2 or P5")),
    };
    let width = cur.number()? as usize;
    let height = cur.number()? as usize;
    let max_val = cur.number()?;
    if max_val == 0 || max_val > 65535 {
        return Err(cur.error(format!("max_val {max_val} out of range 1..=65535")));
    }
    let max_val = max_val as u16;
    let count = width
        .checked_mul(height)
        .ok_or_else(|| cur.error("image dimensions overflow"))?;

    let mut values = Vec::with_capacity(count);
    if binary {
        // exactly one whitespace byte after max_val, then raw samples
        cur.pos += 1;
        let wide = max_val > 255;
        let bytes_per = if wide { 2 } else { 1 };
        if cur.data.len() < cur.pos + count * bytes_per {
            return Err(cur.error("truncated pixel data"));
        }
        for i in 0..count {
            let off = cur.pos + i * bytes_per;
            let v = if wide {
                u16::from_be_bytes([data[off], data[off + 1]])
            } else {
                data[off] as u16
            };
            values.push(v);
        }
    } else {
        for _ in 0..count {
            let v = cur.number()?;
            if v > max_val as u64 {
                return Err(cur.error(format!("sample {v} exceeds max_val {max_val}")));
            }
            values.push(v as u16);
        }
    }
    Ok(GrayImage {
        width,
        height,
        max_val,
        values,
    })
}

fn pixel_point(img: &GrayImage, row: usize, col: usize) -> Complex64 {
    Complex64::new(col as f64, (img.height - 1 - row) as f64)
}

/// Emits one point per pixel passing the intensity predicate, in row-major
/// order. May produce an empty or degenerate set; the caller validates.
pub fn threshold_points(img: &GrayImage, t: u16, polarity: Polarity) -> Vec<Complex64> {
    let mut out = Vec::new();
    for row in 0..img.height {
        for col in 0..img.width {
            let v = img.get(row, col);
            let keep = match polarity {
                Polarity::Dark => v < t,
                Polarity::Bright => v > t,
            };
            if keep {
                out.push(pixel_point(img, row, col));
            }
        }
    }
    out
}

/// Central-difference gradient magnitude on interior pixels; emits those at
/// or above the threshold.
pub fn edge_points(img: &GrayImage, t: f64) -> Result<Vec<Complex64>> {
    if img.width < 3 || img.height < 3 {
        return Err(AnsigError::ImageTooSmall {
            width: img.width,
            height: img.height,
        });
    }
    let mut out = Vec::new();
    for row in 1..img.height - 1 {
        for col in 1..img.width - 1 {
            let gx = (img.get(row, col + 1) as f64 - img.get(row, col - 1) as f64) / 2.0;
            let gy = (img.get(row + 1, col) as f64 - img.get(row - 1, col) as f64) / 2.0;
            if (gx * gx + gy * gy).sqrt() >= t {
                out.push(pixel_point(img, row, col));
            }
        }
    }
    Ok(out)
}
