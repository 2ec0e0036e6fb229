//! 8-bit grayscale images and the Netpbm graymap (PGM) formats.
//!
//! Both binary (`P5`) and plain (`P2`) graymaps are read, with `#` comments
//! anywhere in the header. Writers always emit maxval 255 with a canonical
//! `P5\n<w> <h>\n255\n` style header.

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

#[derive(Clone, PartialEq, Eq)]
pub struct ImageMatrix {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl ImageMatrix {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Dimension(format!("image dimensions must be positive, got {width}x{height}")));
        }
        if pixels.len() != width * height {
            return Err(Error::Dimension(format!(
                "{} pixels for a {width}x{height} image",
                pixels.len()
            )));
        }
        Ok(ImageMatrix { width, height, pixels })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.width + col]
    }

    /// Rows × columns = height × width.
    pub fn to_matrix(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.height, self.width, |i, j| f64::from(self.get(i, j)))
    }

    /// Converts a pixel-valued matrix back to an image; entries are clamped
    /// and rounded first, so any real matrix is accepted.
    pub fn from_matrix(m: &DenseMatrix) -> Result<Self> {
        let pixels = m.entries().iter().map(|&v| quantize_scalar(v) as u8).collect();
        Self::new(m.n_cols(), m.n_rows(), pixels)
    }
}

impl std::fmt::Debug for ImageMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ImageMatrix({}x{})", self.width, self.height)
    }
}

/// Clamp to [0, 255] and round half away from zero.
pub(crate) fn quantize_scalar(v: f64) -> f64 {
    v.clamp(0.0, 255.0).round()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PgmFlavor {
    /// Binary raster.
    P5,
    /// ASCII raster.
    P2,
}

const P2_LINE_WIDTH: usize = 70;

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    /// Skips whitespace and `#` comments (which run to end of line).
    fn skip_separators(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_separators();
        let start = self.pos;
        let mut value: usize = 0;
        while let Some(&b) = self.bytes.get(self.pos) {
            if !b.is_ascii_digit() {
                break;
            }
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(usize::from(b - b'0')))
                .ok_or_else(|| Error::format(start, format!("{what} overflows")))?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(match self.bytes.get(start) {
                None => Error::format(start, format!("truncated: expected {what}")),
                Some(&b) => Error::format(start, format!("expected {what}, found byte {b:#04x}")),
            });
        }
        Ok(value)
    }
}

/// Parses a binary (P5) or plain (P2) graymap.
pub fn read_pgm(bytes: &[u8]) -> Result<ImageMatrix> {
    let flavor = match bytes.get(..2) {
        Some(b"P5") => PgmFlavor::P5,
        Some(b"P2") => PgmFlavor::P2,
        _ => return Err(Error::format(0, "not a PGM file (expected magic P5 or P2)")),
    };
    let mut cur = Cursor { bytes, pos: 2 };
    let width_at = cur.pos;
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    if width == 0 || height == 0 {
        return Err(Error::format(width_at, format!("image dimensions must be positive, got {width}x{height}")));
    }
    let maxval_at = cur.pos;
    let maxval = cur.number("maxval")?;
    if maxval == 0 || maxval > 255 {
        return Err(Error::format(maxval_at, format!("maxval {maxval} outside 1..=255")));
    }
    let count = width
        .checked_mul(height)
        .ok_or_else(|| Error::format(width_at, "image dimensions overflow"))?;

    let pixels = match flavor {
        PgmFlavor::P5 => {
            match bytes.get(cur.pos) {
                Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
                Some(_) => return Err(Error::format(cur.pos, "expected whitespace after maxval")),
                None => return Err(Error::format(cur.pos, "truncated: missing raster")),
            }
            let raster = bytes.get(cur.pos..cur.pos + count).ok_or_else(|| {
                Error::format(bytes.len(), format!("truncated raster: need {count} bytes, have {}", bytes.len() - cur.pos))
            })?;
            if let Some(i) = raster.iter().position(|&p| usize::from(p) > maxval) {
                return Err(Error::format(cur.pos + i, format!("sample {} exceeds maxval {maxval}", raster[i])));
            }
            raster.to_vec()
        }
        PgmFlavor::P2 => {
            let mut pixels = Vec::with_capacity(count);
            for _ in 0..count {
                let at = cur.pos;
                let v = cur.number("sample")?;
                if v > maxval {
                    return Err(Error::format(at, format!("sample {v} exceeds maxval {maxval}")));
                }
                pixels.push(v as u8);
            }
            pixels
        }
    };
    ImageMatrix::new(width, height, pixels)
}

/// Serializes with maxval 255. P2 output wraps lines at 70 characters.
pub fn write_pgm(img: &ImageMatrix, flavor: PgmFlavor) -> Vec<u8> {
    let magic = match flavor {
        PgmFlavor::P5 => "P5",
        PgmFlavor::P2 => "P2",
    };
    let mut out = format!("{magic}\n{} {}\n255\n", img.width, img.height).into_bytes();
    match flavor {
        PgmFlavor::P5 => out.extend_from_slice(&img.pixels),
        PgmFlavor::P2 => {
            for row in img.pixels.chunks(img.width) {
                let mut line = String::new();
                for p in row {
                    let token = p.to_string();
                    if !line.is_empty() && line.len() + 1 + token.len() > P2_LINE_WIDTH {
                        out.extend_from_slice(line.as_bytes());
                        out.push(b'\n');
                        line.clear();
                    }
                    if !line.is_empty() {
                        line.push(' ');
                    }
                    line.push_str(&token);
                }
                out.extend_from_slice(line.as_bytes());
                out.push(b'\n');
            }
        }
    }
    out
}

/// Headerless row-major 8-bit samples.
pub fn read_raw(bytes: &[u8], width: usize, height: usize) -> Result<ImageMatrix> {
    if width == 0 || height == 0 {
        return Err(Error::Dimension(format!("raw dimensions must be positive, got {width}x{height}")));
    }
    if bytes.len() != width * height {
        return Err(Error::Dimension(format!(
            "raw input has {} bytes, expected {width}x{height} = {}",
            bytes.len(),
            width * height
        )));
    }
    ImageMatrix::new(width, height, bytes.to_vec())
}
