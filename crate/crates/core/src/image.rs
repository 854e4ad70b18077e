//! Grayscale images, 256-bin histograms and PGM (P2/P5) I/O.
//!
//! Intensities are stored as `f64` in row-major order. Values may leave
//! [0, 255] while an image is an intermediate result (e.g. straight out of a
//! wavelet reconstruction); `quantize` rounds half-up and clamps back to the
//! 8-bit range, and everything histogram-based bins on quantized levels.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// A single-channel image with real-valued intensities.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<f64>,
}

/// Round half-up, then clamp to [0, 255]. Idempotent on its own output.
pub fn quantize_value(v: f64) -> f64 {
    (v + 0.5).floor().clamp(0.0, 255.0)
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyImage { width, height });
        }
        let expected = width * height;
        if pixels.len() != expected {
            return Err(Error::PixelCountMismatch {
                width,
                height,
                len: pixels.len(),
                expected,
            });
        }
        Ok(GrayImage {
            width,
            height,
            pixels,
        })
    }

    /// Build an image by evaluating `f(x, y)` at every pixel.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be nonzero");
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        GrayImage {
            width,
            height,
            pixels,
        }
    }

    pub fn constant(width: usize, height: usize, value: f64) -> Self {
        Self::from_fn(width, height, |_, _| value)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn pixel(&self, x: usize, y: usize) -> f64 {
        debug_assert!(x < self.width && y < self.height);
        self.pixels[y * self.width + x]
    }

    /// Round half-up and clamp every intensity to [0, 255].
    pub fn quantize(&self) -> GrayImage {
        GrayImage {
            width: self.width,
            height: self.height,
            pixels: self.pixels.iter().map(|&v| quantize_value(v)).collect(),
        }
    }

    /// Quantized intensities as integer levels, the binning used by every
    /// histogram-based quantity.
    pub fn quantized_levels(&self) -> Vec<u8> {
        self.pixels
            .iter()
            .map(|&v| quantize_value(v) as u8)
            .collect()
    }

    /// Normalized 256-bin intensity histogram.
    pub fn histogram(&self) -> Histogram {
        let mut bins = [0.0f64; 256];
        for level in self.quantized_levels() {
            bins[level as usize] += 1.0;
        }
        let n = self.pixels.len() as f64;
        for b in bins.iter_mut() {
            *b /= n;
        }
        Histogram { bins }
    }

    fn crop(&self, width: usize, height: usize) -> GrayImage {
        debug_assert!(width <= self.width && height <= self.height);
        GrayImage::from_fn(width, height, |x, y| self.pixel(x, y))
    }
}

/// Crop both images to their common top-left region (min width, min height).
/// Same-size inputs come back unchanged, so the operation is idempotent.
pub fn crop_to_common(a: &GrayImage, b: &GrayImage) -> (GrayImage, GrayImage) {
    let w = a.width.min(b.width);
    let h = a.height.min(b.height);
    (a.crop(w, h), b.crop(w, h))
}

/// Normalized intensity distribution over the 256 gray levels.
#[derive(Debug, Clone)]
pub struct Histogram {
    bins: [f64; 256],
}

impl Histogram {
    pub fn bin(&self, level: usize) -> f64 {
        self.bins[level]
    }

    pub fn bins(&self) -> &[f64; 256] {
        &self.bins
    }
}

/// Normalized joint distribution of co-located gray levels in two images.
#[derive(Debug, Clone)]
pub struct JointHistogram {
    bins: Vec<f64>, // 256 x 256, row = first image's level
}

impl JointHistogram {
    pub fn bin(&self, m: usize, n: usize) -> f64 {
        self.bins[m * 256 + n]
    }

    /// Marginal over the first image (row sums).
    pub fn marginal_rows(&self) -> [f64; 256] {
        let mut out = [0.0f64; 256];
        for m in 0..256 {
            for n in 0..256 {
                out[m] += self.bins[m * 256 + n];
            }
        }
        out
    }

    /// Marginal over the second image (column sums).
    pub fn marginal_cols(&self) -> [f64; 256] {
        let mut out = [0.0f64; 256];
        for m in 0..256 {
            for n in 0..256 {
                out[n] += self.bins[m * 256 + n];
            }
        }
        out
    }
}

/// Joint 256x256 histogram of two same-sized images.
pub fn joint_histogram(a: &GrayImage, b: &GrayImage) -> Result<JointHistogram> {
    if a.width != b.width || a.height != b.height {
        return Err(Error::DimensionMismatch(
            a.width, a.height, b.width, b.height,
        ));
    }
    let la = a.quantized_levels();
    let lb = b.quantized_levels();
    let mut bins = vec![0.0f64; 256 * 256];
    for (&m, &n) in la.iter().zip(lb.iter()) {
        bins[m as usize * 256 + n as usize] += 1.0;
    }
    let total = la.len() as f64;
    for v in bins.iter_mut() {
        *v /= total;
    }
    Ok(JointHistogram { bins })
}

/// On-disk encoding for `save_pgm`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgmFormat {
    Ascii,  // P2
    Binary, // P5
}

/// Load an 8-bit PGM (P2 or P5). Intensities are returned exactly as stored;
/// maxval is validated (<= 255) but never used for rescaling.
pub fn load_pgm(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_pgm(&bytes, path)
}

fn parse_pgm(bytes: &[u8], path: &Path) -> Result<GrayImage> {
    let mut cursor = Cursor {
        bytes,
        pos: 0,
        path: path.to_path_buf(),
    };
    let magic = cursor.token()?;
    if magic != b"P2" && magic != b"P5" {
        return Err(Error::BadMagic {
            path: cursor.path,
            found: String::from_utf8_lossy(&magic).into_owned(),
        });
    }
    let binary = magic == b"P5";
    let width = cursor.number("width")? as usize;
    let height = cursor.number("height")? as usize;
    let maxval = cursor.number("maxval")?;
    if maxval > 255 {
        return Err(Error::MaxvalTooLarge {
            path: cursor.path,
            maxval,
        });
    }
    if width == 0 || height == 0 {
        return Err(Error::EmptyImage { width, height });
    }
    let expected = width * height;
    let mut pixels = Vec::with_capacity(expected);
    if binary {
        // Exactly one whitespace byte separates the header from the payload.
        cursor.expect_single_whitespace()?;
        let available = cursor.bytes.len() - cursor.pos;
        if available < expected {
            return Err(Error::TruncatedData {
                path: cursor.path,
                expected,
                got: available,
            });
        }
        pixels.extend(
            cursor.bytes[cursor.pos..cursor.pos + expected]
                .iter()
                .map(|&b| b as f64),
        );
    } else {
        for _ in 0..expected {
            match cursor.try_number()? {
                Some(v) if v <= 255 => pixels.push(v as f64),
                Some(v) => {
                    return Err(Error::MalformedPgm {
                        path: cursor.path,
                        reason: format!("sample value {v} exceeds 255"),
                    })
                }
                None => {
                    return Err(Error::TruncatedData {
                        path: cursor.path,
                        expected,
                        got: pixels.len(),
                    })
                }
            }
        }
    }
    GrayImage::new(width, height, pixels)
}

/// Header/ASCII-body tokenizer. Comments run from '#' to end of line and may
/// appear anywhere whitespace may.
struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
    path: PathBuf,
}

impl Cursor<'_> {
    fn skip_filler(&mut self) {
        while self.pos < self.bytes.len() {
            let b = self.bytes[self.pos];
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    fn token(&mut self) -> Result<Vec<u8>> {
        self.skip_filler();
        let start = self.pos;
        while self.pos < self.bytes.len()
            && !self.bytes[self.pos].is_ascii_whitespace()
            && self.bytes[self.pos] != b'#'
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::MalformedPgm {
                path: self.path.clone(),
                reason: "unexpected end of header".into(),
            });
        }
        Ok(self.bytes[start..self.pos].to_vec())
    }

    fn number(&mut self, what: &str) -> Result<u32> {
        let tok = self.token().map_err(|_| Error::MalformedPgm {
            path: self.path.clone(),
            reason: format!("missing {what}"),
        })?;
        std::str::from_utf8(&tok)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::MalformedPgm {
                path: self.path.clone(),
                reason: format!("{what} is not a number: {:?}", String::from_utf8_lossy(&tok)),
            })
    }

    /// Like `number`, but reports exhaustion as None so the caller can count.
    fn try_number(&mut self) -> Result<Option<u32>> {
        self.skip_filler();
        if self.pos >= self.bytes.len() {
            return Ok(None);
        }
        self.number("sample").map(Some)
    }

    fn expect_single_whitespace(&mut self) -> Result<()> {
        if self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::MalformedPgm {
                path: self.path.clone(),
                reason: "missing whitespace after maxval".into(),
            })
        }
    }
}

/// Write the image as an 8-bit PGM, quantizing on the way out.
pub fn save_pgm(img: &GrayImage, path: impl AsRef<Path>, format: PgmFormat) -> Result<()> {
    let path = path.as_ref();
    let levels = img.quantized_levels();
    let mut out: Vec<u8> = Vec::with_capacity(levels.len() + 32);
    match format {
        PgmFormat::Binary => {
            write!(out, "P5\n{} {}\n255\n", img.width, img.height).expect("vec write");
            out.extend_from_slice(&levels);
        }
        PgmFormat::Ascii => {
            write!(out, "P2\n{} {}\n255\n", img.width, img.height).expect("vec write");
            for chunk in levels.chunks(15) {
                let line: Vec<String> = chunk.iter().map(|v| v.to_string()).collect();
                writeln!(out, "{}", line.join(" ")).expect("vec write");
            }
        }
    }
    fs::write(path, out).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
