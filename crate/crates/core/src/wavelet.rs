//! Separable 2D discrete wavelet transform.
//!
//! One level filters rows, downsamples, then does the same along columns,
//! yielding LL/LH/HL/HH quarter-size subbands; `decompose` recurses on LL.
//! Odd extents are padded by edge replication before filtering and the
//! pre-split dims are recorded on each level so `reconstruct` can crop the
//! padding back off. With the default orthonormal Haar filters the round
//! trip is exact to ~1e-12 for any input size.

use crate::error::{Error, Result};
use crate::image::GrayImage;

/// Dense row-major matrix of transform coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be nonzero");
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Matrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.data[r * cols + c] = f(r, c);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.cols + c] = v;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn same_shape(&self, other: &Matrix) -> bool {
        self.rows == other.rows && self.cols == other.cols
    }

    fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    fn col(&self, c: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn from_image(img: &GrayImage) -> Self {
        Matrix {
            rows: img.height(),
            cols: img.width(),
            data: img.pixels().to_vec(),
        }
    }

    pub fn to_image(&self) -> GrayImage {
        GrayImage::new(self.cols, self.rows, self.data.clone()).expect("matrix is non-empty")
    }
}

/// Analysis filter pair of an orthonormal wavelet. Synthesis is the adjoint,
/// so no separate reconstruction taps are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletSpec {
    name: &'static str,
    lowpass: Vec<f64>,
    highpass: Vec<f64>,
}

impl WaveletSpec {
    /// Orthonormal Haar: lowpass [1/sqrt2, 1/sqrt2], highpass [1/sqrt2, -1/sqrt2].
    pub fn haar() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        WaveletSpec {
            name: "haar",
            lowpass: vec![s, s],
            highpass: vec![s, -s],
        }
    }

    pub fn name(&self) -> &'static str {
        self.name
    }
}

impl Default for WaveletSpec {
    fn default() -> Self {
        WaveletSpec::haar()
    }
}

/// The three detail subbands of one level plus the extents of the matrix the
/// level was split from (needed to crop replication padding on the way back).
#[derive(Debug, Clone, PartialEq)]
pub struct DetailLevel {
    pub lh: Matrix, // row-lowpass, column-highpass
    pub hl: Matrix, // row-highpass, column-lowpass
    pub hh: Matrix,
    parent_rows: usize,
    parent_cols: usize,
}

/// Multi-level decomposition: the coarsest approximation plus per-level
/// details, finest level first.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletPyramid {
    approx: Matrix,
    details: Vec<DetailLevel>,
}

impl WaveletPyramid {
    pub fn levels(&self) -> usize {
        self.details.len()
    }

    pub fn approx(&self) -> &Matrix {
        &self.approx
    }

    pub fn approx_mut(&mut self) -> &mut Matrix {
        &mut self.approx
    }

    pub fn detail(&self, level: usize) -> &DetailLevel {
        &self.details[level]
    }

    pub fn details(&self) -> &[DetailLevel] {
        &self.details
    }

    pub fn details_mut(&mut self) -> &mut [DetailLevel] {
        &mut self.details
    }

    /// (width, height) of the image the pyramid was built from.
    pub fn original_dims(&self) -> (usize, usize) {
        let finest = &self.details[0];
        (finest.parent_cols, finest.parent_rows)
    }

    pub fn structurally_matches(&self, other: &WaveletPyramid) -> bool {
        self.levels() == other.levels()
            && self.approx.same_shape(&other.approx)
            && self
                .details
                .iter()
                .zip(other.details.iter())
                .all(|(a, b)| {
                    a.lh.same_shape(&b.lh)
                        && a.hl.same_shape(&b.hl)
                        && a.hh.same_shape(&b.hh)
                        && a.parent_rows == b.parent_rows
                        && a.parent_cols == b.parent_cols
                })
    }
}

fn ceil_half(n: usize) -> usize {
    n.div_ceil(2)
}

/// One analysis pass over a 1D signal: returns (approx, detail), each of
/// length ceil(n/2). Odd signals are edge-replicated to even length first;
/// filters wrap periodically (a no-op for length-2 filters).
fn analyze_1d(signal: &[f64], spec: &WaveletSpec) -> (Vec<f64>, Vec<f64>) {
    debug_assert!(signal.len() >= 2);
    let mut padded;
    let s: &[f64] = if signal.len() % 2 == 0 {
        signal
    } else {
        padded = Vec::with_capacity(signal.len() + 1);
        padded.extend_from_slice(signal);
        padded.push(*signal.last().unwrap());
        &padded
    };
    let n = s.len();
    let half = n / 2;
    let mut approx = vec![0.0; half];
    let mut detail = vec![0.0; half];
    for k in 0..half {
        let mut a = 0.0;
        let mut d = 0.0;
        for (j, (&lo, &hi)) in spec.lowpass.iter().zip(spec.highpass.iter()).enumerate() {
            let x = s[(2 * k + j) % n];
            a += lo * x;
            d += hi * x;
        }
        approx[k] = a;
        detail[k] = d;
    }
    (approx, detail)
}

/// Adjoint of `analyze_1d`: rebuilds `target_len` samples (the extra padded
/// sample, if any, is dropped).
fn synthesize_1d(
    approx: &[f64],
    detail: &[f64],
    spec: &WaveletSpec,
    target_len: usize,
) -> Vec<f64> {
    debug_assert_eq!(approx.len(), detail.len());
    let n = approx.len() * 2;
    debug_assert!(target_len == n || target_len + 1 == n);
    let mut out = vec![0.0; n];
    for k in 0..approx.len() {
        for (j, (&lo, &hi)) in spec.lowpass.iter().zip(spec.highpass.iter()).enumerate() {
            out[(2 * k + j) % n] += lo * approx[k] + hi * detail[k];
        }
    }
    out.truncate(target_len);
    out
}

/// One 2D analysis level: rows first, then columns.
pub fn dwt2_level(input: &Matrix, spec: &WaveletSpec) -> Result<(Matrix, DetailLevel)> {
    if input.rows < 2 || input.cols < 2 {
        return Err(Error::TooManyLevels {
            width: input.cols,
            height: input.rows,
            levels: 1,
        });
    }
    let half_cols = ceil_half(input.cols);
    let mut low = Matrix::zeros(input.rows, half_cols);
    let mut high = Matrix::zeros(input.rows, half_cols);
    for r in 0..input.rows {
        let (a, d) = analyze_1d(input.row(r), spec);
        for c in 0..half_cols {
            low.set(r, c, a[c]);
            high.set(r, c, d[c]);
        }
    }
    let half_rows = ceil_half(input.rows);
    let mut ll = Matrix::zeros(half_rows, half_cols);
    let mut lh = Matrix::zeros(half_rows, half_cols);
    let mut hl = Matrix::zeros(half_rows, half_cols);
    let mut hh = Matrix::zeros(half_rows, half_cols);
    for c in 0..half_cols {
        let (a, d) = analyze_1d(&low.col(c), spec);
        for r in 0..half_rows {
            ll.set(r, c, a[r]);
            lh.set(r, c, d[r]);
        }
        let (a, d) = analyze_1d(&high.col(c), spec);
        for r in 0..half_rows {
            hl.set(r, c, a[r]);
            hh.set(r, c, d[r]);
        }
    }
    Ok((
        ll,
        DetailLevel {
            lh,
            hl,
            hh,
            parent_rows: input.rows,
            parent_cols: input.cols,
        },
    ))
}

/// Inverse of one 2D level: columns first, then rows.
pub fn idwt2_level(ll: &Matrix, detail: &DetailLevel, spec: &WaveletSpec) -> Result<Matrix> {
    let DetailLevel {
        lh,
        hl,
        hh,
        parent_rows,
        parent_cols,
    } = detail;
    if !ll.same_shape(lh) || !ll.same_shape(hl) || !ll.same_shape(hh) {
        return Err(Error::PyramidMismatch(
            "subband dimensions disagree within a level".into(),
        ));
    }
    if ll.rows != ceil_half(*parent_rows) || ll.cols != ceil_half(*parent_cols) {
        return Err(Error::PyramidMismatch(format!(
            "{}x{} subbands cannot rebuild a {}x{} parent",
            ll.rows, ll.cols, parent_rows, parent_cols
        )));
    }
    let mut low = Matrix::zeros(*parent_rows, ll.cols);
    let mut high = Matrix::zeros(*parent_rows, ll.cols);
    for c in 0..ll.cols {
        let lcol = synthesize_1d(&ll.col(c), &lh.col(c), spec, *parent_rows);
        let hcol = synthesize_1d(&hl.col(c), &hh.col(c), spec, *parent_rows);
        for r in 0..*parent_rows {
            low.set(r, c, lcol[r]);
            high.set(r, c, hcol[r]);
        }
    }
    let mut out = Matrix::zeros(*parent_rows, *parent_cols);
    for r in 0..*parent_rows {
        let row = synthesize_1d(low.row(r), high.row(r), spec, *parent_cols);
        for c in 0..*parent_cols {
            out.set(r, c, row[c]);
        }
    }
    Ok(out)
}

/// Full multi-level decomposition of an image.
pub fn decompose(img: &GrayImage, spec: &WaveletSpec, levels: usize) -> Result<WaveletPyramid> {
    if levels == 0 {
        return Err(Error::ZeroLevels);
    }
    let min_side = 1usize << levels;
    if img.width() < min_side || img.height() < min_side {
        return Err(Error::TooManyLevels {
            width: img.width(),
            height: img.height(),
            levels,
        });
    }
    let mut current = Matrix::from_image(img);
    let mut details = Vec::with_capacity(levels);
    for _ in 0..levels {
        let (ll, det) = dwt2_level(&current, spec)?;
        details.push(det);
        current = ll;
    }
    Ok(WaveletPyramid {
        approx: current,
        details,
    })
}

/// Invert a pyramid back to an image. Coefficients may have been replaced by
/// a fusion rule; the structure (shapes and recorded parent dims) must still
/// chain together.
pub fn reconstruct(pyramid: &WaveletPyramid, spec: &WaveletSpec) -> Result<GrayImage> {
    if pyramid.details.is_empty() {
        return Err(Error::ZeroLevels);
    }
    let mut current = pyramid.approx.clone();
    for det in pyramid.details.iter().rev() {
        current = idwt2_level(&current, det, spec)?;
    }
    Ok(current.to_image())
}
