//! Coefficient-domain fusion rules.
//!
//! All three rules combine two structurally identical pyramids into one:
//! max-selection (which also emits a decision map recording where each
//! coefficient came from), plain averaging, and weighted averaging. The
//! averaging rules apply to approximation coefficients; detail bands are
//! fused by largest absolute magnitude unless [`DetailRule::Blend`] is
//! requested explicitly. `fuse_images` is the end-to-end driver over images.

use crate::error::{Error, Result};
use crate::image::{crop_to_common, GrayImage};
use crate::wavelet::{decompose, reconstruct, Matrix, WaveletPyramid, WaveletSpec};

/// Binary per-coefficient selection mask: `true` means the coefficient was
/// taken from the first input.
#[derive(Debug, Clone, PartialEq)]
pub struct Mask {
    rows: usize,
    cols: usize,
    bits: Vec<bool>,
}

impl Mask {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn from_first(&self, r: usize, c: usize) -> bool {
        self.bits[r * self.cols + c]
    }

    pub fn count_first(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Render for inspection: 255 where the first input was selected, 0 where
    /// the second was.
    pub fn to_image(&self) -> GrayImage {
        GrayImage::new(
            self.cols,
            self.rows,
            self.bits.iter().map(|&b| if b { 255.0 } else { 0.0 }).collect(),
        )
        .expect("mask is non-empty")
    }

    fn same_shape_as(&self, m: &Matrix) -> bool {
        self.rows == m.rows() && self.cols == m.cols()
    }
}

/// Selection masks for the three detail bands of one level.
#[derive(Debug, Clone, PartialEq)]
pub struct DetailMasks {
    pub lh: Mask,
    pub hl: Mask,
    pub hh: Mask,
}

/// Where every fused coefficient came from, one mask per subband.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionMap {
    approx: Mask,
    levels: Vec<DetailMasks>,
}

impl DecisionMap {
    pub fn approx(&self) -> &Mask {
        &self.approx
    }

    pub fn levels(&self) -> &[DetailMasks] {
        &self.levels
    }

    /// Replay the recorded selections against the two source pyramids. By
    /// construction this reproduces the max-selection fusion exactly.
    pub fn apply(&self, p1: &WaveletPyramid, p2: &WaveletPyramid) -> Result<WaveletPyramid> {
        check_structure(p1, p2)?;
        if self.levels.len() != p1.levels() || !self.approx.same_shape_as(p1.approx()) {
            return Err(Error::PyramidMismatch(
                "decision map does not match pyramid structure".into(),
            ));
        }
        let mut fused = p1.clone();
        *fused.approx_mut() = replay(&self.approx, p1.approx(), p2.approx())?;
        for (l, masks) in self.levels.iter().enumerate() {
            let (d1, d2) = (p1.detail(l), p2.detail(l));
            let out = &mut fused.details_mut()[l];
            out.lh = replay(&masks.lh, &d1.lh, &d2.lh)?;
            out.hl = replay(&masks.hl, &d1.hl, &d2.hl)?;
            out.hh = replay(&masks.hh, &d1.hh, &d2.hh)?;
        }
        Ok(fused)
    }
}

fn replay(mask: &Mask, a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if !mask.same_shape_as(a) {
        return Err(Error::PyramidMismatch(
            "decision map subband has wrong dimensions".into(),
        ));
    }
    Ok(Matrix::from_fn(a.rows(), a.cols(), |r, c| {
        if mask.from_first(r, c) {
            a.get(r, c)
        } else {
            b.get(r, c)
        }
    }))
}

/// Non-negative weight pair with a positive sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FusionWeights {
    w1: f64,
    w2: f64,
}

impl FusionWeights {
    pub fn new(w1: f64, w2: f64) -> Result<Self> {
        let ok = w1.is_finite() && w2.is_finite() && w1 >= 0.0 && w2 >= 0.0 && w1 + w2 > 0.0;
        if !ok {
            return Err(Error::InvalidWeights(w1, w2));
        }
        Ok(FusionWeights { w1, w2 })
    }

    pub fn w1(&self) -> f64 {
        self.w1
    }

    pub fn w2(&self) -> f64 {
        self.w2
    }
}

/// How detail bands are combined under the averaging rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DetailRule {
    /// Keep the coefficient with the larger absolute value. Equal magnitudes
    /// resolve to the larger signed value (so the rule is symmetric in its
    /// inputs); exact ties come from the first input.
    #[default]
    MaxMagnitude,
    /// Apply the same (weighted) average used for the approximation band.
    Blend,
}

/// Rule selector for `fuse_images`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FuseMethod {
    MaxSelect,
    Average { details: DetailRule },
    Weighted { weights: FusionWeights, details: DetailRule },
}

fn check_structure(p1: &WaveletPyramid, p2: &WaveletPyramid) -> Result<()> {
    if !p1.structurally_matches(p2) {
        return Err(Error::PyramidMismatch(
            "pyramids differ in levels or subband dimensions".into(),
        ));
    }
    Ok(())
}

fn map2(a: &Matrix, b: &Matrix, f: impl Fn(f64, f64) -> f64) -> Matrix {
    Matrix::from_fn(a.rows(), a.cols(), |r, c| f(a.get(r, c), b.get(r, c)))
}

fn select2(a: &Matrix, b: &Matrix, take_first: impl Fn(f64, f64) -> bool) -> (Matrix, Mask) {
    let mut bits = Vec::with_capacity(a.rows() * a.cols());
    let out = Matrix::from_fn(a.rows(), a.cols(), |r, c| {
        let (x, y) = (a.get(r, c), b.get(r, c));
        let first = take_first(x, y);
        bits.push(first);
        if first {
            x
        } else {
            y
        }
    });
    (
        out,
        Mask {
            rows: a.rows(),
            cols: a.cols(),
            bits,
        },
    )
}

/// Detail selection order: larger magnitude wins; equal magnitudes resolve
/// to the larger signed value so selection commutes with swapping the
/// inputs; exact ties go to the first input. Returns true to take `x`.
fn prefer_first_by_magnitude(x: f64, y: f64) -> bool {
    if x.abs() != y.abs() {
        x.abs() > y.abs()
    } else {
        x >= y
    }
}

fn max_magnitude(a: &Matrix, b: &Matrix) -> Matrix {
    map2(a, b, |x, y| {
        if prefer_first_by_magnitude(x, y) {
            x
        } else {
            y
        }
    })
}

/// Weighted combination of approximation coefficients. Equal weights reduce
/// to the plain two-term mean so that the w1 == w2 case is bit-identical to
/// `fuse_average` and fusing a pyramid with itself is exact.
fn combine(x: f64, y: f64, w: &FusionWeights) -> f64 {
    if w.w1 == w.w2 {
        (x + y) / 2.0
    } else {
        (w.w1 * x + w.w2 * y) / (w.w1 + w.w2)
    }
}

/// Max-selection fusion: approximations by signed maximum, details by largest
/// absolute magnitude, ties from the first input. Also returns the decision
/// map recording every choice.
pub fn fuse_max_select(
    p1: &WaveletPyramid,
    p2: &WaveletPyramid,
) -> Result<(WaveletPyramid, DecisionMap)> {
    check_structure(p1, p2)?;
    let mut fused = p1.clone();
    let (approx, approx_mask) = select2(p1.approx(), p2.approx(), |x, y| x >= y);
    *fused.approx_mut() = approx;
    let mut levels = Vec::with_capacity(p1.levels());
    for l in 0..p1.levels() {
        let (d1, d2) = (p1.detail(l), p2.detail(l));
        let by_mag = prefer_first_by_magnitude;
        let (lh, lh_m) = select2(&d1.lh, &d2.lh, by_mag);
        let (hl, hl_m) = select2(&d1.hl, &d2.hl, by_mag);
        let (hh, hh_m) = select2(&d1.hh, &d2.hh, by_mag);
        let out = &mut fused.details_mut()[l];
        out.lh = lh;
        out.hl = hl;
        out.hh = hh;
        levels.push(DetailMasks {
            lh: lh_m,
            hl: hl_m,
            hh: hh_m,
        });
    }
    Ok((
        fused,
        DecisionMap {
            approx: approx_mask,
            levels,
        },
    ))
}

fn fuse_linear(
    p1: &WaveletPyramid,
    p2: &WaveletPyramid,
    w: &FusionWeights,
    rule: DetailRule,
) -> Result<WaveletPyramid> {
    check_structure(p1, p2)?;
    let mut fused = p1.clone();
    *fused.approx_mut() = map2(p1.approx(), p2.approx(), |x, y| combine(x, y, w));
    for l in 0..p1.levels() {
        let (d1, d2) = (p1.detail(l), p2.detail(l));
        let out = &mut fused.details_mut()[l];
        match rule {
            DetailRule::MaxMagnitude => {
                out.lh = max_magnitude(&d1.lh, &d2.lh);
                out.hl = max_magnitude(&d1.hl, &d2.hl);
                out.hh = max_magnitude(&d1.hh, &d2.hh);
            }
            DetailRule::Blend => {
                out.lh = map2(&d1.lh, &d2.lh, |x, y| combine(x, y, w));
                out.hl = map2(&d1.hl, &d2.hl, |x, y| combine(x, y, w));
                out.hh = map2(&d1.hh, &d2.hh, |x, y| combine(x, y, w));
            }
        }
    }
    Ok(fused)
}

/// Average the approximation bands, keep the larger-magnitude detail
/// coefficients.
pub fn fuse_average(p1: &WaveletPyramid, p2: &WaveletPyramid) -> Result<WaveletPyramid> {
    fuse_average_with(p1, p2, DetailRule::MaxMagnitude)
}

pub fn fuse_average_with(
    p1: &WaveletPyramid,
    p2: &WaveletPyramid,
    rule: DetailRule,
) -> Result<WaveletPyramid> {
    let equal = FusionWeights::new(1.0, 1.0).expect("constant weights are valid");
    fuse_linear(p1, p2, &equal, rule)
}

/// Weighted-average the approximation bands, keep the larger-magnitude detail
/// coefficients.
pub fn fuse_weighted(
    p1: &WaveletPyramid,
    p2: &WaveletPyramid,
    w: &FusionWeights,
) -> Result<WaveletPyramid> {
    fuse_weighted_with(p1, p2, w, DetailRule::MaxMagnitude)
}

pub fn fuse_weighted_with(
    p1: &WaveletPyramid,
    p2: &WaveletPyramid,
    w: &FusionWeights,
    rule: DetailRule,
) -> Result<WaveletPyramid> {
    fuse_linear(p1, p2, w, rule)
}

/// End-to-end driver: crop both images to their common top-left box,
/// decompose, fuse with the selected rule, reconstruct, quantize.
pub fn fuse_images(
    i1: &GrayImage,
    i2: &GrayImage,
    method: &FuseMethod,
    spec: &WaveletSpec,
    levels: usize,
) -> Result<(GrayImage, Option<DecisionMap>)> {
    let (a, b) = crop_to_common(i1, i2);
    let p1 = decompose(&a, spec, levels)?;
    let p2 = decompose(&b, spec, levels)?;
    let (fused, map) = match method {
        FuseMethod::MaxSelect => {
            let (p, m) = fuse_max_select(&p1, &p2)?;
            (p, Some(m))
        }
        FuseMethod::Average { details } => (fuse_average_with(&p1, &p2, *details)?, None),
        FuseMethod::Weighted { weights, details } => {
            (fuse_weighted_with(&p1, &p2, weights, *details)?, None)
        }
    };
    let img = reconstruct(&fused, spec)?;
    Ok((img.quantize(), map))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pyr(seed: u64, w: usize, h: usize, levels: usize) -> WaveletPyramid {
        // Deterministic pseudo-random content, no RNG dependency needed here.
        let img = GrayImage::from_fn(w, h, |x, y| {
            let v = x
                .wrapping_mul(2654435761)
                .wrapping_add(y.wrapping_mul(40503))
                .wrapping_add(seed as usize);
            (v % 256) as f64
        });
        decompose(&img, &WaveletSpec::haar(), levels).unwrap()
    }

    fn pyramids_equal(a: &WaveletPyramid, b: &WaveletPyramid) -> bool {
        a == b
    }

    #[test]
    fn max_select_takes_signed_max_for_approximations() {
        let p1 = {
            let mut p = pyr(1, 4, 4, 1);
            *p.approx_mut() = Matrix::from_fn(2, 2, |_, _| 5.0);
            p
        };
        let p2 = {
            let mut p = pyr(1, 4, 4, 1);
            *p.approx_mut() = Matrix::from_fn(2, 2, |_, _| 3.0);
            p
        };
        let (fused, map) = fuse_max_select(&p1, &p2).unwrap();
        assert_eq!(fused.approx().get(0, 0), 5.0);
        assert!(map.approx().from_first(0, 0));
    }

    #[test]
    fn max_select_takes_largest_magnitude_for_details() {
        let mut p1 = pyr(2, 4, 4, 1);
        let mut p2 = pyr(3, 4, 4, 1);
        p1.details_mut()[0].hh = Matrix::from_fn(2, 2, |_, _| -9.0);
        p2.details_mut()[0].hh = Matrix::from_fn(2, 2, |_, _| 4.0);
        let (fused, map) = fuse_max_select(&p1, &p2).unwrap();
        assert_eq!(fused.detail(0).hh.get(1, 1), -9.0);
        assert!(map.levels()[0].hh.from_first(1, 1));
    }

    #[test]
    fn max_select_of_equal_pyramids_is_identity_with_all_first_map() {
        let p = pyr(4, 8, 6, 2);
        let (fused, map) = fuse_max_select(&p, &p).unwrap();
        assert!(pyramids_equal(&fused, &p));
        let total = map.approx().rows() * map.approx().cols();
        assert_eq!(map.approx().count_first(), total);
        for masks in map.levels() {
            for m in [&masks.lh, &masks.hl, &masks.hh] {
                assert_eq!(m.count_first(), m.rows() * m.cols());
            }
        }
    }

    #[test]
    fn max_select_approx_matches_elementwise_oracle() {
        let p1 = pyr(5, 8, 8, 2);
        let p2 = pyr(6, 8, 8, 2);
        let (fused, _) = fuse_max_select(&p1, &p2).unwrap();
        for r in 0..fused.approx().rows() {
            for c in 0..fused.approx().cols() {
                let expect = p1.approx().get(r, c).max(p2.approx().get(r, c));
                assert_eq!(fused.approx().get(r, c), expect);
            }
        }
    }

    #[test]
    fn decision_map_replay_reproduces_fusion_exactly() {
        let p1 = pyr(7, 12, 10, 2);
        let p2 = pyr(8, 12, 10, 2);
        let (fused, map) = fuse_max_select(&p1, &p2).unwrap();
        let replayed = map.apply(&p1, &p2).unwrap();
        assert!(pyramids_equal(&replayed, &fused));
    }

    #[test]
    fn decision_map_exports_as_binary_image() {
        let p1 = pyr(9, 8, 8, 1);
        let p2 = pyr(10, 8, 8, 1);
        let (_, map) = fuse_max_select(&p1, &p2).unwrap();
        let img = map.approx().to_image();
        assert_eq!((img.width(), img.height()), (4, 4));
        assert!(img.pixels().iter().all(|&v| v == 0.0 || v == 255.0));
    }

    #[test]
    fn average_halves_the_sum_and_keeps_big_details() {
        let mut p1 = pyr(11, 4, 4, 1);
        let mut p2 = pyr(12, 4, 4, 1);
        *p1.approx_mut() = Matrix::from_fn(2, 2, |_, _| 10.0);
        *p2.approx_mut() = Matrix::from_fn(2, 2, |_, _| 20.0);
        p1.details_mut()[0].lh = Matrix::from_fn(2, 2, |_, _| 2.0);
        p2.details_mut()[0].lh = Matrix::from_fn(2, 2, |_, _| -7.0);
        let fused = fuse_average(&p1, &p2).unwrap();
        assert_eq!(fused.approx().get(0, 0), 15.0);
        assert_eq!(fused.detail(0).lh.get(0, 0), -7.0);
    }

    #[test]
    fn magnitude_ties_resolve_symmetrically() {
        // Opposite signs, equal magnitude: both orders keep the same value.
        let mut p1 = pyr(27, 4, 4, 1);
        let mut p2 = pyr(28, 4, 4, 1);
        p1.details_mut()[0].lh = Matrix::from_fn(2, 2, |_, _| -7.0);
        p2.details_mut()[0].lh = Matrix::from_fn(2, 2, |_, _| 7.0);
        let ab = fuse_average(&p1, &p2).unwrap();
        let ba = fuse_average(&p2, &p1).unwrap();
        assert_eq!(ab.detail(0).lh.get(0, 0), 7.0);
        assert_eq!(ba.detail(0).lh.get(0, 0), 7.0);
        // Exact equality still selects the first input in the decision map.
        let (_, map) = fuse_max_select(&p1, &p1).unwrap();
        assert!(map.levels()[0].lh.from_first(0, 0));
    }

    #[test]
    fn average_is_symmetric_and_idempotent() {
        let p1 = pyr(13, 10, 8, 2);
        let p2 = pyr(14, 10, 8, 2);
        assert!(pyramids_equal(
            &fuse_average(&p1, &p2).unwrap(),
            &fuse_average(&p2, &p1).unwrap()
        ));
        assert!(pyramids_equal(&fuse_average(&p1, &p1).unwrap(), &p1));
    }

    #[test]
    fn weighted_matches_hand_arithmetic() {
        let mut p1 = pyr(15, 4, 4, 1);
        let mut p2 = pyr(16, 4, 4, 1);
        *p1.approx_mut() = Matrix::from_fn(2, 2, |_, _| 8.0);
        *p2.approx_mut() = Matrix::from_fn(2, 2, |_, _| 4.0);
        let w = FusionWeights::new(3.0, 1.0).unwrap();
        let fused = fuse_weighted(&p1, &p2, &w).unwrap();
        assert_eq!(fused.approx().get(0, 0), 7.0);
    }

    #[test]
    fn weighted_degenerate_weight_returns_first_approximation() {
        let p1 = pyr(17, 8, 8, 1);
        let p2 = pyr(18, 8, 8, 1);
        let w = FusionWeights::new(1.0, 0.0).unwrap();
        let fused = fuse_weighted(&p1, &p2, &w).unwrap();
        assert_eq!(fused.approx().data(), p1.approx().data());
    }

    #[test]
    fn weighted_with_equal_weights_is_bitwise_average() {
        let p1 = pyr(19, 8, 8, 2);
        let p2 = pyr(20, 8, 8, 2);
        for w in [1.0, 0.5, 2.75] {
            let weights = FusionWeights::new(w, w).unwrap();
            assert!(pyramids_equal(
                &fuse_weighted(&p1, &p2, &weights).unwrap(),
                &fuse_average(&p1, &p2).unwrap()
            ));
        }
    }

    #[test]
    fn blend_rule_averages_details_too() {
        let mut p1 = pyr(21, 4, 4, 1);
        let mut p2 = pyr(22, 4, 4, 1);
        p1.details_mut()[0].hh = Matrix::from_fn(2, 2, |_, _| 2.0);
        p2.details_mut()[0].hh = Matrix::from_fn(2, 2, |_, _| -7.0);
        let fused = fuse_average_with(&p1, &p2, DetailRule::Blend).unwrap();
        assert_eq!(fused.detail(0).hh.get(0, 0), -2.5);
    }

    #[test]
    fn rejects_invalid_weights() {
        for (w1, w2) in [
            (-1.0, 2.0),
            (1.0, -0.1),
            (0.0, 0.0),
            (f64::NAN, 1.0),
            (1.0, f64::INFINITY),
        ] {
            assert!(matches!(
                FusionWeights::new(w1, w2),
                Err(Error::InvalidWeights(..))
            ));
        }
    }

    #[test]
    fn rejects_structural_mismatch() {
        let p1 = pyr(23, 8, 8, 1);
        let p2 = pyr(24, 8, 8, 2);
        let p3 = pyr(25, 6, 8, 1);
        assert!(matches!(
            fuse_max_select(&p1, &p2),
            Err(Error::PyramidMismatch(_))
        ));
        assert!(matches!(
            fuse_average(&p1, &p3),
            Err(Error::PyramidMismatch(_))
        ));
        let (_, map) = fuse_max_select(&p1, &pyr(26, 8, 8, 1)).unwrap();
        assert!(matches!(map.apply(&p1, &p2), Err(Error::PyramidMismatch(_))));
    }

    #[test]
    fn fuse_images_of_identical_inputs_returns_the_input() {
        let img = GrayImage::from_fn(16, 16, |x, y| ((x * 31 + y * 7) % 256) as f64);
        for method in [
            FuseMethod::MaxSelect,
            FuseMethod::Average {
                details: DetailRule::MaxMagnitude,
            },
            FuseMethod::Weighted {
                weights: FusionWeights::new(2.0, 2.0).unwrap(),
                details: DetailRule::MaxMagnitude,
            },
        ] {
            let (fused, _) = fuse_images(&img, &img, &method, &WaveletSpec::haar(), 2).unwrap();
            assert_eq!(fused.pixels(), img.pixels());
        }
    }

    #[test]
    fn fuse_images_max_select_of_black_and_white_is_white() {
        let black = GrayImage::constant(8, 8, 0.0);
        let white = GrayImage::constant(8, 8, 255.0);
        let (fused, map) =
            fuse_images(&black, &white, &FuseMethod::MaxSelect, &WaveletSpec::haar(), 1).unwrap();
        assert!(fused.pixels().iter().all(|&v| v == 255.0));
        // Approximations all come from the white image; details are ties.
        assert_eq!(map.unwrap().approx().count_first(), 0);
    }

    #[test]
    fn fuse_images_crops_mismatched_sizes() {
        let a = GrayImage::from_fn(12, 8, |x, y| (x + y) as f64);
        let b = GrayImage::from_fn(8, 10, |x, y| (x * y % 256) as f64);
        let (fused, _) = fuse_images(
            &a,
            &b,
            &FuseMethod::Average {
                details: DetailRule::MaxMagnitude,
            },
            &WaveletSpec::haar(),
            1,
        )
        .unwrap();
        assert_eq!((fused.width(), fused.height()), (8, 8));
    }
}
