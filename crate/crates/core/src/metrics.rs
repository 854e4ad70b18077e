//! Fusion quality metrics and the composite report.
//!
//! Eight measures over 8-bit grayscale images: the universal image quality
//! index, mutual information and the fusion factor/symmetry/index family
//! built on it, RMSE, PSNR, and Shannon entropy. Every metric quantizes its
//! inputs to integer gray levels first so that histogram-based and
//! moment-based measures see the same data. `evaluate` bundles all of them
//! into a [`MetricsReport`].

use crate::error::{Error, Result};
use crate::image::{joint_histogram, GrayImage};
use serde::{Serialize, Serializer};

/// A metric outcome that may not be a finite number: PSNR of identical
/// images is infinite, and ratio metrics lose meaning when their denominator
/// vanishes. Serialized as a JSON number, `"inf"`, or `"degenerate"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MetricValue {
    Num(f64),
    PosInf,
    Degenerate,
}

impl MetricValue {
    pub fn as_num(&self) -> Option<f64> {
        match self {
            MetricValue::Num(v) => Some(*v),
            _ => None,
        }
    }
}

impl Serialize for MetricValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            MetricValue::Num(v) => s.serialize_f64(*v),
            MetricValue::PosInf => s.serialize_str("inf"),
            MetricValue::Degenerate => s.serialize_str("degenerate"),
        }
    }
}

impl std::fmt::Display for MetricValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MetricValue::Num(v) => write!(f, "{v:.4}"),
            MetricValue::PosInf => write!(f, "inf"),
            MetricValue::Degenerate => write!(f, "degenerate"),
        }
    }
}

fn check_dims(a: &GrayImage, b: &GrayImage) -> Result<()> {
    if a.width() != b.width() || a.height() != b.height() {
        return Err(Error::DimensionMismatch(
            a.width(),
            a.height(),
            b.width(),
            b.height(),
        ));
    }
    Ok(())
}

struct Moments {
    mean_a: f64,
    mean_b: f64,
    var_a: f64,
    var_b: f64,
    cov: f64,
}

/// Two-pass population statistics over quantized pixel values.
fn moments(a: &GrayImage, b: &GrayImage) -> Moments {
    let n = (a.width() * a.height()) as f64;
    let (qa, qb) = (a.quantize(), b.quantize());
    let mean_a = qa.pixels().iter().sum::<f64>() / n;
    let mean_b = qb.pixels().iter().sum::<f64>() / n;
    let (mut var_a, mut var_b, mut cov) = (0.0, 0.0, 0.0);
    for (&x, &y) in qa.pixels().iter().zip(qb.pixels().iter()) {
        let (dx, dy) = (x - mean_a, y - mean_b);
        var_a += dx * dx;
        var_b += dy * dy;
        cov += dx * dy;
    }
    Moments {
        mean_a,
        mean_b,
        var_a: var_a / n,
        var_b: var_b / n,
        cov: cov / n,
    }
}

/// Universal image quality index:
/// Q = 4·cov·mean_a·mean_b / ((var_a + var_b)·(mean_a² + mean_b²)),
/// computed globally. Ranges over [-1, 1]; equals 1 exactly for identical
/// images. Undefined when both variance and mean terms vanish (two constant
/// images).
pub fn iqi(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    check_dims(a, b)?;
    let m = moments(a, b);
    // Shared subexpressions keep iqi(a, a) at exactly 1.0: numerator and
    // denominator then round the identical product 4·cov·mean² once each.
    let num = (4.0 * m.cov) * (m.mean_a * m.mean_b);
    let den = (m.var_a + m.var_b) * (m.mean_a * m.mean_a + m.mean_b * m.mean_b);
    if den == 0.0 {
        return Err(Error::DegenerateMetric("iqi"));
    }
    Ok(num / den)
}

/// Variant index computing (cov − 2·mean_a·mean_b)/(var_a + var_b − 2·cov)
/// verbatim. The terms mix first and second moments, so the result is not
/// scale-consistent and is not 1 for identical inputs. Kept for side-by-side
/// comparison only; `evaluate` never uses it.
pub fn iqi_literal(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    check_dims(a, b)?;
    let m = moments(a, b);
    let den = m.var_a + m.var_b - 2.0 * m.cov;
    if den == 0.0 {
        return Err(Error::DegenerateMetric("iqi_literal"));
    }
    Ok((m.cov - 2.0 * m.mean_a * m.mean_b) / den)
}

/// Mutual information in bits between the gray-level distributions of two
/// images: Σ p(x,y)·log2(p(x,y)/(p(x)·p(y))) over occupied joint bins.
pub fn mutual_information(m: &GrayImage, n: &GrayImage) -> Result<f64> {
    let joint = joint_histogram(m, n)?;
    let pm = joint.marginal_rows();
    let pn = joint.marginal_cols();
    let mut mi = 0.0;
    for x in 0..256 {
        for y in 0..256 {
            let p = joint.bin(x, y);
            if p > 0.0 {
                mi += p * (p / (pm[x] * pn[y])).log2();
            }
        }
    }
    // The sum is non-negative mathematically; rounding can leave it a few
    // ulps under zero for near-independent inputs.
    Ok(mi.max(0.0))
}

/// Shannon entropy of the gray-level histogram, in bits; 0 for a constant
/// image, 8 for a uniform spread over all 256 levels.
pub fn entropy(img: &GrayImage) -> f64 {
    img.histogram()
        .bins()
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

/// Root-mean-square pixel error between two equally sized images.
pub fn rmse(reference: &GrayImage, fused: &GrayImage) -> Result<f64> {
    check_dims(reference, fused)?;
    let (qr, qf) = (reference.quantize(), fused.quantize());
    let n = (qr.width() * qr.height()) as f64;
    let sum_sq: f64 = qr
        .pixels()
        .iter()
        .zip(qf.pixels().iter())
        .map(|(&r, &f)| (r - f) * (r - f))
        .sum();
    Ok((sum_sq / n).sqrt())
}

/// PSNR in dB against a 255 peak. Infinite for identical images.
pub fn psnr(reference: &GrayImage, fused: &GrayImage) -> Result<f64> {
    Ok(psnr_from_rmse(rmse(reference, fused)?))
}

/// The RMSE-to-PSNR mapping used throughout: 20·log10(255/rmse).
pub fn psnr_from_rmse(rmse: f64) -> f64 {
    if rmse == 0.0 {
        f64::INFINITY
    } else {
        20.0 * (255.0 / rmse).log10()
    }
}

/// The images a fusion report is computed from. The constructor crops every
/// image to the common top-left box so all metric calls see equal dims.
#[derive(Debug, Clone)]
pub struct MetricInputs {
    fused: GrayImage,
    input_a: GrayImage,
    input_b: GrayImage,
    reference: Option<GrayImage>,
}

impl MetricInputs {
    pub fn new(
        fused: &GrayImage,
        input_a: &GrayImage,
        input_b: &GrayImage,
        reference: Option<&GrayImage>,
    ) -> Self {
        let mut w = fused.width().min(input_a.width()).min(input_b.width());
        let mut h = fused.height().min(input_a.height()).min(input_b.height());
        if let Some(r) = reference {
            w = w.min(r.width());
            h = h.min(r.height());
        }
        let crop = |img: &GrayImage| GrayImage::from_fn(w, h, |x, y| img.pixel(x, y));
        MetricInputs {
            fused: crop(fused),
            input_a: crop(input_a),
            input_b: crop(input_b),
            reference: reference.map(crop),
        }
    }

    pub fn fused(&self) -> &GrayImage {
        &self.fused
    }

    pub fn input_a(&self) -> &GrayImage {
        &self.input_a
    }

    pub fn input_b(&self) -> &GrayImage {
        &self.input_b
    }

    pub fn reference(&self) -> Option<&GrayImage> {
        self.reference.as_ref()
    }

    /// Image the reference-based metrics compare against, and whether it is
    /// a stand-in (input_a) rather than a supplied ground truth.
    pub fn effective_reference(&self) -> (&GrayImage, bool) {
        match &self.reference {
            Some(r) => (r, false),
            None => (&self.input_a, true),
        }
    }

    fn i_af(&self) -> f64 {
        mutual_information(&self.input_a, &self.fused).expect("inputs share dims")
    }

    fn i_bf(&self) -> f64 {
        mutual_information(&self.input_b, &self.fused).expect("inputs share dims")
    }
}

/// Total information transferred from the two sources into the fused image:
/// I(A;F) + I(B;F).
pub fn fusion_factor(inputs: &MetricInputs) -> f64 {
    inputs.i_af() + inputs.i_bf()
}

/// |I_AF/(I_AF + I_BF) − 0.5|: 0 when both sources contribute equally, 0.5
/// when one contributes nothing. Undefined when no information transferred.
pub fn fusion_symmetry(inputs: &MetricInputs) -> Result<f64> {
    let (i_af, i_bf) = (inputs.i_af(), inputs.i_bf());
    let ff = i_af + i_bf;
    if ff == 0.0 {
        return Err(Error::DegenerateMetric("fusion_symmetry"));
    }
    Ok((i_af / ff - 0.5).abs())
}

/// I_AF / I_BF. Undefined when the second source transfers no information.
pub fn fusion_index(inputs: &MetricInputs) -> Result<f64> {
    let (i_af, i_bf) = (inputs.i_af(), inputs.i_bf());
    if i_bf == 0.0 {
        return Err(Error::DegenerateMetric("fusion_index"));
    }
    Ok(i_af / i_bf)
}

/// All eight measures for one fused image. `mim` follows the reporting
/// convention of equaling `i_bf`; both underlying mutual informations are
/// carried explicitly so nothing is lost. `surrogate_reference` is set when
/// no ground truth was supplied and input_a stood in for it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub iqi: MetricValue,
    pub ff: f64,
    pub fs: MetricValue,
    pub fi: MetricValue,
    pub mim: f64,
    pub rmse: f64,
    pub psnr: MetricValue,
    pub entropy: f64,
    pub i_af: f64,
    pub i_bf: f64,
    pub surrogate_reference: bool,
}

/// Compute the full report. Degenerate metrics are carried as tagged values,
/// never silently zeroed.
pub fn evaluate(inputs: &MetricInputs) -> MetricsReport {
    let (reference, surrogate) = inputs.effective_reference();
    let iqi_value = match iqi(reference, inputs.fused()) {
        Ok(v) => MetricValue::Num(v),
        Err(_) => MetricValue::Degenerate,
    };
    let i_af = inputs.i_af();
    let i_bf = inputs.i_bf();
    let ff = i_af + i_bf;
    let fs = if ff > 0.0 {
        MetricValue::Num((i_af / ff - 0.5).abs())
    } else {
        MetricValue::Degenerate
    };
    let fi = if i_bf > 0.0 {
        MetricValue::Num(i_af / i_bf)
    } else {
        MetricValue::Degenerate
    };
    let rmse_value = rmse(reference, inputs.fused()).expect("inputs share dims");
    let psnr_value = if rmse_value == 0.0 {
        MetricValue::PosInf
    } else {
        MetricValue::Num(psnr_from_rmse(rmse_value))
    };
    MetricsReport {
        iqi: iqi_value,
        ff,
        fs,
        fi,
        mim: i_bf,
        rmse: rmse_value,
        psnr: psnr_value,
        entropy: entropy(inputs.fused()),
        i_af,
        i_bf,
        surrogate_reference: surrogate,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn img(w: usize, h: usize, f: impl FnMut(usize, usize) -> f64) -> GrayImage {
        GrayImage::from_fn(w, h, f)
    }

    fn noise(w: usize, h: usize, seed: usize) -> GrayImage {
        img(w, h, |x, y| {
            let v = x
                .wrapping_mul(2654435761)
                .wrapping_add(y.wrapping_mul(97))
                .wrapping_add(seed.wrapping_mul(7919));
            ((v >> 3) % 256) as f64
        })
    }

    // Independent scalar evaluation of the index from raw moments
    // E[a], E[b], E[a²], E[b²], E[ab].
    fn iqi_oracle(a: &[f64], b: &[f64]) -> f64 {
        let n = a.len() as f64;
        let ea = a.iter().sum::<f64>() / n;
        let eb = b.iter().sum::<f64>() / n;
        let eaa = a.iter().map(|x| x * x).sum::<f64>() / n;
        let ebb = b.iter().map(|x| x * x).sum::<f64>() / n;
        let eab = a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() / n;
        let (va, vb, cov) = (eaa - ea * ea, ebb - eb * eb, eab - ea * eb);
        4.0 * cov * ea * eb / ((va + vb) * (ea * ea + eb * eb))
    }

    #[test]
    fn iqi_of_identical_images_is_exactly_one() {
        let a = noise(8, 8, 1);
        assert_eq!(iqi(&a, &a).unwrap(), 1.0);
    }

    #[test]
    fn iqi_matches_scalar_oracle_on_small_and_random_images() {
        let a = img(2, 2, |x, y| [[1.0, 2.0], [3.0, 4.0]][y][x]);
        let b = img(2, 2, |x, y| [[4.0, 3.0], [2.0, 1.0]][y][x]);
        let got = iqi(&a, &b).unwrap();
        assert!((got - iqi_oracle(a.pixels(), b.pixels())).abs() < 1e-12);
        assert!((got - (-1.0)).abs() < 1e-12); // perfectly anti-correlated
        for seed in 0..20 {
            let a = noise(8, 8, seed);
            let b = noise(8, 8, seed + 100);
            let got = iqi(&a, &b).unwrap();
            assert!((got - iqi_oracle(a.pixels(), b.pixels())).abs() < 1e-12);
            assert!(got.abs() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn iqi_penalizes_constant_shift() {
        let a = noise(8, 8, 2);
        let b = img(8, 8, |x, y| (a.pixel(x, y) + 10.0).min(255.0));
        assert!(iqi(&a, &b).unwrap() < 1.0);
    }

    #[test]
    fn iqi_of_two_constant_images_is_degenerate() {
        let a = GrayImage::constant(4, 4, 50.0);
        let b = GrayImage::constant(4, 4, 80.0);
        assert!(matches!(iqi(&a, &b), Err(Error::DegenerateMetric("iqi"))));
    }

    #[test]
    fn iqi_rejects_dimension_mismatch() {
        let a = GrayImage::constant(4, 4, 1.0);
        let b = GrayImage::constant(4, 5, 1.0);
        assert!(matches!(iqi(&a, &b), Err(Error::DimensionMismatch(..))));
    }

    #[test]
    fn literal_index_cannot_rate_identical_images() {
        // For a == b the literal denominator var_a + var_b − 2·cov collapses
        // to zero, so the printed form has no value there at all, let alone 1.
        let a = noise(8, 8, 3);
        assert!(matches!(
            iqi_literal(&a, &a),
            Err(Error::DegenerateMetric("iqi_literal"))
        ));
        // And near-identical images score far from 1.
        let mut shifted: Vec<f64> = a.pixels().to_vec();
        shifted[0] += 1.0;
        let b = GrayImage::new(8, 8, shifted).unwrap();
        let v = iqi_literal(&a, &b).unwrap();
        assert!((v - 1.0).abs() > 0.5, "literal form gave {v}");
    }

    #[test]
    fn literal_index_matches_hand_arithmetic() {
        let a = img(2, 2, |x, y| [[0.0, 10.0], [0.0, 10.0]][y][x]);
        let b = img(2, 2, |x, y| [[0.0, 0.0], [10.0, 10.0]][y][x]);
        // means 5, 5; variances 25, 25; cov 0 → (0 − 50)/(50 − 0) = −1.
        assert!((iqi_literal(&a, &b).unwrap() - (-1.0)).abs() < 1e-12);
    }

    #[test]
    fn mi_of_image_with_itself_is_its_entropy() {
        let a = noise(16, 16, 4);
        let mi = mutual_information(&a, &a).unwrap();
        assert!((mi - entropy(&a)).abs() < 1e-12);
    }

    #[test]
    fn mi_with_constant_image_is_zero() {
        let a = noise(8, 8, 5);
        let c = GrayImage::constant(8, 8, 42.0);
        assert_eq!(mutual_information(&a, &c).unwrap(), 0.0);
    }

    #[test]
    fn mi_of_independent_pair_is_zero() {
        let m = img(2, 2, |x, y| [[0.0, 0.0], [255.0, 255.0]][y][x]);
        let n = img(2, 2, |x, y| [[0.0, 255.0], [0.0, 255.0]][y][x]);
        assert_eq!(mutual_information(&m, &n).unwrap(), 0.0);
    }

    #[test]
    fn mi_is_symmetric_and_non_negative() {
        for seed in 0..5 {
            let m = noise(8, 8, seed);
            let n = noise(8, 8, seed + 31);
            let ab = mutual_information(&m, &n).unwrap();
            let ba = mutual_information(&n, &m).unwrap();
            assert!((ab - ba).abs() < 1e-12);
            assert!(ab >= 0.0);
        }
    }

    #[test]
    fn mi_matches_brute_force_joint_bin_oracle() {
        for seed in 0..5 {
            let m = noise(8, 8, seed + 50);
            let n = noise(8, 8, seed + 90);
            // Independent recount from scratch: u64 bins, full 256×256 scan.
            let mut joint = vec![0u64; 65536];
            let mut hm = [0u64; 256];
            let mut hn = [0u64; 256];
            for (&x, &y) in m.pixels().iter().zip(n.pixels().iter()) {
                let (i, j) = (x as usize, y as usize);
                joint[i * 256 + j] += 1;
                hm[i] += 1;
                hn[j] += 1;
            }
            let total = (m.width() * m.height()) as f64;
            let mut expect = 0.0;
            for i in 0..256 {
                for j in 0..256 {
                    let c = joint[i * 256 + j];
                    if c > 0 {
                        let p = c as f64 / total;
                        let pm = hm[i] as f64 / total;
                        let pn = hn[j] as f64 / total;
                        expect += p * (p / (pm * pn)).log2();
                    }
                }
            }
            let got = mutual_information(&m, &n).unwrap();
            assert!((got - expect).abs() < 1e-10);
        }
    }

    #[test]
    fn rmse_matches_hand_arithmetic() {
        let z = GrayImage::constant(2, 2, 0.0);
        assert_eq!(rmse(&z, &z).unwrap(), 0.0);
        let f = img(2, 2, |x, y| [[3.0, 4.0], [0.0, 0.0]][y][x]);
        assert!((rmse(&z, &f).unwrap() - 2.5).abs() < 1e-12);
        let w = GrayImage::constant(2, 2, 255.0);
        assert_eq!(rmse(&z, &w).unwrap(), 255.0);
    }

    #[test]
    fn psnr_of_identical_images_is_infinite() {
        let a = noise(4, 4, 6);
        assert_eq!(psnr(&a, &a).unwrap(), f64::INFINITY);
    }

    #[test]
    fn psnr_from_rmse_matches_reference_points() {
        assert!((psnr_from_rmse(19.1999) - 22.4648).abs() < 1.5e-3);
        assert!((psnr_from_rmse(17.8385) - 23.1036).abs() < 1.5e-3);
    }

    #[test]
    fn entropy_known_values() {
        assert_eq!(entropy(&GrayImage::constant(4, 4, 7.0)), 0.0);
        let half = img(4, 4, |x, _| if x < 2 { 0.0 } else { 255.0 });
        assert!((entropy(&half) - 1.0).abs() < 1e-12);
        let uniform = img(16, 16, |x, y| (y * 16 + x) as f64);
        assert!((entropy(&uniform) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn fusion_family_on_equal_images() {
        let a = noise(8, 8, 7);
        let inputs = MetricInputs::new(&a, &a, &a, None);
        let ff = fusion_factor(&inputs);
        assert!((ff - 2.0 * entropy(&a)).abs() < 1e-12);
        assert!(fusion_symmetry(&inputs).unwrap().abs() < 1e-12);
        assert!((fusion_index(&inputs).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fusion_family_with_uninformative_second_source() {
        let a = noise(8, 8, 8);
        let b = GrayImage::constant(8, 8, 9.0);
        let inputs = MetricInputs::new(&a, &a, &b, None);
        assert!((fusion_factor(&inputs) - entropy(&a)).abs() < 1e-12);
        assert!((fusion_symmetry(&inputs).unwrap() - 0.5).abs() < 1e-12);
        assert!(matches!(
            fusion_index(&inputs),
            Err(Error::DegenerateMetric("fusion_index"))
        ));
    }

    #[test]
    fn fusion_symmetry_degenerates_when_nothing_transfers() {
        let a = noise(8, 8, 9);
        let b = noise(8, 8, 10);
        let constant = GrayImage::constant(8, 8, 33.0);
        let inputs = MetricInputs::new(&constant, &a, &b, None);
        assert!(matches!(
            fusion_symmetry(&inputs),
            Err(Error::DegenerateMetric("fusion_symmetry"))
        ));
    }

    #[test]
    fn metric_inputs_crop_to_common_box() {
        let fused = noise(10, 8, 11);
        let a = noise(8, 12, 12);
        let b = noise(9, 9, 13);
        let inputs = MetricInputs::new(&fused, &a, &b, None);
        for im in [inputs.fused(), inputs.input_a(), inputs.input_b()] {
            assert_eq!((im.width(), im.height()), (8, 8));
        }
        assert_eq!(inputs.fused().pixel(3, 2), fused.pixel(3, 2));
    }

    #[test]
    fn evaluate_on_identical_images_hits_all_identities() {
        let a = noise(8, 8, 14);
        let report = evaluate(&MetricInputs::new(&a, &a, &a, None));
        assert_eq!(report.iqi, MetricValue::Num(1.0));
        assert_eq!(report.rmse, 0.0);
        assert_eq!(report.psnr, MetricValue::PosInf);
        assert!((report.ff - 2.0 * entropy(&a)).abs() < 1e-12);
        assert_eq!(report.fs.as_num().unwrap(), 0.0);
        assert_eq!(report.fi.as_num().unwrap(), 1.0);
        assert!((report.mim - report.i_bf).abs() < 1e-15);
        assert!(report.surrogate_reference);
    }

    #[test]
    fn evaluate_report_identities_hold_on_arbitrary_inputs() {
        for seed in 0..10 {
            let fused = noise(12, 12, seed);
            let a = noise(12, 12, seed + 200);
            let b = noise(12, 12, seed + 400);
            let report = evaluate(&MetricInputs::new(&fused, &a, &b, None));
            assert!((report.ff - (report.i_af + report.i_bf)).abs() < 1e-9);
            if let (Some(fs), Some(fi)) = (report.fs.as_num(), report.fi.as_num()) {
                assert!((fs - (fi / (1.0 + fi) - 0.5).abs()).abs() < 1e-9);
            }
            if let Some(p) = report.psnr.as_num() {
                assert!((p - 20.0 * (255.0 / report.rmse).log10()).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn evaluate_uses_supplied_reference() {
        let a = noise(8, 8, 15);
        let b = noise(8, 8, 16);
        let fused = noise(8, 8, 17);
        let reference = noise(8, 8, 18);
        let with_ref = evaluate(&MetricInputs::new(&fused, &a, &b, Some(&reference)));
        let without = evaluate(&MetricInputs::new(&fused, &a, &b, None));
        assert!(!with_ref.surrogate_reference);
        assert!((with_ref.rmse - rmse(&reference, &fused).unwrap()).abs() < 1e-12);
        assert!((without.rmse - rmse(&a, &fused).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn metric_value_formats_for_csv_cells() {
        assert_eq!(MetricValue::Num(1.0).to_string(), "1.0000");
        assert_eq!(MetricValue::Num(22.46484).to_string(), "22.4648");
        assert_eq!(MetricValue::PosInf.to_string(), "inf");
        assert_eq!(MetricValue::Degenerate.to_string(), "degenerate");
    }

    #[test]
    fn metric_value_serializes_as_number_or_tag() {
        let num = serde_json::to_string(&MetricValue::Num(2.5)).unwrap();
        assert_eq!(num, "2.5");
        assert_eq!(
            serde_json::to_string(&MetricValue::PosInf).unwrap(),
            "\"inf\""
        );
        assert_eq!(
            serde_json::to_string(&MetricValue::Degenerate).unwrap(),
            "\"degenerate\""
        );
    }
}
