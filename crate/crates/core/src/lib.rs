//! Grayscale image fusion library.
//!
//! Fuses two registered 8-bit grayscale images and scores the result:
//!
//! * wavelet-domain fusion (max-selection, plain and weighted averaging)
//!   over a separable Haar decomposition ([`wavelet`], [`fusion`]);
//! * genetic-algorithm estimation of the averaging weights ([`ga`]);
//! * Mamdani fuzzy inference applied per pixel pair ([`fuzzy`]);
//! * quality metrics (quality index, mutual-information family, RMSE, PSNR,
//!   entropy) and report rendering ([`metrics`], [`report`]).
//!
//! Images load from and save to 8-bit PGM ([`image`]). Everything is
//! deterministic: fixed inputs and seeds reproduce outputs byte for byte.

pub mod error;
pub mod fusion;
pub mod fuzzy;
pub mod ga;
pub mod image;
pub mod metrics;
pub mod report;
pub mod wavelet;

pub use error::{Error, Result};
pub use fusion::{
    fuse_average, fuse_average_with, fuse_images, fuse_max_select, fuse_weighted,
    fuse_weighted_with, DecisionMap, DetailMasks, DetailRule, FuseMethod, FusionWeights, Mask,
};
pub use fuzzy::{
    fuse_fuzzy, Connective, FuzzyRule, FuzzySystem, FuzzyVariable, InferenceTable,
    MembershipFunction, MfLabel, DEFAULT_RESOLUTION,
};
pub use ga::{fuse_ga, run_ga, Chromosome, GaConfig, GaFitness, GaFusion, GaRun, GenerationStats};
pub use image::{
    crop_to_common, joint_histogram, load_pgm, quantize_value, save_pgm, GrayImage, Histogram,
    JointHistogram, PgmFormat,
};
pub use metrics::{
    entropy, evaluate, fusion_factor, fusion_index, fusion_symmetry, iqi, iqi_literal,
    mutual_information, psnr, psnr_from_rmse, rmse, MetricInputs, MetricValue, MetricsReport,
};
pub use report::{csv_header, render_csv_row, render_json, render_json_rows, ReportMeta};
pub use wavelet::{
    decompose, dwt2_level, idwt2_level, reconstruct, DetailLevel, Matrix, WaveletPyramid,
    WaveletSpec,
};
