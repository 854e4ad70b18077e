//! Mamdani fuzzy inference for pixel-level fusion.
//!
//! Two intensity inputs are fuzzified through three triangular membership
//! functions each, a small rule base fires with min/max connectives, the
//! clipped output sets are aggregated by pointwise max, and the centroid of
//! the aggregate (sampled uniformly over [0,255]) is the fused intensity.
//! If no rule fires at all, the fallback is the plain mean of the inputs.
//!
//! Systems are immutable once built: the output-side sample grid is
//! precomputed in the constructor, so `infer_pixel` and `fuse_fuzzy` are
//! pure and safe to call concurrently.

use crate::error::{Error, Result};
use crate::image::{crop_to_common, quantize_value, GrayImage};
use std::fmt;
use std::path::{Path, PathBuf};

pub const DEFAULT_RESOLUTION: usize = 1001;

/// Triangular membership over [0,255] with feet `a`, `c` and peak `b`.
/// Degenerate sides (a == b or b == c) saturate, giving shoulder shapes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MembershipFunction {
    a: f64,
    b: f64,
    c: f64,
}

impl MembershipFunction {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        let finite = a.is_finite() && b.is_finite() && c.is_finite();
        if !finite || !(a <= b && b <= c) || a < 0.0 || c > 255.0 {
            return Err(Error::InvalidFuzzySystem(format!(
                "membership params must satisfy 0 <= a <= b <= c <= 255, got ({a}, {b}, {c})"
            )));
        }
        Ok(MembershipFunction { a, b, c })
    }

    pub fn params(&self) -> (f64, f64, f64) {
        (self.a, self.b, self.c)
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x < self.b {
            if self.b == self.a {
                1.0 // saturated left side
            } else if x <= self.a {
                0.0
            } else {
                (x - self.a) / (self.b - self.a)
            }
        } else if x > self.b {
            if self.c == self.b {
                1.0 // saturated right side
            } else if x >= self.c {
                0.0
            } else {
                (self.c - x) / (self.c - self.b)
            }
        } else {
            1.0
        }
    }
}

/// An intensity variable partitioned into exactly three membership functions,
/// labeled mf1..mf3. Construction verifies the partition covers the whole
/// [0,255] axis: membership degrees must not all vanish anywhere.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyVariable {
    mfs: [MembershipFunction; 3],
}

impl FuzzyVariable {
    pub fn new(mfs: [MembershipFunction; 3]) -> Result<Self> {
        // The all-zero region of piecewise-linear MFs is bounded by MF feet,
        // so probing every foot/peak plus the midpoints between adjacent ones
        // (plus the domain ends) decides coverage exactly.
        let mut probes = vec![0.0, 255.0];
        for mf in &mfs {
            probes.extend([mf.a, mf.b, mf.c]);
        }
        probes.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let mids: Vec<f64> = probes.windows(2).map(|w| (w[0] + w[1]) / 2.0).collect();
        probes.extend(mids);
        for &x in &probes {
            if mfs.iter().all(|mf| mf.eval(x) == 0.0) {
                return Err(Error::InvalidFuzzySystem(format!(
                    "membership functions leave intensity {x} uncovered"
                )));
            }
        }
        Ok(FuzzyVariable { mfs })
    }

    /// Evenly spaced three-triangle partition: left shoulder at 0, a middle
    /// triangle peaking at 127.5, right shoulder at 255.
    pub fn standard() -> Self {
        let mfs = [
            MembershipFunction::new(0.0, 0.0, 127.5).unwrap(),
            MembershipFunction::new(0.0, 127.5, 255.0).unwrap(),
            MembershipFunction::new(127.5, 255.0, 255.0).unwrap(),
        ];
        FuzzyVariable::new(mfs).expect("standard partition covers the domain")
    }

    pub fn mf(&self, label: MfLabel) -> &MembershipFunction {
        &self.mfs[label.index()]
    }

    /// Membership degrees (μ1, μ2, μ3) of an in-domain intensity.
    pub fn fuzzify(&self, x: f64) -> Result<[f64; 3]> {
        if !(0.0..=255.0).contains(&x) {
            return Err(Error::OutOfDomain(x));
        }
        Ok([self.mfs[0].eval(x), self.mfs[1].eval(x), self.mfs[2].eval(x)])
    }
}

/// Reference to one of a variable's three membership functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MfLabel(u8);

impl MfLabel {
    pub const MF1: MfLabel = MfLabel(0);
    pub const MF2: MfLabel = MfLabel(1);
    pub const MF3: MfLabel = MfLabel(2);

    pub fn from_one_based(n: usize) -> Result<Self> {
        match n {
            1..=3 => Ok(MfLabel(n as u8 - 1)),
            _ => Err(Error::InvalidFuzzySystem(format!(
                "membership label mf{n} out of range (mf1..mf3)"
            ))),
        }
    }

    pub fn index(&self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for MfLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "mf{}", self.0 + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connective {
    And,
    Or,
}

/// "if (input1 is A) <and|or> (input2 is B) then (output is C)".
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FuzzyRule {
    pub input1: MfLabel,
    pub connective: Connective,
    pub input2: MfLabel,
    pub output: MfLabel,
}

impl FuzzyRule {
    /// Firing strength given the fuzzified degrees of both inputs:
    /// min for AND, max for OR.
    pub fn fire(&self, degrees1: &[f64; 3], degrees2: &[f64; 3]) -> f64 {
        let (d1, d2) = (degrees1[self.input1.index()], degrees2[self.input2.index()]);
        match self.connective {
            Connective::And => d1.min(d2),
            Connective::Or => d1.max(d2),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzySystem {
    input1: FuzzyVariable,
    input2: FuzzyVariable,
    output: FuzzyVariable,
    rules: Vec<FuzzyRule>,
    resolution: usize,
    // eval of each output MF at every sample point, laid out per label;
    // fixed at construction so inference never re-samples.
    output_samples: [Vec<f64>; 3],
    sample_points: Vec<f64>,
}

impl FuzzySystem {
    pub fn new(
        input1: FuzzyVariable,
        input2: FuzzyVariable,
        output: FuzzyVariable,
        rules: Vec<FuzzyRule>,
        resolution: usize,
    ) -> Result<Self> {
        if rules.is_empty() {
            return Err(Error::InvalidFuzzySystem("rule base is empty".into()));
        }
        if resolution < 2 {
            return Err(Error::InvalidFuzzySystem(format!(
                "defuzzification resolution must be at least 2, got {resolution}"
            )));
        }
        let sample_points: Vec<f64> = (0..resolution)
            .map(|k| 255.0 * k as f64 / (resolution - 1) as f64)
            .collect();
        let output_samples = [
            sample_points.iter().map(|&x| output.mfs[0].eval(x)).collect(),
            sample_points.iter().map(|&x| output.mfs[1].eval(x)).collect(),
            sample_points.iter().map(|&x| output.mfs[2].eval(x)).collect(),
        ];
        Ok(FuzzySystem {
            input1,
            input2,
            output,
            rules,
            resolution,
            output_samples,
            sample_points,
        })
    }

    pub fn input1(&self) -> &FuzzyVariable {
        &self.input1
    }

    pub fn input2(&self) -> &FuzzyVariable {
        &self.input2
    }

    pub fn output(&self) -> &FuzzyVariable {
        &self.output
    }

    pub fn rules(&self) -> &[FuzzyRule] {
        &self.rules
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    /// Same system, different defuzzification grid.
    pub fn with_resolution(&self, resolution: usize) -> Result<Self> {
        FuzzySystem::new(
            self.input1.clone(),
            self.input2.clone(),
            self.output.clone(),
            self.rules.clone(),
            resolution,
        )
    }

    /// Run the full Mamdani pipeline on one pixel pair: fuzzify, fire every
    /// rule, clip its consequent at the firing strength, aggregate by max,
    /// defuzzify by discrete centroid. Returns the mean of the inputs if the
    /// aggregate is identically zero.
    pub fn infer_pixel(&self, x1: f64, x2: f64) -> Result<f64> {
        let d1 = self.input1.fuzzify(x1)?;
        let d2 = self.input2.fuzzify(x2)?;
        let mut strengths = [0.0f64; 3]; // max-combined per output label
        for rule in &self.rules {
            let s = rule.fire(&d1, &d2);
            let slot = &mut strengths[rule.output.index()];
            if s > *slot {
                *slot = s;
            }
        }
        let mut num = 0.0;
        let mut den = 0.0;
        for (k, &x) in self.sample_points.iter().enumerate() {
            let mut mu = 0.0f64;
            for label in 0..3 {
                let s = strengths[label];
                if s > 0.0 {
                    mu = mu.max(s.min(self.output_samples[label][k]));
                }
            }
            num += x * mu;
            den += mu;
        }
        if den == 0.0 {
            return Ok((x1 + x2) / 2.0);
        }
        Ok(num / den)
    }

    /// Inference precomputed for every integer input pair.
    pub fn output_table(&self) -> Result<InferenceTable> {
        let mut values = Vec::with_capacity(256 * 256);
        for x1 in 0..256 {
            for x2 in 0..256 {
                values.push(self.infer_pixel(x1 as f64, x2 as f64)?);
            }
        }
        Ok(InferenceTable { values })
    }
}

/// The defaults: standard partitions on both inputs and the output, the
/// six-rule base, resolution 1001.
impl Default for FuzzySystem {
    fn default() -> Self {
        let rule = |i1, conn, i2, out| FuzzyRule {
            input1: MfLabel::from_one_based(i1).unwrap(),
            connective: conn,
            input2: MfLabel::from_one_based(i2).unwrap(),
            output: MfLabel::from_one_based(out).unwrap(),
        };
        let rules = vec![
            rule(1, Connective::And, 1, 1),
            rule(2, Connective::And, 1, 2),
            rule(2, Connective::And, 2, 2),
            rule(3, Connective::Or, 2, 3),
            rule(1, Connective::And, 3, 1),
            rule(3, Connective::Or, 3, 2),
        ];
        FuzzySystem::new(
            FuzzyVariable::standard(),
            FuzzyVariable::standard(),
            FuzzyVariable::standard(),
            rules,
            DEFAULT_RESOLUTION,
        )
        .expect("default system is valid")
    }
}

/// 256×256 lookup of `infer_pixel` over all integer intensity pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct InferenceTable {
    values: Vec<f64>,
}

impl InferenceTable {
    pub fn get(&self, x1: u8, x2: u8) -> f64 {
        self.values[x1 as usize * 256 + x2 as usize]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Pixelwise fuzzy fusion. Inputs are cropped to their common box and
/// quantized to integer levels, each pixel pair runs through the inference
/// table, and the result is quantized back to gray levels.
pub fn fuse_fuzzy(i1: &GrayImage, i2: &GrayImage, sys: &FuzzySystem) -> Result<GrayImage> {
    let (a, b) = crop_to_common(i1, i2);
    let table = sys.output_table()?;
    let la = a.quantized_levels();
    let lb = b.quantized_levels();
    let pixels = la
        .iter()
        .zip(lb.iter())
        .map(|(&x1, &x2)| quantize_value(table.get(x1, x2)))
        .collect();
    GrayImage::new(a.width(), a.height(), pixels)
}

// ---------------------------------------------------------------------------
// FIS config file format
//
//   resolution 1001
//
//   [input1]
//   mf1 0 0 127.5
//   mf2 0 127.5 255
//   mf3 127.5 255 255
//
//   [input2] ... [output] ...
//
//   [rules]
//   mf1 and mf1 -> mf1
//
// Blank lines and #-comments are ignored. Each variable section must define
// exactly mf1, mf2, mf3; the rules section needs at least one rule.
// ---------------------------------------------------------------------------

impl FuzzySystem {
    pub fn from_fis_str(text: &str) -> Result<Self> {
        parse_fis(text, Path::new("<fis>"))
    }

    pub fn from_fis_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        parse_fis(&text, path)
    }
}

struct FisBuilder {
    path: PathBuf,
    resolution: usize,
    vars: [Option<FuzzyVariable>; 3],
    rules: Vec<FuzzyRule>,
}

fn parse_fis(text: &str, path: &Path) -> Result<FuzzySystem> {
    const SECTIONS: [&str; 4] = ["input1", "input2", "output", "rules"];
    let err = |line: usize, reason: String| Error::FisParse {
        path: path.to_path_buf(),
        line,
        reason,
    };
    let mut b = FisBuilder {
        path: path.to_path_buf(),
        resolution: DEFAULT_RESOLUTION,
        vars: [None, None, None],
        rules: Vec::new(),
    };
    // Pending MFs of the section being read: (label, params, defining line).
    let mut section: Option<usize> = None;
    let mut pending: Vec<(usize, MembershipFunction)> = Vec::new();
    let mut section_line = 0;

    let close_section = |section: &Option<usize>,
                             pending: &mut Vec<(usize, MembershipFunction)>,
                             b: &mut FisBuilder,
                             at_line: usize|
     -> Result<()> {
        let Some(idx) = section else { return Ok(()) };
        if *idx == 3 {
            return Ok(()); // rules close implicitly
        }
        pending.sort_by_key(|(n, _)| *n);
        let labels: Vec<usize> = pending.iter().map(|(n, _)| *n).collect();
        if labels != [1, 2, 3] {
            return Err(Error::FisParse {
                path: b.path.clone(),
                line: at_line,
                reason: format!(
                    "section [{}] must define exactly mf1, mf2, mf3",
                    SECTIONS[*idx]
                ),
            });
        }
        let mfs = [pending[0].1, pending[1].1, pending[2].1];
        b.vars[*idx] = Some(FuzzyVariable::new(mfs)?);
        pending.clear();
        Ok(())
    };

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            close_section(&section, &mut pending, &mut b, section_line)?;
            let idx = SECTIONS
                .iter()
                .position(|&s| s == name)
                .ok_or_else(|| err(lineno, format!("unknown section [{name}]")))?;
            section = Some(idx);
            section_line = lineno;
            continue;
        }
        if let Some(rest) = line.strip_prefix("resolution") {
            if section.is_some() {
                return Err(err(lineno, "resolution must precede the sections".into()));
            }
            b.resolution = rest
                .trim()
                .parse()
                .map_err(|_| err(lineno, format!("bad resolution value {:?}", rest.trim())))?;
            continue;
        }
        match section {
            None => return Err(err(lineno, format!("unexpected line before sections: {line:?}"))),
            Some(3) => b.rules.push(parse_rule(line, path, lineno)?),
            Some(_) => {
                let mut parts = line.split_whitespace();
                let label = parts.next().unwrap();
                let n = parse_mf_label(label)
                    .ok_or_else(|| err(lineno, format!("expected mf1/mf2/mf3, got {label:?}")))?;
                let nums: Vec<f64> = parts
                    .map(|t| t.parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| err(lineno, format!("bad membership params in {line:?}")))?;
                if nums.len() != 3 {
                    return Err(err(
                        lineno,
                        format!("{label} needs exactly 3 params (a b c), got {}", nums.len()),
                    ));
                }
                if pending.iter().any(|(m, _)| *m == n) {
                    return Err(err(lineno, format!("duplicate definition of mf{n}")));
                }
                let mf = MembershipFunction::new(nums[0], nums[1], nums[2])
                    .map_err(|e| err(lineno, e.to_string()))?;
                pending.push((n, mf));
            }
        }
    }
    close_section(&section, &mut pending, &mut b, text.lines().count())?;

    let take = |v: &mut Option<FuzzyVariable>, name: &str| -> Result<FuzzyVariable> {
        v.take().ok_or_else(|| Error::FisParse {
            path: path.to_path_buf(),
            line: text.lines().count(),
            reason: format!("missing section [{name}]"),
        })
    };
    let mut vars = b.vars;
    let input1 = take(&mut vars[0], "input1")?;
    let input2 = take(&mut vars[1], "input2")?;
    let output = take(&mut vars[2], "output")?;
    if b.rules.is_empty() {
        return Err(Error::FisParse {
            path: path.to_path_buf(),
            line: text.lines().count(),
            reason: "missing or empty [rules] section".into(),
        });
    }
    FuzzySystem::new(input1, input2, output, b.rules, b.resolution)
}

fn parse_mf_label(tok: &str) -> Option<usize> {
    match tok {
        "mf1" => Some(1),
        "mf2" => Some(2),
        "mf3" => Some(3),
        _ => None,
    }
}

fn parse_rule(line: &str, path: &Path, lineno: usize) -> Result<FuzzyRule> {
    let err = |reason: String| Error::FisParse {
        path: path.to_path_buf(),
        line: lineno,
        reason,
    };
    let tokens: Vec<&str> = line.split_whitespace().collect();
    // "mfA <and|or> mfB -> mfC"
    if tokens.len() != 5 || tokens[3] != "->" {
        return Err(err(format!(
            "rule must read \"mfA and|or mfB -> mfC\", got {line:?}"
        )));
    }
    let label = |tok: &str| -> Result<MfLabel> {
        parse_mf_label(tok)
            .ok_or_else(|| err(format!("expected mf1/mf2/mf3, got {tok:?}")))
            .and_then(MfLabel::from_one_based)
    };
    let connective = match tokens[1] {
        "and" => Connective::And,
        "or" => Connective::Or,
        other => return Err(err(format!("expected \"and\" or \"or\", got {other:?}"))),
    };
    Ok(FuzzyRule {
        input1: label(tokens[0])?,
        connective,
        input2: label(tokens[2])?,
        output: label(tokens[4])?,
    })
}
