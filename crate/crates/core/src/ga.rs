//! Real-valued genetic algorithm for estimating the two fusion weights.
//!
//! The loop is the classic one: evaluate the population, carry the elites
//! over, and refill with offspring bred by binary-tournament selection,
//! arithmetic crossover, and clamped Gaussian mutation. Runs are fully
//! deterministic per seed: a single ChaCha8 stream drives every draw and
//! evaluation happens sequentially in population order.

use crate::error::{Error, Result};
use crate::fusion::{fuse_weighted, FusionWeights};
use crate::image::GrayImage;
use crate::metrics::{entropy, fusion_factor, iqi, MetricInputs};
use crate::wavelet::{decompose, reconstruct, WaveletSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// A candidate weight pair and the fitness it scored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chromosome {
    pub w1: f64,
    pub w2: f64,
    pub fitness: f64,
}

impl Chromosome {
    /// The weights this candidate encodes. The all-zero corner would make
    /// the weighted average undefined, so it is repaired to an even split.
    pub fn weights(&self) -> FusionWeights {
        if self.w1 + self.w2 > 0.0 {
            FusionWeights::new(self.w1, self.w2).expect("genes are clamped to [0,1]")
        } else {
            FusionWeights::new(0.5, 0.5).unwrap()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    pub population_size: usize,
    pub generations: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    pub mutation_sigma: f64,
    pub elitism_count: usize,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population_size: 30,
            generations: 50,
            crossover_rate: 0.9,
            mutation_rate: 0.1,
            mutation_sigma: 0.1,
            elitism_count: 1,
            seed: 42,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidGaConfig(msg));
        if self.population_size < 2 {
            return bad(format!(
                "population_size must be at least 2, got {}",
                self.population_size
            ));
        }
        if self.generations == 0 {
            return bad("generations must be at least 1".into());
        }
        if self.elitism_count >= self.population_size {
            return bad(format!(
                "elitism_count {} must be smaller than population_size {}",
                self.elitism_count, self.population_size
            ));
        }
        for (name, rate) in [
            ("crossover_rate", self.crossover_rate),
            ("mutation_rate", self.mutation_rate),
        ] {
            if !(0.0..=1.0).contains(&rate) {
                return bad(format!("{name} must lie in [0,1], got {rate}"));
            }
        }
        if !self.mutation_sigma.is_finite() || self.mutation_sigma < 0.0 {
            return bad(format!(
                "mutation_sigma must be finite and non-negative, got {}",
                self.mutation_sigma
            ));
        }
        Ok(())
    }
}

/// Per-generation trace row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerationStats {
    pub generation: usize,
    pub best_fitness: f64,
    pub mean_fitness: f64,
    pub best_w1: f64,
    pub best_w2: f64,
}

/// Outcome of a GA run: the best individual ever evaluated plus the full
/// per-generation history.
#[derive(Debug, Clone, PartialEq)]
pub struct GaRun {
    pub best: Chromosome,
    pub history: Vec<GenerationStats>,
}

impl GaRun {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("generation,best_fitness,mean_fitness,best_w1,best_w2\n");
        for row in &self.history {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                row.generation, row.best_fitness, row.mean_fitness, row.best_w1, row.best_w2
            ));
        }
        out
    }
}

/// Maximize `fitness(w1, w2)` over [0,1]². Returns the best individual ever
/// seen and the generation trace. NaN fitness is treated as negative
/// infinity so a misbehaving objective cannot poison the ordering.
pub fn run_ga(mut fitness: impl FnMut(f64, f64) -> f64, cfg: &GaConfig) -> Result<GaRun> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let normal = Normal::new(0.0, cfg.mutation_sigma)
        .expect("sigma validated as finite and non-negative");
    let mut genes: Vec<(f64, f64)> = (0..cfg.population_size)
        .map(|_| (rng.gen::<f64>(), rng.gen::<f64>()))
        .collect();
    let mut best_ever: Option<Chromosome> = None;
    let mut history = Vec::with_capacity(cfg.generations);

    for generation in 0..cfg.generations {
        let scores: Vec<f64> = genes
            .iter()
            .map(|&(w1, w2)| {
                let f = fitness(w1, w2);
                if f.is_nan() {
                    f64::NEG_INFINITY
                } else {
                    f
                }
            })
            .collect();

        // Rank by fitness, earliest individual winning ties, so elitism and
        // the trace are deterministic.
        let mut order: Vec<usize> = (0..genes.len()).collect();
        order.sort_by(|&a, &b| scores[b].partial_cmp(&scores[a]).unwrap().then(a.cmp(&b)));
        let top = order[0];
        let gen_best = Chromosome {
            w1: genes[top].0,
            w2: genes[top].1,
            fitness: scores[top],
        };
        if best_ever.map_or(true, |b| gen_best.fitness > b.fitness) {
            best_ever = Some(gen_best);
        }
        history.push(GenerationStats {
            generation,
            best_fitness: gen_best.fitness,
            mean_fitness: scores.iter().sum::<f64>() / scores.len() as f64,
            best_w1: gen_best.w1,
            best_w2: gen_best.w2,
        });
        if generation + 1 == cfg.generations {
            break;
        }

        let tournament = |rng: &mut ChaCha8Rng| -> (f64, f64) {
            let i = rng.gen_range(0..genes.len());
            let j = rng.gen_range(0..genes.len());
            if scores[i] >= scores[j] {
                genes[i]
            } else {
                genes[j]
            }
        };
        let mut next: Vec<(f64, f64)> = order[..cfg.elitism_count]
            .iter()
            .map(|&i| genes[i])
            .collect();
        while next.len() < cfg.population_size {
            let p1 = tournament(&mut rng);
            let p2 = tournament(&mut rng);
            let (mut c1, mut c2) = if rng.gen::<f64>() < cfg.crossover_rate {
                let beta_w1 = rng.gen::<f64>();
                let beta_w2 = rng.gen::<f64>();
                (
                    (
                        beta_w1 * p1.0 + (1.0 - beta_w1) * p2.0,
                        beta_w2 * p1.1 + (1.0 - beta_w2) * p2.1,
                    ),
                    (
                        (1.0 - beta_w1) * p1.0 + beta_w1 * p2.0,
                        (1.0 - beta_w2) * p1.1 + beta_w2 * p2.1,
                    ),
                )
            } else {
                (p1, p2)
            };
            for child in [&mut c1, &mut c2] {
                for gene in [&mut child.0, &mut child.1] {
                    if rng.gen::<f64>() < cfg.mutation_rate {
                        *gene = (*gene + normal.sample(&mut rng)).clamp(0.0, 1.0);
                    }
                }
            }
            next.push(c1);
            if next.len() < cfg.population_size {
                next.push(c2);
            }
        }
        genes = next;
    }

    Ok(GaRun {
        best: best_ever.expect("at least one generation ran"),
        history,
    })
}

/// Objective the GA maximizes when fusing images.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum GaFitness<'a> {
    /// Entropy of the fused image; the no-reference default.
    #[default]
    Entropy,
    /// Fusion factor of the fused image against both inputs.
    FusionFactor,
    /// Quality index of the fused image against a ground-truth reference.
    ReferenceIqi(&'a GrayImage),
}

/// A GA-weighted fusion result.
#[derive(Debug, Clone)]
pub struct GaFusion {
    pub image: GrayImage,
    pub weights: FusionWeights,
    pub run: GaRun,
}

/// Estimate fusion weights by GA, then apply them. Both pyramids are
/// decomposed once and shared across all fitness evaluations.
pub fn fuse_ga(
    i1: &GrayImage,
    i2: &GrayImage,
    cfg: &GaConfig,
    fitness_mode: &GaFitness,
    spec: &WaveletSpec,
    levels: usize,
) -> Result<GaFusion> {
    cfg.validate()?;
    let mut w = i1.width().min(i2.width());
    let mut h = i1.height().min(i2.height());
    if let GaFitness::ReferenceIqi(r) = fitness_mode {
        w = w.min(r.width());
        h = h.min(r.height());
    }
    let crop = |img: &GrayImage| GrayImage::from_fn(w, h, |x, y| img.pixel(x, y));
    let a = crop(i1);
    let b = crop(i2);
    let reference = match fitness_mode {
        GaFitness::ReferenceIqi(r) => Some(crop(r)),
        _ => None,
    };
    let p1 = decompose(&a, spec, levels)?;
    let p2 = decompose(&b, spec, levels)?;

    let fused_for = |weights: &FusionWeights| -> Result<GrayImage> {
        let pyramid = fuse_weighted(&p1, &p2, weights)?;
        Ok(reconstruct(&pyramid, spec)?.quantize())
    };
    let run = run_ga(
        |w1, w2| {
            let candidate = Chromosome {
                w1,
                w2,
                fitness: 0.0,
            };
            let img = match fused_for(&candidate.weights()) {
                Ok(img) => img,
                Err(_) => return f64::NEG_INFINITY,
            };
            match fitness_mode {
                GaFitness::Entropy => entropy(&img),
                GaFitness::FusionFactor => fusion_factor(&MetricInputs::new(&img, &a, &b, None)),
                GaFitness::ReferenceIqi(_) => {
                    let r = reference.as_ref().expect("reference captured above");
                    iqi(r, &img).unwrap_or(f64::NEG_INFINITY)
                }
            }
        },
        cfg,
    )?;
    let weights = run.best.weights();
    Ok(GaFusion {
        image: fused_for(&weights)?,
        weights,
        run,
    })
}
