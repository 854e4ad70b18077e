//! grayfuse: fuse two grayscale PGM images and report quality metrics.
//!
//! Three subcommands: `fuse` runs one fusion method and writes the fused
//! image plus a metrics report, `evaluate` scores an existing fused image,
//! and `table` runs the three headline methods on a pair and emits a
//! combined multi-row report. Every failure exits nonzero after exactly one
//! diagnostic line on stderr.

use anyhow::{anyhow, bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use grayfuse::{
    evaluate, fuse_fuzzy, fuse_ga, fuse_images, load_pgm, render_csv_row, render_json,
    render_json_rows, save_pgm, DetailRule, FuseMethod, FusionWeights, FuzzySystem, GaConfig,
    GaFitness, GrayImage, MetricInputs, MetricsReport, PgmFormat, ReportMeta, WaveletSpec,
};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "grayfuse",
    version,
    about = "Grayscale image fusion (wavelet, GA-weighted, fuzzy) with quality reports"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fuse two images and write the result with its metrics report.
    Fuse(FuseArgs),
    /// Score an already-fused image against its source pair.
    Evaluate(EvaluateArgs),
    /// Run wavelet-max, dwt-ga and fuzzy on one pair; emit a combined report.
    Table(TableArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    WaveletMax,
    DwtAvg,
    DwtWeighted,
    DwtGa,
    Fuzzy,
}

impl Method {
    fn name(&self) -> &'static str {
        match self {
            Method::WaveletMax => "wavelet-max",
            Method::DwtAvg => "dwt-avg",
            Method::DwtWeighted => "dwt-weighted",
            Method::DwtGa => "dwt-ga",
            Method::Fuzzy => "fuzzy",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FitnessArg {
    /// Maximize the entropy of the fused image (no reference needed).
    Entropy,
    /// Maximize the fusion factor against both inputs.
    Ff,
    /// Maximize the quality index against --reference.
    RefIqi,
}

#[derive(Args)]
struct FuseArgs {
    /// Fusion method to run.
    #[arg(long, value_enum)]
    method: Method,
    /// First source image (8-bit PGM).
    input_a: PathBuf,
    /// Second source image (8-bit PGM).
    input_b: PathBuf,
    /// Fused image destination (PGM). The report lands next to it.
    #[arg(short, long)]
    output: PathBuf,
    /// Wavelet decomposition depth.
    #[arg(long, default_value_t = 1)]
    levels: usize,
    /// Averaging weights "w1,w2" (dwt-weighted only).
    #[arg(long, value_parser = parse_weights)]
    weights: Option<(f64, f64)>,
    /// Fuzzy system config file (fuzzy only).
    #[arg(long)]
    fis: Option<PathBuf>,
    /// Ground-truth image for reference-based metrics.
    #[arg(long)]
    reference: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    report_format: ReportFormat,
    /// Seed for every random draw (dwt-ga).
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Average detail bands too instead of keeping the larger magnitude
    /// (averaging methods only).
    #[arg(long)]
    average_details: bool,
    /// Write the fused image as ASCII (P2) instead of binary (P5).
    #[arg(long)]
    ascii: bool,
    /// GA population size (dwt-ga only).
    #[arg(long)]
    ga_pop: Option<usize>,
    /// GA generation count (dwt-ga only).
    #[arg(long)]
    ga_generations: Option<usize>,
    /// GA crossover rate (dwt-ga only).
    #[arg(long)]
    ga_crossover: Option<f64>,
    /// GA mutation rate (dwt-ga only).
    #[arg(long)]
    ga_mutation: Option<f64>,
    /// GA mutation sigma (dwt-ga only).
    #[arg(long)]
    ga_sigma: Option<f64>,
    /// GA elite count (dwt-ga only).
    #[arg(long)]
    ga_elitism: Option<usize>,
    /// GA objective (dwt-ga only).
    #[arg(long, value_enum)]
    ga_fitness: Option<FitnessArg>,
    /// Write the GA generation trace as CSV (dwt-ga only).
    #[arg(long)]
    ga_trace: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Fused image to score (8-bit PGM).
    fused: PathBuf,
    /// First source image (8-bit PGM).
    input_a: PathBuf,
    /// Second source image (8-bit PGM).
    input_b: PathBuf,
    /// Ground-truth image for reference-based metrics.
    #[arg(long)]
    reference: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    report_format: ReportFormat,
    /// Method label to carry in the report.
    #[arg(long, default_value = "evaluate")]
    method: String,
}

#[derive(Args)]
struct TableArgs {
    /// First source image (8-bit PGM).
    input_a: PathBuf,
    /// Second source image (8-bit PGM).
    input_b: PathBuf,
    /// Wavelet decomposition depth for the wavelet-based rows.
    #[arg(long, default_value_t = 1)]
    levels: usize,
    /// Fuzzy system config file for the fuzzy row.
    #[arg(long)]
    fis: Option<PathBuf>,
    /// Ground-truth image for reference-based metrics.
    #[arg(long)]
    reference: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Csv)]
    report_format: ReportFormat,
    /// Seed for the GA row.
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

fn parse_weights(s: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected \"w1,w2\", got {s:?}"));
    }
    let parse = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| format!("{t:?} is not a number"))
    };
    Ok((parse(parts[0])?, parse(parts[1])?))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("grayfuse: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Fuse(args) => cmd_fuse(args),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Table(args) => cmd_table(args),
    }
}

/// Reject method/flag combinations before touching any file.
fn validate_fuse_flags(args: &FuseArgs) -> Result<()> {
    let m = args.method;
    if args.weights.is_some() && m != Method::DwtWeighted {
        bail!("--weights only applies to --method dwt-weighted");
    }
    if m == Method::DwtWeighted && args.weights.is_none() {
        bail!("--method dwt-weighted requires --weights w1,w2");
    }
    if args.fis.is_some() && m != Method::Fuzzy {
        bail!("--fis only applies to --method fuzzy");
    }
    let ga_flags = [
        ("--ga-pop", args.ga_pop.is_some()),
        ("--ga-generations", args.ga_generations.is_some()),
        ("--ga-crossover", args.ga_crossover.is_some()),
        ("--ga-mutation", args.ga_mutation.is_some()),
        ("--ga-sigma", args.ga_sigma.is_some()),
        ("--ga-elitism", args.ga_elitism.is_some()),
        ("--ga-fitness", args.ga_fitness.is_some()),
        ("--ga-trace", args.ga_trace.is_some()),
    ];
    if m != Method::DwtGa {
        if let Some((flag, _)) = ga_flags.iter().find(|(_, set)| *set) {
            bail!("{flag} only applies to --method dwt-ga");
        }
    }
    if args.average_details && !matches!(m, Method::DwtAvg | Method::DwtWeighted | Method::DwtGa) {
        bail!("--average-details only applies to the averaging methods (dwt-avg, dwt-weighted, dwt-ga)");
    }
    if args.ga_fitness == Some(FitnessArg::RefIqi) && args.reference.is_none() {
        bail!("--ga-fitness ref-iqi requires --reference");
    }
    Ok(())
}

fn load(path: &Path) -> Result<GrayImage> {
    Ok(load_pgm(path)?)
}

fn detail_rule(average_details: bool) -> DetailRule {
    if average_details {
        DetailRule::Blend
    } else {
        DetailRule::MaxMagnitude
    }
}

fn ga_config(args: &FuseArgs) -> GaConfig {
    let d = GaConfig::default();
    GaConfig {
        population_size: args.ga_pop.unwrap_or(d.population_size),
        generations: args.ga_generations.unwrap_or(d.generations),
        crossover_rate: args.ga_crossover.unwrap_or(d.crossover_rate),
        mutation_rate: args.ga_mutation.unwrap_or(d.mutation_rate),
        mutation_sigma: args.ga_sigma.unwrap_or(d.mutation_sigma),
        elitism_count: args.ga_elitism.unwrap_or(d.elitism_count),
        seed: args.seed,
    }
}

fn load_fis(path: Option<&Path>) -> Result<FuzzySystem> {
    match path {
        Some(p) => Ok(FuzzySystem::from_fis_file(p)?),
        None => Ok(FuzzySystem::default()),
    }
}

fn report_path(output: &Path, format: ReportFormat) -> PathBuf {
    output.with_extension(match format {
        ReportFormat::Json => "report.json",
        ReportFormat::Csv => "report.csv",
    })
}

fn render_single(format: ReportFormat, meta: &ReportMeta, report: &MetricsReport) -> String {
    match format {
        ReportFormat::Json => render_json(meta, report),
        ReportFormat::Csv => format!(
            "{}\n{}\n",
            grayfuse::csv_header(),
            render_csv_row(&meta.method, report)
        ),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| anyhow!("writing {}: {e}", path.display()))
}

fn cmd_fuse(args: FuseArgs) -> Result<()> {
    validate_fuse_flags(&args)?;
    let a = load(&args.input_a)?;
    let b = load(&args.input_b)?;
    let reference = args.reference.as_deref().map(load).transpose()?;
    let spec = WaveletSpec::haar();
    let rule = detail_rule(args.average_details);

    let mut weights_used: Option<(f64, f64)> = None;
    let fused = match args.method {
        Method::WaveletMax => fuse_images(&a, &b, &FuseMethod::MaxSelect, &spec, args.levels)?.0,
        Method::DwtAvg => {
            fuse_images(&a, &b, &FuseMethod::Average { details: rule }, &spec, args.levels)?.0
        }
        Method::DwtWeighted => {
            let (w1, w2) = args.weights.expect("validated above");
            let weights = FusionWeights::new(w1, w2)?;
            weights_used = Some((w1, w2));
            fuse_images(
                &a,
                &b,
                &FuseMethod::Weighted { weights, details: rule },
                &spec,
                args.levels,
            )?
            .0
        }
        Method::DwtGa => {
            let cfg = ga_config(&args);
            let fitness = match args.ga_fitness.unwrap_or(FitnessArg::Entropy) {
                FitnessArg::Entropy => GaFitness::Entropy,
                FitnessArg::Ff => GaFitness::FusionFactor,
                FitnessArg::RefIqi => {
                    GaFitness::ReferenceIqi(reference.as_ref().expect("validated above"))
                }
            };
            let result = fuse_ga(&a, &b, &cfg, &fitness, &spec, args.levels)?;
            if let Some(trace) = &args.ga_trace {
                write_file(trace, &result.run.to_csv())?;
            }
            weights_used = Some((result.weights.w1(), result.weights.w2()));
            result.image
        }
        Method::Fuzzy => {
            let sys = load_fis(args.fis.as_deref())?;
            fuse_fuzzy(&a, &b, &sys)?
        }
    };

    let format = if args.ascii { PgmFormat::Ascii } else { PgmFormat::Binary };
    save_pgm(&fused, &args.output, format)?;

    let inputs = MetricInputs::new(&fused, &a, &b, reference.as_ref());
    let report = evaluate(&inputs);
    let meta = ReportMeta {
        method: args.method.name().to_string(),
        input_a: args.input_a.display().to_string(),
        input_b: args.input_b.display().to_string(),
        reference: args.reference.as_ref().map(|p| p.display().to_string()),
        weights: weights_used,
    };
    let report_file = report_path(&args.output, args.report_format);
    write_file(&report_file, &render_single(args.report_format, &meta, &report))?;
    println!("{}", report_file.display());
    Ok(())
}

fn cmd_evaluate(args: EvaluateArgs) -> Result<()> {
    let fused = load(&args.fused)?;
    let a = load(&args.input_a)?;
    let b = load(&args.input_b)?;
    let reference = args.reference.as_deref().map(load).transpose()?;
    let report = evaluate(&MetricInputs::new(&fused, &a, &b, reference.as_ref()));
    let meta = ReportMeta {
        method: args.method.clone(),
        input_a: args.input_a.display().to_string(),
        input_b: args.input_b.display().to_string(),
        reference: args.reference.as_ref().map(|p| p.display().to_string()),
        weights: None,
    };
    print!("{}", render_single(args.report_format, &meta, &report));
    Ok(())
}

fn cmd_table(args: TableArgs) -> Result<()> {
    let a = load(&args.input_a)?;
    let b = load(&args.input_b)?;
    let reference = args.reference.as_deref().map(load).transpose()?;
    let sys = load_fis(args.fis.as_deref())?;
    let spec = WaveletSpec::haar();

    let wavelet = fuse_images(&a, &b, &FuseMethod::MaxSelect, &spec, args.levels)?.0;
    let cfg = GaConfig { seed: args.seed, ..GaConfig::default() };
    let ga = fuse_ga(&a, &b, &cfg, &GaFitness::Entropy, &spec, args.levels)?;
    let fuzzy = fuse_fuzzy(&a, &b, &sys)?;

    let meta = |method: &str, weights: Option<(f64, f64)>| ReportMeta {
        method: method.to_string(),
        input_a: args.input_a.display().to_string(),
        input_b: args.input_b.display().to_string(),
        reference: args.reference.as_ref().map(|p| p.display().to_string()),
        weights,
    };
    let score = |img: &GrayImage| evaluate(&MetricInputs::new(img, &a, &b, reference.as_ref()));
    let rows = vec![
        (meta("wavelet-max", None), score(&wavelet)),
        (
            meta("dwt-ga", Some((ga.weights.w1(), ga.weights.w2()))),
            score(&ga.image),
        ),
        (meta("fuzzy", None), score(&fuzzy)),
    ];

    match args.report_format {
        ReportFormat::Json => print!("{}", render_json_rows(&rows)),
        ReportFormat::Csv => {
            println!("{}", grayfuse::csv_header());
            for (meta, report) in &rows {
                println!("{}", render_csv_row(&meta.method, report));
            }
        }
    }
    Ok(())
}
