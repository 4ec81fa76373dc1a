//! `closet` command line: train, classify, edges, features, genfix.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::classify::{classify, RECORD_HEADER};
use crate::config::{
    PipelineConfig, BORDER_MARGIN, PHOTO_SIGMA, ROI_HALF_WIDTH, ROI_ROWS, TEMPLATE_SIGMA, WHITE_THRESHOLD,
};
use crate::error::{Error, Result};
use crate::features::{extract_features, leftmost_edge, CharacteristicCurve};
use crate::fixtures::generate_seeded;
use crate::fuzzy::DEFAULT_RESOLUTION;
use crate::labels::{ClothingClass, ImageKind};
use crate::pipeline::edge_stage;
use crate::raster::load_and_gray;
use crate::training::{extract_training_features, load_manifest, load_model, save_model, train_from_report, REPORT_HEADER};

#[derive(Debug, Parser)]
#[command(name = "closet", version, about = "Fuzzy-logic clothing classifier (shirt, dress, pants)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train a model from a manifest of `path label kind` lines.
    Train {
        manifest: PathBuf,
        /// Where to write the model file.
        #[arg(short, long)]
        out: PathBuf,
        /// Also write the per-image feature report here.
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        config: CliConfig,
    },
    /// Classify images with a trained model.
    Classify {
        model: PathBuf,
        #[arg(required = true)]
        images: Vec<PathBuf>,
        #[arg(long, default_value = "photo")]
        kind: ImageKind,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Write the border-whitened edge map as an 8-bit PNG.
    Edges {
        image: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        #[arg(long, default_value = "photo")]
        kind: ImageKind,
        #[command(flatten)]
        config: CliConfig,
    },
    /// Dump the ROI outline curves and the feature vector.
    Features {
        image: PathBuf,
        /// Output file; standard output when absent.
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "photo")]
        kind: ImageKind,
        #[command(flatten)]
        config: CliConfig,
    },
    /// Generate a synthetic silhouette and its ground-truth outline.
    Genfix {
        class: ClothingClass,
        #[arg(short, long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Ground-truth file; defaults to the output path with a `.truth.tsv` extension.
        #[arg(long)]
        truth: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct CliConfig {
    /// Edge FIS sigma for template images.
    #[arg(long, default_value_t = TEMPLATE_SIGMA)]
    pub template_sigma: f64,
    /// Edge FIS sigma for user photos.
    #[arg(long, default_value_t = PHOTO_SIGMA)]
    pub photo_sigma: f64,
    /// Centre rows of the three ROIs.
    #[arg(long, value_delimiter = ',', num_args = 1, default_values_t = ROI_ROWS)]
    pub roi_rows: Vec<usize>,
    #[arg(long, default_value_t = ROI_HALF_WIDTH)]
    pub roi_half_width: usize,
    #[arg(long, default_value_t = WHITE_THRESHOLD)]
    pub white_threshold: f64,
    #[arg(long, default_value_t = BORDER_MARGIN)]
    pub border_margin: usize,
    /// Output-universe samples for both fuzzy systems.
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    pub resolution: usize,
    /// Worker threads; all available cores when absent.
    #[arg(long)]
    pub threads: Option<usize>,
}

impl Default for CliConfig {
    fn default() -> Self {
        CliConfig {
            template_sigma: TEMPLATE_SIGMA,
            photo_sigma: PHOTO_SIGMA,
            roi_rows: ROI_ROWS.to_vec(),
            roi_half_width: ROI_HALF_WIDTH,
            white_threshold: WHITE_THRESHOLD,
            border_margin: BORDER_MARGIN,
            resolution: DEFAULT_RESOLUTION,
            threads: None,
        }
    }
}

impl CliConfig {
    pub fn pipeline(&self) -> Result<PipelineConfig> {
        let roi_rows: [usize; 3] = self.roi_rows.as_slice().try_into().map_err(|_| {
            Error::Config(format!("--roi-rows needs exactly 3 values, got {}", self.roi_rows.len()))
        })?;
        let cfg = PipelineConfig {
            template_sigma: self.template_sigma,
            photo_sigma: self.photo_sigma,
            edge_resolution: self.resolution,
            identify_resolution: self.resolution,
            roi_rows,
            roi_half_width: self.roi_half_width,
            white_threshold: self.white_threshold,
            border_margin: self.border_margin,
            ..PipelineConfig::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker threads: {e}")))?;
    Ok(pool.install(f))
}

/// Runs one command, writing records to `out` and diagnostics to `err`.
/// Returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Train {
            manifest,
            out: model_path,
            report,
            config,
        } => cmd_train(&manifest, &model_path, report.as_deref(), &config, out, err),
        Command::Classify {
            model,
            images,
            kind,
            threads,
        } => cmd_classify(&model, &images, kind, threads, out, err),
        Command::Edges {
            image,
            out: png,
            kind,
            config,
        } => cmd_edges(&image, &png, kind, &config),
        Command::Features {
            image,
            out: txt,
            kind,
            config,
        } => cmd_features(&image, txt.as_deref(), kind, &config, out),
        Command::Genfix {
            class,
            out: png,
            seed,
            truth,
        } => cmd_genfix(class, &png, seed, truth.as_deref(), err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| Error::io("<stdout>", e))
}

fn cmd_train(
    manifest: &Path,
    model_path: &Path,
    report_path: Option<&Path>,
    config: &CliConfig,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let images = load_manifest(manifest)?;
    let cfg = config.pipeline()?;
    let report = with_threads(config.threads, || extract_training_features(&images, &cfg))?;

    let mut text = String::new();
    let _ = writeln!(text, "{REPORT_HEADER}");
    for entry in &report {
        let _ = writeln!(text, "{entry}");
    }
    emit(out, &text)?;
    if let Some(path) = report_path {
        write_file(path, &text)?;
    }
    let failures = report.iter().filter(|e| e.outcome.is_err()).count();

    let outcome = train_from_report(report, &cfg)?;
    for warning in &outcome.warnings {
        let _ = writeln!(err, "warning: {warning}");
    }
    save_model(&outcome.model, model_path)?;
    if failures > 0 {
        let _ = writeln!(err, "{failures} image(s) failed; model trained without them");
        return Ok(2);
    }
    Ok(0)
}

fn cmd_classify(
    model_path: &Path,
    images: &[PathBuf],
    kind: ImageKind,
    threads: Option<usize>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let model = load_model(model_path)?;
    let results = with_threads(threads, || {
        images
            .par_iter()
            .map(|path| classify(path, &model, kind))
            .collect::<Vec<_>>()
    })?;

    let mut text = String::new();
    let _ = writeln!(text, "{RECORD_HEADER}");
    let mut failed = 0;
    for (path, result) in images.iter().zip(results) {
        match result {
            Ok(c) => {
                let _ = writeln!(text, "{}", c.record(path));
            }
            Err(e) => {
                failed += 1;
                let _ = writeln!(err, "error\t{}\t{e}", path.display());
            }
        }
    }
    emit(out, &text)?;
    Ok(if failed == 0 { 0 } else { 1 })
}

fn cmd_edges(image: &Path, png: &Path, kind: ImageKind, config: &CliConfig) -> Result<i32> {
    let cfg = config.pipeline()?;
    let img = load_and_gray(image)?;
    let edges = with_threads(config.threads, || edge_stage(&img, kind, &cfg))??;
    edges.image().save_png(png)?;
    Ok(0)
}

/// Structured-text dump of outline curves: `#` header lines, then one
/// `roi\trow\tcol` record per detected row.
pub fn features_text(curves: &[CharacteristicCurve]) -> String {
    let mut text = String::new();
    let _ = writeln!(text, "roi\trow\tcol");
    for curve in curves {
        for &(r, c) in &curve.points {
            let _ = writeln!(text, "{}\t{r}\t{c}", curve.roi.index);
        }
    }
    text
}

fn cmd_features(
    image: &Path,
    txt: Option<&Path>,
    kind: ImageKind,
    config: &CliConfig,
    out: &mut dyn Write,
) -> Result<i32> {
    let cfg = config.pipeline()?;
    let img = load_and_gray(image)?;
    let edges = with_threads(config.threads, || edge_stage(&img, kind, &cfg))??;
    let rois = cfg.rois()?;
    let curves = rois.map(|roi| leftmost_edge(&edges, &roi, cfg.white_threshold));

    let mut text = String::new();
    let features = extract_features(&edges, &rois, cfg.white_threshold);
    match &features {
        Ok(ex) => {
            let fv = ex.features;
            let _ = writeln!(text, "# m1={}", fv.m1);
            let _ = writeln!(text, "# mean_val={}", fv.mean_val);
            let [a, b, c] = fv.valid_rows;
            let _ = writeln!(text, "# valid_rows={a},{b},{c}");
        }
        Err(e) => {
            let _ = writeln!(text, "# error={e}");
        }
    }
    text.push_str(&features_text(&curves));
    match txt {
        Some(path) => write_file(path, &text)?,
        None => emit(out, &text)?,
    }
    features.map(|_| 0)
}

fn cmd_genfix(
    class: ClothingClass,
    png: &Path,
    seed: u64,
    truth: Option<&Path>,
    err: &mut dyn Write,
) -> Result<i32> {
    let fixture = generate_seeded(class, seed);
    let truth = truth.map(Path::to_path_buf).unwrap_or_else(|| png.with_extension("truth.tsv"));
    fixture.write(png, &truth)?;
    let _ = writeln!(err, "wrote {} and {}", png.display(), truth.display());
    Ok(0)
}
