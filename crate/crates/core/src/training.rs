//! Per-class feature statistics, the `identify` FIS built from them, and the
//! on-disk model format.

use std::fmt;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::PipelineConfig;
use crate::error::{Error, Result};
use crate::features::FeatureVector;
use crate::fuzzy::{Clause, Connective, FuzzyRule, FuzzyVariable, MamdaniFis, MembershipFunction, Universe};
use crate::labels::{ClothingClass, ImageKind};
use crate::pipeline::analyze_path;

pub const FORMAT_VERSION: i64 = 1;

pub const M1_UNIVERSE: [f64; 2] = [-100.0, 100.0];
pub const MEAN_VAL_UNIVERSE: [f64; 2] = [-1000.0, 1000.0];
pub const ITEM_UNIVERSE: [f64; 2] = [0.0, 1.5];

/// Output partition of `itemIs`: shirt, dress, pants.
pub const ITEM_TRIANGLES: [(ClothingClass, [f64; 3]); 3] = [
    (ClothingClass::Shirt, [0.0, 0.25, 0.5]),
    (ClothingClass::Dress, [0.5, 0.75, 1.0]),
    (ClothingClass::Pants, [1.0, 1.25, 1.5]),
];

/// Smallest spread a trained Gaussian term may have.
pub const SIGMA_FLOOR: f64 = 1e-6;

pub const M1: &str = "m1";
pub const MEAN_VAL: &str = "meanVal";
pub const ITEM_IS: &str = "itemIs";

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSample {
    pub label: ClothingClass,
    pub features: FeatureVector,
    pub source: PathBuf,
    pub image_kind: ImageKind,
}

/// Sample mean and (n − 1) standard deviation of one feature for one class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeatureStat {
    pub mean: f64,
    pub std: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassStats {
    pub shirt_m1: FeatureStat,
    pub dress_m1: FeatureStat,
    pub pants_m1: FeatureStat,
    pub dress_mean_val: FeatureStat,
    pub pants_mean_val: FeatureStat,
}

impl ClassStats {
    pub fn m1(&self, class: ClothingClass) -> &FeatureStat {
        match class {
            ClothingClass::Shirt => &self.shirt_m1,
            ClothingClass::Dress => &self.dress_m1,
            ClothingClass::Pants => &self.pants_m1,
        }
    }

    /// `meanVal` statistics; shirts have none.
    pub fn mean_val(&self, class: ClothingClass) -> Option<&FeatureStat> {
        match class {
            ClothingClass::Shirt => None,
            ClothingClass::Dress => Some(&self.dress_mean_val),
            ClothingClass::Pants => Some(&self.pants_mean_val),
        }
    }

    fn validate(&self) -> Result<()> {
        let all = [
            ("shirt m1", &self.shirt_m1),
            ("dress m1", &self.dress_m1),
            ("pants m1", &self.pants_m1),
            ("dress meanVal", &self.dress_mean_val),
            ("pants meanVal", &self.pants_mean_val),
        ];
        for (name, stat) in all {
            if !stat.mean.is_finite() || !stat.std.is_finite() || stat.std <= 0.0 {
                return Err(Error::InvalidModel(format!(
                    "{name} statistics must be finite with std > 0"
                )));
            }
            if stat.count < 2 {
                return Err(Error::InvalidModel(format!("{name} needs at least 2 samples")));
            }
        }
        Ok(())
    }
}

/// A class feature whose spread was zero and had to be floored.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegenerateVariance {
    pub class: ClothingClass,
    pub feature: &'static str,
}

impl fmt::Display for DegenerateVariance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "class {} has zero {} variance; std floored to {SIGMA_FLOOR:e}",
            self.class, self.feature
        )
    }
}

fn feature_stat(
    values: &[f64],
    class: ClothingClass,
    feature: &'static str,
    flags: &mut Vec<DegenerateVariance>,
) -> FeatureStat {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    let mut std = var.sqrt();
    if std.is_nan() || std < SIGMA_FLOOR {
        flags.push(DegenerateVariance { class, feature });
        std = SIGMA_FLOOR;
    }
    FeatureStat {
        mean,
        std,
        count: values.len(),
    }
}

/// Per-class statistics. Every class needs at least two samples.
pub fn class_stats(samples: &[LabeledSample]) -> Result<(ClassStats, Vec<DegenerateVariance>)> {
    let per_class = |class: ClothingClass| -> Result<Vec<&FeatureVector>> {
        let found: Vec<_> = samples.iter().filter(|s| s.label == class).map(|s| &s.features).collect();
        if found.len() < 2 {
            let plural = if found.len() == 1 { "" } else { "s" };
            return Err(Error::Training(format!(
                "class {class} has {} sample{plural}, need ≥ 2",
                found.len()
            )));
        }
        Ok(found)
    };
    let shirt = per_class(ClothingClass::Shirt)?;
    let dress = per_class(ClothingClass::Dress)?;
    let pants = per_class(ClothingClass::Pants)?;

    let m1 = |v: &[&FeatureVector]| v.iter().map(|f| f.m1).collect::<Vec<_>>();
    let mean_val = |v: &[&FeatureVector]| v.iter().map(|f| f.mean_val).collect::<Vec<_>>();
    let mut flags = Vec::new();
    let stats = ClassStats {
        shirt_m1: feature_stat(&m1(&shirt), ClothingClass::Shirt, M1, &mut flags),
        dress_m1: feature_stat(&m1(&dress), ClothingClass::Dress, M1, &mut flags),
        pants_m1: feature_stat(&m1(&pants), ClothingClass::Pants, M1, &mut flags),
        dress_mean_val: feature_stat(&mean_val(&dress), ClothingClass::Dress, MEAN_VAL, &mut flags),
        pants_mean_val: feature_stat(&mean_val(&pants), ClothingClass::Pants, MEAN_VAL, &mut flags),
    };
    Ok((stats, flags))
}

/// Spread of a `meanVal` term: the magnitude of its own centre.
pub fn mean_val_sigma(stat: &FeatureStat) -> f64 {
    stat.mean.abs().max(SIGMA_FLOOR)
}

/// Two inputs (`m1`, `meanVal`), output `itemIs` and four rules:
///
/// 1. m1 is shirt => shirt
/// 2. m1 is not shirt AND meanVal is dress => dress
/// 3. m1 is not shirt AND meanVal is pants => pants
/// 4. m1 is shirt AND meanVal is dress => dress
pub fn build_identify_fis(stats: &ClassStats, resolution: usize) -> Result<MamdaniFis> {
    let mut m1 = FuzzyVariable::new(M1, Universe::try_from(M1_UNIVERSE)?);
    for class in ClothingClass::ALL {
        let s = stats.m1(class);
        m1 = m1.with_term(class.as_str(), MembershipFunction::gaussian(s.mean, s.std)?)?;
    }
    let mut mean_val = FuzzyVariable::new(MEAN_VAL, Universe::try_from(MEAN_VAL_UNIVERSE)?);
    for class in [ClothingClass::Dress, ClothingClass::Pants] {
        let s = stats.mean_val(class).expect("dress and pants have meanVal");
        mean_val = mean_val.with_term(class.as_str(), MembershipFunction::gaussian(s.mean, mean_val_sigma(s))?)?;
    }
    let mut item = FuzzyVariable::new(ITEM_IS, Universe::try_from(ITEM_UNIVERSE)?);
    for (class, [a, b, c]) in ITEM_TRIANGLES {
        item = item.with_term(class.as_str(), MembershipFunction::triangular(a, b, c)?)?;
    }

    let rules = vec![
        FuzzyRule::new(Connective::And, vec![Clause::is(M1, "shirt")], "shirt"),
        FuzzyRule::new(
            Connective::And,
            vec![Clause::is_not(M1, "shirt"), Clause::is(MEAN_VAL, "dress")],
            "dress",
        ),
        FuzzyRule::new(
            Connective::And,
            vec![Clause::is_not(M1, "shirt"), Clause::is(MEAN_VAL, "pants")],
            "pants",
        ),
        FuzzyRule::new(
            Connective::And,
            vec![Clause::is(M1, "shirt"), Clause::is(MEAN_VAL, "dress")],
            "dress",
        ),
    ];
    MamdaniFis::new(vec![m1, mean_val], item, rules, resolution)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainedModel {
    pub format_version: i64,
    pub pipeline: PipelineConfig,
    pub stats: ClassStats,
    pub identify_fis: MamdaniFis,
}

impl TrainedModel {
    pub fn from_stats(stats: ClassStats, pipeline: PipelineConfig) -> Result<Self> {
        let identify_fis = build_identify_fis(&stats, pipeline.identify_resolution)?;
        let model = TrainedModel {
            format_version: FORMAT_VERSION,
            pipeline,
            stats,
            identify_fis,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::VersionMismatch {
                found: self.format_version,
                expected: FORMAT_VERSION,
            });
        }
        self.pipeline.validate()?;
        let fis = &self.identify_fis;
        let names: Vec<_> = fis.inputs().iter().map(|v| v.name()).collect();
        if names != [M1, MEAN_VAL] {
            return Err(Error::InvalidModel(format!(
                "identify inputs must be [{M1}, {MEAN_VAL}], found {names:?}"
            )));
        }
        for (var, expected) in fis.inputs().iter().zip([M1_UNIVERSE, MEAN_VAL_UNIVERSE]) {
            let u = var.universe();
            if [u.lo(), u.hi()] != expected {
                return Err(Error::InvalidModel(format!("invalid input universe for {}", var.name())));
            }
        }
        let out = fis.output();
        if out.name() != ITEM_IS {
            return Err(Error::InvalidModel(format!("output variable must be {ITEM_IS}")));
        }
        if [out.universe().lo(), out.universe().hi()] != ITEM_UNIVERSE {
            return Err(Error::InvalidModel("invalid output universe".into()));
        }
        self.stats.validate()?;
        let expected = build_identify_fis(&self.stats, self.pipeline.identify_resolution)?;
        if *fis != expected {
            return Err(Error::InvalidModel(
                "identify FIS does not match the stored class statistics".into(),
            ));
        }
        Ok(())
    }
}

pub fn save_model(model: &TrainedModel, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = model_to_string(model)?;
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn model_to_string(model: &TrainedModel) -> Result<String> {
    toml::to_string_pretty(model).map_err(|e| Error::InvalidModel(format!("cannot serialize model: {e}")))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<TrainedModel> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    model_from_str(&text)
}

/// Parses and re-validates a model document. The version is checked before
/// anything else so newer files fail with a version error.
pub fn model_from_str(text: &str) -> Result<TrainedModel> {
    let table: toml::Table = text
        .parse()
        .map_err(|e| Error::InvalidModel(format!("not a model document: {e}")))?;
    let found = table
        .get("format_version")
        .and_then(|v| v.as_integer())
        .ok_or_else(|| Error::InvalidModel("missing integer format_version".into()))?;
    if found != FORMAT_VERSION {
        return Err(Error::VersionMismatch {
            found,
            expected: FORMAT_VERSION,
        });
    }
    let model: TrainedModel = toml::from_str(text).map_err(|e| Error::InvalidModel(e.to_string()))?;
    model.validate()?;
    Ok(model)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrainingImage {
    pub path: PathBuf,
    pub label: ClothingClass,
    pub kind: ImageKind,
}

/// Parses a manifest: one `path label kind` record per line, blank lines
/// and `#` comments ignored. Relative paths resolve against `base_dir`.
pub fn parse_manifest(text: &str, base_dir: &Path) -> Result<Vec<TrainingImage>> {
    let mut images = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Manifest { line, message };
        let (rest, kind) = trimmed
            .rsplit_once(char::is_whitespace)
            .ok_or_else(|| err("expected `path label kind`".into()))?;
        let (path, label) = rest
            .trim_end()
            .rsplit_once(char::is_whitespace)
            .ok_or_else(|| err("expected `path label kind`".into()))?;
        let label = label
            .parse::<ClothingClass>()
            .map_err(|_| err(format!("unknown label {label:?} at line {line}")))?;
        let kind = kind
            .parse::<ImageKind>()
            .map_err(|_| err(format!("unknown image kind {kind:?} at line {line}")))?;
        let path = Path::new(path.trim_end());
        let path = if path.is_absolute() { path.to_path_buf() } else { base_dir.join(path) };
        images.push(TrainingImage { path, label, kind });
    }
    Ok(images)
}

pub fn load_manifest(path: &Path) -> Result<Vec<TrainingImage>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_manifest(&text, path.parent().unwrap_or(Path::new(".")))
}

/// One line of the training report.
#[derive(Debug, Clone)]
pub struct ReportEntry {
    pub image: TrainingImage,
    pub outcome: std::result::Result<FeatureVector, String>,
}

pub const REPORT_HEADER: &str = "path\tlabel\tkind\tm1\tmean_val\trows_roi1\trows_roi2\trows_roi3";

impl fmt::Display for ReportEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let img = &self.image;
        write!(f, "{}\t{}\t{}\t", img.path.display(), img.label, img.kind)?;
        match &self.outcome {
            Ok(fv) => write!(
                f,
                "{}\t{}\t{}\t{}\t{}",
                fv.m1, fv.mean_val, fv.valid_rows[0], fv.valid_rows[1], fv.valid_rows[2]
            ),
            Err(msg) => write!(f, "error\t{msg}"),
        }
    }
}

/// Runs the feature pipeline over every training image (in parallel),
/// keeping input order.
pub fn extract_training_features(images: &[TrainingImage], cfg: &PipelineConfig) -> Vec<ReportEntry> {
    images
        .par_iter()
        .map(|img| ReportEntry {
            image: img.clone(),
            outcome: analyze_path(&img.path, img.kind, cfg)
                .map(|ex| ex.features)
                .map_err(|e| e.to_string()),
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct TrainingOutcome {
    pub model: TrainedModel,
    pub report: Vec<ReportEntry>,
    pub warnings: Vec<DegenerateVariance>,
}

/// Builds a model from an already extracted report. Failed images are
/// skipped; a class left with fewer than two samples aborts training.
pub fn train_from_report(report: Vec<ReportEntry>, cfg: &PipelineConfig) -> Result<TrainingOutcome> {
    let samples: Vec<LabeledSample> = report
        .iter()
        .filter_map(|e| {
            e.outcome.as_ref().ok().map(|fv| LabeledSample {
                label: e.image.label,
                features: *fv,
                source: e.image.path.clone(),
                image_kind: e.image.kind,
            })
        })
        .collect();
    let (stats, warnings) = class_stats(&samples).map_err(|e| {
        let failed: Vec<String> = report
            .iter()
            .filter_map(|e| e.outcome.as_ref().err().cloned())
            .collect();
        if failed.is_empty() {
            e
        } else {
            Error::Training(format!("{e}; failed images: {}", failed.join("; ")))
        }
    })?;
    let model = TrainedModel::from_stats(stats, cfg.clone())?;
    Ok(TrainingOutcome {
        model,
        report,
        warnings,
    })
}

pub fn train(images: &[TrainingImage], cfg: &PipelineConfig) -> Result<TrainingOutcome> {
    cfg.validate()?;
    train_from_report(extract_training_features(images, cfg), cfg)
}
