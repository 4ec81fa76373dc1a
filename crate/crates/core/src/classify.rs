use std::fmt;
use std::path::Path;

use crate::error::Result;
use crate::features::FeatureVector;
use crate::labels::{ClothingClass, ImageKind};
use crate::pipeline::{analyze, analyze_path};
use crate::raster::GrayImage;
use crate::training::TrainedModel;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub label: ClothingClass,
    /// Crisp `itemIs` output on [0, 1.5].
    pub score: f64,
    pub features: FeatureVector,
    /// No identify rule fired; `score` is the universe midpoint and `label`
    /// carries no information.
    pub indeterminate: bool,
}

pub const RECORD_HEADER: &str = "path\tlabel\tscore\tm1\tmean_val\tindeterminate";

impl Classification {
    /// Tab-separated record matching [`RECORD_HEADER`].
    pub fn record(&self, path: &Path) -> String {
        format!("{}\t{self}", path.display())
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}\t{:.6}\t{}\t{}\t{}",
            self.label, self.score, self.features.m1, self.features.mean_val, self.indeterminate
        )
    }
}

/// Bands `[.., 0.5)` shirt, `[0.5, 1.0)` dress, `[1.0, ..]` pants.
pub fn label_for_score(score: f64) -> ClothingClass {
    if score < 0.5 {
        ClothingClass::Shirt
    } else if score < 1.0 {
        ClothingClass::Dress
    } else {
        ClothingClass::Pants
    }
}

pub fn classify_features(features: &FeatureVector, model: &TrainedModel) -> Classification {
    let out = model
        .identify_fis
        .evaluate(&[features.m1, features.mean_val])
        .expect("identify FIS has two inputs");
    Classification {
        label: label_for_score(out.value),
        score: out.value,
        features: *features,
        indeterminate: out.indeterminate,
    }
}

pub fn classify_image(img: &GrayImage, model: &TrainedModel, kind: ImageKind) -> Result<Classification> {
    let extraction = analyze(img, kind, &model.pipeline)?;
    Ok(classify_features(&extraction.features, model))
}

pub fn classify(path: impl AsRef<Path>, model: &TrainedModel, kind: ImageKind) -> Result<Classification> {
    let extraction = analyze_path(path.as_ref(), kind, &model.pipeline)?;
    Ok(classify_features(&extraction.features, model))
}
