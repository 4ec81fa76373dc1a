//! Image to features: resize, edge FIS, border whitening, outline features.

use std::path::Path;

use crate::config::PipelineConfig;
use crate::edges::{edge_map, whiten_border, EdgeMap};
use crate::error::Result;
use crate::features::{extract_features, Extraction};
use crate::labels::ImageKind;
use crate::raster::{load_and_gray, resize_canonical, GrayImage};

/// Canonical-size edge map with the border columns whitened.
pub fn edge_stage(img: &GrayImage, kind: ImageKind, cfg: &PipelineConfig) -> Result<EdgeMap> {
    let canonical = resize_canonical(img)?;
    let edges = edge_map(&canonical, &cfg.edge_config(kind))?;
    whiten_border(edges, cfg.border_margin)
}

pub fn analyze(img: &GrayImage, kind: ImageKind, cfg: &PipelineConfig) -> Result<Extraction> {
    let edges = edge_stage(img, kind, cfg)?;
    extract_features(&edges, &cfg.rois()?, cfg.white_threshold)
}

/// Like [`analyze`], with any failure tagged by `path`.
pub fn analyze_path(path: &Path, kind: ImageKind, cfg: &PipelineConfig) -> Result<Extraction> {
    load_and_gray(path)
        .and_then(|img| analyze(&img, kind, cfg))
        .map_err(|e| e.at_path(path))
}
