use serde::{Deserialize, Serialize};

use crate::edges::EdgeFisConfig;
use crate::error::{Error, Result};
use crate::features::Roi;
use crate::fuzzy::DEFAULT_RESOLUTION;
use crate::labels::ImageKind;

pub const CANONICAL_ROWS: usize = 1536;
pub const CANONICAL_COLS: usize = 1024;

pub const TEMPLATE_SIGMA: f64 = 0.1;
pub const PHOTO_SIGMA: f64 = 0.3;
pub const ROI_ROWS: [usize; 3] = [400, 800, 1200];
pub const ROI_HALF_WIDTH: usize = 50;
pub const WHITE_THRESHOLD: f64 = 0.98;
pub const BORDER_MARGIN: usize = 50;

pub const WHITE_TRIANGLE: [f64; 3] = [0.1, 1.0, 1.0];
pub const BLACK_TRIANGLE: [f64; 3] = [0.0, 0.0, 0.7];

/// Which way round the ROI mean difference is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeanValOrder {
    Roi1MinusRoi2,
}

/// Every setting that changes extracted features. Stored inside trained
/// models so classification uses exactly what training used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub template_sigma: f64,
    pub photo_sigma: f64,
    pub white_triangle: [f64; 3],
    pub black_triangle: [f64; 3],
    pub edge_resolution: usize,
    pub roi_rows: [usize; 3],
    pub roi_half_width: usize,
    pub white_threshold: f64,
    pub border_margin: usize,
    pub identify_resolution: usize,
    pub mean_val_order: MeanValOrder,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            template_sigma: TEMPLATE_SIGMA,
            photo_sigma: PHOTO_SIGMA,
            white_triangle: WHITE_TRIANGLE,
            black_triangle: BLACK_TRIANGLE,
            edge_resolution: DEFAULT_RESOLUTION,
            roi_rows: ROI_ROWS,
            roi_half_width: ROI_HALF_WIDTH,
            white_threshold: WHITE_THRESHOLD,
            border_margin: BORDER_MARGIN,
            identify_resolution: DEFAULT_RESOLUTION,
            mean_val_order: MeanValOrder::Roi1MinusRoi2,
        }
    }
}

impl PipelineConfig {
    pub fn sigma_for(&self, kind: ImageKind) -> f64 {
        match kind {
            ImageKind::Template => self.template_sigma,
            ImageKind::UserPhoto => self.photo_sigma,
        }
    }

    pub fn edge_config(&self, kind: ImageKind) -> EdgeFisConfig {
        EdgeFisConfig {
            sigma: self.sigma_for(kind),
            white_triangle: self.white_triangle,
            black_triangle: self.black_triangle,
            resolution: self.edge_resolution,
        }
    }

    pub fn rois(&self) -> Result<[Roi; 3]> {
        let rois = [0, 1, 2].map(|i| Roi::new(i as u8 + 1, self.roi_rows[i], self.roi_half_width));
        for roi in &rois {
            roi.check_within(CANONICAL_ROWS)?;
        }
        for i in 0..3 {
            for j in i + 1..3 {
                if rois[i].overlaps(&rois[j]) {
                    return Err(Error::Config(format!("ROI {} and ROI {} overlap", i + 1, j + 1)));
                }
            }
        }
        Ok(rois)
    }

    pub fn validate(&self) -> Result<()> {
        for kind in [ImageKind::Template, ImageKind::UserPhoto] {
            self.edge_config(kind).validate()?;
        }
        self.rois()?;
        if !(self.white_threshold > 0.0 && self.white_threshold < 1.0) {
            return Err(Error::Config(format!(
                "white threshold must lie in (0, 1), got {}",
                self.white_threshold
            )));
        }
        if 2 * self.border_margin >= CANONICAL_COLS {
            return Err(Error::Config(format!(
                "border margin {} leaves no columns in a {CANONICAL_COLS}-wide image",
                self.border_margin
            )));
        }
        if self.identify_resolution < 2 {
            return Err(Error::Config("identify resolution must be >= 2".into()));
        }
        Ok(())
    }
}
