//! Outline features: the leftmost edge per row inside each ROI, its slope in
//! ROI 1 (`m1`) and the ROI 1 minus ROI 2 mean column (`meanVal`).

use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::edges::EdgeMap;
use crate::error::{Error, Result};

/// A horizontal band of rows `center_row ± half_width`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Roi {
    pub index: u8,
    pub center_row: usize,
    pub half_width: usize,
}

impl Roi {
    pub fn new(index: u8, center_row: usize, half_width: usize) -> Self {
        Roi {
            index,
            center_row,
            half_width,
        }
    }

    pub fn first_row(&self) -> usize {
        self.center_row.saturating_sub(self.half_width)
    }

    pub fn last_row(&self) -> usize {
        self.center_row + self.half_width
    }

    pub fn rows(&self) -> RangeInclusive<usize> {
        self.first_row()..=self.last_row()
    }

    pub fn overlaps(&self, other: &Roi) -> bool {
        self.first_row() <= other.last_row() && other.first_row() <= self.last_row()
    }

    pub fn check_within(&self, rows: usize) -> Result<()> {
        if self.half_width > self.center_row || self.last_row() >= rows {
            return Err(Error::Config(format!(
                "ROI {} (row {} ± {}) does not fit in {rows} rows",
                self.index, self.center_row, self.half_width
            )));
        }
        Ok(())
    }
}

/// Leftmost non-white column for each row of an ROI that has one.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacteristicCurve {
    pub roi: Roi,
    /// `(row, col)` with strictly increasing rows.
    pub points: Vec<(usize, usize)>,
}

impl CharacteristicCurve {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn mean_col(&self) -> Option<f64> {
        if self.points.is_empty() {
            return None;
        }
        let sum: f64 = self.points.iter().map(|&(_, c)| c as f64).sum();
        Some(sum / self.points.len() as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    /// Least-squares slope of ROI 1's outline, columns per row.
    pub m1: f64,
    /// Mean outline column in ROI 1 minus that in ROI 2.
    pub mean_val: f64,
    pub valid_rows: [usize; 3],
}

/// Features plus the three curves they came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Extraction {
    pub features: FeatureVector,
    pub curves: [CharacteristicCurve; 3],
}

/// Scans each ROI row left to right for the first value strictly below
/// `white_threshold`. Rows outside the map are skipped.
pub fn leftmost_edge(edge: &EdgeMap, roi: &Roi, white_threshold: f64) -> CharacteristicCurve {
    let last = roi.last_row().min(edge.rows().saturating_sub(1));
    let points = (roi.first_row()..=last)
        .filter_map(|r| {
            edge.row(r)
                .iter()
                .position(|&v| v < white_threshold)
                .map(|c| (r, c))
        })
        .collect();
    CharacteristicCurve { roi: *roi, points }
}

/// Ordinary least-squares slope of column against row.
pub fn fit_slope(curve: &CharacteristicCurve) -> Result<f64> {
    let insufficient = |reason: String| Error::InsufficientData {
        roi: curve.roi.index,
        reason,
    };
    if curve.points.len() < 2 {
        return Err(insufficient(format!(
            "need at least 2 outline points to fit a slope, found {}",
            curve.points.len()
        )));
    }
    let n = curve.points.len() as f64;
    let row_mean = curve.points.iter().map(|&(r, _)| r as f64).sum::<f64>() / n;
    let col_mean = curve.points.iter().map(|&(_, c)| c as f64).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(r, c) in &curve.points {
        let dr = r as f64 - row_mean;
        sxy += dr * (c as f64 - col_mean);
        sxx += dr * dr;
    }
    if sxx == 0.0 {
        return Err(insufficient("all outline points lie on one row".into()));
    }
    Ok(sxy / sxx)
}

/// `mean(cols of first) − mean(cols of second)`.
pub fn mean_diff(first: &CharacteristicCurve, second: &CharacteristicCurve) -> Result<f64> {
    let mean = |curve: &CharacteristicCurve| {
        curve.mean_col().ok_or_else(|| Error::InsufficientData {
            roi: curve.roi.index,
            reason: "no outline points".into(),
        })
    };
    Ok(mean(first)? - mean(second)?)
}

/// Computes all three curves; ROI 3 is kept for diagnostics only.
pub fn extract_features(edge: &EdgeMap, rois: &[Roi; 3], white_threshold: f64) -> Result<Extraction> {
    for roi in rois {
        roi.check_within(edge.rows())?;
    }
    let curves = rois.map(|roi| leftmost_edge(edge, &roi, white_threshold));
    let m1 = fit_slope(&curves[0])?;
    let mean_val = mean_diff(&curves[0], &curves[1])?;
    let features = FeatureVector {
        m1,
        mean_val,
        valid_rows: [curves[0].len(), curves[1].len(), curves[2].len()],
    };
    Ok(Extraction { features, curves })
}
