//! Fuzzy edge detection.
//!
//! Two rules over the backward-difference gradients:
//! `Ix is zero AND Iy is zero => white` and
//! `Ix is not zero OR Iy is not zero => black`.

use rayon::prelude::*;

use crate::config::{BLACK_TRIANGLE, PHOTO_SIGMA, TEMPLATE_SIGMA, WHITE_TRIANGLE};
use crate::error::{Error, Result};
use crate::fuzzy::{
    Clause, Connective, FuzzyRule, FuzzyVariable, MamdaniFis, MembershipFunction, Universe, DEFAULT_RESOLUTION,
};
use crate::raster::GrayImage;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeFisConfig {
    /// Spread of the `zero` term on both gradient inputs.
    pub sigma: f64,
    pub white_triangle: [f64; 3],
    pub black_triangle: [f64; 3],
    pub resolution: usize,
}

impl Default for EdgeFisConfig {
    fn default() -> Self {
        EdgeFisConfig::with_sigma(TEMPLATE_SIGMA)
    }
}

impl EdgeFisConfig {
    pub fn with_sigma(sigma: f64) -> Self {
        EdgeFisConfig {
            sigma,
            white_triangle: WHITE_TRIANGLE,
            black_triangle: BLACK_TRIANGLE,
            resolution: DEFAULT_RESOLUTION,
        }
    }

    pub fn template() -> Self {
        EdgeFisConfig::with_sigma(TEMPLATE_SIGMA)
    }

    pub fn photo() -> Self {
        EdgeFisConfig::with_sigma(PHOTO_SIGMA)
    }

    pub fn validate(&self) -> Result<()> {
        self.build_fis().map(|_| ())
    }

    pub fn build_fis(&self) -> Result<MamdaniFis> {
        let gradient = Universe::new(-1.0, 1.0)?;
        let zero = MembershipFunction::gaussian(0.0, self.sigma)?;
        let [wa, wb, wc] = self.white_triangle;
        let [ba, bb, bc] = self.black_triangle;
        let white = MembershipFunction::triangular(wa, wb, wc)?;
        let black = MembershipFunction::triangular(ba, bb, bc)?;
        for (name, [a, _, c]) in [("white", self.white_triangle), ("black", self.black_triangle)] {
            if a < 0.0 || c > 1.0 {
                return Err(Error::Config(format!("{name} triangle must lie within [0, 1]")));
            }
        }

        let ix = FuzzyVariable::new("Ix", gradient).with_term("zero", zero)?;
        let iy = FuzzyVariable::new("Iy", gradient).with_term("zero", zero)?;
        let out = FuzzyVariable::new("Iout", Universe::new(0.0, 1.0)?)
            .with_term("white", white)?
            .with_term("black", black)?;
        let rules = vec![
            FuzzyRule::new(
                Connective::And,
                vec![Clause::is("Ix", "zero"), Clause::is("Iy", "zero")],
                "white",
            ),
            FuzzyRule::new(
                Connective::Or,
                vec![Clause::is_not("Ix", "zero"), Clause::is_not("Iy", "zero")],
                "black",
            ),
        ];
        MamdaniFis::new(vec![ix, iy], out, rules, self.resolution)
    }
}

/// Backward first differences along columns (`ix`) and rows (`iy`).
#[derive(Debug, Clone, PartialEq)]
pub struct GradientPair {
    pub ix: GrayImage,
    pub iy: GrayImage,
}

/// `ix(r,c) = I(r,c) − I(r,c−1)`, `iy(r,c) = I(r,c) − I(r−1,c)`, with
/// replicate padding so the first column and row have zero gradient.
pub fn gradients(img: &GrayImage) -> GradientPair {
    let (rows, cols) = (img.rows(), img.cols());
    let ix = GrayImage::from_fn(rows, cols, |r, c| grad_x(img, r, c)).expect("same shape");
    let iy = GrayImage::from_fn(rows, cols, |r, c| grad_y(img, r, c)).expect("same shape");
    GradientPair { ix, iy }
}

#[inline]
fn grad_x(img: &GrayImage, r: usize, c: usize) -> f64 {
    img.get(r, c) - img.get(r, c.saturating_sub(1))
}

#[inline]
fn grad_y(img: &GrayImage, r: usize, c: usize) -> f64 {
    img.get(r, c) - img.get(r.saturating_sub(1), c)
}

/// Raw per-pixel output of the edge FIS, before normalization.
///
/// Rows are evaluated in parallel against one shared FIS.
pub fn edge_response(img: &GrayImage, cfg: &EdgeFisConfig) -> Result<GrayImage> {
    let fis = cfg.build_fis()?;
    let cols = img.cols();
    let mut data = vec![0.0; img.rows() * cols];
    data.par_chunks_mut(cols).enumerate().for_each(|(r, out)| {
        // flat runs repeat the same gradients; reuse the last inference
        let mut last: Option<(u64, u64, f64)> = None;
        for (c, slot) in out.iter_mut().enumerate() {
            let (gx, gy) = (grad_x(img, r, c), grad_y(img, r, c));
            let key = (gx.to_bits(), gy.to_bits());
            *slot = match last {
                Some((kx, ky, v)) if (kx, ky) == key => v,
                _ => {
                    let v = fis.evaluate(&[gx, gy]).expect("two inputs").value;
                    last = Some((key.0, key.1, v));
                    v
                }
            };
        }
    });
    GrayImage::new(img.rows(), cols, data)
}

/// Edge intensities in [0, 1]; 1 means no edge.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeMap(GrayImage);

impl EdgeMap {
    /// Divides by the maximum so the whitest pixel becomes exactly 1.
    pub fn normalize(raw: GrayImage) -> Result<EdgeMap> {
        let max = raw.max();
        if max.is_nan() || max <= 0.0 {
            return Err(Error::DegenerateImage);
        }
        let mut img = raw;
        img.data_mut().iter_mut().for_each(|v| *v /= max);
        Ok(EdgeMap(img))
    }

    /// Wraps values already in [0, 1] without rescaling.
    pub fn from_normalized(img: GrayImage) -> Result<EdgeMap> {
        if img.data().iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::InvalidImage("edge values must lie in [0, 1]".into()));
        }
        Ok(EdgeMap(img))
    }

    pub fn image(&self) -> &GrayImage {
        &self.0
    }

    pub fn into_image(self) -> GrayImage {
        self.0
    }

    pub fn rows(&self) -> usize {
        self.0.rows()
    }

    pub fn cols(&self) -> usize {
        self.0.cols()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.0.get(row, col)
    }

    pub fn row(&self, row: usize) -> &[f64] {
        self.0.row(row)
    }
}

pub fn edge_map(img: &GrayImage, cfg: &EdgeFisConfig) -> Result<EdgeMap> {
    EdgeMap::normalize(edge_response(img, cfg)?)
}

/// Forces the first and last `margin` columns to white.
pub fn whiten_border(edge: EdgeMap, margin: usize) -> Result<EdgeMap> {
    let cols = edge.cols();
    if 2 * margin >= cols {
        return Err(Error::Config(format!(
            "border margin {margin} is too large for {cols} columns"
        )));
    }
    let mut img = edge.0;
    for r in 0..img.rows() {
        let row = img.row_mut(r);
        row[..margin].fill(1.0);
        row[cols - margin..].fill(1.0);
    }
    Ok(EdgeMap(img))
}
