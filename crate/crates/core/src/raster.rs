//! Grayscale rasters: decoding, luminance conversion and resizing.

use std::path::Path;

use image::DynamicImage;

use crate::config::{CANONICAL_COLS, CANONICAL_ROWS};
use crate::error::{Error, Result};

const LUMA_R: f64 = 0.299;
const LUMA_G: f64 = 0.587;
const LUMA_B: f64 = 0.114;

/// Row-major matrix of intensities. Pipeline stages keep values in [0, 1],
/// with 0 black and 1 white.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl GrayImage {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidImage(format!("zero-sized image {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::InvalidImage(format!(
                "{} values for a {rows}x{cols} image",
                data.len()
            )));
        }
        Ok(GrayImage { rows, cols, data })
    }

    pub fn filled(rows: usize, cols: usize, value: f64) -> Result<Self> {
        GrayImage::new(rows, cols, vec![value; rows * cols])
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        GrayImage::new(rows, cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.data[row * self.cols + col] = value;
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn row_mut(&mut self, row: usize) -> &mut [f64] {
        &mut self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Left-right mirror image.
    pub fn mirrored(&self) -> GrayImage {
        let mut out = self.clone();
        for r in 0..self.rows {
            out.row_mut(r).reverse();
        }
        out
    }

    /// 8-bit grayscale copy, 255 = white.
    pub fn to_luma8(&self) -> image::GrayImage {
        image::GrayImage::from_fn(self.cols as u32, self.rows as u32, |x, y| {
            let v = self.get(y as usize, x as usize).clamp(0.0, 1.0);
            image::Luma([(v * 255.0).round() as u8])
        })
    }

    pub fn save_png(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        self.to_luma8()
            .save_with_format(path, image::ImageFormat::Png)
            .map_err(|source| Error::Encode {
                path: path.to_path_buf(),
                source,
            })
    }
}

/// Decodes a PNG or JPEG and reduces it to luminance in [0, 1].
pub fn load_and_gray(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let decoded = image::load_from_memory(&bytes).map_err(|source| Error::Decode {
        path: path.to_path_buf(),
        source,
    })?;
    gray_from_dynamic(&decoded)
}

/// Luminance `0.299 R + 0.587 G + 0.114 B`; gray sources pass through.
pub fn gray_from_dynamic(img: &DynamicImage) -> Result<GrayImage> {
    let (cols, rows) = (img.width() as usize, img.height() as usize);
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidImage(format!("zero-sized image {rows}x{cols}")));
    }
    let data: Vec<f64> = match img {
        DynamicImage::ImageLuma8(g) => g.pixels().map(|p| p[0] as f64 / 255.0).collect(),
        DynamicImage::ImageLumaA8(g) => g.pixels().map(|p| p[0] as f64 / 255.0).collect(),
        DynamicImage::ImageLuma16(g) => g.pixels().map(|p| p[0] as f64 / 65535.0).collect(),
        DynamicImage::ImageLumaA16(g) => g.pixels().map(|p| p[0] as f64 / 65535.0).collect(),
        DynamicImage::ImageRgb8(_) | DynamicImage::ImageRgba8(_) => img
            .to_rgb8()
            .pixels()
            .map(|p| luminance(p[0] as f64, p[1] as f64, p[2] as f64) / 255.0)
            .collect(),
        _ => img
            .to_rgb32f()
            .pixels()
            .map(|p| luminance(p[0] as f64, p[1] as f64, p[2] as f64))
            .collect(),
    };
    let data = data.into_iter().map(|v| v.clamp(0.0, 1.0)).collect();
    GrayImage::new(rows, cols, data)
}

fn luminance(r: f64, g: f64, b: f64) -> f64 {
    LUMA_R * r + LUMA_G * g + LUMA_B * b
}

/// Bilinear resize using pixel-centre alignment, with edge samples clamped.
pub fn resize_bilinear(img: &GrayImage, rows: usize, cols: usize) -> Result<GrayImage> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidImage(format!("cannot resize to {rows}x{cols}")));
    }
    if rows == img.rows && cols == img.cols {
        return Ok(img.clone());
    }
    let row_taps = taps(img.rows, rows);
    let col_taps = taps(img.cols, cols);
    let mut data = Vec::with_capacity(rows * cols);
    for &(r0, r1, fr) in &row_taps {
        let (top, bottom) = (img.row(r0), img.row(r1));
        for &(c0, c1, fc) in &col_taps {
            let upper = top[c0] * (1.0 - fc) + top[c1] * fc;
            let lower = bottom[c0] * (1.0 - fc) + bottom[c1] * fc;
            data.push(upper * (1.0 - fr) + lower * fr);
        }
    }
    GrayImage::new(rows, cols, data)
}

// (lower index, upper index, weight of upper) for each output coordinate
fn taps(src: usize, dst: usize) -> Vec<(usize, usize, f64)> {
    let scale = src as f64 / dst as f64;
    (0..dst)
        .map(|d| {
            let s = ((d as f64 + 0.5) * scale - 0.5).clamp(0.0, (src - 1) as f64);
            let lo = s.floor() as usize;
            let hi = (lo + 1).min(src - 1);
            (lo, hi, s - lo as f64)
        })
        .collect()
}

/// Resizes to the 1536-row by 1024-column portrait frame.
pub fn resize_canonical(img: &GrayImage) -> Result<GrayImage> {
    resize_bilinear(img, CANONICAL_ROWS, CANONICAL_COLS)
}
