#![allow(dead_code)]

use std::path::{Path, PathBuf};

use closet_core::fixtures::{generate_seeded, Fixture};
use closet_core::training::TrainingImage;
use closet_core::{ClothingClass, ImageKind, PipelineConfig};

/// Ground-truth features straight from a fixture's outline, computed with
/// the normal-equation form of least squares.
pub fn truth_features(boundary: &[(usize, usize)], cfg: &PipelineConfig) -> (f64, f64) {
    let band = |i: usize| {
        let (lo, hi) = (cfg.roi_rows[i] - cfg.roi_half_width, cfg.roi_rows[i] + cfg.roi_half_width);
        boundary
            .iter()
            .filter(|(r, _)| (lo..=hi).contains(r))
            .map(|&(r, c)| (r as f64, c as f64))
            .collect::<Vec<_>>()
    };
    let roi1 = band(0);
    let roi2 = band(1);
    let n = roi1.len() as f64;
    let (sr, sc, srr, src) = roi1
        .iter()
        .fold((0.0, 0.0, 0.0, 0.0), |a, &(r, c)| (a.0 + r, a.1 + c, a.2 + r * r, a.3 + r * c));
    let slope = (n * src - sr * sc) / (n * srr - sr * sr);
    let mean = |v: &[(f64, f64)]| v.iter().map(|p| p.1).sum::<f64>() / v.len() as f64;
    (slope, mean(&roi1) - mean(&roi2))
}

pub fn kind_for(seed: u64) -> ImageKind {
    if seed == 0 {
        ImageKind::Template
    } else {
        ImageKind::UserPhoto
    }
}

/// Four fixtures per class: seed 0 as the template, seeds 1-3 as photos.
pub const TRAIN_SEEDS: [u64; 4] = [0, 1, 2, 3];

/// Held-out mix: two dresses, one shirt, two pants.
pub const HELD_OUT: [(ClothingClass, u64); 5] = [
    (ClothingClass::Dress, 101),
    (ClothingClass::Dress, 102),
    (ClothingClass::Shirt, 103),
    (ClothingClass::Pants, 104),
    (ClothingClass::Pants, 105),
];

pub fn write_fixture(dir: &Path, class: ClothingClass, seed: u64) -> (PathBuf, Fixture) {
    let fx = generate_seeded(class, seed);
    let png = dir.join(format!("{class}_{seed}.png"));
    fx.write(&png, &png.with_extension("truth.tsv")).unwrap();
    (png, fx)
}

pub fn training_set(dir: &Path) -> Vec<TrainingImage> {
    let mut images = Vec::new();
    for class in ClothingClass::ALL {
        for seed in TRAIN_SEEDS {
            let (path, _) = write_fixture(dir, class, seed);
            images.push(TrainingImage {
                path,
                label: class,
                kind: kind_for(seed),
            });
        }
    }
    images
}
