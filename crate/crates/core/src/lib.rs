//! Clothing classification with two Mamdani fuzzy inference systems.
//!
//! The first system turns per-pixel intensity gradients into an edge map.
//! The leftmost edge inside three horizontal bands of the image traces the
//! garment's outline; its slope in the first band (`m1`) and the difference
//! of mean outline columns between the first and second band (`meanVal`)
//! feed a second system, trained from labelled examples, whose crisp output
//! `itemIs` on [0, 1.5] is banded into shirt, dress or pants.

pub mod classify;
pub mod cli;
pub mod config;
pub mod edges;
pub mod error;
pub mod features;
pub mod fixtures;
pub mod fuzzy;
pub mod labels;
pub mod pipeline;
pub mod raster;
pub mod training;

pub use classify::{classify, classify_features, classify_image, label_for_score, Classification};
pub use config::PipelineConfig;
pub use edges::{edge_map, edge_response, gradients, whiten_border, EdgeFisConfig, EdgeMap, GradientPair};
pub use error::{Error, Result};
pub use features::{
    extract_features, fit_slope, leftmost_edge, mean_diff, CharacteristicCurve, Extraction, FeatureVector, Roi,
};
pub use fuzzy::{
    defuzz_centroid, Clause, Connective, FisOutput, FuzzyRule, FuzzyVariable, MamdaniFis, MembershipFunction,
    Universe,
};
pub use labels::{ClothingClass, ImageKind};
pub use raster::{load_and_gray, resize_canonical, GrayImage};
pub use training::{build_identify_fis, class_stats, load_model, save_model, train, ClassStats, TrainedModel};
