mod common;

use closet_core::classify::classify_image;
use closet_core::fixtures::{add_background_noise, generate_seeded, read_truth};
use closet_core::pipeline::{analyze, analyze_path};
use closet_core::training::{load_model, save_model, train, TrainingOutcome};
use closet_core::{classify, ClothingClass, ImageKind, PipelineConfig};
use proptest::prelude::*;

fn trained(dir: &std::path::Path) -> TrainingOutcome {
    let images = common::training_set(dir);
    train(&images, &PipelineConfig::default()).unwrap()
}

#[test]
fn held_out_sweep_is_classified_correctly() {
    let dir = tempfile::tempdir().unwrap();
    let model = trained(dir.path()).model;
    let mut wrong = Vec::new();
    for class in ClothingClass::ALL {
        for seed in 200..215 {
            let fx = generate_seeded(class, seed);
            let c = classify_image(&fx.image, &model, ImageKind::UserPhoto).unwrap();
            if c.label != class || c.indeterminate {
                wrong.push(format!("{class} seed {seed}: {} score {:.3} m1 {:.3} mv {:.1}", c.label, c.score, c.features.m1, c.features.mean_val));
            }
        }
    }
    assert!(wrong.is_empty(), "{wrong:#?}");
}

#[test]
fn training_report_keeps_manifest_order() {
    let dir = tempfile::tempdir().unwrap();
    let images = common::training_set(dir.path());
    let outcome = train(&images, &PipelineConfig::default()).unwrap();
    assert_eq!(outcome.report.len(), 12);
    for (entry, img) in outcome.report.iter().zip(&images) {
        assert_eq!(entry.image, *img);
        assert!(entry.outcome.is_ok());
    }
    let stats = &outcome.model.stats;
    assert!(stats.shirt_m1.mean < 0.0);
    assert!(stats.dress_m1.mean > 0.0 && stats.pants_m1.mean > 0.0);
    assert!(stats.dress_mean_val.mean > 0.0 && stats.pants_mean_val.mean < 0.0);
}

#[test]
fn saved_model_classifies_identically() {
    let dir = tempfile::tempdir().unwrap();
    let model = trained(dir.path()).model;
    let path = dir.path().join("model.toml");
    save_model(&model, &path).unwrap();
    let loaded = load_model(&path).unwrap();
    assert_eq!(loaded, model);
    for &(class, seed) in &common::HELD_OUT {
        let (png, _) = common::write_fixture(dir.path(), class, seed);
        let a = classify(&png, &model, ImageKind::UserPhoto).unwrap();
        let b = classify(&png, &loaded, ImageKind::UserPhoto).unwrap();
        assert_eq!(a.score.to_bits(), b.score.to_bits());
        assert_eq!(a.label, b.label);
        assert_eq!(a.features, b.features);
    }
}

#[test]
fn png_round_trip_preserves_features() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = PipelineConfig::default();
    for class in ClothingClass::ALL {
        let (png, fx) = common::write_fixture(dir.path(), class, 7);
        let from_disk = analyze_path(&png, ImageKind::UserPhoto, &cfg).unwrap();
        let in_memory = analyze(&fx.image, ImageKind::UserPhoto, &cfg).unwrap();
        assert!((from_disk.features.m1 - in_memory.features.m1).abs() < 1e-9);
        assert!((from_disk.features.mean_val - in_memory.features.mean_val).abs() < 1e-9);
        assert_eq!(read_truth(&png.with_extension("truth.tsv")).unwrap(), fx.boundary);
    }
}

#[test]
fn faint_background_noise_does_not_change_labels() {
    let dir = tempfile::tempdir().unwrap();
    let model = trained(dir.path()).model;
    for (i, &(class, seed)) in common::HELD_OUT.iter().enumerate() {
        let fx = generate_seeded(class, seed);
        let clean = classify_image(&fx.image, &model, ImageKind::Template).unwrap();
        let mut noisy = fx.image.clone();
        add_background_noise(&mut noisy, 0.019, 1000 + i as u64);
        let c = classify_image(&noisy, &model, ImageKind::Template).unwrap();
        assert_eq!(c.label, class);
        assert_eq!(c.label, clean.label);
        assert_eq!(c.features, clean.features);
    }
}

#[test]
fn blank_image_reports_a_path() {
    let dir = tempfile::tempdir().unwrap();
    let png = dir.path().join("blank.png");
    closet_core::GrayImage::filled(300, 200, 1.0).unwrap().save_png(&png).unwrap();
    let err = analyze_path(&png, ImageKind::UserPhoto, &PipelineConfig::default()).unwrap_err();
    assert!(err.to_string().contains("blank.png"), "{err}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn features_survive_horizontal_shifts(class in 0..3usize, seed in 0..1000u64, shift in -25..=25i32) {
        let cfg = PipelineConfig::default();
        let class = ClothingClass::ALL[class];
        let spec = closet_core::fixtures::FixtureSpec::from_seed(class, seed);
        let moved = closet_core::fixtures::FixtureSpec { shift: (spec.shift + shift).clamp(-30, 30), ..spec };
        let a = analyze(&closet_core::fixtures::generate(&spec).image, ImageKind::UserPhoto, &cfg).unwrap();
        let b = analyze(&closet_core::fixtures::generate(&moved).image, ImageKind::UserPhoto, &cfg).unwrap();
        prop_assert!((a.features.m1 - b.features.m1).abs() < 1e-9);
        prop_assert!((a.features.mean_val - b.features.mean_val).abs() < 1e-9);
    }
}
