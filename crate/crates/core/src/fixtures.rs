//! Synthetic garment silhouettes with a known left outline.
//!
//! Each class is a piecewise-linear left boundary mirrored about the frame's
//! centre column, filled with a flat, striped or dotted texture on a white
//! background. Shirts flare outward through ROI 1 (negative slope) and narrow
//! to the torso by ROI 2; dresses taper through ROI 1 and flare into a skirt;
//! pants taper through ROI 1 and keep narrowing down the legs.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{CANONICAL_COLS, CANONICAL_ROWS};
use crate::error::{Error, Result};
use crate::labels::ClothingClass;
use crate::raster::GrayImage;

const CENTER: f64 = (CANONICAL_COLS as f64 - 1.0) / 2.0;

/// `(first_row, last_row, col_at_first, col_at_last)`, rows inclusive.
type Segment = (usize, usize, f64, f64);

const SHIRT: &[Segment] = &[
    (150, 329, 330.0, 226.0),
    (330, 520, 226.0, 131.0),
    (521, 1100, 300.0, 312.0),
];

const DRESS: &[Segment] = &[
    (120, 299, 330.0, 340.0),
    (300, 480, 340.0, 394.0),
    (481, 520, 394.0, 394.0),
    (521, 1420, 394.0, 220.0),
];

const PANTS: &[Segment] = &[
    (250, 329, 236.0, 230.0),
    (330, 520, 230.0, 268.0),
    (521, 1450, 262.0, 300.0),
];

// rows from which the pants legs separate
const CROTCH_ROW: usize = 620;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pattern {
    Solid,
    Stripes,
    Dots,
}

impl Pattern {
    pub fn as_str(self) -> &'static str {
        match self {
            Pattern::Solid => "solid",
            Pattern::Stripes => "stripes",
            Pattern::Dots => "dots",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixtureSpec {
    pub class: ClothingClass,
    /// Horizontal translation in columns.
    pub shift: i32,
    /// Horizontal scale about the centre column.
    pub scale: f64,
    pub pattern: Pattern,
    /// Darkest fill intensity.
    pub tone: f64,
}

impl FixtureSpec {
    pub fn nominal(class: ClothingClass) -> Self {
        FixtureSpec {
            class,
            shift: 0,
            scale: 1.0,
            pattern: Pattern::Solid,
            tone: 0.25,
        }
    }

    /// Seeded jitter around the nominal silhouette.
    pub fn from_seed(class: ClothingClass, seed: u64) -> Self {
        let salt = match class {
            ClothingClass::Shirt => 0x5348_4952,
            ClothingClass::Dress => 0x4452_4553,
            ClothingClass::Pants => 0x5041_4e54,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (salt << 20));
        FixtureSpec {
            class,
            shift: rng.gen_range(-30..=30),
            scale: rng.gen_range(0.94..1.06),
            pattern: match rng.gen_range(0..3) {
                0 => Pattern::Solid,
                1 => Pattern::Stripes,
                _ => Pattern::Dots,
            },
            tone: rng.gen_range(0.1..0.45),
        }
    }

    fn segments(&self) -> &'static [Segment] {
        match self.class {
            ClothingClass::Shirt => SHIRT,
            ClothingClass::Dress => DRESS,
            ClothingClass::Pants => PANTS,
        }
    }

    fn to_frame(self, col: f64) -> i64 {
        (CENTER + self.scale * (col - CENTER)).round() as i64
    }

    /// Unshifted `(left, right)` columns for a garment row.
    fn span(&self, row: usize) -> Option<(i64, i64)> {
        let &(r0, r1, c0, c1) = self.segments().iter().find(|s| (s.0..=s.1).contains(&row))?;
        let t = if r1 == r0 { 0.0 } else { (row - r0) as f64 / (r1 - r0) as f64 };
        let left = self.to_frame(c0 + t * (c1 - c0));
        Some((left, CANONICAL_COLS as i64 - 1 - left))
    }

    fn leg_gap(&self, row: usize) -> f64 {
        if self.class == ClothingClass::Pants && row >= CROTCH_ROW {
            self.scale * (4.0 + 0.06 * (row - CROTCH_ROW) as f64)
        } else {
            0.0
        }
    }

    fn fill(&self, row: usize, col: i64) -> f64 {
        let light = (self.tone + 0.3).min(0.75);
        match self.pattern {
            Pattern::Solid => self.tone,
            Pattern::Stripes => {
                if (row / 24).is_multiple_of(2) {
                    self.tone
                } else {
                    (self.tone + 0.25).min(0.75)
                }
            }
            Pattern::Dots => {
                let (dy, dx) = ((row % 32) as i64 - 16, col.rem_euclid(32) - 16);
                if dy * dy + dx * dx <= 36 {
                    light
                } else {
                    self.tone
                }
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub spec: FixtureSpec,
    pub seed: Option<u64>,
    pub image: GrayImage,
    /// Ground-truth left outline `(row, col)` for every garment row.
    pub boundary: Vec<(usize, usize)>,
}

pub fn generate(spec: &FixtureSpec) -> Fixture {
    let mut image = GrayImage::filled(CANONICAL_ROWS, CANONICAL_COLS, 1.0).expect("canonical size");
    let mut boundary = Vec::new();
    let shift = spec.shift as i64;
    for r in 0..CANONICAL_ROWS {
        let Some((left, right)) = spec.span(r) else { continue };
        let gap = spec.leg_gap(r);
        let (left, right) = (left + shift, right + shift);
        let row = image.row_mut(r);
        for c in left.max(0)..=right.min(CANONICAL_COLS as i64 - 1) {
            if gap > 0.0 && ((c - shift) as f64 - CENTER).abs() < gap {
                continue;
            }
            row[c as usize] = spec.fill(r, c - shift);
        }
        boundary.push((r, left.max(0) as usize));
    }
    Fixture {
        spec: *spec,
        seed: None,
        image,
        boundary,
    }
}

pub fn generate_seeded(class: ClothingClass, seed: u64) -> Fixture {
    Fixture {
        seed: Some(seed),
        ..generate(&FixtureSpec::from_seed(class, seed))
    }
}

/// Replaces pure-white background with `1 − u`, `u` uniform in `[0, amplitude)`.
pub fn add_background_noise(img: &mut GrayImage, amplitude: f64, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for v in img.data_mut() {
        if *v == 1.0 && amplitude > 0.0 {
            *v = 1.0 - rng.gen_range(0.0..amplitude);
        }
    }
}

impl Fixture {
    pub fn truth_text(&self) -> String {
        let s = &self.spec;
        let mut out = String::new();
        let seed = self.seed.map(|v| v.to_string()).unwrap_or_else(|| "none".into());
        let _ = writeln!(
            out,
            "# class={} seed={seed} shift={} scale={} pattern={} tone={}",
            s.class,
            s.shift,
            s.scale,
            s.pattern.as_str(),
            s.tone
        );
        out.push_str("row\tcol\n");
        for &(r, c) in &self.boundary {
            let _ = writeln!(out, "{r}\t{c}");
        }
        out
    }

    /// Writes the PNG and its ground-truth outline.
    pub fn write(&self, png: &Path, truth: &Path) -> Result<()> {
        self.image.save_png(png)?;
        let mut file = std::fs::File::create(truth).map_err(|e| Error::io(truth, e))?;
        file.write_all(self.truth_text().as_bytes())
            .map_err(|e| Error::io(truth, e))
    }
}

/// Parses the `row\tcol` records written by [`Fixture::write`].
pub fn read_truth(path: &Path) -> Result<Vec<(usize, usize)>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("row") && !l.trim().is_empty())
        .map(|l| {
            let mut it = l.split('\t').map(|f| f.trim().parse::<usize>());
            match (it.next(), it.next()) {
                (Some(Ok(r)), Some(Ok(c))) => Ok((r, c)),
                _ => Err(Error::InvalidImage(format!("bad truth record {l:?}"))),
            }
        })
        .collect()
}
