//! Seeded synthetic datasets and images for tests, examples and smoke runs.

use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::rng;
use crate::tabular::Dataset;
use crate::texture::GrayImage;

/// Two spherical unit-variance Gaussians whose means are `separation` apart
/// along the all-ones diagonal. Label 1 is the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TwoGaussians {
    pub rows: usize,
    pub positive_fraction: f64,
    pub dim: usize,
    pub separation: f64,
    pub seed: u64,
}

impl Default for TwoGaussians {
    fn default() -> Self {
        TwoGaussians {
            rows: 1000,
            positive_fraction: 0.06,
            dim: 2,
            separation: 2.0,
            seed: 0,
        }
    }
}

/// Positive rows come first; row order carries no other meaning.
pub fn two_gaussians(cfg: &TwoGaussians) -> Dataset {
    let mut rng = rng::stream(cfg.seed, "two_gaussians");
    let positives = (cfg.rows as f64 * cfg.positive_fraction).round() as usize;
    let shift = cfg.separation / (cfg.dim as f64).sqrt();
    let mut rows = Vec::with_capacity(cfg.rows);
    let mut labels = Vec::with_capacity(cfg.rows);
    for i in 0..cfg.rows {
        let positive = i < positives;
        let centre = if positive { shift } else { 0.0 };
        rows.push(
            (0..cfg.dim)
                .map(|_| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    centre + z
                })
                .collect(),
        );
        labels.push(u8::from(positive));
    }
    Dataset::continuous(rows, labels).expect("generated rows are rectangular")
}

/// Interleaving half circles: `n_maj` majority rows on the upper moon and
/// `n_min` minority rows (label 1) on the lower one, with Gaussian jitter.
pub fn two_moons(n_min: usize, n_maj: usize, noise: f64, seed: u64) -> Dataset {
    let mut rng = rng::stream(seed, "two_moons");
    let jitter = Normal::new(0.0, noise.max(0.0)).expect("non-negative noise");
    let mut rows = Vec::with_capacity(n_min + n_maj);
    let mut labels = Vec::with_capacity(n_min + n_maj);
    for i in 0..n_min + n_maj {
        let minority = i < n_min;
        let t = rng.random_range(0.0..std::f64::consts::PI);
        let (x, y) = if minority {
            (1.0 - t.cos(), 0.5 - t.sin())
        } else {
            (t.cos(), t.sin())
        };
        rows.push(vec![x + jitter.sample(&mut rng), y + jitter.sample(&mut rng)]);
        labels.push(u8::from(minority));
    }
    Dataset::continuous(rows, labels).expect("generated rows are rectangular")
}

/// An 8-bit mammogram-like test image: an elliptical foreground blob on a
/// black field plus a small bright tag in the top-left corner. The blob is a
/// smooth gradient when `textured` is false and a noisy fine-grained
/// checkerboard when it is true.
pub fn phantom_image(width: usize, height: usize, textured: bool, seed: u64) -> GrayImage {
    let mut rng = rng::stream(seed, "phantom_image");
    let (cx, cy) = (width as f64 * 0.55, height as f64 * 0.5);
    let (rx, ry) = (width as f64 * 0.4, height as f64 * 0.42);
    let mut pixels = vec![0u16; width * height];
    for y in 0..height {
        for x in 0..width {
            let dx = (x as f64 - cx) / rx;
            let dy = (y as f64 - cy) / ry;
            if dx * dx + dy * dy > 1.0 {
                continue;
            }
            let base = 150.0 + 40.0 * (y as f64 / height as f64);
            let value = if textured {
                let checker = if (x / 2 + y / 2) % 2 == 0 { 45.0 } else { -45.0 };
                base + checker + rng.random_range(-20.0..20.0)
            } else {
                base + rng.random_range(-2.0..2.0)
            };
            pixels[y * width + x] = value.clamp(1.0, 255.0) as u16;
        }
    }
    let tag = (width.min(height) / 12).max(1);
    for y in 1..1 + tag {
        for x in 1..1 + tag {
            if y < height && x < width {
                pixels[y * width + x] = 250;
            }
        }
    }
    GrayImage::new(width, height, 8, pixels).expect("phantom pixels are 8-bit")
}
