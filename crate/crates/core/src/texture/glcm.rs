use serde::{Deserialize, Serialize};

use super::image::GrayImage;
use crate::error::{Error, Result};

/// Unit offsets in output order, with their orientation in degrees (image
/// rows grow downward, so `(1, 1)` is the 135 degree diagonal).
pub const ORIENTATIONS: [((isize, isize), u16); 4] = [((1, 0), 0), ((1, 1), 135), ((0, 1), 90), ((-1, 1), 45)];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Glcm {
    pub levels: usize,
    /// Row-major `levels x levels`.
    pub matrix: Vec<f64>,
    pub offset: (isize, isize),
    pub normalized: bool,
}

impl Glcm {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.matrix[i * self.levels + j]
    }

    pub fn transpose(&self) -> Glcm {
        let g = self.levels;
        let mut matrix = vec![0.0; g * g];
        for i in 0..g {
            for j in 0..g {
                matrix[j * g + i] = self.at(i, j);
            }
        }
        Glcm { matrix, ..self.clone() }
    }
}

/// Uniform re-quantisation of `[0, 2^bit_depth)` into `levels` bins.
pub fn quantize(p: u16, bit_depth: u8, levels: usize) -> usize {
    ((u64::from(p) * levels as u64) >> bit_depth) as usize
}

/// Symmetric, normalised co-occurrence matrix at `offset`.
///
/// Only pairs with both pixels inside `mask` (when given) are counted.
pub fn glcm(img: &GrayImage, levels: usize, offset: (isize, isize), mask: Option<&[bool]>) -> Result<Glcm> {
    if levels < 2 {
        return Err(Error::InvalidInput(format!("levels must be at least 2, got {levels}")));
    }
    let (w, h) = (img.width() as isize, img.height() as isize);
    let (dx, dy) = offset;
    if dx.abs() >= w || dy.abs() >= h {
        return Err(Error::ImageTooSmall(format!("{w}x{h} for offset ({dx}, {dy})")));
    }
    if let Some(m) = mask {
        if m.len() != img.pixels().len() {
            return Err(Error::DimensionMismatch {
                expected: img.pixels().len(),
                found: m.len(),
            });
        }
    }
    let inside = |i: usize| mask.is_none_or(|m| m[i]);
    let q: Vec<usize> = img.pixels().iter().map(|&p| quantize(p, img.bit_depth(), levels)).collect();
    let mut counts = vec![0u64; levels * levels];
    for y in 0..h {
        let ny = y + dy;
        if ny < 0 || ny >= h {
            continue;
        }
        for x in 0..w {
            let nx = x + dx;
            if nx < 0 || nx >= w {
                continue;
            }
            let a = (y * w + x) as usize;
            let b = (ny * w + nx) as usize;
            if !(inside(a) && inside(b)) {
                continue;
            }
            counts[q[a] * levels + q[b]] += 1;
            counts[q[b] * levels + q[a]] += 1;
        }
    }
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::EmptyGlcm);
    }
    Ok(Glcm {
        levels,
        matrix: counts.iter().map(|&c| c as f64 / total as f64).collect(),
        offset,
        normalized: true,
    })
}

/// Haralick features `f1..=f13`, stored 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HaralickVector(pub [f64; 13]);

impl HaralickVector {
    /// One-based accessor matching the usual `f1..f13` numbering.
    pub fn f(&self, k: usize) -> f64 {
        self.0[k - 1]
    }
}

fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        p * p.ln()
    } else {
        0.0
    }
}

/// The thirteen Haralick statistics of a normalised GLCM.
///
/// Gray levels are indexed from 1, logs are natural with `0 ln 0 = 0`, sum
/// variance is centred on the sum average, correlation is 1 when either
/// marginal has zero variance, and IMC1 is 0 when both marginal entropies
/// vanish.
pub fn haralick13(g: &Glcm) -> Result<HaralickVector> {
    let n = g.levels;
    if g.matrix.len() != n * n {
        return Err(Error::DimensionMismatch {
            expected: n * n,
            found: g.matrix.len(),
        });
    }
    let total: f64 = g.matrix.iter().sum();
    if total == 0.0 || g.matrix.iter().all(|&p| p == 0.0) {
        return Err(Error::EmptyGlcm);
    }
    if !g.normalized || (total - 1.0).abs() > 1e-9 || g.matrix.iter().any(|&p| p < 0.0 || !p.is_finite()) {
        return Err(Error::NotNormalized);
    }
    let mut px = vec![0.0; n];
    let mut py = vec![0.0; n];
    let mut p_sum = vec![0.0; 2 * n + 1];
    let mut p_diff = vec![0.0; n];
    for i in 0..n {
        for j in 0..n {
            let p = g.at(i, j);
            px[i] += p;
            py[j] += p;
            p_sum[i + j + 2] += p;
            p_diff[i.abs_diff(j)] += p;
        }
    }
    let level = |i: usize| (i + 1) as f64;
    let mu_x: f64 = (0..n).map(|i| level(i) * px[i]).sum();
    let mu_y: f64 = (0..n).map(|j| level(j) * py[j]).sum();
    let sd_x = (0..n).map(|i| (level(i) - mu_x).powi(2) * px[i]).sum::<f64>().sqrt();
    let sd_y = (0..n).map(|j| (level(j) - mu_y).powi(2) * py[j]).sum::<f64>().sqrt();

    let mut f1 = 0.0;
    let mut f4 = 0.0;
    let mut f5 = 0.0;
    let mut f9 = 0.0;
    let mut cross = 0.0;
    let mut hxy1 = 0.0;
    let mut hxy2 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let p = g.at(i, j);
            let (a, b) = (level(i), level(j));
            f1 += p * p;
            f4 += (a - mu_x).powi(2) * p;
            f5 += p / (1.0 + (a - b).powi(2));
            f9 -= plogp(p);
            cross += a * b * p;
            let pp = px[i] * py[j];
            if pp > 0.0 {
                hxy1 -= p * pp.ln();
                hxy2 -= pp * pp.ln();
            }
        }
    }
    let f2: f64 = p_diff.iter().enumerate().map(|(k, &p)| (k * k) as f64 * p).sum();
    let f3 = if sd_x > 0.0 && sd_y > 0.0 {
        (cross - mu_x * mu_y) / (sd_x * sd_y)
    } else {
        1.0
    };
    let f6: f64 = p_sum.iter().enumerate().map(|(k, &p)| k as f64 * p).sum();
    let f7: f64 = p_sum.iter().enumerate().map(|(k, &p)| (k as f64 - f6).powi(2) * p).sum();
    let f8: f64 = -p_sum.iter().map(|&p| plogp(p)).sum::<f64>();
    let diff_mean: f64 = p_diff.iter().enumerate().map(|(k, &p)| k as f64 * p).sum();
    let f10: f64 = p_diff.iter().enumerate().map(|(k, &p)| (k as f64 - diff_mean).powi(2) * p).sum();
    let f11: f64 = -p_diff.iter().map(|&p| plogp(p)).sum::<f64>();
    let hx: f64 = -px.iter().map(|&p| plogp(p)).sum::<f64>();
    let hy: f64 = -py.iter().map(|&p| plogp(p)).sum::<f64>();
    let f12 = if hx.max(hy) > 0.0 { (f9 - hxy1) / hx.max(hy) } else { 0.0 };
    let f13 = (1.0 - (-2.0 * (hxy2 - f9)).exp()).clamp(0.0, 1.0).sqrt();
    Ok(HaralickVector([f1, f2, f3, f4, f5, f6, f7, f8, f9, f10, f11, f12, f13]))
}
