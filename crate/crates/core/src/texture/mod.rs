//! Grayscale image to Haralick feature vectors.
//!
//! Pipeline: [`median_filter`], [`suppress_background`], [`segment_thirds`],
//! then for each of the four unit offsets in [`ORIENTATIONS`] a masked
//! [`glcm`] and its [`haralick13`] vector. Every image or segment yields 52
//! values, orientation-major.

mod glcm;
mod image;
mod preprocess;

use serde::{Deserialize, Serialize};

pub use glcm::{glcm, haralick13, quantize, Glcm, HaralickVector, ORIENTATIONS};
pub use image::{encode_pgm, parse_pgm, read_pgm, write_pgm, GrayImage};
pub use preprocess::{
    largest_component, median_filter, otsu_threshold, segment_rows, segment_thirds, suppress_background, SegmentSet, Suppressed,
};

use crate::error::Result;

pub const FEATURES_PER_ORIENTATION: usize = 13;
pub const FEATURES_PER_RECORD: usize = 4 * FEATURES_PER_ORIENTATION;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TextureConfig {
    pub levels: usize,
    pub median_window: usize,
    pub overlap_fraction: f64,
    pub suppress_background: bool,
}

impl Default for TextureConfig {
    fn default() -> Self {
        TextureConfig {
            levels: 8,
            median_window: 3,
            overlap_fraction: 0.1,
            suppress_background: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Segment {
    Whole,
    Top,
    Mid,
    Bottom,
}

impl Segment {
    pub fn name(self) -> &'static str {
        match self {
            Segment::Whole => "whole",
            Segment::Top => "top",
            Segment::Mid => "mid",
            Segment::Bottom => "bottom",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRecord {
    pub segment: Segment,
    /// `FEATURES_PER_RECORD` values; see [`feature_names`].
    pub values: Vec<f64>,
}

/// `f_<degrees>_<k>` for every orientation and `k` in `1..=13`.
pub fn feature_names() -> Vec<String> {
    ORIENTATIONS
        .iter()
        .flat_map(|(_, deg)| (1..=FEATURES_PER_ORIENTATION).map(move |k| format!("f_{deg}_{k}")))
        .collect()
}

/// 52 values: `haralick13` at each orientation, orientation-major.
pub fn orientation_features(img: &GrayImage, mask: Option<&[bool]>, levels: usize) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(FEATURES_PER_RECORD);
    for (offset, _) in ORIENTATIONS {
        out.extend_from_slice(&haralick13(&glcm(img, levels, offset, mask)?)?.0);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Preprocessed {
    pub image: GrayImage,
    pub mask: Vec<bool>,
    pub warnings: Vec<String>,
}

/// Median filter, then (if enabled) background suppression.
pub fn preprocess(img: &GrayImage, cfg: &TextureConfig) -> Result<Preprocessed> {
    let filtered = median_filter(img, cfg.median_window)?;
    if !cfg.suppress_background {
        let mask = vec![true; filtered.pixels().len()];
        return Ok(Preprocessed {
            image: filtered,
            mask,
            warnings: Vec::new(),
        });
    }
    let s = suppress_background(&filtered);
    Ok(Preprocessed {
        image: s.image,
        mask: s.mask,
        warnings: s.warning.into_iter().collect(),
    })
}

/// Records for the whole image and its top, mid and bottom segments, in that
/// order. `mask` restricts co-occurrence pairs to foreground pixels.
pub fn extract_features(img: &GrayImage, mask: Option<&[bool]>, cfg: &TextureConfig) -> Result<Vec<FeatureRecord>> {
    let segments = segment_thirds(img, cfg.overlap_fraction)?;
    let w = img.width();
    let mut out = vec![FeatureRecord {
        segment: Segment::Whole,
        values: orientation_features(img, mask, cfg.levels)?,
    }];
    let parts = [(Segment::Top, &segments.top), (Segment::Mid, &segments.mid), (Segment::Bottom, &segments.bottom)];
    for ((segment, part), (start, end)) in parts.into_iter().zip(segments.rows) {
        let sub_mask = mask.map(|m| &m[start * w..end * w]);
        out.push(FeatureRecord {
            segment,
            values: orientation_features(part, sub_mask, cfg.levels)?,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth;

    #[test]
    fn names_cover_every_value() {
        let names = feature_names();
        assert_eq!(names.len(), FEATURES_PER_RECORD);
        assert_eq!(names[0], "f_0_1");
        assert_eq!(names[13], "f_135_1");
        assert_eq!(names[51], "f_45_13");
    }

    #[test]
    fn constant_image_repeats_the_closed_form() {
        let img = GrayImage::filled(20, 30, 8, 128).unwrap();
        let recs = extract_features(&img, None, &TextureConfig::default()).unwrap();
        assert_eq!(recs.len(), 4);
        for rec in &recs {
            assert_eq!(rec.values.len(), 52);
            for block in rec.values.chunks(13) {
                assert_eq!((block[0], block[1], block[8]), (1.0, 0.0, 0.0));
                assert_eq!(block, &rec.values[..13]);
            }
        }
    }

    #[test]
    fn quarter_turn_swaps_orientation_blocks() {
        let img = synth::phantom_image(40, 40, true, 9);
        let a = orientation_features(&img, None, 8).unwrap();
        let b = orientation_features(&img.rotate90(), None, 8).unwrap();
        let block = |v: &[f64], i: usize| v[13 * i..13 * (i + 1)].to_vec();
        let close = |x: Vec<f64>, y: Vec<f64>| x.iter().zip(&y).all(|(p, q)| (p - q).abs() < 1e-9);
        // 0 <-> 90 and 135 <-> 45
        assert!(close(block(&a, 0), block(&b, 2)));
        assert!(close(block(&a, 2), block(&b, 0)));
        assert!(close(block(&a, 1), block(&b, 3)));
        assert!(close(block(&a, 3), block(&b, 1)));
    }

    #[test]
    fn textured_and_flat_phantoms_differ() {
        let cfg = TextureConfig::default();
        let run = |textured| {
            let p = preprocess(&synth::phantom_image(64, 64, textured, 1), &cfg).unwrap();
            extract_features(&p.image, Some(&p.mask), &cfg).unwrap()
        };
        let (flat, tex) = (run(false), run(true));
        assert_ne!(flat[0].values, tex[0].values);
        assert!(tex[0].values[1] > flat[0].values[1]);
    }
}
