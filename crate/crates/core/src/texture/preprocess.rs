use std::collections::VecDeque;

use super::image::GrayImage;
use crate::error::{Error, Result};

/// Median over a `window x window` neighbourhood with clamped edges.
pub fn median_filter(img: &GrayImage, window: usize) -> Result<GrayImage> {
    if window < 3 || window.is_multiple_of(2) {
        return Err(Error::InvalidWindow(window));
    }
    let r = (window / 2) as isize;
    let (w, h) = (img.width() as isize, img.height() as isize);
    let mut buf = Vec::with_capacity(window * window);
    let mut out = Vec::with_capacity(img.pixels().len());
    for y in 0..h {
        for x in 0..w {
            buf.clear();
            for dy in -r..=r {
                let yy = (y + dy).clamp(0, h - 1) as usize;
                for dx in -r..=r {
                    let xx = (x + dx).clamp(0, w - 1) as usize;
                    buf.push(img.get(xx, yy));
                }
            }
            let mid = buf.len() / 2;
            out.push(*buf.select_nth_unstable(mid).1);
        }
    }
    Ok(img.with_pixels(out))
}

/// Otsu threshold: the level `t` maximising between-class variance of
/// `{p <= t}` vs `{p > t}` (first maximum). `None` for a single-valued image.
pub fn otsu_threshold(img: &GrayImage) -> Option<u16> {
    let bins = 1usize << img.bit_depth();
    let mut hist = vec![0u64; bins];
    for &p in img.pixels() {
        hist[p as usize] += 1;
    }
    if hist.iter().filter(|&&c| c > 0).count() < 2 {
        return None;
    }
    let total = img.pixels().len() as f64;
    let sum_all: f64 = hist.iter().enumerate().map(|(i, &c)| i as f64 * c as f64).sum();
    let (mut w0, mut sum0) = (0.0, 0.0);
    let mut best = (f64::NEG_INFINITY, 0u16);
    for (t, &c) in hist.iter().enumerate().take(bins - 1) {
        w0 += c as f64;
        sum0 += t as f64 * c as f64;
        let w1 = total - w0;
        if w0 == 0.0 || w1 == 0.0 {
            continue;
        }
        let diff = sum0 / w0 - (sum_all - sum0) / w1;
        let between = w0 * w1 * diff * diff;
        if between > best.0 {
            best = (between, t as u16);
        }
    }
    Some(best.1)
}

/// Labels 8-connected `true` regions; returns the largest (earliest in
/// raster order on ties) as a mask.
pub fn largest_component(mask: &[bool], width: usize, height: usize) -> Vec<bool> {
    let mut label = vec![0u32; mask.len()];
    let mut best = (0usize, 0u32);
    let mut next = 0u32;
    let mut queue = VecDeque::new();
    for start in 0..mask.len() {
        if !mask[start] || label[start] != 0 {
            continue;
        }
        next += 1;
        label[start] = next;
        queue.push_back(start);
        let mut size = 0;
        while let Some(i) = queue.pop_front() {
            size += 1;
            let (x, y) = ((i % width) as isize, (i / width) as isize);
            for dy in -1..=1isize {
                for dx in -1..=1isize {
                    let (nx, ny) = (x + dx, y + dy);
                    if nx < 0 || ny < 0 || nx >= width as isize || ny >= height as isize {
                        continue;
                    }
                    let j = ny as usize * width + nx as usize;
                    if mask[j] && label[j] == 0 {
                        label[j] = next;
                        queue.push_back(j);
                    }
                }
            }
        }
        if size > best.0 {
            best = (size, next);
        }
    }
    label.iter().map(|&l| l != 0 && l == best.1).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Suppressed {
    pub image: GrayImage,
    /// Foreground pixels, row-major.
    pub mask: Vec<bool>,
    pub threshold: Option<u16>,
    pub warning: Option<String>,
}

/// Zeroes everything outside the largest Otsu-foreground component.
pub fn suppress_background(img: &GrayImage) -> Suppressed {
    let Some(t) = otsu_threshold(img) else {
        let warning = "uniform image: threshold undefined, background left in place".to_string();
        log::warn!("{warning}");
        return Suppressed {
            image: img.clone(),
            mask: vec![true; img.pixels().len()],
            threshold: None,
            warning: Some(warning),
        };
    };
    let foreground: Vec<bool> = img.pixels().iter().map(|&p| p > t).collect();
    let mask = largest_component(&foreground, img.width(), img.height());
    let pixels = img.pixels().iter().zip(&mask).map(|(&p, &keep)| if keep { p } else { 0 }).collect();
    Suppressed {
        image: img.with_pixels(pixels),
        mask,
        threshold: Some(t),
        warning: None,
    }
}

/// Row ranges `[start, end)` of the top, mid and bottom segments.
///
/// Each spans `h = ceil(H (1 + 2 overlap) / 3)` rows; mid starts at
/// `(H - h) / 2` and bottom ends at `H`.
pub fn segment_rows(height: usize, overlap_fraction: f64) -> Result<[(usize, usize); 3]> {
    if height < 9 {
        return Err(Error::ImageTooSmall(format!("height {height} < 9")));
    }
    if !(0.0..0.5).contains(&overlap_fraction) {
        return Err(Error::InvalidInput(format!("overlap_fraction must be in [0, 0.5), got {overlap_fraction}")));
    }
    let exact = height as f64 * (1.0 + 2.0 * overlap_fraction) / 3.0;
    let h = ((exact - 1e-9).ceil() as usize).min(height);
    let mid = (height - h) / 2;
    Ok([(0, h), (mid, mid + h), (height - h, height)])
}

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentSet {
    pub whole: GrayImage,
    pub top: GrayImage,
    pub mid: GrayImage,
    pub bottom: GrayImage,
    pub overlap_fraction: f64,
    pub rows: [(usize, usize); 3],
}

pub fn segment_thirds(img: &GrayImage, overlap_fraction: f64) -> Result<SegmentSet> {
    let rows = segment_rows(img.height(), overlap_fraction)?;
    let [t, m, b] = rows;
    Ok(SegmentSet {
        whole: img.clone(),
        top: img.crop_rows(t.0, t.1),
        mid: img.crop_rows(m.0, m.1),
        bottom: img.crop_rows(b.0, b.1),
        overlap_fraction,
        rows,
    })
}
