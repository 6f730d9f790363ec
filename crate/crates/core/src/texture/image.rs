use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// Row-major grayscale raster; every pixel is `< 2^bit_depth`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    bit_depth: u8,
    pixels: Vec<u16>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, bit_depth: u8, pixels: Vec<u16>) -> Result<Self> {
        if !(1..=16).contains(&bit_depth) {
            return Err(Error::InvalidInput(format!("bit depth must be 1..=16, got {bit_depth}")));
        }
        if width == 0 || height == 0 {
            return Err(Error::ImageTooSmall(format!("{width}x{height}")));
        }
        if pixels.len() != width * height {
            return Err(Error::DimensionMismatch {
                expected: width * height,
                found: pixels.len(),
            });
        }
        let limit = 1u32 << bit_depth;
        if let Some(p) = pixels.iter().find(|&&p| u32::from(p) >= limit) {
            return Err(Error::InvalidInput(format!("pixel {p} exceeds {bit_depth}-bit range")));
        }
        Ok(GrayImage {
            width,
            height,
            bit_depth,
            pixels,
        })
    }

    pub fn filled(width: usize, height: usize, bit_depth: u8, value: u16) -> Result<Self> {
        GrayImage::new(width, height, bit_depth, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bit_depth(&self) -> u8 {
        self.bit_depth
    }

    pub fn pixels(&self) -> &[u16] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> u16 {
        self.pixels[y * self.width + x]
    }

    /// Rows `start..end`, full width.
    pub fn crop_rows(&self, start: usize, end: usize) -> GrayImage {
        GrayImage {
            width: self.width,
            height: end - start,
            bit_depth: self.bit_depth,
            pixels: self.pixels[start * self.width..end * self.width].to_vec(),
        }
    }

    /// Quarter turn clockwise: `out(x', y') = in(y', H - 1 - x')`.
    pub fn rotate90(&self) -> GrayImage {
        let (w, h) = (self.height, self.width);
        let mut pixels = Vec::with_capacity(w * h);
        for y in 0..h {
            for x in 0..w {
                pixels.push(self.get(y, self.height - 1 - x));
            }
        }
        GrayImage {
            width: w,
            height: h,
            bit_depth: self.bit_depth,
            pixels,
        }
    }

    pub(crate) fn with_pixels(&self, pixels: Vec<u16>) -> GrayImage {
        debug_assert_eq!(pixels.len(), self.pixels.len());
        GrayImage { pixels, ..self.clone() }
    }

    fn max_value(&self) -> u32 {
        (1u32 << self.bit_depth) - 1
    }
}

fn depth_for_maxval(maxval: u32) -> u8 {
    (32 - maxval.leading_zeros()) as u8
}

struct Header {
    binary: bool,
    width: usize,
    height: usize,
    maxval: u32,
    data_start: usize,
}

fn parse_header(bytes: &[u8]) -> Result<Header> {
    let bad = |m: &str| Error::Pgm(m.to_string());
    let binary = match bytes.get(..2) {
        Some(b"P5") => true,
        Some(b"P2") => false,
        _ => return Err(bad("missing P2/P5 magic")),
    };
    let mut pos = 2;
    let mut fields = [0u32; 3];
    for field in fields.iter_mut() {
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                Some(_) => break,
                None => return Err(bad("truncated header")),
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        *field = std::str::from_utf8(&bytes[start..pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("malformed header number"))?;
    }
    if !bytes.get(pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(bad("header must end with whitespace"));
    }
    let [width, height, maxval] = fields;
    if maxval == 0 || maxval > 65535 {
        return Err(bad("maxval must be in 1..=65535"));
    }
    Ok(Header {
        binary,
        width: width as usize,
        height: height as usize,
        maxval,
        data_start: pos + 1,
    })
}

/// Parses P2 (ASCII) or P5 (binary, big-endian when `maxval > 255`) PGM.
/// The bit depth is the smallest one holding `maxval`.
pub fn parse_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let h = parse_header(bytes)?;
    let n = h.width * h.height;
    let data = &bytes[h.data_start.min(bytes.len())..];
    let pixels: Vec<u16> = if h.binary {
        let wide = h.maxval > 255;
        let need = if wide { 2 * n } else { n };
        if data.len() < need {
            return Err(Error::Pgm(format!("expected {need} data bytes, found {}", data.len())));
        }
        if wide {
            data[..need].chunks_exact(2).map(|c| u16::from_be_bytes([c[0], c[1]])).collect()
        } else {
            data[..n].iter().map(|&b| u16::from(b)).collect()
        }
    } else {
        let text = std::str::from_utf8(data).map_err(|_| Error::Pgm("non-ASCII P2 body".into()))?;
        let values: Vec<u16> = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .flat_map(str::split_ascii_whitespace)
            .map(|t| t.parse().map_err(|_| Error::Pgm(format!("bad pixel `{t}`"))))
            .collect::<Result<_>>()?;
        if values.len() < n {
            return Err(Error::Pgm(format!("expected {n} pixels, found {}", values.len())));
        }
        values[..n].to_vec()
    };
    if let Some(p) = pixels.iter().find(|&&p| u32::from(p) > h.maxval) {
        return Err(Error::Pgm(format!("pixel {p} exceeds maxval {}", h.maxval)));
    }
    GrayImage::new(h.width, h.height, depth_for_maxval(h.maxval), pixels)
}

pub fn read_pgm(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_pgm(&bytes)
}

/// Encodes with `maxval = 2^bit_depth - 1`.
pub fn encode_pgm(img: &GrayImage, binary: bool) -> Vec<u8> {
    let maxval = img.max_value();
    let mut out = format!("{}\n{} {}\n{}\n", if binary { "P5" } else { "P2" }, img.width, img.height, maxval).into_bytes();
    if binary {
        for &p in &img.pixels {
            if maxval > 255 {
                out.extend_from_slice(&p.to_be_bytes());
            } else {
                out.push(p as u8);
            }
        }
    } else {
        let mut text = String::new();
        for row in img.pixels.chunks(img.width) {
            for (i, p) in row.iter().enumerate() {
                if i > 0 {
                    text.push(' ');
                }
                write!(text, "{p}").expect("writing to a String");
            }
            text.push('\n');
        }
        out.extend_from_slice(text.as_bytes());
    }
    out
}

pub fn write_pgm(img: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, encode_pgm(img, true)).map_err(|e| Error::io(path, e))
}
