//! Binary PGM (P5) and PPM (P6) with maxval 255.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use wavesnet::Tensor;

#[derive(Clone, Debug, PartialEq)]
pub struct Image {
    /// `[C, H, W]`, C in {1, 3}, values in `[0, 1]`.
    pub pixels: Tensor,
    pub maxval: u16,
}

/// Rejected image content, as opposed to an IO failure.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct PnmError(pub String);

fn bad(msg: impl Into<String>) -> anyhow::Error {
    PnmError(msg.into()).into()
}

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Header<'_> {
    fn skip_space(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while self.bytes.get(self.pos).is_some_and(|&c| c != b'\n') {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self) -> Result<usize> {
        self.skip_space();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("malformed PNM header"))
    }
}

pub fn decode(bytes: &[u8]) -> Result<Image> {
    let channels = match bytes.get(..2) {
        Some(b"P5") => 1,
        Some(b"P6") => 3,
        _ => return Err(bad("not a binary PGM/PPM file (expected P5 or P6)")),
    };
    let mut h = Header { bytes, pos: 2 };
    let width = h.number()?;
    let height = h.number()?;
    let maxval = h.number()?;
    if maxval != 255 {
        return Err(bad(format!("maxval {maxval} is not supported (only 255)")));
    }
    if width == 0 || height == 0 {
        return Err(bad("image has a zero dimension"));
    }
    // Exactly one whitespace byte separates the header from the raster.
    if !bytes.get(h.pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(bad("malformed PNM header"));
    }
    let raster = &bytes[h.pos + 1..];
    let n = width * height * channels;
    if raster.len() != n {
        return Err(bad(format!("expected {n} raster bytes, found {}", raster.len())));
    }
    let plane = width * height;
    let pixels = Tensor::from_fn(&[channels, height, width], |i| {
        let (c, p) = (i / plane, i % plane);
        f64::from(raster[p * channels + c]) / 255.0
    })?;
    Ok(Image { pixels, maxval: 255 })
}

/// Values are clamped to `[0, 1]` and rounded to the nearest level.
pub fn encode(pixels: &Tensor) -> Result<Vec<u8>> {
    let (c, h, w) = match pixels.shape() {
        &[c @ (1 | 3), h, w] => (c, h, w),
        &[h, w] => (1, h, w),
        s => bail!(bad(format!("cannot write a {s:?} tensor as PGM/PPM"))),
    };
    let mut out = format!("{}\n{w} {h}\n255\n", if c == 1 { "P5" } else { "P6" }).into_bytes();
    let plane = w * h;
    let d = pixels.data();
    for p in 0..plane {
        for ch in 0..c {
            out.push(quantize(d[ch * plane + p]));
        }
    }
    Ok(out)
}

pub fn quantize(v: f64) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}

pub fn read(path: &Path) -> Result<Image> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    decode(&bytes).with_context(|| format!("decoding {}", path.display()))
}

pub fn write(path: &Path, pixels: &Tensor) -> Result<()> {
    fs::write(path, encode(pixels)?).with_context(|| format!("writing {}", path.display()))
}
