//! Reconstruction error near image borders.
//!
//! With zero padding, or with asymmetric filters under symmetric extension,
//! truncating each subband to `⌊n/2⌋` coefficients loses information that
//! only the border samples depend on. The error map of `idwt(dwt(x)) - x`
//! shows a band along the edges whose width grows with the filter length.

use crate::error::{Error, Result};
use crate::filters::WaveletSpec;
use crate::tensor::Tensor;

use super::{dwt, idwt, BoundaryMode};

/// Errors at or below this level count as exact reconstruction.
pub const BOUNDARY_TOL: f64 = 1e-10;

/// Per-pixel `|idwt(dwt(x)) - x|` for a single-channel 2D image given as
/// `[H, W]` or `[1, H, W]`. The result is `[H, W]`.
pub fn boundary_error_profile(x: &Tensor, w: &WaveletSpec, mode: BoundaryMode) -> Result<Tensor> {
    let img = match x.shape() {
        [_, _] => x.clone(),
        [1, h, w] => x.clone().reshape(&[*h, *w])?,
        s => {
            return Err(Error::shape(format!(
                "boundary profile needs a single-channel 2D image, got {s:?}"
            )))
        }
    };
    let rec = idwt(&dwt(&img, w, 2, mode)?, w)?;
    Ok(rec.sub(&img)?.map(f64::abs))
}

fn edge_distance(r: usize, c: usize, h: usize, w: usize) -> usize {
    r.min(c).min(h - 1 - r).min(w - 1 - c)
}

/// Smallest `b` such that every pixel at distance `>= b` from the nearest
/// edge has error `<= tol`; 0 when the whole image is exact.
pub fn affected_band_width(profile: &Tensor, tol: f64) -> Result<usize> {
    let (h, w) = dims2(profile)?;
    let mut width = 0;
    for (i, &e) in profile.data().iter().enumerate() {
        if e > tol {
            width = width.max(edge_distance(i / w, i % w, h, w) + 1);
        }
    }
    Ok(width)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryStats {
    pub affected_band_width: usize,
    /// Pixels at edge distance `>= margin`.
    pub max_interior_err: f64,
    /// Pixels at edge distance `< margin`.
    pub max_boundary_err: f64,
    pub margin: usize,
}

pub fn boundary_stats(profile: &Tensor, margin: usize, tol: f64) -> Result<BoundaryStats> {
    let (h, w) = dims2(profile)?;
    let mut interior: f64 = 0.0;
    let mut border: f64 = 0.0;
    for (i, &e) in profile.data().iter().enumerate() {
        if edge_distance(i / w, i % w, h, w) >= margin {
            interior = interior.max(e);
        } else {
            border = border.max(e);
        }
    }
    Ok(BoundaryStats {
        affected_band_width: affected_band_width(profile, tol)?,
        max_interior_err: interior,
        max_boundary_err: border,
        margin,
    })
}

fn dims2(t: &Tensor) -> Result<(usize, usize)> {
    match t.shape() {
        [h, w] => Ok((*h, *w)),
        s => Err(Error::shape(format!("expected [H, W], got {s:?}"))),
    }
}
