//! Forward and inverse discrete wavelet transforms over multi-channel
//! tensors.
//!
//! A `dim`-D transform acts on the trailing `dim` axes of a tensor; every
//! leading axis is a channel (or batch) axis and is transformed
//! independently. Each spatial extent `n` yields `⌊n/2⌋` coefficients per
//! subband. Analysis correlates the extended signal at stride 2 starting at
//! offset 0 (periodic and zero modes). Symmetric mode centres symmetric
//! filters instead, which is what makes the symmetric extension
//! non-expansive and the round trip exact for Haar and the Cohen family.
//!
//! Odd extents are accepted; the subbands remember the original extent and
//! reconstruction returns a tensor of exactly that size, though only even
//! extents are guaranteed to reconstruct perfectly.

mod boundary;
mod io;
mod plan;

use std::fmt;
use std::str::FromStr;

pub use boundary::{
    affected_band_width, boundary_error_profile, boundary_stats, BoundaryStats, BOUNDARY_TOL,
};
pub use plan::DwtPlan;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::filters::{BandTag, WaveletSpec};
use crate::tensor::Tensor;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum BoundaryMode {
    Periodic,
    #[default]
    Symmetric,
    Zero,
}

impl BoundaryMode {
    pub const ALL: [BoundaryMode; 3] = [
        BoundaryMode::Periodic,
        BoundaryMode::Symmetric,
        BoundaryMode::Zero,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundaryMode::Periodic => "periodic",
            BoundaryMode::Symmetric => "symmetric",
            BoundaryMode::Zero => "zero",
        }
    }
}

impl fmt::Display for BoundaryMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundaryMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "periodic" => Ok(BoundaryMode::Periodic),
            "symmetric" => Ok(BoundaryMode::Symmetric),
            "zero" => Ok(BoundaryMode::Zero),
            _ => Err(Error::arg(format!(
                "unknown boundary mode `{s}` (expected periodic, symmetric or zero)"
            ))),
        }
    }
}

/// One level of decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct Subbands {
    pub dim: usize,
    pub low: Tensor,
    /// The `2^dim - 1` detail bands in [`BandTag::all`] order.
    pub highs: Vec<(BandTag, Tensor)>,
    pub mode: BoundaryMode,
    pub wavelet: String,
    /// Spatial extents of the transformed input.
    pub original_extent: Vec<usize>,
}

impl Subbands {
    /// All bands, low first.
    pub fn bands(&self) -> impl Iterator<Item = (BandTag, &Tensor)> {
        std::iter::once((BandTag::low(self.dim), &self.low))
            .chain(self.highs.iter().map(|(t, x)| (*t, x)))
    }

    pub fn band(&self, tag: BandTag) -> Option<&Tensor> {
        self.bands().find(|(t, _)| *t == tag).map(|(_, x)| x)
    }

    /// Shape of the tensor these subbands came from.
    pub fn input_shape(&self) -> Vec<usize> {
        let rank = self.low.rank();
        let mut shape = self.low.shape()[..rank - self.dim].to_vec();
        shape.extend_from_slice(&self.original_extent);
        shape
    }

    /// Sum of squared coefficients over every band.
    pub fn energy(&self) -> f64 {
        self.bands().map(|(_, x)| x.norm_sq()).sum()
    }

    /// Applies `f` to every band, keeping the metadata.
    pub fn map_bands(&self, mut f: impl FnMut(BandTag, &Tensor) -> Tensor) -> Subbands {
        Subbands {
            low: f(BandTag::low(self.dim), &self.low),
            highs: self.highs.iter().map(|(t, x)| (*t, f(*t, x))).collect(),
            ..self.clone()
        }
    }

    /// Checks the structural invariants: complete unique tags, equal band
    /// shapes and `⌊n/2⌋` sizing.
    pub fn check(&self) -> Result<()> {
        if !(1..=3).contains(&self.dim) {
            return Err(Error::shape(format!("bad subband dim {}", self.dim)));
        }
        let want_tags = &BandTag::all(self.dim)[1..];
        let tags: Vec<BandTag> = self.highs.iter().map(|h| h.0).collect();
        if tags != want_tags {
            return Err(Error::shape(format!(
                "detail bands {:?} do not match the {}D set",
                tags.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                self.dim
            )));
        }
        if self.original_extent.len() != self.dim || self.low.rank() < self.dim {
            return Err(Error::shape("subband rank does not match dim"));
        }
        let rank = self.low.rank();
        let spatial = &self.low.shape()[rank - self.dim..];
        for (&b, &n) in spatial.iter().zip(&self.original_extent) {
            if b != n / 2 {
                return Err(Error::shape(format!(
                    "band extent {b} is not floor({n}/2)"
                )));
            }
        }
        for (tag, h) in &self.highs {
            if h.shape() != self.low.shape() {
                return Err(Error::shape(format!(
                    "band {tag} has shape {:?}, low band has {:?}",
                    h.shape(),
                    self.low.shape()
                )));
            }
        }
        Ok(())
    }
}

fn from_components(plan: &DwtPlan, comps: Vec<Tensor>) -> Subbands {
    let dim = plan.dim();
    let mut it = comps.into_iter();
    let low = it.next().expect("low band");
    let rank = plan.input_shape().len();
    Subbands {
        dim,
        low,
        highs: BandTag::all(dim)[1..].iter().copied().zip(it).collect(),
        mode: plan.mode(),
        wavelet: plan.wavelet().to_string(),
        original_extent: plan.input_shape()[rank - dim..].to_vec(),
    }
}

fn plan_for(s: &Subbands, w: &WaveletSpec) -> Result<DwtPlan> {
    s.check()?;
    if s.wavelet != w.name {
        return Err(Error::arg(format!(
            "subbands were produced with `{}`, not `{}`",
            s.wavelet, w.name
        )));
    }
    DwtPlan::new(w, s.dim, s.mode, &s.input_shape())
}

pub fn dwt(x: &Tensor, w: &WaveletSpec, dim: usize, mode: BoundaryMode) -> Result<Subbands> {
    dwt_with(x, w, dim, mode, Exec::default())
}

pub fn dwt_with(
    x: &Tensor,
    w: &WaveletSpec,
    dim: usize,
    mode: BoundaryMode,
    exec: Exec,
) -> Result<Subbands> {
    let plan = DwtPlan::new(w, dim, mode, x.shape())?;
    Ok(from_components(&plan, plan.forward(x, exec)?))
}

pub fn idwt(s: &Subbands, w: &WaveletSpec) -> Result<Tensor> {
    idwt_with(s, w, Exec::default())
}

pub fn idwt_with(s: &Subbands, w: &WaveletSpec, exec: Exec) -> Result<Tensor> {
    let plan = plan_for(s, w)?;
    let bands: Vec<&Tensor> = s.bands().map(|b| b.1).collect();
    plan.inverse(&bands, exec)
}

/// Adjoint of [`dwt`]: maps a subband-shaped cotangent back to input space,
/// so that `<dwt(x), y> == <x, dwt_adjoint(y)>`.
pub fn dwt_adjoint(cot: &Subbands, w: &WaveletSpec) -> Result<Tensor> {
    let plan = plan_for(cot, w)?;
    let exec = Exec::default();
    let mut acc = Tensor::zeros(plan.input_shape())?;
    for (tag, g) in cot.bands() {
        acc.axpy(1.0, &plan.forward_adjoint_band(tag, g, exec)?)?;
    }
    Ok(acc)
}

/// Adjoint of [`idwt`] for subbands of the given layout, so that
/// `<idwt(s), g> == <s, idwt_adjoint(g)>`.
pub fn idwt_adjoint(g: &Tensor, w: &WaveletSpec, dim: usize, mode: BoundaryMode) -> Result<Subbands> {
    let plan = DwtPlan::new(w, dim, mode, g.shape())?;
    let exec = Exec::default();
    let comps = BandTag::all(dim)
        .into_iter()
        .map(|tag| plan.inverse_adjoint_band(tag, g, exec))
        .collect::<Result<Vec<_>>>()?;
    Ok(from_components(&plan, comps))
}

/// Multi-level decomposition; level `i` transforms the low band of level
/// `i - 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Pyramid {
    pub levels: Vec<Subbands>,
}

impl Pyramid {
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Low band of the deepest level.
    pub fn coarsest(&self) -> Option<&Tensor> {
        self.levels.last().map(|l| &l.low)
    }
}

pub fn dwt_multilevel(
    x: &Tensor,
    w: &WaveletSpec,
    dim: usize,
    mode: BoundaryMode,
    depth: usize,
) -> Result<Pyramid> {
    if depth == 0 {
        return Err(Error::arg("depth must be at least 1"));
    }
    if x.rank() < dim {
        return Err(Error::shape(format!("{dim}D transform on rank-{} tensor", x.rank())));
    }
    for &n in &x.shape()[x.rank() - dim..] {
        if depth >= usize::BITS as usize || n >> depth == 0 {
            return Err(Error::arg(format!(
                "depth {depth} too large for spatial extent {n}"
            )));
        }
    }
    let mut levels: Vec<Subbands> = Vec::with_capacity(depth);
    for _ in 0..depth {
        let input = levels.last().map_or(x, |l| &l.low);
        let next = dwt(input, w, dim, mode)?;
        levels.push(next);
    }
    Ok(Pyramid { levels })
}

/// Reconstructs from the deepest low band and every level's detail bands.
pub fn idwt_multilevel(p: &Pyramid, w: &WaveletSpec) -> Result<Tensor> {
    let mut levels = p.levels.iter().rev();
    let deepest = levels
        .next()
        .ok_or_else(|| Error::arg("empty pyramid"))?;
    let mut x = idwt(deepest, w)?;
    for level in levels {
        let plan = plan_for(level, w)?;
        let mut bands: Vec<&Tensor> = vec![&x];
        bands.extend(level.highs.iter().map(|h| &h.1));
        x = plan.inverse(&bands, Exec::default())?;
    }
    Ok(x)
}
