//! Per-axis linear operators for the separable transform.
//!
//! Each 1D analysis or synthesis step along one axis is a small sparse
//! matrix (a [`Stencil`]) built once from the filters and the boundary rule.
//! The forward map, the inverse and both adjoints are then just stencil
//! applications along axes, which keeps the four paths consistent by
//! construction.

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::filters::{BandTag, Pass, WaveletSpec, SYMMETRY_TOL};
use crate::tensor::Tensor;

use super::BoundaryMode;

/// Reflection about one end of a finite sequence.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Reflect {
    /// Whole-sample (mirror excludes the edge) vs half-sample (edge repeated).
    whole: bool,
    sign: f64,
}

const WS: Reflect = Reflect { whole: true, sign: 1.0 };
const HS: Reflect = Reflect { whole: false, sign: 1.0 };
const HA: Reflect = Reflect { whole: false, sign: -1.0 };

#[derive(Clone, Copy, Debug, PartialEq)]
enum Ext {
    Periodic,
    Zero,
    Mirror(Reflect, Reflect),
}

impl Ext {
    /// Maps an out-of-range index of a length-`n` sequence to the sample it
    /// copies, with the sign it picks up. `None` means the value is zero.
    fn resolve(self, mut i: isize, n: usize) -> Option<(usize, f64)> {
        let n = n as isize;
        match self {
            Ext::Periodic => Some((i.rem_euclid(n) as usize, 1.0)),
            Ext::Zero => (0..n).contains(&i).then_some((i as usize, 1.0)),
            Ext::Mirror(left, right) => {
                if n == 1 && left.whole && right.whole {
                    return Some((0, 1.0));
                }
                let mut sign = 1.0;
                while !(0..n).contains(&i) {
                    let r = if i < 0 { left } else { right };
                    // reflect about the pivot; pivots are stored doubled
                    let pivot2 = match (i < 0, r.whole) {
                        (true, true) => 0,
                        (true, false) => -1,
                        (false, true) => 2 * (n - 1),
                        (false, false) => 2 * n - 1,
                    };
                    i = pivot2 - i;
                    sign *= r.sign;
                }
                Some((i as usize, sign))
            }
        }
    }
}

/// Compressed sparse rows.
#[derive(Clone, Debug)]
pub(crate) struct Stencil {
    rows: usize,
    cols: usize,
    ptr: Vec<usize>,
    idx: Vec<usize>,
    val: Vec<f64>,
}

impl Stencil {
    fn from_rows(cols: usize, rows: Vec<Vec<(usize, f64)>>) -> Self {
        let mut ptr = Vec::with_capacity(rows.len() + 1);
        let mut idx = Vec::new();
        let mut val = Vec::new();
        ptr.push(0);
        for mut row in rows.iter().cloned() {
            row.sort_by_key(|e| e.0);
            let mut merged: Vec<(usize, f64)> = Vec::with_capacity(row.len());
            for (c, v) in row {
                match merged.last_mut() {
                    Some(last) if last.0 == c => last.1 += v,
                    _ => merged.push((c, v)),
                }
            }
            for (c, v) in merged {
                idx.push(c);
                val.push(v);
            }
            ptr.push(idx.len());
        }
        Stencil {
            rows: rows.len(),
            cols,
            ptr,
            idx,
            val,
        }
    }

    fn transpose(&self) -> Self {
        let mut rows = vec![Vec::new(); self.cols];
        for r in 0..self.rows {
            for e in self.ptr[r]..self.ptr[r + 1] {
                rows[self.idx[e]].push((r, self.val[e]));
            }
        }
        Stencil::from_rows(self.rows, rows)
    }

    #[cfg(test)]
    pub(crate) fn dense(&self) -> Vec<Vec<f64>> {
        let mut m = vec![vec![0.0; self.cols]; self.rows];
        for (r, row) in m.iter_mut().enumerate() {
            for e in self.ptr[r]..self.ptr[r + 1] {
                row[self.idx[e]] += self.val[e];
            }
        }
        m
    }

    /// Applies the stencil along `axis`, which must have extent `cols`.
    fn apply(&self, t: &Tensor, axis: usize, exec: Exec) -> Tensor {
        let shape = t.shape();
        debug_assert_eq!(shape[axis], self.cols);
        let outer: usize = shape[..axis].iter().product();
        let inner: usize = shape[axis + 1..].iter().product();
        let mut out_shape = shape.to_vec();
        out_shape[axis] = self.rows;
        let mut out = vec![0.0; outer * self.rows * inner];
        let src = t.data();

        // group several output lines per task when lines are short
        let lines_per_chunk = (2048 / inner).clamp(1, self.rows.max(1));
        exec.for_each_chunk(&mut out, lines_per_chunk * inner, |ci, chunk| {
            let first = ci * lines_per_chunk;
            for (li, line) in chunk.chunks_mut(inner).enumerate() {
                let q = first + li;
                let (o, r) = (q / self.rows, q % self.rows);
                for e in self.ptr[r]..self.ptr[r + 1] {
                    let v = self.val[e];
                    let base = (o * self.cols + self.idx[e]) * inner;
                    for (y, &x) in line.iter_mut().zip(&src[base..base + inner]) {
                        *y += v * x;
                    }
                }
            }
        });
        Tensor::from_parts(out_shape, out)
    }
}

/// Analysis and synthesis stencils for one axis of extent `n`.
#[derive(Clone, Debug)]
pub(crate) struct AxisPlan {
    pub(crate) half: usize,
    analysis: [Stencil; 2],
    analysis_t: [Stencil; 2],
    synthesis: [Stencil; 2],
    synthesis_t: [Stencil; 2],
}

/// How symmetric mode extends the signal and the subbands, and where the
/// analysis window starts.
struct Layout {
    offset: isize,
    signal: Ext,
    bands: [Ext; 2],
}

fn symmetry_sign(f: &[f64]) -> Option<f64> {
    let dev = |s: f64| {
        f.iter()
            .zip(f.iter().rev())
            .fold(0.0f64, |m, (a, b)| m.max((a - s * b).abs()))
    };
    if dev(1.0) <= SYMMETRY_TOL {
        Some(1.0)
    } else if dev(-1.0) <= SYMMETRY_TOL {
        Some(-1.0)
    } else {
        None
    }
}

fn layout(w: &WaveletSpec, mode: BoundaryMode) -> Layout {
    match mode {
        BoundaryMode::Periodic => Layout {
            offset: 0,
            signal: Ext::Periodic,
            bands: [Ext::Periodic; 2],
        },
        BoundaryMode::Zero => Layout {
            offset: 0,
            signal: Ext::Zero,
            bands: [Ext::Zero; 2],
        },
        BoundaryMode::Symmetric => symmetric_layout(w).unwrap_or(Layout {
            offset: 0,
            signal: Ext::Mirror(HS, HS),
            bands: [Ext::Mirror(HS, HS); 2],
        }),
    }
}

/// Non-expansive symmetric extension for symmetric filter banks.
///
/// Odd-length (whole-sample symmetric) filters need whole-sample extension
/// of the signal with the low band centred on even samples and the high
/// band on odd samples; even-length filters need half-sample extension with
/// both bands centred between samples. `None` for asymmetric banks.
fn symmetric_layout(w: &WaveletSpec) -> Option<Layout> {
    let (lo, hi) = (&w.dec_lo, &w.dec_hi);
    if symmetry_sign(lo)? != 1.0 {
        return None;
    }
    let hi_sign = symmetry_sign(hi)?;
    let lo_c2 = lo.len() as isize - 1; // twice the centre
    let hi_c2 = hi.len() as isize - 1;
    if lo_c2 % 2 == 0 {
        if hi_sign != 1.0 || hi_c2 != lo_c2 + 2 {
            return None;
        }
        Some(Layout {
            offset: lo_c2 / 2,
            signal: Ext::Mirror(WS, WS),
            bands: [Ext::Mirror(WS, HS), Ext::Mirror(HS, WS)],
        })
    } else {
        if hi_c2 != lo_c2 {
            return None;
        }
        let band_hi = if hi_sign > 0.0 { HS } else { HA };
        Some(Layout {
            offset: lo_c2 / 2,
            signal: Ext::Mirror(HS, HS),
            bands: [Ext::Mirror(HS, HS), Ext::Mirror(band_hi, band_hi)],
        })
    }
}

impl AxisPlan {
    pub(crate) fn new(w: &WaveletSpec, mode: BoundaryMode, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::shape(format!("spatial extent {n} is below 2")));
        }
        let half = n / 2;
        let lay = layout(w, mode);
        let passes = [Pass::Low, Pass::High];

        let analysis = passes.map(|p| {
            let taps = w.filter(crate::filters::Bank::Analysis, p);
            let rows = (0..half)
                .map(|k| {
                    taps.iter()
                        .enumerate()
                        .filter_map(|(j, &a)| {
                            let i = 2 * k as isize + j as isize - lay.offset;
                            lay.signal.resolve(i, n).map(|(src, s)| (src, s * a))
                        })
                        .collect()
                })
                .collect();
            Stencil::from_rows(n, rows)
        });

        let synthesis = [0, 1].map(|b| {
            let taps = w.synthesis_taps(passes[b]);
            let ext = lay.bands[b];
            let rows = (0..n)
                .map(|t| {
                    taps.iter()
                        .enumerate()
                        .filter_map(|(j, &s)| {
                            let twice_k = t as isize + lay.offset - j as isize;
                            if twice_k.rem_euclid(2) != 0 {
                                return None;
                            }
                            ext.resolve(twice_k / 2, half)
                                .map(|(src, sign)| (src, sign * s))
                        })
                        .collect()
                })
                .collect();
            Stencil::from_rows(half, rows)
        });

        Ok(AxisPlan {
            half,
            analysis_t: [analysis[0].transpose(), analysis[1].transpose()],
            synthesis_t: [synthesis[0].transpose(), synthesis[1].transpose()],
            analysis,
            synthesis,
        })
    }

    #[cfg(test)]
    pub(crate) fn analysis(&self, p: Pass) -> &Stencil {
        &self.analysis[p as usize]
    }

    #[cfg(test)]
    pub(crate) fn synthesis(&self, p: Pass) -> &Stencil {
        &self.synthesis[p as usize]
    }
}

/// Everything needed to transform tensors of one shape.
#[derive(Clone, Debug)]
pub struct DwtPlan {
    dim: usize,
    mode: BoundaryMode,
    wavelet: String,
    input_shape: Vec<usize>,
    band_shape: Vec<usize>,
    /// `axes[k]` acts on the `k`-th axis counted from the last.
    axes: Vec<AxisPlan>,
}

fn check_dim(dim: usize, rank: usize) -> Result<()> {
    if !(1..=3).contains(&dim) {
        return Err(Error::arg(format!("transform dim must be 1, 2 or 3, got {dim}")));
    }
    if rank < dim {
        return Err(Error::shape(format!(
            "{dim}D transform needs rank >= {dim}, tensor has rank {rank}"
        )));
    }
    Ok(())
}

impl DwtPlan {
    /// Plans a `dim`-D transform over the trailing axes of `input_shape`;
    /// leading axes are channels and are transformed independently.
    pub fn new(w: &WaveletSpec, dim: usize, mode: BoundaryMode, input_shape: &[usize]) -> Result<Self> {
        check_dim(dim, input_shape.len())?;
        let rank = input_shape.len();
        let axes = (0..dim)
            .map(|k| AxisPlan::new(w, mode, input_shape[rank - 1 - k]))
            .collect::<Result<Vec<_>>>()?;
        let mut band_shape = input_shape.to_vec();
        for (k, ax) in axes.iter().enumerate() {
            band_shape[rank - 1 - k] = ax.half;
        }
        Ok(DwtPlan {
            dim,
            mode,
            wavelet: w.name.clone(),
            input_shape: input_shape.to_vec(),
            band_shape,
            axes,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mode(&self) -> BoundaryMode {
        self.mode
    }

    pub fn wavelet(&self) -> &str {
        &self.wavelet
    }

    pub fn input_shape(&self) -> &[usize] {
        &self.input_shape
    }

    pub fn band_shape(&self) -> &[usize] {
        &self.band_shape
    }

    fn axis(&self, k: usize) -> usize {
        self.input_shape.len() - 1 - k
    }

    fn expect_shape(&self, t: &Tensor, want: &[usize], what: &str) -> Result<()> {
        if t.shape() != want {
            return Err(Error::shape(format!(
                "{what}: expected {want:?}, got {:?}",
                t.shape()
            )));
        }
        Ok(())
    }

    /// All `2^dim` subbands in [`BandTag::all`] order.
    pub fn forward(&self, x: &Tensor, exec: Exec) -> Result<Vec<Tensor>> {
        self.expect_shape(x, &self.input_shape, "dwt input")?;
        let mut comps: Vec<(usize, Tensor)> = vec![(0, x.clone())];
        for k in 0..self.dim {
            let bit = self.dim - 1 - k;
            let axis = self.axis(k);
            comps = comps
                .into_iter()
                .flat_map(|(bits, t)| {
                    [0usize, 1].map(|p| {
                        (bits | p << bit, self.axes[k].analysis[p].apply(&t, axis, exec))
                    })
                })
                .collect();
        }
        comps.sort_by_key(|c| c.0);
        Ok(comps.into_iter().map(|c| c.1).collect())
    }

    /// Reconstructs from `2^dim` subbands in [`BandTag::all`] order.
    pub fn inverse(&self, bands: &[&Tensor], exec: Exec) -> Result<Tensor> {
        if bands.len() != 1 << self.dim {
            return Err(Error::shape(format!(
                "{}D idwt needs {} subbands, got {}",
                self.dim,
                1 << self.dim,
                bands.len()
            )));
        }
        for b in bands {
            self.expect_shape(b, &self.band_shape, "idwt subband")?;
        }
        // the last tag character is the lowest bit, so adjacent pairs differ
        // in the filter along axis k = dim-1 first
        let mut level: Vec<Tensor> = bands.iter().map(|&b| b.clone()).collect();
        for k in (0..self.dim).rev() {
            let axis = self.axis(k);
            let ax = &self.axes[k];
            level = level
                .chunks(2)
                .map(|pair| {
                    let mut out = ax.synthesis[0].apply(&pair[0], axis, exec);
                    let hi = ax.synthesis[1].apply(&pair[1], axis, exec);
                    out.axpy(1.0, &hi).expect("matching shapes");
                    out
                })
                .collect();
        }
        Ok(level.pop().expect("one tensor left"))
    }

    /// Adjoint of the map `x -> band(tag)`, applied to a band-shaped cotangent.
    pub fn forward_adjoint_band(&self, tag: BandTag, g: &Tensor, exec: Exec) -> Result<Tensor> {
        self.check_tag(tag)?;
        self.expect_shape(g, &self.band_shape, "dwt cotangent")?;
        let mut t = g.clone();
        for k in 0..self.dim {
            t = self.axes[k].analysis_t[tag.pass(k) as usize].apply(&t, self.axis(k), exec);
        }
        Ok(t)
    }

    /// Adjoint of the map `band(tag) -> idwt(...)`, applied to an
    /// input-shaped cotangent.
    pub fn inverse_adjoint_band(&self, tag: BandTag, g: &Tensor, exec: Exec) -> Result<Tensor> {
        self.check_tag(tag)?;
        self.expect_shape(g, &self.input_shape, "idwt cotangent")?;
        let mut t = g.clone();
        for k in 0..self.dim {
            t = self.axes[k].synthesis_t[tag.pass(k) as usize].apply(&t, self.axis(k), exec);
        }
        Ok(t)
    }

    fn check_tag(&self, tag: BandTag) -> Result<()> {
        if tag.dim() != self.dim {
            return Err(Error::arg(format!("band {tag} does not belong to a {}D transform", self.dim)));
        }
        Ok(())
    }
}
