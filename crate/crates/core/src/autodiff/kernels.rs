//! Forward and adjoint kernels for the non-wavelet layers.

use crate::error::{Error, Result};
use crate::tensor::Tensor;

pub(crate) struct ConvShape {
    cin: usize,
    cout: usize,
    h: usize,
    w: usize,
    kh: usize,
    kw: usize,
}

impl ConvShape {
    pub(crate) fn new(x: &Tensor, k: &Tensor, b: &Tensor) -> Result<Self> {
        let (cin, h, w) = match x.shape() {
            [c, h, w] => (*c, *h, *w),
            s => return Err(Error::shape(format!("conv2d input must be [C, H, W], got {s:?}"))),
        };
        let (cout, kcin, kh, kw) = match k.shape() {
            [o, i, kh, kw] => (*o, *i, *kh, *kw),
            s => return Err(Error::shape(format!("conv2d kernel must be [Cout, Cin, kh, kw], got {s:?}"))),
        };
        if kcin != cin {
            return Err(Error::shape(format!("kernel expects {kcin} input channels, input has {cin}")));
        }
        if kh % 2 == 0 || kw % 2 == 0 {
            return Err(Error::shape(format!("same padding needs odd kernel sizes, got {kh}x{kw}")));
        }
        if b.shape() != [cout] {
            return Err(Error::shape(format!("bias must be [{cout}], got {:?}", b.shape())));
        }
        Ok(ConvShape { cin, cout, h, w, kh, kw })
    }

    fn out_shape(&self) -> [usize; 3] {
        [self.cout, self.h, self.w]
    }

    /// Calls `f(dy, dx, y-range, x-range shift)` for every kernel tap with
    /// the output rows/cols whose shifted source lies inside the image.
    fn taps(&self, mut f: impl FnMut(usize, usize, std::ops::Range<usize>, std::ops::Range<usize>)) {
        let (ph, pw) = (self.kh / 2, self.kw / 2);
        for dy in 0..self.kh {
            let y0 = ph.saturating_sub(dy);
            let y1 = (self.h + ph).saturating_sub(dy).min(self.h);
            if y0 >= y1 {
                continue;
            }
            for dx in 0..self.kw {
                let x0 = pw.saturating_sub(dx);
                let x1 = (self.w + pw).saturating_sub(dx).min(self.w);
                if x0 >= x1 {
                    continue;
                }
                f(dy, dx, y0..y1, x0..x1);
            }
        }
    }
}

/// Same-padded stride-1 cross-correlation.
pub fn conv2d(x: &Tensor, k: &Tensor, b: &Tensor) -> Result<Tensor> {
    let s = ConvShape::new(x, k, b)?;
    let (h, w) = (s.h, s.w);
    let plane = h * w;
    let (ph, pw) = (s.kh / 2, s.kw / 2);
    let mut out = vec![0.0; s.cout * plane];
    let (xd, kd) = (x.data(), k.data());
    for co in 0..s.cout {
        let o = &mut out[co * plane..(co + 1) * plane];
        o.fill(b.data()[co]);
        for ci in 0..s.cin {
            let src = &xd[ci * plane..(ci + 1) * plane];
            let kbase = (co * s.cin + ci) * s.kh * s.kw;
            s.taps(|dy, dx, ys, xs| {
                let wgt = kd[kbase + dy * s.kw + dx];
                for y in ys {
                    let sy = y + dy - ph;
                    let orow = &mut o[y * w + xs.start..y * w + xs.end];
                    let srow = &src[sy * w + xs.start + dx - pw..sy * w + xs.end + dx - pw];
                    for (a, &v) in orow.iter_mut().zip(srow) {
                        *a += wgt * v;
                    }
                }
            });
        }
    }
    Ok(Tensor::from_parts(s.out_shape().to_vec(), out))
}

/// Gradients of [`conv2d`] with respect to input, kernel and bias.
pub fn conv2d_backward(
    x: &Tensor,
    k: &Tensor,
    b: &Tensor,
    g: &Tensor,
) -> Result<(Tensor, Tensor, Tensor)> {
    let s = ConvShape::new(x, k, b)?;
    let (h, w) = (s.h, s.w);
    let plane = h * w;
    let (ph, pw) = (s.kh / 2, s.kw / 2);
    let (xd, kd, gd) = (x.data(), k.data(), g.data());
    let mut gx = vec![0.0; x.len()];
    let mut gk = vec![0.0; k.len()];
    let mut gb = vec![0.0; s.cout];
    for co in 0..s.cout {
        let go = &gd[co * plane..(co + 1) * plane];
        gb[co] = go.iter().sum();
        for ci in 0..s.cin {
            let src = &xd[ci * plane..(ci + 1) * plane];
            let gsrc = &mut gx[ci * plane..(ci + 1) * plane];
            let kbase = (co * s.cin + ci) * s.kh * s.kw;
            s.taps(|dy, dx, ys, xs| {
                let wgt = kd[kbase + dy * s.kw + dx];
                let mut acc = 0.0;
                for y in ys {
                    let sy = y + dy - ph;
                    let grow = &go[y * w + xs.start..y * w + xs.end];
                    let off = sy * w + xs.start + dx - pw;
                    let srow = &src[off..off + xs.len()];
                    let gxrow = &mut gsrc[off..off + xs.len()];
                    for ((gi, &gv), &sv) in gxrow.iter_mut().zip(grow).zip(srow) {
                        *gi += wgt * gv;
                        acc += gv * sv;
                    }
                }
                gk[kbase + dy * s.kw + dx] += acc;
            });
        }
    }
    Ok((
        Tensor::from_parts(x.shape().to_vec(), gx),
        Tensor::from_parts(k.shape().to_vec(), gk),
        Tensor::from_parts(vec![s.cout], gb),
    ))
}

/// 2x2 stride-2 max pooling. Returns the pooled map and, per output, the
/// flat input index of the maximum (first one on ties).
pub fn maxpool2(x: &Tensor) -> Result<(Tensor, Vec<usize>)> {
    let (c, h, w) = match x.shape() {
        [c, h, w] if *h >= 2 && *w >= 2 => (*c, *h, *w),
        s => return Err(Error::shape(format!("maxpool2 needs [C, H>=2, W>=2], got {s:?}"))),
    };
    let (oh, ow) = (h / 2, w / 2);
    let xd = x.data();
    let mut out = Vec::with_capacity(c * oh * ow);
    let mut idx = Vec::with_capacity(c * oh * ow);
    for ch in 0..c {
        for y in 0..oh {
            for xx in 0..ow {
                let mut best = ch * h * w + 2 * y * w + 2 * xx;
                for (dy, dx) in [(0, 1), (1, 0), (1, 1)] {
                    let i = ch * h * w + (2 * y + dy) * w + 2 * xx + dx;
                    if xd[i] > xd[best] {
                        best = i;
                    }
                }
                out.push(xd[best]);
                idx.push(best);
            }
        }
    }
    Ok((Tensor::from_parts(vec![c, oh, ow], out), idx))
}

/// Scatters pooled values back to their argmax positions.
pub fn maxunpool2(x: &Tensor, indices: &[usize], out_shape: &[usize]) -> Result<Tensor> {
    if x.len() != indices.len() {
        return Err(Error::shape(format!(
            "unpool input has {} values for {} indices",
            x.len(),
            indices.len()
        )));
    }
    let mut out = Tensor::zeros(out_shape)?;
    let od = out.data_mut();
    for (&i, &v) in indices.iter().zip(x.data()) {
        od[i] = v;
    }
    Ok(out)
}

/// Label value skipped by the loss and by confusion matrices.
pub const IGNORE_LABEL: u8 = 255;

/// Mean softmax cross-entropy over labelled pixels of `[K, H, W]` logits.
/// Returns the loss and `d loss / d logits`.
pub fn softmax_ce(logits: &Tensor, labels: &[u8]) -> Result<(f64, Tensor)> {
    let (k, plane) = match logits.shape() {
        [k, rest @ ..] if !rest.is_empty() => (*k, rest.iter().product::<usize>()),
        s => return Err(Error::shape(format!("logits must be [K, ...], got {s:?}"))),
    };
    if labels.len() != plane {
        return Err(Error::shape(format!(
            "{} labels for {plane} pixels",
            labels.len()
        )));
    }
    let ld = logits.data();
    let mut grad = vec![0.0; ld.len()];
    let mut total = 0.0;
    let mut count = 0usize;
    let mut probs = vec![0.0; k];
    for (p, &lab) in labels.iter().enumerate() {
        if lab == IGNORE_LABEL {
            continue;
        }
        let lab = lab as usize;
        if lab >= k {
            return Err(Error::arg(format!("label {lab} out of range for {k} classes")));
        }
        let max = (0..k).map(|c| ld[c * plane + p]).fold(f64::NEG_INFINITY, f64::max);
        let mut z = 0.0;
        for (c, pr) in probs.iter_mut().enumerate() {
            *pr = (ld[c * plane + p] - max).exp();
            z += *pr;
        }
        total += z.ln() + max - ld[lab * plane + p];
        for (c, pr) in probs.iter().enumerate() {
            grad[c * plane + p] = pr / z - if c == lab { 1.0 } else { 0.0 };
        }
        count += 1;
    }
    if count == 0 {
        return Err(Error::arg("no labelled pixels"));
    }
    let inv = 1.0 / count as f64;
    grad.iter_mut().for_each(|g| *g *= inv);
    Ok((total * inv, Tensor::from_parts(logits.shape().to_vec(), grad)))
}

/// Per-channel `x * scale[c] + shift[c]` over a `[C, ...]` tensor.
pub fn channel_affine(x: &Tensor, scale: &Tensor, shift: &Tensor) -> Result<Tensor> {
    let c = *x.shape().first().unwrap_or(&0);
    if scale.shape() != [c] || shift.shape() != [c] {
        return Err(Error::shape(format!(
            "affine parameters must be [{c}], got {:?} and {:?}",
            scale.shape(),
            shift.shape()
        )));
    }
    let plane = x.len() / c;
    let mut out = x.data().to_vec();
    for (ch, block) in out.chunks_mut(plane).enumerate() {
        let (a, b) = (scale.data()[ch], shift.data()[ch]);
        block.iter_mut().for_each(|v| *v = *v * a + b);
    }
    Ok(Tensor::from_parts(x.shape().to_vec(), out))
}
