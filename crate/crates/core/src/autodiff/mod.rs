//! Reverse-mode differentiation on a per-forward-pass tape.
//!
//! Nodes are appended in evaluation order, so the tape is topologically
//! sorted by construction and [`Tape::backward`] is a single reverse sweep.
//! Wavelet nodes reuse the transform module's [`DwtPlan`]: forward values are
//! bit-identical to [`crate::transform::dwt`], and the backward pass applies
//! the exact adjoint of the extension-plus-strided-correlation map for
//! whichever boundary mode the plan was built with.

pub mod kernels;

use std::sync::Arc;

pub use kernels::IGNORE_LABEL;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::filters::{BandTag, WaveletSpec};
use crate::tensor::Tensor;
use crate::transform::{BoundaryMode, DwtPlan};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Clone, Debug)]
enum Op {
    Leaf,
    Add(NodeId, NodeId),
    Mul(NodeId, NodeId),
    Scale(NodeId, f64),
    Sum(NodeId),
    Relu(NodeId),
    ChannelAffine { x: NodeId, scale: NodeId, shift: NodeId },
    Conv2d { x: NodeId, k: NodeId, b: NodeId },
    MaxPool2 { x: NodeId, indices: Arc<[usize]> },
    MaxUnpool2 { x: NodeId, indices: Arc<[usize]> },
    DwtBand { x: NodeId, plan: Arc<DwtPlan>, tag: BandTag },
    Idwt { bands: Vec<NodeId>, plan: Arc<DwtPlan> },
    SoftmaxCe { logits: NodeId, grad: Tensor },
}

#[derive(Clone, Debug)]
struct Node {
    value: Tensor,
    op: Op,
}

/// Subband nodes of one wavelet decomposition.
#[derive(Clone, Debug)]
pub struct SubbandNodes {
    pub low: NodeId,
    /// Detail bands in [`BandTag::all`] order.
    pub highs: Vec<(BandTag, NodeId)>,
    pub plan: Arc<DwtPlan>,
}

#[derive(Clone, Debug, Default)]
pub struct Tape {
    nodes: Vec<Node>,
    grads: Vec<Option<Tensor>>,
}

impl Tape {
    pub fn new() -> Self {
        Tape::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn push(&mut self, value: Tensor, op: Op) -> NodeId {
        self.nodes.push(Node { value, op });
        NodeId(self.nodes.len() - 1)
    }

    fn node(&self, id: NodeId) -> Result<&Node> {
        self.nodes
            .get(id.0)
            .ok_or_else(|| Error::arg(format!("node {} is not on this tape", id.0)))
    }

    pub fn leaf(&mut self, value: Tensor) -> NodeId {
        self.push(value, Op::Leaf)
    }

    pub fn value(&self, id: NodeId) -> &Tensor {
        &self.nodes[id.0].value
    }

    /// `d loss / d value` after [`Tape::backward`]; zeros for nodes the loss
    /// does not depend on.
    pub fn grad(&self, id: NodeId) -> Tensor {
        match self.grads.get(id.0) {
            Some(Some(g)) => g.clone(),
            _ => self.nodes[id.0].value.zeros_like(),
        }
    }

    pub fn add(&mut self, a: NodeId, b: NodeId) -> Result<NodeId> {
        let v = self.node(a)?.value.add(&self.node(b)?.value)?;
        Ok(self.push(v, Op::Add(a, b)))
    }

    pub fn mul(&mut self, a: NodeId, b: NodeId) -> Result<NodeId> {
        let v = self.node(a)?.value.mul(&self.node(b)?.value)?;
        Ok(self.push(v, Op::Mul(a, b)))
    }

    pub fn scale(&mut self, a: NodeId, s: f64) -> Result<NodeId> {
        let v = self.node(a)?.value.mul_scalar(s);
        Ok(self.push(v, Op::Scale(a, s)))
    }

    /// Sum of all elements, as a `[1]` tensor.
    pub fn sum(&mut self, a: NodeId) -> Result<NodeId> {
        let v = Tensor::from_parts(vec![1], vec![self.node(a)?.value.sum()]);
        Ok(self.push(v, Op::Sum(a)))
    }

    pub fn relu(&mut self, a: NodeId) -> Result<NodeId> {
        let v = self.node(a)?.value.map(|x| x.max(0.0));
        Ok(self.push(v, Op::Relu(a)))
    }

    /// Learnable per-channel scale and shift.
    pub fn channel_affine(&mut self, x: NodeId, scale: NodeId, shift: NodeId) -> Result<NodeId> {
        let v = kernels::channel_affine(
            &self.node(x)?.value,
            &self.node(scale)?.value,
            &self.node(shift)?.value,
        )?;
        Ok(self.push(v, Op::ChannelAffine { x, scale, shift }))
    }

    /// Same-padded stride-1 2D cross-correlation of `[Cin, H, W]` input with
    /// a `[Cout, Cin, kh, kw]` kernel and `[Cout]` bias.
    pub fn conv2d(&mut self, x: NodeId, k: NodeId, b: NodeId) -> Result<NodeId> {
        let v = kernels::conv2d(
            &self.node(x)?.value,
            &self.node(k)?.value,
            &self.node(b)?.value,
        )?;
        Ok(self.push(v, Op::Conv2d { x, k, b }))
    }

    pub fn maxpool2(&mut self, x: NodeId) -> Result<NodeId> {
        let (v, idx) = kernels::maxpool2(&self.node(x)?.value)?;
        Ok(self.push(v, Op::MaxPool2 { x, indices: idx.into() }))
    }

    /// Max-unpooling driven by the indices recorded by `pool`, which must be
    /// a [`Tape::maxpool2`] node with the same output shape as `x`.
    pub fn maxunpool2(&mut self, x: NodeId, pool: NodeId) -> Result<NodeId> {
        let (indices, src) = match &self.node(pool)?.op {
            Op::MaxPool2 { x: src, indices } => (indices.clone(), *src),
            _ => return Err(Error::arg("maxunpool2 needs a maxpool2 node for its indices")),
        };
        let xv = &self.node(x)?.value;
        if xv.shape() != self.node(pool)?.value.shape() {
            return Err(Error::shape(format!(
                "unpool input {:?} does not match pooled shape {:?}",
                xv.shape(),
                self.node(pool)?.value.shape()
            )));
        }
        let out_shape = self.node(src)?.value.shape().to_vec();
        let v = kernels::maxunpool2(xv, &indices, &out_shape)?;
        Ok(self.push(v, Op::MaxUnpool2 { x, indices }))
    }

    /// Wavelet decomposition of `x` into one node per subband.
    pub fn dwt(&mut self, x: NodeId, w: &WaveletSpec, dim: usize, mode: BoundaryMode) -> Result<SubbandNodes> {
        let plan = Arc::new(DwtPlan::new(w, dim, mode, self.node(x)?.value.shape())?);
        self.dwt_with_plan(x, plan)
    }

    pub fn dwt_with_plan(&mut self, x: NodeId, plan: Arc<DwtPlan>) -> Result<SubbandNodes> {
        let comps = plan.forward(&self.node(x)?.value, Exec::Sequential)?;
        let mut ids = BandTag::all(plan.dim()).into_iter().zip(comps).map(|(tag, v)| {
            (
                tag,
                self.push(
                    v,
                    Op::DwtBand {
                        x,
                        plan: plan.clone(),
                        tag,
                    },
                ),
            )
        });
        let low = ids.next().expect("low band").1;
        let highs = ids.collect();
        Ok(SubbandNodes { low, highs, plan })
    }

    /// Reconstruction from subband nodes. The low node may come from
    /// anywhere as long as its shape matches the plan's band shape.
    pub fn idwt(&mut self, s: &SubbandNodes) -> Result<NodeId> {
        let mut bands = vec![s.low];
        bands.extend(s.highs.iter().map(|h| h.1));
        let values = bands
            .iter()
            .map(|&b| self.node(b).map(|n| &n.value))
            .collect::<Result<Vec<_>>>()?;
        let v = s.plan.inverse(&values, Exec::Sequential)?;
        Ok(self.push(
            v,
            Op::Idwt {
                bands,
                plan: s.plan.clone(),
            },
        ))
    }

    /// Mean softmax cross-entropy of `[K, H, W]` logits against per-pixel
    /// labels; [`IGNORE_LABEL`] pixels are skipped.
    pub fn softmax_ce(&mut self, logits: NodeId, labels: &[u8]) -> Result<NodeId> {
        let (loss, grad) = kernels::softmax_ce(&self.node(logits)?.value, labels)?;
        let v = Tensor::from_parts(vec![1], vec![loss]);
        Ok(self.push(v, Op::SoftmaxCe { logits, grad }))
    }

    fn accumulate(grads: &mut [Option<Tensor>], id: NodeId, g: Tensor) {
        match &mut grads[id.0] {
            Some(acc) => acc.axpy(1.0, &g).expect("gradient shape matches value"),
            slot @ None => *slot = Some(g),
        }
    }

    /// Fills every node's gradient with `d loss / d value`. Any previous
    /// gradients are discarded.
    pub fn backward(&mut self, loss: NodeId) -> Result<()> {
        if self.node(loss)?.value.len() != 1 {
            return Err(Error::arg(format!(
                "backward needs a scalar loss, got shape {:?}",
                self.node(loss)?.value.shape()
            )));
        }
        let mut grads: Vec<Option<Tensor>> = vec![None; self.nodes.len()];
        grads[loss.0] = Some(self.nodes[loss.0].value.map(|_| 1.0));

        for i in (0..=loss.0).rev() {
            let Some(g) = grads[i].clone() else { continue };
            let node = &self.nodes[i];
            let val = |id: NodeId| &self.nodes[id.0].value;
            match &node.op {
                Op::Leaf => {}
                Op::Add(a, b) => {
                    Self::accumulate(&mut grads, *a, g.clone());
                    Self::accumulate(&mut grads, *b, g);
                }
                Op::Mul(a, b) => {
                    Self::accumulate(&mut grads, *a, g.mul(val(*b))?);
                    Self::accumulate(&mut grads, *b, g.mul(val(*a))?);
                }
                Op::Scale(a, s) => Self::accumulate(&mut grads, *a, g.mul_scalar(*s)),
                Op::Sum(a) => {
                    let s = g.data()[0];
                    Self::accumulate(&mut grads, *a, val(*a).map(|_| s));
                }
                Op::Relu(a) => {
                    let mask = val(*a).map(|x| if x > 0.0 { 1.0 } else { 0.0 });
                    Self::accumulate(&mut grads, *a, g.mul(&mask)?);
                }
                Op::ChannelAffine { x, scale, shift } => {
                    let xv = val(*x);
                    let c = xv.shape()[0];
                    let plane = xv.len() / c;
                    let sv = val(*scale).data();
                    let mut gx = g.clone();
                    let mut gs = vec![0.0; c];
                    let mut gb = vec![0.0; c];
                    for ch in 0..c {
                        let gblock = &mut gx.data_mut()[ch * plane..(ch + 1) * plane];
                        let xblock = &xv.data()[ch * plane..(ch + 1) * plane];
                        for (gi, &xi) in gblock.iter_mut().zip(xblock) {
                            gs[ch] += *gi * xi;
                            gb[ch] += *gi;
                            *gi *= sv[ch];
                        }
                    }
                    Self::accumulate(&mut grads, *x, gx);
                    Self::accumulate(&mut grads, *scale, Tensor::from_parts(vec![c], gs));
                    Self::accumulate(&mut grads, *shift, Tensor::from_parts(vec![c], gb));
                }
                Op::Conv2d { x, k, b } => {
                    let (gx, gk, gb) = kernels::conv2d_backward(val(*x), val(*k), val(*b), &g)?;
                    Self::accumulate(&mut grads, *x, gx);
                    Self::accumulate(&mut grads, *k, gk);
                    Self::accumulate(&mut grads, *b, gb);
                }
                Op::MaxPool2 { x, indices } => {
                    let gx = kernels::maxunpool2(&g, indices, val(*x).shape())?;
                    Self::accumulate(&mut grads, *x, gx);
                }
                Op::MaxUnpool2 { x, indices } => {
                    let gd = g.data();
                    let gx = Tensor::from_parts(
                        val(*x).shape().to_vec(),
                        indices.iter().map(|&i| gd[i]).collect(),
                    );
                    Self::accumulate(&mut grads, *x, gx);
                }
                Op::DwtBand { x, plan, tag } => {
                    let gx = plan.forward_adjoint_band(*tag, &g, Exec::Sequential)?;
                    Self::accumulate(&mut grads, *x, gx);
                }
                Op::Idwt { bands, plan } => {
                    for (tag, &b) in BandTag::all(plan.dim()).into_iter().zip(bands) {
                        let gb = plan.inverse_adjoint_band(tag, &g, Exec::Sequential)?;
                        Self::accumulate(&mut grads, b, gb);
                    }
                }
                Op::SoftmaxCe { logits, grad } => {
                    Self::accumulate(&mut grads, *logits, grad.mul_scalar(g.data()[0]));
                }
            }
        }
        self.grads = grads;
        Ok(())
    }
}
