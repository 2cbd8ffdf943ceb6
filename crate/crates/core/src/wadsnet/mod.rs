//! Toy encoder-decoder segmentation networks.
//!
//! Each encoder stage is `conv3x3 -> channel affine -> relu` followed by a
//! down-sampling step; each decoder stage mirrors it with the matching
//! up-sampling step. The two dual structures differ only in that step:
//!
//! * [`Kind::Wads`]: 2D DWT keeps the low band and hands the three detail
//!   bands to the decoder, whose IDWT rebuilds full resolution from them.
//! * [`Kind::Puds`]: 2x2 max-pooling records argmax indices and the decoder
//!   max-unpools through them.
//!
//! Both kinds therefore have identical parameter shapes.

mod data;
mod train;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::autodiff::{NodeId, SubbandNodes, Tape};
use crate::error::{Error, Result};
use crate::filters::{get_wavelet, WaveletSpec};
use crate::tensor::Tensor;
use crate::transform::{BoundaryMode, DwtPlan};

pub use data::{
    gen_dataset, gen_dataset_aligned, SegSample, BACKGROUND, BLOB, CLASS_NAMES, NUM_CLASSES,
    THIN_LINE,
};
pub use train::{
    compare_duals, evaluate, train, CompareConfig, CompareReport, CompareRow, EarlyStop,
    EpochRecord, TrainConfig, TrainLog,
};

pub const DEFAULT_DEPTH: usize = 2;
pub const DEFAULT_WIDTHS: [usize; DEFAULT_DEPTH] = [8, 16];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Wads,
    Puds,
}

impl Kind {
    pub const ALL: [Kind; 2] = [Kind::Wads, Kind::Puds];

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Wads => "wads",
            Kind::Puds => "puds",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "wads" => Ok(Kind::Wads),
            "puds" => Ok(Kind::Puds),
            _ => Err(Error::arg(format!("unknown network kind `{s}` (expected wads or puds)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Param {
    pub name: String,
    pub value: Tensor,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ToyNet {
    kind: Kind,
    wavelet: WaveletSpec,
    mode: BoundaryMode,
    widths: Vec<usize>,
    in_channels: usize,
    classes: usize,
    params: Vec<Param>,
}

/// Knobs for a single forward pass.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ForwardOptions {
    /// Replace the detail bands handed to each IDWT with zeros.
    pub zero_highs: bool,
}

/// Parameter leaves and output of one forward pass on a tape.
#[derive(Clone, Debug)]
pub struct Forward {
    pub params: Vec<NodeId>,
    pub logits: NodeId,
}

enum Skip {
    Highs(SubbandNodes),
    Pool(NodeId),
}

/// Net with the default depth and widths, one input channel and
/// [`NUM_CLASSES`] outputs.
pub fn build_net(kind: Kind, wavelet: &str, seed: u64) -> Result<ToyNet> {
    ToyNet::new(kind, wavelet, &DEFAULT_WIDTHS, 1, NUM_CLASSES, seed)
}

/// Boundary handling that keeps the DWT/IDWT pair exactly invertible:
/// symmetric extension for symmetric banks, periodic otherwise.
pub fn lossless_mode(w: &WaveletSpec) -> BoundaryMode {
    if w.symmetric {
        BoundaryMode::Symmetric
    } else {
        BoundaryMode::Periodic
    }
}

impl ToyNet {
    pub fn new(
        kind: Kind,
        wavelet: &str,
        widths: &[usize],
        in_channels: usize,
        classes: usize,
        seed: u64,
    ) -> Result<Self> {
        let wavelet = get_wavelet(wavelet)?;
        if widths.is_empty() || widths.contains(&0) || in_channels == 0 || classes < 2 {
            return Err(Error::arg(format!(
                "invalid layout: widths {widths:?}, {in_channels} input channels, {classes} classes"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut params = Vec::new();
        let mut conv = |name: String, cout: usize, cin: usize, k: usize, params: &mut Vec<Param>| {
            let fan_in = (cin * k * k) as f64;
            let normal = Normal::new(0.0, (2.0 / fan_in).sqrt()).expect("valid std");
            let n = cout * cin * k * k;
            let values = (0..n).map(|_| normal.sample(&mut rng)).collect();
            params.push(Param {
                name: format!("{name}.weight"),
                value: Tensor::from_parts(vec![cout, cin, k, k], values),
            });
            params.push(Param {
                name: format!("{name}.bias"),
                value: Tensor::from_parts(vec![cout], vec![0.0; cout]),
            });
        };
        let affine = |name: &str, c: usize, params: &mut Vec<Param>| {
            params.push(Param {
                name: format!("{name}.scale"),
                value: Tensor::from_parts(vec![c], vec![1.0; c]),
            });
            params.push(Param {
                name: format!("{name}.shift"),
                value: Tensor::from_parts(vec![c], vec![0.0; c]),
            });
        };

        let mut cin = in_channels;
        for (s, &c) in widths.iter().enumerate() {
            conv(format!("enc{s}"), c, cin, 3, &mut params);
            affine(&format!("enc{s}"), c, &mut params);
            cin = c;
        }
        let deepest = *widths.last().expect("nonempty widths");
        conv("mid".into(), deepest, deepest, 3, &mut params);
        for s in (0..widths.len()).rev() {
            let cout = widths[s.saturating_sub(1)];
            conv(format!("dec{s}"), cout, widths[s], 3, &mut params);
            affine(&format!("dec{s}"), cout, &mut params);
        }
        conv("head".into(), classes, widths[0], 1, &mut params);

        Ok(ToyNet {
            kind,
            mode: lossless_mode(&wavelet),
            wavelet,
            widths: widths.to_vec(),
            in_channels,
            classes,
            params,
        })
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn wavelet(&self) -> &WaveletSpec {
        &self.wavelet
    }

    pub fn mode(&self) -> BoundaryMode {
        self.mode
    }

    pub fn depth(&self) -> usize {
        self.widths.len()
    }

    pub fn widths(&self) -> &[usize] {
        &self.widths
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn params(&self) -> &[Param] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [Param] {
        &mut self.params
    }

    pub fn num_parameters(&self) -> usize {
        self.params.iter().map(|p| p.value.len()).sum()
    }

    /// Spatial sides must be multiples of this.
    pub fn size_multiple(&self) -> usize {
        1 << self.depth()
    }

    fn check_input(&self, shape: &[usize]) -> Result<()> {
        let m = self.size_multiple();
        match shape {
            [c, h, w] if *c == self.in_channels && h % m == 0 && w % m == 0 && *h >= m && *w >= m => {
                Ok(())
            }
            _ => Err(Error::shape(format!(
                "expected [{}, H, W] with H, W multiples of {m}, got {shape:?}",
                self.in_channels
            ))),
        }
    }

    /// Records the network on `tape` with `x` (`[C, H, W]`) as input.
    pub fn forward(&self, tape: &mut Tape, x: NodeId, opts: ForwardOptions) -> Result<Forward> {
        self.check_input(tape.value(x).shape())?;
        let ids: Vec<NodeId> = self.params.iter().map(|p| tape.leaf(p.value.clone())).collect();
        let mut next = ids.iter().copied();
        let mut take = || next.next().expect("parameter layout");

        let mut h = x;
        let mut skips = Vec::with_capacity(self.depth());
        for _ in 0..self.depth() {
            let (k, b, sc, sh) = (take(), take(), take(), take());
            h = tape.conv2d(h, k, b)?;
            h = tape.channel_affine(h, sc, sh)?;
            h = tape.relu(h)?;
            match self.kind {
                Kind::Wads => {
                    let plan = Arc::new(DwtPlan::new(&self.wavelet, 2, self.mode, tape.value(h).shape())?);
                    let s = tape.dwt_with_plan(h, plan)?;
                    h = s.low;
                    skips.push(Skip::Highs(s));
                }
                Kind::Puds => {
                    h = tape.maxpool2(h)?;
                    skips.push(Skip::Pool(h));
                }
            }
        }
        let (k, b) = (take(), take());
        h = tape.conv2d(h, k, b)?;
        h = tape.relu(h)?;
        for skip in skips.into_iter().rev() {
            h = match skip {
                Skip::Highs(s) => {
                    let highs = if opts.zero_highs {
                        s.highs
                            .iter()
                            .map(|&(tag, id)| (tag, tape.leaf(tape.value(id).zeros_like())))
                            .collect()
                    } else {
                        s.highs
                    };
                    tape.idwt(&SubbandNodes {
                        low: h,
                        highs,
                        plan: s.plan,
                    })?
                }
                Skip::Pool(p) => tape.maxunpool2(h, p)?,
            };
            let (k, b, sc, sh) = (take(), take(), take(), take());
            h = tape.conv2d(h, k, b)?;
            h = tape.channel_affine(h, sc, sh)?;
            h = tape.relu(h)?;
        }
        let (k, b) = (take(), take());
        let logits = tape.conv2d(h, k, b)?;
        Ok(Forward { params: ids, logits })
    }

    /// `[classes, H, W]` logits for one `[C, H, W]` image.
    pub fn logits(&self, image: &Tensor, opts: ForwardOptions) -> Result<Tensor> {
        let mut tape = Tape::new();
        let x = tape.leaf(image.clone());
        let f = self.forward(&mut tape, x, opts)?;
        Ok(tape.value(f.logits).clone())
    }

    /// Per-pixel argmax labels.
    pub fn predict(&self, image: &Tensor) -> Result<Vec<u8>> {
        Ok(argmax_labels(&self.logits(image, ForwardOptions::default())?))
    }

    /// Mean cross-entropy on one sample.
    pub fn loss(&self, sample: &SegSample) -> Result<f64> {
        let mut tape = Tape::new();
        let x = tape.leaf(sample.image.clone());
        let f = self.forward(&mut tape, x, ForwardOptions::default())?;
        let l = tape.softmax_ce(f.logits, &sample.mask)?;
        Ok(tape.value(l).data()[0])
    }

    /// Loss, per-parameter gradients and the argmax prediction for one
    /// sample.
    pub fn loss_and_grad(&self, sample: &SegSample) -> Result<SampleGrad> {
        let mut tape = Tape::new();
        let x = tape.leaf(sample.image.clone());
        let f = self.forward(&mut tape, x, ForwardOptions::default())?;
        let l = tape.softmax_ce(f.logits, &sample.mask)?;
        tape.backward(l)?;
        Ok(SampleGrad {
            loss: tape.value(l).data()[0],
            grads: f.params.iter().map(|&p| tape.grad(p)).collect(),
            prediction: argmax_labels(tape.value(f.logits)),
        })
    }
}

#[derive(Clone, Debug)]
pub struct SampleGrad {
    pub loss: f64,
    pub grads: Vec<Tensor>,
    pub prediction: Vec<u8>,
}

/// Argmax over the leading axis of `[K, ...]` scores; ties go to the
/// lowest class.
pub fn argmax_labels(logits: &Tensor) -> Vec<u8> {
    let k = logits.shape()[0];
    let plane = logits.len() / k;
    let d = logits.data();
    (0..plane)
        .map(|i| {
            let mut best = 0;
            for c in 1..k {
                if d[c * plane + i] > d[best * plane + i] {
                    best = c;
                }
            }
            best as u8
        })
        .collect()
}
