//! Minibatch SGD with momentum, evaluation and the WADS-vs-PUDS report.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{build_net, gen_dataset_aligned, Kind, SampleGrad, SegSample, ToyNet, CLASS_NAMES};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::metrics::ConfusionMatrix;
use crate::tensor::Tensor;

/// Stop once both targets hold at the end of an epoch.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EarlyStop {
    pub pixel_acc: f64,
    /// Required ratio between the epoch-0 loss and the current loss.
    pub loss_reduction: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainConfig {
    pub epochs: usize,
    pub lr: f64,
    pub momentum: f64,
    pub batch_size: usize,
    /// Seeds the per-epoch shuffle.
    pub seed: u64,
    pub early_stop: Option<EarlyStop>,
    /// Per-sample gradients are computed under this policy; the reduction is
    /// always sequential in sample order.
    pub exec: Exec,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 300,
            lr: 0.05,
            momentum: 0.9,
            batch_size: 8,
            seed: 0,
            early_stop: None,
            exec: Exec::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpochRecord {
    pub epoch: usize,
    /// Mean per-sample loss.
    pub loss: f64,
    pub pixel_acc: f64,
}

/// Epoch 0 is the untrained network; epoch `e > 0` averages the losses and
/// predictions seen while running epoch `e`'s minibatches.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrainLog {
    pub records: Vec<EpochRecord>,
}

impl TrainLog {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("epoch,loss,pixel_acc\n");
        for r in &self.records {
            writeln!(s, "{},{},{}", r.epoch, r.loss, r.pixel_acc).expect("string write");
        }
        s
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::File::create(path)?.write_all(self.to_csv().as_bytes())?;
        Ok(())
    }

    pub fn first(&self) -> Option<&EpochRecord> {
        self.records.first()
    }

    pub fn last(&self) -> Option<&EpochRecord> {
        self.records.last()
    }

    pub fn loss_reduction(&self) -> f64 {
        match (self.first(), self.last()) {
            (Some(a), Some(b)) => a.loss / b.loss,
            _ => 1.0,
        }
    }
}

struct Tally {
    loss: f64,
    correct: u64,
    labelled: u64,
}

impl Tally {
    fn record(losses: &[f64], preds: &[(u64, u64)]) -> Self {
        // Summed in sample order regardless of visiting order.
        Tally {
            loss: losses.iter().sum::<f64>() / losses.len() as f64,
            correct: preds.iter().map(|p| p.0).sum(),
            labelled: preds.iter().map(|p| p.1).sum(),
        }
    }

    fn into_record(self, epoch: usize) -> EpochRecord {
        EpochRecord {
            epoch,
            loss: self.loss,
            pixel_acc: self.correct as f64 / self.labelled.max(1) as f64,
        }
    }
}

fn hits(pred: &[u8], mask: &[u8]) -> (u64, u64) {
    let mut correct = 0;
    let mut labelled = 0;
    for (&p, &t) in pred.iter().zip(mask) {
        if t != crate::autodiff::IGNORE_LABEL {
            labelled += 1;
            correct += u64::from(p == t);
        }
    }
    (correct, labelled)
}

fn check_finite(epoch: usize, loss: f64) -> Result<()> {
    if loss.is_finite() {
        Ok(())
    } else {
        Err(Error::Divergence { epoch, loss })
    }
}

/// Trains `net` in place and returns the per-epoch log.
pub fn train(net: &mut ToyNet, data: &[SegSample], cfg: &TrainConfig) -> Result<TrainLog> {
    if data.is_empty() {
        return Err(Error::arg("training set is empty"));
    }
    if cfg.batch_size == 0 || cfg.lr.is_nan() || cfg.lr < 0.0 || !(0.0..1.0).contains(&cfg.momentum) {
        return Err(Error::arg(format!(
            "invalid optimiser settings: batch {}, lr {}, momentum {}",
            cfg.batch_size, cfg.lr, cfg.momentum
        )));
    }
    let n = data.len();
    let mut log = TrainLog::default();

    let init: Vec<Result<(f64, (u64, u64))>> = cfg.exec.map(data, |s| {
        let mut tape = crate::autodiff::Tape::new();
        let x = tape.leaf(s.image.clone());
        let f = net.forward(&mut tape, x, Default::default())?;
        let l = tape.softmax_ce(f.logits, &s.mask)?;
        let pred = super::argmax_labels(tape.value(f.logits));
        Ok((tape.value(l).data()[0], hits(&pred, &s.mask)))
    });
    let init = init.into_iter().collect::<Result<Vec<_>>>()?;
    let (losses, preds): (Vec<f64>, Vec<(u64, u64)>) = init.into_iter().unzip();
    let first = Tally::record(&losses, &preds).into_record(0);
    check_finite(0, first.loss)?;
    log.records.push(first);

    let mut velocity: Vec<Tensor> = net.params().iter().map(|p| p.value.zeros_like()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    let mut losses = vec![0.0; n];
    let mut preds = vec![(0u64, 0u64); n];

    for epoch in 1..=cfg.epochs {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(epoch as u64);
        order.shuffle(&mut rng);

        for batch in order.chunks(cfg.batch_size) {
            let results: Vec<Result<SampleGrad>> = {
                let net = &*net;
                cfg.exec.map(batch, |&i| net.loss_and_grad(&data[i]))
            };
            let mut grad: Vec<Tensor> = velocity.iter().map(Tensor::zeros_like).collect();
            for (&i, r) in batch.iter().zip(results) {
                let r = r?;
                losses[i] = r.loss;
                preds[i] = hits(&r.prediction, &data[i].mask);
                for (acc, g) in grad.iter_mut().zip(&r.grads) {
                    acc.axpy(1.0, g)?;
                }
            }
            let inv = 1.0 / batch.len() as f64;
            for ((p, v), g) in net.params_mut().iter_mut().zip(&mut velocity).zip(&grad) {
                // v <- momentum * v + g; p <- p - lr * v
                for (vi, gi) in v.data_mut().iter_mut().zip(g.data()) {
                    *vi = cfg.momentum * *vi + gi * inv;
                }
                p.value.axpy(-cfg.lr, v)?;
            }
        }

        let rec = Tally::record(&losses, &preds).into_record(epoch);
        check_finite(epoch, rec.loss)?;
        log.records.push(rec);
        if let Some(stop) = cfg.early_stop {
            if rec.pixel_acc >= stop.pixel_acc && log.loss_reduction() >= stop.loss_reduction {
                break;
            }
        }
    }
    Ok(log)
}

/// Confusion matrix of `net`'s predictions over `data`.
pub fn evaluate(net: &ToyNet, data: &[SegSample], exec: Exec) -> Result<ConfusionMatrix> {
    let preds = exec.map(data, |s| net.predict(&s.image));
    let mut cm = ConfusionMatrix::new(net.classes());
    for (s, p) in data.iter().zip(preds) {
        cm.accumulate(&s.mask, &p?)?;
    }
    Ok(cm)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompareConfig {
    pub wavelet: String,
    pub train_samples: usize,
    pub test_samples: usize,
    pub height: usize,
    pub width: usize,
    pub train: TrainConfig,
}

impl Default for CompareConfig {
    fn default() -> Self {
        CompareConfig {
            wavelet: "haar".into(),
            train_samples: 200,
            test_samples: 50,
            height: 32,
            width: 32,
            train: TrainConfig {
                epochs: 40,
                ..TrainConfig::default()
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompareRow {
    pub kind: Kind,
    pub class: usize,
    /// `None` when the class is absent from both truth and prediction.
    pub iou: Option<f64>,
    pub seed: u64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CompareReport {
    pub rows: Vec<CompareRow>,
}

impl CompareReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("kind,class,IoU,seed\n");
        for r in &self.rows {
            let iou = r.iou.map_or_else(|| "nan".to_string(), |v| v.to_string());
            writeln!(s, "{},{},{},{}", r.kind, CLASS_NAMES[r.class], iou, r.seed).expect("string write");
        }
        s
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::File::create(path)?.write_all(self.to_csv().as_bytes())?;
        Ok(())
    }

    /// Median IoU of one kind and class over seeds with a defined IoU.
    pub fn median(&self, kind: Kind, class: usize) -> Option<f64> {
        let mut v: Vec<f64> = self
            .rows
            .iter()
            .filter(|r| r.kind == kind && r.class == class)
            .filter_map(|r| r.iou)
            .collect();
        if v.is_empty() {
            return None;
        }
        v.sort_by(f64::total_cmp);
        let m = v.len() / 2;
        Some(if v.len() % 2 == 1 { v[m] } else { 0.5 * (v[m - 1] + v[m]) })
    }
}

/// Trains one network of each kind per seed on the same synthetic training
/// split and scores per-class IoU on a held-out split.
pub fn compare_duals(seeds: &[u64], cfg: &CompareConfig) -> Result<CompareReport> {
    if seeds.len() < 3 {
        return Err(Error::arg(format!("need at least 3 seeds, got {}", seeds.len())));
    }
    let mut report = CompareReport::default();
    for &seed in seeds {
        let multiple = 1 << super::DEFAULT_DEPTH;
        let train_set = gen_dataset_aligned(cfg.train_samples, cfg.height, cfg.width, seed, multiple)?;
        let test_set = gen_dataset_aligned(
            cfg.test_samples,
            cfg.height,
            cfg.width,
            seed ^ 0x9e37_79b9_7f4a_7c15,
            multiple,
        )?;
        for kind in Kind::ALL {
            let mut net = build_net(kind, &cfg.wavelet, seed)?;
            let tc = TrainConfig {
                seed,
                ..cfg.train.clone()
            };
            train(&mut net, &train_set, &tc)?;
            let cm = evaluate(&net, &test_set, cfg.train.exec)?;
            for (class, iou) in cm.class_iou().into_iter().enumerate() {
                report.rows.push(CompareRow { kind, class, iou, seed });
            }
        }
    }
    Ok(report)
}
