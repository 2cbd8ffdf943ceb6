//! Segmentation and reconstruction metrics.

use std::fmt;

use crate::autodiff::IGNORE_LABEL;
use crate::error::{Error, Result};
use crate::tensor::Tensor;

/// `K×K` pixel counts; entry `[i][j]` counts ground truth `i` predicted `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfusionMatrix {
    k: usize,
    counts: Vec<u64>,
}

impl ConfusionMatrix {
    pub fn new(k: usize) -> Self {
        ConfusionMatrix {
            k,
            counts: vec![0; k * k],
        }
    }

    pub fn from_counts(rows: &[Vec<u64>]) -> Result<Self> {
        let k = rows.len();
        if rows.iter().any(|r| r.len() != k) {
            return Err(Error::arg("confusion matrix must be square"));
        }
        Ok(ConfusionMatrix {
            k,
            counts: rows.concat(),
        })
    }

    pub fn num_classes(&self) -> usize {
        self.k
    }

    pub fn get(&self, truth: usize, pred: usize) -> u64 {
        self.counts[truth * self.k + pred]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.k).map(|i| self.get(i, i)).sum()
    }

    pub fn row_sum(&self, i: usize) -> u64 {
        self.counts[i * self.k..(i + 1) * self.k].iter().sum()
    }

    pub fn col_sum(&self, j: usize) -> u64 {
        (0..self.k).map(|i| self.get(i, j)).sum()
    }

    /// Adds one pair of label maps. Pixels whose truth is [`IGNORE_LABEL`]
    /// are skipped. Nothing is counted if any label is out of range.
    pub fn accumulate(&mut self, truth: &[u8], pred: &[u8]) -> Result<()> {
        if truth.len() != pred.len() {
            return Err(Error::shape(format!(
                "truth has {} pixels, prediction has {}",
                truth.len(),
                pred.len()
            )));
        }
        let k = self.k;
        let bad = truth
            .iter()
            .zip(pred)
            .find(|&(&t, &p)| t != IGNORE_LABEL && (t as usize >= k || p as usize >= k));
        if let Some((t, p)) = bad {
            return Err(Error::arg(format!("label pair ({t}, {p}) out of range for {k} classes")));
        }
        for (&t, &p) in truth.iter().zip(pred) {
            if t != IGNORE_LABEL {
                self.counts[t as usize * k + p as usize] += 1;
            }
        }
        Ok(())
    }

    pub fn merge(&mut self, other: &ConfusionMatrix) -> Result<()> {
        if other.k != self.k {
            return Err(Error::shape(format!(
                "cannot merge {0}x{0} into {1}x{1}",
                other.k, self.k
            )));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        Ok(())
    }

    /// Per-class IoU; `None` for classes absent from both truth and
    /// prediction.
    pub fn class_iou(&self) -> Vec<Option<f64>> {
        (0..self.k)
            .map(|c| {
                let tp = self.get(c, c);
                let union = self.row_sum(c) + self.col_sum(c) - tp;
                (union > 0).then(|| tp as f64 / union as f64)
            })
            .collect()
    }

    pub fn miou(&self) -> Result<f64> {
        let present: Vec<f64> = self.class_iou().into_iter().flatten().collect();
        if present.is_empty() {
            return Err(Error::Undefined("mIoU of an empty confusion matrix".into()));
        }
        Ok(present.iter().sum::<f64>() / present.len() as f64)
    }

    pub fn global_accuracy(&self) -> Result<f64> {
        match self.total() {
            0 => Err(Error::Undefined("accuracy of an empty confusion matrix".into())),
            n => Ok(self.trace() as f64 / n as f64),
        }
    }
}

impl fmt::Display for ConfusionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.k {
            let row: Vec<String> = (0..self.k).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Peak signal-to-noise ratio in dB. Identical inputs give `f64::INFINITY`;
/// see [`format_psnr`] for the textual sentinel.
pub fn psnr(a: &Tensor, b: &Tensor, peak: f64) -> Result<f64> {
    if !(peak > 0.0 && peak.is_finite()) {
        return Err(Error::arg(format!("peak must be positive, got {peak}")));
    }
    if a.shape() != b.shape() {
        return Err(Error::shape(format!("psnr of {:?} vs {:?}", a.shape(), b.shape())));
    }
    if a.is_empty() {
        return Err(Error::shape("psnr of empty tensors"));
    }
    let mse = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        / a.len() as f64;
    if mse == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (peak * peak / mse).log10())
}

pub fn format_psnr(db: f64) -> String {
    if db.is_infinite() {
        "inf".to_string()
    } else {
        format!("{db}")
    }
}
