//! Wavelet filter banks and their tensor-product kernels.
//!
//! Conventions used throughout the crate:
//!
//! * `dec_lo`/`dec_hi` are *correlation* taps: the analysis output is
//!   `y[k] = Σ_j dec[j] · x[2k + j - s]`, with no kernel flip. The shift `s`
//!   is 0 for periodic and zero extension; symmetric extension of a
//!   symmetric bank centres the filter instead.
//! * `rec_lo`/`rec_hi` are the synthesis filters. Reconstruction places
//!   `rec` time-reversed at `2k - s`: `x[t] = Σ_k rev(rec)[t + s - 2k] · y[k]`.
//!   For the orthogonal family `rec` is the reversal of `dec`.
//! * A band tag such as `lh` names the filter used along each spatial axis,
//!   first character for the last (fastest) axis. The 2D kernel of tag
//!   `c0 c1` is `kernel[i][j] = f_c1[i] · f_c0[j]`.

mod coeffs;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::tensor::Tensor;

use coeffs::*;

/// Every shipped wavelet, in the order the tables list them.
pub const WAVELET_NAMES: [&str; 10] = [
    "haar", "db2", "db3", "db4", "db5", "db6", "ch2.2", "ch3.3", "ch4.4", "ch5.5",
];

/// Tolerance for the filter-bank identities checked by [`validate`].
pub const VALIDATION_TOL: f64 = 1e-10;

/// Tolerance for deciding whether a filter is symmetric.
pub const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Orthogonal,
    Biorthogonal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bank {
    Analysis,
    Synthesis,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pass {
    Low,
    High,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WaveletSpec {
    pub name: String,
    pub family: Family,
    pub symmetric: bool,
    pub dec_lo: Vec<f64>,
    pub dec_hi: Vec<f64>,
    pub rec_lo: Vec<f64>,
    pub rec_hi: Vec<f64>,
}

impl WaveletSpec {
    pub fn filters(&self, bank: Bank) -> (&[f64], &[f64]) {
        match bank {
            Bank::Analysis => (&self.dec_lo, &self.dec_hi),
            Bank::Synthesis => (&self.rec_lo, &self.rec_hi),
        }
    }

    pub fn filter(&self, bank: Bank, pass: Pass) -> &[f64] {
        let (lo, hi) = self.filters(bank);
        match pass {
            Pass::Low => lo,
            Pass::High => hi,
        }
    }

    /// Length of the longest filter in the bank.
    pub fn filter_len(&self) -> usize {
        [&self.dec_lo, &self.dec_hi, &self.rec_lo, &self.rec_hi]
            .iter()
            .map(|f| f.len())
            .max()
            .unwrap_or(0)
    }

    /// Synthesis taps in placement order: `x[t] += taps[t - 2k] * y[k]`.
    pub(crate) fn synthesis_taps(&self, pass: Pass) -> Vec<f64> {
        let mut taps = self.filter(Bank::Synthesis, pass).to_vec();
        taps.reverse();
        taps
    }
}

fn spec(name: &str, family: Family, symmetric: bool, f: [&[f64]; 4]) -> WaveletSpec {
    WaveletSpec {
        name: name.to_string(),
        family,
        symmetric,
        dec_lo: f[0].to_vec(),
        dec_hi: f[1].to_vec(),
        rec_lo: f[2].to_vec(),
        rec_hi: f[3].to_vec(),
    }
}

pub fn get_wavelet(name: &str) -> Result<WaveletSpec> {
    use Family::*;
    let w = match name {
        "haar" => spec(name, Orthogonal, true, [&HAAR_DEC_LO, &HAAR_DEC_HI, &HAAR_REC_LO, &HAAR_REC_HI]),
        "db2" => spec(name, Orthogonal, false, [&DB2_DEC_LO, &DB2_DEC_HI, &DB2_REC_LO, &DB2_REC_HI]),
        "db3" => spec(name, Orthogonal, false, [&DB3_DEC_LO, &DB3_DEC_HI, &DB3_REC_LO, &DB3_REC_HI]),
        "db4" => spec(name, Orthogonal, false, [&DB4_DEC_LO, &DB4_DEC_HI, &DB4_REC_LO, &DB4_REC_HI]),
        "db5" => spec(name, Orthogonal, false, [&DB5_DEC_LO, &DB5_DEC_HI, &DB5_REC_LO, &DB5_REC_HI]),
        "db6" => spec(name, Orthogonal, false, [&DB6_DEC_LO, &DB6_DEC_HI, &DB6_REC_LO, &DB6_REC_HI]),
        "ch2.2" => spec(name, Biorthogonal, true, [&CH2_2_DEC_LO, &CH2_2_DEC_HI, &CH2_2_REC_LO, &CH2_2_REC_HI]),
        "ch3.3" => spec(name, Biorthogonal, true, [&CH3_3_DEC_LO, &CH3_3_DEC_HI, &CH3_3_REC_LO, &CH3_3_REC_HI]),
        "ch4.4" => spec(name, Biorthogonal, true, [&CH4_4_DEC_LO, &CH4_4_DEC_HI, &CH4_4_REC_LO, &CH4_4_REC_HI]),
        "ch5.5" => spec(name, Biorthogonal, true, [&CH5_5_DEC_LO, &CH5_5_DEC_HI, &CH5_5_REC_LO, &CH5_5_REC_HI]),
        _ => return Err(Error::UnknownWavelet(name.to_string())),
    };
    Ok(w)
}

pub fn all_wavelets() -> Vec<WaveletSpec> {
    WAVELET_NAMES
        .iter()
        .map(|n| get_wavelet(n).expect("shipped wavelet"))
        .collect()
}

/// Names one subband: the low/high choice along each of `dim` axes.
///
/// Character `k` of the tag selects the filter for the `k`-th axis counted
/// from the last, so `lh` in 2D is low-pass along width and high-pass along
/// height. Tags order as binary numbers with the first character most
/// significant: `ll, lh, hl, hh`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BandTag {
    dim: u8,
    bits: u8,
}

impl BandTag {
    pub fn new(dim: usize, index: usize) -> Result<Self> {
        if !(1..=3).contains(&dim) || index >= 1 << dim {
            return Err(Error::arg(format!("no band {index} in {dim}D")));
        }
        Ok(BandTag {
            dim: dim as u8,
            bits: index as u8,
        })
    }

    pub fn low(dim: usize) -> Self {
        BandTag::new(dim, 0).expect("valid dim")
    }

    /// All `2^dim` tags in canonical order, low band first.
    pub fn all(dim: usize) -> Vec<BandTag> {
        (0..1usize << dim)
            .map(|i| BandTag::new(dim, i).expect("valid dim"))
            .collect()
    }

    pub fn dim(self) -> usize {
        self.dim as usize
    }

    pub fn index(self) -> usize {
        self.bits as usize
    }

    pub fn is_low(self) -> bool {
        self.bits == 0
    }

    /// Filter used along the `k`-th axis counted from the last.
    pub fn pass(self, k: usize) -> Pass {
        debug_assert!(k < self.dim());
        if self.bits >> (self.dim() - 1 - k) & 1 == 1 {
            Pass::High
        } else {
            Pass::Low
        }
    }
}

impl fmt::Display for BandTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..self.dim() {
            f.write_str(match self.pass(k) {
                Pass::Low => "l",
                Pass::High => "h",
            })?;
        }
        Ok(())
    }
}

impl FromStr for BandTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let dim = s.len();
        if !(1..=3).contains(&dim) {
            return Err(Error::arg(format!("bad band tag `{s}`")));
        }
        let mut bits = 0u8;
        for c in s.chars() {
            bits = (bits << 1)
                | match c {
                    'l' => 0,
                    'h' => 1,
                    _ => return Err(Error::arg(format!("bad band tag `{s}`"))),
                };
        }
        Ok(BandTag {
            dim: dim as u8,
            bits,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FilterKernel {
    pub tag: BandTag,
    /// Rank-`dim` kernel; axis 0 corresponds to the tag's last character.
    pub kernel: Tensor,
}

/// Builds the `2^dim` separable kernels as outer products of the bank's
/// 1D filters.
pub fn tensor_filters(w: &WaveletSpec, bank: Bank, dim: usize) -> Result<Vec<FilterKernel>> {
    if !(1..=3).contains(&dim) {
        return Err(Error::arg(format!("dim must be 1..=3, got {dim}")));
    }
    BandTag::all(dim)
        .into_iter()
        .map(|tag| {
            // axis a of the kernel uses the filter of tag character dim-1-a
            let factors: Vec<&[f64]> = (0..dim)
                .map(|a| w.filter(bank, tag.pass(dim - 1 - a)))
                .collect();
            let shape: Vec<usize> = factors.iter().map(|f| f.len()).collect();
            let mut data = vec![1.0; shape.iter().product()];
            for (flat, v) in data.iter_mut().enumerate() {
                let mut rem = flat;
                for a in (0..dim).rev() {
                    *v *= factors[a][rem % shape[a]];
                    rem /= shape[a];
                }
            }
            Ok(FilterKernel {
                tag,
                kernel: Tensor::from_vec(&shape, data)?,
            })
        })
        .collect()
}

/// The four 2D kernels `ll, lh, hl, hh`.
pub fn tensor_filters_2d(w: &WaveletSpec, bank: Bank) -> Result<Vec<FilterKernel>> {
    tensor_filters(w, bank, 2)
}

/// The eight 3D kernels `lll` .. `hhh`.
pub fn tensor_filters_3d(w: &WaveletSpec, bank: Bank) -> Result<Vec<FilterKernel>> {
    tensor_filters(w, bank, 3)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub deviation: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.deviation <= self.tolerance
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub wavelet: String,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn max_deviation(&self) -> f64 {
        self.checks.iter().fold(0.0, |m, c| m.max(c.deviation))
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

fn reversal_residual(a: &[f64], b: &[f64], sign: f64) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b.iter().rev())
        .fold(0.0, |m, (x, y)| m.max((x - sign * y).abs()))
}

/// `max_r |Σ_j a[j]·b[j + 2r] - δ_r·expect|` over all shifts with overlap.
fn double_shift_residual(a: &[f64], b: &[f64], expect: f64) -> f64 {
    let (la, lb) = (a.len() as isize, b.len() as isize);
    let mut worst: f64 = 0.0;
    let mut r = -(la / 2) - 1;
    while 2 * r < lb {
        let mut acc = 0.0;
        for j in 0..la {
            let i = j + 2 * r;
            if (0..lb).contains(&i) {
                acc += a[j as usize] * b[i as usize];
            }
        }
        let target = if r == 0 { expect } else { 0.0 };
        worst = worst.max((acc - target).abs());
        r += 1;
    }
    worst
}

/// Checks the filter-bank identities and reports the deviation of each.
pub fn validate(w: &WaveletSpec) -> ValidationReport {
    let mut checks = Vec::new();
    let mut push = |name: &str, deviation: f64, tolerance: f64| {
        checks.push(Check {
            name: name.to_string(),
            deviation: if deviation.is_nan() { f64::INFINITY } else { deviation },
            tolerance,
        })
    };

    let filters = [&w.dec_lo, &w.dec_hi, &w.rec_lo, &w.rec_hi];
    let well_formed = filters
        .iter()
        .all(|f| !f.is_empty() && f.iter().all(|v| v.is_finite()));
    push(
        "filters nonempty and finite",
        if well_formed { 0.0 } else { f64::INFINITY },
        0.0,
    );
    if !well_formed {
        return ValidationReport {
            wavelet: w.name.clone(),
            checks,
        };
    }

    let sum = |f: &[f64]| f.iter().sum::<f64>();
    push("sum(dec_lo) = sqrt(2)", (sum(&w.dec_lo) - 2f64.sqrt()).abs(), VALIDATION_TOL);
    push("sum(dec_hi) = 0", sum(&w.dec_hi).abs(), VALIDATION_TOL);

    if w.family == Family::Orthogonal {
        let lens_equal = filters.iter().all(|f| f.len() == w.dec_lo.len());
        push(
            "orthogonal filters have equal length",
            if lens_equal { 0.0 } else { f64::INFINITY },
            0.0,
        );
        push("rec_lo = reverse(dec_lo)", reversal_residual(&w.rec_lo, &w.dec_lo, 1.0), VALIDATION_TOL);
        push("rec_hi = reverse(dec_hi)", reversal_residual(&w.rec_hi, &w.dec_hi, 1.0), VALIDATION_TOL);
        push(
            "double-shift orthogonality of dec_lo",
            double_shift_residual(&w.dec_lo, &w.dec_lo, 1.0),
            VALIDATION_TOL,
        );
    }

    let s_lo = w.synthesis_taps(Pass::Low);
    let s_hi = w.synthesis_taps(Pass::High);
    push(
        "biorthogonality lo/lo",
        double_shift_residual(&w.dec_lo, &s_lo, 1.0),
        VALIDATION_TOL,
    );
    push(
        "biorthogonality hi/hi",
        double_shift_residual(&w.dec_hi, &s_hi, 1.0),
        VALIDATION_TOL,
    );
    push(
        "biorthogonality lo/hi",
        double_shift_residual(&w.dec_lo, &s_hi, 0.0),
        VALIDATION_TOL,
    );
    push(
        "biorthogonality hi/lo",
        double_shift_residual(&w.dec_hi, &s_lo, 0.0),
        VALIDATION_TOL,
    );

    let sym = reversal_residual(&w.dec_lo, &w.dec_lo, 1.0);
    let truth = sym <= SYMMETRY_TOL;
    let flag_dev = match (truth, w.symmetric) {
        (true, true) => sym,
        (false, false) => 0.0,
        _ => f64::INFINITY,
    };
    push("symmetric flag matches dec_lo", flag_dev, SYMMETRY_TOL);

    ValidationReport {
        wavelet: w.name.clone(),
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const R: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn haar_matches_closed_form() {
        let w = get_wavelet("haar").unwrap();
        assert_eq!(w.dec_lo, vec![R, R]);
        assert_eq!(w.dec_hi, vec![R, -R]);
        assert!(w.symmetric);
        assert_eq!(w.family, Family::Orthogonal);
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(get_wavelet("db7"), Err(Error::UnknownWavelet(_))));
    }

    #[test]
    fn haar_2d_kernels() {
        let w = get_wavelet("haar").unwrap();
        let k = tensor_filters_2d(&w, Bank::Analysis).unwrap();
        let tags: Vec<String> = k.iter().map(|f| f.tag.to_string()).collect();
        assert_eq!(tags, ["ll", "lh", "hl", "hh"]);
        let close = |t: &Tensor, want: [f64; 4]| {
            assert_eq!(t.shape(), &[2, 2]);
            for (a, b) in t.data().iter().zip(want) {
                assert!((a - b).abs() <= 1e-15, "{a} vs {b}");
            }
        };
        close(&k[0].kernel, [0.5, 0.5, 0.5, 0.5]);
        close(&k[1].kernel, [0.5, 0.5, -0.5, -0.5]);
        close(&k[2].kernel, [0.5, -0.5, 0.5, -0.5]);
        close(&k[3].kernel, [0.5, -0.5, -0.5, 0.5]);
    }

    #[test]
    fn outer_product_layout() {
        let w = get_wavelet("db3").unwrap();
        for bank in [Bank::Analysis, Bank::Synthesis] {
            for fk in tensor_filters_2d(&w, bank).unwrap() {
                let f0 = w.filter(bank, fk.tag.pass(0));
                let f1 = w.filter(bank, fk.tag.pass(1));
                for (i, a) in f1.iter().enumerate() {
                    for (j, b) in f0.iter().enumerate() {
                        assert_eq!(fk.kernel.data()[i * f0.len() + j], a * b);
                    }
                }
            }
        }
    }

    #[test]
    fn haar_3d_kernels() {
        let w = get_wavelet("haar").unwrap();
        let k = tensor_filters_3d(&w, Bank::Analysis).unwrap();
        assert_eq!(k.len(), 8);
        assert_eq!(k[0].tag.to_string(), "lll");
        assert_eq!(k[7].tag.to_string(), "hhh");
        let c = 1.0 / (2.0 * 2f64.sqrt());
        assert!(k[0].kernel.data().iter().all(|v| (v - c).abs() < 1e-15));
        for fk in &k[1..] {
            assert!(fk.kernel.sum().abs() < 1e-15);
        }
    }

    #[test]
    fn band_tag_parse_roundtrip() {
        for dim in 1..=3 {
            for t in BandTag::all(dim) {
                assert_eq!(t.to_string().parse::<BandTag>().unwrap(), t);
            }
        }
        assert!("lx".parse::<BandTag>().is_err());
        assert!("".parse::<BandTag>().is_err());
    }

    #[test]
    fn all_shipped_wavelets_validate() {
        for w in all_wavelets() {
            let r = validate(&w);
            assert!(r.passed(), "{}: {:?}", w.name, r.failures().collect::<Vec<_>>());
        }
        assert!(validate(&get_wavelet("haar").unwrap()).max_deviation() <= 1e-15);
    }

    #[test]
    fn scaled_filter_fails() {
        let mut w = get_wavelet("haar").unwrap();
        w.dec_lo.iter_mut().for_each(|v| *v *= 2.0);
        let r = validate(&w);
        assert!(!r.passed());
        assert!(r.failures().any(|c| c.name.starts_with("sum(dec_lo)")));
    }

    #[test]
    fn wrong_symmetry_flag_fails() {
        let mut w = get_wavelet("db2").unwrap();
        w.symmetric = true;
        assert!(!validate(&w).passed());
        let mut w = get_wavelet("ch2.2").unwrap();
        w.symmetric = false;
        assert!(!validate(&w).passed());
    }

    #[test]
    fn empty_filter_fails() {
        let mut w = get_wavelet("haar").unwrap();
        w.rec_hi.clear();
        assert!(!validate(&w).passed());
    }
}
