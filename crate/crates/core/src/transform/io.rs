//! Directory layout for saved decompositions.
//!
//! A directory holds `header.txt` plus one WLT1 tensor per stored band,
//! named `L<level>_<tag>.wlt`. Every level stores its detail bands; only the
//! deepest level stores its low band. The header is line-oriented:
//!
//! ```text
//! wlt-subbands 1
//! wavelet haar
//! mode periodic
//! dim 2
//! levels 1
//! extent 1 64 64
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::filters::BandTag;
use crate::tensor::Tensor;

use super::{BoundaryMode, Pyramid, Subbands};

const HEADER: &str = "header.txt";
const FORMAT_LINE: &str = "wlt-subbands 1";

pub fn band_file_name(level: usize, tag: BandTag) -> String {
    format!("L{level}_{tag}.wlt")
}

impl Pyramid {
    /// Writes the header and band files; returns the band file paths.
    pub fn save_dir(&self, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
        let dir = dir.as_ref();
        let first = self
            .levels
            .first()
            .ok_or_else(|| Error::arg("cannot save an empty pyramid"))?;
        fs::create_dir_all(dir)?;

        let mut header = String::new();
        writeln!(header, "{FORMAT_LINE}").unwrap();
        writeln!(header, "wavelet {}", first.wavelet).unwrap();
        writeln!(header, "mode {}", first.mode).unwrap();
        writeln!(header, "dim {}", first.dim).unwrap();
        writeln!(header, "levels {}", self.levels.len()).unwrap();
        for (i, l) in self.levels.iter().enumerate() {
            let ext: Vec<String> = l.original_extent.iter().map(|e| e.to_string()).collect();
            writeln!(header, "extent {} {}", i + 1, ext.join(" ")).unwrap();
        }
        fs::write(dir.join(HEADER), header)?;

        let mut written = Vec::new();
        let depth = self.levels.len();
        for (i, l) in self.levels.iter().enumerate() {
            for (tag, band) in l.bands() {
                if tag.is_low() && i + 1 != depth {
                    continue;
                }
                let path = dir.join(band_file_name(i + 1, tag));
                band.save(&path)?;
                written.push(path);
            }
        }
        Ok(written)
    }

    /// Reads a directory written by [`Pyramid::save_dir`]. Intermediate low
    /// bands are not stored and come back as zeros.
    pub fn load_dir(dir: impl AsRef<Path>) -> Result<Pyramid> {
        let dir = dir.as_ref();
        let text = fs::read_to_string(dir.join(HEADER))?;
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some(FORMAT_LINE) {
            return Err(Error::format("missing subband header line"));
        }
        let mut wavelet = None;
        let mut mode = None;
        let mut dim = None;
        let mut levels = None;
        let mut extents: Vec<(usize, Vec<usize>)> = Vec::new();
        let num = |s: &str| -> Result<usize> {
            s.parse().map_err(|_| Error::format(format!("bad number `{s}` in header")))
        };
        for line in lines.map(str::trim).filter(|l| !l.is_empty()) {
            let mut parts = line.split_whitespace();
            let key = parts.next().unwrap_or_default();
            let rest: Vec<&str> = parts.collect();
            let single = || -> Result<&str> {
                match rest.as_slice() {
                    [v] => Ok(*v),
                    _ => Err(Error::format(format!("malformed header line `{line}`"))),
                }
            };
            match key {
                "wavelet" => wavelet = Some(single()?.to_string()),
                "mode" => {
                    mode = Some(
                        single()?
                            .parse::<BoundaryMode>()
                            .map_err(|e| Error::format(e.to_string()))?,
                    )
                }
                "dim" => dim = Some(num(single()?)?),
                "levels" => levels = Some(num(single()?)?),
                "extent" => {
                    let (lvl, dims) = rest
                        .split_first()
                        .ok_or_else(|| Error::format("empty extent line"))?;
                    extents.push((num(lvl)?, dims.iter().map(|d| num(d)).collect::<Result<_>>()?));
                }
                _ => return Err(Error::format(format!("unknown header key `{key}`"))),
            }
        }
        let missing = |k: &str| Error::format(format!("header lacks `{k}`"));
        let wavelet = wavelet.ok_or_else(|| missing("wavelet"))?;
        let mode = mode.ok_or_else(|| missing("mode"))?;
        let dim = dim.ok_or_else(|| missing("dim"))?;
        let depth = levels.ok_or_else(|| missing("levels"))?;
        if !(1..=3).contains(&dim) || depth == 0 {
            return Err(Error::format("dim or levels out of range"));
        }
        extents.sort_by_key(|e| e.0);
        if extents.len() != depth || extents.iter().enumerate().any(|(i, e)| e.0 != i + 1 || e.1.len() != dim) {
            return Err(Error::format("extent lines do not match levels/dim"));
        }

        let tags = BandTag::all(dim);
        let mut out = Vec::with_capacity(depth);
        for (i, (_, extent)) in extents.into_iter().enumerate() {
            let level = i + 1;
            let highs = tags[1..]
                .iter()
                .map(|&t| Ok((t, Tensor::load(dir.join(band_file_name(level, t)))?)))
                .collect::<Result<Vec<_>>>()?;
            let low = if level == depth {
                Tensor::load(dir.join(band_file_name(level, tags[0])))?
            } else {
                highs[0].1.zeros_like()
            };
            let s = Subbands {
                dim,
                low,
                highs,
                mode,
                wavelet: wavelet.clone(),
                original_extent: extent,
            };
            s.check().map_err(|e| Error::format(e.to_string()))?;
            out.push(s);
        }
        Ok(Pyramid { levels: out })
    }
}

impl Subbands {
    pub fn save_dir(&self, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
        Pyramid {
            levels: vec![self.clone()],
        }
        .save_dir(dir)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filters::get_wavelet;
    use crate::transform::{dwt_multilevel, idwt_multilevel};

    #[test]
    fn pyramid_roundtrip_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let w = get_wavelet("db2").unwrap();
        let x = Tensor::from_fn(&[2, 16, 12], |i| ((i * 13) % 29) as f64 / 29.0).unwrap();
        let p = dwt_multilevel(&x, &w, 2, BoundaryMode::Periodic, 2).unwrap();
        let files = p.save_dir(dir.path()).unwrap();
        assert_eq!(files.len(), 3 + 4);
        let q = Pyramid::load_dir(dir.path()).unwrap();
        assert_eq!(q.levels[1], p.levels[1]);
        assert_eq!(q.levels[0].highs, p.levels[0].highs);
        let back = idwt_multilevel(&q, &w).unwrap();
        assert!(back.max_abs_diff(&x).unwrap() < 1e-10);
    }

    #[test]
    fn bad_header_is_format_error() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join(HEADER), "wlt-subbands 1\nwavelet haar\n").unwrap();
        assert!(matches!(Pyramid::load_dir(dir.path()), Err(Error::Format(_))));
        fs::write(dir.path().join(HEADER), "something else\n").unwrap();
        assert!(matches!(Pyramid::load_dir(dir.path()), Err(Error::Format(_))));
    }
}
