use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wavesnet::filters::{all_wavelets, validate, Family};
use wavesnet::metrics::{format_psnr, psnr, ConfusionMatrix};
use wavesnet::transform::{
    boundary_error_profile, boundary_stats, dwt_multilevel, idwt_multilevel, Pyramid,
    BOUNDARY_TOL,
};
use wavesnet::wadsnet::{
    build_net, compare_duals, gen_dataset, train, CompareConfig, TrainConfig, CLASS_NAMES,
};
use wavesnet::{get_wavelet, Exec, Tensor};

use crate::{pnm, Command, TrainOpts};

/// Bad flag values or flag combinations found after parsing.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

pub fn exit_code(e: &anyhow::Error) -> u8 {
    let argument = e.chain().any(|c| {
        c.downcast_ref::<UsageError>().is_some()
            || c.downcast_ref::<wavesnet::Error>()
                .is_some_and(wavesnet::Error::is_argument_error)
    });
    if argument {
        2
    } else {
        1
    }
}

pub fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Filters { wavelet } => filters(wavelet.as_deref()),
        Command::Dwt {
            input,
            output_dir,
            wavelet,
            mode,
            levels,
            visualize,
        } => {
            let w = get_wavelet(&wavelet)?;
            let img = pnm::read(&input)?;
            let p = dwt_multilevel(&img.pixels, &w, 2, mode, levels)?;
            p.save_dir(&output_dir)
                .with_context(|| format!("writing {}", output_dir.display()))?;
            if visualize {
                write_previews(&p, &output_dir)?;
            }
            emit(&energy_csv(&p), None)
        }
        Command::Idwt {
            input_dir,
            output,
            wavelet,
            mode,
        } => {
            let p = Pyramid::load_dir(&input_dir)
                .with_context(|| format!("reading {}", input_dir.display()))?;
            let first = &p.levels[0];
            if let Some(name) = wavelet.filter(|n| *n != first.wavelet) {
                return Err(usage(format!(
                    "{} was written with wavelet {}, not {name}",
                    input_dir.display(),
                    first.wavelet
                )));
            }
            if let Some(m) = mode.filter(|m| *m != first.mode) {
                return Err(usage(format!(
                    "{} was written with mode {}, not {m}",
                    input_dir.display(),
                    first.mode
                )));
            }
            let x = idwt_multilevel(&p, &get_wavelet(&first.wavelet)?)?;
            if is_tensor_file(&output) {
                x.save(&output)
                    .with_context(|| format!("writing {}", output.display()))?;
                Ok(())
            } else {
                pnm::write(&output, &x)
            }
        }
        Command::Psnr { a, b, peak } => {
            let (a, b) = (load_any(&a)?, load_any(&b)?);
            let db = psnr(&a, &b, peak)?;
            let mse = a.sub(&b)?.norm_sq() / a.len() as f64;
            let mut s = String::from("metric,value\n");
            writeln!(s, "psnr_db,{}", format_psnr(db))?;
            writeln!(s, "mse,{mse:e}")?;
            writeln!(s, "max_abs_err,{:e}", a.max_abs_diff(&b)?)?;
            emit(&s, None)
        }
        Command::Evalseg {
            truth,
            pred,
            classes,
        } => {
            if classes == 0 || classes > 255 {
                return Err(usage(format!("--classes must be in 1..=255, got {classes}")));
            }
            let (t, p) = (read_labels(&truth)?, read_labels(&pred)?);
            let mut cm = ConfusionMatrix::new(classes);
            cm.accumulate(&t, &p)?;
            let mut s = String::from("metric,value\n");
            writeln!(s, "global_accuracy,{}", cm.global_accuracy()?)?;
            writeln!(s, "miou,{}", cm.miou()?)?;
            for (k, iou) in cm.class_iou().into_iter().enumerate() {
                writeln!(s, "iou_{k},{}", fmt_opt(iou))?;
            }
            emit(&s, None)
        }
        Command::Boundary {
            wavelet_list,
            mode,
            size,
            seed,
            output,
        } => {
            if size < 2 || size % 2 != 0 {
                return Err(usage(format!("--size must be even and at least 2, got {size}")));
            }
            let mut ws = wavelet_list
                .iter()
                .map(|n| get_wavelet(n.trim()))
                .collect::<wavesnet::Result<Vec<_>>>()?;
            ws.sort_by_key(|w| w.filter_len());
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = Tensor::from_fn(&[size, size], |_| rng.gen::<f64>())?;
            let mut s = String::from("wavelet,affected_band_width,max_interior_err,max_boundary_err\n");
            for w in &ws {
                let profile = boundary_error_profile(&x, w, mode)?;
                // Interior: at least one filter length away from every edge.
                let st = boundary_stats(&profile, w.filter_len(), BOUNDARY_TOL)?;
                writeln!(
                    s,
                    "{},{},{:e},{:e}",
                    w.name, st.affected_band_width, st.max_interior_err, st.max_boundary_err
                )?;
            }
            emit(&s, output.as_deref())
        }
        Command::Train {
            output,
            kind,
            wavelet,
            seed,
            epochs,
            opts,
        } => {
            let data = gen_dataset(opts.samples, opts.size, opts.size, seed)?;
            let mut net = build_net(kind, &wavelet, seed)?;
            let cfg = TrainConfig {
                epochs,
                seed,
                ..train_config(&opts)
            };
            let log = train(&mut net, &data, &cfg)?;
            log.write_csv(&output)
                .with_context(|| format!("writing {}", output.display()))?;
            if let Some(last) = log.last() {
                eprintln!(
                    "{kind}/{wavelet} seed {seed}: epoch {} loss {:.4} pixel_acc {:.4} (loss reduced {:.1}x)",
                    last.epoch,
                    last.loss,
                    last.pixel_acc,
                    log.loss_reduction()
                );
            }
            Ok(())
        }
        Command::Compare {
            output,
            seeds,
            wavelet,
            epochs,
            test_samples,
            opts,
        } => {
            let cfg = CompareConfig {
                wavelet,
                train_samples: opts.samples,
                test_samples,
                height: opts.size,
                width: opts.size,
                train: TrainConfig {
                    epochs,
                    ..train_config(&opts)
                },
            };
            let report = compare_duals(&seeds, &cfg)?;
            report
                .write_csv(&output)
                .with_context(|| format!("writing {}", output.display()))?;
            let mut s = String::from("kind,class,median_IoU\n");
            for kind in wavesnet::wadsnet::Kind::ALL {
                for (c, name) in CLASS_NAMES.iter().enumerate() {
                    writeln!(s, "{kind},{name},{}", fmt_opt(report.median(kind, c)))?;
                }
            }
            emit(&s, None)
        }
    }
}

fn train_config(o: &TrainOpts) -> TrainConfig {
    TrainConfig {
        lr: o.lr,
        momentum: o.momentum,
        batch_size: o.batch_size,
        exec: if o.sequential {
            Exec::Sequential
        } else {
            Exec::default()
        },
        ..TrainConfig::default()
    }
}

fn filters(name: Option<&str>) -> Result<()> {
    let mut s = String::new();
    match name {
        None => {
            s.push_str("wavelet,family,length,symmetric\n");
            for w in all_wavelets() {
                let family = match w.family {
                    Family::Orthogonal => "orthogonal",
                    Family::Biorthogonal => "biorthogonal",
                };
                writeln!(s, "{},{family},{},{}", w.name, w.filter_len(), w.symmetric)?;
            }
        }
        Some(name) => {
            let w = get_wavelet(name)?;
            s.push_str("wavelet,filter,index,value\n");
            for (label, taps) in [
                ("dec_lo", &w.dec_lo),
                ("dec_hi", &w.dec_hi),
                ("rec_lo", &w.rec_lo),
                ("rec_hi", &w.rec_hi),
            ] {
                for (i, v) in taps.iter().enumerate() {
                    writeln!(s, "{},{label},{i},{v:.16e}", w.name)?;
                }
            }
            let report = validate(&w);
            if !report.passed() {
                let failed: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
                anyhow::bail!("{} failed validation: {}", w.name, failed.join(", "));
            }
        }
    }
    emit(&s, None)
}

fn emit(csv: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => fs::write(p, csv).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().lock().write_all(csv.as_bytes())?;
            Ok(())
        }
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "nan".into(), |v| v.to_string())
}

fn is_tensor_file(p: &Path) -> bool {
    p.extension().is_some_and(|e| e.eq_ignore_ascii_case("wlt"))
}

fn load_any(p: &Path) -> Result<Tensor> {
    if is_tensor_file(p) {
        Tensor::load(p).with_context(|| format!("reading {}", p.display()))
    } else {
        Ok(pnm::read(p)?.pixels)
    }
}

fn read_labels(p: &Path) -> Result<Vec<u8>> {
    let img = pnm::read(p)?;
    if img.pixels.shape()[0] != 1 {
        return Err(usage(format!("{} must be a single-channel PGM label map", p.display())));
    }
    Ok(img.pixels.data().iter().map(|&v| pnm::quantize(v)).collect())
}

fn energy_csv(p: &Pyramid) -> String {
    let depth = p.depth();
    let mut rows = Vec::new();
    for (i, l) in p.levels.iter().enumerate() {
        for (tag, band) in l.bands() {
            if tag.is_low() && i + 1 != depth {
                continue;
            }
            rows.push((i + 1, tag.to_string(), band.norm_sq()));
        }
    }
    let total: f64 = rows.iter().map(|r| r.2).sum();
    let mut s = String::from("level,band,energy,fraction\n");
    for (level, tag, e) in rows {
        let frac = if total > 0.0 { e / total } else { 0.0 };
        writeln!(s, "{level},{tag},{e},{frac}").expect("string write");
    }
    s
}

fn write_previews(p: &Pyramid, dir: &Path) -> Result<()> {
    let depth = p.depth();
    for (i, l) in p.levels.iter().enumerate() {
        for (tag, band) in l.bands() {
            if tag.is_low() && i + 1 != depth {
                continue;
            }
            let lo = band.data().iter().copied().fold(f64::INFINITY, f64::min);
            let hi = band.data().iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let span = hi - lo;
            let view = band.map(|v| if span > 0.0 { (v - lo) / span } else { 0.0 });
            let ext = if band.shape()[0] == 3 { "ppm" } else { "pgm" };
            pnm::write(&dir.join(format!("L{}_{tag}.{ext}", i + 1)), &view)?;
        }
    }
    Ok(())
}
