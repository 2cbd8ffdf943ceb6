mod common;

use common::{max_rel_err, numeric_grad, random_tensor, rng};
use rand::Rng;
use wavesnet::autodiff::{NodeId, Tape};
use wavesnet::filters::{all_wavelets, get_wavelet};
use wavesnet::transform::{dwt, dwt_adjoint, idwt, idwt_adjoint, BoundaryMode, Subbands};
use wavesnet::Tensor;

const H: f64 = 1e-5;

fn subband_dot(a: &Subbands, b: &Subbands) -> f64 {
    a.bands().zip(b.bands()).map(|((_, x), (_, y))| x.dot(y).unwrap()).sum()
}

fn subband_norm(a: &Subbands) -> f64 {
    a.energy().sqrt()
}

fn random_like(s: &Subbands, r: &mut rand_chacha::ChaCha8Rng) -> Subbands {
    s.map_bands(|_, b| random_tensor(b.shape(), r))
}

#[test]
fn dwt_and_idwt_adjoint_identities() {
    let mut r = rng(21);
    for w in all_wavelets() {
        for mode in BoundaryMode::ALL {
            for dim in 1..=3 {
                let shape: Vec<usize> = match dim {
                    1 => vec![2, 2 * r.gen_range(2..=16)],
                    2 => vec![2, 2 * r.gen_range(2..=8), 2 * r.gen_range(2..=8) + 1],
                    _ => vec![1, 6, 8, 4],
                };
                let x = random_tensor(&shape, &mut r);
                let ax = dwt(&x, &w, dim, mode).unwrap();
                let y = random_like(&ax, &mut r);
                let lhs = subband_dot(&ax, &y);
                let rhs = x.dot(&dwt_adjoint(&y, &w).unwrap()).unwrap();
                let tol = 1e-10 * x.norm() * subband_norm(&y);
                assert!((lhs - rhs).abs() <= tol, "dwt {} {mode} {dim}D", w.name);

                let g = random_tensor(&shape, &mut r);
                let lhs = idwt(&y, &w).unwrap().dot(&g).unwrap();
                let rhs = subband_dot(&y, &idwt_adjoint(&g, &w, dim, mode).unwrap());
                let tol = 1e-10 * g.norm() * subband_norm(&y);
                assert!((lhs - rhs).abs() <= tol, "idwt {} {mode} {dim}D", w.name);
            }
        }
    }
}

#[test]
fn orthogonal_periodic_adjoint_is_inverse() {
    let mut r = rng(22);
    for name in ["haar", "db2", "db3", "db4", "db5", "db6"] {
        let w = get_wavelet(name).unwrap();
        let x = random_tensor(&[1, 12, 16], &mut r);
        let y = random_like(&dwt(&x, &w, 2, BoundaryMode::Periodic).unwrap(), &mut r);
        let e = dwt_adjoint(&y, &w).unwrap().max_abs_diff(&idwt(&y, &w).unwrap()).unwrap();
        assert!(e <= 1e-10, "{name}: {e:e}");
    }
}

/// Explicit matrix of the 1D transform, one basis vector at a time; its
/// transpose applied to `y` must match the adjoint.
#[test]
fn adjoint_matches_explicit_transpose() {
    let mut r = rng(23);
    let n = 10;
    for name in ["db3", "ch2.2"] {
        let w = get_wavelet(name).unwrap();
        for mode in BoundaryMode::ALL {
            let cols: Vec<Vec<f64>> = (0..n)
                .map(|j| {
                    let e = Tensor::from_fn(&[n], |i| f64::from(u8::from(i == j))).unwrap();
                    let s = dwt(&e, &w, 1, mode).unwrap();
                    s.bands().flat_map(|(_, b)| b.data().to_vec()).collect()
                })
                .collect();
            let template = dwt(&Tensor::zeros(&[n]).unwrap(), &w, 1, mode).unwrap();
            let y = random_like(&template, &mut r);
            let yv: Vec<f64> = y.bands().flat_map(|(_, b)| b.data().to_vec()).collect();
            let want: Vec<f64> = cols
                .iter()
                .map(|c| c.iter().zip(&yv).map(|(a, b)| a * b).sum())
                .collect();
            let got = dwt_adjoint(&y, &w).unwrap();
            for (a, b) in got.data().iter().zip(&want) {
                assert!((a - b).abs() <= 1e-12, "{name} {mode}");
            }
        }
    }
}

#[test]
fn conv2d_adjoint_identity() {
    let mut r = rng(24);
    for _ in 0..20 {
        let (cin, cout) = (r.gen_range(1..=4), r.gen_range(1..=4));
        let k = if r.gen_bool(0.5) { 3 } else { 1 };
        let x = random_tensor(&[cin, 7, 9], &mut r);
        let kern = random_tensor(&[cout, cin, k, k], &mut r);
        let y = random_tensor(&[cout, 7, 9], &mut r);
        let mut tape = Tape::new();
        let xn = tape.leaf(x.clone());
        let kn = tape.leaf(kern);
        let bn = tape.leaf(Tensor::zeros(&[cout]).unwrap());
        let yn = tape.leaf(y.clone());
        let out = tape.conv2d(xn, kn, bn).unwrap();
        let prod = tape.mul(out, yn).unwrap();
        let loss = tape.sum(prod).unwrap();
        tape.backward(loss).unwrap();
        let lhs = tape.value(out).dot(&y).unwrap();
        let rhs = x.dot(&tape.grad(xn)).unwrap();
        assert!((lhs - rhs).abs() <= 1e-10 * x.norm() * y.norm());
    }
}

#[test]
fn unpool_is_adjoint_of_pool_selection() {
    let mut r = rng(25);
    let x = random_tensor(&[3, 8, 6], &mut r);
    let mut tape = Tape::new();
    let xn = tape.leaf(x.clone());
    let p = tape.maxpool2(xn).unwrap();
    let y = random_tensor(tape.value(p).shape(), &mut r);
    let yn = tape.leaf(y.clone());
    let u = tape.maxunpool2(yn, p).unwrap();
    let g = random_tensor(&[3, 8, 6], &mut r);
    let gn = tape.leaf(g.clone());
    let prod = tape.mul(u, gn).unwrap();
    let loss = tape.sum(prod).unwrap();
    tape.backward(loss).unwrap();
    // <unpool(y), g> == <y, select(g)>
    let lhs = tape.value(u).dot(&g).unwrap();
    let rhs = y.dot(&tape.grad(yn)).unwrap();
    assert!((lhs - rhs).abs() <= 1e-12 * y.norm() * g.norm());
    // and maxunpool(maxpool(x)) keeps each max at its argmax, zero elsewhere
    let mut t2 = Tape::new();
    let xn = t2.leaf(x.clone());
    let p = t2.maxpool2(xn).unwrap();
    let u = t2.maxunpool2(p, p).unwrap();
    let kept = t2.value(u);
    for c in 0..3 {
        for by in 0..4 {
            for bx in 0..3 {
                let idx: Vec<usize> = (0..4).map(|q| c * 48 + (2 * by + q / 2) * 6 + 2 * bx + q % 2).collect();
                let best = idx.iter().copied().max_by(|&a, &b| x.data()[a].total_cmp(&x.data()[b])).unwrap();
                for i in idx {
                    let want = if i == best { x.data()[i] } else { 0.0 };
                    assert_eq!(kept.data()[i], want);
                }
            }
        }
    }
}

/// Builds `f(x)` on a fresh tape, returns the scalar and `d f / d x`.
fn value_and_grad(x: &Tensor, f: &dyn Fn(&mut Tape, NodeId) -> NodeId) -> (f64, Tensor) {
    let mut tape = Tape::new();
    let xn = tape.leaf(x.clone());
    let l = f(&mut tape, xn);
    tape.backward(l).unwrap();
    (tape.value(l).data()[0], tape.grad(xn))
}

fn fd_check(x: &Tensor, tol: f64, what: &str, f: &dyn Fn(&mut Tape, NodeId) -> NodeId) {
    let (_, analytic) = value_and_grad(x, f);
    let numeric = numeric_grad(x, H, |p| value_and_grad(p, f).0);
    let e = max_rel_err(&analytic, &numeric);
    assert!(e <= tol, "{what}: max relative error {e:e}");
}

fn half_sq(t: &mut Tape, n: NodeId) -> NodeId {
    let sq = t.mul(n, n).unwrap();
    let s = t.sum(sq).unwrap();
    t.scale(s, 0.5).unwrap()
}

#[test]
fn dwt_node_gradient() {
    let mut r = rng(26);
    for name in ["haar", "db3", "ch3.3"] {
        let w = get_wavelet(name).unwrap();
        for mode in BoundaryMode::ALL {
            let x = random_tensor(&[1, 8, 8], &mut r);
            fd_check(&x, 1e-5, &format!("dwt {name} {mode}"), &|t, x| {
                let s = t.dwt(x, &w, 2, mode).unwrap();
                let mut acc = half_sq(t, s.low);
                for &(_, h) in &s.highs {
                    let e = half_sq(t, h);
                    acc = t.add(acc, e).unwrap();
                }
                acc
            });
        }
    }
}

#[test]
fn idwt_node_gradient() {
    let mut r = rng(27);
    for name in ["db2", "ch2.2"] {
        let w = get_wavelet(name).unwrap();
        let target = random_tensor(&[2, 8, 6], &mut r);
        let x = random_tensor(&[2, 8, 6], &mut r);
        // Differentiate through a low band that is itself a function of x.
        fd_check(&x, 1e-5, &format!("idwt {name}"), &|t, x| {
            let s = t.dwt(x, &w, 2, BoundaryMode::Zero).unwrap();
            let sq = t.mul(s.low, s.low).unwrap();
            let s2 = wavesnet::autodiff::SubbandNodes { low: sq, ..s };
            let y = t.idwt(&s2).unwrap();
            let c = t.leaf(target.clone());
            let p = t.mul(y, c).unwrap();
            t.sum(p).unwrap()
        });
    }
}

#[test]
fn conv_gradients() {
    let mut r = rng(28);
    let x = random_tensor(&[4, 8, 8], &mut r);
    let k = random_tensor(&[3, 4, 3, 3], &mut r);
    let b = random_tensor(&[3], &mut r);
    let conv_loss = |x: &Tensor, k: &Tensor, b: &Tensor| -> (f64, [Tensor; 3]) {
        let mut t = Tape::new();
        let (xn, kn, bn) = (t.leaf(x.clone()), t.leaf(k.clone()), t.leaf(b.clone()));
        let y = t.conv2d(xn, kn, bn).unwrap();
        let l = half_sq(&mut t, y);
        t.backward(l).unwrap();
        (t.value(l).data()[0], [t.grad(xn), t.grad(kn), t.grad(bn)])
    };
    let (_, [gx, gk, gb]) = conv_loss(&x, &k, &b);
    let nx = numeric_grad(&x, H, |p| conv_loss(p, &k, &b).0);
    let nk = numeric_grad(&k, H, |p| conv_loss(&x, p, &b).0);
    let nb = numeric_grad(&b, H, |p| conv_loss(&x, &k, p).0);
    assert!(max_rel_err(&gx, &nx) <= 1e-5);
    assert!(max_rel_err(&gk, &nk) <= 1e-5);
    assert!(max_rel_err(&gb, &nb) <= 1e-5);
}

#[test]
fn loss_affine_relu_gradients() {
    let mut r = rng(29);
    let labels: Vec<u8> = (0..20).map(|i| [0, 1, 2, 255][i % 4]).collect();
    let logits = random_tensor(&[3, 4, 5], &mut r);
    fd_check(&logits, 1e-5, "softmax ce", &|t, x| t.softmax_ce(x, &labels).unwrap());

    let scale = random_tensor(&[3], &mut r);
    let shift = random_tensor(&[3], &mut r);
    let x = random_tensor(&[3, 4, 5], &mut r);
    fd_check(&x, 1e-5, "affine+relu", &|t, x| {
        let (s, b) = (t.leaf(scale.clone()), t.leaf(shift.clone()));
        let a = t.channel_affine(x, s, b).unwrap();
        let z = t.relu(a).unwrap();
        half_sq(t, z)
    });
    fd_check(&scale, 1e-5, "affine scale", &|t, s| {
        let (xn, b) = (t.leaf(x.clone()), t.leaf(shift.clone()));
        let a = t.channel_affine(xn, s, b).unwrap();
        half_sq(t, a)
    });
}

#[test]
fn pool_unpool_loss_chain_gradient() {
    let mut r = rng(30);
    // Distinct values in every window keep the argmax stable under +-h.
    let x = Tensor::from_fn(&[2, 6, 8], |i| ((i * 37) % 96) as f64 / 96.0 + r.gen_range(0.0..1e-3)).unwrap();
    let labels: Vec<u8> = (0..48).map(|i| (i % 2) as u8).collect();
    fd_check(&x, 1e-5, "pool/unpool/ce", &|t, x| {
        let p = t.maxpool2(x).unwrap();
        let u = t.maxunpool2(p, p).unwrap();
        t.softmax_ce(u, &labels).unwrap()
    });
}
