//! Shared helpers for unit tests: independent oracles and random inputs.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::network::SpinNetwork;
use crate::operator::Operator;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// All-to-all network with couplings in [-2, 2] and fields in [-3, 3].
pub fn random_network(n: usize, seed: u64) -> SpinNetwork {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            edges.push((i, j, rng.gen_range(-2.0..2.0)));
        }
    }
    let fields = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
    SpinNetwork::new(n, edges, fields).unwrap()
}

pub fn random_state(dim: usize, seed: u64) -> crate::state::PureState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps: Array1<C64> =
        (0..dim).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    crate::state::PureState::normalized(amps).unwrap()
}

/// exp(-i h t) by scaling-and-squaring of the Taylor series — an expm oracle
/// independent of the eigendecomposition route.
pub fn expm_series_oracle(h: &Operator, t: f64) -> Operator {
    let dim = h.dim();
    let a = h.matrix().mapv(|v| v * c(0.0, -t));
    let norm1 = a
        .columns()
        .into_iter()
        .map(|col| col.iter().map(|v| v.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = norm1.log2().ceil().max(0.0) as u32 + 1;
    let scaled = a.mapv(|v| v / 2f64.powi(squarings as i32));
    let mut result = Array2::<C64>::eye(dim);
    let mut term = Array2::<C64>::eye(dim);
    for k in 1..40 {
        term = term.dot(&scaled).mapv(|v| v / c(k as f64, 0.0));
        result = result + &term;
        if term.iter().map(|v| v.norm()).fold(0.0, f64::max) < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        result = result.dot(&result);
    }
    Operator::from_matrix(result).unwrap()
}

/// Spearman rank correlation.
pub fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    let rank = |vals: &[f64]| -> Vec<f64> {
        let mut idx: Vec<usize> = (0..vals.len()).collect();
        idx.sort_by(|&a, &b| vals[a].partial_cmp(&vals[b]).unwrap());
        let mut out = vec![0.0; vals.len()];
        for (r, &i) in idx.iter().enumerate() {
            out[i] = r as f64;
        }
        out
    };
    let rx = rank(xs);
    let ry = rank(ys);
    let n = xs.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let cov: f64 = rx.iter().zip(ry.iter()).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx) * (a - mx)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my) * (b - my)).sum();
    cov / (vx.sqrt() * vy.sqrt())
}
