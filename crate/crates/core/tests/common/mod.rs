#![allow(dead_code)]

use aqt_core::model::{NodeLabel, NodeSpec, SystemParams};
use aqt_core::C64;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `exp(−iHt)` by Taylor series with scaling and squaring. Shares no code
/// with the eigendecomposition propagator.
pub fn expm_minus_i(h: &DMatrix<C64>, t: f64) -> DMatrix<C64> {
    let n = h.nrows();
    let a = h * C64::new(0.0, -t);
    let norm = a.iter().map(|z| z.norm()).fold(0.0, f64::max) * n as f64;
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let a = a / C64::new(2f64.powi(squarings as i32), 0.0);
    let mut term = DMatrix::<C64>::identity(n, n);
    let mut sum = term.clone();
    for k in 1..40 {
        term = &term * &a / C64::new(k as f64, 0.0);
        sum += &term;
        if term.iter().all(|z| z.norm() < 1e-18) {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

pub fn evolve(h: &DMatrix<C64>, psi: &DVector<C64>, t: f64) -> DVector<C64> {
    expm_minus_i(h, t) * psi
}

pub fn max_dev(a: &DVector<C64>, b: &DVector<C64>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Symmetric uniform draw: N in 1..=8, moderate detunings, both signs.
pub fn random_symmetric(rng: &mut ChaCha8Rng) -> SystemParams<f64> {
    let n = rng.random_range(1..=8);
    let sign = |rng: &mut ChaCha8Rng| if rng.random::<bool>() { 1.0 } else { -1.0 };
    let delta_node = sign(rng) * rng.random_range(2.0..6.0);
    let delta0 = sign(rng) * rng.random_range(2.0..6.0);
    SystemParams::symmetric(
        n,
        rng.random_range(0.2..1.0),
        rng.random_range(5.0..15.0),
        rng.random_range(5.0..15.0),
        delta_node,
        delta0,
        rng.random_range(0.2..1.2),
    )
}

/// Non-uniform complex couplings on both nodes, equal node sizes.
pub fn random_nonuniform(n: usize, seed: u64) -> SystemParams<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = SystemParams::symmetric(n, 1.0, 8.0, 8.4, 3.0, -4.0, 0.8);
    p.node1 = NodeSpec::random(NodeLabel::Me1, n, 0.6, &mut rng);
    p.node2 = NodeSpec::random(NodeLabel::Me2, n, 0.6, &mut rng);
    p
}
