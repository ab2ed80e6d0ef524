//! Reference computations that share no numerical code with `aqt-core`:
//! a Taylor-series matrix exponential, the effective Hamiltonian rebuilt
//! from scalar rates, and gate-ground register states assembled by index.

use aqt_core::C64;
use nalgebra::{DMatrix, DVector};

/// `exp(−iHt)` by Taylor series with scaling and squaring.
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

/// Collective Hamiltonian `diag(ω̃+Δ, ω̃, ω̃)` with gate row `√N·Ω_{αc}`.
pub fn h_eff(n: usize, omega_ac: f64, omega_tilde: f64, detuning: f64) -> DMatrix<C64> {
    let h = C64::new((n as f64).sqrt() * omega_ac, 0.0);
    let z = C64::new(0.0, 0.0);
    let d = |x: f64| C64::new(x, 0.0);
    DMatrix::from_row_slice(
        3,
        3,
        &[
            d(omega_tilde + detuning),
            h,
            h,
            h.conj(),
            d(omega_tilde),
            z,
            h.conj(),
            z,
            d(omega_tilde),
        ],
    )
}

/// Amplitudes at `t` starting from the ME1 excitation `(0, 1, 0)`.
pub fn from_me1(h: &DMatrix<C64>, t: f64) -> DVector<C64> {
    let one = C64::new(1.0, 0.0);
    let z = C64::new(0.0, 0.0);
    expm_minus_i(h, t) * DVector::from_vec(vec![z, one, z])
}

/// `S = √(8NΩ² + Δ²)`.
pub fn rabi(n: usize, omega_ac: f64, detuning: f64) -> f64 {
    (8.0 * n as f64 * omega_ac * omega_ac + detuning * detuning).sqrt()
}

/// The detuning at which `Δ = S/2`.
pub fn half_rabi_detuning(n: usize, omega_ac: f64) -> f64 {
    (8.0 * n as f64 * omega_ac * omega_ac / 3.0).sqrt()
}

pub fn probabilities(c: &[C64]) -> [f64; 3] {
    [c[0].norm_sqr(), c[1].norm_sqr(), c[2].norm_sqr()]
}

pub fn cis(x: f64) -> C64 {
    C64::new(x.cos(), x.sin())
}

/// Register index with the gate atom in `|0⟩`.
pub fn ground_index(me1: usize, me2: usize, me3: usize) -> usize {
    me1 * 4 + me2 * 2 + me3
}

/// 24-dimensional register vector from `(index, amplitude)` pairs.
pub fn register(terms: &[(usize, C64)]) -> DVector<C64> {
    let mut v = DVector::from_element(24, C64::new(0.0, 0.0));
    for &(i, a) in terms {
        v[i] += a;
    }
    v
}

/// `|⟨reference|state⟩|²`.
pub fn overlap(state: &DVector<C64>, reference: &DVector<C64>) -> f64 {
    reference.dotc(state).norm_sqr()
}

/// Binary entropy in bits.
pub fn binary_entropy(p: f64) -> f64 {
    let term = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.log2() };
    term(p) + term(1.0 - p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn expm_of_diagonal_and_pauli() {
        let h = DMatrix::from_diagonal(&DVector::from_vec(vec![
            C64::new(2.0, 0.0),
            C64::new(-1.0, 0.0),
        ]));
        let u = expm_minus_i(&h, 0.7);
        assert!((u[(0, 0)] - cis(-1.4)).norm() < 1e-14);
        assert!((u[(1, 1)] - cis(0.7)).norm() < 1e-14);

        let x = DMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
            ],
        );
        let u = expm_minus_i(&x, 123.4);
        assert!((u[(0, 0)].re - 123.4f64.cos()).abs() < 1e-11);
        assert!((u[(0, 1)].im + 123.4f64.sin()).abs() < 1e-11);
    }

    #[test]
    fn resonant_swap_from_scalars() {
        let (n, om) = (3, 0.4);
        let t = 2.0 * PI / rabi(n, om, 0.0);
        let p = probabilities(from_me1(&h_eff(n, om, 5.0, 0.0), t).as_slice());
        assert!((p[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn half_rabi_detuning_is_half_of_s() {
        let d = half_rabi_detuning(5, 0.3);
        assert!((2.0 * d - rabi(5, 0.3, d)).abs() < 1e-14);
    }

    #[test]
    fn entropy_endpoints() {
        assert_eq!(binary_entropy(0.0), 0.0);
        assert!((binary_entropy(0.5) - 1.0).abs() < 1e-15);
    }
}
