//! Atom-resolved single-excitation model.
//!
//! The basis is the gate atom followed by every site of ME1 and then ME2,
//! `M = 1 + N₁ + N₂` states, each carrying the one excitation. Energies are
//! relative to the all-ground state. Nothing here assumes the collective
//! reduction, so the reduction can be checked against it.

use std::ops::Range;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::model::{hermitian_defect, validate_params, NodeLabel, SystemParams};
use crate::num::{cis, modulus, re};
use crate::{Complex, Error, Real, Result};

/// Largest `|H − H†|` entry accepted by the propagator.
pub const HERMITIAN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MicroLabel {
    Gate,
    Site { node: NodeLabel, index: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MicroBasis {
    pub labels: Vec<MicroLabel>,
    n1: usize,
}

impl MicroBasis {
    pub fn new(n1: usize, n2: usize) -> Self {
        let mut labels = Vec::with_capacity(1 + n1 + n2);
        labels.push(MicroLabel::Gate);
        labels.extend((0..n1).map(|index| MicroLabel::Site {
            node: NodeLabel::Me1,
            index,
        }));
        labels.extend((0..n2).map(|index| MicroLabel::Site {
            node: NodeLabel::Me2,
            index,
        }));
        Self { labels, n1 }
    }

    pub fn from_params<T: Real>(params: &SystemParams<T>) -> Self {
        Self::new(params.node1.len(), params.node2.len())
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// Index range of the sites of `node` (empty for ME3).
    pub fn node_range(&self, node: NodeLabel) -> Range<usize> {
        match node {
            NodeLabel::Me1 => 1..1 + self.n1,
            NodeLabel::Me2 => 1 + self.n1..self.dim(),
            NodeLabel::Me3 => 0..0,
        }
    }

    pub fn index_of(&self, label: MicroLabel) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }
}

/// Complex amplitudes over some orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T: Real> {
    pub amplitudes: DVector<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    pub fn new(amplitudes: DVector<Complex<T>>) -> Self {
        Self { amplitudes }
    }

    pub fn from_slice(amplitudes: &[Complex<T>]) -> Self {
        Self::new(DVector::from_column_slice(amplitudes))
    }

    pub fn basis_state(dim: usize, k: usize) -> Self {
        let mut v = DVector::from_element(dim, Complex::new(T::zero(), T::zero()));
        v[k] = re(T::one());
        Self::new(v)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.amplitudes.dotc(&other.amplitudes)
    }

    pub fn max_deviation(&self, other: &Self) -> T {
        (&self.amplitudes - &other.amplitudes)
            .iter()
            .fold(T::zero(), |acc, z| acc.max(modulus(*z)))
    }
}

/// Atom-resolved Hamiltonian: gate entry `ω̃₀`, site entries
/// `ω + |g_j|²/Δ_α`, intra-node hopping `g_j g*_{j'} e^{i(φ_j−φ_{j'})}/Δ_α`,
/// and gate-to-site elements `⟨j|H|gate⟩ = (g_j g̃*_α/2)(1/Δ_α + 1/Δ₀)e^{iφ_j}`.
pub fn build_microscopic<T: Real>(params: &SystemParams<T>) -> Result<DMatrix<Complex<T>>> {
    validate_params(params).check_valid()?;
    let basis = MicroBasis::from_params(params);
    let dim = basis.dim();
    let mut h = DMatrix::from_element(dim, dim, Complex::new(T::zero(), T::zero()));
    h[(0, 0)] = re(params.omega0_tilde());
    let half = T::lit(0.5);
    let nodes = [
        (NodeLabel::Me1, &params.node1, params.delta1, params.g_gate1),
        (NodeLabel::Me2, &params.node2, params.delta2, params.g_gate2),
    ];
    for (label, node, delta, g_gate) in nodes {
        let range = basis.node_range(label);
        let w: Vec<Complex<T>> = node.sites.iter().map(|s| s.weight()).collect();
        let rate = half * (T::one() / delta + T::one() / params.delta0);
        for (j, wj) in range.clone().zip(&w) {
            for (k, wk) in range.clone().zip(&w) {
                h[(j, k)] = *wj * wk.conj() / delta;
            }
            h[(j, j)] += re(params.omega);
            let v = *wj * g_gate.conj() * rate;
            h[(j, 0)] = v;
            h[(0, j)] = v.conj();
        }
    }
    Ok(h)
}

/// Unit vectors of the collective ME1 and ME2 modes in the atom basis.
pub fn collective_embedding<T: Real>(params: &SystemParams<T>) -> (StateVector<T>, StateVector<T>) {
    let basis = MicroBasis::from_params(params);
    let zero = DVector::from_element(basis.dim(), Complex::new(T::zero(), T::zero()));
    let mut w1 = zero.clone();
    let mut w2 = zero;
    for (k, w) in basis.node_range(NodeLabel::Me1).zip(params.node1.weights()) {
        w1[k] = w;
    }
    for (k, w) in basis.node_range(NodeLabel::Me2).zip(params.node2.weights()) {
        w2[k] = w;
    }
    (StateVector::new(w1), StateVector::new(w2))
}

/// `c₀|gate⟩ + c₁|w₁⟩ + c₂|w₂⟩` in the atom basis.
pub fn embed_collective<T: Real>(params: &SystemParams<T>, c: [Complex<T>; 3]) -> StateVector<T> {
    let (w1, w2) = collective_embedding(params);
    let mut v = &w1.amplitudes * c[1] + &w2.amplitudes * c[2];
    v[0] += c[0];
    StateVector::new(v)
}

/// Cached eigendecomposition `H = V diag(λ) V†` for repeated propagation.
#[derive(Debug, Clone)]
pub struct Propagator<T: Real> {
    eigenvalues: DVector<T>,
    eigenvectors: DMatrix<Complex<T>>,
}

impl<T: Real> Propagator<T> {
    pub fn new(h: &DMatrix<Complex<T>>) -> Result<Self> {
        if h.nrows() != h.ncols() {
            return Err(Error::DimensionMismatch {
                expected: h.nrows(),
                got: h.ncols(),
            });
        }
        let defect = hermitian_defect(h);
        if defect > T::lit(HERMITIAN_TOL) {
            return Err(Error::NotHermitian(defect.as_f64()));
        }
        // Symmetrise so the lower triangle read by the solver is exact.
        let sym = (h + h.adjoint()) * re(T::lit(0.5));
        let eig = SymmetricEigen::try_new(sym, T::eps(), 100_000).ok_or(Error::Eigen)?;
        Ok(Self {
            eigenvalues: eig.eigenvalues,
            eigenvectors: eig.eigenvectors,
        })
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &DVector<T> {
        &self.eigenvalues
    }

    /// `exp(−iHt)·psi`.
    pub fn evolve(&self, psi: &StateVector<T>, t: T) -> Result<StateVector<T>> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: psi.dim(),
            });
        }
        if t == T::zero() {
            return Ok(psi.clone());
        }
        let mut coeffs = self.eigenvectors.ad_mul(&psi.amplitudes);
        for (c, &lambda) in coeffs.iter_mut().zip(self.eigenvalues.iter()) {
            *c *= cis(-lambda * t);
        }
        Ok(StateVector::new(&self.eigenvectors * coeffs))
    }

    /// `exp(−iHt)` as a dense matrix.
    pub fn unitary(&self, t: T) -> DMatrix<Complex<T>> {
        let phases =
            DVector::from_iterator(self.dim(), self.eigenvalues.iter().map(|&l| cis(-l * t)));
        let scaled = DMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            self.eigenvectors[(i, j)] * phases[j]
        });
        scaled * self.eigenvectors.adjoint()
    }
}

/// `exp(−iHt)·psi0` by Hermitian eigendecomposition.
pub fn propagate<T: Real>(
    h: &DMatrix<Complex<T>>,
    psi0: &StateVector<T>,
    t: T,
) -> Result<StateVector<T>> {
    if psi0.dim() != h.nrows() {
        return Err(Error::DimensionMismatch {
            expected: h.nrows(),
            got: psi0.dim(),
        });
    }
    Propagator::new(h)?.evolve(psi0, t)
}

/// `⟨ψ|H|ψ⟩`.
pub fn energy<T: Real>(h: &DMatrix<Complex<T>>, psi: &StateVector<T>) -> T {
    psi.amplitudes.dotc(&(h * &psi.amplitudes)).re
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection<T> {
    pub c0: Complex<T>,
    pub c1: Complex<T>,
    pub c2: Complex<T>,
    /// `1 − (|c₀|² + |c₁|² + |c₂|²)`.
    pub leakage: T,
}

impl<T: Real> Projection<T> {
    pub fn amplitudes(&self) -> crate::analytic::AmplitudeTriple<T> {
        crate::analytic::AmplitudeTriple {
            c0: self.c0,
            c1: self.c1,
            c2: self.c2,
        }
    }
}

/// Gate amplitude and overlaps with the two collective modes.
pub fn project_and_leakage<T: Real>(
    psi: &StateVector<T>,
    params: &SystemParams<T>,
) -> Result<Projection<T>> {
    let (w1, w2) = collective_embedding(params);
    if psi.dim() != w1.dim() {
        return Err(Error::DimensionMismatch {
            expected: w1.dim(),
            got: psi.dim(),
        });
    }
    let c0 = psi.amplitudes[0];
    let c1 = w1.inner(psi);
    let c2 = w2.inner(psi);
    let leakage = psi.norm_sqr() - c0.norm_sqr() - c1.norm_sqr() - c2.norm_sqr();
    Ok(Projection {
        c0,
        c1,
        c2,
        leakage,
    })
}
