//! Physical parameters and the effective single-excitation Hamiltonian.
//!
//! Two ensembles ME1 and ME2 couple dispersively to their own cavity mode,
//! and both modes couple to a single gate atom. With the photons eliminated,
//! the single-excitation dynamics closes on three collective states:
//!
//! * `|Ψ₀⟩ = |1⟩₀|00⟩` (gate excited),
//! * `|Ψ₁⟩ = |0⟩₀|10⟩` (collective ME1 excitation),
//! * `|Ψ₂⟩ = |0⟩₀|01⟩` (collective ME2 excitation).
//!
//! Energies are measured from the all-ground state, whose energy `E₀` is
//! carried separately as a global phase.

use std::fmt;

use nalgebra::{Matrix, Matrix3, RawStorage};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::num::{cis, modulus, re};
use crate::{Complex, Error, Real, Result};

/// Relative tolerance for the symmetry checks gating the analytic path.
pub const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeLabel {
    Me1,
    Me2,
    Me3,
}

impl fmt::Display for NodeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NodeLabel::Me1 => "ME1",
            NodeLabel::Me2 => "ME2",
            NodeLabel::Me3 => "ME3",
        })
    }
}

/// One atom of an ensemble: its cavity coupling `g_j` and propagation phase
/// `k·r_j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomSite<T> {
    pub coupling: Complex<T>,
    pub phase: T,
}

impl<T: Real> AtomSite<T> {
    pub fn new(coupling: Complex<T>, phase: T) -> Self {
        Self { coupling, phase }
    }

    /// Unnormalised collective-mode weight `g_j e^{i k·r_j}`.
    pub fn weight(&self) -> Complex<T> {
        self.coupling * cis(self.phase)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeSpec<T> {
    pub label: NodeLabel,
    pub sites: Vec<AtomSite<T>>,
}

impl<T: Real> NodeSpec<T> {
    pub fn new(label: NodeLabel, sites: Vec<AtomSite<T>>) -> Self {
        Self { label, sites }
    }

    /// `n` atoms with real coupling `magnitude` and zero phase.
    pub fn uniform(label: NodeLabel, n: usize, magnitude: T) -> Self {
        let site = AtomSite::new(re(magnitude), T::zero());
        Self::new(label, vec![site; n])
    }

    /// `n` atoms with complex Gaussian couplings of RMS magnitude `rms` and
    /// uniformly distributed propagation phases.
    pub fn random<R: Rng + ?Sized>(label: NodeLabel, n: usize, rms: T, rng: &mut R) -> Self {
        let scale = rms.as_f64() / std::f64::consts::SQRT_2;
        let sites = (0..n)
            .map(|_| {
                // Rayleigh magnitudes can come arbitrarily close to zero.
                let g = loop {
                    let x: f64 = rng.sample(StandardNormal);
                    let y: f64 = rng.sample(StandardNormal);
                    if x.hypot(y) > 1e-3 {
                        break Complex::new(T::lit(x * scale), T::lit(y * scale));
                    }
                };
                let phase = T::lit(rng.random::<f64>() * std::f64::consts::TAU);
                AtomSite::new(g, phase)
            })
            .collect();
        Self::new(label, sites)
    }

    /// Rescales all couplings so that `A = Σ|g_j|²` equals `total`.
    pub fn normalized_to(mut self, total: T) -> Self {
        let a = self.total_coupling();
        if a > T::zero() {
            let k = (total / a).sqrt();
            for s in &mut self.sites {
                s.coupling *= k;
            }
        }
        self
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    /// `A = Σ_j |g_j|²`.
    pub fn total_coupling(&self) -> T {
        self.sites
            .iter()
            .fold(T::zero(), |acc, s| acc + s.coupling.norm_sqr())
    }

    /// `⟨|g|²⟩ = A/N`.
    pub fn mean_square_coupling(&self) -> T {
        self.total_coupling() / T::from_count(self.len())
    }

    /// Normalised collective-mode amplitudes `g_j e^{i k·r_j} / √A`.
    pub fn weights(&self) -> Vec<Complex<T>> {
        let norm = self.total_coupling().sqrt();
        self.sites.iter().map(|s| s.weight() / norm).collect()
    }
}

/// Frequencies, detunings and couplings of the two-cavity scheme.
///
/// `delta1`, `delta2` are the node–cavity offsets `ω_α − ω_e`, `delta0` the
/// gate–cavity offset `ω₀ − ω_e`; `g_gate1`, `g_gate2` couple the gate atom
/// to the two cavity modes.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams<T> {
    pub node1: NodeSpec<T>,
    pub node2: NodeSpec<T>,
    pub omega: T,
    pub omega0: T,
    pub delta1: T,
    pub delta2: T,
    pub delta0: T,
    pub g_gate1: Complex<T>,
    pub g_gate2: Complex<T>,
}

impl<T: Real> SystemParams<T> {
    /// Symmetric configuration with `n` uniformly coupled atoms per node.
    pub fn symmetric(
        n: usize,
        g: T,
        omega: T,
        omega0: T,
        delta_node: T,
        delta0: T,
        g_gate: T,
    ) -> Self {
        Self {
            node1: NodeSpec::uniform(NodeLabel::Me1, n, g),
            node2: NodeSpec::uniform(NodeLabel::Me2, n, g),
            omega,
            omega0,
            delta1: delta_node,
            delta2: delta_node,
            delta0,
            g_gate1: re(g_gate),
            g_gate2: re(g_gate),
        }
    }

    fn node_and_detuning(&self, label: NodeLabel) -> (&NodeSpec<T>, T, Complex<T>) {
        match label {
            NodeLabel::Me2 => (&self.node2, self.delta2, self.g_gate2),
            _ => (&self.node1, self.delta1, self.g_gate1),
        }
    }

    /// Renormalised gate frequency `ω̃₀ = ω₀ + (|g̃₁|² + |g̃₂|²)/Δ₀`.
    pub fn omega0_tilde(&self) -> T {
        self.omega0 + (self.g_gate1.norm_sqr() + self.g_gate2.norm_sqr()) / self.delta0
    }

    /// Collective-mode frequency `ω + A_α/Δ_α` of node 1 or 2.
    pub fn node_frequency(&self, label: NodeLabel) -> T {
        let (node, delta, _) = self.node_and_detuning(label);
        self.omega + node.total_coupling() / delta
    }

    /// `⟨Ψ₀|V|Ψ_α⟩ = (g̃_α/2)(1/Δ_α + 1/Δ₀)√A_α`.
    pub fn gate_node_coupling(&self, label: NodeLabel) -> Complex<T> {
        let (node, delta, g) = self.node_and_detuning(label);
        let half = T::lit(0.5);
        g * (half * (T::one() / delta + T::one() / self.delta0) * node.total_coupling().sqrt())
    }

    /// `ω̃₀ − ω̃₁`.
    pub fn collective_detuning(&self) -> T {
        self.omega0_tilde() - self.node_frequency(NodeLabel::Me1)
    }

    /// Retunes the bare gate frequency so that `ω̃₀ − ω̃₁ = detuning`.
    pub fn with_detuning(mut self, detuning: T) -> Self {
        let shift = (self.g_gate1.norm_sqr() + self.g_gate2.norm_sqr()) / self.delta0;
        self.omega0 = self.node_frequency(NodeLabel::Me1) + detuning - shift;
        self
    }

    /// Energy of the all-ground state, `−ω̃₀/2 − (N₁+N₂)ω/2`.
    pub fn vacuum_energy(&self) -> T {
        let half = T::lit(0.5);
        -half * self.omega0_tilde()
            - half * T::from_count(self.node1.len() + self.node2.len()) * self.omega
    }
}

/// A hard parameter error.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    EmptyNode(NodeLabel),
    ZeroCoupling { node: NodeLabel, site: usize },
    NonFinite(&'static str),
    ZeroNodeDetuning(NodeLabel),
    ZeroGateDetuning,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyNode(n) => write!(f, "empty node {n}"),
            Violation::ZeroCoupling { node, site } => {
                write!(f, "zero coupling at {node} site {site}")
            }
            Violation::NonFinite(field) => write!(f, "non-finite value in {field}"),
            Violation::ZeroNodeDetuning(n) => write!(f, "zero node detuning for {n}"),
            Violation::ZeroGateDetuning => f.write_str("zero gate detuning"),
        }
    }
}

/// A legal asymmetry that rules out the closed-form solution.
#[derive(Debug, Clone, PartialEq)]
pub enum Asymmetry {
    NodeSizes { n1: usize, n2: usize },
    NodeDetunings,
    GateCouplings,
    CollectiveCouplings,
}

impl fmt::Display for Asymmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("analytic path unavailable: ")?;
        match self {
            Asymmetry::NodeSizes { n1, n2 } => write!(f, "N1={n1} differs from N2={n2}"),
            Asymmetry::NodeDetunings => f.write_str("node detunings differ"),
            Asymmetry::GateCouplings => f.write_str("gate couplings differ"),
            Asymmetry::CollectiveCouplings => f.write_str("collective couplings A1 and A2 differ"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub asymmetries: Vec<Asymmetry>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn analytic_eligible(&self) -> bool {
        self.is_ok() && self.asymmetries.is_empty()
    }

    /// Errors on hard violations only.
    pub fn check_valid(&self) -> Result<()> {
        if self.is_ok() {
            Ok(())
        } else {
            Err(Error::InvalidParams(self.violations.clone()))
        }
    }

    /// Errors on hard violations or any asymmetry.
    pub fn check_analytic(&self) -> Result<()> {
        self.check_valid()?;
        if self.asymmetries.is_empty() {
            Ok(())
        } else {
            Err(Error::NotAnalytic(
                self.asymmetries.iter().map(|a| a.to_string()).collect(),
            ))
        }
    }
}

fn close<T: Real>(a: T, b: T) -> bool {
    let scale = a.abs().max(b.abs()).max(T::lit(f64::MIN_POSITIVE));
    (a - b).abs() <= T::lit(SYMMETRY_TOL) * scale
}

pub fn validate_params<T: Real>(params: &SystemParams<T>) -> ValidationReport {
    let mut report = ValidationReport::default();
    let v = &mut report.violations;

    for node in [&params.node1, &params.node2] {
        if node.is_empty() {
            v.push(Violation::EmptyNode(node.label));
        }
        for (j, s) in node.sites.iter().enumerate() {
            if !(s.coupling.re.is_finite() && s.coupling.im.is_finite() && s.phase.is_finite()) {
                v.push(Violation::NonFinite("site"));
            } else if modulus(s.coupling) == T::zero() {
                v.push(Violation::ZeroCoupling {
                    node: node.label,
                    site: j,
                });
            }
        }
    }
    let scalars = [
        ("omega", params.omega),
        ("omega0", params.omega0),
        ("delta1", params.delta1),
        ("delta2", params.delta2),
        ("delta0", params.delta0),
        ("g_gate1", params.g_gate1.re + params.g_gate1.im),
        ("g_gate2", params.g_gate2.re + params.g_gate2.im),
    ];
    for (name, x) in scalars {
        if !x.is_finite() {
            v.push(Violation::NonFinite(name));
        }
    }
    if params.delta1 == T::zero() {
        v.push(Violation::ZeroNodeDetuning(NodeLabel::Me1));
    }
    if params.delta2 == T::zero() {
        v.push(Violation::ZeroNodeDetuning(NodeLabel::Me2));
    }
    if params.delta0 == T::zero() {
        v.push(Violation::ZeroGateDetuning);
    }

    let a = &mut report.asymmetries;
    let (n1, n2) = (params.node1.len(), params.node2.len());
    if n1 != n2 {
        a.push(Asymmetry::NodeSizes { n1, n2 });
    }
    if !close(params.delta1, params.delta2) {
        a.push(Asymmetry::NodeDetunings);
    }
    if !close(params.g_gate1.re, params.g_gate2.re) || !close(params.g_gate1.im, params.g_gate2.im)
    {
        a.push(Asymmetry::GateCouplings);
    }
    if !close(params.node1.total_coupling(), params.node2.total_coupling()) {
        a.push(Asymmetry::CollectiveCouplings);
    }
    report
}

/// 3×3 Hamiltonian over (|Ψ₀⟩, |Ψ₁⟩, |Ψ₂⟩) for any valid parameters,
/// symmetric or not. `E₀` is not included.
pub fn collective_hamiltonian<T: Real>(params: &SystemParams<T>) -> Result<Matrix3<Complex<T>>> {
    validate_params(params).check_valid()?;
    let h1 = params.gate_node_coupling(NodeLabel::Me1);
    let h2 = params.gate_node_coupling(NodeLabel::Me2);
    let z = Complex::new(T::zero(), T::zero());
    Ok(Matrix3::new(
        re(params.omega0_tilde()),
        h1,
        h2,
        h1.conj(),
        re(params.node_frequency(NodeLabel::Me1)),
        z,
        h2.conj(),
        z,
        re(params.node_frequency(NodeLabel::Me2)),
    ))
}

/// Derived rates and the collective Hamiltonian of a symmetric system.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveModel<T> {
    /// Atoms per node.
    pub n: usize,
    /// Bare node transition frequency ω.
    pub omega: T,
    /// Per-atom gate–node rate Ω_{αc}; carries the sign of `1/Δ_α + 1/Δ₀`.
    pub omega_ac: T,
    /// Ω_α = (1/N) Σ |g_j|²/Δ_α.
    pub omega_alpha: T,
    /// ω̃ = ω + NΩ_α.
    pub omega_tilde: T,
    /// ω̃₀.
    pub omega0_tilde: T,
    /// Δ = ω̃₀ − ω̃.
    pub detuning: T,
    /// S = √(8NΩ_{αc}² + Δ²).
    pub s: T,
    /// S₀ = 2√(2N)|Ω_{αc}|.
    pub s0: T,
    /// Vacuum energy −ω̃₀/2 − Nω.
    pub e0: T,
    /// Matrix element ⟨Ψ₀|H|Ψ₁⟩ = ⟨Ψ₀|H|Ψ₂⟩.
    pub coupling: Complex<T>,
    pub hamiltonian: Matrix3<Complex<T>>,
}

impl<T: Real> EffectiveModel<T> {
    /// Builds a model directly from collective rates, with a real positive
    /// gate–node matrix element `√N·Ω_{αc}` (for `omega_ac > 0`).
    pub fn from_rates(n: usize, omega_ac: T, omega: T, omega_alpha: T, detuning: T) -> Self {
        let coupling = re(T::from_count(n).sqrt() * omega_ac);
        let omega_tilde = omega + T::from_count(n) * omega_alpha;
        Self::assemble(
            n,
            omega,
            omega_ac,
            omega_alpha,
            omega_tilde,
            omega_tilde + detuning,
            coupling,
        )
    }

    fn assemble(
        n: usize,
        omega: T,
        omega_ac: T,
        omega_alpha: T,
        omega_tilde: T,
        omega0_tilde: T,
        coupling: Complex<T>,
    ) -> Self {
        let nf = T::from_count(n);
        let detuning = omega0_tilde - omega_tilde;
        let s = (T::lit(8.0) * nf * omega_ac * omega_ac + detuning * detuning).sqrt();
        let s0 = T::lit(2.0) * (T::lit(2.0) * nf).sqrt() * omega_ac.abs();
        let e0 = -omega0_tilde / T::lit(2.0) - nf * omega;
        let z = Complex::new(T::zero(), T::zero());
        let hamiltonian = Matrix3::new(
            re(omega0_tilde),
            coupling,
            coupling,
            coupling.conj(),
            re(omega_tilde),
            z,
            coupling.conj(),
            z,
            re(omega_tilde),
        );
        Self {
            n,
            omega,
            omega_ac,
            omega_alpha,
            omega_tilde,
            omega0_tilde,
            detuning,
            s,
            s0,
            e0,
            coupling,
            hamiltonian,
        }
    }

    /// Same system with the gate retuned so that `ω̃₀ − ω̃ = detuning`.
    pub fn with_detuning(&self, detuning: T) -> Self {
        Self::assemble(
            self.n,
            self.omega,
            self.omega_ac,
            self.omega_alpha,
            self.omega_tilde,
            self.omega_tilde + detuning,
            self.coupling,
        )
    }
}

pub fn derive_effective<T: Real>(params: &SystemParams<T>) -> Result<EffectiveModel<T>> {
    validate_params(params).check_analytic()?;
    let n = params.node1.len();
    let nf = T::from_count(n);
    let rate = T::one() / params.delta1 + T::one() / params.delta0;
    let omega_ac =
        T::lit(0.5) * modulus(params.g_gate1) * params.node1.mean_square_coupling().sqrt() * rate;
    let omega_alpha = params.node1.total_coupling() / (nf * params.delta1);
    Ok(EffectiveModel::assemble(
        n,
        params.omega,
        omega_ac,
        omega_alpha,
        params.omega + nf * omega_alpha,
        params.omega0_tilde(),
        params.gate_node_coupling(NodeLabel::Me1),
    ))
}

pub fn effective_hamiltonian<T: Real>(model: &EffectiveModel<T>) -> Matrix3<Complex<T>> {
    model.hamiltonian
}

/// `max_{ij} |H_ij − conj(H_ji)|`.
pub fn hermitian_defect<T, R, C, S>(m: &Matrix<Complex<T>, R, C, S>) -> T
where
    T: Real,
    R: nalgebra::Dim,
    C: nalgebra::Dim,
    S: RawStorage<Complex<T>, R, C>,
{
    let (rows, cols) = m.shape();
    let mut worst = T::zero();
    for i in 0..rows.min(cols) {
        for j in 0..rows.min(cols) {
            worst = worst.max(modulus(m[(i, j)] - m[(j, i)].conj()));
        }
    }
    if rows != cols {
        T::max_value().unwrap_or_else(T::one)
    } else {
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sym(n: usize) -> SystemParams<f64> {
        SystemParams::symmetric(n, 1.0, 10.0, 10.5, 2.0, 3.0, 1.2)
    }

    #[test]
    fn zero_gate_detuning_is_reported() {
        let mut p = sym(4);
        p.delta0 = 0.0;
        let r = validate_params(&p);
        assert!(!r.is_ok());
        assert!(r
            .violations
            .iter()
            .any(|v| v.to_string() == "zero gate detuning"));
        assert!(matches!(derive_effective(&p), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn symmetric_params_are_analytic_eligible() {
        let r = validate_params(&sym(4));
        assert!(r.is_ok());
        assert!(r.analytic_eligible());
    }

    #[test]
    fn unequal_sizes_flag_analytic_path() {
        let mut p = sym(3);
        p.node2 = NodeSpec::uniform(NodeLabel::Me2, 5, 1.0);
        let r = validate_params(&p);
        assert!(r.is_ok());
        assert!(!r.analytic_eligible());
        assert!(r.asymmetries[0]
            .to_string()
            .starts_with("analytic path unavailable"));
        assert!(matches!(derive_effective(&p), Err(Error::NotAnalytic(_))));
        assert!(collective_hamiltonian(&p).is_ok());
    }

    #[test]
    fn empty_node_and_zero_coupling_are_violations() {
        let mut p = sym(2);
        p.node1.sites.clear();
        p.node2.sites[1].coupling = Complex::new(0.0, 0.0);
        let r = validate_params(&p);
        assert!(r.violations.contains(&Violation::EmptyNode(NodeLabel::Me1)));
        assert!(r.violations.contains(&Violation::ZeroCoupling {
            node: NodeLabel::Me2,
            site: 1
        }));
    }

    #[test]
    fn off_diagonal_magnitude_from_rates() {
        let m = EffectiveModel::<f64>::from_rates(4, 0.5, 10.0, 0.1, 0.0);
        assert!((m.hamiltonian[(0, 1)].norm() - 1.0).abs() < 1e-15);
        assert!((m.hamiltonian[(0, 2)].norm() - 1.0).abs() < 1e-15);
        assert_eq!(m.hamiltonian[(1, 2)].norm(), 0.0);
    }

    #[test]
    fn zero_detuning_gives_s_equal_s0() {
        let m = EffectiveModel::<f64>::from_rates(4, 0.5, 10.0, 0.1, 0.0);
        assert!((m.s - m.s0).abs() < 1e-15);
        assert!((m.s0 - 2.0 * 8f64.sqrt() * 0.5).abs() < 1e-15);
    }

    #[test]
    fn sqrt_swap_detuning_doubles_into_s() {
        // Δ = S/2 in S² = 8NΩ² + Δ² gives Δ² = 8NΩ²/3.
        let (n, om) = (4usize, 0.5);
        let delta = 2.0 * (2.0 * n as f64 / 3.0).sqrt() * om;
        let brute = (8.0 * n as f64 * om * om / (1.0 - 0.25)).sqrt();
        let m = EffectiveModel::<f64>::from_rates(n, om, 10.0, 0.1, delta);
        assert!((m.s - 2.0 * delta).abs() < 1e-14);
        assert!((m.s - brute).abs() < 1e-14);
    }

    #[test]
    fn derived_rates_match_definitions() {
        let p = sym(4);
        let m = derive_effective(&p).unwrap();
        let om_ac = 0.5 * 1.2 * 1.0 * (1.0 / 2.0 + 1.0 / 3.0);
        assert!((m.omega_ac - om_ac).abs() < 1e-15);
        assert!((m.omega_alpha - 0.5).abs() < 1e-15);
        assert!((m.omega_tilde - 12.0).abs() < 1e-14);
        assert!((m.omega0_tilde - (10.5 + 2.0 * 1.44 / 3.0)).abs() < 1e-14);
        assert!((m.e0 - (-m.omega0_tilde / 2.0 - 40.0)).abs() < 1e-13);
        assert!((m.coupling.norm() - 2.0 * om_ac).abs() < 1e-15);
    }

    #[test]
    fn with_detuning_retunes_gate_only() {
        let p = sym(3);
        let p2 = p.clone().with_detuning(0.7);
        assert!((p2.collective_detuning() - 0.7).abs() < 1e-13);
        let m = derive_effective(&p).unwrap().with_detuning(0.7);
        let m2 = derive_effective(&p2).unwrap();
        assert!((m.s - m2.s).abs() < 1e-13);
        assert!((m.e0 - m2.e0).abs() < 1e-12);
    }

    #[test]
    fn zero_gate_coupling_is_diagonal() {
        let mut p = sym(2);
        p.g_gate1 = Complex::new(0.0, 0.0);
        p.g_gate2 = Complex::new(0.0, 0.0);
        let h = effective_hamiltonian(&derive_effective(&p).unwrap());
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_eq!(h[(i, j)].norm(), 0.0);
                }
            }
        }
    }

    #[test]
    fn eigenvalues_against_brute_force() {
        let m = EffectiveModel::<f64>::from_rates(3, 0.4, 5.0, 0.2, 0.3);
        let h = m.hamiltonian;
        // Characteristic polynomial roots checked by det(H − λ) ≈ 0.
        let half = (m.omega0_tilde + m.omega_tilde) / 2.0;
        for lam in [m.omega_tilde, half + m.s / 2.0, half - m.s / 2.0] {
            let shifted = h - Matrix3::identity() * Complex::new(lam, 0.0);
            assert!(shifted.determinant().norm() < 1e-12, "λ = {lam}");
        }
        let dark =
            nalgebra::Vector3::new(0.0, 1.0, -1.0).map(|x| Complex::new(x / 2f64.sqrt(), 0.0));
        let hv = h * dark;
        assert!((hv - dark * Complex::new(m.omega_tilde, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn random_nodes_are_reproducible_and_normalizable() {
        let a = NodeSpec::<f64>::random(NodeLabel::Me1, 6, 1.0, &mut ChaCha8Rng::seed_from_u64(7));
        let b = NodeSpec::<f64>::random(NodeLabel::Me1, 6, 1.0, &mut ChaCha8Rng::seed_from_u64(7));
        assert_eq!(a, b);
        let a = a.normalized_to(6.0);
        assert!((a.total_coupling() - 6.0).abs() < 1e-12);
        let w = a.weights();
        let n: f64 = w.iter().map(|z| z.norm_sqr()).sum();
        assert!((n - 1.0).abs() < 1e-14);
    }

    #[test]
    fn nonuniform_matrix_element_equivalence() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let node = NodeSpec::<f64>::random(NodeLabel::Me1, 5, 0.8, &mut rng);
        let mut p = sym(5);
        p.node1 = node.clone();
        p.node2 = NodeSpec {
            label: NodeLabel::Me2,
            ..node
        };
        let m = derive_effective(&p).unwrap();
        let direct = 0.5 * 1.2 * (0.5 + 1.0 / 3.0) * p.node1.total_coupling().sqrt();
        assert!(((5f64).sqrt() * m.omega_ac - direct).abs() < 1e-12);
    }

    #[test]
    fn f32_model_builds() {
        let p = SystemParams::<f32>::symmetric(4, 1.0, 10.0, 10.5, 2.0, 3.0, 1.2);
        let m = derive_effective(&p).unwrap();
        assert!(hermitian_defect(&m.hamiltonian) == 0.0);
        assert!((m.s * m.s - m.detuning * m.detuning - m.s0 * m.s0).abs() < 1e-4);
    }
}
