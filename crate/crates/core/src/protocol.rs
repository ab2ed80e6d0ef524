//! Control-SWAP protocol on the four-subsystem register.
//!
//! The register is the three-level gate atom (`|0⟩`, `|1⟩`, `|b⟩`) times the
//! collective qubits of ME1, ME2 and ME3: 3·2·2·2 = 24 basis states, ordered
//! `((gate·2 + me1)·2 + me2)·2 + me3`. Pulses are ideal instantaneous
//! unitaries; the swap window is exact evolution under the collective
//! Hamiltonian lifted to the register. Every step conserves the excitation
//! number (gate `|1⟩` or `|b⟩` counts as one).
//!
//! The control sequence is
//!
//! ```text
//! transfer(gate↔ME3) → π(1↔b) → swap(t) → π(1↔b) → transfer(gate↔ME3) → frame
//! ```
//!
//! For a control qubit in `|0⟩` the gate stays in `|0⟩` and the ME1 state is
//! swapped into ME2; for `|1⟩` the gate is parked in `|b⟩` during the swap
//! window and the nodes only precess freely. The final frame step removes
//! that precession (and the blockade-level phase) with local phase rotations
//! whose angles follow from the model, so the output can be compared term by
//! term with the ideal controlled gate.

use std::fmt;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::analytic::{delta_phi, sqrt_swap_config, Regime};
use crate::microsim::{Propagator, StateVector};
use crate::model::{EffectiveModel, NodeLabel};
use crate::num::{cis, imag_unit, modulus, phase, re};
use crate::{Complex, Error, Real, Result};

pub const REGISTER_DIM: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateLevel {
    Ground,
    Excited,
    Blockade,
}

impl GateLevel {
    fn digit(self) -> usize {
        match self {
            GateLevel::Ground => 0,
            GateLevel::Excited => 1,
            GateLevel::Blockade => 2,
        }
    }

    fn from_digit(d: usize) -> Self {
        match d {
            0 => GateLevel::Ground,
            1 => GateLevel::Excited,
            _ => GateLevel::Blockade,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subsystem {
    Gate,
    Me1,
    Me2,
    Me3,
}

impl Subsystem {
    pub const ALL: [Subsystem; 4] = [
        Subsystem::Gate,
        Subsystem::Me1,
        Subsystem::Me2,
        Subsystem::Me3,
    ];

    pub fn dim(self) -> usize {
        match self {
            Subsystem::Gate => 3,
            _ => 2,
        }
    }
}

impl From<NodeLabel> for Subsystem {
    fn from(n: NodeLabel) -> Self {
        match n {
            NodeLabel::Me1 => Subsystem::Me1,
            NodeLabel::Me2 => Subsystem::Me2,
            NodeLabel::Me3 => Subsystem::Me3,
        }
    }
}

impl fmt::Display for Subsystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Subsystem::Gate => "gate",
            Subsystem::Me1 => "ME1",
            Subsystem::Me2 => "ME2",
            Subsystem::Me3 => "ME3",
        })
    }
}

/// One register basis state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisLabel {
    pub gate: GateLevel,
    pub me1: bool,
    pub me2: bool,
    pub me3: bool,
}

impl BasisLabel {
    pub fn new(gate: GateLevel, me1: bool, me2: bool, me3: bool) -> Self {
        Self {
            gate,
            me1,
            me2,
            me3,
        }
    }

    pub fn index(self) -> usize {
        ((self.gate.digit() * 2 + self.me1 as usize) * 2 + self.me2 as usize) * 2
            + self.me3 as usize
    }

    pub fn from_index(i: usize) -> Self {
        Self {
            gate: GateLevel::from_digit(i / 8),
            me1: (i / 4) % 2 == 1,
            me2: (i / 2) % 2 == 1,
            me3: i % 2 == 1,
        }
    }

    /// Local level of `sub` (gate: 0, 1, 2 for `|0⟩`, `|1⟩`, `|b⟩`).
    pub fn level(self, sub: Subsystem) -> usize {
        match sub {
            Subsystem::Gate => self.gate.digit(),
            Subsystem::Me1 => self.me1 as usize,
            Subsystem::Me2 => self.me2 as usize,
            Subsystem::Me3 => self.me3 as usize,
        }
    }

    pub fn excitations(self) -> usize {
        (self.gate != GateLevel::Ground) as usize
            + self.me1 as usize
            + self.me2 as usize
            + self.me3 as usize
    }

    fn node(self, node: NodeLabel) -> bool {
        match node {
            NodeLabel::Me1 => self.me1,
            NodeLabel::Me2 => self.me2,
            NodeLabel::Me3 => self.me3,
        }
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = match self.gate {
            GateLevel::Ground => '0',
            GateLevel::Excited => '1',
            GateLevel::Blockade => 'b',
        };
        write!(
            f,
            "|{g};{}{};{}⟩",
            self.me1 as u8, self.me2 as u8, self.me3 as u8
        )
    }
}

/// `α|0⟩ + β e^{iφ}|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState<T> {
    pub alpha: Complex<T>,
    pub beta: Complex<T>,
    pub phi: T,
}

impl<T: Real> QubitState<T> {
    pub fn new(alpha: Complex<T>, beta: Complex<T>, phi: T) -> Result<Self> {
        let n = alpha.norm_sqr() + beta.norm_sqr();
        let tol = T::lit(1e-12).max(T::eps() * T::lit(100.0));
        if (n - T::one()).abs() > tol {
            return Err(Error::NotNormalized(n.as_f64()));
        }
        Ok(Self { alpha, beta, phi })
    }

    pub fn ground() -> Self {
        Self {
            alpha: re(T::one()),
            beta: re(T::zero()),
            phi: T::zero(),
        }
    }

    pub fn excited() -> Self {
        Self {
            alpha: re(T::zero()),
            beta: re(T::one()),
            phi: T::zero(),
        }
    }

    /// Real `α = √(1−p)`, `β = √p` with phase `φ` on `|1⟩`.
    pub fn from_population(p_excited: T, phi: T) -> Self {
        Self {
            alpha: re((T::one() - p_excited).sqrt()),
            beta: re(p_excited.sqrt()),
            phi,
        }
    }

    /// Amplitude of `|1⟩`, `β e^{iφ}`.
    pub fn one(&self) -> Complex<T> {
        self.beta * cis(self.phi)
    }

    pub fn amplitudes(&self) -> [Complex<T>; 2] {
        [self.alpha, self.one()]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegisterState<T: Real> {
    pub amplitudes: DVector<Complex<T>>,
}

impl<T: Real> RegisterState<T> {
    pub fn zero() -> Self {
        Self {
            amplitudes: DVector::from_element(REGISTER_DIM, Complex::new(T::zero(), T::zero())),
        }
    }

    pub fn basis(label: BasisLabel) -> Self {
        let mut s = Self::zero();
        s.amplitudes[label.index()] = re(T::one());
        s
    }

    /// Normalised superposition of labelled basis states.
    pub fn from_terms(terms: &[(BasisLabel, Complex<T>)]) -> Self {
        let mut s = Self::zero();
        for &(l, a) in terms {
            s.amplitudes[l.index()] += a;
        }
        let n = s.norm_sqr().sqrt();
        s.amplitudes /= re(n);
        s
    }

    pub fn amp(&self, label: BasisLabel) -> Complex<T> {
        self.amplitudes[label.index()]
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

    pub fn populations(&self) -> Vec<T> {
        self.amplitudes.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Probability that `sub` is found at local level `level`.
    pub fn marginal(&self, sub: Subsystem, level: usize) -> T {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| BasisLabel::from_index(*i).level(sub) == level)
            .fold(T::zero(), |acc, (_, z)| acc + z.norm_sqr())
    }

    /// Nonzero terms above `threshold` in basis order.
    pub fn terms(&self, threshold: T) -> Vec<(BasisLabel, Complex<T>)> {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(_, z)| modulus(**z) > threshold)
            .map(|(i, &z)| (BasisLabel::from_index(i), z))
            .collect()
    }

    fn map_pairs(&self, f: impl Fn(BasisLabel) -> Option<(BasisLabel, Complex<T>)>) -> Self {
        let mut out = Self::zero();
        for (i, &a) in self.amplitudes.iter().enumerate() {
            let l = BasisLabel::from_index(i);
            match f(l) {
                Some((to, factor)) => out.amplitudes[to.index()] += a * factor,
                None => out.amplitudes[i] += a,
            }
        }
        out
    }

    fn to_vector(&self) -> StateVector<T> {
        StateVector::new(self.amplitudes.clone())
    }
}

pub fn init_register<T: Real>(psi1: &QubitState<T>, psi_c: &QubitState<T>) -> RegisterState<T> {
    let mut s = RegisterState::zero();
    let a = psi1.amplitudes();
    let c = psi_c.amplitudes();
    for (me1, &x) in a.iter().enumerate() {
        for (me3, &y) in c.iter().enumerate() {
            s.amplitudes[BasisLabel::new(GateLevel::Ground, me1 == 1, false, me3 == 1).index()] =
                x * y;
        }
    }
    s
}

/// Ideal gate↔ME3 exchange: `|0⟩₀|1⟩₃ → i|1⟩₀|0⟩₃` and `|1⟩₀|0⟩₃ → i|0⟩₀|1⟩₃`;
/// `|0⟩₀|0⟩₃`, `|1⟩₀|1⟩₃` and the whole `|b⟩` branch are left unchanged.
pub fn apply_transfer_gate_me3<T: Real>(state: &RegisterState<T>) -> RegisterState<T> {
    let i = imag_unit::<T>();
    state.map_pairs(|l| match (l.gate, l.me3) {
        (GateLevel::Ground, true) => Some((
            BasisLabel {
                gate: GateLevel::Excited,
                me3: false,
                ..l
            },
            i,
        )),
        (GateLevel::Excited, false) => Some((
            BasisLabel {
                gate: GateLevel::Ground,
                me3: true,
                ..l
            },
            i,
        )),
        _ => None,
    })
}

/// Laser π-pulse on the gate: `|1⟩ → i|b⟩`, `|b⟩ → i|1⟩`, `|0⟩` fixed.
pub fn apply_pi_pulse_1b<T: Real>(state: &RegisterState<T>) -> RegisterState<T> {
    let i = imag_unit::<T>();
    state.map_pairs(|l| match l.gate {
        GateLevel::Excited => Some((
            BasisLabel {
                gate: GateLevel::Blockade,
                ..l
            },
            i,
        )),
        GateLevel::Blockade => Some((
            BasisLabel {
                gate: GateLevel::Excited,
                ..l
            },
            i,
        )),
        GateLevel::Ground => None,
    })
}

/// Multiplies the `|1⟩` amplitude of `node` by `e^{i·angle}`.
pub fn apply_stark_phase<T: Real>(
    state: &RegisterState<T>,
    node: NodeLabel,
    angle: T,
) -> RegisterState<T> {
    let z = cis(angle);
    let mut out = state.clone();
    for (i, a) in out.amplitudes.iter_mut().enumerate() {
        if BasisLabel::from_index(i).node(node) {
            *a *= z;
        }
    }
    out
}

/// Register Hamiltonian of the swap window (vacuum energy excluded): gate
/// `|1⟩` at `ω̃₀`, gate `|b⟩` at `blockade_energy`, ME1/ME2 excitations at
/// `ω̃`, ME3 in its own frame, and gate `|0⟩↔|1⟩` exchange with each node.
pub fn register_hamiltonian<T: Real>(
    model: &EffectiveModel<T>,
    blockade_energy: T,
) -> DMatrix<Complex<T>> {
    let h = &model.hamiltonian;
    let mut m = DMatrix::from_element(
        REGISTER_DIM,
        REGISTER_DIM,
        Complex::new(T::zero(), T::zero()),
    );
    for i in 0..REGISTER_DIM {
        let l = BasisLabel::from_index(i);
        let mut e = T::zero();
        match l.gate {
            GateLevel::Excited => e += h[(0, 0)].re,
            GateLevel::Blockade => e += blockade_energy,
            GateLevel::Ground => {}
        }
        if l.me1 {
            e += h[(1, 1)].re;
        }
        if l.me2 {
            e += h[(2, 2)].re;
        }
        m[(i, i)] = re(e);
        if l.gate != GateLevel::Ground {
            continue;
        }
        // ⟨gate 1, node 0| H |gate 0, node 1⟩ = H_eff[0, α]
        if l.me1 {
            let j = BasisLabel {
                gate: GateLevel::Excited,
                me1: false,
                ..l
            }
            .index();
            m[(j, i)] = h[(0, 1)];
            m[(i, j)] = h[(0, 1)].conj();
        }
        if l.me2 {
            let j = BasisLabel {
                gate: GateLevel::Excited,
                me2: false,
                ..l
            }
            .index();
            m[(j, i)] = h[(0, 2)];
            m[(i, j)] = h[(0, 2)].conj();
        }
    }
    m
}

/// Local phase rotations `e^{iθ}` on the `|1⟩` level of each node.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FramePhases<T> {
    pub me1: T,
    pub me2: T,
    pub me3: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProtocolStep<T> {
    TransferGateMe3,
    PiPulse1b,
    /// Exchange window of length `duration` with the gate retuned to
    /// `ω̃₀ − ω̃ = detuning`.
    SwapEvolve {
        duration: T,
        detuning: T,
    },
    StarkPhase {
        node: NodeLabel,
        angle: T,
    },
    FrameCorrection(FramePhases<T>),
}

impl<T: Real> fmt::Display for ProtocolStep<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProtocolStep::TransferGateMe3 => f.write_str("transfer-gate-me3"),
            ProtocolStep::PiPulse1b => f.write_str("pi-pulse-1b"),
            ProtocolStep::SwapEvolve { duration, detuning } => {
                write!(
                    f,
                    "swap-evolve(duration={:e}, detuning={:e})",
                    duration, detuning
                )
            }
            ProtocolStep::StarkPhase { node, angle } => {
                write!(f, "stark-phase({node}, {:e})", angle)
            }
            ProtocolStep::FrameCorrection(p) => {
                write!(
                    f,
                    "frame-correction(ME1={:e}, ME2={:e}, ME3={:e})",
                    p.me1, p.me2, p.me3
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolTrace<T: Real> {
    pub initial: RegisterState<T>,
    pub steps: Vec<(ProtocolStep<T>, RegisterState<T>)>,
}

impl<T: Real> ProtocolTrace<T> {
    pub fn final_state(&self) -> &RegisterState<T> {
        self.steps.last().map(|(_, s)| s).unwrap_or(&self.initial)
    }
}

/// Executes protocol steps for one collective model.
#[derive(Debug, Clone)]
pub struct ProtocolEngine<T> {
    pub model: EffectiveModel<T>,
    /// Energy of the gate `|b⟩` level; `None` means `ω̃₀` of the swap model.
    pub blockade_energy: Option<T>,
}

impl<T: Real> ProtocolEngine<T> {
    pub fn new(model: EffectiveModel<T>) -> Self {
        Self {
            model,
            blockade_energy: None,
        }
    }

    pub fn with_blockade_energy(mut self, energy: T) -> Self {
        self.blockade_energy = Some(energy);
        self
    }

    fn blockade_energy_for(&self, swap_model: &EffectiveModel<T>) -> T {
        self.blockade_energy.unwrap_or(swap_model.omega0_tilde)
    }

    pub fn swap_evolve(
        &self,
        state: &RegisterState<T>,
        duration: T,
        detuning: T,
    ) -> Result<RegisterState<T>> {
        if duration < T::zero() {
            return Err(Error::NegativeDuration(duration.as_f64()));
        }
        let model = self.model.with_detuning(detuning);
        let h = register_hamiltonian(&model, self.blockade_energy_for(&model));
        let out = Propagator::new(&h)?.evolve(&state.to_vector(), duration)?;
        Ok(RegisterState {
            amplitudes: out.amplitudes * cis(-model.e0 * duration),
        })
    }

    pub fn apply(
        &self,
        step: &ProtocolStep<T>,
        state: &RegisterState<T>,
    ) -> Result<RegisterState<T>> {
        Ok(match *step {
            ProtocolStep::TransferGateMe3 => apply_transfer_gate_me3(state),
            ProtocolStep::PiPulse1b => apply_pi_pulse_1b(state),
            ProtocolStep::SwapEvolve { duration, detuning } => {
                self.swap_evolve(state, duration, detuning)?
            }
            ProtocolStep::StarkPhase { node, angle } => apply_stark_phase(state, node, angle),
            ProtocolStep::FrameCorrection(p) => {
                let s = apply_stark_phase(state, NodeLabel::Me1, p.me1);
                let s = apply_stark_phase(&s, NodeLabel::Me2, p.me2);
                apply_stark_phase(&s, NodeLabel::Me3, p.me3)
            }
        })
    }

    pub fn run(
        &self,
        initial: RegisterState<T>,
        steps: &[ProtocolStep<T>],
    ) -> Result<ProtocolTrace<T>> {
        let mut trace = ProtocolTrace {
            initial,
            steps: Vec::with_capacity(steps.len()),
        };
        for step in steps {
            let next = self.apply(step, trace.final_state())?;
            trace.steps.push((*step, next));
        }
        Ok(trace)
    }

    /// Phases removing the free precession accumulated in a swap window of
    /// length `duration`: `ω̃·t` on the listed nodes, `ε_b·t` on ME3 for the
    /// blockade branch.
    pub fn frame_correction(
        &self,
        duration: T,
        detuning: T,
        nodes: &[NodeLabel],
    ) -> FramePhases<T> {
        let model = self.model.with_detuning(detuning);
        let free = model.omega_tilde * duration;
        FramePhases {
            me1: if nodes.contains(&NodeLabel::Me1) {
                free
            } else {
                T::zero()
            },
            me2: if nodes.contains(&NodeLabel::Me2) {
                free
            } else {
                T::zero()
            },
            me3: self.blockade_energy_for(&model) * duration,
        }
    }

    fn controlled(&self, duration: T, detuning: T, frame: &[NodeLabel]) -> Vec<ProtocolStep<T>> {
        vec![
            ProtocolStep::TransferGateMe3,
            ProtocolStep::PiPulse1b,
            ProtocolStep::SwapEvolve { duration, detuning },
            ProtocolStep::PiPulse1b,
            ProtocolStep::TransferGateMe3,
            ProtocolStep::FrameCorrection(self.frame_correction(duration, detuning, frame)),
        ]
    }

    /// Controlled full SWAP; the frame step rotates ME1 only, so ME2 keeps
    /// the swap phase `φ₁ − ω̃t + π`.
    pub fn control_swap_steps(&self, regime: Regime) -> Vec<ProtocolStep<T>> {
        self.controlled(
            regime.swap_time(&self.model),
            regime.detuning(&self.model),
            &[NodeLabel::Me1],
        )
    }

    /// Controlled √SWAP at `Δ = S/2`; both nodes are rotated into the frame
    /// co-moving at `ω̃`.
    pub fn control_sqrt_swap_steps(&self) -> Vec<ProtocolStep<T>> {
        let cfg = sqrt_swap_config(&self.model);
        self.controlled(
            cfg.duration,
            cfg.detuning,
            &[NodeLabel::Me1, NodeLabel::Me2],
        )
    }
}

/// Swap window with the default blockade energy `ε_b = ω̃₀`.
pub fn apply_swap_evolve<T: Real>(
    state: &RegisterState<T>,
    duration: T,
    model: &EffectiveModel<T>,
) -> Result<RegisterState<T>> {
    ProtocolEngine::new(model.clone()).swap_evolve(state, duration, model.detuning)
}

pub fn run_control_swap<T: Real>(
    psi1: &QubitState<T>,
    psi_c: &QubitState<T>,
    model: &EffectiveModel<T>,
    regime: Regime,
) -> Result<ProtocolTrace<T>> {
    let engine = ProtocolEngine::new(model.clone());
    engine.run(
        init_register(psi1, psi_c),
        &engine.control_swap_steps(regime),
    )
}

pub fn run_control_sqrt_swap<T: Real>(
    psi1: &QubitState<T>,
    psi_c: &QubitState<T>,
    model: &EffectiveModel<T>,
) -> Result<ProtocolTrace<T>> {
    let engine = ProtocolEngine::new(model.clone());
    engine.run(
        init_register(psi1, psi_c),
        &engine.control_sqrt_swap_steps(),
    )
}

/// Ideal controlled-SWAP output:
/// `α_c|0⟩₀|0⟩₁|ψ(φ₁ − ω̃t + π)⟩₂|0⟩₃ + β_c e^{iφ_c}|0⟩₀|ψ(φ₁)⟩₁|0⟩₂|1⟩₃`.
pub fn control_swap_reference<T: Real>(
    psi1: &QubitState<T>,
    psi_c: &QubitState<T>,
    model: &EffectiveModel<T>,
    regime: Regime,
) -> RegisterState<T> {
    let g = GateLevel::Ground;
    let swapped = cis(crate::analytic::swap_phase_law(psi1.phi, model, regime)) * psi1.beta;
    let [a1, b1] = psi1.amplitudes();
    let [ac, bc] = psi_c.amplitudes();
    let mut s = RegisterState::zero();
    s.amplitudes[BasisLabel::new(g, false, false, false).index()] = ac * a1;
    s.amplitudes[BasisLabel::new(g, false, true, false).index()] = ac * swapped;
    s.amplitudes[BasisLabel::new(g, false, false, true).index()] = bc * a1;
    s.amplitudes[BasisLabel::new(g, true, false, true).index()] = bc * b1;
    s
}

/// √SWAP phase `δφ` referred to the vacuum and to the frame co-moving at
/// `ω̃`: `δφ − (E₀ + ω̃)·t_{√swap} = (Δ/4)·t_{√swap} − π/2`.
pub fn sqrt_swap_frame_phase<T: Real>(model: &EffectiveModel<T>) -> T {
    let cfg = sqrt_swap_config(model);
    let tuned = model.with_detuning(cfg.detuning);
    delta_phi(&tuned) - (tuned.e0 + tuned.omega_tilde) * cfg.duration
}

/// Ideal controlled-√SWAP output:
/// `α_c|0⟩₀|Φ(ψ)⟩|0⟩₃ + β_c e^{iφ_c}|0⟩₀|ψ(φ₁)⟩₁|0⟩₂|1⟩₃` with
/// `|Φ(ψ)⟩ = α₁|00⟩ + β₁e^{i(φ₁−δφ)}(|10⟩ + i|01⟩)/√2` and `δφ` from
/// [`sqrt_swap_frame_phase`].
pub fn control_sqrt_swap_reference<T: Real>(
    psi1: &QubitState<T>,
    psi_c: &QubitState<T>,
    model: &EffectiveModel<T>,
) -> RegisterState<T> {
    let g = GateLevel::Ground;
    let split = psi1.beta * cis(psi1.phi - sqrt_swap_frame_phase(model)) * T::frac_1_sqrt_2();
    let [a1, b1] = psi1.amplitudes();
    let [ac, bc] = psi_c.amplitudes();
    let mut s = RegisterState::zero();
    s.amplitudes[BasisLabel::new(g, false, false, false).index()] = ac * a1;
    s.amplitudes[BasisLabel::new(g, true, false, false).index()] = ac * split;
    s.amplitudes[BasisLabel::new(g, false, true, false).index()] = ac * split * imag_unit();
    s.amplitudes[BasisLabel::new(g, false, false, true).index()] = bc * a1;
    s.amplitudes[BasisLabel::new(g, true, false, true).index()] = bc * b1;
    s
}

/// `(|0;10;0⟩ − |0;01;0⟩)/√2`.
pub fn sdma_state<T: Real>() -> RegisterState<T> {
    let g = GateLevel::Ground;
    RegisterState::from_terms(&[
        (BasisLabel::new(g, true, false, false), re(T::one())),
        (BasisLabel::new(g, false, true, false), re(-T::one())),
    ])
}

/// `(|0;10;0⟩ + i|0;01;0⟩)/√2`.
pub fn bright_state<T: Real>() -> RegisterState<T> {
    let g = GateLevel::Ground;
    RegisterState::from_terms(&[
        (BasisLabel::new(g, true, false, false), re(T::one())),
        (BasisLabel::new(g, false, true, false), imag_unit()),
    ])
}

/// Dark state prepared dynamically: ME1 excitation, √SWAP window at
/// `Δ = S/2`, then a π/2 Stark phase on ME2.
pub fn prepare_sdma<T: Real>(model: &EffectiveModel<T>) -> Result<RegisterState<T>> {
    let engine = ProtocolEngine::new(model.clone());
    let cfg = sqrt_swap_config(model);
    let start = init_register(&QubitState::excited(), &QubitState::ground());
    let steps = [
        ProtocolStep::SwapEvolve {
            duration: cfg.duration,
            detuning: cfg.detuning,
        },
        ProtocolStep::StarkPhase {
            node: NodeLabel::Me2,
            angle: T::frac_pi_2(),
        },
    ];
    Ok(engine.run(start, &steps)?.final_state().clone())
}

/// `|⟨reference|state⟩|²`; insensitive to global phase.
pub fn fidelity<T: Real>(state: &RegisterState<T>, reference: &RegisterState<T>) -> T {
    reference.inner(state).norm_sqr()
}

/// Overlap of one ME3 branch of `state` with the same branch of `reference`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchPhase<T> {
    pub me3_excited: bool,
    /// Reference weight of the branch.
    pub weight: T,
    /// `arg⟨ref_branch|state_branch⟩`.
    pub phase: T,
    /// `|⟨ref_branch|state_branch⟩|`.
    pub overlap: T,
}

pub fn branch_phases<T: Real>(
    state: &RegisterState<T>,
    reference: &RegisterState<T>,
) -> Vec<BranchPhase<T>> {
    [false, true]
        .into_iter()
        .map(|me3| {
            let mut ov = Complex::new(T::zero(), T::zero());
            let mut weight = T::zero();
            for i in 0..REGISTER_DIM {
                if BasisLabel::from_index(i).me3 == me3 {
                    ov += reference.amplitudes[i].conj() * state.amplitudes[i];
                    weight += reference.amplitudes[i].norm_sqr();
                }
            }
            BranchPhase {
                me3_excited: me3,
                weight,
                phase: phase(ov),
                overlap: modulus(ov),
            }
        })
        .collect()
}

/// Reduced density matrix of `partition`, in mixed-radix order of the listed
/// subsystems (sorted as gate, ME1, ME2, ME3).
pub fn reduced_density_matrix<T: Real>(
    state: &RegisterState<T>,
    partition: &[Subsystem],
) -> DMatrix<Complex<T>> {
    let mut keep: Vec<Subsystem> = partition.to_vec();
    keep.sort();
    keep.dedup();
    let rest: Vec<Subsystem> = Subsystem::ALL
        .into_iter()
        .filter(|s| !keep.contains(s))
        .collect();
    let index = |l: BasisLabel, subs: &[Subsystem]| {
        subs.iter().fold(0, |acc, &s| acc * s.dim() + l.level(s))
    };
    let dim_a: usize = keep.iter().map(|s| s.dim()).product();
    let dim_b: usize = rest.iter().map(|s| s.dim()).product();
    let mut m = DMatrix::from_element(dim_a, dim_b, Complex::new(T::zero(), T::zero()));
    for (i, &a) in state.amplitudes.iter().enumerate() {
        let l = BasisLabel::from_index(i);
        m[(index(l, &keep), index(l, &rest))] = a;
    }
    &m * m.adjoint()
}

/// Von Neumann entropy (bits) of the reduced state on `partition`.
/// Empty and full partitions give 0.
pub fn entanglement_entropy<T: Real>(state: &RegisterState<T>, partition: &[Subsystem]) -> T {
    let rho = reduced_density_matrix(state, partition);
    if rho.nrows() == 1 || rho.nrows() == REGISTER_DIM {
        return T::zero();
    }
    let eig = SymmetricEigen::new(rho);
    let cutoff = T::eps() * T::lit(16.0);
    eig.eigenvalues
        .iter()
        .filter(|&&p| p > cutoff)
        .fold(T::zero(), |acc, &p| acc - p * p.log2())
}
