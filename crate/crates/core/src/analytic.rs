//! Closed-form swap dynamics of the symmetric three-state system.
//!
//! Starting from the ME1 excitation `(c₀, c₁, c₂)(0) = (0, 1, 0)`, the dark
//! combination `(|Ψ₁⟩ − |Ψ₂⟩)/√2` only accumulates the phase `e^{−iω̃t}`
//! while the bright combination Rabi-oscillates against the gate atom at the
//! generalised frequency `S`. Every amplitude returned here includes the
//! vacuum phase `e^{−iE₀t}`.

use nalgebra::Vector3;

use crate::model::EffectiveModel;
use crate::num::{cis, half_sinc, imag_unit, modulus, re};
use crate::{Complex, Error, Real, Result};

/// Default tolerance for "probabilities equal the target" in the root finders.
pub const EQUALITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeTriple<T> {
    pub c0: Complex<T>,
    pub c1: Complex<T>,
    pub c2: Complex<T>,
}

impl<T: Real> AmplitudeTriple<T> {
    pub fn probabilities(&self) -> [T; 3] {
        [self.c0.norm_sqr(), self.c1.norm_sqr(), self.c2.norm_sqr()]
    }

    pub fn norm_sqr(&self) -> T {
        let [a, b, c] = self.probabilities();
        a + b + c
    }

    pub fn to_vector(&self) -> Vector3<Complex<T>> {
        Vector3::new(self.c0, self.c1, self.c2)
    }

    pub fn from_vector(v: &Vector3<Complex<T>>) -> Self {
        Self {
            c0: v[0],
            c1: v[1],
            c2: v[2],
        }
    }

    /// Largest componentwise `|a_k − b_k|` (phase-aware).
    pub fn max_deviation(&self, other: &Self) -> T {
        modulus(self.c0 - other.c0)
            .max(modulus(self.c1 - other.c1))
            .max(modulus(self.c2 - other.c2))
    }

    fn scaled(self, z: Complex<T>) -> Self {
        Self {
            c0: self.c0 * z,
            c1: self.c1 * z,
            c2: self.c2 * z,
        }
    }
}

fn combine<T: Real>(
    t: T,
    model: &EffectiveModel<T>,
    gate: Complex<T>,
    rabi: Complex<T>,
) -> AmplitudeTriple<T> {
    let half = T::lit(0.5);
    let dark = cis(-model.omega_tilde * t);
    let bright_phase = cis(-(model.omega_tilde + half * model.detuning) * t);
    let bright = bright_phase * rabi;
    AmplitudeTriple {
        c0: gate * bright_phase,
        c1: (dark + bright) * half,
        c2: (bright - dark) * half,
    }
    .scaled(cis(-model.e0 * t))
}

/// Exact solution of `i ċ = H_eff c` from `(0, 1, 0)`:
///
/// ```text
/// c̃₀ = −2i (h/S) e^{−i(ω̃+Δ/2)t} sin(St/2)
/// c̃₁,₂ = ½ e^{−iω̃t} {±1 + e^{−iΔt/2}[cos(St/2) + i(Δ/S) sin(St/2)]}
/// ```
///
/// with `h = ⟨Ψ₀|H|Ψ₁⟩ = √N·Ω_{αc}` for real gate couplings.
pub fn amplitudes_general<T: Real>(t: T, model: &EffectiveModel<T>) -> AmplitudeTriple<T> {
    let hs = half_sinc(model.s, t);
    let two = T::lit(2.0);
    let gate = -imag_unit::<T>() * model.coupling * (two * hs);
    let rabi = Complex::new((model.s * t / two).cos_portable(), model.detuning * hs);
    combine(t, model, gate, rabi)
}

/// Variant with the gate–bright Rabi factor complex-conjugated
/// (`+2i` on the gate amplitude, `cos − i(Δ/S) sin` on the bright mode).
///
/// This form is normalised and agrees with [`amplitudes_general`] whenever
/// `Δ = 0` up to the sign of `c₀`, or whenever `sin(St/2) = 0`, but it does
/// not solve the Schrödinger equation for `Δ ≠ 0`.
pub fn amplitudes_conjugated_rabi<T: Real>(t: T, model: &EffectiveModel<T>) -> AmplitudeTriple<T> {
    let hs = half_sinc(model.s, t);
    let two = T::lit(2.0);
    let gate = imag_unit::<T>() * model.coupling * (two * hs);
    let rabi = Complex::new((model.s * t / two).cos_portable(), -model.detuning * hs);
    combine(t, model, gate, rabi)
}

fn resonance_tol<T: Real>(model: &EffectiveModel<T>) -> T {
    T::lit(1e-12)
        * T::one()
            .max(model.omega_tilde.abs())
            .max(model.omega0_tilde.abs())
}

/// Resonant (`Δ = 0`) nutation:
/// `c̃₀ = −i(h/|h|)/√2 · e^{−iω̃t} sin(S₀t/2)`, `c̃₁ = e^{−iω̃t} cos²(S₀t/4)`,
/// `c̃₂ = −e^{−iω̃t} sin²(S₀t/4)`.
pub fn amplitudes_resonant<T: Real>(t: T, model: &EffectiveModel<T>) -> Result<AmplitudeTriple<T>> {
    if model.detuning.abs() > resonance_tol(model) {
        return Err(Error::NotResonant(model.detuning.as_f64()));
    }
    let h_norm = modulus(model.coupling);
    let h_phase = if h_norm > T::zero() {
        model.coupling / h_norm
    } else {
        re(T::one())
    };
    let free = cis(-(model.omega_tilde + model.e0) * t);
    let quarter = model.s0 * t / T::lit(4.0);
    let (sq, cq) = quarter.sin_cos_portable();
    let gate = -imag_unit::<T>()
        * h_phase
        * (T::frac_1_sqrt_2() * (model.s0 * t / T::lit(2.0)).sin_portable());
    Ok(AmplitudeTriple {
        c0: gate * free,
        c1: free * (cq * cq),
        c2: -free * (sq * sq),
    })
}

/// `t_swap^{(r)} = 2π/S₀`.
pub fn swap_time_resonant<T: Real>(model: &EffectiveModel<T>) -> T {
    T::two_pi() / model.s0
}

/// Detuning and duration of the nonresonant √SWAP.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqrtSwapConfig<T> {
    /// `Δ = 2√(2N/3)·|Ω_{αc}| = S/2`.
    pub detuning: T,
    /// `S` at that detuning.
    pub rabi: T,
    /// `t_{√swap} = 2π/S`.
    pub duration: T,
}

pub fn sqrt_swap_config<T: Real>(model: &EffectiveModel<T>) -> SqrtSwapConfig<T> {
    let nf = T::from_count(model.n);
    let detuning = T::lit(2.0) * (T::lit(2.0) * nf / T::lit(3.0)).sqrt() * model.omega_ac.abs();
    let rabi = T::lit(2.0) * detuning;
    SqrtSwapConfig {
        detuning,
        rabi,
        duration: T::two_pi() / rabi,
    }
}

/// `(π/(2|Ω_{αc}|))·√(3/(2N))`, the second closed form of `t_{√swap}`.
pub fn sqrt_swap_time_closed_form<T: Real>(model: &EffectiveModel<T>) -> T {
    let nf = T::from_count(model.n);
    T::pi() / (T::lit(2.0) * model.omega_ac.abs()) * (T::lit(3.0) / (T::lit(2.0) * nf)).sqrt()
}

/// `t_swap^{(nr)} = 2·t_{√swap}`.
pub fn swap_time_nonresonant<T: Real>(model: &EffectiveModel<T>) -> T {
    T::lit(2.0) * sqrt_swap_config(model).duration
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    Resonant,
    Nonresonant,
}

impl Regime {
    pub fn detuning<T: Real>(self, model: &EffectiveModel<T>) -> T {
        match self {
            Regime::Resonant => T::zero(),
            Regime::Nonresonant => sqrt_swap_config(model).detuning,
        }
    }

    /// `model` retuned to this regime's detuning.
    pub fn model<T: Real>(self, model: &EffectiveModel<T>) -> EffectiveModel<T> {
        model.with_detuning(self.detuning(model))
    }

    /// Full-SWAP duration in this regime.
    pub fn swap_time<T: Real>(self, model: &EffectiveModel<T>) -> T {
        match self {
            Regime::Resonant => swap_time_resonant(model),
            Regime::Nonresonant => swap_time_nonresonant(model),
        }
    }
}

/// One member of the partial-exchange family: detuning `Δ = S/(2n)`,
/// duration `2mπ/S`, swap angle `θ = πm/(4n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwapThetaConfig<T> {
    pub n: u32,
    pub m: u32,
    pub detuning: T,
    pub rabi: T,
    pub duration: T,
    pub theta: T,
}

impl<T: Real> SwapThetaConfig<T> {
    /// `model` retuned to this configuration's detuning.
    pub fn model(&self, model: &EffectiveModel<T>) -> EffectiveModel<T> {
        model.with_detuning(self.detuning)
    }

    /// `sin²(mπ/2 − θ)`.
    pub fn expected_transfer(&self) -> T {
        let x = T::frac_pi_2() * T::from_count(self.m as usize) - self.theta;
        x.sin() * x.sin()
    }
}

pub fn swap_theta_config<T: Real>(
    n: i64,
    m: i64,
    model: &EffectiveModel<T>,
) -> Result<SwapThetaConfig<T>> {
    if n < 1 || m < 1 || n > u32::MAX as i64 || m > u32::MAX as i64 {
        return Err(Error::InvalidSwapTheta { n, m });
    }
    let (nu, mu) = (n as usize, m as usize);
    let nf = T::from_count(nu);
    // S² = 8NΩ² + S²/(4n²)
    let coupling_sq = T::lit(8.0) * T::from_count(model.n) * model.omega_ac * model.omega_ac;
    let rabi = (coupling_sq / (T::one() - T::one() / (T::lit(4.0) * nf * nf))).sqrt();
    Ok(SwapThetaConfig {
        n: n as u32,
        m: m as u32,
        detuning: rabi / (T::lit(2.0) * nf),
        rabi,
        duration: T::lit(2.0) * T::from_count(mu) * T::pi() / rabi,
        theta: T::pi() * T::from_count(mu) / (T::lit(4.0) * nf),
    })
}

/// Phase of the transferred qubit after a full SWAP: `φ₁ − ω̃·t_swap + π`.
pub fn swap_phase_law<T: Real>(phi1: T, model: &EffectiveModel<T>, regime: Regime) -> T {
    phi1 - model.omega_tilde * regime.swap_time(model) + T::pi()
}

/// `δφ = (E₀ + ω̃ + Δ/4)·t_{√swap} − π/2`, the global phase of the √SWAP
/// output `e^{−iδφ}(|Ψ₁⟩ + i|Ψ₂⟩)/√2`. Evaluated with the model's own `E₀`,
/// `ω̃` and `Δ`; pass a model retuned to the √SWAP detuning.
pub fn delta_phi<T: Real>(model: &EffectiveModel<T>) -> T {
    let t = sqrt_swap_config(model).duration;
    (model.e0 + model.omega_tilde + model.detuning / T::lit(4.0)) * t - T::frac_pi_2()
}

/// Scan step `π/(50S)` used by the root finders.
pub fn default_scan_step<T: Real>(model: &EffectiveModel<T>) -> T {
    T::pi() / (T::lit(50.0) * model.s)
}

fn bisect<T: Real, F: Fn(T) -> T>(f: &F, mut lo: T, mut hi: T) -> T {
    let mut flo = f(lo);
    let tol = T::lit(1e-12);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = (lo + hi) / T::lit(2.0);
        let fm = f(mid);
        if fm == T::zero() {
            return mid;
        }
        if (fm > T::zero()) == (flo > T::zero()) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / T::lit(2.0)
}

// negated comparisons also reject NaN bounds
#[allow(clippy::neg_cmp_op_on_partial_ord)]
fn grid<T: Real>(window: (T, T), step: T) -> Vec<T> {
    let (a, b) = window;
    if !(b > a) || !(step > T::zero()) {
        return vec![a];
    }
    let count = ((b - a) / step).ceil().as_f64() as usize;
    let mut ts: Vec<T> = (0..count).map(|k| a + step * T::from_count(k)).collect();
    ts.push(b);
    ts
}

/// Sign-change roots of `g` on a uniform scan, refined by bisection to
/// 1e−12 in `t`. Roots where `g` only touches zero are not detected.
fn scan_roots<T: Real, F: Fn(T) -> T>(g: F, window: (T, T), step: T) -> Vec<T> {
    let ts = grid(window, step);
    let mut roots: Vec<T> = Vec::new();
    let push = |r: T, roots: &mut Vec<T>| {
        if roots
            .last()
            .is_none_or(|&last| (r - last).abs() > step / T::lit(2.0))
        {
            roots.push(r);
        }
    };
    let mut prev = (ts[0], g(ts[0]));
    if prev.1 == T::zero() {
        push(prev.0, &mut roots);
    }
    for &t in &ts[1..] {
        let gt = g(t);
        if gt == T::zero() {
            push(t, &mut roots);
        } else if prev.1 != T::zero() && (gt > T::zero()) != (prev.1 > T::zero()) {
            push(bisect(&g, prev.0, t), &mut roots);
        }
        prev = (t, gt);
    }
    roots
}

/// Times in `window` where `|c_i|² = |c_j|² = target` (within `tol`) for an
/// arbitrary amplitude function.
pub fn find_pair_equal_times_with<T, F>(
    amplitudes: F,
    pair: (usize, usize),
    target: T,
    window: (T, T),
    step: T,
    tol: T,
) -> Vec<T>
where
    T: Real,
    F: Fn(T) -> AmplitudeTriple<T>,
{
    let (i, j) = pair;
    let diff = |t: T| {
        let p = amplitudes(t).probabilities();
        p[i] - p[j]
    };
    scan_roots(diff, window, step)
        .into_iter()
        .filter(|&t| {
            let p = amplitudes(t).probabilities();
            (p[i] - target).abs() <= tol && (p[j] - target).abs() <= tol
        })
        .collect()
}

/// Times in `window` where all three probabilities equal `target` within
/// `tol`. Candidates are the roots of `|c₁|² − |c₂|²`.
pub fn find_equal_probability_times_with<T, F>(
    amplitudes: F,
    target: T,
    window: (T, T),
    step: T,
    tol: T,
) -> Vec<T>
where
    T: Real,
    F: Fn(T) -> AmplitudeTriple<T>,
{
    find_pair_equal_times_with(&amplitudes, (1, 2), target, window, step, tol)
        .into_iter()
        .filter(|&t| (amplitudes(t).probabilities()[0] - target).abs() <= tol)
        .collect()
}

/// Three-way equal-probability times of the exact dynamics.
pub fn find_equal_probability_times<T: Real>(
    target: T,
    window: (T, T),
    model: &EffectiveModel<T>,
) -> Vec<T> {
    find_equal_probability_times_with(
        |t| amplitudes_general(t, model),
        target,
        window,
        default_scan_step(model),
        T::lit(EQUALITY_TOL),
    )
}

/// Two-way (`|c_i|² = |c_j|² = target`) times of the exact dynamics.
pub fn find_pair_equal_times<T: Real>(
    pair: (usize, usize),
    target: T,
    window: (T, T),
    model: &EffectiveModel<T>,
) -> Vec<T> {
    find_pair_equal_times_with(
        |t| amplitudes_general(t, model),
        pair,
        target,
        window,
        default_scan_step(model),
        T::lit(EQUALITY_TOL),
    )
}

/// Maximum of `|c_index|²` over `window`: uniform scan, then golden-section
/// refinement around the best scan point. Returns `(t, p)`.
pub fn max_probability_with<T, F>(amplitudes: F, index: usize, window: (T, T), step: T) -> (T, T)
where
    T: Real,
    F: Fn(T) -> AmplitudeTriple<T>,
{
    let p = |t: T| amplitudes(t).probabilities()[index];
    let ts = grid(window, step);
    let (k, _) = ts.iter().enumerate().map(|(k, &t)| (k, p(t))).fold(
        (0, T::min_value().unwrap_or(-T::one())),
        |best, cur| if cur.1 > best.1 { cur } else { best },
    );
    let mut lo = ts[k.saturating_sub(1)];
    let mut hi = ts[(k + 1).min(ts.len() - 1)];
    let inv_phi = T::lit((5f64.sqrt() - 1.0) / 2.0);
    for _ in 0..200 {
        if hi - lo <= T::lit(1e-13) {
            break;
        }
        let x1 = hi - inv_phi * (hi - lo);
        let x2 = lo + inv_phi * (hi - lo);
        if p(x1) < p(x2) {
            lo = x1;
        } else {
            hi = x2;
        }
    }
    let candidates = [ts[k], (lo + hi) / T::lit(2.0)];
    candidates
        .into_iter()
        .map(|t| (t, p(t)))
        .fold(
            (ts[k], p(ts[k])),
            |best, cur| if cur.1 > best.1 { cur } else { best },
        )
}

/// Peak probability `|c_index|²` of the exact dynamics over `window`.
pub fn max_probability<T: Real>(index: usize, window: (T, T), model: &EffectiveModel<T>) -> (T, T) {
    max_probability_with(
        |t| amplitudes_general(t, model),
        index,
        window,
        default_scan_step(model),
    )
}
