mod common;

use std::f64::consts::PI;

use aqt_core::analytic::{
    amplitudes_general, amplitudes_resonant, sqrt_swap_config, swap_time_resonant, Regime,
};
use aqt_core::microsim::{
    build_microscopic, embed_collective, energy, project_and_leakage, propagate, Propagator,
};
use aqt_core::model::{
    derive_effective, hermitian_defect, EffectiveModel, NodeLabel, SystemParams,
};
use aqt_core::protocol::*;
use aqt_core::C64;
use nalgebra::Vector3;
use proptest::prelude::*;

fn signed(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo..hi, any::<bool>()).prop_map(|(x, s)| if s { x } else { -x })
}

prop_compose! {
    fn symmetric_params()(
        n in 1usize..=8,
        g in 0.1f64..1.0,
        omega in 2.0f64..20.0,
        omega0 in 2.0f64..20.0,
        delta_node in signed(1.0, 8.0),
        delta0 in signed(1.0, 8.0),
        g_gate in 0.1f64..1.5,
    ) -> SystemParams<f64> {
        SystemParams::symmetric(n, g, omega, omega0, delta_node, delta0, g_gate)
    }
}

prop_compose! {
    fn rates()(
        n in 1usize..=12,
        omega_ac in 0.05f64..2.0,
        omega in 0.0f64..10.0,
        omega_alpha in 0.0f64..1.0,
        detuning in -5.0f64..5.0,
    ) -> EffectiveModel<f64> {
        EffectiveModel::from_rates(n, omega_ac, omega, omega_alpha, detuning)
    }
}

prop_compose! {
    fn qubit()(p in 0.0f64..=1.0, phi in -PI..PI) -> QubitState<f64> {
        QubitState::from_population(p, phi)
    }
}

fn register_norm_drift(a: &RegisterState<f64>, b: &RegisterState<f64>) -> f64 {
    (a.norm_sqr() - b.norm_sqr()).abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn effective_hamiltonian_is_hermitian(p in symmetric_params()) {
        let m = derive_effective(&p).unwrap();
        prop_assert!(hermitian_defect(&m.hamiltonian) < 1e-14);
    }

    #[test]
    fn dark_vector_is_eigenvector(p in symmetric_params()) {
        let m = derive_effective(&p).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let v = Vector3::new(C64::new(0.0, 0.0), C64::new(r, 0.0), C64::new(-r, 0.0));
        let hv = m.hamiltonian * v;
        let dev = (hv - v * C64::new(m.omega_tilde, 0.0)).iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(dev < 1e-12 * m.omega_tilde.abs().max(1.0));
    }

    #[test]
    fn rabi_splittings_related(p in symmetric_params()) {
        let m = derive_effective(&p).unwrap();
        let lhs = m.s * m.s - m.detuning * m.detuning;
        prop_assert!((lhs - m.s0 * m.s0).abs() <= 1e-12 * (m.s * m.s).max(1.0));
    }

    #[test]
    fn matrix_element_equivalence(p in symmetric_params()) {
        let m = derive_effective(&p).unwrap();
        let a = p.node1.total_coupling();
        let direct = 0.5 * p.g_gate1.norm() * (1.0 / p.delta1 + 1.0 / p.delta0) * a.sqrt();
        prop_assert!(((m.n as f64).sqrt() * m.omega_ac - direct).abs() < 1e-12);
        prop_assert!((m.hamiltonian[(0, 1)].norm() - direct.abs()).abs() < 1e-12);
    }

    #[test]
    fn amplitudes_normalized(m in rates(), t in 0.0f64..50.0) {
        prop_assert!((amplitudes_general(t, &m).norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn resonant_limit_consistent(m in rates(), t in 0.0f64..50.0) {
        let m = m.with_detuning(0.0);
        let a = amplitudes_general(t, &m);
        let b = amplitudes_resonant(t, &m).unwrap();
        prop_assert!(a.max_deviation(&b) < 1e-12);
    }

    #[test]
    fn sqrt_swap_detuning_has_period(m in rates(), t in 0.0f64..20.0, k in 1u32..4) {
        // over 4π/S the dark-bright phase e^{-iSt/4} flips sign: p1 and p2 trade places
        let m = m.with_detuning(sqrt_swap_config(&m).detuning);
        let p = amplitudes_general(t, &m).probabilities();
        let q = amplitudes_general(t + 4.0 * PI * k as f64 / m.s, &m).probabilities();
        let q = if k % 2 == 1 { [q[0], q[2], q[1]] } else { q };
        for (x, y) in p.iter().zip(q) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn microscopic_dynamics_unitary_and_closed(n in 1usize..=8, seed in any::<u64>(), t in 0.0f64..30.0) {
        let p = common::random_nonuniform(n, seed);
        let h = build_microscopic(&p).unwrap();
        let psi0 = embed_collective(&p, [C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        let psi = propagate(&h, &psi0, t).unwrap();
        prop_assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);
        prop_assert!(project_and_leakage(&psi, &p).unwrap().leakage.abs() < 1e-12);
        prop_assert!((energy(&h, &psi) - energy(&h, &psi0)).abs() < 1e-10);
        let back = propagate(&h, &psi, -t).unwrap();
        prop_assert!(back.max_deviation(&psi0) < 1e-10);
    }

    #[test]
    fn microscopic_unitary_matrix(n in 1usize..=5, seed in any::<u64>(), t in -10.0f64..10.0) {
        let p = common::random_nonuniform(n, seed);
        let u = Propagator::new(&build_microscopic(&p).unwrap()).unwrap().unitary(t);
        let id = &u.adjoint() * &u;
        let dim = id.nrows();
        let dev = (id - nalgebra::DMatrix::<C64>::identity(dim, dim)).iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(dev < 1e-12);
    }

    #[test]
    fn protocol_steps_preserve_norm_and_excitations(m in rates(), p1 in qubit(), pc in qubit(), nonres in any::<bool>()) {
        let regime = if nonres { Regime::Nonresonant } else { Regime::Resonant };
        let trace = run_control_swap(&p1, &pc, &m, regime).unwrap();
        let sectors = |s: &RegisterState<f64>| {
            let mut w = [0.0; 5];
            for (i, p) in s.populations().into_iter().enumerate() {
                w[BasisLabel::from_index(i).excitations()] += p;
            }
            w
        };
        let w0 = sectors(&trace.initial);
        let mut prev = &trace.initial;
        for (_, s) in &trace.steps {
            prop_assert!(register_norm_drift(prev, s) < 1e-12);
            for (a, b) in w0.iter().zip(sectors(s)) {
                prop_assert!((a - b).abs() < 1e-12);
            }
            prev = s;
        }
        prop_assert!(register_norm_drift(&trace.initial, trace.final_state()) < 1e-10);
    }

    #[test]
    fn control_swap_is_linear_in_control(m in rates(), p1 in qubit(), pc in qubit()) {
        let out = run_control_swap(&p1, &pc, &m, Regime::Resonant).unwrap();
        let zero = run_control_swap(&p1, &QubitState::ground(), &m, Regime::Resonant).unwrap();
        let one = run_control_swap(&p1, &QubitState::excited(), &m, Regime::Resonant).unwrap();
        let sum = &zero.final_state().amplitudes * pc.alpha + &one.final_state().amplitudes * pc.one();
        let dev = (&out.final_state().amplitudes - sum).iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(dev < 1e-10);
    }

    #[test]
    fn blockade_branch_inert(m in rates(), t in 0.0f64..20.0, amps in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 8)) {
        let terms: Vec<_> = amps
            .iter()
            .enumerate()
            .map(|(k, &(x, y))| (BasisLabel::from_index(16 + k), C64::new(x, y)))
            .collect();
        prop_assume!(terms.iter().any(|(_, a)| a.norm() > 1e-3));
        let s = RegisterState::from_terms(&terms);
        let out = apply_swap_evolve(&s, t, &m).unwrap();
        for (a, b) in s.amplitudes.iter().zip(out.amplitudes.iter()) {
            prop_assert!((a.norm() - b.norm()).abs() < 1e-12);
        }
        for i in 0..16 {
            prop_assert!(out.amplitudes[i].norm() < 1e-14);
        }
    }

    #[test]
    fn sdma_state_stationary(m in rates(), frac in 0.0f64..=10.0) {
        let m = m.with_detuning(0.0);
        let dark = prepare_sdma(&m).unwrap();
        let out = apply_swap_evolve(&dark, frac * swap_time_resonant(&m), &m).unwrap();
        for (a, b) in dark.populations().iter().zip(out.populations()) {
            prop_assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn stark_phase_is_diagonal(angle in -10.0f64..10.0, node in 0usize..3) {
        let node = [NodeLabel::Me1, NodeLabel::Me2, NodeLabel::Me3][node];
        let s = init_register(&QubitState::from_population(0.3, 0.1), &QubitState::from_population(0.6, -0.4));
        let out = apply_stark_phase(&s, node, angle);
        for (p, q) in s.populations().iter().zip(out.populations()) {
            prop_assert!((p - q).abs() < 1e-15);
        }
    }
}
