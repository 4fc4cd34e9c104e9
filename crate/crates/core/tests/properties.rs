// Copyright 2026 windctl contributors
// SPDX-License-Identifier: Apache-2.0

//! Randomized structural checks across the public API.

mod common;

use std::f64::consts::FRAC_2_PI;

use num_complex::Complex64;
use proptest::prelude::*;
use windcore::energetics::{energy_spread, mt_bound, time_averaged_variance};
use windcore::hilbert::{build_composite, displacement, fidelity, CavitySpace};
use windcore::linalg::{self, kron, max_abs};
use windcore::models::{coupling, jc_hamiltonian, qubit_frequency, rabi_hamiltonian};
use windcore::propagator::{self, StepOptions};
use windcore::redfield::{bath_channels, redfield_generator, BathSpec};
use windcore::tomography::joint_wigner;
use windcore::wind::{self, control_hamiltonian_rot, geodesic_state};
use windcore::{
    DriveProtocol, Envelope, ModelKind, ModelParams, Operator, PauliLabel, Profile,
    QuantumState,
};

use common::{haar_state, random_hermitian, random_matrix, rng};

fn profile() -> impl Strategy<Value = Profile> {
    prop_oneof![
        Just(Profile::Linear),
        Just(Profile::Quadratic),
        Just(Profile::Cubic),
        Just(Profile::Constant),
    ]
}

fn envelope() -> impl Strategy<Value = Envelope> {
    prop_oneof![Just(Envelope::FullSine), Just(Envelope::HalfSine)]
}

prop_compose! {
    fn drive()(
        omega_i in -1.0..3.0f64,
        omega_f in -1.0..3.0f64,
        profile in profile(),
        alpha in -1.0..1.0f64,
        beta_cubic in -2.0..2.0f64,
        lambda_0 in 0.0..0.5f64,
        lambda_m in 0.0..1.0f64,
        envelope in envelope(),
        tau in 0.1..20.0f64,
    ) -> DriveProtocol {
        DriveProtocol {
            omega_c: 1.0,
            omega_i,
            omega_f,
            profile,
            alpha,
            beta_cubic,
            lambda_0,
            lambda_m,
            phi: 0.0,
            envelope,
            tau,
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tensor_product_mixed_product(da in 1usize..=4, db in 1usize..=4, seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, c) = (random_matrix(da, &mut r), random_matrix(da, &mut r));
        let (b, d) = (random_matrix(db, &mut r), random_matrix(db, &mut r));
        let lhs = kron(&a, &b) * kron(&c, &d);
        let rhs = kron(&(&a * &c), &(&b * &d));
        prop_assert!(max_abs(&(lhs - rhs)) <= 1e-12);
    }

    #[test]
    fn displacement_is_unitary_inside_budget(re in -1.5..1.5f64, im in -1.5..1.5f64) {
        let beta = Complex64::new(re, im);
        let n_cut = (4.0 * beta.norm_sqr() + 10.0).ceil() as usize;
        let d = displacement(beta, &CavitySpace::new(n_cut).unwrap());
        prop_assert!(linalg::unitarity_defect(d.matrix()) <= 1e-8);
    }

    #[test]
    fn drive_endpoints(d in drive()) {
        // the constant profile sits at the final frequency throughout
        let start = if d.profile == Profile::Constant { d.omega_f } else { d.omega_i };
        prop_assert!((qubit_frequency(0.0, &d).unwrap() - start).abs() < 1e-12);
        prop_assert!((qubit_frequency(d.tau, &d).unwrap() - d.omega_f).abs() < 1e-12);
        prop_assert!((coupling(0.0, &d).unwrap() - d.lambda_0).abs() < 1e-12);
    }

    #[test]
    fn hamiltonians_are_hermitian_and_conserve(d in drive(), frac in 0.0..=1.0f64) {
        let space = build_composite(6).unwrap();
        let t = frac * d.tau;
        let p = ModelParams::new(d, ModelKind::Rabi, space.clone()).unwrap();
        let rabi = rabi_hamiltonian(t, &p).unwrap();
        let jc = jc_hamiltonian(t, &p).unwrap();
        for h in [&rabi, &jc] {
            prop_assert!(h.is_hermitian());
            prop_assert!(linalg::hermiticity_defect(h.matrix()) <= 1e-12);
        }
        let parity = space.total_parity.matrix();
        let excitations = space.excitations.matrix();
        prop_assert!(max_abs(&linalg::commutator(rabi.matrix(), parity)) <= 1e-12);
        prop_assert!(max_abs(&linalg::commutator(jc.matrix(), excitations)) <= 1e-12);
    }

    #[test]
    fn variance_is_bounded_by_hs_norm(d in 1usize..=10, seed in any::<u64>()) {
        let mut r = rng(seed);
        let h = Operator::hermitian(random_hermitian(d, &mut r)).unwrap();
        let psi = haar_state(d, &mut r);
        prop_assert!(energy_spread(&h, &psi).unwrap() <= linalg::frobenius(h.matrix()) + 1e-12);
    }

    #[test]
    fn wigner_values_are_bounded(seed in any::<u64>(), re in -3.0..3.0f64, im in -3.0..3.0f64) {
        let space = build_composite(10).unwrap();
        let psi = haar_state(space.dim(), &mut rng(seed));
        for label in PauliLabel::ALL {
            let w = joint_wigner((&psi).into(), Complex64::new(re, im), label, &space).unwrap();
            prop_assert!(w.abs() <= FRAC_2_PI + 1e-9, "{:?} {}", label, w);
        }
    }

    #[test]
    fn redfield_generator_preserves_trace(
        seed in any::<u64>(),
        gamma_c in 0.0..0.3f64,
        gamma_q in 0.0..0.3f64,
        gamma_phi in 0.0..0.3f64,
        temperature in 0.0..2.0f64,
        cutoff in prop_oneof![Just(0.0), 0.0..2.0f64, Just(f64::INFINITY)],
    ) {
        let space = build_composite(3).unwrap();
        let mut r = rng(seed);
        let h = random_hermitian(space.dim(), &mut r);
        let bath = BathSpec { gamma_c, gamma_q, gamma_phi, temperature, secular_cutoff: cutoff, ..BathSpec::default() };
        let gen = redfield_generator(&h, &bath_channels(&bath, &space), &bath).unwrap();
        let psi = haar_state(space.dim(), &mut r);
        let rho = psi.amplitudes() * psi.amplitudes().adjoint();
        let out = gen.apply(&rho);
        prop_assert!(out.trace().norm() <= 1e-10);
        prop_assert!(linalg::hermiticity_defect(&out) <= 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn evolution_preserves_norm(d in drive()) {
        let p = ModelParams::new(DriveProtocol { tau: d.tau.min(2.0), ..d }, ModelKind::Rabi, build_composite(8).unwrap()).unwrap();
        let psi0 = p.space.ket(windcore::Qubit::E, 0).unwrap();
        let traj = propagator::evolve_with(&p, &psi0, p.tau(), &StepOptions::new(400)).unwrap();
        for s in &traj.states {
            prop_assert!((s.amplitudes().norm() - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn mandelstam_tamm_inequality_holds(d in drive()) {
        let tau = d.tau.min(5.0);
        let p = ModelParams::new(DriveProtocol { tau, ..d }, ModelKind::Rabi, build_composite(8).unwrap()).unwrap();
        let psi0 = p.space.ket(windcore::Qubit::E, 0).unwrap();
        let traj = propagator::evolve(&p, &psi0, tau, 1000).unwrap();
        let avg = time_averaged_variance(&traj, &p).unwrap();
        let angle = fidelity(&psi0, traj.final_state()).unwrap().sqrt().min(1.0).acos();
        prop_assert!(tau * avg >= angle - 1e-6, "tau*avg {} < angle {}", tau * avg, angle);
        if avg > 0.0 {
            prop_assert!(mt_bound(&psi0, traj.final_state(), avg).unwrap() <= tau + 1e-6);
        }
    }

    #[test]
    fn geodesic_is_normalized_at_constant_speed(seed in any::<u64>(), tau in 0.2..5.0f64) {
        let mut r = rng(seed);
        let h0 = windcore::models::ConstantHamiltonian(Operator::hermitian(random_hermitian(8, &mut r)).unwrap());
        let psi_i = haar_state(8, &mut r);
        let psi_f = haar_state(8, &mut r);
        let wc = wind::synthesize(&h0, &psi_i, &psi_f, tau, 200).unwrap();
        let hc = control_hamiltonian_rot(0.0, &wc).unwrap();
        for k in 0..=10 {
            let t = tau * k as f64 / 10.0;
            let g = geodesic_state(t, &wc).unwrap();
            prop_assert!((g.amplitudes().norm() - 1.0).abs() <= 1e-10);
            prop_assert!((energy_spread(&hc, &g).unwrap() - wc.v_z).abs() <= 1e-9);
        }
    }
}

#[test]
fn geodesic_speed_is_exact_for_degenerate_overlaps() {
    // orthogonal endpoints: the speed is pi / (2 tau)
    let h0 = windcore::models::ConstantHamiltonian(Operator::zeros(4));
    let psi_i = QuantumState::basis(4, 0).unwrap();
    let psi_f = QuantumState::basis(4, 3).unwrap();
    let wc = wind::synthesize(&h0, &psi_i, &psi_f, 2.0, 100).unwrap();
    assert!((wc.v_z - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
}
