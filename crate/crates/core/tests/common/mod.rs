// Copyright 2026 windctl contributors
// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use windcore::hilbert::build_composite;
use windcore::linalg::{CMatrix, CVector};
use windcore::{DriveProtocol, Envelope, ModelKind, ModelParams, Profile, QuantumState};

/// Deep strong coupling: `ω_q` 0 -> 0.1 linearly, half-sine `λ` up to 1.
pub fn dsc(tau: f64, n_cut: usize) -> ModelParams {
    let drive = DriveProtocol {
        omega_c: 1.0,
        omega_i: 0.0,
        omega_f: 0.1,
        profile: Profile::Linear,
        alpha: 0.0,
        beta_cubic: 0.0,
        lambda_0: 0.0,
        lambda_m: 1.0,
        phi: 0.0,
        envelope: Envelope::HalfSine,
        tau,
    };
    ModelParams::new(drive, ModelKind::Rabi, build_composite(n_cut).unwrap()).unwrap()
}

/// Weak coupling sweep `ω_q` -0.5 -> 2.5 with a full-sine `λ` pulse.
pub fn sweep(tau: f64, n_cut: usize, lambda_m: f64, profile: Profile) -> ModelParams {
    let drive = DriveProtocol {
        omega_c: 1.0,
        omega_i: -0.5,
        omega_f: 2.5,
        profile,
        alpha: 0.5,
        beta_cubic: 2.0,
        lambda_0: 0.0,
        lambda_m,
        phi: 0.0,
        envelope: Envelope::FullSine,
        tau,
    };
    ModelParams::new(drive, ModelKind::Rabi, build_composite(n_cut).unwrap()).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard normal sample by Box-Muller.
pub fn gaussian(rng: &mut impl Rng) -> f64 {
    let u: f64 = 1.0 - rng.random::<f64>();
    let v: f64 = rng.random();
    (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
}

pub fn complex_gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(gaussian(rng), gaussian(rng)) / std::f64::consts::SQRT_2
}

/// Haar-random pure state.
pub fn haar_state(d: usize, rng: &mut impl Rng) -> QuantumState {
    let v = CVector::from_fn(d, |_, _| complex_gaussian(rng));
    QuantumState::normalized(v).unwrap()
}

/// GUE-like Hermitian matrix with unit-scale entries.
pub fn random_hermitian(d: usize, rng: &mut impl Rng) -> CMatrix {
    let g = CMatrix::from_fn(d, d, |_, _| complex_gaussian(rng));
    (&g + g.adjoint()) * Complex64::new(0.5, 0.0)
}

pub fn random_matrix(d: usize, rng: &mut impl Rng) -> CMatrix {
    CMatrix::from_fn(d, d, |_, _| complex_gaussian(rng))
}

/// `min_phi ||a - e^{i phi} b||`.
pub fn phase_distance(a: &CVector, b: &CVector) -> f64 {
    let overlap = b.dotc(a);
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    (a - b * phase).norm()
}
