// Copyright 2026 windctl contributors
// SPDX-License-Identifier: Apache-2.0

//! Driven qubit-cavity Hamiltonians and the states they are asked to reach.
//!
//! All frequencies, rates and times are in units of the cavity frequency;
//! `omega_c` is carried explicitly but defaults to 1.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{displacement, CavitySpace, CompositeSpace, Operator, QuantumState, Qubit};
use crate::linalg::{CMatrix, CVector, ONE, ZERO};

/// Leakage bound applied to freshly built target states.
pub const STATE_LEAKAGE_TOL: f64 = 1e-6;

/// Anything that yields a Hermitian operator at a time `t`.
pub trait Hamiltonian: Sync {
    fn dim(&self) -> usize;
    fn at(&self, t: f64) -> Result<Operator>;
}

/// Wraps a closure as a [`Hamiltonian`].
pub struct FnHamiltonian<F> {
    dim: usize,
    f: F,
}

impl<F> FnHamiltonian<F>
where
    F: Fn(f64) -> Result<Operator> + Sync,
{
    pub fn new(dim: usize, f: F) -> Self {
        FnHamiltonian { dim, f }
    }
}

impl<F> Hamiltonian for FnHamiltonian<F>
where
    F: Fn(f64) -> Result<Operator> + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn at(&self, t: f64) -> Result<Operator> {
        (self.f)(t)
    }
}

/// A time-independent Hamiltonian.
pub struct ConstantHamiltonian(pub Operator);

impl Hamiltonian for ConstantHamiltonian {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn at(&self, _t: f64) -> Result<Operator> {
        Ok(self.0.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    Linear,
    Quadratic,
    Cubic,
    Constant,
}

impl Profile {
    pub fn name(self) -> &'static str {
        match self {
            Profile::Linear => "linear",
            Profile::Quadratic => "quadratic",
            Profile::Cubic => "cubic",
            Profile::Constant => "constant",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Envelope {
    /// `sin(S pi + phi)`: returns to `lambda_0` at the end.
    FullSine,
    /// `sin(S pi / 2 + phi)`: ends at `lambda_m`.
    HalfSine,
}

fn default_omega_c() -> f64 {
    1.0
}

/// Coupling and qubit-frequency schedule over `t in [0, tau]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveProtocol {
    #[serde(default = "default_omega_c")]
    pub omega_c: f64,
    pub omega_i: f64,
    pub omega_f: f64,
    pub profile: Profile,
    #[serde(default)]
    pub alpha: f64,
    #[serde(default)]
    pub beta_cubic: f64,
    #[serde(default)]
    pub lambda_0: f64,
    pub lambda_m: f64,
    #[serde(default)]
    pub phi: f64,
    pub envelope: Envelope,
    pub tau: f64,
}

impl DriveProtocol {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("omega_c", self.omega_c),
            ("omega_i", self.omega_i),
            ("omega_f", self.omega_f),
            ("alpha", self.alpha),
            ("beta_cubic", self.beta_cubic),
            ("lambda_0", self.lambda_0),
            ("lambda_m", self.lambda_m),
            ("phi", self.phi),
            ("tau", self.tau),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(Error::InvalidArgument(format!("{name} must be finite")));
            }
        }
        if self.tau <= 0.0 {
            return Err(Error::out_of_range("tau", self.tau, "(0, inf)"));
        }
        if self.omega_c <= 0.0 {
            return Err(Error::out_of_range("omega_c", self.omega_c, "(0, inf)"));
        }
        Ok(())
    }

    pub fn with_tau(&self, tau: f64) -> DriveProtocol {
        DriveProtocol {
            tau,
            ..self.clone()
        }
    }

    pub fn with_profile(&self, profile: Profile) -> DriveProtocol {
        DriveProtocol {
            profile,
            ..self.clone()
        }
    }

    fn progress(&self, t: f64) -> Result<f64> {
        let slack = 1e-12 * self.tau.max(1.0);
        if !(t >= -slack && t <= self.tau + slack) {
            return Err(Error::out_of_range("t", t, format!("[0, {}]", self.tau)));
        }
        Ok((t / self.tau).clamp(0.0, 1.0))
    }

    /// Qubit sweep shape `f_j(S)` with `f(0) = 0`, `f(1) = 1`.
    pub fn shape(&self, s: f64) -> f64 {
        let bump = s * (s - 1.0);
        match self.profile {
            Profile::Linear => s,
            Profile::Quadratic => s + self.alpha * bump,
            Profile::Cubic => s + self.alpha * bump + self.beta_cubic * bump * (2.0 * s - 1.0),
            Profile::Constant => 1.0,
        }
    }
}

/// `lambda(t) = (lambda_m - lambda_0) sin(S pi + phi) + lambda_0`, with a
/// quarter-period argument for the half-sine envelope.
pub fn coupling(t: f64, drive: &DriveProtocol) -> Result<f64> {
    let s = drive.progress(t)?;
    let arg = match drive.envelope {
        Envelope::FullSine => s * PI + drive.phi,
        Envelope::HalfSine => s * PI / 2.0 + drive.phi,
    };
    Ok((drive.lambda_m - drive.lambda_0) * arg.sin() + drive.lambda_0)
}

/// `omega_q(t) = omega_i + (omega_f - omega_i) f_j(S)`.
pub fn qubit_frequency(t: f64, drive: &DriveProtocol) -> Result<f64> {
    let s = drive.progress(t)?;
    Ok(drive.omega_i + (drive.omega_f - drive.omega_i) * drive.shape(s))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Rabi,
    Jc,
}

/// A drive schedule bound to a truncated space.
#[derive(Debug, Clone)]
pub struct ModelParams {
    pub drive: DriveProtocol,
    pub model: ModelKind,
    pub space: CompositeSpace,
    rabi_coupling: CMatrix,
    jc_coupling: CMatrix,
}

impl ModelParams {
    pub fn new(drive: DriveProtocol, model: ModelKind, space: CompositeSpace) -> Result<Self> {
        drive.validate()?;
        let rabi_coupling = space.sigma_x.matrix() * space.quadrature.matrix();
        let lower = space.sigma_plus.matrix() * space.a.matrix();
        let jc_coupling = &lower + lower.adjoint();
        Ok(ModelParams {
            drive,
            model,
            space,
            rabi_coupling,
            jc_coupling,
        })
    }

    pub fn with_drive(&self, drive: DriveProtocol) -> Result<Self> {
        drive.validate()?;
        Ok(ModelParams {
            drive,
            ..self.clone()
        })
    }

    pub fn tau(&self) -> f64 {
        self.drive.tau
    }

    fn build(&self, t: f64, coupling_op: &CMatrix) -> Result<Operator> {
        let wq = qubit_frequency(t, &self.drive)?;
        let lam = coupling(t, &self.drive)?;
        let s = &self.space;
        let h = s.number.matrix() * Complex64::new(self.drive.omega_c, 0.0)
            + s.sigma_z.matrix() * Complex64::new(wq / 2.0, 0.0)
            + coupling_op * Complex64::new(lam, 0.0);
        Operator::hermitian(h)
    }
}

impl Hamiltonian for ModelParams {
    fn dim(&self) -> usize {
        self.space.dim()
    }

    fn at(&self, t: f64) -> Result<Operator> {
        match self.model {
            ModelKind::Rabi => rabi_hamiltonian(t, self),
            ModelKind::Jc => jc_hamiltonian(t, self),
        }
    }
}

/// `omega_c a^dag a + omega_q(t)/2 σ_z + lambda(t) σ_x (a^dag + a)`.
pub fn rabi_hamiltonian(t: f64, params: &ModelParams) -> Result<Operator> {
    params.build(t, &params.rabi_coupling)
}

/// `omega_c a^dag a + omega_q(t)/2 σ_z + lambda(t) (a σ_+ + a^dag σ_-)`.
pub fn jc_hamiltonian(t: f64, params: &ModelParams) -> Result<Operator> {
    params.build(t, &params.jc_coupling)
}

/// The JC Hamiltonian restricted to `span{|e,n>, |g,n+1>}`.
pub fn jc_block(n: i64, t: f64, params: &ModelParams) -> Result<Operator> {
    if n < 0 {
        return Err(Error::out_of_range("excitation block n", n as f64, "[0, inf)"));
    }
    let n = n as f64;
    let wq = qubit_frequency(t, &params.drive)?;
    let lam = coupling(t, &params.drive)?;
    let wc = params.drive.omega_c;
    let off = lam * (n + 1.0).sqrt();
    let m = CMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(wq / 2.0 + n * wc, 0.0),
            Complex64::new(off, 0.0),
            Complex64::new(off, 0.0),
            Complex64::new(-wq / 2.0 + (n + 1.0) * wc, 0.0),
        ],
    );
    Operator::hermitian(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubspaceKind {
    /// `span{|e,j>, |g,j+1>}`
    JcExcitation(usize),
    /// `span{|e,0>, |g,1>, |e,2>, ...}`, total parity +1
    ParityPlus,
    /// `span{|g,0>, |e,1>, |g,2>, ...}`, total parity -1
    ParityMinus,
}

pub fn subspace_projector(kind: SubspaceKind, space: &CompositeSpace) -> Result<Operator> {
    let mut diag = vec![ZERO; space.dim()];
    match kind {
        SubspaceKind::JcExcitation(j) => {
            if j + 1 >= space.n_cut() {
                return Err(Error::out_of_range(
                    "excitation subspace j",
                    j as f64,
                    format!("[0, {})", space.n_cut() - 1),
                ));
            }
            diag[space.index(Qubit::E, j)] = ONE;
            diag[space.index(Qubit::G, j + 1)] = ONE;
        }
        SubspaceKind::ParityPlus | SubspaceKind::ParityMinus => {
            let want_even_e = kind == SubspaceKind::ParityPlus;
            for n in 0..space.n_cut() {
                let even = n % 2 == 0;
                let q = if even == want_even_e { Qubit::E } else { Qubit::G };
                diag[space.index(q, n)] = ONE;
            }
        }
    }
    Operator::hermitian(CMatrix::from_diagonal(&CVector::from_vec(diag)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

fn check_displacement_budget(what: &'static str, amplitude: f64, n_cut: usize) -> Result<()> {
    let limit = n_cut as f64 / 4.0;
    if amplitude * amplitude > limit {
        return Err(Error::out_of_range(
            what,
            amplitude,
            format!("|.|^2 <= n_cut/4 = {limit}"),
        ));
    }
    Ok(())
}

fn cavity_top(v: &CVector) -> f64 {
    v[v.len() - 1].norm_sqr() / v.norm_squared().max(f64::MIN_POSITIVE)
}

/// Optical cat `(|alpha> ± e^{i theta}|-alpha>) / N_±` on the cavity alone.
pub fn cat_state(
    alpha: Complex64,
    sign: Sign,
    theta: f64,
    cavity: &CavitySpace,
) -> Result<QuantumState> {
    check_displacement_budget("cat amplitude |alpha|", alpha.norm(), cavity.n_cut())?;
    let unnormalized = cat_branches(alpha, sign, theta, cavity);
    let leak = cavity_top(&unnormalized);
    if leak > STATE_LEAKAGE_TOL {
        return Err(Error::TruncationLeakage {
            population: leak,
            limit: STATE_LEAKAGE_TOL,
        });
    }
    if unnormalized.norm() < 1e-8 {
        return Err(Error::ZeroNorm(format!(
            "cat state with alpha={alpha} and sign {sign:?} has vanishing normalization"
        )));
    }
    QuantumState::normalized(unnormalized)
}

/// `|alpha> ± e^{i theta}|-alpha>`, i.e. `N_± |Cat_±>`.
fn cat_branches(alpha: Complex64, sign: Sign, theta: f64, cavity: &CavitySpace) -> CVector {
    let plus = cavity.coherent(alpha);
    let minus = cavity.coherent(-alpha);
    let rel = Complex64::from_polar(sign.value(), theta);
    plus.amplitudes() + minus.amplitudes() * rel
}

/// `|G> = (N_+ |g, Cat_+> - N_- |e, Cat_->) / 2`, global phase chosen so the
/// `|g,0>` amplitude is real and non-negative.
pub fn giant_cat_state(eta: f64, theta: f64, space: &CompositeSpace) -> Result<QuantumState> {
    check_displacement_budget("giant cat eta", eta.abs(), space.n_cut())?;
    let alpha = Complex64::new(eta, 0.0);
    let even = cat_branches(alpha, Sign::Plus, theta, &space.cavity);
    let odd = cat_branches(alpha, Sign::Minus, theta, &space.cavity);
    let mut v = CVector::zeros(space.dim());
    let n = space.n_cut();
    for k in 0..n {
        v[space.index(Qubit::G, k)] = even[k] * 0.5;
        v[space.index(Qubit::E, k)] = -odd[k] * 0.5;
    }
    let leak = space.top_level_population(&v) / v.norm_squared();
    if leak > STATE_LEAKAGE_TOL {
        return Err(Error::TruncationLeakage {
            population: leak,
            limit: STATE_LEAKAGE_TOL,
        });
    }
    let g0 = v[space.index(Qubit::G, 0)];
    if g0.norm() > 1e-14 {
        v *= g0.conj() / g0.norm();
    }
    QuantumState::normalized(v)
}

/// `(|q_a, n_a> + |q_b, n_b>) / sqrt 2`, or the basis state itself when both
/// labels coincide.
pub fn fock_superposition(
    n_a: usize,
    n_b: usize,
    q_a: Qubit,
    q_b: Qubit,
    space: &CompositeSpace,
) -> Result<QuantumState> {
    let a = space.ket(q_a, n_a)?;
    if (n_a, q_a) == (n_b, q_b) {
        return Ok(a);
    }
    let b = space.ket(q_b, n_b)?;
    QuantumState::normalized(a.amplitudes() + b.amplitudes())
}

/// `D(±eta)|n> ⊗ |±x>`, an eigenstate of `omega_c a^dag a + lambda σ_x (a + a^dag)`
/// with `eta = -lambda / omega_c` and energy `omega_c (n - eta^2)`.
pub fn displaced_fock_eigenstate(
    sign: Sign,
    n: usize,
    eta: f64,
    space: &CompositeSpace,
) -> Result<QuantumState> {
    let fock = space.cavity.fock(n)?;
    check_displacement_budget("eta", eta.abs(), space.n_cut())?;
    let d = displacement(Complex64::new(sign.value() * eta, 0.0), &space.cavity);
    let displaced = d.matrix() * fock.amplitudes();
    let leak = cavity_top(&displaced);
    if leak > STATE_LEAKAGE_TOL {
        return Err(Error::TruncationLeakage {
            population: leak,
            limit: STATE_LEAKAGE_TOL,
        });
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let qubit = [Complex64::new(h, 0.0), Complex64::new(sign.value() * h, 0.0)];
    QuantumState::normalized(space.product(qubit, &displaced)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{build_composite, expectation, fidelity};
    use crate::linalg::{self, commutator, max_abs};

    fn drive(profile: Profile, envelope: Envelope) -> DriveProtocol {
        DriveProtocol {
            omega_c: 1.0,
            omega_i: -0.5,
            omega_f: 2.5,
            profile,
            alpha: 0.5,
            beta_cubic: 2.0,
            lambda_0: 0.0,
            lambda_m: 0.25,
            phi: 0.0,
            envelope,
            tau: 10.0,
        }
    }

    #[test]
    fn coupling_examples() {
        let d = drive(Profile::Linear, Envelope::FullSine);
        assert_eq!(coupling(0.0, &d).unwrap(), 0.0);
        assert!((coupling(5.0, &d).unwrap() - 0.25).abs() < 1e-15);
        assert!(coupling(d.tau, &d).unwrap().abs() < 1e-15);
        let h = DriveProtocol {
            lambda_m: 1.0,
            envelope: Envelope::HalfSine,
            ..d.clone()
        };
        assert!((coupling(h.tau, &h).unwrap() - 1.0).abs() < 1e-15);
        let with_floor = DriveProtocol { lambda_0: 0.3, ..d.clone() };
        assert_eq!(coupling(0.0, &with_floor).unwrap(), 0.3);
        assert!(matches!(coupling(-1.0, &d), Err(Error::OutOfRange { .. })));
        assert!(matches!(coupling(10.5, &d), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn qubit_frequency_examples() {
        let lin = drive(Profile::Linear, Envelope::FullSine);
        assert_eq!(qubit_frequency(0.0, &lin).unwrap(), -0.5);
        assert_eq!(qubit_frequency(lin.tau, &lin).unwrap(), 2.5);
        let quad = lin.with_profile(Profile::Quadratic);
        let expect = -0.5 + 0.375 * 3.0;
        assert!((qubit_frequency(5.0, &quad).unwrap() - expect).abs() < 1e-15);
        let cubic = lin.with_profile(Profile::Cubic);
        assert!((qubit_frequency(5.0, &cubic).unwrap() - expect).abs() < 1e-15);
        let constant = lin.with_profile(Profile::Constant);
        for t in [0.0, 3.0, 10.0] {
            assert_eq!(qubit_frequency(t, &constant).unwrap(), 2.5);
        }
        assert!(qubit_frequency(11.0, &lin).is_err());
    }

    #[test]
    fn profile_endpoints_are_exact() {
        for p in [Profile::Linear, Profile::Quadratic, Profile::Cubic] {
            let d = drive(p, Envelope::FullSine);
            assert_eq!(d.shape(0.0), 0.0);
            assert_eq!(d.shape(1.0), 1.0);
        }
    }

    fn params(n_cut: usize, model: ModelKind) -> ModelParams {
        ModelParams::new(
            drive(Profile::Cubic, Envelope::FullSine),
            model,
            build_composite(n_cut).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn rabi_examples() {
        let p = params(6, ModelKind::Rabi);
        let g0 = p.space.ket(Qubit::G, 0).unwrap();
        for t in [0.0, 2.5, 7.0] {
            let h = rabi_hamiltonian(t, &p).unwrap();
            let wq = qubit_frequency(t, &p.drive).unwrap();
            assert!((expectation(&h, &g0).unwrap().re + wq / 2.0).abs() < 1e-15);
            let c = commutator(h.matrix(), p.space.total_parity.matrix());
            assert!(max_abs(&c) <= 1e-12);
        }
        // uncoupled and resonant: |e,0> has energy omega_c/2
        let flat = DriveProtocol {
            omega_i: 1.0,
            omega_f: 1.0,
            lambda_m: 0.0,
            ..p.drive.clone()
        };
        let p0 = p.with_drive(flat).unwrap();
        let h = rabi_hamiltonian(1.0, &p0).unwrap();
        let e0 = p0.space.index(Qubit::E, 0);
        assert_eq!(h.matrix()[(e0, e0)].re, 0.5);
    }

    #[test]
    fn jc_conserves_excitations_and_matches_blocks() {
        let p = params(7, ModelKind::Jc);
        for t in [0.0, 1.3, 6.1, 10.0] {
            let h = jc_hamiltonian(t, &p).unwrap();
            assert!(max_abs(&commutator(h.matrix(), p.space.excitations.matrix())) <= 1e-12);
            for n in 0..5usize {
                let block = jc_block(n as i64, t, &p).unwrap();
                let idx = [p.space.index(Qubit::E, n), p.space.index(Qubit::G, n + 1)];
                for (r, &i) in idx.iter().enumerate() {
                    for (c, &j) in idx.iter().enumerate() {
                        assert!((h.matrix()[(i, j)] - block.matrix()[(r, c)]).norm() < 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn jc_block_examples() {
        let mut p = params(4, ModelKind::Jc);
        p.drive.lambda_m = 0.0;
        let b = jc_block(0, 2.0, &p).unwrap();
        let wq = qubit_frequency(2.0, &p.drive).unwrap();
        assert_eq!(b.matrix()[(0, 0)].re, wq / 2.0);
        assert_eq!(b.matrix()[(1, 1)].re, -wq / 2.0 + 1.0);
        assert_eq!(b.matrix()[(0, 1)], ZERO);

        p.drive.lambda_m = 0.25;
        let b3 = jc_block(3, 5.0, &p).unwrap();
        assert!((b3.matrix()[(0, 1)].re - 2.0 * 0.25).abs() < 1e-15);
        assert!(jc_block(-1, 0.0, &p).is_err());
    }

    #[test]
    fn resonant_block_gap_is_twice_coupling() {
        let mut p = params(4, ModelKind::Jc);
        p.drive.omega_i = 1.0;
        p.drive.omega_f = 1.0;
        let t = 5.0;
        let lam = coupling(t, &p.drive).unwrap();
        let b = jc_block(0, t, &p).unwrap();
        let (vals, _) = linalg::hermitian_eigen(b.matrix());
        assert!((vals[1] - vals[0] - 2.0 * lam).abs() < 1e-14);
    }

    #[test]
    fn hamiltonians_are_hermitian_at_many_times() {
        for model in [ModelKind::Rabi, ModelKind::Jc] {
            let p = params(5, model);
            for k in 0..20 {
                let t = p.tau() * k as f64 / 19.0;
                let h = p.at(t).unwrap();
                assert!(h.is_hermitian());
                assert!(linalg::hermiticity_defect(h.matrix()) <= 1e-12);
            }
        }
    }

    #[test]
    fn projector_examples() {
        let s = build_composite(6).unwrap();
        let plus = subspace_projector(SubspaceKind::ParityPlus, &s).unwrap();
        let minus = subspace_projector(SubspaceKind::ParityMinus, &s).unwrap();
        let total = plus.matrix().trace() + minus.matrix().trace();
        assert_eq!(total.re, 12.0);
        let e0 = s.index(Qubit::E, 0);
        assert_eq!(plus.matrix()[(e0, e0)], ONE);
        let g1 = s.index(Qubit::G, 1);
        assert_eq!(plus.matrix()[(g1, g1)], ONE);
        for kind in [
            SubspaceKind::ParityPlus,
            SubspaceKind::ParityMinus,
            SubspaceKind::JcExcitation(0),
            SubspaceKind::JcExcitation(4),
        ] {
            let p = subspace_projector(kind, &s).unwrap();
            let m = p.matrix();
            assert!(max_abs(&(m * m - m)) <= 1e-12);
        }
        // total parity on the + subspace is +1
        let signed = s.total_parity.matrix() * plus.matrix();
        assert!(max_abs(&(signed - plus.matrix())) < 1e-15);
        assert!(subspace_projector(SubspaceKind::JcExcitation(5), &s).is_err());
    }

    #[test]
    fn cat_state_examples() {
        let cav = CavitySpace::new(40).unwrap();
        let vac = cat_state(ZERO, Sign::Plus, 0.0, &cav).unwrap();
        assert!((vac.amplitudes()[0] - ONE).norm() < 1e-14);
        assert!(matches!(
            cat_state(ZERO, Sign::Minus, 0.0, &cav),
            Err(Error::ZeroNorm(_))
        ));
        let plus = cat_state(ONE, Sign::Plus, 0.0, &cav).unwrap();
        let minus = cat_state(ONE, Sign::Minus, 0.0, &cav).unwrap();
        assert!(plus.inner(&minus).unwrap().norm() < 1e-14);
        assert!(matches!(
            cat_state(Complex64::new(4.0, 0.0), Sign::Plus, 0.0, &cav),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn giant_cat_examples() {
        let s = build_composite(40).unwrap();
        let g = giant_cat_state(0.0, 0.0, &s).unwrap();
        assert!((fidelity(&g, &s.ket(Qubit::G, 0).unwrap()).unwrap() - 1.0).abs() < 1e-14);
        let g1 = giant_cat_state(1.0, 0.0, &s).unwrap();
        assert!((g1.norm() - 1.0).abs() < 1e-14);
        let g0 = g1.amplitudes()[s.index(Qubit::G, 0)];
        assert!(g0.im == 0.0 && g0.re > 0.0);
        // lives in the parity -1 sector together with |g,0>
        let minus = subspace_projector(SubspaceKind::ParityMinus, &s).unwrap();
        assert!((expectation(&minus, &g1).unwrap().re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn fock_superposition_examples() {
        let s = build_composite(8).unwrap();
        let psi = fock_superposition(1, 5, Qubit::G, Qubit::E, &s).unwrap();
        let g1 = s.ket(Qubit::G, 1).unwrap();
        assert!((fidelity(&psi, &g1).unwrap() - 0.5).abs() < 1e-15);
        let same = fock_superposition(3, 3, Qubit::E, Qubit::E, &s).unwrap();
        assert_eq!(same, s.ket(Qubit::E, 3).unwrap());
        let e5 = s.ket(Qubit::E, 5).unwrap();
        let anti = QuantumState::normalized(g1.amplitudes() - e5.amplitudes()).unwrap();
        assert!(psi.inner(&anti).unwrap().norm() < 1e-15);
        assert!(fock_superposition(1, 8, Qubit::G, Qubit::E, &s).is_err());
    }

    #[test]
    fn displaced_fock_examples() {
        let s = build_composite(40).unwrap();
        let lam = 1.0;
        let eta = -lam;
        let h0 = s.number.matrix() + s.sigma_x.matrix() * s.quadrature.matrix() * Complex64::new(lam, 0.0);
        for sign in [Sign::Plus, Sign::Minus] {
            let psi = displaced_fock_eigenstate(sign, 0, eta, &s).unwrap();
            let e = -eta * eta;
            let residual = &h0 * psi.amplitudes() - psi.amplitudes() * Complex64::new(e, 0.0);
            assert!(residual.norm() <= 1e-7, "residual {}", residual.norm());
        }
        let plain = displaced_fock_eigenstate(Sign::Plus, 2, 0.0, &s).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((plain.amplitudes()[s.index(Qubit::G, 2)].re - h).abs() < 1e-14);
        assert!((plain.amplitudes()[s.index(Qubit::E, 2)].re - h).abs() < 1e-14);
        let p = displaced_fock_eigenstate(Sign::Plus, 0, 0.7, &s).unwrap();
        let m = displaced_fock_eigenstate(Sign::Minus, 0, 0.7, &s).unwrap();
        assert!(p.inner(&m).unwrap().norm() < 1e-14);
    }
}
