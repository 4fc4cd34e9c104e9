// Copyright 2026 windctl contributors
// SPDX-License-Identifier: Apache-2.0

//! Time-optimal ("quantum wind") control.
//!
//! In the frame co-moving with the free evolution `U_0(t)`, the target becomes
//! `psi'_f = U_0^dag(tau) psi_f` and the state is steered along the
//! Fubini-Study geodesic from `psi_i` to `psi'_f` at constant speed `v_z`.
//! The lab-frame control is the rotated generator conjugated by `U_0(t)`.
//!
//! Only the two vectors `U_0(t) psi_i` and `U_0(t) psi'_f` are stored, at every
//! grid point and every step midpoint, since the control is rank two.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{check_dims, CompositeSpace, Operator, QuantumState, Qubit, NORM_TOL};
use crate::linalg::{self, CMatrix, CVector, I, ZERO};
use crate::models::{DriveProtocol, Hamiltonian, Profile};
use crate::propagator::{self, StepOptions, Trajectory};
use crate::table::Table;

/// Below this value of `1 - s^2` the target is treated as already reached.
pub const TRIVIAL_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct WindControl {
    pub psi_i: QuantumState,
    pub psi_f: QuantumState,
    pub psi_f_rot: QuantumState,
    pub s: f64,
    pub beta: f64,
    pub v_z: f64,
    pub tau: f64,
    pub steps: usize,
    pub trivial: bool,
    /// `U_0(t_k) psi_i`, `k = 0..=steps`
    frame_i: Vec<CVector>,
    /// `U_0(t_k) psi'_f`
    frame_f: Vec<CVector>,
    /// `U_0(t_k + dt/2) psi_i`, `k = 0..steps`
    mid_i: Vec<CVector>,
    mid_f: Vec<CVector>,
}

fn check_unit(psi: &QuantumState) -> Result<()> {
    let norm = psi.norm();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized { norm });
    }
    Ok(())
}

/// Builds the wind control for steering `psi_i` to `psi_f` in time `tau`.
pub fn synthesize(
    h0: &dyn Hamiltonian,
    psi_i: &QuantumState,
    psi_f: &QuantumState,
    tau: f64,
    steps: usize,
) -> Result<WindControl> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::out_of_range("tau", tau, "(0, inf)"));
    }
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be at least 1".into()));
    }
    check_unit(psi_i)?;
    check_unit(psi_f)?;
    check_dims(h0.dim(), psi_i.dim())?;
    check_dims(h0.dim(), psi_f.dim())?;

    let dt = tau / steps as f64;
    let mids: Vec<Operator> = (0..steps)
        .map(|k| propagator::sample(h0, (k as f64 + 0.5) * dt))
        .collect::<Result<_>>()?;

    // psi'_f = S_0^dag S_1^dag ... S_{K-1}^dag psi_f
    let mut back = psi_f.amplitudes().clone();
    for h in mids.iter().rev() {
        back = linalg::exp_action(h.matrix(), Complex64::new(0.0, dt), &back);
    }
    let psi_f_rot = QuantumState::normalized(back)?;

    let overlap = psi_i.inner(&psi_f_rot)?;
    let s = overlap.norm().min(1.0);
    let beta = if s == 0.0 { 0.0 } else { overlap.arg() };
    let trivial = 1.0 - s * s < TRIVIAL_THRESHOLD;
    let v_z = if trivial { 0.0 } else { s.acos() / tau };

    let mut frame_i = Vec::with_capacity(steps + 1);
    let mut frame_f = Vec::with_capacity(steps + 1);
    let mut mid_i = Vec::with_capacity(steps);
    let mut mid_f = Vec::with_capacity(steps);
    let mut vi = psi_i.amplitudes().clone();
    let mut vf = psi_f_rot.amplitudes().clone();
    for (k, h) in mids.iter().enumerate() {
        // half step sampled at t_k + dt/4
        let quarter = propagator::sample(h0, (k as f64 + 0.25) * dt)?;
        let half = Complex64::new(0.0, -dt / 2.0);
        mid_i.push(linalg::exp_action(quarter.matrix(), half, &vi));
        mid_f.push(linalg::exp_action(quarter.matrix(), half, &vf));
        let full = Complex64::new(0.0, -dt);
        let ni = linalg::exp_action(h.matrix(), full, &vi);
        let nf = linalg::exp_action(h.matrix(), full, &vf);
        frame_i.push(std::mem::replace(&mut vi, ni));
        frame_f.push(std::mem::replace(&mut vf, nf));
    }
    frame_i.push(vi);
    frame_f.push(vf);

    Ok(WindControl {
        psi_i: psi_i.clone(),
        psi_f: psi_f.clone(),
        psi_f_rot,
        s,
        beta,
        v_z,
        tau,
        steps,
        trivial,
        frame_i,
        frame_f,
        mid_i,
        mid_f,
    })
}

impl WindControl {
    pub fn dim(&self) -> usize {
        self.psi_i.dim()
    }

    /// Overlap fidelity `s^2` of the uncontrolled run.
    pub fn f0(&self) -> f64 {
        self.s * self.s
    }

    fn check_time(&self, t: f64) -> Result<()> {
        let slack = 1e-12 * self.tau.max(1.0);
        if !(t >= -slack && t <= self.tau + slack) {
            return Err(Error::out_of_range("t", t, format!("[0, {}]", self.tau)));
        }
        Ok(())
    }

    /// `v_z / sqrt(1 - s^2)`.
    fn amplitude(&self) -> f64 {
        self.v_z / (1.0 - self.s * self.s).sqrt()
    }

    /// `i c (e^{-i beta} |f><i| - h.c.)`, assembled as `M + M^dag` so the
    /// result is exactly Hermitian.
    fn rank_two(&self, vi: &CVector, vf: &CVector) -> Operator {
        if self.trivial {
            return Operator::zeros(self.dim());
        }
        let coef = I * Complex64::from_polar(self.amplitude(), -self.beta);
        let m: CMatrix = (vf * vi.adjoint()) * coef;
        let h = &m + m.adjoint();
        Operator::hermitian(h).expect("M + M^dag is Hermitian")
    }

    /// Index into the half-step grid: even entries are grid points, odd
    /// entries midpoints.
    fn frame_at(&self, t: f64) -> Result<(&CVector, &CVector)> {
        self.check_time(t)?;
        let dt = self.tau / self.steps as f64;
        let j = ((2.0 * t / dt).round() as usize).min(2 * self.steps);
        Ok(if j.is_multiple_of(2) {
            (&self.frame_i[j / 2], &self.frame_f[j / 2])
        } else {
            (&self.mid_i[j / 2], &self.mid_f[j / 2])
        })
    }

    pub fn frame_images(&self, k: usize) -> Option<(&CVector, &CVector)> {
        Some((self.frame_i.get(k)?, self.frame_f.get(k)?))
    }
}

/// The rotating-frame control `H'_c`, constant in time.
pub fn control_hamiltonian_rot(t: f64, wc: &WindControl) -> Result<Operator> {
    wc.check_time(t)?;
    Ok(wc.rank_two(wc.psi_i.amplitudes(), wc.psi_f_rot.amplitudes()))
}

/// The lab-frame control `U_0(t) H'_c U_0^dag(t)` at the nearest grid point
/// or step midpoint.
pub fn control_hamiltonian_lab(t: f64, wc: &WindControl) -> Result<Operator> {
    let (vi, vf) = wc.frame_at(t)?;
    Ok(wc.rank_two(vi, vf))
}

/// The rotating-frame state on the geodesic at time `t`.
pub fn geodesic_state(t: f64, wc: &WindControl) -> Result<QuantumState> {
    wc.check_time(t)?;
    if wc.trivial {
        return Ok(wc.psi_i.clone());
    }
    let theta = wc.v_z * t;
    let root = (1.0 - wc.s * wc.s).sqrt();
    let ci = theta.cos() - wc.s * theta.sin() / root;
    let cf = Complex64::from_polar(theta.sin() / root, -wc.beta);
    let v = wc.psi_i.amplitudes() * Complex64::new(ci, 0.0) + wc.psi_f_rot.amplitudes() * cf;
    QuantumState::new(v)
}

/// `H_0(t) + H_c(t)` on the control's time grid.
pub struct WindHamiltonian<'a> {
    pub h0: &'a dyn Hamiltonian,
    pub control: &'a WindControl,
}

impl Hamiltonian for WindHamiltonian<'_> {
    fn dim(&self) -> usize {
        self.h0.dim()
    }

    fn at(&self, t: f64) -> Result<Operator> {
        let h0 = propagator::sample(self.h0, t)?;
        let hc = control_hamiltonian_lab(t, self.control)?;
        h0.add(&hc)
    }
}

/// Evolves `wc.psi_i` under `H_0 + H_c` on the control's grid.
pub fn evolve_controlled(
    h0: &dyn Hamiltonian,
    wc: &WindControl,
    opts: &StepOptions,
) -> Result<Trajectory> {
    if opts.steps != wc.steps {
        return Err(Error::InvalidArgument(format!(
            "controlled evolution must reuse the synthesis grid ({} steps), got {}",
            wc.steps, opts.steps
        )));
    }
    let h = WindHamiltonian { h0, control: wc };
    propagator::evolve_with(&h, &wc.psi_i, wc.tau, opts)
}

pub fn evolve_with_wind(
    h0: &dyn Hamiltonian,
    psi_i: &QuantumState,
    psi_f: &QuantumState,
    tau: f64,
    steps: usize,
) -> Result<Trajectory> {
    let wc = synthesize(h0, psi_i, psi_f, tau, steps)?;
    evolve_controlled(h0, &wc, &StepOptions::new(steps))
}

/// Analytic lab-frame control for `|g,0> -> (|g,0> + |e,n>)/sqrt 2` under
/// the static `H_0 = omega_c a^dag a + (omega_f/2) σ_z`:
/// `(i pi / 4 tau) (e^{-i phi (t - tau)} |e,n><g,0| - h.c.)`, with
/// `phi = n omega_c + omega_f`.
pub fn closed_form_control(
    n: usize,
    omega_c: f64,
    omega_f: f64,
    tau: f64,
    t: f64,
    space: &CompositeSpace,
) -> Result<Operator> {
    if !(tau > 0.0) {
        return Err(Error::out_of_range("tau", tau, "(0, inf)"));
    }
    if n >= space.n_cut() {
        return Err(Error::out_of_range(
            "Fock level n",
            n as f64,
            format!("[0, {})", space.n_cut()),
        ));
    }
    let phi = n as f64 * omega_c + omega_f;
    let entry = Complex64::new(0.0, std::f64::consts::PI / (4.0 * tau))
        * Complex64::from_polar(1.0, -phi * (t - tau));
    let mut m = CMatrix::from_element(space.dim(), space.dim(), ZERO);
    let e = space.index(Qubit::E, n);
    let g = space.index(Qubit::G, 0);
    m[(e, g)] = entry;
    m[(g, e)] = entry.conj();
    Operator::hermitian(m)
}

/// [`closed_form_control`] for a drive, rejecting anything other than a
/// static, uncoupled `H_0`.
pub fn closed_form_control_for(
    drive: &DriveProtocol,
    n: usize,
    t: f64,
    space: &CompositeSpace,
) -> Result<Operator> {
    let static_qubit = drive.profile == Profile::Constant || drive.omega_i == drive.omega_f;
    if !static_qubit || drive.lambda_m != 0.0 || drive.lambda_0 != 0.0 {
        return Err(Error::InvalidArgument(
            "closed-form control requires a time-independent, uncoupled H_0".into(),
        ));
    }
    closed_form_control(n, drive.omega_c, drive.omega_f, drive.tau, t, space)
}

/// `(t, ||H_c(t)||_HS, v_z)` on the grid, every `decimation`-th point.
pub fn control_table(wc: &WindControl, decimation: usize) -> Result<Table> {
    let mut table = Table::new(["t", "hs_norm", "v_z"]);
    let dt = wc.tau / wc.steps as f64;
    let every = decimation.max(1);
    for k in 0..=wc.steps {
        if k % every != 0 && k != wc.steps {
            continue;
        }
        let t = if k == wc.steps { wc.tau } else { k as f64 * dt };
        let hc = control_hamiltonian_lab(t, wc)?;
        table.push(vec![t, linalg::frobenius(hc.matrix()), wc.v_z])?;
    }
    Ok(table)
}
