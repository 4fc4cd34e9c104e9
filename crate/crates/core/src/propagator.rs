// Copyright 2026 windctl contributors
// SPDX-License-Identifier: Apache-2.0

//! Time-ordered closed-system evolution.
//!
//! Every step applies `exp(-i H(t_k + dt/2) dt)`, the midpoint exponential,
//! which is second-order accurate and unitary up to the Taylor remainder.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{
    check_dims, expectation, CompositeSpace, Operator, OperatorKind, QuantumState, HERMITIAN_TOL,
};
use crate::linalg::{self, CMatrix, CVector};
use crate::models::Hamiltonian;
use crate::table::Table;

/// Population allowed in the top Fock level before a run is rejected.
pub const LEAKAGE_LIMIT: f64 = 1e-6;

/// `max(2000, ceil(200 tau))` for `omega_c = 1`.
pub fn default_steps(tau: f64) -> usize {
    (200.0 * tau).ceil().max(2000.0) as usize
}

/// Step count and storage options.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOptions {
    pub steps: usize,
    /// Keep every `decimation`-th grid point (the final point is always kept).
    pub decimation: usize,
    /// Cavity truncation for the leakage guard in the qubit-major layout.
    pub guard_n_cut: Option<usize>,
    pub leakage_limit: f64,
}

impl StepOptions {
    pub fn new(steps: usize) -> Self {
        StepOptions {
            steps,
            decimation: 1,
            guard_n_cut: None,
            leakage_limit: LEAKAGE_LIMIT,
        }
    }

    pub fn decimate(mut self, every: usize) -> Self {
        self.decimation = every.max(1);
        self
    }

    pub fn guard(mut self, space: &CompositeSpace) -> Self {
        self.guard_n_cut = Some(space.n_cut());
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<QuantumState>,
    pub step_count: usize,
    /// Largest top-level population seen on any step (0 without a guard).
    pub max_leakage: f64,
}

impl Trajectory {
    pub fn final_state(&self) -> &QuantumState {
        self.states.last().expect("a trajectory holds at least psi0")
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct PropagatorSeries {
    pub times: Vec<f64>,
    pub unitaries: Vec<Operator>,
}

impl PropagatorSeries {
    pub fn final_unitary(&self) -> &Operator {
        self.unitaries.last().expect("series holds at least the identity")
    }
}

fn check_steps(tau: f64, steps: usize) -> Result<()> {
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be at least 1".into()));
    }
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::out_of_range("tau", tau, "(0, inf)"));
    }
    Ok(())
}

/// Samples `H` and refuses operators that are not Hermitian.
pub(crate) fn sample(h: &dyn Hamiltonian, t: f64) -> Result<Operator> {
    let op = h.at(t)?;
    check_dims(h.dim(), op.dim())?;
    if op.kind() != OperatorKind::Hermitian {
        let defect = linalg::hermiticity_defect(op.matrix());
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian { defect });
        }
    }
    Ok(op)
}

pub(crate) fn leakage(n_cut: usize, v: &CVector) -> f64 {
    let top = n_cut - 1;
    v[top].norm_sqr() + v[n_cut + top].norm_sqr()
}

/// One midpoint step of length `dt` starting at `t`.
pub fn step(h: &dyn Hamiltonian, t: f64, dt: f64, psi: &CVector) -> Result<CVector> {
    let hm = sample(h, t + dt / 2.0)?;
    Ok(linalg::exp_action(hm.matrix(), Complex64::new(0.0, -dt), psi))
}

pub fn evolve(
    h: &dyn Hamiltonian,
    psi0: &QuantumState,
    tau: f64,
    steps: usize,
) -> Result<Trajectory> {
    evolve_with(h, psi0, tau, &StepOptions::new(steps))
}

pub fn evolve_with(
    h: &dyn Hamiltonian,
    psi0: &QuantumState,
    tau: f64,
    opts: &StepOptions,
) -> Result<Trajectory> {
    check_steps(tau, opts.steps)?;
    check_dims(h.dim(), psi0.dim())?;
    let dt = tau / opts.steps as f64;
    let mut times = vec![0.0];
    let mut states = vec![psi0.clone()];
    let mut psi = psi0.amplitudes().clone();
    let mut max_leakage: f64 = 0.0;
    for k in 0..opts.steps {
        let t = k as f64 * dt;
        psi = step(h, t, dt, &psi)?;
        if let Some(n_cut) = opts.guard_n_cut {
            let p = leakage(n_cut, &psi);
            max_leakage = max_leakage.max(p);
            if p > opts.leakage_limit {
                return Err(Error::TruncationLeakage {
                    population: p,
                    limit: opts.leakage_limit,
                });
            }
        }
        let idx = k + 1;
        if idx % opts.decimation == 0 || idx == opts.steps {
            times.push(if idx == opts.steps { tau } else { idx as f64 * dt });
            states.push(QuantumState::from_unitary_image(psi.clone()));
        }
    }
    Ok(Trajectory {
        times,
        states,
        step_count: opts.steps,
        max_leakage,
    })
}

/// Dense `U(t_k)` from the same midpoint factors as [`evolve`].
pub fn propagator_series(h: &dyn Hamiltonian, tau: f64, steps: usize) -> Result<PropagatorSeries> {
    propagator_series_with(h, tau, &StepOptions::new(steps))
}

pub fn propagator_series_with(
    h: &dyn Hamiltonian,
    tau: f64,
    opts: &StepOptions,
) -> Result<PropagatorSeries> {
    check_steps(tau, opts.steps)?;
    let d = h.dim();
    let dt = tau / opts.steps as f64;
    let mut u = CMatrix::identity(d, d);
    let mut times = vec![0.0];
    let mut unitaries = vec![Operator::identity(d)];
    for k in 0..opts.steps {
        let hm = sample(h, (k as f64 + 0.5) * dt)?;
        let factor = linalg::expm(&(hm.matrix() * Complex64::new(0.0, -dt)));
        u = factor * u;
        let idx = k + 1;
        if idx % opts.decimation == 0 || idx == opts.steps {
            times.push(if idx == opts.steps { tau } else { idx as f64 * dt });
            unitaries.push(Operator::unitary(u.clone())?);
        }
    }
    Ok(PropagatorSeries { times, unitaries })
}

/// `|<target|psi(t_k)>|^2` along the trajectory.
pub fn fidelity_series(traj: &Trajectory, target: &QuantumState) -> Result<Vec<f64>> {
    traj.states
        .iter()
        .map(|s| Ok(target.inner(s)?.norm_sqr()))
        .collect()
}

pub fn check_projector(p: &Operator) -> Result<()> {
    let m = p.matrix();
    let defect = linalg::max_abs(&(m * m - m)).max(linalg::hermiticity_defect(m));
    if defect > 1e-10 {
        return Err(Error::NotProjector { defect });
    }
    Ok(())
}

/// `<psi(t_k)|P|psi(t_k)>`, clamped to `[0, 1]`.
pub fn occupation_series(traj: &Trajectory, projector: &Operator) -> Result<Vec<f64>> {
    check_projector(projector)?;
    traj.states
        .iter()
        .map(|s| Ok(expectation(projector, s)?.re.clamp(0.0, 1.0)))
        .collect()
}

/// Instantaneous qubit pulses used between adiabatic segments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pulse {
    /// `σ_x`
    Pi,
    /// `exp(-i pi σ_x / 4)`
    HalfPi,
}

pub fn pulse_operator(pulse: Pulse, space: &CompositeSpace) -> Operator {
    let sx = space.sigma_x.matrix();
    let m = match pulse {
        Pulse::Pi => sx.clone(),
        Pulse::HalfPi => {
            let c = std::f64::consts::FRAC_1_SQRT_2;
            let d = space.dim();
            CMatrix::identity(d, d) * Complex64::new(c, 0.0) + sx * Complex64::new(0.0, -c)
        }
    };
    Operator::unitary(m).expect("pulse operators are unitary")
}

pub fn apply_pulse(pulse: Pulse, psi: &QuantumState, space: &CompositeSpace) -> Result<QuantumState> {
    let v = pulse_operator(pulse, space).apply(psi)?;
    Ok(QuantumState::from_unitary_image(v))
}

/// Climbs `|e,0> -> |g,1> -> |e,1> -> ... -> |g,rungs>` by alternating
/// adiabatic inversions under `h` (each of duration `tau`) with π pulses.
/// Returns the state after the final inversion.
pub fn sequential_fock_ladder(
    h: &dyn Hamiltonian,
    space: &CompositeSpace,
    rungs: usize,
    tau: f64,
    steps: usize,
) -> Result<QuantumState> {
    let mut psi = space.ket(crate::hilbert::Qubit::E, 0)?;
    let opts = StepOptions::new(steps).decimate(steps).guard(space);
    for r in 0..rungs {
        if r > 0 {
            psi = apply_pulse(Pulse::Pi, &psi, space)?;
        }
        psi = evolve_with(h, &psi, tau, &opts)?.final_state().clone();
    }
    Ok(psi)
}

/// Observables named in a trajectory export.
pub struct TrajectoryColumns<'a> {
    pub target: &'a QuantumState,
    pub projectors: &'a [(String, Operator)],
    pub space: &'a CompositeSpace,
}

/// CSV-ready table with columns `t, F, P_*..., sigma_z, n`.
pub fn trajectory_table(traj: &Trajectory, cols: &TrajectoryColumns<'_>) -> Result<Table> {
    for (_, p) in cols.projectors {
        check_projector(p)?;
    }
    let mut header = vec!["t".to_string(), "F".to_string()];
    header.extend(cols.projectors.iter().map(|(name, _)| format!("P_{name}")));
    header.push("sigma_z".into());
    header.push("n".into());
    let mut table = Table::new(header);
    for (t, s) in traj.times.iter().zip(&traj.states) {
        let mut row = vec![*t, cols.target.inner(s)?.norm_sqr()];
        for (_, p) in cols.projectors {
            row.push(expectation(p, s)?.re.clamp(0.0, 1.0));
        }
        row.push(expectation(&cols.space.sigma_z, s)?.re);
        row.push(expectation(&cols.space.number, s)?.re);
        table.push(row)?;
    }
    Ok(table)
}
