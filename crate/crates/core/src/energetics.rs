// Copyright 2026 windctl contributors
// SPDX-License-Identifier: Apache-2.0

//! Speed limits and control cost.
//!
//! Angles are `arccos(sqrt F)` unless labelled `doubled`; with that
//! convention a constant-speed geodesic saturates `tau * mean(ΔH) >= angle`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{
    angle_from_fidelity, check_dims, fidelity, AngleConvention, Operator, OperatorKind,
    QuantumState, HERMITIAN_TOL,
};
use crate::linalg;
use crate::models::{Hamiltonian, ModelParams};
use crate::propagator::{self, Trajectory};
use crate::table::Table;
use crate::wind;

/// Relative tolerance for calling a bound saturated.
pub const SATURATION_TOL: f64 = 1e-6;

fn require_hermitian(h: &Operator) -> Result<()> {
    if h.kind() != OperatorKind::Hermitian {
        let defect = linalg::hermiticity_defect(h.matrix());
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian { defect });
        }
    }
    Ok(())
}

/// `<H^2> - <H>^2`, clamped at zero against round-off.
pub fn energy_variance(h: &Operator, psi: &QuantumState) -> Result<f64> {
    require_hermitian(h)?;
    check_dims(h.dim(), psi.dim())?;
    let hv = h.matrix() * psi.amplitudes();
    let mean = psi.amplitudes().dotc(&hv).re;
    let var = hv.norm_squared() - mean * mean;
    if var < -1e-12 {
        log::warn!("energy variance {var:e} is negative beyond round-off");
    }
    Ok(var.max(0.0))
}

/// `ΔH = sqrt(energy_variance)`.
pub fn energy_spread(h: &Operator, psi: &QuantumState) -> Result<f64> {
    Ok(energy_variance(h, psi)?.sqrt())
}

fn trapezoid(times: &[f64], values: &[f64]) -> f64 {
    times
        .windows(2)
        .zip(values.windows(2))
        .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1]))
        .sum()
}

/// `(1/tau) ∫ ΔH(t) dt` along a trajectory, by the trapezoid rule.
pub fn time_averaged_variance(traj: &Trajectory, h: &dyn Hamiltonian) -> Result<f64> {
    let tau = *traj.times.last().expect("trajectory is non-empty");
    if traj.times.len() < 2 || tau <= 0.0 {
        return Err(Error::InvalidArgument(
            "time average needs at least two grid points".into(),
        ));
    }
    let spreads = traj
        .times
        .iter()
        .zip(&traj.states)
        .map(|(t, s)| energy_spread(&h.at(*t)?, s))
        .collect::<Result<Vec<_>>>()?;
    Ok(trapezoid(&traj.times, &spreads) / tau)
}

/// `arccos(sqrt F(psi_i, psi_f)) / avg_spread`.
pub fn mt_bound(psi_i: &QuantumState, psi_f: &QuantumState, avg_spread: f64) -> Result<f64> {
    let angle = angle_from_fidelity(fidelity(psi_i, psi_f)?, AngleConvention::Arccos);
    if avg_spread <= 0.0 {
        return if angle < 1e-12 {
            Ok(0.0)
        } else {
            Err(Error::Unbounded)
        };
    }
    Ok(angle / avg_spread)
}

/// Time-averaged operator norm of a control, in both conventions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HsCost {
    /// largest |eigenvalue|
    pub spectral: f64,
    /// sqrt(Tr H^dag H)
    pub frobenius: f64,
}

/// `C = (1/tau) ∫ ||H(t)|| dt` on `steps + 1` grid points.
pub fn hs_cost(h: &dyn Hamiltonian, tau: f64, steps: usize) -> Result<HsCost> {
    if steps == 0 || !(tau > 0.0) {
        return Err(Error::InvalidArgument(
            "cost quadrature needs tau > 0 and steps >= 1".into(),
        ));
    }
    let times: Vec<f64> = (0..=steps).map(|k| tau * k as f64 / steps as f64).collect();
    let mut spectral = Vec::with_capacity(times.len());
    let mut frob = Vec::with_capacity(times.len());
    for t in &times {
        let op = h.at(*t)?;
        require_hermitian(&op)?;
        spectral.push(linalg::spectral_norm_hermitian(op.matrix()));
        frob.push(linalg::frobenius(op.matrix()));
    }
    Ok(HsCost {
        spectral: trapezoid(&times, &spectral) / tau,
        frobenius: trapezoid(&times, &frob) / tau,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergeticsReport {
    pub tau: f64,
    /// time-averaged ΔH
    pub avg_variance: f64,
    /// `arccos(sqrt F) / tau` between the initial and final state
    pub bound_speed: f64,
    /// same with the doubled angle `2 arccos(sqrt F)`
    pub bound_speed_doubled: f64,
    pub mt_time: f64,
    pub hs_cost: HsCost,
    pub saturation_ratio: f64,
}

/// Speed-limit summary of a closed evolution under `h`.
pub fn report(traj: &Trajectory, h: &dyn Hamiltonian, cost_steps: usize) -> Result<EnergeticsReport> {
    let tau = *traj.times.last().expect("trajectory is non-empty");
    let psi_i = &traj.states[0];
    let psi_f = traj.final_state();
    let avg = time_averaged_variance(traj, h)?;
    let f = fidelity(psi_i, psi_f)?;
    let angle = angle_from_fidelity(f, AngleConvention::Arccos);
    let bound_speed = angle / tau;
    let mt_time = match mt_bound(psi_i, psi_f, avg) {
        Ok(t) => t,
        Err(Error::Unbounded) => f64::INFINITY,
        Err(e) => return Err(e),
    };
    Ok(EnergeticsReport {
        tau,
        avg_variance: avg,
        bound_speed,
        bound_speed_doubled: 2.0 * bound_speed,
        mt_time,
        hs_cost: hs_cost(h, tau, cost_steps)?,
        saturation_ratio: if bound_speed > 0.0 {
            avg / bound_speed
        } else {
            f64::INFINITY
        },
    })
}

/// One row of the speed-resource sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub tau: f64,
    /// uncontrolled overlap fidelity with the target, `s^2`
    pub f0: f64,
    /// mean ΔH'_c on the rotating-frame geodesic
    pub vz_wind_rot: f64,
    /// mean Δ(H_0 + H_c) on the controlled lab-frame trajectory
    pub vz_wind_total: f64,
    /// mean ΔH_0 on the uncontrolled trajectory
    pub vz_free: f64,
    /// `arccos(s) / tau`
    pub bound_wind: f64,
    /// `arccos|<psi_i|psi_f>| / tau`, the lab-frame angle the total H covers
    pub bound_lab: f64,
    /// `arccos|<psi_i|U_0(tau) psi_i>| / tau`
    pub bound_free: f64,
    pub ratio_wind_rot: f64,
    pub ratio_wind_total: f64,
    pub ratio_free: f64,
    pub final_fidelity_wind: f64,
}

impl SweepRow {
    pub fn saturated_rot(&self) -> bool {
        (self.ratio_wind_rot - 1.0).abs() <= SATURATION_TOL
    }

    pub fn saturated_total(&self) -> bool {
        (self.ratio_wind_total - 1.0).abs() <= SATURATION_TOL
    }

    pub fn saturated_free(&self) -> bool {
        (self.ratio_free - 1.0).abs() <= SATURATION_TOL
    }
}

fn ratio(speed: f64, bound: f64) -> f64 {
    if bound > 0.0 {
        speed / bound
    } else if speed > 0.0 {
        f64::INFINITY
    } else {
        1.0
    }
}

/// Mean rotating-frame control spread along the geodesic.
fn geodesic_speed(wc: &wind::WindControl, samples: usize) -> Result<f64> {
    let hc = wind::control_hamiltonian_rot(0.0, wc)?;
    let times: Vec<f64> = (0..=samples)
        .map(|k| wc.tau * k as f64 / samples as f64)
        .collect();
    let spreads = times
        .iter()
        .map(|t| energy_spread(&hc, &wind::geodesic_state(*t, wc)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(trapezoid(&times, &spreads) / wc.tau)
}

/// Compares wind-controlled and free evolution over a list of durations.
/// `steps` overrides the default step rule for every row.
pub fn speed_resource_sweep(
    params: &ModelParams,
    psi_i: &QuantumState,
    psi_f: &QuantumState,
    taus: &[f64],
    steps: Option<usize>,
) -> Result<Vec<SweepRow>> {
    let lab_angle = angle_from_fidelity(fidelity(psi_i, psi_f)?, AngleConvention::Arccos);
    taus.par_iter()
        .map(|&tau| {
            let p = params.with_drive(params.drive.with_tau(tau))?;
            let k = steps.unwrap_or_else(|| propagator::default_steps(tau));
            let free = propagator::evolve(&p, psi_i, tau, k)?;
            let vz_free = time_averaged_variance(&free, &p)?;
            let bound_free = angle_from_fidelity(
                fidelity(psi_i, free.final_state())?,
                AngleConvention::Arccos,
            ) / tau;

            let wc = wind::synthesize(&p, psi_i, psi_f, tau, k)?;
            let controlled = wind::evolve_controlled(&p, &wc, &propagator::StepOptions::new(k))?;
            let total = wind::WindHamiltonian {
                h0: &p,
                control: &wc,
            };
            let vz_wind_total = time_averaged_variance(&controlled, &total)?;
            let vz_wind_rot = geodesic_speed(&wc, 200)?;
            let bound_wind = wc.s.min(1.0).acos() / tau;
            let bound_lab = lab_angle / tau;
            Ok(SweepRow {
                tau,
                f0: wc.f0(),
                vz_wind_rot,
                vz_wind_total,
                vz_free,
                bound_wind,
                bound_lab,
                bound_free,
                ratio_wind_rot: ratio(vz_wind_rot, bound_wind),
                ratio_wind_total: ratio(vz_wind_total, bound_lab),
                ratio_free: ratio(vz_free, bound_free),
                final_fidelity_wind: fidelity(controlled.final_state(), psi_f)?,
            })
        })
        .collect()
}

/// CSV layout of the sweep, including doubled-angle bounds and saturation flags.
pub fn sweep_table(rows: &[SweepRow]) -> Table {
    let mut table = Table::new([
        "tau",
        "F0",
        "vz_wind_rot",
        "vz_wind_total",
        "vz_free",
        "bound_wind",
        "bound_wind_doubled",
        "bound_lab",
        "bound_free",
        "bound_free_doubled",
        "ratio_wind_rot",
        "ratio_wind_total",
        "ratio_free",
        "saturated_rot",
        "saturated_total",
        "saturated_free",
        "F_wind",
    ]);
    let flag = |b: bool| if b { 1.0 } else { 0.0 };
    for r in rows {
        table
            .push(vec![
                r.tau,
                r.f0,
                r.vz_wind_rot,
                r.vz_wind_total,
                r.vz_free,
                r.bound_wind,
                2.0 * r.bound_wind,
                r.bound_lab,
                r.bound_free,
                2.0 * r.bound_free,
                r.ratio_wind_rot,
                r.ratio_wind_total,
                r.ratio_free,
                flag(r.saturated_rot()),
                flag(r.saturated_total()),
                flag(r.saturated_free()),
                r.final_fidelity_wind,
            ])
            .expect("row width matches header");
    }
    table
}
