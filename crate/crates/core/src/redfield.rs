// Copyright 2026 windctl contributors
// SPDX-License-Identifier: Apache-2.0

//! Bloch-Redfield dynamics with partial secularization and thermal rates.
//!
//! In the instantaneous eigenbasis `H = Σ E_a |a><a|`, with `A` the coupling
//! operators in that basis and `ω_ij = E_i - E_j`,
//!
//! ```text
//! R_abcd = 1/2 Σ_α [ A_ac A_db (S(ω_ca) + S(ω_db))
//!                    - δ_bd Σ_n A_an A_nc S(ω_cn)
//!                    - δ_ac Σ_n A_dn A_nb S(ω_dn) ]
//! ```
//!
//! and a term survives secularization when `|ω_ab - ω_cd| <= cutoff`.
//! No Lamb shift is included.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use crate::density::DensityOperator;
use crate::error::{Error, Result};
use crate::hilbert::{check_dims, CompositeSpace, QuantumState};
use crate::linalg::{self, CMatrix, ZERO};
use crate::models::{Hamiltonian, ModelParams};
use crate::propagator;
use crate::table::Table;
use crate::wind;

/// Bohr frequencies closer than this are treated as equal.
const FREQ_TOL: f64 = 1e-10;
/// Most negative eigenvalue tolerated before the positivity monitor warns.
pub const POSITIVITY_FLOOR: f64 = -1e-3;
pub const DEFAULT_SECULAR_CUTOFF: f64 = 0.1;
/// Lowest frequency at which the Bose factor is evaluated.
pub const DEFAULT_THERMAL_FLOOR: f64 = 0.1;

fn default_cutoff() -> f64 {
    DEFAULT_SECULAR_CUTOFF
}

fn default_floor() -> f64 {
    DEFAULT_THERMAL_FLOOR
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathSpec {
    #[serde(default)]
    pub gamma_c: f64,
    #[serde(default)]
    pub gamma_q: f64,
    #[serde(default)]
    pub gamma_phi: f64,
    #[serde(default)]
    pub temperature: f64,
    /// `f64::INFINITY` keeps every term.
    #[serde(default = "default_cutoff")]
    pub secular_cutoff: f64,
    /// `n̄(ω)` is evaluated at `max(|ω|, thermal_floor)`. A flat spectrum
    /// otherwise gives rates `~ γT/|ω|` at near-degenerate levels.
    #[serde(default = "default_floor")]
    pub thermal_floor: f64,
}

impl Default for BathSpec {
    fn default() -> Self {
        BathSpec {
            gamma_c: 0.0,
            gamma_q: 0.0,
            gamma_phi: 0.0,
            temperature: 0.0,
            secular_cutoff: DEFAULT_SECULAR_CUTOFF,
            thermal_floor: DEFAULT_THERMAL_FLOOR,
        }
    }
}

impl BathSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("gamma_c", self.gamma_c),
            ("gamma_q", self.gamma_q),
            ("gamma_phi", self.gamma_phi),
            ("temperature", self.temperature),
            ("thermal_floor", self.thermal_floor),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::out_of_range(name, v, "[0, inf)"));
            }
        }
        if self.secular_cutoff.is_nan() || self.secular_cutoff < 0.0 {
            return Err(Error::out_of_range(
                "secular_cutoff",
                self.secular_cutoff,
                "[0, inf]",
            ));
        }
        Ok(())
    }
}

/// Bose-Einstein occupation `1 / (e^{ω/T} - 1)`, zero at `T = 0`.
pub fn bose_einstein(omega: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        0.0
    } else {
        1.0 / (omega / temperature).exp_m1()
    }
}

/// Flat-spectrum thermal rate: emission `γ(n̄+1)` for `ω > 0`, absorption
/// `γ n̄(|ω|)` for `ω < 0`, and `γ` at zero frequency.
pub fn bath_rate(omega: f64, gamma: f64, temperature: f64) -> Result<f64> {
    bath_rate_floored(omega, gamma, temperature, 0.0)
}

/// [`bath_rate`] with the Bose factor frozen below `floor`.
pub fn bath_rate_floored(omega: f64, gamma: f64, temperature: f64, floor: f64) -> Result<f64> {
    if !(gamma >= 0.0) {
        return Err(Error::out_of_range("gamma", gamma, "[0, inf)"));
    }
    if !(temperature >= 0.0) {
        return Err(Error::out_of_range("temperature", temperature, "[0, inf)"));
    }
    let nbar = bose_einstein(omega.abs().max(floor), temperature);
    Ok(if omega.abs() < FREQ_TOL {
        gamma
    } else if omega > 0.0 {
        gamma * (nbar + 1.0)
    } else {
        gamma * nbar
    })
}

/// A coupling operator with its rate.
#[derive(Debug, Clone)]
pub struct Channel {
    pub name: &'static str,
    pub gamma: f64,
    pub op: CMatrix,
}

/// `{Γ_c: a + a^dag, Γ_q: σ_x, Γ_φ: σ_z}`, skipping zero rates.
pub fn bath_channels(bath: &BathSpec, space: &CompositeSpace) -> Vec<Channel> {
    [
        ("cavity", bath.gamma_c, space.quadrature.matrix()),
        ("qubit", bath.gamma_q, space.sigma_x.matrix()),
        ("dephasing", bath.gamma_phi, space.sigma_z.matrix()),
    ]
    .into_iter()
    .filter(|(_, g, _)| *g > 0.0)
    .map(|(name, gamma, op)| Channel {
        name,
        gamma,
        op: op.clone(),
    })
    .collect()
}

#[derive(Debug, Clone)]
enum Dissipator {
    None,
    /// cutoff = inf: `(A∘S_in) r A + A r (A∘S_out)` per channel
    Separable(Vec<(CMatrix, CMatrix, CMatrix)>),
    /// `(ab, cd, coef)` entries of the secular-windowed first term, with
    /// `ab = a*d + b`
    Windowed(Vec<(usize, usize, Complex64)>),
}

/// The master-equation generator at one instant.
#[derive(Debug, Clone)]
pub struct RedfieldGenerator {
    h: CMatrix,
    basis: CMatrix,
    energies: Vec<f64>,
    /// `-1/2 (X∘M)` and `-1/2 (Y∘M)` of the two delta terms
    left: CMatrix,
    right: CMatrix,
    first: Dissipator,
}

impl RedfieldGenerator {
    pub fn dim(&self) -> usize {
        self.h.nrows()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// `L(rho) = -i[H, rho] + V R(V^dag rho V) V^dag`.
    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        let mut out = (&self.h * rho - rho * &self.h) * Complex64::new(0.0, -1.0);
        if matches!(self.first, Dissipator::None) {
            return out;
        }
        let v = &self.basis;
        let r = v.adjoint() * rho * v;
        let mut dr = &self.left * &r + &r * &self.right;
        match &self.first {
            Dissipator::None => {}
            Dissipator::Separable(terms) => {
                for (a, a_in, a_out) in terms {
                    dr += a_in * &r * a + a * &r * a_out;
                }
            }
            Dissipator::Windowed(entries) => {
                let d = self.dim();
                for &(ab, cd, coef) in entries {
                    dr[(ab / d, ab % d)] += coef * r[(cd / d, cd % d)];
                }
            }
        }
        out += v * dr * v.adjoint();
        out
    }

    /// Dense `d^2 x d^2` matrix of the generator acting on row-major `vec(rho)`.
    pub fn to_matrix(&self) -> CMatrix {
        let d = self.dim();
        let mut m = CMatrix::zeros(d * d, d * d);
        for j in 0..d * d {
            let mut e = CMatrix::zeros(d, d);
            e[(j / d, j % d)] = Complex64::new(1.0, 0.0);
            let col = self.apply(&e);
            for i in 0..d * d {
                m[(i, j)] = col[(i / d, i % d)];
            }
        }
        m
    }
}

fn within(cutoff: f64, gap: f64) -> bool {
    gap.abs() <= cutoff + FREQ_TOL
}

/// Builds the generator for the Hamiltonian `h` and the given channels.
pub fn redfield_generator(
    h: &CMatrix,
    channels: &[Channel],
    bath: &BathSpec,
) -> Result<RedfieldGenerator> {
    bath.validate()?;
    let d = h.nrows();
    let defect = linalg::hermiticity_defect(h);
    if defect > 1e-12 {
        return Err(Error::NotHermitian { defect });
    }
    for ch in channels {
        check_dims(d, ch.op.nrows())?;
    }
    if channels.is_empty() {
        return Ok(RedfieldGenerator {
            h: h.clone(),
            basis: CMatrix::identity(d, d),
            energies: Vec::new(),
            left: CMatrix::zeros(d, d),
            right: CMatrix::zeros(d, d),
            first: Dissipator::None,
        });
    }
    let (energies, basis) = linalg::hermitian_eigen(h);
    for w in energies.windows(2) {
        if w[1] - w[0] < FREQ_TOL {
            log::debug!("degenerate instantaneous spectrum near E = {}", w[0]);
        }
    }
    let cut = bath.secular_cutoff;
    let t = bath.temperature;
    let infinite = cut.is_infinite();

    // rate[c][a] = S(E_c - E_a) per channel
    let coupled: Vec<(CMatrix, CMatrix)> = channels
        .iter()
        .map(|ch| {
            let a = basis.adjoint() * &ch.op * &basis;
            let s = CMatrix::from_fn(d, d, |i, j| {
                Complex64::new(
                    bath_rate_floored(energies[i] - energies[j], ch.gamma, t, bath.thermal_floor)
                        .expect("validated bath"),
                    0.0,
                )
            });
            (a, s)
        })
        .collect();

    let mut left = CMatrix::zeros(d, d);
    let mut right = CMatrix::zeros(d, d);
    for (a, s) in &coupled {
        // X_ac = Σ_n A_an A_nc S(ω_cn); Y_db = Σ_n A_dn A_nb S(ω_dn)
        let x = a * a.component_mul(&s.transpose());
        let y = a.component_mul(s) * a;
        left -= x * Complex64::new(0.5, 0.0);
        right -= y * Complex64::new(0.5, 0.0);
    }
    if !infinite {
        for i in 0..d {
            for j in 0..d {
                if !within(cut, energies[i] - energies[j]) {
                    left[(i, j)] = ZERO;
                    right[(i, j)] = ZERO;
                }
            }
        }
    }

    let first = if infinite {
        Dissipator::Separable(
            coupled
                .iter()
                .map(|(a, s)| {
                    // (A∘S_in)_ac = A_ac S(ω_ca); (A∘S_out)_db = A_db S(ω_db)
                    let a_in = a.component_mul(&s.transpose()) * Complex64::new(0.5, 0.0);
                    let a_out = a.component_mul(s) * Complex64::new(0.5, 0.0);
                    (a.clone(), a_in, a_out)
                })
                .collect(),
        )
    } else {
        let mut pairs: Vec<(f64, usize)> = (0..d * d)
            .map(|p| (energies[p / d] - energies[p % d], p))
            .collect();
        pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut entries = Vec::new();
        for ab in 0..d * d {
            let (a, b) = (ab / d, ab % d);
            let w = energies[a] - energies[b];
            let lo = pairs.partition_point(|p| p.0 < w - cut - FREQ_TOL);
            for &(wcd, cd) in &pairs[lo..] {
                if wcd > w + cut + FREQ_TOL {
                    break;
                }
                let (c, dd) = (cd / d, cd % d);
                let mut coef = ZERO;
                for (am, s) in &coupled {
                    coef += am[(a, c)] * am[(dd, b)] * (s[(c, a)] + s[(dd, b)]);
                }
                if coef != ZERO {
                    entries.push((ab, cd, coef * 0.5));
                }
            }
        }
        Dissipator::Windowed(entries)
    };

    Ok(RedfieldGenerator {
        h: h.clone(),
        basis,
        energies,
        left,
        right,
        first,
    })
}

/// Output of an open-system run.
#[derive(Debug, Clone)]
pub struct OpenTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityOperator>,
    /// smallest eigenvalue seen at any stored time
    pub min_eigenvalue: f64,
    /// largest `|Tr rho - 1|` over the run
    pub trace_drift: f64,
    pub positivity_violated: bool,
}

impl OpenTrajectory {
    pub fn final_state(&self) -> &DensityOperator {
        self.states.last().expect("trajectory holds rho0")
    }
}

/// Fixed-step RK4 of the Redfield equation; `H` is sampled at `t`,
/// `t + dt/2` and `t + dt` and the generator is rebuilt at each sample.
pub fn evolve_open(
    rho0: &DensityOperator,
    h: &dyn Hamiltonian,
    bath: &BathSpec,
    space: &CompositeSpace,
    tau: f64,
    steps: usize,
    decimation: usize,
) -> Result<OpenTrajectory> {
    bath.validate()?;
    check_dims(h.dim(), rho0.dim())?;
    if steps == 0 || !(tau > 0.0) {
        return Err(Error::InvalidArgument(
            "open evolution needs tau > 0 and steps >= 1".into(),
        ));
    }
    let rho0 = DensityOperator::new(rho0.matrix().clone())?;
    let channels = bath_channels(bath, space);
    let build = |t: f64| -> Result<RedfieldGenerator> {
        let op = propagator::sample(h, t)?;
        redfield_generator(op.matrix(), &channels, bath)
    };
    let every = decimation.max(1);
    let dt = tau / steps as f64;
    let half = Complex64::new(dt / 2.0, 0.0);
    let full = Complex64::new(dt, 0.0);
    let sixth = Complex64::new(dt / 6.0, 0.0);
    let two = Complex64::new(2.0, 0.0);

    let mut rho = rho0.matrix().clone();
    let mut times = vec![0.0];
    let mut states = vec![rho0.clone()];
    let mut min_eig = rho0.min_eigenvalue();
    let mut drift: f64 = 0.0;
    let mut gen_start = build(0.0)?;
    for k in 0..steps {
        let t = k as f64 * dt;
        let gen_mid = build(t + dt / 2.0)?;
        let gen_end = build(if k + 1 == steps { tau } else { t + dt })?;
        let k1 = gen_start.apply(&rho);
        let k2 = gen_mid.apply(&(&rho + &k1 * half));
        let k3 = gen_mid.apply(&(&rho + &k2 * half));
        let k4 = gen_end.apply(&(&rho + &k3 * full));
        rho += (k1 + (k2 + k3) * two + k4) * sixth;
        let adj = rho.adjoint();
        rho = (&rho + adj) * Complex64::new(0.5, 0.0);
        drift = drift.max((rho.trace().re - 1.0).abs());
        gen_start = gen_end;

        let idx = k + 1;
        if idx % every == 0 || idx == steps {
            let state = DensityOperator::from_matrix_unchecked(rho.clone());
            min_eig = min_eig.min(state.min_eigenvalue());
            times.push(if idx == steps { tau } else { idx as f64 * dt });
            states.push(state);
        }
    }
    let positivity_violated = min_eig < POSITIVITY_FLOOR;
    if positivity_violated {
        log::warn!("Redfield evolution lost positivity: min eigenvalue {min_eig:e}");
    }
    Ok(OpenTrajectory {
        times,
        states,
        min_eigenvalue: min_eig,
        trace_drift: drift,
        positivity_violated,
    })
}

/// Which channels carry the swept rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelConfig {
    /// `Γ_φ = Γ_q = Γ_c = Γ`
    AllEqual,
    DephasingOnly,
    QubitOnly,
    CavityOnly,
}

impl ChannelConfig {
    pub const ALL: [ChannelConfig; 4] = [
        ChannelConfig::AllEqual,
        ChannelConfig::DephasingOnly,
        ChannelConfig::QubitOnly,
        ChannelConfig::CavityOnly,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ChannelConfig::AllEqual => "all_equal",
            ChannelConfig::DephasingOnly => "dephasing_only",
            ChannelConfig::QubitOnly => "qubit_only",
            ChannelConfig::CavityOnly => "cavity_only",
        }
    }

    pub fn index(self) -> usize {
        ChannelConfig::ALL
            .iter()
            .position(|c| *c == self)
            .expect("listed")
    }

    pub fn bath(self, gamma: f64, temperature: f64, secular_cutoff: f64) -> BathSpec {
        let (c, q, phi) = match self {
            ChannelConfig::AllEqual => (gamma, gamma, gamma),
            ChannelConfig::DephasingOnly => (0.0, 0.0, gamma),
            ChannelConfig::QubitOnly => (0.0, gamma, 0.0),
            ChannelConfig::CavityOnly => (gamma, 0.0, 0.0),
        };
        BathSpec {
            gamma_c: c,
            gamma_q: q,
            gamma_phi: phi,
            temperature,
            secular_cutoff,
            ..BathSpec::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobustnessRow {
    pub channels: ChannelConfig,
    pub gamma: f64,
    pub temperature: f64,
    pub infidelity: f64,
    pub min_eigenvalue: f64,
    pub trace_drift: f64,
}

/// Settings shared by every cell of a robustness sweep.
#[derive(Debug, Clone)]
pub struct RobustnessSpec<'a> {
    pub params: &'a ModelParams,
    pub psi_i: &'a QuantumState,
    pub psi_f: &'a QuantumState,
    pub steps: usize,
    pub secular_cutoff: f64,
    pub thermal_floor: f64,
}

/// Infidelity `1 - <psi_f|rho(tau)|psi_f>` of the wind-controlled protocol
/// over channel configurations, rates and temperatures. The control is the
/// closed-system one.
pub fn robustness_sweep(
    spec: &RobustnessSpec<'_>,
    gammas: &[f64],
    temperatures: &[f64],
    configs: &[ChannelConfig],
) -> Result<Vec<RobustnessRow>> {
    let p = spec.params;
    let tau = p.tau();
    let wc = wind::synthesize(p, spec.psi_i, spec.psi_f, tau, spec.steps)?;
    let total = wind::WindHamiltonian { h0: p, control: &wc };
    let rho0 = DensityOperator::from_pure(spec.psi_i);
    let mut cells = Vec::new();
    for &c in configs {
        for &g in gammas {
            for &t in temperatures {
                cells.push((c, g, t));
            }
        }
    }
    cells
        .par_iter()
        .map(|&(channels, gamma, temperature)| {
            let bath = BathSpec {
                thermal_floor: spec.thermal_floor,
                ..channels.bath(gamma, temperature, spec.secular_cutoff)
            };
            let run = evolve_open(&rho0, &total, &bath, &p.space, tau, spec.steps, spec.steps)?;
            Ok(RobustnessRow {
                channels,
                gamma,
                temperature,
                infidelity: 1.0 - run.final_state().fidelity_pure(spec.psi_f)?,
                min_eigenvalue: run.min_eigenvalue,
                trace_drift: run.trace_drift,
            })
        })
        .collect()
}

/// CSV layout `(channels, gamma, T, infidelity, min_eigenvalue, trace_drift)`;
/// channels are encoded by their index in [`ChannelConfig::ALL`].
pub fn robustness_table(rows: &[RobustnessRow]) -> Table {
    let mut table = Table::new([
        "channels",
        "gamma",
        "T",
        "infidelity",
        "min_eigenvalue",
        "trace_drift",
    ]);
    for r in rows {
        table
            .push(vec![
                r.channels.index() as f64,
                r.gamma,
                r.temperature,
                r.infidelity,
                r.min_eigenvalue,
                r.trace_drift,
            ])
            .expect("row width matches header");
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{build_composite, Operator, Qubit};
    use crate::linalg::max_abs;
    use crate::models::ConstantHamiltonian;

    #[test]
    fn rate_examples() {
        assert_eq!(bath_rate(0.7, 0.2, 0.0).unwrap(), 0.2);
        assert_eq!(bath_rate(-0.7, 0.2, 0.0).unwrap(), 0.0);
        let up = bath_rate(0.5, 1.0, 1.0).unwrap();
        let down = bath_rate(-0.5, 1.0, 1.0).unwrap();
        assert!((up / down - 0.5f64.exp()).abs() < 1e-12);
        assert_eq!(bath_rate(0.0, 0.3, 2.0).unwrap(), 0.3);
        assert!(bath_rate(1.0, -0.1, 0.0).is_err());
        let capped = bath_rate_floored(1e-6, 1.0, 1.0, 0.1).unwrap();
        assert!((capped - (bose_einstein(0.1, 1.0) + 1.0)).abs() < 1e-12);
        assert_eq!(bath_rate_floored(2.0, 1.0, 1.0, 0.1).unwrap(), bath_rate(2.0, 1.0, 1.0).unwrap());
    }

    fn qubit_space_h(wq: f64, space: &CompositeSpace) -> CMatrix {
        space.sigma_z.matrix() * Complex64::new(wq / 2.0, 0.0)
    }

    fn random_rho(d: usize, seed: u64) -> CMatrix {
        let mut x = seed;
        let mut next = || {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((x >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let g = CMatrix::from_fn(d, d, |_, _| Complex64::new(next(), next()));
        let m = &g * g.adjoint();
        let tr = m.trace();
        m / tr
    }

    #[test]
    fn closed_limit_is_a_commutator() {
        let s = build_composite(3).unwrap();
        let h = s.number.matrix() + s.sigma_x.matrix() * s.quadrature.matrix();
        let gen = redfield_generator(&h, &[], &BathSpec::default()).unwrap();
        let rho = random_rho(6, 3);
        let expect = (&h * &rho - &rho * &h) * Complex64::new(0.0, -1.0);
        assert!(max_abs(&(gen.apply(&rho) - expect)) < 1e-14);
    }

    #[test]
    fn trace_is_preserved_for_every_cutoff() {
        let s = build_composite(4).unwrap();
        let h = s.number.matrix()
            + qubit_space_h(0.7, &s)
            + s.sigma_x.matrix() * s.quadrature.matrix() * Complex64::new(0.3, 0.0);
        for cutoff in [0.0, 0.1, 1.0, f64::INFINITY] {
            let bath = BathSpec {
                gamma_c: 0.2,
                gamma_q: 0.1,
                gamma_phi: 0.05,
                temperature: 0.8,
                secular_cutoff: cutoff,
                ..BathSpec::default()
            };
            let gen = redfield_generator(&h, &bath_channels(&bath, &s), &bath).unwrap();
            for seed in 0..5 {
                let out = gen.apply(&random_rho(8, seed));
                assert!(out.trace().norm() < 1e-10, "cutoff {cutoff}");
                assert!(linalg::hermiticity_defect(&out) < 1e-12);
            }
        }
    }

    #[test]
    fn large_window_matches_separable_form() {
        let s = build_composite(4).unwrap();
        let h = s.number.matrix()
            + qubit_space_h(0.4, &s)
            + s.sigma_x.matrix() * s.quadrature.matrix() * Complex64::new(0.6, 0.0);
        let base = BathSpec {
            gamma_c: 0.3,
            gamma_q: 0.2,
            gamma_phi: 0.1,
            temperature: 0.5,
            secular_cutoff: f64::INFINITY,
            ..BathSpec::default()
        };
        let windowed = BathSpec {
            secular_cutoff: 1e6,
            ..base
        };
        let ch = bath_channels(&base, &s);
        let a = redfield_generator(&h, &ch, &base).unwrap();
        let b = redfield_generator(&h, &ch, &windowed).unwrap();
        let rho = random_rho(8, 11);
        assert!(max_abs(&(a.apply(&rho) - b.apply(&rho))) < 1e-12);
        assert!(max_abs(&(a.to_matrix() - b.to_matrix())) < 1e-12);
    }

    #[test]
    fn cavity_photon_decays_at_the_channel_rate() {
        let s = build_composite(4).unwrap();
        let h = ConstantHamiltonian(Operator::hermitian(s.number.matrix().clone()).unwrap());
        let gamma = 0.2;
        let bath = BathSpec {
            gamma_c: gamma,
            ..BathSpec::default()
        };
        let psi = s.ket(Qubit::G, 1).unwrap();
        let rho0 = DensityOperator::from_pure(&psi);
        let tau = 3.0;
        let run = evolve_open(&rho0, &h, &bath, &s, tau, 600, 100).unwrap();
        for (t, rho) in run.times.iter().zip(&run.states) {
            let p1 = rho.fidelity_pure(&psi).unwrap();
            assert!((p1 - (-gamma * t).exp()).abs() < 1e-8, "t = {t}");
        }
        assert!(run.trace_drift < 1e-8);
    }

    #[test]
    fn qubit_relaxes_to_gibbs_populations() {
        let s = build_composite(2).unwrap();
        let wq = 1.0;
        let temp = 0.7;
        let h = ConstantHamiltonian(Operator::hermitian(qubit_space_h(wq, &s)).unwrap());
        let bath = BathSpec {
            gamma_q: 0.5,
            temperature: temp,
            ..BathSpec::default()
        };
        let rho0 = DensityOperator::from_pure(&s.ket(Qubit::E, 0).unwrap());
        let run = evolve_open(&rho0, &h, &bath, &s, 40.0, 2000, 2000).unwrap();
        let rho = run.final_state();
        let pe = rho.fidelity_pure(&s.ket(Qubit::E, 0).unwrap()).unwrap();
        let pg = rho.fidelity_pure(&s.ket(Qubit::G, 0).unwrap()).unwrap();
        let expect = (-wq / temp).exp();
        assert!(((pe / pg) / expect - 1.0).abs() < 0.01);
    }

    #[test]
    fn bath_validation() {
        let bad = BathSpec {
            gamma_q: -1.0,
            ..BathSpec::default()
        };
        assert!(bad.validate().is_err());
        let cfg = ChannelConfig::QubitOnly.bath(0.1, 0.0, 0.1);
        assert_eq!((cfg.gamma_c, cfg.gamma_q, cfg.gamma_phi), (0.0, 0.1, 0.0));
    }
}
