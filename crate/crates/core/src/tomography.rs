// Copyright 2026 windctl contributors
// SPDX-License-Identifier: Apache-2.0

//! Joint qubit-cavity Wigner functions `W_i(beta) = (2/pi) <σ_i ⊗ P_beta>`.
//!
//! Grid evaluation uses `D(beta) Π D^dag(beta) = D(2 beta) Π` together with
//! the closed-form Fock matrix elements of the untruncated displacement
//!
//! `<m|D(a)|n> = sqrt(n!/m!) a^(m-n) e^(-|a|^2/2) L_n^(m-n)(|a|^2)`, `m >= n`,
//!
//! so points far outside the truncation-safe disc are still exact for the
//! given (truncated) state.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::DensityOperator;
use crate::error::{Error, Result};
use crate::hilbert::{
    check_dims, displacement, pauli, CavitySpace, CompositeSpace, Operator, PauliLabel,
    QuantumState, Qubit,
};
use crate::linalg::{CMatrix, CVector, ZERO};
use crate::table::Table;

/// `|W_i| <= 2/pi`, with this much slack.
pub const WIGNER_BOUND_SLACK: f64 = 1e-9;

/// `D(beta) Π D^dag(beta)` on the truncated cavity, guarded by
/// `|beta|^2 <= n_cut/4`.
pub fn displaced_parity(beta: Complex64, cavity: &CavitySpace) -> Result<Operator> {
    let limit = cavity.n_cut() as f64 / 4.0;
    if beta.norm_sqr() > limit {
        return Err(Error::out_of_range(
            "|beta|",
            beta.norm(),
            format!("|beta|^2 <= n_cut/4 = {limit}"),
        ));
    }
    let d = displacement(beta, cavity);
    let p = d.matrix() * cavity.parity.matrix() * d.matrix().adjoint();
    Operator::hermitian_from_upper(p)
}

/// `<m|D(alpha)|n>` for `m, n < size`, without truncating the mode.
pub fn fock_displacement_matrix(alpha: Complex64, size: usize) -> CMatrix {
    let mut d = CMatrix::from_element(size, size, ZERO);
    let x = alpha.norm_sqr();
    // m >= n uses alpha; m < n uses -alpha^*, with the roles of m, n swapped
    fill_band(&mut d, alpha, x, false);
    fill_band(&mut d, -alpha.conj(), x, true);
    d
}

fn fill_band(d: &mut CMatrix, a: Complex64, x: f64, upper: bool) {
    let size = d.nrows();
    let r = a.norm();
    let phase = if r > 0.0 { a / r } else { Complex64::new(1.0, 0.0) };
    let first_k = usize::from(upper);
    let mut ln_fact = vec![0.0f64; size + 1];
    for j in 1..=size {
        ln_fact[j] = ln_fact[j - 1] + (j as f64).ln();
    }
    #[allow(clippy::needless_range_loop)]
    for k in first_k..size {
        // p_n = sqrt(n!/(n+k)!) r^k e^{-x/2}
        let ln_p0 = if k == 0 {
            -x / 2.0
        } else if r == 0.0 {
            f64::NEG_INFINITY
        } else {
            k as f64 * r.ln() - 0.5 * ln_fact[k] - x / 2.0
        };
        let mut p = ln_p0.exp();
        let ph = phase.powu(k as u32);
        let kf = k as f64;
        let (mut l_prev, mut l) = (0.0, 1.0);
        for n in 0..size - k {
            let (row, col) = if upper { (n, n + k) } else { (n + k, n) };
            d[(row, col)] = ph * (p * l);
            let nf = n as f64;
            let next = ((2.0 * nf + 1.0 + kf - x) * l - (nf + kf) * l_prev) / (nf + 1.0);
            l_prev = l;
            l = next;
            p *= ((nf + 1.0) / (nf + kf + 1.0)).sqrt();
        }
    }
}

/// A pure state or a mixture to be characterized.
#[derive(Debug, Clone, Copy)]
pub enum StateRef<'a> {
    Pure(&'a QuantumState),
    Mixed(&'a DensityOperator),
}

impl<'a> From<&'a QuantumState> for StateRef<'a> {
    fn from(s: &'a QuantumState) -> Self {
        StateRef::Pure(s)
    }
}

impl<'a> From<&'a DensityOperator> for StateRef<'a> {
    fn from(s: &'a DensityOperator) -> Self {
        StateRef::Mixed(s)
    }
}

/// Weighted cavity components `(p, psi_g, psi_e)` of each pure term.
struct Components {
    terms: Vec<(f64, CVector, CVector)>,
}

impl Components {
    fn new(state: StateRef<'_>, space: &CompositeSpace) -> Result<Self> {
        let split = |v: &CVector| {
            (
                space.cavity_component(v, Qubit::G),
                space.cavity_component(v, Qubit::E),
            )
        };
        let terms = match state {
            StateRef::Pure(psi) => {
                check_dims(space.dim(), psi.dim())?;
                let (g, e) = split(psi.amplitudes());
                vec![(1.0, g, e)]
            }
            StateRef::Mixed(rho) => {
                check_dims(space.dim(), rho.dim())?;
                let physical = DensityOperator::new(rho.matrix().clone())?;
                physical
                    .pure_components()
                    .into_iter()
                    .map(|(p, v)| {
                        let (g, e) = split(&v);
                        (p, g, e)
                    })
                    .collect()
            }
        };
        Ok(Components { terms })
    }

    /// `G[q][q'] = sum_k p_k <psi_q| D(2 beta) Π |psi_q'>`.
    fn parity_gram(&self, beta: Complex64) -> [[Complex64; 2]; 2] {
        let size = self.terms[0].1.len();
        let d = fock_displacement_matrix(beta * 2.0, size);
        let mut gram = [[ZERO; 2]; 2];
        for (p, g, e) in &self.terms {
            let comps = [g, e];
            let images: Vec<CVector> = comps
                .iter()
                .map(|v| {
                    let flipped = CVector::from_iterator(
                        size,
                        v.iter().enumerate().map(|(n, z)| if n % 2 == 0 { *z } else { -z }),
                    );
                    &d * flipped
                })
                .collect();
            for (q, bra) in comps.iter().enumerate() {
                for (qp, ket) in images.iter().enumerate() {
                    gram[q][qp] += bra.dotc(ket) * *p;
                }
            }
        }
        gram
    }
}

fn contract(gram: &[[Complex64; 2]; 2], label: PauliLabel) -> Complex64 {
    let s = pauli(label);
    let mut acc = ZERO;
    for (q, row) in gram.iter().enumerate() {
        for (qp, g) in row.iter().enumerate() {
            acc += s[(q, qp)] * g;
        }
    }
    acc * (2.0 / PI)
}

/// `(2/pi) Tr[rho (σ_i ⊗ P_beta)]`.
pub fn joint_wigner(
    state: StateRef<'_>,
    beta: Complex64,
    label: PauliLabel,
    space: &CompositeSpace,
) -> Result<f64> {
    let comps = Components::new(state, space)?;
    let w = contract(&comps.parity_gram(beta), label);
    if w.im.abs() > 1e-10 {
        return Err(Error::NonPhysical(format!(
            "Wigner value has imaginary part {:e}",
            w.im
        )));
    }
    Ok(w.re)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub step: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            re_min: -5.0,
            re_max: 5.0,
            im_min: -5.0,
            im_max: 5.0,
            step: 0.05,
        }
    }
}

impl GridSpec {
    pub fn square(half_width: f64, step: f64) -> Self {
        GridSpec {
            re_min: -half_width,
            re_max: half_width,
            im_min: -half_width,
            im_max: half_width,
            step,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.re_min, self.re_max, self.im_min, self.im_max, self.step]
            .iter()
            .all(|v| v.is_finite());
        if !finite || self.step <= 0.0 || self.re_max < self.re_min || self.im_max < self.im_min {
            return Err(Error::InvalidArgument(format!("malformed grid {self:?}")));
        }
        Ok(())
    }

    fn axis(lo: f64, hi: f64, step: f64) -> Vec<f64> {
        let n = ((hi - lo) / step + 1e-9).floor() as usize + 1;
        (0..n).map(|k| lo + k as f64 * step).collect()
    }

    pub fn re_axis(&self) -> Vec<f64> {
        Self::axis(self.re_min, self.re_max, self.step)
    }

    pub fn im_axis(&self) -> Vec<f64> {
        Self::axis(self.im_min, self.im_max, self.step)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    pub spec: GridSpec,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
    pub labels: Vec<PauliLabel>,
    /// `values[l][j * re.len() + i]` at `beta = re[i] + i im[j]`
    pub values: Vec<Vec<f64>>,
    /// `<a^dag a>` of the characterized state.
    pub mean_photon: f64,
}

impl WignerGrid {
    pub fn label_values(&self, label: PauliLabel) -> Option<&[f64]> {
        let idx = self.labels.iter().position(|l| *l == label)?;
        Some(&self.values[idx])
    }

    pub fn at(&self, label: PauliLabel, i: usize, j: usize) -> Option<f64> {
        self.label_values(label)?.get(j * self.re.len() + i).copied()
    }

    pub fn min_max(&self, label: PauliLabel) -> Option<(f64, f64)> {
        let v = self.label_values(label)?;
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Some((lo, hi))
    }
}

pub fn wigner_grid(
    state: StateRef<'_>,
    spec: &GridSpec,
    labels: &[PauliLabel],
    space: &CompositeSpace,
) -> Result<WignerGrid> {
    spec.validate()?;
    if labels.is_empty() {
        return Err(Error::InvalidArgument("no Pauli labels requested".into()));
    }
    let comps = Components::new(state, space)?;
    let re = spec.re_axis();
    let im = spec.im_axis();
    let rows: Vec<Vec<Vec<f64>>> = im
        .par_iter()
        .map(|&y| {
            re.iter()
                .map(|&x| {
                    let gram = comps.parity_gram(Complex64::new(x, y));
                    labels.iter().map(|l| contract(&gram, *l).re).collect()
                })
                .collect()
        })
        .collect();
    let mut values = vec![Vec::with_capacity(re.len() * im.len()); labels.len()];
    for row in rows {
        for point in row {
            for (l, v) in point.into_iter().enumerate() {
                values[l].push(v);
            }
        }
    }
    let mean_photon = comps
        .terms
        .iter()
        .map(|(p, g, e)| {
            let occ: f64 = g
                .iter()
                .chain(e.iter())
                .enumerate()
                .map(|(k, z)| (k % g.len()) as f64 * z.norm_sqr())
                .sum();
            p * occ
        })
        .sum();
    Ok(WignerGrid {
        spec: *spec,
        re,
        im,
        labels: labels.to_vec(),
        values,
        mean_photon,
    })
}

/// Riemann sum `∫ W_i d^2 beta`, which equals `<σ_i>` (1 for the identity)
/// when the grid covers the state.
pub fn wigner_moment_check(grid: &WignerGrid, label: PauliLabel) -> Result<f64> {
    let v = grid
        .label_values(label)
        .ok_or_else(|| Error::InvalidArgument(format!("label {} not on grid", label.name())))?;
    let s = &grid.spec;
    let reach = [s.re_min.abs(), s.re_max.abs(), s.im_min.abs(), s.im_max.abs()]
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    // quadrature width of a coherent state is 1/2; ask for 5 of them
    let needed = grid.mean_photon.sqrt() + 2.5;
    if reach < needed {
        log::warn!(
            "Wigner grid reaches |beta| = {reach}, state needs about {needed:.2} for its moments"
        );
    }
    Ok(v.iter().sum::<f64>() * s.step * s.step)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LabelSummary {
    pub label: String,
    pub min: f64,
    pub max: f64,
    pub integral: f64,
    pub file: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WignerSidecar {
    pub grid: GridSpec,
    pub points: usize,
    pub mean_photon: f64,
    pub state: serde_json::Value,
    pub labels: Vec<LabelSummary>,
}

/// Writes `<stem>_W<label>.csv` with `(re, im, W)` rows per label and a
/// `<stem>.json` sidecar; returns every written path.
pub fn write_wigner(
    grid: &WignerGrid,
    dir: &Path,
    stem: &str,
    state_meta: serde_json::Value,
) -> std::io::Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    let mut labels = Vec::new();
    for (l, label) in grid.labels.iter().enumerate() {
        let mut table = Table::new(["re_beta", "im_beta", "W"]);
        for (j, y) in grid.im.iter().enumerate() {
            for (i, x) in grid.re.iter().enumerate() {
                let v = grid.values[l][j * grid.re.len() + i];
                table
                    .push(vec![*x, *y, v])
                    .expect("row width matches header");
            }
        }
        let name = format!("{stem}_W{}.csv", label.name());
        let path = dir.join(&name);
        table.write_csv(&path)?;
        written.push(path);
        let (min, max) = grid.min_max(*label).expect("label is on the grid");
        let integral = wigner_moment_check(grid, *label).expect("label is on the grid");
        labels.push(LabelSummary {
            label: label.name().to_string(),
            min,
            max,
            integral,
            file: name,
        });
    }
    let sidecar = WignerSidecar {
        grid: grid.spec,
        points: grid.re.len() * grid.im.len(),
        mean_photon: grid.mean_photon,
        state: state_meta,
        labels,
    };
    let path = dir.join(format!("{stem}.json"));
    let json = serde_json::to_string_pretty(&sidecar).map_err(std::io::Error::other)?;
    std::fs::write(&path, json)?;
    written.push(path);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{build_composite, expectation};
    use crate::linalg::{max_abs, ONE};
    use crate::models::giant_cat_state;

    const TWO_OVER_PI: f64 = 2.0 / PI;

    #[test]
    fn analytic_elements_match_truncated_exponential() {
        // a large truncation makes the top-left block of expm exact
        let big = CavitySpace::new(120).unwrap();
        for alpha in [Complex64::new(0.0, 0.0), Complex64::new(1.3, -0.4), Complex64::new(-2.0, 1.5)] {
            let dense = displacement(alpha, &big);
            let exact = fock_displacement_matrix(alpha, 25);
            let block = dense.matrix().view((0, 0), (25, 25));
            assert!(max_abs(&(block - &exact)) < 1e-10, "alpha {alpha}");
        }
    }

    #[test]
    fn analytic_elements_survive_large_amplitudes() {
        let d = fock_displacement_matrix(Complex64::new(9.0, 6.0), 40);
        // coherent-state amplitude for m = 0: e^{-|a|^2/2}
        assert!((d[(0, 0)].re - (-58.5f64).exp()).abs() < 1e-30);
        assert!(d.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
        assert!(d.iter().all(|z| z.norm() <= 1.0));
    }

    #[test]
    fn displaced_parity_examples() {
        let cav = CavitySpace::new(40).unwrap();
        let p0 = displaced_parity(ZERO, &cav).unwrap();
        assert!(max_abs(&(p0.matrix() - cav.parity.matrix())) < 1e-15);
        let p1 = displaced_parity(ONE, &cav).unwrap();
        let sq = p1.matrix() * p1.matrix();
        assert!(max_abs(&(sq - CMatrix::identity(40, 40))) < 1e-8);
        let coh = cav.coherent(ONE);
        let v = coh.amplitudes();
        assert!((v.dotc(&(p1.matrix() * v)).re - 1.0).abs() < 1e-8);
        assert!(displaced_parity(Complex64::new(4.0, 0.0), &cav).is_err());
    }

    #[test]
    fn ground_vacuum_values() {
        let s = build_composite(10).unwrap();
        let g0 = s.ket(Qubit::G, 0).unwrap();
        let w = |l| joint_wigner((&g0).into(), ZERO, l, &s).unwrap();
        assert!((w(PauliLabel::I) - TWO_OVER_PI).abs() < 1e-14);
        assert!((w(PauliLabel::Z) + TWO_OVER_PI).abs() < 1e-14);
        assert!(w(PauliLabel::X).abs() < 1e-14);
        assert!(w(PauliLabel::Y).abs() < 1e-14);
    }

    #[test]
    fn kernel_matches_operator_route_inside_safe_disc() {
        let s = build_composite(40).unwrap();
        let cat = giant_cat_state(1.0, 0.0, &s).unwrap();
        for beta in [Complex64::new(0.3, -0.2), Complex64::new(-1.1, 0.9), Complex64::new(2.0, 1.0)] {
            let p = displaced_parity(beta, &s.cavity).unwrap();
            for label in PauliLabel::ALL {
                let joint = Operator::hermitian_from_upper(crate::linalg::kron(&pauli(label), p.matrix()))
                    .unwrap();
                let direct = TWO_OVER_PI * expectation(&joint, &cat).unwrap().re;
                let fast = joint_wigner((&cat).into(), beta, label, &s).unwrap();
                assert!((direct - fast).abs() < 1e-10, "{label:?} at {beta}");
            }
        }
    }

    #[test]
    fn mixed_state_is_weighted_sum() {
        let s = build_composite(6).unwrap();
        let a = s.ket(Qubit::G, 0).unwrap();
        let b = s.ket(Qubit::E, 1).unwrap();
        let m = (DensityOperator::from_pure(&a).matrix() + DensityOperator::from_pure(&b).matrix())
            * Complex64::new(0.5, 0.0);
        let rho = DensityOperator::new(m).unwrap();
        let beta = Complex64::new(0.4, 0.2);
        for label in PauliLabel::ALL {
            let mix = joint_wigner((&rho).into(), beta, label, &s).unwrap();
            let sum = 0.5 * joint_wigner((&a).into(), beta, label, &s).unwrap()
                + 0.5 * joint_wigner((&b).into(), beta, label, &s).unwrap();
            assert!((mix - sum).abs() < 1e-14);
        }
    }

    #[test]
    fn vacuum_grid_peaks_at_origin_and_integrates_to_one() {
        let s = build_composite(12).unwrap();
        let g0 = s.ket(Qubit::G, 0).unwrap();
        let spec = GridSpec::square(4.0, 0.1);
        let grid = wigner_grid((&g0).into(), &spec, &[PauliLabel::I, PauliLabel::Z], &s).unwrap();
        let (lo, hi) = grid.min_max(PauliLabel::I).unwrap();
        assert!(lo >= -1e-12);
        assert!((hi - TWO_OVER_PI).abs() < 1e-12);
        let centre = grid.re.len() / 2;
        assert!((grid.at(PauliLabel::I, centre, centre).unwrap() - hi).abs() < 1e-15);
        assert!((wigner_moment_check(&grid, PauliLabel::I).unwrap() - 1.0).abs() < 0.01);
        assert!((wigner_moment_check(&grid, PauliLabel::Z).unwrap() + 1.0).abs() < 0.01);
        assert!(wigner_moment_check(&grid, PauliLabel::X).is_err());
    }

    #[test]
    fn grid_axes_include_endpoints() {
        let spec = GridSpec::default();
        let re = spec.re_axis();
        assert_eq!(re.len(), 201);
        assert!((re[200] - 5.0).abs() < 1e-12);
        assert!(GridSpec { step: 0.0, ..spec }.validate().is_err());
    }
}
