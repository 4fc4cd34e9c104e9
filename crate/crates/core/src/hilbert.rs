// Copyright 2026 windctl contributors
// SPDX-License-Identifier: Apache-2.0

//! Truncated Fock space and the qubit ⊗ cavity product space.
//!
//! Basis convention: `|q, n>` sits at index `q * n_cut + n` with the qubit
//! index slowest, `g = 0` and `e = 1`. `σ_z|e> = |e>`, `σ_z|g> = -|g>` and
//! `σ_x|g> = |e>`. This is the only ordering that ever leaves the crate
//! (state exports, CSV columns), so nothing else should assume another.

use log::warn;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, I, ONE, ZERO};

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const UNITARY_TOL: f64 = 1e-10;
pub const NORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Qubit {
    G,
    E,
}

impl Qubit {
    pub fn index(self) -> usize {
        match self {
            Qubit::G => 0,
            Qubit::E => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    Hermitian,
    Unitary,
    General,
}

/// A dense square operator tagged with the structure it was checked for.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    matrix: CMatrix,
    kind: OperatorKind,
}

impl Operator {
    pub fn hermitian(matrix: CMatrix) -> Result<Self> {
        check_square(&matrix)?;
        let defect = linalg::hermiticity_defect(&matrix);
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian { defect });
        }
        Ok(Operator {
            matrix,
            kind: OperatorKind::Hermitian,
        })
    }

    pub fn unitary(matrix: CMatrix) -> Result<Self> {
        check_square(&matrix)?;
        let defect = linalg::unitarity_defect(&matrix);
        if defect > UNITARY_TOL {
            return Err(Error::InvalidArgument(format!(
                "operator is not unitary (defect {defect:e})"
            )));
        }
        Ok(Operator {
            matrix,
            kind: OperatorKind::Unitary,
        })
    }

    pub fn general(matrix: CMatrix) -> Self {
        Operator {
            matrix,
            kind: OperatorKind::General,
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Operator {
            matrix: CMatrix::zeros(dim, dim),
            kind: OperatorKind::Hermitian,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Operator {
            matrix: CMatrix::identity(dim, dim),
            kind: OperatorKind::Hermitian,
        }
    }

    /// Builds a Hermitian operator from its upper triangle, mirroring it so
    /// the result is Hermitian to the last bit.
    pub fn hermitian_from_upper(mut matrix: CMatrix) -> Result<Self> {
        check_square(&matrix)?;
        let n = matrix.nrows();
        for i in 0..n {
            matrix[(i, i)] = Complex64::new(matrix[(i, i)].re, 0.0);
            for j in i + 1..n {
                matrix[(j, i)] = matrix[(i, j)].conj();
            }
        }
        Ok(Operator {
            matrix,
            kind: OperatorKind::Hermitian,
        })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_hermitian(&self) -> bool {
        self.kind == OperatorKind::Hermitian
    }

    pub fn adjoint(&self) -> Operator {
        Operator {
            matrix: self.matrix.adjoint(),
            kind: self.kind,
        }
    }

    pub fn apply(&self, psi: &QuantumState) -> Result<CVector> {
        check_dims(self.dim(), psi.dim())?;
        Ok(&self.matrix * psi.amplitudes())
    }

    /// Hermitian sum; tags propagate only when both operands are Hermitian.
    pub fn add(&self, other: &Operator) -> Result<Operator> {
        check_dims(self.dim(), other.dim())?;
        let kind = if self.is_hermitian() && other.is_hermitian() {
            OperatorKind::Hermitian
        } else {
            OperatorKind::General
        };
        Ok(Operator {
            matrix: &self.matrix + &other.matrix,
            kind,
        })
    }
}

fn check_square(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::InvalidDimension(format!(
            "operator must be square, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// A unit-norm state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    amplitudes: CVector,
}

impl QuantumState {
    /// Wraps amplitudes that must already be normalized.
    pub fn new(amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(QuantumState { amplitudes })
    }

    pub fn normalized(amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm < 1e-14 {
            return Err(Error::ZeroNorm("cannot normalize a zero vector".into()));
        }
        Ok(QuantumState {
            amplitudes: amplitudes / Complex64::new(norm, 0.0),
        })
    }

    /// Used by the steppers, whose output is unit norm by construction.
    pub(crate) fn from_unitary_image(amplitudes: CVector) -> Self {
        QuantumState { amplitudes }
    }

    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::out_of_range(
                "basis index",
                index as f64,
                format!("[0, {})", dim),
            ));
        }
        let mut v = CVector::zeros(dim);
        v[index] = ONE;
        Ok(QuantumState { amplitudes: v })
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &QuantumState) -> Result<Complex64> {
        check_dims(self.dim(), other.dim())?;
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// Removes the global phase so the largest-magnitude amplitude (first on
    /// ties) is real and positive.
    pub fn phase_fixed(&self) -> QuantumState {
        let mut idx = 0;
        for (k, z) in self.amplitudes.iter().enumerate() {
            if z.norm() > self.amplitudes[idx].norm() + 1e-14 {
                idx = k;
            }
        }
        let z = self.amplitudes[idx];
        let phase = if z.norm() > 0.0 { z.conj() / z.norm() } else { ONE };
        QuantumState {
            amplitudes: &self.amplitudes * phase,
        }
    }
}

/// Single truncated bosonic mode.
#[derive(Debug, Clone)]
pub struct CavitySpace {
    n_cut: usize,
    pub a: Operator,
    pub a_dag: Operator,
    pub n_op: Operator,
    pub parity: Operator,
}

impl CavitySpace {
    pub fn new(n_cut: usize) -> Result<Self> {
        if n_cut < 2 {
            return Err(Error::InvalidDimension(format!(
                "Fock truncation n_cut must be at least 2, got {n_cut}"
            )));
        }
        let mut a = CMatrix::zeros(n_cut, n_cut);
        for n in 1..n_cut {
            a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
        }
        let a_dag = a.adjoint();
        let n_op = CMatrix::from_diagonal(&CVector::from_iterator(
            n_cut,
            (0..n_cut).map(|n| Complex64::new(n as f64, 0.0)),
        ));
        let parity = CMatrix::from_diagonal(&CVector::from_iterator(
            n_cut,
            (0..n_cut).map(|n| Complex64::new(if n % 2 == 0 { 1.0 } else { -1.0 }, 0.0)),
        ));
        Ok(CavitySpace {
            n_cut,
            a: Operator::general(a),
            a_dag: Operator::general(a_dag),
            n_op: Operator::hermitian(n_op)?,
            parity: Operator::hermitian(parity)?,
        })
    }

    pub fn n_cut(&self) -> usize {
        self.n_cut
    }

    pub fn vacuum(&self) -> QuantumState {
        QuantumState::basis(self.n_cut, 0).expect("n_cut >= 2")
    }

    pub fn fock(&self, n: usize) -> Result<QuantumState> {
        QuantumState::basis(self.n_cut, n)
    }

    /// Coherent state `D(alpha)|0>` on this truncation.
    pub fn coherent(&self, alpha: Complex64) -> QuantumState {
        let d = displacement(alpha, self);
        QuantumState::normalized(d.matrix().column(0).into_owned())
            .expect("unitary column is normalized")
    }
}

/// Qubit ⊗ cavity space with the composite operators prebuilt.
#[derive(Debug, Clone)]
pub struct CompositeSpace {
    pub cavity: CavitySpace,
    dim: usize,
    /// `I ⊗ a`
    pub a: Operator,
    /// `I ⊗ (a + a^dag)`
    pub quadrature: Operator,
    /// `I ⊗ a^dag a`
    pub number: Operator,
    pub sigma_x: Operator,
    pub sigma_y: Operator,
    pub sigma_z: Operator,
    /// `σ_+ = |e><g|` on the product space.
    pub sigma_plus: Operator,
    /// Total parity `σ_z Π`, conserved by the Rabi model.
    pub total_parity: Operator,
    /// Total excitation number `a^dag a + |e><e|`, conserved by the JC model.
    pub excitations: Operator,
}

/// Pauli matrices in the `(g, e)` ordering.
pub fn pauli(label: PauliLabel) -> CMatrix {
    let z = ZERO;
    let o = ONE;
    match label {
        PauliLabel::I => CMatrix::identity(2, 2),
        PauliLabel::X => CMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        PauliLabel::Y => CMatrix::from_row_slice(2, 2, &[z, I, -I, z]),
        PauliLabel::Z => CMatrix::from_row_slice(2, 2, &[-o, z, z, o]),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum PauliLabel {
    I,
    X,
    Y,
    Z,
}

impl PauliLabel {
    pub const ALL: [PauliLabel; 4] = [PauliLabel::I, PauliLabel::X, PauliLabel::Y, PauliLabel::Z];

    pub fn name(self) -> &'static str {
        match self {
            PauliLabel::I => "I",
            PauliLabel::X => "X",
            PauliLabel::Y => "Y",
            PauliLabel::Z => "Z",
        }
    }
}

pub fn build_composite(n_cut: usize) -> Result<CompositeSpace> {
    let cavity = CavitySpace::new(n_cut)?;
    let id_q = CMatrix::identity(2, 2);
    let id_c = CMatrix::identity(n_cut, n_cut);
    let on_cavity = |m: &CMatrix| linalg::kron(&id_q, m);
    let on_qubit = |m: &CMatrix| linalg::kron(m, &id_c);

    let a = on_cavity(cavity.a.matrix());
    let quadrature = on_cavity(&(cavity.a.matrix() + cavity.a_dag.matrix()));
    let number = on_cavity(cavity.n_op.matrix());
    let sz = on_qubit(&pauli(PauliLabel::Z));
    let mut sp = CMatrix::zeros(2, 2);
    sp[(Qubit::E.index(), Qubit::G.index())] = ONE;
    let excited = on_qubit(&CMatrix::from_diagonal(&CVector::from_vec(vec![ZERO, ONE])));
    let total_parity = &sz * on_cavity(cavity.parity.matrix());

    Ok(CompositeSpace {
        dim: 2 * n_cut,
        a: Operator::general(a),
        quadrature: Operator::hermitian(quadrature)?,
        excitations: Operator::hermitian(&number + excited)?,
        number: Operator::hermitian(number)?,
        sigma_x: Operator::hermitian(on_qubit(&pauli(PauliLabel::X)))?,
        sigma_y: Operator::hermitian(on_qubit(&pauli(PauliLabel::Y)))?,
        sigma_z: Operator::hermitian(sz)?,
        sigma_plus: Operator::general(on_qubit(&sp)),
        total_parity: Operator::hermitian(total_parity)?,
        cavity,
    })
}

impl CompositeSpace {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_cut(&self) -> usize {
        self.cavity.n_cut()
    }

    pub fn index(&self, q: Qubit, n: usize) -> usize {
        q.index() * self.n_cut() + n
    }

    pub fn ket(&self, q: Qubit, n: usize) -> Result<QuantumState> {
        if n >= self.n_cut() {
            return Err(Error::out_of_range(
                "Fock index",
                n as f64,
                format!("[0, {})", self.n_cut()),
            ));
        }
        QuantumState::basis(self.dim, self.index(q, n))
    }

    pub fn pauli(&self, label: PauliLabel) -> &Operator {
        match label {
            PauliLabel::X => &self.sigma_x,
            PauliLabel::Y => &self.sigma_y,
            PauliLabel::Z => &self.sigma_z,
            PauliLabel::I => unreachable!("identity is not stored"),
        }
    }

    /// `qubit ⊗ cavity` product of unnormalized pieces.
    pub fn product(&self, qubit: [Complex64; 2], cavity: &CVector) -> Result<CVector> {
        check_dims(self.n_cut(), cavity.len())?;
        let mut v = CVector::zeros(self.dim);
        for (q, c) in qubit.iter().enumerate() {
            for n in 0..self.n_cut() {
                v[q * self.n_cut() + n] = c * cavity[n];
            }
        }
        Ok(v)
    }

    /// Population of the highest retained Fock level, summed over the qubit.
    pub fn top_level_population(&self, amplitudes: &CVector) -> f64 {
        let top = self.n_cut() - 1;
        amplitudes[self.index(Qubit::G, top)].norm_sqr()
            + amplitudes[self.index(Qubit::E, top)].norm_sqr()
    }

    /// The cavity amplitudes conditioned on qubit state `q`.
    pub fn cavity_component(&self, amplitudes: &CVector, q: Qubit) -> CVector {
        let n = self.n_cut();
        amplitudes.rows(q.index() * n, n).into_owned()
    }
}

/// `D(beta) = exp(beta a^dag - beta^* a)` by dense exponential of the
/// truncated generator.
pub fn displacement(beta: Complex64, space: &CavitySpace) -> Operator {
    let gen = space.a_dag.matrix() * beta - space.a.matrix() * beta.conj();
    let d = linalg::expm(&gen);
    let defect = linalg::unitarity_defect(&d);
    if defect > 1e-6 {
        warn!("displacement({beta}) unitarity defect {defect:e} at n_cut={}", space.n_cut());
    }
    if defect <= UNITARY_TOL {
        Operator {
            matrix: d,
            kind: OperatorKind::Unitary,
        }
    } else {
        Operator::general(d)
    }
}

/// `|<psi1|psi2>|^2`.
pub fn fidelity(psi1: &QuantumState, psi2: &QuantumState) -> Result<f64> {
    Ok(psi1.inner(psi2)?.norm_sqr().min(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AngleConvention {
    /// `arccos(sqrt F)`, the angle the wind speed and the saturating speed
    /// limit are expressed in.
    #[default]
    Arccos,
    /// `2 arccos(sqrt F)`, the Fubini-Study length with its metric factor.
    Doubled,
}

pub fn bures_angle(
    psi1: &QuantumState,
    psi2: &QuantumState,
    convention: AngleConvention,
) -> Result<f64> {
    let f = fidelity(psi1, psi2)?;
    Ok(angle_from_fidelity(f, convention))
}

pub fn angle_from_fidelity(f: f64, convention: AngleConvention) -> f64 {
    let angle = f.clamp(0.0, 1.0).sqrt().acos();
    match convention {
        AngleConvention::Arccos => angle,
        AngleConvention::Doubled => 2.0 * angle,
    }
}

/// `<psi|op|psi>`.
pub fn expectation(op: &Operator, psi: &QuantumState) -> Result<Complex64> {
    check_dims(op.dim(), psi.dim())?;
    let image = op.matrix() * psi.amplitudes();
    Ok(psi.amplitudes().dotc(&image))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn rejects_tiny_truncation() {
        assert!(matches!(build_composite(1), Err(Error::InvalidDimension(_))));
        assert!(build_composite(2).is_ok());
    }

    #[test]
    fn ladder_elements() {
        let s = build_composite(2).unwrap();
        let a = s.cavity.a.matrix();
        assert_eq!(a[(0, 1)], c(1.0));
        assert_eq!(a.iter().filter(|z| z.norm() > 0.0).count(), 1);

        let s = build_composite(3).unwrap();
        assert!((s.cavity.a.matrix()[(1, 2)] - c(2f64.sqrt())).norm() < 1e-15);

        let s = build_composite(4).unwrap();
        let p: Vec<f64> = s.cavity.parity.matrix().diagonal().iter().map(|z| z.re).collect();
        assert_eq!(p, vec![1.0, -1.0, 1.0, -1.0]);
    }

    #[test]
    fn cavity_operator_invariants() {
        let cav = CavitySpace::new(6).unwrap();
        assert_eq!(*cav.a_dag.matrix(), cav.a.matrix().adjoint());
        let comm = linalg::commutator(cav.a.matrix(), cav.a_dag.matrix());
        for i in 0..6 {
            for j in 0..6 {
                let expect = if i == j && i < 5 { 1.0 } else { 0.0 };
                if i < 5 && j < 5 {
                    assert!((comm[(i, j)] - c(expect)).norm() < 1e-14);
                }
            }
        }
        // the truncation artifact is confined to the top level
        assert!((comm[(5, 5)] - c(-5.0)).norm() < 1e-14);
    }

    #[test]
    fn pauli_sign_convention() {
        let s = build_composite(3).unwrap();
        let g0 = s.ket(Qubit::G, 0).unwrap();
        let e0 = s.ket(Qubit::E, 0).unwrap();
        let flipped = QuantumState::new(s.sigma_x.apply(&g0).unwrap()).unwrap();
        assert_eq!(flipped, e0);
        assert_eq!(expectation(&s.sigma_z, &e0).unwrap(), c(1.0));
        assert_eq!(expectation(&s.sigma_z, &g0).unwrap(), c(-1.0));
        let xy = pauli(PauliLabel::X) * pauli(PauliLabel::Y);
        assert!(linalg::max_abs(&(xy - pauli(PauliLabel::Z) * I)) < 1e-15);
    }

    #[test]
    fn expectation_examples() {
        let s = build_composite(8).unwrap();
        let g0 = s.ket(Qubit::G, 0).unwrap();
        assert_eq!(expectation(&s.sigma_z, &g0).unwrap(), c(-1.0));
        for n in 0..8 {
            let en = s.ket(Qubit::E, n).unwrap();
            assert_eq!(expectation(&s.number, &en).unwrap(), c(n as f64));
        }
        let psi = QuantumState::normalized(CVector::from_element(16, Complex64::new(0.3, -0.2)))
            .unwrap();
        let one = expectation(&Operator::identity(16), &psi).unwrap();
        assert!((one - c(1.0)).norm() < 1e-14);
        assert!(matches!(
            expectation(&Operator::identity(4), &psi),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn displacement_examples() {
        let cav = CavitySpace::new(40).unwrap();
        let id = displacement(ZERO, &cav);
        assert!(linalg::max_abs(&(id.matrix() - CMatrix::identity(40, 40))) < 1e-15);

        let d = displacement(c(1.0), &cav);
        let dm = displacement(c(-1.0), &cav);
        let prod = d.matrix() * dm.matrix();
        assert!(linalg::max_abs(&(prod - CMatrix::identity(40, 40))) < 1e-8);
        assert_eq!(d.kind(), OperatorKind::Unitary);
    }

    #[test]
    fn vacuum_overlap_of_displacement() {
        // <0|D(beta)|0> = exp(-|beta|^2 / 2) for real beta
        let cav = CavitySpace::new(30).unwrap();
        let beta = 0.5;
        let d = displacement(c(beta), &cav);
        let expected = (-beta * beta / 2.0).exp();
        assert!((d.matrix()[(0, 0)] - c(expected)).norm() < 1e-12);
    }

    #[test]
    fn displacement_unitary_inside_safe_region() {
        for (beta, n_cut) in [(1.0f64, 14usize), (2.0, 26), (Complex64::new(1.5, -1.0).norm(), 23)] {
            let cav = CavitySpace::new(n_cut).unwrap();
            assert!(n_cut as f64 >= 4.0 * beta * beta + 10.0);
            let d = displacement(Complex64::from_polar(beta, 0.3), &cav);
            assert!(linalg::unitarity_defect(d.matrix()) <= 1e-8);
        }
    }

    #[test]
    fn fidelity_examples() {
        let s = build_composite(4).unwrap();
        let a = s.ket(Qubit::G, 1).unwrap();
        let b = s.ket(Qubit::E, 3).unwrap();
        assert_eq!(fidelity(&a, &a).unwrap(), 1.0);
        assert_eq!(fidelity(&a, &b).unwrap(), 0.0);
        let sup = QuantumState::normalized(a.amplitudes() + b.amplitudes()).unwrap();
        assert!((fidelity(&a, &sup).unwrap() - 0.5).abs() < 1e-15);
        assert!((fidelity(&sup, &a).unwrap() - fidelity(&a, &sup).unwrap()).abs() < 1e-16);
        let other = build_composite(3).unwrap().ket(Qubit::G, 0).unwrap();
        assert!(matches!(fidelity(&a, &other), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn bures_angle_examples() {
        use std::f64::consts::PI;
        let s = build_composite(4).unwrap();
        let a = s.ket(Qubit::G, 1).unwrap();
        let b = s.ket(Qubit::E, 3).unwrap();
        let sup = QuantumState::normalized(a.amplitudes() + b.amplitudes()).unwrap();
        let arc = AngleConvention::Arccos;
        let dbl = AngleConvention::Doubled;
        assert_eq!(bures_angle(&a, &a, arc).unwrap(), 0.0);
        assert!((bures_angle(&a, &b, arc).unwrap() - PI / 2.0).abs() < 1e-15);
        assert!((bures_angle(&a, &b, dbl).unwrap() - PI).abs() < 1e-15);
        assert!((bures_angle(&a, &sup, arc).unwrap() - PI / 4.0).abs() < 1e-8);
        assert!((bures_angle(&a, &sup, dbl).unwrap() - PI / 2.0).abs() < 1e-8);
    }

    #[test]
    fn operator_tags_are_checked() {
        let mut m = CMatrix::identity(3, 3);
        m[(0, 1)] = Complex64::new(0.0, 1e-9);
        assert!(matches!(Operator::hermitian(m.clone()), Err(Error::NotHermitian { .. })));
        assert!(Operator::unitary(m * c(2.0)).is_err());
        let s = build_composite(5).unwrap();
        for op in [&s.quadrature, &s.number, &s.sigma_x, &s.sigma_y, &s.sigma_z, &s.total_parity] {
            assert!(linalg::hermiticity_defect(op.matrix()) <= HERMITIAN_TOL);
        }
    }

    #[test]
    fn normalization_errors() {
        assert!(matches!(
            QuantumState::new(CVector::from_element(2, c(1.0))),
            Err(Error::NotNormalized { .. })
        ));
        assert!(matches!(
            QuantumState::normalized(CVector::zeros(3)),
            Err(Error::ZeroNorm(_))
        ));
    }
}
