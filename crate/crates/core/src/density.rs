// Copyright 2026 windctl contributors
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{check_dims, QuantumState};
use crate::linalg::{self, CMatrix, CVector};

/// Trace tolerance for accepting a density operator.
pub const TRACE_TOL: f64 = 1e-8;

/// A Hermitian, unit-trace matrix. Positivity is monitored, not enforced.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: CMatrix,
}

impl DensityOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidDimension(format!(
                "density matrix must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let defect = linalg::hermiticity_defect(&matrix);
        if defect > 1e-10 {
            return Err(Error::NonPhysical(format!("hermiticity defect {defect:e}")));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::NonPhysical(format!("trace {tr} differs from 1")));
        }
        Ok(DensityOperator { matrix })
    }

    pub(crate) fn from_matrix_unchecked(matrix: CMatrix) -> Self {
        DensityOperator { matrix }
    }

    pub fn from_pure(psi: &QuantumState) -> Self {
        let v = psi.amplitudes();
        DensityOperator {
            matrix: v * v.adjoint(),
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        linalg::hermitian_eigen(&self.matrix).0[0]
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// `<psi|rho|psi>`.
    pub fn fidelity_pure(&self, psi: &QuantumState) -> Result<f64> {
        check_dims(self.dim(), psi.dim())?;
        let v = psi.amplitudes();
        Ok(v.dotc(&(&self.matrix * v)).re)
    }

    /// Eigen-decomposition `rho = sum_k p_k |u_k><u_k|`, dropping weights
    /// below `1e-14` in magnitude.
    pub fn pure_components(&self) -> Vec<(f64, CVector)> {
        let (vals, vecs) = linalg::hermitian_eigen(&self.matrix);
        vals.iter()
            .enumerate()
            .filter(|(_, p)| p.abs() > 1e-14)
            .map(|(k, p)| (*p, vecs.column(k).into_owned()))
            .collect()
    }

    /// Replaces the matrix by `(M + M^dag)/2`.
    pub fn symmetrize(&mut self) {
        let adj = self.matrix.adjoint();
        self.matrix += adj;
        self.matrix *= Complex64::new(0.5, 0.0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_state_round_trip() {
        let psi = QuantumState::normalized(CVector::from_vec(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 2.0),
        ]))
        .unwrap();
        let rho = DensityOperator::from_pure(&psi);
        assert!((rho.purity() - 1.0).abs() < 1e-14);
        assert!((rho.fidelity_pure(&psi).unwrap() - 1.0).abs() < 1e-14);
        let comps = rho.pure_components();
        assert_eq!(comps.len(), 1);
        assert!((comps[0].0 - 1.0).abs() < 1e-14);
        assert!(rho.min_eigenvalue().abs() < 1e-14);
    }

    #[test]
    fn rejects_non_physical() {
        let bad_trace = CMatrix::identity(2, 2);
        assert!(matches!(DensityOperator::new(bad_trace), Err(Error::NonPhysical(_))));
        let mut skew = CMatrix::identity(2, 2) * Complex64::new(0.5, 0.0);
        skew[(0, 1)] = Complex64::new(0.1, 0.0);
        assert!(matches!(DensityOperator::new(skew), Err(Error::NonPhysical(_))));
        let mixed = CMatrix::identity(2, 2) * Complex64::new(0.5, 0.0);
        let rho = DensityOperator::new(mixed).unwrap();
        assert!((rho.purity() - 0.5).abs() < 1e-15);
    }
}
