// Copyright 2026 windctl contributors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex linear algebra shared by the solvers.
//!
//! Two exponential routines live here. [`expm`] forms the full matrix
//! exponential by scaling and squaring with a diagonal Padé approximant
//! (degree chosen from the 1-norm as in Higham 2005), and is used wherever
//! an explicit operator is needed. [`exp_action`] applies `exp(z H)` to a
//! vector with a substepped Taylor series truncated at machine precision,
//! which is what the time steppers use on their hot path.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Maximum absolute column sum.
pub fn norm1(m: &CMatrix) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Largest absolute entry.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Elementwise (Frobenius / Hilbert-Schmidt) norm.
pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `max |M - M^dag|`.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `max |U^dag U - I|`.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let n = u.nrows();
    let prod = u.adjoint() * u;
    max_abs(&(prod - CMatrix::identity(n, n)))
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

const PADE3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const PADE9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA: [f64; 5] = [
    1.495585217958292e-2,
    2.53939833006323e-1,
    9.504178996162932e-1,
    2.097847961257068,
    5.371920351148152,
];

fn scaled(m: &CMatrix, c: f64) -> CMatrix {
    m * Complex64::new(c, 0.0)
}

/// Odd/even split of a low-degree Padé numerator, `(U, V)` with
/// `r(A) = (V - U)^{-1} (V + U)`.
fn pade_low(a: &CMatrix, b: &[f64]) -> (CMatrix, CMatrix) {
    let n = a.nrows();
    let id = CMatrix::identity(n, n);
    let a2 = a * a;
    let m = b.len() - 1;
    let mut powers = vec![id.clone(), a2.clone()];
    while powers.len() <= m / 2 {
        let next = powers.last().unwrap() * &a2;
        powers.push(next);
    }
    let mut u = CMatrix::zeros(n, n);
    let mut v = CMatrix::zeros(n, n);
    for (k, p) in powers.iter().enumerate() {
        if 2 * k < m {
            u += scaled(p, b[2 * k + 1]);
        }
        v += scaled(p, b[2 * k]);
    }
    (a * u, v)
}

fn pade13(a: &CMatrix) -> (CMatrix, CMatrix) {
    let b = &PADE13;
    let n = a.nrows();
    let id = CMatrix::identity(n, n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let inner_u = scaled(&a6, b[13]) + scaled(&a4, b[11]) + scaled(&a2, b[9]);
    let u = a
        * (&a6 * inner_u
            + scaled(&a6, b[7])
            + scaled(&a4, b[5])
            + scaled(&a2, b[3])
            + scaled(&id, b[1]));
    let inner_v = scaled(&a6, b[12]) + scaled(&a4, b[10]) + scaled(&a2, b[8]);
    let v = &a6 * inner_v
        + scaled(&a6, b[6])
        + scaled(&a4, b[4])
        + scaled(&a2, b[2])
        + scaled(&id, b[0]);
    (u, v)
}

/// Matrix exponential by scaling and squaring.
///
/// # Panics
/// Panics if `a` is not square.
pub fn expm(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm requires a square matrix");
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    let norm = norm1(a);
    let tables: [&[f64]; 4] = [&PADE3, &PADE5, &PADE7, &PADE9];
    for (coeffs, theta) in tables.iter().zip(THETA.iter()) {
        if norm <= *theta {
            let (u, v) = pade_low(a, coeffs);
            return pade_solve(u, v);
        }
    }
    let squarings = if norm > THETA[4] {
        (norm / THETA[4]).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let a_scaled = scaled(a, 0.5f64.powi(squarings));
    let (u, v) = pade13(&a_scaled);
    let mut r = pade_solve(u, v);
    for _ in 0..squarings {
        r = &r * &r;
    }
    r
}

fn pade_solve(u: CMatrix, v: CMatrix) -> CMatrix {
    let p = &v + &u;
    let q = v - u;
    q.lu()
        .solve(&p)
        .expect("Pade denominator is singular; input norm too large")
}

/// Applies `exp(z * h)` to `v`.
///
/// The interval is split into `ceil(|z| ||h||_1)` substeps so that each
/// Taylor series converges quickly; every series is summed until two
/// consecutive terms fall below double-precision resolution of the partial
/// sum.
pub fn exp_action(h: &CMatrix, z: Complex64, v: &CVector) -> CVector {
    let norm = z.norm() * norm1(h);
    let substeps = norm.ceil().max(1.0) as usize;
    let zs = z / substeps as f64;
    let mut out = v.clone();
    let mut term = CVector::zeros(v.len());
    let mut next = CVector::zeros(v.len());
    for _ in 0..substeps {
        term.copy_from(&out);
        let mut small_in_a_row = 0;
        for k in 1..=60 {
            next.gemv(zs / k as f64, h, &term, ZERO);
            std::mem::swap(&mut term, &mut next);
            out += &term;
            let t = term.camax();
            let s = out.camax();
            if t <= f64::EPSILON * 0.5 * s {
                small_in_a_row += 1;
                if small_in_a_row == 2 {
                    break;
                }
            } else {
                small_in_a_row = 0;
            }
        }
    }
    out
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues ascending.
///
/// Each eigenvector's largest component (first on ties) is made real and
/// positive. Within a degenerate cluster (gap < `1e-10`) vectors are ordered
/// by the index of their dominant basis component, so repeated calls on the
/// same input give the same basis.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let dominant = |col: usize| -> usize {
        let c = eig.eigenvectors.column(col);
        let mut best = 0;
        for i in 1..n {
            if c[i].norm() > c[best].norm() + 1e-12 {
                best = i;
            }
        }
        best
    };

    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n
            && eig.eigenvalues[order[end]] - eig.eigenvalues[order[end - 1]] < 1e-10
        {
            end += 1;
        }
        if end - start > 1 {
            order[start..end].sort_by_key(|&c| dominant(c));
        }
        start = end;
    }

    let values: Vec<f64> = order.iter().map(|&c| eig.eigenvalues[c]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let col = eig.eigenvectors.column(src);
        let idx = dominant(src);
        let phase = if col[idx].norm() > 0.0 {
            col[idx].conj() / col[idx].norm()
        } else {
            ONE
        };
        for i in 0..n {
            vectors[(i, dst)] = col[i] * phase;
        }
    }
    (values, vectors)
}

/// Largest absolute eigenvalue of a Hermitian matrix.
pub fn spectral_norm_hermitian(m: &CMatrix) -> f64 {
    m.clone()
        .symmetric_eigenvalues()
        .iter()
        .map(|x| x.abs())
        .fold(0.0, f64::max)
}
