//! Dense complex linear algebra shared by the rest of the crate.
//!
//! Matrices are `nalgebra` dynamic matrices over `Complex<f64>`. Index
//! origin is 0 everywhere.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;
pub type RMatrix = DMatrix<f64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

/// Entrywise complex conjugate (not the adjoint).
pub fn conj(a: &CMatrix) -> CMatrix {
    a.map(|z| z.conj())
}

pub fn trace(a: &CMatrix) -> C64 {
    a.diagonal().iter().sum()
}

pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `max|U U^† - I|`.
pub fn unitarity_residual(u: &CMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    max_abs_diff(&(u * u.adjoint()), &identity(u.nrows()))
}

/// `max|A - A^†|`.
pub fn hermiticity_residual(a: &CMatrix) -> f64 {
    if !a.is_square() {
        return f64::INFINITY;
    }
    max_abs_diff(a, &a.adjoint())
}

/// `Tr{A B}` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> C64 {
    let n = a.nrows();
    let mut acc = ZERO;
    for i in 0..n {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

pub fn real_to_complex(a: &RMatrix) -> CMatrix {
    a.map(|x| C64::new(x, 0.0))
}

/// Unitary discrete Fourier transform, `[F]_{kl} = ω^{kl}/√d`, `ω = e^{2πi/d}`.
pub fn fourier_unitary(d: usize) -> Result<CMatrix> {
    if d < 2 {
        return Err(Error::InvalidDimension { d, min: 2 });
    }
    let norm = 1.0 / (d as f64).sqrt();
    Ok(CMatrix::from_fn(d, d, |k, l| root_of_unity(d, k * l) * norm))
}

/// `ω^p` with `ω = e^{2πi/d}`; the exponent is reduced mod `d` first so
/// large powers stay exact on the unit circle.
pub fn root_of_unity(d: usize, p: usize) -> C64 {
    let angle = 2.0 * PI * ((p % d) as f64) / d as f64;
    C64::from_polar(1.0, angle)
}

/// Cyclic shift with entries `[S_n]_{ij} = ⟨i ⊕ n | j⟩`.
///
/// Conjugating a diagonal matrix gives `[S_n D S_nᵀ]_{ii} = D_{i⊕n, i⊕n}`.
pub fn shift_matrix(d: usize, n: usize) -> Result<CMatrix> {
    if d < 1 {
        return Err(Error::InvalidDimension { d, min: 1 });
    }
    if n >= d {
        return Err(Error::InvalidOffset { n, d });
    }
    Ok(CMatrix::from_fn(d, d, |i, j| if (i + n) % d == j { ONE } else { ZERO }))
}

/// Clock matrix `Z = diag(1, ω, …, ω^{d-1})`.
pub fn clock_matrix(d: usize) -> Result<CMatrix> {
    if d < 2 {
        return Err(Error::InvalidDimension { d, min: 2 });
    }
    Ok(CMatrix::from_fn(d, d, |i, j| if i == j { root_of_unity(d, i) } else { ZERO }))
}

/// Kronecker product `A ⊗ B`.
pub fn tensor(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn tensor_vec(a: &CVector, b: &CVector) -> CVector {
    a.kronecker(b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Party {
    A,
    B,
}

/// Partial transpose of a bipartite operator on `C^{d_A} ⊗ C^{d_B}`.
pub fn partial_transpose(rho: &CMatrix, dims: (usize, usize), side: Party) -> Result<CMatrix> {
    let (da, db) = dims;
    let n = da * db;
    if rho.nrows() != n || rho.ncols() != n {
        return Err(Error::InvalidShape(format!(
            "expected {n}x{n} for dims ({da}, {db}), got {}x{}",
            rho.nrows(),
            rho.ncols()
        )));
    }
    let mut out = CMatrix::zeros(n, n);
    for a in 0..da {
        for b in 0..db {
            for a2 in 0..da {
                for b2 in 0..db {
                    let (src_r, src_c) = match side {
                        Party::A => (a2 * db + b, a * db + b2),
                        Party::B => (a * db + b2, a2 * db + b),
                    };
                    out[(a * db + b, a2 * db + b2)] = rho[(src_r, src_c)];
                }
            }
        }
    }
    Ok(out)
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Eigenvectors as columns, in the order of `values`.
    pub vectors: CMatrix,
}

/// Deterministic Hermitian eigensolver (Householder tridiagonalisation plus
/// implicit QL, via `nalgebra`). The input is symmetrised first.
pub fn hermitian_eigen(h: &CMatrix) -> HermitianEigen {
    let sym = (h + h.adjoint()) * C64::new(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    let n = h.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    HermitianEigen { values, vectors }
}

pub fn min_eigenvalue(h: &CMatrix) -> f64 {
    hermitian_eigen(h).values.first().copied().unwrap_or(0.0)
}

/// Extends the orthonormal columns of `cols` to a full orthonormal basis of
/// `C^dim` by Gram-Schmidt against the computational basis.
pub fn complete_basis(cols: &CMatrix, dim: usize) -> CMatrix {
    let mut basis: Vec<CVector> = cols.column_iter().map(|c| c.into_owned()).collect();
    let mut e = 0;
    while basis.len() < dim && e < dim {
        let mut v = CVector::zeros(dim);
        v[e] = ONE;
        for b in &basis {
            let overlap = b.dotc(&v);
            v -= b * overlap;
        }
        // A second pass keeps the result orthogonal to working precision.
        for b in &basis {
            let overlap = b.dotc(&v);
            v -= b * overlap;
        }
        let norm = v.norm();
        if norm > 1e-6 {
            basis.push(v / C64::new(norm, 0.0));
        }
        e += 1;
    }
    CMatrix::from_columns(&basis)
}

/// Schmidt form `ψ = Σ_i √λ_i |a_i⟩ ⊗ |b_i⟩`.
#[derive(Clone, Debug)]
pub struct Schmidt {
    /// `λ_i`, descending, summing to 1. Length `min(d_A, d_B)`.
    pub coefficients: Vec<f64>,
    /// Full orthonormal basis of party A; column `i` is `|a_i⟩`.
    pub basis_a: CMatrix,
    /// Full orthonormal basis of party B; column `i` is `|b_i⟩`.
    pub basis_b: CMatrix,
}

impl Schmidt {
    pub fn reconstruct(&self) -> CVector {
        let da = self.basis_a.nrows();
        let db = self.basis_b.nrows();
        let mut psi = CVector::zeros(da * db);
        for (i, &lambda) in self.coefficients.iter().enumerate() {
            let a = self.basis_a.column(i).into_owned();
            let b = self.basis_b.column(i).into_owned();
            psi += tensor_vec(&a, &b) * C64::new(lambda.sqrt(), 0.0);
        }
        psi
    }

    /// Local unitaries `(W_A, W_B)` with `(W_A ⊗ W_B) ψ = Σ_i √λ_i |i⟩|i⟩`.
    pub fn aligning_unitaries(&self) -> (CMatrix, CMatrix) {
        (self.basis_a.adjoint(), self.basis_b.adjoint())
    }
}

pub fn schmidt_decompose(psi: &CVector, dims: (usize, usize)) -> Result<Schmidt> {
    let (da, db) = dims;
    if psi.len() != da * db {
        return Err(Error::InvalidShape(format!(
            "state of length {} does not match dims ({da}, {db})",
            psi.len()
        )));
    }
    let norm = psi.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized { norm });
    }
    // C[a, b] = ψ_{a d_B + b} = Σ σ_i U[a,i] conj(V[b,i]); so |b_i⟩ = conj(v_i).
    let c = CMatrix::from_fn(da, db, |a, b| psi[a * db + b]);
    let svd = c.svd(true, true);
    let u = svd.u.expect("svd u");
    let v_t = svd.v_t.expect("svd v_t");
    let k = svd.singular_values.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let coefficients = order.iter().map(|&i| svd.singular_values[i].powi(2)).collect();
    let a_cols = CMatrix::from_fn(da, k, |r, c| u[(r, order[c])]);
    // Row i of V^T is v_i^†, so conj(v_i)[b] = v_t[(i, b)].
    let b_cols = CMatrix::from_fn(db, k, |r, c| v_t[(order[c], r)]);
    Ok(Schmidt {
        coefficients,
        basis_a: complete_basis(&a_cols, da),
        basis_b: complete_basis(&b_cols, db),
    })
}

/// Wire format for matrices: `{"rows", "cols", "entries": [[re, im], ...]}`
/// in row-major order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

impl From<&CMatrix> for MatrixJson {
    fn from(m: &CMatrix) -> Self {
        let mut entries = Vec::with_capacity(m.len());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                entries.push([z.re, z.im]);
            }
        }
        MatrixJson { rows: m.nrows(), cols: m.ncols(), entries }
    }
}

impl From<&RMatrix> for MatrixJson {
    fn from(m: &RMatrix) -> Self {
        MatrixJson::from(&real_to_complex(m))
    }
}

impl TryFrom<&MatrixJson> for CMatrix {
    type Error = Error;

    fn try_from(m: &MatrixJson) -> Result<CMatrix> {
        if m.entries.len() != m.rows * m.cols {
            return Err(Error::InvalidShape(format!(
                "{} entries for a {}x{} matrix",
                m.entries.len(),
                m.rows,
                m.cols
            )));
        }
        Ok(CMatrix::from_fn(m.rows, m.cols, |i, j| {
            let [re, im] = m.entries[i * m.cols + j];
            C64::new(re, im)
        }))
    }
}

impl MatrixJson {
    /// Real part of a matrix that is expected to be real.
    pub fn to_real(&self) -> Result<RMatrix> {
        let c = CMatrix::try_from(self)?;
        if c.iter().any(|z| z.im.abs() > 1e-12) {
            return Err(Error::InvalidShape("expected a real matrix".into()));
        }
        Ok(c.map(|z| z.re))
    }
}
