//! Real orthogonal matrices that fix the diagonal direction
//! `n* = (1, …, 1)/√d`: the circulant `Q` built from a spectrum, and the
//! rotations used by the witnesses.

use std::ops::Mul;


use crate::error::{Error, Result};
use crate::linalg::RMatrix;
use crate::spectra::Spectrum;

pub const ORTHO_TOL: f64 = 1e-10;
pub const AXIS_TOL: f64 = 1e-12;

pub fn diagonal_axis(d: usize) -> nalgebra::DVector<f64> {
    nalgebra::DVector::from_element(d, 1.0 / (d as f64).sqrt())
}

pub fn orthogonality_residual(m: &RMatrix) -> f64 {
    let d = m.nrows();
    (m * m.transpose() - RMatrix::identity(d, d)).amax()
}

pub fn axis_residual(m: &RMatrix) -> f64 {
    let n = diagonal_axis(m.nrows());
    (m * &n - &n).amax().max((m.transpose() * &n - &n).amax())
}

/// Circulant orthogonal matrix `Q_{nj} = q μ_{n⊕(d-j)} + 1/d` with
/// `q = √((1 - 1/d)/(κ - 1/d))`.
#[derive(Clone, Debug)]
pub struct QMatrix {
    pub d: usize,
    pub entries: RMatrix,
    pub q_factor: f64,
}

pub fn q_matrix(s: &Spectrum) -> Result<QMatrix> {
    let d = s.d;
    if d < 2 || s.mu.len() != d {
        return Err(Error::InvalidDimension { d, min: 2 });
    }
    let df = d as f64;
    let excess = s.kappa - 1.0 / df;
    if excess <= 1e-12 {
        return Err(Error::DegeneratePurity);
    }
    let q = ((1.0 - 1.0 / df) / excess).sqrt();
    let entries = RMatrix::from_fn(d, d, |n, j| q * s.shifted(n, d - j) + 1.0 / df);
    Ok(QMatrix { d, entries, q_factor: q })
}

impl QMatrix {
    pub fn orthogonality_residual(&self) -> f64 {
        orthogonality_residual(&self.entries)
    }

    pub fn axis_residual(&self) -> f64 {
        axis_residual(&self.entries)
    }

    /// Largest deviation of any row or column sum from 1.
    pub fn stochastic_residual(&self) -> f64 {
        let rows = self.entries.row_iter().map(|r| (r.sum() - 1.0).abs());
        let cols = self.entries.column_iter().map(|c| (c.sum() - 1.0).abs());
        rows.chain(cols).fold(0.0, f64::max)
    }

    /// `Q Õ Qᵀ`, the inverse of [`conjugate_rotation`].
    pub fn lift(&self, tilde: &RotationFixingDiagonal) -> Result<RotationFixingDiagonal> {
        same_dim(self.d, tilde.d)?;
        Ok(RotationFixingDiagonal {
            d: self.d,
            entries: &self.entries * &tilde.entries * self.entries.transpose(),
        })
    }
}

/// Orthogonal `d×d` matrix with `O n* = n*`.
#[derive(Clone, Debug, PartialEq)]
pub struct RotationFixingDiagonal {
    pub d: usize,
    pub entries: RMatrix,
}

impl RotationFixingDiagonal {
    pub fn identity(d: usize) -> Self {
        RotationFixingDiagonal { d, entries: RMatrix::identity(d, d) }
    }

    /// Validates orthogonality and the fixed axis.
    pub fn from_matrix(entries: RMatrix) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::InvalidShape("rotation must be square".into()));
        }
        let ortho = orthogonality_residual(&entries);
        let axis = axis_residual(&entries);
        if ortho > ORTHO_TOL || axis > 1e-10 {
            return Err(Error::InvalidParameter(format!(
                "matrix is not an orthogonal map fixing n* (orthogonality {ortho:e}, axis {axis:e})"
            )));
        }
        Ok(RotationFixingDiagonal { d: entries.nrows(), entries })
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace()
    }

    pub fn get(&self, k: usize, l: usize) -> f64 {
        self.entries[(k, l)]
    }
}

impl Mul for &RotationFixingDiagonal {
    type Output = RotationFixingDiagonal;

    fn mul(self, rhs: Self) -> RotationFixingDiagonal {
        assert_eq!(self.d, rhs.d, "dimension mismatch");
        RotationFixingDiagonal { d: self.d, entries: &self.entries * &rhs.entries }
    }
}

/// Rotation of `R³` by `θ` about `n* = (1,1,1)/√3` (Rodrigues form
/// `R_ij = n_i n_j (1 - cos θ) + δ_ij cos θ - ε_ijk n_k sin θ`).
pub fn rotation_d3(theta: f64) -> RotationFixingDiagonal {
    let n = 1.0 / 3f64.sqrt();
    let (s, c) = theta.sin_cos();
    let levi = |i: usize, j: usize, k: usize| -> f64 {
        match (i, j, k) {
            (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
            (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
            _ => 0.0,
        }
    };
    let entries = RMatrix::from_fn(3, 3, |i, j| {
        let delta = if i == j { 1.0 } else { 0.0 };
        let cross: f64 = (0..3).map(|k| levi(i, j, k) * n).sum();
        n * n * (1.0 - c) + delta * c - cross * s
    });
    RotationFixingDiagonal { d: 3, entries }
}

/// Permutation matrix with `P[map[j], j] = 1`, i.e. `P e_j = e_{map[j]}`.
pub fn permutation_rotation(d: usize, map: &[usize]) -> Result<RotationFixingDiagonal> {
    if map.len() != d {
        return Err(Error::InvalidPermutation { d });
    }
    let mut seen = vec![false; d];
    for &m in map {
        if m >= d || seen[m] {
            return Err(Error::InvalidPermutation { d });
        }
        seen[m] = true;
    }
    let entries = RMatrix::from_fn(d, d, |r, c| if map[c] == r { 1.0 } else { 0.0 });
    Ok(RotationFixingDiagonal { d, entries })
}

/// Index reversal `r ↦ (d - r) mod d`, ones at `(r, d - r mod d)`.
pub fn anti_cyclic(d: usize) -> RotationFixingDiagonal {
    let map: Vec<usize> = (0..d).map(|r| (d - r) % d).collect();
    permutation_rotation(d, &map).expect("reversal is a permutation")
}

/// `Qᵀ O Q`.
pub fn conjugate_rotation(q: &QMatrix, o: &RotationFixingDiagonal) -> Result<RotationFixingDiagonal> {
    same_dim(q.d, o.d)?;
    Ok(RotationFixingDiagonal {
        d: q.d,
        entries: q.entries.transpose() * &o.entries * &q.entries,
    })
}

fn same_dim(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::InvalidShape(format!("dimension mismatch: {a} vs {b}")));
    }
    Ok(())
}
