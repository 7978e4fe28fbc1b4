//! Seeded random matrices and states for tests, sweeps, and sampling checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{CMatrix, CVector, C64};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Complex Ginibre matrix.
pub fn random_matrix(n: usize, rng: &mut impl Rng) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| gaussian(rng))
}

pub fn random_hermitian(n: usize, rng: &mut impl Rng) -> CMatrix {
    let g = random_matrix(n, rng);
    (&g + g.adjoint()) * C64::new(0.5, 0.0)
}

/// Haar-distributed unitary (QR of a Ginibre matrix with phase correction).
pub fn random_unitary(n: usize, rng: &mut impl Rng) -> CMatrix {
    let qr = random_matrix(n, rng).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

pub fn random_pure_state(n: usize, rng: &mut impl Rng) -> CVector {
    let v = CVector::from_fn(n, |_, _| gaussian(rng));
    let norm = v.norm();
    v / C64::new(norm, 0.0)
}

/// Mixed state `G G^† / Tr(G G^†)` from a Ginibre matrix.
pub fn random_density(n: usize, rng: &mut impl Rng) -> CMatrix {
    let g = random_matrix(n, rng);
    let rho = &g * g.adjoint();
    let tr: C64 = rho.diagonal().iter().sum();
    rho / tr
}

/// Random probability vector of length `n` (normalized exponentials).
pub fn random_simplex(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| -rng.random::<f64>().max(1e-300).ln()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}
