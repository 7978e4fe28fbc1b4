//! Generalized Gell-Mann basis of traceless Hermitian `d×d` matrices,
//! normalized so that `Tr{λ_k λ_l} = δ_kl / 2`.

use crate::error::{Error, Result};
use crate::linalg::{trace_product, CMatrix, C64, ZERO};

#[derive(Clone, Debug)]
pub struct GellMannBasis {
    d: usize,
    generators: Vec<CMatrix>,
    cartan_indices: Vec<usize>,
}

impl GellMannBasis {
    /// Generators are ordered as: all symmetric off-diagonal `(j<k)`, all
    /// antisymmetric off-diagonal `(j<k)`, then the `d-1` diagonal Cartan
    /// generators
    /// `(2j(j+1))^{-1/2} [Σ_{m<j} |m⟩⟨m| - j |j⟩⟨j|]` for `j = 1..d-1`.
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension { d, min: 2 });
        }
        let half = C64::new(0.5, 0.0);
        let mut generators = Vec::with_capacity(d * d - 1);
        for j in 0..d {
            for k in (j + 1)..d {
                let mut m = CMatrix::zeros(d, d);
                m[(j, k)] = half;
                m[(k, j)] = half;
                generators.push(m);
            }
        }
        for j in 0..d {
            for k in (j + 1)..d {
                let mut m = CMatrix::zeros(d, d);
                m[(j, k)] = C64::new(0.0, -0.5);
                m[(k, j)] = C64::new(0.0, 0.5);
                generators.push(m);
            }
        }
        let mut cartan_indices = Vec::with_capacity(d - 1);
        for j in 1..d {
            let norm = 1.0 / ((2 * j * (j + 1)) as f64).sqrt();
            let mut m = CMatrix::zeros(d, d);
            for mm in 0..j {
                m[(mm, mm)] = C64::new(norm, 0.0);
            }
            m[(j, j)] = C64::new(-(j as f64) * norm, 0.0);
            cartan_indices.push(generators.len());
            generators.push(m);
        }
        Ok(GellMannBasis { d, generators, cartan_indices })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    pub fn generator(&self, k: usize) -> &CMatrix {
        &self.generators[k]
    }

    pub fn cartan_indices(&self) -> &[usize] {
        &self.cartan_indices
    }

    pub fn cartan_generators(&self) -> impl Iterator<Item = &CMatrix> {
        self.cartan_indices.iter().map(move |&i| &self.generators[i])
    }

    /// Components `r_k = 2 Tr{M λ_k}`; exact for traceless Hermitian `M`.
    pub fn components(&self, m: &CMatrix) -> Vec<f64> {
        self.generators.iter().map(|g| 2.0 * trace_product(m, g).re).collect()
    }

    /// `Σ_k r_k λ_k`.
    pub fn compose(&self, r: &[f64]) -> CMatrix {
        let mut out = CMatrix::from_element(self.d, self.d, ZERO);
        for (g, &c) in self.generators.iter().zip(r) {
            out += g * C64::new(c, 0.0);
        }
        out
    }
}
