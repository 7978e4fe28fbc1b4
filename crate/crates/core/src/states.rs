//! Bipartite test states: isotropic, Dicke, a 3×3 PPT entangled state and
//! mixtures of pure states with mutually unbiased Schmidt bases.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    self, conj, hermitian_eigen, hermiticity_residual, identity, partial_transpose, tensor,
    trace, trace_product, CMatrix, CVector, MatrixJson, Party, C64, ZERO,
};
use crate::mum::mub_unitaries;

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct DensityMatrix {
    pub dims: (usize, usize),
    pub matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates shape, hermiticity, unit trace and positivity.
    pub fn new(matrix: CMatrix, dims: (usize, usize)) -> Result<Self> {
        let n = dims.0 * dims.1;
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::InvalidShape(format!(
                "state is {}x{}, expected {n}x{n}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let herm = hermiticity_residual(&matrix);
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (residual {herm:e})")));
        }
        let tr = trace(&matrix);
        if (tr - C64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let min = linalg::min_eigenvalue(&matrix);
        if min < -PSD_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(DensityMatrix { dims, matrix })
    }

    /// `|ψ⟩⟨ψ|` for a normalized vector.
    pub fn pure(psi: &CVector, dims: (usize, usize)) -> Result<Self> {
        let norm = psi.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized { norm });
        }
        let m = psi * psi.adjoint();
        DensityMatrix::new(symmetrize(m), dims)
    }

    pub fn product(a: &CMatrix, b: &CMatrix) -> Result<Self> {
        DensityMatrix::new(tensor(a, b), (a.nrows(), b.nrows()))
    }

    pub fn maximally_mixed(dims: (usize, usize)) -> Self {
        let n = dims.0 * dims.1;
        DensityMatrix { dims, matrix: identity(n) * C64::new(1.0 / n as f64, 0.0) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `Tr{ρ X}` (real part).
    pub fn expectation(&self, op: &CMatrix) -> f64 {
        trace_product(&self.matrix, op).re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigen(&self.matrix).values.to_vec()
    }

    pub fn partial_transpose(&self, side: Party) -> CMatrix {
        partial_transpose(&self.matrix, self.dims, side).expect("dims checked on construction")
    }

    /// Smallest eigenvalue of the partial transpose on party B.
    pub fn ppt_min_eigenvalue(&self) -> f64 {
        linalg::min_eigenvalue(&self.partial_transpose(Party::B))
    }

    /// `(A ⊗ B) ρ (A ⊗ B)^†` without re-validation.
    pub fn local_conjugate(&self, a: &CMatrix, b: &CMatrix) -> DensityMatrix {
        let k = tensor(a, b);
        DensityMatrix { dims: self.dims, matrix: &k * &self.matrix * k.adjoint() }
    }
}

fn symmetrize(m: CMatrix) -> CMatrix {
    (&m + m.adjoint()) * C64::new(0.5, 0.0)
}

/// `|φ_d^+⟩ = Σ_i |ii⟩/√d`.
pub fn maximally_entangled(d: usize) -> CVector {
    let mut v = CVector::zeros(d * d);
    for i in 0..d {
        v[i * d + i] = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    }
    v
}

/// `α |φ_d^+⟩⟨φ_d^+| + (1 - α) I/d²`. Accepts `α ∈ [0, 1]`.
pub fn isotropic(d: usize, alpha: f64) -> Result<DensityMatrix> {
    if d < 2 {
        return Err(Error::InvalidDimension { d, min: 2 });
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!("alpha {alpha} outside [0, 1]")));
    }
    let phi = maximally_entangled(d);
    let n = d * d;
    let m = (&phi * phi.adjoint()) * C64::new(alpha, 0.0)
        + identity(n) * C64::new((1.0 - alpha) / n as f64, 0.0);
    DensityMatrix::new(m, (d, d))
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `N`-qubit Dicke state with `k` excitations. Qubit 0 is the most
/// significant bit of the basis index.
pub fn dicke(qubits: usize, excitations: usize) -> Result<CVector> {
    if qubits == 0 || qubits > 20 {
        return Err(Error::InvalidParameter(format!("qubit count {qubits} outside 1..=20")));
    }
    if excitations > qubits {
        return Err(Error::InvalidParameter(format!(
            "{excitations} excitations exceed {qubits} qubits"
        )));
    }
    let amp = C64::new(1.0 / binomial(qubits, excitations).sqrt(), 0.0);
    Ok(CVector::from_fn(1 << qubits, |i, _| {
        if i.count_ones() as usize == excitations {
            amp
        } else {
            ZERO
        }
    }))
}

/// Schmidt coefficients of the Dicke state across the balanced `(n|n)`
/// split: `λ_q = C(n,q) C(n,k-q) / C(2n,k)` for
/// `q = max(0, k-n) ..= min(n, k)`.
pub fn dicke_schmidt(qubits: usize, excitations: usize) -> Result<Vec<f64>> {
    if !qubits.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "balanced split needs an even qubit count, got {qubits}"
        )));
    }
    if excitations > qubits {
        return Err(Error::InvalidParameter(format!(
            "{excitations} excitations exceed {qubits} qubits"
        )));
    }
    let n = qubits / 2;
    let k = excitations;
    let total = binomial(qubits, k);
    Ok((k.saturating_sub(n)..=n.min(k))
        .map(|q| binomial(n, q) * binomial(n, k - q) / total)
        .collect())
}

/// `(1-p)|D_N^k⟩⟨D_N^k| + p I/2^N`, split into two halves of `N/2` qubits.
pub fn noisy_dicke(qubits: usize, excitations: usize, p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("noise weight {p} outside [0, 1]")));
    }
    if !qubits.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "balanced split needs an even qubit count, got {qubits}"
        )));
    }
    let psi = dicke(qubits, excitations)?;
    let n = psi.len();
    let half = 1usize << (qubits / 2);
    let m = (&psi * psi.adjoint()) * C64::new(1.0 - p, 0.0)
        + identity(n) * C64::new(p / n as f64, 0.0);
    DensityMatrix::new(m, (half, half))
}

/// Two-qutrit PPT entangled state of rank five.
pub fn ppt_bound_state() -> DensityMatrix {
    #[rustfmt::skip]
    let entries: [f64; 81] = [
        1., 0., 0., 0., 1., 0., 0., 0., 1.,
        0., 2., 0., 0., 0., -1., -1., 0., 0.,
        0., 0., 2., -1., 0., 0., 0., -1., 0.,
        0., 0., -1., 2., 0., 0., 0., -1., 0.,
        1., 0., 0., 0., 1., 0., 0., 0., 1.,
        0., -1., 0., 0., 0., 2., -1., 0., 0.,
        0., -1., 0., 0., 0., -1., 2., 0., 0.,
        0., 0., -1., -1., 0., 0., 0., 2., 0.,
        1., 0., 0., 0., 1., 0., 0., 0., 1.,
    ];
    let m = CMatrix::from_row_iterator(9, 9, entries.iter().map(|&x| C64::new(x / 15.0, 0.0)));
    DensityMatrix { dims: (3, 3), matrix: m }
}

/// `Σ_n √λ_n conj(u|n⟩) ⊗ u|n⟩`: Schmidt basis `u` on B and its conjugate
/// on A, so that the block with unitary `u` sees `Σ_n √λ_n |nn⟩`.
pub fn aligned_pure_state(coefficients: &[f64], u: &CMatrix) -> Result<CVector> {
    let d = u.nrows();
    check_coefficients(coefficients, d)?;
    let ua = conj(u);
    let mut psi = CVector::zeros(d * d);
    for (n, &l) in coefficients.iter().enumerate() {
        if l == 0.0 {
            continue;
        }
        let a = ua.column(n).into_owned();
        let b = u.column(n).into_owned();
        psi += linalg::tensor_vec(&a, &b) * C64::new(l.sqrt(), 0.0);
    }
    Ok(psi)
}

pub fn check_coefficients(coefficients: &[f64], d: usize) -> Result<()> {
    if coefficients.len() != d {
        return Err(Error::InvalidParameter(format!(
            "expected {d} Schmidt coefficients, got {}",
            coefficients.len()
        )));
    }
    if coefficients.iter().any(|l| l.is_nan() || *l < -1e-12) {
        return Err(Error::InvalidParameter("negative Schmidt coefficient".into()));
    }
    let sum: f64 = coefficients.iter().sum();
    if (sum - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidParameter(format!("Schmidt coefficients sum to {sum}")));
    }
    Ok(())
}

/// `Σ_b p_b |ψ^{(b)}⟩⟨ψ^{(b)}|` where component `b` has Schmidt basis
/// `U^{(b)}|e_n⟩` from [`mub_unitaries`] (conjugated on party A).
pub fn mub_schmidt_mixture(components: &[(f64, Vec<f64>)], d: usize) -> Result<DensityMatrix> {
    let unitaries = mub_unitaries(d)?;
    if components.is_empty() || components.len() > unitaries.len() {
        return Err(Error::InvalidParameter(format!(
            "{} components; between 1 and {} allowed",
            components.len(),
            unitaries.len()
        )));
    }
    let total: f64 = components.iter().map(|(p, _)| p).sum();
    if components.iter().any(|(p, _)| *p < 0.0) || (total - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidParameter("weights must be nonnegative and sum to 1".into()));
    }
    let mut m = CMatrix::zeros(d * d, d * d);
    for ((p, lambda), u) in components.iter().zip(&unitaries) {
        let psi = aligned_pure_state(lambda, u)?;
        m += (&psi * psi.adjoint()) * C64::new(*p, 0.0);
    }
    DensityMatrix::new(symmetrize(m), (d, d))
}

/// File format for arbitrary states.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateJson {
    pub dims: (usize, usize),
    pub matrix: MatrixJson,
}

impl From<&DensityMatrix> for StateJson {
    fn from(rho: &DensityMatrix) -> Self {
        StateJson { dims: rho.dims, matrix: MatrixJson::from(&rho.matrix) }
    }
}

fn parse_numbers(args: &str, expected: usize, what: &str) -> Result<Vec<f64>> {
    let nums = args
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| Error::InvalidParameter(format!("{what}: {e}")))?;
    if nums.len() != expected {
        return Err(Error::InvalidParameter(format!(
            "{what} takes {expected} comma-separated values"
        )));
    }
    Ok(nums)
}

fn as_count(x: f64, what: &str) -> Result<usize> {
    if x < 0.0 || x.fract() != 0.0 {
        return Err(Error::InvalidParameter(format!("{what} must be a nonnegative integer")));
    }
    Ok(x as usize)
}

/// Parses `isotropic:d,alpha`, `dicke:N,k,p`, `ppt3x3`, or a path to a
/// JSON file holding either a [`StateJson`] or a bare square matrix with
/// equal party dimensions.
pub fn parse_state(spec: &str) -> Result<DensityMatrix> {
    if spec == "ppt3x3" {
        return Ok(ppt_bound_state());
    }
    if let Some(args) = spec.strip_prefix("isotropic:") {
        let v = parse_numbers(args, 2, "isotropic")?;
        return isotropic(as_count(v[0], "dimension")?, v[1]);
    }
    if let Some(args) = spec.strip_prefix("dicke:") {
        let v = parse_numbers(args, 3, "dicke")?;
        return noisy_dicke(as_count(v[0], "qubit count")?, as_count(v[1], "excitations")?, v[2]);
    }
    load_state(Path::new(spec))
}

pub fn load_state(path: &Path) -> Result<DensityMatrix> {
    let text = std::fs::read_to_string(path)?;
    if let Ok(s) = serde_json::from_str::<StateJson>(&text) {
        return DensityMatrix::new(CMatrix::try_from(&s.matrix)?, s.dims);
    }
    let raw: MatrixJson = serde_json::from_str(&text)?;
    let m = CMatrix::try_from(&raw)?;
    let d = (m.nrows() as f64).sqrt().round() as usize;
    if d * d != m.nrows() {
        return Err(Error::InvalidShape(format!(
            "{}x{} matrix needs explicit dims",
            m.nrows(),
            m.ncols()
        )));
    }
    DensityMatrix::new(m, (d, d))
}
