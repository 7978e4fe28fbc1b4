//! MUM families `P_n^{(b)} = I/d + M_n^{(b)}` built from one spectrum and a
//! set of unitaries, plus the checks that certify them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gellmann::GellMannBasis;
use crate::linalg::{
    self, conj, hermitian_eigen, identity, max_abs_diff, root_of_unity, tensor, trace,
    trace_product, unitarity_residual, CMatrix, MatrixJson, RMatrix, C64, ONE, ZERO,
};
use crate::spectra::{validate_spectrum, Spectrum};

pub const UNITARY_TOL: f64 = 1e-12;
pub const POSITIVITY_TOL: f64 = 1e-10;

/// One measurement: `d` Hermitian elements.
#[derive(Clone, Debug)]
pub struct Povm {
    pub d: usize,
    pub elements: Vec<CMatrix>,
}

impl Povm {
    /// Traceless parts `M_n = P_n - I/d`.
    pub fn traceless_parts(&self) -> Vec<CMatrix> {
        let shift = identity(self.d) * C64::new(1.0 / self.d as f64, 0.0);
        self.elements.iter().map(|p| p - &shift).collect()
    }

    pub fn completeness_residual(&self) -> f64 {
        let mut sum = CMatrix::zeros(self.d, self.d);
        for p in &self.elements {
            sum += p;
        }
        max_abs_diff(&sum, &identity(self.d))
    }

    pub fn trace_residual(&self) -> f64 {
        self.elements.iter().map(|p| (trace(p) - ONE).norm()).fold(0.0, f64::max)
    }

    /// `max(0, -min eigenvalue)` over elements.
    pub fn positivity_violation(&self) -> f64 {
        self.elements
            .iter()
            .map(|p| (-linalg::min_eigenvalue(p)).max(0.0))
            .fold(0.0, f64::max)
    }

    /// Largest entry of any commutator `[P_n, P_n']`.
    pub fn commutator_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, a) in self.elements.iter().enumerate() {
            for b in &self.elements[i + 1..] {
                worst = worst.max(linalg::max_abs(&(a * b - b * a)));
            }
        }
        worst
    }
}

#[derive(Clone, Debug)]
pub struct MumFamily {
    pub d: usize,
    pub kappa: f64,
    pub spectrum: Spectrum,
    /// `U^{(b)}`; the first is normally the identity.
    pub unitaries: Vec<CMatrix>,
    pub povms: Vec<Povm>,
}

impl MumFamily {
    pub fn len(&self) -> usize {
        self.povms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.povms.is_empty()
    }

    pub fn excess_purity(&self) -> f64 {
        self.kappa - 1.0 / self.d as f64
    }

    /// The same family with every operator entrywise conjugated.
    pub fn conjugate(&self) -> MumFamily {
        MumFamily {
            d: self.d,
            kappa: self.kappa,
            spectrum: self.spectrum.clone(),
            unitaries: self.unitaries.iter().map(conj).collect(),
            povms: self
                .povms
                .iter()
                .map(|p| Povm { d: p.d, elements: p.elements.iter().map(conj).collect() })
                .collect(),
        }
    }
}

/// Diagonal POVM with `[P_n]_{jj} = 1/d + μ_{n⊕j}`.
pub fn base_povm(s: &Spectrum) -> Result<Povm> {
    let report = validate_spectrum(s);
    if !report.pass {
        return Err(Error::InvalidSpectrum { max_residual: report.max_residual });
    }
    let d = s.d;
    let elements = (0..d)
        .map(|n| {
            CMatrix::from_fn(d, d, |i, j| {
                if i == j {
                    C64::new(1.0 / d as f64 + s.shifted(n, j), 0.0)
                } else {
                    ZERO
                }
            })
        })
        .collect();
    Ok(Povm { d, elements })
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| !n.is_multiple_of(k))
}

/// Complete sets of `d+1` mutually unbiased bases, as unitaries whose
/// columns are the basis vectors.
///
/// * `d = 2`: computational, Hadamard, circular (`diag(1, i) F`).
/// * odd prime `d`: `U^{(0)} = I`, `U^{(b)} = D^{b-1} F` with
///   `D = diag(ω^{j²})`. Column `k` of `D^a F` is an eigenvector of
///   `X Z^{2a}`, so these are the Weyl-Heisenberg eigenbases. For `d = 3`
///   `D = diag(1, ω, ω)`.
/// * `d = 4`: joint eigenbases of the five maximal commuting sets of
///   two-qubit Pauli operators.
pub fn mub_unitaries(d: usize) -> Result<Vec<CMatrix>> {
    let bases = match d {
        2 => {
            let f = linalg::fourier_unitary(2)?;
            let s = CMatrix::from_diagonal(&linalg::CVector::from_vec(vec![ONE, C64::new(0.0, 1.0)]));
            vec![identity(2), f.clone(), s * f]
        }
        4 => two_qubit_mubs(),
        d if is_prime(d) => {
            let f = linalg::fourier_unitary(d)?;
            let mut out = vec![identity(d)];
            for a in 0..d {
                let phase = CMatrix::from_fn(d, d, |i, j| {
                    if i == j {
                        root_of_unity(d, (a * i * i) % d)
                    } else {
                        ZERO
                    }
                });
                out.push(phase * &f);
            }
            out
        }
        _ => {
            return Err(Error::UnsupportedDimension {
                d,
                supported: "primes and 4".into(),
            })
        }
    };
    let report = check_mub(&bases)?;
    debug_assert!(report.max_deviation < 1e-10);
    Ok(bases)
}

fn pauli(c: char) -> CMatrix {
    let i = C64::new(0.0, 1.0);
    match c {
        'I' => identity(2),
        'X' => CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        'Y' => CMatrix::from_row_slice(2, 2, &[ZERO, -i, i, ZERO]),
        'Z' => CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
        _ => unreachable!("unknown Pauli {c}"),
    }
}

fn pauli2(label: &str) -> CMatrix {
    let mut it = label.chars();
    let a = pauli(it.next().unwrap());
    let b = pauli(it.next().unwrap());
    tensor(&a, &b)
}

fn two_qubit_mubs() -> Vec<CMatrix> {
    let sets = [["XI", "IX"], ["YI", "IY"], ["XY", "YZ"], ["YX", "ZY"]];
    let mut out = vec![identity(4)];
    for [p, q] in sets {
        // Joint eigenvalues (±1, ±1) map to distinct values of P + 2Q.
        let h = pauli2(p) + pauli2(q) * C64::new(2.0, 0.0);
        out.push(hermitian_eigen(&h).vectors);
    }
    out
}

pub fn build_mum_family(s: &Spectrum, unitaries: &[CMatrix]) -> Result<MumFamily> {
    let base = base_povm(s)?;
    for (index, u) in unitaries.iter().enumerate() {
        if u.nrows() != s.d || u.ncols() != s.d {
            return Err(Error::InvalidShape(format!("unitary {index} is not {0}x{0}", s.d)));
        }
        let residual = unitarity_residual(u);
        if residual > UNITARY_TOL {
            return Err(Error::NotUnitary { index, residual });
        }
    }
    let povms = unitaries
        .iter()
        .map(|u| Povm {
            d: s.d,
            elements: base.elements.iter().map(|p| u * p * u.adjoint()).collect(),
        })
        .collect();
    Ok(MumFamily {
        d: s.d,
        kappa: s.kappa,
        spectrum: s.clone(),
        unitaries: unitaries.to_vec(),
        povms,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MumReport {
    /// Max over `(b, n, b', n')` of the trace-product residual.
    pub trace_product_residual: f64,
    /// Where that maximum occurs.
    pub worst_pair: Option<[usize; 4]>,
    pub trace_residual: f64,
    pub purity_residual: f64,
    pub positivity_violation: f64,
    pub completeness_residual: f64,
    pub commutator_residual: f64,
    pub max_residual: f64,
    pub pass: bool,
}

/// Right-hand side of the MUM trace relation,
/// `1/d + δ_{bb'} (δ_{nn'} - 1/d) (κd - 1)/(d - 1)`.
pub fn expected_trace_product(d: usize, kappa: f64, same_povm: bool, same_outcome: bool) -> f64 {
    let df = d as f64;
    let mut v = 1.0 / df;
    if same_povm {
        let delta = if same_outcome { 1.0 } else { 0.0 };
        v += (delta - 1.0 / df) * (kappa * df - 1.0) / (df - 1.0);
    }
    v
}

pub fn verify_mum(f: &MumFamily, tol: f64) -> MumReport {
    let mut worst = 0.0f64;
    let mut worst_pair = None;
    for (b, pb) in f.povms.iter().enumerate() {
        for (b2, pb2) in f.povms.iter().enumerate() {
            for (n, x) in pb.elements.iter().enumerate() {
                for (n2, y) in pb2.elements.iter().enumerate() {
                    let expect = expected_trace_product(f.d, f.kappa, b == b2, n == n2);
                    let r = (trace_product(x, y) - C64::new(expect, 0.0)).norm();
                    if r > worst {
                        worst = r;
                        worst_pair = Some([b, n, b2, n2]);
                    }
                }
            }
        }
    }
    let mut trace_residual = 0.0f64;
    let mut purity_residual = 0.0f64;
    let mut positivity_violation = 0.0f64;
    let mut completeness_residual = 0.0f64;
    let mut commutator_residual = 0.0f64;
    for p in &f.povms {
        trace_residual = trace_residual.max(p.trace_residual());
        for e in &p.elements {
            purity_residual = purity_residual.max((trace_product(e, e).re - f.kappa).abs());
        }
        positivity_violation = positivity_violation.max(p.positivity_violation());
        completeness_residual = completeness_residual.max(p.completeness_residual());
        commutator_residual = commutator_residual.max(p.commutator_residual());
    }
    let max_residual = [
        worst,
        trace_residual,
        purity_residual,
        positivity_violation,
        completeness_residual,
        commutator_residual,
    ]
    .into_iter()
    .fold(0.0, f64::max);
    MumReport {
        trace_product_residual: worst,
        worst_pair,
        trace_residual,
        purity_residual,
        positivity_violation,
        completeness_residual,
        commutator_residual,
        max_residual,
        pass: max_residual <= tol,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct UnistochasticReport {
    /// `max_n |Σ_{jj'} μ_{n⊕j} B_{jj'} μ_{n⊕j'}|`.
    pub quadratic_form_residual: f64,
    /// `max |B_{jj'} - 1/d|`.
    pub flatness_deviation: f64,
}

/// Builds `B_{jj'} = |U_{jj'}|²` and evaluates the bridge condition between
/// the computational basis and the columns of `U`.
pub fn unistochastic_check(u: &CMatrix, s: &Spectrum) -> UnistochasticReport {
    let d = s.d;
    let b = RMatrix::from_fn(d, d, |i, j| u[(i, j)].norm_sqr());
    let mut quad = 0.0f64;
    for n in 0..d {
        let mut acc = 0.0;
        for j in 0..d {
            for k in 0..d {
                acc += s.shifted(n, j) * b[(j, k)] * s.shifted(n, k);
            }
        }
        quad = quad.max(acc.abs());
    }
    let flat = b.iter().map(|x| (x - 1.0 / d as f64).abs()).fold(0.0, f64::max);
    UnistochasticReport { quadratic_form_residual: quad, flatness_deviation: flat }
}

/// Bloch components `r_k = 2 Tr{M λ_k}` of a traceless Hermitian `M`.
pub fn bloch_vector(m: &CMatrix, basis: &GellMannBasis) -> Result<Vec<f64>> {
    let tr = trace(m).norm();
    if tr > 1e-10 {
        return Err(Error::NotTraceless { trace: tr });
    }
    Ok(basis.components(m))
}

#[derive(Clone, Debug, Serialize)]
pub struct SimplexReport {
    /// Set when `κ = 1/d` (all Bloch vectors vanish).
    pub degenerate: bool,
    /// `max |(|r| - √(2(κ - 1/d)))|`.
    pub length_residual: f64,
    /// Within-POVM dot products vs `2(κ - 1/d)(dδ - 1)/(d - 1)`.
    pub within_residual: f64,
    /// Within-POVM angle deviation from `arccos(-1/(d-1))`, radians.
    pub angle_residual: f64,
    /// Cross-POVM dot products vs 0.
    pub cross_residual: f64,
    pub max_residual: f64,
    pub pass: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn simplex_check(f: &MumFamily, basis: &GellMannBasis) -> SimplexReport {
    let d = f.d as f64;
    let excess = f.excess_purity();
    let vectors: Vec<Vec<Vec<f64>>> = f
        .povms
        .iter()
        .map(|p| p.traceless_parts().iter().map(|m| basis.components(m)).collect())
        .collect();
    let target_len = (2.0 * excess.max(0.0)).sqrt();
    let target_angle = (-1.0 / (d - 1.0)).acos();
    let degenerate = excess <= 1e-12;
    let (mut len_r, mut within_r, mut angle_r, mut cross_r) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for (b, vb) in vectors.iter().enumerate() {
        for (n, x) in vb.iter().enumerate() {
            let len = dot(x, x).sqrt();
            len_r = len_r.max((len - target_len).abs());
            for (b2, vb2) in vectors.iter().enumerate() {
                for (n2, y) in vb2.iter().enumerate() {
                    let xy = dot(x, y);
                    if b == b2 {
                        let delta = if n == n2 { 1.0 } else { 0.0 };
                        let expect = 2.0 * excess * (d * delta - 1.0) / (d - 1.0);
                        within_r = within_r.max((xy - expect).abs());
                        if n != n2 && !degenerate {
                            let cos = (xy / (len * dot(y, y).sqrt())).clamp(-1.0, 1.0);
                            angle_r = angle_r.max((cos.acos() - target_angle).abs());
                        }
                    } else {
                        cross_r = cross_r.max(xy.abs());
                    }
                }
            }
        }
    }
    let max_residual = len_r.max(within_r).max(cross_r);
    SimplexReport {
        degenerate,
        length_residual: len_r,
        within_residual: within_r,
        angle_residual: angle_r,
        cross_residual: cross_r,
        max_residual,
        pass: max_residual <= 1e-10,
    }
}

/// Adjoint action of `U` on Bloch vectors: `R_kl = 2 Tr{λ_k U λ_l U^†}`.
pub fn rotation_from_unitary(u: &CMatrix, basis: &GellMannBasis) -> Result<RMatrix> {
    let residual = unitarity_residual(u);
    if residual > UNITARY_TOL || u.nrows() != basis.dim() {
        return Err(Error::NotUnitary { index: 0, residual });
    }
    let n = basis.len();
    let conjugated: Vec<CMatrix> =
        basis.generators().iter().map(|g| u * g * u.adjoint()).collect();
    Ok(RMatrix::from_fn(n, n, |k, l| 2.0 * trace_product(basis.generator(k), &conjugated[l]).re))
}

#[derive(Clone, Debug, Serialize)]
pub struct CartanReport {
    pub max_overlap: f64,
    pub worst_pair: Option<(usize, usize)>,
    pub pass: bool,
}

/// Hilbert-Schmidt overlaps between the conjugated Cartan subalgebras
/// `U^{(b)} 𝔥 U^{(b)†}` for every `b ≠ b'`.
pub fn cartan_orthogonality_check(unitaries: &[CMatrix], basis: &GellMannBasis) -> CartanReport {
    let subspaces: Vec<Vec<CMatrix>> = unitaries
        .iter()
        .map(|u| basis.cartan_generators().map(|g| u * g * u.adjoint()).collect())
        .collect();
    let mut worst = 0.0f64;
    let mut worst_pair = None;
    for (b, xs) in subspaces.iter().enumerate() {
        for (b2, ys) in subspaces.iter().enumerate().skip(b + 1) {
            for x in xs {
                for y in ys {
                    let v = trace_product(&x.adjoint(), y).norm();
                    if v > worst {
                        worst = v;
                        worst_pair = Some((b, b2));
                    }
                }
            }
        }
    }
    CartanReport { max_overlap: worst, worst_pair, pass: worst <= 1e-10 }
}

#[derive(Clone, Debug, Serialize)]
pub struct MubReport {
    /// `max | |⟨e|e'⟩| - 1/√d |` over cross-basis pairs.
    pub max_deviation: f64,
    pub pass: bool,
}

/// Each element of `bases` holds one orthonormal basis as columns.
pub fn check_mub(bases: &[CMatrix]) -> Result<MubReport> {
    for (index, b) in bases.iter().enumerate() {
        let residual = max_abs_diff(&(b.adjoint() * b), &identity(b.ncols()));
        if residual > 1e-10 || !b.is_square() {
            return Err(Error::NotOrthonormal { index, residual });
        }
    }
    let mut worst = 0.0f64;
    for (i, a) in bases.iter().enumerate() {
        let target = 1.0 / (a.nrows() as f64).sqrt();
        for b in &bases[i + 1..] {
            let overlaps = a.adjoint() * b;
            for z in overlaps.iter() {
                worst = worst.max((z.norm() - target).abs());
            }
        }
    }
    Ok(MubReport { max_deviation: worst, pass: worst <= 1e-10 })
}

/// File format: `{"d", "kappa", "mu", "unitaries"}`; POVM elements are
/// rebuilt on load.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyJson {
    pub d: usize,
    pub kappa: f64,
    pub mu: Vec<f64>,
    pub unitaries: Vec<MatrixJson>,
}

impl From<&MumFamily> for FamilyJson {
    fn from(f: &MumFamily) -> Self {
        FamilyJson {
            d: f.d,
            kappa: f.kappa,
            mu: f.spectrum.mu.clone(),
            unitaries: f.unitaries.iter().map(MatrixJson::from).collect(),
        }
    }
}

impl FamilyJson {
    pub fn into_family(&self) -> Result<MumFamily> {
        let s = Spectrum::new(self.d, self.kappa, self.mu.clone());
        let us = self.unitaries.iter().map(CMatrix::try_from).collect::<Result<Vec<_>>>()?;
        build_mum_family(&s, &us)
    }
}
