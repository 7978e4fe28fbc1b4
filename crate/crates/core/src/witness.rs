//! Entanglement witnesses built from a MUM family and one rotation
//! `O^{(b)}` per measurement, plus the MUB/MUM correlation criteria and the
//! associated positive map.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{conj, identity, tensor, trace, CMatrix, RMatrix, C64};
use crate::mum::{check_mub, MumFamily};
use crate::ortho::{anti_cyclic, q_matrix, rotation_d3, RotationFixingDiagonal};
use crate::states::{check_coefficients, DensityMatrix};

/// Expectation values below `-DETECTION_TOL` count as detection.
pub const DETECTION_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct WitnessConfig {
    pub family: MumFamily,
    pub rotations: Vec<RotationFixingDiagonal>,
    pub included_blocks: Vec<usize>,
}

impl WitnessConfig {
    pub fn new(
        family: MumFamily,
        rotations: Vec<RotationFixingDiagonal>,
        included_blocks: Vec<usize>,
    ) -> Result<Self> {
        if rotations.len() != family.len() {
            return Err(Error::InvalidConfig(format!(
                "{} rotations for {} measurements",
                rotations.len(),
                family.len()
            )));
        }
        if let Some(r) = rotations.iter().find(|r| r.d != family.d) {
            return Err(Error::InvalidConfig(format!(
                "rotation of size {} for dimension {}",
                r.d, family.d
            )));
        }
        if included_blocks.is_empty() {
            return Err(Error::InvalidConfig("no blocks selected".into()));
        }
        let mut seen = vec![false; family.len()];
        for &b in &included_blocks {
            if b >= family.len() || seen[b] {
                return Err(Error::InvalidConfig(format!("bad or repeated block index {b}")));
            }
            seen[b] = true;
        }
        Ok(WitnessConfig { family, rotations, included_blocks })
    }

    /// `O^{(b)} = I` on every block.
    pub fn identity(family: MumFamily) -> Self {
        let n = family.len();
        let rotations = vec![RotationFixingDiagonal::identity(family.d); n];
        WitnessConfig { family, rotations, included_blocks: (0..n).collect() }
    }

    pub fn with_blocks(mut self, blocks: Vec<usize>) -> Result<Self> {
        self.included_blocks = blocks;
        WitnessConfig::new(self.family, self.rotations, self.included_blocks)
    }

    pub fn excess_purity(&self) -> f64 {
        self.family.excess_purity()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessResult {
    pub kappa: f64,
    #[serde(rename = "blocks")]
    pub block_values: Vec<f64>,
    pub m_total: f64,
    pub w_expectation: f64,
    pub detected: bool,
}

impl WitnessResult {
    fn assemble(kappa: f64, d: usize, block_values: Vec<f64>) -> Self {
        let m_total: f64 = block_values.iter().sum();
        let w_expectation = (kappa - 1.0 / d as f64) - m_total;
        WitnessResult {
            kappa,
            block_values,
            m_total,
            w_expectation,
            detected: w_expectation < -DETECTION_TOL,
        }
    }
}

/// `Σ_{b∈blocks} Σ_{kl} O_kl conj(M_l^{(b)}) ⊗ M_k^{(b)}`.
pub fn m_kappa(cfg: &WitnessConfig) -> CMatrix {
    let d = cfg.family.d;
    let mut out = CMatrix::zeros(d * d, d * d);
    for &b in &cfg.included_blocks {
        let parts = cfg.family.povms[b].traceless_parts();
        let o = &cfg.rotations[b];
        for (l, ml) in parts.iter().enumerate() {
            let mut mixed = CMatrix::zeros(d, d);
            for (k, mk) in parts.iter().enumerate() {
                mixed += mk * C64::new(o.get(k, l), 0.0);
            }
            out += tensor(&conj(ml), &mixed);
        }
    }
    out
}

/// `((dκ + s - 1)/d) I - Σ_{b∈blocks} Σ_{kl} O_kl conj(P_l^{(b)}) ⊗ P_k^{(b)}`
/// with `s` the number of included blocks.
pub fn witness_matrix(cfg: &WitnessConfig) -> CMatrix {
    let d = cfg.family.d;
    let s = cfg.included_blocks.len() as f64;
    let constant = (d as f64 * cfg.family.kappa + s - 1.0) / d as f64;
    let mut out = identity(d * d) * C64::new(constant, 0.0);
    for &b in &cfg.included_blocks {
        let elements = &cfg.family.povms[b].elements;
        let o = &cfg.rotations[b];
        for (l, pl) in elements.iter().enumerate() {
            let mut mixed = CMatrix::zeros(d, d);
            for (k, pk) in elements.iter().enumerate() {
                mixed += pk * C64::new(o.get(k, l), 0.0);
            }
            out -= tensor(&conj(pl), &mixed);
        }
    }
    out
}

fn check_state(family: &MumFamily, rho: &DensityMatrix) -> Result<()> {
    if rho.dims != (family.d, family.d) {
        return Err(Error::InvalidState(format!(
            "state dims {:?} do not match family dimension {}",
            rho.dims, family.d
        )));
    }
    Ok(())
}

/// Coefficients `G_kl` with block value `Σ_kl O_kl G_kl`:
/// `G_kl = Σ_{rs} ⟨rs|ρ^{(b)}|rs⟩ μ_{l⊕r} μ_{k⊕s}`, where
/// `ρ^{(b)} = (conj(U)⊗U)^† ρ (conj(U)⊗U)`.
pub fn block_coefficients(family: &MumFamily, rho: &DensityMatrix, b: usize) -> RMatrix {
    let d = family.d;
    let u = &family.unitaries[b];
    let k = tensor(&conj(u), u);
    let rotated = k.adjoint() * &rho.matrix * &k;
    let mu = &family.spectrum;
    RMatrix::from_fn(d, d, |kk, l| {
        let mut acc = 0.0;
        for r in 0..d {
            for s in 0..d {
                acc += rotated[(r * d + s, r * d + s)].re * mu.shifted(l, r) * mu.shifted(kk, s);
            }
        }
        acc
    })
}

fn frobenius_dot(a: &RMatrix, b: &RMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Block decomposition of `Tr{ρW}`.
pub fn evaluate(cfg: &WitnessConfig, rho: &DensityMatrix) -> Result<WitnessResult> {
    check_state(&cfg.family, rho)?;
    let values = cfg
        .included_blocks
        .iter()
        .map(|&b| frobenius_dot(&cfg.rotations[b].entries, &block_coefficients(&cfg.family, rho, b)))
        .collect();
    Ok(WitnessResult::assemble(cfg.family.kappa, cfg.family.d, values))
}

/// `E(ψ) = Σ_{j≠k} √(λ_j λ_k)/(d-1) = ((Σ √λ)² - 1)/(d-1)`.
pub fn entanglement_monotone(coefficients: &[f64]) -> Result<f64> {
    let d = coefficients.len();
    if d < 2 {
        return Err(Error::InvalidDimension { d, min: 2 });
    }
    check_coefficients(coefficients, d)?;
    let root_sum: f64 = coefficients.iter().map(|l| l.max(0.0).sqrt()).sum();
    Ok(((root_sum * root_sum - 1.0) / (d - 1) as f64).clamp(0.0, 1.0))
}

/// Block values for a pure state with Schmidt coefficients `λ`:
/// `(κ - 1/d)` on the aligned block and `(κ - 1/d) E(ψ)` on a block
/// whose basis is unbiased to the Schmidt basis.
pub fn pure_state_values(coefficients: &[f64], kappa: f64, d: usize) -> Result<(f64, f64)> {
    if coefficients.len() != d {
        return Err(Error::InvalidParameter(format!(
            "expected {d} coefficients, got {}",
            coefficients.len()
        )));
    }
    let e = entanglement_monotone(coefficients)?;
    let excess = kappa - 1.0 / d as f64;
    Ok((excess, excess * e))
}

/// Rotation for the unbiased block of a pure state aligned with the
/// computational basis. With party A conjugated, `O = I` gives
/// `(κ - 1/d) E(ψ)`.
pub fn complementary_rotation(d: usize) -> RotationFixingDiagonal {
    RotationFixingDiagonal::identity(d)
}

/// `Q Õ Qᵀ` with `Õ` the index reversal `r ↦ -r mod d`. Matches
/// [`complementary_rotation`] only for `d = 2` under the conjugation used
/// here; for odd `d` the unbiased block evaluates to 0 instead.
pub fn anti_cyclic_rotation(family: &MumFamily) -> Result<RotationFixingDiagonal> {
    q_matrix(&family.spectrum)?.lift(&anti_cyclic(family.d))
}

/// `Σ_b Σ_n ⟨a_n^b b_n^b|ρ|a_n^b b_n^b⟩` for two MUB sets given as
/// column-basis unitaries.
pub fn spengler_i(bases_a: &[CMatrix], bases_b: &[CMatrix], rho: &DensityMatrix) -> Result<f64> {
    if bases_a.len() != bases_b.len() {
        return Err(Error::InvalidParameter("basis sets differ in size".into()));
    }
    for set in [bases_a, bases_b] {
        let report = check_mub(set)?;
        if !report.pass {
            return Err(Error::InvalidParameter(format!(
                "bases are not mutually unbiased (deviation {:e})",
                report.max_deviation
            )));
        }
    }
    let (da, db) = rho.dims;
    if bases_a.first().is_some_and(|a| a.nrows() != da) || bases_b.first().is_some_and(|b| b.nrows() != db) {
        return Err(Error::InvalidState("basis dimension does not match state".into()));
    }
    let mut total = 0.0;
    for (a, b) in bases_a.iter().zip(bases_b) {
        let k = tensor(a, b);
        let rotated = k.adjoint() * &rho.matrix * &k;
        for n in 0..da.min(db) {
            total += rotated[(n * db + n, n * db + n)].re;
        }
    }
    Ok(total)
}

/// `Σ_b Σ_n Tr[(P_n^{(b)} ⊗ P'_n^{(b)}) ρ]` for two complete families.
pub fn chen_j(family_a: &MumFamily, family_b: &MumFamily, rho: &DensityMatrix) -> Result<f64> {
    for f in [family_a, family_b] {
        if f.len() != f.d + 1 {
            return Err(Error::IncompleteFamily { found: f.len(), expected: f.d + 1 });
        }
    }
    if (family_a.kappa - family_b.kappa).abs() > 1e-12 {
        return Err(Error::InvalidParameter("families must share κ".into()));
    }
    if rho.dims != (family_a.d, family_b.d) {
        return Err(Error::InvalidState("state dims do not match families".into()));
    }
    let mut total = 0.0;
    for (pa, pb) in family_a.povms.iter().zip(&family_b.povms) {
        for (x, y) in pa.elements.iter().zip(&pb.elements) {
            total += rho.expectation(&tensor(x, y));
        }
    }
    Ok(total)
}

/// `φX = Tr(X) I/d - (1/(d-1)) Σ_b Σ_kl O_kl Tr{X̃ E_l^{(b)}} E_k^{(b)}`,
/// `X̃ = X - Tr(X) I/d`. Only defined for projective families.
pub fn positive_map_apply(x: &CMatrix, cfg: &WitnessConfig) -> Result<CMatrix> {
    let d = cfg.family.d;
    if (cfg.family.kappa - 1.0).abs() > 1e-12 {
        return Err(Error::UnsupportedPurity { kappa: cfg.family.kappa });
    }
    if x.nrows() != d || x.ncols() != d {
        return Err(Error::InvalidShape(format!("map input must be {d}x{d}")));
    }
    let depolarized = identity(d) * (trace(x) / C64::new(d as f64, 0.0));
    let traceless = x - &depolarized;
    let mut correction = CMatrix::zeros(d, d);
    for &b in &cfg.included_blocks {
        let e = &cfg.family.povms[b].elements;
        let o = &cfg.rotations[b];
        let weights: Vec<C64> = e.iter().map(|el| crate::linalg::trace_product(&traceless, el)).collect();
        for (k, ek) in e.iter().enumerate() {
            let mut c = C64::new(0.0, 0.0);
            for (l, w) in weights.iter().enumerate() {
                c += w * o.get(k, l);
            }
            correction += ek * c;
        }
    }
    Ok(depolarized - correction * C64::new(1.0 / (d - 1) as f64, 0.0))
}

/// Grid `θ_i = i·step` covering `[0, 2π)`.
pub fn angle_grid(step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step <= 2.0 * PI) {
        return Err(Error::InvalidParameter(format!("grid step {step} must lie in (0, 2π]")));
    }
    let count = (2.0 * PI / step - 1e-9).ceil() as usize;
    Ok((0..count).map(|i| i as f64 * step).collect())
}

/// Qutrit rotations about `n*` by the given angles.
pub fn rotations_from_angles(thetas: &[f64]) -> Vec<RotationFixingDiagonal> {
    thetas.iter().map(|&t| rotation_d3(t)).collect()
}

/// Minimizes `Tr{ρW}` over one rotation angle per included block. The
/// objective is a sum of per-block terms, so each angle is searched on its
/// own; ties keep the smaller angle. Excluded blocks report angle 0.
pub fn optimize_rotations_d3(
    family: &MumFamily,
    rho: &DensityMatrix,
    blocks: &[usize],
    step: f64,
) -> Result<(Vec<f64>, WitnessResult)> {
    if family.d != 3 {
        return Err(Error::UnsupportedDimension { d: family.d, supported: "3".into() });
    }
    check_state(family, rho)?;
    let grid = angle_grid(step)?;
    let mut thetas = vec![0.0; family.len()];
    for &b in blocks {
        if b >= family.len() {
            return Err(Error::InvalidConfig(format!("bad block index {b}")));
        }
        let g = block_coefficients(family, rho, b);
        let mut best = (f64::NEG_INFINITY, 0.0);
        for &t in &grid {
            let v = frobenius_dot(&rotation_d3(t).entries, &g);
            if v > best.0 + 1e-12 {
                best = (v, t);
            }
        }
        thetas[b] = best.1;
    }
    let cfg = WitnessConfig::new(family.clone(), rotations_from_angles(&thetas), blocks.to_vec())?;
    let result = evaluate(&cfg, rho)?;
    Ok((thetas, result))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermiticity_residual, max_abs_diff, min_eigenvalue, trace_product};
    use crate::mum::{build_mum_family, mub_unitaries};
    use crate::random::{random_density, random_pure_state, random_simplex, rng};
    use crate::spectra::{sample_feasible_phases, synthesize_spectrum, Spectrum};
    use crate::states::{aligned_pure_state, isotropic, maximally_entangled, ppt_bound_state};

    fn family(d: usize, kappa: f64, seed: u64) -> MumFamily {
        let mut g = rng(seed);
        let (ph, sign) = sample_feasible_phases(d, kappa, &mut g).unwrap();
        let s = synthesize_spectrum(d, kappa, &ph, sign).unwrap();
        build_mum_family(&s, &mub_unitaries(d).unwrap()).unwrap()
    }

    fn random_config(d: usize, seed: u64) -> WitnessConfig {
        let mut g = rng(seed);
        let kappa = 1.0 / d as f64 + 0.9 * random_simplex(2, &mut g)[0] * (1.0 - 1.0 / d as f64);
        let f = family(d, kappa, seed + 1);
        let rotations: Vec<_> = (0..f.len())
            .map(|_| {
                if d == 3 {
                    rotation_d3(random_simplex(2, &mut g)[0] * 2.0 * PI)
                } else {
                    RotationFixingDiagonal::identity(d)
                }
            })
            .collect();
        WitnessConfig::new(f, rotations, (0..d + 1).collect()).unwrap()
    }

    #[test]
    fn config_validation() {
        let f = family(3, 0.8, 1);
        assert!(WitnessConfig::new(f.clone(), vec![], vec![0]).is_err());
        let rots = vec![RotationFixingDiagonal::identity(3); 4];
        assert!(WitnessConfig::new(f.clone(), rots.clone(), vec![]).is_err());
        assert!(WitnessConfig::new(f.clone(), rots.clone(), vec![4]).is_err());
        assert!(WitnessConfig::new(f.clone(), rots.clone(), vec![1, 1]).is_err());
        assert!(WitnessConfig::new(f, rots, vec![0, 2]).is_ok());
    }

    #[test]
    fn m_kappa_trivial_and_traceless() {
        let f = build_mum_family(&Spectrum::maximally_mixed(3), &mub_unitaries(3).unwrap()).unwrap();
        assert!(crate::linalg::max_abs(&m_kappa(&WitnessConfig::identity(f))) < 1e-15);
        for seed in 0..20 {
            let cfg = random_config(2 + (seed as usize % 3), 100 + seed);
            let m = m_kappa(&cfg);
            assert!(trace(&m).norm() < 1e-10);
            assert!(hermiticity_residual(&m) < 1e-12);
        }
    }

    #[test]
    fn m_kappa_single_block_direct_sum() {
        let f = family(3, 1.0, 2);
        let cfg = WitnessConfig::identity(f.clone()).with_blocks(vec![0]).unwrap();
        let mut direct = CMatrix::zeros(9, 9);
        for m in f.povms[0].traceless_parts() {
            direct += tensor(&conj(&m), &m);
        }
        assert!(max_abs_diff(&m_kappa(&cfg), &direct) < 1e-15);
        let off: f64 = (0..9)
            .flat_map(|i| (0..9).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .map(|(i, j)| direct[(i, j)].norm())
            .fold(0.0, f64::max);
        assert!(off < 1e-15);
    }

    #[test]
    fn reduced_form_matches_direct() {
        let mut g = rng(3);
        for seed in 0..20 {
            let cfg = random_config(2 + (seed as usize % 3), 200 + seed);
            let d = cfg.family.d;
            let w = witness_matrix(&cfg);
            let m = m_kappa(&cfg);
            let rho = DensityMatrix::new(random_density(d * d, &mut g), (d, d)).unwrap();
            let direct = rho.expectation(&w);
            let reduced = cfg.excess_purity() - rho.expectation(&m);
            assert!((direct - reduced).abs() < 1e-10);
            let r = evaluate(&cfg, &rho).unwrap();
            assert!((r.w_expectation - direct).abs() < 1e-10);
            assert!((r.w_expectation - (cfg.excess_purity() - r.m_total)).abs() < 1e-12);
            let mixed = DensityMatrix::maximally_mixed((d, d));
            assert!((mixed.expectation(&w) - cfg.excess_purity()).abs() < 1e-12);
        }
    }

    #[test]
    fn subset_witness_constant() {
        let mut g = rng(4);
        let cfg = random_config(3, 300).with_blocks(vec![1, 3]).unwrap();
        let rho = DensityMatrix::new(random_density(9, &mut g), (3, 3)).unwrap();
        let direct = rho.expectation(&witness_matrix(&cfg));
        let r = evaluate(&cfg, &rho).unwrap();
        assert_eq!(r.block_values.len(), 2);
        assert!((direct - r.w_expectation).abs() < 1e-10);
    }

    #[test]
    fn trivial_purity_detects_nothing() {
        let f = build_mum_family(&Spectrum::maximally_mixed(3), &mub_unitaries(3).unwrap()).unwrap();
        let w = witness_matrix(&WitnessConfig::identity(f));
        let mut g = rng(5);
        for _ in 0..5 {
            let rho = DensityMatrix::new(random_density(9, &mut g), (3, 3)).unwrap();
            assert!(rho.expectation(&w).abs() < 1e-12);
        }
    }

    #[test]
    fn maximally_entangled_saturates_every_block() {
        for kappa in [0.5, 1.0] {
            let cfg = WitnessConfig::identity(family(3, kappa, 6));
            let rho = DensityMatrix::pure(&maximally_entangled(3), (3, 3)).unwrap();
            let r = evaluate(&cfg, &rho).unwrap();
            for v in &r.block_values {
                assert!((v - (kappa - 1.0 / 3.0)).abs() < 1e-10);
            }
            assert!((r.w_expectation - (kappa - 1.0 / 3.0) * (1.0 - 4.0)).abs() < 1e-10);
            assert!(r.detected);
        }
    }

    #[test]
    fn isotropic_closed_form() {
        for alpha in [0.1, 0.25, 0.4] {
            let cfg = WitnessConfig::identity(family(3, 0.8, 7));
            let r = evaluate(&cfg, &isotropic(3, alpha).unwrap()).unwrap();
            let expect = (0.8 - 1.0 / 3.0) * (1.0 - 4.0 * alpha);
            assert!((r.w_expectation - expect).abs() < 1e-10);
        }
    }

    #[test]
    fn ppt_state_four_blocks() {
        for kappa in [0.5, 0.9, 1.0] {
            let s = synthesize_spectrum(3, kappa, &[0.0], 1).unwrap();
            let f = build_mum_family(&s, &mub_unitaries(3).unwrap()).unwrap();
            let cfg = WitnessConfig::new(f, rotations_from_angles(&[PI, PI, 0.0, 0.0]), vec![0, 1, 2, 3])
                .unwrap();
            let r = evaluate(&cfg, &ppt_bound_state()).unwrap();
            assert!((r.w_expectation + 0.2 * (kappa - 1.0 / 3.0)).abs() < 1e-9, "{r:?}");
        }
    }

    #[test]
    fn optimizer_examples() {
        let f = family(3, 0.9, 8);
        let (thetas, r) = optimize_rotations_d3(&f, &isotropic(3, 0.5).unwrap(), &[0, 1, 2, 3], PI / 180.0).unwrap();
        assert!(thetas.iter().all(|&t| t == 0.0));
        assert!((r.w_expectation - (0.9 - 1.0 / 3.0) * (1.0 - 2.0)).abs() < 1e-10);

        let s = synthesize_spectrum(3, 0.9, &[0.0], 1).unwrap();
        let f = build_mum_family(&s, &mub_unitaries(3).unwrap()).unwrap();
        let (thetas, r) = optimize_rotations_d3(&f, &ppt_bound_state(), &[0, 1, 2, 3], PI / 180.0).unwrap();
        let expect = [PI, PI, 0.0, 0.0];
        assert!(thetas.iter().zip(expect).all(|(a, b)| (a - b).abs() < 1e-9), "{thetas:?}");
        assert!((r.w_expectation + 0.2 * (0.9 - 1.0 / 3.0)).abs() < 1e-6);

        let (_, r) = optimize_rotations_d3(&f, &DensityMatrix::maximally_mixed((3, 3)), &[0, 1], 0.5).unwrap();
        assert!((r.w_expectation - (0.9 - 1.0 / 3.0)).abs() < 1e-12);
        assert!(optimize_rotations_d3(&family(2, 1.0, 9), &DensityMatrix::maximally_mixed((2, 2)), &[0], 0.1).is_err());
    }

    #[test]
    fn grid_covers_circle() {
        let g = angle_grid(PI / 180.0).unwrap();
        assert_eq!(g.len(), 360);
        assert!((g[180] - PI).abs() < 1e-12);
        assert_eq!(angle_grid(2.0 * PI).unwrap(), vec![0.0]);
        assert!(angle_grid(0.0).is_err());
    }

    #[test]
    fn monotone_values() {
        assert_eq!(entanglement_monotone(&[1.0, 0.0, 0.0]).unwrap(), 0.0);
        assert!((entanglement_monotone(&[0.25; 4]).unwrap() - 1.0).abs() < 1e-15);
        assert!((entanglement_monotone(&[2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0, 0.0]).unwrap() - 5.0 / 9.0).abs() < 1e-15);
        assert!(entanglement_monotone(&[0.5, 0.6]).is_err());
        assert!(entanglement_monotone(&[1.0]).is_err());
        // Pairwise form agrees with the closed form.
        let mut g = rng(10);
        let l = random_simplex(5, &mut g);
        let mut pair = 0.0;
        for j in 0..5 {
            for k in 0..5 {
                if j != k {
                    pair += (l[j] * l[k]).sqrt();
                }
            }
        }
        assert!((pair / 4.0 - entanglement_monotone(&l).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn pure_state_value_examples() {
        let (a, c) = pure_state_values(&[1.0, 0.0, 0.0], 0.8, 3).unwrap();
        assert!((a - (0.8 - 1.0 / 3.0)).abs() < 1e-15 && c == 0.0);
        let (a, c) = pure_state_values(&[1.0 / 3.0; 3], 0.8, 3).unwrap();
        assert!((a - c).abs() < 1e-15);
        let (a, c) = pure_state_values(&[0.0, 1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0], 1.0, 4).unwrap();
        assert!((a - 0.75).abs() < 1e-15 && (c - 5.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn pure_state_blocks_numerically() {
        let mut g = rng(11);
        for d in [2, 3, 5] {
            let f = family(d, 0.6_f64.max(1.0 / d as f64 + 0.05), 12 + d as u64);
            let lam = random_simplex(d, &mut g);
            let psi = aligned_pure_state(&lam, &identity(d)).unwrap();
            let rho = DensityMatrix::pure(&psi, (d, d)).unwrap();
            let mut rots = vec![RotationFixingDiagonal::identity(d); f.len()];
            rots[1] = complementary_rotation(d);
            let cfg = WitnessConfig::new(f.clone(), rots.clone(), vec![0, 1]).unwrap();
            let r = evaluate(&cfg, &rho).unwrap();
            let (aligned, comp) = pure_state_values(&lam, f.kappa, d).unwrap();
            assert!((r.block_values[0] - aligned).abs() < 1e-10);
            assert!((r.block_values[1] - comp).abs() < 1e-10);

            rots[1] = anti_cyclic_rotation(&f).unwrap();
            let cfg = WitnessConfig::new(f, rots, vec![1]).unwrap();
            let literal = evaluate(&cfg, &rho).unwrap().block_values[0];
            if d == 2 {
                assert!((literal - comp).abs() < 1e-10);
            } else {
                assert!(literal.abs() < 1e-10);
            }
        }
    }

    #[test]
    fn block_bound_holds() {
        let mut g = rng(13);
        for d in [2, 3, 4] {
            let cfg = random_config(d, 400 + d as u64);
            for i in 0..20 {
                let m = if i % 2 == 0 {
                    let v = random_pure_state(d * d, &mut g);
                    &v * v.adjoint()
                } else {
                    random_density(d * d, &mut g)
                };
                let rho = DensityMatrix::new((&m + m.adjoint()) * C64::new(0.5, 0.0), (d, d)).unwrap();
                for v in evaluate(&cfg, &rho).unwrap().block_values {
                    assert!(v <= cfg.excess_purity() + 1e-10);
                }
            }
        }
    }

    #[test]
    fn correlation_criteria() {
        for d in [2, 3] {
            let a = mub_unitaries(d).unwrap();
            let b: Vec<_> = a.iter().map(conj).collect();
            let mixed = DensityMatrix::maximally_mixed((d, d));
            assert!((spengler_i(&a, &b, &mixed).unwrap() - (d + 1) as f64 / d as f64).abs() < 1e-12);
            let phi = DensityMatrix::pure(&maximally_entangled(d), (d, d)).unwrap();
            assert!((spengler_i(&a, &b, &phi).unwrap() - (d + 1) as f64).abs() < 1e-10);

            let f = family(d, 0.8, 20 + d as u64);
            let fc = f.conjugate();
            assert!((chen_j(&f, &fc, &mixed).unwrap() - (d + 1) as f64 / d as f64).abs() < 1e-12);
            // Each element contributes Tr{P²}/d = κ/d on |φ+⟩.
            let j = chen_j(&f, &fc, &phi).unwrap();
            assert!((j - (d + 1) as f64 * 0.8).abs() < 1e-10);
            let trivial = build_mum_family(&Spectrum::maximally_mixed(d), &mub_unitaries(d).unwrap()).unwrap();
            let j = chen_j(&trivial, &trivial.conjugate(), &phi).unwrap();
            assert!((j - (d + 1) as f64 / d as f64).abs() < 1e-12);
        }
        let f = family(3, 0.8, 30);
        let mut partial = f.clone();
        partial.povms.truncate(2);
        partial.unitaries.truncate(2);
        let mixed = DensityMatrix::maximally_mixed((3, 3));
        assert!(matches!(chen_j(&partial, &f, &mixed), Err(Error::IncompleteFamily { found: 2, expected: 4 })));
    }

    #[test]
    fn chen_j_on_maximally_entangled_state_by_brute_force() {
        for d in [2, 3] {
            let f = family(d, 0.9, 40 + d as u64);
            let phi = DensityMatrix::pure(&maximally_entangled(d), (d, d)).unwrap();
            let mut brute = 0.0;
            for p in &f.povms {
                for e in &p.elements {
                    // ⟨φ+|P ⊗ conj(P)|φ+⟩ = Tr{P P^†}/d.
                    brute += trace_product(e, e).re / d as f64;
                }
            }
            let j = chen_j(&f, &f.conjugate(), &phi).unwrap();
            assert!((j - brute).abs() < 1e-10);
            assert!(j > 1.0 + f.kappa);
        }
    }

    #[test]
    fn positive_map() {
        let f = family(3, 1.0, 50);
        let cfg = WitnessConfig::identity(f);
        let out = positive_map_apply(&identity(3), &cfg).unwrap();
        assert!(max_abs_diff(&out, &identity(3)) < 1e-12);
        let mut g = rng(51);
        for _ in 0..50 {
            let rho = random_density(3, &mut g);
            let out = positive_map_apply(&rho, &cfg).unwrap();
            assert!(min_eigenvalue(&out) >= -1e-10);
            assert!((trace(&out) - trace(&rho)).norm() < 1e-12);
        }
        let x = crate::random::random_matrix(3, &mut g);
        assert!((trace(&positive_map_apply(&x, &cfg).unwrap()) - trace(&x)).norm() < 1e-12);
        let cfg = WitnessConfig::identity(family(3, 0.8, 52));
        assert!(matches!(positive_map_apply(&identity(3), &cfg), Err(Error::UnsupportedPurity { .. })));
    }
}
