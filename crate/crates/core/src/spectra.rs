//! Spectra of purity-κ MUM elements.
//!
//! A spectrum is the real vector `μ` of eigenvalues of `M_0`, the traceless
//! part of the first POVM element. Element `n` carries the cyclically
//! shifted vector `μ_{n⊕j}`. The MUM relations become:
//!
//! * `Σ_j μ_j = 0`
//! * `Σ_j μ_j² = κ - 1/d`
//! * `-1/d ≤ μ_j ≤ (d-1)/d`
//! * `Σ_j μ_{j} μ_{j⊕s} = -(κ - 1/d)/(d - 1)` for every offset `s ≠ 0`
//!
//! The last two equalities say that the circular autocorrelation of `μ` is
//! flat off the zero lag, which is the same as a flat power spectrum on the
//! nonzero Fourier modes. [`synthesize_spectrum`] builds `μ` directly from
//! that description: zero DC component, equal magnitudes on every other
//! mode, and one free phase per conjugate pair of modes.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const VALIDATION_TOL: f64 = 1e-10;
const BOUND_SLACK: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub d: usize,
    pub kappa: f64,
    pub mu: Vec<f64>,
}

impl Spectrum {
    /// Wraps raw values without validation; see [`validate_spectrum`].
    pub fn new(d: usize, kappa: f64, mu: Vec<f64>) -> Self {
        Spectrum { d, kappa, mu }
    }

    /// The trivial `κ = 1/d` spectrum.
    pub fn maximally_mixed(d: usize) -> Self {
        Spectrum { d, kappa: 1.0 / d as f64, mu: vec![0.0; d] }
    }

    /// `μ_{n⊕j}`.
    pub fn shifted(&self, n: usize, j: usize) -> f64 {
        self.mu[(n + j) % self.d]
    }

    pub fn excess_purity(&self) -> f64 {
        self.kappa - 1.0 / self.d as f64
    }
}

fn check_purity(d: usize, kappa: f64) -> Result<()> {
    let lo = 1.0 / d as f64;
    if !kappa.is_finite() || kappa < lo - BOUND_SLACK || kappa > 1.0 + BOUND_SLACK {
        return Err(Error::InvalidPurity { kappa, d });
    }
    Ok(())
}

/// Number of free continuous parameters of a spectrum at fixed `(d, κ)`:
/// `⌊(d-1)/2⌋`.
pub fn independent_param_count(d: usize) -> Result<usize> {
    if d < 2 {
        return Err(Error::InvalidDimension { d, min: 2 });
    }
    Ok((d - 1) / 2)
}

/// `1/d + Σ μ²`, with `d` the length of `mu`.
pub fn purity_of(mu: &[f64]) -> f64 {
    1.0 / mu.len() as f64 + mu.iter().map(|x| x * x).sum::<f64>()
}

/// Builds a spectrum with a flat off-zero power spectrum.
///
/// `phases` holds one phase for each Fourier mode `m = 1..=⌊(d-1)/2⌋`; for
/// even `d` the self-conjugate mode `d/2` is real and its sign is
/// `even_sign` (ignored for odd `d`). The result is
///
/// `μ_j = A [Σ_m 2 cos(2π j m / d + φ_m) + s (-1)^j]`,
/// `A = √((κ - 1/d) / (d (d - 1)))`.
///
/// Positivity is checked, never repaired: an entry below `-1/d` is an
/// [`Error::InfeasibleParameters`].
pub fn synthesize_spectrum(d: usize, kappa: f64, phases: &[f64], even_sign: i8) -> Result<Spectrum> {
    let count = independent_param_count(d)?;
    check_purity(d, kappa)?;
    if phases.len() != count {
        return Err(Error::InvalidParameter(format!(
            "dimension {d} takes {count} phases, got {}",
            phases.len()
        )));
    }
    if let Some(bad) = phases.iter().find(|p| !p.is_finite()) {
        return Err(Error::InvalidParameter(format!("non-finite phase {bad}")));
    }
    if d.is_multiple_of(2) && even_sign != 1 && even_sign != -1 {
        return Err(Error::InvalidParameter(format!("even_sign must be ±1, got {even_sign}")));
    }
    let df = d as f64;
    let excess = (kappa - 1.0 / df).max(0.0);
    let amp = (excess / (df * (df - 1.0))).sqrt();
    let mu: Vec<f64> = (0..d)
        .map(|j| {
            let mut x = 0.0;
            for (m, phi) in phases.iter().enumerate() {
                let m = (m + 1) as f64;
                x += 2.0 * (TAU * j as f64 * m / df + phi.rem_euclid(TAU)).cos();
            }
            if d.is_multiple_of(2) {
                let alt = if j % 2 == 0 { 1.0 } else { -1.0 };
                x += f64::from(even_sign) * alt;
            }
            amp * x
        })
        .collect();
    check_bounds(d, &mu)?;
    Ok(Spectrum { d, kappa, mu })
}

fn check_bounds(d: usize, mu: &[f64]) -> Result<()> {
    let lo = -1.0 / d as f64;
    let hi = (d as f64 - 1.0) / d as f64;
    for (index, &value) in mu.iter().enumerate() {
        if value < lo - BOUND_SLACK {
            return Err(Error::InfeasibleParameters { index, value, bound: lo });
        }
        if value > hi + BOUND_SLACK {
            return Err(Error::InfeasibleParameters { index, value, bound: hi });
        }
    }
    Ok(())
}

/// The explicit qutrit parameterization
/// `μ_0 = √(2/3) √(κ-1/3) cos φ`, `μ_{1,2} = √(2/3) √(κ-1/3) cos(φ ± 2π/3)`.
pub fn spectrum_d3(kappa: f64, phi: f64) -> Result<Spectrum> {
    check_purity(3, kappa)?;
    let r = (2.0f64 / 3.0).sqrt() * (kappa - 1.0 / 3.0).max(0.0).sqrt();
    let mu = vec![r * phi.cos(), r * (phi + 2.0 * PI / 3.0).cos(), r * (phi - 2.0 * PI / 3.0).cos()];
    check_bounds(3, &mu)?;
    Ok(Spectrum { d: 3, kappa, mu })
}

/// Solves the sum and sum-of-squares constraints for two entries given the
/// other `d-2`: `μ_{p,m} = -S/2 ± ½√(2(κ-1/d) - 2T - S²)`.
///
/// `partial` holds the known entries in index order with positions `p` and
/// `m` removed; `d = partial.len() + 2`. Returns `(μ_p, μ_m)` with the `+`
/// root at `p`.
pub fn complete_pair(partial: &[f64], kappa: f64, positions: (usize, usize)) -> Result<(f64, f64)> {
    let d = partial.len() + 2;
    let (p, m) = positions;
    if p == m || p >= d || m >= d {
        return Err(Error::InvalidParameter(format!("bad positions ({p}, {m}) for dimension {d}")));
    }
    check_purity(d, kappa)?;
    let s: f64 = partial.iter().sum();
    let t: f64 = partial.iter().map(|x| x * x).sum();
    let discriminant = 2.0 * (kappa - 1.0 / d as f64) - 2.0 * t - s * s;
    if discriminant < -BOUND_SLACK {
        return Err(Error::InfeasibleCompletion { discriminant });
    }
    let root = discriminant.max(0.0).sqrt();
    Ok((-0.5 * s + 0.5 * root, -0.5 * s - 0.5 * root))
}

/// Inserts the output of [`complete_pair`] back into a full vector.
pub fn complete_spectrum(partial: &[f64], kappa: f64, positions: (usize, usize)) -> Result<Vec<f64>> {
    let (mp, mm) = complete_pair(partial, kappa, positions)?;
    let d = partial.len() + 2;
    let mut rest = partial.iter();
    Ok((0..d)
        .map(|i| {
            if i == positions.0 {
                mp
            } else if i == positions.1 {
                mm
            } else {
                *rest.next().expect("partial length")
            }
        })
        .collect())
}

/// Circular cross-correlation `Σ_j μ_j μ_{j⊕s}`.
pub fn circular_correlation(mu: &[f64], offset: usize) -> f64 {
    let d = mu.len();
    (0..d).map(|j| mu[j] * mu[(j + offset) % d]).sum()
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    pub zero_sum: f64,
    pub sum_of_squares: f64,
    /// Largest amount by which any entry leaves `[-1/d, (d-1)/d]`.
    pub bound_violation: f64,
    /// Residuals for offsets `1..=⌊d/2⌋`.
    pub cross_correlation: Vec<f64>,
    pub max_residual: f64,
    pub pass: bool,
}

pub fn validate_spectrum(s: &Spectrum) -> SpectrumReport {
    let d = s.mu.len();
    let df = d as f64;
    let excess = s.kappa - 1.0 / df;
    let zero_sum = s.mu.iter().sum::<f64>().abs();
    let sum_of_squares = (s.mu.iter().map(|x| x * x).sum::<f64>() - excess).abs();
    let lo = -1.0 / df;
    let hi = (df - 1.0) / df;
    let bound_violation = s
        .mu
        .iter()
        .map(|&x| (lo - x).max(x - hi).max(0.0))
        .fold(0.0, f64::max);
    let target = if d > 1 { -excess / (df - 1.0) } else { 0.0 };
    let cross_correlation: Vec<f64> =
        (1..=d / 2).map(|o| (circular_correlation(&s.mu, o) - target).abs()).collect();
    let mut max_residual = zero_sum.max(sum_of_squares).max(bound_violation);
    for &r in &cross_correlation {
        max_residual = max_residual.max(r);
    }
    let shape_ok = d == s.d && d >= 1;
    SpectrumReport {
        zero_sum,
        sum_of_squares,
        bound_violation,
        cross_correlation,
        max_residual: if shape_ok { max_residual } else { f64::INFINITY },
        pass: shape_ok && max_residual <= VALIDATION_TOL,
    }
}

/// Phases that reproduce the rank-one (κ = 1) spectrum with its peak at
/// position `peak`: `φ_m = -2π m peak / d`, sign `(-1)^peak`.
pub fn peaked_phases(d: usize, peak: usize) -> (Vec<f64>, i8) {
    let phases = (1..=(d - 1) / 2)
        .map(|m| (-TAU * (m * peak) as f64 / d as f64).rem_euclid(TAU))
        .collect();
    let sign = if peak.is_multiple_of(2) { 1 } else { -1 };
    (phases, sign)
}

/// Draws phases for which [`synthesize_spectrum`] succeeds at `(d, κ)`.
///
/// Uniform phases are tried first; if infeasible they are pulled towards
/// a randomly chosen [`peaked_phases`] anchor (always feasible, since it
/// scales the rank-one spectrum by a factor at most 1) until they fit.
pub fn sample_feasible_phases(d: usize, kappa: f64, rng: &mut impl Rng) -> Result<(Vec<f64>, i8)> {
    let count = independent_param_count(d)?;
    check_purity(d, kappa)?;
    let start: Vec<f64> = (0..count).map(|_| rng.random::<f64>() * TAU).collect();
    let sign: i8 = if rng.random::<bool>() { 1 } else { -1 };
    if synthesize_spectrum(d, kappa, &start, sign).is_ok() {
        return Ok((start, sign));
    }
    let peak = rng.random_range(0..d);
    let (anchor, anchor_sign) = peaked_phases(d, peak);
    // Wrapped offsets in (-π, π] so the interpolation takes the short way.
    let offsets: Vec<f64> = start
        .iter()
        .zip(&anchor)
        .map(|(s, a)| (s - a + PI).rem_euclid(TAU) - PI)
        .collect();
    let mut scale = 1.0;
    for _ in 0..60 {
        scale *= 0.5;
        let trial: Vec<f64> =
            anchor.iter().zip(&offsets).map(|(a, o)| (a + scale * o).rem_euclid(TAU)).collect();
        if synthesize_spectrum(d, kappa, &trial, anchor_sign).is_ok() {
            return Ok((trial, anchor_sign));
        }
    }
    Ok((anchor, anchor_sign))
}
