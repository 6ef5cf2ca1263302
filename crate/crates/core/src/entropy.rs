//! Shannon and von Neumann entropies (in bits) and the correlation
//! quantities built from them.

use crate::error::{Error, Result};
use crate::linalg::{herm_eigenvalues_unchecked, ComplexMatrix, Subsystem};
use crate::measurements::{apply_on_a, Measurement};
use crate::states::{DensityMatrix, Ensemble};

/// Probabilities at or below this value contribute nothing to an entropy.
pub const PROBABILITY_FLOOR: f64 = 1e-15;
pub const DISTRIBUTION_TOLERANCE: f64 = 1e-10;

/// Nonnegative weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbDist(Vec<f64>);

impl ProbDist {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidDistribution("empty distribution".into()));
        }
        if let Some(v) = values.iter().find(|&&v| !(v >= 0.0)) {
            return Err(Error::InvalidDistribution(format!("entry {v} is negative")));
        }
        let total: f64 = values.iter().sum();
        if !((total - 1.0).abs() <= DISTRIBUTION_TOLERANCE) {
            return Err(Error::InvalidDistribution(format!("entries sum to {total}")));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

/// `H(p) = −Σ p log₂ p`.
pub fn shannon(p: &ProbDist) -> f64 {
    shannon_of(p.values())
}

pub(crate) fn shannon_of(values: &[f64]) -> f64 {
    let h: f64 = values
        .iter()
        .filter(|&&v| v > PROBABILITY_FLOOR)
        .map(|&v| -v * v.log2())
        .sum();
    // A point mass sums to −0.
    h + 0.0
}

/// `S(ρ) = −Tr ρ log₂ ρ`, the Shannon entropy of the spectrum.
pub fn von_neumann(rho: &DensityMatrix) -> f64 {
    let spectrum: Vec<f64> = rho.eigenvalues().into_iter().map(|l| l.max(0.0)).collect();
    shannon_of(&spectrum)
}

/// `η S(σ/η)` for an unnormalized positive operator `σ` with trace `η`.
///
/// Returns zero when the trace is at or below `prob_floor`.
pub(crate) fn weighted_entropy(sigma: &ComplexMatrix, prob_floor: f64) -> f64 {
    if sigma.rows() == 2 {
        return weighted_entropy_2x2(sigma[(0, 0)].re, sigma[(1, 1)].re, sigma[(0, 1)].norm_sqr(), prob_floor);
    }
    weighted_entropy_of(&herm_eigenvalues_unchecked(sigma), prob_floor)
}

/// [`weighted_entropy`] for `[[a, b], [b*, d]]` given `|b|²`, without allocating.
pub(crate) fn weighted_entropy_2x2(a: f64, d: f64, off_sq: f64, prob_floor: f64) -> f64 {
    let mean = 0.5 * (a + d);
    let half = 0.5 * (a - d);
    let r = (half * half + off_sq).sqrt();
    weighted_entropy_of(&[mean - r, mean + r], prob_floor)
}

fn weighted_entropy_of(eigs: &[f64], prob_floor: f64) -> f64 {
    let eta: f64 = eigs.iter().map(|l| l.max(0.0)).sum();
    if eta <= prob_floor {
        return 0.0;
    }
    let s: f64 = eigs
        .iter()
        .map(|&l| l.max(0.0) / eta)
        .filter(|&q| q > PROBABILITY_FLOOR)
        .map(|q| -eta * q * q.log2())
        .sum();
    s + 0.0
}

/// Measured conditional entropy `Σ_x η_x S(ρ_{B|x})` for a measurement on A.
pub fn conditional_entropy<M: Measurement + ?Sized>(rho_ab: &DensityMatrix, m: &M) -> Result<f64> {
    let ens = apply_on_a(rho_ab, m)?;
    Ok(ens
        .probabilities()
        .iter()
        .zip(ens.states())
        .map(|(p, s)| p * von_neumann(s))
        .sum())
}

/// `I(A:B) = S(ρ_A) + S(ρ_B) − S(ρ_AB)`.
pub fn mutual_information(rho_ab: &DensityMatrix) -> Result<f64> {
    let sa = von_neumann(&rho_ab.reduced(Subsystem::A)?);
    let sb = von_neumann(&rho_ab.reduced(Subsystem::B)?);
    Ok(sa + sb - von_neumann(rho_ab))
}

/// `H({η_i}) + Σ η_i S(ρ_i) − S(Σ η_i ρ_i)`; nonnegative, and zero exactly
/// when the members have mutually orthogonal supports.
pub fn ensemble_entropy_gap(e: &Ensemble) -> f64 {
    let h = shannon_of(e.weights());
    let avg: f64 = e
        .weights()
        .iter()
        .zip(e.states())
        .map(|(w, s)| w * von_neumann(s))
        .sum();
    h + avg - von_neumann(&e.mixture())
}
