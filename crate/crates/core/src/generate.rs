//! Seeded generators for random and structured bipartite states.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::entropy::DISTRIBUTION_TOLERANCE;
use crate::error::{Error, Result};
use crate::linalg::{kron, ComplexMatrix, ZERO};
use crate::random::{gaussian_vector, orthonormal_columns, random_density, random_unit_vector, rng, SeededRng};
use crate::states::{DensityMatrix, Ensemble, PureState, SpectralDecomposition};
use crate::theorems::check_condition_pure;

/// Minimum spacing between weights when the spectral decomposition must be unique.
pub const WEIGHT_GAP: f64 = 0.05;
/// Minimum cross-term norm of generated violating pairs.
pub const MIN_VIOLATION: f64 = 1e-2;
const MAX_REJECTIONS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    RandomDensity,
    RandomPure,
    /// `Σ p_i |u_i⟩⟨u_i|` with `|u_i⟩ ∈ V_i ⊗ H_B` on mutually orthogonal `V_i ⊆ H_A`.
    ConditionPureFamily,
    /// `Σ p_i ρ_i` with `ρ_i` mixed on `V_i ⊗ H_B`, `V_i` mutually orthogonal.
    OrthogonalMixedFamily,
    /// `Σ_x p_x |x⟩⟨x| ⊗ ρ_B^{(x)}`.
    ClassicalQuantum,
    Product,
}

/// Everything a generator needs; missing optional fields are drawn from the seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub family: Family,
    /// `[dA, dB]`.
    pub dims: Vec<usize>,
    /// Dimension of each member's A-block, for the block families.
    #[serde(default)]
    pub block_dims: Vec<usize>,
    #[serde(default)]
    pub weights: Vec<f64>,
    pub seed: u64,
    /// Rank of random densities (whole state, or each block member).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    /// Fixed Schmidt probabilities per member of a condition family:
    /// `|u_i⟩ = Σ_j √q_j |e_{o_i + j}⟩|j⟩`, with `o_i` the block offset.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schmidt: Option<Vec<Vec<f64>>>,
}

impl GenSpec {
    pub fn new(family: Family, dims: (usize, usize), seed: u64) -> Self {
        Self {
            family,
            dims: vec![dims.0, dims.1],
            block_dims: Vec::new(),
            weights: Vec::new(),
            seed,
            rank: None,
            schmidt: None,
        }
    }

    pub fn with_blocks(mut self, block_dims: Vec<usize>) -> Self {
        self.block_dims = block_dims;
        self
    }

    pub fn with_weights(mut self, weights: Vec<f64>) -> Self {
        self.weights = weights;
        self
    }

    pub fn with_rank(mut self, rank: usize) -> Self {
        self.rank = Some(rank);
        self
    }

    pub fn with_schmidt(mut self, schmidt: Vec<Vec<f64>>) -> Self {
        self.schmidt = Some(schmidt);
        self
    }

    fn bipartite(&self) -> Result<(usize, usize)> {
        match self.dims.as_slice() {
            &[a, b] if a >= 1 && b >= 1 => Ok((a, b)),
            d => Err(Error::InvalidArgument(format!("dims must be [dA, dB] with positive entries, got {d:?}"))),
        }
    }
}

/// A generated state with whatever structure the generator knows about it.
#[derive(Debug, Clone)]
pub struct Generated {
    pub state: DensityMatrix,
    /// The intended pure-state decomposition (condition and violating families).
    pub decomposition: Option<SpectralDecomposition>,
    /// The intended mixed decomposition (block and classical-quantum families).
    pub ensemble: Option<Ensemble>,
}

fn check_weights(w: &[f64], count: usize, gap: bool) -> Result<()> {
    if w.len() != count {
        return Err(Error::InvalidArgument(format!("expected {count} weights, got {}", w.len())));
    }
    if w.iter().any(|&p| !(p > 0.0)) {
        return Err(Error::InvalidDistribution("weights must be positive".into()));
    }
    let total: f64 = w.iter().sum();
    if !((total - 1.0).abs() <= DISTRIBUTION_TOLERANCE) {
        return Err(Error::InvalidDistribution(format!("weights sum to {total}")));
    }
    if gap && min_gap(w) < WEIGHT_GAP {
        return Err(Error::InvalidDistribution(format!(
            "weights {w:?} are closer than {WEIGHT_GAP}; the spectral decomposition would not be unique"
        )));
    }
    Ok(())
}

fn min_gap(w: &[f64]) -> f64 {
    let mut s = w.to_vec();
    s.sort_by(f64::total_cmp);
    s.windows(2).map(|p| p[1] - p[0]).fold(f64::INFINITY, f64::min)
}

/// Positive weights summing to one whose pairwise gaps are at least [`WEIGHT_GAP`].
pub fn random_weights(g: &mut SeededRng, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::InvalidArgument("need at least one weight".into()));
    }
    // Sorted weights w_k ≥ w_0 + k·gap, so the gaps alone use gap·count(count−1)/2.
    if WEIGHT_GAP * (count * (count - 1) / 2) as f64 >= 1.0 {
        return Err(Error::Infeasible(format!("{count} weights cannot keep a gap of {WEIGHT_GAP}")));
    }
    for _ in 0..MAX_REJECTIONS {
        let raw: Vec<f64> = (0..count).map(|_| g.random_range(0.05..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let w: Vec<f64> = raw.iter().map(|x| x / total).collect();
        if count == 1 || min_gap(&w) >= WEIGHT_GAP {
            return Ok(w);
        }
    }
    Err(Error::Infeasible("could not draw well-separated weights".into()))
}

fn resolve_weights(spec: &GenSpec, g: &mut SeededRng, count: usize, gap: bool) -> Result<Vec<f64>> {
    if spec.weights.is_empty() {
        random_weights(g, count)
    } else {
        check_weights(&spec.weights, count, gap)?;
        Ok(spec.weights.clone())
    }
}

fn resolve_blocks(spec: &GenSpec, da: usize) -> Result<Vec<usize>> {
    let blocks = if spec.block_dims.is_empty() {
        if da < 2 {
            return Err(Error::Infeasible("block families need dA >= 2".into()));
        }
        vec![da / 2, da - da / 2]
    } else {
        spec.block_dims.clone()
    };
    if blocks.contains(&0) {
        return Err(Error::Infeasible("block dimensions must be positive".into()));
    }
    let total: usize = blocks.iter().sum();
    if total > da {
        return Err(Error::Infeasible(format!("blocks {blocks:?} need {total} A-dimensions, only {da} available")));
    }
    Ok(blocks)
}

/// Embeds a `bd·dB` vector on `V ⊗ H_B`, `V` spanned by A-basis vectors `offset..offset+bd`.
fn embed_vector(v: &[Complex64], offset: usize, db: usize, da: usize) -> Vec<Complex64> {
    let mut out = vec![ZERO; da * db];
    for (idx, z) in v.iter().enumerate() {
        out[(offset + idx / db) * db + idx % db] = *z;
    }
    out
}

fn embed_matrix(m: &ComplexMatrix, offset: usize, db: usize, da: usize) -> ComplexMatrix {
    let n = da * db;
    let shift = offset * db;
    ComplexMatrix::from_fn(n, n, |i, j| {
        if i >= shift && j >= shift && i - shift < m.rows() && j - shift < m.cols() {
            m[(i - shift, j - shift)]
        } else {
            ZERO
        }
    })
}

fn pure_mixture(weights: &[f64], vectors: &[PureState]) -> Result<(DensityMatrix, SpectralDecomposition)> {
    let d = SpectralDecomposition::new(weights.to_vec(), vectors.to_vec())?;
    Ok((d.reconstruct(), d))
}

/// Generates a state from `spec`. Identical specs give bit-identical output.
pub fn gen(spec: &GenSpec) -> Result<Generated> {
    let (da, db) = spec.bipartite()?;
    let n = da * db;
    let mut g = rng(spec.seed);
    let dims = vec![da, db];
    let plain = |state| Generated { state, decomposition: None, ensemble: None };
    match spec.family {
        Family::RandomDensity => {
            let rank = spec.rank.unwrap_or(n);
            if rank == 0 || rank > n {
                return Err(Error::Infeasible(format!("rank {rank} not in 1..={n}")));
            }
            Ok(plain(DensityMatrix::new(random_density(&mut g, n, rank), dims)?))
        }
        Family::RandomPure => {
            let psi = PureState::new(random_unit_vector(&mut g, n), dims)?;
            Ok(plain(psi.to_density()))
        }
        Family::Product => {
            let a = DensityMatrix::new(random_density(&mut g, da, da), vec![da])?;
            let b = DensityMatrix::new(random_density(&mut g, db, db), vec![db])?;
            Ok(plain(a.tensor(&b)))
        }
        Family::ClassicalQuantum => {
            let w = resolve_weights(spec, &mut g, da, false)?;
            let mut members = Vec::with_capacity(da);
            for x in 0..da {
                let rb = random_density(&mut g, db, spec.rank.unwrap_or(db).clamp(1, db));
                let mut px = ComplexMatrix::zeros(da, da);
                px[(x, x)] = Complex64::new(1.0, 0.0);
                members.push(DensityMatrix::new(kron(&px, &rb), dims.clone())?);
            }
            let e = Ensemble::new(w, members)?;
            Ok(Generated { state: e.mixture(), decomposition: None, ensemble: Some(e) })
        }
        Family::ConditionPureFamily => {
            let blocks = resolve_blocks(spec, da)?;
            let w = resolve_weights(spec, &mut g, blocks.len(), false)?;
            if let Some(s) = &spec.schmidt {
                if s.len() != blocks.len() {
                    return Err(Error::InvalidArgument(format!(
                        "{} Schmidt lists for {} blocks",
                        s.len(),
                        blocks.len()
                    )));
                }
            }
            let mut vectors = Vec::with_capacity(blocks.len());
            let mut offset = 0;
            for (i, &bd) in blocks.iter().enumerate() {
                let local = match spec.schmidt.as_ref().map(|s| &s[i]) {
                    Some(q) => schmidt_vector(q, bd, db)?,
                    None => gaussian_vector(&mut g, bd * db),
                };
                vectors.push(PureState::normalized(embed_vector(&local, offset, db, da), dims.clone())?);
                offset += bd;
            }
            let (state, d) = pure_mixture(&w, &vectors)?;
            Ok(Generated { state, decomposition: Some(d), ensemble: None })
        }
        Family::OrthogonalMixedFamily => {
            let blocks = resolve_blocks(spec, da)?;
            let w = resolve_weights(spec, &mut g, blocks.len(), false)?;
            let mut members = Vec::with_capacity(blocks.len());
            let mut offset = 0;
            for &bd in &blocks {
                let local_n = bd * db;
                let rank = spec.rank.unwrap_or(local_n).clamp(1, local_n);
                let local = random_density(&mut g, local_n, rank);
                members.push(DensityMatrix::new(embed_matrix(&local, offset, db, da), dims.clone())?);
                offset += bd;
            }
            let e = Ensemble::new(w, members)?;
            Ok(Generated { state: e.mixture(), decomposition: None, ensemble: Some(e) })
        }
    }
}

/// `Σ_j √q_j |j⟩|j⟩` on a `bd ⊗ db` block.
fn schmidt_vector(q: &[f64], bd: usize, db: usize) -> Result<Vec<Complex64>> {
    if q.len() > bd.min(db) {
        return Err(Error::Infeasible(format!(
            "{} Schmidt coefficients do not fit a {bd}x{db} block",
            q.len()
        )));
    }
    if q.iter().any(|&x| !(x >= 0.0)) {
        return Err(Error::InvalidDistribution("Schmidt probabilities must be nonnegative".into()));
    }
    let mut v = vec![ZERO; bd * db];
    for (j, &qj) in q.iter().enumerate() {
        v[j * db + j] = Complex64::new(qj.sqrt(), 0.0);
    }
    Ok(v)
}

/// A rank-two state `p|u_1⟩⟨u_1| + (1−p)|u_2⟩⟨u_2|` whose pair fails the
/// cross-term condition by at least [`MIN_VIOLATION`]. The pair is drawn
/// as orthonormal Gaussian vectors and redrawn until the violation is large
/// enough. Default weights are `(0.6, 0.4)`.
pub fn gen_violating(spec: &GenSpec) -> Result<(DensityMatrix, SpectralDecomposition)> {
    let (da, db) = spec.bipartite()?;
    if db < 2 {
        return Err(Error::Infeasible("dB = 1 leaves no room for entangled pairs".into()));
    }
    let weights = if spec.weights.is_empty() { vec![0.6, 0.4] } else { spec.weights.clone() };
    check_weights(&weights, weights.len(), true)?;
    if weights.len() > da * db {
        return Err(Error::Infeasible(format!("{} members do not fit dimension {}", weights.len(), da * db)));
    }
    let mut g = rng(spec.seed);
    for _ in 0..MAX_REJECTIONS {
        let cols = orthonormal_columns(&mut g, da * db, weights.len());
        let vectors = cols
            .into_iter()
            .map(|c| PureState::new(c, vec![da, db]))
            .collect::<Result<Vec<_>>>()?;
        let d = SpectralDecomposition::new(weights.clone(), vectors)?;
        if check_condition_pure(&d).max_violation >= MIN_VIOLATION {
            return Ok((d.reconstruct(), d));
        }
    }
    Err(Error::Infeasible("no violating pair found".into()))
}

/// `w_0 |Φ+⟩⟨Φ+| + w_1 |Ψ+⟩⟨Ψ+|` on two qubits.
pub fn bell_pair_mixture(weights: (f64, f64)) -> Result<(DensityMatrix, SpectralDecomposition)> {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let phi = PureState::new(vec![h, ZERO, ZERO, h], vec![2, 2])?;
    let psi = PureState::new(vec![ZERO, h, h, ZERO], vec![2, 2])?;
    pure_mixture(&[weights.0, weights.1], &[phi, psi])
}
