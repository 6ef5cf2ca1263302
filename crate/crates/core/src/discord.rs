//! Minimization of the measured conditional entropy, and the discord,
//! classical-correlation and entanglement quantities built on it.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::entropy::{conditional_entropy, von_neumann, weighted_entropy, weighted_entropy_2x2, PROBABILITY_FLOOR};
use crate::error::{Error, Result};
use crate::linalg::{complete_to_unitary, herm_eig, herm_eigenvalues, ComplexMatrix, Subsystem, ZERO};
use crate::measurements::{compress_to_system, neumark_extension, Measurement, Povm, ProjectiveMeasurement};
use crate::optim::{nelder_mead, NelderMeadOptions};
use crate::params::IsometryParam;
use crate::random::{random_angle, rng};
use crate::states::{DensityMatrix, PureState, SpectralDecomposition, RANK_CUTOFF};
use crate::theorems::check_condition_pure;

/// Restarts whose minima lie within this distance of the best one count as agreeing.
pub const AGREEMENT_TOLERANCE: f64 = 1e-7;

/// Multi-start settings shared by every optimized quantity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub starts: usize,
    /// Iteration cap per simplex run. Runs over `n` parameters get at least `100·n`.
    pub max_iterations: usize,
    pub function_tolerance: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            starts: 32,
            max_iterations: 2000,
            function_tolerance: 1e-10,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.starts == 0 {
            return Err(Error::InvalidArgument("at least one start is required".into()));
        }
        if !(self.function_tolerance > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "function tolerance must be positive, got {}",
                self.function_tolerance
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidArgument("max_iterations must be positive".into()));
        }
        Ok(())
    }

    fn local_options(&self, dim: usize) -> NelderMeadOptions {
        NelderMeadOptions {
            max_iterations: self.max_iterations.max(100 * dim),
            function_tolerance: self.function_tolerance,
            stall_iterations: (2 * dim).max(200),
            ..NelderMeadOptions::default()
        }
    }
}

/// Outcome of a discord optimization.
#[derive(Debug, Clone)]
pub struct DiscordResult<M> {
    /// `S(ρ_A) − S(ρ_AB) + min_conditional_entropy`.
    pub value: f64,
    pub optimal_measurement: M,
    pub min_conditional_entropy: f64,
    /// Angles of the optimal isometry (see [`IsometryParam`]).
    pub parameters: Vec<f64>,
    pub restarts_agreeing: usize,
    pub starts: usize,
    pub converged: bool,
}

/// Which measurement class a search runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Projective,
    Povm,
}

/// How the POVM minimum is searched for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// Rank-one POVMs parametrized directly as isometries.
    Direct,
    /// Projective measurements on `A⊗E` for the state `ρ_AB ⊗ |0⟩⟨0|_E`.
    Neumark,
}

/// The state re-expressed on `supp(ρ_A) ⊗ H_B`, where every rank-one effect
/// only matters through its components on the support.
struct Reduced {
    da: usize,
    db: usize,
    rank: usize,
    /// Eigenvectors of `ρ_A`, support first.
    basis: ComplexMatrix,
    /// For each `b ≤ b'` (row-major upper triangle), the `rank × rank` block
    /// `ρ̃[(·,b),(·,b')]` of the reduced state, contiguous.
    blocks: Vec<Vec<Complex64>>,
}

impl Reduced {
    fn new(rho_ab: &DensityMatrix) -> Result<Self> {
        let (da, db) = rho_ab.bipartite_dims()?;
        let eig = herm_eig(rho_ab.reduced(Subsystem::A)?.matrix())?;
        let order: Vec<usize> = (0..da).rev().collect();
        let rank = eig.eigenvalues.iter().filter(|&&l| l > RANK_CUTOFF).count().max(1);
        let basis = ComplexMatrix::from_fn(da, da, |a, s| eig.eigenvectors[(a, order[s])]);

        let m = rho_ab.matrix();
        let side = rank * db;
        // Contract one index at a time: first (Q† ⊗ I) ρ, then · (Q ⊗ I).
        let mut half = vec![ZERO; side * da * db];
        for s in 0..rank {
            for b in 0..db {
                for col in 0..da * db {
                    let mut acc = ZERO;
                    for a in 0..da {
                        acc += basis[(a, s)].conj() * m[(a * db + b, col)];
                    }
                    half[(s * db + b) * da * db + col] = acc;
                }
            }
        }
        let mut rho = vec![ZERO; side * side];
        for row in 0..side {
            for s in 0..rank {
                for b in 0..db {
                    let mut acc = ZERO;
                    for a in 0..da {
                        acc += half[row * da * db + a * db + b] * basis[(a, s)];
                    }
                    rho[row * side + s * db + b] = acc;
                }
            }
        }
        let mut blocks = Vec::with_capacity(db * (db + 1) / 2);
        for b1 in 0..db {
            for b2 in b1..db {
                blocks.push(
                    (0..rank * rank)
                        .map(|i| rho[(i / rank * db + b1) * side + (i % rank) * db + b2])
                        .collect(),
                );
            }
        }
        Ok(Self { da, db, rank, basis, blocks })
    }

    /// `Σ_x η_x S(ρ_{B|x})` for the effects `|v_x⟩⟨v_x|`, `v_x = conj(row x of t)`
    /// in the support basis.
    fn objective(&self, t: &[Complex64], scratch: &mut Scratch) -> f64 {
        let (r, db) = (self.rank, self.db);
        let rows = t.len() / r;
        let mut total = 0.0;
        for x in 0..rows {
            let tx = &t[x * r..(x + 1) * r];
            for (s, ts) in tx.iter().enumerate() {
                for (s2, ts2) in tx.iter().enumerate() {
                    scratch.outer[s * r + s2] = ts * ts2.conj();
                }
            }
            let form = |block: &[Complex64]| -> Complex64 {
                block.iter().zip(&scratch.outer).map(|(m, w)| m * w).sum()
            };
            total += if db == 2 {
                let a = form(&self.blocks[0]).re;
                let off = form(&self.blocks[1]);
                let d = form(&self.blocks[2]).re;
                weighted_entropy_2x2(a, d, off.norm_sqr(), PROBABILITY_FLOOR)
            } else {
                let mut p = 0;
                for b1 in 0..db {
                    for b2 in b1..db {
                        let v = form(&self.blocks[p]);
                        scratch.sigma[(b1, b2)] = v;
                        scratch.sigma[(b2, b1)] = v.conj();
                        p += 1;
                    }
                }
                weighted_entropy(&scratch.sigma, PROBABILITY_FLOOR)
            };
        }
        total
    }

    /// Effect vectors on `H_A` for the rows of `t`.
    fn effect_vectors(&self, t: &ComplexMatrix) -> Vec<Vec<Complex64>> {
        (0..t.rows())
            .map(|x| {
                (0..self.da)
                    .map(|a| (0..self.rank).map(|s| t[(x, s)].conj() * self.basis[(a, s)]).sum())
                    .collect()
            })
            .collect()
    }

    /// Rank-one projective measurement whose basis restricts to `t` on the support.
    fn projective_from(&self, t: &ComplexMatrix) -> Result<ProjectiveMeasurement> {
        let w = complete_to_unitary(t)?;
        let u = self.basis.matmul(&w.adjoint())?;
        ProjectiveMeasurement::from_basis(&u)
    }

    /// Rank-one POVM from `t`, with the kernel of `ρ_A` appended as extra outcomes.
    fn povm_from(&self, t: &ComplexMatrix) -> Result<Povm> {
        let mut vectors = self.effect_vectors(t);
        for s in self.rank..self.da {
            vectors.push(self.basis.column(s));
        }
        Povm::rank_one(&vectors)
    }

    /// Support-basis isometry (`da × rank`) of a projective measurement's basis.
    fn isometry_of(&self, m: &ProjectiveMeasurement, rows: usize) -> ComplexMatrix {
        let mut t = ComplexMatrix::zeros(rows, self.rank);
        for (x, p) in m.projectors().iter().enumerate() {
            // Rank-one projector |u⟩⟨u|: recover u up to phase from its largest column.
            let col = (0..self.da)
                .max_by(|&a, &b| p[(a, a)].re.total_cmp(&p[(b, b)].re))
                .unwrap_or(0);
            let scale = p[(col, col)].re.sqrt();
            let u: Vec<Complex64> = (0..self.da).map(|a| p[(a, col)] / scale).collect();
            for s in 0..self.rank {
                let q = self.basis.column(s);
                let ov: Complex64 = u.iter().zip(&q).map(|(ua, qa)| ua.conj() * qa).sum();
                t[(x, s)] = ov;
            }
        }
        t
    }
}

/// Buffers reused across objective evaluations.
struct Scratch {
    outer: Vec<Complex64>,
    sigma: ComplexMatrix,
}

impl Scratch {
    fn new(red: &Reduced) -> Self {
        Self {
            outer: vec![ZERO; red.rank * red.rank],
            sigma: ComplexMatrix::zeros(red.db, red.db),
        }
    }
}

struct Search {
    params: Vec<f64>,
    restarts_agreeing: usize,
    starts: usize,
    converged: bool,
}

/// Multi-start minimization over `param`. `seeds` are extra starting points
/// placed before the random ones, so they win ties.
fn search(red: &Reduced, param: &IsometryParam, cfg: &OptimizerConfig, seeds: &[Vec<f64>]) -> Result<Search> {
    cfg.validate()?;
    let n = param.len();
    let mut g = rng(cfg.seed);
    let mut inits: Vec<Vec<f64>> = seeds.to_vec();
    for _ in 0..cfg.starts {
        inits.push((0..n).map(|_| random_angle(&mut g)).collect());
    }
    let opts = cfg.local_options(n);
    let mut buf = vec![ZERO; param.rows() * param.cols()];
    let mut scratch = Scratch::new(red);
    let mut objective = |p: &[f64]| {
        param.fill(p, &mut buf);
        red.objective(&buf, &mut scratch)
    };

    let mut values = Vec::with_capacity(inits.len());
    let mut best: Option<(f64, Vec<f64>)> = None;
    for x0 in &inits {
        let m = nelder_mead(&mut objective, x0, &opts);
        values.push(m.value);
        if best.as_ref().is_none_or(|(v, _)| m.value < *v) {
            best = Some((m.value, m.x));
        }
    }
    let (value, params) = best.expect("at least one start");
    let mut sorted = values.clone();
    sorted.sort_by(f64::total_cmp);
    let converged = sorted.len() < 2 || sorted[1] - sorted[0] <= AGREEMENT_TOLERANCE;
    let restarts_agreeing = values.iter().filter(|&&v| v - value <= AGREEMENT_TOLERANCE).count();
    Ok(Search {
        params,
        restarts_agreeing,
        starts: inits.len(),
        converged,
    })
}

fn finish<M: Measurement>(rho_ab: &DensityMatrix, s: Search, m: M) -> Result<DiscordResult<M>> {
    let min = conditional_entropy(rho_ab, &m)?;
    let sa = von_neumann(&rho_ab.reduced(Subsystem::A)?);
    Ok(DiscordResult {
        value: sa - von_neumann(rho_ab) + min,
        optimal_measurement: m,
        min_conditional_entropy: min,
        parameters: s.params,
        restarts_agreeing: s.restarts_agreeing,
        starts: s.starts,
        converged: s.converged,
    })
}

/// Projective discord `D^vN_A`; the minimum runs over rank-one projective
/// measurements on A.
pub fn discord_projective(rho_ab: &DensityMatrix, cfg: &OptimizerConfig) -> Result<DiscordResult<ProjectiveMeasurement>> {
    let red = Reduced::new(rho_ab)?;
    let param = IsometryParam::new(red.da, red.rank);
    let s = search(&red, &param, cfg, &[])?;
    let m = red.projective_from(&param.isometry(&s.params))?;
    finish(rho_ab, s, m)
}

/// `min Σ_x η_x S(ρ_{B|x})` over rank-one projective measurements on A.
pub fn min_conditional_entropy_projective(
    rho_ab: &DensityMatrix,
    cfg: &OptimizerConfig,
) -> Result<(f64, ProjectiveMeasurement)> {
    let r = discord_projective(rho_ab, cfg)?;
    Ok((r.min_conditional_entropy, r.optimal_measurement))
}

/// POVM discord `D_A`.
pub fn discord_povm(rho_ab: &DensityMatrix, cfg: &OptimizerConfig, route: Route) -> Result<DiscordResult<Povm>> {
    match route {
        Route::Direct => discord_povm_direct(rho_ab, cfg),
        Route::Neumark => discord_povm_neumark(rho_ab, cfg),
    }
}

/// Searches rank-one POVMs with `rank(ρ_A)²` outcomes on the support of `ρ_A`
/// (at least `d_A`). The projective optimum is one of the starting points.
fn discord_povm_direct(rho_ab: &DensityMatrix, cfg: &OptimizerConfig) -> Result<DiscordResult<Povm>> {
    let red = Reduced::new(rho_ab)?;
    let proj = discord_projective(rho_ab, cfg)?;
    let k = (red.rank * red.rank).max(red.da);
    let param = IsometryParam::new(k, red.rank);
    let seed_t = red.isometry_of(&proj.optimal_measurement, k);
    let seed = param.params_for(&seed_t);
    let s = search(&red, &param, cfg, &[seed])?;
    let m = red.povm_from(&param.isometry(&s.params))?;
    finish(rho_ab, s, m)
}

/// Projective discord of `ρ_AB ⊗ |0⟩⟨0|_E` with `dim H_E = d_A²`, measured
/// on `A⊗E`; the optimal projectors are compressed back to a POVM on A.
fn discord_povm_neumark(rho_ab: &DensityMatrix, cfg: &OptimizerConfig) -> Result<DiscordResult<Povm>> {
    let (da, _) = rho_ab.bipartite_dims()?;
    let n = da * da;
    let ext = neumark_extension(rho_ab, n)?;
    let r = discord_projective(&ext, cfg)?;
    let povm = compress_to_system(&r.optimal_measurement, da, n)?;
    let s = Search {
        params: r.parameters,
        restarts_agreeing: r.restarts_agreeing,
        starts: r.starts,
        converged: r.converged,
    };
    finish(rho_ab, s, povm)
}

/// `J_{B|A} = S(ρ_B) − min conditional entropy`.
pub fn classical_correlations(rho_ab: &DensityMatrix, cfg: &OptimizerConfig, variant: Variant) -> Result<f64> {
    let min = match variant {
        Variant::Projective => discord_projective(rho_ab, cfg)?.min_conditional_entropy,
        Variant::Povm => discord_povm(rho_ab, cfg, Route::Direct)?.min_conditional_entropy,
    };
    Ok(von_neumann(&rho_ab.reduced(Subsystem::B)?) - min)
}

/// `E(ψ) = S(Tr_B |ψ⟩⟨ψ|)` for a bipartite pure state.
pub fn entanglement_entropy(psi: &PureState) -> Result<f64> {
    let rho = psi.to_density();
    rho.bipartite_dims()?;
    Ok(von_neumann(&rho.reduced(Subsystem::A)?))
}

/// `Σ_i p_i S(Tr_B |u_i⟩⟨u_i|)`, the entanglement of formation of a state
/// whose decomposition has mutually orthogonal A-supports.
pub fn eof_flagged(d: &SpectralDecomposition) -> Result<f64> {
    let report = check_condition_pure(d);
    if !report.holds {
        return Err(Error::ConditionViolated {
            max_violation: report.max_violation,
        });
    }
    weighted_pure_entanglement(d)
}

/// `Σ_i p_i S(Tr_B |u_i⟩⟨u_i|)` without checking any condition.
pub fn weighted_pure_entanglement(d: &SpectralDecomposition) -> Result<f64> {
    let mut total = 0.0;
    for (p, u) in d.weights().iter().zip(d.vectors()) {
        total += p * entanglement_entropy(u)?;
    }
    Ok(total)
}

/// Binary entropy `h(x)` in bits.
pub fn binary_entropy(x: f64) -> f64 {
    crate::entropy::shannon_of(&[x, 1.0 - x])
}

/// Wootters concurrence of a two-qubit state.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.bipartite_dims()? != (2, 2) {
        return Err(Error::DimensionMismatch(format!(
            "concurrence needs a 2⊗2 state, got dims {:?}",
            rho.dims()
        )));
    }
    // σ_y ⊗ σ_y is real with entries ±1 on the anti-diagonal.
    let yy = ComplexMatrix::from_fn(4, 4, |i, j| {
        if i + j == 3 {
            Complex64::new(if i == 0 || i == 3 { -1.0 } else { 1.0 }, 0.0)
        } else {
            ZERO
        }
    });
    let tilde = yy.sandwich(&rho.matrix().conj())?;
    let root = herm_eig(rho.matrix())?.map_spectrum(|l| l.max(0.0).sqrt());
    let r = root.sandwich(&tilde)?.hermitian_part();
    let mut lambdas: Vec<f64> = herm_eigenvalues(&r)?.into_iter().map(|l| l.max(0.0).sqrt()).collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
}

/// Entanglement of formation of a two-qubit state from its concurrence.
pub fn eof_two_qubit_oracle(rho: &DensityMatrix) -> Result<f64> {
    let c = concurrence(rho)?.min(1.0);
    Ok(binary_entropy(0.5 * (1.0 + (1.0 - c * c).max(0.0).sqrt())))
}
