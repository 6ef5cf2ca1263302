//! Quantum-state value types: density matrices, pure states, spectral and
//! Schmidt decompositions, ensembles and purification.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    herm_eig, herm_eigenvalues, inner, kron, kron_vec, norm, partial_trace, swap_subsystems,
    ComplexMatrix, Subsystem, HERMITIAN_TOLERANCE, ZERO,
};

/// Eigenvalues at or below this value are treated as zero (numerical rank).
pub const RANK_CUTOFF: f64 = 1e-12;
/// Most negative eigenvalue accepted (and clamped to zero) in a density matrix.
pub const NEGATIVITY_TOLERANCE: f64 = 1e-10;
pub const TRACE_TOLERANCE: f64 = 1e-10;
pub const NORM_TOLERANCE: f64 = 1e-10;
pub const ORTHONORMALITY_TOLERANCE: f64 = 1e-9;

fn check_dims(dims: &[usize], total: usize) -> Result<()> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::InvalidState(format!(
            "subsystem dimensions must be non-empty and positive, got {dims:?}"
        )));
    }
    let prod: usize = dims.iter().product();
    if prod != total {
        return Err(Error::DimensionMismatch(format!(
            "dims {dims:?} multiply to {prod}, operator has dimension {total}"
        )));
    }
    Ok(())
}

/// Hermitian, positive semi-definite, unit-trace operator on a tensor product
/// of subsystems listed in `dims` (first factor is the most significant index).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    dims: Vec<usize>,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        check_dims(&dims, matrix.rows())?;
        let residual = matrix.hermitian_residual();
        if !(residual <= HERMITIAN_TOLERANCE) {
            return Err(Error::NotHermitian { residual });
        }
        let matrix = matrix.hermitian_part();
        let trace = matrix.trace().re;
        if !((trace - 1.0).abs() <= TRACE_TOLERANCE) {
            return Err(Error::InvalidState(format!("trace is {trace}, expected 1")));
        }
        let min_eig = herm_eigenvalues(&matrix)?.first().copied().unwrap_or(0.0);
        if min_eig < -NEGATIVITY_TOLERANCE {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(Self { matrix, dims })
    }

    /// Normalizes a positive semi-definite operator by its trace.
    pub fn from_unnormalized(matrix: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        let t = matrix.trace().re;
        if !(t > 0.0) {
            return Err(Error::InvalidState(format!("trace {t} is not positive")));
        }
        Self::new(matrix.scale_real(1.0 / t), dims)
    }

    pub fn from_pure(psi: &PureState) -> Self {
        Self {
            matrix: ComplexMatrix::outer(&psi.amplitudes, &psi.amplitudes),
            dims: psi.dims.clone(),
        }
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Result<Self> {
        let n: usize = dims.iter().product();
        Self::new(ComplexMatrix::identity(n).scale_real(1.0 / n as f64), dims)
    }

    /// `ρ ⊗ σ` with concatenated subsystem lists.
    pub fn tensor(&self, other: &DensityMatrix) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self {
            matrix: kron(&self.matrix, &other.matrix),
            dims,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// The `(dA, dB)` pair of a two-party state.
    pub fn bipartite_dims(&self) -> Result<(usize, usize)> {
        match self.dims.as_slice() {
            &[a, b] => Ok((a, b)),
            d => Err(Error::DimensionMismatch(format!(
                "expected a bipartite state, got dims {d:?}"
            ))),
        }
    }

    /// Same operator with the subsystem list regrouped as `(Π dims[..cut], Π dims[cut..])`.
    pub fn grouped(&self, cut: usize) -> Result<Self> {
        if cut == 0 || cut >= self.dims.len() {
            return Err(Error::InvalidArgument(format!(
                "cut {cut} does not split dims {:?}",
                self.dims
            )));
        }
        let left = self.dims[..cut].iter().product();
        let right = self.dims[cut..].iter().product();
        Ok(Self {
            matrix: self.matrix.clone(),
            dims: vec![left, right],
        })
    }

    /// Partial trace across the split `dims[..cut] | dims[cut..]`.
    pub fn partial_trace(&self, cut: usize, over: Subsystem) -> Result<Self> {
        if cut == 0 || cut >= self.dims.len() {
            return Err(Error::InvalidArgument(format!(
                "cut {cut} does not split dims {:?}",
                self.dims
            )));
        }
        let left: usize = self.dims[..cut].iter().product();
        let right: usize = self.dims[cut..].iter().product();
        let m = partial_trace(&self.matrix, (left, right), over)?;
        let dims = match over {
            Subsystem::A => self.dims[cut..].to_vec(),
            Subsystem::B => self.dims[..cut].to_vec(),
        };
        Ok(Self { matrix: m, dims })
    }

    /// Reduced state of a bipartite state on the kept subsystem.
    pub fn reduced(&self, keep: Subsystem) -> Result<Self> {
        self.bipartite_dims()?;
        let over = match keep {
            Subsystem::A => Subsystem::B,
            Subsystem::B => Subsystem::A,
        };
        self.partial_trace(1, over)
    }

    /// Exchanges the two factors of a bipartite state.
    pub fn swapped(&self) -> Result<Self> {
        let (da, db) = self.bipartite_dims()?;
        Ok(Self {
            matrix: swap_subsystems(&self.matrix, (da, db))?,
            dims: vec![db, da],
        })
    }

    /// `U ρ U†` for a unitary acting on the whole space.
    pub fn conjugate(&self, u: &ComplexMatrix) -> Result<Self> {
        let m = u.sandwich(&self.matrix)?;
        Self::new(m, self.dims.clone())
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        herm_eigenvalues(&self.matrix).expect("density matrices are Hermitian")
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.matrix.distance(&other.matrix)
    }
}

/// Unit vector on a tensor product of subsystems.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
    dims: Vec<usize>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>, dims: Vec<usize>) -> Result<Self> {
        check_dims(&dims, amplitudes.len())?;
        let n = norm(&amplitudes);
        if !((n - 1.0).abs() <= NORM_TOLERANCE) {
            return Err(Error::InvalidState(format!("vector norm is {n}, expected 1")));
        }
        Ok(Self { amplitudes, dims })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(amplitudes: Vec<Complex64>, dims: Vec<usize>) -> Result<Self> {
        let n = norm(&amplitudes);
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        Self::new(amplitudes.into_iter().map(|z| z / n).collect(), dims)
    }

    /// Canonical basis vector `|index⟩`.
    pub fn basis(dims: Vec<usize>, index: usize) -> Result<Self> {
        let n: usize = dims.iter().product();
        if index >= n {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for dimension {n}"
            )));
        }
        let mut amps = vec![ZERO; n];
        amps[index] = Complex64::new(1.0, 0.0);
        Self::new(amps, dims)
    }

    pub fn tensor(&self, other: &PureState) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self {
            amplitudes: kron_vec(&self.amplitudes, &other.amplitudes),
            dims,
        }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &PureState) -> Complex64 {
        inner(&self.amplitudes, &other.amplitudes)
    }

    /// Amplitudes reshaped into a `Π dims[..cut] × Π dims[cut..]` matrix.
    pub fn coefficient_matrix(&self, cut: usize) -> Result<ComplexMatrix> {
        if cut == 0 || cut >= self.dims.len() {
            return Err(Error::InvalidArgument(format!(
                "cut {cut} does not split dims {:?}",
                self.dims
            )));
        }
        let left: usize = self.dims[..cut].iter().product();
        let right: usize = self.dims[cut..].iter().product();
        ComplexMatrix::from_vec(left, right, self.amplitudes.clone())
    }
}

/// `ρ = Σ p_i |u_i⟩⟨u_i|` restricted to eigenvalues above [`RANK_CUTOFF`].
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    weights: Vec<f64>,
    vectors: Vec<PureState>,
}

impl SpectralDecomposition {
    /// Validates an explicitly supplied decomposition.
    pub fn new(weights: Vec<f64>, vectors: Vec<PureState>) -> Result<Self> {
        if weights.is_empty() || weights.len() != vectors.len() {
            return Err(Error::InvalidState(format!(
                "{} weights for {} vectors",
                weights.len(),
                vectors.len()
            )));
        }
        if let Some(w) = weights.iter().find(|&&w| !(w > RANK_CUTOFF)) {
            return Err(Error::InvalidState(format!("weight {w} below rank cutoff")));
        }
        let total: f64 = weights.iter().sum();
        if !((total - 1.0).abs() <= TRACE_TOLERANCE) {
            return Err(Error::InvalidState(format!("weights sum to {total}")));
        }
        let dims = vectors[0].dims();
        if vectors.iter().any(|v| v.dims() != dims) {
            return Err(Error::DimensionMismatch("vectors with different dims".into()));
        }
        for i in 0..vectors.len() {
            for j in i + 1..vectors.len() {
                let ov = vectors[i].overlap(&vectors[j]).norm();
                if ov > ORTHONORMALITY_TOLERANCE {
                    return Err(Error::InvalidState(format!(
                        "vectors {i} and {j} overlap by {ov:.3e}"
                    )));
                }
            }
        }
        Ok(Self { weights, vectors })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn vectors(&self) -> &[PureState] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn dims(&self) -> &[usize] {
        self.vectors[0].dims()
    }

    /// `Σ p_i |u_i⟩⟨u_i|`.
    pub fn reconstruct(&self) -> DensityMatrix {
        let n = self.vectors[0].dim();
        let mut m = ComplexMatrix::zeros(n, n);
        for (p, v) in self.weights.iter().zip(&self.vectors) {
            let a = v.amplitudes();
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] += a[i] * a[j].conj() * *p;
                }
            }
        }
        DensityMatrix {
            matrix: m.hermitian_part(),
            dims: self.dims().to_vec(),
        }
    }
}

/// Eigen-decomposition of a state, dropping eigenvalues at or below [`RANK_CUTOFF`].
///
/// Weights are ordered descending. Degenerate eigenspaces come back in
/// whatever orthonormal basis the Jacobi sweeps produce.
pub fn spectral_decomposition(rho: &DensityMatrix) -> SpectralDecomposition {
    let eig = herm_eig(rho.matrix()).expect("density matrices are Hermitian");
    let n = rho.dim();
    let mut weights = Vec::new();
    let mut vectors = Vec::new();
    for k in (0..n).rev() {
        let p = eig.eigenvalues[k].max(0.0);
        if p <= RANK_CUTOFF {
            continue;
        }
        weights.push(p);
        vectors.push(PureState {
            amplitudes: eig.eigenvectors.column(k),
            dims: rho.dims().to_vec(),
        });
    }
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    SpectralDecomposition { weights, vectors }
}

/// Numerical rank: number of eigenvalues above [`RANK_CUTOFF`].
pub fn rank(rho: &DensityMatrix) -> usize {
    rho.eigenvalues().iter().filter(|&&l| l > RANK_CUTOFF).count()
}

/// Weighted family of states on a common space.
#[derive(Debug, Clone)]
pub struct Ensemble {
    weights: Vec<f64>,
    states: Vec<DensityMatrix>,
}

impl Ensemble {
    pub fn new(weights: Vec<f64>, states: Vec<DensityMatrix>) -> Result<Self> {
        if weights.is_empty() || weights.len() != states.len() {
            return Err(Error::InvalidState(format!(
                "{} weights for {} states",
                weights.len(),
                states.len()
            )));
        }
        if weights.iter().any(|&w| !(w >= 0.0)) {
            return Err(Error::InvalidDistribution("negative weight".into()));
        }
        let total: f64 = weights.iter().sum();
        if !((total - 1.0).abs() <= TRACE_TOLERANCE) {
            return Err(Error::InvalidDistribution(format!("weights sum to {total}")));
        }
        let dims = states[0].dims();
        if states.iter().any(|s| s.dims() != dims) {
            return Err(Error::DimensionMismatch("ensemble members differ in dims".into()));
        }
        Ok(Self { weights, states })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `Σ η_i ρ_i`.
    pub fn mixture(&self) -> DensityMatrix {
        let n = self.states[0].dim();
        let mut m = ComplexMatrix::zeros(n, n);
        for (w, s) in self.weights.iter().zip(&self.states) {
            m = &m + &s.matrix().scale_real(*w);
        }
        DensityMatrix {
            matrix: m.hermitian_part(),
            dims: self.states[0].dims().to_vec(),
        }
    }
}

/// `|ψ⟩ = Σ_i c_i |l_i⟩|r_i⟩` with descending coefficients.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    pub coefficients: Vec<f64>,
    pub left: Vec<PureState>,
    pub right: Vec<PureState>,
}

impl SchmidtDecomposition {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    /// `Σ_i c_i |l_i⟩ ⊗ |r_i⟩` with dims `left ++ right`.
    pub fn reconstruct(&self) -> Vec<Complex64> {
        let n = self.left[0].dim() * self.right[0].dim();
        let mut out = vec![ZERO; n];
        for ((c, l), r) in self.coefficients.iter().zip(&self.left).zip(&self.right) {
            for (o, z) in out.iter_mut().zip(kron_vec(l.amplitudes(), r.amplitudes())) {
                *o += z * *c;
            }
        }
        out
    }
}

/// Schmidt decomposition across `dims[..cut] | dims[cut..]`.
///
/// Left vectors come from the eigenvectors of the left reduced state; each
/// right vector is the normalized contraction `(⟨l_i| ⊗ I)|ψ⟩`.
pub fn schmidt(psi: &PureState, cut: usize) -> Result<SchmidtDecomposition> {
    let coeffs = psi.coefficient_matrix(cut)?;
    let (dl, dr) = (coeffs.rows(), coeffs.cols());
    let reduced = (&coeffs * &coeffs.adjoint()).hermitian_part();
    let eig = herm_eig(&reduced)?;
    let left_dims = psi.dims()[..cut].to_vec();
    let right_dims = psi.dims()[cut..].to_vec();

    let mut out = SchmidtDecomposition {
        coefficients: Vec::new(),
        left: Vec::new(),
        right: Vec::new(),
    };
    for k in (0..dl).rev() {
        let lambda = eig.eigenvalues[k];
        if lambda <= RANK_CUTOFF {
            continue;
        }
        let c = lambda.sqrt();
        let l = eig.eigenvectors.column(k);
        let r: Vec<Complex64> = (0..dr)
            .map(|b| (0..dl).map(|a| l[a].conj() * coeffs[(a, b)]).sum::<Complex64>() / c)
            .collect();
        out.coefficients.push(c);
        out.left.push(PureState::normalized(l, left_dims.clone())?);
        out.right.push(PureState::normalized(r, right_dims.clone())?);
    }
    Ok(out)
}

/// Purification `|Ψ⟩ = Σ_i √p_i |u_i⟩|i⟩` of the state described by `decomp`;
/// the purifying factor is appended to the subsystem list.
pub fn purify_with(decomp: &SpectralDecomposition) -> PureState {
    let r = decomp.len();
    let n = decomp.vectors()[0].dim();
    let mut amps = vec![ZERO; n * r];
    for (i, (p, u)) in decomp.weights().iter().zip(decomp.vectors()).enumerate() {
        let s = p.sqrt();
        for (idx, z) in u.amplitudes().iter().enumerate() {
            amps[idx * r + i] = z * s;
        }
    }
    let mut dims = decomp.dims().to_vec();
    dims.push(r);
    let nrm = norm(&amps);
    PureState {
        amplitudes: amps.into_iter().map(|z| z / nrm).collect(),
        dims,
    }
}

/// Purifies `ρ` onto `dims ++ [rank(ρ)]`.
pub fn purify(rho: &DensityMatrix) -> PureState {
    purify_with(&spectral_decomposition(rho))
}
