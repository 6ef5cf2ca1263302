//! Measurements on the first factor of a bipartite state: projective
//! measurements, POVMs, Kraus representations and the Neumark dilation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    complete_to_unitary, herm_eig, herm_eigenvalues, kron, partial_trace, ComplexMatrix, Subsystem,
    ONE,
};
use crate::states::{DensityMatrix, PureState};

/// Tolerance for completeness, idempotence, orthogonality and positivity.
pub const MEASUREMENT_TOLERANCE: f64 = 1e-9;
/// Outcomes whose probability is at or below this value are dropped from
/// conditional ensembles.
pub const OUTCOME_CUTOFF: f64 = 1e-12;

/// Anything that can report its effects `{M_x}` acting on one subsystem.
pub trait Measurement {
    fn effects(&self) -> &[ComplexMatrix];

    /// Dimension of the measured system.
    fn dim(&self) -> usize {
        self.effects().first().map_or(0, ComplexMatrix::rows)
    }

    fn len(&self) -> usize {
        self.effects().len()
    }

    fn is_empty(&self) -> bool {
        self.effects().is_empty()
    }
}

fn completeness_residual(ops: &[ComplexMatrix], dim: usize) -> f64 {
    let mut sum = ComplexMatrix::zeros(dim, dim);
    for m in ops {
        sum = &sum + m;
    }
    sum.identity_residual()
}

fn check_square_family(ops: &[ComplexMatrix], what: &str) -> Result<usize> {
    let first = ops
        .first()
        .ok_or_else(|| Error::InvalidMeasurement(format!("{what} with no outcomes")))?;
    let d = first.rows();
    if let Some(i) = ops.iter().position(|m| m.rows() != d || m.cols() != d) {
        return Err(Error::InvalidMeasurement(format!(
            "{what} element {i} is not {d}x{d}"
        )));
    }
    Ok(d)
}

/// Complete family of mutually orthogonal projectors.
#[derive(Debug, Clone)]
pub struct ProjectiveMeasurement {
    projectors: Vec<ComplexMatrix>,
}

impl ProjectiveMeasurement {
    pub fn new(projectors: Vec<ComplexMatrix>) -> Result<Self> {
        let d = check_square_family(&projectors, "projective measurement")?;
        for (x, p) in projectors.iter().enumerate() {
            let herm = p.hermitian_residual();
            if herm > MEASUREMENT_TOLERANCE {
                return Err(Error::InvalidMeasurement(format!(
                    "projector {x} not Hermitian ({herm:.3e})"
                )));
            }
            let idem = (p * p).distance(p);
            if idem > MEASUREMENT_TOLERANCE {
                return Err(Error::InvalidMeasurement(format!(
                    "projector {x} not idempotent ({idem:.3e})"
                )));
            }
        }
        for x in 0..projectors.len() {
            for y in x + 1..projectors.len() {
                let ov = (&projectors[x] * &projectors[y]).frobenius_norm();
                if ov > MEASUREMENT_TOLERANCE {
                    return Err(Error::InvalidMeasurement(format!(
                        "projectors {x} and {y} not orthogonal ({ov:.3e})"
                    )));
                }
            }
        }
        let res = completeness_residual(&projectors, d);
        if res > MEASUREMENT_TOLERANCE {
            return Err(Error::InvalidMeasurement(format!(
                "projectors do not sum to identity ({res:.3e})"
            )));
        }
        Ok(Self { projectors })
    }

    /// Rank-one projectors onto the columns of a unitary.
    pub fn from_basis(u: &ComplexMatrix) -> Result<Self> {
        let projectors = (0..u.cols())
            .map(|j| {
                let c = u.column(j);
                ComplexMatrix::outer(&c, &c)
            })
            .collect();
        Self::new(projectors)
    }

    pub fn computational(d: usize) -> Self {
        Self::from_basis(&ComplexMatrix::identity(d)).expect("identity is unitary")
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    pub fn is_rank_one(&self) -> bool {
        self.projectors
            .iter()
            .all(|p| (p.trace().re - 1.0).abs() <= MEASUREMENT_TOLERANCE)
    }

    pub fn to_povm(&self) -> Povm {
        Povm {
            effects: self.projectors.clone(),
        }
    }
}

impl Measurement for ProjectiveMeasurement {
    fn effects(&self) -> &[ComplexMatrix] {
        &self.projectors
    }
}

/// Positive operators summing to the identity.
#[derive(Debug, Clone)]
pub struct Povm {
    effects: Vec<ComplexMatrix>,
}

impl Povm {
    pub fn new(effects: Vec<ComplexMatrix>) -> Result<Self> {
        let d = check_square_family(&effects, "POVM")?;
        for (x, m) in effects.iter().enumerate() {
            let herm = m.hermitian_residual();
            if herm > MEASUREMENT_TOLERANCE {
                return Err(Error::InvalidMeasurement(format!(
                    "effect {x} not Hermitian ({herm:.3e})"
                )));
            }
            let min = herm_eigenvalues(m)?.first().copied().unwrap_or(0.0);
            if min < -MEASUREMENT_TOLERANCE {
                return Err(Error::InvalidMeasurement(format!(
                    "effect {x} has negative eigenvalue {min:.3e}"
                )));
            }
        }
        let res = completeness_residual(&effects, d);
        if res > MEASUREMENT_TOLERANCE {
            return Err(Error::InvalidMeasurement(format!(
                "effects do not sum to identity ({res:.3e})"
            )));
        }
        Ok(Self { effects })
    }

    /// Effects `|w_z⟩⟨w_z|` from vectors with `Σ |w_z⟩⟨w_z| = I`.
    pub fn rank_one(vectors: &[Vec<Complex64>]) -> Result<Self> {
        Self::new(vectors.iter().map(|w| ComplexMatrix::outer(w, w)).collect())
    }
}

impl Measurement for Povm {
    fn effects(&self) -> &[ComplexMatrix] {
        &self.effects
    }
}

/// Operators `{A_x}` with `Σ A_x† A_x = I`.
#[derive(Debug, Clone)]
pub struct KrausSet {
    operators: Vec<ComplexMatrix>,
}

impl KrausSet {
    pub fn new(operators: Vec<ComplexMatrix>) -> Result<Self> {
        let first = operators
            .first()
            .ok_or_else(|| Error::InvalidMeasurement("empty Kraus set".into()))?;
        let d = first.cols();
        if operators.iter().any(|a| a.cols() != d) {
            return Err(Error::InvalidMeasurement("Kraus operators differ in input dimension".into()));
        }
        let effects: Vec<ComplexMatrix> = operators.iter().map(|a| &a.adjoint() * a).collect();
        let res = completeness_residual(&effects, d);
        if res > MEASUREMENT_TOLERANCE {
            return Err(Error::InvalidMeasurement(format!(
                "Kraus operators are not complete ({res:.3e})"
            )));
        }
        Ok(Self { operators })
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    /// `{A_x† A_x}`.
    pub fn effects(&self) -> Vec<ComplexMatrix> {
        self.operators.iter().map(|a| &a.adjoint() * a).collect()
    }

    /// The refined family `{A_z† π_i A_z}` over all `(i, z)`, i-major.
    pub fn refine(&self, projectors: &ProjectiveMeasurement) -> Result<Povm> {
        let mut effects = Vec::new();
        for p in projectors.projectors() {
            for a in &self.operators {
                effects.push(a.adjoint().matmul(p)?.matmul(a)?);
            }
        }
        Povm::new(effects)
    }
}

/// Hermitian square roots `A_x = √M_x`.
pub fn kraus_from_povm(p: &Povm) -> KrausSet {
    let operators = p
        .effects()
        .iter()
        .map(|m| {
            herm_eig(m)
                .expect("validated effects are Hermitian")
                .map_spectrum(|l| l.max(0.0).sqrt())
        })
        .collect();
    KrausSet { operators }
}

/// Post-measurement ensemble on B: probabilities `η_x` and states `ρ_{B|x}`.
#[derive(Debug, Clone)]
pub struct ConditionalEnsemble {
    outcomes: Vec<usize>,
    probabilities: Vec<f64>,
    states: Vec<DensityMatrix>,
}

impl ConditionalEnsemble {
    /// Index of each kept outcome in the originating measurement.
    pub fn outcomes(&self) -> &[usize] {
        &self.outcomes
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    /// `Σ η_x ρ_{B|x}`.
    pub fn average(&self) -> ComplexMatrix {
        let d = self.states[0].dim();
        let mut m = ComplexMatrix::zeros(d, d);
        for (p, s) in self.probabilities.iter().zip(&self.states) {
            m = &m + &s.matrix().scale_real(*p);
        }
        m
    }
}

/// `Tr_A[(M ⊗ I_B) ρ_AB]`.
pub(crate) fn unnormalized_conditional(
    rho: &ComplexMatrix,
    (da, db): (usize, usize),
    effect: &ComplexMatrix,
) -> ComplexMatrix {
    ComplexMatrix::from_fn(db, db, |b1, b2| {
        let mut acc = Complex64::new(0.0, 0.0);
        for a in 0..da {
            for a2 in 0..da {
                let m = effect[(a, a2)];
                if m.re != 0.0 || m.im != 0.0 {
                    acc += m * rho[(a2 * db + b1, a * db + b2)];
                }
            }
        }
        acc
    })
    .hermitian_part()
}

/// Outcome probabilities `Tr[(M_x ⊗ I) ρ]`, including zero-probability outcomes.
pub fn outcome_probabilities<M: Measurement + ?Sized>(rho_ab: &DensityMatrix, m: &M) -> Result<Vec<f64>> {
    let (da, db) = rho_ab.bipartite_dims()?;
    check_measured_dim(m, da)?;
    Ok(m.effects()
        .iter()
        .map(|e| {
            unnormalized_conditional(rho_ab.matrix(), (da, db), e)
                .trace()
                .re
        })
        .collect())
}

fn check_measured_dim<M: Measurement + ?Sized>(m: &M, da: usize) -> Result<()> {
    if m.dim() != da {
        return Err(Error::DimensionMismatch(format!(
            "measurement acts on dimension {}, subsystem A has dimension {da}",
            m.dim()
        )));
    }
    Ok(())
}

/// Measures subsystem A and returns the conditional states of B.
pub fn apply_on_a<M: Measurement + ?Sized>(rho_ab: &DensityMatrix, m: &M) -> Result<ConditionalEnsemble> {
    let (da, db) = rho_ab.bipartite_dims()?;
    check_measured_dim(m, da)?;
    let mut out = ConditionalEnsemble {
        outcomes: Vec::new(),
        probabilities: Vec::new(),
        states: Vec::new(),
    };
    for (x, e) in m.effects().iter().enumerate() {
        let sigma = unnormalized_conditional(rho_ab.matrix(), (da, db), e);
        let eta = sigma.trace().re;
        if eta <= OUTCOME_CUTOFF {
            continue;
        }
        out.outcomes.push(x);
        out.probabilities.push(eta);
        out.states
            .push(DensityMatrix::new(sigma.scale_real(1.0 / eta), vec![db])?);
    }
    if out.states.is_empty() {
        return Err(Error::InvalidState("every outcome has zero probability".into()));
    }
    Ok(out)
}

/// `U`, `|ε_0⟩` and `{π^E_x}` realizing a POVM as a projective measurement
/// of an ancilla after a joint unitary on `H_A ⊗ H_E`.
#[derive(Debug, Clone)]
pub struct NeumarkDilation {
    pub unitary: ComplexMatrix,
    pub ancilla_state: PureState,
    pub ancilla_projectors: ProjectiveMeasurement,
    pub ancilla_dim: usize,
    pub system_dim: usize,
}

/// Residuals of the dilation identities on a set of test states.
#[derive(Debug, Clone, Copy, Default, serde::Serialize)]
pub struct DilationResiduals {
    /// `max ‖Tr_E[(I⊗π_x) U(ρ⊗ε₀)U† (I⊗π_x)] − A_x ρ A_x†‖_F`
    pub kraus_action: f64,
    /// `max ‖⟨ε₀|U†(I⊗π_x)U|ε₀⟩ − M_x‖_F`
    pub effect: f64,
    /// `max |Tr[U†(I⊗π_x)U ρ⊗ε₀] − Tr(M_x ρ)|`
    pub probability: f64,
    /// `‖U†U − I‖_F`
    pub unitarity: f64,
}

/// Builds the dilation from the Hermitian-root Kraus operators: the isometry
/// `V|ψ⟩ = Σ_x A_x|ψ⟩ ⊗ |x⟩_E` fills the columns of `U` reached from
/// `|ψ⟩ ⊗ |0⟩_E`, and Gram–Schmidt completes the rest.
pub fn neumark_dilate(p: &Povm) -> NeumarkDilation {
    let kraus = kraus_from_povm(p);
    let d = p.dim();
    let n = p.len();
    let iso = ComplexMatrix::from_fn(d * n, d, |row, b| {
        let (a, x) = (row / n, row % n);
        kraus.operators()[x][(a, b)]
    });
    let w = complete_to_unitary(&iso).expect("Hermitian-root Kraus operators form an isometry");

    // Column a·n of U receives column a of V; the others are filled in order.
    let mut order = Vec::with_capacity(d * n);
    let mut extra = d;
    for col in 0..d * n {
        if col % n == 0 {
            order.push(col / n);
        } else {
            order.push(extra);
            extra += 1;
        }
    }
    let unitary = ComplexMatrix::from_fn(d * n, d * n, |i, j| w[(i, order[j])]);

    NeumarkDilation {
        unitary,
        ancilla_state: PureState::basis(vec![n], 0).expect("n >= 1"),
        ancilla_projectors: ProjectiveMeasurement::computational(n),
        ancilla_dim: n,
        system_dim: d,
    }
}

impl NeumarkDilation {
    fn ancilla_projector_on_joint(&self, x: usize) -> ComplexMatrix {
        kron(
            &ComplexMatrix::identity(self.system_dim),
            &self.ancilla_projectors.projectors()[x],
        )
    }

    fn embed(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let eps = self.ancilla_state.amplitudes();
        kron(rho, &ComplexMatrix::outer(eps, eps))
    }

    /// `Tr_E[(I⊗π_x) U (ρ⊗|ε₀⟩⟨ε₀|) U† (I⊗π_x)]`.
    pub fn post_measurement(&self, rho: &ComplexMatrix, x: usize) -> Result<ComplexMatrix> {
        let pi = self.ancilla_projector_on_joint(x);
        let evolved = self.unitary.sandwich(&self.embed(rho))?;
        let projected = pi.sandwich(&evolved)?;
        partial_trace(&projected, (self.system_dim, self.ancilla_dim), Subsystem::B)
    }

    /// `⟨ε₀| U† (I⊗π_x) U |ε₀⟩`, an operator on the system.
    pub fn effect(&self, x: usize) -> ComplexMatrix {
        let eps = self.ancilla_state.amplitudes();
        let lift = kron(
            &ComplexMatrix::identity(self.system_dim),
            &ComplexMatrix::from_fn(self.ancilla_dim, 1, |i, _| eps[i]),
        );
        let pi = self.ancilla_projector_on_joint(x);
        let heis = &(&self.unitary.adjoint() * &pi) * &self.unitary;
        &(&lift.adjoint() * &heis) * &lift
    }

    /// `Tr[U†(I⊗π_x)U (ρ⊗|ε₀⟩⟨ε₀|)]`.
    pub fn probability(&self, rho: &ComplexMatrix, x: usize) -> Result<f64> {
        let pi = self.ancilla_projector_on_joint(x);
        let heis = &(&self.unitary.adjoint() * &pi) * &self.unitary;
        Ok(heis.matmul(&self.embed(rho))?.trace().re)
    }

    /// Compares the dilation against the POVM it was built from.
    pub fn residuals(&self, p: &Povm, test_states: &[DensityMatrix]) -> Result<DilationResiduals> {
        let kraus = kraus_from_povm(p);
        let mut r = DilationResiduals {
            unitarity: (&self.unitary.adjoint() * &self.unitary).identity_residual(),
            ..Default::default()
        };
        for (x, m) in p.effects().iter().enumerate() {
            r.effect = r.effect.max(self.effect(x).distance(m));
        }
        for rho in test_states {
            for (x, m) in p.effects().iter().enumerate() {
                let direct = kraus.operators()[x].sandwich(rho.matrix())?;
                r.kraus_action = r
                    .kraus_action
                    .max(self.post_measurement(rho.matrix(), x)?.distance(&direct));
                let expected = m.matmul(rho.matrix())?.trace().re;
                r.probability = r
                    .probability
                    .max((self.probability(rho.matrix(), x)? - expected).abs());
            }
        }
        Ok(r)
    }
}

/// `ρ_AB ⊗ |0⟩⟨0|_E` with subsystems grouped as `(A⊗E) ⊗ B`.
pub fn neumark_extension(rho_ab: &DensityMatrix, ancilla_dim: usize) -> Result<DensityMatrix> {
    let (da, db) = rho_ab.bipartite_dims()?;
    let n = ancilla_dim.max(1);
    let big = da * n * db;
    let mut m = ComplexMatrix::zeros(big, big);
    let src = rho_ab.matrix();
    for a1 in 0..da {
        for b1 in 0..db {
            for a2 in 0..da {
                for b2 in 0..db {
                    m[((a1 * n) * db + b1, (a2 * n) * db + b2)] = src[(a1 * db + b1, a2 * db + b2)];
                }
            }
        }
    }
    DensityMatrix::new(m, vec![da * n, db])
}

/// Compresses a measurement on `H_A ⊗ H_E` to the POVM it induces on `H_A`
/// when the ancilla starts in `|0⟩_E`: `M_x = ⟨0|_E π_x |0⟩_E`.
pub fn compress_to_system(m: &ProjectiveMeasurement, system_dim: usize, ancilla_dim: usize) -> Result<Povm> {
    let n = ancilla_dim;
    if m.dim() != system_dim * n {
        return Err(Error::DimensionMismatch(format!(
            "measurement on dimension {} cannot be compressed to {system_dim}x{n}",
            m.dim()
        )));
    }
    let effects = m
        .projectors()
        .iter()
        .map(|p| ComplexMatrix::from_fn(system_dim, system_dim, |a1, a2| p[(a1 * n, a2 * n)]))
        .collect();
    Povm::new(effects)
}

/// The qubit trine POVM `{⅔ |ψ_k⟩⟨ψ_k|}` with real states at 120° on the Bloch circle.
pub fn trine() -> Povm {
    let effects = (0..3)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
            let v = [
                Complex64::new((t / 2.0).cos(), 0.0),
                Complex64::new((t / 2.0).sin(), 0.0),
            ];
            ComplexMatrix::outer(&v, &v).scale_real(2.0 / 3.0)
        })
        .collect();
    Povm::new(effects).expect("trine is complete")
}

/// Random rank-one POVM with `k` outcomes: rows of a random `k × d` isometry.
pub fn random_povm<R: rand::Rng + ?Sized>(rng: &mut R, d: usize, k: usize) -> Result<Povm> {
    if k < d {
        return Err(Error::InvalidArgument(format!(
            "a rank-one POVM on dimension {d} needs at least {d} outcomes"
        )));
    }
    let cols = crate::random::orthonormal_columns(rng, k, d);
    let vectors: Vec<Vec<Complex64>> = (0..k)
        .map(|z| (0..d).map(|a| cols[a][z].conj()).collect())
        .collect();
    Povm::rank_one(&vectors)
}

/// `|x⟩⟨x|` scaled: helper for building effects in tests and examples.
pub fn basis_projector(d: usize, x: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d, d);
    m[(x, x)] = ONE;
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_density, random_unitary, rng};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn dm(m: ComplexMatrix, dims: Vec<usize>) -> DensityMatrix {
        DensityMatrix::new(m, dims).unwrap()
    }

    #[test]
    fn product_state_conditionals_equal_marginal() {
        let mut r = rng(1);
        let ra = dm(random_density(&mut r, 2, 2), vec![2]);
        let rb = dm(random_density(&mut r, 3, 3), vec![3]);
        let prod = ra.tensor(&rb);
        let m = ProjectiveMeasurement::from_basis(&random_unitary(&mut r, 2)).unwrap();
        let ens = apply_on_a(&prod, &m).unwrap();
        for s in ens.states() {
            assert!(s.distance(&rb) < 1e-12);
        }
    }

    #[test]
    fn bell_state_computational_measurement() {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let z = Complex64::new(0.0, 0.0);
        let bell = PureState::new(vec![h, z, z, h], vec![2, 2]).unwrap().to_density();
        let ens = apply_on_a(&bell, &ProjectiveMeasurement::computational(2)).unwrap();
        assert_eq!(ens.probabilities().len(), 2);
        for p in ens.probabilities() {
            assert!((p - 0.5).abs() < 1e-15);
        }
        assert!(ens.states()[0].distance(&dm(basis_projector(2, 0), vec![2])) < 1e-15);
        assert!(ens.states()[1].distance(&dm(basis_projector(2, 1), vec![2])) < 1e-15);
    }

    #[test]
    fn conditional_average_is_marginal() {
        let mut r = rng(2);
        let rho = dm(random_density(&mut r, 6, 6), vec![2, 3]);
        let m = ProjectiveMeasurement::from_basis(&random_unitary(&mut r, 2)).unwrap();
        let ens = apply_on_a(&rho, &m).unwrap();
        let rb = rho.reduced(Subsystem::B).unwrap();
        assert!(ens.average().distance(rb.matrix()) <= 1e-10);
        let total: f64 = ens.probabilities().iter().sum();
        assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn zero_probability_outcomes_are_dropped() {
        let rho = dm(kron(&basis_projector(2, 0), &basis_projector(2, 1)), vec![2, 2]);
        let ens = apply_on_a(&rho, &ProjectiveMeasurement::computational(2)).unwrap();
        assert_eq!(ens.outcomes(), &[0]);
    }

    #[test]
    fn measurement_validation() {
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        assert!(ProjectiveMeasurement::new(vec![half.clone(), half.clone()]).is_err());
        assert!(Povm::new(vec![half.clone(), half.clone()]).is_ok());
        assert!(Povm::new(vec![half.clone()]).is_err());
        let neg = ComplexMatrix::from_real_diagonal(&[1.5, 1.0]);
        let neg2 = ComplexMatrix::from_real_diagonal(&[-0.5, 0.0]);
        assert!(Povm::new(vec![neg, neg2]).is_err());
        assert!(KrausSet::new(vec![half]).is_err());
    }

    #[test]
    fn kraus_roots() {
        let proj = ProjectiveMeasurement::computational(3).to_povm();
        let k = kraus_from_povm(&proj);
        for (a, p) in k.operators().iter().zip(proj.effects()) {
            assert!(a.distance(p) < 1e-12);
        }
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        let k = kraus_from_povm(&Povm::new(vec![half.clone(), half]).unwrap());
        for a in k.operators() {
            assert!(a.distance(&ComplexMatrix::identity(2).scale_real(FRAC_1_SQRT_2)) < 1e-12);
        }
        let p = random_povm(&mut rng(3), 2, 3).unwrap();
        let k = kraus_from_povm(&p);
        for (a, m) in k.operators().iter().zip(p.effects()) {
            assert!((&a.adjoint() * a).distance(m) <= 1e-10);
        }
        assert!(KrausSet::new(k.operators().to_vec()).is_ok());
    }

    #[test]
    fn refined_family_is_a_povm() {
        let mut r = rng(4);
        let p = random_povm(&mut r, 3, 5).unwrap();
        let k = kraus_from_povm(&p);
        let pi = ProjectiveMeasurement::from_basis(&random_unitary(&mut r, 3)).unwrap();
        let refined = k.refine(&pi).unwrap();
        assert_eq!(refined.len(), 15);
    }

    #[test]
    fn dilation_of_projective_measurement() {
        let pi = ProjectiveMeasurement::from_basis(&random_unitary(&mut rng(5), 2)).unwrap();
        let povm = pi.to_povm();
        let dil = neumark_dilate(&povm);
        let states: Vec<DensityMatrix> = (0..3)
            .map(|s| dm(random_density(&mut rng(50 + s), 2, 2), vec![2]))
            .collect();
        let r = dil.residuals(&povm, &states).unwrap();
        assert!(r.probability <= 1e-12, "{r:?}");
        assert!(r.effect <= 1e-12 && r.kraus_action <= 1e-12 && r.unitarity <= 1e-12);
    }

    #[test]
    fn dilation_of_trine() {
        let p = trine();
        let dil = neumark_dilate(&p);
        assert_eq!(dil.ancilla_dim, 3);
        let zero = dm(basis_projector(2, 0), vec![2]);
        for (x, m) in p.effects().iter().enumerate() {
            let direct = m.matmul(zero.matrix()).unwrap().trace().re;
            assert!((dil.probability(zero.matrix(), x).unwrap() - direct).abs() <= 1e-10);
        }
        let r = dil.residuals(&p, &[zero]).unwrap();
        assert!(r.kraus_action <= 1e-9 && r.effect <= 1e-9 && r.unitarity <= 1e-9);
    }

    #[test]
    fn dilation_of_random_four_outcome_povm() {
        let p = random_povm(&mut rng(6), 2, 4).unwrap();
        let dil = neumark_dilate(&p);
        let states: Vec<DensityMatrix> = (0..10)
            .map(|s| dm(random_density(&mut rng(60 + s), 2, 2), vec![2]))
            .collect();
        let r = dil.residuals(&p, &states).unwrap();
        assert!(r.kraus_action <= 1e-9 && r.effect <= 1e-9 && r.probability <= 1e-10);
    }

    #[test]
    fn extension_and_compression_preserve_statistics() {
        let mut r = rng(8);
        let rho = dm(random_density(&mut r, 4, 4), vec![2, 2]);
        let ext = neumark_extension(&rho, 4).unwrap();
        assert_eq!(ext.dims(), &[8, 2]);
        let big = ProjectiveMeasurement::from_basis(&random_unitary(&mut r, 8)).unwrap();
        let small = compress_to_system(&big, 2, 4).unwrap();
        let p_big = outcome_probabilities(&ext, &big).unwrap();
        let p_small = outcome_probabilities(&rho, &small).unwrap();
        for (a, b) in p_big.iter().zip(&p_small) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
