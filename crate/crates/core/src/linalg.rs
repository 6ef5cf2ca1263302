//! Dense complex linear algebra for small operators.
//!
//! Everything here works on row-major [`ComplexMatrix`] values of modest size
//! (dimension at most a few dozen). The Hermitian eigensolver is a cyclic
//! complex Jacobi iteration, which is slow asymptotically but very accurate
//! for the matrix sizes that show up in bipartite-state numerics.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Off-diagonal Frobenius norm at which the Jacobi sweeps stop.
pub const JACOBI_TOLERANCE: f64 = 1e-12;
/// Upper bound on Jacobi sweeps.
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Hermiticity tolerance accepted by [`herm_eig`].
pub const HERMITIAN_TOLERANCE: f64 = 1e-9;
/// Isometry tolerance accepted by [`complete_to_unitary`].
pub const ISOMETRY_TOLERANCE: f64 = 1e-9;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting non-finite values.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "non-finite entry at ({}, {})",
                pos / cols.max(1),
                pos % cols.max(1)
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// `|v⟩⟨w|`.
    pub fn outer(v: &[Complex64], w: &[Complex64]) -> Self {
        Self::from_fn(v.len(), w.len(), |i, j| v[i] * w[j].conj())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<Complex64>]) -> Result<Self> {
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::DimensionMismatch("columns of unequal length".into()));
        }
        Ok(Self::from_fn(rows, columns.len(), |i, j| columns[j][i]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius norm of `self - other`; infinite when shapes differ.
    pub fn distance(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `‖H − H†‖_F`, or infinity for non-square input.
    pub fn hermitian_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut acc = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                acc += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// `(H + H†)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        })
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(self.mul_unchecked(rhs))
    }

    fn mul_unchecked(&self, rhs: &Self) -> Self {
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let rrow = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, b) in orow.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch(format!(
                "cannot apply {}x{} matrix to vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// `A B A†`, the usual conjugation of an operator.
    pub fn sandwich(&self, inner: &Self) -> Result<Self> {
        self.matmul(inner)?.matmul(&self.adjoint())
    }

    /// Largest entrywise deviation from the identity, measured in Frobenius norm.
    pub fn identity_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.distance(&Self::identity(self.rows))
    }

    fn same_shape(&self, other: &Self, op: &str) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot {op} {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "add")?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "subtract")?;
        Ok(self - other)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

// Operator impls panic on shape mismatch; use the `try_*` methods on untrusted shapes.
impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "shape mismatch in add");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "shape mismatch in sub");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in mul");
        self.mul_unchecked(rhs)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Eigenvalues (ascending) and the unitary whose columns are eigenvectors.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V Λ V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.rows();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * v[(j, k)].conj() * self.eigenvalues[k])
                .sum()
        })
    }

    /// Applies a real function to the spectrum: `V f(Λ) V†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        HermitianEigen {
            eigenvalues: self.eigenvalues.iter().map(|&l| f(l)).collect(),
            eigenvectors: self.eigenvectors.clone(),
        }
        .reconstruct()
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
pub fn herm_eig(h: &ComplexMatrix) -> Result<HermitianEigen> {
    check_hermitian(h)?;
    let n = h.rows();
    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    jacobi_sweeps(&mut a, Some(&mut v));

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues only (ascending). Uses closed forms for dimensions 1 and 2.
pub fn herm_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(h)?;
    Ok(herm_eigenvalues_unchecked(h))
}

/// Eigenvalues of a matrix already known to be Hermitian; only the upper
/// triangle is read for the closed-form cases.
pub(crate) fn herm_eigenvalues_unchecked(h: &ComplexMatrix) -> Vec<f64> {
    match h.rows() {
        0 => Vec::new(),
        1 => vec![h[(0, 0)].re],
        2 => {
            let a = h[(0, 0)].re;
            let d = h[(1, 1)].re;
            let b = h[(0, 1)].norm_sqr();
            let mean = 0.5 * (a + d);
            let half = 0.5 * (a - d);
            let r = (half * half + b).sqrt();
            vec![mean - r, mean + r]
        }
        _ => {
            let mut a = h.hermitian_part();
            jacobi_sweeps(&mut a, None);
            let mut ev: Vec<f64> = (0..a.rows()).map(|i| a[(i, i)].re).collect();
            ev.sort_by(f64::total_cmp);
            ev
        }
    }
}

fn check_hermitian(h: &ComplexMatrix) -> Result<()> {
    if !h.is_square() {
        return Err(Error::NotSquare {
            rows: h.rows(),
            cols: h.cols(),
        });
    }
    let residual = h.hermitian_residual();
    if !(residual <= HERMITIAN_TOLERANCE) {
        return Err(Error::NotHermitian { residual });
    }
    Ok(())
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

fn jacobi_sweeps(a: &mut ComplexMatrix, mut v: Option<&mut ComplexMatrix>) {
    let n = a.rows();
    let threshold = JACOBI_TOLERANCE * a.frobenius_norm().max(1.0);
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(a) <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag < f64::MIN_POSITIVE {
                    continue;
                }
                // Phase-rotate column q so the (p, q) entry becomes real, then
                // apply the classical real Jacobi rotation.
                let phase = apq / mag;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let pc = phase.conj();
                // Columns p, q of the rotation J.
                let jpp = Complex64::new(c, 0.0);
                let jpq = Complex64::new(s, 0.0);
                let jqp = -pc * s;
                let jqq = pc * c;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * jpp + akq * jqp;
                    a[(k, q)] = akp * jpq + akq * jqq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
                    a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;

                if let Some(v) = v.as_deref_mut() {
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * jpp + vkq * jqp;
                        v[(k, q)] = vkp * jpq + vkq * jqq;
                    }
                }
            }
        }
    }
}

/// Kronecker product `A ⊗ B`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (br, bc) = (b.rows(), b.cols());
    ComplexMatrix::from_fn(a.rows() * br, a.cols() * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

/// Kronecker product of two vectors.
pub fn kron_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

/// Which factor of a bipartite space an operation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Partial trace over one factor of `H_A ⊗ H_B` (A index major).
pub fn partial_trace(m: &ComplexMatrix, dims: (usize, usize), over: Subsystem) -> Result<ComplexMatrix> {
    let (da, db) = dims;
    if !m.is_square() || m.rows() != da * db {
        return Err(Error::DimensionMismatch(format!(
            "partial trace with dims ({da}, {db}) on a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    Ok(match over {
        Subsystem::A => ComplexMatrix::from_fn(db, db, |b1, b2| {
            (0..da).map(|a| m[(a * db + b1, a * db + b2)]).sum()
        }),
        Subsystem::B => ComplexMatrix::from_fn(da, da, |a1, a2| {
            (0..db).map(|b| m[(a1 * db + b, a2 * db + b)]).sum()
        }),
    })
}

/// Reorders `H_A ⊗ H_B` to `H_B ⊗ H_A`.
pub fn swap_subsystems(m: &ComplexMatrix, dims: (usize, usize)) -> Result<ComplexMatrix> {
    let (da, db) = dims;
    if !m.is_square() || m.rows() != da * db {
        return Err(Error::DimensionMismatch(format!(
            "swap with dims ({da}, {db}) on a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    Ok(ComplexMatrix::from_fn(da * db, da * db, |i, j| {
        let (b1, a1) = (i / da, i % da);
        let (b2, a2) = (j / da, j % da);
        m[(a1 * db + b1, a2 * db + b2)]
    }))
}

/// Completes a set of orthonormal columns to a square unitary whose leading
/// columns are the input, using modified Gram–Schmidt against the canonical basis.
pub fn complete_to_unitary(cols: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = cols.rows();
    let k = cols.cols();
    if k > n {
        return Err(Error::NotIsometry {
            residual: f64::INFINITY,
        });
    }
    let residual = (&cols.adjoint() * cols).identity_residual();
    if !(residual <= ISOMETRY_TOLERANCE) {
        return Err(Error::NotIsometry { residual });
    }

    let mut basis: Vec<Vec<Complex64>> = (0..k).map(|j| cols.column(j)).collect();
    // Each step adds the canonical vector with the largest component outside
    // the current span; that component always has norm at least 1/√n.
    while basis.len() < n {
        let mut best: Option<(f64, Vec<Complex64>)> = None;
        for e in 0..n {
            let mut cand = vec![ZERO; n];
            cand[e] = ONE;
            for _ in 0..2 {
                for b in &basis {
                    let overlap: Complex64 = b.iter().zip(&cand).map(|(x, y)| x.conj() * y).sum();
                    for (c, x) in cand.iter_mut().zip(b) {
                        *c -= overlap * x;
                    }
                }
            }
            let nc = norm(&cand);
            if best.as_ref().is_none_or(|(bn, _)| nc > *bn) {
                best = Some((nc, cand));
            }
        }
        let (nc, cand) = best.expect("n > 0");
        basis.push(cand.into_iter().map(|z| z / nc).collect());
    }
    ComplexMatrix::from_columns(&basis)
}

pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_density, random_hermitian, random_matrix, random_unitary, rng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_eigenvalues() {
        let e = herm_eig(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(e.eigenvalues.len(), 2);
        for l in &e.eigenvalues {
            assert!((l - 1.0).abs() < 1e-15);
        }
        assert!((&e.eigenvectors.adjoint() * &e.eigenvectors).identity_residual() < 1e-12);
    }

    #[test]
    fn diagonal_eigenvalues_sorted() {
        let e = herm_eig(&ComplexMatrix::from_real_diagonal(&[0.8, 0.2])).unwrap();
        assert!((e.eigenvalues[0] - 0.2).abs() < 1e-15);
        assert!((e.eigenvalues[1] - 0.8).abs() < 1e-15);
    }

    #[test]
    fn random_hermitian_reconstruction() {
        let mut r = rng(11);
        let h = random_hermitian(&mut r, 6);
        let e = herm_eig(&h).unwrap();
        assert!(e.reconstruct().distance(&h) <= 1e-10);
        assert!((&e.eigenvectors.adjoint() * &e.eigenvectors).identity_residual() <= 1e-10);
        assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn closed_form_eigenvalues_match_jacobi() {
        let mut r = rng(3);
        for n in 1..=4 {
            let h = random_hermitian(&mut r, n);
            let fast = herm_eigenvalues(&h).unwrap();
            let full = herm_eig(&h).unwrap().eigenvalues;
            for (a, b) in fast.iter().zip(&full) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn eig_rejects_bad_input() {
        assert!(matches!(
            herm_eig(&ComplexMatrix::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
        let mut m = ComplexMatrix::identity(2);
        m[(0, 1)] = c(0.5, 0.0);
        assert!(matches!(herm_eig(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn kron_identity_and_shape() {
        let i6 = kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(3));
        assert_eq!(i6, ComplexMatrix::identity(6));
        let mut r = rng(5);
        let k = kron(&random_matrix(&mut r, 2, 2), &random_matrix(&mut r, 3, 3));
        assert_eq!((k.rows(), k.cols()), (6, 6));
    }

    #[test]
    fn kron_mixed_product() {
        let mut r = rng(8);
        let a = random_matrix(&mut r, 2, 3);
        let b = random_matrix(&mut r, 3, 2);
        let cm = random_matrix(&mut r, 3, 2);
        let d = random_matrix(&mut r, 2, 4);
        let lhs = &kron(&a, &b) * &kron(&cm, &d);
        let rhs = kron(&(&a * &cm), &(&b * &d));
        assert!(lhs.distance(&rhs) <= 1e-10);
    }

    #[test]
    fn partial_trace_of_product() {
        let mut r = rng(21);
        let ra = random_density(&mut r, 2, 2);
        let rb = random_density(&mut r, 3, 3);
        let prod = kron(&ra, &rb);
        let red_a = partial_trace(&prod, (2, 3), Subsystem::B).unwrap();
        let red_b = partial_trace(&prod, (2, 3), Subsystem::A).unwrap();
        assert!(red_a.distance(&ra) < 1e-14);
        assert!(red_b.distance(&rb) < 1e-14);
    }

    #[test]
    fn partial_trace_of_bell_state() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let phi = vec![c(h, 0.0), ZERO, ZERO, c(h, 0.0)];
        let rho = ComplexMatrix::outer(&phi, &phi);
        let red = partial_trace(&rho, (2, 2), Subsystem::A).unwrap();
        assert!(red.distance(&ComplexMatrix::identity(2).scale_real(0.5)) < 1e-15);
    }

    /// Oracle: Σ_k (⟨k| ⊗ I) M (|k⟩ ⊗ I) with explicit embedding matrices.
    fn trace_out_a_by_embedding(m: &ComplexMatrix, da: usize, db: usize) -> ComplexMatrix {
        let mut acc = ComplexMatrix::zeros(db, db);
        for k in 0..da {
            let mut ket = ComplexMatrix::zeros(da, 1);
            ket[(k, 0)] = ONE;
            let emb = kron(&ket, &ComplexMatrix::identity(db));
            let term = &(&emb.adjoint() * m) * &emb;
            acc = &acc + &term;
        }
        acc
    }

    #[test]
    fn partial_trace_matches_embedding_oracle() {
        let mut r = rng(2);
        let m = random_matrix(&mut r, 4, 4);
        let fast = partial_trace(&m, (2, 2), Subsystem::A).unwrap();
        let slow = trace_out_a_by_embedding(&m, 2, 2);
        assert!(fast.distance(&slow) <= 1e-12);
        let t = partial_trace(&m, (2, 2), Subsystem::B).unwrap();
        assert!((t.trace() - m.trace()).norm() <= 1e-12);
    }

    #[test]
    fn partial_trace_dimension_error() {
        let m = ComplexMatrix::identity(5);
        assert!(partial_trace(&m, (2, 2), Subsystem::A).is_err());
    }

    #[test]
    fn swap_is_involution_and_matches_kron_order() {
        let mut r = rng(4);
        let a = random_matrix(&mut r, 2, 2);
        let b = random_matrix(&mut r, 3, 3);
        let swapped = swap_subsystems(&kron(&a, &b), (2, 3)).unwrap();
        assert!(swapped.distance(&kron(&b, &a)) < 1e-14);
        let back = swap_subsystems(&swapped, (3, 2)).unwrap();
        assert!(back.distance(&kron(&a, &b)) < 1e-14);
    }

    #[test]
    fn complete_single_column() {
        let mut col = ComplexMatrix::zeros(3, 1);
        col[(0, 0)] = ONE;
        let u = complete_to_unitary(&col).unwrap();
        assert_eq!((u.rows(), u.cols()), (3, 3));
        assert!((&u.adjoint() * &u).identity_residual() < 1e-12);
        assert_eq!(u.column(0), col.column(0));
    }

    #[test]
    fn complete_full_unitary_unchanged() {
        let mut r = rng(9);
        let u = random_unitary(&mut r, 4);
        let w = complete_to_unitary(&u).unwrap();
        assert!(w.distance(&u) < 1e-15);
    }

    #[test]
    fn complete_random_isometry() {
        let mut r = rng(10);
        let u = random_unitary(&mut r, 6);
        let iso = ComplexMatrix::from_fn(6, 2, |i, j| u[(i, j)]);
        let w = complete_to_unitary(&iso).unwrap();
        assert!((&w.adjoint() * &w).identity_residual() <= 1e-10);
        for j in 0..2 {
            for i in 0..6 {
                assert!((w[(i, j)] - iso[(i, j)]).norm() <= 1e-10);
            }
        }
    }

    #[test]
    fn complete_rejects_non_isometry() {
        let m = ComplexMatrix::from_fn(3, 2, |i, j| c((i + j) as f64, 0.0));
        assert!(matches!(complete_to_unitary(&m), Err(Error::NotIsometry { .. })));
    }

    #[test]
    fn from_vec_validates() {
        assert!(ComplexMatrix::from_vec(2, 2, vec![ZERO; 3]).is_err());
        assert!(ComplexMatrix::from_vec(1, 1, vec![c(f64::NAN, 0.0)]).is_err());
    }
}
