//! Seeded random matrices and states.
//!
//! All generators draw from xoshiro256++ seeded through `seed_from_u64`
//! (SplitMix64 expansion), so a seed fixes every number produced here.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::linalg::{inner, norm, ComplexMatrix};

pub type SeededRng = Xoshiro256PlusPlus;

pub fn rng(seed: u64) -> SeededRng {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

/// Standard complex Gaussian (independent N(0,1) real and imaginary parts).
pub fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| gaussian_complex(rng)).collect()
}

/// Ginibre matrix with i.i.d. complex Gaussian entries.
pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian_complex(rng))
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    random_matrix(rng, n, n).hermitian_part()
}

/// Uniformly random unit vector.
pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    loop {
        let v = gaussian_vector(rng, n);
        let nv = norm(&v);
        if nv > 1e-8 {
            return v.into_iter().map(|z| z / nv).collect();
        }
    }
}

/// `G G† / Tr(G G†)` with `G` an `n × rank` Ginibre matrix.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> ComplexMatrix {
    let g = random_matrix(rng, n, rank.max(1));
    let w = &g * &g.adjoint();
    let t = w.trace().re;
    w.hermitian_part().scale_real(1.0 / t)
}

/// Unitary from Gram–Schmidt on a Ginibre matrix (Haar distributed).
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let cols = orthonormal_columns(rng, n, n);
    ComplexMatrix::from_columns(&cols).expect("columns share a length")
}

/// `k` orthonormal random vectors in `C^n`.
pub fn orthonormal_columns<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Vec<Vec<Complex64>> {
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(k);
    while basis.len() < k {
        let mut v = gaussian_vector(rng, n);
        for _ in 0..2 {
            for b in &basis {
                let ov = inner(b, &v);
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= ov * y;
                }
            }
        }
        let nv = norm(&v);
        if nv > 1e-8 {
            basis.push(v.into_iter().map(|z| z / nv).collect());
        }
    }
    basis
}

pub fn random_angle<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random_range(0.0..2.0 * PI)
}
