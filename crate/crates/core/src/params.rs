//! Angle parametrization of `k × r` isometries modulo row phases.
//!
//! `T = G_1 ⋯ G_N [I_r; 0]`, where each `G` is a complex Givens rotation
//! `[[cos θ, −e^{−iφ} sin θ], [e^{iφ} sin θ, cos θ]]` acting on a row pair
//! `(j, i)` with `j < r` and `j < i < k`. Rows of `T` define rank-one effects
//! `|t_x⟩⟨t_x|`, so a phase on any row is irrelevant and the remaining
//! manifold has real dimension `2rk − r² − r`. For `r = k` this covers
//! `U(k)` up to column phases, i.e. all rank-one projective measurements.

use num_complex::Complex64;

use crate::linalg::{ComplexMatrix, ZERO};

#[derive(Debug, Clone)]
pub struct IsometryParam {
    rows: usize,
    cols: usize,
    /// Rotation planes `(j, i)` in order of application to `[I; 0]`.
    planes: Vec<(usize, usize)>,
}

impl IsometryParam {
    pub fn new(rows: usize, cols: usize) -> Self {
        assert!(cols <= rows, "an isometry needs cols <= rows");
        let mut planes = Vec::new();
        for j in (0..cols).rev() {
            for i in j + 1..rows {
                planes.push((j, i));
            }
        }
        Self { rows, cols, planes }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Number of real parameters.
    pub fn len(&self) -> usize {
        2 * self.planes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.planes.is_empty()
    }

    /// Writes the row-major `rows × cols` isometry for `params` into `out`.
    pub fn fill(&self, params: &[f64], out: &mut [Complex64]) {
        let r = self.cols;
        out.iter_mut().for_each(|z| *z = ZERO);
        for d in 0..r {
            out[d * r + d] = Complex64::new(1.0, 0.0);
        }
        for (n, &(j, i)) in self.planes.iter().enumerate() {
            let (s, c) = params[2 * n].sin_cos();
            let (ps, pc) = params[2 * n + 1].sin_cos();
            let ph = Complex64::new(pc, ps);
            // Columns < j of rows j and i are still zero at this point.
            for col in j..r {
                let a = out[j * r + col];
                let b = out[i * r + col];
                out[j * r + col] = a * c - ph.conj() * b * s;
                out[i * r + col] = ph * a * s + b * c;
            }
        }
    }

    pub fn isometry(&self, params: &[f64]) -> ComplexMatrix {
        let mut data = vec![ZERO; self.rows * self.cols];
        self.fill(params, &mut data);
        ComplexMatrix::from_vec(self.rows, self.cols, data).expect("shape is consistent")
    }

    /// Parameters reproducing `t` up to row phases, found by Givens QR.
    pub fn params_for(&self, t: &ComplexMatrix) -> Vec<f64> {
        assert_eq!((t.rows(), t.cols()), (self.rows, self.cols));
        let (k, r) = (self.rows, self.cols);
        let mut m = t.clone();
        let mut theta = vec![0.0; self.planes.len()];
        let mut phi = vec![0.0; self.planes.len()];
        let index = |j: usize, i: usize| self.planes.iter().position(|&p| p == (j, i)).expect("plane exists");

        // Undo the rotations from the leftmost factor inward.
        for j in 0..r {
            for i in (j + 1..k).rev() {
                let a = m[(j, j)];
                let b = m[(i, j)];
                let th = b.norm().atan2(a.norm());
                let ph = if b.norm() > 0.0 && a.norm() > 0.0 {
                    b.arg() - a.arg()
                } else if b.norm() > 0.0 {
                    b.arg()
                } else {
                    0.0
                };
                let (s, c) = th.sin_cos();
                let e = Complex64::from_polar(1.0, ph);
                for col in 0..r {
                    let x = m[(j, col)];
                    let y = m[(i, col)];
                    m[(j, col)] = x * c + e.conj() * y * s;
                    m[(i, col)] = -e * x * s + y * c;
                }
                let n = index(j, i);
                theta[n] = th;
                phi[n] = ph;
            }
        }
        // What remains is diag(e^{iα_j}) on top. Pushing it left through each
        // rotation turns it into row phases and shifts φ by α_j − α_i.
        let alpha: Vec<f64> = (0..k).map(|i| if i < r { m[(i, i)].arg() } else { 0.0 }).collect();
        let mut out = Vec::with_capacity(self.len());
        for (n, &(j, i)) in self.planes.iter().enumerate() {
            out.push(theta[n]);
            out.push(phi[n] + alpha[j] - alpha[i]);
        }
        out
    }
}

/// `max_x min_φ ‖e^{iφ} a_x − b_x‖` over rows: zero iff `a` and `b` agree up to row phases.
pub fn row_phase_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (0..a.rows())
        .map(|x| {
            let ov: Complex64 = a.row(x).iter().zip(b.row(x)).map(|(p, q)| p.conj() * q).sum();
            let ph = if ov.norm() > 0.0 { ov / ov.norm() } else { Complex64::new(1.0, 0.0) };
            a.row(x)
                .iter()
                .zip(b.row(x))
                .map(|(p, q)| (p * ph - q).norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max)
}
