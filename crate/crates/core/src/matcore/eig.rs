//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary, then annihilates the (now real) pivot with a real plane rotation.
//! Both steps are folded into one 2x2 unitary `G` and applied as
//! `A <- G^dag A G`, `V <- V G`.

use num_complex::Complex64;

use super::{ComplexMatrix, HermitianMatrix};
use crate::error::{Error, Result};

/// Relative off-diagonal Frobenius mass at which a sweep loop stops.
pub const JACOBI_TOLERANCE: f64 = 1e-14;
pub const DEFAULT_MAX_SWEEPS: usize = 100;

/// Eigen-decomposition `M = U diag(values) U^dag` with ascending eigenvalues.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub values: Vec<f64>,
    /// Unitary matrix whose columns are the eigenvectors.
    pub vectors: ComplexMatrix,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Largest eigenvalue modulus.
    pub fn spectral_radius(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.vectors.column(k)
    }

    /// `U diag(f(lambda)) U^dag`.
    pub fn compose(&self, weights: &[f64]) -> ComplexMatrix {
        let d = self.dim();
        let u = &self.vectors;
        ComplexMatrix::from_fn(d, d, |i, j| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, &w) in weights.iter().enumerate() {
                if w != 0.0 {
                    acc += u[(i, k)] * u[(j, k)].conj() * w;
                }
            }
            acc
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.compose(&self.values)
    }
}

pub fn hermitian_eig(m: &HermitianMatrix) -> Result<Spectrum> {
    hermitian_eig_with(m, DEFAULT_MAX_SWEEPS)
}

pub fn hermitian_eig_with(m: &HermitianMatrix, max_sweeps: usize) -> Result<Spectrum> {
    let n = m.dim();
    let mut a: Vec<Complex64> = m.data().to_vec();
    let mut v = ComplexMatrix::identity(n).into_data();
    let scale = m.frobenius_norm();

    let off_norm = |a: &[Complex64]| -> f64 {
        let mut s = 0.0;
        for p in 0..n {
            for q in 0..n {
                if p != q {
                    s += a[p * n + q].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = scale == 0.0 || n == 1;
    let mut sweep = 0;
    while !converged {
        if off_norm(&a) <= JACOBI_TOLERANCE * scale {
            converged = true;
            break;
        }
        if sweep == max_sweeps {
            break;
        }
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let mag = apq.norm();
                if mag < f64::MIN_POSITIVE {
                    continue;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                // negligible against both diagonal entries: drop it exactly
                if sweep > 3 && app.abs() + 100.0 * mag == app.abs() && aqq.abs() + 100.0 * mag == aqq.abs() {
                    a[p * n + q] = Complex64::new(0.0, 0.0);
                    a[q * n + p] = Complex64::new(0.0, 0.0);
                    continue;
                }
                rotated = true;
                let phase_conj = (apq / mag).conj();
                let theta = (aqq - app) / (2.0 * mag);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let g_pp = Complex64::new(c, 0.0);
                let g_pq = Complex64::new(s, 0.0);
                let g_qp = phase_conj * (-s);
                let g_qq = phase_conj * c;

                // A <- A G (columns p, q)
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * g_pp + akq * g_qp;
                    a[k * n + q] = akp * g_pq + akq * g_qq;
                }
                // A <- G^dag A (rows p, q)
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = g_pp.conj() * apk + g_qp.conj() * aqk;
                    a[q * n + k] = g_pq.conj() * apk + g_qq.conj() * aqk;
                }
                a[p * n + q] = Complex64::new(0.0, 0.0);
                a[q * n + p] = Complex64::new(0.0, 0.0);
                a[p * n + p] = Complex64::new(app - t * mag, 0.0);
                a[q * n + q] = Complex64::new(aqq + t * mag, 0.0);

                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = vkp * g_pp + vkq * g_qp;
                    v[k * n + q] = vkp * g_pq + vkq * g_qq;
                }
            }
        }
        sweep += 1;
        if !rotated {
            converged = true;
        }
    }
    if !converged {
        return Err(Error::NonConvergence {
            what: "Jacobi eigensolver",
            iterations: max_sweeps,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re).then(i.cmp(&j)));
    let values = order.iter().map(|&k| a[k * n + k].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[i * n + order[j]]);
    Ok(Spectrum { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn herm(rows: usize, re: &[f64], im: &[f64]) -> HermitianMatrix {
        HermitianMatrix::new(ComplexMatrix::from_parts(rows, rows, re, im).unwrap()).unwrap()
    }

    #[test]
    fn diagonal_input_sorted() {
        let s = hermitian_eig(&herm(2, &[3.0, 0.0, 0.0, 1.0], &[0.0; 4])).unwrap();
        assert_eq!(s.values, vec![1.0, 3.0]);
    }

    #[test]
    fn pauli_x() {
        let s = hermitian_eig(&herm(2, &[0.0, 1.0, 1.0, 0.0], &[0.0; 4])).unwrap();
        assert!((s.values[0] + 1.0).abs() < 1e-15);
        assert!((s.values[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn complex_pivot_reconstructs() {
        // sigma_y + diag(0.3, -0.2) with a complex off-diagonal 3x3 block
        let m = herm(
            3,
            &[0.3, 0.0, 0.5, 0.0, -0.2, 1.0, 0.5, 1.0, 2.0],
            &[0.0, -1.0, 0.25, 1.0, 0.0, -0.7, -0.25, 0.7, 0.0],
        );
        let s = hermitian_eig(&m).unwrap();
        assert!(s.reconstruct().max_diff(&m) < 1e-13);
        let u = &s.vectors;
        assert!((&u.adjoint() * u).max_diff(&ComplexMatrix::identity(3)) < 1e-14);
        assert!(s.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn sweep_cap_reports_nonconvergence() {
        let m = herm(2, &[0.0, 1.0, 1.0, 0.0], &[0.0; 4]);
        assert!(matches!(
            hermitian_eig_with(&m, 0),
            Err(Error::NonConvergence { .. })
        ));
    }

    #[test]
    fn zero_matrix() {
        let s = hermitian_eig(&HermitianMatrix::new(ComplexMatrix::zeros(3, 3)).unwrap()).unwrap();
        assert_eq!(s.values, vec![0.0; 3]);
    }
}
