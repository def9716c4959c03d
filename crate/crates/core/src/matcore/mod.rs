//! Dense complex matrices, Hermitian eigendecomposition, matrix functions,
//! tensor products and partial traces.
//!
//! Tensor-product indices are row-major with the leftmost factor varying
//! slowest: for `A (x) B` the composite index of `(i_A, i_B)` is
//! `i_A * d_B + i_B`. The same convention is used by [`partial_trace`] and by
//! the JSON fixtures.

mod eig;
mod hermitian;
mod json;
mod matrix;

use num_complex::Complex64;

pub use eig::{hermitian_eig, hermitian_eig_with, Spectrum, DEFAULT_MAX_SWEEPS, JACOBI_TOLERANCE};
pub use hermitian::{DensityMatrix, HermitianMatrix, DENSITY_TOL, HERMITIAN_TOL};
pub use json::MatrixJson;
pub use matrix::ComplexMatrix;

use crate::error::{shape_err, Error, Result};

/// Relative eigenvalue threshold below which an eigenvalue counts as zero.
pub const KERNEL_ETA: f64 = 1e-12;

/// How eigenvalues near zero are treated before a function is applied.
///
/// "Near zero" means `|lambda| <= eta * max_k |lambda_k|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum KernelPolicy {
    /// Apply `f` to every eigenvalue as computed.
    Keep,
    /// Replace near-zero eigenvalues by exact zeros, then apply `f`.
    Clamp { eta: f64 },
    /// Restrict to the support: near-zero eigenvalues contribute nothing.
    Support { eta: f64 },
}

impl Default for KernelPolicy {
    fn default() -> Self {
        KernelPolicy::Support { eta: KERNEL_ETA }
    }
}

impl KernelPolicy {
    fn threshold(eta: f64, spectrum: &Spectrum) -> f64 {
        eta * spectrum.spectral_radius()
    }

    /// Whether eigenvalue `k` of `spectrum` is treated as zero.
    pub fn is_null(&self, spectrum: &Spectrum, k: usize) -> bool {
        match *self {
            KernelPolicy::Keep => false,
            KernelPolicy::Clamp { eta } | KernelPolicy::Support { eta } => {
                spectrum.values[k].abs() <= Self::threshold(eta, spectrum)
            }
        }
    }
}

/// `f(M) = sum_k f(lambda_k) |phi_k><phi_k|`.
pub fn matrix_function(
    m: &HermitianMatrix,
    f: impl Fn(f64) -> f64,
    policy: KernelPolicy,
) -> Result<HermitianMatrix> {
    let s = m.eig()?;
    spectral_function(&s, f, policy)
}

/// [`matrix_function`] on an already computed spectrum.
pub fn spectral_function(
    s: &Spectrum,
    f: impl Fn(f64) -> f64,
    policy: KernelPolicy,
) -> Result<HermitianMatrix> {
    let mut weights = Vec::with_capacity(s.dim());
    for (k, &lambda) in s.values.iter().enumerate() {
        let w = if policy.is_null(s, k) {
            match policy {
                KernelPolicy::Support { .. } => 0.0,
                _ => f(0.0),
            }
        } else {
            f(lambda)
        };
        if !w.is_finite() {
            return Err(Error::Domain { eigenvalue: lambda });
        }
        weights.push(w);
    }
    Ok(HermitianMatrix::from_hermitian_part(&s.compose(&weights)))
}

/// Square root of a PSD matrix; tiny negative eigenvalues are clamped to zero.
pub fn psd_sqrt(m: &HermitianMatrix) -> Result<HermitianMatrix> {
    matrix_function(m, |x| x.max(0.0).sqrt(), KernelPolicy::Clamp { eta: KERNEL_ETA })
}

/// Moore-Penrose inverse of a Hermitian matrix (inverse on the support).
pub fn pseudo_inverse(m: &HermitianMatrix) -> Result<HermitianMatrix> {
    matrix_function(m, |x| 1.0 / x, KernelPolicy::default())
}

/// Hilbert-Schmidt inner product `<A, B> = Tr A^dag B`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64> {
    if a.shape() != b.shape() {
        return Err(shape_err(
            format!("{}x{}", a.rows(), a.cols()),
            format!("{}x{}", b.rows(), b.cols()),
        ));
    }
    Ok(a.data().iter().zip(b.data()).map(|(x, y)| x.conj() * y).sum())
}

/// Kronecker product `A (x) B`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (br, bc) = b.shape();
    ComplexMatrix::from_fn(a.rows() * br, a.cols() * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

/// Kronecker product of vectors.
pub fn tensor_vec(u: &[Complex64], v: &[Complex64]) -> Vec<Complex64> {
    u.iter().flat_map(|&a| v.iter().map(move |&b| a * b)).collect()
}

/// Mixed-radix offsets of the listed factors: for every multi-index over
/// `factors`, the contribution `sum_f digit_f * stride_f` to the full index.
fn factor_offsets(dims: &[usize], factors: &[usize]) -> Vec<usize> {
    let mut strides = vec![1usize; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    let mut offsets = vec![0usize];
    for &f in factors {
        let stride = strides[f];
        offsets = offsets
            .iter()
            .flat_map(|&o| (0..dims[f]).map(move |digit| o + digit * stride))
            .collect();
    }
    offsets
}

/// Reduced matrix on the factors listed in `keep` (in ascending factor order).
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::InvalidDims(format!("factor dimensions {dims:?}")));
    }
    if !m.is_square() || m.rows() != total {
        return Err(Error::InvalidDims(format!(
            "dims {dims:?} multiply to {total}, matrix is {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.len() != keep.len() || kept.iter().any(|&k| k >= dims.len()) {
        return Err(Error::InvalidDims(format!(
            "keep {keep:?} is not a set of factor indices below {}",
            dims.len()
        )));
    }
    if kept.is_empty() {
        return Ok(ComplexMatrix::from_fn(1, 1, |_, _| m.trace()));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|f| !kept.contains(f)).collect();
    let keep_off = factor_offsets(dims, &kept);
    let trace_off = factor_offsets(dims, &traced);
    let n = keep_off.len();
    Ok(ComplexMatrix::from_fn(n, n, |r, c| {
        trace_off
            .iter()
            .map(|&t| m[(keep_off[r] + t, keep_off[c] + t)])
            .sum()
    }))
}

/// Partial trace of a Hermitian matrix, returned as Hermitian.
pub fn partial_trace_hermitian(
    m: &HermitianMatrix,
    dims: &[usize],
    keep: &[usize],
) -> Result<HermitianMatrix> {
    Ok(HermitianMatrix::from_hermitian_part(&partial_trace(m, dims, keep)?))
}

/// Reduced state of a density matrix.
pub fn reduce(rho: &DensityMatrix, dims: &[usize], keep: &[usize]) -> Result<DensityMatrix> {
    Ok(DensityMatrix::new_unchecked(partial_trace_hermitian(rho, dims, keep)?))
}

/// Solves `A X = B` by LU decomposition with partial pivoting.
pub fn solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.rows();
    if !a.is_square() || b.rows() != n {
        return Err(shape_err(
            format!("square system with {} right-hand rows", b.rows()),
            format!("{}x{}", a.rows(), a.cols()),
        ));
    }
    let m = b.cols();
    let mut lu = a.data().to_vec();
    let mut x = b.data().to_vec();
    let scale = a.max_norm();
    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&i, &j| lu[i * n + k].norm().total_cmp(&lu[j * n + k].norm()))
            .unwrap_or(k);
        if lu[pivot * n + k].norm() <= f64::EPSILON * scale * n as f64 {
            return Err(Error::Singular);
        }
        if pivot != k {
            for j in 0..n {
                lu.swap(k * n + j, pivot * n + j);
            }
            for j in 0..m {
                x.swap(k * m + j, pivot * m + j);
            }
        }
        let inv = lu[k * n + k].inv();
        for i in k + 1..n {
            let factor = lu[i * n + k] * inv;
            if factor.norm() == 0.0 {
                continue;
            }
            for j in k..n {
                let v = lu[k * n + j];
                lu[i * n + j] -= factor * v;
            }
            for j in 0..m {
                let v = x[k * m + j];
                x[i * m + j] -= factor * v;
            }
        }
    }
    for k in (0..n).rev() {
        let inv = lu[k * n + k].inv();
        for j in 0..m {
            let mut acc = x[k * m + j];
            for i in k + 1..n {
                acc -= lu[k * n + i] * x[i * m + j];
            }
            x[k * m + j] = acc * inv;
        }
    }
    ComplexMatrix::new(n, m, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    fn pauli_y() -> ComplexMatrix {
        ComplexMatrix::new(2, 2, vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]).unwrap()
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let z = HermitianMatrix::new(ComplexMatrix::zeros(3, 3)).unwrap();
        let e = matrix_function(&z, f64::exp, KernelPolicy::Keep).unwrap();
        assert!(e.max_diff(&ComplexMatrix::identity(3)) < 1e-15);
        let e = matrix_function(&z, f64::exp, KernelPolicy::Clamp { eta: KERNEL_ETA }).unwrap();
        assert!(e.max_diff(&ComplexMatrix::identity(3)) < 1e-15);
    }

    #[test]
    fn minus_log_of_half_identity() {
        let m = HermitianMatrix::from_diag(&[0.5, 0.5]);
        let l = matrix_function(&m, |x| -x.ln(), KernelPolicy::default()).unwrap();
        let expected = ComplexMatrix::identity(2).scale(std::f64::consts::LN_2);
        assert!(l.max_diff(&expected) < 1e-15);
    }

    #[test]
    fn square_of_pauli_x_matches_product() {
        let x = HermitianMatrix::new(pauli_x()).unwrap();
        let sq = matrix_function(&x, |v| v * v, KernelPolicy::default()).unwrap();
        let direct = &pauli_x() * &pauli_x();
        assert!(sq.max_diff(&direct) < 1e-14);
        assert!(sq.max_diff(&ComplexMatrix::identity(2)) < 1e-14);
    }

    #[test]
    fn identity_function_roundtrip() {
        let m = HermitianMatrix::new(
            ComplexMatrix::new(2, 2, vec![c(1.0, 0.0), c(0.3, 0.4), c(0.3, -0.4), c(-2.0, 0.0)])
                .unwrap(),
        )
        .unwrap();
        let same = matrix_function(&m, |v| v, KernelPolicy::Keep).unwrap();
        assert!(same.max_diff(&m) < 1e-10);
    }

    #[test]
    fn log_of_negative_eigenvalue_is_domain_error() {
        let m = HermitianMatrix::from_diag(&[1.0, -0.5]);
        assert!(matches!(
            matrix_function(&m, f64::ln, KernelPolicy::default()),
            Err(Error::Domain { .. })
        ));
        // within the kernel threshold the eigenvalue is dropped
        let m = HermitianMatrix::from_diag(&[1.0, -1e-14]);
        assert!(matrix_function(&m, f64::ln, KernelPolicy::default()).is_ok());
    }

    #[test]
    fn hs_inner_examples() {
        let i3 = ComplexMatrix::identity(3);
        assert_eq!(hs_inner(&i3, &i3).unwrap(), c(3.0, 0.0));
        // oracle: Tr(X^dag Y) by explicit product
        let direct = (&pauli_x().adjoint() * &pauli_y()).trace();
        assert_eq!(direct, c(0.0, 0.0));
        assert_eq!(hs_inner(&pauli_x(), &pauli_y()).unwrap(), direct);
        assert!(hs_inner(&i3, &ComplexMatrix::identity(2)).is_err());
    }

    #[test]
    fn tensor_examples() {
        let i6 = tensor(&ComplexMatrix::identity(2), &ComplexMatrix::identity(3));
        assert_eq!(i6, ComplexMatrix::identity(6));
        let t = tensor(&ComplexMatrix::from_diag(&[1.0, 2.0]), &ComplexMatrix::from_diag(&[3.0, 4.0]));
        assert_eq!(t, ComplexMatrix::from_diag(&[3.0, 4.0, 6.0, 8.0]));
    }

    #[test]
    fn partial_trace_of_product_and_bell() {
        let rho = ComplexMatrix::from_diag(&[0.25, 0.75]);
        let sigma = ComplexMatrix::from_real(3, 3, &[0.5, 0.1, 0.0, 0.1, 0.3, 0.0, 0.0, 0.0, 0.2]).unwrap();
        let prod = tensor(&rho, &sigma);
        let ra = partial_trace(&prod, &[2, 3], &[0]).unwrap();
        assert!(ra.max_diff(&rho.scale(sigma.trace().re)) < 1e-15);
        let rb = partial_trace(&prod, &[2, 3], &[1]).unwrap();
        assert!(rb.max_diff(&sigma) < 1e-15);

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = [c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)];
        let proj = ComplexMatrix::outer(&bell, &bell);
        let red = partial_trace(&proj, &[2, 2], &[0]).unwrap();
        assert!(red.max_diff(&ComplexMatrix::identity(2).scale(0.5)) < 1e-15);
    }

    #[test]
    fn partial_trace_errors() {
        let m = ComplexMatrix::identity(4);
        assert!(partial_trace(&m, &[2, 3], &[0]).is_err());
        assert!(partial_trace(&m, &[2, 2], &[2]).is_err());
        assert!(partial_trace(&m, &[2, 2], &[0, 0]).is_err());
        let full = partial_trace(&m, &[2, 2], &[]).unwrap();
        assert_eq!(full[(0, 0)], c(4.0, 0.0));
    }

    #[test]
    fn lu_solve_recovers_solution() {
        let a = ComplexMatrix::new(
            3,
            3,
            vec![
                c(0.0, 1.0), c(2.0, 0.0), c(1.0, -1.0),
                c(1.0, 0.0), c(0.0, 0.0), c(3.0, 0.5),
                c(-1.0, 2.0), c(1.0, 1.0), c(0.0, 0.0),
            ],
        )
        .unwrap();
        let x = ComplexMatrix::from_real(3, 2, &[1.0, -1.0, 2.0, 0.5, -3.0, 4.0]).unwrap();
        let b = &a * &x;
        assert!(solve(&a, &b).unwrap().max_diff(&x) < 1e-13);
        assert!(matches!(
            solve(&ComplexMatrix::zeros(2, 2), &ComplexMatrix::zeros(2, 1)),
            Err(Error::Singular)
        ));
    }
}
