//! Left and right multiplication superoperators `L_P(X) = PX`, `R_P(X) = XP`
//! and the resolvent `(L_Q + t R_P)^-1`.
//!
//! With `Q = U diag(q) U^dag` and `P = V diag(p) V^dag` the operator
//! `L_Q + t R_P` is diagonal in the basis `X = U E_mn V^dag` with eigenvalue
//! `q_m + t p_n`, so the resolvent costs two eigendecompositions (cached in
//! [`SuperOpSpec`]) and a few matrix products. Matrices are vectorized
//! row-major, `vec(X)[i d + j] = X_ij`, which fixes the layout of
//! [`superop_matrix`].

use num_complex::Complex64;

use crate::error::{shape_err, Error, Result};
use crate::matcore::{tensor, ComplexMatrix, HermitianMatrix, Spectrum};

/// Positivity tolerance for the two operands.
pub const PSD_TOL: f64 = 1e-10;
/// Relative threshold for `q_m + t p_n` below which a mode is in the joint kernel.
pub const JOINT_KERNEL_ETA: f64 = 1e-12;
/// Largest tolerated component of the argument on the joint kernel.
pub const KERNEL_COMPONENT_TOL: f64 = 1e-10;

pub fn left_mul(p: &ComplexMatrix, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    p.try_matmul(x)
}

pub fn right_mul(p: &ComplexMatrix, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    x.try_matmul(p)
}

/// The map `X -> QX + tXP` for PSD `Q`, `P` and `t >= 0`.
#[derive(Clone, Debug)]
pub struct SuperOpSpec {
    left: HermitianMatrix,
    right: HermitianMatrix,
    t: f64,
    left_spec: Spectrum,
    right_spec: Spectrum,
}

fn clamped_psd_spectrum(m: &HermitianMatrix) -> Result<Spectrum> {
    let mut s = m.check_psd(PSD_TOL)?;
    for v in &mut s.values {
        *v = v.max(0.0);
    }
    Ok(s)
}

impl SuperOpSpec {
    /// `left` multiplies from the left (`Q`), `right` from the right (`P`).
    pub fn new(left: &HermitianMatrix, right: &HermitianMatrix, t: f64) -> Result<Self> {
        if left.dim() != right.dim() {
            return Err(shape_err(
                format!("{0}x{0}", left.dim()),
                format!("{0}x{0}", right.dim()),
            ));
        }
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::InvalidArgument(format!("t = {t} must be finite and >= 0")));
        }
        Ok(Self {
            left_spec: clamped_psd_spectrum(left)?,
            right_spec: clamped_psd_spectrum(right)?,
            left: left.clone(),
            right: right.clone(),
            t,
        })
    }

    pub fn dim(&self) -> usize {
        self.left.dim()
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn left(&self) -> &HermitianMatrix {
        &self.left
    }

    pub fn right(&self) -> &HermitianMatrix {
        &self.right
    }

    pub fn left_spectrum(&self) -> &Spectrum {
        &self.left_spec
    }

    pub fn right_spectrum(&self) -> &Spectrum {
        &self.right_spec
    }

    /// Same operands, different `t`; reuses the cached spectra.
    pub fn with_t(&self, t: f64) -> Result<Self> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::InvalidArgument(format!("t = {t} must be finite and >= 0")));
        }
        Ok(Self { t, ..self.clone() })
    }

    fn check_arg(&self, x: &ComplexMatrix) -> Result<()> {
        let d = self.dim();
        if x.shape() != (d, d) {
            return Err(shape_err(format!("{d}x{d}"), format!("{}x{}", x.rows(), x.cols())));
        }
        Ok(())
    }

    /// `QX + tXP`.
    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_arg(x)?;
        let lx = left_mul(&self.left, x)?;
        let rx = right_mul(&self.right, x)?;
        Ok(&lx + &rx.scale(self.t))
    }

    /// `(L_Q + t R_P)^-1 (X)`, pseudo-inverse on the joint kernel.
    pub fn solve_resolvent(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.resolvent_at(self.t, x)
    }

    /// Resolvent at an arbitrary `t >= 0` with the cached spectra.
    pub fn resolvent_at(&self, t: f64, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_arg(x)?;
        let d = self.dim();
        let u = &self.left_spec.vectors;
        let v = &self.right_spec.vectors;
        let q = &self.left_spec.values;
        let p = &self.right_spec.values;
        let threshold = JOINT_KERNEL_ETA * (self.left_spec.max() + t * self.right_spec.max());
        let component_tol = KERNEL_COMPONENT_TOL * x.max_norm().max(1.0);

        let mut xt = &(&u.adjoint() * x) * v;
        for m in 0..d {
            for n in 0..d {
                let denom = q[m] + t * p[n];
                let z = &mut xt[(m, n)];
                if denom <= threshold {
                    if z.norm() > component_tol {
                        return Err(Error::KernelObstruction { magnitude: z.norm() });
                    }
                    *z = Complex64::new(0.0, 0.0);
                } else {
                    *z /= denom;
                }
            }
        }
        Ok(&(u * &xt) * &v.adjoint())
    }

    /// `Tr X^dag (L_Q + t R_P)^-1 (X)`, real for any `X` since the operator is
    /// self-adjoint and positive.
    pub fn quadratic_form_inverse(&self, x: &ComplexMatrix) -> Result<f64> {
        let y = self.solve_resolvent(x)?;
        Ok(crate::matcore::hs_inner(x, &y)?.re)
    }

    /// `Tr X^dag (L_Q + t R_P)(X)`.
    pub fn quadratic_form(&self, x: &ComplexMatrix) -> Result<f64> {
        let y = self.apply(x)?;
        Ok(crate::matcore::hs_inner(x, &y)?.re)
    }
}

pub fn solve_resolvent(spec: &SuperOpSpec, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    spec.solve_resolvent(x)
}

/// Dense `d^2 x d^2` matrix `S` with `S vec(X) = vec(QX + tXP)`, i.e.
/// `S = Q (x) I + t I (x) P^T` under row-major vectorization.
pub fn superop_matrix(spec: &SuperOpSpec) -> ComplexMatrix {
    let d = spec.dim();
    let id = ComplexMatrix::identity(d);
    let left = tensor(spec.left(), &id);
    let right = tensor(&id, &spec.right().transpose()).scale(spec.t());
    &left + &right
}

/// Row-major vectorization.
pub fn vectorize(x: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::new(x.rows() * x.cols(), 1, x.data().to_vec()).expect("non-empty")
}

pub fn unvectorize(v: &ComplexMatrix, d: usize) -> Result<ComplexMatrix> {
    ComplexMatrix::new(d, d, v.data().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{hs_inner, solve};
    use crate::randgen::{random_psd, RngState};

    fn herm_diag(v: &[f64]) -> HermitianMatrix {
        HermitianMatrix::from_diag(v)
    }

    #[test]
    fn left_identity_and_shape_errors() {
        let mut rng = RngState::new(1);
        let x = rng.gaussian_matrix(3, 3);
        assert_eq!(left_mul(&ComplexMatrix::identity(3), &x).unwrap(), x);
        assert!(left_mul(&ComplexMatrix::identity(2), &x).is_err());
        assert!(right_mul(&ComplexMatrix::identity(2), &x).is_err());
    }

    #[test]
    fn left_and_right_commute() {
        let mut rng = RngState::new(2);
        for _ in 0..100 {
            let (p, q, x) = (rng.gaussian_matrix(3, 3), rng.gaussian_matrix(3, 3), rng.gaussian_matrix(3, 3));
            let a = left_mul(&p, &right_mul(&q, &x).unwrap()).unwrap();
            let b = right_mul(&q, &left_mul(&p, &x).unwrap()).unwrap();
            assert!(a.max_diff(&b) <= 1e-13);
        }
    }

    #[test]
    fn left_mul_adjoint_property() {
        let mut rng = RngState::new(3);
        for _ in 0..50 {
            let (p, a, b) = (rng.gaussian_matrix(4, 4), rng.gaussian_matrix(4, 4), rng.gaussian_matrix(4, 4));
            let lhs = hs_inner(&a, &left_mul(&p, &b).unwrap()).unwrap();
            let rhs = hs_inner(&left_mul(&p.adjoint(), &a).unwrap(), &b).unwrap();
            assert!((lhs - rhs).norm() <= 1e-13);
        }
    }

    #[test]
    fn identity_resolvent_halves() {
        let spec = SuperOpSpec::new(&HermitianMatrix::identity(3), &HermitianMatrix::identity(3), 1.0).unwrap();
        let x = RngState::new(4).gaussian_matrix(3, 3);
        assert!(spec.solve_resolvent(&x).unwrap().max_diff(&x.scale(0.5)) < 1e-15);
        assert!(superop_matrix(&spec).max_diff(&ComplexMatrix::identity(9).scale(2.0)) == 0.0);
    }

    #[test]
    fn diagonal_resolvent_matches_dense_solve() {
        let spec = SuperOpSpec::new(&herm_diag(&[1.0, 2.0]), &herm_diag(&[3.0, 4.0]), 1.0).unwrap();
        let ones = ComplexMatrix::from_real(2, 2, &[1.0; 4]).unwrap();
        // dense oracle
        let dense = unvectorize(&solve(&superop_matrix(&spec), &vectorize(&ones)).unwrap(), 2).unwrap();
        let expected = ComplexMatrix::from_real(2, 2, &[0.25, 0.2, 0.2, 1.0 / 6.0]).unwrap();
        assert!(dense.max_diff(&expected) < 1e-15);
        assert!(spec.solve_resolvent(&ones).unwrap().max_diff(&expected) < 1e-15);
    }

    #[test]
    fn diagonal_superop_eigenvalues_are_pair_sums() {
        let q = [0.5, 1.5, 2.0];
        let p = [0.1, 0.7, 3.0];
        let t = 0.3;
        let spec = SuperOpSpec::new(&herm_diag(&q), &herm_diag(&p), t).unwrap();
        let s = HermitianMatrix::new(superop_matrix(&spec)).unwrap().eig().unwrap();
        let mut expected: Vec<f64> = q.iter().flat_map(|a| p.iter().map(move |b| a + t * b)).collect();
        expected.sort_by(f64::total_cmp);
        for (a, b) in s.values.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn random_residual_and_dense_agreement() {
        let mut rng = RngState::new(6);
        for _ in 0..20 {
            let q = random_psd(3, 3, &mut rng);
            let p = random_psd(3, 3, &mut rng);
            let spec = SuperOpSpec::new(&q, &p, 0.7).unwrap();
            let x = rng.gaussian_matrix(3, 3);
            let y = spec.solve_resolvent(&x).unwrap();
            let residual = spec.apply(&y).unwrap().max_diff(&x);
            assert!(residual <= 1e-10 * x.max_norm());
            let s = superop_matrix(&spec);
            assert!((&s * &vectorize(&x)).max_diff(&vectorize(&spec.apply(&x).unwrap())) <= 1e-13);
        }
    }

    #[test]
    fn joint_kernel_pseudo_inverse_and_obstruction() {
        let q = herm_diag(&[1.0, 0.0]);
        let p = herm_diag(&[2.0, 0.0]);
        let spec = SuperOpSpec::new(&q, &p, 1.0).unwrap();
        // support-only argument: fine, zero on the kernel mode
        let x = ComplexMatrix::from_real(2, 2, &[3.0, 1.0, 1.0, 0.0]).unwrap();
        let y = spec.solve_resolvent(&x).unwrap();
        assert!((y[(0, 0)].re - 1.0).abs() < 1e-15);
        assert!((y[(0, 1)].re - 1.0).abs() < 1e-15);
        assert_eq!(y[(1, 1)].re, 0.0);
        // component on the (1,1) joint-kernel mode
        let bad = ComplexMatrix::from_real(2, 2, &[0.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(matches!(spec.solve_resolvent(&bad), Err(Error::KernelObstruction { .. })));
    }

    #[test]
    fn rejects_non_psd_and_negative_t() {
        let bad = herm_diag(&[1.0, -0.5]);
        assert!(SuperOpSpec::new(&bad, &HermitianMatrix::identity(2), 1.0).is_err());
        assert!(SuperOpSpec::new(&HermitianMatrix::identity(2), &HermitianMatrix::identity(2), -1.0).is_err());
        assert!(SuperOpSpec::new(&HermitianMatrix::identity(2), &HermitianMatrix::identity(3), 1.0).is_err());
    }
}
