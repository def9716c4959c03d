use std::ops::Deref;

use super::eig::{hermitian_eig, Spectrum};
use super::ComplexMatrix;
use crate::error::{Error, Result};

/// Relative Hermiticity tolerance enforced at construction.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Absolute tolerance for positivity and unit trace of density matrices.
pub const DENSITY_TOL: f64 = 1e-10;

/// Square matrix equal to its adjoint.
///
/// Construction checks `|M - M^dag|_max <= 1e-12 max(1, |M|_max)` and then
/// stores the exact Hermitian part, so downstream code can rely on `M = M^dag`
/// bit for bit.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidDims(format!(
                "Hermitian matrix must be square, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let deviation = m.hermiticity_defect();
        if deviation > HERMITIAN_TOL * m.max_norm().max(1.0) {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self(m.hermitian_part()))
    }

    /// Hermitian part of a square matrix that is Hermitian up to rounding,
    /// e.g. the output of `K rho K^dag` sums.
    pub fn from_hermitian_part(m: &ComplexMatrix) -> Self {
        Self(m.hermitian_part())
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        Self(ComplexMatrix::from_diag(diag))
    }

    pub fn identity(d: usize) -> Self {
        Self(ComplexMatrix::identity(d))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn eig(&self) -> Result<Spectrum> {
        hermitian_eig(self)
    }

    pub fn trace_re(&self) -> f64 {
        self.0.trace().re
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn scale(&self, x: f64) -> Self {
        Self(self.0.scale(x))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Self(self.0.try_add(&other.0)?))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(Self(self.0.try_sub(&other.0)?))
    }

    /// `sum_j w_j M_j`.
    pub fn weighted_sum(weights: &[f64], terms: &[Self]) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty weighted sum".into()))?;
        if weights.len() != terms.len() {
            return Err(Error::InvalidArgument(format!(
                "{} weights for {} terms",
                weights.len(),
                terms.len()
            )));
        }
        let mut acc = ComplexMatrix::zeros(first.dim(), first.dim());
        for (w, m) in weights.iter().zip(terms) {
            acc = acc.try_add(&m.0.scale(*w))?;
        }
        Ok(Self(acc))
    }

    /// `A M A^dag`, Hermitian for any `A`.
    pub fn congruence(&self, a: &ComplexMatrix) -> Result<Self> {
        Ok(Self::from_hermitian_part(&self.0.conjugate_by(a)?))
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self(super::tensor(&self.0, &other.0))
    }

    /// Checks positivity with an absolute tolerance scaled by `max(1, |lambda|_max)`.
    pub fn check_psd(&self, tol: f64) -> Result<Spectrum> {
        let s = self.eig()?;
        let floor = -tol * s.spectral_radius().max(1.0);
        if s.min() < floor {
            return Err(Error::NotPositive {
                min_eigenvalue: s.min(),
            });
        }
        Ok(s)
    }
}

impl Deref for HermitianMatrix {
    type Target = ComplexMatrix;

    fn deref(&self) -> &ComplexMatrix {
        &self.0
    }
}

impl TryFrom<ComplexMatrix> for HermitianMatrix {
    type Error = Error;

    fn try_from(m: ComplexMatrix) -> Result<Self> {
        Self::new(m)
    }
}

/// Positive semi-definite Hermitian matrix of unit trace.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(HermitianMatrix);

impl DensityMatrix {
    pub fn new(m: HermitianMatrix) -> Result<Self> {
        let trace = m.trace_re();
        let min_eigenvalue = m.eig()?.min();
        if min_eigenvalue < -DENSITY_TOL || (trace - 1.0).abs() > DENSITY_TOL {
            return Err(Error::NotDensity {
                trace,
                min_eigenvalue,
            });
        }
        Ok(Self(m))
    }

    pub fn from_matrix(m: ComplexMatrix) -> Result<Self> {
        Self::new(HermitianMatrix::new(m)?)
    }

    /// The pure state `|psi><psi|` of a unit vector.
    pub fn pure(psi: &[num_complex::Complex64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > DENSITY_TOL {
            return Err(Error::InvalidArgument(format!(
                "state vector has squared norm {norm}"
            )));
        }
        Self::new(HermitianMatrix::from_hermitian_part(&ComplexMatrix::outer(psi, psi)))
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self(HermitianMatrix::identity(d).scale(1.0 / d as f64))
    }

    pub fn basis_state(d: usize, k: usize) -> Self {
        Self(HermitianMatrix(ComplexMatrix::basis_projector(d, k)))
    }

    /// Wraps without validation. For states produced by maps that preserve
    /// positivity and trace, e.g. partial traces of density matrices.
    pub(crate) fn new_unchecked(m: HermitianMatrix) -> Self {
        Self(m)
    }

    pub fn as_hermitian(&self) -> &HermitianMatrix {
        &self.0
    }

    pub fn into_hermitian(self) -> HermitianMatrix {
        self.0
    }
}

impl Deref for DensityMatrix {
    type Target = HermitianMatrix;

    fn deref(&self) -> &HermitianMatrix {
        &self.0
    }
}
