//! Von Neumann entropy and the relative entropy
//! `H(P, Q) = Tr P (ln P - ln Q)` (natural logarithms), computed three ways:
//!
//! * [`relative_entropy`] from the two spectra;
//! * [`relative_entropy_integral`] by quadrature of the resolvent form
//!   `H(P, Q) = Tr(P - Q) + int_0^inf Tr (Q-P) (L_Q + t R_P)^-1 (Q-P) (1+t)^-2 dt`;
//! * [`relative_entropy_spectral_kernel`], the same integral done in closed
//!   form mode by mode with [`kernel_k`].
//!
//! The `Tr(P - Q)` term makes the integral form exact for every PSD pair,
//! not only pairs of equal trace. `H(P, Q) = +inf` when `ker Q` is not
//! contained in `ker P`; that is a value ([`EntropyValue::Infinite`]), not an
//! error.

pub mod quadrature;

use std::fmt;

pub use quadrature::{integrate_adaptive, integrate_uniform, QuadratureConfig};

use crate::error::{shape_err, Error, Result};
use crate::matcore::{
    hs_inner, partial_trace_hermitian, psd_sqrt, ComplexMatrix, HermitianMatrix, Spectrum,
    KERNEL_ETA,
};
use crate::superop::SuperOpSpec;

/// Weight of `P` on `ker Q`, relative to `Tr P`, above which `H(P, Q) = +inf`.
pub const KERNEL_LEAK_TOL: f64 = 1e-10;
/// Below this relative gap `kernel_k` switches from the closed form to its
/// Taylor series around `a = b`.
pub const KERNEL_SERIES_SWITCH: f64 = 0.1;

/// A relative entropy in nats, or `+inf`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EntropyValue {
    Finite(f64),
    Infinite,
}

impl EntropyValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            EntropyValue::Finite(v) => Some(v),
            EntropyValue::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, EntropyValue::Finite(_))
    }

    /// As `f64`, with `Infinite` mapped to `f64::INFINITY`.
    pub fn to_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

impl fmt::Display for EntropyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntropyValue::Finite(v) => write!(f, "{v}"),
            EntropyValue::Infinite => write!(f, "inf"),
        }
    }
}

fn is_null(s: &Spectrum, k: usize) -> bool {
    s.values[k] <= KERNEL_ETA * s.max().max(0.0)
}

/// `-sum lambda ln lambda` over the eigenvalues above the kernel threshold.
pub fn entropy_of_spectrum(s: &Spectrum) -> f64 {
    (0..s.dim())
        .filter(|&k| !is_null(s, k))
        .map(|k| {
            let l = s.values[k];
            -l * l.ln()
        })
        .sum()
}

/// Shannon entropy of a probability vector; zero entries contribute nothing.
pub fn shannon_entropy(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.ln()).sum()
}

/// `S(rho) = -Tr rho ln rho`. Accepts any PSD matrix; exactly diagonal input
/// skips the eigensolver.
pub fn von_neumann_entropy(rho: &HermitianMatrix) -> Result<f64> {
    if rho.is_diagonal() {
        let diag: Vec<f64> = rho.diagonal().iter().map(|z| z.re).collect();
        let max = diag.iter().cloned().fold(0.0f64, f64::max);
        let probs: Vec<f64> = diag
            .into_iter()
            .map(|x| if x <= KERNEL_ETA * max { 0.0 } else { x })
            .collect();
        return Ok(shannon_entropy(&probs));
    }
    Ok(entropy_of_spectrum(&rho.eig()?))
}

fn check_same_dim(p: &HermitianMatrix, q: &HermitianMatrix) -> Result<()> {
    if p.dim() != q.dim() {
        return Err(shape_err(format!("{0}x{0}", p.dim()), format!("{0}x{0}", q.dim())));
    }
    Ok(())
}

/// Weight of `P` on the kernel of `Q`, relative to `max(Tr P, 1e-300)`.
fn kernel_leak(p: &HermitianMatrix, sq: &Spectrum) -> f64 {
    let v = &sq.vectors;
    let w = &(&v.adjoint() * p) * v;
    let leak: f64 = (0..sq.dim()).filter(|&j| is_null(sq, j)).map(|j| w[(j, j)].re).sum();
    leak / p.trace_re().max(1e-300)
}

/// Spectral definition `Tr P (ln P - ln Q)` restricted to the supports.
pub fn relative_entropy(p: &HermitianMatrix, q: &HermitianMatrix) -> Result<EntropyValue> {
    check_same_dim(p, q)?;
    let sp = p.eig()?;
    let sq = q.eig()?;
    if kernel_leak(p, &sq) > KERNEL_LEAK_TOL {
        return Ok(EntropyValue::Infinite);
    }
    let p_log_p: f64 = -entropy_of_spectrum(&sp);
    let v = &sq.vectors;
    let w = &(&v.adjoint() * p) * v;
    let p_log_q: f64 = (0..sq.dim())
        .filter(|&j| !is_null(&sq, j))
        .map(|j| w[(j, j)].re * sq.values[j].ln())
        .sum();
    Ok(EntropyValue::Finite(p_log_p - p_log_q))
}

/// Relative entropy by adaptive quadrature of the resolvent representation,
/// after the substitution `t = s / (1 - s)` which turns the weighted
/// integral over `[0, inf)` into a plain integral over `[0, 1]`.
pub fn relative_entropy_integral(
    p: &HermitianMatrix,
    q: &HermitianMatrix,
    cfg: &QuadratureConfig,
) -> Result<EntropyValue> {
    let spec = resolvent_setup(p, q)?;
    let x = q.sub(p)?.into_matrix();
    let integral = integrate_adaptive(|s| resolvent_integrand(&spec, &x, s), cfg)?;
    Ok(EntropyValue::Finite(p.trace_re() - q.trace_re() + integral))
}

/// Same integral with a fixed number of equal panels; used for convergence
/// studies.
pub fn relative_entropy_integral_uniform(
    p: &HermitianMatrix,
    q: &HermitianMatrix,
    panels: usize,
) -> Result<f64> {
    let spec = resolvent_setup(p, q)?;
    let x = q.sub(p)?.into_matrix();
    let integral = integrate_uniform(|s| resolvent_integrand(&spec, &x, s), panels)?;
    Ok(p.trace_re() - q.trace_re() + integral)
}

fn resolvent_setup(p: &HermitianMatrix, q: &HermitianMatrix) -> Result<SuperOpSpec> {
    check_same_dim(p, q)?;
    let spec = SuperOpSpec::new(q, p, 0.0)?;
    let leak = kernel_leak(p, spec.left_spectrum());
    if leak > KERNEL_LEAK_TOL {
        return Err(Error::KernelObstruction { magnitude: leak });
    }
    Ok(spec)
}

fn resolvent_integrand(spec: &SuperOpSpec, x: &ComplexMatrix, s: f64) -> Result<f64> {
    let t = s / (1.0 - s);
    let y = spec.resolvent_at(t, x)?;
    Ok(hs_inner(x, &y)?.re)
}

/// `k(a, b) = int_0^inf (a + t b)^-1 (1 + t)^-2 dt`
/// `= b ln(b/a) / (b-a)^2 + 1/(a-b)`, with `k(a, a) = 1/(2a)`.
///
/// The closed form cancels catastrophically as `b -> a`; for
/// `|b/a - 1| <= 0.1` the series
/// `k = (1/a) sum_{n>=2} (-e)^(n-2) / (n (n-1))`, `e = b/a - 1`, is used instead.
pub fn kernel_k(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidArgument(format!("kernel_k needs a, b > 0, got ({a}, {b})")));
    }
    let e = (b - a) / a;
    if e.abs() <= KERNEL_SERIES_SWITCH {
        let mut term = 1.0;
        let mut sum = 0.0;
        for n in 2..40 {
            sum += term / (n * (n - 1)) as f64;
            term *= -e;
        }
        return Ok(sum / a);
    }
    Ok(b * e.ln_1p() / ((b - a) * (b - a)) + 1.0 / (a - b))
}

/// Mode-by-mode closed form of the integral representation.
pub fn relative_entropy_spectral_kernel(p: &HermitianMatrix, q: &HermitianMatrix) -> Result<EntropyValue> {
    check_same_dim(p, q)?;
    let sq = q.eig()?;
    let sp = p.eig()?;
    let x = q.sub(p)?;
    let xt = &(&sq.vectors.adjoint() * &x) * &sp.vectors;
    let tol = crate::superop::KERNEL_COMPONENT_TOL * x.max_norm().max(1.0);
    let d = q.dim();
    let mut acc = 0.0;
    for m in 0..d {
        for n in 0..d {
            let z = xt[(m, n)];
            let w = z.norm_sqr();
            if w == 0.0 {
                continue;
            }
            if is_null(&sq, m) {
                if z.norm() > tol {
                    return Err(Error::KernelObstruction { magnitude: z.norm() });
                }
                continue;
            }
            let k = if is_null(&sp, n) {
                1.0 / sq.values[m]
            } else {
                kernel_k(sq.values[m], sp.values[n])?
            };
            acc += w * k;
        }
    }
    Ok(EntropyValue::Finite(p.trace_re() - q.trace_re() + acc))
}

/// The three sides of the scalar identity
/// `-ln w = int [1/(w+t) - 1/(1+t)] dt = (1-w) + int (w-1)^2 / ((w+t)(1+t)^2) dt`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalarLogIdentity {
    pub lhs: f64,
    pub rhs_difference: f64,
    pub rhs_rewritten: f64,
}

impl ScalarLogIdentity {
    pub fn max_discrepancy(&self) -> f64 {
        (self.lhs - self.rhs_difference)
            .abs()
            .max((self.lhs - self.rhs_rewritten).abs())
    }
}

pub fn scalar_log_identity(w: f64, cfg: &QuadratureConfig) -> Result<ScalarLogIdentity> {
    if !(w > 0.0) || !w.is_finite() {
        return Err(Error::InvalidArgument(format!("w = {w} must be positive")));
    }
    // with t = s/(1-s): dt = ds/(1-s)^2, (1+t) = 1/(1-s), (w+t) = (w(1-s)+s)/(1-s)
    let rhs_difference = integrate_adaptive(|s| Ok((1.0 - w) / (w * (1.0 - s) + s)), cfg)?;
    let rhs_rewritten = (1.0 - w)
        + integrate_adaptive(|s| Ok((w - 1.0) * (w - 1.0) * (1.0 - s) / (w * (1.0 - s) + s)), cfg)?;
    Ok(ScalarLogIdentity {
        lhs: -w.ln(),
        rhs_difference,
        rhs_rewritten,
    })
}

/// `S(rho_AB) - S(rho_A)` for a state on `A (x) B` with `dims = [d_A, d_B]`.
pub fn conditional_entropy(rho_ab: &HermitianMatrix, dims: [usize; 2]) -> Result<f64> {
    let rho_a = partial_trace_hermitian(rho_ab, &dims, &[0])?;
    Ok(von_neumann_entropy(rho_ab)? - von_neumann_entropy(&rho_a)?)
}

/// `-H(rho_AB, rho_A (x) I/d_B) + ln d_B`, which equals [`conditional_entropy`].
pub fn conditional_entropy_via_relent(rho_ab: &HermitianMatrix, dims: [usize; 2]) -> Result<f64> {
    let rho_a = partial_trace_hermitian(rho_ab, &dims, &[0])?;
    let d_b = dims[1] as f64;
    let reference = rho_a.tensor(&HermitianMatrix::identity(dims[1]).scale(1.0 / d_b));
    match relative_entropy(rho_ab, &reference)? {
        EntropyValue::Finite(h) => Ok(-h + d_b.ln()),
        EntropyValue::Infinite => Err(Error::KernelObstruction { magnitude: f64::INFINITY }),
    }
}

/// `Tr (Q-P) (L_P + R_Q)^-1 (Q-P)`, the integrand of the resolvent form at `t = 1`.
pub fn quadratic_relent(p: &HermitianMatrix, q: &HermitianMatrix) -> Result<f64> {
    check_same_dim(p, q)?;
    let spec = SuperOpSpec::new(p, q, 1.0)?;
    spec.quadratic_form_inverse(q.sub(p)?.as_matrix())
}

/// Fidelity `Tr (sqrt(P) Q sqrt(P))^(1/2)`.
pub fn fidelity(p: &HermitianMatrix, q: &HermitianMatrix) -> Result<f64> {
    check_same_dim(p, q)?;
    let sp = psd_sqrt(p)?;
    let inner = q.congruence(&sp)?;
    Ok(psd_sqrt(&inner)?.trace_re())
}

/// `sqrt(2 (1 - F(P, Q)))`. `1 - F` within rounding of zero (including tiny
/// negatives) is clamped to zero.
pub fn bures_distance(p: &HermitianMatrix, q: &HermitianMatrix) -> Result<f64> {
    let gap = 1.0 - fidelity(p, q)?;
    let rounding = 16.0 * f64::EPSILON * p.dim() as f64;
    Ok(if gap <= rounding { 0.0 } else { (2.0 * gap).sqrt() })
}
