//! Margin-reporting checks of the entropy and Schwarz-type inequalities.
//!
//! Every scalar check returns `RHS - LHS` and every operator check returns
//! `lambda_min(RHS - LHS)`, so a check passes when its margin is `>= -tol`.
//! Checks that can meet `+inf` relative entropies return `None` for such
//! instances instead of a margin.

pub mod report;
pub mod suites;

pub use report::{CheckReport, TrialFailure};
pub use suites::{find_suite, run_suite, run_suites, suite_names, SuiteConfig, SUITES};

use crate::channels::{adjoint_channel, dephasing_channel, KrausMap, LinearMap};
use crate::entropy::{relative_entropy, von_neumann_entropy, EntropyValue};
use crate::error::{shape_err, Error, Result};
use crate::matcore::{
    partial_trace_hermitian, psd_sqrt, pseudo_inverse, ComplexMatrix, HermitianMatrix, KERNEL_ETA,
};
use crate::superop::SuperOpSpec;

pub const DEFAULT_TOL: f64 = 1e-9;

/// Allowed deviation of convex weights from the simplex.
pub const SIMPLEX_TOL: f64 = 1e-12;

fn check_simplex(weights: &[f64], n: usize) -> Result<()> {
    if weights.len() != n || n == 0 {
        return Err(Error::InvalidArgument(format!("{} weights for {} terms", weights.len(), n)));
    }
    let sum: f64 = weights.iter().sum();
    if weights.iter().any(|w| !(*w >= 0.0)) || (sum - 1.0).abs() > SIMPLEX_TOL {
        return Err(Error::InvalidArgument(format!("weights {weights:?} are not on the simplex")));
    }
    Ok(())
}

fn same_len(what: &str, a: usize, b: usize) -> Result<()> {
    if a != b || a == 0 {
        return Err(Error::InvalidArgument(format!("{what}: list lengths {a} and {b}")));
    }
    Ok(())
}

fn min_eig(m: &ComplexMatrix) -> Result<f64> {
    Ok(HermitianMatrix::from_hermitian_part(m).eig()?.min())
}

/// Convex weights with pairs `(P_j, Q_j)` of PSD matrices.
#[derive(Clone, Debug)]
pub struct ConvexityInstance {
    weights: Vec<f64>,
    pairs: Vec<(HermitianMatrix, HermitianMatrix)>,
}

impl ConvexityInstance {
    pub fn new(weights: Vec<f64>, pairs: Vec<(HermitianMatrix, HermitianMatrix)>) -> Result<Self> {
        check_simplex(&weights, pairs.len())?;
        let d = pairs[0].0.dim();
        for (p, q) in &pairs {
            if p.dim() != d || q.dim() != d {
                return Err(shape_err(format!("{d}x{d}"), format!("{0}x{0} and {1}x{1}", p.dim(), q.dim())));
            }
            p.check_psd(1e-10)?;
            q.check_psd(1e-10)?;
        }
        Ok(Self { weights, pairs })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn pairs(&self) -> &[(HermitianMatrix, HermitianMatrix)] {
        &self.pairs
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvexityReport {
    /// `sum x_j H(P_j, Q_j) - H(sum x_j P_j, sum x_j Q_j)`.
    pub margin: f64,
    /// `sum H(P_j, Q_j) - H(sum P_j, sum Q_j)`.
    pub subadditive_margin: f64,
    /// `max_j |H(x_j P_j, x_j Q_j) - x_j H(P_j, Q_j)|`.
    pub homogeneity_gap: f64,
    /// Difference between `margin` and the subadditive margin of the scaled
    /// pairs `(x_j P_j, x_j Q_j)`; zero up to rounding.
    pub equivalence_gap: f64,
}

fn finite(v: EntropyValue) -> Option<f64> {
    v.finite()
}

fn relent_opt(p: &HermitianMatrix, q: &HermitianMatrix) -> Result<Option<f64>> {
    Ok(finite(relative_entropy(p, q)?))
}

/// `None` when any relative entropy involved is infinite.
pub fn check_joint_convexity(inst: &ConvexityInstance) -> Result<Option<ConvexityReport>> {
    let (ps, qs): (Vec<_>, Vec<_>) = inst.pairs.iter().cloned().unzip();
    let ones = vec![1.0; ps.len()];
    let mut terms = Vec::with_capacity(ps.len());
    let mut scaled_terms = Vec::with_capacity(ps.len());
    for ((p, q), &x) in inst.pairs.iter().zip(&inst.weights) {
        let Some(h) = relent_opt(p, q)? else { return Ok(None) };
        terms.push(h);
        if x > 0.0 {
            let Some(hs) = relent_opt(&p.scale(x), &q.scale(x))? else { return Ok(None) };
            scaled_terms.push((x, hs));
        }
    }
    let mixed_p = HermitianMatrix::weighted_sum(&inst.weights, &ps)?;
    let mixed_q = HermitianMatrix::weighted_sum(&inst.weights, &qs)?;
    let Some(joint) = relent_opt(&mixed_p, &mixed_q)? else { return Ok(None) };
    let Some(sum_joint) = relent_opt(
        &HermitianMatrix::weighted_sum(&ones, &ps)?,
        &HermitianMatrix::weighted_sum(&ones, &qs)?,
    )?
    else {
        return Ok(None);
    };

    let weighted: f64 = inst.weights.iter().zip(&terms).map(|(x, h)| x * h).sum();
    let margin = weighted - joint;
    let homogeneity_gap = scaled_terms
        .iter()
        .zip(inst.weights.iter().zip(&terms).filter(|(x, _)| **x > 0.0))
        .map(|((_, hs), (x, h))| (hs - x * h).abs())
        .fold(0.0, f64::max);
    let scaled_sum: f64 = scaled_terms.iter().map(|(_, hs)| hs).sum();
    Ok(Some(ConvexityReport {
        margin,
        subadditive_margin: terms.iter().sum::<f64>() - sum_joint,
        homogeneity_gap,
        equivalence_gap: ((scaled_sum - joint) - margin).abs(),
    }))
}

/// Klein's inequality `H(P, Q) >= Tr(P - Q)`; `None` when `H` is infinite.
pub fn check_klein(p: &HermitianMatrix, q: &HermitianMatrix) -> Result<Option<f64>> {
    Ok(relent_opt(p, q)?.map(|h| h - (p.trace_re() - q.trace_re())))
}

/// `|H(xP, xQ) - x H(P, Q)|`; `None` when `H` is infinite.
pub fn check_homogeneity(p: &HermitianMatrix, q: &HermitianMatrix, x: f64) -> Result<Option<f64>> {
    if !(x > 0.0) {
        return Err(Error::InvalidArgument(format!("homogeneity needs x > 0, got {x}")));
    }
    let (Some(h), Some(hx)) = (relent_opt(p, q)?, relent_opt(&p.scale(x), &q.scale(x))?) else {
        return Ok(None);
    };
    Ok(Some((hx - x * h).abs()))
}

/// `sum_j Tr A_j^dag (L_{P_j} + t R_{Q_j})^-1 A_j - Tr A^dag (L_P + t R_Q)^-1 A`
/// with `A, P, Q` the sums over `j`.
pub fn check_schwarz_quadratic(
    a: &[ComplexMatrix],
    p: &[HermitianMatrix],
    q: &[HermitianMatrix],
    t: f64,
) -> Result<f64> {
    same_len("A and P", a.len(), p.len())?;
    same_len("P and Q", p.len(), q.len())?;
    let mut separate = 0.0;
    for ((aj, pj), qj) in a.iter().zip(p).zip(q) {
        separate += SuperOpSpec::new(pj, qj, t)?.quadratic_form_inverse(aj)?;
    }
    let ones = vec![1.0; p.len()];
    let sum_p = HermitianMatrix::weighted_sum(&ones, p)?;
    let sum_q = HermitianMatrix::weighted_sum(&ones, q)?;
    let mut sum_a = a[0].clone();
    for aj in &a[1..] {
        sum_a = sum_a.try_add(aj)?;
    }
    let joint = SuperOpSpec::new(&sum_p, &sum_q, t)?.quadratic_form_inverse(&sum_a)?;
    Ok(separate - joint)
}

/// `A^dag P^+ A`, requiring the columns of `A` to lie in the range of `P`.
fn inverse_form(a: &ComplexMatrix, p: &HermitianMatrix) -> Result<ComplexMatrix> {
    let pinv = pseudo_inverse(p)?;
    let projected = &(pinv.as_matrix() * p.as_matrix()) * a;
    let leak = projected.max_diff(a);
    if leak > 1e-10 * a.max_norm().max(1.0) {
        return Err(Error::KernelObstruction { magnitude: leak });
    }
    Ok(&(&a.adjoint() * pinv.as_matrix()) * a)
}

/// `lambda_min(sum A_k^dag P_k^-1 A_k - (sum A_k)^dag (sum P_k)^-1 (sum A_k))`.
pub fn check_operator_schwarz(a: &[ComplexMatrix], p: &[HermitianMatrix]) -> Result<f64> {
    same_len("A and P", a.len(), p.len())?;
    let mut separate = inverse_form(&a[0], &p[0])?;
    for (ak, pk) in a.iter().zip(p).skip(1) {
        separate = separate.try_add(&inverse_form(ak, pk)?)?;
    }
    let mut sum_a = a[0].clone();
    for ak in &a[1..] {
        sum_a = sum_a.try_add(ak)?;
    }
    let sum_p = HermitianMatrix::weighted_sum(&vec![1.0; p.len()], p)?;
    min_eig(&separate.try_sub(&inverse_form(&sum_a, &sum_p)?)?)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CpSchwarzMargins {
    /// `lambda_min(Phi(A^dag P^-1 A) - Phi(A)^dag Phi(P)^-1 Phi(A))`.
    pub cscp: f64,
    /// `lambda_min(Phi(A^dag A) - Phi(A^dag B) Phi(B^dag B)^-1 Phi(B^dag A))`.
    pub csab: f64,
}

impl CpSchwarzMargins {
    pub fn worst(&self) -> f64 {
        self.cscp.min(self.csab)
    }
}

pub fn check_cp_schwarz(
    phi: &KrausMap,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    p: &HermitianMatrix,
) -> Result<CpSchwarzMargins> {
    let d = phi.d_in();
    for (name, m) in [("A", a), ("B", b), ("P", p.as_matrix())] {
        if m.shape() != (d, d) {
            return Err(shape_err(format!("{name} of size {d}x{d}"), format!("{}x{}", m.rows(), m.cols())));
        }
    }
    let phi_a = phi.apply(a)?;
    let phi_p = phi.apply_hermitian(p)?;
    let cscp = phi
        .apply(&inverse_form(a, p)?)?
        .try_sub(&inverse_form(&phi_a, &phi_p)?)?;

    let phi_ab = phi.apply(&(&a.adjoint() * b))?;
    let phi_bb = phi.apply_hermitian(&HermitianMatrix::from_hermitian_part(&(&b.adjoint() * b)))?;
    let csab = phi
        .apply(&(&a.adjoint() * a))?
        .try_sub(&inverse_form(&phi_ab.adjoint(), &phi_bb)?)?;
    Ok(CpSchwarzMargins {
        cscp: min_eig(&cscp)?,
        csab: min_eig(&csab)?,
    })
}

/// The two sides of the Choi criterion for `[[P, C], [C^dag, Q]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlockContraction {
    pub block_min_eigenvalue: f64,
    pub schur_min_eigenvalue: f64,
    /// Largest singular value of `P^{-1/2} C Q^{-1/2}`.
    pub max_singular_value: f64,
    pub block_psd: bool,
    pub schur_psd: bool,
    pub contraction: bool,
    /// Some quantity lies inside the `tol` band around its threshold.
    pub indeterminate: bool,
}

impl BlockContraction {
    pub fn agree(&self) -> bool {
        self.indeterminate || (self.block_psd == self.schur_psd && self.schur_psd == self.contraction)
    }
}

fn require_full_rank(name: &str, m: &HermitianMatrix) -> Result<()> {
    let s = m.eig()?;
    if s.min() <= KERNEL_ETA * s.max().max(0.0) {
        return Err(Error::InvalidArgument(format!("{name} must be positive definite, min eigenvalue {}", s.min())));
    }
    Ok(())
}

pub fn check_block_contraction(
    p: &HermitianMatrix,
    q: &HermitianMatrix,
    c: &ComplexMatrix,
    tol: f64,
) -> Result<BlockContraction> {
    let (m, n) = (p.dim(), q.dim());
    if c.shape() != (m, n) {
        return Err(shape_err(format!("{m}x{n}"), format!("{}x{}", c.rows(), c.cols())));
    }
    require_full_rank("P", p)?;
    require_full_rank("Q", q)?;
    let block = ComplexMatrix::from_fn(m + n, m + n, |i, j| match (i < m, j < m) {
        (true, true) => p[(i, j)],
        (true, false) => c[(i, j - m)],
        (false, true) => c[(j, i - m)].conj(),
        (false, false) => q[(i - m, j - m)],
    });
    let block_min_eigenvalue = min_eig(&block)?;
    let schur_min_eigenvalue = min_eig(&q.as_matrix().try_sub(&inverse_form(c, p)?)?)?;
    let p_inv_sqrt = pseudo_inverse(&psd_sqrt(p)?)?;
    let q_inv_sqrt = pseudo_inverse(&psd_sqrt(q)?)?;
    let x = &(p_inv_sqrt.as_matrix() * c) * q_inv_sqrt.as_matrix();
    let max_singular_value = HermitianMatrix::from_hermitian_part(&(&x.adjoint() * &x))
        .eig()?
        .max()
        .max(0.0)
        .sqrt();
    Ok(BlockContraction {
        block_min_eigenvalue,
        schur_min_eigenvalue,
        max_singular_value,
        block_psd: block_min_eigenvalue >= -tol,
        schur_psd: schur_min_eigenvalue >= -tol,
        contraction: max_singular_value <= 1.0 + tol,
        indeterminate: block_min_eigenvalue.abs() < tol
            || schur_min_eigenvalue.abs() < tol
            || (max_singular_value - 1.0).abs() < tol,
    })
}

/// Which map the monotonicity check applies.
#[derive(Clone, Copy, Debug)]
pub enum MonotonicityMode<'a> {
    /// Projection onto the diagonal.
    Dephase,
    /// `Tr` over the factors not listed in `keep`.
    PartialTrace { dims: &'a [usize], keep: &'a [usize] },
    /// Any trace-preserving Kraus map.
    General(&'a KrausMap),
}

/// `H(rho, gamma) - H(Phi(rho), Phi(gamma))`; `None` when `H(rho, gamma)` is infinite.
pub fn check_monotonicity(rho: &HermitianMatrix, gamma: &HermitianMatrix, mode: MonotonicityMode<'_>) -> Result<Option<f64>> {
    let Some(before) = relent_opt(rho, gamma)? else { return Ok(None) };
    let (r, g) = match mode {
        MonotonicityMode::Dephase => {
            let phi = dephasing_channel(rho.dim());
            (phi.apply_hermitian(rho)?, phi.apply_hermitian(gamma)?)
        }
        MonotonicityMode::PartialTrace { dims, keep } => (
            partial_trace_hermitian(rho, dims, keep)?,
            partial_trace_hermitian(gamma, dims, keep)?,
        ),
        MonotonicityMode::General(phi) => {
            let residual = phi.tp_residual();
            if residual > crate::channels::TP_TOL {
                return Err(Error::NotTracePreserving { residual });
            }
            (phi.apply_hermitian(rho)?, phi.apply_hermitian(gamma)?)
        }
    };
    let after = relative_entropy(&r, &g)?.to_f64();
    Ok(Some(before - after))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SsaReport {
    /// `S(AB) + S(BC) - S(ABC) - S(B)`.
    pub primary: f64,
    /// `S(AB) + S(AD) - S(B) - S(D)` with the third factor read as `D`.
    pub alt: f64,
    /// `F(rho_ABD)`, the function whose non-negativity is the alternate form;
    /// numerically the same quantity as `alt`, and zero on pure states.
    pub f_value: f64,
}

fn entropy_of_reduction(rho: &HermitianMatrix, dims: &[usize], keep: &[usize]) -> Result<f64> {
    von_neumann_entropy(&partial_trace_hermitian(rho, dims, keep)?)
}

pub fn check_ssa(rho: &HermitianMatrix, dims: [usize; 3]) -> Result<SsaReport> {
    if dims.iter().product::<usize>() != rho.dim() {
        return Err(Error::InvalidDims(format!("{dims:?} does not factor dimension {}", rho.dim())));
    }
    let s = |keep: &[usize]| entropy_of_reduction(rho, &dims, keep);
    let s_ab = s(&[0, 1])?;
    let s_bc = s(&[1, 2])?;
    let s_ac = s(&[0, 2])?;
    let s_b = s(&[1])?;
    let s_c = s(&[2])?;
    let s_abc = von_neumann_entropy(rho)?;
    let f_value = s_ab + s_ac - s_b - s_c;
    Ok(SsaReport {
        primary: s_ab + s_bc - s_abc - s_b,
        alt: f_value,
        f_value,
    })
}

/// Which function the concavity check evaluates.
#[derive(Clone, Copy, Debug)]
pub enum ConcavityMode<'a> {
    /// `S(rho_AB) - S(rho_A)`.
    ConditionalEntropy { dims: [usize; 2] },
    /// `S(rho) - S(Phi(rho))` for a trace-preserving `Phi`.
    EntropyDiff(&'a KrausMap),
}

/// `f(sum x_i rho_i) - sum x_i f(rho_i)`.
pub fn check_concavity(mode: ConcavityMode<'_>, states: &[HermitianMatrix], weights: &[f64]) -> Result<f64> {
    check_simplex(weights, states.len())?;
    let f = |rho: &HermitianMatrix| -> Result<f64> {
        match mode {
            ConcavityMode::ConditionalEntropy { dims } => crate::entropy::conditional_entropy(rho, dims),
            ConcavityMode::EntropyDiff(phi) => Ok(von_neumann_entropy(rho)? - von_neumann_entropy(&phi.apply_hermitian(rho)?)?),
        }
    };
    if let ConcavityMode::EntropyDiff(phi) = mode {
        let residual = phi.tp_residual();
        if residual > crate::channels::TP_TOL {
            return Err(Error::NotTracePreserving { residual });
        }
    }
    let mut separate = 0.0;
    for (x, rho) in weights.iter().zip(states) {
        separate += x * f(rho)?;
    }
    Ok(f(&HermitianMatrix::weighted_sum(weights, states)?)? - separate)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PureStateLemmas {
    /// Eigenvalues of `rho_A` and `rho_B`, descending, clamped at zero.
    pub spectrum_a: Vec<f64>,
    pub spectrum_b: Vec<f64>,
    /// `max |a_i - b_i|` over the spectra padded with zeros to equal length.
    pub spectrum_distance: f64,
    pub entropy_gap: f64,
}

pub fn check_pure_state_lemmas(psi: &[num_complex::Complex64], dims: [usize; 2]) -> Result<PureStateLemmas> {
    if psi.len() != dims[0] * dims[1] {
        return Err(Error::InvalidDims(format!("{dims:?} does not factor a vector of length {}", psi.len())));
    }
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidArgument(format!("vector norm {norm} is not 1")));
    }
    let rho = HermitianMatrix::from_hermitian_part(&ComplexMatrix::outer(psi, psi));
    let rho_a = partial_trace_hermitian(&rho, &dims, &[0])?;
    let rho_b = partial_trace_hermitian(&rho, &dims, &[1])?;
    let desc = |m: &HermitianMatrix| -> Result<Vec<f64>> {
        Ok(m.eig()?.values.iter().rev().map(|v| v.max(0.0)).collect())
    };
    let spectrum_a = desc(&rho_a)?;
    let spectrum_b = desc(&rho_b)?;
    let n = spectrum_a.len().max(spectrum_b.len());
    let at = |s: &[f64], i: usize| s.get(i).copied().unwrap_or(0.0);
    let spectrum_distance = (0..n)
        .map(|i| (at(&spectrum_a, i) - at(&spectrum_b, i)).abs())
        .fold(0.0, f64::max);
    let entropy_gap = (von_neumann_entropy(&rho_a)? - von_neumann_entropy(&rho_b)?).abs();
    Ok(PureStateLemmas {
        spectrum_a,
        spectrum_b,
        spectrum_distance,
        entropy_gap,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdjointQuadratic {
    /// `Tr X^dag (L_{Phi P} + t R_{Phi Q}) X - Tr Y^dag (L_P + t R_Q) Y` with
    /// `X = (L_{Phi P} + t R_{Phi Q})^-1 Phi(A)` and `Y` the adjoint map applied to `X`.
    pub margin: f64,
    /// `Tr A^dag (L_P + t R_Q)^-1 A - Tr Phi(A)^dag (L_{Phi P} + t R_{Phi Q})^-1 Phi(A)`.
    pub integrand_margin: f64,
}

pub fn check_adjoint_quadratic(
    phi: &KrausMap,
    p: &HermitianMatrix,
    q: &HermitianMatrix,
    a: &ComplexMatrix,
    t: f64,
) -> Result<AdjointQuadratic> {
    let residual = phi.tp_residual();
    if residual > crate::channels::TP_TOL {
        return Err(Error::NotTracePreserving { residual });
    }
    let before = SuperOpSpec::new(p, q, t)?;
    let after = SuperOpSpec::new(&phi.apply_hermitian(p)?, &phi.apply_hermitian(q)?, t)?;
    let phi_a = phi.apply(a)?;
    let x = after.solve_resolvent(&phi_a)?;
    let y = adjoint_channel(phi).apply(&x)?;
    Ok(AdjointQuadratic {
        margin: after.quadratic_form(&x)? - before.quadratic_form(&y)?,
        integrand_margin: before.quadratic_form_inverse(a)? - after.quadratic_form_inverse(&phi_a)?,
    })
}
