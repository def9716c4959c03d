//! Named randomized suites and the parallel runner.
//!
//! Trial `i` of a run draws everything from `RngState::for_trial(seed, i)` and
//! uses local dimension `dims[i % dims.len()]`, so a report depends only on
//! the configuration, never on scheduling. Each failure carries a digest of
//! the exact instance bits that produced it.

use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use super::report::{CheckReport, TrialFailure};
use super::*;
use crate::channels::{
    ancilla_representation, dephase, dephase_via_z, povm_channel, purify, KrausMap, Povm,
};
use crate::entropy::{
    conditional_entropy, conditional_entropy_via_relent, relative_entropy_integral,
    relative_entropy_spectral_kernel, QuadratureConfig,
};
use crate::holevo::{
    check_holevo_bound, check_holevo_routes, check_partial_measurement_chain, chi, chi_via_qc,
    yuen_ozawa_gap, Ensemble,
};
use crate::matcore::solve;
use crate::randgen::{
    random_cptp, random_density, random_ensemble, random_full_rank, random_povm, random_psd,
    random_unit_vector, RngState,
};
use crate::superop::{superop_matrix, unvectorize, vectorize};

/// Weight of `I/d` in the operands drawn by [`Gen::scaled_full_rank`].
pub const IDENTITY_WEIGHT: f64 = 0.05;

/// Number of hex characters kept from the SHA-256 instance digest.
pub const DIGEST_HEX_LEN: usize = 16;

/// Configuration of a verification run.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    /// Suite names; `"all"` expands to every registered suite.
    pub suites: Vec<String>,
    /// Local dimensions cycled over the trials; empty means each suite's default.
    pub dims: Vec<usize>,
    pub trials: u64,
    pub seed: u64,
    pub tol: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            suites: vec!["all".into()],
            dims: Vec::new(),
            trials: 100,
            seed: 0,
            tol: DEFAULT_TOL,
        }
    }
}

impl SuiteConfig {
    /// Suite names with `"all"` expanded, in request order without repeats.
    pub fn resolved_suites(&self) -> Result<Vec<&'static Suite>> {
        let mut out: Vec<&'static Suite> = Vec::new();
        for name in &self.suites {
            let found: Vec<&'static Suite> = if name == "all" {
                SUITES.iter().collect()
            } else {
                vec![find_suite(name)?]
            };
            for s in found {
                if !out.iter().any(|o| o.name == s.name) {
                    out.push(s);
                }
            }
        }
        Ok(out)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidArgument(format!("tol must be positive, got {}", self.tol)));
        }
        if self.suites.is_empty() {
            return Err(Error::InvalidArgument("no suites requested".into()));
        }
        for suite in self.resolved_suites()? {
            for &d in &self.dims {
                suite.check_dim(d)?;
            }
        }
        Ok(())
    }
}

/// Random instance source that fingerprints everything it hands out.
pub struct Gen {
    pub rng: RngState,
    hasher: Sha256,
}

impl Gen {
    pub fn new(seed: u64, trial: u64) -> Self {
        Self {
            rng: RngState::for_trial(seed, trial),
            hasher: Sha256::new(),
        }
    }

    pub fn absorb_f64(&mut self, x: f64) {
        self.hasher.update(x.to_bits().to_le_bytes());
    }

    pub fn absorb_complex(&mut self, z: &[Complex64]) {
        for v in z {
            self.absorb_f64(v.re);
            self.absorb_f64(v.im);
        }
    }

    pub fn absorb(&mut self, m: &ComplexMatrix) {
        self.hasher.update((m.rows() as u64).to_le_bytes());
        self.hasher.update((m.cols() as u64).to_le_bytes());
        self.absorb_complex(m.data());
    }

    pub fn digest(self) -> String {
        let mut h = hex::encode(self.hasher.finalize());
        h.truncate(DIGEST_HEX_LEN);
        h
    }

    pub fn int_in(&mut self, lo: usize, hi: usize) -> usize {
        let k = self.rng.int_in(lo, hi);
        self.absorb_f64(k as f64);
        k
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        let x = self.rng.uniform_in(lo, hi);
        self.absorb_f64(x);
        x
    }

    pub fn pick(&mut self, options: &[f64]) -> f64 {
        let x = options[self.rng.int_in(0, options.len() - 1)];
        self.absorb_f64(x);
        x
    }

    pub fn simplex(&mut self, n: usize) -> Vec<f64> {
        let w = self.rng.simplex(n);
        w.iter().for_each(|x| self.absorb_f64(*x));
        w
    }

    pub fn gaussian(&mut self, rows: usize, cols: usize) -> ComplexMatrix {
        let m = self.rng.gaussian_matrix(rows, cols);
        self.absorb(&m);
        m
    }

    pub fn unit_vector(&mut self, n: usize) -> Vec<Complex64> {
        let v = random_unit_vector(n, &mut self.rng);
        self.absorb_complex(&v);
        v
    }

    pub fn density(&mut self, d: usize, rank: usize) -> Result<HermitianMatrix> {
        let m = random_density(d, rank, &mut self.rng)?.into_hermitian();
        self.absorb(&m);
        Ok(m)
    }

    /// Density of uniformly random rank.
    pub fn any_density(&mut self, d: usize) -> Result<HermitianMatrix> {
        let rank = self.int_in(1, d);
        self.density(d, rank)
    }

    pub fn full_rank(&mut self, d: usize) -> HermitianMatrix {
        let m = random_full_rank(d, &mut self.rng).into_hermitian();
        self.absorb(&m);
        m
    }

    /// Positive definite operand for the inverse-based checks: a full-rank
    /// Wishart density mixed with `IDENTITY_WEIGHT` of `I/d`, scaled to trace
    /// in `[0.5, 2]`. The mixing bounds the condition number by about
    /// `d / IDENTITY_WEIGHT`, which keeps the rounding error of the inverse
    /// forms well below the absolute tolerances.
    pub fn scaled_full_rank(&mut self, d: usize) -> HermitianMatrix {
        let s = self.uniform_in(0.5, 2.0);
        let w = self.full_rank(d);
        let mixed = w
            .scale(1.0 - IDENTITY_WEIGHT)
            .add(&HermitianMatrix::identity(d).scale(IDENTITY_WEIGHT / d as f64))
            .expect("same dimension");
        mixed.scale(s)
    }

    pub fn psd(&mut self, d: usize, rank: usize) -> HermitianMatrix {
        let m = random_psd(d, rank, &mut self.rng);
        self.absorb(&m);
        m
    }

    /// `(P, Q)` with `ker Q` contained in `ker P`: `Q = G G^dag`, `P = G K K^dag G^dag`,
    /// normalized to unit trace.
    pub fn supported_pair(&mut self, d: usize) -> Result<(HermitianMatrix, HermitianMatrix)> {
        let rank = self.int_in(1, d);
        let g = self.gaussian(d, rank);
        let k = self.gaussian(rank, rank);
        let q = HermitianMatrix::from_hermitian_part(&(&g * &g.adjoint()));
        let gk = &g * &k;
        let p = HermitianMatrix::from_hermitian_part(&(&gk * &gk.adjoint()));
        Ok((p.scale(1.0 / p.trace_re()), q.scale(1.0 / q.trace_re())))
    }

    pub fn channel(&mut self, d: usize, n_kraus: usize) -> Result<KrausMap> {
        let phi = random_cptp(d, n_kraus, &mut self.rng)?;
        phi.kraus().iter().for_each(|k| self.absorb(k));
        Ok(phi)
    }

    pub fn povm(&mut self, d: usize, n_eff: usize) -> Result<Povm> {
        let m = random_povm(d, n_eff, &mut self.rng)?;
        m.effects().iter().for_each(|e| self.absorb(e));
        Ok(m)
    }

    pub fn ensemble(&mut self, d: usize) -> Result<Ensemble> {
        let n = self.int_in(1, 4);
        let rank = self.int_in(1, d);
        let e = random_ensemble(d, n, rank, &mut self.rng)?;
        e.weights().iter().for_each(|w| self.absorb_f64(*w));
        e.states().iter().for_each(|s| self.absorb(s));
        Ok(e)
    }
}

/// `Some(margin)` or `None` for a trial skipped because some relative
/// entropy is infinite.
pub type TrialResult = Result<Option<f64>>;

pub struct Suite {
    pub name: &'static str,
    pub about: &'static str,
    pub default_dims: &'static [usize],
    pub max_dim: usize,
    pub trial: fn(&mut Gen, usize) -> TrialResult,
}

impl Suite {
    fn check_dim(&self, d: usize) -> Result<()> {
        if d < 2 || d > self.max_dim {
            return Err(Error::InvalidArgument(format!(
                "suite {} takes dimensions 2..={}, got {d}",
                self.name, self.max_dim
            )));
        }
        Ok(())
    }
}

pub fn find_suite(name: &str) -> Result<&'static Suite> {
    SUITES
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::UnknownSuite(name.to_string()))
}

const T_VALUES: [f64; 4] = [0.0, 0.5, 1.0, 10.0];

fn resolvent_trial(g: &mut Gen, d: usize) -> TrialResult {
    let q = g.scaled_full_rank(d);
    let p = g.scaled_full_rank(d);
    let t = g.uniform_in(0.0, 10.0);
    let x = g.gaussian(d, d);
    let spec = SuperOpSpec::new(&q, &p, t)?;
    let spectral = spec.solve_resolvent(&x)?;
    let dense = unvectorize(&solve(&superop_matrix(&spec), &vectorize(&x))?, d)?;
    Ok(Some(-spectral.max_diff(&dense)))
}

fn relent_routes_trial(g: &mut Gen, d: usize) -> TrialResult {
    let p = g.full_rank(d);
    let q = g.full_rank(d);
    let spectral = relative_entropy(&p, &q)?.to_f64();
    let integral = relative_entropy_integral(&p, &q, &QuadratureConfig::default())?.to_f64();
    let kernel = relative_entropy_spectral_kernel(&p, &q)?.to_f64();
    let worst = (spectral - integral)
        .abs()
        .max((spectral - kernel).abs())
        .max((integral - kernel).abs());
    Ok(Some(-worst))
}

fn joint_convexity_trial(g: &mut Gen, d: usize) -> TrialResult {
    let n = g.int_in(2, 4);
    let weights = g.simplex(n);
    let pairs = (0..n).map(|_| g.supported_pair(d)).collect::<Result<Vec<_>>>()?;
    let inst = ConvexityInstance::new(weights, pairs)?;
    Ok(check_joint_convexity(&inst)?.map(|r| {
        r.margin
            .min(r.subadditive_margin)
            .min(-r.homogeneity_gap)
            .min(-r.equivalence_gap)
    }))
}

fn klein_homogeneity_trial(g: &mut Gen, d: usize) -> TrialResult {
    let (p, q) = g.supported_pair(d)?;
    let (sp, sq) = (g.uniform_in(0.1, 3.0), g.uniform_in(0.1, 3.0));
    let (p, q) = (p.scale(sp), q.scale(sq));
    let x = g.uniform_in(0.05, 5.0);
    let (Some(klein), Some(gap)) = (check_klein(&p, &q)?, check_homogeneity(&p, &q, x)?) else {
        return Ok(None);
    };
    Ok(Some(klein.min(-gap)))
}

fn conditional_entropy_trial(g: &mut Gen, d: usize) -> TrialResult {
    let rho = g.any_density(d * d)?;
    let gap = conditional_entropy(&rho, [d, d])? - conditional_entropy_via_relent(&rho, [d, d])?;
    Ok(Some(-gap.abs()))
}

fn schwarz_quadratic_trial(g: &mut Gen, d: usize) -> TrialResult {
    let n = g.int_in(1, 4);
    let t = g.pick(&T_VALUES);
    let a: Vec<_> = (0..n).map(|_| g.gaussian(d, d)).collect();
    let p: Vec<_> = (0..n).map(|_| g.scaled_full_rank(d)).collect();
    let q: Vec<_> = (0..n).map(|_| g.scaled_full_rank(d)).collect();
    Ok(Some(check_schwarz_quadratic(&a, &p, &q, t)?))
}

fn operator_schwarz_trial(g: &mut Gen, d: usize) -> TrialResult {
    let n = g.int_in(2, 4);
    let a: Vec<_> = (0..n).map(|_| g.gaussian(d, d)).collect();
    let p: Vec<_> = (0..n).map(|_| g.scaled_full_rank(d)).collect();
    Ok(Some(check_operator_schwarz(&a, &p)?))
}

fn cp_schwarz_trial(g: &mut Gen, d: usize) -> TrialResult {
    let n = g.int_in(1, 4);
    let phi = g.channel(d, n)?;
    let a = g.gaussian(d, d);
    let b = g.gaussian(d, d);
    let p = g.scaled_full_rank(d);
    Ok(Some(check_cp_schwarz(&phi, &a, &b, &p)?.worst()))
}

/// `(P, Q, C)` with `C = sqrt(P) X sqrt(Q)` and the largest singular value
/// of `X` uniform in `[0.5, 1.5]`, so about half the blocks are PSD.
pub fn contraction_instance(g: &mut Gen, d: usize) -> Result<(HermitianMatrix, HermitianMatrix, ComplexMatrix)> {
    let p = g.scaled_full_rank(d);
    let q = g.scaled_full_rank(d);
    let x = g.gaussian(d, d);
    let target = g.uniform_in(0.5, 1.5);
    let sigma = HermitianMatrix::from_hermitian_part(&(&x.adjoint() * &x)).eig()?.max().sqrt();
    let x = x.scale(target / sigma);
    let c = &(psd_sqrt(&p)?.as_matrix() * &x) * psd_sqrt(&q)?.as_matrix();
    Ok((p, q, c))
}

/// Agreement margin: zero when the predicates agree (or a value sits in the
/// tolerance band), otherwise minus the distance of the disagreement from the band.
fn block_contraction_trial(g: &mut Gen, d: usize) -> TrialResult {
    let (p, q, c) = contraction_instance(g, d)?;
    let r = check_block_contraction(&p, &q, &c, DEFAULT_TOL)?;
    if r.agree() {
        Ok(Some(0.0))
    } else {
        Ok(Some(-(r.block_min_eigenvalue.abs().min(r.schur_min_eigenvalue.abs()))))
    }
}

fn monotonicity_dephase_trial(g: &mut Gen, d: usize) -> TrialResult {
    let rho = g.any_density(d)?;
    let gamma = g.full_rank(d);
    check_monotonicity(&rho, &gamma, MonotonicityMode::Dephase)
}

fn monotonicity_partial_trace_trial(g: &mut Gen, d: usize) -> TrialResult {
    let rho = g.any_density(2 * d)?;
    let gamma = g.full_rank(2 * d);
    check_monotonicity(&rho, &gamma, MonotonicityMode::PartialTrace { dims: &[d, 2], keep: &[0] })
}

fn monotonicity_general_trial(g: &mut Gen, d: usize) -> TrialResult {
    let rho = g.any_density(d)?;
    let gamma = g.full_rank(d);
    let phi = g.channel(d, 4)?;
    check_monotonicity(&rho, &gamma, MonotonicityMode::General(&phi))
}

fn ssa_trial(g: &mut Gen, d: usize) -> TrialResult {
    let rho = g.any_density(d * d * d)?;
    let r = check_ssa(&rho, [d, d, d])?;
    Ok(Some(r.primary.min(r.alt)))
}

/// SSA margin against the monotonicity chain with `gamma = rho_AB (x) I/d_C`
/// and the partial trace over `A`.
pub fn ssa_monotonicity_gap(rho: &HermitianMatrix, dims: [usize; 3]) -> Result<f64> {
    let ssa = check_ssa(rho, dims)?;
    let rho_ab = partial_trace_hermitian(rho, &dims, &[0, 1])?;
    let gamma = rho_ab.tensor(&HermitianMatrix::identity(dims[2]).scale(1.0 / dims[2] as f64));
    let mono = check_monotonicity(rho, &gamma, MonotonicityMode::PartialTrace { dims: &dims, keep: &[1, 2] })?
        .ok_or(Error::KernelObstruction { magnitude: f64::INFINITY })?;
    Ok((ssa.primary - mono).abs())
}

/// `|alt(rho_ABD) - primary(rho_ABC)|` where `rho_ABD` comes from a
/// purification `rho_ABCD` of `rho_ABC` by tracing out `C`.
pub fn ssa_purification_gap(rho: &HermitianMatrix, dims: [usize; 3]) -> Result<f64> {
    let primary = check_ssa(rho, dims)?.primary;
    let pur = purify(rho)?;
    let full = pur.density();
    let all = [dims[0], dims[1], dims[2], pur.d_anc];
    let rho_abd = partial_trace_hermitian(&full, &all, &[0, 1, 3])?;
    let alt = check_ssa(&rho_abd, [dims[0], dims[1], pur.d_anc])?.alt;
    Ok((alt - primary).abs())
}

fn ssa_monotonicity_trial(g: &mut Gen, d: usize) -> TrialResult {
    let rho = g.any_density(d * d * d)?;
    Ok(Some(-ssa_monotonicity_gap(&rho, [d, d, d])?))
}

fn ssa_purification_trial(g: &mut Gen, d: usize) -> TrialResult {
    let rank = g.int_in(1, d * d);
    let rho = g.density(d * d * d, rank)?;
    Ok(Some(-ssa_purification_gap(&rho, [d, d, d])?))
}

fn concavity_conditional_trial(g: &mut Gen, d: usize) -> TrialResult {
    let n = g.int_in(2, 4);
    let weights = g.simplex(n);
    let states = (0..n).map(|_| g.any_density(d * d)).collect::<Result<Vec<_>>>()?;
    Ok(Some(check_concavity(ConcavityMode::ConditionalEntropy { dims: [d, d] }, &states, &weights)?))
}

fn concavity_entropy_diff_trial(g: &mut Gen, d: usize) -> TrialResult {
    let n = g.int_in(2, 4);
    let weights = g.simplex(n);
    let states = (0..n).map(|_| g.any_density(d)).collect::<Result<Vec<_>>>()?;
    let k = g.int_in(1, 4);
    let phi = g.channel(d, k)?;
    Ok(Some(check_concavity(ConcavityMode::EntropyDiff(&phi), &states, &weights)?))
}

fn pure_state_lemmas_trial(g: &mut Gen, d: usize) -> TrialResult {
    let psi = g.unit_vector(d * (d + 2));
    let r = check_pure_state_lemmas(&psi, [d, d + 2])?;
    Ok(Some(-r.spectrum_distance.max(r.entropy_gap)))
}

fn adjoint_quadratic_trial(g: &mut Gen, d: usize) -> TrialResult {
    let phi = g.channel(d, 3)?;
    let p = g.scaled_full_rank(d);
    let q = g.scaled_full_rank(d);
    let a = g.gaussian(d, d);
    let t = g.pick(&T_VALUES[1..]);
    let r = check_adjoint_quadratic(&phi, &p, &q, &a, t)?;
    Ok(Some(r.margin.min(r.integrand_margin)))
}

fn dephase_z_trial(g: &mut Gen, d: usize) -> TrialResult {
    let x = g.gaussian(d, d);
    Ok(Some(-dephase(&x).max_diff(&dephase_via_z(&x))))
}

fn ancilla_trial(g: &mut Gen, d: usize) -> TrialResult {
    let k = g.int_in(1, 3);
    let phi = g.channel(d, k)?;
    let rho = g.any_density(d)?;
    let rep = ancilla_representation(&phi)?;
    let direct = phi.apply_hermitian(&rho)?;
    let roundtrip = rep.apply(&rho)?.max_diff(&direct);
    let entropy_gap = (von_neumann_entropy(&rep.dilate(&rho)?)? - von_neumann_entropy(&rho)?).abs();
    Ok(Some(-roundtrip.max(entropy_gap)))
}

fn purification_trial(g: &mut Gen, d: usize) -> TrialResult {
    let rho = g.any_density(d)?;
    let pur = purify(&rho)?;
    let reduced = partial_trace_hermitian(&pur.density(), &pur.dims(), &[0])?;
    let lemmas = check_pure_state_lemmas(&pur.vector, pur.dims())?;
    Ok(Some(-reduced.max_diff(&rho).max(lemmas.spectrum_distance)))
}

fn holevo_identities_trial(g: &mut Gen, d: usize) -> TrialResult {
    let e = g.ensemble(d)?;
    let c = chi(&e)?;
    let qc_gap = (chi_via_qc(&e)? - c).abs();
    Ok(Some(c.min(-yuen_ozawa_gap(&e)?).min(-qc_gap)))
}

fn holevo_bound_trial(g: &mut Gen, d: usize) -> TrialResult {
    let e = g.ensemble(d)?;
    let n = g.int_in(1, 4);
    let m = g.povm(d, n)?;
    Ok(Some(check_holevo_bound(&e, &m)?.margin))
}

fn holevo_chain_trial(g: &mut Gen, d: usize) -> TrialResult {
    let e = g.ensemble(d * d)?;
    let (na, nb) = (g.int_in(1, 3), g.int_in(1, 3));
    let m_a = g.povm(d, na)?;
    let m_b = g.povm(d, nb)?;
    let r = check_partial_measurement_chain(&e, [d, d], &m_a, &m_b)?;
    Ok(Some(r.margin1.min(r.margin2)))
}

fn holevo_routes_trial(g: &mut Gen, d: usize) -> TrialResult {
    let e = g.ensemble(d)?;
    let n = g.int_in(1, 4);
    let phi = if g.uniform_in(0.0, 1.0) < 0.5 {
        povm_channel(&g.povm(d, n)?)?
    } else {
        g.channel(d, n)?
    };
    Ok(Some(check_holevo_routes(&e, &phi)?.worst()))
}

macro_rules! suite {
    ($name:literal, $about:literal, $dims:expr, $max:expr, $f:ident) => {
        Suite {
            name: $name,
            about: $about,
            default_dims: $dims,
            max_dim: $max,
            trial: $f,
        }
    };
}

pub static SUITES: &[Suite] = &[
    suite!("resolvent", "spectral resolvent vs dense d^2 solve (max-norm error)", &[2, 3, 4], 8, resolvent_trial),
    suite!("relent_routes", "spectral, quadrature and kernel relative entropy agree", &[2, 3, 4, 5], 8, relent_routes_trial),
    suite!("joint_convexity", "joint convexity, subadditivity and homogeneity of H", &[2, 3, 4, 5], 8, joint_convexity_trial),
    suite!("klein_homogeneity", "H(P,Q) >= Tr(P-Q) and H(xP,xQ) = xH(P,Q)", &[2, 3, 4, 5], 8, klein_homogeneity_trial),
    suite!("conditional_entropy", "S(AB)-S(A) equals -H(rho_AB, rho_A (x) I/d) + ln d", &[2, 3], 4, conditional_entropy_trial),
    suite!("schwarz_quadratic", "joint convexity of Tr A^dag (L_P + t R_Q)^-1 A", &[2, 3, 4], 8, schwarz_quadratic_trial),
    suite!("operator_schwarz", "operator Cauchy-Schwarz sum A^dag P^-1 A", &[2, 3, 4], 8, operator_schwarz_trial),
    suite!("cp_schwarz", "Schwarz inequalities for completely positive maps", &[2, 3, 4], 8, cp_schwarz_trial),
    suite!("block_contraction", "block PSD, Schur complement and contraction predicates agree", &[2, 3, 4], 8, block_contraction_trial),
    suite!("monotonicity_dephase", "H decreases under dephasing", &[2, 3, 4], 8, monotonicity_dephase_trial),
    suite!("monotonicity_partial_trace", "H decreases under partial trace", &[2, 3], 4, monotonicity_partial_trace_trial),
    suite!("monotonicity_general", "H decreases under CPTP maps", &[3], 8, monotonicity_general_trial),
    suite!("ssa", "strong subadditivity and its alternate form", &[2], 3, ssa_trial),
    suite!("ssa_monotonicity", "SSA margin equals the partial-trace monotonicity margin", &[2], 3, ssa_monotonicity_trial),
    suite!("ssa_purification", "alternate SSA on a purification equals primary SSA", &[2], 2, ssa_purification_trial),
    suite!("concavity_conditional", "concavity of S(AB) - S(A)", &[2, 3], 4, concavity_conditional_trial),
    suite!("concavity_entropy_diff", "concavity of S(rho) - S(Phi(rho))", &[2, 3, 4], 8, concavity_entropy_diff_trial),
    suite!("pure_state_lemmas", "reductions of a pure state share their spectrum", &[2, 3], 6, pure_state_lemmas_trial),
    suite!("adjoint_quadratic", "adjoint-map quadratic form chain", &[2, 3, 4], 8, adjoint_quadratic_trial),
    suite!("dephase_z", "dephasing equals the clock-matrix average", &[2, 3, 4, 5, 6, 7, 8], 8, dephase_z_trial),
    suite!("ancilla", "ancilla dilation reproduces the channel and the entropy", &[2, 3], 4, ancilla_trial),
    suite!("purification", "purifications reduce to the input state", &[2, 3, 4], 8, purification_trial),
    suite!("holevo_identities", "chi >= 0, Yuen-Ozawa and QC-state identities", &[2, 3, 4], 8, holevo_identities_trial),
    suite!("holevo_bound", "chi does not increase under measurement", &[2, 3, 4], 8, holevo_bound_trial),
    suite!("holevo_chain", "partial-measurement bound chain on bipartite ensembles", &[2], 3, holevo_chain_trial),
    suite!("holevo_routes", "Yuen-Ozawa, QC-state and concavity proof routes", &[2, 3], 4, holevo_routes_trial),
];

/// Names of all registered suites.
pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.name).collect()
}

enum Outcome {
    Margin(f64, String),
    Skipped,
}

fn run_trial(suite: &Suite, seed: u64, trial: u64, d: usize) -> Outcome {
    let mut g = Gen::new(seed, trial);
    let result = (suite.trial)(&mut g, d);
    match result {
        Ok(Some(m)) => Outcome::Margin(if m.is_nan() { f64::NEG_INFINITY } else { m }, g.digest()),
        Ok(None) | Err(Error::KernelObstruction { .. }) => Outcome::Skipped,
        // any other error is an implementation failure, reported as such
        Err(_) => Outcome::Margin(f64::NEG_INFINITY, g.digest()),
    }
}

pub(crate) fn run_resolved(suite: &Suite, cfg: &SuiteConfig) -> CheckReport {
    let start = Instant::now();
    let dims = if cfg.dims.is_empty() { suite.default_dims } else { &cfg.dims[..] };
    let outcomes: Vec<Outcome> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| run_trial(suite, cfg.seed, i, dims[(i % dims.len() as u64) as usize]))
        .collect();
    let mut worst_margin = f64::INFINITY;
    let mut skipped_infinite = 0;
    let mut failures = Vec::new();
    for (trial, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Outcome::Skipped => skipped_infinite += 1,
            Outcome::Margin(m, digest) => {
                worst_margin = worst_margin.min(m);
                if m < -cfg.tol {
                    failures.push(TrialFailure {
                        trial: trial as u64,
                        margin: m,
                        digest,
                    });
                }
            }
        }
    }
    CheckReport {
        suite: suite.name.to_string(),
        trials: cfg.trials,
        seed: cfg.seed,
        tol: cfg.tol,
        pass: failures.is_empty(),
        worst_margin,
        skipped_infinite,
        failures,
        runtime_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

/// Runs one named suite with the trial count, seed, dims and tolerance of `cfg`.
pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<CheckReport> {
    let suite = find_suite(name)?;
    let single = SuiteConfig {
        suites: vec![name.to_string()],
        ..cfg.clone()
    };
    single.validate()?;
    Ok(run_resolved(suite, &single))
}

/// Runs every suite named in `cfg`, in order.
pub fn run_suites(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    cfg.validate()?;
    Ok(cfg.resolved_suites()?.into_iter().map(|s| run_resolved(s, cfg)).collect())
}
