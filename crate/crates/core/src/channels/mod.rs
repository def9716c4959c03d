//! Completely positive maps in Kraus form, their adjoints, dephasing,
//! POVM measurement channels, Choi matrices, ancilla dilations and
//! purifications.

mod json;

use num_complex::Complex64;

pub use json::{ChannelJson, PovmJson};

use crate::error::{shape_err, Error, Result};
use crate::matcore::{
    partial_trace_hermitian, psd_sqrt, tensor, ComplexMatrix, DensityMatrix, HermitianMatrix,
    Spectrum, KERNEL_ETA,
};

/// Residual of `sum K^dag K - I` (or `sum M_a - I`) accepted as exact.
pub const TP_TOL: f64 = 1e-10;

/// A linear map on matrices given by its action.
pub trait LinearMap {
    fn d_in(&self) -> usize;
    fn d_out(&self) -> usize;
    fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix>;
}

/// `X -> sum_j K_j X K_j^dag`.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausMap {
    kraus: Vec<ComplexMatrix>,
    d_in: usize,
    d_out: usize,
}

impl KrausMap {
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidArgument("a Kraus map needs at least one operator".into()))?;
        let shape = first.shape();
        if let Some(bad) = kraus.iter().find(|k| k.shape() != shape) {
            return Err(shape_err(
                format!("{}x{}", shape.0, shape.1),
                format!("{}x{}", bad.rows(), bad.cols()),
            ));
        }
        Ok(Self {
            d_out: shape.0,
            d_in: shape.1,
            kraus,
        })
    }

    pub fn identity(d: usize) -> Self {
        Self::from_unitary(ComplexMatrix::identity(d))
    }

    pub fn from_unitary(u: ComplexMatrix) -> Self {
        Self::new(vec![u]).expect("one operator")
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    /// `max |sum K^dag K - I|`.
    pub fn tp_residual(&self) -> f64 {
        let mut acc = ComplexMatrix::zeros(self.d_in, self.d_in);
        for k in &self.kraus {
            acc = &acc + &(&k.adjoint() * k);
        }
        acc.max_diff(&ComplexMatrix::identity(self.d_in))
    }

    pub fn is_trace_preserving(&self) -> bool {
        self.tp_residual() <= TP_TOL
    }

    fn check_input(&self, x: &ComplexMatrix) -> Result<()> {
        if x.shape() != (self.d_in, self.d_in) {
            return Err(shape_err(
                format!("{0}x{0}", self.d_in),
                format!("{}x{}", x.rows(), x.cols()),
            ));
        }
        Ok(())
    }

    pub fn apply_hermitian(&self, rho: &HermitianMatrix) -> Result<HermitianMatrix> {
        Ok(HermitianMatrix::from_hermitian_part(&LinearMap::apply(self, rho)?))
    }

    /// Image of a state under a trace-preserving map.
    pub fn apply_state(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if !self.is_trace_preserving() {
            return Err(Error::NotTracePreserving {
                residual: self.tp_residual(),
            });
        }
        Ok(DensityMatrix::new_unchecked(self.apply_hermitian(rho)?))
    }
}

impl LinearMap for KrausMap {
    fn d_in(&self) -> usize {
        self.d_in
    }

    fn d_out(&self) -> usize {
        self.d_out
    }

    fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_input(x)?;
        let mut acc = ComplexMatrix::zeros(self.d_out, self.d_out);
        for k in &self.kraus {
            acc = &acc + &x.conjugate_by(k)?;
        }
        Ok(acc)
    }
}

pub fn apply_channel(phi: &KrausMap, rho: &HermitianMatrix) -> Result<HermitianMatrix> {
    phi.apply_hermitian(rho)
}

/// Adjoint with respect to the Hilbert-Schmidt inner product: Kraus set `{K^dag}`.
pub fn adjoint_channel(phi: &KrausMap) -> KrausMap {
    KrausMap::new(phi.kraus.iter().map(ComplexMatrix::adjoint).collect()).expect("non-empty")
}

/// `{K_i (x) L_j}`, acting as `Phi (x) Psi`.
pub fn tensor_channel(phi: &KrausMap, psi: &KrausMap) -> KrausMap {
    let kraus = phi
        .kraus
        .iter()
        .flat_map(|k| psi.kraus.iter().map(move |l| tensor(k, l)))
        .collect();
    KrausMap::new(kraus).expect("non-empty")
}

/// Diagonal part of a square matrix.
pub fn dephase(x: &ComplexMatrix) -> ComplexMatrix {
    assert!(x.is_square(), "dephase of a non-square matrix");
    ComplexMatrix::from_fn(x.rows(), x.cols(), |i, j| {
        if i == j {
            x[(i, i)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// `Z = diag(1, w, w^2, ...)` with `w = exp(2 pi i / d)`.
pub fn clock_matrix(d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, d, |i, j| {
        if i == j {
            Complex64::from_polar(1.0, std::f64::consts::TAU * i as f64 / d as f64)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Dephasing as the unitary average `(1/d) sum_j Z^j X Z^-j`.
pub fn dephase_via_z(x: &ComplexMatrix) -> ComplexMatrix {
    assert!(x.is_square(), "dephase of a non-square matrix");
    let d = x.rows();
    let z = clock_matrix(d);
    let mut power = ComplexMatrix::identity(d);
    let mut acc = ComplexMatrix::zeros(d, d);
    for _ in 0..d {
        acc = &acc + &x.conjugate_by(&power).expect("square");
        power = &power * &z;
    }
    acc.scale(1.0 / d as f64)
}

/// Kraus form of dephasing: `{|k><k|}`.
pub fn dephasing_channel(d: usize) -> KrausMap {
    KrausMap::new((0..d).map(|k| ComplexMatrix::basis_projector(d, k)).collect()).expect("d > 0")
}

/// Positive operator valued measure with `sum_a M_a = I`.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm {
    effects: Vec<HermitianMatrix>,
}

impl Povm {
    pub fn new(effects: Vec<HermitianMatrix>) -> Result<Self> {
        let first = effects
            .first()
            .ok_or_else(|| Error::InvalidArgument("a POVM needs at least one effect".into()))?;
        let d = first.dim();
        if let Some(bad) = effects.iter().find(|m| m.dim() != d) {
            return Err(shape_err(format!("{d}x{d}"), format!("{0}x{0}", bad.dim())));
        }
        for m in &effects {
            m.check_psd(TP_TOL)?;
        }
        let povm = Self { effects };
        let residual = povm.completeness_residual();
        if residual > TP_TOL {
            return Err(Error::NotTracePreserving { residual });
        }
        Ok(povm)
    }

    /// Projective measurement in the computational basis.
    pub fn computational(d: usize) -> Self {
        Self {
            effects: (0..d)
                .map(|k| HermitianMatrix::new(ComplexMatrix::basis_projector(d, k)).expect("projector"))
                .collect(),
        }
    }

    /// The single-outcome measurement `{I}`.
    pub fn trivial(d: usize) -> Self {
        Self {
            effects: vec![HermitianMatrix::identity(d)],
        }
    }

    pub fn effects(&self) -> &[HermitianMatrix] {
        &self.effects
    }

    pub fn dim(&self) -> usize {
        self.effects[0].dim()
    }

    pub fn outcomes(&self) -> usize {
        self.effects.len()
    }

    pub fn completeness_residual(&self) -> f64 {
        let d = self.dim();
        let mut acc = ComplexMatrix::zeros(d, d);
        for m in &self.effects {
            acc = &acc + m;
        }
        acc.max_diff(&ComplexMatrix::identity(d))
    }

    /// Outcome probabilities `Tr rho M_a`.
    pub fn probabilities(&self, rho: &HermitianMatrix) -> Result<Vec<f64>> {
        self.effects
            .iter()
            .map(|m| Ok(crate::matcore::hs_inner(m, rho)?.re))
            .collect()
    }
}

/// Measurement channel `rho -> sum_a (Tr rho M_a) |a><a|` with Kraus
/// operators `|a><b| sqrt(M_a)`.
pub fn povm_channel(m: &Povm) -> Result<KrausMap> {
    let d = m.dim();
    let n = m.outcomes();
    let mut kraus = Vec::with_capacity(n * d);
    for (a, effect) in m.effects.iter().enumerate() {
        let root = psd_sqrt(effect)?;
        for b in 0..d {
            kraus.push(ComplexMatrix::from_fn(n, d, |r, c| if r == a { root[(b, c)] } else { Complex64::new(0.0, 0.0) }));
        }
    }
    KrausMap::new(kraus)
}

/// Transposition `X -> X^T`, positive but not completely positive.
#[derive(Clone, Copy, Debug)]
pub struct TransposeMap(pub usize);

impl LinearMap for TransposeMap {
    fn d_in(&self) -> usize {
        self.0
    }

    fn d_out(&self) -> usize {
        self.0
    }

    fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        Ok(x.transpose())
    }
}

/// `sum_ij |i><j| (x) Phi(|i><j|)`, i.e. `(id (x) Phi)(|Omega><Omega|)` with
/// the unnormalized `|Omega> = sum_i |ii>`.
pub fn choi_matrix(phi: &impl LinearMap) -> Result<HermitianMatrix> {
    let (n, m) = (phi.d_in(), phi.d_out());
    let mut choi = ComplexMatrix::zeros(n * m, n * m);
    for i in 0..n {
        for j in 0..n {
            let mut e = ComplexMatrix::zeros(n, n);
            e[(i, j)] = Complex64::new(1.0, 0.0);
            let out = phi.apply(&e)?;
            for r in 0..m {
                for c in 0..m {
                    choi[(i * m + r, j * m + c)] = out[(r, c)];
                }
            }
        }
    }
    HermitianMatrix::new(choi)
}

/// Complete positivity and trace preservation of a Kraus map, checked on the
/// Choi matrix rather than assumed from the Kraus form.
#[derive(Clone, Debug, PartialEq)]
pub struct CptpReport {
    pub choi_min_eigenvalue: f64,
    pub tp_residual: f64,
    pub completely_positive: bool,
    pub trace_preserving: bool,
}

impl CptpReport {
    pub fn is_cptp(&self) -> bool {
        self.completely_positive && self.trace_preserving
    }
}

pub fn is_cptp(phi: &KrausMap, tol: f64) -> Result<CptpReport> {
    let choi_min_eigenvalue = choi_matrix(phi)?.eig()?.min();
    let tp_residual = phi.tp_residual();
    Ok(CptpReport {
        choi_min_eigenvalue,
        tp_residual,
        completely_positive: choi_min_eigenvalue >= -tol,
        trace_preserving: tp_residual <= tol,
    })
}

/// `Phi(rho) = Tr_B U (rho (x) |phi_B><phi_B|) U^dag`.
#[derive(Clone, Debug)]
pub struct AncillaRep {
    pub unitary: ComplexMatrix,
    pub anc_state: Vec<Complex64>,
    pub d_sys: usize,
    pub d_anc: usize,
}

impl AncillaRep {
    /// `sigma_AB = U (rho (x) |phi><phi|) U^dag`.
    pub fn dilate(&self, rho: &HermitianMatrix) -> Result<HermitianMatrix> {
        let anc = HermitianMatrix::from_hermitian_part(&ComplexMatrix::outer(&self.anc_state, &self.anc_state));
        rho.tensor(&anc).congruence(&self.unitary)
    }

    pub fn apply(&self, rho: &HermitianMatrix) -> Result<HermitianMatrix> {
        partial_trace_hermitian(&self.dilate(rho)?, &[self.d_sys, self.d_anc], &[0])
    }
}

/// Completes the isometry `V = sum_j K_j (x) |j>_B` to a unitary on
/// `C^d (x) C^r`. Column `k r` of `U` is `V|k>`, so `U(|psi> (x) |0>) = V|psi>`;
/// the remaining columns come from Gram-Schmidt on the standard basis taken
/// in order.
pub fn ancilla_representation(phi: &KrausMap) -> Result<AncillaRep> {
    let d = phi.d_in();
    if phi.d_out() != d {
        return Err(Error::InvalidDims(format!(
            "ancilla representation needs a square channel, got {} -> {}",
            d,
            phi.d_out()
        )));
    }
    let residual = phi.tp_residual();
    if residual > TP_TOL {
        return Err(Error::NotTracePreserving { residual });
    }
    let r = phi.kraus.len();
    let n = d * r;
    let mut columns: Vec<Option<Vec<Complex64>>> = vec![None; n];
    for k in 0..d {
        let mut col = vec![Complex64::new(0.0, 0.0); n];
        for (j, kj) in phi.kraus.iter().enumerate() {
            for i in 0..d {
                col[i * r + j] = kj[(i, k)];
            }
        }
        columns[k * r] = Some(col);
    }
    let mut basis: Vec<Vec<Complex64>> = columns.iter().flatten().cloned().collect();
    let mut candidates = 0..n;
    for slot in 0..n {
        if columns[slot].is_some() {
            continue;
        }
        loop {
            let c = candidates
                .next()
                .ok_or(Error::NonConvergence { what: "unitary completion", iterations: n })?;
            let mut v = vec![Complex64::new(0.0, 0.0); n];
            v[c] = Complex64::new(1.0, 0.0);
            for _ in 0..2 {
                for q in &basis {
                    let overlap: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                    for (vi, qi) in v.iter_mut().zip(q) {
                        *vi -= overlap * qi;
                    }
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-6 {
                let v: Vec<Complex64> = v.into_iter().map(|z| z / norm).collect();
                basis.push(v.clone());
                columns[slot] = Some(v);
                break;
            }
        }
    }
    let cols: Vec<Vec<Complex64>> = columns.into_iter().map(|c| c.expect("filled")).collect();
    let unitary = ComplexMatrix::from_fn(n, n, |i, j| cols[j][i]);
    let mut anc_state = vec![Complex64::new(0.0, 0.0); r];
    anc_state[0] = Complex64::new(1.0, 0.0);
    Ok(AncillaRep {
        unitary,
        anc_state,
        d_sys: d,
        d_anc: r,
    })
}

/// Pure state on `C^d (x) C^m` whose first reduction is a given state.
#[derive(Clone, Debug)]
pub struct Purification {
    pub vector: Vec<Complex64>,
    pub d_sys: usize,
    pub d_anc: usize,
}

impl Purification {
    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::new_unchecked(HermitianMatrix::from_hermitian_part(&ComplexMatrix::outer(
            &self.vector,
            &self.vector,
        )))
    }

    pub fn dims(&self) -> [usize; 2] {
        [self.d_sys, self.d_anc]
    }
}

/// `|psi> = sum_k sqrt(lambda_k) |phi_k> (x) |k>` over the nonzero eigenvalues,
/// so the ancilla dimension equals the rank.
pub fn purify(rho: &HermitianMatrix) -> Result<Purification> {
    let s: Spectrum = rho.eig()?;
    let threshold = KERNEL_ETA * s.max().max(0.0);
    let support: Vec<usize> = (0..s.dim()).rev().filter(|&k| s.values[k] > threshold).collect();
    if support.is_empty() {
        return Err(Error::InvalidArgument("cannot purify the zero matrix".into()));
    }
    let d = rho.dim();
    let m = support.len();
    let mut vector = vec![Complex64::new(0.0, 0.0); d * m];
    for (slot, &k) in support.iter().enumerate() {
        let amp = s.values[k].sqrt();
        for i in 0..d {
            vector[i * m + slot] = s.vectors[(i, k)] * amp;
        }
    }
    Ok(Purification {
        vector,
        d_sys: d,
        d_anc: m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::von_neumann_entropy;
    use crate::matcore::hs_inner;
    use crate::randgen::{random_cptp, random_density, random_povm, random_unitary, RngState};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_and_dephasing_kraus() {
        let mut rng = RngState::new(1);
        let rho = random_density(3, 3, &mut rng).unwrap();
        assert_eq!(apply_channel(&KrausMap::identity(3), &rho).unwrap(), *rho.as_hermitian());

        let x = HermitianMatrix::new(
            ComplexMatrix::new(2, 2, vec![c(0.3, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.7, 0.0)]).unwrap(),
        )
        .unwrap();
        let out = apply_channel(&dephasing_channel(2), &x).unwrap();
        assert_eq!(*out.as_matrix(), ComplexMatrix::from_diag(&[0.3, 0.7]));
        assert!(apply_channel(&KrausMap::identity(2), &rho).is_err());
    }

    #[test]
    fn random_channel_preserves_trace_and_positivity() {
        let mut rng = RngState::new(2);
        for _ in 0..50 {
            let phi = random_cptp(3, 3, &mut rng).unwrap();
            let rho = random_density(3, 2, &mut rng).unwrap();
            let out = apply_channel(&phi, &rho).unwrap();
            assert!((out.trace_re() - rho.trace_re()).abs() <= 1e-12);
            assert!(out.eig().unwrap().min() >= -1e-10);
        }
    }

    #[test]
    fn adjoint_examples() {
        let mut rng = RngState::new(3);
        let u = random_unitary(3, &mut rng);
        let adj = adjoint_channel(&KrausMap::from_unitary(u.clone()));
        assert_eq!(adj.kraus()[0], u.adjoint());

        let phi = random_cptp(3, 4, &mut rng).unwrap();
        let adj = adjoint_channel(&phi);
        let unital = LinearMap::apply(&adj, &ComplexMatrix::identity(3)).unwrap();
        assert!(unital.max_diff(&ComplexMatrix::identity(3)) <= 1e-10);
        for _ in 0..100 {
            let x = rng.gaussian_matrix(3, 3);
            let rho = random_density(3, 3, &mut rng).unwrap();
            let lhs = hs_inner(&LinearMap::apply(&adj, &x).unwrap(), &rho).unwrap();
            let rhs = hs_inner(&x, &LinearMap::apply(&phi, &rho).unwrap()).unwrap();
            assert!((lhs - rhs).norm() <= 1e-12);
        }
    }

    #[test]
    fn dephasing_routes_agree() {
        let x = ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(clock_matrix(2)[(1, 1)].re, -1.0);
        let avg = (&x + &x.conjugate_by(&clock_matrix(2)).unwrap()).scale(0.5);
        assert!(avg.max_diff(&ComplexMatrix::from_diag(&[1.0, 4.0])) < 1e-15);

        let mut rng = RngState::new(4);
        for d in 2..=8 {
            let x = rng.gaussian_matrix(d, d);
            assert!(dephase(&x).max_diff(&dephase_via_z(&x)) <= 1e-12);
            assert_eq!(dephase(&dephase(&x)), dephase(&x));
        }
    }

    #[test]
    fn povm_channel_examples() {
        let rho = HermitianMatrix::from_diag(&[0.2, 0.8]);
        let out = apply_channel(&povm_channel(&Povm::computational(2)).unwrap(), &rho).unwrap();
        assert!(out.max_diff(&rho) < 1e-15);

        let half = Povm::new(vec![HermitianMatrix::identity(2).scale(0.5); 2]).unwrap();
        let mut rng = RngState::new(5);
        let rho = random_density(2, 2, &mut rng).unwrap();
        let out = apply_channel(&povm_channel(&half).unwrap(), &rho).unwrap();
        assert!(out.max_diff(&ComplexMatrix::from_diag(&[0.5, 0.5])) < 1e-15);

        for _ in 0..20 {
            let m = random_povm(3, 4, &mut rng).unwrap();
            let rho = random_density(3, 3, &mut rng).unwrap();
            let out = apply_channel(&povm_channel(&m).unwrap(), &rho).unwrap();
            assert!(out.is_diagonal());
            let probs = m.probabilities(&rho).unwrap();
            for (a, p) in probs.iter().enumerate() {
                assert!((out[(a, a)].re - p).abs() <= 1e-12);
            }
            assert!((probs.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn povm_validation() {
        assert!(Povm::new(vec![HermitianMatrix::identity(2).scale(0.5)]).is_err());
        assert!(Povm::new(vec![HermitianMatrix::from_diag(&[1.5, 0.5]), HermitianMatrix::from_diag(&[-0.5, 0.5])]).is_err());
        assert!(Povm::new(vec![]).is_err());
    }

    #[test]
    fn choi_examples() {
        let choi = choi_matrix(&KrausMap::identity(3)).unwrap();
        let s = choi.eig().unwrap();
        assert!((choi.trace_re() - 3.0).abs() < 1e-15);
        assert!((s.max() - 3.0).abs() < 1e-13);
        assert!(s.values[..8].iter().all(|v| v.abs() < 1e-13));

        // transpose: Choi is the swap, eigenvalues +-1
        let swap = choi_matrix(&TransposeMap(2)).unwrap();
        let s = swap.eig().unwrap();
        assert!((s.min() + 1.0).abs() < 1e-14);
        assert!((s.max() - 1.0).abs() < 1e-14);

        let mut rng = RngState::new(6);
        let phi = random_cptp(2, 3, &mut rng).unwrap();
        assert!(is_cptp(&phi, 1e-10).unwrap().is_cptp());
        let scaled = KrausMap::new(phi.kraus().iter().map(|k| k.scale(2.0)).collect()).unwrap();
        let report = is_cptp(&scaled, 1e-10).unwrap();
        assert!(report.completely_positive && !report.trace_preserving);
    }

    #[test]
    fn ancilla_unitary_channel_is_itself() {
        let mut rng = RngState::new(7);
        let u = random_unitary(3, &mut rng);
        let rep = ancilla_representation(&KrausMap::from_unitary(u.clone())).unwrap();
        assert_eq!(rep.d_anc, 1);
        assert!(rep.unitary.max_diff(&u) < 1e-15);
    }

    #[test]
    fn ancilla_roundtrip_and_entropy() {
        let mut rng = RngState::new(8);
        for (d, r) in [(2, 2), (3, 3)] {
            let phi = if d == 2 { dephasing_channel(2) } else { random_cptp(d, r, &mut rng).unwrap() };
            let rep = ancilla_representation(&phi).unwrap();
            let u = &rep.unitary;
            assert!((&u.adjoint() * u).max_diff(&ComplexMatrix::identity(d * r)) <= 1e-10);
            for _ in 0..50 {
                let rho = random_density(d, 1 + rng.int_in(0, d - 1), &mut rng).unwrap();
                let direct = apply_channel(&phi, &rho).unwrap();
                assert!(rep.apply(&rho).unwrap().max_diff(&direct) <= 1e-10);
                let sigma = rep.dilate(&rho).unwrap();
                let gap = von_neumann_entropy(&sigma).unwrap() - von_neumann_entropy(&rho).unwrap();
                assert!(gap.abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn ancilla_rejects_bad_input() {
        let k = ComplexMatrix::identity(2).scale(0.5);
        assert!(matches!(
            ancilla_representation(&KrausMap::new(vec![k]).unwrap()),
            Err(Error::NotTracePreserving { .. })
        ));
        let rect = KrausMap::new(vec![ComplexMatrix::from_real(1, 2, &[1.0, 0.0]).unwrap()]).unwrap();
        assert!(ancilla_representation(&rect).is_err());
    }

    #[test]
    fn purify_examples() {
        let p: f64 = 0.3;
        let pur = purify(&HermitianMatrix::from_diag(&[p, 1.0 - p])).unwrap();
        assert_eq!(pur.d_anc, 2);
        // sqrt(p)|00> + sqrt(1-p)|11> up to the ancilla labelling and phases
        let amps: Vec<f64> = pur.vector.iter().map(|z| z.norm()).collect();
        let mut nonzero: Vec<f64> = amps.iter().cloned().filter(|a| *a > 1e-15).collect();
        nonzero.sort_by(f64::total_cmp);
        assert!((nonzero[0] - p.sqrt()).abs() < 1e-15 && (nonzero[1] - (1.0 - p).sqrt()).abs() < 1e-15);
        assert!(amps[0] > 0.0 || amps[1] > 0.0);
        assert!(amps[2] > 0.0 || amps[3] > 0.0);

        let mut rng = RngState::new(9);
        let rho = random_density(4, 2, &mut rng).unwrap();
        let pur = purify(&rho).unwrap();
        assert_eq!(pur.d_anc, 2);
        let full = pur.density();
        let ra = partial_trace_hermitian(&full, &pur.dims(), &[0]).unwrap();
        assert!(ra.max_diff(&rho) <= 1e-10);
    }

    #[test]
    fn tensor_channel_factorizes() {
        let mut rng = RngState::new(10);
        let id = KrausMap::identity(2);
        let idid = tensor_channel(&id, &id);
        assert!(idid.kraus()[0].max_diff(&ComplexMatrix::identity(4)) == 0.0);

        let phi = random_cptp(2, 2, &mut rng).unwrap();
        let both = tensor_channel(&phi, &KrausMap::identity(3));
        assert!(both.tp_residual() <= 1e-12);
        let rho = random_density(2, 2, &mut rng).unwrap();
        let sigma = random_density(3, 3, &mut rng).unwrap();
        let lhs = apply_channel(&both, &rho.tensor(&sigma)).unwrap();
        let rhs = apply_channel(&phi, &rho).unwrap().tensor(&sigma);
        assert!(lhs.max_diff(&rhs) <= 1e-12);
    }
}
