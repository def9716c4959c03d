//! Ensembles, the Holevo quantity and the measurement bound chains.

use serde::{Deserialize, Serialize};

use crate::channels::{povm_channel, tensor_channel, KrausMap, Povm};
use crate::entropy::{relative_entropy, von_neumann_entropy, EntropyValue};
use crate::error::{shape_err, Error, Result};
use crate::inequalities::{check_concavity, ConcavityMode};
use crate::matcore::{
    partial_trace_hermitian, ComplexMatrix, DensityMatrix, HermitianMatrix, MatrixJson,
};

/// Allowed deviation of the weight sum from one.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// `{pi_j, rho_j}` with `pi_j > 0` and `sum pi_j = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ensemble {
    weights: Vec<f64>,
    states: Vec<DensityMatrix>,
}

impl Ensemble {
    pub fn new(weights: Vec<f64>, states: Vec<DensityMatrix>) -> Result<Self> {
        if weights.is_empty() || weights.len() != states.len() {
            return Err(Error::InvalidArgument(format!(
                "ensemble needs matching non-empty weights and states, got {} and {}",
                weights.len(),
                states.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0) || !w.is_finite()) {
            return Err(Error::InvalidArgument(format!("ensemble weight {w} is not positive")));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidArgument(format!("ensemble weights sum to {sum}")));
        }
        let d = states[0].dim();
        if let Some(bad) = states.iter().find(|s| s.dim() != d) {
            return Err(shape_err(format!("{d}x{d}"), format!("{0}x{0}", bad.dim())));
        }
        Ok(Self { weights, states })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    /// `rho_av = sum pi_j rho_j`.
    pub fn average(&self) -> DensityMatrix {
        let terms: Vec<HermitianMatrix> = self.states.iter().map(|s| s.as_hermitian().clone()).collect();
        let avg = HermitianMatrix::weighted_sum(&self.weights, &terms).expect("validated dimensions");
        DensityMatrix::new_unchecked(avg)
    }

    /// Each member replaced by its image under a trace-preserving map.
    pub fn map(&self, phi: &KrausMap) -> Result<Self> {
        let states = self
            .states
            .iter()
            .map(|s| phi.apply_state(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            weights: self.weights.clone(),
            states,
        })
    }

    /// `Phi_M(E)`.
    pub fn measure(&self, m: &Povm) -> Result<Self> {
        self.map(&povm_channel(m)?)
    }

    /// `gamma_QC = sum pi_j rho_j (x) |j><j|`, the classical register being
    /// the computational basis of `C^n`.
    pub fn qc_state(&self) -> HermitianMatrix {
        let n = self.len();
        let terms: Vec<HermitianMatrix> = self
            .states
            .iter()
            .enumerate()
            .map(|(j, s)| s.tensor(&HermitianMatrix::new(ComplexMatrix::basis_projector(n, j)).expect("projector")))
            .collect();
        HermitianMatrix::weighted_sum(&self.weights, &terms).expect("validated dimensions")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str::<EnsembleJson>(s)?.try_into()
    }
}

/// `{"weights": [floats], "states": [matrix, ...]}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnsembleJson {
    pub weights: Vec<f64>,
    pub states: Vec<MatrixJson>,
}

impl TryFrom<EnsembleJson> for Ensemble {
    type Error = Error;

    fn try_from(j: EnsembleJson) -> Result<Self> {
        let states = j
            .states
            .into_iter()
            .map(|m| DensityMatrix::from_matrix(ComplexMatrix::try_from(m)?))
            .collect::<Result<Vec<_>>>()?;
        Ensemble::new(j.weights, states)
    }
}

impl From<&Ensemble> for EnsembleJson {
    fn from(e: &Ensemble) -> Self {
        Self {
            weights: e.weights.clone(),
            states: e.states.iter().map(|s| MatrixJson::from(s.as_matrix())).collect(),
        }
    }
}

fn finite_relent(p: &HermitianMatrix, q: &HermitianMatrix) -> Result<f64> {
    match relative_entropy(p, q)? {
        EntropyValue::Finite(v) => Ok(v),
        EntropyValue::Infinite => Err(Error::KernelObstruction { magnitude: f64::INFINITY }),
    }
}

/// `chi(E) = S(sum pi_j rho_j) - sum pi_j S(rho_j)`.
///
/// Measured ensembles (outputs of [`povm_channel`]) are exactly diagonal, so
/// the entropies reduce to Shannon sums without an eigensolve.
pub fn chi(e: &Ensemble) -> Result<f64> {
    let mut member = 0.0;
    for (w, s) in e.weights.iter().zip(&e.states) {
        member += w * von_neumann_entropy(s)?;
    }
    Ok(von_neumann_entropy(&e.average())? - member)
}

/// `sum pi_j H(rho_j, rho_av)`.
pub fn yuen_ozawa_sum(e: &Ensemble) -> Result<f64> {
    let avg = e.average();
    let mut acc = 0.0;
    for (w, s) in e.weights.iter().zip(&e.states) {
        acc += w * finite_relent(s, &avg)?;
    }
    Ok(acc)
}

/// `|chi(E) - sum pi_j H(rho_j, rho_av)|`.
pub fn yuen_ozawa_gap(e: &Ensemble) -> Result<f64> {
    Ok((chi(e)? - yuen_ozawa_sum(e)?).abs())
}

/// `gamma_Q (x) gamma_C` for `gamma_QC` on `Q (x) C`.
fn qc_product(qc: &HermitianMatrix, dims: [usize; 2]) -> Result<HermitianMatrix> {
    let q = partial_trace_hermitian(qc, &dims, &[0])?;
    let c = partial_trace_hermitian(qc, &dims, &[1])?;
    Ok(q.tensor(&c))
}

/// `H(gamma_QC, gamma_Q (x) gamma_C)`.
pub fn chi_via_qc(e: &Ensemble) -> Result<f64> {
    let qc = e.qc_state();
    let product = qc_product(&qc, [e.dim(), e.len()])?;
    finite_relent(&qc, &product)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HolevoBound {
    pub chi_in: f64,
    pub chi_out: f64,
    pub margin: f64,
}

/// `chi(E) - chi(Phi_M(E))`.
pub fn check_holevo_bound(e: &Ensemble, m: &Povm) -> Result<HolevoBound> {
    if m.dim() != e.dim() {
        return Err(shape_err(format!("POVM on dimension {}", e.dim()), format!("dimension {}", m.dim())));
    }
    let chi_in = chi(e)?;
    let chi_out = chi(&e.measure(m)?)?;
    Ok(HolevoBound {
        chi_in,
        chi_out,
        margin: chi_in - chi_out,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PartialMeasurementChain {
    pub chi_ab: f64,
    pub chi_b_measured: f64,
    pub chi_both_measured: f64,
    pub margin1: f64,
    pub margin2: f64,
}

/// The two channels of the chain: `I (x) Phi_{M_B}` and then
/// `Phi_{M_A} (x) I` on the register left by the first.
pub fn partial_measurement_channels(dims: [usize; 2], m_a: &Povm, m_b: &Povm) -> Result<(KrausMap, KrausMap)> {
    if m_a.dim() != dims[0] || m_b.dim() != dims[1] {
        return Err(shape_err(
            format!("POVMs on {} and {}", dims[0], dims[1]),
            format!("{} and {}", m_a.dim(), m_b.dim()),
        ));
    }
    let measure_b = tensor_channel(&KrausMap::identity(dims[0]), &povm_channel(m_b)?);
    let then_a = tensor_channel(&povm_channel(m_a)?, &KrausMap::identity(m_b.outcomes()));
    Ok((measure_b, then_a))
}

/// `chi(E_AB) >= chi((I (x) Phi_B) E_AB) >= chi((Phi_A (x) Phi_B) E_AB)`.
pub fn check_partial_measurement_chain(
    e: &Ensemble,
    dims: [usize; 2],
    m_a: &Povm,
    m_b: &Povm,
) -> Result<PartialMeasurementChain> {
    if dims[0] * dims[1] != e.dim() {
        return Err(Error::InvalidDims(format!("{dims:?} does not factor dimension {}", e.dim())));
    }
    let (measure_b, then_a) = partial_measurement_channels(dims, m_a, m_b)?;
    let after_b = e.map(&measure_b)?;
    let after_both = after_b.map(&then_a)?;
    let chi_ab = chi(e)?;
    let chi_b_measured = chi(&after_b)?;
    let chi_both_measured = chi(&after_both)?;
    Ok(PartialMeasurementChain {
        chi_ab,
        chi_b_measured,
        chi_both_measured,
        margin1: chi_ab - chi_b_measured,
        margin2: chi_b_measured - chi_both_measured,
    })
}

/// Margins of the three ways of deriving `chi(E) >= chi(Phi(E))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HolevoRoutes {
    /// `min_j [H(rho_j, rho_av) - H(Phi rho_j, Phi rho_av)]`.
    pub yuen_ozawa: f64,
    /// `H(gamma_QC, gamma_Q (x) gamma_C) - H((Phi (x) I) gamma_QC, (Phi (x) I)(gamma_Q (x) gamma_C))`.
    pub qc_state: f64,
    /// Concavity margin of `rho -> S(rho) - S(Phi rho)` on the ensemble.
    pub concavity: f64,
}

impl HolevoRoutes {
    pub fn worst(&self) -> f64 {
        self.yuen_ozawa.min(self.qc_state).min(self.concavity)
    }
}

pub fn check_holevo_routes(e: &Ensemble, phi: &KrausMap) -> Result<HolevoRoutes> {
    let avg = e.average();
    let avg_out = phi.apply_hermitian(&avg)?;
    let mut yuen_ozawa = f64::INFINITY;
    for s in &e.states {
        let before = finite_relent(s, &avg)?;
        let after = finite_relent(&phi.apply_hermitian(s)?, &avg_out)?;
        yuen_ozawa = yuen_ozawa.min(before - after);
    }

    let n = e.len();
    let qc = e.qc_state();
    let product = qc_product(&qc, [e.dim(), n])?;
    let lifted = tensor_channel(phi, &KrausMap::identity(n));
    let qc_state = finite_relent(&qc, &product)?
        - finite_relent(&lifted.apply_hermitian(&qc)?, &lifted.apply_hermitian(&product)?)?;

    let states: Vec<HermitianMatrix> = e.states.iter().map(|s| s.as_hermitian().clone()).collect();
    let concavity = check_concavity(ConcavityMode::EntropyDiff(phi), &states, &e.weights)?;
    Ok(HolevoRoutes {
        yuen_ozawa,
        qc_state,
        concavity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randgen::{random_cptp, random_density, random_ensemble, random_povm, RngState};

    fn orthogonal_pair() -> Ensemble {
        Ensemble::new(
            vec![0.5, 0.5],
            vec![DensityMatrix::basis_state(2, 0), DensityMatrix::basis_state(2, 1)],
        )
        .unwrap()
    }

    #[test]
    fn chi_examples() {
        let ln2 = std::f64::consts::LN_2;
        assert!((chi(&orthogonal_pair()).unwrap() - ln2).abs() < 1e-15);
        let mut rng = RngState::new(1);
        let rho = random_density(3, 2, &mut rng).unwrap();
        let same = Ensemble::new(vec![0.3, 0.7], vec![rho.clone(), rho]).unwrap();
        assert!(chi(&same).unwrap().abs() < 1e-12);
    }

    #[test]
    fn identities_on_random_ensembles() {
        let mut rng = RngState::new(2);
        for _ in 0..50 {
            let d = rng.int_in(2, 4);
            let n = rng.int_in(1, 4);
            let rank = rng.int_in(1, d);
            let e = random_ensemble(d, n, rank, &mut rng).unwrap();
            let c = chi(&e).unwrap();
            assert!(c >= -1e-9);
            assert!(yuen_ozawa_gap(&e).unwrap() <= 1e-9);
            assert!((chi_via_qc(&e).unwrap() - c).abs() <= 1e-9);
        }
        assert!(yuen_ozawa_gap(&orthogonal_pair()).unwrap() <= 1e-12);
        assert!((chi_via_qc(&orthogonal_pair()).unwrap() - std::f64::consts::LN_2).abs() <= 1e-12);
    }

    #[test]
    fn holevo_bound_examples() {
        let e = orthogonal_pair();
        let trivial = check_holevo_bound(&e, &Povm::trivial(2)).unwrap();
        assert_eq!(trivial.chi_out, 0.0);
        assert!((trivial.margin - e_chi(&e)).abs() < 1e-15);
        let own_basis = check_holevo_bound(&e, &Povm::computational(2)).unwrap();
        assert!(own_basis.margin.abs() < 1e-15);

        let mut rng = RngState::new(3);
        for _ in 0..30 {
            let e = random_ensemble(3, 3, 2, &mut rng).unwrap();
            let m = random_povm(3, 3, &mut rng).unwrap();
            assert!(check_holevo_bound(&e, &m).unwrap().margin >= -1e-9);
        }
        assert!(check_holevo_bound(&e, &Povm::trivial(3)).is_err());
    }

    fn e_chi(e: &Ensemble) -> f64 {
        chi(e).unwrap()
    }

    #[test]
    fn chain_on_classical_product_ensemble() {
        // diagonal product states measured in the computational basis are unchanged
        let s = |a: usize, b: usize| {
            DensityMatrix::new_unchecked(
                HermitianMatrix::from_diag(if a == 0 { &[0.9, 0.1] } else { &[0.4, 0.6] })
                    .tensor(&HermitianMatrix::from_diag(if b == 0 { &[0.8, 0.2] } else { &[0.3, 0.7] })),
            )
        };
        let e = Ensemble::new(vec![0.25; 4], vec![s(0, 0), s(0, 1), s(1, 0), s(1, 1)]).unwrap();
        let chain = check_partial_measurement_chain(&e, [2, 2], &Povm::computational(2), &Povm::computational(2)).unwrap();
        assert!(chain.margin1.abs() < 1e-14 && chain.margin2.abs() < 1e-14);

        let trivial = check_partial_measurement_chain(&e, [2, 2], &Povm::trivial(2), &Povm::trivial(2)).unwrap();
        assert!(trivial.chi_both_measured.abs() < 1e-15);
        assert!(trivial.margin1 >= 0.0 && trivial.margin2 >= -1e-15);
    }

    #[test]
    fn chain_and_routes_on_random_instances() {
        let mut rng = RngState::new(4);
        for _ in 0..20 {
            let e = random_ensemble(4, 3, 2, &mut rng).unwrap();
            let m_a = random_povm(2, 3, &mut rng).unwrap();
            let m_b = random_povm(2, 2, &mut rng).unwrap();
            let chain = check_partial_measurement_chain(&e, [2, 2], &m_a, &m_b).unwrap();
            assert!(chain.margin1 >= -1e-9 && chain.margin2 >= -1e-9);

            let phi = random_cptp(4, 2, &mut rng).unwrap();
            assert!(check_holevo_routes(&e, &phi).unwrap().worst() >= -1e-9);
        }
    }

    #[test]
    fn concavity_route_equals_holevo_margin() {
        let mut rng = RngState::new(5);
        let e = random_ensemble(3, 3, 3, &mut rng).unwrap();
        let m = random_povm(3, 4, &mut rng).unwrap();
        let routes = check_holevo_routes(&e, &povm_channel(&m).unwrap()).unwrap();
        let bound = check_holevo_bound(&e, &m).unwrap();
        assert!((routes.concavity - bound.margin).abs() <= 1e-12);
    }

    #[test]
    fn ensemble_validation_and_json() {
        let s = DensityMatrix::maximally_mixed(2);
        assert!(Ensemble::new(vec![0.5, 0.6], vec![s.clone(), s.clone()]).is_err());
        assert!(Ensemble::new(vec![1.0, 0.0], vec![s.clone(), s.clone()]).is_err());
        assert!(Ensemble::new(vec![1.0], vec![]).is_err());
        assert!(Ensemble::new(vec![0.5, 0.5], vec![s, DensityMatrix::maximally_mixed(3)]).is_err());

        let e = orthogonal_pair();
        let text = serde_json::to_string(&EnsembleJson::from(&e)).unwrap();
        assert_eq!(Ensemble::from_json_str(&text).unwrap(), e);
    }
}
