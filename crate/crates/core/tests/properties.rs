//! Randomized invariants. Proptest draws a seed and a dimension; the objects
//! themselves come from the crate's generators so failures shrink to a seed.

use entropion::channels::KrausMap;
use entropion::entropy::{relative_entropy, von_neumann_entropy};
use entropion::holevo::chi;
use entropion::matcore::{partial_trace, tensor};
use entropion::randgen::{
    random_cptp, random_density, random_ensemble, random_full_rank, random_psd, random_unitary,
};
use entropion::superop::SuperOpSpec;
use entropion::{ComplexMatrix, Ensemble, HermitianMatrix, RngState};
use proptest::prelude::*;

fn rng(seed: u64) -> RngState {
    RngState::new(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partial_trace_undoes_tensor(seed: u64, da in 1usize..5, db in 1usize..5) {
        let mut r = rng(seed);
        let a = r.gaussian_matrix(da, da);
        let b = r.gaussian_matrix(db, db);
        let ab = tensor(&a, &b);
        let tol = 1e-11 * (1.0 + ab.max_norm());
        let left = partial_trace(&ab, &[da, db], &[0]).unwrap();
        let right = partial_trace(&ab, &[da, db], &[1]).unwrap();
        prop_assert!(left.max_diff(&a.scale_complex(b.trace())) <= tol);
        prop_assert!(right.max_diff(&b.scale_complex(a.trace())) <= tol);
        let full = partial_trace(&ab, &[da, db], &[]).unwrap();
        prop_assert!((full[(0, 0)] - ab.trace()).norm() <= tol);
    }

    #[test]
    fn resolvent_inverts_the_superoperator(seed: u64, d in 1usize..6, t in 0.0f64..20.0) {
        let mut r = rng(seed);
        let q = random_full_rank(d, &mut r).into_hermitian();
        let p = random_full_rank(d, &mut r).into_hermitian();
        let x = r.gaussian_matrix(d, d);
        let spec = SuperOpSpec::new(&q, &p, t).unwrap();
        let y = spec.solve_resolvent(&x).unwrap();
        let back = spec.apply(&y).unwrap();
        prop_assert!(back.max_diff(&x) <= 1e-9 * x.max_norm().max(1.0), "residual {}", back.max_diff(&x));
    }

    #[test]
    fn entropy_lies_between_zero_and_ln_d(seed: u64, d in 1usize..7) {
        let mut r = rng(seed);
        let rank = r.int_in(1, d);
        let rho = random_density(d, rank, &mut r).unwrap();
        let s = von_neumann_entropy(rho.as_hermitian()).unwrap();
        prop_assert!(s >= -1e-12);
        prop_assert!(s <= (rank as f64).ln() + 1e-10);
    }

    #[test]
    fn relative_entropy_of_states_is_nonnegative_and_unitarily_invariant(seed: u64, d in 2usize..6) {
        let mut r = rng(seed);
        let rho = random_density(d, r.int_in(1, d), &mut r).unwrap().into_hermitian();
        let gamma = random_full_rank(d, &mut r).into_hermitian();
        let h = relative_entropy(&rho, &gamma).unwrap().finite().unwrap();
        prop_assert!(h >= -1e-10);
        let u = random_unitary(d, &mut r);
        let hu = relative_entropy(&rho.congruence(&u).unwrap(), &gamma.congruence(&u).unwrap())
            .unwrap()
            .finite()
            .unwrap();
        prop_assert!((h - hu).abs() <= 1e-9, "{h} vs {hu}");
    }

    #[test]
    fn random_channels_map_states_to_states(seed: u64, d in 1usize..5, n in 1usize..5) {
        let mut r = rng(seed);
        let phi = random_cptp(d, n, &mut r).unwrap();
        prop_assert!(phi.tp_residual() <= 1e-12);
        let rho = random_density(d, r.int_in(1, d), &mut r).unwrap();
        let out = phi.apply_state(&rho).unwrap();
        prop_assert!((out.as_hermitian().trace_re() - 1.0).abs() <= 1e-12);
        prop_assert!(out.as_hermitian().check_psd(1e-12).is_ok());
    }

    #[test]
    fn holevo_quantity_is_bounded(seed: u64, d in 1usize..5, n in 1usize..5) {
        let mut r = rng(seed);
        let rank = r.int_in(1, d);
        let e = random_ensemble(d, n, rank, &mut r).unwrap();
        let c = chi(&e).unwrap();
        let h_weights: f64 = e.weights().iter().map(|w| -w * w.ln()).sum();
        prop_assert!(c >= -1e-10);
        prop_assert!(c <= (d as f64).ln() + 1e-10);
        prop_assert!(c <= h_weights + 1e-10);
    }

    #[test]
    fn matrix_json_round_trips_exactly(seed: u64, rows in 1usize..5, cols in 1usize..5) {
        let m = rng(seed).gaussian_matrix(rows, cols);
        prop_assert_eq!(ComplexMatrix::from_json_str(&m.to_json_string()).unwrap(), m);
    }

    #[test]
    fn psd_is_detected(seed: u64, d in 1usize..6) {
        let mut r = rng(seed);
        let p = random_psd(d, r.int_in(1, d), &mut r);
        prop_assert!(p.check_psd(1e-10).is_ok());
        let shifted = p.sub(&HermitianMatrix::identity(d).scale(p.trace_re() + 1.0)).unwrap();
        prop_assert!(shifted.check_psd(1e-10).is_err());
    }
}

#[test]
fn channel_and_ensemble_json_round_trip() {
    let mut r = rng(5);
    let phi = random_cptp(3, 2, &mut r).unwrap();
    let text = serde_json::to_string(&entropion::channels::ChannelJson::from(&phi)).unwrap();
    let back = KrausMap::from_json_str(&text).unwrap();
    assert_eq!(back.kraus(), phi.kraus());

    let e = random_ensemble(2, 3, 1, &mut r).unwrap();
    let text = serde_json::to_string(&entropion::holevo::EnsembleJson::from(&e)).unwrap();
    let back = Ensemble::from_json_str(&text).unwrap();
    assert_eq!(back.weights(), e.weights());
    assert_eq!(chi(&back).unwrap(), chi(&e).unwrap());
}
