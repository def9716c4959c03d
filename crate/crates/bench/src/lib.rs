//! Shared fixtures for the benchmarks.

use entropion::randgen::random_full_rank;
use entropion::{ComplexMatrix, HermitianMatrix, RngState};

pub const FIXTURE_SEED: u64 = 0xbe7c4;

/// Dimensions benchmarked for every routine.
pub const DIMS: [usize; 3] = [2, 4, 8];

/// A full-rank density pair and a Gaussian right-hand side of dimension `d`.
pub struct Fixture {
    pub p: HermitianMatrix,
    pub q: HermitianMatrix,
    pub x: ComplexMatrix,
}

impl Fixture {
    pub fn new(d: usize) -> Self {
        let mut rng = RngState::for_trial(FIXTURE_SEED, d as u64);
        Self {
            p: random_full_rank(d, &mut rng).into_hermitian(),
            q: random_full_rank(d, &mut rng).into_hermitian(),
            x: rng.gaussian_matrix(d, d),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_reproducible() {
        let a = Fixture::new(4);
        let b = Fixture::new(4);
        assert_eq!(a.p.as_matrix(), b.p.as_matrix());
        assert_eq!(a.x, b.x);
        assert_eq!(a.q.dim(), 4);
    }
}
