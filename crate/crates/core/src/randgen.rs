//! Seeded, fully specified random instances.
//!
//! The generator is xorshift64* seeded through splitmix64, so the stream can
//! be reproduced in any language from this description:
//!
//! ```text
//! splitmix64(x):
//!     z = x + 0x9E3779B97F4A7C15            (wrapping)
//!     z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//!     z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//!     return z ^ (z >> 31)
//!
//! state(seed)          = splitmix64(seed), or 0x9E3779B97F4A7C15 if that is 0
//! state(seed, trial)   = state(seed ^ splitmix64(trial))
//!
//! next_u64():
//!     x ^= x >> 12;  x ^= x << 25;  x ^= x >> 27
//!     return x * 0x2545F4914F6CDD1D            (wrapping)
//!
//! uniform()  = (next_u64() >> 11) * 2^-53                  in [0, 1)
//! gaussian pair (Box-Muller): u1 = 1 - uniform(), u2 = uniform(),
//!     r = sqrt(-2 ln u1), (r cos 2 pi u2, r sin 2 pi u2)
//! complex gaussian = (r cos 2 pi u2 + i r sin 2 pi u2) / sqrt(2)
//! ```
//!
//! Complex Gaussian entries therefore have independent `N(0, 1/2)` real and
//! imaginary parts. Matrices are filled in row-major order.

use num_complex::Complex64;

use crate::channels::{KrausMap, Povm};
use crate::error::{Error, Result};
use crate::holevo::Ensemble;
use crate::matcore::{ComplexMatrix, DensityMatrix, HermitianMatrix, KernelPolicy};

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generator state: the originating seed and the number of words drawn.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RngState {
    seed: u64,
    position: u64,
    state: u64,
}

impl RngState {
    pub fn new(seed: u64) -> Self {
        let mut state = splitmix64(seed);
        if state == 0 {
            state = 0x9E37_79B9_7F4A_7C15;
        }
        Self {
            seed,
            position: 0,
            state,
        }
    }

    /// Independent child stream for one trial of a suite.
    pub fn for_trial(seed: u64, trial: u64) -> Self {
        Self::new(seed ^ splitmix64(trial))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn position(&self) -> u64 {
        self.position
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        self.position += 1;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer in `lo..=hi`.
    pub fn int_in(&mut self, lo: usize, hi: usize) -> usize {
        lo + (self.next_u64() % (hi - lo + 1) as u64) as usize
    }

    fn box_muller(&mut self) -> (f64, f64) {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
        (r * c, r * s)
    }

    /// Standard complex Gaussian: real and imaginary parts `N(0, 1/2)`.
    pub fn complex_gaussian(&mut self) -> Complex64 {
        let (a, b) = self.box_muller();
        Complex64::new(a, b) * std::f64::consts::FRAC_1_SQRT_2
    }

    pub fn gaussian_matrix(&mut self, rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols, |_, _| self.complex_gaussian())
    }

    pub fn gaussian_vector(&mut self, n: usize) -> Vec<Complex64> {
        (0..n).map(|_| self.complex_gaussian()).collect()
    }

    /// Weights drawn uniformly then normalized; entries below `1e-12` are
    /// clamped to zero and the rest renormalized.
    pub fn simplex(&mut self, n: usize) -> Vec<f64> {
        let raw: Vec<f64> = (0..n).map(|_| self.uniform()).collect();
        normalize_simplex(raw)
    }

    /// Dirichlet(1, ..., 1) weights via normalized exponentials; all positive.
    pub fn dirichlet(&mut self, n: usize) -> Vec<f64> {
        let raw: Vec<f64> = (0..n).map(|_| -(1.0 - self.uniform()).ln() + 1e-300).collect();
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|x| x / total).collect()
    }
}

fn normalize_simplex(mut w: Vec<f64>) -> Vec<f64> {
    let total: f64 = w.iter().sum();
    if total <= 0.0 {
        let n = w.len() as f64;
        return vec![1.0 / n; w.len()];
    }
    for x in &mut w {
        *x /= total;
        if *x < 1e-12 {
            *x = 0.0;
        }
    }
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}

/// Orthonormalizes columns in order with two passes of modified Gram-Schmidt.
/// Each column's diagonal coefficient ends up real positive.
pub(crate) fn orthonormal_columns(g: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (n, k) = g.shape();
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(k);
    for j in 0..k {
        let mut v = g.column(j);
        for _ in 0..2 {
            for q in &cols {
                let overlap: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= overlap * qi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return Err(Error::Singular);
        }
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    Ok(ComplexMatrix::from_fn(n, k, |i, j| cols[j][i]))
}

/// `G G^dag / Tr(G G^dag)` with `G` a `d x rank` complex Gaussian matrix.
pub fn random_density(d: usize, rank: usize, rng: &mut RngState) -> Result<DensityMatrix> {
    if rank == 0 || rank > d {
        return Err(Error::InvalidArgument(format!("rank {rank} outside 1..={d}")));
    }
    let g = rng.gaussian_matrix(d, rank);
    let gg = &g * &g.adjoint();
    let tr = gg.trace().re;
    Ok(DensityMatrix::new_unchecked(HermitianMatrix::from_hermitian_part(&gg.scale(1.0 / tr))))
}

/// Random full-rank density matrix.
pub fn random_full_rank(d: usize, rng: &mut RngState) -> DensityMatrix {
    random_density(d, d, rng).expect("rank d is valid")
}

/// Random PSD matrix `G G^dag` (not normalized).
pub fn random_psd(d: usize, rank: usize, rng: &mut RngState) -> HermitianMatrix {
    let g = rng.gaussian_matrix(d, rank.clamp(1, d));
    HermitianMatrix::from_hermitian_part(&(&g * &g.adjoint()))
}

/// Random unit vector of dimension `n`.
pub fn random_unit_vector(n: usize, rng: &mut RngState) -> Vec<Complex64> {
    let v = rng.gaussian_vector(n);
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Gram-Schmidt orthonormalization of a complex Gaussian matrix.
pub fn random_unitary(d: usize, rng: &mut RngState) -> ComplexMatrix {
    loop {
        let g = rng.gaussian_matrix(d, d);
        if let Ok(u) = orthonormal_columns(&g) {
            return u;
        }
    }
}

/// CPTP map from a random isometry `C^d -> C^(d n)` cut into `n` Kraus blocks
/// of `d` rows each.
pub fn random_cptp(d: usize, n_kraus: usize, rng: &mut RngState) -> Result<KrausMap> {
    if n_kraus == 0 || d == 0 {
        return Err(Error::InvalidArgument("counts must be positive".into()));
    }
    let v = loop {
        let g = rng.gaussian_matrix(d * n_kraus, d);
        if let Ok(v) = orthonormal_columns(&g) {
            break v;
        }
    };
    let kraus = (0..n_kraus)
        .map(|j| ComplexMatrix::from_fn(d, d, |r, c| v[(j * d + r, c)]))
        .collect();
    KrausMap::new(kraus)
}

/// POVM from random PSD effects `M_a`, normalized as `S^-1/2 M_a S^-1/2` with
/// `S = sum_a M_a`.
pub fn random_povm(d: usize, n_eff: usize, rng: &mut RngState) -> Result<Povm> {
    if n_eff == 0 || d == 0 {
        return Err(Error::InvalidArgument("counts must be positive".into()));
    }
    let raw: Vec<HermitianMatrix> = (0..n_eff).map(|_| random_psd(d, d, rng)).collect();
    let total = HermitianMatrix::weighted_sum(&vec![1.0; n_eff], &raw)?;
    let inv_sqrt = crate::matcore::matrix_function(&total, |x| 1.0 / x.sqrt(), KernelPolicy::default())?;
    let effects = raw
        .iter()
        .map(|m| m.congruence(&inv_sqrt))
        .collect::<Result<Vec<_>>>()?;
    Povm::new(effects)
}

/// Ensemble with Dirichlet-uniform weights and `random_density(d, rank)` members.
pub fn random_ensemble(d: usize, n: usize, rank: usize, rng: &mut RngState) -> Result<Ensemble> {
    if n == 0 {
        return Err(Error::InvalidArgument("ensemble needs at least one member".into()));
    }
    let weights = rng.dirichlet(n);
    let states = (0..n)
        .map(|_| random_density(d, rank, rng))
        .collect::<Result<Vec<_>>>()?;
    Ensemble::new(weights, states)
}
