//! Seeded random sampling of cochains and small rationals, used by
//! property checks and by CLI commands that report on sampled data. All
//! sampling flows through a caller-provided RNG so reports are
//! reproducible from the seed.

use crate::complex::{staic_basis_size, Cochain};
use crate::matrix::Matrix;
use crate::rational::{rat, Rational};
use crate::tensor::{basis_size, Dims};
use rand::Rng;

/// Small random rational with numerator in `-4..=4` and denominator in
/// `1..=3`.
pub fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    rat(rng.random_range(-4..=4), rng.random_range(1..=3))
}

fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, density: f64) -> Matrix {
    let mut m = Matrix::zero(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            if rng.random_bool(density) {
                m.set(r, c, random_rational(rng));
            }
        }
    }
    m
}

/// Random degree-`n` cochain on the entwined basis.
pub fn random_cochain<R: Rng>(rng: &mut R, dims: Dims, target_dim: usize, n: usize) -> Cochain {
    Cochain {
        degree: n,
        coeffs: random_matrix(rng, target_dim, basis_size(dims, n), 0.5),
    }
}

/// Random degree-`n` cochain on the classical secondary basis (no
/// coalgebra factor).
pub fn random_staic_cochain<R: Rng>(
    rng: &mut R,
    dims: Dims,
    target_dim: usize,
    n: usize,
) -> Cochain {
    Cochain {
        degree: n,
        coeffs: random_matrix(rng, target_dim, staic_basis_size(dims, n), 0.5),
    }
}

/// Random vector with entries from [`random_rational`].
pub fn random_vector<R: Rng>(rng: &mut R, len: usize) -> Vec<Rational> {
    (0..len).map(|_| random_rational(rng)).collect()
}
