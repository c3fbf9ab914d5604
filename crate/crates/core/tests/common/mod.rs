#![allow(dead_code)]

use std::f64::consts::PI;

use irsfb_core::tensor::kron_chain_reversed;
use irsfb_core::{Complex64, ComplexMatrix, PhaseShiftVector};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

pub fn random_phases(rng: &mut impl Rng, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::from_polar(1.0, rng.random_range(-PI..PI)))
        .collect()
}

/// Phases restricted to the `bits`-resolution grid.
pub fn grid_phases(rng: &mut impl Rng, n: usize, bits: u8) -> Vec<Complex64> {
    let levels = 1u32 << bits;
    (0..n)
        .map(|_| {
            let k = rng.random_range(0..levels);
            Complex64::from_polar(1.0, 2.0 * PI * k as f64 / levels as f64)
        })
        .collect()
}

pub fn separable(factors: &[Vec<Complex64>]) -> PhaseShiftVector {
    PhaseShiftVector::project(&kron_chain_reversed(factors))
}

pub fn to_nalgebra(m: &ComplexMatrix) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.rows(), m.cols(), |r, c| m.get(r, c))
}

/// Dominant eigenvector of `M Mᴴ` from a dense Hermitian eigensolver.
pub fn oracle_dominant_left(m: &ComplexMatrix) -> Vec<Complex64> {
    let a = to_nalgebra(m);
    let gram = &a * a.adjoint();
    let eig = gram.symmetric_eigen();
    let best = eig.eigenvalues.imax();
    eig.eigenvectors.column(best).iter().copied().collect()
}

/// Singular values, largest first.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let mut sv: Vec<f64> = to_nalgebra(m).singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

pub fn numerical_rank(m: &ComplexMatrix, rel_tol: f64) -> usize {
    let sv = singular_values(m);
    let top = sv.first().copied().unwrap_or(0.0);
    sv.iter().filter(|&&s| s > rel_tol * top).count()
}

pub fn abs_correlation(a: &[Complex64], b: &[Complex64]) -> f64 {
    let dot: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    let na: f64 = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    dot.norm() / (na * nb)
}
