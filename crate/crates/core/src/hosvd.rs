//! Rank-one HOSVD of a tensorized phase-shift vector.
//!
//! Each factor is estimated independently from the dominant left singular
//! vector of the corresponding unfolding, then projected back onto the unit
//! circle. Dominant singular vectors come from power iteration on the smaller
//! Gram matrix of the unfolding.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::phase::{unit_phase, PhaseShiftVector};
use crate::tensor::{self, kron_chain_reversed, norm, ComplexMatrix};

/// Stopping rule for [`dominant_left_singular`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerOptions {
    /// Relative residual `‖MMᴴu − σ²u‖ / σ²` accepted as converged.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PowerOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 500,
        }
    }
}

/// Dominant singular triplet `M v = σ u`.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularTriplet {
    pub u: Vec<Complex64>,
    pub sigma: f64,
    pub v: Vec<Complex64>,
    /// Relative residual of `u` as an eigenvector of `MMᴴ`.
    pub residual: f64,
    pub iterations: usize,
}

/// Dominant left singular vector of `m`, unit norm, first nonzero entry real
/// and positive.
pub fn dominant_left_singular(m: &ComplexMatrix, opts: &PowerOptions) -> Result<Vec<Complex64>> {
    dominant_singular_triplet(m, opts).map(|t| t.u)
}

/// Dominant left and right singular vectors of `m` with consistent phases.
///
/// Iterates on `MMᴴ` when `m` is wide and on `MᴴM` when it is tall. The start
/// vector is the largest-norm column of `m` (of `mᴴ` when tall), lowest index
/// on ties; a rank-one `m` therefore converges before the first iteration.
pub fn dominant_singular_triplet(
    m: &ComplexMatrix,
    opts: &PowerOptions,
) -> Result<SingularTriplet> {
    if m.data().iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
        return Err(Error::ZeroMatrix);
    }
    let (mut u, iterations) = if m.rows() <= m.cols() {
        let start = largest_column(m);
        let (x, it) = dominant_eigvec(&m.gram(), start, opts)?;
        (x, it)
    } else {
        let mh = m.conj_transpose();
        let start = largest_column(&mh);
        let (v, it) = dominant_eigvec(&mh.gram(), start, opts)?;
        let mut u = m.mul_vec(&v);
        normalize(&mut u);
        (u, it)
    };
    canonicalize_phase(&mut u);

    let w = m.conj_mul_vec(&u);
    let sigma = norm(&w);
    let sigma2 = sigma * sigma;
    let mmhu = m.mul_vec(&w);
    let residual = mmhu
        .iter()
        .zip(&u)
        .map(|(a, b)| (a - b * sigma2).norm_sqr())
        .sum::<f64>()
        .sqrt()
        / sigma2;
    if residual.is_nan() || residual > opts.tol {
        return Err(Error::NotConverged {
            iterations,
            residual,
        });
    }
    let v = w.iter().map(|z| z / sigma).collect();
    Ok(SingularTriplet {
        u,
        sigma,
        v,
        residual,
        iterations,
    })
}

fn largest_column(m: &ComplexMatrix) -> Vec<Complex64> {
    let mut best = 0;
    let mut best_norm = -1.0;
    for c in 0..m.cols() {
        let n = norm(m.column(c));
        if n > best_norm {
            best = c;
            best_norm = n;
        }
    }
    m.column(best).to_vec()
}

/// Power iteration with a doubling schedule on a Hermitian PSD matrix.
///
/// Step `k` applies `A^(2^k)` to the iterate, with the power kept by repeated
/// squaring, so a spectral ratio `r` is resolved after about
/// `log2(log(tol)/log(r))` steps. Each step costs one squaring of `a`.
fn dominant_eigvec(
    a: &ComplexMatrix,
    start: Vec<Complex64>,
    opts: &PowerOptions,
) -> Result<(Vec<Complex64>, usize)> {
    let mut x = start;
    if normalize(&mut x) == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let mut power = a.clone();
    let mut residual = f64::INFINITY;
    for it in 0..=opts.max_iter {
        let ax = a.mul_vec(&x);
        let lambda = tensor::inner(&x, &ax).re;
        residual = ax
            .iter()
            .zip(&x)
            .map(|(y, xi)| (y - xi * lambda).norm_sqr())
            .sum::<f64>()
            .sqrt();
        // half the tolerance leaves room for rounding in the final check
        if lambda > 0.0 && residual <= 0.5 * opts.tol * lambda {
            return Ok((x, it));
        }
        if it == opts.max_iter {
            residual /= lambda.max(f64::MIN_POSITIVE);
            break;
        }
        let mut next = power.mul_vec(&x);
        if normalize(&mut next) == 0.0 {
            // the start vector missed the dominant subspace entirely
            next = largest_column(&power);
            if normalize(&mut next) == 0.0 {
                return Err(Error::ZeroMatrix);
            }
        }
        x = next;
        power = power.matmul(&power);
        let scale = power.data().iter().map(|z| z.norm()).fold(0.0, f64::max);
        if scale > 0.0 {
            power = power.scale(Complex64::new(1.0 / scale, 0.0));
        }
    }
    Err(Error::NotConverged {
        iterations: opts.max_iter,
        residual,
    })
}

fn normalize(x: &mut [Complex64]) -> f64 {
    let n = norm(x);
    if n > 0.0 {
        x.iter_mut().for_each(|z| *z /= n);
    }
    n
}

/// Rotates `x` so that its first non-negligible entry is real and positive.
fn canonicalize_phase(x: &mut [Complex64]) {
    let peak = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if let Some(first) = x.iter().find(|z| z.norm() > 1e-10 * peak) {
        let rot = unit_phase(*first).conj();
        x.iter_mut().for_each(|z| *z *= rot);
    }
}

/// Estimated rank-one factors `ŝ^(1) .. ŝ^(P)`, each with unit-modulus entries.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorSet {
    factors: Vec<Vec<Complex64>>,
}

impl FactorSet {
    pub fn new(factors: Vec<Vec<Complex64>>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::EmptyFactors);
        }
        for f in &factors {
            if f.is_empty() {
                return Err(Error::InvalidDims {
                    dims: factors.iter().map(Vec::len).collect(),
                    reason: "every factor must be non-empty",
                });
            }
            if f.iter()
                .any(|z| (z.norm() - 1.0).abs() > crate::phase::UNIT_MODULUS_TOL)
            {
                return Err(Error::InvalidConfig(
                    "factor entries must have unit modulus".into(),
                ));
            }
        }
        Ok(Self { factors })
    }

    pub fn factors(&self) -> &[Vec<Complex64>] {
        &self.factors
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(Vec::len).collect()
    }

    /// `ŝ^(P) ⊗ .. ⊗ ŝ^(1)`.
    pub fn reconstruct(&self) -> PhaseShiftVector {
        PhaseShiftVector::project(&kron_chain_reversed(&self.factors))
    }

    /// `‖𝒮 − ŝ^(1) ∘ .. ∘ ŝ^(P)‖_F` for the tensorized vector `s`.
    pub fn approximation_error(&self, s: &PhaseShiftVector) -> Result<f64> {
        let approx = kron_chain_reversed(&self.factors);
        if approx.len() != s.len() {
            return Err(Error::DimensionMismatch {
                expected: approx.len(),
                got: s.len(),
            });
        }
        Ok(s.as_slice()
            .iter()
            .zip(&approx)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }
}

/// Rank-one approximation of the phase-shift vector `s` tensorized with `dims`.
///
/// Factor `p` is `e^{j∠u_p}` where `u_p` is the dominant left singular vector
/// of the mode-`p` unfolding, rotated so that its first entry is 1.
pub fn factorize_phases(
    s: &PhaseShiftVector,
    dims: &[usize],
    opts: &PowerOptions,
) -> Result<FactorSet> {
    let t = tensor::tensorize(s.as_slice(), dims)?;
    let factors = (0..dims.len())
        .map(|mode| {
            let unfolding = tensor::unfold(&t, mode)?;
            let u = dominant_left_singular(&unfolding, opts)?;
            let mut f: Vec<Complex64> = u.into_iter().map(unit_phase).collect();
            let rot = f[0].conj();
            f.iter_mut().for_each(|z| *z *= rot);
            Ok(f)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FactorSet { factors })
}

/// Global-phase-invariant fit `|sᴴ ŝ| / N`.
pub fn correlation_fidelity(s: &PhaseShiftVector, s_hat: &PhaseShiftVector) -> Result<f64> {
    if s.len() != s_hat.len() {
        return Err(Error::DimensionMismatch {
            expected: s.len(),
            got: s_hat.len(),
        });
    }
    let f = tensor::inner(s.as_slice(), s_hat.as_slice()).norm() / s.len() as f64;
    Ok(f.min(1.0))
}
