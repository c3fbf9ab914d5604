//! Upper-bound active/passive beamformers and achievable data rate.
//!
//! With `w` the dominant left singular vector of `G` and `q` the dominant
//! right singular vector of `H`, the cascade `wᴴ G diag(s) H q` equals
//! `σ_G σ_H Σ_n conj(v_G,n) s_n u_H,n`, which `s_n = e^{-j∠(conj(v_G,n) u_H,n)}`
//! maximizes in magnitude.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hosvd::{dominant_singular_triplet, PowerOptions};
use crate::phase::{unit_phase, PhaseShiftVector};
use crate::tensor::ComplexMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct BeamformerSet {
    /// RX combiner, length `M_R`.
    pub w: Vec<Complex64>,
    /// TX precoder, length `M_T`.
    pub q: Vec<Complex64>,
    pub s_opt: PhaseShiftVector,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalParams {
    pub noise_var: f64,
}

impl Default for EvalParams {
    fn default() -> Self {
        Self { noise_var: 0.1 }
    }
}

pub fn optimal_beamformers(
    h: &ComplexMatrix,
    g: &ComplexMatrix,
    opts: &PowerOptions,
) -> Result<BeamformerSet> {
    if g.cols() != h.rows() {
        return Err(Error::DimensionMismatch {
            expected: h.rows(),
            got: g.cols(),
        });
    }
    let tg = dominant_singular_triplet(g, opts)?;
    // left vector of Hᴴ is the right vector of H; its partner is Hq/σ
    let th = dominant_singular_triplet(&h.conj_transpose(), opts)?;
    let s_opt =
        tg.v.iter()
            .zip(&th.v)
            .map(|(vg, uh)| unit_phase(vg.conj() * uh).conj())
            .collect::<Vec<_>>();
    Ok(BeamformerSet {
        w: tg.u,
        q: th.u,
        s_opt: PhaseShiftVector::project(&s_opt),
    })
}

/// Per-element cascade gains `c_n = (wᴴG)_n (Hq)_n`, so that
/// `wᴴ G diag(s) H q = Σ_n c_n s_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CascadeGains(Vec<Complex64>);

impl CascadeGains {
    pub fn new(
        h: &ComplexMatrix,
        g: &ComplexMatrix,
        w: &[Complex64],
        q: &[Complex64],
    ) -> Result<Self> {
        if g.cols() != h.rows() {
            return Err(Error::DimensionMismatch {
                expected: h.rows(),
                got: g.cols(),
            });
        }
        if w.len() != g.rows() {
            return Err(Error::DimensionMismatch {
                expected: g.rows(),
                got: w.len(),
            });
        }
        if q.len() != h.cols() {
            return Err(Error::DimensionMismatch {
                expected: h.cols(),
                got: q.len(),
            });
        }
        let wg = g.conj_mul_vec(w);
        let hq = h.mul_vec(q);
        Ok(Self(
            wg.iter().zip(&hq).map(|(a, b)| a.conj() * b).collect(),
        ))
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    /// `wᴴ G diag(s) H q`.
    pub fn cascade(&self, s: &PhaseShiftVector) -> Result<Complex64> {
        if s.len() != self.0.len() {
            return Err(Error::DimensionMismatch {
                expected: self.0.len(),
                got: s.len(),
            });
        }
        Ok(self.0.iter().zip(s.as_slice()).map(|(c, z)| c * z).sum())
    }

    pub fn adr(&self, s: &PhaseShiftVector, params: &EvalParams) -> Result<f64> {
        Ok(rate_from_cascade(self.cascade(s)?, params))
    }
}

/// `log2(1 + |cascade|² / σ²)`.
pub fn rate_from_cascade(cascade: Complex64, params: &EvalParams) -> f64 {
    (1.0 + cascade.norm_sqr() / params.noise_var).log2()
}

/// Achievable data rate `log2(1 + |wᴴ G diag(s) H q|² / σ²)` in bit/s/Hz.
pub fn adr(
    h: &ComplexMatrix,
    g: &ComplexMatrix,
    w: &[Complex64],
    q: &[Complex64],
    s: &PhaseShiftVector,
    params: &EvalParams,
) -> Result<f64> {
    CascadeGains::new(h, g, w, q)?.adr(s, params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn adr_examples() {
        let p = EvalParams::default();
        assert_eq!(rate_from_cascade(c(0.0, 0.0), &p), 0.0);
        assert!((rate_from_cascade(c(0.6, 0.8), &p) - 11f64.log2()).abs() < 1e-12);
        assert!((11f64.log2() - 3.4594).abs() < 1e-4);
    }

    #[test]
    fn siso_beamformers() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let n = 12;
        let g_row: Vec<Complex64> = (0..n)
            .map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        let h_col: Vec<Complex64> = (0..n)
            .map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        let g = ComplexMatrix::new(1, n, g_row.clone()).unwrap();
        let h = ComplexMatrix::new(n, 1, h_col.clone()).unwrap();
        let bf = optimal_beamformers(&h, &g, &PowerOptions::default()).unwrap();
        assert!((bf.w[0] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((bf.q[0] - c(1.0, 0.0)).norm() < 1e-12);
        for i in 0..n {
            let expected = unit_phase(g_row[i] * h_col[i]).conj();
            assert!((bf.s_opt.as_slice()[i] - expected).norm() < 1e-10);
        }
        let gains = CascadeGains::new(&h, &g, &bf.w, &bf.q).unwrap();
        let mag = gains.cascade(&bf.s_opt).unwrap().norm();
        let bound: f64 = g_row
            .iter()
            .zip(&h_col)
            .map(|(a, b)| a.norm() * b.norm())
            .sum();
        assert!((mag - bound).abs() <= 1e-10 * bound);
    }

    #[test]
    fn global_phase_of_g_does_not_change_rate() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let h = ComplexMatrix::from_fn(8, 2, |_, _| {
            c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let g = ComplexMatrix::from_fn(3, 8, |_, _| {
            c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let p = EvalParams::default();
        let bf = optimal_beamformers(&h, &g, &PowerOptions::default()).unwrap();
        let r0 = adr(&h, &g, &bf.w, &bf.q, &bf.s_opt, &p).unwrap();
        let g2 = g.scale(Complex64::from_polar(1.0, 0.77));
        let bf2 = optimal_beamformers(&h, &g2, &PowerOptions::default()).unwrap();
        let r1 = adr(&h, &g2, &bf2.w, &bf2.q, &bf2.s_opt, &p).unwrap();
        assert!((r0 - r1).abs() < 1e-10);
    }

    #[test]
    fn dimension_checks() {
        let h = ComplexMatrix::zeros(4, 2);
        let g = ComplexMatrix::zeros(2, 5);
        assert!(matches!(
            optimal_beamformers(&h, &g, &PowerOptions::default()),
            Err(Error::DimensionMismatch { .. })
        ));
        let g = ComplexMatrix::zeros(2, 4);
        assert!(CascadeGains::new(&h, &g, &[c(1.0, 0.0)], &[c(1.0, 0.0); 2]).is_err());
        let gains = CascadeGains::new(&h, &g, &[c(1.0, 0.0); 2], &[c(1.0, 0.0); 2]).unwrap();
        assert!(gains.cascade(&PhaseShiftVector::ones(3)).is_err());
    }
}
