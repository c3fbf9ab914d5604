use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Entries further than this from the unit circle are rejected by
/// [`PhaseShiftVector::from_complex`].
pub const UNIT_MODULUS_TOL: f64 = 1e-9;

/// IRS phase-shift vector: one unit-modulus coefficient per reflecting element.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseShiftVector(Vec<Complex64>);

impl PhaseShiftVector {
    /// `e^{jθ_n}` for each phase.
    pub fn from_phases(phases: &[f64]) -> Self {
        Self(
            phases
                .iter()
                .map(|&t| Complex64::from_polar(1.0, t))
                .collect(),
        )
    }

    /// Wraps complex coefficients, checking that each one has unit modulus.
    pub fn from_complex(values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidDims {
                dims: vec![0],
                reason: "phase-shift vector must not be empty",
            });
        }
        if let Some(bad) = values
            .iter()
            .find(|z| (z.norm() - 1.0).abs() > UNIT_MODULUS_TOL)
        {
            return Err(Error::InvalidConfig(format!(
                "phase-shift entry {bad} does not have unit modulus"
            )));
        }
        Ok(Self(values))
    }

    /// Keeps only the phase of every entry (`e^{j∠z}`); zeros map to 1.
    pub fn project(values: &[Complex64]) -> Self {
        Self(values.iter().map(|&z| unit_phase(z)).collect())
    }

    pub fn ones(n: usize) -> Self {
        Self(vec![Complex64::new(1.0, 0.0); n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn phases(&self) -> Vec<f64> {
        self.0.iter().map(|z| z.arg()).collect()
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }
}

impl AsRef<[Complex64]> for PhaseShiftVector {
    fn as_ref(&self) -> &[Complex64] {
        &self.0
    }
}

/// `z/|z|`, or 1 for `z = 0`.
#[inline]
pub fn unit_phase(z: Complex64) -> Complex64 {
    let r = z.norm();
    if r == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        z / r
    }
}
