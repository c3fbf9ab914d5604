//! Rician TX–IRS and IRS–RX channels with geometric line-of-sight parts.
//!
//! `H = √(αK/(K+1)) H_LOS + √(1/(K+1)) H_NLOS` and likewise for `G`, where the
//! NLOS parts are i.i.d. `CN(0, 1)`. The LOS parts are rank one:
//! `H_LOS = b_IRS a_TXᴴ` and `G_LOS = b_RX a_IRSᴴ`, the IRS steering vectors
//! being Kronecker products of a vertical and a horizontal factor. Path loss
//! is applied once, in the mixer.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{kron, ComplexMatrix};

/// Deterministic counter-based generator used for all channel draws.
pub type ChannelRng = ChaCha8Rng;

/// Independent substream for one Monte Carlo trial.
pub fn trial_rng(master_seed: u64, trial: u64) -> ChannelRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial);
    rng
}

/// Antenna counts, IRS grid and propagation angles (radians).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelGeometry {
    pub m_t: usize,
    pub m_r: usize,
    pub n_h: usize,
    pub n_v: usize,
    /// TX angle of departure.
    pub theta_tx: f64,
    /// RX angle of arrival.
    pub theta_rx: f64,
    pub irs_aoa_azimuth: f64,
    pub irs_aoa_elevation: f64,
    pub irs_aod_azimuth: f64,
    pub irs_aod_elevation: f64,
}

impl ChannelGeometry {
    pub fn n(&self) -> usize {
        self.n_h * self.n_v
    }

    pub fn validate(&self) -> Result<()> {
        if self.m_t == 0 || self.m_r == 0 || self.n_h == 0 || self.n_v == 0 {
            return Err(Error::InvalidConfig(
                "antenna and IRS counts must be positive".into(),
            ));
        }
        for az in [self.irs_aoa_azimuth, self.irs_aod_azimuth] {
            if !(-PI..=PI).contains(&az) {
                return Err(Error::InvalidConfig(format!(
                    "azimuth {az} outside [-π, π]"
                )));
            }
        }
        for el in [self.irs_aoa_elevation, self.irs_aod_elevation] {
            if !(0.0..=FRAC_PI_2).contains(&el) {
                return Err(Error::InvalidConfig(format!(
                    "elevation {el} outside [0, π/2]"
                )));
            }
        }
        Ok(())
    }
}

/// Rician factor (linear) and path-loss scalars.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RicianParams {
    pub k: f64,
    pub alpha_h: f64,
    pub alpha_g: f64,
}

impl RicianParams {
    /// `K` given in dB, unit path loss.
    pub fn from_db(k_db: f64) -> Self {
        Self {
            k: db_to_linear(k_db),
            alpha_h: 1.0,
            alpha_g: 1.0,
        }
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Half-wavelength ULA response `[1, e^{jπ sinθ}, .., e^{jπ(M-1) sinθ}]`.
pub fn steering_ula(angle: f64, m: usize) -> Vec<Complex64> {
    linear_phase(PI * angle.sin(), m)
}

/// IRS response `b_v ⊗ b_h` with horizontal phase step `π sinψ cosφ` and
/// vertical phase step `π cosφ`.
pub fn steering_irs(azimuth: f64, elevation: f64, n_h: usize, n_v: usize) -> Vec<Complex64> {
    let horizontal = linear_phase(PI * azimuth.sin() * elevation.cos(), n_h);
    let vertical = linear_phase(PI * elevation.cos(), n_v);
    kron(&vertical, &horizontal)
}

fn linear_phase(step: f64, m: usize) -> Vec<Complex64> {
    (0..m)
        .map(|i| Complex64::from_polar(1.0, step * i as f64))
        .collect()
}

/// `(H_LOS, G_LOS)`, of sizes `N × M_T` and `M_R × N`.
pub fn los_pair(geom: &ChannelGeometry) -> (ComplexMatrix, ComplexMatrix) {
    let a_tx = steering_ula(geom.theta_tx, geom.m_t);
    let b_rx = steering_ula(geom.theta_rx, geom.m_r);
    let b_irs = steering_irs(
        geom.irs_aoa_azimuth,
        geom.irs_aoa_elevation,
        geom.n_h,
        geom.n_v,
    );
    let a_irs = steering_irs(
        geom.irs_aod_azimuth,
        geom.irs_aod_elevation,
        geom.n_h,
        geom.n_v,
    );
    (
        ComplexMatrix::outer_conj(&b_irs, &a_tx),
        ComplexMatrix::outer_conj(&b_rx, &a_irs),
    )
}

/// Matrix of i.i.d. circularly-symmetric `CN(0, 1)` entries.
pub fn nlos_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
    })
}

/// `√(αK/(K+1)) los + √(1/(K+1)) nlos`.
pub fn rician_mix(los: &ComplexMatrix, nlos: &ComplexMatrix, k: f64, alpha: f64) -> ComplexMatrix {
    assert_eq!(
        (los.rows(), los.cols()),
        (nlos.rows(), nlos.cols()),
        "rician_mix: shape mismatch"
    );
    assert!(k >= 0.0, "Rician factor must be non-negative");
    let a = (alpha * k / (k + 1.0)).sqrt();
    let b = (1.0 / (k + 1.0)).sqrt();
    let data = los
        .data()
        .iter()
        .zip(nlos.data())
        .map(|(l, w)| l * a + w * b)
        .collect();
    ComplexMatrix::new(los.rows(), los.cols(), data).expect("shape checked")
}

/// One Rician draw around `los`.
pub fn rician_channel<R: Rng + ?Sized>(
    los: &ComplexMatrix,
    k: f64,
    alpha: f64,
    rng: &mut R,
) -> ComplexMatrix {
    let nlos = nlos_matrix(los.rows(), los.cols(), rng);
    rician_mix(los, &nlos, k, alpha)
}

/// Uniform azimuths on `[-π, π]`, uniform elevations on `[0, π/2]`; the TX
/// and RX ULA angles are drawn like azimuths.
pub fn sample_geometry<R: Rng + ?Sized>(
    rng: &mut R,
    m_t: usize,
    m_r: usize,
    n_h: usize,
    n_v: usize,
) -> ChannelGeometry {
    let mut azimuth = || rng.random_range(-PI..=PI);
    let theta_tx = azimuth();
    let theta_rx = azimuth();
    let irs_aoa_azimuth = azimuth();
    let irs_aod_azimuth = azimuth();
    let irs_aoa_elevation = rng.random_range(0.0..=FRAC_PI_2);
    let irs_aod_elevation = rng.random_range(0.0..=FRAC_PI_2);
    ChannelGeometry {
        m_t,
        m_r,
        n_h,
        n_v,
        theta_tx,
        theta_rx,
        irs_aoa_azimuth,
        irs_aoa_elevation,
        irs_aod_azimuth,
        irs_aod_elevation,
    }
}

/// The TX–IRS and IRS–RX channels of one realization.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelPair {
    /// `N × M_T`
    pub h: ComplexMatrix,
    /// `M_R × N`
    pub g: ComplexMatrix,
    pub geometry: ChannelGeometry,
    pub params: RicianParams,
}

/// Random parts of one trial, reusable across Rician factors.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub geometry: ChannelGeometry,
    pub h_los: ComplexMatrix,
    pub g_los: ComplexMatrix,
    pub h_nlos: ComplexMatrix,
    pub g_nlos: ComplexMatrix,
}

impl ChannelRealization {
    /// Draws the geometry, then `H_NLOS`, then `G_NLOS` from `rng`.
    pub fn sample<R: Rng + ?Sized>(
        rng: &mut R,
        m_t: usize,
        m_r: usize,
        n_h: usize,
        n_v: usize,
    ) -> Self {
        let geometry = sample_geometry(rng, m_t, m_r, n_h, n_v);
        let (h_los, g_los) = los_pair(&geometry);
        let h_nlos = nlos_matrix(geometry.n(), m_t, rng);
        let g_nlos = nlos_matrix(m_r, geometry.n(), rng);
        Self {
            geometry,
            h_los,
            g_los,
            h_nlos,
            g_nlos,
        }
    }

    pub fn channels(&self, params: RicianParams) -> ChannelPair {
        ChannelPair {
            h: rician_mix(&self.h_los, &self.h_nlos, params.k, params.alpha_h),
            g: rician_mix(&self.g_los, &self.g_nlos, params.k, params.alpha_g),
            geometry: self.geometry,
            params,
        }
    }
}
