//! Overhead-aware feedback of IRS phase-shift vectors.
//!
//! An `N`-element phase-shift vector is reshaped into an order-`P` tensor,
//! approximated by a rank-one tensor whose factors are recovered with a
//! per-mode dominant singular vector (rank-one HOSVD), and only the `Σ N_p`
//! quantized factor phases are fed back. The IRS controller rebuilds the full
//! vector as the Kronecker product of the factors.
//!
//! Modules:
//! - [`tensor`]: tensor/matrix containers, tensorization, unfoldings, Kronecker products
//! - [`hosvd`]: power iteration and rank-one factor estimation
//! - [`codec`]: quantization, feedback messages, payload and duration accounting
//! - [`channel`]: Rician channels with geometric LOS components
//! - [`beamform`]: upper-bound beamformers and achievable data rate
//! - [`sim`]: Monte Carlo experiments producing CSV sweeps

pub mod beamform;
pub mod channel;
pub mod codec;
pub mod error;
pub mod hosvd;
pub mod phase;
pub mod sim;
pub mod tensor;

pub use beamform::{adr, optimal_beamformers, BeamformerSet, CascadeGains, EvalParams};
pub use channel::{ChannelGeometry, ChannelPair, ChannelRealization, RicianParams};
pub use codec::{
    decode, encode, feedback_duration, payload_bits, payload_ratio, FactorizationConfig,
    FeedbackLink, FeedbackMessage,
};
pub use error::{Error, Result};
pub use hosvd::{
    correlation_fidelity, dominant_left_singular, factorize_phases, FactorSet, PowerOptions,
};
pub use num_complex::Complex64;
pub use phase::PhaseShiftVector;
pub use tensor::{ComplexMatrix, ComplexTensor};
