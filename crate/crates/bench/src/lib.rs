//! Shared inputs for the benchmarks.

use irsfb_core::channel::{trial_rng, ChannelRealization, RicianParams};
use irsfb_core::{optimal_beamformers, PhaseShiftVector, PowerOptions};

/// Optimal phase-shift vector of one `side × side` Rician realization.
pub fn optimal_phases(side: usize, k_db: f64, seed: u64) -> PhaseShiftVector {
    let real = ChannelRealization::sample(&mut trial_rng(seed, 0), 2, 2, side, side);
    let pair = real.channels(RicianParams::from_db(k_db));
    optimal_beamformers(&pair.h, &pair.g, &PowerOptions::default())
        .expect("beamformers converge")
        .s_opt
}
