//! Quantized feedback of factorized phase-shift vectors.
//!
//! A [`FeedbackMessage`] carries, for each factor `p`, `N_p` codepoint indices
//! of `b_p` bits on the uniform phase grid `e^{j2πk/2^b}`. Its binary layout
//! is, in order:
//!
//! | field            | encoding                                        |
//! |------------------|-------------------------------------------------|
//! | `P`              | `u8`                                            |
//! | `N_1 .. N_P`     | `u32` little-endian each                        |
//! | `b_1 .. b_P`     | `u8` each                                       |
//! | factor 1 indices | `N_1` codepoints of `b_1` bits, LSB-first       |
//! | ...              | each factor starts on a byte boundary           |
//!
//! Padding bits at the end of a factor must be zero. The codepoint section
//! carries exactly [`payload_bits`] bits plus padding.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hosvd::{factorize_phases, PowerOptions};
use crate::phase::PhaseShiftVector;
use crate::tensor::kron_chain_reversed;

/// Largest supported per-factor resolution.
pub const MAX_BITS: u8 = 16;

/// Number of factors `P`, their sizes `N_p` and resolutions `b_p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawConfig", into = "RawConfig")]
pub struct FactorizationConfig {
    dims: Vec<usize>,
    bits: Vec<u8>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    dims: Vec<usize>,
    bits: Vec<u8>,
}

impl TryFrom<RawConfig> for FactorizationConfig {
    type Error = Error;
    fn try_from(raw: RawConfig) -> Result<Self> {
        Self::new(raw.dims, raw.bits)
    }
}

impl From<FactorizationConfig> for RawConfig {
    fn from(c: FactorizationConfig) -> Self {
        RawConfig {
            dims: c.dims,
            bits: c.bits,
        }
    }
}

impl FactorizationConfig {
    pub fn new(dims: Vec<usize>, bits: Vec<u8>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidConfig(
                "at least one factor is required".into(),
            ));
        }
        if dims.len() > u8::MAX as usize {
            return Err(Error::InvalidConfig(format!(
                "too many factors ({})",
                dims.len()
            )));
        }
        if dims.len() != bits.len() {
            return Err(Error::InvalidConfig(format!(
                "dims {} has {} factors but bits {} has {}",
                join_x(&dims),
                dims.len(),
                join_x(&bits),
                bits.len()
            )));
        }
        if dims.iter().any(|&d| d == 0 || d > u32::MAX as usize) {
            return Err(Error::InvalidConfig(format!(
                "dims {} has an invalid factor size",
                join_x(&dims)
            )));
        }
        if bits.iter().any(|&b| b == 0 || b > MAX_BITS) {
            return Err(Error::InvalidConfig(format!(
                "bits {} outside 1..={MAX_BITS} for dims {}",
                join_x(&bits),
                join_x(&dims)
            )));
        }
        Ok(Self { dims, bits })
    }

    /// Same resolution for every factor.
    pub fn uniform(dims: Vec<usize>, bits: u8) -> Result<Self> {
        let b = vec![bits; dims.len()];
        Self::new(dims, b)
    }

    /// Checks that the factor sizes multiply to `n`.
    pub fn check_size(&self, n: usize) -> Result<()> {
        if self.n() != n {
            return Err(Error::InvalidConfig(format!(
                "dims {} multiply to {} but the surface has {n} elements",
                join_x(&self.dims),
                self.n()
            )));
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn n(&self) -> usize {
        self.dims.iter().product()
    }

    /// Number of fed-back phase shifts, `Σ N_p`.
    pub fn sum_dims(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Short label such as `p3_64x8x2_b3x3x3`.
    pub fn label(&self) -> String {
        format!(
            "p{}_{}_b{}",
            self.order(),
            join_x(&self.dims),
            join_x(&self.bits)
        )
    }
}

pub(crate) fn join_x<T: ToString>(v: &[T]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("x")
}

/// Quantized factors as codepoint indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeedbackMessage {
    pub config: FactorizationConfig,
    pub indices: Vec<Vec<u32>>,
}

impl FeedbackMessage {
    pub fn validate(&self) -> Result<()> {
        if self.indices.len() != self.config.order() {
            return Err(Error::MalformedMessage(format!(
                "{} index arrays for {} factors",
                self.indices.len(),
                self.config.order()
            )));
        }
        for (p, ((idx, &n), &b)) in self
            .indices
            .iter()
            .zip(self.config.dims())
            .zip(self.config.bits())
            .enumerate()
        {
            if idx.len() != n {
                return Err(Error::MalformedMessage(format!(
                    "factor {p} has {} codepoints, expected {n}",
                    idx.len()
                )));
            }
            if let Some(&bad) = idx.iter().find(|&&k| u64::from(k) >= 1u64 << b) {
                return Err(Error::InvalidCodepoint {
                    factor: p,
                    index: bad,
                    bits: b,
                });
            }
        }
        Ok(())
    }

    /// Number of codepoints carried (`Σ N_p`).
    pub fn codepoints(&self) -> usize {
        self.indices.iter().map(Vec::len).sum()
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        self.validate()?;
        let cfg = &self.config;
        let mut out =
            Vec::with_capacity(1 + 5 * cfg.order() + payload_bits(cfg) as usize / 8 + cfg.order());
        out.push(cfg.order() as u8);
        for &d in cfg.dims() {
            out.extend_from_slice(&(d as u32).to_le_bytes());
        }
        out.extend_from_slice(cfg.bits());
        for (idx, &b) in self.indices.iter().zip(cfg.bits()) {
            let mut acc: u64 = 0;
            let mut filled = 0u32;
            for &k in idx {
                acc |= u64::from(k) << filled;
                filled += u32::from(b);
                while filled >= 8 {
                    out.push(acc as u8);
                    acc >>= 8;
                    filled -= 8;
                }
            }
            if filled > 0 {
                out.push(acc as u8);
            }
        }
        Ok(out)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let truncated = || Error::MalformedMessage("message truncated".into());
        let (&p, mut rest) = bytes.split_first().ok_or_else(truncated)?;
        let p = p as usize;
        if rest.len() < 5 * p {
            return Err(truncated());
        }
        let mut dims = Vec::with_capacity(p);
        for chunk in rest[..4 * p].chunks_exact(4) {
            dims.push(u32::from_le_bytes(chunk.try_into().unwrap()) as usize);
        }
        let bits = rest[4 * p..5 * p].to_vec();
        rest = &rest[5 * p..];
        let config = FactorizationConfig::new(dims, bits)
            .map_err(|e| Error::MalformedMessage(e.to_string()))?;

        let mut indices = Vec::with_capacity(p);
        for (&n, &b) in config.dims().iter().zip(config.bits()) {
            let nbytes = (n * b as usize).div_ceil(8);
            if rest.len() < nbytes {
                return Err(truncated());
            }
            let (chunk, tail) = rest.split_at(nbytes);
            rest = tail;
            let mask = (1u64 << b) - 1;
            let mut idx = Vec::with_capacity(n);
            let mut acc: u64 = 0;
            let mut avail = 0u32;
            let mut bytes_iter = chunk.iter();
            for _ in 0..n {
                while avail < u32::from(b) {
                    acc |= u64::from(*bytes_iter.next().ok_or_else(truncated)?) << avail;
                    avail += 8;
                }
                idx.push((acc & mask) as u32);
                acc >>= b;
                avail -= u32::from(b);
            }
            if acc != 0 {
                return Err(Error::MalformedMessage("nonzero padding bits".into()));
            }
            indices.push(idx);
        }
        if !rest.is_empty() {
            return Err(Error::MalformedMessage(format!(
                "{} trailing bytes",
                rest.len()
            )));
        }
        let msg = Self { config, indices };
        msg.validate()?;
        Ok(msg)
    }

    /// Human-readable JSON form of the message.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("message serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let msg: Self =
            serde_json::from_str(text).map_err(|e| Error::MalformedMessage(e.to_string()))?;
        msg.validate()?;
        Ok(msg)
    }
}

/// Point `k` of the `bits`-bit phase grid, `e^{j2πk/2^bits}`.
///
/// Quarter-turn points are returned exactly.
pub fn codepoint(k: u32, bits: u8) -> Complex64 {
    let levels = 1u64 << bits;
    let k = u64::from(k) % levels;
    if (4 * k).is_multiple_of(levels) {
        match 4 * k / levels {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    } else {
        Complex64::from_polar(1.0, TAU * k as f64 / levels as f64)
    }
}

/// Nearest-codepoint quantization of a unit-modulus vector on the uniform
/// `bits`-bit grid anchored at phase 0. Ties go to the lower index.
pub fn quantize_factor(f: &[Complex64], bits: u8) -> (Vec<u32>, Vec<Complex64>) {
    assert!(
        (1..=MAX_BITS).contains(&bits),
        "bits must be in 1..={MAX_BITS}"
    );
    let levels = 1u32 << bits;
    let lf = f64::from(levels);
    let indices: Vec<u32> = f
        .iter()
        .map(|z| {
            let t = (z.arg() / TAU * lf).rem_euclid(lf);
            let below = t.floor();
            let lo = (below as u32) % levels;
            let hi = (lo + 1) % levels;
            let frac = t - below;
            if frac < 0.5 {
                lo
            } else if frac > 0.5 {
                hi
            } else {
                lo.min(hi)
            }
        })
        .collect();
    let tilde = indices.iter().map(|&k| codepoint(k, bits)).collect();
    (indices, tilde)
}

/// Tensorize, factorize and quantize `s` according to `config`.
pub fn encode(
    s: &PhaseShiftVector,
    config: &FactorizationConfig,
    opts: &PowerOptions,
) -> Result<FeedbackMessage> {
    config.check_size(s.len())?;
    let factors = factorize_phases(s, config.dims(), opts)?;
    let indices = factors
        .factors()
        .iter()
        .zip(config.bits())
        .map(|(f, &b)| quantize_factor(f, b).0)
        .collect();
    Ok(FeedbackMessage {
        config: config.clone(),
        indices,
    })
}

/// Rebuilds `s̃^(P) ⊗ .. ⊗ s̃^(1)` from the codepoints.
pub fn decode(msg: &FeedbackMessage) -> Result<PhaseShiftVector> {
    msg.validate()?;
    let factors: Vec<Vec<Complex64>> = msg
        .indices
        .iter()
        .zip(msg.config.bits())
        .map(|(idx, &b)| idx.iter().map(|&k| codepoint(k, b)).collect())
        .collect();
    Ok(PhaseShiftVector::project(&kron_chain_reversed(&factors)))
}

/// Codepoint bits of the factorized feedback, `Σ N_p b_p` (preamble excluded).
pub fn payload_bits(config: &FactorizationConfig) -> u64 {
    config
        .dims()
        .iter()
        .zip(config.bits())
        .map(|(&n, &b)| n as u64 * u64::from(b))
        .sum()
}

/// Bits needed to feed back every one of `n` phases at `bits` resolution.
pub fn baseline_payload_bits(n: usize, bits: u8) -> u64 {
    n as u64 * u64::from(bits)
}

/// Element-count compression factor `N / Σ N_p`.
pub fn payload_ratio(config: &FactorizationConfig) -> f64 {
    config.n() as f64 / config.sum_dims() as f64
}

/// Control link used to carry the feedback.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeedbackLink {
    pub bandwidth_hz: f64,
    pub power_w: f64,
    /// `|g_F|²`
    pub channel_gain: f64,
    /// W/Hz
    pub noise_density: f64,
    /// Preamble announcing the factorization parameters.
    pub preamble_bits: u64,
    /// Per-phase resolution of unfactorized feedback.
    pub baseline_bits: u8,
}

impl FeedbackLink {
    pub fn new(
        bandwidth_hz: f64,
        power_w: f64,
        channel_gain: f64,
        noise_density: f64,
        preamble_bits: u64,
        baseline_bits: u8,
    ) -> Result<Self> {
        let link = Self {
            bandwidth_hz,
            power_w,
            channel_gain,
            noise_density,
            preamble_bits,
            baseline_bits,
        };
        link.validate()?;
        Ok(link)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("bandwidth", self.bandwidth_hz),
            ("power", self.power_w),
            ("channel gain", self.channel_gain),
            ("noise density", self.noise_density),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "feedback link {name} must be positive, got {v}"
                )));
            }
        }
        if self.baseline_bits == 0 {
            return Err(Error::InvalidConfig(
                "baseline resolution must be at least one bit".into(),
            ));
        }
        Ok(())
    }

    /// Shannon rate of the control link in bit/s, `B log2(1 + p|g|²/(B N0))`.
    pub fn rate(&self) -> f64 {
        let snr = self.power_w * self.channel_gain / (self.bandwidth_hz * self.noise_density);
        self.bandwidth_hz * (1.0 + snr).log2()
    }

    /// Duration of unfactorized feedback for `n` elements.
    pub fn baseline_duration(&self, n: usize) -> Result<f64> {
        feedback_duration(baseline_payload_bits(n, self.baseline_bits), self, false)
    }

    /// Duration of factorized feedback, preamble included.
    pub fn proposed_duration(&self, config: &FactorizationConfig) -> Result<f64> {
        feedback_duration(payload_bits(config), self, true)
    }
}

/// Seconds needed to send `payload_bits` (plus the preamble when asked) over `link`.
pub fn feedback_duration(
    payload_bits: u64,
    link: &FeedbackLink,
    include_preamble: bool,
) -> Result<f64> {
    link.validate()?;
    let preamble = if include_preamble {
        link.preamble_bits
    } else {
        0
    };
    Ok((preamble + payload_bits) as f64 / link.rate())
}

/// Every ordered factorization `n = N_1 .. N_P` with all `N_p ≥ 2`.
///
/// `n = 1` yields the single factorization `[1]`.
pub fn ordered_factorizations(n: usize) -> Vec<Vec<usize>> {
    fn rec(rem: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rem == 1 {
            out.push(prefix.clone());
            return;
        }
        for d in 2..=rem {
            if rem.is_multiple_of(d) {
                prefix.push(d);
                rec(rem / d, prefix, out);
                prefix.pop();
            }
        }
    }
    assert!(n >= 1);
    if n == 1 {
        return vec![vec![1]];
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::new(), &mut out);
    out
}

/// Factorizations with non-increasing factor sizes, ordered by `P` then
/// lexicographically descending.
pub fn sorted_factorizations(n: usize) -> Vec<Vec<usize>> {
    let mut all: Vec<Vec<usize>> = ordered_factorizations(n)
        .into_iter()
        .filter(|d| d.windows(2).all(|w| w[0] >= w[1]))
        .collect();
    all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| b.cmp(a)));
    all
}
