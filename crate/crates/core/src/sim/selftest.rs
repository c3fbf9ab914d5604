//! Quick end-to-end sanity checks run by the `selftest` subcommand.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::beamform::{optimal_beamformers, CascadeGains};
use crate::channel::trial_rng;
use crate::codec::{self, ordered_factorizations, payload_ratio, FactorizationConfig};
use crate::hosvd::{correlation_fidelity, factorize_phases, PowerOptions};
use crate::phase::PhaseShiftVector;
use crate::tensor::{kron_chain_reversed, ComplexMatrix};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

pub fn run_selftest(seed: u64) -> Vec<Check> {
    vec![
        payload_check(),
        recovery_check(seed),
        siso_check(seed),
        codec_check(),
    ]
}

fn payload_check() -> Check {
    let pr = |dims: Vec<usize>| payload_ratio(&FactorizationConfig::uniform(dims, 3).unwrap());
    let r2 = pr(vec![32, 32]);
    let r10 = pr(vec![2; 10]);
    let sum = FactorizationConfig::uniform(vec![64, 8, 2], 3)
        .unwrap()
        .sum_dims();
    Check {
        name: "payload ratios",
        passed: r2 == 16.0 && r10 == 51.2 && sum == 74,
        detail: format!("PR[32,32]={r2}, PR[2^10]={r10}, sum[64,8,2]={sum}"),
    }
}

fn recovery_check(seed: u64) -> Check {
    let mut rng = trial_rng(seed, 0);
    let opts = PowerOptions::default();
    let mut worst = 1.0f64;
    for dims in ordered_factorizations(64) {
        let factors: Vec<Vec<Complex64>> = dims
            .iter()
            .map(|&n| {
                (0..n)
                    .map(|_| Complex64::from_polar(1.0, rng.random_range(-PI..PI)))
                    .collect()
            })
            .collect();
        let s = PhaseShiftVector::project(&kron_chain_reversed(&factors));
        let fid = factorize_phases(&s, &dims, &opts)
            .and_then(|f| correlation_fidelity(&s, &f.reconstruct()))
            .unwrap_or(0.0);
        worst = worst.min(fid);
    }
    Check {
        name: "exact recovery of separable vectors",
        passed: worst >= 1.0 - 1e-10,
        detail: format!("worst fidelity {worst:.15}"),
    }
}

fn siso_check(seed: u64) -> Check {
    let mut rng = trial_rng(seed, 1);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let n = 32;
        let mut draw = || Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
        let g: Vec<Complex64> = (0..n).map(|_| draw()).collect();
        let h: Vec<Complex64> = (0..n).map(|_| draw()).collect();
        let gm = ComplexMatrix::new(1, n, g.clone()).unwrap();
        let hm = ComplexMatrix::new(n, 1, h.clone()).unwrap();
        let rel = optimal_beamformers(&hm, &gm, &PowerOptions::default())
            .and_then(|bf| CascadeGains::new(&hm, &gm, &bf.w, &bf.q)?.cascade(&bf.s_opt))
            .map(|c| {
                let bound: f64 = g.iter().zip(&h).map(|(a, b)| a.norm() * b.norm()).sum();
                (c.norm() - bound).abs() / bound
            })
            .unwrap_or(f64::INFINITY);
        worst = worst.max(rel);
    }
    Check {
        name: "SISO optimality identity",
        passed: worst <= 1e-10,
        detail: format!("worst relative gap {worst:e}"),
    }
}

fn codec_check() -> Check {
    let cfg = FactorizationConfig::new(vec![8, 4, 2], vec![3, 2, 5]).unwrap();
    let msg = codec::FeedbackMessage {
        config: cfg,
        indices: vec![(0..8).collect(), vec![3, 0, 1, 2], vec![31, 17]],
    };
    let passed = msg
        .to_bytes()
        .and_then(|b| codec::FeedbackMessage::from_bytes(&b))
        .map(|m| m == msg)
        .unwrap_or(false)
        && codec::FeedbackMessage::from_json(&msg.to_json())
            .map(|m| m == msg)
            .unwrap_or(false);
    Check {
        name: "feedback message round trip",
        passed,
        detail: format!("{} payload bits", codec::payload_bits(&msg.config)),
    }
}
