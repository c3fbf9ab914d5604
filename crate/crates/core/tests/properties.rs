mod common;

use std::f64::consts::PI;

use common::*;
use irsfb_core::codec::{codepoint, ordered_factorizations, quantize_factor, MAX_BITS};
use irsfb_core::tensor::{
    kron, kron_chain_reversed, rank_one_tensor, tensorize, unfold, vectorize,
};
use irsfb_core::{
    correlation_fidelity, decode, encode, factorize_phases, feedback_duration, payload_ratio,
    Complex64, ComplexMatrix, FactorizationConfig, FeedbackLink, FeedbackMessage, PhaseShiftVector,
    PowerOptions,
};
use proptest::prelude::*;

fn dims_of(n: usize, pick: usize) -> Vec<usize> {
    let all = ordered_factorizations(n);
    all[pick % all.len()].clone()
}

fn unit(phase: f64) -> Complex64 {
    Complex64::from_polar(1.0, phase)
}

#[test]
fn tensorize_round_trip_exhaustive_up_to_64() {
    let mut rng = rng(11);
    for n in 1..=64usize {
        let y: Vec<Complex64> = (0..n).map(|_| gaussian(&mut rng)).collect();
        for dims in ordered_factorizations(n) {
            let t = tensorize(&y, &dims).unwrap();
            assert_eq!(vectorize(&t), y, "dims {dims:?}");
        }
    }
}

#[test]
fn exact_recovery_for_every_factorization_up_to_256() {
    let mut rng = rng(12);
    let opts = PowerOptions::default();
    for n in 1..=256usize {
        for dims in ordered_factorizations(n) {
            let factors: Vec<_> = dims.iter().map(|&d| random_phases(&mut rng, d)).collect();
            let s = separable(&factors);
            let fs = factorize_phases(&s, &dims, &opts).unwrap();
            let fid = correlation_fidelity(&s, &fs.reconstruct()).unwrap();
            assert!(fid >= 1.0 - 1e-10, "dims {dims:?}: fidelity {fid}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unfold_matches_rank_one_structure(
        sizes in prop::collection::vec(1usize..=5, 2..=5),
        seed in any::<u64>(),
    ) {
        let mut rng = rng(seed);
        let factors: Vec<Vec<Complex64>> = sizes.iter().map(|&n| (0..n).map(|_| gaussian(&mut rng)).collect()).collect();
        let t = rank_one_tensor(&factors).unwrap();
        let scale = t.frobenius_norm();
        for p in 0..factors.len() {
            let others: Vec<Vec<Complex64>> =
                factors.iter().enumerate().filter(|&(q, _)| q != p).map(|(_, f)| f.clone()).collect();
            let chain: Vec<Complex64> = kron_chain_reversed(&others).iter().map(|z| z.conj()).collect();
            let expected = ComplexMatrix::outer_conj(&factors[p], &chain);
            let got = unfold(&t, p).unwrap();
            prop_assert_eq!((got.rows(), got.cols()), (expected.rows(), expected.cols()));
            let diff: f64 = got.data().iter().zip(expected.data()).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
            prop_assert!(diff <= 1e-12 * scale, "mode {} diff {}", p, diff);
        }
    }

    #[test]
    fn kron_is_exact_on_integers(
        a in prop::collection::vec((-50i32..50, -50i32..50), 1..8),
        b in prop::collection::vec((-50i32..50, -50i32..50), 1..8),
    ) {
        let to_c = |v: &[(i32, i32)]| v.iter().map(|&(re, im)| Complex64::new(re.into(), im.into())).collect::<Vec<_>>();
        let (a, b) = (to_c(&a), to_c(&b));
        let k = kron(&a, &b);
        prop_assert_eq!(k.len(), a.len() * b.len());
        for i in 0..a.len() {
            for j in 0..b.len() {
                prop_assert_eq!(k[i * b.len() + j], a[i] * b[j]);
            }
        }
    }

    #[test]
    fn vectorized_rank_one_is_reversed_kron_chain(
        factors in prop::collection::vec(prop::collection::vec((-9i32..9, -9i32..9), 1..5), 1..5),
    ) {
        let factors: Vec<Vec<Complex64>> = factors
            .iter()
            .map(|f| f.iter().map(|&(re, im)| Complex64::new(re.into(), im.into())).collect())
            .collect();
        let t = rank_one_tensor(&factors).unwrap();
        prop_assert_eq!(vectorize(&t), kron_chain_reversed(&factors));
    }

    #[test]
    fn factors_are_unit_modulus_and_deterministic(n_pick in 0usize..6, dims_pick in any::<usize>(), seed in any::<u64>()) {
        let n = [8usize, 12, 16, 32, 48, 64][n_pick];
        let dims = dims_of(n, dims_pick);
        let mut rng = rng(seed);
        let s = PhaseShiftVector::project(&random_phases(&mut rng, n));
        let opts = PowerOptions::default();
        let a = factorize_phases(&s, &dims, &opts).unwrap();
        let b = factorize_phases(&s, &dims, &opts).unwrap();
        prop_assert_eq!(&a, &b);
        for z in a.factors().iter().flatten() {
            prop_assert!((z.norm() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn on_grid_separable_round_trip_is_exact(
        n_pick in 0usize..5,
        dims_pick in any::<usize>(),
        bits in 1u8..=6,
        seed in any::<u64>(),
    ) {
        let n = [4usize, 16, 24, 36, 64][n_pick];
        let dims = dims_of(n, dims_pick);
        let mut rng = rng(seed);
        let factors: Vec<_> = dims.iter().map(|&d| grid_phases(&mut rng, d, bits)).collect();
        let s = separable(&factors);
        let config = FactorizationConfig::uniform(dims, bits).unwrap();
        let s_hat = decode(&encode(&s, &config, &PowerOptions::default()).unwrap()).unwrap();
        prop_assert!(correlation_fidelity(&s, &s_hat).unwrap() >= 1.0 - 1e-10);
    }

    #[test]
    fn quantizer_error_is_bounded(phases in prop::collection::vec(-4.0f64..4.0, 1..32), bits in 1u8..=MAX_BITS) {
        let f: Vec<Complex64> = phases.iter().map(|&p| unit(p)).collect();
        let (idx, tilde) = quantize_factor(&f, bits);
        let half_step = PI / f64::from(1u32 << bits);
        for ((z, q), k) in f.iter().zip(&tilde).zip(&idx) {
            let err = (q * z.conj()).arg().abs();
            prop_assert!(err <= half_step + 1e-12, "error {} > {}", err, half_step);
            prop_assert!((z.conj() * q).re >= half_step.cos() - 1e-12);
            prop_assert!(*k < 1u32 << bits);
        }
    }

    #[test]
    fn quantizer_is_idempotent(phases in prop::collection::vec(-4.0f64..4.0, 1..32), bits in 1u8..=MAX_BITS) {
        let f: Vec<Complex64> = phases.iter().map(|&p| unit(p)).collect();
        let (idx, tilde) = quantize_factor(&f, bits);
        let (idx2, tilde2) = quantize_factor(&tilde, bits);
        prop_assert_eq!(idx, idx2);
        prop_assert_eq!(tilde, tilde2);
    }

    #[test]
    fn factorized_payload_is_smaller(n_pick in 0usize..6, dims_pick in any::<usize>()) {
        let n = [4usize, 16, 60, 64, 256, 1024][n_pick];
        let dims = dims_of(n, dims_pick);
        prop_assume!(dims.len() >= 2);
        let pr = payload_ratio(&FactorizationConfig::uniform(dims.clone(), 3).unwrap());
        // 2·2 = 2 + 2 is the only tie
        if dims == [2, 2] {
            prop_assert_eq!(pr, 1.0);
        } else {
            prop_assert!(pr > 1.0, "{:?} gives {}", dims, pr);
        }
    }

    #[test]
    fn duration_increases_with_payload_and_falls_with_capacity(
        payload in 1u64..100_000,
        extra in 1u64..1000,
        bandwidth in 1e3f64..1e8,
        power in 1e-3f64..10.0,
        gain in 1e-3f64..10.0,
        boost in 1.01f64..10.0,
        preamble in any::<bool>(),
    ) {
        let link = FeedbackLink::new(bandwidth, power, gain, 1e-9, 42, 3).unwrap();
        let t = feedback_duration(payload, &link, preamble).unwrap();
        prop_assert!(feedback_duration(payload + extra, &link, preamble).unwrap() > t);
        let faster = FeedbackLink { power_w: power * boost, ..link };
        prop_assert!(faster.rate() > link.rate());
        prop_assert!(feedback_duration(payload, &faster, preamble).unwrap() < t);
        let wider = FeedbackLink { bandwidth_hz: bandwidth * boost, ..link };
        prop_assert!(wider.rate() > link.rate());
        prop_assert!(feedback_duration(payload, &wider, preamble).unwrap() < t);
    }

    #[test]
    fn message_round_trips_through_bytes_and_json(
        dims in prop::collection::vec(1usize..20, 1..5),
        bits in prop::collection::vec(1u8..=MAX_BITS, 5),
        seed in any::<u64>(),
    ) {
        let bits = bits[..dims.len()].to_vec();
        let config = FactorizationConfig::new(dims.clone(), bits.clone()).unwrap();
        let mut rng = rng(seed);
        let indices: Vec<Vec<u32>> = dims
            .iter()
            .zip(&bits)
            .map(|(&n, &b)| (0..n).map(|_| rand::Rng::random_range(&mut rng, 0..1u32 << b)).collect())
            .collect();
        let msg = FeedbackMessage { config, indices };
        let bytes = msg.to_bytes().unwrap();
        let expected_len = 1 + 5 * dims.len() + dims.iter().zip(&bits).map(|(&n, &b)| (n * b as usize).div_ceil(8)).sum::<usize>();
        prop_assert_eq!(bytes.len(), expected_len);
        prop_assert_eq!(FeedbackMessage::from_bytes(&bytes).unwrap(), msg.clone());
        prop_assert_eq!(FeedbackMessage::from_json(&msg.to_json()).unwrap(), msg.clone());
        let decoded = decode(&msg).unwrap();
        for z in decoded.as_slice() {
            prop_assert!((z.norm() - 1.0).abs() <= 1e-12);
        }
        for (idx, &b) in msg.indices.iter().zip(&bits) {
            for &k in idx {
                prop_assert!((codepoint(k, b).norm() - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn fidelity_ignores_global_phase(phases in prop::collection::vec(-4.0f64..4.0, 1..64), rot in -4.0f64..4.0) {
        let s = PhaseShiftVector::from_phases(&phases);
        let rotated = PhaseShiftVector::project(&s.as_slice().iter().map(|z| z * unit(rot)).collect::<Vec<_>>());
        let f = correlation_fidelity(&s, &rotated).unwrap();
        prop_assert!((f - 1.0).abs() <= 1e-12);
    }
}
