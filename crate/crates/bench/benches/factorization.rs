use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use irsfb_bench::optimal_phases;
use irsfb_core::{codec, factorize_phases, FactorizationConfig, PowerOptions};

fn bench_factorize(c: &mut Criterion) {
    let mut group = c.benchmark_group("factorize_phases");
    let s = optimal_phases(32, 0.0, 7);
    for dims in [vec![32, 32], vec![64, 8, 2], vec![8, 8, 4, 4], vec![2; 10]] {
        let label = dims
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("x");
        group.bench_with_input(BenchmarkId::from_parameter(label), &dims, |b, dims| {
            b.iter(|| factorize_phases(black_box(&s), dims, &PowerOptions::default()).unwrap())
        });
    }
    group.finish();
}

fn bench_codec(c: &mut Criterion) {
    let s = optimal_phases(32, 10.0, 3);
    let cfg = FactorizationConfig::uniform(vec![64, 8, 2], 3).unwrap();
    let msg = codec::encode(&s, &cfg, &PowerOptions::default()).unwrap();
    let bytes = msg.to_bytes().unwrap();

    c.bench_function("encode_1024", |b| {
        b.iter(|| codec::encode(black_box(&s), &cfg, &PowerOptions::default()).unwrap())
    });
    c.bench_function("decode_1024", |b| {
        b.iter(|| codec::decode(black_box(&msg)).unwrap())
    });
    c.bench_function("message_from_bytes", |b| {
        b.iter(|| codec::FeedbackMessage::from_bytes(black_box(&bytes)).unwrap())
    });
}

criterion_group!(benches, bench_factorize, bench_codec);
criterion_main!(benches);
