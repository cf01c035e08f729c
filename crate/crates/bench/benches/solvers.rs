use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use usg_core::random::random_positive_game;
use usg_core::{
    compute_delta, cournot_run, enumerate_ne, power_iteration, real_eigenpairs, ss_hopm,
    GameTensor, IterationConfig, StrategyProfile,
};

fn game(n: usize) -> usg_core::TwoPlayerGame {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    random_positive_game(&mut rng, n, n, 0.1, 1.0)
}

fn two_player(c: &mut Criterion) {
    let cfg = IterationConfig::default();
    let mut group = c.benchmark_group("two_player");
    for n in [4usize, 16, 64] {
        let g = game(n);
        let ab = g.ab();
        let x0 = vec![1.0 / (n as f64).sqrt(); n];
        group.bench_with_input(BenchmarkId::new("power_iteration", n), &ab, |b, ab| {
            b.iter(|| power_iteration(black_box(ab), &x0, &cfg).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("real_eigenpairs", n), &ab, |b, ab| {
            b.iter(|| real_eigenpairs(black_box(ab), 1e-9).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("enumerate_ne", n), &g, |b, g| {
            b.iter(|| enumerate_ne(black_box(g), &cfg).unwrap())
        });
        let start = StrategyProfile::uniform(n, n);
        group.bench_with_input(BenchmarkId::new("cournot_run", n), &g, |b, g| {
            b.iter(|| cournot_run(black_box(g), &start, &cfg, None).unwrap())
        });
    }
    group.finish();
}

fn multi_player(c: &mut Criterion) {
    let cfg = IterationConfig::default();
    let mut group = c.benchmark_group("multi_player");
    for (m, n) in [(3usize, 4usize), (4, 4)] {
        let len = n.pow(m as u32);
        let data: Vec<f64> = (0..len)
            .map(|i| 0.5 + ((i * 37) % 11) as f64 / 11.0)
            .collect();
        let shared = GameTensor::shared(m, n, data).unwrap();
        let x0 = vec![1.0 / (n as f64).sqrt(); n];
        group.bench_with_input(
            BenchmarkId::new("ss_hopm", format!("{m}p{n}")),
            &shared,
            |b, t| b.iter(|| ss_hopm(black_box(t), &x0, &cfg).unwrap()),
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [4usize, 8, 12] {
        let t = usg_core::multiplayer::random_markov_game(&mut rng, &[n, n, n], 1.0);
        group.bench_with_input(BenchmarkId::new("compute_delta", n), &t, |b, t| {
            b.iter(|| compute_delta(black_box(t), 0, 20).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, two_player, multi_player);
criterion_main!(benches);
