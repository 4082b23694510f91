use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use orbibraid::{sample, Surface};

fn comb(c: &mut Criterion) {
    let surface = Surface::new(1, vec![2, 3]).unwrap();
    let mut group = c.benchmark_group("comb");
    for (n, len) in [(2, 16), (3, 8), (3, 16), (4, 16)] {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let words: Vec<_> = (0..32).map(|_| sample::orb_word(&mut rng, &surface, n, len)).collect();
        // warm the per-surface kernel tables outside the timed loop
        words[0].comb().unwrap();
        group.bench_with_input(BenchmarkId::new(format!("n={n}"), len), &words, |b, words| {
            b.iter(|| {
                for w in words {
                    black_box(w.comb().unwrap());
                }
            })
        });
    }
    group.finish();
}

fn artin_oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("artin_is_trivial");
    for strands in [4, 6, 8] {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let words: Vec<_> = (0..32).map(|_| sample::braid_word(&mut rng, strands, 24)).collect();
        group.bench_with_input(BenchmarkId::from_parameter(strands), &words, |b, words| {
            b.iter(|| {
                for w in words {
                    black_box(w.is_trivial());
                }
            })
        });
    }
    group.finish();
}

criterion_group!(benches, comb, artin_oracle);
criterion_main!(benches);
