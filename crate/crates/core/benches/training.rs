use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use wavesnet::exec::Exec;
use wavesnet::wadsnet::{build_net, gen_dataset, train, Kind, TrainConfig};

fn policies() -> Vec<(&'static str, Exec)> {
    vec![
        ("sequential", Exec::Sequential),
        #[cfg(feature = "rayon")]
        ("parallel", Exec::Parallel),
    ]
}

/// One epoch over 32 samples; the epoch-0 evaluation is included.
fn bench_epoch(cr: &mut Criterion) {
    let data = gen_dataset(32, 32, 32, 0).unwrap();
    let mut g = cr.benchmark_group("train_epoch");
    g.sample_size(10);
    for kind in Kind::ALL {
        for (label, exec) in policies() {
            let cfg = TrainConfig {
                epochs: 1,
                exec,
                ..TrainConfig::default()
            };
            g.bench_function(format!("{kind}/{label}"), |b| {
                b.iter_batched(
                    || build_net(kind, "haar", 0).unwrap(),
                    |mut net| train(&mut net, &data, &cfg).unwrap(),
                    BatchSize::LargeInput,
                )
            });
        }
    }
    g.finish();
}

criterion_group!(benches, bench_epoch);
criterion_main!(benches);
