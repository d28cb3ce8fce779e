use criterion::{criterion_group, criterion_main, Criterion};

use convexreg_core::body::ConvexBody;
use convexreg_core::measure::vrad;
use convexreg_core::numerics::RngStream;
use convexreg_core::{Config, Exec};

fn volume_radius(c: &mut Criterion) {
    let mut rng = RngStream::new(1).rng();
    let k = ConvexBody::random_vpolytope(&mut rng, 5, 15).unwrap();
    let mut group = c.benchmark_group("vrad_random_polytope_5d");
    group.sample_size(10);
    for (name, exec) in [("parallel", Exec::Parallel), ("sequential", Exec::Sequential)] {
        let cfg = Config::default().with_directions(4096).with_exec(exec);
        group.bench_function(name, |b| b.iter(|| vrad(&k, &cfg, RngStream::new(2)).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, volume_radius);
criterion_main!(benches);
