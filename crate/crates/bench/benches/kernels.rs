use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use carlitz_bench::{exp_argument, field, omega_pair};
use carlitz_core::carlitz::exp_carlitz;
use carlitz_core::special::{zeta, ZetaRequest};

const PRECISIONS: [i64; 3] = [8, 12, 16];

fn mul(c: &mut Criterion) {
    let mut g = c.benchmark_group("mul");
    for q in [2, 3] {
        let f = field(q);
        for n in PRECISIONS {
            let (x, y) = omega_pair(f, n * f.lattice_den()).unwrap();
            g.bench_with_input(BenchmarkId::new(format!("q{q}"), n), &(x, y), |b, (x, y)| b.iter(|| x.mul(y)));
        }
    }
    g.finish();
}

fn exp(c: &mut Criterion) {
    let mut g = c.benchmark_group("exp");
    for q in [2, 3] {
        let f = field(q);
        for n in PRECISIONS {
            let n = n * f.lattice_den();
            let x = exp_argument(f, n).unwrap();
            g.bench_with_input(BenchmarkId::new(format!("q{q}"), n), &x, |b, x| b.iter(|| exp_carlitz(x, n).unwrap()));
        }
    }
    g.finish();
}

fn zeta_sum(c: &mut Criterion) {
    let mut g = c.benchmark_group("zeta");
    g.sample_size(10);
    for q in [2, 3] {
        let f = field(q);
        for s in [0, 1] {
            let req = ZetaRequest { n: 1, s, precision: 12 * f.lattice_den(), eval: None, budget: 2_000_000 };
            g.bench_with_input(BenchmarkId::new(format!("q{q}"), format!("s{s}")), &req, |b, r| b.iter(|| zeta(f, r).unwrap()));
        }
    }
    g.finish();
}

criterion_group!(benches, mul, exp, zeta_sum);
criterion_main!(benches);
