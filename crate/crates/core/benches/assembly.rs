use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nlsampling::algebra::PointSet;
use nlsampling::companding::SamplingModel;
use nlsampling::exec::Execution;
use nlsampling::kernels::{intercorrelation_with, CompandingFunction, GeneratorFamily, Kernel, QuadratureRule};

fn splines(n: usize) -> GeneratorFamily {
    let h = 4.0 / (n - 1) as f64;
    let knots = PointSet::new((0..n).map(|i| -2.0 + h * i as f64).collect()).unwrap();
    GeneratorFamily::cardinal_splines(&knots, 3.0).unwrap()
}

fn boxes(n: usize) -> GeneratorFamily {
    let w = 4.0 / n as f64;
    let kernels = (0..n).map(|i| Kernel::box_average(-2.0 + w * i as f64, -2.0 + w * (i + 1) as f64, 1.0 / w).unwrap()).collect();
    let centers = PointSet::new((0..n).map(|i| -2.0 + w * (i + 1) as f64).collect()).unwrap();
    GeneratorFamily::new(kernels, centers, 3.0).unwrap()
}

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn gram(c: &mut Criterion) {
    let rule = QuadratureRule::gauss_legendre(10, 0.125);
    let mut g = c.benchmark_group("intercorrelation");
    for n in [40usize, 120] {
        let phi = splines(n);
        let psi = boxes(2 * n);
        for (name, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(name, n), &n, |b, _| b.iter(|| intercorrelation_with(&psi, &phi, &rule, exec)));
        }
    }
    g.finish();
}

fn model(c: &mut Criterion) {
    let rule = QuadratureRule::gauss_legendre(10, 0.125);
    let mut g = c.benchmark_group("sampling_model");
    g.sample_size(20);
    for n in [40usize, 120] {
        let phi = splines(n);
        let psi = boxes(2 * n);
        for (name, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(name, n), &n, |b, _| {
                b.iter(|| SamplingModel::with_execution(phi.clone(), psi.clone(), CompandingFunction::Sine, rule.clone(), exec).unwrap())
            });
        }
    }
    g.finish();
}

criterion_group!(benches, gram, model);
criterion_main!(benches);
