use criterion::{black_box, criterion_group, criterion_main, Criterion};
use effcoul_core::dirac::{radial_series, sommerfeld_deficit, RadialProblem};
use effcoul_core::eigensolver::solve_effective;
use effcoul_core::observables::{hyperfine_splitting, lamb_shift};
use effcoul_core::{BetheLogTable, CouplingFactors, LambOrder, PhysicalConstants, QuantumState};

fn solver(c: &mut Criterion) {
    let constants = PhysicalConstants::default();
    let bethe = BetheLogTable::shipped();
    let state = QuantumState::s_half(2).unwrap();
    let g = CouplingFactors {
        g_a: 1.0 - 2e-7,
        g_b: 1.0 + 3e-8,
    };

    c.bench_function("solve_effective 2s", |b| {
        b.iter(|| solve_effective(black_box(&state), black_box(constants.alpha), &g).unwrap())
    });
    c.bench_function("lamb_shift Z=1 n=2", |b| {
        b.iter(|| lamb_shift(black_box(1), 2, LambOrder::ZAlpha4, &constants, &bethe).unwrap())
    });
    c.bench_function("lamb_shift scan Z=1..40", |b| {
        b.iter(|| {
            (1..=40)
                .map(|z| {
                    lamb_shift(z, 2, LambOrder::ZAlpha5, &constants, &bethe)
                        .unwrap()
                        .value_mhz
                })
                .sum::<f64>()
        })
    });
    c.bench_function("hyperfine_splitting n=1", |b| {
        b.iter(|| hyperfine_splitting(black_box(1), 1, &constants, false, 0.0).unwrap())
    });

    let deep = QuantumState::new(10, -1, None).unwrap();
    let za = 0.2;
    let deficit = sommerfeld_deficit(&deep, za).unwrap();
    let problem =
        RadialProblem::from_deficit(deep, za, CouplingFactors::IDENTITY, deficit).unwrap();
    c.bench_function("radial_series n=10", |b| {
        b.iter(|| radial_series(black_box(&problem)).unwrap())
    });
}

criterion_group!(benches, solver);
criterion_main!(benches);
