//! Sequential vs parallel evaluation of the Monte Carlo ensembles.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use riskytime::affine::{riccati_solve, CirParams};
use riskytime::default_sim::{simulate_tau_ensemble, HazardAtom, HazardPath};
use riskytime::grid::PiecewiseLinear;
use riskytime::merton::{filter_coverage, MertonSetup};
use riskytime::noarb::affine_martingale_test;
use riskytime::par::Execution;
use std::hint::black_box;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn default_times(c: &mut Criterion) {
    let lam = PiecewiseLinear::new(vec![0.0, 1.0, 2.0], vec![0.1, 0.3, 0.2]).unwrap();
    let atoms = vec![
        HazardAtom {
            u: 1.0,
            lam_prime: 0.35,
        },
        HazardAtom {
            u: 1.5,
            lam_prime: 0.22,
        },
    ];
    let path = HazardPath::new(lam, atoms, 2.0).unwrap();
    let mut grp = c.benchmark_group("default_times");
    for (name, exec) in MODES {
        grp.bench_with_input(BenchmarkId::new(name, 100_000), &exec, |b, &exec| {
            b.iter(|| simulate_tau_ensemble(black_box(&path), 100_000, 7, exec))
        });
    }
    grp.finish();
}

fn cir_martingale(c: &mut Criterion) {
    let cir = CirParams::new(0.02, -0.3, 0.2, 0.5).unwrap();
    let (params, loadings, dates) = cir.to_affine(1.0).unwrap();
    let sol = riccati_solve(&params, &loadings, &dates, 1.5, 1e-3).unwrap();
    let mut grp = c.benchmark_group("cir_martingale");
    grp.sample_size(10);
    for (name, exec) in MODES {
        grp.bench_with_input(BenchmarkId::new(name, 2_000), &exec, |b, &exec| {
            b.iter(|| {
                affine_martingale_test(
                    &params,
                    &loadings,
                    &dates,
                    &sol,
                    &[0.04],
                    &[0.25, 0.75, 1.25],
                    2_000,
                    1e-3,
                    11,
                    exec,
                )
                .unwrap()
            })
        });
    }
    grp.finish();
}

fn filter_ensemble(c: &mut Criterion) {
    let setup = MertonSetup::from_json(
        r#"{"v0":1,"sigma":0.2,"muX":0.05,"varX":0.04,"K":0.8,"Kprime":0.7,
            "T":3,"U":5,"S":2,"sigma_eta":0.1}"#,
    )
    .unwrap();
    let mut grp = c.benchmark_group("filter_coverage");
    grp.sample_size(10);
    for (name, exec) in MODES {
        grp.bench_with_input(BenchmarkId::new(name, 200), &exec, |b, &exec| {
            b.iter(|| filter_coverage(&setup, 1e-2, 200, 3, exec).unwrap())
        });
    }
    grp.finish();
}

criterion_group!(benches, default_times, cir_martingale, filter_ensemble);
criterion_main!(benches);
