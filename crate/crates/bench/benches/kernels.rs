//! Hot-path benchmarks: spectral primitives, the nonlinear operators, the
//! elliptic velocity recovery, and one full right-hand-side evaluation at a
//! production-sized grid.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use intwave_core::approx::coupling_forcing;
use intwave_core::gn::{depths, qbar_apply, GnModel, GnState};
use intwave_core::params::{base_coeffs, decoupled_coeffs, RegimeParams};
use intwave_core::scalar::ScalarModel;
use intwave_core::spectral::{Field, Grid};
use std::sync::Arc;

fn production_setup() -> (Arc<Grid>, RegimeParams, Field, Field) {
    let eps = 0.05;
    let p = RegimeParams::new(eps, eps * eps, 0.8 * 0.8, 0.8)
        .unwrap()
        .with_weights(0.5, 0.0);
    let grid = Grid::new(2048, 2048.0 * 0.2).unwrap();
    let zeta = grid.sample(|x| (5.0 / 3.0) * (-(x / 2.0) * (x / 2.0)).exp());
    let vbar = grid.sample(|x| 0.48 * (-(x / 2.0) * (x / 2.0)).exp());
    (grid, p, zeta, vbar)
}

fn bench_spectral(c: &mut Criterion) {
    let (grid, _, zeta, _) = production_setup();
    c.bench_function("derivative n=2048", |b| {
        b.iter(|| zeta.derivative(1).unwrap());
    });
    c.bench_function("helmholtz_inverse n=2048", |b| {
        b.iter(|| zeta.helmholtz_inverse(0.01).unwrap());
    });
    c.bench_function("sobolev_norm n=2048", |b| {
        b.iter(|| zeta.sobolev_norm(1.0));
    });
    let _ = grid;
}

fn bench_operators(c: &mut Criterion) {
    let (_, p, zeta, vbar) = production_setup();
    let (h1, h2) = depths(&zeta, &p).unwrap();
    c.bench_function("qbar_apply n=2048", |b| {
        b.iter(|| qbar_apply(&h1, &h2, &vbar, &p).unwrap());
    });
    let bc = base_coeffs(&p);
    let v_minus = vbar.scale(2.0 / 3.0);
    c.bench_function("coupling_forcing n=2048", |b| {
        b.iter(|| coupling_forcing(&vbar, &v_minus, &p, &bc).unwrap());
    });
}

fn bench_solves(c: &mut Criterion) {
    let (_, p, zeta, vbar) = production_setup();
    let model = GnModel::new(p);
    let q = model.momentum_from_velocity(&zeta, &vbar).unwrap();
    c.bench_function("recover_vbar n=2048", |b| {
        b.iter(|| model.recover_vbar(&zeta, &q).unwrap());
    });
    c.bench_function("gn_rhs n=2048", |b| {
        b.iter_batched(
            || GnState { zeta: zeta.clone(), q: q.clone() },
            |state| model.rhs(&state).unwrap(),
            BatchSize::SmallInput,
        );
    });
    let scalar = ScalarModel::new(decoupled_coeffs(&p, 1.0), p);
    c.bench_function("scalar_rhs full n=2048", |b| {
        b.iter(|| scalar.rhs(&zeta).unwrap());
    });
}

criterion_group!(benches, bench_spectral, bench_operators, bench_solves);
criterion_main!(benches);
