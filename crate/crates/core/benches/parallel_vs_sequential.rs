use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use jetlie::closedform::{family, residual_numeric, Expr, FamilyKind, FamilyParams, Grid, SingularPolicy, Variant};
use jetlie::detsolve::{assemble_classical, assemble_harrison, build_ideal, ClassicalOptions, EquationForm, HarrisonOptions};
use jetlie::integrable::{kdv_first_integral, KdvFirstIntegralOptions};
use jetlie::jetspace::{JetSpec, PdeSpec};
use jetlie::par::Exec;
use jetlie::symkernel::scalar;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn kdv() -> PdeSpec {
    PdeSpec::parse(JetSpec::kdv(3), "u_xxx + u*u_x + u_t", "u_xxx").unwrap()
}

fn harrison_assembly(c: &mut Criterion) {
    let ideal = build_ideal(&kdv(), EquationForm::Printed).unwrap();
    let mut g = c.benchmark_group("harrison_assembly");
    g.sample_size(10);
    for (name, exec) in MODES {
        let opts = HarrisonOptions { exec, ..Default::default() };
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| assemble_harrison(black_box(&ideal), &opts).unwrap()));
    }
    g.finish();
}

fn classical_assembly(c: &mut Criterion) {
    let pde = kdv();
    let mut g = c.benchmark_group("classical_assembly_degree3");
    g.sample_size(10);
    for (name, exec) in MODES {
        let opts = ClassicalOptions { degree: 3, exec, ..Default::default() };
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| assemble_classical(black_box(&pde), &opts).unwrap()));
    }
    g.finish();
}

fn residual_grid(c: &mut Criterion) {
    let u = family(FamilyKind::Soliton, Variant::Corrected, &FamilyParams::from([("c".to_string(), Expr::int(9))])).unwrap();
    let mut g = c.benchmark_group("soliton_residual");
    for (label, grid) in [("standard", Grid::standard()), ("fine", Grid::rect((-2.0, 2.0, 0.02), (-5.0, 5.0, 0.05)))] {
        for (name, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(name, label), &grid, |b, grid| {
                b.iter(|| residual_numeric(black_box(&u), grid, SingularPolicy::Fail, exec).unwrap())
            });
        }
    }
    g.finish();
}

fn first_integral_samples(c: &mut Criterion) {
    let (four, zero) = (scalar::int(4), scalar::zero());
    let mut g = c.benchmark_group("first_integral");
    g.sample_size(20);
    for (name, exec) in MODES {
        let opts = KdvFirstIntegralOptions { exec, ..Default::default() };
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| kdv_first_integral(&four, &zero, &zero, black_box(&opts)).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, harrison_assembly, classical_assembly, residual_grid, first_integral_samples);
criterion_main!(benches);
