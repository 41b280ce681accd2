use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use mfunctor::curve_operators::CofVariant;
use mfunctor::genus_zero_relations::run_all;
use mfunctor::label_algebra::verlinde_dim;
use mfunctor::s_reconstruction::{reconstruct_s0, s_from_twist_sandwich, s_lambda_main, MainForm};
use mfunctor::suite::{full_suite, SuiteOptions};
use mfunctor_bench::{theory, without_s};

const THEORIES: [&str; 4] = ["fibonacci", "abelian-3", "abelian-4", "abelian-6"];

fn genus_zero(c: &mut Criterion) {
    let mut g = c.benchmark_group("run_all");
    for name in THEORIES {
        let bd = theory(name);
        g.bench_with_input(BenchmarkId::from_parameter(name), &bd, |b, bd| {
            b.iter(|| run_all(black_box(bd)))
        });
    }
    g.finish();
}

fn full(c: &mut Criterion) {
    let mut g = c.benchmark_group("full_suite");
    for name in THEORIES {
        let bd = theory(name);
        g.bench_with_input(BenchmarkId::from_parameter(name), &bd, |b, bd| {
            b.iter(|| full_suite(black_box(bd), SuiteOptions::consistent()))
        });
    }
    g.finish();
}

fn s_matrix(c: &mut Criterion) {
    let mut g = c.benchmark_group("s_lambda");
    for name in THEORIES {
        let bd = theory(name);
        g.bench_with_input(BenchmarkId::new("main", name), &bd, |b, bd| {
            b.iter(|| {
                s_lambda_main(
                    black_box(bd),
                    0,
                    None,
                    MainForm::Theorem,
                    CofVariant::Statement,
                )
                .unwrap()
            })
        });
        g.bench_with_input(BenchmarkId::new("sandwich", name), &bd, |b, bd| {
            b.iter(|| s_from_twist_sandwich(black_box(bd), 0, CofVariant::Statement).unwrap())
        });
    }
    g.finish();
}

fn reconstruction(c: &mut Criterion) {
    let mut g = c.benchmark_group("reconstruct_s0");
    for name in THEORIES {
        let bd = without_s(name);
        g.bench_with_input(BenchmarkId::from_parameter(name), &bd, |b, bd| {
            b.iter(|| reconstruct_s0(black_box(bd)).unwrap())
        });
    }
    g.finish();
}

fn dims(c: &mut Criterion) {
    let bd = theory("abelian-6");
    c.bench_function("verlinde_dim abelian-6 genus 6, 3 legs", |b| {
        b.iter(|| verlinde_dim(&bd.labels, &bd.dims, black_box(6), &[1, 2, 3]))
    });
}

criterion_group!(benches, genus_zero, full, s_matrix, reconstruction, dims);
criterion_main!(benches);
