use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use xi_ineq::representation::{s_t_constants, JRoute, Method, ModulusRepresentation};
use xi_ineq::xi_oracle::xi_mod_sq;
use xi_ineq::{EvalConfig, SigmaParam};

fn constants(c: &mut Criterion) {
    let cfg = EvalConfig::default();
    let s = SigmaParam::new(0.75).unwrap();
    let mut g = c.benchmark_group("s_t_constants");
    for m in [Method::ADirect, Method::BSeries, Method::CInversion] {
        g.bench_function(format!("{m:?}"), |b| b.iter(|| s_t_constants(s, m, &cfg)));
    }
    g.finish();
}

fn modulus(c: &mut Criterion) {
    let cfg = EvalConfig::default();
    let s = SigmaParam::new(0.75).unwrap();
    let rep = ModulusRepresentation::new(s, &cfg).unwrap();
    let j = JRoute::new(s.tau(), &cfg).unwrap();
    let mut g = c.benchmark_group("modulus_t5");
    g.bench_function("oracle", |b| b.iter(|| xi_mod_sq(s, black_box(5.0), &cfg)));
    g.bench_function("representation", |b| b.iter(|| rep.eval(black_box(5.0))));
    g.bench_function("j_route", |b| b.iter(|| j.twice_mod_sq(black_box(5.0))));
    g.bench_function("representation_setup", |b| b.iter(|| ModulusRepresentation::new(s, &cfg)));
    g.finish();
}

criterion_group!(benches, constants, modulus);
criterion_main!(benches);
