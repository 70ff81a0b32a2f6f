use betanormal::algebraic::{FieldElement, PisotNumber};
use betanormal::beta::BetaSystem;
use betanormal::generators::{generate, GeneratorConfig};
use betanormal::normality::{extreme_discrepancy, non_normal_census, NormalityChecker};
use betanormal::poly::{ratio, Rat};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn field(c: &mut Criterion) {
    let p = PisotNumber::plastic();
    let x = FieldElement::beta_pow(&p, 37).add_int(-5);
    let y = FieldElement::beta_pow(&p, -23).add_int(3);
    c.bench_function("field/mul", |b| b.iter(|| black_box(&x) * black_box(&y)));
    c.bench_function("field/inverse", |b| b.iter(|| black_box(&x).inverse().unwrap()));
    c.bench_function("field/sign", |b| b.iter(|| (black_box(&x) - black_box(&y)).signum()));
}

fn words(c: &mut Criterion) {
    let mut g = c.benchmark_group("count_words");
    for (name, base) in [("phi", PisotNumber::golden()), ("tribonacci", PisotNumber::tribonacci())] {
        let sys = BetaSystem::new(&base).unwrap();
        g.bench_with_input(BenchmarkId::new(name, 200), &sys, |b, s| b.iter(|| s.count_words(black_box(200))));
    }
    g.finish();
}

fn census(c: &mut Criterion) {
    let mut g = c.benchmark_group("census");
    g.sample_size(10);
    let eps = ratio(1, 2);
    for (name, base, n) in [("2", PisotNumber::integer(2).unwrap(), 16), ("phi", PisotNumber::golden(), 20)] {
        let sys = BetaSystem::new(&base).unwrap();
        g.bench_function(BenchmarkId::new(name, n), |b| {
            b.iter(|| non_normal_census(&sys, n, &eps, 2, sys.m_zero()).unwrap())
        });
    }
    g.finish();
}

fn normality(c: &mut Criterion) {
    let sys = BetaSystem::new(&PisotNumber::golden()).unwrap();
    let checker = NormalityChecker::new(&sys, &ratio(1, 4), 3, 2000).unwrap();
    let w: Vec<u32> = (0..2000u32).map(|i| u32::from(i % 3 == 0)).collect();
    c.bench_function("normality/phi_k3_2000", |b| b.iter(|| checker.is_normal(black_box(&w))));
}

fn discrepancy(c: &mut Criterion) {
    let mut g = c.benchmark_group("extreme_discrepancy");
    for n in [100usize, 1000] {
        let pts: Vec<Rat> = (0..n as i64).map(|i| ratio((i * 7919) % 10007, 10007)).collect();
        g.bench_with_input(BenchmarkId::from_parameter(n), &pts, |b, p| b.iter(|| extreme_discrepancy(p)));
    }
    g.finish();
}

fn generator(c: &mut Criterion) {
    let mut g = c.benchmark_group("generate");
    g.sample_size(10);
    let bhs: GeneratorConfig = serde_json::from_str(r#"{"kind":"bhs","target_digits":500}"#).unwrap();
    g.bench_function("bhs_500", |b| b.iter(|| generate(&bhs).unwrap()));
    g.finish();
}

criterion_group!(benches, field, words, census, normality, discrepancy, generator);
criterion_main!(benches);
