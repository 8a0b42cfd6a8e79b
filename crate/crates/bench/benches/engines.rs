use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use hurwitzkit::characters::CharacterTable;
use hurwitzkit::genfun::{f_series, FForm, FSeriesSpec, HyperParam, ParamValue};
use hurwitzkit::hurwitz::{hurwitz_value, Cutoff};
use hurwitzkit::mc::{mc_lemma1, LemmaQuery, Relation};
use hurwitzkit::oracle::{oracle_count, SurfacePresentation};
use hurwitzkit::scalar::{int, rat};
use hurwitzkit::Partition;

fn p(s: &str) -> Partition {
    s.parse().unwrap()
}

fn characters(c: &mut Criterion) {
    c.bench_function("character table d=10, uncached", |b| b.iter(|| CharacterTable::build(black_box(10))));
    c.bench_function("hurwitz E=-2 d=9 three profiles", |b| {
        let profiles = [p("2,1,1,1,1,1,1,1"), p("3,3,3"), p("9")];
        b.iter(|| hurwitz_value(black_box(-2), 9, &profiles).unwrap())
    });
}

fn oracle(c: &mut Criterion) {
    let klein = SurfacePresentation::nonorientable(2).unwrap();
    c.bench_function("oracle klein bottle d=5 two profiles", |b| {
        b.iter(|| oracle_count(&klein, black_box(5), &[p("2,1,1,1"), p("3,2")]).unwrap())
    });
}

fn series(c: &mut Criterion) {
    let spec = FSeriesSpec {
        euler: 1,
        alphabets: 2,
        params: vec![HyperParam { a: ParamValue::Symbolic, power: 1 }],
        cutoff: Cutoff::AtMost(3),
        d_max: 5,
    };
    c.bench_function("F^{1,2;1} to degree 5", |b| b.iter(|| f_series(black_box(&spec), FForm::Pochhammer).unwrap()));
}

fn monte_carlo(c: &mut Criterion) {
    let eye: Vec<Vec<_>> = (0..3).map(|i| (0..3).map(|j| int(i64::from(i == j))).collect()).collect();
    let b_mat: Vec<Vec<_>> = (0..3).map(|i| (0..3).map(|j| rat(1, i + j + 1)).collect()).collect();
    let q = LemmaQuery {
        relation: Relation::AUBUinv,
        lambda: p("2,1"),
        mu: None,
        a: eye,
        b: b_mat,
        samples: 10_000,
        seed: 1,
    };
    let mut group = c.benchmark_group("monte carlo");
    group.sample_size(10);
    group.bench_function("Haar N=3, λ=(2,1), 1e4 samples", |b| b.iter(|| mc_lemma1(black_box(&q)).unwrap()));
    group.finish();
}

criterion_group!(benches, characters, oracle, series, monte_carlo);
criterion_main!(benches);
