use std::sync::Arc;

use criterion::{black_box, criterion_group, criterion_main, Criterion};

use peisert_core::classify::{census, certificate, enumerate_types};
use peisert_core::cliques::{max_cliques_through_zero, strict_ekr};
use peisert_core::constructions::{extremal_construction, oval_graph_xq, vo_plus};
use peisert_core::fields::{make_tower, Element};
use peisert_core::graph::build_graph;
use peisert_core::plane::{DirectionSet, TowerBasis};

fn basis(p: u32, n: u32) -> Arc<TowerBasis> {
    TowerBasis::new(Arc::new(make_tower(p, n, None).unwrap())).unwrap()
}

fn field_arithmetic(c: &mut Criterion) {
    let t = make_tower(2, 5, None).unwrap();
    let q2 = t.q2();
    c.bench_function("field_mul_add_f1024", |b| {
        b.iter(|| {
            let mut acc = Element::ONE;
            for i in 1..q2 {
                acc = t.add(t.mul(acc, Element(i)), Element(i));
            }
            black_box(acc)
        })
    });
}

fn clique_enumeration(c: &mut Criterion) {
    let b16 = basis(2, 4);
    let ex = extremal_construction(&b16).unwrap();
    c.bench_function("max_cliques_extremal_q16", |b| {
        b.iter(|| black_box(max_cliques_through_zero(&ex.graph, None).unwrap().len()))
    });

    let b13 = basis(13, 1);
    let ds = enumerate_types(&b13, 8).unwrap();
    let strict_graph = ds
        .iter()
        .map(|d| build_graph(d.clone()).unwrap())
        .find(|g| strict_ekr(g).unwrap().0)
        .unwrap();
    c.bench_function("strict_ekr_proof_q13_m8", |b| {
        b.iter(|| black_box(strict_ekr(&strict_graph).unwrap().0))
    });
}

fn orbit_canonicalization(c: &mut Criterion) {
    let b = basis(13, 1);
    b.pgammal_perms(); // build the group once
    let ds = DirectionSet::from_indices(b.clone(), &[0, 1, 2, 4, 7, 9, 11, 13]).unwrap();
    c.bench_function("pgammal_canonical_q13", |bch| {
        bch.iter(|| black_box(ds.canonical_mask()))
    });
}

fn certificates(c: &mut Criterion) {
    let b9 = basis(3, 2);
    let xq = oval_graph_xq(&b9).unwrap();
    c.bench_function("certificate_xq_q9", |b| {
        b.iter(|| black_box(certificate(&xq.graph).unwrap()))
    });
    let vo = vo_plus(2, 3).unwrap();
    c.bench_function("certificate_vo_plus_4_3", |b| {
        b.iter(|| {
            black_box(peisert_core::constructions::form_certificate(&vo).unwrap())
        })
    });
}

fn census_row(c: &mut Criterion) {
    let b = basis(3, 2);
    b.pgammal_perms();
    c.bench_function("census_q9_full", |bch| {
        bch.iter(|| black_box(census(&b, 3..=7, None).unwrap()))
    });
}

criterion_group!(
    benches,
    field_arithmetic,
    clique_enumeration,
    orbit_canonicalization,
    certificates,
    census_row
);
criterion_main!(benches);
