use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use hk4_core::h4::{build_l, build_m_rho_tilde, fujiki_pair, sym2_embed, ProductPairing};
use hk4_core::linalg::{hnf, snf, Mat};
use hk4_core::{bb, sample, H2Class};

fn random_int_mat(seed: u64, rows: usize, cols: usize) -> Mat {
    let mut rng = sample::rng(seed);
    let data: Vec<Vec<i64>> = (0..rows)
        .map(|_| sample::random_class(&mut rng, 9).coords()[..cols].to_vec())
        .collect();
    let r: Vec<&[i64]> = data.iter().map(Vec::as_slice).collect();
    Mat::from_i64(&r)
}

fn bench_normal_forms(c: &mut Criterion) {
    let m = random_int_mat(1, 23, 20);
    c.bench_function("hnf_23x20", |b| b.iter(|| hnf(black_box(&m)).unwrap()));
    c.bench_function("snf_23x20", |b| b.iter(|| snf(black_box(&m)).unwrap()));
    let mr = build_m_rho_tilde().unwrap();
    let mut g = c.benchmark_group("m_rho");
    g.sample_size(10);
    g.bench_function("snf_m_rho_tilde", |b| b.iter(|| snf(black_box(&mr)).unwrap()));
    g.finish();
}

fn bench_build_l(c: &mut Criterion) {
    let d = bb::BbSpace::get().delta0();
    let mut g = c.benchmark_group("build_l");
    g.sample_size(10);
    g.bench_function("build_l_delta0", |b| b.iter(|| build_l(black_box(&d)).unwrap()));
    g.finish();
}

fn bench_fujiki(c: &mut Criterion) {
    let mut rng = sample::rng(2);
    let a: Vec<H2Class> = (0..4).map(|_| sample::random_class(&mut rng, 3)).collect();
    let u = sym2_embed(&a[0], &a[1]);
    let v = sym2_embed(&a[2], &a[3]);
    c.bench_function("fujiki_pair_products", |b| {
        b.iter(|| fujiki_pair(black_box(&u), black_box(&v)))
    });
    c.bench_function("product_pairing_eval", |b| {
        b.iter(|| ProductPairing::new(black_box(&u)).eval(&a[2], &a[3]))
    });
}

criterion_group!(benches, bench_normal_forms, bench_build_l, bench_fujiki);
criterion_main!(benches);
