use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use supertorsion::class_invariants::demjanenko_det;
use supertorsion::intmat::smith_diagonal;
use supertorsion::matrix::MatLocal;
use supertorsion::poly::parse_poly;
use supertorsion::unit_lattices::reduced_u_lr;
use supertorsion::{CycloElt, RingCtx};

fn ring(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let ctx = RingCtx::new(11, 40).unwrap();
    let x = CycloElt::random(ctx, &mut rng);
    let y = CycloElt::random(ctx, &mut rng);
    c.bench_function("mul l=11 n=40", |b| b.iter(|| black_box(&x).mul(black_box(&y)).unwrap()));
    let u = x.shift_up(2);
    c.bench_function("exp l=11 n=40", |b| b.iter(|| black_box(&u).exp().unwrap()));
}

fn matrices(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let ctx = RingCtx::new(11, 10).unwrap();
    let a = MatLocal::random_level(ctx, 7, 0, &mut rng);
    let b = MatLocal::random_level(ctx, 7, 0, &mut rng);
    c.bench_function("matmul d=7 l=11 n=10", |bch| bch.iter(|| black_box(&a).mul(black_box(&b)).unwrap()));
    c.bench_function("det_local d=7 l=11 n=10", |bch| bch.iter(|| black_box(&a).det_local()));
}

fn invariants(c: &mut Criterion) {
    c.bench_function("demjanenko l=31 r=8", |b| b.iter(|| demjanenko_det(black_box(31), 8, None).unwrap()));
    let m: Vec<Vec<BigInt>> = (0..12)
        .map(|i| (0..12).map(|j| BigInt::from((i * 7 + j * 13 + i * j) % 29 - 14)).collect())
        .collect();
    c.bench_function("smith 12x12", |b| b.iter(|| smith_diagonal(black_box(&m))));
    c.bench_function("reduced units l=11 r=8", |b| b.iter(|| reduced_u_lr(11, 8, 10).unwrap()));
}

fn polys(c: &mut Criterion) {
    let f = parse_poly("x^12 - 3*x^7 + 5*x^2 - x + 1").unwrap();
    c.bench_function("discriminant deg 12", |b| b.iter(|| black_box(&f).discriminant().unwrap()));
}

criterion_group!(benches, ring, matrices, invariants, polys);
criterion_main!(benches);
