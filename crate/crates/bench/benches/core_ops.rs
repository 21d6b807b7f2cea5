//! Benchmarks for the hot paths: blade products and inverses in the
//! algebra, operator lifts and their inversion, resolvent identity
//! evaluation, and contour quadrature.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use slicecalc::calculus::{apply, CalculusKind};
use slicecalc::operators::random_commuting_operator;
use slicecalc::resolvents::{check_identity, q_c_inverse, sample_point_pair, IdentityId};
use slicecalc::{
    Contour, Multivector, Paravector, Side, StemPolynomial, UnitImaginary, BLADE_COUNT,
};

fn dense_multivector(rng: &mut impl Rng) -> Multivector {
    let mut c = [0.0; BLADE_COUNT];
    for v in c.iter_mut() {
        *v = rng.random_range(-1.0..1.0);
    }
    Multivector::from_coeffs(5, c).expect("in-range coefficients")
}

fn bench_algebra(c: &mut Criterion) {
    let mut rng = ChaCha12Rng::seed_from_u64(1);
    let a = dense_multivector(&mut rng);
    let b = dense_multivector(&mut rng);
    c.bench_function("multivector_product", |bch| {
        bch.iter(|| black_box(a) * black_box(b));
    });
    let p = Paravector::new(0.7, [0.3, -0.4, 0.1, 0.0, 0.2]);
    c.bench_function("paravector_inverse", |bch| {
        bch.iter(|| black_box(p).inverse().unwrap());
    });
}

fn bench_operators(c: &mut Criterion) {
    let mut rng = ChaCha12Rng::seed_from_u64(2);
    let t = random_commuting_operator(5, 4, &mut rng, false);
    let (s, _) = sample_point_pair(&t, &mut rng).expect("admissible sample");
    c.bench_function("pseudo_resolvent_inverse_d4", |bch| {
        bch.iter(|| q_c_inverse(black_box(s), black_box(&t)).unwrap());
    });
}

fn bench_identities(c: &mut Criterion) {
    let mut rng = ChaCha12Rng::seed_from_u64(3);
    let t = random_commuting_operator(5, 2, &mut rng, false);
    let (s, p) = sample_point_pair(&t, &mut rng).expect("admissible sample");
    c.bench_function("identity_check_left_resolvent_d2", |bch| {
        bch.iter(|| {
            check_identity(IdentityId::LeftSResolvent, black_box(&t), s, p, None).unwrap()
        });
    });
}

fn bench_calculus(c: &mut Criterion) {
    let evs = [
        Paravector::new(0.6, [0.8, 0.0, 0.0, 0.0, 0.0]),
        Paravector::new(-1.2, [0.0, 1.6, 0.0, 0.0, 0.0]),
    ];
    let t = slicecalc::ParavectorOperator::commuting(5, &evs, None).unwrap();
    let f = StemPolynomial::monomial(Side::Left, 5, 3);
    let contour = Contour::new(0.0, 2.3, UnitImaginary::axis(5, 1), 64).unwrap();
    c.bench_function("slice_calculus_cubic_64_nodes", |bch| {
        bch.iter(|| apply(CalculusKind::Slice, black_box(&f), black_box(&t), &contour).unwrap());
    });
}

criterion_group!(
    benches,
    bench_algebra,
    bench_operators,
    bench_identities,
    bench_calculus
);
criterion_main!(benches);
