use criterion::{black_box, criterion_group, criterion_main, Criterion};
use qdouble_core::algebra::tensor_multiply;
use qdouble_core::twist::{delta_j, TwistedAq};
use qdouble_core::{
    build_double, build_twist_j, build_uqb, identify_generators, Algebra, CartanType, HopfAlgebra, CyclotomicField,
    IdempotentAlgebra,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cyclotomic(c: &mut Criterion) {
    let f = CyclotomicField::get(25);
    let a = f.zeta_pow(3) + f.from_int(2) + f.zeta_pow(11);
    let b = f.zeta_pow(7) - f.one() + f.zeta_pow(19);
    c.bench_function("cyclotomic mul, m=25", |bch| bch.iter(|| black_box(&a) * black_box(&b)));
    c.bench_function("cyclotomic inverse, m=25", |bch| bch.iter(|| black_box(&a).inverse().unwrap()));
}

fn uqb_products(c: &mut Criterion) {
    let u = build_uqb(CartanType::A2, 5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let pairs: Vec<_> = (0..64)
        .map(|_| (u.random_monomial(&mut rng), u.random_monomial(&mut rng)))
        .collect();
    c.bench_function("u_q(b) A2 n=5 basis product", |bch| {
        bch.iter(|| {
            for (a, b) in &pairs {
                black_box(u.mul_basis(a, b));
            }
        })
    });
}

fn twisted_coproduct(c: &mut Criterion) {
    let u = build_uqb(CartanType::A1, 5).unwrap();
    let j = build_twist_j(&u);
    let fine = IdempotentAlgebra::new(u.clone(), u.m());
    let e = u.e(0);
    c.bench_function("Δ_J(e) A1 n=5", |bch| bch.iter(|| delta_j(&u, &j, &fine, black_box(&e)).unwrap()));

    let tw = TwistedAq::new(&u, &j).unwrap();
    let gens = tw.generators();
    let x = tw.delta(&gens[0].1);
    let y = tw.delta(&gens[gens.len() - 1].1);
    c.bench_function("A_q⊗A_q product A1 n=5", |bch| {
        bch.iter(|| tensor_multiply(&tw.bold, black_box(&x), black_box(&y)).unwrap())
    });
}

fn double_products(c: &mut Criterion) {
    let d = build_double(&build_uqb(CartanType::A1, 3).unwrap()).unwrap();
    let g = identify_generators(&d);
    let ef = d.multiply(&g.e, &g.f);
    c.bench_function("double A1 n=3 product", |bch| bch.iter(|| d.multiply(black_box(&ef), black_box(&g.k))));
    c.bench_function("double A1 n=3 coproduct", |bch| bch.iter(|| HopfAlgebra::coproduct(&d, black_box(&ef))));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = cyclotomic, uqb_products, twisted_coproduct, double_products
}
criterion_main!(benches);
