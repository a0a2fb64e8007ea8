use cfk_core::{
    eval, gamma0_pipeline, p_knot, parse_expr, seq_to_complex, tensor, verify_basis_identities,
    CoefficientRule, KnotExpr, ParamSeq,
};
use criterion::{black_box, criterion_group, criterion_main, Criterion};

fn seq(s: &str) -> ParamSeq {
    s.parse().unwrap()
}

fn tensor_pipeline(c: &mut Criterion) {
    let a = seq_to_complex(&seq("[1,-2,2,-1]")).unwrap();
    let b = seq_to_complex(&seq("[1,-3,2,-2,3,-1]")).unwrap();
    let prod = tensor(&a, &b).unwrap();
    c.bench_function("gamma0 of T(3,4) x T(4,5)", |bch| {
        bch.iter(|| gamma0_pipeline(black_box(&prod)).unwrap())
    });
}

fn closed_forms(c: &mut Criterion) {
    let e = parse_expr("C2(13; T(3,4)) # -C2(15; T(3,4)) # T(2,5)").unwrap();
    c.bench_function("eval cable sum", |bch| {
        bch.iter(|| eval(black_box(&e)).unwrap())
    });

    let k = KnotExpr::torus(3, 4).unwrap();
    c.bench_function("p_knot T(3,4), 13, 15", |bch| {
        bch.iter(|| eval(&p_knot(black_box(&k), 13, 15).unwrap()).unwrap())
    });
}

fn involutive(c: &mut Criterion) {
    let s = seq("[1,-2,2,-1]");
    c.bench_function("basis identities T(3,4), q=7", |bch| {
        bch.iter(|| verify_basis_identities(black_box(&s), 7, CoefficientRule::Mod2).unwrap())
    });
}

criterion_group!(benches, tensor_pipeline, closed_forms, involutive);
criterion_main!(benches);
