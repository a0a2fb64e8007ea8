use cfk_core::involutive::{phi_psi, staircase_involution, tensor_involution};
use cfk_core::standard::{seq_to_complex_in, sum_gamma0};
use cfk_core::*;

fn seq(s: &str) -> ParamSeq {
    s.parse().unwrap()
}

fn poly(terms: &[(i64, i64)]) -> LaurentPoly {
    LaurentPoly::from_terms(terms.iter().copied())
}

fn elem(monos: &[(u32, u32)], mode: Mode) -> RingElem {
    RingElem::from_monos(monos.iter().map(|&(u, v)| Mono::new(u, v)), mode)
}

fn single(idx: usize, m: Mono, mode: Mode) -> Chain {
    let mut c = Chain::new();
    c.insert(idx, RingElem::mono(m, mode));
    c
}

fn cable_example() -> ParamSeq {
    seq("[1,-2,-1,1,-1,1,2,-1]")
}

/// The (2,-1)-cable of the trefoil over the full ring: the standard complex of
/// its sequence plus the four UV diagonals.
fn cable_full_complex() -> ChainComplex {
    let mut c = seq_to_complex_in(&cable_example(), Mode::Full).unwrap();
    for (s, t) in [(0, 5), (1, 4), (7, 4), (8, 3)] {
        c.add_mono(s, t, Mono::new(1, 1)).unwrap();
    }
    c
}

#[test]
fn ring_arithmetic() {
    let f = Mode::Full;
    let u = elem(&[(1, 0)], f);
    let v = elem(&[(0, 1)], f);
    assert!(ring_add(&u, &u).unwrap().is_zero());
    assert_eq!(ring_add(&u, &v).unwrap(), elem(&[(1, 0), (0, 1)], f));
    assert_eq!(ring_add(&ring_add(&u, &v).unwrap(), &v).unwrap(), u);
    assert_eq!(ring_mul(&u, &v).unwrap(), elem(&[(1, 1)], f));
    let (uz, vz) = (u.with_mode(Mode::UvZero), v.with_mode(Mode::UvZero));
    assert!(ring_mul(&uz, &vz).unwrap().is_zero());
    assert_eq!(
        ring_mul(&elem(&[(2, 0)], f), &elem(&[(3, 0)], f)).unwrap(),
        elem(&[(5, 0)], f)
    );
    assert!(ring_add(&u, &uz).is_err());
}

#[test]
fn laurent_products() {
    assert_eq!(
        laurent_mul(&poly(&[(1, 1), (-1, 0)]), &poly(&[(1, -1), (-1, 0)])),
        poly(&[(-1, 1), (2, 0), (-1, -1)])
    );
    let p = poly(&[(1, 3), (-1, 2), (1, 0)]);
    assert_eq!(laurent_mul(&p, &LaurentPoly::one()), p);
    let d = alexander_torus(2, 3).unwrap();
    assert_eq!(
        laurent_mul(&d, &d),
        poly(&[(1, 2), (-2, 1), (3, 0), (-2, -1), (1, -2)])
    );
}

#[test]
fn torus_alexander_polynomials() {
    assert_eq!(
        alexander_torus(2, 3).unwrap(),
        poly(&[(1, 1), (-1, 0), (1, -1)])
    );
    assert_eq!(
        alexander_torus(4, 5).unwrap(),
        poly(&[(1, 6), (-1, 5), (1, 2), (-1, 0), (1, -2), (-1, -5), (1, -6)])
    );
    assert_eq!(
        alexander_torus(2, 7).unwrap(),
        poly(&[(1, 3), (-1, 2), (1, 1), (-1, 0), (1, -1), (-1, -2), (1, -3)])
    );
    assert!(alexander_torus(2, 4).is_err());
}

#[test]
fn validate_staircase_and_deleted_entry() {
    let mut c = seq_to_complex(&seq("[1,-1]")).unwrap();
    assert!(validate(&c).is_ok());
    c.remove_entry(1, 2);
    assert!(validate(&c).is_ok());
}

#[test]
fn cable_complex_needs_its_diagonals() {
    let full = cable_full_complex();
    assert_eq!(validate(&full), Ok(()));
    let bare = seq_to_complex_in(&cable_example(), Mode::Full).unwrap();
    match validate(&bare) {
        Err(Violation::DSquared { .. }) => {}
        other => panic!("expected a d^2 violation, got {other:?}"),
    }
}

#[test]
fn quotient_drops_exactly_the_diagonals() {
    let full = cable_full_complex();
    let q = quotient_uv(&full);
    assert_eq!(q.mode(), Mode::UvZero);
    assert_eq!(q.arrow_count(), full.arrow_count() - 4);
    assert_eq!(q, seq_to_complex(&cable_example()).unwrap());
    assert_eq!(quotient_uv(&q), q);
    let st = seq_to_complex(&seq("[1,-3,2,-2,3,-1]")).unwrap();
    assert_eq!(quotient_uv(&st), st);
}

#[test]
fn full_cable_pipeline() {
    let g = gamma0_pipeline(&cable_full_complex()).unwrap();
    assert_eq!(g.seq, cable_example());
    assert_eq!(g.closed_components, 0);
    assert_eq!(max_alexander(&cable_full_complex()).unwrap(), 2);
}

#[test]
fn tensor_with_unknot_is_identity() {
    let c = seq_to_complex(&seq("[1,-2,2,-1]")).unwrap();
    let u = seq_to_complex(&ParamSeq::unknot()).unwrap();
    let t = tensor(&c, &u).unwrap();
    assert_eq!(t.len(), c.len());
    assert_eq!(t.arrow_count(), c.arrow_count());
    assert_eq!(extract_gamma0(&t).unwrap(), seq("[1,-2,2,-1]"));
}

#[test]
fn trefoil_square() {
    let t = seq_to_complex(&seq("[1,-1]")).unwrap();
    let sq = tensor(&t, &t).unwrap();
    assert_eq!(sq.len(), 9);
    assert!(validate(&sq).is_ok());
    let r = reduce(&sq);
    assert_eq!(r.len(), 9);
    assert_eq!(max_alexander(&r).unwrap(), 2);
    let simple = simplify_basis(&quotient_uv(&r)).unwrap();
    let g = decompose(&simple).unwrap();
    assert_eq!(g.seq, seq("[1,-1,1,-1]"));
    assert_eq!(g.closed_components, 1);
}

#[test]
fn trefoil_times_dual_is_trivial() {
    let t = seq_to_complex(&seq("[1,-1]")).unwrap();
    let c = tensor(&t, &dual(&t)).unwrap();
    assert_eq!(c.len(), 9);
    assert!(gamma0_pipeline(&c).unwrap().seq.is_empty());
}

#[test]
fn t25_times_dual_trefoil() {
    let a = seq_to_complex(&seq("[1,-1,1,-1]")).unwrap();
    let b = dual(&seq_to_complex(&seq("[1,-1]")).unwrap());
    let r = reduce(&quotient_uv(&tensor(&a, &b).unwrap()));
    let simple = simplify_basis(&r).unwrap();
    assert_eq!(extract_gamma0(&simple).unwrap(), seq("[1,-1]"));
}

#[test]
fn dual_examples() {
    let t = seq_to_complex(&seq("[1,-1]")).unwrap();
    let d = dual(&t);
    assert_eq!(d.entry(0, 1), Some(&elem(&[(1, 0)], Mode::UvZero)));
    assert_eq!(d.entry(2, 1), Some(&elem(&[(0, 1)], Mode::UvZero)));
    assert_eq!(d.arrow_count(), 2);
    assert_eq!(extract_gamma0(&d).unwrap(), seq("[-1,1]"));
    let u = seq_to_complex(&ParamSeq::unknot()).unwrap();
    assert_eq!(dual(&u).len(), 1);
    assert_eq!(dual(&u).arrow_count(), 0);
}

#[test]
fn reduce_cancels_unit_arrow() {
    let text = "# mode FULL\nb 0 0\na -1 -1\nb -> a : U^0 V^0\n";
    let c: ChainComplex = text.parse().unwrap();
    assert!(reduce(&c).is_empty());
}

#[test]
fn vertical_homology_examples() {
    let t = seq_to_complex_in(&seq("[1,-1]"), Mode::Full).unwrap();
    let h = vertical_homology(&t).unwrap();
    assert_eq!((h.free_a, h.torsion.clone()), (-1, vec![1]));
    let d = vertical_homology(&dual(&t)).unwrap();
    assert_eq!((d.free_a, d.torsion), (1, vec![1]));
    let u = seq_to_complex_in(&ParamSeq::unknot(), Mode::Full).unwrap();
    let h = vertical_homology(&u).unwrap();
    assert_eq!((h.free_a, h.torsion.len()), (0, 0));
}

#[test]
fn max_alexander_examples() {
    let t45 = seq_to_complex(&seq("[1,-3,2,-2,3,-1]")).unwrap();
    assert_eq!(max_alexander(&t45).unwrap(), 6);
    let u = seq_to_complex(&ParamSeq::unknot()).unwrap();
    assert_eq!(max_alexander(&u).unwrap(), 0);
}

#[test]
fn standard_complex_shapes() {
    let t = seq_to_complex(&seq("[1,-1]")).unwrap();
    assert_eq!(t.boundary_of(1).len(), 2);
    let a: Vec<i64> = t.gens().iter().map(Generator::alexander).collect();
    assert_eq!(a, vec![1, 0, -1]);
    assert_eq!(seq_to_complex(&ParamSeq::unknot()).unwrap().len(), 1);
    let c = seq_to_complex(&cable_example()).unwrap();
    assert_eq!(c.len(), 9);
    assert_eq!(max_alexander(&c).unwrap(), 2);
}

#[test]
fn simplify_reaches_fixpoint() {
    let st = seq_to_complex(&seq("[1,-3,2,-2,3,-1]")).unwrap();
    assert_eq!(simplify_basis(&st).unwrap(), st);

    let a = seq_to_complex(&seq("[1,-1,1,-1]")).unwrap();
    let b = seq_to_complex(&seq("[1,-1,-1,1,1,-1]")).unwrap();
    let r = reduce(&quotient_uv(&tensor(&a, &b).unwrap()));
    let once = simplify_basis(&r).unwrap();
    assert_eq!(simplify_basis(&once).unwrap(), once);
    assert!(decompose(&once).is_ok());
}

#[test]
fn sequence_level_invariants() {
    let c = cable_example();
    assert_eq!(normalize_seq(&c).unwrap(), c);
    assert_eq!(normalize_seq(&seq("[1,-1]")).unwrap(), seq("[1,-1]"));
    assert!(normalize_seq(&seq("[1,-2]")).is_err());

    assert_eq!(top_alexander(&c), 2);
    assert_eq!(top_alexander(&seq("[1,-3,2,-2,3,-1]")), 6);
    assert_eq!(top_alexander(&ParamSeq::unknot()), 0);

    assert_eq!(tau(&seq("[1,-1]")), 1);
    assert_eq!(tau(&seq("[-1,1]")), -1);
    assert_eq!(tau(&c), 1);

    assert_eq!(epsilon(&seq("[1,-1]")), 1);
    assert_eq!(epsilon(&seq("[-1,1]")), -1);
    assert_eq!(epsilon(&ParamSeq::unknot()), 0);

    assert!(sharpness(1, &seq("[1,-1]")).unwrap().sharp);
    assert!(sharpness(2, &c).unwrap().sharp);
    assert!(!sharpness(1, &ParamSeq::unknot()).unwrap().sharp);
    assert!(sharpness(-1, &c).is_err());
}

#[test]
fn t45_walk_heights() {
    assert_eq!(
        seq("[1,-3,2,-2,3,-1]").a_walk(),
        vec![6, 5, 2, 0, -2, -5, -6]
    );
}

#[test]
fn staircases_from_polynomials() {
    let s = |p, q| staircase_from_alexander(&alexander_torus(p, q).unwrap()).unwrap();
    assert_eq!(s(4, 5), seq("[1,-3,2,-2,3,-1]"));
    assert_eq!(s(2, 3), seq("[1,-1]"));
    assert_eq!(s(2, 7), seq("[1,-1,1,-1,1,-1]"));
    assert!(staircase_from_alexander(&poly(&[(-1, 1), (3, 0), (-1, -1)])).is_err());
}

#[test]
fn cable_closed_forms() {
    assert_eq!(cable2(&seq("[1,-1]"), 1, -1).unwrap(), cable_example());
    let big = cable2(&seq("[1,-3,2,-2,3,-1]"), 6, 27).unwrap();
    assert_eq!(
        big,
        seq("[1,-7,1,-1,1,-5,1,-1,1,-1,1,-3,1,-1,3,-1,1,-1,1,-1,5,-1,1,-1,7,-1]")
    );
    assert_eq!(big.len(), 26);
    let c5 = cable2(&seq("[1,-1]"), 1, 5).unwrap();
    assert_eq!(c5, seq("[1,-3,3,-1]"));
    assert_eq!(top_alexander(&c5), 4);
    assert!(cable2(&seq("[1,-1]"), 1, 4).is_err());
    assert!(cable2(&seq("[1,-1,-1,1]"), 1, 5).is_err());
}

#[test]
fn sums_with_t2() {
    assert_eq!(
        sum_with_t2(&seq("[1,-1,1,-1]"), 3, 1).unwrap(),
        seq("[1,-1,1,-1,1,-1]")
    );
    assert_eq!(
        sum_with_t2(&seq("[1,-1,1,-1]"), 3, -1).unwrap(),
        seq("[1,-1]")
    );
    assert!(sum_with_t2(&cable_example(), 5, 1).is_err());
    for (s, q, sign) in [
        ("[1,-1,1,-1]", 3, 1),
        ("[1,-1,1,-1]", 3, -1),
        ("[1,-2,2,-1]", 5, -1),
    ] {
        let t2 = staircase_from_alexander(&alexander_torus(2, q).unwrap()).unwrap();
        let t2 = if sign > 0 { t2 } else { t2.negate() };
        let oracle = sum_gamma0(&seq(s), &t2).unwrap().seq;
        assert_eq!(
            sum_with_t2(&seq(s), q, sign).unwrap(),
            oracle,
            "{s} {q} {sign}"
        );
    }
}

#[test]
fn expression_evaluation() {
    let ev = |s: &str| eval(&parse_expr(s).unwrap()).unwrap().gamma0;
    assert_eq!(ev("T(2,3)"), seq("[1,-1]"));
    assert!(ev("T(2,3) # -T(2,3)").is_empty());
    assert_eq!(ev("C2(-1; T(2,3))"), cable_example());
    assert_eq!(ev("T(4,5)"), seq("[1,-3,2,-2,3,-1]"));
    let e = parse_expr("C2(5; T(2,3)) # -C2(7; T(2,3)) # T(2,7) # -T(2,5)").unwrap();
    assert_eq!(e.summands().len(), 4);
}

#[test]
fn local_equivalence_examples() {
    let le = |a: &str, b: &str| {
        locally_equivalent(&parse_expr(a).unwrap(), &parse_expr(b).unwrap()).unwrap()
    };
    assert!(le("T(2,3) # -T(2,3)", "U"));
    assert!(le("C2(5;T(2,3)) # T(2,7)", "C2(7;T(2,3)) # T(2,5)"));
    assert!(!le("C2(3;T(2,3)) # T(2,5)", "C2(5;T(2,3)) # T(2,3)"));
}

#[test]
fn p_knot_construction() {
    let k = KnotExpr::torus(2, 3).unwrap();
    let p = p_knot(&k, 5, 7).unwrap();
    assert_eq!(p.summands().len(), 4);
    assert_eq!(
        p,
        parse_expr("C2(5;T(2,3)) # -C2(7;T(2,3)) # T(2,7) # -T(2,5)").unwrap()
    );
    assert!(p_knot(&k, 1, 3).is_ok());
    assert!(p_knot(&k, 3, 3).is_err());
}

#[test]
fn tau_and_genus_formulas() {
    assert_eq!(tau_cable_formula(1, 1, 2, -1).unwrap(), 1);
    assert_eq!(tau_cable_formula(0, 0, 2, 7).unwrap(), 3);
    assert_eq!(tau_cable_formula(0, 0, 2, -3).unwrap(), -1);
    assert!(tau_cable_formula(-1, -1, 2, 3).is_err());
    assert_eq!(cable_genus(1, 2, -1).unwrap(), 2);
    assert_eq!(cable_genus(6, 2, 27).unwrap(), 25);
    assert_eq!(cable_genus(0, 2, 7).unwrap(), 3);
    assert!(cable_genus(1, 2, 0).is_err());
}

#[test]
fn basic_involutions() {
    let t = staircase_involution(&seq("[1,-1]"), Mode::UvZero).unwrap();
    let img: Vec<usize> = (0..3)
        .map(|i| *t.iota.image_of(i).keys().next().unwrap())
        .collect();
    assert_eq!(img, vec![2, 1, 0]);

    let t45 = staircase_involution(&seq("[1,-3,2,-2,3,-1]"), Mode::Full).unwrap();
    for i in 0..7 {
        assert_eq!(
            t45.iota.image_of(i).keys().copied().collect::<Vec<_>>(),
            vec![6 - i]
        );
    }

    let u = staircase_involution(&ParamSeq::unknot(), Mode::UvZero).unwrap();
    assert_eq!(
        u.iota.image_of(0).keys().copied().collect::<Vec<_>>(),
        vec![0]
    );

    let nonstair = seq_to_complex(&cable_example()).unwrap();
    assert!(basic_involution(&nonstair).is_err());
}

#[test]
fn phi_psi_examples() {
    let m = Mode::Full;
    let t = seq_to_complex_in(&seq("[1,-1]"), m).unwrap();
    let (phi, psi) = phi_psi(&t);
    assert_eq!(phi.image_of(1), &single(0, Mono::ONE, m));
    assert_eq!(psi.image_of(1), &single(2, Mono::ONE, m));
    assert!(phi.image_of(0).is_empty() && phi.image_of(2).is_empty());

    let u = seq_to_complex_in(&ParamSeq::unknot(), m).unwrap();
    let (phi, psi) = phi_psi(&u);
    assert!(phi.image_of(0).is_empty() && psi.image_of(0).is_empty());

    let t45 = seq_to_complex_in(&seq("[1,-3,2,-2,3,-1]"), m).unwrap();
    let (phi, psi) = phi_psi(&t45);
    assert_eq!(phi.image_of(1), &single(0, Mono::ONE, m));
    assert!(phi.image_of(3).is_empty());
    assert_eq!(phi.image_of(5), &single(4, Mono::new(2, 0), m));
    assert!(phi.is_chain_map(&t45) && psi.is_chain_map(&t45));
}

#[test]
fn tensor_involutions() {
    let m = Mode::Full;
    let t = staircase_involution(&seq("[1,-1]"), m).unwrap();
    let u = staircase_involution(&ParamSeq::unknot(), m).unwrap();
    let tu = tensor_involution(&t, &u).unwrap();
    assert_eq!(tu.iota, t.iota);

    let tt = tensor_involution(&t, &t).unwrap();
    assert!(tt.iota.is_chain_map(&tt.complex));
    assert_eq!(tt.complex.len(), 9);
}

#[test]
fn basis_identities() {
    for q in [3, 5] {
        let rep = verify_basis_identities(&seq("[1,-1,1,-1]"), q, CoefficientRule::Mod2).unwrap();
        assert!(
            rep.passed(),
            "q={q}: {:?}",
            rep.failures().collect::<Vec<_>>()
        );
    }
    assert!(verify_basis_identities(&cable_example(), 3, CoefficientRule::Mod2).is_err());
}

#[test]
fn basis_family_sizes() {
    let fam = build_xyz_basis(&seq("[1,-1,1,-1]"), 3, CoefficientRule::Mod2).unwrap();
    assert_eq!(fam.x.len(), 2 * fam.n + 2 + 2 * fam.n + 1);
    let fam = build_xyz_basis(&seq("[1,-1,1,-1]"), 5, CoefficientRule::Mod2).unwrap();
    assert_eq!(fam.n, 1);
    assert_eq!(fam.y.len(), 1);
    assert_eq!(fam.y_prime.len(), 1);
    assert_eq!((fam.z.len(), fam.z_prime.len()), (1, 1));
    let total =
        fam.x.len() + 4 * (fam.y.len() + fam.y_prime.len() + fam.z.len() + fam.z_prime.len());
    assert_eq!(total, (4 * fam.n + 1) * 5);
}

#[test]
fn svg_examples() {
    let ev = |s: &str| eval(&parse_expr(s).unwrap()).unwrap().gamma0;
    let u = render_svg(&ev("U"));
    assert_eq!(u.matches("<path").count(), 0);
    assert_eq!(u.matches("class=\"lead\"").count(), 2);
    let c = render_svg(&ev("C2(-1;T(2,3))"));
    assert_eq!(c.matches("class=\"arc right\"").count(), 4);
    assert_eq!(c.matches("class=\"peg\"").count(), 5);
    assert_eq!(render_svg(&ev("C2(-1;T(2,3))")), c);
}
