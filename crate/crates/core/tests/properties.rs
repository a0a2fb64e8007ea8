use cfk_core::involutive::{phi_psi, staircase_involution, tensor_involution};
use cfk_core::standard::seq_to_complex_in;
use cfk_core::*;
use proptest::prelude::*;

fn symmetric(half: Vec<(i64, bool)>) -> ParamSeq {
    let half: Vec<i64> = half
        .into_iter()
        .map(|(m, neg)| if neg { -m } else { m })
        .collect();
    let mut full = half.clone();
    full.extend(half.iter().rev().map(|e| -e));
    ParamSeq::new(full).unwrap()
}

fn seq_strategy(max_half: usize) -> impl Strategy<Value = ParamSeq> {
    prop::collection::vec((1i64..=5, any::<bool>()), 0..=max_half).prop_map(symmetric)
}

fn staircase_strategy() -> impl Strategy<Value = ParamSeq> {
    prop::collection::vec((1i64..=3, 1i64..=3), 0..=3).prop_map(|pairs| {
        let half: Vec<i64> = pairs.iter().flat_map(|&(a, b)| [a, -b]).collect();
        let mut full = half.clone();
        full.extend(half.iter().rev().map(|e| -e));
        ParamSeq::new(full).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn standard_complex_round_trip(s in seq_strategy(10)) {
        let c = seq_to_complex(&s).unwrap();
        prop_assert_eq!(validate(&c), Ok(()));
        prop_assert_eq!(extract_gamma0(&simplify_basis(&c).unwrap()).unwrap(), s);
    }

    #[test]
    fn tau_bounded_by_top(s in seq_strategy(10)) {
        prop_assert!(tau(&s).abs() <= top_alexander(&s));
        prop_assert!(top_alexander(&s) >= 0);
    }

    #[test]
    fn dual_negates_invariants(s in seq_strategy(8)) {
        let d = dual(&seq_to_complex(&s).unwrap());
        prop_assert_eq!(validate(&d), Ok(()));
        let g = extract_gamma0(&d).unwrap();
        prop_assert_eq!(&g, &s.negate());
        prop_assert_eq!(tau(&g), -tau(&s));
        prop_assert_eq!(epsilon(&g), -epsilon(&s));
    }

    #[test]
    fn vertical_homology_reads_tau(s in staircase_strategy()) {
        let c = seq_to_complex_in(&s, Mode::Full).unwrap();
        prop_assert_eq!(vertical_homology(&c).unwrap().free_a, -tau(&s));
        prop_assert_eq!(max_alexander(&c).unwrap(), top_alexander(&s));
    }

    #[test]
    fn relabeling_does_not_change_gamma0(s in seq_strategy(6), t in seq_strategy(3)) {
        let c = tensor(&seq_to_complex(&s).unwrap(), &seq_to_complex(&t).unwrap()).unwrap();
        let n = c.len();
        let renamed = c.with_ids(|i, _| format!("g{:04}", n - i)).unwrap();
        let a = gamma0_pipeline(&c).unwrap();
        let b = gamma0_pipeline(&renamed).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.seq.is_symmetric());
    }

    #[test]
    fn tensor_pipeline_is_commutative(s in seq_strategy(4), t in seq_strategy(4)) {
        let a = cfk_core::standard::sum_gamma0(&s, &t).unwrap();
        let b = cfk_core::standard::sum_gamma0(&t, &s).unwrap();
        prop_assert_eq!(a.seq, b.seq);
    }

    #[test]
    fn sum_with_own_mirror_is_trivial(s in seq_strategy(5)) {
        let g = cfk_core::standard::sum_gamma0(&s, &s.negate()).unwrap();
        prop_assert!(g.seq.is_empty());
    }

    #[test]
    fn staircase_involution_squares_to_identity(s in staircase_strategy()) {
        let d = staircase_involution(&s, Mode::Full).unwrap();
        let sq = d.iota.compose(&d.iota);
        for i in 0..d.complex.len() {
            let img: Vec<usize> = sq.image_of(i).keys().copied().collect();
            prop_assert_eq!(img, vec![i]);
        }
        let (phi, psi) = phi_psi(&d.complex);
        prop_assert!(phi.is_chain_map(&d.complex));
        prop_assert!(psi.is_chain_map(&d.complex));
    }

    #[test]
    fn tensor_involution_is_chain_map(s in staircase_strategy(), t in staircase_strategy()) {
        let a = staircase_involution(&s, Mode::Full).unwrap();
        let b = staircase_involution(&t, Mode::Full).unwrap();
        let ab = tensor_involution(&a, &b).unwrap();
        prop_assert_eq!(validate(&ab.complex), Ok(()));
        prop_assert!(ab.iota.is_chain_map(&ab.complex));
        prop_assert!(ab.iota.respects_grading(&ab.complex));
    }

    #[test]
    fn sequence_text_round_trip(s in seq_strategy(10)) {
        let back: ParamSeq = s.to_string().parse().unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn complex_text_round_trip(s in staircase_strategy()) {
        let c = seq_to_complex_in(&s, Mode::Full).unwrap();
        let back: ChainComplex = c.to_string().parse().unwrap();
        prop_assert_eq!(back, c);
    }
}
