use proptest::prelude::*;

use selfsim_core::measure::exact_level_measure;
use selfsim_core::{
    carpet_family, exact_overlap_at, overlap_search, separation_profile, OverlapKind, Param,
    RationalScalar, Word,
};

fn r(p: i64, q: i64) -> RationalScalar {
    RationalScalar::new(p, q)
}

fn slope() -> impl Strategy<Value = RationalScalar> {
    (1i64..=7).prop_flat_map(|q| (0..=10 * q).prop_map(move |p| r(p, q)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn witnesses_exist_iff_collision(u in slope(), n in 1usize..=3) {
        let f = carpet_family();
        let witnesses = overlap_search(&f, &u, n).unwrap();
        let sep = separation_profile(&f, &Param::Exact(u), n).unwrap();
        prop_assert_eq!(!witnesses.is_empty(), sep.has_collision[n - 1]);
    }

    #[test]
    fn collision_iff_fewer_atoms_than_words(u in slope(), n in 1usize..=4) {
        let f = carpet_family();
        let sep = separation_profile(&f, &Param::Exact(u.clone()), n).unwrap();
        let atoms = exact_level_measure(&f, &u, n).unwrap().len();
        prop_assert_eq!(sep.has_collision[n - 1], atoms < 8usize.pow(n as u32));
    }

    #[test]
    fn witnesses_verify_and_are_reduced(u in slope()) {
        let f = carpet_family();
        for w in overlap_search(&f, &u, 2).unwrap() {
            prop_assert!(exact_overlap_at(&f, &u, &w.word_i, &w.word_j).unwrap());
            prop_assert_eq!(&w.kind, &OverlapKind::AtParameter(u.clone()));
            let (a, b) = (w.word_i.symbols(), w.word_j.symbols());
            prop_assert!(a < b);
            prop_assert!(a[0] != b[0] && a[a.len() - 1] != b[b.len() - 1]);
        }
    }

    #[test]
    fn collisions_persist_and_gaps_shrink(u in slope()) {
        let f = carpet_family();
        let sep = separation_profile(&f, &Param::Exact(u), 6).unwrap();
        for k in 1..sep.len() {
            prop_assert!(sep.has_collision[k] >= sep.has_collision[k - 1]);
            let (Param::Exact(a), Param::Exact(b)) = (&sep.delta_n[k - 1], &sep.delta_n[k]) else {
                panic!("exact lane returned a float gap");
            };
            prop_assert!(b.clone() * RationalScalar::integer(3) <= a.clone());
            prop_assert!(sep.rho_n[k] <= 1.0);
        }
    }

    #[test]
    fn float_lane_never_reports_collisions(x in 0.0f64..10.0) {
        let sep = separation_profile(&carpet_family(), &Param::Float(x), 4).unwrap();
        prop_assert!(sep.has_collision.iter().all(|&c| !c));
        prop_assert!(sep.delta_n.iter().all(|d| !d.is_exact()));
    }

    #[test]
    fn non_witness_pairs_do_not_collide(u in slope(), i in 0u64..64, j in 0u64..64) {
        // two-letter words whose base points differ must not be reported
        let f = carpet_family();
        let (a, b) = (Word::from_index(i, 2, 8), Word::from_index(j, 2, 8));
        let pa = f.maps()[a.symbols()[0] - 1].translation.eval(&u)
            + f.maps()[a.symbols()[1] - 1].translation.eval(&u) * r(1, 3);
        let pb = f.maps()[b.symbols()[0] - 1].translation.eval(&u)
            + f.maps()[b.symbols()[1] - 1].translation.eval(&u) * r(1, 3);
        prop_assert_eq!(exact_overlap_at(&f, &u, &a, &b).unwrap(), pa == pb);
    }
}

#[test]
fn depth_one_gap_at_one_third() {
    let sep = separation_profile(&carpet_family(), &Param::Exact(r(1, 3)), 1).unwrap();
    assert_eq!(sep.delta_n[0], Param::Exact(r(1, 3)));
    assert!(!sep.has_collision[0]);
}
