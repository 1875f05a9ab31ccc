use std::sync::Arc;

use nichols::braiding::BraidedSpace;
use nichols::freealg::{jacobi_residual, Flavor, FreeElement};
use nichols::nichols::NicholsBasis;
use nichols::CycScalar;
use proptest::prelude::*;

fn scalar(order: u32) -> impl Strategy<Value = CycScalar> {
    prop::collection::vec(-3i64..=3, 0..6).prop_map(move |c| CycScalar::from_coeffs(order, &c))
}

fn diagonal_space(m: u32) -> impl Strategy<Value = Arc<BraidedSpace>> {
    prop::collection::vec(0..m as i64, 4).prop_map(move |e| {
        let q = vec![
            vec![CycScalar::zeta_pow(m, e[0]), CycScalar::zeta_pow(m, e[1])],
            vec![CycScalar::zeta_pow(m, e[2]), CycScalar::zeta_pow(m, e[3])],
        ];
        Arc::new(BraidedSpace::new(m, q).unwrap())
    })
}

fn element(space: Arc<BraidedSpace>) -> impl Strategy<Value = FreeElement> {
    // homogeneous: a word and a permutation of it
    (prop::collection::vec(1u8..=2, 1..4), any::<prop::sample::Index>(), -2i64..=2).prop_map(move |(w, idx, c)| {
        let mut p = w.clone();
        p.rotate_left(idx.index(w.len()));
        let c = CycScalar::from_int(space.order(), c);
        FreeElement::from_word(&space, &w).add(&FreeElement::from_word(&space, &p).scale(&c))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn field_axioms(a in scalar(12), b in scalar(12), c in scalar(12)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn c_bracket_is_swapped_std((space, seed) in diagonal_space(6).prop_flat_map(|s| (Just(s.clone()), (element(s.clone()), element(s))))) {
        let _ = &space;
        let (x, y) = seed;
        prop_assert_eq!(FreeElement::bracket(&x, &y, Flavor::C), FreeElement::bracket(&y, &x, Flavor::Std));
    }

    #[test]
    fn braided_jacobi(t in diagonal_space(6).prop_flat_map(|s| (element(s.clone()), element(s.clone()), element(s)))) {
        let (u, v, w) = t;
        prop_assert!(jacobi_residual(&u, &v, &w).is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn twists_preserve_hilbert_series(space in diagonal_space(4)) {
        let twin = Arc::new(space.twist_symmetrize().unwrap());
        let a = NicholsBasis::build(&space, 7).unwrap();
        let b = NicholsBasis::build(&twin, 7).unwrap();
        prop_assert_eq!(a.hilbert(), b.hilbert());
    }

    #[test]
    fn finite_hilbert_series_are_palindromic(space in diagonal_space(3)) {
        let basis = NicholsBasis::build(&space, 9).unwrap();
        if basis.is_finite() {
            let h = basis.hilbert();
            let rev: Vec<usize> = h.iter().rev().copied().collect();
            prop_assert_eq!(h, rev);
        }
    }

    #[test]
    fn snapshots_roundtrip(space in diagonal_space(4)) {
        let basis = NicholsBasis::build(&space, 5).unwrap();
        let snap = basis.to_snapshot();
        let text = serde_json::to_string(&snap).unwrap();
        let back: nichols::nichols::Snapshot = serde_json::from_str(&text).unwrap();
        let rebuilt = NicholsBasis::from_snapshot(&space, &back).unwrap();
        prop_assert_eq!(rebuilt.to_snapshot(), snap);
        prop_assert_eq!(rebuilt.hilbert(), basis.hilbert());
    }
}
