//! Randomised laws at sizes beyond the exhaustive bounds.

use hereditary::bialgebra::{canonical_form, comultiply, counit, Family};
use hereditary::groupoid::{homotopy_cardinality, FiniteGroupoid};
use hereditary::io::{lincomb_text, parse_terms_text, terms};
use hereditary::maps::Surjection;
use hereditary::rational::{q, q_int, LinComb};
use hereditary::species::{Graphs, HStructure, HereditarySpecies};
use proptest::prelude::*;

fn graph(max: usize) -> impl Strategy<Value = HStructure> {
    (1..=max).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
            HStructure::new(n, pairs.zip(bits).filter(|(_, on)| *on).map(|(e, _)| e).collect())
        })
    })
}

/// Relabels the values of an arbitrary map in order of first appearance,
/// which makes it a surjection onto `0..k`.
fn surjection_from(values: &[usize]) -> Surjection {
    let mut seen: Vec<usize> = Vec::new();
    let relabelled = values
        .iter()
        .map(|v| match seen.iter().position(|s| s == v) {
            Some(p) => p,
            None => {
                seen.push(*v);
                seen.len() - 1
            }
        })
        .collect();
    Surjection::new(seen.len(), relabelled).unwrap()
}

fn graph_and_chain() -> impl Strategy<Value = (HStructure, Surjection, Surjection)> {
    graph(6).prop_flat_map(|g| {
        let n = g.n;
        (Just(g), proptest::collection::vec(0..n, n)).prop_flat_map(|(g, first)| {
            let s = surjection_from(&first);
            let m = s.target();
            (Just(g), Just(s), proptest::collection::vec(0..m, m)).prop_map(|(g, s, second)| (g, s, surjection_from(&second)))
        })
    })
}

proptest! {
    #[test]
    fn canonical_form_ignores_labels(g in graph(6), seed in any::<u64>()) {
        let n = g.n;
        let mut perm: Vec<usize> = (0..n).collect();
        let mut state = seed;
        for i in (1..n).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (state >> 33) as usize % (i + 1));
        }
        let relabelled = Graphs.quotient_along(&g, &Surjection::new(n, perm).unwrap());
        prop_assert_eq!(relabelled.payload.len(), g.payload.len());
        prop_assert_eq!(canonical_form(&Graphs, &g), canonical_form(&Graphs, &relabelled));
    }

    #[test]
    fn quotients_compose(case in graph_and_chain()) {
        let (g, s, t) = case;
        let at_once = Graphs.quotient_along(&g, &s.then(&t).unwrap());
        let stepwise = Graphs.quotient_along(&Graphs.quotient_along(&g, &s), &t);
        prop_assert_eq!(at_once, stepwise);
    }

    #[test]
    fn counit_laws(g in graph(5)) {
        let f = Family::from_structures(&Graphs, &[g]).unwrap();
        let d = comultiply(&Graphs, &f);
        let mut left = LinComb::zero();
        let mut right = LinComb::zero();
        for ((a, b), c) in d.iter() {
            left.add_term(b.clone(), c * counit(a));
            right.add_term(a.clone(), c * counit(b));
        }
        prop_assert_eq!(&left, &LinComb::basis(f.clone()));
        prop_assert_eq!(&right, &LinComb::basis(f));
    }

    #[test]
    fn text_round_trip(g in graph(5)) {
        let d = comultiply(&Graphs, &Family::from_structures(&Graphs, &[g]).unwrap());
        prop_assert_eq!(parse_terms_text(&lincomb_text(&d)).unwrap(), terms(&d));
    }

    #[test]
    fn cancellation_leaves_nothing(entries in proptest::collection::vec((0u8..6, -5i64..5, 1i64..5), 0..12)) {
        let mut a = LinComb::zero();
        for (b, n, d) in &entries {
            a.add_term(*b, q(*n, *d));
        }
        prop_assert!(a.iter().all(|(_, c)| *c != q_int(0)));
        let mut sum = a.clone();
        sum.add_scaled(&a, &q_int(-1));
        prop_assert!(sum.is_zero());
    }

    #[test]
    fn cardinality_of_products(a in 1usize..6, b in 1usize..6) {
        let p = FiniteGroupoid::product(&FiniteGroupoid::cyclic(a), &FiniteGroupoid::cyclic(b));
        prop_assert_eq!(homotopy_cardinality(&p), q(1, (a * b) as i64));
    }
}
