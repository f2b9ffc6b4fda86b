use std::sync::Arc;

use proptest::prelude::*;
use qlab_core::order::{is_sup_morphism, right_adjoint, FinitePreorder, FiniteSupLattice, MonotoneMap, OrderAdjunction};
use qlab_core::sweep::{lattices_up_to, monotone_maps, preorders};

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

prop_compose! {
    fn arb_preorder(max: usize)(n in 1..=max)(pairs in prop::collection::vec((0..n, 0..n), 0..2 * n), n in Just(n)) -> FinitePreorder {
        FinitePreorder::generated(names(n), &pairs).unwrap()
    }
}

fn some_lattice() -> impl Strategy<Value = FiniteSupLattice> {
    let all = lattices_up_to(4);
    (0..all.len()).prop_map(move |i| all[i].clone())
}

proptest! {
    #[test]
    fn generated_relations_are_preorders(p in arb_preorder(6)) {
        let n = p.len();
        for a in 0..n {
            prop_assert!(p.leq(a, a));
            for b in 0..n {
                for c in 0..n {
                    prop_assert!(!(p.leq(a, b) && p.leq(b, c)) || p.leq(a, c));
                }
            }
        }
        prop_assert_eq!(p.is_antisymmetric(), p.first_equivalent_pair().is_none());
    }

    #[test]
    fn covers_regenerate(p in arb_preorder(6)) {
        let again = FinitePreorder::generated(p.names().to_vec(), &p.covers()).unwrap();
        prop_assert_eq!(again, p);
    }

    #[test]
    fn joins_are_least_upper_bounds(l in some_lattice(), mask in 0u32..16) {
        let subset: Vec<usize> = (0..l.len()).filter(|i| mask >> i & 1 == 1).collect();
        let (join, meet) = l.bounds(&subset);
        let n = l.len();
        for u in 0..n {
            let upper = subset.iter().all(|&a| l.leq(a, u));
            prop_assert_eq!(upper, l.leq(join, u));
            let lower = subset.iter().all(|&a| l.leq(u, a));
            prop_assert_eq!(lower, l.leq(u, meet));
        }
    }

    #[test]
    fn meet_and_join_absorb(l in some_lattice(), a in 0usize..4, b in 0usize..4) {
        let (a, b) = (a % l.len(), b % l.len());
        prop_assert_eq!(l.join(a, l.meet(a, b)), a);
        prop_assert_eq!(l.meet(a, l.join(a, b)), a);
    }
}

/// Adjoints between different lattices, beyond endomaps.
#[test]
fn adjoint_iff_sup_morphism_between_lattices() {
    let lattices: Vec<Arc<FiniteSupLattice>> = lattices_up_to(3).into_iter().map(Arc::new).collect();
    let mut adjoint_count = 0;
    for s in &lattices {
        for t in &lattices {
            for m in monotone_maps(s.order_arc(), t.order_arc()) {
                let adj = right_adjoint(&m, s);
                assert_eq!(adj.is_ok(), is_sup_morphism(&m).holds, "{:?}", m.table());
                if let Ok(adj) = adj {
                    adjoint_count += 1;
                    for g in monotone_maps(t.order_arc(), s.order_arc()) {
                        assert_eq!(OrderAdjunction::new(m.clone(), g.clone()).is_ok(), &g == adj.right());
                    }
                }
            }
        }
    }
    assert!(adjoint_count > 0);
}

/// On preorders an upper adjoint exists exactly when some monotone map
/// forms an adjunction, and then all such maps agree up to equivalence.
#[test]
fn upper_adjoints_on_preorders() {
    let orders: Vec<Arc<FinitePreorder>> = (1..=3).flat_map(preorders).map(Arc::new).collect();
    for s in &orders {
        for t in &orders {
            for m in monotone_maps(s, t) {
                let candidates: Vec<MonotoneMap> = monotone_maps(t, s)
                    .into_iter()
                    .filter(|g| OrderAdjunction::new(m.clone(), g.clone()).is_ok())
                    .collect();
                match m.upper_adjoint() {
                    Ok(r) => {
                        assert!(!candidates.is_empty());
                        assert!(candidates.iter().all(|g| g.equivalent_pointwise(&r)));
                    }
                    Err(_) => assert!(candidates.is_empty()),
                }
            }
        }
    }
}

#[test]
fn meet_with_middle_of_chain3_is_a_sup_morphism() {
    let l = FiniteSupLattice::chain(&["bot", "m", "top"]);
    let order = l.order_arc().clone();
    let m = MonotoneMap::new(order.clone(), order, (0..3).map(|x| l.meet(x, 1)).collect()).unwrap();
    assert!(is_sup_morphism(&m).holds);
}
