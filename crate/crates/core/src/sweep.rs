//! Exhaustive enumeration of small structures.
//!
//! Everything here is enumerated on labelled carriers (no quotient by
//! isomorphism), in a fixed lexicographic order.

use std::sync::Arc;

use crate::category::{QCategory, QFunctor};
use crate::order::{FinitePreorder, FiniteSupLattice, MonotoneMap};
use crate::quantaloid::Quantaloid;
use crate::variation::{Pseudofunctor2, QuantaleAction};

const LETTERS: [&str; 8] = ["a", "b", "c", "d", "e", "f", "g", "h"];

fn element_names(n: usize) -> Vec<String> {
    (0..n).map(|i| LETTERS.get(i).map_or_else(|| format!("e{i}"), |s| s.to_string())).collect()
}

/// Odometer over `radices`; calls `visit` with each digit vector, once
/// for the empty vector.
fn odometer(radices: &[usize], mut visit: impl FnMut(&[usize])) {
    if radices.contains(&0) {
        return;
    }
    let mut digits = vec![0; radices.len()];
    loop {
        visit(&digits);
        let mut i = radices.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < radices[i] {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// All preorders on `n` labelled elements.
pub fn preorders(n: usize) -> Vec<FinitePreorder> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))).collect();
    let mut out = Vec::new();
    odometer(&vec![2; pairs.len()], |bits| {
        let mut leq = vec![false; n * n];
        for a in 0..n {
            leq[a * n + a] = true;
        }
        for (&(a, b), &bit) in pairs.iter().zip(bits) {
            leq[a * n + b] = bit == 1;
        }
        if let Ok(p) = FinitePreorder::new(element_names(n), leq) {
            out.push(p);
        }
    });
    out
}

/// All preorders with at most `max` elements, smallest first.
pub fn preorders_up_to(max: usize) -> Vec<FinitePreorder> {
    (0..=max).flat_map(preorders).collect()
}

/// All sup-lattices with between 1 and `max` elements.
pub fn lattices_up_to(max: usize) -> Vec<FiniteSupLattice> {
    (1..=max)
        .flat_map(preorders)
        .filter(|p| p.is_antisymmetric())
        .filter_map(|p| FiniteSupLattice::new(p).ok())
        .collect()
}

/// All monotone maps between two preorders.
pub fn monotone_maps(source: &Arc<FinitePreorder>, target: &Arc<FinitePreorder>) -> Vec<MonotoneMap> {
    let mut out = Vec::new();
    odometer(&vec![target.len(); source.len()], |t| {
        if let Ok(m) = MonotoneMap::new(source.clone(), target.clone(), t.to_vec()) {
            out.push(m);
        }
    });
    out
}

/// The preorder as a category over the Boolean quantale.
pub fn preorder_category(q2: &Arc<Quantaloid>, order: &FinitePreorder) -> QCategory {
    QCategory::free_fiber(q2.clone(), order, 0)
}

/// All categories over `q` with exactly `n` objects named `o0, o1, ...`.
pub fn categories(q: &Arc<Quantaloid>, n: usize) -> Vec<QCategory> {
    let mut out = Vec::new();
    odometer(&vec![q.object_count(); n], |types| out.extend(categories_typed(q, types)));
    out
}

/// All categories over `q` whose objects have the given types.
pub fn categories_typed(q: &Arc<Quantaloid>, types: &[usize]) -> Vec<QCategory> {
    let n = types.len();
    let names: Vec<String> = (0..n).map(|i| format!("o{i}")).collect();
    let tlabel: Vec<&str> = types.iter().map(|&t| q.object_name(t)).collect();
    let radices: Vec<usize> = (0..n * n).map(|k| q.hom(types[k % n], types[k / n]).len()).collect();
    let mut out = Vec::new();
    odometer(&radices, |hom| {
        let label: String = hom.iter().map(|h| h.to_string()).collect();
        let name = format!("{}[{}|{label}]", q.name(), tlabel.join(","));
        if let Ok(c) = QCategory::new(name, q.clone(), names.clone(), types.to_vec(), hom.to_vec()) {
            out.push(c);
        }
    });
    out
}

/// All categories over `q` with exactly one object of each type.
pub fn categories_one_per_type(q: &Arc<Quantaloid>) -> Vec<QCategory> {
    categories_typed(q, &(0..q.object_count()).collect::<Vec<_>>())
}

/// All categories over `q` with at most `max` objects.
pub fn categories_up_to(q: &Arc<Quantaloid>, max: usize) -> Vec<QCategory> {
    (0..=max).flat_map(|n| categories(q, n)).collect()
}

/// All functors between two categories.
pub fn functors(a: &Arc<QCategory>, b: &Arc<QCategory>) -> Vec<QFunctor> {
    let mut out = Vec::new();
    odometer(&vec![b.len(); a.len()], |t| {
        let name = format!("F[{}]", t.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(""));
        if let Ok(f) = QFunctor::new(name, a.clone(), b.clone(), t.to_vec()) {
            out.push(f);
        }
    });
    out
}

/// All pseudofunctors over `q` whose fibers have at most `max` elements,
/// valid or not.
pub fn pseudofunctors(q: &Arc<Quantaloid>, max: usize) -> Vec<Pseudofunctor2> {
    let orders: Vec<Arc<FinitePreorder>> = preorders_up_to(max).into_iter().map(Arc::new).collect();
    let n = q.object_count();
    let mut out = Vec::new();
    odometer(&vec![orders.len(); n], |choice| {
        let fibers: Vec<Arc<FinitePreorder>> = choice.iter().map(|&i| orders[i].clone()).collect();
        // slot (x, y, f) holds a map F(Y) → F(X)
        let slots: Vec<(usize, usize, usize)> = (0..n)
            .flat_map(|x| (0..n).flat_map(move |y| (0..q.hom(x, y).len()).map(move |f| (x, y, f))))
            .collect();
        let options: Vec<Vec<MonotoneMap>> =
            slots.iter().map(|&(x, y, _)| monotone_maps(&fibers[y], &fibers[x])).collect();
        odometer(&options.iter().map(Vec::len).collect::<Vec<_>>(), |pick| {
            let mut actions: Vec<Vec<MonotoneMap>> = vec![Vec::new(); n * n];
            for (k, &(x, y, _)) in slots.iter().enumerate() {
                actions[x * n + y].push(options[k][pick[k]].clone());
            }
            let name = format!("{}-pf{}", q.name(), out.len());
            if let Ok(p) = Pseudofunctor2::new(name, q.clone(), fibers.clone(), actions) {
                out.push(p);
            }
        });
    });
    out
}

/// All right actions of the one-object `q` on `carrier`.
pub fn actions(q: &Arc<Quantaloid>, carrier: &Arc<FiniteSupLattice>) -> Vec<QuantaleAction> {
    let k = q.hom(0, 0).len();
    let endos: Vec<MonotoneMap> = monotone_maps(carrier.order_arc(), carrier.order_arc())
        .into_iter()
        .filter(|m| m.sup_failure().is_none())
        .collect();
    let mut out = Vec::new();
    odometer(&vec![endos.len(); k], |pick| {
        let mut act = vec![0; carrier.len() * k];
        for (f, &i) in pick.iter().enumerate() {
            for m in 0..carrier.len() {
                act[m * k + f] = endos[i].apply(m);
            }
        }
        let name = format!("{}-act{}", q.name(), out.len());
        if let Ok(a) = QuantaleAction::new(name, q.clone(), carrier.clone(), act) {
            out.push(a);
        }
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labelled_preorder_counts() {
        let counts: Vec<usize> = (0..=4).map(|n| preorders(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 4, 29, 355]);
    }

    #[test]
    fn labelled_lattice_counts() {
        // 1 + 2 + 6 + (24 chains + 12 diamonds)
        let by_size: Vec<usize> = (1..=4).map(|n| lattices_up_to(n).len()).collect();
        assert_eq!(by_size, vec![1, 3, 9, 45]);
    }

    #[test]
    fn monotone_endomaps_of_chain3() {
        let c = Arc::new(FinitePreorder::chain(&["0", "1", "2"]));
        assert_eq!(monotone_maps(&c, &c).len(), 10);
    }

    #[test]
    fn boolean_categories_are_preorders() {
        let q2 = Arc::new(Quantaloid::boolean2());
        let sizes: Vec<usize> = (0..=3).map(|n| categories(&q2, n).len()).collect();
        assert_eq!(sizes, vec![1, 1, 4, 29]);
    }

    #[test]
    fn boolean_actions_on_chain3() {
        let q2 = Arc::new(Quantaloid::boolean2());
        let chain = Arc::new(FiniteSupLattice::chain(&["bot", "m", "top"]));
        // M(0) must be the bottom map and M(1) the identity
        assert_eq!(actions(&q2, &chain).len(), 1);
    }
}
