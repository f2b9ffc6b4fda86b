use std::sync::Arc;

use proptest::prelude::*;
use qlab_core::category::{dist_compose, dist_residual, enumerate_presheaves, DEFAULT_CAP};
use qlab_core::format::{bundled_files, Instance, Loader};
use qlab_core::sweep::categories_up_to;
use qlab_core::{format, Distributor, QCategory, Quantaloid};

fn base(name: &str) -> Arc<Quantaloid> {
    Loader::bundled().quantaloid(name).unwrap()
}

/// Every distributor `A ⇸ B`.
fn distributors(a: &Arc<QCategory>, b: &Arc<QCategory>) -> Vec<Distributor> {
    let q = a.base();
    let slots: Vec<usize> = (0..b.len() * a.len())
        .map(|i| q.hom(a.type_of(i % a.len()), b.type_of(i / a.len())).len())
        .collect();
    let total: usize = slots.iter().product();
    assert!(total <= 256, "distributor lattice too large for an exhaustive scan");
    let mut out = Vec::new();
    for mut code in 0..total {
        let table: Vec<usize> = slots
            .iter()
            .map(|&r| {
                let d = code % r;
                code /= r;
                d
            })
            .collect();
        if let Ok(d) = Distributor::new(a.clone(), b.clone(), table) {
            out.push(d);
        }
    }
    out
}

fn residual_adjunction(a: &Arc<QCategory>, b: &Arc<QCategory>, c: &Arc<QCategory>) -> usize {
    let xis = distributors(a, b);
    let mut checked = 0;
    for psi in distributors(b, c) {
        for theta in distributors(a, c) {
            let r = dist_residual(&psi, &theta).unwrap();
            for xi in &xis {
                let composite = dist_compose(&psi, xi).unwrap();
                assert_eq!(composite.leq(&theta), xi.leq(&r), "ψ={:?} θ={:?} ξ={:?}", psi.table(), theta.table(), xi.table());
                checked += 1;
            }
        }
    }
    checked
}

#[test]
fn residual_adjunction_over_boolean_categories() {
    let cats: Vec<Arc<QCategory>> = categories_up_to(&base("q2"), 2).into_iter().map(Arc::new).collect();
    let mut checked = 0;
    for a in &cats {
        for b in &cats {
            for c in &cats {
                checked += residual_adjunction(a, b, c);
            }
        }
    }
    assert!(checked > 10_000);
}

#[test]
fn residual_adjunction_over_q3_two_object_instances() {
    let cats: Vec<Arc<QCategory>> =
        categories_up_to(&base("q3"), 2).into_iter().filter(|c| c.len() == 2).map(Arc::new).collect();
    let chain2 = Loader::bundled().category("chain2@q3").unwrap();
    for c in cats.iter().step_by(3) {
        residual_adjunction(&chain2, c, &chain2);
        residual_adjunction(c, &chain2, c);
    }
}

#[test]
fn distributor_composition_is_associative_and_unital() {
    let cats: Vec<Arc<QCategory>> = categories_up_to(&base("q3"), 2).into_iter().map(Arc::new).collect();
    let (a, b, c, d) = (&cats[1], &cats[4], &cats[7], &cats[9]);
    for phi in distributors(a, b) {
        assert_eq!(dist_compose(&Distributor::identity(b.clone()), &phi).unwrap(), phi);
        assert_eq!(dist_compose(&phi, &Distributor::identity(a.clone())).unwrap(), phi);
        for psi in distributors(b, c).iter().step_by(2) {
            for chi in distributors(c, d).iter().step_by(3) {
                let left = dist_compose(chi, &dist_compose(psi, &phi).unwrap()).unwrap();
                let right = dist_compose(&dist_compose(chi, psi).unwrap(), &phi).unwrap();
                assert_eq!(left, right);
            }
        }
    }
}

#[test]
fn presheaf_categories_are_well_formed() {
    for (file, _) in bundled_files() {
        let Instance::Quantaloid(q) = format::bundled(file).unwrap() else { continue };
        for y in 0..q.object_count() {
            let py = QCategory::presheaf_py(q.clone(), y);
            let pdx = QCategory::copresheaf_pdx(q.clone(), y);
            let into: usize = (0..q.object_count()).map(|x| q.hom(x, y).len()).sum();
            let out_of: usize = (0..q.object_count()).map(|x| q.hom(y, x).len()).sum();
            assert_eq!((py.len(), pdx.len()), (into, out_of));
            // revalidate from raw tables
            QCategory::new("py", q.clone(), py.names().to_vec(), py.types().to_vec(), py.hom_table().to_vec()).unwrap();
            QCategory::new("pdx", q.clone(), pdx.names().to_vec(), pdx.types().to_vec(), pdx.hom_table().to_vec()).unwrap();
        }
    }
    let qrel3 = base("qrel3");
    assert_eq!(QCategory::presheaf_py(qrel3.clone(), qrel3.object_index("1").unwrap()).len(), 6);
}

#[test]
fn hom_direction_mismatch_is_rejected() {
    // chain3 with hom(top,bot) = 1 and hom(bot,top) = 0
    let q2 = base("q2");
    let names = ["bot", "m", "top"].map(String::from).to_vec();
    let hom = vec![1, 1, 0, 0, 1, 1, 1, 0, 1];
    assert!(QCategory::new("bad", q2, names, vec![0; 3], hom).is_err());
}

#[test]
fn presheaf_examples() {
    let chain3 = Loader::bundled().category("chain3@q2").unwrap();
    assert_eq!(enumerate_presheaves(&chain3, 0, DEFAULT_CAP).unwrap().len(), 4);
    let zero = Loader::bundled().category("zero@qrel3").unwrap();
    let one = zero.base().object_index("1").unwrap();
    assert_eq!(enumerate_presheaves(&zero, one, DEFAULT_CAP).unwrap().len(), 6);
}

fn sweep_category() -> impl Strategy<Value = QCategory> {
    let mut all = categories_up_to(&base("q3"), 3);
    all.extend(categories_up_to(&base("qrel3"), 2));
    (0..all.len()).prop_map(move |i| all[i].clone())
}

proptest! {
    #[test]
    fn underlying_order_is_a_preorder(c in sweep_category()) {
        let n = c.len();
        for x in 0..n {
            prop_assert!(c.leq(x, x));
            for y in 0..n {
                for z in 0..n {
                    prop_assert!(!(c.leq(x, y) && c.leq(y, z)) || c.leq(x, z));
                }
            }
        }
        for f in c.fibers() {
            prop_assert!(f.members.iter().all(|&m| c.type_of(m) == f.ty));
        }
        prop_assert_eq!(c.fibers().iter().map(|f| f.members.len()).sum::<usize>(), n);
    }

    #[test]
    fn opposite_is_an_involution(c in sweep_category()) {
        let back = c.opposite().opposite();
        prop_assert_eq!(back.hom_table(), c.hom_table());
        prop_assert_eq!(back.types(), c.types());
    }

    #[test]
    fn identity_distributor_is_idempotent(c in sweep_category()) {
        let id = Distributor::identity(Arc::new(c));
        prop_assert_eq!(dist_compose(&id, &id).unwrap(), id);
    }
}
