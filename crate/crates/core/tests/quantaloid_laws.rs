use qlab_core::format::{bundled_files, Instance};
use qlab_core::order::{FinitePreorder, FiniteSupLattice};
use qlab_core::quantaloid::{free_on_monoid, locale, quantale_table, validate_quantaloid, QArrow, Quantaloid, Residual};
use qlab_core::{format, QuantaloidError};

fn lattice(names: &[&str], pairs: &[(usize, usize)]) -> FiniteSupLattice {
    let names = names.iter().map(|s| s.to_string()).collect();
    FiniteSupLattice::new(FinitePreorder::generated(names, pairs).unwrap()).unwrap()
}

/// Chains of length 1 to 5, the square, and the square with a new top or bottom.
fn small_frames() -> Vec<FiniteSupLattice> {
    let mut out: Vec<FiniteSupLattice> = (1..=5)
        .map(|n| FiniteSupLattice::chain(&(0..n).map(|i| format!("c{i}")).collect::<Vec<_>>()))
        .collect();
    out.push(lattice(&["0", "p", "q", "1"], &[(0, 1), (0, 2), (1, 3), (2, 3)]));
    out.push(lattice(&["0", "p", "q", "1", "t"], &[(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)]));
    out.push(lattice(&["b", "0", "p", "q", "1"], &[(0, 1), (1, 2), (1, 3), (2, 4), (3, 4)]));
    out
}

fn bundled_quantaloids() -> Vec<Quantaloid> {
    bundled_files()
        .iter()
        .filter_map(|(f, _)| match format::bundled(f).unwrap() {
            Instance::Quantaloid(q) => Some((*q).clone()),
            _ => None,
        })
        .collect()
}

fn all_quantaloids() -> Vec<Quantaloid> {
    let mut out = bundled_quantaloids();
    out.extend(small_frames().iter().map(|f| locale("frame", f).unwrap()));
    out.push(free_on_monoid("pz2", &["e", "s"], &[0, 1, 1, 0], 0).unwrap());
    out
}

#[test]
fn locale_builder_validates_on_small_frames() {
    for f in small_frames() {
        let q = locale("frame", &f).unwrap();
        assert_eq!(q.object_count(), f.len());
        // rebuilding from raw data re-runs every axiom
        assert_eq!(validate_quantaloid(q.data()).unwrap(), q);
        for x in 0..f.len() {
            for y in 0..f.len() {
                let below = (0..f.len()).filter(|&a| f.leq(a, f.meet(x, y))).count();
                assert_eq!(q.hom(x, y).len(), below);
            }
        }
    }
}

#[test]
fn residuals_satisfy_their_universal_properties() {
    for q in all_quantaloids() {
        for f in q.arrows() {
            for g in q.arrows() {
                if f.dst == g.dst {
                    let l = q.residual(Residual::Lifting, f, g).unwrap();
                    for h in q.arrows().into_iter().filter(|h| h.src == g.src && h.dst == f.src) {
                        let fh = q.compose(f, h).unwrap();
                        assert_eq!(q.hom(g.src, g.dst).leq(fh.value, g.value), q.hom(h.src, h.dst).leq(h.value, l.value));
                    }
                }
                if f.src == g.src {
                    let e = q.residual(Residual::Extension, f, g).unwrap();
                    for h in q.arrows().into_iter().filter(|h| h.src == f.dst && h.dst == g.dst) {
                        let hf = q.compose(h, f).unwrap();
                        assert_eq!(q.hom(g.src, g.dst).leq(hf.value, g.value), q.hom(h.src, h.dst).leq(h.value, e.value));
                    }
                }
            }
        }
    }
}

#[test]
fn lifting_is_extension_in_the_opposite() {
    for q in all_quantaloids() {
        let op = q.opposite();
        for f in q.arrows() {
            for g in q.arrows().into_iter().filter(|g| g.dst == f.dst) {
                let l = q.residual(Residual::Lifting, f, g).unwrap();
                let e = op
                    .residual(Residual::Extension, QArrow::new(f.dst, f.src, f.value), QArrow::new(g.dst, g.src, g.value))
                    .unwrap();
                assert_eq!((l.src, l.dst, l.value), (e.dst, e.src, e.value));
            }
        }
        assert_eq!(op.opposite(), q);
    }
}

#[test]
fn zero_arrows_absorb() {
    for q in all_quantaloids() {
        for f in q.arrows() {
            for z in 0..q.object_count() {
                let zero_after = QArrow::new(f.dst, z, q.zero(f.dst, z));
                assert_eq!(q.compose(zero_after, f).unwrap().value, q.zero(f.src, z));
                let zero_before = QArrow::new(z, f.src, q.zero(z, f.src));
                assert_eq!(q.compose(f, zero_before).unwrap().value, q.zero(z, f.dst));
            }
        }
    }
}

#[test]
fn min_on_three_chain_is_q3() {
    let chain = FiniteSupLattice::chain(&["0", "a", "1"]);
    let min: Vec<usize> = (0..9).map(|i| (i / 3).min(i % 3)).collect();
    let q = quantale_table("q3", chain, min, 2).unwrap();
    let bundled = bundled_quantaloids().into_iter().find(|b| b.name() == "q3").unwrap();
    assert_eq!(q, bundled);
    let a = QArrow::new(0, 0, 1);
    assert_eq!(q.compose(a, a).unwrap(), a);
    assert_eq!(q.residual(Residual::Lifting, a, QArrow::new(0, 0, 0)).unwrap().value, 0);
    assert_eq!(q.residual(Residual::Extension, a, a).unwrap().value, 2);
}

#[test]
fn q3_with_a_squared_to_top_is_rejected() {
    let chain = FiniteSupLattice::chain(&["0", "a", "1"]);
    let mut min: Vec<usize> = (0..9).map(|i| (i / 3).min(i % 3)).collect();
    min[4] = 2;
    let err = quantale_table("bad", chain, min, 2).unwrap_err();
    assert!(matches!(err, QuantaloidError::NotAssociative { .. } | QuantaloidError::NotJoinPreserving { .. }), "{err}");
}

#[test]
fn qrel3_composition_is_meet() {
    let q = bundled_quantaloids().into_iter().find(|b| b.name() == "qrel3").unwrap();
    let g = q.parse_arrow("u->1:u").unwrap();
    let f = q.parse_arrow("u->u:u").unwrap();
    assert_eq!(q.arrow_name(q.compose(g, f).unwrap()), "u->1:u");
    assert_eq!(q.hom(q.object_index("u").unwrap(), q.object_index("1").unwrap()).len(), 2);
    assert_eq!(q.hom(q.object_index("1").unwrap(), q.object_index("1").unwrap()).len(), 3);
    let op = q.opposite();
    assert_eq!(op.hom(op.object_index("1").unwrap(), op.object_index("u").unwrap()).len(), 2);
}
