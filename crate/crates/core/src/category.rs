//! Q-categories, functors and distributors.
//!
//! A category over a quantaloid `Q` types every object by a `Q`-object and
//! stores `hom(y, x) ∈ Q(tx, ty)`. The underlying order puts `x' ≤ x` when
//! the types agree and `1 ≤ hom(x', x)`. Presheaves of type `X` are
//! distributors out of the one-object category `*_X`.

use std::sync::Arc;

use thiserror::Error;

use crate::order::FinitePreorder;
use crate::par::Exec;
use crate::quantaloid::{QArrow, Quantaloid};

pub const DEFAULT_CAP: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CategoryError {
    #[error("identity of type {ty} is not below hom({x},{x})")]
    IdentityBelowUnit { x: String, ty: String },
    #[error("hom({z},{y}) ∘ hom({y},{x}) is not below hom({z},{x})")]
    CompositionFails { z: String, y: String, x: String },
    #[error("functor changes the type of `{0}`")]
    TypeNotPreserved(String),
    #[error("hom({a_prime},{a}) is not below the hom of their images")]
    FunctorInequalityFails { a_prime: String, a: String },
    #[error("distributor action fails on the {side} at {witness}")]
    ActionAxiomFails { side: &'static str, witness: String },
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("enumeration of {0} candidate tables exceeds the cap")]
    EnumerationCapExceeded(u128),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("malformed data: {0}")]
    Shape(String),
}

impl CategoryError {
    pub fn kind(&self) -> &'static str {
        match self {
            CategoryError::IdentityBelowUnit { .. } => "IdentityBelowUnit",
            CategoryError::CompositionFails { .. } => "CompositionFails",
            CategoryError::TypeNotPreserved(..) => "TypeNotPreserved",
            CategoryError::FunctorInequalityFails { .. } => "FunctorInequalityFails",
            CategoryError::ActionAxiomFails { .. } => "ActionAxiomFails",
            CategoryError::TypeMismatch(..) => "TypeMismatch",
            CategoryError::EnumerationCapExceeded(..) => "EnumerationCapExceeded",
            CategoryError::UnknownObject(..) => "UnknownObject",
            CategoryError::Shape(..) => "Shape",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QCategory {
    name: String,
    base: Arc<Quantaloid>,
    names: Vec<String>,
    types: Vec<usize>,
    hom: Vec<usize>,
}

/// The objects of one type with their underlying order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fiber {
    pub ty: usize,
    /// Object ids, ascending; position `i` in `order` is `members[i]`.
    pub members: Vec<usize>,
    pub order: Arc<FinitePreorder>,
}

impl Fiber {
    pub fn position(&self, object: usize) -> Option<usize> {
        self.members.iter().position(|&m| m == object)
    }
}

impl QCategory {
    /// Validates and builds a category; `hom[y * n + x]` is `hom(y, x)`.
    pub fn new(
        name: impl Into<String>,
        base: Arc<Quantaloid>,
        names: Vec<String>,
        types: Vec<usize>,
        hom: Vec<usize>,
    ) -> Result<Self, CategoryError> {
        let n = names.len();
        if types.len() != n || hom.len() != n * n {
            return Err(CategoryError::Shape("object, type and hom counts disagree".into()));
        }
        for (i, o) in names.iter().enumerate() {
            if names[..i].contains(o) {
                return Err(CategoryError::Shape(format!("duplicate object `{o}`")));
            }
        }
        if let Some(&t) = types.iter().find(|&&t| t >= base.object_count()) {
            return Err(CategoryError::Shape(format!("type index {t} is not an object of {}", base.name())));
        }
        let c = QCategory { name: name.into(), base, names, types, hom };
        for y in 0..n {
            for x in 0..n {
                if c.hom(y, x) >= c.base.hom(c.types[x], c.types[y]).len() {
                    return Err(CategoryError::TypeMismatch(format!(
                        "hom({},{}) is not an element of hom({},{})",
                        c.names[y],
                        c.names[x],
                        c.base.object_name(c.types[x]),
                        c.base.object_name(c.types[y])
                    )));
                }
            }
        }
        for x in 0..n {
            let t = c.types[x];
            if !c.base.hom(t, t).leq(c.base.identity(t), c.hom(x, x)) {
                return Err(CategoryError::IdentityBelowUnit {
                    x: c.names[x].clone(),
                    ty: c.base.object_name(t).to_string(),
                });
            }
        }
        for z in 0..n {
            for y in 0..n {
                for x in 0..n {
                    let (tx, ty, tz) = (c.types[x], c.types[y], c.types[z]);
                    let comp = c.base.compose_raw(tx, ty, tz, c.hom(z, y), c.hom(y, x));
                    if !c.base.hom(tx, tz).leq(comp, c.hom(z, x)) {
                        return Err(CategoryError::CompositionFails {
                            z: c.names[z].clone(),
                            y: c.names[y].clone(),
                            x: c.names[x].clone(),
                        });
                    }
                }
            }
        }
        Ok(c)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn base(&self) -> &Arc<Quantaloid> {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn object_name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|o| o == name)
    }

    pub fn type_of(&self, x: usize) -> usize {
        self.types[x]
    }

    pub fn types(&self) -> &[usize] {
        &self.types
    }

    pub fn hom(&self, y: usize, x: usize) -> usize {
        self.hom[y * self.names.len() + x]
    }

    pub fn hom_table(&self) -> &[usize] {
        &self.hom
    }

    /// `hom(y, x)` as an arrow `tx → ty`.
    pub fn hom_arrow(&self, y: usize, x: usize) -> QArrow {
        QArrow::new(self.types[x], self.types[y], self.hom(y, x))
    }

    /// `x' ≤ x` in the underlying order.
    pub fn leq(&self, x_prime: usize, x: usize) -> bool {
        let t = self.types[x];
        self.types[x_prime] == t && self.base.hom(t, t).leq(self.base.identity(t), self.hom(x_prime, x))
    }

    pub fn equivalent(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) && self.leq(b, a)
    }

    pub fn objects_of_type(&self, ty: usize) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.types[x] == ty).collect()
    }

    pub fn fiber(&self, ty: usize) -> Fiber {
        let members = self.objects_of_type(ty);
        let k = members.len();
        let names = members.iter().map(|&m| self.names[m].clone()).collect();
        let leq = (0..k * k).map(|i| self.leq(members[i / k], members[i % k])).collect();
        let order = FinitePreorder::new(names, leq).expect("the underlying order of a category is a preorder");
        Fiber { ty, members, order: Arc::new(order) }
    }

    /// One fiber per object of the base, in base order.
    pub fn fibers(&self) -> Vec<Fiber> {
        (0..self.base.object_count()).map(|t| self.fiber(t)).collect()
    }

    pub fn is_skeletal(&self) -> bool {
        (0..self.len()).all(|a| (a + 1..self.len()).all(|b| !self.equivalent(a, b)))
    }

    /// The same objects over the opposite base with transposed homs.
    pub fn opposite(&self) -> QCategory {
        let n = self.len();
        let hom = (0..n * n).map(|i| self.hom(i % n, i / n)).collect();
        let name = match self.name.strip_suffix("^op") {
            Some(s) => s.to_string(),
            None => format!("{}^op", self.name),
        };
        QCategory::new(name, Arc::new(self.base.opposite()), self.names.clone(), self.types.clone(), hom)
            .expect("the opposite of a category is a category")
    }

    /// `*_Y`: one object of type `Y` whose hom is the identity.
    pub fn one_object(base: Arc<Quantaloid>, y: usize) -> QCategory {
        let name = format!("*_{}", base.object_name(y));
        let id = base.identity(y);
        QCategory::new(name, base, vec!["*".to_string()], vec![y], vec![id]).expect("one-object category")
    }

    /// The free `Q(X,X)`-category on a preorder: `hom(a', a) = 1_X` when
    /// `a' ≤ a` and `0` otherwise.
    pub fn free_fiber(base: Arc<Quantaloid>, order: &FinitePreorder, x: usize) -> QCategory {
        let n = order.len();
        let (one, zero) = (base.identity(x), base.zero(x, x));
        let hom = (0..n * n).map(|i| if order.leq(i / n, i % n) { one } else { zero }).collect();
        QCategory::new(format!("free_{}", base.object_name(x)), base, order.names().to_vec(), vec![x; n], hom)
            .expect("free fiber category")
    }

    /// `P Y`: every arrow `f: X → Y` as an object of type `X`, with
    /// `hom(f', f) = [f', f]`. Objects are named `f@X`.
    pub fn presheaf_py(base: Arc<Quantaloid>, y: usize) -> QCategory {
        let objs: Vec<QArrow> = base.arrows().into_iter().filter(|a| a.dst == y).collect();
        let n = objs.len();
        let mut hom = Vec::with_capacity(n * n);
        for fp in &objs {
            for f in &objs {
                hom.push(base.lift_raw(fp.src, y, f.src, fp.value, f.value));
            }
        }
        let names = objs.iter().map(|a| format!("{}@{}", base.hom(a.src, a.dst).name(a.value), base.object_name(a.src))).collect();
        let types = objs.iter().map(|a| a.src).collect();
        QCategory::new(format!("P{}", base.object_name(y)), base, names, types, hom).expect("presheaf category")
    }

    /// `P†X`: every arrow `f: X → Y` as an object of type `Y`, with
    /// `hom(f', f) = {f, f'}`. Objects are named `f@Y`.
    pub fn copresheaf_pdx(base: Arc<Quantaloid>, x: usize) -> QCategory {
        let objs: Vec<QArrow> = base.arrows().into_iter().filter(|a| a.src == x).collect();
        let n = objs.len();
        let mut hom = Vec::with_capacity(n * n);
        for fp in &objs {
            for f in &objs {
                hom.push(base.extend_raw(x, f.dst, fp.dst, f.value, fp.value));
            }
        }
        let names = objs.iter().map(|a| format!("{}@{}", base.hom(a.src, a.dst).name(a.value), base.object_name(a.dst))).collect();
        let types = objs.iter().map(|a| a.dst).collect();
        QCategory::new(format!("Pd{}", base.object_name(x)), base, names, types, hom).expect("copresheaf category")
    }

    /// The object of `P Y` (resp. `P†X`) standing for arrow `a`.
    pub fn arrow_object(&self, a: QArrow, covariant_in_source: bool) -> Option<usize> {
        let ty = if covariant_in_source { a.src } else { a.dst };
        let label = format!("{}@{}", self.base.hom(a.src, a.dst).name(a.value), self.base.object_name(ty));
        self.object_index(&label)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QFunctor {
    name: String,
    source: Arc<QCategory>,
    target: Arc<QCategory>,
    map: Vec<usize>,
}

fn same_base(a: &QCategory, b: &QCategory) -> Result<(), CategoryError> {
    if a.base != b.base {
        return Err(CategoryError::TypeMismatch(format!(
            "{} is over {} but {} is over {}",
            a.name,
            a.base.name(),
            b.name,
            b.base.name()
        )));
    }
    Ok(())
}

impl QFunctor {
    pub fn new(
        name: impl Into<String>,
        source: Arc<QCategory>,
        target: Arc<QCategory>,
        map: Vec<usize>,
    ) -> Result<Self, CategoryError> {
        same_base(&source, &target)?;
        if map.len() != source.len() || map.iter().any(|&b| b >= target.len()) {
            return Err(CategoryError::Shape("functor table does not cover the source".into()));
        }
        if let Some(a) = (0..source.len()).find(|&a| source.type_of(a) != target.type_of(map[a])) {
            return Err(CategoryError::TypeNotPreserved(source.names[a].clone()));
        }
        let base = source.base.clone();
        for ap in 0..source.len() {
            for a in 0..source.len() {
                let h = base.hom(source.type_of(a), source.type_of(ap));
                if !h.leq(source.hom(ap, a), target.hom(map[ap], map[a])) {
                    return Err(CategoryError::FunctorInequalityFails {
                        a_prime: source.names[ap].clone(),
                        a: source.names[a].clone(),
                    });
                }
            }
        }
        Ok(QFunctor { name: name.into(), source, target, map })
    }

    pub fn identity(c: Arc<QCategory>) -> QFunctor {
        let map = (0..c.len()).collect();
        QFunctor { name: format!("id_{}", c.name), source: c.clone(), target: c, map }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Arc<QCategory> {
        &self.source
    }

    pub fn target(&self) -> &Arc<QCategory> {
        &self.target
    }

    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    pub fn table(&self) -> &[usize] {
        &self.map
    }

    /// `F ≤ G` pointwise in the target fibers.
    pub fn leq(&self, other: &QFunctor) -> bool {
        (0..self.source.len()).all(|a| self.target.leq(self.map[a], other.map[a]))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distributor {
    source: Arc<QCategory>,
    target: Arc<QCategory>,
    table: Vec<usize>,
}

impl Distributor {
    /// `table[b * |A| + a]` is `Φ(b, a) ∈ Q(ta, tb)` for `Φ: A ⇸ B`.
    pub fn new(source: Arc<QCategory>, target: Arc<QCategory>, table: Vec<usize>) -> Result<Self, CategoryError> {
        same_base(&source, &target)?;
        let (na, nb) = (source.len(), target.len());
        if table.len() != na * nb {
            return Err(CategoryError::Shape("distributor table is not total".into()));
        }
        let q = source.base.clone();
        for b in 0..nb {
            for a in 0..na {
                if table[b * na + a] >= q.hom(source.type_of(a), target.type_of(b)).len() {
                    return Err(CategoryError::TypeMismatch(format!(
                        "entry ({},{}) has the wrong type",
                        target.names[b], source.names[a]
                    )));
                }
            }
        }
        let d = Distributor { source, target, table };
        d.check_actions()?;
        Ok(d)
    }

    fn check_actions(&self) -> Result<(), CategoryError> {
        let (a_cat, b_cat) = (&self.source, &self.target);
        let q = &a_cat.base;
        for bp in 0..b_cat.len() {
            for b in 0..b_cat.len() {
                for a in 0..a_cat.len() {
                    let (ta, tb, tbp) = (a_cat.type_of(a), b_cat.type_of(b), b_cat.type_of(bp));
                    let lhs = q.compose_raw(ta, tb, tbp, b_cat.hom(bp, b), self.get(b, a));
                    if !q.hom(ta, tbp).leq(lhs, self.get(bp, a)) {
                        return Err(CategoryError::ActionAxiomFails {
                            side: "left",
                            witness: format!("({},{},{})", b_cat.names[bp], b_cat.names[b], a_cat.names[a]),
                        });
                    }
                }
            }
        }
        for b in 0..b_cat.len() {
            for a in 0..a_cat.len() {
                for ap in 0..a_cat.len() {
                    let (ta, tap, tb) = (a_cat.type_of(a), a_cat.type_of(ap), b_cat.type_of(b));
                    let lhs = q.compose_raw(tap, ta, tb, self.get(b, a), a_cat.hom(a, ap));
                    if !q.hom(tap, tb).leq(lhs, self.get(b, ap)) {
                        return Err(CategoryError::ActionAxiomFails {
                            side: "right",
                            witness: format!("({},{},{})", b_cat.names[b], a_cat.names[a], a_cat.names[ap]),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// The hom table of `A` as a distributor `A ⇸ A`.
    pub fn identity(c: Arc<QCategory>) -> Distributor {
        let table = c.hom.clone();
        Distributor { source: c.clone(), target: c, table }
    }

    pub fn source(&self) -> &Arc<QCategory> {
        &self.source
    }

    pub fn target(&self) -> &Arc<QCategory> {
        &self.target
    }

    pub fn get(&self, b: usize, a: usize) -> usize {
        self.table[b * self.source.len() + a]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// Tablewise order.
    pub fn leq(&self, other: &Distributor) -> bool {
        let q = &self.source.base;
        let na = self.source.len();
        self.table.iter().zip(&other.table).enumerate().all(|(i, (&p, &o))| {
            q.hom(self.source.type_of(i % na), self.target.type_of(i / na)).leq(p, o)
        })
    }
}

/// `(ψ∘φ)(c, a) = ⋁_b ψ(c, b) ∘ φ(b, a)`.
pub fn dist_compose(psi: &Distributor, phi: &Distributor) -> Result<Distributor, CategoryError> {
    if psi.source != phi.target {
        return Err(CategoryError::TypeMismatch("middle categories differ".into()));
    }
    let (a, b, c) = (&phi.source, &phi.target, &psi.target);
    let q = &a.base;
    let mut table = Vec::with_capacity(a.len() * c.len());
    for ci in 0..c.len() {
        for ai in 0..a.len() {
            let (ta, tc) = (a.type_of(ai), c.type_of(ci));
            let hom = q.hom(ta, tc);
            table.push(hom.join_all((0..b.len()).map(|bi| {
                q.compose_raw(ta, b.type_of(bi), tc, psi.get(ci, bi), phi.get(bi, ai))
            })));
        }
    }
    Distributor::new(a.clone(), c.clone(), table)
}

/// `[ψ, θ](b, a) = ⋀_c [ψ(c, b), θ(c, a)]` for `ψ: B ⇸ C`, `θ: A ⇸ C`.
pub fn dist_residual(psi: &Distributor, theta: &Distributor) -> Result<Distributor, CategoryError> {
    if psi.target != theta.target {
        return Err(CategoryError::TypeMismatch("targets differ".into()));
    }
    let (a, b, c) = (&theta.source, &psi.source, &psi.target);
    let q = &a.base;
    let mut table = Vec::with_capacity(a.len() * b.len());
    for bi in 0..b.len() {
        for ai in 0..a.len() {
            let (ta, tb) = (a.type_of(ai), b.type_of(bi));
            let hom = q.hom(ta, tb);
            table.push(hom.meet_all((0..c.len()).map(|ci| {
                q.lift_raw(tb, c.type_of(ci), ta, psi.get(ci, bi), theta.get(ci, ai))
            })));
        }
    }
    Distributor::new(a.clone(), b.clone(), table)
}

fn table_space(c: &QCategory, x: usize) -> u128 {
    (0..c.len()).fold(1u128, |acc, o| acc.saturating_mul(c.base.hom(x, c.type_of(o)).len() as u128))
}

/// Every presheaf `φ: *_X ⇸ C` as a raw table `φ(c) ∈ Q(X, tc)`, in
/// lexicographic order by object then element.
pub fn presheaf_tables(c: &QCategory, x: usize, cap: u128, exec: Exec) -> Result<Vec<Vec<usize>>, CategoryError> {
    let space = table_space(c, x);
    if space > cap {
        return Err(CategoryError::EnumerationCapExceeded(space));
    }
    let n = c.len();
    if n == 0 {
        return Ok(vec![Vec::new()]);
    }
    let firsts = c.base.hom(x, c.type_of(0)).len();
    let parts = exec.map_range(firsts, |v| {
        let mut out = Vec::new();
        let mut cur = vec![v];
        extend_presheaves(c, x, &mut cur, &mut out);
        out
    });
    Ok(parts.into_iter().flatten().collect())
}

fn extend_presheaves(c: &QCategory, x: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let k = cur.len();
    if k == c.len() {
        out.push(cur.clone());
        return;
    }
    let q = &c.base;
    let tk = c.type_of(k);
    for v in 0..q.hom(x, tk).len() {
        let ok = (0..k).all(|j| {
            let tj = c.type_of(j);
            // hom(j,k)∘φ(k) ≤ φ(j) and hom(k,j)∘φ(j) ≤ φ(k)
            q.hom(x, tj).leq(q.compose_raw(x, tk, tj, c.hom(j, k), v), cur[j])
                && q.hom(x, tk).leq(q.compose_raw(x, tj, tk, c.hom(k, j), cur[j]), v)
        }) && q.hom(x, tk).leq(q.compose_raw(x, tk, tk, c.hom(k, k), v), v);
        if ok {
            cur.push(v);
            extend_presheaves(c, x, cur, out);
            cur.pop();
        }
    }
}

/// Every presheaf of type `X` on `c`, as distributors `*_X ⇸ c`.
pub fn enumerate_presheaves(c: &Arc<QCategory>, x: usize, cap: u128) -> Result<Vec<Distributor>, CategoryError> {
    let star = Arc::new(QCategory::one_object(c.base.clone(), x));
    Ok(presheaf_tables(c, x, cap, Exec::default())?
        .into_iter()
        .map(|table| Distributor { source: star.clone(), target: c.clone(), table })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::FiniteSupLattice;
    use crate::quantaloid::locale;

    fn q2() -> Arc<Quantaloid> {
        Arc::new(Quantaloid::boolean2())
    }

    fn qrel3() -> Arc<Quantaloid> {
        Arc::new(locale("qrel3", &FiniteSupLattice::chain(&["0", "u", "1"])).unwrap())
    }

    fn chain3() -> Arc<QCategory> {
        Arc::new(QCategory::free_fiber(q2(), &FinitePreorder::chain(&["bot", "m", "top"]), 0).with_name("chain3"))
    }

    fn zero_qrel3() -> Arc<QCategory> {
        let q = qrel3();
        let hom = (0..9).map(|i| if i / 3 == i % 3 { q.identity(i % 3) } else { 0 }).collect();
        let names = vec!["z0".to_string(), "zu".to_string(), "z1".to_string()];
        Arc::new(QCategory::new("zero", q, names, vec![0, 1, 2], hom).unwrap())
    }

    #[test]
    fn chain3_is_a_skeletal_chain() {
        let c = chain3();
        let f = c.fibers();
        assert_eq!(f.len(), 1);
        assert!(c.leq(0, 1) && c.leq(1, 2) && !c.leq(2, 0));
        assert!(c.is_skeletal());
    }

    #[test]
    fn reversed_chain_homs_are_rejected() {
        let c = chain3();
        let mut hom = c.hom_table().to_vec();
        hom[2 * 3] = 1;
        hom[2] = 0;
        let err = QCategory::new("bad", c.base().clone(), c.names().to_vec(), c.types().to_vec(), hom).unwrap_err();
        assert_eq!(err.kind(), "CompositionFails");
    }

    #[test]
    fn presheaf_fiber_sizes() {
        let p1 = QCategory::presheaf_py(qrel3(), 2);
        assert_eq!(p1.len(), 6);
        let sizes: Vec<usize> = p1.fibers().iter().map(|f| f.members.len()).collect();
        assert_eq!(sizes, vec![1, 2, 3]);
        let z = zero_qrel3();
        assert!(z.fibers().iter().all(|f| f.members.len() == 1));
    }

    #[test]
    fn presheaf_counts() {
        let star = QCategory::one_object(q2(), 0);
        assert_eq!(presheaf_tables(&star, 0, DEFAULT_CAP, Exec::Sequential).unwrap().len(), 2);
        assert_eq!(presheaf_tables(&zero_qrel3(), 2, DEFAULT_CAP, Exec::Sequential).unwrap().len(), 6);
        let ps = presheaf_tables(&chain3(), 0, DEFAULT_CAP, Exec::Parallel).unwrap();
        assert_eq!(ps, vec![vec![0, 0, 0], vec![1, 0, 0], vec![1, 1, 0], vec![1, 1, 1]]);
        assert!(matches!(
            presheaf_tables(&chain3(), 0, 4, Exec::Sequential),
            Err(CategoryError::EnumerationCapExceeded(8))
        ));
    }

    #[test]
    fn distributor_identity_laws() {
        let c = chain3();
        let id = Distributor::identity(c.clone());
        let phi = Distributor::new(Arc::new(QCategory::one_object(q2(), 0)), c.clone(), vec![1, 1, 0]).unwrap();
        assert_eq!(dist_compose(&id, &phi).unwrap(), phi);
        assert_eq!(dist_residual(&id, &phi).unwrap(), phi);
        let z = zero_qrel3();
        let zid = Distributor::identity(z);
        assert_eq!(dist_compose(&zid, &zid).unwrap(), zid);
    }

    #[test]
    fn residual_of_zero_is_top() {
        let star = Arc::new(QCategory::one_object(q2(), 0));
        let zero = Distributor::new(star.clone(), star.clone(), vec![0]).unwrap();
        let theta = Distributor::new(star.clone(), star.clone(), vec![0]).unwrap();
        assert_eq!(dist_residual(&zero, &theta).unwrap().table(), &[1]);
        let one = Distributor::identity(star);
        assert_eq!(dist_compose(&one, &one).unwrap().table(), &[1]);
    }

    #[test]
    fn opposite_is_an_involution() {
        let p = QCategory::presheaf_py(qrel3(), 2);
        assert_eq!(p.opposite().opposite(), p);
        let d = QCategory::copresheaf_pdx(qrel3(), 1);
        assert_eq!(d.fibers().iter().map(|f| f.members.len()).collect::<Vec<_>>(), vec![1, 2, 2]);
    }

    #[test]
    fn functor_validation() {
        let c = chain3();
        assert!(QFunctor::new("const-bot", c.clone(), c.clone(), vec![0, 0, 0]).is_ok());
        let err = QFunctor::new("flip", c.clone(), c.clone(), vec![2, 1, 0]).unwrap_err();
        assert_eq!(err.kind(), "FunctorInequalityFails");
        let z = zero_qrel3();
        let err = QFunctor::new("retype", z.clone(), z, vec![1, 1, 2]).unwrap_err();
        assert_eq!(err.kind(), "TypeNotPreserved");
    }
}
