//! Order-valued pseudofunctors on `Q^op`, lax transformations, Sup-valued
//! modules and quantale actions, with the passages between them and
//! tensored categories.
//!
//! An arrow `f: X → Y` acts contravariantly, `Ff: F(Y) → F(X)`. For a
//! tensored category `Ff = − ⊗ f`; conversely a closed pseudofunctor gives
//! the category with `hom(y, x) = ⋁{f : Ff(y) ≤ x}`.

use std::sync::Arc;

use thiserror::Error;

use crate::category::{CategoryError, QCategory, QFunctor};
use crate::completion::{completeness_report, fiber_map, realize_row, tensor_row, CompletionError};
use crate::order::{FinitePreorder, FiniteSupLattice, MonotoneMap, OrderError};
use crate::par::Exec;
use crate::quantaloid::{QArrow, Quantaloid};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VariationError {
    #[error("the tensor {y} ⊗ {f} does not exist")]
    NotTensored { y: String, f: String },
    #[error("not a pseudofunctor: {0}")]
    NotValid(String),
    #[error("pseudofunctor is not closed: {0}")]
    NotClosed(String),
    #[error("category is not skeletal: {0}")]
    NotSkeletal(String),
    #[error("category is not cocomplete: {0}")]
    NotCocomplete(String),
    #[error("module law `{law}` fails at {witness}")]
    ModuleLawFails { law: &'static str, witness: String },
    #[error("action law `{law}` fails at {witness}")]
    ActionLawFails { law: &'static str, witness: String },
    #[error("`{0}` has more than one object")]
    NotOneObject(String),
    #[error("lax square fails: {0}")]
    LaxSquareFails(String),
    #[error("malformed data: {0}")]
    Shape(String),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Completion(#[from] CompletionError),
}

impl VariationError {
    pub fn kind(&self) -> &'static str {
        match self {
            VariationError::NotTensored { .. } => "NotTensored",
            VariationError::NotValid(..) => "NotValid",
            VariationError::NotClosed(..) => "NotClosed",
            VariationError::NotSkeletal(..) => "NotSkeletal",
            VariationError::NotCocomplete(..) => "NotCocomplete",
            VariationError::ModuleLawFails { .. } => "ModuleLawFails",
            VariationError::ActionLawFails { .. } => "ActionLawFails",
            VariationError::NotOneObject(..) => "NotOneObject",
            VariationError::LaxSquareFails(..) => "LaxSquareFails",
            VariationError::Shape(..) => "Shape",
            VariationError::Order(e) => e.kind(),
            VariationError::Category(e) => e.kind(),
            VariationError::Completion(e) => e.kind(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pseudofunctor2 {
    name: String,
    base: Arc<Quantaloid>,
    fibers: Vec<Arc<FinitePreorder>>,
    /// `actions[x * n + y][f]` is `Ff: F(Y) → F(X)`.
    actions: Vec<Vec<MonotoneMap>>,
}

fn check_action_shape(
    base: &Quantaloid,
    fibers: &[Arc<FinitePreorder>],
    actions: &[Vec<MonotoneMap>],
) -> Result<(), VariationError> {
    let n = base.object_count();
    if fibers.len() != n || actions.len() != n * n {
        return Err(VariationError::Shape("one fiber per object and one map per arrow are required".into()));
    }
    for x in 0..n {
        for y in 0..n {
            let maps = &actions[x * n + y];
            if maps.len() != base.hom(x, y).len() {
                return Err(VariationError::Shape(format!(
                    "arrows {} -> {} need {} maps",
                    base.object_name(x),
                    base.object_name(y),
                    base.hom(x, y).len()
                )));
            }
            for (f, m) in maps.iter().enumerate() {
                if m.source() != &fibers[y] || m.target() != &fibers[x] {
                    return Err(VariationError::Shape(format!(
                        "the map of {} runs between the wrong fibers",
                        base.arrow_name(QArrow::new(x, y, f))
                    )));
                }
            }
        }
    }
    Ok(())
}

impl Pseudofunctor2 {
    pub fn new(
        name: impl Into<String>,
        base: Arc<Quantaloid>,
        fibers: Vec<Arc<FinitePreorder>>,
        actions: Vec<Vec<MonotoneMap>>,
    ) -> Result<Self, VariationError> {
        check_action_shape(&base, &fibers, &actions)?;
        Ok(Pseudofunctor2 { name: name.into(), base, fibers, actions })
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

    pub fn fiber(&self, x: usize) -> &Arc<FinitePreorder> {
        &self.fibers[x]
    }

    pub fn fibers(&self) -> &[Arc<FinitePreorder>] {
        &self.fibers
    }

    /// `Ff` for `f ∈ hom(X, Y)`.
    pub fn action(&self, x: usize, y: usize, f: usize) -> &MonotoneMap {
        &self.actions[x * self.base.object_count() + y][f]
    }
}

/// Validity and closedness of a pseudofunctor, each with its first witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudofunctorReport {
    pub valid: bool,
    pub closed: bool,
    pub validity_witness: Option<String>,
    pub closedness_witness: Option<String>,
}

fn validity_failure(p: &Pseudofunctor2) -> Option<String> {
    let q = &p.base;
    let n = q.object_count();
    for x in 0..n {
        if !p.action(x, x, q.identity(x)).equivalent_pointwise(&MonotoneMap::identity(p.fibers[x].clone())) {
            return Some(format!("F(1_{}) is not the identity", q.object_name(x)));
        }
    }
    for x in 0..n {
        for y in 0..n {
            let h = q.hom(x, y);
            for f in 0..h.len() {
                for g in 0..h.len() {
                    if h.leq(f, g) && !p.action(x, y, f).leq_pointwise(p.action(x, y, g)) {
                        return Some(format!(
                            "{} <= {} but their maps are not ordered",
                            q.arrow_name(QArrow::new(x, y, f)),
                            q.arrow_name(QArrow::new(x, y, g))
                        ));
                    }
                }
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for f in 0..q.hom(x, y).len() {
                    for g in 0..q.hom(y, z).len() {
                        let gf = q.compose_raw(x, y, z, g, f);
                        let composite = p.action(x, y, f).after(p.action(y, z, g)).expect("shapes checked");
                        if !p.action(x, z, gf).equivalent_pointwise(&composite) {
                            return Some(format!(
                                "F({} ∘ {}) differs from F({}) ∘ F({})",
                                q.arrow_name(QArrow::new(y, z, g)),
                                q.arrow_name(QArrow::new(x, y, f)),
                                q.arrow_name(QArrow::new(x, y, f)),
                                q.arrow_name(QArrow::new(y, z, g))
                            ));
                        }
                    }
                }
            }
        }
    }
    None
}

fn closedness_failure(p: &Pseudofunctor2) -> Option<String> {
    let q = &p.base;
    let n = q.object_count();
    for x in 0..n {
        let target = &p.fibers[x];
        for y in 0..n {
            let h = q.hom(x, y);
            for e in 0..p.fibers[y].len() {
                let image = |f: usize| p.action(x, y, f).apply(e);
                if !target.bottoms().contains(&image(h.bottom())) {
                    return Some(format!(
                        "F(0)({}) is not a bottom of F({})",
                        p.fibers[y].name(e),
                        q.object_name(x)
                    ));
                }
                for f in 0..h.len() {
                    for g in f + 1..h.len() {
                        if !target.least_upper_bounds(&[image(f), image(g)]).contains(&image(h.join(f, g))) {
                            return Some(format!(
                                "F({} ∨ {})({}) is not the join of the images",
                                q.arrow_name(QArrow::new(x, y, f)),
                                q.arrow_name(QArrow::new(x, y, g)),
                                p.fibers[y].name(e)
                            ));
                        }
                    }
                }
            }
        }
    }
    None
}

pub fn validate_pseudofunctor(p: &Pseudofunctor2) -> PseudofunctorReport {
    let validity_witness = validity_failure(p);
    let closedness_witness = closedness_failure(p);
    PseudofunctorReport {
        valid: validity_witness.is_none(),
        closed: closedness_witness.is_none(),
        validity_witness,
        closedness_witness,
    }
}

/// `X ↦ C_X`, `f ↦ − ⊗ f`, choosing the lowest-id tensor witness.
pub fn category_to_pseudofunctor(c: &QCategory) -> Result<Pseudofunctor2, VariationError> {
    let q = c.base().clone();
    let n = q.object_count();
    let fibers = c.fibers();
    let mut actions = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let mut maps = Vec::with_capacity(q.hom(x, y).len());
            for v in 0..q.hom(x, y).len() {
                let f = QArrow::new(x, y, v);
                let mut table = Vec::with_capacity(fibers[y].members.len());
                for &m in &fibers[y].members {
                    let w = realize_row(c, x, &tensor_row(c, m, f)).representative().ok_or_else(|| {
                        VariationError::NotTensored { y: c.object_name(m).to_string(), f: q.arrow_name(f) }
                    })?;
                    table.push(fibers[x].position(w).expect("tensors have the source type"));
                }
                maps.push(MonotoneMap::new(fibers[y].order.clone(), fibers[x].order.clone(), table)?);
            }
            actions.push(maps);
        }
    }
    Pseudofunctor2::new(format!("F_{}", c.name()), q, fibers.into_iter().map(|f| f.order).collect(), actions)
}

/// The category with one object per fiber element and
/// `hom(y, x) = ⋁{f ∈ Q(X, Y) : Ff(y) ≤ x}`.
pub fn pseudofunctor_to_category(p: &Pseudofunctor2) -> Result<QCategory, VariationError> {
    let report = validate_pseudofunctor(p);
    if let Some(w) = report.validity_witness {
        return Err(VariationError::NotValid(w));
    }
    if let Some(w) = report.closedness_witness {
        return Err(VariationError::NotClosed(w));
    }
    let q = &p.base;
    let mut objects: Vec<(usize, usize)> = Vec::new();
    for (x, fib) in p.fibers.iter().enumerate() {
        objects.extend((0..fib.len()).map(|e| (x, e)));
    }
    let raw = |&(x, e): &(usize, usize)| p.fibers[x].name(e).to_string();
    let names: Vec<String> = objects
        .iter()
        .map(|o| {
            let plain = raw(o);
            if objects.iter().filter(|other| raw(other) == plain).count() > 1 {
                format!("{}.{}", q.object_name(o.0), plain)
            } else {
                plain
            }
        })
        .collect();
    let k = objects.len();
    let mut hom = Vec::with_capacity(k * k);
    for &(ty, ey) in &objects {
        for &(tx, ex) in &objects {
            let h = q.hom(tx, ty);
            hom.push(h.join_all((0..h.len()).filter(|&f| p.fibers[tx].leq(p.action(tx, ty, f).apply(ey), ex))));
        }
    }
    let types = objects.iter().map(|o| o.0).collect();
    let name = p.name.strip_prefix("F_").map(str::to_string).unwrap_or_else(|| format!("C^{}", p.name));
    Ok(QCategory::new(name, q.clone(), names, types, hom)?)
}

/// A lax transformation `φ: F ⇒ F'` with `F'f ∘ φ_Y ≤ φ_X ∘ Ff`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaxNat {
    source: Arc<Pseudofunctor2>,
    target: Arc<Pseudofunctor2>,
    components: Vec<MonotoneMap>,
}

impl LaxNat {
    pub fn new(
        source: Arc<Pseudofunctor2>,
        target: Arc<Pseudofunctor2>,
        components: Vec<MonotoneMap>,
    ) -> Result<Self, VariationError> {
        let q = &source.base;
        let n = q.object_count();
        if source.base != target.base || components.len() != n {
            return Err(VariationError::Shape("components must match the base objects".into()));
        }
        for (x, c) in components.iter().enumerate() {
            if c.source() != &source.fibers[x] || c.target() != &target.fibers[x] {
                return Err(VariationError::Shape(format!("component at {} has the wrong fibers", q.object_name(x))));
            }
        }
        let t = LaxNat { source, target, components };
        if let Some(w) = t.square_failure(false) {
            return Err(VariationError::LaxSquareFails(w));
        }
        Ok(t)
    }

    pub fn component(&self, x: usize) -> &MonotoneMap {
        &self.components[x]
    }

    pub fn components(&self) -> &[MonotoneMap] {
        &self.components
    }

    fn square_failure(&self, pseudo: bool) -> Option<String> {
        let q = &self.source.base;
        let n = q.object_count();
        for x in 0..n {
            for y in 0..n {
                for f in 0..q.hom(x, y).len() {
                    let left = self.target.action(x, y, f).after(&self.components[y]).unwrap();
                    let right = self.components[x].after(self.source.action(x, y, f)).unwrap();
                    let ok = if pseudo { left.equivalent_pointwise(&right) } else { left.leq_pointwise(&right) };
                    if !ok {
                        return Some(q.arrow_name(QArrow::new(x, y, f)));
                    }
                }
            }
        }
        None
    }

    /// `F ≤ G` componentwise.
    pub fn leq(&self, other: &LaxNat) -> bool {
        self.components.iter().zip(&other.components).all(|(a, b)| a.leq_pointwise(b))
    }
}

/// The transformation `F_A ⇒ F_B` induced by a functor, with components
/// the fiber restrictions of `F`.
pub fn functor_to_laxnat(functor: &QFunctor) -> Result<LaxNat, VariationError> {
    let source = Arc::new(category_to_pseudofunctor(functor.source())?);
    let target = Arc::new(category_to_pseudofunctor(functor.target())?);
    let components = (0..functor.source().base().object_count()).map(|x| fiber_map(functor, x)).collect();
    LaxNat::new(source, target, components)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PseudofunctorLevels {
    /// Every nonempty fiber has a bottom.
    pub closed_into_cat_tensor2: bool,
    /// Every `Ff` has a right adjoint.
    pub maps_level: bool,
    /// Fibers are complete and every `Ff` preserves suprema.
    pub cocont_level: bool,
    /// As `cocont_level`, with antisymmetric fibers.
    pub skeletal_level: bool,
}

pub fn classify_pseudofunctor(p: &Pseudofunctor2) -> PseudofunctorLevels {
    let maps = || p.actions.iter().flatten();
    let closed_into_cat_tensor2 = p.fibers.iter().all(|f| f.is_empty() || !f.bottoms().is_empty());
    let maps_level = maps().all(|m| m.upper_adjoint().is_ok());
    let cocont_level = p.fibers.iter().all(|f| f.is_complete()) && maps().all(|m| m.sup_failure().is_none());
    let skeletal_level = cocont_level && p.fibers.iter().all(|f| f.is_antisymmetric());
    PseudofunctorLevels { closed_into_cat_tensor2, maps_level, cocont_level, skeletal_level }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TransformationLevels {
    pub pseudonatural: bool,
    pub bottom_preserving_components: bool,
    pub left_adjoint_components: bool,
    pub sup_morphism_components: bool,
}

pub fn classify_transformation(t: &LaxNat) -> TransformationLevels {
    let bottom_preserving_components = t.components.iter().all(|c| match c.source().bottoms().first() {
        Some(&b) => c.target().bottoms().contains(&c.apply(b)),
        None => true,
    });
    TransformationLevels {
        pseudonatural: t.square_failure(true).is_none(),
        bottom_preserving_components,
        left_adjoint_components: t.components.iter().all(|c| c.upper_adjoint().is_ok()),
        sup_morphism_components: t.components.iter().all(|c| c.sup_failure().is_none()),
    }
}

/// A right module: sup-lattices `M(X)` with strictly functorial
/// sup-morphisms `M(f): M(Y) → M(X)`, joins in `f` taken pointwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QModule {
    name: String,
    base: Arc<Quantaloid>,
    lattices: Vec<Arc<FiniteSupLattice>>,
    actions: Vec<Vec<MonotoneMap>>,
}

impl QModule {
    pub fn new(
        name: impl Into<String>,
        base: Arc<Quantaloid>,
        lattices: Vec<Arc<FiniteSupLattice>>,
        actions: Vec<Vec<MonotoneMap>>,
    ) -> Result<Self, VariationError> {
        let orders: Vec<Arc<FinitePreorder>> = lattices.iter().map(|l| l.order_arc().clone()).collect();
        check_action_shape(&base, &orders, &actions)?;
        let m = QModule { name: name.into(), base, lattices, actions };
        if let Some((law, witness)) = m.law_failure() {
            return Err(VariationError::ModuleLawFails { law, witness });
        }
        Ok(m)
    }

    fn law_failure(&self) -> Option<(&'static str, String)> {
        let q = &self.base;
        let n = q.object_count();
        let arrow = |x, y, f| q.arrow_name(QArrow::new(x, y, f));
        for x in 0..n {
            for y in 0..n {
                for (f, m) in self.actions[x * n + y].iter().enumerate() {
                    if m.sup_failure().is_some() {
                        return Some(("sup-morphism", arrow(x, y, f)));
                    }
                }
            }
        }
        for x in 0..n {
            if self.action(x, x, q.identity(x)).table() != MonotoneMap::identity(self.lattices[x].order_arc().clone()).table() {
                return Some(("unit", q.object_name(x).to_string()));
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for f in 0..q.hom(x, y).len() {
                        for g in 0..q.hom(y, z).len() {
                            let composite = self.action(x, y, f).after(self.action(y, z, g)).unwrap();
                            if self.action(x, z, q.compose_raw(x, y, z, g, f)).table() != composite.table() {
                                return Some(("composition", format!("{} after {}", arrow(y, z, g), arrow(x, y, f))));
                            }
                        }
                    }
                }
            }
        }
        for x in 0..n {
            let lx = &self.lattices[x];
            for y in 0..n {
                let h = q.hom(x, y);
                for e in 0..self.lattices[y].len() {
                    if self.action(x, y, h.bottom()).apply(e) != lx.bottom() {
                        return Some(("local-joins", format!("{} at {}", arrow(x, y, h.bottom()), self.lattices[y].name(e))));
                    }
                    for f in 0..h.len() {
                        for g in f + 1..h.len() {
                            let joined = lx.join(self.action(x, y, f).apply(e), self.action(x, y, g).apply(e));
                            if self.action(x, y, h.join(f, g)).apply(e) != joined {
                                return Some(("local-joins", format!("{} ∨ {}", arrow(x, y, f), arrow(x, y, g))));
                            }
                        }
                    }
                }
            }
        }
        None
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

    pub fn lattice(&self, x: usize) -> &Arc<FiniteSupLattice> {
        &self.lattices[x]
    }

    pub fn action(&self, x: usize, y: usize, f: usize) -> &MonotoneMap {
        &self.actions[x * self.base.object_count() + y][f]
    }

    pub fn as_pseudofunctor(&self) -> Pseudofunctor2 {
        Pseudofunctor2 {
            name: self.name.clone(),
            base: self.base.clone(),
            fibers: self.lattices.iter().map(|l| l.order_arc().clone()).collect(),
            actions: self.actions.clone(),
        }
    }

    /// Reads a pseudofunctor with sup-lattice fibers as a module.
    pub fn from_pseudofunctor(p: &Pseudofunctor2) -> Result<QModule, VariationError> {
        let lattices = p
            .fibers
            .iter()
            .map(|f| FiniteSupLattice::from_arc(f.clone()).map(Arc::new))
            .collect::<Result<Vec<_>, _>>()?;
        QModule::new(p.name.clone(), p.base.clone(), lattices, p.actions.clone())
    }
}

/// Components `α_X: M(X) → N(X)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleMorphism {
    pub components: Vec<MonotoneMap>,
}

impl ModuleMorphism {
    /// Sup-preserving components with `α_X ∘ M(f) = N(f) ∘ α_Y`.
    pub fn is_valid(&self, m: &QModule, n: &QModule) -> bool {
        let q = &m.base;
        let k = q.object_count();
        if m.base != n.base || self.components.len() != k {
            return false;
        }
        let shaped = self.components.iter().enumerate().all(|(x, c)| {
            c.source() == m.lattices[x].order_arc() && c.target() == n.lattices[x].order_arc() && c.sup_failure().is_none()
        });
        shaped
            && (0..k).all(|x| {
                (0..k).all(|y| {
                    (0..q.hom(x, y).len()).all(|f| {
                        let left = self.components[x].after(m.action(x, y, f)).unwrap();
                        let right = n.action(x, y, f).after(&self.components[y]).unwrap();
                        left.table() == right.table()
                    })
                })
            })
    }
}

fn skeletal_cocomplete_check(c: &QCategory, cap: u128, exec: Exec) -> Result<(), VariationError> {
    if let Some((a, b)) = (0..c.len()).flat_map(|a| (a + 1..c.len()).map(move |b| (a, b))).find(|&(a, b)| c.equivalent(a, b)) {
        return Err(VariationError::NotSkeletal(format!("{} ≅ {}", c.object_name(a), c.object_name(b))));
    }
    let report = completeness_report(c, cap, exec)?;
    if !report.cocomplete {
        return Err(VariationError::NotCocomplete(report.witness("cocomplete").unwrap_or_default().to_string()));
    }
    Ok(())
}

/// The module of a skeletal cocomplete category.
pub fn category_to_module(c: &QCategory, cap: u128, exec: Exec) -> Result<QModule, VariationError> {
    skeletal_cocomplete_check(c, cap, exec)?;
    QModule::from_pseudofunctor(&category_to_pseudofunctor(c)?)
}

pub fn module_to_category(m: &QModule) -> Result<QCategory, VariationError> {
    pseudofunctor_to_category(&m.as_pseudofunctor())
}

/// A type-preserving bijection `c → d` with `d(σy, σx) = c(y, x)`.
pub fn find_isomorphism(c: &QCategory, d: &QCategory) -> Option<Vec<usize>> {
    if c.base() != d.base() || c.len() != d.len() {
        return None;
    }
    let mut map = Vec::with_capacity(c.len());
    let mut used = vec![false; d.len()];
    fn go(c: &QCategory, d: &QCategory, map: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let k = map.len();
        if k == c.len() {
            return true;
        }
        for cand in 0..d.len() {
            if used[cand] || d.type_of(cand) != c.type_of(k) || d.hom(cand, cand) != c.hom(k, k) {
                continue;
            }
            if (0..k).all(|j| d.hom(map[j], cand) == c.hom(j, k) && d.hom(cand, map[j]) == c.hom(k, j)) {
                used[cand] = true;
                map.push(cand);
                if go(c, d, map, used) {
                    return true;
                }
                map.pop();
                used[cand] = false;
            }
        }
        false
    }
    go(c, d, &mut map, &mut used).then_some(map)
}

/// Per-fiber order isomorphisms `p(X) → r(X)` commuting with the arrow
/// maps up to equivalence.
pub fn pseudofunctor_isomorphism(p: &Pseudofunctor2, r: &Pseudofunctor2) -> Option<Vec<Vec<usize>>> {
    if p.base != r.base || p.fibers.iter().zip(&r.fibers).any(|(a, b)| a.len() != b.len()) {
        return None;
    }
    let slots: Vec<(usize, usize)> =
        p.fibers.iter().enumerate().flat_map(|(x, f)| (0..f.len()).map(move |e| (x, e))).collect();
    let mut maps: Vec<Vec<Option<usize>>> = p.fibers.iter().map(|f| vec![None; f.len()]).collect();
    fn consistent(p: &Pseudofunctor2, r: &Pseudofunctor2, maps: &[Vec<Option<usize>>], x: usize, e: usize) -> bool {
        let v = maps[x][e].unwrap();
        let (pf, rf) = (&p.fibers[x], &r.fibers[x]);
        for (o, w) in maps[x].iter().enumerate() {
            if let Some(w) = *w {
                if (o != e && w == v) || pf.leq(o, e) != rf.leq(w, v) || pf.leq(e, o) != rf.leq(v, w) {
                    return false;
                }
            }
        }
        let q = &p.base;
        let n = q.object_count();
        for a in 0..n {
            for b in 0..n {
                for f in 0..q.hom(a, b).len() {
                    let (pm, rm) = (p.action(a, b, f), r.action(a, b, f));
                    for (ye, my) in maps[b].iter().enumerate() {
                        let Some(my) = *my else { continue };
                        let Some(img) = maps[a][pm.apply(ye)] else { continue };
                        if !r.fibers[a].equivalent(img, rm.apply(my)) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
    fn go(p: &Pseudofunctor2, r: &Pseudofunctor2, slots: &[(usize, usize)], i: usize, maps: &mut Vec<Vec<Option<usize>>>) -> bool {
        let Some(&(x, e)) = slots.get(i) else { return true };
        for v in 0..r.fibers[x].len() {
            maps[x][e] = Some(v);
            if consistent(p, r, maps, x, e) && go(p, r, slots, i + 1, maps) {
                return true;
            }
        }
        maps[x][e] = None;
        false
    }
    go(p, r, &slots, 0, &mut maps).then(|| maps.into_iter().map(|f| f.into_iter().map(Option::unwrap).collect()).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryRoundtrip {
    pub pseudofunctor: Pseudofunctor2,
    pub back: QCategory,
    pub isomorphism: Option<Vec<usize>>,
}

/// `C ↦ F_C ↦ C^{F_C}` for a tensored category.
pub fn category_roundtrip(c: &QCategory) -> Result<CategoryRoundtrip, VariationError> {
    let pseudofunctor = category_to_pseudofunctor(c)?;
    let back = pseudofunctor_to_category(&pseudofunctor)?;
    let isomorphism = find_isomorphism(c, &back);
    Ok(CategoryRoundtrip { pseudofunctor, back, isomorphism })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudofunctorRoundtrip {
    pub category: QCategory,
    pub back: Pseudofunctor2,
    pub isomorphism: Option<Vec<Vec<usize>>>,
}

/// `F ↦ C^F ↦ F_{C^F}` for a valid closed pseudofunctor.
pub fn pseudofunctor_roundtrip(p: &Pseudofunctor2) -> Result<PseudofunctorRoundtrip, VariationError> {
    let category = pseudofunctor_to_category(p)?;
    let back = category_to_pseudofunctor(&category)?;
    let isomorphism = pseudofunctor_isomorphism(p, &back);
    Ok(PseudofunctorRoundtrip { category, back, isomorphism })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleRoundtrip {
    pub category: QCategory,
    pub back: QModule,
    pub isomorphism: Option<Vec<Vec<usize>>>,
}

/// `M ↦ C^M ↦` module again.
pub fn module_roundtrip(m: &QModule, cap: u128, exec: Exec) -> Result<ModuleRoundtrip, VariationError> {
    let category = module_to_category(m)?;
    let back = category_to_module(&category, cap, exec)?;
    let isomorphism = pseudofunctor_isomorphism(&m.as_pseudofunctor(), &back.as_pseudofunctor());
    Ok(ModuleRoundtrip { category, back, isomorphism })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryModuleRoundtrip {
    pub module: QModule,
    pub back: QCategory,
    pub isomorphism: Option<Vec<usize>>,
}

/// A skeletal cocomplete category to its module and back.
pub fn category_module_roundtrip(c: &QCategory, cap: u128, exec: Exec) -> Result<CategoryModuleRoundtrip, VariationError> {
    let module = category_to_module(c, cap, exec)?;
    let back = module_to_category(&module)?;
    let isomorphism = find_isomorphism(c, &back);
    Ok(CategoryModuleRoundtrip { module, back, isomorphism })
}

/// A right action of a quantale on a sup-lattice, `act[m * |K| + f]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantaleAction {
    name: String,
    quantale: Arc<Quantaloid>,
    carrier: Arc<FiniteSupLattice>,
    act: Vec<usize>,
}

impl QuantaleAction {
    pub fn new(
        name: impl Into<String>,
        quantale: Arc<Quantaloid>,
        carrier: Arc<FiniteSupLattice>,
        act: Vec<usize>,
    ) -> Result<Self, VariationError> {
        if !quantale.is_one_object() {
            return Err(VariationError::NotOneObject(quantale.name().to_string()));
        }
        let k = quantale.hom(0, 0);
        if act.len() != carrier.len() * k.len() || act.iter().any(|&m| m >= carrier.len()) {
            return Err(VariationError::Shape("action table is not total".into()));
        }
        let a = QuantaleAction { name: name.into(), quantale, carrier, act };
        if let Some((law, witness)) = a.law_failure() {
            return Err(VariationError::ActionLawFails { law, witness });
        }
        Ok(a)
    }

    fn law_failure(&self) -> Option<(&'static str, String)> {
        let (q, m) = (&self.quantale, &self.carrier);
        let k = q.hom(0, 0);
        let one = q.identity(0);
        for e in 0..m.len() {
            if self.apply(e, one) != e {
                return Some(("unit", m.name(e).to_string()));
            }
        }
        for e in 0..m.len() {
            for g in 0..k.len() {
                for f in 0..k.len() {
                    if self.apply(e, q.compose_raw(0, 0, 0, g, f)) != self.apply(self.apply(e, g), f) {
                        return Some(("associativity", format!("({},{},{})", m.name(e), k.name(g), k.name(f))));
                    }
                }
            }
        }
        for f in 0..k.len() {
            if self.apply(m.bottom(), f) != m.bottom() {
                return Some(("joins-in-carrier", format!("(⊥,{})", k.name(f))));
            }
            for a in 0..m.len() {
                for b in a + 1..m.len() {
                    if self.apply(m.join(a, b), f) != m.join(self.apply(a, f), self.apply(b, f)) {
                        return Some(("joins-in-carrier", format!("({}∨{},{})", m.name(a), m.name(b), k.name(f))));
                    }
                }
            }
        }
        for e in 0..m.len() {
            if self.apply(e, k.bottom()) != m.bottom() {
                return Some(("joins-in-quantale", format!("({},0)", m.name(e))));
            }
            for f in 0..k.len() {
                for g in f + 1..k.len() {
                    if self.apply(e, k.join(f, g)) != m.join(self.apply(e, f), self.apply(e, g)) {
                        return Some(("joins-in-quantale", format!("({},{}∨{})", m.name(e), k.name(f), k.name(g))));
                    }
                }
            }
        }
        None
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn quantale(&self) -> &Arc<Quantaloid> {
        &self.quantale
    }

    pub fn carrier(&self) -> &Arc<FiniteSupLattice> {
        &self.carrier
    }

    pub fn apply(&self, m: usize, f: usize) -> usize {
        self.act[m * self.quantale.hom(0, 0).len() + f]
    }

    pub fn table(&self) -> &[usize] {
        &self.act
    }
}

/// `M(f) = act(−, f)`.
pub fn action_to_module(a: &QuantaleAction) -> Result<QModule, VariationError> {
    let order = a.carrier.order_arc().clone();
    let maps = (0..a.quantale.hom(0, 0).len())
        .map(|f| MonotoneMap::new(order.clone(), order.clone(), (0..a.carrier.len()).map(|m| a.apply(m, f)).collect()))
        .collect::<Result<Vec<_>, _>>()?;
    QModule::new(a.name.clone(), a.quantale.clone(), vec![a.carrier.clone()], vec![maps])
}

/// `act(m, f) = M(f)(m)`.
pub fn module_to_action(m: &QModule) -> Result<QuantaleAction, VariationError> {
    if !m.base.is_one_object() {
        return Err(VariationError::NotOneObject(m.base.name().to_string()));
    }
    let k = m.base.hom(0, 0).len();
    let carrier = m.lattices[0].clone();
    let act = (0..carrier.len() * k).map(|i| m.action(0, 0, i % k).apply(i / k)).collect();
    QuantaleAction::new(m.name.clone(), m.base.clone(), carrier, act)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MorphismCheck {
    pub join_preserving: bool,
    pub equivariant: bool,
    /// The naturality-square verdict on the corresponding modules.
    pub module_morphism: bool,
}

/// Whether `alpha` is a morphism of actions, checked elementwise and
/// through the module squares.
pub fn morphism_check(a: &QuantaleAction, b: &QuantaleAction, alpha: &MonotoneMap) -> Result<MorphismCheck, VariationError> {
    if a.quantale != b.quantale || alpha.source() != a.carrier.order_arc() || alpha.target() != b.carrier.order_arc() {
        return Err(VariationError::Shape("morphism does not run between the two carriers".into()));
    }
    let k = a.quantale.hom(0, 0).len();
    let join_preserving = alpha.sup_failure().is_none();
    let equivariant = (0..a.carrier.len()).all(|m| (0..k).all(|f| alpha.apply(a.apply(m, f)) == b.apply(alpha.apply(m), f)));
    let module_morphism = ModuleMorphism { components: vec![alpha.clone()] }.is_valid(&action_to_module(a)?, &action_to_module(b)?);
    Ok(MorphismCheck { join_preserving, equivariant, module_morphism })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::DEFAULT_CAP;
    use crate::order::FinitePreorder;

    fn q2() -> Arc<Quantaloid> {
        Arc::new(Quantaloid::boolean2())
    }

    fn chain3() -> Arc<QCategory> {
        Arc::new(QCategory::free_fiber(q2(), &FinitePreorder::chain(&["bot", "m", "top"]), 0).with_name("chain3"))
    }

    fn chain3_action() -> QuantaleAction {
        let carrier = Arc::new(FiniteSupLattice::chain(&["bot", "m", "top"]));
        QuantaleAction::new("chain3", q2(), carrier, vec![0, 0, 0, 1, 0, 2]).unwrap()
    }

    #[test]
    fn chain_pseudofunctor() {
        let p = category_to_pseudofunctor(&chain3()).unwrap();
        assert_eq!(p.action(0, 0, 1).table(), &[0, 1, 2]);
        assert_eq!(p.action(0, 0, 0).table(), &[0, 0, 0]);
        let r = validate_pseudofunctor(&p);
        assert!(r.valid && r.closed);
        let levels = classify_pseudofunctor(&p);
        assert!(levels.maps_level && levels.cocont_level && levels.skeletal_level);
    }

    #[test]
    fn mutations_break_closedness_and_validity() {
        let p = category_to_pseudofunctor(&chain3()).unwrap();
        let fib = p.fiber(0).clone();
        let mut broken = p.clone();
        broken.actions[0][0] = MonotoneMap::identity(fib.clone());
        let r = validate_pseudofunctor(&broken);
        assert!(!r.closed);
        let mut broken = p.clone();
        broken.actions[0][1] = MonotoneMap::constant(fib.clone(), fib, 0);
        assert!(!validate_pseudofunctor(&broken).valid);
    }

    #[test]
    fn two_chain_from_pseudofunctor() {
        let fib = Arc::new(FinitePreorder::chain(&["lo", "hi"]));
        let actions = vec![vec![MonotoneMap::constant(fib.clone(), fib.clone(), 0), MonotoneMap::identity(fib.clone())]];
        let p = Pseudofunctor2::new("two", q2(), vec![fib], actions).unwrap();
        let c = pseudofunctor_to_category(&p).unwrap();
        assert_eq!(c.hom_table(), &[1, 1, 0, 1]);
    }

    #[test]
    fn roundtrips() {
        let c = chain3();
        assert!(category_roundtrip(&c).unwrap().isomorphism.is_some());
        let m = action_to_module(&chain3_action()).unwrap();
        let rt = module_roundtrip(&m, DEFAULT_CAP, Exec::Sequential).unwrap();
        assert!(rt.isomorphism.is_some());
        assert!(find_isomorphism(&rt.category, &c).is_some());
        let back = category_module_roundtrip(&c, DEFAULT_CAP, Exec::Sequential).unwrap();
        assert!(back.isomorphism.is_some());
    }

    #[test]
    fn empty_category_gives_empty_pseudofunctor() {
        let empty = QCategory::new("empty", q2(), vec![], vec![], vec![]).unwrap();
        let p = category_to_pseudofunctor(&empty).unwrap();
        assert!(p.fiber(0).is_empty());
        let r = validate_pseudofunctor(&p);
        assert!(r.valid && r.closed);
        assert!(pseudofunctor_to_category(&p).unwrap().is_empty());
    }

    #[test]
    fn transformation_levels() {
        let c = chain3();
        let id = functor_to_laxnat(&QFunctor::identity(c.clone())).unwrap();
        let l = classify_transformation(&id);
        assert!(l.pseudonatural && l.left_adjoint_components && l.sup_morphism_components);
        let bot = QFunctor::new("bot", c.clone(), c.clone(), vec![0, 0, 0]).unwrap();
        let l = classify_transformation(&functor_to_laxnat(&bot).unwrap());
        assert!(l.pseudonatural && l.left_adjoint_components);
        let lift = QFunctor::new("lift", c.clone(), c.clone(), vec![1, 1, 2]).unwrap();
        assert!(!classify_transformation(&functor_to_laxnat(&lift).unwrap()).pseudonatural);
    }

    #[test]
    fn duplicated_middle_is_not_skeletal() {
        let order = FinitePreorder::generated(
            vec!["bot".into(), "m".into(), "m2".into(), "top".into()],
            &[(0, 1), (1, 2), (2, 1), (2, 3)],
        )
        .unwrap();
        let c = QCategory::free_fiber(q2(), &order, 0);
        let levels = classify_pseudofunctor(&category_to_pseudofunctor(&c).unwrap());
        assert!(levels.cocont_level && !levels.skeletal_level);
        assert_eq!(category_to_module(&c, DEFAULT_CAP, Exec::Sequential).unwrap_err().kind(), "NotSkeletal");
    }

    #[test]
    fn action_bridge() {
        let a = chain3_action();
        let m = action_to_module(&a).unwrap();
        assert_eq!(m.action(0, 0, 0).table(), &[0, 0, 0]);
        assert_eq!(module_to_action(&m).unwrap(), a);
        let mut table = a.table().to_vec();
        table[2 * 2 + 1] = 1;
        let err = QuantaleAction::new("bad", q2(), a.carrier().clone(), table).unwrap_err();
        assert!(matches!(err, VariationError::ActionLawFails { law: "unit", ref witness } if witness == "top"));
        let id = MonotoneMap::identity(a.carrier().order_arc().clone());
        let check = morphism_check(&a, &a, &id).unwrap();
        assert!(check.join_preserving && check.equivariant && check.module_morphism);
    }

    #[test]
    fn module_unit_law_is_strict() {
        let l = Arc::new(FiniteSupLattice::chain(&["bot", "m", "top"]));
        let o = l.order_arc().clone();
        let maps = vec![MonotoneMap::constant(o.clone(), o.clone(), 0), MonotoneMap::constant(o.clone(), o, 0)];
        let err = QModule::new("bad", q2(), vec![l], vec![maps]).unwrap_err();
        assert!(matches!(err, VariationError::ModuleLawFails { law: "unit", .. }));
    }
}
