//! Tensors, cotensors, conical and weighted colimits, fiber suprema,
//! completeness classification and adjoints between Q-categories.
//!
//! Every universal object is returned as a [`WitnessSet`]: all objects that
//! satisfy the defining property, so callers choose representatives.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::category::{presheaf_tables, CategoryError, Distributor, QCategory, QFunctor};
use crate::order::MonotoneMap;
use crate::par::Exec;
use crate::quantaloid::QArrow;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompletionError {
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error("the source lacks the tensor {y} ⊗ {f}")]
    SourceNotTensored { y: String, f: String },
    #[error("F({y} ⊗ {f}) is not a tensor of F({y}) and {f}")]
    TensorsNotPreserved { y: String, f: String },
    #[error("no largest object of type {ty} maps below {b}")]
    NoFiberAdjoint { ty: String, b: String },
    #[error("colimit routes disagree at {0}")]
    RouteDisagreement(String),
    #[error("synthesized map fails the adjunction check: {0}")]
    AdjunctionFails(String),
}

impl CompletionError {
    pub fn kind(&self) -> &'static str {
        match self {
            CompletionError::Category(e) => e.kind(),
            CompletionError::SourceNotTensored { .. } => "SourceNotTensored",
            CompletionError::TensorsNotPreserved { .. } => "TensorsNotPreserved",
            CompletionError::NoFiberAdjoint { .. } => "NoFiberAdjoint",
            CompletionError::RouteDisagreement(..) => "RouteDisagreement",
            CompletionError::AdjunctionFails(..) => "AdjunctionFails",
        }
    }
}

/// All objects satisfying a universal property, ascending by id.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct WitnessSet {
    pub members: Vec<usize>,
}

impl WitnessSet {
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn representative(&self) -> Option<usize> {
        self.members.first().copied()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(&x)
    }

    pub fn names(&self, c: &QCategory) -> Vec<String> {
        self.members.iter().map(|&m| c.object_name(m).to_string()).collect()
    }
}

/// Objects `w` of type `ty` with `hom(w, z) = row[z]` for all `z`.
pub fn realize_row(c: &QCategory, ty: usize, row: &[usize]) -> WitnessSet {
    WitnessSet { members: (0..c.len()).filter(|&w| c.type_of(w) == ty && (0..c.len()).all(|z| c.hom(w, z) == row[z])).collect() }
}

/// Objects `w` of type `ty` with `hom(z, w) = col[z]` for all `z`.
pub fn realize_column(c: &QCategory, ty: usize, col: &[usize]) -> WitnessSet {
    WitnessSet { members: (0..c.len()).filter(|&w| c.type_of(w) == ty && (0..c.len()).all(|z| c.hom(z, w) == col[z])).collect() }
}

fn check_arrow(c: &QCategory, f: QArrow) -> Result<(), CategoryError> {
    let q = c.base();
    if f.src >= q.object_count() || f.dst >= q.object_count() || f.value >= q.hom(f.src, f.dst).len() {
        return Err(CategoryError::TypeMismatch(format!("{f:?} is not an arrow of {}", q.name())));
    }
    Ok(())
}

/// The hom row a tensor `y ⊗ f` must have: `z ↦ [f, hom(y, z)]`.
pub fn tensor_row(c: &QCategory, y: usize, f: QArrow) -> Vec<usize> {
    let q = c.base();
    (0..c.len()).map(|z| q.lift_raw(f.src, f.dst, c.type_of(z), f.value, c.hom(y, z))).collect()
}

/// The hom column a cotensor `⟨f, x⟩` must have: `z ↦ {f, hom(z, x)}`.
pub fn cotensor_column(c: &QCategory, f: QArrow, x: usize) -> Vec<usize> {
    let q = c.base();
    (0..c.len()).map(|z| q.extend_raw(f.src, f.dst, c.type_of(z), f.value, c.hom(z, x))).collect()
}

pub fn tensor(c: &QCategory, y: usize, f: QArrow) -> Result<WitnessSet, CategoryError> {
    check_arrow(c, f)?;
    if y >= c.len() || f.dst != c.type_of(y) {
        return Err(CategoryError::TypeMismatch(format!("tensor needs an arrow into the type of object {y}")));
    }
    Ok(realize_row(c, f.src, &tensor_row(c, y, f)))
}

pub fn cotensor(c: &QCategory, f: QArrow, x: usize) -> Result<WitnessSet, CategoryError> {
    check_arrow(c, f)?;
    if x >= c.len() || f.src != c.type_of(x) {
        return Err(CategoryError::TypeMismatch(format!("cotensor needs an arrow out of the type of object {x}")));
    }
    Ok(realize_column(c, f.dst, &cotensor_column(c, f, x)))
}

fn check_family(c: &QCategory, ty: usize, family: &[usize]) -> Result<(), CategoryError> {
    if ty >= c.base().object_count() {
        return Err(CategoryError::TypeMismatch(format!("type {ty} is not an object of the base")));
    }
    if let Some(&bad) = family.iter().find(|&&m| m >= c.len() || c.type_of(m) != ty) {
        return Err(CategoryError::TypeMismatch(format!("family member {bad} has another type")));
    }
    Ok(())
}

/// The hom row of a conical colimit: `z ↦ ⋀_i hom(c_i, z)`.
pub fn conical_row(c: &QCategory, ty: usize, family: &[usize]) -> Vec<usize> {
    let q = c.base();
    (0..c.len()).map(|z| q.hom(c.type_of(z), ty).meet_all(family.iter().map(|&m| c.hom(m, z)))).collect()
}

pub fn conical_colimit(c: &QCategory, ty: usize, family: &[usize]) -> Result<WitnessSet, CategoryError> {
    check_family(c, ty, family)?;
    Ok(realize_row(c, ty, &conical_row(c, ty, family)))
}

/// Least upper bounds of `family` in the fiber of type `ty`.
pub fn fiber_supremum(c: &QCategory, ty: usize, family: &[usize]) -> Result<WitnessSet, CategoryError> {
    check_family(c, ty, family)?;
    let fiber = c.objects_of_type(ty);
    let ups: Vec<usize> = fiber.iter().copied().filter(|&u| family.iter().all(|&m| c.leq(m, u))).collect();
    Ok(WitnessSet { members: ups.iter().copied().filter(|&u| ups.iter().all(|&v| c.leq(u, v))).collect() })
}

/// Colimit witnesses for one object `a` of the weight's domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColimitRoutes {
    /// From the hom-row criterion, always available.
    pub general: WitnessSet,
    /// Conical colimit of the tensors `Fb ⊗ Φ(b, a)`, when all exist.
    pub via_conical: Option<WitnessSet>,
    /// Fiber supremum of the same tensors, when all exist.
    pub via_supremum: Option<WitnessSet>,
}

fn weighted_row(c: &QCategory, ty: usize, weight: impl Fn(usize) -> usize, images: &[usize]) -> Vec<usize> {
    let q = c.base();
    (0..c.len())
        .map(|z| {
            let tz = c.type_of(z);
            q.hom(tz, ty).meet_all(
                images.iter().enumerate().map(|(b, &fb)| q.lift_raw(ty, c.type_of(fb), tz, weight(b), c.hom(fb, z))),
            )
        })
        .collect()
}

fn routes(c: &QCategory, ty: usize, weight: impl Fn(usize) -> usize, images: &[usize]) -> Result<ColimitRoutes, CompletionError> {
    let general = realize_row(c, ty, &weighted_row(c, ty, &weight, images));
    let mut tensors = Vec::with_capacity(images.len());
    for (b, &fb) in images.iter().enumerate() {
        match tensor(c, fb, QArrow::new(ty, c.type_of(fb), weight(b)))?.representative() {
            Some(t) => tensors.push(t),
            None => return Ok(ColimitRoutes { general, via_conical: None, via_supremum: None }),
        }
    }
    let via_conical = conical_colimit(c, ty, &tensors)?;
    let via_supremum = fiber_supremum(c, ty, &tensors)?;
    if via_conical != general || (!general.is_empty() && via_supremum != general) {
        return Err(CompletionError::RouteDisagreement(format!("type {}", c.base().object_name(ty))));
    }
    Ok(ColimitRoutes { general, via_conical: Some(via_conical), via_supremum: Some(via_supremum) })
}

/// Colimit of `F: B → C` weighted by `Φ: A ⇸ B`, one entry per `a ∈ A`.
pub fn weighted_colimit(phi: &Distributor, functor: &QFunctor) -> Result<Vec<ColimitRoutes>, CompletionError> {
    if phi.target() != functor.source() {
        return Err(CategoryError::TypeMismatch("weight codomain is not the diagram domain".into()).into());
    }
    let (a_cat, c) = (phi.source(), functor.target());
    let images: Vec<usize> = (0..functor.source().len()).map(|b| functor.apply(b)).collect();
    (0..a_cat.len()).map(|a| routes(c, a_cat.type_of(a), |b| phi.get(b, a), &images)).collect()
}

/// Colimit of the identity diagram weighted by a presheaf table of type `ty`.
pub fn presheaf_colimit(c: &QCategory, ty: usize, table: &[usize]) -> Result<ColimitRoutes, CompletionError> {
    let images: Vec<usize> = (0..c.len()).collect();
    routes(c, ty, |b| table[b], &images)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompletenessReport {
    pub tensored: bool,
    pub cotensored: bool,
    pub conically_cocomplete: bool,
    pub order_cocomplete: bool,
    pub cocomplete: bool,
    pub skeletal: bool,
    /// Failure witnesses keyed by flag name.
    pub witnesses: Vec<(String, String)>,
}

impl CompletenessReport {
    pub fn flags(&self) -> [(&'static str, bool); 5] {
        [
            ("tensored", self.tensored),
            ("cotensored", self.cotensored),
            ("conically_cocomplete", self.conically_cocomplete),
            ("order_cocomplete", self.order_cocomplete),
            ("cocomplete", self.cocomplete),
        ]
    }

    pub fn witness(&self, flag: &str) -> Option<&str> {
        self.witnesses.iter().find(|(k, _)| k == flag).map(|(_, w)| w.as_str())
    }
}

/// First `(y, f)` whose tensor is missing.
pub fn missing_tensor(c: &QCategory) -> Option<(usize, QArrow)> {
    let q = c.base();
    for y in 0..c.len() {
        for x in 0..q.object_count() {
            for v in 0..q.hom(x, c.type_of(y)).len() {
                let f = QArrow::new(x, c.type_of(y), v);
                if realize_row(c, x, &tensor_row(c, y, f)).is_empty() {
                    return Some((y, f));
                }
            }
        }
    }
    None
}

/// First `(f, x)` whose cotensor is missing.
pub fn missing_cotensor(c: &QCategory) -> Option<(QArrow, usize)> {
    let q = c.base();
    for x in 0..c.len() {
        for y in 0..q.object_count() {
            for v in 0..q.hom(c.type_of(x), y).len() {
                let f = QArrow::new(c.type_of(x), y, v);
                if realize_column(c, y, &cotensor_column(c, f, x)).is_empty() {
                    return Some((f, x));
                }
            }
        }
    }
    None
}

fn subsets(members: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0u64..1 << members.len()).map(move |mask| {
        members.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &m)| m).collect()
    })
}

const MAX_FIBER_FOR_SUBSETS: usize = 20;

/// First `(type, family)` without a conical colimit, over all subsets of
/// each fiber.
pub fn missing_conical(c: &QCategory) -> Result<Option<(usize, Vec<usize>)>, CategoryError> {
    for ty in 0..c.base().object_count() {
        let fiber = c.objects_of_type(ty);
        if fiber.len() > MAX_FIBER_FOR_SUBSETS {
            return Err(CategoryError::EnumerationCapExceeded(1u128 << fiber.len()));
        }
        for family in subsets(&fiber) {
            if realize_row(c, ty, &conical_row(c, ty, &family)).is_empty() {
                return Ok(Some((ty, family)));
            }
        }
    }
    Ok(None)
}

/// First `(type, family)` without a fiber supremum; the empty family and
/// pairs suffice.
pub fn missing_supremum(c: &QCategory) -> Option<(usize, Vec<usize>)> {
    for ty in 0..c.base().object_count() {
        let fiber = c.objects_of_type(ty);
        if fiber_supremum(c, ty, &[]).unwrap().is_empty() {
            return Some((ty, Vec::new()));
        }
        for (i, &a) in fiber.iter().enumerate() {
            for &b in &fiber[i + 1..] {
                if fiber_supremum(c, ty, &[a, b]).unwrap().is_empty() {
                    return Some((ty, vec![a, b]));
                }
            }
        }
    }
    None
}

/// First presheaf `(type, table)` whose colimit is missing.
pub fn missing_presheaf_colimit(c: &QCategory, cap: u128, exec: Exec) -> Result<Option<(usize, Vec<usize>)>, CompletionError> {
    for ty in 0..c.base().object_count() {
        let tables = presheaf_tables(c, ty, cap, exec)?;
        let missing = exec.map(&tables, |t| {
            let row = weighted_row(c, ty, |b| t[b], &(0..c.len()).collect::<Vec<_>>());
            realize_row(c, ty, &row).is_empty()
        });
        if let Some(i) = missing.iter().position(|&m| m) {
            return Ok(Some((ty, tables[i].clone())));
        }
    }
    Ok(None)
}

pub fn describe_family(c: &QCategory, ty: usize, family: &[usize]) -> String {
    let names: Vec<&str> = family.iter().map(|&m| c.object_name(m)).collect();
    format!("type {} family {{{}}}", c.base().object_name(ty), names.join(","))
}

pub fn describe_presheaf(c: &QCategory, ty: usize, table: &[usize]) -> String {
    let q = c.base();
    let entries: Vec<String> = table
        .iter()
        .enumerate()
        .map(|(o, &v)| format!("{}={}", c.object_name(o), q.hom(ty, c.type_of(o)).name(v)))
        .collect();
    format!("presheaf of type {} [{}]", q.object_name(ty), entries.join(","))
}

pub fn completeness_report(c: &QCategory, cap: u128, exec: Exec) -> Result<CompletenessReport, CompletionError> {
    let q = c.base();
    let mut witnesses = Vec::new();
    let tensored = match missing_tensor(c) {
        Some((y, f)) => {
            witnesses.push(("tensored".into(), format!("{} ⊗ {}", c.object_name(y), q.arrow_name(f))));
            false
        }
        None => true,
    };
    let cotensored = match missing_cotensor(c) {
        Some((f, x)) => {
            witnesses.push(("cotensored".into(), format!("<{}, {}>", q.arrow_name(f), c.object_name(x))));
            false
        }
        None => true,
    };
    let conically_cocomplete = match missing_conical(c)? {
        Some((ty, fam)) => {
            witnesses.push(("conically_cocomplete".into(), describe_family(c, ty, &fam)));
            false
        }
        None => true,
    };
    let order_cocomplete = match missing_supremum(c) {
        Some((ty, fam)) => {
            witnesses.push(("order_cocomplete".into(), describe_family(c, ty, &fam)));
            false
        }
        None => true,
    };
    let cocomplete = match missing_presheaf_colimit(c, cap, exec)? {
        Some((ty, t)) => {
            witnesses.push(("cocomplete".into(), describe_presheaf(c, ty, &t)));
            false
        }
        None => true,
    };
    Ok(CompletenessReport { tensored, cotensored, conically_cocomplete, order_cocomplete, cocomplete, skeletal: c.is_skeletal(), witnesses })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjunctionCheck {
    /// `a ≤ GFa` and `FGb ≤ b` everywhere.
    pub holds: bool,
    /// `B(Fa, b) = A(a, Gb)` everywhere.
    pub hom_criterion: bool,
    pub witness: Option<String>,
}

pub fn check_adjunction(f: &QFunctor, g: &QFunctor) -> Result<AdjunctionCheck, CategoryError> {
    if f.source() != g.target() || f.target() != g.source() {
        return Err(CategoryError::TypeMismatch("functors are not opposite in direction".into()));
    }
    let (a, b) = (f.source(), f.target());
    let mut witness = None;
    for x in 0..a.len() {
        if !a.leq(x, g.apply(f.apply(x))) {
            witness = Some(format!("unit fails at {}", a.object_name(x)));
            break;
        }
    }
    if witness.is_none() {
        for y in 0..b.len() {
            if !b.leq(f.apply(g.apply(y)), y) {
                witness = Some(format!("counit fails at {}", b.object_name(y)));
                break;
            }
        }
    }
    let hom_criterion = (0..a.len()).all(|x| (0..b.len()).all(|y| b.hom(f.apply(x), y) == a.hom(x, g.apply(y))));
    Ok(AdjunctionCheck { holds: witness.is_none(), hom_criterion, witness })
}

/// First `(y, f)` at which `F(y ⊗ f)` fails the tensor property in the target.
pub fn tensor_preservation_failure(functor: &QFunctor) -> Option<(usize, QArrow)> {
    let (a, b) = (functor.source(), functor.target());
    let q = a.base();
    for y in 0..a.len() {
        let ty = a.type_of(y);
        for x in 0..q.object_count() {
            for v in 0..q.hom(x, ty).len() {
                let f = QArrow::new(x, ty, v);
                if let Some(t) = realize_row(a, x, &tensor_row(a, y, f)).representative() {
                    let image = functor.apply(t);
                    let want = tensor_row(b, functor.apply(y), f);
                    if (0..b.len()).any(|z| b.hom(image, z) != want[z]) {
                        return Some((y, f));
                    }
                }
            }
        }
    }
    None
}

pub fn preserves_tensors(functor: &QFunctor) -> bool {
    tensor_preservation_failure(functor).is_none()
}

/// Whether every fiber supremum in the source is sent to a supremum.
pub fn preserves_suprema(functor: &QFunctor) -> bool {
    let (a, b) = (functor.source(), functor.target());
    (0..a.base().object_count()).all(|ty| {
        let fiber = a.objects_of_type(ty);
        if fiber.len() > MAX_FIBER_FOR_SUBSETS {
            return false;
        }
        let all = subsets(&fiber).all(|fam| {
            let sup = fiber_supremum(a, ty, &fam).unwrap();
            let images: Vec<usize> = fam.iter().map(|&m| functor.apply(m)).collect();
            sup.representative()
                .is_none_or(|s| fiber_supremum(b, ty, &images).unwrap().contains(functor.apply(s)))
        });
        all
    })
}

/// Whether every presheaf-weighted colimit in the source is sent to the
/// corresponding colimit in the target.
pub fn preserves_presheaf_colimits(functor: &QFunctor, cap: u128, exec: Exec) -> Result<bool, CompletionError> {
    let (a, b) = (functor.source(), functor.target());
    let images: Vec<usize> = (0..a.len()).map(|x| functor.apply(x)).collect();
    let all: Vec<usize> = (0..a.len()).collect();
    for ty in 0..a.base().object_count() {
        let tables = presheaf_tables(a, ty, cap, exec)?;
        let ok = exec.map(&tables, |t| match realize_row(a, ty, &weighted_row(a, ty, |i| t[i], &all)).representative() {
            None => true,
            Some(w) => {
                let want = weighted_row(b, ty, |i| t[i], &images);
                (0..b.len()).all(|z| b.hom(functor.apply(w), z) == want[z])
            }
        });
        if ok.contains(&false) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The right adjoint of `F`, built fiberwise from largest preimages below
/// each object, picking the lowest id in the largest class.
pub fn synthesize_right_adjoint(functor: &QFunctor) -> Result<QFunctor, CompletionError> {
    let (a, b) = (functor.source(), functor.target());
    let q = a.base();
    if let Some((y, f)) = missing_tensor(a) {
        return Err(CompletionError::SourceNotTensored { y: a.object_name(y).into(), f: q.arrow_name(f) });
    }
    if let Some((y, f)) = tensor_preservation_failure(functor) {
        return Err(CompletionError::TensorsNotPreserved { y: a.object_name(y).into(), f: q.arrow_name(f) });
    }
    let mut map = Vec::with_capacity(b.len());
    for y in 0..b.len() {
        let ty = b.type_of(y);
        let below: Vec<usize> = a.objects_of_type(ty).into_iter().filter(|&x| b.leq(functor.apply(x), y)).collect();
        match below.iter().copied().find(|&m| below.iter().all(|&o| a.leq(o, m))) {
            Some(m) => map.push(m),
            None => {
                return Err(CompletionError::NoFiberAdjoint { ty: q.object_name(ty).into(), b: b.object_name(y).into() })
            }
        }
    }
    let g = QFunctor::new(format!("{}^*", functor.name()), b.clone(), a.clone(), map)
        .map_err(|e| CompletionError::AdjunctionFails(e.to_string()))?;
    let check = check_adjunction(functor, &g)?;
    if !check.holds {
        return Err(CompletionError::AdjunctionFails(check.witness.unwrap_or_default()));
    }
    Ok(g)
}

/// `F_X: A_X → B_X` as a monotone map between fiber preorders.
pub fn fiber_map(functor: &QFunctor, ty: usize) -> MonotoneMap {
    let (sf, tf) = (functor.source().fiber(ty), functor.target().fiber(ty));
    let table = sf.members.iter().map(|&m| tf.position(functor.apply(m)).unwrap()).collect();
    MonotoneMap::new(sf.order.clone(), tf.order.clone(), table).expect("functors are monotone on fibers")
}

/// `y ↦ hom(y, x)` as an object of `P†X`.
pub fn hom_into_copresheaf(c: &Arc<QCategory>, x: usize, pdx: &Arc<QCategory>) -> Result<QFunctor, CategoryError> {
    let map = (0..c.len())
        .map(|y| {
            let a = c.hom_arrow(y, x);
            pdx.arrow_object(a, false).ok_or_else(|| CategoryError::UnknownObject(c.base().arrow_name(a)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    QFunctor::new(format!("hom(-,{})", c.object_name(x)), c.clone(), pdx.clone(), map)
}
