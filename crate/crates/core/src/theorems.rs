//! The law catalogue: each check is a named, executable statement about one
//! instance, returning pass, fail with a witness, or skipped.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::category::{CategoryError, Distributor, QCategory, QFunctor};
use crate::completion::{
    check_adjunction, completeness_report, conical_colimit, cotensor, fiber_map, fiber_supremum, hom_into_copresheaf,
    preserves_presheaf_colimits, preserves_suprema, preserves_tensors, presheaf_colimit, synthesize_right_adjoint,
    tensor, weighted_colimit, CompletenessReport, CompletionError, WitnessSet,
};
use crate::category::presheaf_tables;
use crate::order::{
    is_sup_morphism, right_adjoint, FinitePreorder, FiniteSupLattice, MonotoneMap, OrderAdjunction, OrderError,
};
use crate::par::Exec;
use crate::quantaloid::{QArrow, Quantaloid};
use crate::sweep::monotone_maps;
use crate::variation::{
    action_to_module, category_module_roundtrip, category_roundtrip, category_to_pseudofunctor, classify_pseudofunctor,
    classify_transformation, functor_to_laxnat, module_roundtrip, module_to_action, morphism_check,
    pseudofunctor_roundtrip, pseudofunctor_to_category, validate_pseudofunctor, ModuleMorphism, Pseudofunctor2,
    QModule, QuantaleAction, VariationError,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail(String),
    Skipped(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finding {
    pub check: &'static str,
    pub verdict: Verdict,
}

/// Why a check stopped early.
#[derive(Debug)]
enum Stop {
    Fail(String),
    Skip(String),
}

impl Stop {
    fn from_kind(kind: &str, message: String) -> Stop {
        if kind == "EnumerationCapExceeded" {
            Stop::Skip(message)
        } else {
            Stop::Fail(message)
        }
    }
}

impl From<CategoryError> for Stop {
    fn from(e: CategoryError) -> Self {
        Stop::from_kind(e.kind(), e.to_string())
    }
}

impl From<CompletionError> for Stop {
    fn from(e: CompletionError) -> Self {
        Stop::from_kind(e.kind(), e.to_string())
    }
}

impl From<VariationError> for Stop {
    fn from(e: VariationError) -> Self {
        Stop::from_kind(e.kind(), e.to_string())
    }
}

impl From<OrderError> for Stop {
    fn from(e: OrderError) -> Self {
        Stop::Fail(e.to_string())
    }
}

type Outcome = Result<(), Stop>;

fn ensure(cond: bool, witness: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(Stop::Fail(witness()))
    }
}

fn run(check: &'static str, body: impl FnOnce() -> Outcome) -> Finding {
    let verdict = match body() {
        Ok(()) => Verdict::Pass,
        Err(Stop::Fail(w)) => Verdict::Fail(w),
        Err(Stop::Skip(w)) => Verdict::Skipped(w),
    };
    Finding { check, verdict }
}

fn skip_all(checks: &[&'static str], why: &str) -> Vec<Finding> {
    checks.iter().map(|&check| Finding { check, verdict: Verdict::Skipped(why.to_string()) }).collect()
}

fn subsets(members: &[usize]) -> Vec<Vec<usize>> {
    (0u32..1 << members.len())
        .map(|mask| members.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &m)| m).collect())
        .collect()
}

/// Largest fiber for which all subsets are scanned.
const SUBSET_SCAN_LIMIT: usize = 12;

fn all_equivalent(c: &QCategory, w: &WitnessSet) -> bool {
    w.members.iter().all(|&a| w.members.iter().all(|&b| c.equivalent(a, b)))
}

fn subset_of(a: &WitnessSet, b: &WitnessSet) -> bool {
    a.members.iter().all(|m| b.contains(*m))
}

fn names(c: &QCategory, xs: &[usize]) -> String {
    format!("{{{}}}", xs.iter().map(|&x| c.object_name(x)).collect::<Vec<_>>().join(","))
}

/// Arrows `f` with codomain `ty`.
fn arrows_into(q: &Quantaloid, ty: usize) -> Vec<QArrow> {
    q.arrows().into_iter().filter(|a| a.dst == ty).collect()
}

fn arrows_from(q: &Quantaloid, ty: usize) -> Vec<QArrow> {
    q.arrows().into_iter().filter(|a| a.src == ty).collect()
}

/// `−⊗f` as a map between fiber orders, when every tensor exists.
fn tensor_map(c: &QCategory, f: QArrow) -> Result<Option<MonotoneMap>, Stop> {
    let (from, to) = (c.fiber(f.dst), c.fiber(f.src));
    let mut table = Vec::new();
    for &y in &from.members {
        match tensor(c, y, f)?.representative() {
            Some(t) => table.push(to.position(t).unwrap()),
            None => return Ok(None),
        }
    }
    Ok(Some(MonotoneMap::new(from.order.clone(), to.order.clone(), table)?))
}

/// `⟨f,−⟩` as a map between fiber orders, when every cotensor exists.
fn cotensor_map(c: &QCategory, f: QArrow) -> Result<Option<MonotoneMap>, Stop> {
    let (from, to) = (c.fiber(f.src), c.fiber(f.dst));
    let mut table = Vec::new();
    for &x in &from.members {
        match cotensor(c, f, x)?.representative() {
            Some(t) => table.push(to.position(t).unwrap()),
            None => return Ok(None),
        }
    }
    Ok(Some(MonotoneMap::new(from.order.clone(), to.order.clone(), table)?))
}

/// Copresheaf categories `P†X`, built once per base and object.
#[derive(Default)]
pub struct CopresheafCache {
    built: Mutex<HashMap<(String, usize), Arc<QCategory>>>,
}

impl CopresheafCache {
    fn get(&self, q: &Arc<Quantaloid>, x: usize) -> Arc<QCategory> {
        let key = (q.name().to_string(), x);
        if let Some(c) = self.built.lock().unwrap().get(&key) {
            return c.clone();
        }
        let c = Arc::new(QCategory::copresheaf_pdx(q.clone(), x));
        self.built.lock().unwrap().insert(key, c.clone());
        c
    }
}

/// Shared settings for the category and functor checks.
pub struct Context {
    pub cap: u128,
    pub copresheaves: CopresheafCache,
}

impl Context {
    pub fn new(cap: u128) -> Self {
        Context { cap, copresheaves: CopresheafCache::default() }
    }
}

pub const CATEGORY_CHECKS: &[&str] = &[
    "universal-witnesses-isomorphic",
    "cocomplete-iff-tensored-and-conically-cocomplete",
    "conical-colimit-is-fiber-supremum",
    "fiber-supremum-is-conical-colimit-when-cotensored",
    "completeness-notions-coincide",
    "tensor-unit",
    "cotensor-unit",
    "tensor-associativity",
    "tensor-joins",
    "tensor-monotone",
    "tensor-cotensor-adjunction",
    "right-adjoint-of-tensor-is-cotensor",
    "cotensored-three-ways",
    "weighted-colimit-routes-agree",
    "conical-weight-gives-conical-colimit",
    "opposite-involution",
];

pub const VARIATION_CHECKS: &[&str] = &[
    "pseudofunctor-of-category-is-closed",
    "category-roundtrip",
    "pseudofunctor-roundtrip",
    "levels-match-completeness",
    "automatic-bottoms",
    "maps-level-gives-tops",
    "emptiness-dichotomy",
    "module-roundtrip",
];

/// Runs the completeness report, mapping a cap overrun to `None`.
pub fn report_or_skip(c: &QCategory, cap: u128) -> Result<Option<CompletenessReport>, String> {
    match completeness_report(c, cap, Exec::Sequential) {
        Ok(r) => Ok(Some(r)),
        Err(e) if e.kind() == "EnumerationCapExceeded" => Ok(None),
        Err(e) => Err(e.to_string()),
    }
}

/// Every category-level check on `c`.
pub fn category_checks(c: &QCategory, ctx: &Context) -> Vec<Finding> {
    let report = match report_or_skip(c, ctx.cap) {
        Ok(Some(r)) => r,
        Ok(None) => return skip_all(CATEGORY_CHECKS, "presheaf enumeration exceeds the cap"),
        Err(e) => {
            return CATEGORY_CHECKS.iter().map(|&check| Finding { check, verdict: Verdict::Fail(e.clone()) }).collect()
        }
    };
    let q = c.base().clone();
    let fibers = c.fibers();
    let families: Vec<(usize, Vec<usize>)> = fibers
        .iter()
        .filter(|f| f.members.len() <= SUBSET_SCAN_LIMIT)
        .flat_map(|f| subsets(&f.members).into_iter().map(move |s| (f.ty, s)))
        .collect();
    let mut out = Vec::new();

    out.push(run("universal-witnesses-isomorphic", || {
        for y in 0..c.len() {
            for f in arrows_into(&q, c.type_of(y)) {
                let w = tensor(c, y, f)?;
                ensure(all_equivalent(c, &w), || format!("tensor {} ⊗ {}", c.object_name(y), q.arrow_name(f)))?;
            }
            for f in arrows_from(&q, c.type_of(y)) {
                let w = cotensor(c, f, y)?;
                ensure(all_equivalent(c, &w), || format!("cotensor <{}, {}>", q.arrow_name(f), c.object_name(y)))?;
            }
        }
        for (ty, fam) in &families {
            ensure(all_equivalent(c, &conical_colimit(c, *ty, fam)?), || format!("conical colimit of {}", names(c, fam)))?;
            ensure(all_equivalent(c, &fiber_supremum(c, *ty, fam)?), || format!("supremum of {}", names(c, fam)))?;
        }
        Ok(())
    }));

    out.push(run("cocomplete-iff-tensored-and-conically-cocomplete", || {
        ensure(report.cocomplete == (report.tensored && report.conically_cocomplete), || {
            format!(
                "cocomplete={} tensored={} conically_cocomplete={}",
                report.cocomplete, report.tensored, report.conically_cocomplete
            )
        })
    }));

    out.push(run("conical-colimit-is-fiber-supremum", || {
        for (ty, fam) in &families {
            let (con, sup) = (conical_colimit(c, *ty, fam)?, fiber_supremum(c, *ty, fam)?);
            ensure(subset_of(&con, &sup), || format!("family {}: conical {:?} not suprema {:?}", names(c, fam), con.names(c), sup.names(c)))?;
        }
        Ok(())
    }));

    out.push(run("fiber-supremum-is-conical-colimit-when-cotensored", || {
        if !report.cotensored {
            return Ok(());
        }
        for (ty, fam) in &families {
            let (con, sup) = (conical_colimit(c, *ty, fam)?, fiber_supremum(c, *ty, fam)?);
            ensure(subset_of(&sup, &con), || format!("family {}: supremum {:?} not conical", names(c, fam), sup.names(c)))?;
        }
        ensure(report.conically_cocomplete == report.order_cocomplete, || {
            format!("conically_cocomplete={} order_cocomplete={}", report.conically_cocomplete, report.order_cocomplete)
        })
    }));

    out.push(run("completeness-notions-coincide", || {
        if !(report.tensored && report.cotensored) {
            return Ok(());
        }
        let dual = completeness_report(&c.opposite(), ctx.cap, Exec::Sequential)?;
        let flags = [
            report.conically_cocomplete,
            report.order_cocomplete,
            report.cocomplete,
            dual.conically_cocomplete,
            dual.order_cocomplete,
            dual.cocomplete,
        ];
        ensure(flags.iter().all(|&b| b == flags[0]), || {
            format!("conical/order/cocomplete and their duals read {flags:?}")
        })
    }));

    out.push(run("tensor-unit", || {
        for y in 0..c.len() {
            let one = QArrow::new(c.type_of(y), c.type_of(y), q.identity(c.type_of(y)));
            ensure(tensor(c, y, one)?.contains(y), || format!("{} ⊗ 1 does not contain {0}", c.object_name(y)))?;
        }
        Ok(())
    }));

    out.push(run("cotensor-unit", || {
        for x in 0..c.len() {
            let one = QArrow::new(c.type_of(x), c.type_of(x), q.identity(c.type_of(x)));
            ensure(cotensor(c, one, x)?.contains(x), || format!("<1, {}> does not contain {0}", c.object_name(x)))?;
        }
        Ok(())
    }));

    out.push(run("tensor-associativity", || {
        for y in 0..c.len() {
            for f in arrows_into(&q, c.type_of(y)) {
                let Some(t) = tensor(c, y, f)?.representative() else { continue };
                for g in arrows_into(&q, f.src) {
                    let fg = q.compose(f, g).expect("composable");
                    let (lhs, rhs) = (tensor(c, y, fg)?, tensor(c, t, g)?);
                    ensure(lhs == rhs, || {
                        format!("{} ⊗ ({}∘{}) vs ({0} ⊗ {1}) ⊗ {2}", c.object_name(y), q.arrow_name(f), q.arrow_name(g))
                    })?;
                }
            }
        }
        Ok(())
    }));

    out.push(run("tensor-joins", || {
        for y in 0..c.len() {
            let ty = c.type_of(y);
            for x in 0..q.object_count() {
                let hom = q.hom(x, ty);
                let zero = tensor(c, y, QArrow::new(x, ty, hom.bottom()))?;
                ensure(subset_of(&zero, &fiber_supremum(c, x, &[])?), || {
                    format!("{} ⊗ 0 is not a bottom", c.object_name(y))
                })?;
                for f in 0..hom.len() {
                    for g in f + 1..hom.len() {
                        let tf = tensor(c, y, QArrow::new(x, ty, f))?.representative();
                        let tg = tensor(c, y, QArrow::new(x, ty, g))?.representative();
                        let (Some(tf), Some(tg)) = (tf, tg) else { continue };
                        let joined = tensor(c, y, QArrow::new(x, ty, hom.join(f, g)))?;
                        ensure(subset_of(&joined, &fiber_supremum(c, x, &[tf, tg])?), || {
                            format!("{} ⊗ ({} ∨ {}) is not the supremum of the tensors", c.object_name(y), hom.name(f), hom.name(g))
                        })?;
                    }
                }
            }
        }
        Ok(())
    }));

    out.push(run("tensor-monotone", || {
        for y in 0..c.len() {
            for y2 in 0..c.len() {
                if c.type_of(y) != c.type_of(y2) || !c.leq(y, y2) {
                    continue;
                }
                for f in arrows_into(&q, c.type_of(y)) {
                    let (a, b) = (tensor(c, y, f)?.representative(), tensor(c, y2, f)?.representative());
                    if let (Some(a), Some(b)) = (a, b) {
                        ensure(c.leq(a, b), || {
                            format!("{} <= {} but not after ⊗ {}", c.object_name(y), c.object_name(y2), q.arrow_name(f))
                        })?;
                    }
                }
            }
        }
        Ok(())
    }));

    out.push(run("tensor-cotensor-adjunction", || {
        for f in q.arrows() {
            if let (Some(l), Some(r)) = (tensor_map(c, f)?, cotensor_map(c, f)?) {
                OrderAdjunction::new(l, r).map_err(|e| Stop::Fail(format!("−⊗{} and <{0},−>: {e}", q.arrow_name(f))))?;
            }
        }
        Ok(())
    }));

    out.push(run("right-adjoint-of-tensor-is-cotensor", || {
        if !report.tensored {
            return Ok(());
        }
        let mut all_adjoint = true;
        for f in q.arrows() {
            let l = tensor_map(c, f)?.expect("tensored");
            match l.upper_adjoint() {
                Ok(r) => {
                    let (from, to) = (c.fiber(f.src), c.fiber(f.dst));
                    for (i, &x) in from.members.iter().enumerate() {
                        let w = to.members[r.apply(i)];
                        ensure(cotensor(c, f, x)?.contains(w), || {
                            format!("right adjoint of −⊗{} at {} is not a cotensor", q.arrow_name(f), c.object_name(x))
                        })?;
                    }
                }
                Err(_) => all_adjoint = false,
            }
        }
        ensure(all_adjoint == report.cotensored, || {
            format!("tensor maps all adjoint: {all_adjoint}, cotensored: {}", report.cotensored)
        })
    }));

    out.push(run("cotensored-three-ways", || {
        if !report.tensored {
            return Ok(());
        }
        let mut hom_maps_adjoint = true;
        let mut functors_adjoint = true;
        let arc = Arc::new(c.clone());
        for x in 0..c.len() {
            let tx = c.type_of(x);
            for ty in 0..q.object_count() {
                let fiber = c.fiber(ty);
                let op = Arc::new(q.hom(tx, ty).order().opposite());
                let table = fiber.members.iter().map(|&y| c.hom(y, x)).collect();
                let m = MonotoneMap::new(fiber.order.clone(), op, table)?;
                hom_maps_adjoint &= m.upper_adjoint().is_ok();
            }
            let pdx = ctx.copresheaves.get(&q, tx);
            let functor = hom_into_copresheaf(&arc, x, &pdx)?;
            functors_adjoint &= synthesize_right_adjoint(&functor).is_ok();
        }
        ensure(hom_maps_adjoint == report.cotensored && functors_adjoint == report.cotensored, || {
            format!(
                "hom maps adjoint: {hom_maps_adjoint}, hom functors adjoint: {functors_adjoint}, cotensored: {}",
                report.cotensored
            )
        })
    }));

    out.push(run("weighted-colimit-routes-agree", || {
        for ty in 0..q.object_count() {
            for table in presheaf_tables(c, ty, ctx.cap, Exec::Sequential)? {
                let routes = presheaf_colimit(c, ty, &table)?;
                ensure(all_equivalent(c, &routes.general), || format!("non-isomorphic colimits of {table:?}"))?;
                if report.cocomplete {
                    ensure(!routes.general.is_empty(), || format!("cocomplete but no colimit for {table:?}"))?;
                }
            }
        }
        Ok(())
    }));

    out.push(run("conical-weight-gives-conical-colimit", || {
        let arc = Arc::new(c.clone());
        for (ty, fam) in &families {
            let order = c.fiber(*ty).order.restrict(
                &fam.iter().map(|&m| c.fiber(*ty).position(m).unwrap()).collect::<Vec<_>>(),
            );
            let diagram = Arc::new(QCategory::free_fiber(q.clone(), &order, *ty));
            let inclusion = QFunctor::new("inclusion", diagram.clone(), arc.clone(), fam.clone())?;
            let point = Arc::new(QCategory::one_object(q.clone(), *ty));
            let weight = Distributor::new(point, diagram, vec![q.identity(*ty); fam.len()])?;
            let routes = weighted_colimit(&weight, &inclusion)?;
            let expected = conical_colimit(c, *ty, fam)?;
            ensure(routes[0].general == expected, || format!("family {}", names(c, fam)))?;
        }
        Ok(())
    }));

    out.push(run("opposite-involution", || {
        let back = c.opposite().opposite();
        ensure(
            back.hom_table() == c.hom_table() && back.types() == c.types() && back.names() == c.names() && back.base() == c.base(),
            || "opposite of opposite differs".into(),
        )
    }));

    out.extend(variation_checks(c, &report, ctx));
    out
}

fn bottom_arrow_checks(p: &Pseudofunctor2) -> (Outcome, Outcome) {
    let q = p.base();
    let bottoms = (|| {
        for x in 0..q.object_count() {
            let fiber = p.fiber(x);
            let zero = p.action(x, x, q.zero(x, x));
            for a in 0..fiber.len() {
                ensure(fiber.bottoms().contains(&zero.apply(a)), || {
                    format!("F(0) at {} in fiber {} is not a bottom", fiber.name(a), q.object_name(x))
                })?;
            }
        }
        Ok(())
    })();
    let tops = (|| {
        if !classify_pseudofunctor(p).maps_level {
            return Ok(());
        }
        for x in 0..q.object_count() {
            let fiber = p.fiber(x);
            let right = p.action(x, x, q.zero(x, x)).upper_adjoint().map_err(|_| Stop::Fail("F(0) has no right adjoint".into()))?;
            for a in 0..fiber.len() {
                ensure(fiber.tops().contains(&right.apply(a)), || {
                    format!("F(0)^* at {} in fiber {} is not a top", fiber.name(a), q.object_name(x))
                })?;
            }
        }
        Ok(())
    })();
    (bottoms, tops)
}

fn dichotomy(p: &Pseudofunctor2) -> Outcome {
    let empty = p.fibers().iter().filter(|f| f.is_empty()).count();
    ensure(empty == 0 || empty == p.fibers().len(), || format!("{empty} of {} fibers are empty", p.fibers().len()))
}

fn levels_against(p: &Pseudofunctor2, report: &CompletenessReport) -> Outcome {
    let levels = classify_pseudofunctor(p);
    ensure(
        levels.closed_into_cat_tensor2
            && levels.maps_level == report.cotensored
            && levels.cocont_level == report.cocomplete
            && levels.skeletal_level == (report.cocomplete && report.skeletal),
        || format!("levels {levels:?} against cotensored={} cocomplete={} skeletal={}", report.cotensored, report.cocomplete, report.skeletal),
    )
}

fn variation_checks(c: &QCategory, report: &CompletenessReport, ctx: &Context) -> Vec<Finding> {
    if !report.tensored {
        let f = run("pseudofunctor-of-category-is-closed", || match category_to_pseudofunctor(c) {
            Err(VariationError::NotTensored { .. }) => Ok(()),
            Err(e) => Err(e.into()),
            Ok(_) => Err(Stop::Fail("a non-tensored category produced a pseudofunctor".into())),
        });
        let mut out = vec![f];
        out.extend(skip_all(&VARIATION_CHECKS[1..], "not tensored"));
        return out;
    }
    let p = match category_to_pseudofunctor(c) {
        Ok(p) => p,
        Err(e) => {
            let w = e.to_string();
            return VARIATION_CHECKS.iter().map(|&check| Finding { check, verdict: Verdict::Fail(w.clone()) }).collect();
        }
    };
    let (bottoms, tops) = bottom_arrow_checks(&p);
    vec![
        run("pseudofunctor-of-category-is-closed", || {
            let r = validate_pseudofunctor(&p);
            ensure(r.valid && r.closed, || format!("{:?} {:?}", r.validity_witness, r.closedness_witness))
        }),
        run("category-roundtrip", || {
            let rt = category_roundtrip(c)?;
            ensure(rt.isomorphism.is_some(), || "C and C^(F_C) are not isomorphic".into())
        }),
        run("pseudofunctor-roundtrip", || {
            let rt = pseudofunctor_roundtrip(&p)?;
            ensure(rt.isomorphism.is_some(), || "F_C and F_(C^(F_C)) are not isomorphic".into())
        }),
        run("levels-match-completeness", || levels_against(&p, report)),
        run("automatic-bottoms", || bottoms),
        run("maps-level-gives-tops", || tops),
        run("emptiness-dichotomy", || dichotomy(&p)),
        run("module-roundtrip", || {
            if !(report.cocomplete && report.skeletal) {
                return Ok(());
            }
            let rt = category_module_roundtrip(c, ctx.cap, Exec::Sequential)?;
            ensure(rt.isomorphism.is_some(), || "C and C^(M_C) are not isomorphic".into())?;
            let back = module_roundtrip(&rt.module, ctx.cap, Exec::Sequential)?;
            ensure(back.isomorphism.is_some(), || "M_C does not survive its round trip".into())
        }),
    ]
}

pub const PSEUDOFUNCTOR_CHECKS: &[&str] = &[
    "non-closed-rejected",
    "pseudofunctor-roundtrip",
    "category-of-pseudofunctor-is-tensored",
    "levels-match-completeness",
    "automatic-bottoms",
    "maps-level-gives-tops",
    "emptiness-dichotomy",
];

/// Checks on a pseudofunctor, valid or not.
pub fn pseudofunctor_checks(p: &Pseudofunctor2, ctx: &Context) -> Vec<Finding> {
    let r = validate_pseudofunctor(p);
    if !(r.valid && r.closed) {
        let mut out = vec![run("non-closed-rejected", || match pseudofunctor_to_category(p) {
            Err(VariationError::NotClosed(_)) | Err(VariationError::NotValid(_)) => Ok(()),
            Err(e) => Err(e.into()),
            Ok(_) => Err(Stop::Fail("an invalid or non-closed pseudofunctor produced a category".into())),
        })];
        out.extend(skip_all(&PSEUDOFUNCTOR_CHECKS[1..], "not valid and closed"));
        return out;
    }
    let q = p.base();
    let category = pseudofunctor_to_category(p);
    let (bottoms, tops) = bottom_arrow_checks(p);
    vec![
        run("non-closed-rejected", || Ok(())),
        run("pseudofunctor-roundtrip", || {
            let rt = pseudofunctor_roundtrip(p)?;
            ensure(rt.isomorphism.is_some(), || "F and F_(C^F) are not isomorphic".into())
        }),
        run("category-of-pseudofunctor-is-tensored", || {
            let c = category.clone()?;
            let mut offset = vec![0; q.object_count() + 1];
            for x in 0..q.object_count() {
                offset[x + 1] = offset[x] + p.fiber(x).len();
            }
            for y_ty in 0..q.object_count() {
                for x_ty in 0..q.object_count() {
                    for f in 0..q.hom(x_ty, y_ty).len() {
                        let act = p.action(x_ty, y_ty, f);
                        for y in 0..p.fiber(y_ty).len() {
                            let w = tensor(&c, offset[y_ty] + y, QArrow::new(x_ty, y_ty, f))?;
                            ensure(w.contains(offset[x_ty] + act.apply(y)), || {
                                format!("F({})({}) is not a tensor", q.arrow_name(QArrow::new(x_ty, y_ty, f)), p.fiber(y_ty).name(y))
                            })?;
                        }
                    }
                }
            }
            Ok(())
        }),
        run("levels-match-completeness", || {
            let c = category.clone()?;
            let report = completeness_report(&c, ctx.cap, Exec::Sequential)?;
            levels_against(p, &report)
        }),
        run("automatic-bottoms", || bottoms),
        run("maps-level-gives-tops", || tops),
        run("emptiness-dichotomy", || dichotomy(p)),
    ]
}

pub const FUNCTOR_CHECKS: &[&str] = &[
    "adjoint-functor-theorem",
    "fiberwise-adjunction-criterion",
    "tensor-preserving-iff-pseudonatural",
    "pseudonatural-components-preserve-bottoms",
    "left-adjoint-iff-pseudonatural-with-adjoint-components",
    "cocontinuity",
];

/// Facts about a category reused across many functors.
pub struct Profile {
    pub category: Arc<QCategory>,
    pub report: Option<CompletenessReport>,
}

impl Profile {
    pub fn new(category: Arc<QCategory>, cap: u128) -> Self {
        let report = report_or_skip(&category, cap).ok().flatten();
        Profile { category, report }
    }

    fn tensored(&self) -> Option<bool> {
        self.report.as_ref().map(|r| r.tensored)
    }

    fn cocomplete(&self) -> Option<bool> {
        self.report.as_ref().map(|r| r.cocomplete)
    }
}

fn fiber_adjoints(functor: &QFunctor) -> bool {
    (0..functor.source().base().object_count()).all(|x| fiber_map(functor, x).upper_adjoint().is_ok())
}

/// Checks on one functor `F: A → B`, against every functor `B → A` in `back`.
pub fn functor_checks(functor: &QFunctor, a: &Profile, b: &Profile, back: &[QFunctor], ctx: &Context) -> Vec<Finding> {
    let (Some(a_tensored), Some(b_tensored)) = (a.tensored(), b.tensored()) else {
        return skip_all(FUNCTOR_CHECKS, "presheaf enumeration exceeds the cap");
    };
    let q = functor.source().base().clone();
    let synthesized = if a_tensored { Some(synthesize_right_adjoint(functor)) } else { None };
    let mut out = Vec::new();

    out.push(run("adjoint-functor-theorem", || {
        let Some(synth) = &synthesized else { return Ok(()) };
        let criterion = preserves_tensors(functor) && fiber_adjoints(functor);
        let mut found = false;
        for g in back {
            found |= check_adjunction(functor, g)?.holds;
        }
        ensure(synth.is_ok() == criterion && criterion == found, || {
            format!("synthesis ok: {}, criterion: {criterion}, adjoint exists: {found}", synth.is_ok())
        })?;
        if let Ok(g) = synth {
            ensure(check_adjunction(functor, g)?.holds, || "synthesized adjoint fails".into())?;
        }
        Ok(())
    }));

    out.push(run("fiberwise-adjunction-criterion", || {
        for g in back {
            let check = check_adjunction(functor, g)?;
            let fiberwise = (0..q.object_count())
                .all(|x| OrderAdjunction::new(fiber_map(functor, x), fiber_map(g, x)).is_ok());
            ensure(check.holds == fiberwise && check.holds == check.hom_criterion, || {
                format!(
                    "against {}: holds={} fiberwise={fiberwise} hom_criterion={}",
                    g.name(),
                    check.holds,
                    check.hom_criterion
                )
            })?;
        }
        Ok(())
    }));

    let both_tensored = a_tensored && b_tensored;
    let levels = if both_tensored { functor_to_laxnat(functor).map(|t| classify_transformation(&t)).ok() } else { None };

    out.push(run("tensor-preserving-iff-pseudonatural", || {
        if !both_tensored {
            return Ok(());
        }
        let levels = levels.ok_or_else(|| Stop::Fail("no lax transformation".into()))?;
        ensure(levels.pseudonatural == preserves_tensors(functor), || {
            format!("pseudonatural={} preserves tensors={}", levels.pseudonatural, preserves_tensors(functor))
        })
    }));

    out.push(run("pseudonatural-components-preserve-bottoms", || {
        if let Some(l) = levels {
            ensure(!l.pseudonatural || l.bottom_preserving_components, || "a pseudonatural component misses a bottom".into())?;
        }
        Ok(())
    }));

    out.push(run("left-adjoint-iff-pseudonatural-with-adjoint-components", || {
        let (Some(l), Some(synth)) = (levels, &synthesized) else { return Ok(()) };
        ensure((l.pseudonatural && l.left_adjoint_components) == synth.is_ok(), || {
            format!("levels {l:?}, synthesis ok: {}", synth.is_ok())
        })
    }));

    out.push(run("cocontinuity", || {
        if !(a.cocomplete() == Some(true) && b.cocomplete() == Some(true)) {
            return Ok(());
        }
        let by_weights = preserves_presheaf_colimits(functor, ctx.cap, Exec::Sequential)?;
        let by_parts = preserves_tensors(functor) && preserves_suprema(functor);
        let by_adjoint = synthesize_right_adjoint(functor).is_ok();
        ensure(by_weights == by_parts && by_parts == by_adjoint, || {
            format!("presheaf colimits: {by_weights}, tensors and suprema: {by_parts}, adjoint: {by_adjoint}")
        })
    }));
    out
}

/// `F ≤ G ⇔ φ^F ≤ φ^G` over every pair of functors between tensored categories.
pub fn functor_order_check(functors: &[QFunctor]) -> Finding {
    run("functor-order-faithfulness", || {
        let nats = functors.iter().map(functor_to_laxnat).collect::<Result<Vec<_>, _>>()?;
        for (i, f) in functors.iter().enumerate() {
            for (j, g) in functors.iter().enumerate() {
                ensure(f.leq(g) == nats[i].leq(&nats[j]), || format!("{} vs {}", f.name(), g.name()))?;
            }
        }
        Ok(())
    })
}

pub const QUANTALOID_CHECKS: &[&str] =
    &["residual-brute-force", "residual-opposite-exchange", "zero-absorbs", "quantaloid-opposite-involution"];

pub fn quantaloid_checks(q: &Quantaloid) -> Vec<Finding> {
    let n = q.object_count();
    let triples: Vec<(usize, usize, usize)> =
        (0..n).flat_map(|x| (0..n).flat_map(move |y| (0..n).map(move |z| (x, y, z)))).collect();
    let op = q.opposite();
    vec![
        run("residual-brute-force", || {
            for &(x, y, z) in &triples {
                for f in 0..q.hom(x, y).len() {
                    for g in 0..q.hom(z, y).len() {
                        let cands = (0..q.hom(z, x).len()).filter(|&h| q.hom(z, y).leq(q.compose_raw(z, x, y, f, h), g));
                        let oracle = q.hom(z, x).join_all(cands);
                        ensure(q.lift_raw(x, y, z, f, g) == oracle, || {
                            format!("[{}, {}]", q.arrow_name(QArrow::new(x, y, f)), q.arrow_name(QArrow::new(z, y, g)))
                        })?;
                    }
                    for g in 0..q.hom(x, z).len() {
                        let cands = (0..q.hom(y, z).len()).filter(|&h| q.hom(x, z).leq(q.compose_raw(x, y, z, h, f), g));
                        let oracle = q.hom(y, z).join_all(cands);
                        ensure(q.extend_raw(x, y, z, f, g) == oracle, || {
                            format!("{{{}, {}}}", q.arrow_name(QArrow::new(x, y, f)), q.arrow_name(QArrow::new(x, z, g)))
                        })?;
                    }
                }
            }
            Ok(())
        }),
        run("residual-opposite-exchange", || {
            for &(x, y, z) in &triples {
                for f in 0..q.hom(x, y).len() {
                    for g in 0..q.hom(z, y).len() {
                        ensure(q.lift_raw(x, y, z, f, g) == op.extend_raw(y, x, z, f, g), || {
                            format!("lifting at {}", q.arrow_name(QArrow::new(x, y, f)))
                        })?;
                    }
                }
            }
            Ok(())
        }),
        run("zero-absorbs", || {
            for &(x, y, z) in &triples {
                for f in 0..q.hom(x, y).len() {
                    ensure(q.compose_raw(x, y, z, q.zero(y, z), f) == q.zero(x, z), || format!("0 ∘ {f}"))?;
                }
                for g in 0..q.hom(y, z).len() {
                    ensure(q.compose_raw(x, y, z, g, q.zero(x, y)) == q.zero(x, z), || format!("{g} ∘ 0"))?;
                }
            }
            Ok(())
        }),
        run("quantaloid-opposite-involution", || ensure(op.opposite() == *q, || "opposite of opposite differs".into())),
    ]
}

pub const ORDER_CHECKS: &[&str] = &["right-adjoint-iff-sup-morphism", "right-adjoint-unique", "join-laws"];

/// Checks over every monotone endomap of one lattice.
pub fn lattice_checks(l: &FiniteSupLattice) -> Vec<Finding> {
    let order = l.order_arc();
    let maps = monotone_maps(order, order);
    vec![
        run("right-adjoint-iff-sup-morphism", || {
            for m in &maps {
                let adj = right_adjoint(m, l).is_ok();
                ensure(adj == is_sup_morphism(m).holds, || format!("map {:?}: adjoint {adj}", m.table()))?;
            }
            Ok(())
        }),
        run("right-adjoint-unique", || {
            for m in &maps {
                let Ok(adj) = right_adjoint(m, l) else { continue };
                for g in &maps {
                    let is_adjoint = OrderAdjunction::new(m.clone(), g.clone()).is_ok();
                    ensure(is_adjoint == (g == adj.right()), || format!("map {:?} has a second adjoint {:?}", m.table(), g.table()))?;
                }
            }
            Ok(())
        }),
        run("join-laws", || {
            let n = l.len();
            for a in 0..n {
                ensure(l.join(a, a) == a, || format!("{a} ∨ {a}"))?;
                for b in 0..n {
                    ensure(l.join(a, b) == l.join(b, a), || format!("{a} ∨ {b}"))?;
                    for c in 0..n {
                        ensure(l.join(l.join(a, b), c) == l.join(a, l.join(b, c)), || format!("({a} ∨ {b}) ∨ {c}"))?;
                    }
                }
            }
            ensure(l.bounds(&[]) == (l.bottom(), l.top()), || "empty bounds".into())?;
            for s in subsets(&(0..n).collect::<Vec<_>>()) {
                let j = l.join_all(s.iter().copied());
                ensure(s.iter().all(|&a| l.leq(a, j)), || format!("join of {s:?} is not an upper bound"))?;
                let ups = (0..n).filter(|&u| s.iter().all(|&a| l.leq(a, u)));
                ensure(ups.clone().all(|u| l.leq(j, u)), || format!("join of {s:?} is not least"))?;
            }
            Ok(())
        }),
    ]
}

/// A nonempty preorder, read as a category over the Boolean quantale, is
/// tensored exactly when it has a bottom.
pub fn preorder_tensor_check(q2: &Arc<Quantaloid>, order: &FinitePreorder) -> Finding {
    run("tensored-iff-bottom", || {
        if order.is_empty() {
            return Ok(());
        }
        let c = crate::sweep::preorder_category(q2, order);
        let tensored = crate::completion::missing_tensor(&c).is_none();
        ensure(tensored == !order.bottoms().is_empty(), || format!("tensored={tensored}, bottoms={:?}", order.bottoms()))
    })
}

pub const MODULE_CHECKS: &[&str] = &["module-roundtrip"];

pub fn module_checks(m: &QModule, ctx: &Context) -> Vec<Finding> {
    vec![run("module-roundtrip", || {
        let rt = module_roundtrip(m, ctx.cap, Exec::Sequential)?;
        ensure(rt.isomorphism.is_some(), || "M and the module of C^M are not isomorphic".into())
    })]
}

pub const ACTION_CHECKS: &[&str] = &["action-module-inverse", "morphism-check-agrees"];

/// Checks on one action, with morphisms into every action in `peers` on
/// the same carrier.
pub fn action_checks(a: &QuantaleAction, peers: &[QuantaleAction]) -> Vec<Finding> {
    vec![
        run("action-module-inverse", || {
            let m = action_to_module(a)?;
            let back = module_to_action(&m)?;
            ensure(back.table() == a.table(), || "action to module and back changes the table".into())?;
            let again = action_to_module(&back)?;
            ensure(again.as_pseudofunctor() == m.as_pseudofunctor(), || "module to action and back changes the module".into())
        }),
        run("morphism-check-agrees", || {
            let order = a.carrier().order_arc();
            for b in peers.iter().filter(|b| b.carrier() == a.carrier()) {
                for alpha in monotone_maps(order, order) {
                    let r = morphism_check(a, b, &alpha)?;
                    let squares = ModuleMorphism { components: vec![alpha.clone()] }
                        .is_valid(&action_to_module(a)?, &action_to_module(b)?);
                    ensure(r.module_morphism == (r.join_preserving && r.equivariant) && squares == r.module_morphism, || {
                        format!("alpha {:?} into {}: {r:?}", alpha.table(), b.name())
                    })?;
                }
            }
            Ok(())
        }),
    ]
}

pub const DISTRIBUTOR_CHECKS: &[&str] = &["weighted-colimit-routes-agree"];

/// Colimit of the identity diagram on the distributor's target, weighted by it.
pub fn distributor_checks(d: &Distributor) -> Vec<Finding> {
    vec![run("weighted-colimit-routes-agree", || {
        let routes = weighted_colimit(d, &QFunctor::identity(d.target().clone()))?;
        for r in &routes {
            ensure(all_equivalent(d.target(), &r.general), || "non-isomorphic colimits".into())?;
        }
        Ok(())
    })]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::DEFAULT_CAP;

    fn chain3() -> QCategory {
        let q2 = Arc::new(Quantaloid::boolean2());
        QCategory::free_fiber(q2, &FinitePreorder::chain(&["bot", "m", "top"]), 0).with_name("chain3")
    }

    #[test]
    fn chain3_passes_every_category_check() {
        let ctx = Context::new(DEFAULT_CAP);
        let findings = category_checks(&chain3(), &ctx);
        assert_eq!(findings.len(), CATEGORY_CHECKS.len() + VARIATION_CHECKS.len());
        for f in findings {
            assert_eq!(f.verdict, Verdict::Pass, "{}", f.check);
        }
    }

    #[test]
    fn a_wrong_flag_is_reported_as_failure() {
        let ctx = Context::new(DEFAULT_CAP);
        let c = chain3();
        let mut report = completeness_report(&c, DEFAULT_CAP, Exec::Sequential).unwrap();
        report.cotensored = false;
        let findings = variation_checks(&c, &report, &ctx);
        let levels = findings.iter().find(|f| f.check == "levels-match-completeness").unwrap();
        assert!(matches!(levels.verdict, Verdict::Fail(_)));
    }

    #[test]
    fn tiny_cap_skips() {
        let ctx = Context::new(1);
        let findings = category_checks(&chain3(), &ctx);
        assert!(findings.iter().all(|f| matches!(f.verdict, Verdict::Skipped(_))));
    }
}
