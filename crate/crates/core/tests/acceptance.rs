//! One line per acceptance criterion; exits non-zero if any fails.

use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use qlab_core::category::DEFAULT_CAP;
use qlab_core::completion::{completeness_report, cotensor, missing_tensor, tensor};
use qlab_core::format::{self, bundled_files, Instance, Loader};
use qlab_core::order::{is_sup_morphism, right_adjoint};
use qlab_core::suite::{run_suite, Status, SuiteConfig};
use qlab_core::sweep::{categories_one_per_type, categories_up_to, lattices_up_to, monotone_maps, preorder_category, preorders_up_to};
use qlab_core::variation::{category_to_pseudofunctor, classify_pseudofunctor, module_roundtrip, category_roundtrip};
use qlab_core::{Exec, QArrow, QCategory, Quantaloid, Residual};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn base(name: &str) -> Arc<Quantaloid> {
    Loader::bundled().quantaloid(name).expect("bundled quantaloid")
}

fn worked_facts() -> Outcome {
    let qrel3 = base("qrel3");
    let one = qrel3.object_index("1").unwrap();
    let loader = Loader::bundled();
    let p1 = loader.category("p1@qrel3").map_err(|e| e.to_string())?;
    let pd1 = loader.category("pd1@qrel3").map_err(|e| e.to_string())?;
    let built_p1 = QCategory::presheaf_py(qrel3.clone(), one);
    let built_pd1 = QCategory::copresheaf_pdx(qrel3.clone(), one);
    ensure(built_p1.hom_table() == p1.hom_table() && built_pd1.hom_table() == pd1.hom_table(), || {
        "bundled P1 / P†1 differ from the constructed ones".into()
    })?;

    let arrows = qrel3.arrows();
    let mut tensors = 0;
    for g in arrows.iter().filter(|a| a.dst == one) {
        let y = p1.arrow_object(*g, true).unwrap();
        for f in arrows.iter().filter(|f| f.dst == g.src) {
            let want = p1.arrow_object(qrel3.compose(*g, *f).unwrap(), true).unwrap();
            let got = tensor(&p1, y, *f).map_err(|e| e.to_string())?;
            ensure(got.members == vec![want], || format!("{} ⊗ {} = {:?}", p1.object_name(y), qrel3.arrow_name(*f), got.names(&p1)))?;
            tensors += 1;
        }
    }
    let mut cotensors = 0;
    for f in arrows.iter().filter(|a| a.src == one) {
        let x = pd1.arrow_object(*f, false).unwrap();
        for k in arrows.iter().filter(|k| k.src == f.dst) {
            let want = pd1.arrow_object(qrel3.compose(*k, *f).unwrap(), false).unwrap();
            let got = cotensor(&pd1, *k, x).map_err(|e| e.to_string())?;
            ensure(got.members == vec![want], || format!("⟨{}, {}⟩ = {:?}", qrel3.arrow_name(*k), pd1.object_name(x), got.names(&pd1)))?;
            cotensors += 1;
        }
    }

    let zero = loader.category("zero@qrel3").map_err(|e| e.to_string())?;
    let zr = completeness_report(&zero, DEFAULT_CAP, Exec::default()).map_err(|e| e.to_string())?;
    ensure(zr.order_cocomplete && !zr.conically_cocomplete, || format!("zero@qrel3 flags {:?}", zr.flags()))?;
    let pr = completeness_report(&p1, DEFAULT_CAP, Exec::default()).map_err(|e| e.to_string())?;
    ensure(pr.flags().iter().all(|(_, v)| *v), || format!("p1@qrel3 flags {:?}", pr.flags()))?;

    let q2 = base("q2");
    let mut orders = 0;
    for order in preorders_up_to(4).iter().filter(|o| !o.is_empty()) {
        let c = preorder_category(&q2, order);
        let tensored = missing_tensor(&c).is_none();
        ensure(tensored == !order.bottoms().is_empty(), || format!("preorder {:?}: tensored = {tensored}", order.covers()))?;
        orders += 1;
    }
    Ok(format!("{tensors} tensors, {cotensors} cotensors, {orders} preorders"))
}

fn sweep_suite() -> Outcome {
    let report = run_suite(&SuiteConfig::default())?;
    let families = ["sweep/categories/q2/2", "sweep/categories/q3/2", "sweep/functors/q2/2", "sweep/functors/q3/2"];
    let mut passed = 0;
    for family in families {
        let records: Vec<_> = report.for_instance(family).collect();
        ensure(records.iter().any(|r| r.status == Status::Pass), || format!("{family}: nothing ran"))?;
        if let Some(bad) = records.iter().find(|r| r.status == Status::Fail) {
            return Err(format!("{family}/{}: {}", bad.check, bad.witness.clone().unwrap_or_default()));
        }
        passed += records.iter().filter(|r| r.status == Status::Pass).count();
    }
    Ok(format!("{passed} checks over {} families", families.len()))
}

fn roundtrips() -> Outcome {
    let mut cats = categories_up_to(&base("q2"), 2);
    cats.extend(categories_up_to(&base("q3"), 2));
    cats.extend(categories_up_to(&base("qrel3"), 2));
    cats.extend(categories_one_per_type(&base("qrel3")));
    let q2 = base("q2");
    cats.extend(preorders_up_to(4).iter().map(|o| preorder_category(&q2, o)));
    let mut tensored = 0;
    for c in cats.iter().filter(|c| missing_tensor(c).is_none()) {
        let rt = category_roundtrip(c).map_err(|e| format!("{}: {e}", c.name()))?;
        ensure(rt.isomorphism.is_some(), || format!("{} is not isomorphic to its round trip", c.name()))?;
        let levels = classify_pseudofunctor(&category_to_pseudofunctor(c).map_err(|e| e.to_string())?);
        let r = completeness_report(c, DEFAULT_CAP, Exec::default()).map_err(|e| e.to_string())?;
        let expect = (true, r.cotensored, r.cocomplete, r.cocomplete && r.skeletal);
        let got = (levels.closed_into_cat_tensor2, levels.maps_level, levels.cocont_level, levels.skeletal_level);
        ensure(got == expect, || format!("{}: levels {got:?}, flags {expect:?}", c.name()))?;
        tensored += 1;
    }
    let mut modules = 0;
    for (file, _) in bundled_files().iter().filter(|(f, _)| f.ends_with(".qm")) {
        let Ok(Instance::Module(m)) = format::bundled(file) else {
            return Err(format!("{file} is not a module"));
        };
        let rt = module_roundtrip(&m, DEFAULT_CAP, Exec::default()).map_err(|e| format!("{file}: {e}"))?;
        ensure(rt.isomorphism.is_some(), || format!("{file} is not isomorphic to its round trip"))?;
        modules += 1;
    }
    ensure(modules >= 3, || format!("only {modules} bundled modules"))?;
    Ok(format!("{tensored} tensored categories, {modules} modules"))
}

fn residual_oracle() -> Outcome {
    let mut pairs = 0;
    for (file, _) in bundled_files() {
        let Ok(Instance::Quantaloid(q)) = format::bundled(file) else { continue };
        let arrows = q.arrows();
        for &f in &arrows {
            for &g in &arrows {
                if f.dst == g.dst {
                    let hom = q.hom(g.src, f.src);
                    let below = arrows
                        .iter()
                        .filter(|h| h.src == g.src && h.dst == f.src)
                        .filter(|h| q.hom(g.src, g.dst).leq(q.compose(f, **h).unwrap().value, g.value))
                        .map(|h| h.value);
                    let want = QArrow::new(g.src, f.src, hom.join_all(below));
                    let got = q.residual(Residual::Lifting, f, g).map_err(|e| e.to_string())?;
                    ensure(got == want, || format!("{}: [{}, {}]", q.name(), q.arrow_name(f), q.arrow_name(g)))?;
                    pairs += 1;
                }
                if f.src == g.src {
                    let hom = q.hom(f.dst, g.dst);
                    let below = arrows
                        .iter()
                        .filter(|h| h.src == f.dst && h.dst == g.dst)
                        .filter(|h| q.hom(g.src, g.dst).leq(q.compose(**h, f).unwrap().value, g.value))
                        .map(|h| h.value);
                    let want = QArrow::new(f.dst, g.dst, hom.join_all(below));
                    let got = q.residual(Residual::Extension, f, g).map_err(|e| e.to_string())?;
                    ensure(got == want, || format!("{}: {{{}, {}}}", q.name(), q.arrow_name(f), q.arrow_name(g)))?;
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!("{pairs} residuals"))
}

fn adjoint_characterization() -> Outcome {
    let mut maps = 0;
    for l in lattices_up_to(4) {
        let n = l.len();
        for m in monotone_maps(l.order_arc(), l.order_arc()) {
            let preserves = (0u32..1 << n).all(|mask| {
                let subset: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                m.apply(l.join_all(subset.iter().copied())) == l.join_all(subset.iter().map(|&a| m.apply(a)))
            });
            let sup = is_sup_morphism(&m).holds;
            let adjoint = right_adjoint(&m, &l).is_ok();
            ensure(sup == preserves && adjoint == sup, || format!("{:?}: sup {sup}, oracle {preserves}, adjoint {adjoint}", m.table()))?;
            maps += 1;
        }
    }
    Ok(format!("{maps} endomaps"))
}

fn negative_controls() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../counterexamples");
    let mut kinds = Vec::new();
    let mut entries: Vec<_> = std::fs::read_dir(&dir).map_err(|e| e.to_string())?.map(|e| e.unwrap().path()).collect();
    entries.sort();
    for path in entries {
        let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
        let expect = text
            .lines()
            .find_map(|l| l.strip_prefix("# expect:"))
            .ok_or_else(|| format!("{} has no expect line", path.display()))?
            .trim()
            .to_string();
        match Loader::load_path(&path) {
            Ok(_) => return Err(format!("{} was accepted", path.display())),
            Err(e) => ensure(e.kind() == expect, || format!("{}: {} instead of {expect}", path.display(), e.kind()))?,
        }
        kinds.push(expect);
    }
    for required in ["NotAssociative", "UnitLawFails", "NotJoinPreserving", "FunctorInequalityFails", "NotClosed"] {
        ensure(kinds.iter().any(|k| k == required), || format!("no counterexample for {required}"))?;
    }
    Ok(format!("{} files rejected", kinds.len()))
}

fn main() {
    let criteria: [Criterion; 6] = [
        ("worked facts", worked_facts),
        ("sweep theorem suite", sweep_suite),
        ("round trips and levels", roundtrips),
        ("residual oracle", residual_oracle),
        ("adjoint iff sup morphism", adjoint_characterization),
        ("negative controls", negative_controls),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} PASS {name}: {detail} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL {name}: {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
