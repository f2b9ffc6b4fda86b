//! Runs the law catalogue over instance files and exhaustive sweeps.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Serialize;

use crate::category::{QCategory, DEFAULT_CAP};
use crate::format::{self, bundled_files, normalize, render, render_category, Instance, Kind, Loader};
use crate::par::Exec;
use crate::quantaloid::Quantaloid;
use crate::sweep;
use crate::theorems::{self, Context, Finding, Profile, Verdict};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    /// Instance files to check; the bundled set when `None`.
    pub dir: Option<PathBuf>,
    /// `(base, max objects)` for the category and functor sweeps.
    pub category_sweeps: Vec<(String, usize)>,
    /// Bases swept over categories with exactly one object per type.
    pub typed_sweeps: Vec<String>,
    /// Largest preorder read as a Boolean category.
    pub preorder_max: usize,
    /// Largest lattice whose monotone endomaps are scanned.
    pub lattice_max: usize,
    /// `(base, max fiber size)` for the pseudofunctor sweeps.
    pub pseudofunctor_sweeps: Vec<(String, usize)>,
    /// `(quantale, max carrier size)` for the action sweeps.
    pub action_sweeps: Vec<(String, usize)>,
    pub cap: u128,
    pub exec: Exec,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            dir: None,
            category_sweeps: vec![("q2".into(), 2), ("q3".into(), 2), ("qrel3".into(), 2)],
            typed_sweeps: vec!["qrel3".into()],
            preorder_max: 4,
            lattice_max: 4,
            pseudofunctor_sweeps: vec![("q2".into(), 3), ("q3".into(), 2), ("qrel3".into(), 1)],
            action_sweeps: vec![("q2".into(), 3), ("q3".into(), 3)],
            cap: DEFAULT_CAP,
            exec: Exec::default(),
        }
    }
}

impl SuiteConfig {
    /// Instance files only, no sweeps.
    pub fn files_only() -> Self {
        SuiteConfig {
            category_sweeps: Vec::new(),
            typed_sweeps: Vec::new(),
            preorder_max: 0,
            lattice_max: 0,
            pseudofunctor_sweeps: Vec::new(),
            action_sweeps: Vec::new(),
            ..SuiteConfig::default()
        }
    }

    /// Sets the object bound of every category sweep; zero disables all sweeps.
    pub fn with_max_objects(mut self, max: usize) -> Self {
        if max == 0 {
            return SuiteConfig { dir: self.dir, cap: self.cap, exec: self.exec, ..SuiteConfig::files_only() };
        }
        for s in &mut self.category_sweeps {
            s.1 = max;
        }
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub instance: String,
    pub status: Status,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub records: Vec<CheckRecord>,
}

impl SuiteReport {
    pub fn count(&self, status: Status) -> usize {
        self.records.iter().filter(|r| r.status == status).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| r.status == Status::Fail)
    }

    pub fn success(&self) -> bool {
        self.count(Status::Fail) == 0
    }

    /// Records for one instance or sweep family.
    pub fn for_instance<'a>(&'a self, instance: &'a str) -> impl Iterator<Item = &'a CheckRecord> {
        self.records.iter().filter(move |r| r.instance == instance)
    }

    pub fn get(&self, instance: &str, check: &str) -> Option<&CheckRecord> {
        self.records.iter().find(|r| r.instance == instance && r.check == check)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let status = match r.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Skipped => "skip",
            };
            out.push_str(&format!("{status:<4}  {}  {}\n", r.instance, r.check));
            if r.status != Status::Pass {
                if let Some(w) = &r.witness {
                    for line in w.lines() {
                        out.push_str(&format!("        {line}\n"));
                    }
                }
            }
        }
        out.push_str(&format!(
            "{} passed, {} failed, {} skipped\n",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skipped)
        ));
        out
    }
}

fn record(instance: &str, f: Finding) -> CheckRecord {
    let (status, witness) = match f.verdict {
        Verdict::Pass => (Status::Pass, None),
        Verdict::Fail(w) => (Status::Fail, Some(w)),
        Verdict::Skipped(w) => (Status::Skipped, Some(w)),
    };
    CheckRecord { check: f.check.to_string(), instance: instance.to_string(), status, witness }
}

/// Folds per-member findings into one record per check: the first failure
/// wins, and skips only count when nothing ran.
fn aggregate(family: &str, members: Vec<(String, Vec<Finding>)>) -> Vec<CheckRecord> {
    let mut order: Vec<&'static str> = Vec::new();
    let mut state: Vec<(Option<String>, usize, usize)> = Vec::new();
    for (label, findings) in members {
        for f in findings {
            let i = order.iter().position(|&c| c == f.check).unwrap_or_else(|| {
                order.push(f.check);
                state.push((None, 0, 0));
                order.len() - 1
            });
            match f.verdict {
                Verdict::Pass => state[i].1 += 1,
                Verdict::Skipped(_) => state[i].2 += 1,
                Verdict::Fail(w) => {
                    if state[i].0.is_none() {
                        state[i].0 = Some(format!("{label}: {w}"));
                    }
                }
            }
        }
    }
    order
        .into_iter()
        .zip(state)
        .map(|(check, (fail, passed, skipped))| {
            let (status, witness) = match fail {
                Some(w) => (Status::Fail, Some(w)),
                None if passed > 0 => (Status::Pass, (skipped > 0).then(|| format!("{skipped} cases skipped at the cap"))),
                None => (Status::Skipped, Some(format!("{skipped} cases skipped at the cap"))),
            };
            CheckRecord { check: check.to_string(), instance: family.to_string(), status, witness }
        })
        .collect()
}

fn describe_category(c: &QCategory) -> String {
    format!("{}\n{}", c.name(), render_category(c).trim_end())
}

fn base(name: &str) -> Result<Arc<Quantaloid>, String> {
    Loader::bundled().quantaloid(name).map_err(|e| e.to_string())
}

fn instance_checks(inst: &Instance, ctx: &Context) -> Vec<Finding> {
    match inst {
        Instance::Quantaloid(q) => theorems::quantaloid_checks(q),
        Instance::Category(c) => theorems::category_checks(c, ctx),
        Instance::Functor(f) => {
            let (a, b) = (f.source().clone(), f.target().clone());
            let back = sweep::functors(&b, &a);
            let (pa, pb) = (Profile::new(a.clone(), ctx.cap), Profile::new(b.clone(), ctx.cap));
            let mut out = theorems::functor_checks(f, &pa, &pb, &back, ctx);
            if pa.report.as_ref().is_some_and(|r| r.tensored) && pb.report.as_ref().is_some_and(|r| r.tensored) {
                out.push(theorems::functor_order_check(&sweep::functors(&a, &b)));
            }
            out
        }
        Instance::Distributor(d) => theorems::distributor_checks(d),
        Instance::Pseudofunctor(p) => theorems::pseudofunctor_checks(p, ctx),
        Instance::Module(m) => theorems::module_checks(m, ctx),
        Instance::Action(a) => theorems::action_checks(a, std::slice::from_ref(a)),
    }
}

fn file_records(label: &str, text: &str, loaded: Result<Instance, format::FormatError>, ctx: &Context) -> Vec<CheckRecord> {
    let inst = match loaded {
        Ok(i) => i,
        Err(e) => {
            return vec![CheckRecord {
                check: "validate".into(),
                instance: label.into(),
                status: Status::Fail,
                witness: Some(format!("{}: {e}", e.kind())),
            }]
        }
    };
    let mut out = vec![CheckRecord { check: "validate".into(), instance: label.into(), status: Status::Pass, witness: None }];
    let rendered = render(&inst);
    let same = normalize(&rendered) == normalize(text);
    out.push(CheckRecord {
        check: "render-roundtrip".into(),
        instance: label.into(),
        status: if same { Status::Pass } else { Status::Fail },
        witness: (!same).then_some(rendered),
    });
    out.extend(instance_checks(&inst, ctx).into_iter().map(|f| record(label, f)));
    out
}

fn collect_files(dir: &Path) -> Result<Vec<PathBuf>, String> {
    let rd = std::fs::read_dir(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    let mut paths: Vec<PathBuf> = rd
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().and_then(|e| e.to_str()).is_some_and(|e| Kind::from_extension(e).is_some()))
        .collect();
    paths.sort();
    Ok(paths)
}

fn files(config: &SuiteConfig, ctx: &Context) -> Result<Vec<CheckRecord>, String> {
    let exec = config.exec;
    match &config.dir {
        None => Ok(exec
            .map(bundled_files(), |(file, text)| file_records(&format!("bundled/{file}"), text, format::bundled(file), ctx))
            .into_iter()
            .flatten()
            .collect()),
        Some(dir) => {
            let paths = collect_files(dir)?;
            Ok(exec
                .map(&paths, |p| {
                    let label = p.display().to_string();
                    let text = std::fs::read_to_string(p).unwrap_or_default();
                    file_records(&label, &text, Loader::load_path(p), ctx)
                })
                .into_iter()
                .flatten()
                .collect())
        }
    }
}

fn category_family(family: &str, cats: Vec<QCategory>, ctx: &Context, exec: Exec) -> Vec<CheckRecord> {
    let cats: Vec<Arc<QCategory>> = cats.into_iter().map(Arc::new).collect();
    let members = exec.map(&cats, |c| (describe_category(c), theorems::category_checks(c, ctx)));
    let mut out = aggregate(&format!("sweep/categories/{family}"), members);

    let profiles: Vec<Profile> = exec.map(&cats, |c| Profile::new(c.clone(), ctx.cap));
    let pairs: Vec<(usize, usize)> = (0..cats.len()).flat_map(|i| (0..cats.len()).map(move |j| (i, j))).collect();
    let members = exec.map(&pairs, |&(i, j)| {
        let (a, b) = (&cats[i], &cats[j]);
        let forward = sweep::functors(a, b);
        let back = sweep::functors(b, a);
        let mut findings = Vec::new();
        for f in &forward {
            findings.extend(theorems::functor_checks(f, &profiles[i], &profiles[j], &back, ctx));
        }
        let tensored = |p: &Profile| p.report.as_ref().is_some_and(|r| r.tensored);
        if tensored(&profiles[i]) && tensored(&profiles[j]) {
            findings.push(theorems::functor_order_check(&forward));
        }
        (format!("functors {} -> {}\n{}\n{}", a.name(), b.name(), describe_category(a), describe_category(b)), findings)
    });
    out.extend(aggregate(&format!("sweep/functors/{family}"), members));
    out
}

/// Runs the suite.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport, String> {
    let ctx = Context::new(config.cap);
    let exec = config.exec;
    let mut records = files(config, &ctx)?;

    for (name, max) in &config.category_sweeps {
        let cats = sweep::categories_up_to(&base(name)?, *max);
        records.extend(category_family(&format!("{name}/{max}"), cats, &ctx, exec));
    }
    for name in &config.typed_sweeps {
        let cats = sweep::categories_one_per_type(&base(name)?);
        records.extend(category_family(&format!("{name}/one-per-type"), cats, &ctx, exec));
    }

    if config.preorder_max > 0 {
        let q2 = base("q2")?;
        let orders = sweep::preorders_up_to(config.preorder_max);
        let members = exec.map(&orders, |o| {
            let c = sweep::preorder_category(&q2, o);
            let mut findings = vec![theorems::preorder_tensor_check(&q2, o)];
            findings.extend(theorems::category_checks(&c, &ctx));
            (describe_category(&c), findings)
        });
        records.extend(aggregate(&format!("sweep/preorders/{}", config.preorder_max), members));
    }

    if config.lattice_max > 0 {
        let lattices = sweep::lattices_up_to(config.lattice_max);
        let members = exec.map(&lattices, |l| (format!("lattice {:?}", l.order().covers()), theorems::lattice_checks(l)));
        records.extend(aggregate(&format!("sweep/lattices/{}", config.lattice_max), members));
    }

    for (name, max) in &config.pseudofunctor_sweeps {
        let q = base(name)?;
        let ps = sweep::pseudofunctors(&q, *max);
        let members = exec.map(&ps, |p| {
            let text = format::render_pseudofunctor(p);
            (text.trim_end().to_string(), theorems::pseudofunctor_checks(p, &ctx))
        });
        records.extend(aggregate(&format!("sweep/pseudofunctors/{name}/{max}"), members));
    }

    for (name, max) in &config.action_sweeps {
        let q = base(name)?;
        let lattices: Vec<Arc<_>> = sweep::lattices_up_to(*max).into_iter().map(Arc::new).collect();
        let members: Vec<(String, Vec<Finding>)> = lattices
            .iter()
            .flat_map(|l| {
                let acts = sweep::actions(&q, l);
                exec.map(&acts, |a| (format::render_action(a).trim_end().to_string(), theorems::action_checks(a, &acts)))
            })
            .collect();
        records.extend(aggregate(&format!("sweep/actions/{name}/{max}"), members));
    }

    records.sort_by(|a, b| (&a.instance, &a.check).cmp(&(&b.instance, &b.check)));
    Ok(SuiteReport { records })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aggregate_keeps_first_failure_and_counts_skips() {
        let f = |check, verdict| Finding { check, verdict };
        let members = vec![
            ("one".to_string(), vec![f("a", Verdict::Pass), f("b", Verdict::Skipped("cap".into()))]),
            ("two".to_string(), vec![f("a", Verdict::Fail("x".into())), f("b", Verdict::Skipped("cap".into()))]),
            ("three".to_string(), vec![f("a", Verdict::Fail("y".into())), f("b", Verdict::Skipped("cap".into()))]),
        ];
        let recs = aggregate("fam", members);
        assert_eq!(recs[0].status, Status::Fail);
        assert_eq!(recs[0].witness.as_deref(), Some("two: x"));
        assert_eq!(recs[1].status, Status::Skipped);
    }

    #[test]
    fn files_only_run_on_bundled_instances_passes() {
        let report = run_suite(&SuiteConfig::files_only()).unwrap();
        let failures: Vec<_> = report.failures().collect();
        assert!(failures.is_empty(), "{failures:#?}");
        assert!(report.count(Status::Pass) > 50);
    }

    #[test]
    fn zero_objects_disables_sweeps() {
        let c = SuiteConfig::default().with_max_objects(0);
        assert_eq!(c, SuiteConfig::files_only());
    }
}
