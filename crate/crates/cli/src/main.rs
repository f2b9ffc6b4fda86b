use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use qlab_core::category::{QCategory, QFunctor, DEFAULT_CAP};
use qlab_core::completion::{
    completeness_report, conical_colimit, cotensor, fiber_supremum, synthesize_right_adjoint, tensor, weighted_colimit,
    WitnessSet,
};
use qlab_core::format::{self, arrow_from_text, render_category, render_functor, render_module, render_pseudofunctor};
use qlab_core::suite::{run_suite, SuiteConfig};
use qlab_core::variation::{
    action_to_module, category_module_roundtrip, category_roundtrip, category_to_module, category_to_pseudofunctor,
    module_roundtrip, module_to_action, module_to_category, pseudofunctor_roundtrip, pseudofunctor_to_category,
};
use qlab_core::{Exec, Instance, QModule};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "qlab", version, about = "Finite quantaloid-enriched categories: check, compute, convert")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Run on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate an instance file.
    Validate { file: PathBuf },
    /// Completeness flags of a category, with failure witnesses.
    Report { file: PathBuf },
    /// Objects realizing the tensor `y ⊗ f`.
    Tensor {
        file: PathBuf,
        #[arg(long)]
        object: String,
        /// Arrow as `X->Y:f`.
        #[arg(long)]
        arrow: String,
    },
    /// Objects realizing the cotensor `<f, x>`.
    Cotensor {
        file: PathBuf,
        #[arg(long)]
        arrow: String,
        #[arg(long)]
        object: String,
    },
    /// Conical colimit (or fiber supremum) of a family of same-typed objects.
    Conical {
        file: PathBuf,
        /// Comma-separated object names; may be empty.
        #[arg(long, value_delimiter = ',', default_value = "")]
        family: Vec<String>,
        /// Type of the family, required when it is empty.
        #[arg(long = "type")]
        ty: Option<String>,
        /// Compute the supremum in the fiber order instead.
        #[arg(long)]
        supremum: bool,
    },
    /// Colimit of a diagram weighted by a distributor.
    Colim {
        /// Distributor file `A ⇸ B`.
        file: PathBuf,
        /// Functor file `B → C`; the identity on `B` when omitted.
        #[arg(long)]
        functor: Option<PathBuf>,
    },
    /// Right adjoint of a functor, when it exists.
    Adjoint { file: PathBuf },
    /// The closed pseudofunctor of a tensored category.
    ToPseudofunctor { file: PathBuf },
    /// The category of a closed pseudofunctor or module.
    ToCategory { file: PathBuf },
    /// The module of a skeletal cocomplete category, an action or a pseudofunctor.
    ToModule { file: PathBuf },
    /// Convert there and back and look for an isomorphism.
    Roundtrip { file: PathBuf },
    /// Run the law catalogue over instance files and sweeps.
    Suite {
        /// Directory of instance files; the bundled set when omitted.
        dir: Option<PathBuf>,
        /// Object bound for the category sweeps; 0 checks files only.
        #[arg(long)]
        max_objects: Option<usize>,
    },
}

/// Result of one command: text, JSON and exit status.
struct Output {
    text: String,
    json: Value,
    holds: bool,
}

impl Output {
    fn new(holds: bool, text: impl Into<String>, json: Value) -> Self {
        Output { text: text.into(), json, holds }
    }
}

struct Failure {
    kind: String,
    message: String,
}

macro_rules! invalid {
    ($e:expr) => {{
        let e = $e;
        Failure { kind: e.kind().to_string(), message: e.to_string() }
    }};
}

type Run = Result<Output, Failure>;

struct Env {
    cap: u128,
    exec: Exec,
}

fn load(path: &Path) -> Result<Instance, Failure> {
    if !path.exists() {
        if let Some(name) = path.file_name().and_then(|n| n.to_str()) {
            if let Ok(inst) = format::bundled(name) {
                return Ok(inst);
            }
        }
    }
    format::Loader::load_path(path).map_err(|e| invalid!(e))
}

fn expect_category(path: &Path) -> Result<Arc<QCategory>, Failure> {
    match load(path)? {
        Instance::Category(c) => Ok(c),
        other => Err(wrong_kind("category", &other)),
    }
}

fn wrong_kind(want: &str, got: &Instance) -> Failure {
    Failure { kind: "WrongKind".into(), message: format!("expected a {want}, found {} `{}`", got.kind().keyword(), got.name()) }
}

fn object(c: &QCategory, name: &str) -> Result<usize, Failure> {
    c.object_index(name)
        .ok_or_else(|| Failure { kind: "UnknownObject".into(), message: format!("`{name}` is not an object of {}", c.name()) })
}

fn witness_output(c: &QCategory, what: String, w: &WitnessSet) -> Output {
    let names = w.names(c);
    let text = if names.is_empty() { format!("{what}: none") } else { format!("{what}: {}", names.join(" ≅ ")) };
    Output::new(!names.is_empty(), text, json!({ "query": what, "witnesses": names }))
}

fn validate(file: &Path) -> Run {
    let inst = load(file)?;
    let text = format!("valid {} `{}`", inst.kind().keyword(), inst.name());
    Ok(Output::new(true, text, json!({ "kind": inst.kind().keyword(), "name": inst.name(), "valid": true })))
}

fn report(file: &Path, env: &Env) -> Run {
    let c = expect_category(file)?;
    let r = completeness_report(&c, env.cap, env.exec).map_err(|e| invalid!(e))?;
    let mut text = format!("category `{}`\n", c.name());
    let mut flags = serde_json::Map::new();
    for (flag, value) in r.flags() {
        text.push_str(&format!("{flag}: {value}\n"));
        if let Some(w) = r.witness(flag) {
            text.push_str(&format!("  missing: {w}\n"));
        }
        flags.insert(flag.into(), json!(value));
    }
    text.push_str(&format!("skeletal: {}", r.skeletal));
    flags.insert("skeletal".into(), json!(r.skeletal));
    let witnesses: serde_json::Map<String, Value> = r.witnesses.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
    Ok(Output::new(true, text, json!({ "instance": c.name(), "flags": flags, "witnesses": witnesses })))
}

fn tensor_cmd(file: &Path, obj: &str, arrow: &str, co: bool) -> Run {
    let c = expect_category(file)?;
    let x = object(&c, obj)?;
    let f = arrow_from_text(c.base(), arrow).map_err(|e| invalid!(e))?;
    let (w, what) = if co {
        (cotensor(&c, f, x).map_err(|e| invalid!(e))?, format!("<{arrow}, {obj}>"))
    } else {
        (tensor(&c, x, f).map_err(|e| invalid!(e))?, format!("{obj} ⊗ {arrow}"))
    };
    Ok(witness_output(&c, what, &w))
}

fn conical(file: &Path, family: &[String], ty: Option<&str>, supremum: bool) -> Run {
    let c = expect_category(file)?;
    let members: Vec<usize> =
        family.iter().filter(|s| !s.is_empty()).map(|s| object(&c, s)).collect::<Result<_, _>>()?;
    let ty = match (ty, members.first()) {
        (Some(t), _) => c.base().object_index(t).ok_or_else(|| Failure {
            kind: "UnknownObject".into(),
            message: format!("`{t}` is not an object of {}", c.base().name()),
        })?,
        (None, Some(&m)) => c.type_of(m),
        (None, None) => return Err(Failure { kind: "Usage".into(), message: "an empty family needs --type".into() }),
    };
    let names: Vec<&str> = members.iter().map(|&m| c.object_name(m)).collect();
    let (w, what) = if supremum {
        (fiber_supremum(&c, ty, &members).map_err(|e| invalid!(e))?, format!("sup {{{}}}", names.join(",")))
    } else {
        (conical_colimit(&c, ty, &members).map_err(|e| invalid!(e))?, format!("colim {{{}}}", names.join(",")))
    };
    Ok(witness_output(&c, what, &w))
}

fn colim(file: &Path, functor: Option<&Path>) -> Run {
    let phi = match load(file)? {
        Instance::Distributor(d) => d,
        other => return Err(wrong_kind("distributor", &other)),
    };
    let f = match functor {
        Some(p) => match load(p)? {
            Instance::Functor(f) => f,
            other => return Err(wrong_kind("functor", &other)),
        },
        None => QFunctor::identity(phi.target().clone()),
    };
    let routes = weighted_colimit(&phi, &f).map_err(|e| invalid!(e))?;
    let (a, c) = (phi.source(), f.target());
    let mut lines = Vec::new();
    let mut rows = Vec::new();
    for (i, r) in routes.iter().enumerate() {
        let names = r.general.names(c);
        lines.push(format!("{}: {}", a.object_name(i), if names.is_empty() { "none".into() } else { names.join(" ≅ ") }));
        rows.push(json!({
            "object": a.object_name(i),
            "witnesses": names,
            "via_conical": r.via_conical.as_ref().map(|w| w.names(c)),
            "via_supremum": r.via_supremum.as_ref().map(|w| w.names(c)),
        }));
    }
    let holds = routes.iter().all(|r| !r.general.is_empty());
    Ok(Output::new(holds, lines.join("\n"), json!({ "colimits": rows })))
}

/// Errors that answer the question negatively rather than reject the input.
fn is_property_failure(kind: &str) -> bool {
    matches!(
        kind,
        "SourceNotTensored"
            | "TensorsNotPreserved"
            | "NoFiberAdjoint"
            | "AdjunctionFails"
            | "NotTensored"
            | "NotSkeletal"
            | "NotCocomplete"
            | "ModuleLawFails"
    )
}

fn negative(kind: &str, message: String) -> Run {
    if is_property_failure(kind) {
        Ok(Output::new(false, format!("{kind}: {message}"), json!({ "result": Value::Null, "reason": kind, "message": message })))
    } else {
        Err(Failure { kind: kind.into(), message })
    }
}

fn converted(text: String) -> Output {
    Output::new(true, text.trim_end().to_string(), json!({ "result": text }))
}

fn adjoint(file: &Path) -> Run {
    let f = match load(file)? {
        Instance::Functor(f) => f,
        other => return Err(wrong_kind("functor", &other)),
    };
    match synthesize_right_adjoint(&f) {
        Ok(g) => Ok(converted(render_functor(&g))),
        Err(e) => negative(e.kind(), e.to_string()),
    }
}

fn to_pseudofunctor(file: &Path) -> Run {
    let c = expect_category(file)?;
    match category_to_pseudofunctor(&c) {
        Ok(p) => Ok(converted(render_pseudofunctor(&p))),
        Err(e) => negative(e.kind(), e.to_string()),
    }
}

fn to_category(file: &Path) -> Run {
    let result = match load(file)? {
        Instance::Pseudofunctor(p) => pseudofunctor_to_category(&p),
        Instance::Module(m) => module_to_category(&m),
        other => return Err(wrong_kind("pseudofunctor or module", &other)),
    };
    match result {
        Ok(c) => Ok(converted(render_category(&c))),
        Err(e) => negative(e.kind(), e.to_string()),
    }
}

fn to_module(file: &Path, env: &Env) -> Run {
    let result = match load(file)? {
        Instance::Category(c) => category_to_module(&c, env.cap, env.exec),
        Instance::Action(a) => action_to_module(&a),
        Instance::Pseudofunctor(p) => QModule::from_pseudofunctor(&p),
        other => return Err(wrong_kind("category, action or pseudofunctor", &other)),
    };
    match result {
        Ok(m) => Ok(converted(render_module(&m))),
        Err(e) => negative(e.kind(), e.to_string()),
    }
}

fn verdict(steps: &[(&str, bool)]) -> Output {
    let text = steps.iter().map(|(s, ok)| format!("{s}: {}", if *ok { "isomorphic" } else { "NOT isomorphic" })).collect::<Vec<_>>();
    let json: serde_json::Map<String, Value> = steps.iter().map(|(s, ok)| (s.to_string(), json!(ok))).collect();
    Output::new(steps.iter().all(|(_, ok)| *ok), text.join("\n"), Value::Object(json))
}

fn roundtrip(file: &Path, env: &Env) -> Run {
    let inst = load(file)?;
    let steps = match &inst {
        Instance::Category(c) => {
            let rt = match category_roundtrip(c) {
                Ok(rt) => rt,
                Err(e) => return negative(e.kind(), e.to_string()),
            };
            let mut steps = vec![("C -> F_C -> C", rt.isomorphism.is_some())];
            if let Ok(m) = category_module_roundtrip(c, env.cap, env.exec) {
                steps.push(("C -> M_C -> C", m.isomorphism.is_some()));
            }
            steps
        }
        Instance::Pseudofunctor(p) => {
            let rt = pseudofunctor_roundtrip(p).map_err(|e| invalid!(e))?;
            vec![("F -> C^F -> F", rt.isomorphism.is_some())]
        }
        Instance::Module(m) => {
            let rt = module_roundtrip(m, env.cap, env.exec).map_err(|e| invalid!(e))?;
            vec![("M -> C^M -> M", rt.isomorphism.is_some())]
        }
        Instance::Action(a) => {
            let back = action_to_module(a).and_then(|m| module_to_action(&m)).map_err(|e| invalid!(e))?;
            vec![("action -> module -> action", back.table() == a.table())]
        }
        other => return Err(wrong_kind("category, pseudofunctor, module or action", other)),
    };
    Ok(verdict(&steps))
}

fn suite(dir: Option<&Path>, max_objects: Option<usize>, env: &Env) -> Run {
    let mut config = SuiteConfig { dir: dir.map(Path::to_path_buf), cap: env.cap, exec: env.exec, ..SuiteConfig::default() };
    if let Some(n) = max_objects {
        config = config.with_max_objects(n);
    }
    let report = run_suite(&config).map_err(|e| Failure { kind: "Io".into(), message: e })?;
    let json = serde_json::to_value(&report.records).expect("records serialize");
    Ok(Output::new(report.success(), report.render_text().trim_end().to_string(), json))
}

fn cap_from_env() -> Result<u128, Failure> {
    match std::env::var("QLAB_CAP") {
        Ok(v) => v.trim().parse().map_err(|_| Failure { kind: "Usage".into(), message: format!("QLAB_CAP=`{v}` is not a number") }),
        Err(_) => Ok(DEFAULT_CAP),
    }
}

fn dispatch(cli: &Cli) -> Run {
    let env = Env { cap: cap_from_env()?, exec: if cli.sequential { Exec::Sequential } else { Exec::Parallel } };
    match &cli.command {
        Command::Validate { file } => validate(file),
        Command::Report { file } => report(file, &env),
        Command::Tensor { file, object, arrow } => tensor_cmd(file, object, arrow, false),
        Command::Cotensor { file, arrow, object } => tensor_cmd(file, object, arrow, true),
        Command::Conical { file, family, ty, supremum } => conical(file, family, ty.as_deref(), *supremum),
        Command::Colim { file, functor } => colim(file, functor.as_deref()),
        Command::Adjoint { file } => adjoint(file),
        Command::ToPseudofunctor { file } => to_pseudofunctor(file),
        Command::ToCategory { file } => to_category(file),
        Command::ToModule { file } => to_module(file, &env),
        Command::Roundtrip { file } => roundtrip(file, &env),
        Command::Suite { dir, max_objects } => suite(dir.as_deref(), *max_objects, &env),
    }
}

/// Writes to stdout, treating a closed pipe as success.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    if let Err(e) = writeln!(out, "{text}").and_then(|_| out.flush()) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: Io: {e}");
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(out) => {
            if cli.json {
                emit(&serde_json::to_string_pretty(&out.json).expect("json"));
            } else {
                emit(&out.text);
            }
            ExitCode::from(if out.holds { 0 } else { 1 })
        }
        Err(f) => {
            if cli.json {
                emit(&json!({ "error": f.kind, "message": f.message }).to_string());
            } else {
                eprintln!("error: {}: {}", f.kind, f.message);
            }
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qlab_core::format::render;

    #[test]
    fn property_failures_are_not_input_errors() {
        assert!(is_property_failure("TensorsNotPreserved"));
        assert!(!is_property_failure("SyntaxError"));
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn render_of_bundled_category_mentions_its_objects() {
        let Instance::Category(c) = format::bundled("chain3_q2.qc").unwrap() else { panic!() };
        assert!(render(&Instance::Category(c)).contains("object m"));
    }
}
