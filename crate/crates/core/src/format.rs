//! Plain-text instance files.
//!
//! Every file starts with `<kind> <name>` and continues with one statement
//! per line; braces may span lines and `#` starts a comment. Dependent
//! kinds name their quantaloid or categories, which are resolved first in
//! the file's directory and then among the bundled instances.
//!
//! ```text
//! quantaloid q2
//! objects *
//! hom * * { elements 0 1; order 0<=1; }
//! id * = 1
//! compose * * * {
//!   (0,0)=0 (0,1)=0
//!   (1,0)=0 (1,1)=1
//! }
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::bundled::BUNDLED;
use crate::category::{CategoryError, Distributor, QCategory, QFunctor};
use crate::order::{FinitePreorder, FiniteSupLattice, MonotoneMap, OrderError};
use crate::quantaloid::{validate_quantaloid, QArrow, Quantaloid, QuantaloidData, QuantaloidError};
use crate::variation::{validate_pseudofunctor, Pseudofunctor2, QModule, QuantaleAction, VariationError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("{line}:{col}: {message}")]
    SyntaxError { line: usize, col: usize, message: String },
    #[error("unresolved reference `{0}`")]
    UnresolvedReference(String),
    #[error("table `{0}` is incomplete")]
    PartialTable(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Quantaloid(#[from] QuantaloidError),
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Variation(#[from] VariationError),
}

impl FormatError {
    pub fn kind(&self) -> &'static str {
        match self {
            FormatError::SyntaxError { .. } => "SyntaxError",
            FormatError::UnresolvedReference(..) => "UnresolvedReference",
            FormatError::PartialTable(..) => "PartialTable",
            FormatError::Io { .. } => "Io",
            FormatError::Order(e) => e.kind(),
            FormatError::Quantaloid(e) => e.kind(),
            FormatError::Category(e) => e.kind(),
            FormatError::Variation(e) => e.kind(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Quantaloid,
    Category,
    Functor,
    Distributor,
    Pseudofunctor,
    Module,
    Action,
}

impl Kind {
    pub fn keyword(self) -> &'static str {
        match self {
            Kind::Quantaloid => "quantaloid",
            Kind::Category => "category",
            Kind::Functor => "functor",
            Kind::Distributor => "distributor",
            Kind::Pseudofunctor => "pseudofunctor",
            Kind::Module => "module",
            Kind::Action => "action",
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            Kind::Quantaloid => "qt",
            Kind::Category => "qc",
            Kind::Functor => "qf",
            Kind::Distributor => "qd",
            Kind::Pseudofunctor => "qp",
            Kind::Module => "qm",
            Kind::Action => "qa",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Kind> {
        ALL_KINDS.iter().copied().find(|k| k.keyword() == word)
    }

    pub fn from_extension(ext: &str) -> Option<Kind> {
        ALL_KINDS.iter().copied().find(|k| k.extension() == ext)
    }
}

pub const ALL_KINDS: [Kind; 7] =
    [Kind::Quantaloid, Kind::Category, Kind::Functor, Kind::Distributor, Kind::Pseudofunctor, Kind::Module, Kind::Action];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Quantaloid(Arc<Quantaloid>),
    Category(Arc<QCategory>),
    Functor(QFunctor),
    Distributor(Distributor),
    Pseudofunctor(Pseudofunctor2),
    Module(QModule),
    Action(QuantaleAction),
}

impl Instance {
    pub fn kind(&self) -> Kind {
        match self {
            Instance::Quantaloid(_) => Kind::Quantaloid,
            Instance::Category(_) => Kind::Category,
            Instance::Functor(_) => Kind::Functor,
            Instance::Distributor(_) => Kind::Distributor,
            Instance::Pseudofunctor(_) => Kind::Pseudofunctor,
            Instance::Module(_) => Kind::Module,
            Instance::Action(_) => Kind::Action,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Instance::Quantaloid(q) => q.name().to_string(),
            Instance::Category(c) => c.name().to_string(),
            Instance::Functor(f) => f.name().to_string(),
            Instance::Distributor(d) => distributor_name(d),
            Instance::Pseudofunctor(p) => p.name().to_string(),
            Instance::Module(m) => m.name().to_string(),
            Instance::Action(a) => a.name().to_string(),
        }
    }
}

fn distributor_name(d: &Distributor) -> String {
    format!("{}~{}", d.source().name(), d.target().name())
}

// ---------------------------------------------------------------- lexing

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    Sym(&'static str),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

const SYMBOLS: [&str; 9] = ["<=", "->", "{", "}", "(", ")", ",", "=", ";"];

fn is_word_char(rest: &str) -> bool {
    let c = rest.chars().next().unwrap();
    !c.is_whitespace() && !"{}(),=;:#".contains(c) && !rest.starts_with("<=") && !rest.starts_with("->")
}

/// Statements: tokens up to a newline outside braces.
fn statements(text: &str) -> Result<Vec<Vec<Token>>, FormatError> {
    let mut out = Vec::new();
    let mut cur: Vec<Token> = Vec::new();
    let mut depth = 0usize;
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap();
        let mut i = 0;
        while i < line.len() {
            let rest = &line[i..];
            let c = rest.chars().next().unwrap();
            let col = line[..i].chars().count() + 1;
            if c.is_whitespace() {
                i += c.len_utf8();
                continue;
            }
            if c == ':' {
                cur.push(Token { tok: Tok::Sym(":"), line: ln + 1, col });
                i += 1;
                continue;
            }
            if let Some(sym) = SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
                match *sym {
                    "{" => depth += 1,
                    "}" => {
                        depth = depth.checked_sub(1).ok_or(FormatError::SyntaxError {
                            line: ln + 1,
                            col,
                            message: "unbalanced `}`".into(),
                        })?
                    }
                    _ => {}
                }
                cur.push(Token { tok: Tok::Sym(sym), line: ln + 1, col });
                i += sym.len();
                continue;
            }
            let start = i;
            while i < line.len() && is_word_char(&line[i..]) {
                i += line[i..].chars().next().unwrap().len_utf8();
            }
            cur.push(Token { tok: Tok::Word(line[start..i].to_string()), line: ln + 1, col });
        }
        if depth == 0 && !cur.is_empty() {
            out.push(std::mem::take(&mut cur));
        }
    }
    if depth != 0 {
        let last = cur.last().map_or((text.lines().count(), 1), |t| (t.line, t.col));
        return Err(FormatError::SyntaxError { line: last.0, col: last.1, message: "unclosed `{`".into() });
    }
    Ok(out)
}

struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(toks: &'a [Token]) -> Self {
        Cursor { toks, pos: 0 }
    }

    fn error(&self, message: impl Into<String>) -> FormatError {
        let (line, col) = match self.toks.get(self.pos).or(self.toks.last()) {
            Some(t) => (t.line, t.col),
            None => (0, 0),
        };
        FormatError::SyntaxError { line, col, message: message.into() }
    }

    fn done(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn peek_sym(&self, s: &str) -> bool {
        matches!(self.toks.get(self.pos), Some(Token { tok: Tok::Sym(x), .. }) if *x == s)
    }

    fn word(&mut self) -> Result<String, FormatError> {
        match self.toks.get(self.pos) {
            Some(Token { tok: Tok::Word(w), .. }) => {
                self.pos += 1;
                Ok(w.clone())
            }
            _ => Err(self.error("expected a name")),
        }
    }

    fn sym(&mut self, s: &str) -> Result<(), FormatError> {
        if self.peek_sym(s) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected `{s}`")))
        }
    }

    fn eat(&mut self, s: &str) -> bool {
        let hit = self.peek_sym(s);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn end(&self) -> Result<(), FormatError> {
        if self.done() {
            Ok(())
        } else {
            Err(self.error("unexpected trailing input"))
        }
    }

    fn words_to_end(&mut self) -> Result<Vec<String>, FormatError> {
        let mut out = Vec::new();
        while !self.done() {
            out.push(self.word()?);
        }
        Ok(out)
    }

    /// `(a,b)`
    fn pair(&mut self) -> Result<(String, String), FormatError> {
        self.sym("(")?;
        let a = self.word()?;
        self.sym(",")?;
        let b = self.word()?;
        self.sym(")")?;
        Ok((a, b))
    }

    /// `{ elements a b; order a<=b ...; }`
    fn order_block(&mut self) -> Result<FinitePreorder, FormatError> {
        self.sym("{")?;
        let mut names: Vec<String> = Vec::new();
        let mut pairs: Vec<(String, String)> = Vec::new();
        while !self.eat("}") {
            if self.eat(";") {
                continue;
            }
            match self.word()?.as_str() {
                "elements" => {
                    while !self.peek_sym(";") && !self.peek_sym("}") {
                        names.push(self.word()?);
                    }
                }
                "order" => {
                    while !self.peek_sym(";") && !self.peek_sym("}") {
                        let a = self.word()?;
                        self.sym("<=")?;
                        pairs.push((a, self.word()?));
                    }
                }
                other => return Err(self.error(format!("unknown clause `{other}`"))),
            }
        }
        let index = |n: &str| {
            names.iter().position(|m| m == n).ok_or_else(|| FormatError::UnresolvedReference(format!("element `{n}`")))
        };
        let pairs = pairs.iter().map(|(a, b)| Ok((index(a)?, index(b)?))).collect::<Result<Vec<_>, FormatError>>()?;
        Ok(FinitePreorder::generated(names, &pairs)?)
    }
}

fn head<'t>(stmt: &'t [Token]) -> (&'t str, Cursor<'t>) {
    let mut c = Cursor::new(stmt);
    match c.word() {
        Ok(_) => match &stmt[0].tok {
            Tok::Word(w) => (w.as_str(), c),
            Tok::Sym(_) => unreachable!(),
        },
        Err(_) => ("", Cursor::new(stmt)),
    }
}

// ---------------------------------------------------------------- resolving

/// Resolves names of quantaloids and categories referenced by a file.
#[derive(Debug, Default)]
pub struct Loader {
    dir: Option<PathBuf>,
    cache: Mutex<HashMap<(Kind, String), Instance>>,
}

impl Loader {
    /// Resolves against bundled instances only.
    pub fn bundled() -> Self {
        Loader::default()
    }

    /// Resolves against files in `dir`, then bundled instances.
    pub fn in_dir(dir: impl Into<PathBuf>) -> Self {
        Loader { dir: Some(dir.into()), cache: Mutex::default() }
    }

    pub fn load_path(path: &Path) -> Result<Instance, FormatError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| FormatError::Io { path: path.display().to_string(), message: e.to_string() })?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Loader::in_dir(dir).parse(&text)
    }

    fn candidates(&self, kind: Kind) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(dir) = &self.dir {
            if let Ok(rd) = std::fs::read_dir(dir) {
                let mut paths: Vec<PathBuf> = rd.filter_map(|e| e.ok().map(|e| e.path())).collect();
                paths.sort();
                for p in paths {
                    if p.extension().and_then(|e| e.to_str()) == Some(kind.extension()) {
                        if let Ok(t) = std::fs::read_to_string(&p) {
                            out.push(t);
                        }
                    }
                }
            }
        }
        out.extend(
            BUNDLED
                .iter()
                .filter(|(f, _)| f.rsplit('.').next() == Some(kind.extension()))
                .map(|(_, t)| t.to_string()),
        );
        out
    }

    fn resolve(&self, kind: Kind, name: &str) -> Result<Instance, FormatError> {
        if let Some(hit) = self.cache.lock().unwrap().get(&(kind, name.to_string())) {
            return Ok(hit.clone());
        }
        for text in self.candidates(kind) {
            if header_of(&text).as_ref().map(|(k, n)| (*k, n.as_str())) == Some((kind, name)) {
                let inst = self.parse(&text)?;
                self.cache.lock().unwrap().insert((kind, name.to_string()), inst.clone());
                return Ok(inst);
            }
        }
        Err(FormatError::UnresolvedReference(format!("{} `{name}`", kind.keyword())))
    }

    pub fn quantaloid(&self, name: &str) -> Result<Arc<Quantaloid>, FormatError> {
        match self.resolve(Kind::Quantaloid, name)? {
            Instance::Quantaloid(q) => Ok(q),
            _ => unreachable!(),
        }
    }

    /// A category by name; `*_X@base` names the one-object category.
    pub fn category(&self, name: &str) -> Result<Arc<QCategory>, FormatError> {
        if let Some((obj, base)) = name.strip_prefix("*_").and_then(|r| r.rsplit_once('@')) {
            let q = self.quantaloid(base)?;
            let x = q.object_index(obj).ok_or_else(|| FormatError::UnresolvedReference(format!("object `{obj}`")))?;
            return Ok(Arc::new(QCategory::one_object(q, x).with_name(name)));
        }
        match self.resolve(Kind::Category, name)? {
            Instance::Category(c) => Ok(c),
            _ => unreachable!(),
        }
    }

    pub fn parse(&self, text: &str) -> Result<Instance, FormatError> {
        let stmts = statements(text)?;
        let first = stmts.first().ok_or(FormatError::SyntaxError { line: 1, col: 1, message: "empty file".into() })?;
        let (kw, mut c) = head(first);
        let kind = Kind::from_keyword(kw).ok_or_else(|| Cursor::new(first).error(format!("unknown kind `{kw}`")))?;
        let name = c.word()?;
        c.end()?;
        let body = &stmts[1..];
        Ok(match kind {
            Kind::Quantaloid => Instance::Quantaloid(Arc::new(parse_quantaloid(name, body)?)),
            Kind::Category => Instance::Category(Arc::new(self.parse_category(name, body)?)),
            Kind::Functor => Instance::Functor(self.parse_functor(name, body)?),
            Kind::Distributor => Instance::Distributor(self.parse_distributor(body)?),
            Kind::Pseudofunctor => {
                let p = self.parse_pseudofunctor(name, body)?;
                let report = validate_pseudofunctor(&p);
                if let Some(w) = report.validity_witness {
                    return Err(VariationError::NotValid(w).into());
                }
                if let Some(w) = report.closedness_witness {
                    return Err(VariationError::NotClosed(w).into());
                }
                Instance::Pseudofunctor(p)
            }
            Kind::Module => Instance::Module(QModule::from_pseudofunctor(&self.parse_pseudofunctor(name, body)?)?),
            Kind::Action => Instance::Action(self.parse_action(name, body)?),
        })
    }

    fn parse_category(&self, name: String, body: &[Vec<Token>]) -> Result<QCategory, FormatError> {
        let mut base = None;
        let mut objects: Vec<(String, String)> = Vec::new();
        let mut homs: Vec<(String, String, String, Cursor)> = Vec::new();
        for stmt in body {
            let (kw, mut c) = head(stmt);
            match kw {
                "base" => {
                    base = Some(self.quantaloid(&c.word()?)?);
                    c.end()?;
                }
                "object" => {
                    let id = c.word()?;
                    c.sym(":")?;
                    objects.push((id, c.word()?));
                    c.end()?;
                }
                "hom" => {
                    let (y, x) = c.pair()?;
                    c.sym("=")?;
                    let e = c.word()?;
                    c.end()?;
                    homs.push((y, x, e, c));
                }
                _ => return Err(Cursor::new(stmt).error(format!("unknown statement `{kw}`"))),
            }
        }
        let q = base.ok_or(FormatError::PartialTable("base".into()))?;
        let names: Vec<String> = objects.iter().map(|o| o.0.clone()).collect();
        let types = objects
            .iter()
            .map(|(_, t)| q.object_index(t).ok_or_else(|| FormatError::UnresolvedReference(format!("object `{t}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        let n = names.len();
        let obj = |s: &str| names.iter().position(|m| m == s).ok_or_else(|| FormatError::UnresolvedReference(format!("object `{s}`")));
        let mut table = vec![None; n * n];
        for (y, x, e, _) in &homs {
            let (yi, xi) = (obj(y)?, obj(x)?);
            let h = q.hom(types[xi], types[yi]);
            let v = h.index_of(e).ok_or_else(|| FormatError::UnresolvedReference(format!("element `{e}` in hom ({y},{x})")))?;
            table[yi * n + xi] = Some(v);
        }
        let hom = table
            .iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| FormatError::PartialTable(format!("hom ({},{})", names[i / n], names[i % n]))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(QCategory::new(name, q, names, types, hom)?)
    }

    fn source_target(&self, body: &[Vec<Token>]) -> Result<(Arc<QCategory>, Arc<QCategory>), FormatError> {
        let mut source = None;
        let mut target = None;
        for stmt in body {
            let (kw, mut c) = head(stmt);
            match kw {
                "source" => source = Some(c.word()?),
                "target" => target = Some(c.word()?),
                _ => continue,
            }
            c.end()?;
        }
        let (s, t) = (source.ok_or(FormatError::PartialTable("source".into()))?, target.ok_or(FormatError::PartialTable("target".into()))?);
        // a one-object source borrows the target's base
        let t = self.category(&t)?;
        let s = if s.starts_with("*_") && !s.contains('@') {
            self.category(&format!("{s}@{}", t.base().name()))?
        } else {
            self.category(&s)?
        };
        Ok((s, t))
    }

    fn parse_functor(&self, name: String, body: &[Vec<Token>]) -> Result<QFunctor, FormatError> {
        let (source, target) = self.source_target(body)?;
        let mut map = vec![None; source.len()];
        for stmt in body {
            let (kw, mut c) = head(stmt);
            match kw {
                "source" | "target" => {}
                "map" => {
                    let a = c.word()?;
                    c.sym("->")?;
                    let b = c.word()?;
                    c.end()?;
                    let ai = source.object_index(&a).ok_or_else(|| FormatError::UnresolvedReference(format!("object `{a}`")))?;
                    let bi = target.object_index(&b).ok_or_else(|| FormatError::UnresolvedReference(format!("object `{b}`")))?;
                    map[ai] = Some(bi);
                }
                _ => return Err(Cursor::new(stmt).error(format!("unknown statement `{kw}`"))),
            }
        }
        let map = map
            .iter()
            .enumerate()
            .map(|(a, v)| v.ok_or_else(|| FormatError::PartialTable(format!("map {}", source.object_name(a)))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(QFunctor::new(name, source, target, map)?)
    }

    fn parse_distributor(&self, body: &[Vec<Token>]) -> Result<Distributor, FormatError> {
        let (source, target) = self.source_target(body)?;
        let q = source.base().clone();
        let (na, nb) = (source.len(), target.len());
        let mut table = vec![None; na * nb];
        for stmt in body {
            let (kw, mut c) = head(stmt);
            match kw {
                "source" | "target" => {}
                "entry" => {
                    let (b, a) = c.pair()?;
                    c.sym("=")?;
                    let e = c.word()?;
                    c.end()?;
                    let bi = target.object_index(&b).ok_or_else(|| FormatError::UnresolvedReference(format!("object `{b}`")))?;
                    let ai = source.object_index(&a).ok_or_else(|| FormatError::UnresolvedReference(format!("object `{a}`")))?;
                    let h = q.hom(source.type_of(ai), target.type_of(bi));
                    let v = h.index_of(&e).ok_or_else(|| FormatError::UnresolvedReference(format!("element `{e}`")))?;
                    table[bi * na + ai] = Some(v);
                }
                _ => return Err(Cursor::new(stmt).error(format!("unknown statement `{kw}`"))),
            }
        }
        let table = table
            .iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| {
                    FormatError::PartialTable(format!("entry ({},{})", target.object_name(i / na), source.object_name(i % na)))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Distributor::new(source, target, table)?)
    }

    fn parse_pseudofunctor(&self, name: String, body: &[Vec<Token>]) -> Result<Pseudofunctor2, FormatError> {
        let mut base = None;
        let mut fibers: HashMap<String, FinitePreorder> = HashMap::new();
        let mut arrows: Vec<&Vec<Token>> = Vec::new();
        for stmt in body {
            let (kw, mut c) = head(stmt);
            match kw {
                "base" => {
                    base = Some(self.quantaloid(&c.word()?)?);
                    c.end()?;
                }
                "fiber" => {
                    let x = c.word()?;
                    let order = c.order_block()?;
                    c.end()?;
                    fibers.insert(x, order);
                }
                "arrow" => arrows.push(stmt),
                _ => return Err(Cursor::new(stmt).error(format!("unknown statement `{kw}`"))),
            }
        }
        let q = base.ok_or(FormatError::PartialTable("base".into()))?;
        let n = q.object_count();
        let orders = (0..n)
            .map(|x| {
                fibers
                    .remove(q.object_name(x))
                    .map(Arc::new)
                    .ok_or_else(|| FormatError::PartialTable(format!("fiber {}", q.object_name(x))))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(extra) = fibers.keys().next() {
            return Err(FormatError::UnresolvedReference(format!("object `{extra}`")));
        }
        let mut tables: Vec<Vec<Option<Vec<usize>>>> = (0..n * n).map(|i| vec![None; q.hom(i / n, i % n).len()]).collect();
        for stmt in arrows {
            let (_, mut c) = head(stmt);
            let (xs, ys, fs) = (c.word()?, c.word()?, c.word()?);
            let x = q.object_index(&xs).ok_or_else(|| FormatError::UnresolvedReference(format!("object `{xs}`")))?;
            let y = q.object_index(&ys).ok_or_else(|| FormatError::UnresolvedReference(format!("object `{ys}`")))?;
            let f = q.hom(x, y).index_of(&fs).ok_or_else(|| FormatError::UnresolvedReference(format!("element `{fs}`")))?;
            let mut table = vec![None; orders[y].len()];
            c.sym("{")?;
            while !c.eat("}") {
                let a = c.word()?;
                c.sym("->")?;
                let b = c.word()?;
                let ai = orders[y].index_of(&a).ok_or_else(|| FormatError::UnresolvedReference(format!("element `{a}`")))?;
                let bi = orders[x].index_of(&b).ok_or_else(|| FormatError::UnresolvedReference(format!("element `{b}`")))?;
                table[ai] = Some(bi);
            }
            c.end()?;
            let label = format!("arrow {xs} {ys} {fs}");
            tables[x * n + y][f] =
                Some(table.into_iter().collect::<Option<Vec<_>>>().ok_or(FormatError::PartialTable(label))?);
        }
        let mut actions = Vec::with_capacity(n * n);
        for (i, row) in tables.into_iter().enumerate() {
            let (x, y) = (i / n, i % n);
            let mut maps = Vec::with_capacity(row.len());
            for (f, t) in row.into_iter().enumerate() {
                let t = t.ok_or_else(|| {
                    FormatError::PartialTable(format!("arrow {} {} {}", q.object_name(x), q.object_name(y), q.hom(x, y).name(f)))
                })?;
                maps.push(MonotoneMap::new(orders[y].clone(), orders[x].clone(), t)?);
            }
            actions.push(maps);
        }
        Ok(Pseudofunctor2::new(name, q, orders, actions)?)
    }

    fn parse_action(&self, name: String, body: &[Vec<Token>]) -> Result<QuantaleAction, FormatError> {
        let mut quantale = None;
        let mut carrier = None;
        let mut entries = Vec::new();
        for stmt in body {
            let (kw, mut c) = head(stmt);
            match kw {
                "quantale" => {
                    quantale = Some(self.quantaloid(&c.word()?)?);
                    c.end()?;
                }
                "carrier" => {
                    carrier = Some(Arc::new(FiniteSupLattice::new(c.order_block()?)?));
                    c.end()?;
                }
                "act" => {
                    let (m, f) = c.pair()?;
                    c.sym("=")?;
                    let r = c.word()?;
                    c.end()?;
                    entries.push((m, f, r));
                }
                _ => return Err(Cursor::new(stmt).error(format!("unknown statement `{kw}`"))),
            }
        }
        let q = quantale.ok_or(FormatError::PartialTable("quantale".into()))?;
        let carrier = carrier.ok_or(FormatError::PartialTable("carrier".into()))?;
        if !q.is_one_object() {
            return Err(VariationError::NotOneObject(q.name().to_string()).into());
        }
        let k = q.hom(0, 0);
        let mut table = vec![None; carrier.len() * k.len()];
        for (m, f, r) in entries {
            let unresolved = |s: &str| FormatError::UnresolvedReference(format!("element `{s}`"));
            let mi = carrier.index_of(&m).ok_or_else(|| unresolved(&m))?;
            let fi = k.index_of(&f).ok_or_else(|| unresolved(&f))?;
            table[mi * k.len() + fi] = Some(carrier.index_of(&r).ok_or_else(|| unresolved(&r))?);
        }
        let table = table
            .iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| {
                    FormatError::PartialTable(format!("act ({},{})", carrier.name(i / k.len()), k.name(i % k.len())))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(QuantaleAction::new(name, q, carrier, table)?)
    }
}

/// The `(kind, name)` header of a file, if it has one.
pub fn header_of(text: &str) -> Option<(Kind, String)> {
    let stmts = statements(text).ok()?;
    let (kw, mut c) = head(stmts.first()?);
    Some((Kind::from_keyword(kw)?, c.word().ok()?))
}

fn parse_quantaloid(name: String, body: &[Vec<Token>]) -> Result<Quantaloid, FormatError> {
    let mut objects: Option<Vec<String>> = None;
    let mut homs: HashMap<(String, String), FinitePreorder> = HashMap::new();
    let mut ids: HashMap<String, String> = HashMap::new();
    let mut composes: Vec<&Vec<Token>> = Vec::new();
    for stmt in body {
        let (kw, mut c) = head(stmt);
        match kw {
            "objects" => objects = Some(c.words_to_end()?),
            "hom" => {
                let (x, y) = (c.word()?, c.word()?);
                let order = c.order_block()?;
                c.end()?;
                homs.insert((x, y), order);
            }
            "trivial" => {
                let (x, y) = (c.word()?, c.word()?);
                c.end()?;
                homs.insert((x, y), FinitePreorder::chain(&["0"]));
            }
            "id" => {
                let x = c.word()?;
                c.sym("=")?;
                ids.insert(x, c.word()?);
                c.end()?;
            }
            "compose" => composes.push(stmt),
            _ => return Err(Cursor::new(stmt).error(format!("unknown statement `{kw}`"))),
        }
    }
    let objects = objects.ok_or(FormatError::PartialTable("objects".into()))?;
    let n = objects.len();
    let mut lattices = Vec::with_capacity(n * n);
    for x in &objects {
        for y in &objects {
            let order = homs.remove(&(x.clone(), y.clone())).ok_or_else(|| FormatError::PartialTable(format!("hom {x} {y}")))?;
            lattices.push(FiniteSupLattice::new(order)?);
        }
    }
    if let Some((x, y)) = homs.keys().next() {
        return Err(FormatError::UnresolvedReference(format!("hom {x} {y}")));
    }
    let obj = |s: &str| objects.iter().position(|o| o == s).ok_or_else(|| FormatError::UnresolvedReference(format!("object `{s}`")));
    let mut identity = Vec::with_capacity(n);
    for (x, name) in objects.iter().enumerate() {
        let e = ids.get(name).ok_or_else(|| FormatError::PartialTable(format!("id {name}")))?;
        identity.push(lattices[x * n + x].index_of(e).ok_or_else(|| FormatError::UnresolvedReference(format!("element `{e}`")))?);
    }
    let mut tables: Vec<Option<Vec<usize>>> = vec![None; n * n * n];
    for stmt in composes {
        let (_, mut c) = head(stmt);
        let (xs, ys, zs) = (c.word()?, c.word()?, c.word()?);
        let (x, y, z) = (obj(&xs)?, obj(&ys)?, obj(&zs)?);
        let (hxy, hyz, hxz) = (&lattices[x * n + y], &lattices[y * n + z], &lattices[x * n + z]);
        let mut t = vec![None; hxy.len() * hyz.len()];
        c.sym("{")?;
        while !c.eat("}") {
            let (g, f) = c.pair()?;
            c.sym("=")?;
            let h = c.word()?;
            let unresolved = |s: &str| FormatError::UnresolvedReference(format!("element `{s}`"));
            let gi = hyz.index_of(&g).ok_or_else(|| unresolved(&g))?;
            let fi = hxy.index_of(&f).ok_or_else(|| unresolved(&f))?;
            t[gi * hxy.len() + fi] = Some(hxz.index_of(&h).ok_or_else(|| unresolved(&h))?);
        }
        c.end()?;
        let label = format!("compose {xs} {ys} {zs}");
        tables[(x * n + y) * n + z] = Some(t.into_iter().collect::<Option<Vec<_>>>().ok_or(FormatError::PartialTable(label))?);
    }
    let mut compose = Vec::with_capacity(n * n * n);
    for (i, t) in tables.into_iter().enumerate() {
        let (x, y, z) = (i / (n * n), (i / n) % n, i % n);
        let size = lattices[x * n + y].len() * lattices[y * n + z].len();
        compose.push(match t {
            Some(t) => t,
            None if lattices[x * n + z].len() == 1 => vec![0; size],
            None => {
                return Err(FormatError::PartialTable(format!("compose {} {} {}", objects[x], objects[y], objects[z])))
            }
        });
    }
    Ok(validate_quantaloid(QuantaloidData { name, objects, homs: lattices, compose, identity })?)
}

// ---------------------------------------------------------------- rendering

fn render_order_block(order: &FinitePreorder) -> String {
    let mut s = format!("{{ elements {};", order.names().join(" "));
    let covers = order.covers();
    if !covers.is_empty() {
        let pairs: Vec<String> = covers.iter().map(|&(a, b)| format!("{}<={}", order.name(a), order.name(b))).collect();
        let _ = write!(s, " order {};", pairs.join(" "));
    }
    s.push_str(" }");
    s
}

pub fn render_quantaloid(q: &Quantaloid) -> String {
    let n = q.object_count();
    let mut s = format!("quantaloid {}\nobjects {}\n", q.name(), q.objects().join(" "));
    for x in 0..n {
        for y in 0..n {
            let h = q.hom(x, y);
            let (xs, ys) = (q.object_name(x), q.object_name(y));
            if h.len() == 1 && h.name(0) == "0" {
                let _ = writeln!(s, "trivial {xs} {ys}");
            } else {
                let _ = writeln!(s, "hom {xs} {ys} {}", render_order_block(h.order()));
            }
        }
    }
    for x in 0..n {
        let _ = writeln!(s, "id {} = {}", q.object_name(x), q.hom(x, x).name(q.identity(x)));
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let (hxy, hyz, hxz) = (q.hom(x, y), q.hom(y, z), q.hom(x, z));
                if hxz.len() == 1 {
                    continue;
                }
                let _ = writeln!(s, "compose {} {} {} {{", q.object_name(x), q.object_name(y), q.object_name(z));
                for g in 0..hyz.len() {
                    let row: Vec<String> = (0..hxy.len())
                        .map(|f| format!("({},{})={}", hyz.name(g), hxy.name(f), hxz.name(q.compose_raw(x, y, z, g, f))))
                        .collect();
                    let _ = writeln!(s, "  {}", row.join(" "));
                }
                s.push_str("}\n");
            }
        }
    }
    s
}

pub fn render_category(c: &QCategory) -> String {
    let q = c.base();
    let mut s = format!("category {}\nbase {}\n", c.name(), q.name());
    for x in 0..c.len() {
        let _ = writeln!(s, "object {} : {}", c.object_name(x), q.object_name(c.type_of(x)));
    }
    for y in 0..c.len() {
        for x in 0..c.len() {
            let name = q.hom(c.type_of(x), c.type_of(y)).name(c.hom(y, x));
            let _ = writeln!(s, "hom ({},{}) = {}", c.object_name(y), c.object_name(x), name);
        }
    }
    s
}

pub fn render_functor(f: &QFunctor) -> String {
    let (a, b) = (f.source(), f.target());
    let mut s = format!("functor {}\nsource {}\ntarget {}\n", f.name(), a.name(), b.name());
    for x in 0..a.len() {
        let _ = writeln!(s, "map {} -> {}", a.object_name(x), b.object_name(f.apply(x)));
    }
    s
}

pub fn render_distributor(d: &Distributor) -> String {
    let (a, b) = (d.source(), d.target());
    let q = a.base();
    let mut s = format!("distributor {}\nsource {}\ntarget {}\n", distributor_name(d), a.name(), b.name());
    for y in 0..b.len() {
        for x in 0..a.len() {
            let name = q.hom(a.type_of(x), b.type_of(y)).name(d.get(y, x));
            let _ = writeln!(s, "entry ({},{}) = {}", b.object_name(y), a.object_name(x), name);
        }
    }
    s
}

fn render_fibered(kind: &str, name: &str, q: &Quantaloid, fibers: &[Arc<FinitePreorder>], action: impl Fn(usize, usize, usize) -> MonotoneMap) -> String {
    let n = q.object_count();
    let mut s = format!("{kind} {name}\nbase {}\n", q.name());
    for (x, f) in fibers.iter().enumerate() {
        let _ = writeln!(s, "fiber {} {}", q.object_name(x), render_order_block(f));
    }
    for x in 0..n {
        for y in 0..n {
            for f in 0..q.hom(x, y).len() {
                let m = action(x, y, f);
                let pairs: Vec<String> = m.names().iter().map(|(a, b)| format!("{a}->{b}")).collect();
                let _ = writeln!(s, "arrow {} {} {} {{ {} }}", q.object_name(x), q.object_name(y), q.hom(x, y).name(f), pairs.join(" "));
            }
        }
    }
    s
}

pub fn render_pseudofunctor(p: &Pseudofunctor2) -> String {
    render_fibered("pseudofunctor", p.name(), p.base(), p.fibers(), |x, y, f| p.action(x, y, f).clone())
}

pub fn render_module(m: &QModule) -> String {
    let q = m.base();
    let fibers: Vec<Arc<FinitePreorder>> = (0..q.object_count()).map(|x| m.lattice(x).order_arc().clone()).collect();
    render_fibered("module", m.name(), q, &fibers, |x, y, f| m.action(x, y, f).clone())
}

pub fn render_action(a: &QuantaleAction) -> String {
    let (q, m) = (a.quantale(), a.carrier());
    let k = q.hom(0, 0);
    let mut s = format!("action {}\nquantale {}\ncarrier {}\n", a.name(), q.name(), render_order_block(m.order()));
    for e in 0..m.len() {
        for f in 0..k.len() {
            let _ = writeln!(s, "act ({},{}) = {}", m.name(e), k.name(f), m.name(a.apply(e, f)));
        }
    }
    s
}

pub fn render(inst: &Instance) -> String {
    match inst {
        Instance::Quantaloid(q) => render_quantaloid(q),
        Instance::Category(c) => render_category(c),
        Instance::Functor(f) => render_functor(f),
        Instance::Distributor(d) => render_distributor(d),
        Instance::Pseudofunctor(p) => render_pseudofunctor(p),
        Instance::Module(m) => render_module(m),
        Instance::Action(a) => render_action(a),
    }
}

/// Drops comments, blank lines and surrounding whitespace.
pub fn normalize(text: &str) -> String {
    text.lines()
        .map(|l| l.split('#').next().unwrap().trim())
        .filter(|l| !l.is_empty())
        .map(|l| l.split_whitespace().collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("\n")
}

/// File names and contents of the bundled instances.
pub fn bundled_files() -> &'static [(&'static str, &'static str)] {
    BUNDLED
}

/// Parses a bundled instance by file name.
pub fn bundled(file: &str) -> Result<Instance, FormatError> {
    let (_, text) = BUNDLED
        .iter()
        .find(|(f, _)| *f == file)
        .ok_or_else(|| FormatError::UnresolvedReference(format!("bundled file `{file}`")))?;
    Loader::bundled().parse(text)
}

/// Looks up a bundled instance by kind and declared name.
pub fn bundled_named(kind: Kind, name: &str) -> Result<Instance, FormatError> {
    Loader::bundled().resolve(kind, name)
}

pub fn arrow_from_text(q: &Quantaloid, text: &str) -> Result<QArrow, FormatError> {
    Ok(q.parse_arrow(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q2: &str = "quantaloid q2\nobjects *\nhom * * { elements 0 1; order 0<=1; }\nid * = 1\ncompose * * * {\n  (0,0)=0 (0,1)=0\n  (1,0)=0 (1,1)=1\n}\n";

    #[test]
    fn parses_and_renders_q2() {
        let inst = Loader::bundled().parse(Q2).unwrap();
        let Instance::Quantaloid(q) = &inst else { panic!() };
        assert_eq!(**q, Quantaloid::boolean2());
        assert_eq!(render(&inst), Q2);
    }

    #[test]
    fn missing_compose_entry_is_partial() {
        let text = Q2.replace("(1,1)=1", "");
        assert_eq!(Loader::bundled().parse(&text).unwrap_err().kind(), "PartialTable");
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = Loader::bundled().parse("quantaloid q\nobjects *\nhom * * { elements 0 1; order 0 1; }\n").unwrap_err();
        match err {
            FormatError::SyntaxError { line, .. } => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert_eq!(Loader::bundled().parse("widget w\n").unwrap_err().kind(), "SyntaxError");
        assert_eq!(Loader::bundled().parse("category c\nbase nowhere\n").unwrap_err().kind(), "UnresolvedReference");
    }

    #[test]
    fn comments_and_whitespace_normalize_away() {
        assert_eq!(normalize("a  b # note\n\n  c\n"), "a b\nc");
    }
}
