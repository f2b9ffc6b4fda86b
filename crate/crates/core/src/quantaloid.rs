//! Finite quantaloids: validation, composition, residuals, opposites, and
//! builders for the standard bases.
//!
//! Composition tables are indexed as `(g, f) ↦ g∘f`, "apply `g` after `f`".
//! Liftings and extensions are derived from composition as joins of all
//! candidates; they are computed once at construction and cached.

use std::sync::Arc;

use thiserror::Error;

use crate::order::{FinitePreorder, FiniteSupLattice, OrderError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `1_Y ∘ f = f`
    Left,
    /// `f ∘ 1_X = f`
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuantaloidError {
    #[error("composition is not associative at h={h}, g={g}, f={f}")]
    NotAssociative { h: String, g: String, f: String },
    #[error("unit law fails on the {side:?} at {arrow}")]
    UnitLawFails { arrow: String, side: Side },
    #[error("composition does not preserve the join of {a} and {b} in its {side:?} argument (other argument {fixed})")]
    NotJoinPreserving { side: Side, fixed: String, a: String, b: String },
    #[error("composing with {arrow} does not send the zero arrow to zero")]
    BottomNotAbsorbed { arrow: String },
    #[error("arrows do not compose: {0}")]
    TypeMismatch(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown element `{element}` of hom({x},{y})")]
    UnknownElement { x: String, y: String, element: String },
    #[error("hom({x},{y}) is not a sup-lattice: {source}")]
    InvalidHom { x: String, y: String, source: OrderError },
    #[error("malformed quantaloid data: {0}")]
    Shape(String),
    #[error("monoid is invalid: {0}")]
    InvalidMonoid(String),
}

impl QuantaloidError {
    pub fn kind(&self) -> &'static str {
        match self {
            QuantaloidError::NotAssociative { .. } => "NotAssociative",
            QuantaloidError::UnitLawFails { .. } => "UnitLawFails",
            QuantaloidError::NotJoinPreserving { .. } => "NotJoinPreserving",
            QuantaloidError::BottomNotAbsorbed { .. } => "BottomNotAbsorbed",
            QuantaloidError::TypeMismatch(..) => "TypeMismatch",
            QuantaloidError::UnknownObject(..) => "UnknownObject",
            QuantaloidError::UnknownElement { .. } => "UnknownElement",
            QuantaloidError::InvalidHom { .. } => "InvalidHom",
            QuantaloidError::Shape(..) => "Shape",
            QuantaloidError::InvalidMonoid(..) => "InvalidMonoid",
        }
    }
}

/// An arrow `value: src → dst`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QArrow {
    pub src: usize,
    pub dst: usize,
    pub value: usize,
}

impl QArrow {
    pub fn new(src: usize, dst: usize, value: usize) -> Self {
        QArrow { src, dst, value }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Residual {
    /// `[f, g]`, the largest `h` with `f ∘ h <= g`.
    Lifting,
    /// `{f, g}`, the largest `h` with `h ∘ f <= g`.
    Extension,
}

/// Raw tables of a candidate quantaloid, validated by [`validate_quantaloid`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantaloidData {
    pub name: String,
    pub objects: Vec<String>,
    /// `homs[x * n + y]` is `hom(X, Y)`.
    pub homs: Vec<FiniteSupLattice>,
    /// `compose[(x * n + y) * n + z][g * |hom(X,Y)| + f]` is `g ∘ f`
    /// for `f ∈ hom(X,Y)`, `g ∈ hom(Y,Z)`.
    pub compose: Vec<Vec<usize>>,
    pub identity: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quantaloid {
    name: String,
    objects: Vec<String>,
    homs: Vec<Arc<FiniteSupLattice>>,
    compose: Vec<Vec<usize>>,
    identity: Vec<usize>,
    lift: Vec<Vec<usize>>,
    extend: Vec<Vec<usize>>,
}

pub fn validate_quantaloid(data: QuantaloidData) -> Result<Quantaloid, QuantaloidError> {
    let QuantaloidData { name, objects, homs, compose, identity } = data;
    let n = objects.len();
    for (i, o) in objects.iter().enumerate() {
        if objects[..i].contains(o) {
            return Err(QuantaloidError::Shape(format!("duplicate object `{o}`")));
        }
    }
    if homs.len() != n * n || compose.len() != n * n * n || identity.len() != n {
        return Err(QuantaloidError::Shape("table counts do not match the object count".into()));
    }
    let q = Quantaloid {
        name,
        objects,
        homs: homs.into_iter().map(Arc::new).collect(),
        compose,
        identity,
        lift: Vec::new(),
        extend: Vec::new(),
    };
    for x in 0..n {
        if q.identity[x] >= q.hom(x, x).len() {
            return Err(QuantaloidError::Shape(format!("identity of `{}` out of range", q.objects[x])));
        }
        for y in 0..n {
            for z in 0..n {
                let (hxy, hyz, hxz) = (q.hom(x, y).len(), q.hom(y, z).len(), q.hom(x, z).len());
                let table = &q.compose[(x * n + y) * n + z];
                if table.len() != hxy * hyz {
                    return Err(QuantaloidError::Shape(format!(
                        "composition table {} {} {} has {} entries, expected {}",
                        q.objects[x],
                        q.objects[y],
                        q.objects[z],
                        table.len(),
                        hxy * hyz
                    )));
                }
                if table.iter().any(|&h| h >= hxz) {
                    return Err(QuantaloidError::Shape(format!(
                        "composition table {} {} {} leaves hom({},{})",
                        q.objects[x], q.objects[y], q.objects[z], q.objects[x], q.objects[z]
                    )));
                }
            }
        }
    }
    q.check_units()?;
    q.check_zero()?;
    q.check_joins()?;
    q.check_associativity()?;
    Ok(q.with_residuals())
}

impl Quantaloid {
    fn check_units(&self) -> Result<(), QuantaloidError> {
        let n = self.objects.len();
        for x in 0..n {
            for y in 0..n {
                for f in 0..self.hom(x, y).len() {
                    if self.compose_raw(x, y, y, self.identity[y], f) != f {
                        return Err(QuantaloidError::UnitLawFails {
                            arrow: self.arrow_name(QArrow::new(x, y, f)),
                            side: Side::Left,
                        });
                    }
                    if self.compose_raw(x, x, y, f, self.identity[x]) != f {
                        return Err(QuantaloidError::UnitLawFails {
                            arrow: self.arrow_name(QArrow::new(x, y, f)),
                            side: Side::Right,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn check_zero(&self) -> Result<(), QuantaloidError> {
        let n = self.objects.len();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let zero_xz = self.zero(x, z);
                    for g in 0..self.hom(y, z).len() {
                        if self.compose_raw(x, y, z, g, self.zero(x, y)) != zero_xz {
                            return Err(QuantaloidError::BottomNotAbsorbed {
                                arrow: self.arrow_name(QArrow::new(y, z, g)),
                            });
                        }
                    }
                    for f in 0..self.hom(x, y).len() {
                        if self.compose_raw(x, y, z, self.zero(y, z), f) != zero_xz {
                            return Err(QuantaloidError::BottomNotAbsorbed {
                                arrow: self.arrow_name(QArrow::new(x, y, f)),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn check_joins(&self) -> Result<(), QuantaloidError> {
        let n = self.objects.len();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let (hxy, hyz, hxz) = (self.hom(x, y), self.hom(y, z), self.hom(x, z));
                    for g in 0..hyz.len() {
                        for f in 0..hxy.len() {
                            for f2 in f + 1..hxy.len() {
                                let lhs = self.compose_raw(x, y, z, g, hxy.join(f, f2));
                                let rhs = hxz.join(self.compose_raw(x, y, z, g, f), self.compose_raw(x, y, z, g, f2));
                                if lhs != rhs {
                                    return Err(QuantaloidError::NotJoinPreserving {
                                        side: Side::Right,
                                        fixed: self.arrow_name(QArrow::new(y, z, g)),
                                        a: self.arrow_name(QArrow::new(x, y, f)),
                                        b: self.arrow_name(QArrow::new(x, y, f2)),
                                    });
                                }
                            }
                        }
                    }
                    for f in 0..hxy.len() {
                        for g in 0..hyz.len() {
                            for g2 in g + 1..hyz.len() {
                                let lhs = self.compose_raw(x, y, z, hyz.join(g, g2), f);
                                let rhs = hxz.join(self.compose_raw(x, y, z, g, f), self.compose_raw(x, y, z, g2, f));
                                if lhs != rhs {
                                    return Err(QuantaloidError::NotJoinPreserving {
                                        side: Side::Left,
                                        fixed: self.arrow_name(QArrow::new(x, y, f)),
                                        a: self.arrow_name(QArrow::new(y, z, g)),
                                        b: self.arrow_name(QArrow::new(y, z, g2)),
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn check_associativity(&self) -> Result<(), QuantaloidError> {
        let n = self.objects.len();
        for w in 0..n {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        for f in 0..self.hom(w, x).len() {
                            for g in 0..self.hom(x, y).len() {
                                let gf = self.compose_raw(w, x, y, g, f);
                                for h in 0..self.hom(y, z).len() {
                                    let hg = self.compose_raw(x, y, z, h, g);
                                    if self.compose_raw(w, y, z, h, gf) != self.compose_raw(w, x, z, hg, f) {
                                        return Err(QuantaloidError::NotAssociative {
                                            h: self.arrow_name(QArrow::new(y, z, h)),
                                            g: self.arrow_name(QArrow::new(x, y, g)),
                                            f: self.arrow_name(QArrow::new(w, x, f)),
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn with_residuals(mut self) -> Self {
        let n = self.objects.len();
        let mut lift = Vec::with_capacity(n * n * n);
        let mut extend = Vec::with_capacity(n * n * n);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    // [f, g] for f ∈ hom(X,Y), g ∈ hom(Z,Y), ranging h ∈ hom(Z,X)
                    let (hxy, hzy, hzx) = (self.hom(x, y), self.hom(z, y), self.hom(z, x));
                    let mut t = Vec::with_capacity(hxy.len() * hzy.len());
                    for f in 0..hxy.len() {
                        for g in 0..hzy.len() {
                            t.push(hzx.join_all(
                                (0..hzx.len()).filter(|&h| hzy.leq(self.compose_raw(z, x, y, f, h), g)),
                            ));
                        }
                    }
                    lift.push(t);
                    // {f, g} for f ∈ hom(X,Y), g ∈ hom(X,Z), ranging h ∈ hom(Y,Z)
                    let (hxz, hyz) = (self.hom(x, z), self.hom(y, z));
                    let mut t = Vec::with_capacity(hxy.len() * hxz.len());
                    for f in 0..hxy.len() {
                        for g in 0..hxz.len() {
                            t.push(hyz.join_all(
                                (0..hyz.len()).filter(|&h| hxz.leq(self.compose_raw(x, y, z, h, f), g)),
                            ));
                        }
                    }
                    extend.push(t);
                }
            }
        }
        self.lift = lift;
        self.extend = extend;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn object_name(&self, x: usize) -> &str {
        &self.objects[x]
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn hom(&self, x: usize, y: usize) -> &FiniteSupLattice {
        &self.homs[x * self.objects.len() + y]
    }

    pub fn identity(&self, x: usize) -> usize {
        self.identity[x]
    }

    /// The bottom element `0_{X,Y}` of `hom(X, Y)`.
    pub fn zero(&self, x: usize, y: usize) -> usize {
        self.hom(x, y).bottom()
    }

    /// `g ∘ f` for `f ∈ hom(X,Y)`, `g ∈ hom(Y,Z)`.
    pub fn compose_raw(&self, x: usize, y: usize, z: usize, g: usize, f: usize) -> usize {
        let n = self.objects.len();
        self.compose[(x * n + y) * n + z][g * self.hom(x, y).len() + f]
    }

    /// `[f, g] ∈ hom(Z, X)` for `f ∈ hom(X,Y)`, `g ∈ hom(Z,Y)`.
    pub fn lift_raw(&self, x: usize, y: usize, z: usize, f: usize, g: usize) -> usize {
        let n = self.objects.len();
        self.lift[(x * n + y) * n + z][f * self.hom(z, y).len() + g]
    }

    /// `{f, g} ∈ hom(Y, Z)` for `f ∈ hom(X,Y)`, `g ∈ hom(X,Z)`.
    pub fn extend_raw(&self, x: usize, y: usize, z: usize, f: usize, g: usize) -> usize {
        let n = self.objects.len();
        self.extend[(x * n + y) * n + z][f * self.hom(x, z).len() + g]
    }

    pub fn compose(&self, g: QArrow, f: QArrow) -> Result<QArrow, QuantaloidError> {
        self.check_arrow(g)?;
        self.check_arrow(f)?;
        if f.dst != g.src {
            return Err(QuantaloidError::TypeMismatch(format!(
                "{} after {}",
                self.arrow_name(g),
                self.arrow_name(f)
            )));
        }
        Ok(QArrow::new(f.src, g.dst, self.compose_raw(f.src, f.dst, g.dst, g.value, f.value)))
    }

    /// Lifting `[f, g]` (requires `f: X→Y`, `g: Z→Y`; gives `Z→X`) or
    /// extension `{f, g}` (requires `f: X→Y`, `g: X→Z`; gives `Y→Z`).
    pub fn residual(&self, kind: Residual, f: QArrow, g: QArrow) -> Result<QArrow, QuantaloidError> {
        self.check_arrow(g)?;
        self.check_arrow(f)?;
        match kind {
            Residual::Lifting => {
                if f.dst != g.dst {
                    return Err(QuantaloidError::TypeMismatch(format!(
                        "lifting [{}, {}] needs a common codomain",
                        self.arrow_name(f),
                        self.arrow_name(g)
                    )));
                }
                Ok(QArrow::new(g.src, f.src, self.lift_raw(f.src, f.dst, g.src, f.value, g.value)))
            }
            Residual::Extension => {
                if f.src != g.src {
                    return Err(QuantaloidError::TypeMismatch(format!(
                        "extension {{{}, {}}} needs a common domain",
                        self.arrow_name(f),
                        self.arrow_name(g)
                    )));
                }
                Ok(QArrow::new(f.dst, g.dst, self.extend_raw(f.src, f.dst, g.dst, f.value, g.value)))
            }
        }
    }

    fn check_arrow(&self, a: QArrow) -> Result<(), QuantaloidError> {
        let n = self.objects.len();
        if a.src >= n || a.dst >= n || a.value >= self.hom(a.src, a.dst).len() {
            return Err(QuantaloidError::TypeMismatch(format!("{a:?} is not an arrow of {}", self.name)));
        }
        Ok(())
    }

    /// Every arrow, ordered by source, target, then element.
    pub fn arrows(&self) -> Vec<QArrow> {
        let n = self.objects.len();
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                out.extend((0..self.hom(x, y).len()).map(|v| QArrow::new(x, y, v)));
            }
        }
        out
    }

    /// `X->Y:f`
    pub fn arrow_name(&self, a: QArrow) -> String {
        format!("{}->{}:{}", self.objects[a.src], self.objects[a.dst], self.hom(a.src, a.dst).name(a.value))
    }

    /// Parses the `X->Y:f` syntax of [`Quantaloid::arrow_name`].
    pub fn parse_arrow(&self, text: &str) -> Result<QArrow, QuantaloidError> {
        let (ends, value) = text
            .rsplit_once(':')
            .ok_or_else(|| QuantaloidError::TypeMismatch(format!("`{text}` is not of the form X->Y:f")))?;
        let (src, dst) = ends
            .split_once("->")
            .ok_or_else(|| QuantaloidError::TypeMismatch(format!("`{text}` is not of the form X->Y:f")))?;
        let x = self.object_index(src).ok_or_else(|| QuantaloidError::UnknownObject(src.to_string()))?;
        let y = self.object_index(dst).ok_or_else(|| QuantaloidError::UnknownObject(dst.to_string()))?;
        let v = self.hom(x, y).index_of(value).ok_or_else(|| QuantaloidError::UnknownElement {
            x: src.to_string(),
            y: dst.to_string(),
            element: value.to_string(),
        })?;
        Ok(QArrow::new(x, y, v))
    }

    pub fn is_one_object(&self) -> bool {
        self.objects.len() == 1
    }

    /// The raw tables, as accepted by [`validate_quantaloid`].
    pub fn data(&self) -> QuantaloidData {
        QuantaloidData {
            name: self.name.clone(),
            objects: self.objects.clone(),
            homs: self.homs.iter().map(|h| (**h).clone()).collect(),
            compose: self.compose.clone(),
            identity: self.identity.clone(),
        }
    }

    /// `hom^op(X,Y) = hom(Y,X)`, `g ∘^op f = f ∘ g`.
    pub fn opposite(&self) -> Quantaloid {
        let n = self.objects.len();
        let homs = (0..n * n).map(|i| (*self.homs[(i % n) * n + i / n]).clone()).collect();
        let mut compose = Vec::with_capacity(n * n * n);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    // g ∈ hom(Z,Y), f ∈ hom(Y,X) in the original
                    let (gs, fs) = (self.hom(z, y).len(), self.hom(y, x).len());
                    let mut t = Vec::with_capacity(gs * fs);
                    for g in 0..gs {
                        for f in 0..fs {
                            t.push(self.compose_raw(z, y, x, f, g));
                        }
                    }
                    compose.push(t);
                }
            }
        }
        let name = match self.name.strip_suffix("^op") {
            Some(base) => base.to_string(),
            None => format!("{}^op", self.name),
        };
        validate_quantaloid(QuantaloidData { name, objects: self.objects.clone(), homs, compose, identity: self.identity.clone() })
            .expect("the opposite of a quantaloid is a quantaloid")
    }

    /// The two-element Boolean algebra as a one-object quantaloid.
    pub fn boolean2() -> Quantaloid {
        let lattice = FiniteSupLattice::chain(&["0", "1"]);
        quantale_table("q2", lattice, vec![0, 0, 0, 1], 1).expect("2 is a quantale")
    }
}

/// A one-object quantaloid from a lattice, a multiplication table
/// (`mult[g * n + f] = g·f`) and a unit.
pub fn quantale_table(
    name: &str,
    lattice: FiniteSupLattice,
    mult: Vec<usize>,
    unit: usize,
) -> Result<Quantaloid, QuantaloidError> {
    validate_quantaloid(QuantaloidData {
        name: name.to_string(),
        objects: vec!["*".to_string()],
        homs: vec![lattice],
        compose: vec![mult],
        identity: vec![unit],
    })
}

/// `Rel(Ω)` for a finite frame Ω: objects are the elements of Ω,
/// `hom(x,y)` is the down-set of `x∧y`, composition is meet and the
/// identity on `x` is `x`.
pub fn locale(name: &str, frame: &FiniteSupLattice) -> Result<Quantaloid, QuantaloidError> {
    let n = frame.len();
    let objects: Vec<String> = (0..n).map(|a| frame.name(a).to_string()).collect();
    // members of hom(x,y), as frame elements
    let members: Vec<Vec<usize>> = (0..n * n)
        .map(|i| {
            let top = frame.meet(i / n, i % n);
            (0..n).filter(|&a| frame.leq(a, top)).collect()
        })
        .collect();
    let mut homs = Vec::with_capacity(n * n);
    for (i, m) in members.iter().enumerate() {
        let order = frame.order().restrict(m);
        homs.push(FiniteSupLattice::new(order).map_err(|source| QuantaloidError::InvalidHom {
            x: objects[i / n].clone(),
            y: objects[i % n].clone(),
            source,
        })?);
    }
    let mut compose = Vec::with_capacity(n * n * n);
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let (mxy, myz, mxz) = (&members[x * n + y], &members[y * n + z], &members[x * n + z]);
                let mut t = Vec::with_capacity(mxy.len() * myz.len());
                for &g in myz {
                    for &f in mxy {
                        let m = frame.meet(g, f);
                        t.push(mxz.iter().position(|&e| e == m).expect("meet stays below x∧z"));
                    }
                }
                compose.push(t);
            }
        }
    }
    let identity = (0..n).map(|x| members[x * n + x].iter().position(|&e| e == x).unwrap()).collect();
    validate_quantaloid(QuantaloidData { name: name.to_string(), objects, homs, compose, identity })
}

/// The free quantale on a finite monoid: subsets under complex product.
/// Subsets are named by their members joined with `+`; the empty set is `0`.
pub fn free_on_monoid(
    name: &str,
    elements: &[&str],
    mult: &[usize],
    unit: usize,
) -> Result<Quantaloid, QuantaloidError> {
    let m = elements.len();
    if m > 12 {
        return Err(QuantaloidError::InvalidMonoid("too many elements for a powerset carrier".into()));
    }
    if mult.len() != m * m || unit >= m || mult.iter().any(|&p| p >= m) {
        return Err(QuantaloidError::InvalidMonoid("table shape".into()));
    }
    for a in 0..m {
        if mult[unit * m + a] != a || mult[a * m + unit] != a {
            return Err(QuantaloidError::InvalidMonoid(format!("unit law fails at {}", elements[a])));
        }
        for b in 0..m {
            for c in 0..m {
                if mult[mult[a * m + b] * m + c] != mult[a * m + mult[b * m + c]] {
                    return Err(QuantaloidError::InvalidMonoid(format!(
                        "not associative at {},{},{}",
                        elements[a], elements[b], elements[c]
                    )));
                }
            }
        }
    }
    let size = 1usize << m;
    let names: Vec<String> = (0..size)
        .map(|s| {
            if s == 0 {
                "0".to_string()
            } else {
                (0..m).filter(|i| s & (1 << i) != 0).map(|i| elements[i]).collect::<Vec<_>>().join("+")
            }
        })
        .collect();
    let leq = (0..size * size).map(|i| (i / size) & !(i % size) == 0).collect();
    let lattice = FiniteSupLattice::new(FinitePreorder::new(names, leq).map_err(|e| QuantaloidError::InvalidMonoid(e.to_string()))?)
        .map_err(|e| QuantaloidError::InvalidMonoid(e.to_string()))?;
    let mut table = Vec::with_capacity(size * size);
    for g in 0..size {
        for f in 0..size {
            let mut out = 0usize;
            for a in (0..m).filter(|i| g & (1 << i) != 0) {
                for b in (0..m).filter(|i| f & (1 << i) != 0) {
                    out |= 1 << mult[a * m + b];
                }
            }
            table.push(out);
        }
    }
    quantale_table(name, lattice, table, 1 << unit)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q3() -> Quantaloid {
        let l = FiniteSupLattice::chain(&["0", "a", "1"]);
        let mult = (0..9).map(|i| (i / 3).min(i % 3)).collect();
        quantale_table("q3", l, mult, 2).unwrap()
    }

    fn qrel3() -> Quantaloid {
        locale("qrel3", &FiniteSupLattice::chain(&["0", "u", "1"])).unwrap()
    }

    #[test]
    fn boolean2_tables() {
        let q = Quantaloid::boolean2();
        let one = QArrow::new(0, 0, 1);
        let zero = QArrow::new(0, 0, 0);
        assert_eq!(q.compose(one, one).unwrap(), one);
        assert_eq!(q.compose(one, zero).unwrap(), zero);
        assert_eq!(q.compose(zero, one).unwrap(), zero);
        assert_eq!(q.compose(zero, zero).unwrap(), zero);
    }

    #[test]
    fn locale_hom_sizes() {
        let q = qrel3();
        let (u, one) = (q.object_index("u").unwrap(), q.object_index("1").unwrap());
        assert_eq!(q.hom(u, one).len(), 2);
        assert_eq!(q.hom(one, one).len(), 3);
        assert_eq!(q.hom(0, one).len(), 1);
        let uu = QArrow::new(u, u, q.hom(u, u).index_of("u").unwrap());
        let u1 = QArrow::new(u, one, q.hom(u, one).index_of("u").unwrap());
        assert_eq!(q.compose(u1, uu).unwrap(), u1);
    }

    #[test]
    fn broken_unit_and_associativity_detected() {
        let mut d = Quantaloid::boolean2().data();
        d.compose[0][3] = 0;
        assert_eq!(validate_quantaloid(d).unwrap_err().kind(), "UnitLawFails");

        let mut d = q3().data();
        d.compose[0][4] = 2;
        let kind = validate_quantaloid(d).unwrap_err().kind();
        assert!(kind == "NotAssociative" || kind == "NotJoinPreserving", "{kind}");
    }

    #[test]
    fn residual_examples() {
        let q2 = Quantaloid::boolean2();
        for g in 0..2 {
            let r = q2.residual(Residual::Lifting, QArrow::new(0, 0, 0), QArrow::new(0, 0, g)).unwrap();
            assert_eq!(r.value, 1);
        }
        let q = q3();
        let r = q.residual(Residual::Lifting, QArrow::new(0, 0, 1), QArrow::new(0, 0, 0)).unwrap();
        assert_eq!(r.value, 0);
        let r = q.residual(Residual::Extension, QArrow::new(0, 0, 1), QArrow::new(0, 0, 1)).unwrap();
        assert_eq!(r.value, 2);
        assert!(q.residual(Residual::Lifting, QArrow::new(0, 0, 1), QArrow::new(0, 0, 7)).is_err());
    }

    #[test]
    fn residual_type_mismatch() {
        let q = qrel3();
        let f = QArrow::new(1, 2, 0);
        let g = QArrow::new(2, 1, 0);
        assert!(matches!(q.residual(Residual::Lifting, f, g), Err(QuantaloidError::TypeMismatch(_))));
        assert!(matches!(q.compose(f, f), Err(QuantaloidError::TypeMismatch(_))));
    }

    #[test]
    fn opposite_is_an_involution() {
        let q = qrel3();
        let op = q.opposite();
        let (u, one) = (1, 2);
        assert_eq!(op.hom(one, u), q.hom(u, one));
        assert_eq!(op.opposite(), q);
        assert_eq!(Quantaloid::boolean2().opposite().data().compose, Quantaloid::boolean2().data().compose);
    }

    #[test]
    fn free_quantale_on_z2() {
        let q = free_on_monoid("pz2", &["e", "s"], &[0, 1, 1, 0], 0).unwrap();
        assert_eq!(q.hom(0, 0).len(), 4);
        let s = q.hom(0, 0).index_of("s").unwrap();
        let e = q.hom(0, 0).index_of("e").unwrap();
        assert_eq!(q.compose_raw(0, 0, 0, s, s), e);
        assert!(free_on_monoid("bad", &["e", "s"], &[0, 1, 1, 1], 1).is_err());
    }

    #[test]
    fn parse_arrow_syntax() {
        let q = qrel3();
        let a = q.parse_arrow("u->1:u").unwrap();
        assert_eq!(q.arrow_name(a), "u->1:u");
        assert!(q.parse_arrow("u->1:1").is_err());
        assert!(q.parse_arrow("u1u").is_err());
    }
}
