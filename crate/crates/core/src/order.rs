//! Finite preorders, finite sup-lattices, monotone maps and order adjunctions.
//!
//! Elements are addressed by their index in the carrier; names are kept only
//! for error messages and rendering. Equivalent elements (`a <= b` and
//! `b <= a`) are kept distinct, so non-skeletal orders are first-class.

use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("relation is not reflexive at `{0}`")]
    MissingReflexivity(String),
    #[error("relation is not transitive: {0} <= {1} and {1} <= {2} but not {0} <= {2}")]
    BrokenTransitivity(String, String, String),
    #[error("`{0}` and `{1}` are distinct but mutually below each other")]
    NotAntisymmetric(String, String),
    #[error("`{0}` and `{1}` have no least upper bound")]
    NoJoin(String, String),
    #[error("order has no bottom element")]
    NoBottom,
    #[error("a sup-lattice needs at least one element")]
    Empty,
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("relation table has {found} entries, expected {expected}")]
    RelationSize { expected: usize, found: usize },
    #[error("map table has {found} entries, expected {expected}")]
    TableSize { expected: usize, found: usize },
    #[error("map sends `{0}` outside its target")]
    OutOfRange(String),
    #[error("map is not monotone: {0} <= {1} but their images are not ordered")]
    NotMonotone(String, String),
    #[error("join of {{{}}} is not preserved", .0.join(", "))]
    NotSupPreserving(Vec<String>),
    #[error("not an adjunction: {0}")]
    NotAdjoint(String),
    #[error("maps do not fit together: {0}")]
    OrderMismatch(String),
}

impl OrderError {
    pub fn kind(&self) -> &'static str {
        match self {
            OrderError::MissingReflexivity(..) => "MissingReflexivity",
            OrderError::BrokenTransitivity(..) => "BrokenTransitivity",
            OrderError::NotAntisymmetric(..) => "NotAntisymmetric",
            OrderError::NoJoin(..) => "NoJoin",
            OrderError::NoBottom => "NoBottom",
            OrderError::Empty => "Empty",
            OrderError::DuplicateElement(..) => "DuplicateElement",
            OrderError::UnknownElement(..) => "UnknownElement",
            OrderError::RelationSize { .. } => "RelationSize",
            OrderError::TableSize { .. } => "TableSize",
            OrderError::OutOfRange(..) => "OutOfRange",
            OrderError::NotMonotone(..) => "NotMonotone",
            OrderError::NotSupPreserving(..) => "NotSupPreserving",
            OrderError::NotAdjoint(..) => "NotAdjoint",
            OrderError::OrderMismatch(..) => "OrderMismatch",
        }
    }
}

/// A reflexive, transitive relation on a finite set of named elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinitePreorder {
    names: Vec<String>,
    leq: Vec<bool>,
}

impl FinitePreorder {
    /// Validates a full relation matrix (`leq[a * n + b]` means `a <= b`).
    pub fn new(names: Vec<String>, leq: Vec<bool>) -> Result<Self, OrderError> {
        let n = names.len();
        if leq.len() != n * n {
            return Err(OrderError::RelationSize { expected: n * n, found: leq.len() });
        }
        check_unique(&names)?;
        for a in 0..n {
            if !leq[a * n + a] {
                return Err(OrderError::MissingReflexivity(names[a].clone()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                if !leq[a * n + b] {
                    continue;
                }
                for c in 0..n {
                    if leq[b * n + c] && !leq[a * n + c] {
                        return Err(OrderError::BrokenTransitivity(
                            names[a].clone(),
                            names[b].clone(),
                            names[c].clone(),
                        ));
                    }
                }
            }
        }
        Ok(FinitePreorder { names, leq })
    }

    /// Validates a raw relation given as the list of its pairs; no closure is taken.
    pub fn from_pairs(names: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self, OrderError> {
        let n = names.len();
        let mut leq = vec![false; n * n];
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(OrderError::UnknownElement(format!("#{}", a.max(b))));
            }
            leq[a * n + b] = true;
        }
        Self::new(names, leq)
    }

    /// The reflexive-transitive closure of the given pairs.
    pub fn generated(names: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self, OrderError> {
        let n = names.len();
        let mut leq = vec![false; n * n];
        for a in 0..n {
            leq[a * n + a] = true;
        }
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(OrderError::UnknownElement(format!("#{}", a.max(b))));
            }
            leq[a * n + b] = true;
        }
        for k in 0..n {
            for a in 0..n {
                if leq[a * n + k] {
                    for b in 0..n {
                        if leq[k * n + b] {
                            leq[a * n + b] = true;
                        }
                    }
                }
            }
        }
        Self::new(names, leq)
    }

    /// The chain `names[0] < names[1] < ...`.
    pub fn chain<S: AsRef<str>>(names: &[S]) -> Self {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let n = names.len();
        let leq = (0..n * n).map(|i| i / n <= i % n).collect();
        Self::new(names, leq).expect("chains are orders")
    }

    /// Elements ordered by identity only.
    pub fn discrete<S: AsRef<str>>(names: &[S]) -> Self {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let n = names.len();
        let leq = (0..n * n).map(|i| i / n == i % n).collect();
        Self::new(names, leq).expect("discrete orders are orders")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.len() + b]
    }

    pub fn equivalent(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) && self.leq(b, a)
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.first_equivalent_pair().is_none()
    }

    pub fn first_equivalent_pair(&self) -> Option<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .find(|&(a, b)| self.equivalent(a, b))
    }

    pub fn upper_bounds(&self, subset: &[usize]) -> Vec<usize> {
        (0..self.len()).filter(|&u| subset.iter().all(|&s| self.leq(s, u))).collect()
    }

    pub fn lower_bounds(&self, subset: &[usize]) -> Vec<usize> {
        (0..self.len()).filter(|&l| subset.iter().all(|&s| self.leq(l, s))).collect()
    }

    /// Elements of `subset` lying above every element of `subset`.
    pub fn greatest_of(&self, subset: &[usize]) -> Vec<usize> {
        subset.iter().copied().filter(|&g| subset.iter().all(|&s| self.leq(s, g))).collect()
    }

    /// Elements of `subset` lying below every element of `subset`.
    pub fn least_of(&self, subset: &[usize]) -> Vec<usize> {
        subset.iter().copied().filter(|&l| subset.iter().all(|&s| self.leq(l, s))).collect()
    }

    /// All least upper bounds of `subset`: empty, or one equivalence class.
    pub fn least_upper_bounds(&self, subset: &[usize]) -> Vec<usize> {
        self.least_of(&self.upper_bounds(subset))
    }

    pub fn greatest_lower_bounds(&self, subset: &[usize]) -> Vec<usize> {
        self.greatest_of(&self.lower_bounds(subset))
    }

    pub fn bottoms(&self) -> Vec<usize> {
        self.least_upper_bounds(&[])
    }

    pub fn tops(&self) -> Vec<usize> {
        self.greatest_lower_bounds(&[])
    }

    /// Nonempty with a bottom and all binary joins, hence all joins.
    pub fn is_complete(&self) -> bool {
        self.first_missing_join().is_none()
    }

    /// The first subset (empty or a pair) without a least upper bound.
    pub fn first_missing_join(&self) -> Option<Vec<usize>> {
        if self.bottoms().is_empty() {
            return Some(Vec::new());
        }
        let n = self.len();
        for a in 0..n {
            for b in a + 1..n {
                if self.least_upper_bounds(&[a, b]).is_empty() {
                    return Some(vec![a, b]);
                }
            }
        }
        None
    }

    /// A generating set of strict pairs whose closure is the whole relation.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a == b || !self.leq(a, b) {
                    continue;
                }
                if self.equivalent(a, b) {
                    out.push((a, b));
                    continue;
                }
                let skipped = (0..n).any(|c| {
                    self.leq(a, c)
                        && self.leq(c, b)
                        && !self.equivalent(a, c)
                        && !self.equivalent(c, b)
                });
                if !skipped {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// The induced order on the listed elements, in the listed order.
    pub fn restrict(&self, members: &[usize]) -> FinitePreorder {
        let names = members.iter().map(|&m| self.names[m].clone()).collect();
        let leq = members
            .iter()
            .flat_map(|&a| members.iter().map(move |&b| (a, b)))
            .map(|(a, b)| self.leq(a, b))
            .collect();
        FinitePreorder { names, leq }
    }

    pub fn opposite(&self) -> FinitePreorder {
        let n = self.len();
        let leq = (0..n * n).map(|i| self.leq(i % n, i / n)).collect();
        FinitePreorder { names: self.names.clone(), leq }
    }
}

fn check_unique(names: &[String]) -> Result<(), OrderError> {
    for (i, a) in names.iter().enumerate() {
        if names[..i].contains(a) {
            return Err(OrderError::DuplicateElement(a.clone()));
        }
    }
    Ok(())
}

/// A finite antisymmetric order with all joins (and hence all meets).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteSupLattice {
    order: Arc<FinitePreorder>,
    join: Vec<usize>,
    meet: Vec<usize>,
    bottom: usize,
    top: usize,
}

impl FiniteSupLattice {
    pub fn new(order: FinitePreorder) -> Result<Self, OrderError> {
        Self::from_arc(Arc::new(order))
    }

    pub fn from_arc(order: Arc<FinitePreorder>) -> Result<Self, OrderError> {
        let n = order.len();
        if n == 0 {
            return Err(OrderError::Empty);
        }
        if let Some((a, b)) = order.first_equivalent_pair() {
            return Err(OrderError::NotAntisymmetric(
                order.name(a).to_string(),
                order.name(b).to_string(),
            ));
        }
        let mut join = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                match order.least_upper_bounds(&[a, b]).first() {
                    Some(&j) => join[a * n + b] = j,
                    None => {
                        let (x, y) = (a.min(b), a.max(b));
                        return Err(OrderError::NoJoin(
                            order.name(x).to_string(),
                            order.name(y).to_string(),
                        ));
                    }
                }
            }
        }
        let bottom = *order.bottoms().first().ok_or(OrderError::NoBottom)?;
        let top = (0..n).fold(bottom, |acc, a| join[acc * n + a]);
        let mut meet = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let lower = order.lower_bounds(&[a, b]);
                meet[a * n + b] = lower.iter().fold(bottom, |acc, &l| join[acc * n + l]);
            }
        }
        Ok(FiniteSupLattice { order, join, meet, bottom, top })
    }

    pub fn chain<S: AsRef<str>>(names: &[S]) -> Self {
        Self::new(FinitePreorder::chain(names)).expect("nonempty chains are lattices")
    }

    pub fn order(&self) -> &FinitePreorder {
        &self.order
    }

    pub fn order_arc(&self) -> &Arc<FinitePreorder> {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn name(&self, a: usize) -> &str {
        self.order.name(a)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.order.index_of(name)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.order.leq(a, b)
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn join_all<I: IntoIterator<Item = usize>>(&self, items: I) -> usize {
        items.into_iter().fold(self.bottom, |acc, a| self.join(acc, a))
    }

    pub fn meet_all<I: IntoIterator<Item = usize>>(&self, items: I) -> usize {
        items.into_iter().fold(self.top, |acc, a| self.meet(acc, a))
    }

    /// Join and meet of a subset; `(bottom, top)` for the empty subset.
    pub fn bounds(&self, subset: &[usize]) -> (usize, usize) {
        (self.join_all(subset.iter().copied()), self.meet_all(subset.iter().copied()))
    }
}

/// Output of [`validate_order`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidatedOrder {
    Preorder(FinitePreorder),
    SupLattice(FiniteSupLattice),
}

/// Checks raw order data (the literal relation, no closure taken), naming the
/// first violated axiom.
pub fn validate_order(
    names: Vec<String>,
    pairs: &[(usize, usize)],
    require_suplattice: bool,
) -> Result<ValidatedOrder, OrderError> {
    let order = FinitePreorder::from_pairs(names, pairs)?;
    if require_suplattice {
        FiniteSupLattice::new(order).map(ValidatedOrder::SupLattice)
    } else {
        Ok(ValidatedOrder::Preorder(order))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonotoneMap {
    source: Arc<FinitePreorder>,
    target: Arc<FinitePreorder>,
    table: Vec<usize>,
}

impl MonotoneMap {
    pub fn new(
        source: Arc<FinitePreorder>,
        target: Arc<FinitePreorder>,
        table: Vec<usize>,
    ) -> Result<Self, OrderError> {
        if table.len() != source.len() {
            return Err(OrderError::TableSize { expected: source.len(), found: table.len() });
        }
        for (a, &t) in table.iter().enumerate() {
            if t >= target.len() {
                return Err(OrderError::OutOfRange(source.name(a).to_string()));
            }
        }
        for a in 0..source.len() {
            for b in 0..source.len() {
                if source.leq(a, b) && !target.leq(table[a], table[b]) {
                    return Err(OrderError::NotMonotone(
                        source.name(a).to_string(),
                        source.name(b).to_string(),
                    ));
                }
            }
        }
        Ok(MonotoneMap { source, target, table })
    }

    pub fn identity(order: Arc<FinitePreorder>) -> Self {
        let table = (0..order.len()).collect();
        MonotoneMap { source: order.clone(), target: order, table }
    }

    pub fn constant(source: Arc<FinitePreorder>, target: Arc<FinitePreorder>, value: usize) -> Self {
        assert!(value < target.len() || source.is_empty());
        let table = vec![value; source.len()];
        MonotoneMap { source, target, table }
    }

    pub fn apply(&self, a: usize) -> usize {
        self.table[a]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn source(&self) -> &Arc<FinitePreorder> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinitePreorder> {
        &self.target
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &MonotoneMap) -> Result<MonotoneMap, OrderError> {
        if first.target != self.source {
            return Err(OrderError::OrderMismatch("composite of non-matching maps".into()));
        }
        Ok(MonotoneMap {
            source: first.source.clone(),
            target: self.target.clone(),
            table: first.table.iter().map(|&a| self.table[a]).collect(),
        })
    }

    /// Pointwise `self <= other` in the target order.
    pub fn leq_pointwise(&self, other: &MonotoneMap) -> bool {
        self.table.len() == other.table.len()
            && self.table.iter().zip(&other.table).all(|(&a, &b)| self.target.leq(a, b))
    }

    /// Pointwise mutual `<=`: equal up to isomorphism in the target.
    pub fn equivalent_pointwise(&self, other: &MonotoneMap) -> bool {
        self.leq_pointwise(other) && other.leq_pointwise(self)
    }

    /// The first subset (empty or a pair) whose existing join is not sent to a join.
    pub fn sup_failure(&self) -> Option<Vec<usize>> {
        let (s, t) = (&self.source, &self.target);
        if let Some(&b) = s.bottoms().first() {
            if !t.bottoms().contains(&self.table[b]) {
                return Some(Vec::new());
            }
        }
        for a in 0..s.len() {
            for b in a + 1..s.len() {
                if let Some(&j) = s.least_upper_bounds(&[a, b]).first() {
                    let images = [self.table[a], self.table[b]];
                    if !t.least_upper_bounds(&images).contains(&self.table[j]) {
                        return Some(vec![a, b]);
                    }
                }
            }
        }
        None
    }

    /// The right adjoint in the preorder sense: `b ↦` a greatest element of
    /// `{a : f(a) <= b}` (lowest index among equivalent choices). On failure,
    /// returns the `b` for which that set has no greatest element.
    pub fn upper_adjoint(&self) -> Result<MonotoneMap, usize> {
        let mut table = Vec::with_capacity(self.target.len());
        for b in 0..self.target.len() {
            let below: Vec<usize> =
                (0..self.source.len()).filter(|&a| self.target.leq(self.table[a], b)).collect();
            match self.source.greatest_of(&below).first() {
                Some(&g) => table.push(g),
                None => return Err(b),
            }
        }
        MonotoneMap::new(self.target.clone(), self.source.clone(), table).map_err(|_| 0)
    }

    pub fn names(&self) -> Vec<(String, String)> {
        self.table
            .iter()
            .enumerate()
            .map(|(a, &b)| (self.source.name(a).to_string(), self.target.name(b).to_string()))
            .collect()
    }
}

/// Result of [`is_sup_morphism`]: the flag and, on failure, the violating subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupCheck {
    pub holds: bool,
    pub witness: Option<Vec<usize>>,
}

/// Whether `map` preserves the empty join and all binary joins, which for
/// finite lattices is preservation of all joins.
pub fn is_sup_morphism(map: &MonotoneMap) -> SupCheck {
    match map.sup_failure() {
        None => SupCheck { holds: true, witness: None },
        Some(w) => SupCheck { holds: false, witness: Some(w) },
    }
}

/// An adjunction `left ⊣ right` between preorders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderAdjunction {
    left: MonotoneMap,
    right: MonotoneMap,
}

impl OrderAdjunction {
    pub fn new(left: MonotoneMap, right: MonotoneMap) -> Result<Self, OrderError> {
        if left.source != right.target || left.target != right.source {
            return Err(OrderError::OrderMismatch("adjoint maps run between different orders".into()));
        }
        let (s, t) = (&left.source, &left.target);
        for a in 0..s.len() {
            if !s.leq(a, right.apply(left.apply(a))) {
                return Err(OrderError::NotAdjoint(format!("unit fails at `{}`", s.name(a))));
            }
        }
        for b in 0..t.len() {
            if !t.leq(left.apply(right.apply(b)), b) {
                return Err(OrderError::NotAdjoint(format!("counit fails at `{}`", t.name(b))));
            }
        }
        Ok(OrderAdjunction { left, right })
    }

    pub fn left(&self) -> &MonotoneMap {
        &self.left
    }

    pub fn right(&self) -> &MonotoneMap {
        &self.right
    }
}

/// The right adjoint of a map out of a sup-lattice, `b ↦ ⋁{a : f(a) <= b}`,
/// verified before it is returned.
pub fn right_adjoint(map: &MonotoneMap, source: &FiniteSupLattice) -> Result<OrderAdjunction, OrderError> {
    if map.source() != source.order_arc() {
        return Err(OrderError::OrderMismatch("map does not start at the given lattice".into()));
    }
    let target = map.target();
    let candidate: Vec<usize> = (0..target.len())
        .map(|b| source.join_all((0..source.len()).filter(|&a| target.leq(map.apply(a), b))))
        .collect();
    let galois = (0..source.len()).all(|a| {
        (0..target.len()).all(|b| target.leq(map.apply(a), b) == source.leq(a, candidate[b]))
    });
    if !galois {
        let witness = map.sup_failure().unwrap_or_default();
        return Err(OrderError::NotSupPreserving(
            witness.iter().map(|&a| source.name(a).to_string()).collect(),
        ));
    }
    let right = MonotoneMap::new(target.clone(), source.order_arc().clone(), candidate)?;
    OrderAdjunction::new(map.clone(), right)
}
