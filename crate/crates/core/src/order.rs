//! Finite T0 spaces presented as finite posets.
//!
//! Under the Alexandrov correspondence a finite T0 space is the same thing as
//! a finite poset: the open sets are the up-sets of the specialization order,
//! the closed sets are the down-sets, and continuous maps are exactly the
//! monotone maps. Every subset of a finite space is compact, so the up-sets
//! also serve as the compact saturated sets.

use std::collections::HashMap;
use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use thiserror::Error;

use crate::pointset::PointSet;

/// Default bound on the number of opens any enumeration may produce.
pub const DEFAULT_MAX_OPENS: usize = 1 << 20;

/// Default bound on the number of points of a product space.
pub const DEFAULT_MAX_POINTS: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    Reflexivity,
    Transitivity,
    Antisymmetry,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Reflexivity => "reflexivity",
            Axiom::Transitivity => "transitivity",
            Axiom::Antisymmetry => "antisymmetry",
        })
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum OrderError {
    #[error("not a poset: {axiom} fails at ({}, {})", .witness.0, .witness.1)]
    NotAPoset {
        axiom: Axiom,
        witness: (String, String),
    },
    #[error("size limit exceeded: more than {limit} {what}")]
    SizeLimit { what: &'static str, limit: usize },
    #[error("duplicate element label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown element label {0:?}")]
    UnknownLabel(String),
    #[error("element index {index} out of range for a space of {len} points")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("map is not monotone: {x} <= {y} but their images are not ordered")]
    NotMonotone { x: String, y: String },
    #[error("map graph has {got} entries, source has {expected} points")]
    GraphLength { expected: usize, got: usize },
    #[error("set is not upward closed: contains {0} but not everything above it")]
    NotAnUpSet(String),
    #[error("maps do not compose: codomain and domain differ")]
    Mismatch,
    #[error("not an ep-pair: {0}")]
    NotEpPair(String),
    #[error("internal invariant broken: {0}")]
    Internal(String),
}

/// A finite T0 space, stored as its specialization order.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteSpace {
    labels: Vec<String>,
    // up[x] = { y | x <= y }, down[x] = { y | y <= x }
    up: Vec<PointSet>,
    down: Vec<PointSet>,
}

impl fmt::Debug for FiniteSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let covers: Vec<_> = self
            .covers()
            .into_iter()
            .map(|(a, b)| format!("{}<{}", self.labels[a], self.labels[b]))
            .collect();
        f.debug_struct("FiniteSpace")
            .field("elements", &self.labels)
            .field("covers", &covers)
            .finish()
    }
}

fn check_labels(labels: &[String]) -> Result<HashMap<&str, usize>, OrderError> {
    let mut index = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.as_str(), i).is_some() {
            return Err(OrderError::DuplicateLabel(l.clone()));
        }
    }
    Ok(index)
}

impl FiniteSpace {
    /// Validates a full order relation given as `(x, y)` pairs meaning
    /// `x <= y`. Reflexive pairs must be present.
    pub fn new(labels: Vec<String>, relation: &[(usize, usize)]) -> Result<Self, OrderError> {
        check_labels(&labels)?;
        let n = labels.len();
        let mut le = vec![vec![false; n]; n];
        for &(a, b) in relation {
            for idx in [a, b] {
                if idx >= n {
                    return Err(OrderError::IndexOutOfRange { index: idx, len: n });
                }
            }
            le[a][b] = true;
        }
        let witness = |a: usize, b: usize| (labels[a].clone(), labels[b].clone());
        for x in 0..n {
            if !le[x][x] {
                return Err(OrderError::NotAPoset {
                    axiom: Axiom::Reflexivity,
                    witness: witness(x, x),
                });
            }
        }
        for x in 0..n {
            for y in 0..n {
                if !le[x][y] {
                    continue;
                }
                for z in 0..n {
                    if le[y][z] && !le[x][z] {
                        return Err(OrderError::NotAPoset {
                            axiom: Axiom::Transitivity,
                            witness: witness(x, z),
                        });
                    }
                }
            }
        }
        for x in 0..n {
            for y in x + 1..n {
                if le[x][y] && le[y][x] {
                    return Err(OrderError::NotAPoset {
                        axiom: Axiom::Antisymmetry,
                        witness: witness(x, y),
                    });
                }
            }
        }
        Ok(Self::from_matrix(labels, &le))
    }

    /// Builds a space from generating pairs `x < y`, taking the
    /// reflexive-transitive closure first. Cycles are reported as
    /// antisymmetry failures.
    pub fn from_covers(labels: Vec<String>, covers: &[(usize, usize)]) -> Result<Self, OrderError> {
        check_labels(&labels)?;
        let n = labels.len();
        let mut le = vec![vec![false; n]; n];
        for (x, row) in le.iter_mut().enumerate() {
            row[x] = true;
        }
        for &(a, b) in covers {
            for idx in [a, b] {
                if idx >= n {
                    return Err(OrderError::IndexOutOfRange { index: idx, len: n });
                }
            }
            le[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if le[i][k] {
                    for j in 0..n {
                        if le[k][j] {
                            le[i][j] = true;
                        }
                    }
                }
            }
        }
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| le[i][j])
            .collect();
        Self::new(labels, &pairs)
    }

    /// Label-based convenience wrapper around [`FiniteSpace::from_covers`].
    pub fn from_labeled_covers(labels: &[&str], covers: &[(&str, &str)]) -> Result<Self, OrderError> {
        let owned: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
        let index = check_labels(&owned)?;
        let mut pairs = Vec::with_capacity(covers.len());
        for (a, b) in covers {
            let ia = *index.get(a).ok_or_else(|| OrderError::UnknownLabel(a.to_string()))?;
            let ib = *index.get(b).ok_or_else(|| OrderError::UnknownLabel(b.to_string()))?;
            pairs.push((ia, ib));
        }
        Self::from_covers(owned, &pairs)
    }

    /// Builds a space from an order predicate that is already known to be a
    /// partial order.
    pub(crate) fn from_le_fn(labels: Vec<String>, le: impl Fn(usize, usize) -> bool) -> Self {
        let n = labels.len();
        let matrix: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| le(i, j)).collect()).collect();
        Self::from_matrix(labels, &matrix)
    }

    fn from_matrix(labels: Vec<String>, le: &[Vec<bool>]) -> Self {
        let n = labels.len();
        let up = (0..n)
            .map(|x| PointSet::from_indices(n, (0..n).filter(|&y| le[x][y])))
            .collect();
        let down = (0..n)
            .map(|x| PointSet::from_indices(n, (0..n).filter(|&y| le[y][x])))
            .collect();
        FiniteSpace { labels, up, down }
    }

    pub fn empty() -> Self {
        Self::from_matrix(Vec::new(), &[])
    }

    pub fn point() -> Self {
        Self::from_le_fn(vec!["*".into()], |_, _| true)
    }

    /// The Sierpiński space `{bot < top}`.
    pub fn sierpinski() -> Self {
        Self::chain(&["bot", "top"])
    }

    /// The diamond `bot < a, b < top`.
    pub fn diamond() -> Self {
        Self::from_labeled_covers(
            &["bot", "a", "b", "top"],
            &[("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")],
        )
        .expect("diamond is a poset")
    }

    pub fn chain(labels: &[&str]) -> Self {
        Self::from_le_fn(labels.iter().map(|s| s.to_string()).collect(), |i, j| i <= j)
    }

    pub fn antichain(labels: &[&str]) -> Self {
        Self::from_le_fn(labels.iter().map(|s| s.to_string()).collect(), |i, j| i == j)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn set_of(&self, labels: &[&str]) -> Result<PointSet, OrderError> {
        let mut s = PointSet::empty(self.len());
        for l in labels {
            let i = self
                .index_of(l)
                .ok_or_else(|| OrderError::UnknownLabel(l.to_string()))?;
            s.insert(i);
        }
        Ok(s)
    }

    pub fn set_labels(&self, s: &PointSet) -> Vec<&str> {
        s.iter().map(|x| self.label(x)).collect()
    }

    #[inline]
    pub fn le(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.le(x, y)
    }

    /// `↑x` as a set.
    pub fn up_of(&self, x: usize) -> &PointSet {
        &self.up[x]
    }

    /// `↓x` as a set.
    pub fn down_of(&self, x: usize) -> &PointSet {
        &self.down[x]
    }

    pub fn full_set(&self) -> PointSet {
        PointSet::full(self.len())
    }

    pub fn empty_set(&self) -> PointSet {
        PointSet::empty(self.len())
    }

    pub fn is_up_set(&self, s: &PointSet) -> bool {
        s.universe() == self.len() && s.iter().all(|x| self.up[x].is_subset(s))
    }

    pub fn is_down_set(&self, s: &PointSet) -> bool {
        s.universe() == self.len() && s.iter().all(|x| self.down[x].is_subset(s))
    }

    /// Validates `s` as an open (up-set) of this space.
    pub fn up_set(&self, s: PointSet) -> Result<UpSet, OrderError> {
        if s.universe() != self.len() {
            return Err(OrderError::Mismatch);
        }
        if let Some(x) = s.iter().find(|&x| !self.up[x].is_subset(&s)) {
            return Err(OrderError::NotAnUpSet(self.labels[x].clone()));
        }
        Ok(UpSet(s))
    }

    pub fn up_set_of(&self, labels: &[&str]) -> Result<UpSet, OrderError> {
        self.up_set(self.set_of(labels)?)
    }

    pub fn whole(&self) -> UpSet {
        UpSet(self.full_set())
    }

    pub fn nothing(&self) -> UpSet {
        UpSet(self.empty_set())
    }

    /// `↑x` as an open: the least open neighbourhood of `x`.
    pub fn neighbourhood(&self, x: usize) -> UpSet {
        UpSet(self.up[x].clone())
    }

    /// Smallest up-set containing `s`.
    pub fn upward_closure(&self, s: &PointSet) -> UpSet {
        let mut out = self.empty_set();
        for x in s.iter() {
            out.union_with(&self.up[x]);
        }
        UpSet(out)
    }

    /// Smallest down-set (closed set) containing `s`.
    pub fn downward_closure(&self, s: &PointSet) -> PointSet {
        let mut out = self.empty_set();
        for x in s.iter() {
            out.union_with(&self.down[x]);
        }
        out
    }

    /// Largest up-set contained in `s`.
    pub fn interior(&self, s: &PointSet) -> UpSet {
        UpSet(PointSet::from_indices(
            self.len(),
            s.iter().filter(|&x| self.up[x].is_subset(s)),
        ))
    }

    /// Topological closure, i.e. the down-closure.
    pub fn closure(&self, s: &PointSet) -> PointSet {
        self.downward_closure(s)
    }

    pub fn minimal_elements(&self, s: &PointSet) -> Vec<usize> {
        s.iter()
            .filter(|&x| !s.iter().any(|y| self.lt(y, x)))
            .collect()
    }

    pub fn maximal_elements(&self, s: &PointSet) -> Vec<usize> {
        s.iter()
            .filter(|&x| !s.iter().any(|y| self.lt(x, y)))
            .collect()
    }

    /// The least element of `s`, if it has one.
    pub fn least_in(&self, s: &PointSet) -> Option<usize> {
        s.iter().find(|&x| s.is_subset(&self.up[x]))
    }

    pub fn greatest_in(&self, s: &PointSet) -> Option<usize> {
        s.iter().find(|&x| s.is_subset(&self.down[x]))
    }

    pub fn bottom(&self) -> Option<usize> {
        self.least_in(&self.full_set())
    }

    pub fn top(&self) -> Option<usize> {
        self.greatest_in(&self.full_set())
    }

    /// Cover pairs `(x, y)`: `x < y` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for x in 0..n {
            for y in self.up[x].iter() {
                if x != y && !(0..n).any(|z| z != x && z != y && self.lt(x, z) && self.lt(z, y)) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Elements sorted so that every element comes after everything below
    /// it; ties keep insertion order.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&x| (self.down[x].len(), x));
        order
    }

    /// All opens, each once, sorted by cardinality then by member list.
    pub fn opens(&self) -> Result<Vec<UpSet>, OrderError> {
        self.opens_bounded(DEFAULT_MAX_OPENS)
    }

    pub fn opens_bounded(&self, limit: usize) -> Result<Vec<UpSet>, OrderError> {
        let mut rev = self.linear_extension();
        rev.reverse();
        let mut out = Vec::new();
        let mut current = self.empty_set();
        self.collect_up_sets(&rev, 0, &mut current, &mut out, limit)?;
        out.sort_by(|a, b| a.0.canonical_cmp(&b.0));
        Ok(out)
    }

    // Elements are decided from the top of the order downwards; an element
    // may be included only once everything above it is, so every branch ends
    // in a distinct up-set.
    fn collect_up_sets(
        &self,
        rev: &[usize],
        k: usize,
        current: &mut PointSet,
        out: &mut Vec<UpSet>,
        limit: usize,
    ) -> Result<(), OrderError> {
        if k == rev.len() {
            if out.len() >= limit {
                return Err(OrderError::SizeLimit {
                    what: "opens",
                    limit,
                });
            }
            out.push(UpSet(current.clone()));
            return Ok(());
        }
        let x = rev[k];
        self.collect_up_sets(rev, k + 1, current, out, limit)?;
        let mut above = self.up[x].clone();
        above.remove(x);
        if above.is_subset(current) {
            current.insert(x);
            self.collect_up_sets(rev, k + 1, current, out, limit)?;
            current.remove(x);
        }
        Ok(())
    }

    /// Up-sets contained in `bound`, in canonical order.
    pub fn opens_within(&self, bound: &UpSet, limit: usize) -> Result<Vec<UpSet>, OrderError> {
        let sub: Vec<usize> = {
            let mut v: Vec<usize> = self.linear_extension().into_iter().filter(|&x| bound.contains(x)).collect();
            v.reverse();
            v
        };
        let mut out = Vec::new();
        let mut current = self.empty_set();
        self.collect_up_sets(&sub, 0, &mut current, &mut out, limit)?;
        out.sort_by(|a, b| a.0.canonical_cmp(&b.0));
        Ok(out)
    }

    /// Recomputes the specialization order from a family of opens:
    /// `x <= y` iff every open containing `x` contains `y`.
    pub fn specialization_from_opens(&self, opens: &[UpSet]) -> Vec<Vec<bool>> {
        let n = self.len();
        (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| opens.iter().all(|u| !u.contains(x) || u.contains(y)))
                    .collect()
            })
            .collect()
    }

    /// Every irreducible closed set paired with its generic point.
    ///
    /// Irreducibility is decided from the definition (a nonempty closed set
    /// that is not a union of two proper closed subsets), independently of
    /// the point search.
    pub fn sobriety_witness(&self) -> Result<Vec<(PointSet, usize)>, OrderError> {
        let opens = self.opens()?;
        let closed: Vec<PointSet> = opens.iter().map(|u| u.complement()).collect();
        let mut out = Vec::new();
        for c in &closed {
            if c.is_empty() {
                continue;
            }
            let proper: Vec<&PointSet> = closed.iter().filter(|d| d.is_subset(c) && *d != c).collect();
            let reducible = proper
                .iter()
                .enumerate()
                .any(|(i, a)| proper[i..].iter().any(|b| &a.union(b) == c));
            if reducible {
                continue;
            }
            let generic = c
                .iter()
                .find(|&x| &self.down[x] == c)
                .ok_or_else(|| OrderError::Internal(format!("irreducible closed set {c:?} has no generic point")))?;
            out.push((c.clone(), generic));
        }
        Ok(out)
    }

    /// `X_⊥`: a fresh least point appended as the last element.
    pub fn lift(&self) -> FiniteSpace {
        let mut bottom = String::from("⊥");
        while self.labels.contains(&bottom) {
            bottom.push('\'');
        }
        let n = self.len();
        let mut labels = self.labels.clone();
        labels.push(bottom);
        Self::from_le_fn(labels, |x, y| x == n || (y != n && self.le(x, y)))
    }

    pub fn is_pointed(&self) -> bool {
        self.bottom().is_some()
    }
}

/// `X_⊥` together with the inclusion `X → X_⊥`.
pub fn lift_with_inclusion(space: &Arc<FiniteSpace>) -> (Arc<FiniteSpace>, MonotoneMap) {
    let lifted = Arc::new(space.lift());
    let incl = MonotoneMap::new_unchecked(space.clone(), lifted.clone(), (0..space.len()).collect());
    (lifted, incl)
}

/// Finite product with componentwise order. Points are tuples in row-major
/// order (last coordinate fastest); the empty product is a one-point space.
pub fn product_space(
    factors: &[Arc<FiniteSpace>],
    max_points: usize,
) -> Result<(Arc<FiniteSpace>, Vec<MonotoneMap>), OrderError> {
    let mut size: usize = 1;
    for f in factors {
        size = size
            .checked_mul(f.len())
            .filter(|&s| s <= max_points)
            .ok_or(OrderError::SizeLimit {
                what: "product points",
                limit: max_points,
            })?;
    }
    let tuples: Vec<Vec<usize>> = (0..size)
        .map(|mut idx| {
            let mut t = vec![0; factors.len()];
            for k in (0..factors.len()).rev() {
                t[k] = idx % factors[k].len();
                idx /= factors[k].len();
            }
            t
        })
        .collect();
    let labels = tuples
        .iter()
        .map(|t| {
            let parts: Vec<&str> = t.iter().zip(factors).map(|(&c, f)| f.label(c)).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    let space = Arc::new(FiniteSpace::from_le_fn(labels, |a, b| {
        tuples[a]
            .iter()
            .zip(&tuples[b])
            .zip(factors)
            .all(|((&x, &y), f)| f.le(x, y))
    }));
    let projections = factors
        .iter()
        .enumerate()
        .map(|(k, f)| {
            MonotoneMap::new_unchecked(space.clone(), f.clone(), tuples.iter().map(|t| t[k]).collect())
        })
        .collect();
    Ok((space, projections))
}

/// The subspace on `subset` (restricted order, labels kept) and its
/// inclusion map.
pub fn subspace(space: &Arc<FiniteSpace>, subset: &PointSet) -> (Arc<FiniteSpace>, MonotoneMap) {
    let members = subset.to_vec();
    let labels = members.iter().map(|&x| space.labels[x].clone()).collect();
    let sub = Arc::new(FiniteSpace::from_le_fn(labels, |a, b| space.le(members[a], members[b])));
    let incl = MonotoneMap::new_unchecked(sub.clone(), space.clone(), members);
    (sub, incl)
}

/// An up-set of some finite space; equivalently an open, a saturated set, or
/// a compact saturated set.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UpSet(PointSet);

impl UpSet {
    pub(crate) fn assume(s: PointSet) -> Self {
        UpSet(s)
    }

    pub fn as_set(&self) -> &PointSet {
        &self.0
    }

    pub fn into_set(self) -> PointSet {
        self.0
    }

    pub fn union(&self, other: &UpSet) -> UpSet {
        UpSet(self.0.union(&other.0))
    }

    pub fn intersection(&self, other: &UpSet) -> UpSet {
        UpSet(self.0.intersection(&other.0))
    }
}

impl Deref for UpSet {
    type Target = PointSet;
    fn deref(&self) -> &PointSet {
        &self.0
    }
}

impl fmt::Debug for UpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Up{:?}", self.0)
    }
}

/// A monotone (equivalently, continuous) map between finite spaces.
#[derive(Clone)]
pub struct MonotoneMap {
    source: Arc<FiniteSpace>,
    target: Arc<FiniteSpace>,
    graph: Vec<usize>,
}

impl fmt::Debug for MonotoneMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self
            .graph
            .iter()
            .enumerate()
            .map(|(x, &y)| format!("{}->{}", self.source.label(x), self.target.label(y)))
            .collect();
        f.debug_tuple("MonotoneMap").field(&pairs).finish()
    }
}

impl PartialEq for MonotoneMap {
    fn eq(&self, other: &Self) -> bool {
        self.graph == other.graph && *self.source == *other.source && *self.target == *other.target
    }
}

impl Eq for MonotoneMap {}

impl MonotoneMap {
    pub fn new(source: Arc<FiniteSpace>, target: Arc<FiniteSpace>, graph: Vec<usize>) -> Result<Self, OrderError> {
        if graph.len() != source.len() {
            return Err(OrderError::GraphLength {
                expected: source.len(),
                got: graph.len(),
            });
        }
        if let Some(&y) = graph.iter().find(|&&y| y >= target.len()) {
            return Err(OrderError::IndexOutOfRange {
                index: y,
                len: target.len(),
            });
        }
        for x in 0..source.len() {
            for y in source.up_of(x).iter() {
                if !target.le(graph[x], graph[y]) {
                    return Err(OrderError::NotMonotone {
                        x: source.label(x).to_string(),
                        y: source.label(y).to_string(),
                    });
                }
            }
        }
        Ok(MonotoneMap { source, target, graph })
    }

    pub(crate) fn new_unchecked(source: Arc<FiniteSpace>, target: Arc<FiniteSpace>, graph: Vec<usize>) -> Self {
        debug_assert!(Self::new(source.clone(), target.clone(), graph.clone()).is_ok());
        MonotoneMap { source, target, graph }
    }

    /// Builds a map from label pairs.
    pub fn from_labels(
        source: Arc<FiniteSpace>,
        target: Arc<FiniteSpace>,
        pairs: &[(&str, &str)],
    ) -> Result<Self, OrderError> {
        let mut graph = vec![usize::MAX; source.len()];
        for (a, b) in pairs {
            let x = source.index_of(a).ok_or_else(|| OrderError::UnknownLabel(a.to_string()))?;
            let y = target.index_of(b).ok_or_else(|| OrderError::UnknownLabel(b.to_string()))?;
            graph[x] = y;
        }
        if let Some(x) = graph.iter().position(|&y| y == usize::MAX) {
            return Err(OrderError::UnknownLabel(format!("no image given for {}", source.label(x))));
        }
        Self::new(source, target, graph)
    }

    pub fn identity(space: Arc<FiniteSpace>) -> Self {
        let graph = (0..space.len()).collect();
        MonotoneMap {
            source: space.clone(),
            target: space,
            graph,
        }
    }

    pub fn constant(source: Arc<FiniteSpace>, target: Arc<FiniteSpace>, value: usize) -> Self {
        let graph = vec![value; source.len()];
        MonotoneMap { source, target, graph }
    }

    pub fn source(&self) -> &Arc<FiniteSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteSpace> {
        &self.target
    }

    pub fn graph(&self) -> &[usize] {
        &self.graph
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.graph[x]
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &MonotoneMap) -> Result<MonotoneMap, OrderError> {
        if *inner.target != *self.source {
            return Err(OrderError::Mismatch);
        }
        Ok(MonotoneMap {
            source: inner.source.clone(),
            target: self.target.clone(),
            graph: inner.graph.iter().map(|&x| self.graph[x]).collect(),
        })
    }

    pub fn preimage(&self, s: &PointSet) -> PointSet {
        PointSet::from_indices(self.source.len(), (0..self.source.len()).filter(|&x| s.contains(self.graph[x])))
    }

    /// Preimage of an open; open again by monotonicity.
    pub fn preimage_open(&self, u: &UpSet) -> UpSet {
        UpSet(self.preimage(u))
    }

    pub fn image(&self, s: &PointSet) -> PointSet {
        PointSet::from_indices(self.target.len(), s.iter().map(|x| self.graph[x]))
    }

    /// `↑f[s]`.
    pub fn up_image(&self, s: &PointSet) -> UpSet {
        self.target.upward_closure(&self.image(s))
    }

    pub fn is_identity(&self) -> bool {
        *self.source == *self.target && self.graph.iter().enumerate().all(|(x, &y)| x == y)
    }

    pub fn is_surjective(&self) -> bool {
        self.image(&self.source.full_set()).is_full()
    }

    /// Pointwise order `self <= other`.
    pub fn le_pointwise(&self, other: &MonotoneMap) -> bool {
        self.graph
            .iter()
            .zip(&other.graph)
            .all(|(&a, &b)| self.target.le(a, b))
    }
}

/// An embedding-projection pair `X ⇄ Y`: `p ∘ e = id_X`, `e ∘ p <= id_Y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpPair {
    projection: MonotoneMap,
    embedding: MonotoneMap,
}

impl EpPair {
    pub fn new(projection: MonotoneMap, embedding: MonotoneMap) -> Result<Self, OrderError> {
        if *projection.source != *embedding.target || *projection.target != *embedding.source {
            return Err(OrderError::Mismatch);
        }
        let pe = projection.compose(&embedding)?;
        if let Some(x) = (0..pe.source.len()).find(|&x| pe.apply(x) != x) {
            return Err(OrderError::NotEpPair(format!(
                "p(e({})) = {}",
                pe.source.label(x),
                pe.target.label(pe.apply(x))
            )));
        }
        let ep = embedding.compose(&projection)?;
        if let Some(y) = (0..ep.source.len()).find(|&y| !ep.target.le(ep.apply(y), y)) {
            return Err(OrderError::NotEpPair(format!(
                "e(p({})) = {} is not below it",
                ep.source.label(y),
                ep.target.label(ep.apply(y))
            )));
        }
        Ok(EpPair { projection, embedding })
    }

    pub fn projection(&self) -> &MonotoneMap {
        &self.projection
    }

    pub fn embedding(&self) -> &MonotoneMap {
        &self.embedding
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_opens(space: &FiniteSpace) -> Vec<PointSet> {
        let n = space.len();
        (0u32..1 << n)
            .map(|bits| PointSet::from_indices(n, (0..n).filter(|&i| bits >> i & 1 == 1)))
            .filter(|s| s.iter().all(|x| (0..n).all(|y| !space.le(x, y) || s.contains(y))))
            .collect()
    }

    #[test]
    fn sierpinski_is_a_two_chain() {
        let s = FiniteSpace::from_labeled_covers(&["a", "b"], &[("a", "b")]).unwrap();
        assert!(s.le(0, 1) && !s.le(1, 0));
        assert_eq!(s.opens().unwrap().len(), 3);
    }

    #[test]
    fn symmetric_pair_is_rejected() {
        let err = FiniteSpace::new(vec!["a".into(), "b".into()], &[(0, 0), (1, 1), (0, 1), (1, 0)]).unwrap_err();
        assert_eq!(
            err,
            OrderError::NotAPoset {
                axiom: Axiom::Antisymmetry,
                witness: ("a".into(), "b".into())
            }
        );
    }

    #[test]
    fn missing_reflexive_and_transitive_pairs() {
        let labels = || vec!["a".to_string(), "b".to_string(), "c".to_string()];
        let err = FiniteSpace::new(labels(), &[(0, 0), (1, 1)]).unwrap_err();
        assert!(matches!(err, OrderError::NotAPoset { axiom: Axiom::Reflexivity, .. }));
        let err = FiniteSpace::new(labels(), &[(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)]).unwrap_err();
        assert_eq!(
            err,
            OrderError::NotAPoset {
                axiom: Axiom::Transitivity,
                witness: ("a".into(), "c".into())
            }
        );
    }

    #[test]
    fn open_counts() {
        assert_eq!(FiniteSpace::sierpinski().opens().unwrap().len(), 3);
        assert_eq!(FiniteSpace::diamond().opens().unwrap().len(), 6);
        assert_eq!(FiniteSpace::antichain(&["x", "y", "z"]).opens().unwrap().len(), 8);
        assert_eq!(FiniteSpace::empty().opens().unwrap().len(), 1);
    }

    #[test]
    fn opens_agree_with_subset_filter() {
        let d = FiniteSpace::diamond();
        let mut brute = brute_opens(&d);
        brute.sort_by(|a, b| a.canonical_cmp(b));
        let opens: Vec<PointSet> = d.opens().unwrap().into_iter().map(UpSet::into_set).collect();
        assert_eq!(opens, brute);
    }

    #[test]
    fn open_enumeration_respects_limit() {
        let wide = FiniteSpace::antichain(&["a", "b", "c", "d", "e"]);
        assert!(matches!(wide.opens_bounded(31), Err(OrderError::SizeLimit { .. })));
        assert_eq!(wide.opens_bounded(32).unwrap().len(), 32);
    }

    #[test]
    fn closures_in_the_diamond() {
        let d = FiniteSpace::diamond();
        let a = d.set_of(&["a"]).unwrap();
        assert_eq!(d.upward_closure(&a).as_set(), &d.set_of(&["a", "top"]).unwrap());
        assert_eq!(d.closure(&a), d.set_of(&["bot", "a"]).unwrap());
        assert!(d.interior(&a).is_empty());
        let u = d.set_of(&["a", "top"]).unwrap();
        assert_eq!(d.upward_closure(&u).as_set(), &u);
        assert_eq!(d.interior(&u).as_set(), &u);
    }

    #[test]
    fn sobriety_witnesses() {
        let s = FiniteSpace::sierpinski();
        let w = s.sobriety_witness().unwrap();
        assert_eq!(w.len(), 2);
        for (c, x) in &w {
            assert_eq!(s.down_of(*x), c);
        }
        assert_eq!(FiniteSpace::diamond().sobriety_witness().unwrap().len(), 4);
        assert_eq!(FiniteSpace::point().sobriety_witness().unwrap().len(), 1);
    }

    #[test]
    fn lifting() {
        let lifted = FiniteSpace::empty().lift();
        assert_eq!(lifted.len(), 1);
        let three = FiniteSpace::sierpinski().lift();
        assert_eq!(three.opens().unwrap().len(), 4);
        assert_eq!(three.bottom(), Some(2));
        assert_eq!(FiniteSpace::diamond().lift().opens().unwrap().len(), 7);
        // fresh label even if "⊥" is taken
        let taken = FiniteSpace::chain(&["⊥"]).lift();
        assert_eq!(taken.label(1), "⊥'");
    }

    #[test]
    fn products() {
        let s = Arc::new(FiniteSpace::sierpinski());
        let (sq, proj) = product_space(&[s.clone(), s.clone()], DEFAULT_MAX_POINTS).unwrap();
        assert_eq!(sq.len(), 4);
        assert_eq!(sq.opens().unwrap().len(), 6);
        assert_eq!(proj.len(), 2);
        let (unit, _) = product_space(&[s.clone(), Arc::new(FiniteSpace::point())], DEFAULT_MAX_POINTS).unwrap();
        assert_eq!(unit.len(), 2);
        assert!(unit.le(0, 1) && !unit.le(1, 0));
        let (empty_prod, p) = product_space(&[], DEFAULT_MAX_POINTS).unwrap();
        assert_eq!(empty_prod.len(), 1);
        assert!(p.is_empty());
        assert!(product_space(&[s.clone(), s.clone(), s], 7).is_err());
    }

    #[test]
    fn subspace_of_an_up_set() {
        let d = Arc::new(FiniteSpace::diamond());
        let (sub, incl) = subspace(&d, &d.set_of(&["a", "top"]).unwrap());
        assert_eq!(sub.labels(), &["a".to_string(), "top".to_string()]);
        assert!(sub.le(0, 1));
        assert_eq!(incl.graph(), &[1, 3]);
        let (same, id) = subspace(&d, &d.full_set());
        assert_eq!(*same, *d);
        assert_eq!(id.graph(), &[0, 1, 2, 3]);
    }

    #[test]
    fn non_monotone_map_is_rejected() {
        let s = Arc::new(FiniteSpace::sierpinski());
        let err = MonotoneMap::new(s.clone(), s.clone(), vec![1, 0]).unwrap_err();
        assert!(matches!(err, OrderError::NotMonotone { .. }));
    }

    #[test]
    fn ep_pair_laws() {
        let d = Arc::new(FiniteSpace::diamond());
        let s = Arc::new(FiniteSpace::sierpinski());
        let p = MonotoneMap::new(d.clone(), s.clone(), vec![0, 0, 0, 1]).unwrap();
        let e = MonotoneMap::new(s.clone(), d.clone(), vec![0, 3]).unwrap();
        assert!(EpPair::new(p.clone(), e).is_ok());
        let bad = MonotoneMap::new(s.clone(), d.clone(), vec![1, 3]).unwrap();
        assert!(matches!(EpPair::new(p, bad), Err(OrderError::NotEpPair(_))));
    }
}
