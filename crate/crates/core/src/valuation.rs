//! Valuations on finite spaces and the set-function calculus around them.
//!
//! A [`Valuation`] is stored in simple form, as one weight per point; its
//! value on an open is the sum of the weights inside. A [`SetFunction`] is a
//! raw table over all up-sets of a space with no axioms presumed. Because
//! every up-set of a finite space is both open and compact saturated, the same
//! table type carries maps on opens and maps on compact saturated sets.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use thiserror::Error;

use crate::order::{subspace, FiniteSpace, MonotoneMap, OrderError, UpSet, DEFAULT_MAX_OPENS};
use crate::pointset::PointSet;
use crate::value::{way_below, ExtNonneg};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValuationAxiom {
    Strictness,
    Monotonicity,
    Modularity,
}

impl fmt::Display for ValuationAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ValuationAxiom::Strictness => "strictness",
            ValuationAxiom::Monotonicity => "monotonicity",
            ValuationAxiom::Modularity => "modularity",
        })
    }
}

/// Labels of the points of a set, for error witnesses.
pub type Witness = Vec<String>;

fn witness(space: &FiniteSpace, s: &PointSet) -> Witness {
    s.iter().map(|x| space.label(x).to_string()).collect()
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ValuationError {
    #[error("{axiom} fails at {witness:?}")]
    AxiomViolation { axiom: ValuationAxiom, witness: Vec<Witness> },
    #[error("not a simple valuation: {0}")]
    NotSimple(String),
    #[error("weight of {0} is ∞ - ∞ and cannot be recovered")]
    Indeterminate(String),
    #[error("not supported: opens {u:?} and {v:?} have the same trace but different values")]
    NotSupported { u: Witness, v: Witness },
    #[error("table is not total on the opens: missing {0:?}")]
    NotTotal(Witness),
    #[error("table key {0:?} is not an open")]
    NotOpen(Witness),
    #[error("expected {expected} weights, got {got}")]
    WeightCount { expected: usize, got: usize },
    #[error("valuation lives on a different space than the map source")]
    SpaceMismatch,
    #[error(transparent)]
    Order(#[from] OrderError),
}

/// A valuation in simple form `Σ w(x)·δ_x`.
#[derive(Clone, PartialEq, Eq)]
pub struct Valuation {
    space: Arc<FiniteSpace>,
    weights: Vec<ExtNonneg>,
}

impl fmt::Debug for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (x, w) in self.weights.iter().enumerate() {
            if !w.is_zero() {
                m.entry(&self.space.label(x), w);
            }
        }
        m.finish()
    }
}

impl Valuation {
    pub fn new(space: Arc<FiniteSpace>, weights: Vec<ExtNonneg>) -> Result<Self, ValuationError> {
        if weights.len() != space.len() {
            return Err(ValuationError::WeightCount {
                expected: space.len(),
                got: weights.len(),
            });
        }
        Ok(Valuation { space, weights })
    }

    pub fn zero(space: Arc<FiniteSpace>) -> Self {
        let weights = vec![ExtNonneg::zero(); space.len()];
        Valuation { space, weights }
    }

    pub fn point_mass(space: Arc<FiniteSpace>, x: usize, mass: ExtNonneg) -> Self {
        let mut v = Self::zero(space);
        v.weights[x] = mass;
        v
    }

    /// Weights given by label; unnamed points get zero.
    pub fn from_labels(space: Arc<FiniteSpace>, weights: &[(&str, ExtNonneg)]) -> Result<Self, ValuationError> {
        let mut v = Self::zero(space);
        for (l, w) in weights {
            let x = v
                .space
                .index_of(l)
                .ok_or_else(|| OrderError::UnknownLabel(l.to_string()))?;
            v.weights[x] = w.clone();
        }
        Ok(v)
    }

    pub fn space(&self) -> &Arc<FiniteSpace> {
        &self.space
    }

    pub fn weights(&self) -> &[ExtNonneg] {
        &self.weights
    }

    pub fn weight(&self, x: usize) -> &ExtNonneg {
        &self.weights[x]
    }

    pub fn eval(&self, s: &PointSet) -> ExtNonneg {
        s.iter().map(|x| &self.weights[x]).sum()
    }

    pub fn total(&self) -> ExtNonneg {
        self.weights.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.weights.iter().all(ExtNonneg::is_zero)
    }

    pub fn has_infinite_weight(&self) -> bool {
        self.weights.iter().any(ExtNonneg::is_infinite)
    }

    pub fn support_points(&self) -> PointSet {
        PointSet::from_indices(self.space.len(), (0..self.space.len()).filter(|&x| !self.weights[x].is_zero()))
    }

    /// The full table on opens.
    pub fn tabulate(&self) -> Result<SetFunction, OrderError> {
        self.tabulate_bounded(DEFAULT_MAX_OPENS)
    }

    pub fn tabulate_bounded(&self, limit: usize) -> Result<SetFunction, OrderError> {
        let values = self
            .space
            .opens_bounded(limit)?
            .into_iter()
            .map(|u| {
                let v = self.eval(&u);
                (u, v)
            })
            .collect();
        Ok(SetFunction {
            space: self.space.clone(),
            values,
        })
    }

    /// `f[ν]`: `V ↦ ν(f⁻¹(V))`, computed by pushing weights forward.
    pub fn image(&self, f: &MonotoneMap) -> Result<Valuation, ValuationError> {
        if **f.source() != *self.space {
            return Err(ValuationError::SpaceMismatch);
        }
        let mut weights = vec![ExtNonneg::zero(); f.target().len()];
        for (x, w) in self.weights.iter().enumerate() {
            let y = f.apply(x);
            weights[y] = &weights[y] + w;
        }
        Ok(Valuation {
            space: f.target().clone(),
            weights,
        })
    }

    /// `U ↦ ν(U ∩ V)`.
    pub fn restrict_to_open(&self, v: &UpSet) -> Valuation {
        let weights = self
            .weights
            .iter()
            .enumerate()
            .map(|(x, w)| if v.contains(x) { w.clone() } else { ExtNonneg::zero() })
            .collect();
        Valuation {
            space: self.space.clone(),
            weights,
        }
    }

    /// Decides whether `a` supports this valuation and, if so, returns the
    /// unique valuation `μ` on the subspace `a` with `μ(U ∩ a) = ν(U)`.
    ///
    /// The defining condition is scanned over all pairs of opens with equal
    /// trace on `a`. When the open lattice exceeds `max_opens` and every
    /// weight is finite, the equivalent weight criterion (no mass outside
    /// `a`) is used instead.
    pub fn support_check(&self, a: &PointSet, max_opens: usize) -> Result<Support, ValuationError> {
        let (sub, inclusion) = subspace(&self.space, a);
        match self.space.opens_bounded(max_opens) {
            Ok(opens) => {
                let mut first_by_trace: HashMap<PointSet, (usize, ExtNonneg)> = HashMap::new();
                for (k, u) in opens.iter().enumerate() {
                    let value = self.eval(u);
                    let trace = u.as_set().intersection(a);
                    match first_by_trace.get(&trace) {
                        Some((j, v0)) if *v0 != value => {
                            return Err(ValuationError::NotSupported {
                                u: witness(&self.space, &opens[*j]),
                                v: witness(&self.space, u),
                            })
                        }
                        Some(_) => {}
                        None => {
                            first_by_trace.insert(trace, (k, value));
                        }
                    }
                }
                // μ(W) = ν(↑W), since ↑W ∩ a = W for every open W of the subspace.
                let values = sub
                    .opens_bounded(max_opens)?
                    .into_iter()
                    .map(|w| {
                        let up = self.space.upward_closure(&inclusion.image(&w));
                        (w, self.eval(&up))
                    })
                    .collect();
                let table = SetFunction {
                    space: sub.clone(),
                    values,
                };
                let restricted = check_valuation(&table)?;
                Ok(Support {
                    subspace: sub,
                    inclusion,
                    restricted,
                })
            }
            Err(OrderError::SizeLimit { .. }) if !self.has_infinite_weight() => {
                if let Some(x) = (0..self.space.len()).find(|&x| !a.contains(x) && !self.weights[x].is_zero()) {
                    let up = self.space.up_of(x);
                    let mut rest = up.clone();
                    rest.remove(x);
                    return Err(ValuationError::NotSupported {
                        u: witness(&self.space, &rest),
                        v: witness(&self.space, up),
                    });
                }
                let weights = a.iter().map(|x| self.weights[x].clone()).collect();
                Ok(Support {
                    subspace: sub.clone(),
                    inclusion,
                    restricted: Valuation { space: sub, weights },
                })
            }
            Err(e) => Err(e.into()),
        }
    }

    /// Local finiteness and its equivalent reformulations.
    pub fn local_finiteness(&self) -> Result<LocalFiniteness, OrderError> {
        let tab = self.tabulate()?;
        let mut report = tab.local_finiteness();
        // ↑x is the least neighbourhood of x, so the pointwise test only needs it.
        let first_bad = (0..self.space.len()).find(|&x| self.eval(self.space.up_of(x)).is_infinite());
        report.via_minimal_neighbourhoods = first_bad.is_none();
        if report.failing_point.is_none() {
            report.failing_point = first_bad.map(|x| self.space.label(x).to_string());
        }
        Ok(report)
    }
}

/// The first open (in canonical order) on which two valuations over the same
/// space differ, or `None` if they agree everywhere.
///
/// Falls back to comparing weights when the open lattice exceeds `max_opens`
/// and both valuations are finite; equal finite weights and equal tables are
/// then equivalent, and a differing weight at `x` shows up on `↑x` or on
/// `↑x \ {x}`.
pub fn first_difference(a: &Valuation, b: &Valuation, max_opens: usize) -> Result<Option<UpSet>, OrderError> {
    assert!(*a.space == *b.space, "valuations over different spaces");
    // equal weights give equal tables; only a difference needs a witness
    if a.weights == b.weights {
        return Ok(None);
    }
    match a.space.opens_bounded(max_opens) {
        Ok(opens) => Ok(opens.into_iter().find(|u| a.eval(u) != b.eval(u))),
        Err(OrderError::SizeLimit { .. }) if !a.has_infinite_weight() && !b.has_infinite_weight() => {
            let space = &a.space;
            Ok((0..space.len()).find(|&x| a.weights[x] != b.weights[x]).map(|x| {
                let up = space.neighbourhood(x);
                let mut rest = up.clone().into_set();
                rest.remove(x);
                if a.eval(&up) != b.eval(&up) {
                    up
                } else {
                    UpSet::assume(rest)
                }
            }))
        }
        Err(e) => Err(e),
    }
}

/// Result of a successful [`Valuation::support_check`].
#[derive(Debug, Clone)]
pub struct Support {
    pub subspace: Arc<FiniteSpace>,
    pub inclusion: MonotoneMap,
    pub restricted: Valuation,
}

/// A table of extended values over every up-set of a space.
#[derive(Clone, PartialEq, Eq)]
pub struct SetFunction {
    space: Arc<FiniteSpace>,
    values: BTreeMap<UpSet, ExtNonneg>,
}

impl fmt::Debug for SetFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (u, v) in &self.values {
            m.entry(&self.space.set_labels(u), v);
        }
        m.finish()
    }
}

impl SetFunction {
    /// Validates that `values` is keyed by exactly the opens of `space`.
    pub fn new(space: Arc<FiniteSpace>, values: BTreeMap<PointSet, ExtNonneg>) -> Result<Self, ValuationError> {
        let opens = space.opens()?;
        let mut table = BTreeMap::new();
        for (k, v) in values {
            let u = space
                .up_set(k.clone())
                .map_err(|_| ValuationError::NotOpen(witness(&space, &k)))?;
            table.insert(u, v);
        }
        if let Some(missing) = opens.iter().find(|u| !table.contains_key(*u)) {
            return Err(ValuationError::NotTotal(witness(&space, missing)));
        }
        Ok(SetFunction { space, values: table })
    }

    pub fn from_fn(space: Arc<FiniteSpace>, mut f: impl FnMut(&UpSet) -> ExtNonneg) -> Result<Self, OrderError> {
        let values = space
            .opens()?
            .into_iter()
            .map(|u| {
                let v = f(&u);
                (u, v)
            })
            .collect();
        Ok(SetFunction { space, values })
    }

    pub fn space(&self) -> &Arc<FiniteSpace> {
        &self.space
    }

    pub fn get(&self, u: &UpSet) -> &ExtNonneg {
        &self.values[u]
    }

    pub fn get_set(&self, s: &PointSet) -> Option<&ExtNonneg> {
        self.values.get(&UpSet::assume(s.clone()))
    }

    /// Entries in canonical order of the keys.
    pub fn iter(&self) -> impl Iterator<Item = (&UpSet, &ExtNonneg)> {
        self.values.iter()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Pointwise `self <= other`.
    pub fn le(&self, other: &SetFunction) -> bool {
        self.values.iter().all(|(u, v)| other.values.get(u).is_some_and(|w| v <= w))
    }

    /// The four equivalent forms of local finiteness, each decided on the
    /// table by its own definition.
    pub fn local_finiteness(&self) -> LocalFiniteness {
        let n = self.space.len();
        let finite: Vec<&UpSet> = self.values.iter().filter(|(_, v)| v.is_finite()).map(|(u, _)| u).collect();
        // 1: every point has some open neighbourhood of finite measure.
        let failing = (0..n).find(|&x| !finite.iter().any(|u| u.contains(x)));
        let pointwise = failing.is_none();
        // 2: the finite-measure opens cover the space.
        let mut cover = PointSet::empty(n);
        for u in &finite {
            cover.union_with(u);
        }
        let covered = cover.is_full();
        // 3: every open is the union of the finite-measure opens inside it.
        let union_inside = |u: &UpSet| {
            let mut acc = PointSet::empty(n);
            for v in finite.iter().filter(|v| v.is_subset(u)) {
                acc.union_with(v);
            }
            acc == *u.as_set()
        };
        let every_union = self.values.keys().all(union_inside);
        // 4: additionally the family inside each open is directed.
        let closed_under_union = finite.iter().enumerate().all(|(i, a)| {
            finite[i..]
                .iter()
                .all(|b| self.values.get(&a.union(b)).is_some_and(ExtNonneg::is_finite))
        });
        let directed = every_union && closed_under_union;
        LocalFiniteness {
            locally_finite: pointwise,
            covered_by_finite_opens: covered,
            every_open_a_union: every_union,
            every_open_a_directed_union: directed,
            via_minimal_neighbourhoods: pointwise,
            failing_point: failing.map(|x| self.space.label(x).to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalFiniteness {
    pub locally_finite: bool,
    pub covered_by_finite_opens: bool,
    pub every_open_a_union: bool,
    pub every_open_a_directed_union: bool,
    pub via_minimal_neighbourhoods: bool,
    pub failing_point: Option<String>,
}

impl LocalFiniteness {
    /// Whether all formulations agree.
    pub fn consistent(&self) -> bool {
        let v = self.locally_finite;
        self.covered_by_finite_opens == v
            && self.every_open_a_union == v
            && self.every_open_a_directed_union == v
            && self.via_minimal_neighbourhoods == v
    }
}

// Common-denominator integer form of an all-finite table, when it fits.
fn scaled_integers(values: &[&ExtNonneg]) -> Option<Vec<i128>> {
    let mut lcm = BigInt::one();
    for v in values {
        lcm = lcm.lcm(v.as_rational()?.denom());
    }
    values
        .iter()
        .map(|v| {
            let r = v.as_rational()?;
            let n = r.numer() * (&lcm / r.denom());
            n.to_i64().map(i128::from)
        })
        .collect()
}

/// Verifies strictness, monotonicity and modularity of a table on opens and
/// returns the valuation in simple form.
pub fn check_valuation(t: &SetFunction) -> Result<Valuation, ValuationError> {
    let space = &t.space;
    let opens: Vec<&UpSet> = t.values.keys().collect();
    let values: Vec<&ExtNonneg> = t.values.values().collect();
    let index: HashMap<&PointSet, usize> = opens.iter().enumerate().map(|(i, u)| (u.as_set(), i)).collect();
    let w = |s: &PointSet| witness(space, s);

    let empty = space.empty_set();
    if !t.get_set(&empty).is_some_and(ExtNonneg::is_zero) {
        return Err(ValuationError::AxiomViolation {
            axiom: ValuationAxiom::Strictness,
            witness: vec![vec![]],
        });
    }

    // U ⊆ V is a chain of one-point extensions inside the up-set lattice.
    for (i, u) in opens.iter().enumerate() {
        for x in 0..space.len() {
            if u.contains(x) {
                continue;
            }
            let mut bigger = (*u).as_set().clone();
            bigger.insert(x);
            if let Some(&j) = index.get(&bigger) {
                if values[i] > values[j] {
                    return Err(ValuationError::AxiomViolation {
                        axiom: ValuationAxiom::Monotonicity,
                        witness: vec![w(u), w(&bigger)],
                    });
                }
            }
        }
    }

    let modular_violation = |i: usize, j: usize| ValuationError::AxiomViolation {
        axiom: ValuationAxiom::Modularity,
        witness: vec![w(opens[i]), w(opens[j])],
    };
    let pair_index = |i: usize, j: usize| -> (usize, usize) {
        let cup = opens[i].union(opens[j]);
        let cap = opens[i].intersection(opens[j]);
        (index[cup.as_set()], index[cap.as_set()])
    };
    if let Some(ints) = scaled_integers(&values) {
        for i in 0..opens.len() {
            for j in i + 1..opens.len() {
                let (a, b) = pair_index(i, j);
                if ints[a] + ints[b] != ints[i] + ints[j] {
                    return Err(modular_violation(i, j));
                }
            }
        }
    } else {
        for i in 0..opens.len() {
            for j in i + 1..opens.len() {
                let (a, b) = pair_index(i, j);
                if values[a] + values[b] != values[i] + values[j] {
                    return Err(modular_violation(i, j));
                }
            }
        }
    }

    let weights = decompose_simple(t)?;
    Ok(Valuation {
        space: space.clone(),
        weights,
    })
}

/// Möbius inversion on the up-set lattice: `w(x) = t(↑x) - t(↑x \ {x})`.
///
/// The result is checked against every entry of the table; any mismatch or
/// negative weight is reported as [`ValuationError::NotSimple`].
pub fn decompose_simple(t: &SetFunction) -> Result<Vec<ExtNonneg>, ValuationError> {
    let space = &t.space;
    let lookup = |s: &PointSet| {
        t.get_set(s)
            .ok_or_else(|| ValuationError::NotTotal(witness(space, s)))
    };
    let mut weights = Vec::with_capacity(space.len());
    for x in 0..space.len() {
        let up = space.up_of(x);
        let mut rest = up.clone();
        rest.remove(x);
        let (hi, lo) = (lookup(up)?, lookup(&rest)?);
        let wx = match hi.checked_sub(lo) {
            Some(wx) => wx,
            None if hi.is_infinite() => return Err(ValuationError::Indeterminate(space.label(x).to_string())),
            None => {
                return Err(ValuationError::NotSimple(format!(
                    "negative weight {} - {} at {}",
                    hi,
                    lo,
                    space.label(x)
                )))
            }
        };
        weights.push(wx);
    }
    for (u, v) in &t.values {
        let sum: ExtNonneg = u.iter().map(|x| &weights[x]).sum();
        if sum != *v {
            return Err(ValuationError::NotSimple(format!(
                "weights sum to {} on {:?}, table says {}",
                sum,
                space.set_labels(u),
                v
            )));
        }
    }
    Ok(weights)
}

/// `ν•(Q) = inf { ν(U) | U open, Q ⊆ U }`.
pub fn nu_bullet(t: &SetFunction) -> SetFunction {
    let values = t
        .values
        .keys()
        .map(|q| {
            let inf = t
                .values
                .iter()
                .filter(|(u, _)| q.is_subset(u))
                .map(|(_, v)| v)
                .min()
                .cloned()
                .expect("the whole space is a neighbourhood");
            (q.clone(), inf)
        })
        .collect();
    SetFunction {
        space: t.space.clone(),
        values,
    }
}

/// `μ∘(U) = sup { μ(Q) | Q compact saturated, Q ⊆ U }`.
pub fn mu_circ(mu: &SetFunction) -> SetFunction {
    let values = mu
        .values
        .keys()
        .map(|u| {
            let sup = mu
                .values
                .iter()
                .filter(|(q, _)| q.is_subset(u))
                .map(|(_, v)| v)
                .max()
                .cloned()
                .expect("the empty set lies inside every open");
            (u.clone(), sup)
        })
        .collect();
    SetFunction {
        space: mu.space.clone(),
        values,
    }
}

/// A threshold `r` in a tightness query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Threshold {
    /// The single value `r`; satisfied by `Q` when `r <= ν•(Q)`.
    Value(ExtNonneg),
    /// Every `r` strictly below `s`. On a finite lattice this holds for some
    /// `Q` iff `s <= ν•(Q)`.
    Below(ExtNonneg),
}

impl Threshold {
    pub fn bound(&self) -> &ExtNonneg {
        match self {
            Threshold::Value(r) | Threshold::Below(r) => r,
        }
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Value(r) => write!(f, "{r}"),
            Threshold::Below(s) => write!(f, "<{s}"),
        }
    }
}

/// Thresholds probed for a target value `s`: `0`, every attained value
/// below `s`, and the supremum probe just under `s`. Together they decide
/// `∀ r ≪ s` on a finite table.
pub fn thresholds_for<'a>(target: &ExtNonneg, attained: impl IntoIterator<Item = &'a ExtNonneg>) -> Vec<Threshold> {
    let mut vals: Vec<ExtNonneg> = attained
        .into_iter()
        .filter(|v| !v.is_zero() && way_below(v, target))
        .cloned()
        .collect();
    vals.sort();
    vals.dedup();
    let mut out = vec![Threshold::Value(ExtNonneg::zero())];
    out.extend(vals.into_iter().map(Threshold::Value));
    if !target.is_zero() {
        out.push(Threshold::Below(target.clone()));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TightnessWitness {
    pub open: UpSet,
    pub threshold: Threshold,
    pub compact: UpSet,
}

#[derive(Debug, Clone)]
pub struct TightnessReport {
    pub tight: bool,
    pub witnesses: Vec<TightnessWitness>,
    /// First open and threshold with no witness, if any.
    pub failure: Option<(UpSet, Threshold)>,
}

/// Decides tightness of a table on opens, producing for each open `U` and
/// each probed `r ≪ ν(U)` the least (by cardinality, then canonically)
/// compact saturated `Q ⊆ U` with `r <= ν•(Q)`.
pub fn is_tight(t: &SetFunction) -> TightnessReport {
    let bullet = nu_bullet(t);
    let attained: Vec<&ExtNonneg> = t.values.values().collect();
    let mut witnesses = Vec::new();
    for (u, target) in &t.values {
        // candidates in canonical order with running maxima
        let inside: Vec<(&UpSet, &ExtNonneg)> = bullet.values.iter().filter(|(q, _)| q.is_subset(u)).collect();
        let mut running: Vec<&ExtNonneg> = Vec::with_capacity(inside.len());
        for (_, v) in &inside {
            let m = match running.last() {
                Some(&prev) if prev >= *v => prev,
                _ => *v,
            };
            running.push(m);
        }
        for th in thresholds_for(target, attained.iter().copied()) {
            let r = th.bound();
            let k = running.partition_point(|m| *m < r);
            if k == inside.len() {
                return TightnessReport {
                    tight: false,
                    witnesses,
                    failure: Some((u.clone(), th)),
                };
            }
            witnesses.push(TightnessWitness {
                open: u.clone(),
                threshold: th,
                compact: inside[k].0.clone(),
            });
        }
    }
    TightnessReport {
        tight: true,
        witnesses,
        failure: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> ExtNonneg {
        s.parse().unwrap()
    }

    fn diamond() -> Arc<FiniteSpace> {
        Arc::new(FiniteSpace::diamond())
    }

    fn half_a_half_b() -> Valuation {
        Valuation::from_labels(diamond(), &[("a", v("1/2")), ("b", v("1/2"))]).unwrap()
    }

    fn table(space: &Arc<FiniteSpace>, entries: &[(&[&str], &str)]) -> SetFunction {
        let map = entries
            .iter()
            .map(|(ls, val)| (space.set_of(ls).unwrap(), v(val)))
            .collect();
        SetFunction::new(space.clone(), map).unwrap()
    }

    #[test]
    fn point_mass_table_is_a_valuation() {
        let d = diamond();
        let a = d.index_of("a").unwrap();
        let t = SetFunction::from_fn(d.clone(), |u| if u.contains(a) { v("1") } else { v("0") }).unwrap();
        let nu = check_valuation(&t).unwrap();
        assert_eq!(nu, Valuation::point_mass(d, a, v("1")));
    }

    #[test]
    fn non_modular_table() {
        let d = diamond();
        let t = table(
            &d,
            &[
                (&[], "0"),
                (&["top"], "0"),
                (&["a", "top"], "1"),
                (&["b", "top"], "1"),
                (&["a", "b", "top"], "1"),
                (&["bot", "a", "b", "top"], "1"),
            ],
        );
        // oracle: first pair in canonical order with ν(U∪V)+ν(U∩V) ≠ ν(U)+ν(V)
        let entries: Vec<_> = t.iter().collect();
        let mut expected = None;
        'scan: for i in 0..entries.len() {
            for j in i + 1..entries.len() {
                let (u, a) = entries[i];
                let (w, b) = entries[j];
                let cup = t.get(&u.union(w));
                let cap = t.get(&u.intersection(w));
                if cup + cap != a + b {
                    expected = Some(vec![d.set_labels(u).iter().map(|s| s.to_string()).collect::<Vec<_>>(), d.set_labels(w).iter().map(|s| s.to_string()).collect()]);
                    break 'scan;
                }
            }
        }
        let expected = expected.expect("table is not modular");
        assert_eq!(expected, vec![vec!["a".to_string(), "top".into()], vec!["b".to_string(), "top".into()]]);
        match check_valuation(&t) {
            Err(ValuationError::AxiomViolation { axiom, witness }) => {
                assert_eq!(axiom, ValuationAxiom::Modularity);
                assert_eq!(witness, expected);
            }
            other => panic!("expected modularity violation, got {other:?}"),
        }
    }

    #[test]
    fn strictness_and_monotonicity_violations() {
        let s = Arc::new(FiniteSpace::sierpinski());
        let t = table(&s, &[(&[], "1"), (&["top"], "1"), (&["bot", "top"], "1")]);
        assert!(matches!(
            check_valuation(&t),
            Err(ValuationError::AxiomViolation { axiom: ValuationAxiom::Strictness, .. })
        ));
        let t = table(&s, &[(&[], "0"), (&["top"], "2"), (&["bot", "top"], "1")]);
        assert!(matches!(
            check_valuation(&t),
            Err(ValuationError::AxiomViolation { axiom: ValuationAxiom::Monotonicity, .. })
        ));
    }

    #[test]
    fn zero_table_is_zero_valuation() {
        let d = diamond();
        let t = SetFunction::from_fn(d.clone(), |_| v("0")).unwrap();
        assert!(check_valuation(&t).unwrap().is_zero());
    }

    #[test]
    fn partial_table_is_rejected() {
        let s = Arc::new(FiniteSpace::sierpinski());
        let map = [(s.set_of(&[]).unwrap(), v("0"))].into_iter().collect();
        assert!(matches!(SetFunction::new(s, map), Err(ValuationError::NotTotal(_))));
    }

    #[test]
    fn decompose_round_trips() {
        let nu = half_a_half_b();
        assert_eq!(decompose_simple(&nu.tabulate().unwrap()).unwrap(), nu.weights());
        let s = Arc::new(FiniteSpace::sierpinski());
        let delta_bot = Valuation::point_mass(s.clone(), 0, v("1"));
        assert_eq!(decompose_simple(&delta_bot.tabulate().unwrap()).unwrap(), vec![v("1"), v("0")]);
    }

    #[test]
    fn decompose_reports_infinite_minus_infinite() {
        let s = Arc::new(FiniteSpace::sierpinski());
        let nu = Valuation::new(s, vec![v("inf"), v("inf")]).unwrap();
        assert_eq!(
            decompose_simple(&nu.tabulate().unwrap()),
            Err(ValuationError::Indeterminate("bot".into()))
        );
        // ∞ above a finite remainder is fine
        let s = Arc::new(FiniteSpace::sierpinski());
        let nu = Valuation::new(s, vec![v("inf"), v("1")]).unwrap();
        assert_eq!(decompose_simple(&nu.tabulate().unwrap()).unwrap(), nu.weights());
    }

    #[test]
    fn image_along_collapse_to_sierpinski() {
        let d = diamond();
        let s = Arc::new(FiniteSpace::sierpinski());
        let f = MonotoneMap::from_labels(
            d.clone(),
            s.clone(),
            &[("bot", "bot"), ("b", "bot"), ("a", "top"), ("top", "top")],
        )
        .unwrap();
        let nu = half_a_half_b();
        let img = nu.image(&f).unwrap();
        assert_eq!(img.weights(), &[v("1/2"), v("1/2")]);
        for u in s.opens().unwrap() {
            assert_eq!(img.eval(&u), nu.eval(&f.preimage(&u)));
        }
        assert_eq!(nu.image(&MonotoneMap::identity(d.clone())).unwrap(), nu);
        let pt = Arc::new(FiniteSpace::point());
        let c = MonotoneMap::constant(d, pt, 0);
        assert_eq!(nu.image(&c).unwrap().total(), v("1"));
    }

    #[test]
    fn restriction() {
        let d = diamond();
        let nu = half_a_half_b();
        assert_eq!(nu.restrict_to_open(&d.whole()), nu);
        assert!(nu.restrict_to_open(&d.nothing()).is_zero());
        let v_open = d.up_set_of(&["a", "top"]).unwrap();
        let r = nu.restrict_to_open(&v_open);
        for u in d.opens().unwrap() {
            assert_eq!(r.eval(&u), nu.eval(&u.intersection(&v_open)));
        }
        assert_eq!(r.weights()[1], v("1/2"));
        assert!(r.weights()[2].is_zero());
    }

    #[test]
    fn supports() {
        let d = diamond();
        let nu = half_a_half_b();
        let full = nu.support_check(&d.full_set(), DEFAULT_MAX_OPENS).unwrap();
        assert_eq!(full.restricted.weights(), nu.weights());

        let delta_a = Valuation::from_labels(d.clone(), &[("a", v("1"))]).unwrap();
        let only_a = d.set_of(&["a"]).unwrap();
        let sup = delta_a.support_check(&only_a, DEFAULT_MAX_OPENS).unwrap();
        assert_eq!(sup.subspace.len(), 1);
        assert_eq!(sup.restricted.weights(), &[v("1")]);
        assert_eq!(sup.restricted.image(&sup.inclusion).unwrap(), delta_a);

        match nu.support_check(&only_a, DEFAULT_MAX_OPENS) {
            Err(ValuationError::NotSupported { u, v: w }) => {
                let us = d.set_of(&u.iter().map(String::as_str).collect::<Vec<_>>()).unwrap();
                let ws = d.set_of(&w.iter().map(String::as_str).collect::<Vec<_>>()).unwrap();
                assert_eq!(us.intersection(&only_a), ws.intersection(&only_a));
                assert_ne!(nu.eval(&us), nu.eval(&ws));
            }
            other => panic!("expected NotSupported, got {other:?}"),
        }
        // weight criterion agrees when enumeration is refused
        assert!(matches!(
            nu.support_check(&only_a, 2),
            Err(ValuationError::NotSupported { .. })
        ));
        assert!(delta_a.support_check(&only_a, 2).is_ok());
    }

    #[test]
    fn bullet_and_circ() {
        let nu = half_a_half_b();
        let t = nu.tabulate().unwrap();
        let b = nu_bullet(&t);
        assert_eq!(b, t);
        let d = nu.space();
        assert_eq!(b.get(&d.nothing()), &v("0"));
        assert_eq!(b.get(&d.up_set_of(&["a", "top"]).unwrap()), &v("1/2"));
        assert_eq!(b.get(&d.whole()), &nu.total());
        assert_eq!(mu_circ(&b), t);
        let zero = SetFunction::from_fn(d.clone(), |_| v("0")).unwrap();
        assert_eq!(mu_circ(&zero), zero);
    }

    #[test]
    fn circ_of_cardinality() {
        let s = Arc::new(FiniteSpace::sierpinski());
        let card = SetFunction::from_fn(s.clone(), |q| ExtNonneg::from_int(q.len() as u64)).unwrap();
        let c = mu_circ(&card);
        assert_eq!(c.get(&s.up_set_of(&["top"]).unwrap()), &v("1"));
        assert_eq!(c.get(&s.whole()), &v("2"));
    }

    #[test]
    fn tightness() {
        let s = Arc::new(FiniteSpace::sierpinski());
        let nu = Valuation::new(s.clone(), vec![v("1"), v("1")]).unwrap();
        let rep = is_tight(&nu.tabulate().unwrap());
        assert!(rep.tight);
        let w = rep
            .witnesses
            .iter()
            .find(|w| w.open == s.whole() && w.threshold.bound() == &v("2"))
            .unwrap();
        assert_eq!(w.compact, s.whole());

        let zero = Valuation::zero(s.clone());
        let rep = is_tight(&zero.tabulate().unwrap());
        assert!(rep.tight);
        assert!(rep.witnesses.iter().all(|w| w.compact.is_empty()));
    }

    #[test]
    fn non_monotone_table_is_not_tight() {
        // ν•({top}) = min(2, 1) = 1 < 2 = ν({top}); the probe just below 2 fails.
        let s = Arc::new(FiniteSpace::sierpinski());
        let t = table(&s, &[(&[], "0"), (&["top"], "2"), (&["bot", "top"], "1")]);
        let rep = is_tight(&t);
        assert!(!rep.tight);
        let (u, th) = rep.failure.unwrap();
        assert_eq!(u, s.up_set_of(&["top"]).unwrap());
        assert_eq!(th, Threshold::Below(v("2")));
    }

    #[test]
    fn local_finiteness_cases() {
        let s = Arc::new(FiniteSpace::sierpinski());
        let fin = Valuation::new(s.clone(), vec![v("3"), v("1/2")]).unwrap();
        let rep = fin.local_finiteness().unwrap();
        assert!(rep.locally_finite && rep.consistent());

        let inf_bot = Valuation::new(s.clone(), vec![v("inf"), v("0")]).unwrap();
        let rep = inf_bot.local_finiteness().unwrap();
        assert!(!rep.locally_finite && rep.consistent());
        assert_eq!(rep.failing_point.as_deref(), Some("bot"));

        let inf_top = Valuation::new(s, vec![v("0"), v("inf")]).unwrap();
        let rep = inf_top.local_finiteness().unwrap();
        assert!(!rep.locally_finite && rep.consistent());
        assert_eq!(rep.failing_point.as_deref(), Some("bot"));
    }
}
