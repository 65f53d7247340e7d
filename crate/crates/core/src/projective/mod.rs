//! Projective systems of finite spaces and their limits.
//!
//! A system is indexed by a finite directed poset. An ω-chain given by an
//! explicit prefix `X_0 ← X_1 ← … ← X_N` (with identity bonds beyond `N`) is
//! the special case of a chain index, and its limit is `X_N`. Chains produced
//! on demand by a rule live in [`lazy`].

mod cylinder;
mod ep;
pub mod lazy;
mod limit;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::order::{FiniteSpace, MonotoneMap, OrderError};
use crate::valuation::{first_difference, Valuation, ValuationError, Witness};

pub use cylinder::CylinderOpen;
pub use ep::{embedding_from_projection, limit_ep_structure, EpSystem};
pub use limit::{
    find_dominating_level, materialize_limit, steenrod_nonempty, upper_adjoint, DominatingLevel, LimitSpace,
    SteenrodOutcome,
};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SystemError {
    #[error("index poset is not directed: {0} and {1} have no common upper bound")]
    NotDirected(String, String),
    #[error("index poset is empty")]
    EmptyIndex,
    #[error("expected {expected} spaces, got {got}")]
    SpaceCount { expected: usize, got: usize },
    #[error("bond {i} <- {j} given but {i} is not below {j}")]
    NotComparable { i: String, j: String },
    #[error("bond {i} <- {j} has the wrong source or target")]
    BondShape { i: String, j: String },
    #[error("no bond {i} <- {j} given or derivable")]
    MissingBond { i: String, j: String },
    #[error("bond law fails at ({i}, {j}, {k}): p_ij . p_jk != p_ik")]
    BondLawViolation { i: String, j: String, k: String },
    #[error("valuations incompatible: nu_{i} != p_{i}{j}[nu_{j}] on open {open:?}")]
    Incompatible { i: String, j: String, open: Witness },
    #[error("valuation at index {0} lives on the wrong space")]
    ValuationSpace(String),
    #[error("no embedding for this projection: {x} has minimal dominating elements {minimal:?}")]
    NotAProjection { x: String, minimal: Vec<String> },
    #[error("ep law fails: {0}")]
    EpLawViolation(String),
    #[error("family is not a sub-system: {0}")]
    NotSubsystem(String),
    #[error("open {0:?} does not contain the projected limit of the family")]
    NotANeighbourhood(Witness),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Valuation(#[from] ValuationError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Presentation {
    /// An arbitrary finite directed index poset.
    Finite,
    /// An ω-chain given by levels `0..=N`, identity bonds beyond `N`.
    ExplicitPrefix,
}

/// Whether an answer about an infinite chain is exact or only an upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Exact,
    UpperBound,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Exact => "exact",
            Status::UpperBound => "upper-bound",
        })
    }
}

/// A finite directed index poset with a chosen upper bound for every pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedIndex {
    poset: Arc<FiniteSpace>,
    bound: Vec<Vec<usize>>,
    top: usize,
}

impl DirectedIndex {
    /// Checks directedness and fixes, for each pair, the least upper bound if
    /// there is one and otherwise the upper bound listed first.
    pub fn new(poset: Arc<FiniteSpace>) -> Result<Self, SystemError> {
        let n = poset.len();
        if n == 0 {
            return Err(SystemError::EmptyIndex);
        }
        let mut bound = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                let ubs = poset.up_of(i).intersection(poset.up_of(j));
                let k = poset.least_in(&ubs).or_else(|| ubs.first()).ok_or_else(|| {
                    SystemError::NotDirected(poset.label(i).to_string(), poset.label(j).to_string())
                })?;
                bound[i][j] = k;
            }
        }
        let top = poset.top().expect("finite directed posets have a top");
        Ok(DirectedIndex { poset, bound, top })
    }

    /// The chain `0 ⊑ 1 ⊑ … ⊑ n-1`.
    pub fn chain(n: usize) -> Self {
        let labels: Vec<String> = (0..n).map(|k| k.to_string()).collect();
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        Self::new(Arc::new(FiniteSpace::chain(&refs))).expect("nonempty chains are directed")
    }

    pub fn poset(&self) -> &Arc<FiniteSpace> {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.poset.le(i, j)
    }

    pub fn upper_bound(&self, i: usize, j: usize) -> usize {
        self.bound[i][j]
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn label(&self, i: usize) -> &str {
        self.poset.label(i)
    }

    /// Indices `j ⊒ i` in canonical order.
    pub fn above(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.poset.up_of(i).iter()
    }
}

/// A projective system over a finite directed index, with every bond
/// `p_ij : X_j → X_i` for `i ⊑ j` stored.
#[derive(Debug, Clone)]
pub struct ProjectiveSystem {
    index: DirectedIndex,
    spaces: Vec<Arc<FiniteSpace>>,
    bonds: Vec<Vec<Option<MonotoneMap>>>,
    presentation: Presentation,
}

impl ProjectiveSystem {
    /// Builds and verifies a system. Bonds not given are derived by
    /// composition along covers of the index; identities may be omitted.
    pub fn new(
        index: DirectedIndex,
        spaces: Vec<Arc<FiniteSpace>>,
        bonds: Vec<(usize, usize, MonotoneMap)>,
    ) -> Result<Self, SystemError> {
        Self::build(index, spaces, bonds, Presentation::Finite)
    }

    /// The explicit-prefix ω-chain with levels `spaces[0..=N]` and
    /// `bonds[n] : X_{n+1} → X_n`.
    pub fn chain(spaces: Vec<Arc<FiniteSpace>>, bonds: Vec<MonotoneMap>) -> Result<Self, SystemError> {
        if spaces.is_empty() {
            return Err(SystemError::EmptyIndex);
        }
        if bonds.len() + 1 != spaces.len() {
            return Err(SystemError::SpaceCount {
                expected: bonds.len() + 1,
                got: spaces.len(),
            });
        }
        let index = DirectedIndex::chain(spaces.len());
        let given = bonds.into_iter().enumerate().map(|(n, b)| (n, n + 1, b)).collect();
        Self::build(index, spaces, given, Presentation::ExplicitPrefix)
    }

    /// A one-index system.
    pub fn single(space: Arc<FiniteSpace>) -> Self {
        Self::chain(vec![space], vec![]).expect("one level is always a valid chain")
    }

    fn build(
        index: DirectedIndex,
        spaces: Vec<Arc<FiniteSpace>>,
        given: Vec<(usize, usize, MonotoneMap)>,
        presentation: Presentation,
    ) -> Result<Self, SystemError> {
        let n = index.len();
        if spaces.len() != n {
            return Err(SystemError::SpaceCount {
                expected: n,
                got: spaces.len(),
            });
        }
        let lbl = |i: usize| index.label(i).to_string();
        let mut bonds: Vec<Vec<Option<MonotoneMap>>> = vec![vec![None; n]; n];
        for (i, j, p) in given {
            if i >= n || j >= n {
                return Err(OrderError::IndexOutOfRange { index: i.max(j), len: n }.into());
            }
            if !index.le(i, j) {
                return Err(SystemError::NotComparable { i: lbl(i), j: lbl(j) });
            }
            if **p.source() != *spaces[j] || **p.target() != *spaces[i] {
                return Err(SystemError::BondShape { i: lbl(i), j: lbl(j) });
            }
            bonds[i][j] = Some(p);
        }
        for (i, space) in spaces.iter().enumerate() {
            if bonds[i][i].is_none() {
                bonds[i][i] = Some(MonotoneMap::identity(space.clone()));
            }
        }
        // Fill p_ij = p_ik ∘ p_kj through a cover k of i, shortest intervals first.
        let mut pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| index.above(i).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j)
            .collect();
        pairs.sort_by_key(|&(i, j)| index.poset.up_of(i).intersection(index.poset.down_of(j)).len());
        let covers = index.poset.covers();
        for (i, j) in pairs {
            if bonds[i][j].is_some() {
                continue;
            }
            let via = covers
                .iter()
                .filter(|&&(a, k)| a == i && index.le(k, j))
                .find_map(|&(_, k)| Some((bonds[i][k].as_ref()?, bonds[k][j].as_ref()?)));
            match via {
                Some((pik, pkj)) => bonds[i][j] = Some(pik.compose(pkj)?),
                None => return Err(SystemError::MissingBond { i: lbl(i), j: lbl(j) }),
            }
        }
        let sys = ProjectiveSystem {
            index,
            spaces,
            bonds,
            presentation,
        };
        sys.check_system()?;
        Ok(sys)
    }

    /// Verifies `p_ii = id` and `p_ij ∘ p_jk = p_ik` for every triple.
    pub fn check_system(&self) -> Result<(), SystemError> {
        let n = self.len();
        let lbl = |i: usize| self.index.label(i).to_string();
        for i in 0..n {
            if !self.bond(i, i).is_identity() {
                return Err(SystemError::BondLawViolation {
                    i: lbl(i),
                    j: lbl(i),
                    k: lbl(i),
                });
            }
            for j in self.index.above(i) {
                for k in self.index.above(j) {
                    let composed = self.bond(i, j).compose(self.bond(j, k))?;
                    if composed.graph() != self.bond(i, k).graph() {
                        return Err(SystemError::BondLawViolation {
                            i: lbl(i),
                            j: lbl(j),
                            k: lbl(k),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn index(&self) -> &DirectedIndex {
        &self.index
    }

    pub fn presentation(&self) -> Presentation {
        self.presentation
    }

    pub fn len(&self) -> usize {
        self.spaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spaces.is_empty()
    }

    pub fn space(&self, i: usize) -> &Arc<FiniteSpace> {
        &self.spaces[i]
    }

    pub fn spaces(&self) -> &[Arc<FiniteSpace>] {
        &self.spaces
    }

    /// `p_ij : X_j → X_i`.
    ///
    /// # Panics
    /// Unless `i ⊑ j`.
    pub fn bond(&self, i: usize, j: usize) -> &MonotoneMap {
        self.bonds[i][j]
            .as_ref()
            .unwrap_or_else(|| panic!("no bond {} <- {}", self.index.label(i), self.index.label(j)))
    }

    pub fn top(&self) -> usize {
        self.index.top()
    }

    /// `p_i[X_top]`, the eventual image at `i`; exact for finite indices.
    pub fn eventual_image(&self, i: usize) -> crate::pointset::PointSet {
        let top = self.top();
        self.bond(i, top).image(&self.spaces[top].full_set())
    }
}

/// A projective system with one valuation per index.
#[derive(Debug, Clone)]
pub struct ValuedSystem {
    system: Arc<ProjectiveSystem>,
    vals: Vec<Valuation>,
}

impl ValuedSystem {
    /// Pairs a system with valuations; compatibility is not checked here.
    pub fn new(system: Arc<ProjectiveSystem>, vals: Vec<Valuation>) -> Result<Self, SystemError> {
        if vals.len() != system.len() {
            return Err(SystemError::SpaceCount {
                expected: system.len(),
                got: vals.len(),
            });
        }
        if let Some(i) = (0..vals.len()).find(|&i| **vals[i].space() != *system.spaces[i]) {
            return Err(SystemError::ValuationSpace(system.index.label(i).to_string()));
        }
        Ok(ValuedSystem { system, vals })
    }

    /// The family `p_i[ν]` of images of one valuation on the top space.
    pub fn from_top(system: Arc<ProjectiveSystem>, top: &Valuation) -> Result<Self, SystemError> {
        let t = system.top();
        let vals = (0..system.len())
            .map(|i| top.image(system.bond(i, t)))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(system, vals)
    }

    pub fn system(&self) -> &Arc<ProjectiveSystem> {
        &self.system
    }

    pub fn valuation(&self, i: usize) -> &Valuation {
        &self.vals[i]
    }

    pub fn valuations(&self) -> &[Valuation] {
        &self.vals
    }

    /// Verifies `ν_i = p_ij[ν_j]` on every open of `X_i`, for every `i ⊑ j`.
    pub fn check_compatibility(&self, max_opens: usize) -> Result<(), SystemError> {
        let idx = self.system.index();
        for i in 0..self.system.len() {
            for j in idx.above(i).filter(|&j| j != i) {
                let pushed = self.vals[j].image(self.system.bond(i, j))?;
                if let Some(u) = first_difference(&self.vals[i], &pushed, max_opens)? {
                    let space = self.system.space(i);
                    return Err(SystemError::Incompatible {
                        i: idx.label(i).to_string(),
                        j: idx.label(j).to_string(),
                        open: space.set_labels(&u).into_iter().map(String::from).collect(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.vals.iter().all(Valuation::is_zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::DEFAULT_MAX_OPENS;
    use crate::value::ExtNonneg;

    pub(crate) fn flat(n: usize) -> Arc<FiniteSpace> {
        let labels: Vec<String> = (0..=n).map(|k| k.to_string()).collect();
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        Arc::new(FiniteSpace::antichain(&refs))
    }

    /// `X_n = {0..n}` discrete, `p(x) = min(x, n)`.
    pub(crate) fn truncation_chain(levels: usize) -> ProjectiveSystem {
        let spaces: Vec<_> = (0..levels).map(flat).collect();
        let bonds = (0..levels - 1)
            .map(|n| {
                MonotoneMap::new(spaces[n + 1].clone(), spaces[n].clone(), (0..=n + 1).map(|x| x.min(n)).collect())
                    .unwrap()
            })
            .collect();
        ProjectiveSystem::chain(spaces, bonds).unwrap()
    }

    #[test]
    fn single_space_is_valid() {
        let s = ProjectiveSystem::single(Arc::new(FiniteSpace::diamond()));
        assert_eq!(s.len(), 1);
        assert!(s.bond(0, 0).is_identity());
    }

    #[test]
    fn composites_are_derived() {
        let sys = truncation_chain(4);
        assert_eq!(sys.bond(0, 3).graph(), &[0, 0, 0, 0]);
        assert_eq!(sys.bond(1, 3).graph(), &[0, 1, 1, 1]);
    }

    #[test]
    fn injected_bad_composite() {
        let spaces: Vec<_> = (0..3).map(flat).collect();
        let p01 = MonotoneMap::new(spaces[1].clone(), spaces[0].clone(), vec![0, 0]).unwrap();
        let p12 = MonotoneMap::new(spaces[2].clone(), spaces[1].clone(), vec![0, 1, 1]).unwrap();
        // the only map into a point is constant, so break the composite at a 2-point level instead
        let idx = DirectedIndex::chain(3);
        let sp = vec![spaces[1].clone(), spaces[1].clone(), spaces[2].clone()];
        let id = MonotoneMap::identity(spaces[1].clone());
        let wrong = MonotoneMap::new(spaces[2].clone(), spaces[1].clone(), vec![1, 0, 0]).unwrap();
        let err = ProjectiveSystem::new(idx, sp, vec![(0, 1, id), (1, 2, p12.clone()), (0, 2, wrong)]).unwrap_err();
        assert!(matches!(err, SystemError::BondLawViolation { .. }), "{err:?}");
        assert!(ProjectiveSystem::chain(spaces, vec![p01, p12]).is_ok());
    }

    #[test]
    fn undirected_index_rejected() {
        let idx = Arc::new(FiniteSpace::antichain(&["a", "b"]));
        assert!(matches!(DirectedIndex::new(idx), Err(SystemError::NotDirected(..))));
    }

    #[test]
    fn compatibility() {
        let sys = Arc::new(truncation_chain(4));
        let delta0 = |n: usize| Valuation::point_mass(sys.space(n).clone(), 0, ExtNonneg::one());
        let vs = ValuedSystem::new(sys.clone(), (0..4).map(delta0).collect()).unwrap();
        vs.check_compatibility(DEFAULT_MAX_OPENS).unwrap();

        let mut vals: Vec<_> = (0..4).map(delta0).collect();
        vals[1] = Valuation::point_mass(sys.space(1).clone(), 1, ExtNonneg::one());
        vals[0] = Valuation::zero(sys.space(0).clone());
        let vs = ValuedSystem::new(sys.clone(), vals).unwrap();
        match vs.check_compatibility(DEFAULT_MAX_OPENS) {
            Err(SystemError::Incompatible { i, j, open }) => {
                assert_eq!((i.as_str(), j.as_str()), ("0", "1"));
                assert_eq!(open, vec!["0".to_string()]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn constant_system_compatible() {
        let d = Arc::new(FiniteSpace::diamond());
        let id = MonotoneMap::identity(d.clone());
        let sys = Arc::new(ProjectiveSystem::chain(vec![d.clone(), d.clone()], vec![id]).unwrap());
        let nu = Valuation::point_mass(d, 1, ExtNonneg::ratio(1, 2));
        let vs = ValuedSystem::new(sys, vec![nu.clone(), nu]).unwrap();
        assert!(vs.check_compatibility(DEFAULT_MAX_OPENS).is_ok());
    }
}
