use std::sync::Arc;

use super::{LimitSpace, ProjectiveSystem, SystemError};
use crate::order::{EpPair, MonotoneMap, OrderError};
use crate::pointset::PointSet;

fn ep_pair(p: MonotoneMap, e: MonotoneMap) -> Result<EpPair, SystemError> {
    EpPair::new(p, e).map_err(|err| match err {
        OrderError::NotEpPair(msg) => SystemError::EpLawViolation(msg),
        other => other.into(),
    })
}

/// Recovers the embedding of a projection `p : Y → X`: `e(x)` is the least
/// `y` with `x <= p(y)`. Fails if some `x` has no such least element or if
/// the result is not an ep-pair.
pub fn embedding_from_projection(p: &MonotoneMap) -> Result<EpPair, SystemError> {
    let (y_space, x_space) = (p.source(), p.target());
    let mut graph = Vec::with_capacity(x_space.len());
    for x in 0..x_space.len() {
        let dominating = PointSet::from_indices(
            y_space.len(),
            (0..y_space.len()).filter(|&y| x_space.le(x, p.apply(y))),
        );
        match y_space.least_in(&dominating) {
            Some(y) => graph.push(y),
            None => {
                return Err(SystemError::NotAProjection {
                    x: x_space.label(x).to_string(),
                    minimal: y_space
                        .minimal_elements(&dominating)
                        .into_iter()
                        .map(|y| y_space.label(y).to_string())
                        .collect(),
                })
            }
        }
    }
    let e = MonotoneMap::new(x_space.clone(), y_space.clone(), graph)
        .map_err(|err| SystemError::EpLawViolation(format!("embedding is not monotone: {err}")))?;
    ep_pair(p.clone(), e)
}

/// A projective system whose bonds are projections of ep-pairs, with the
/// embeddings `e_ij : X_i → X_j` stored for every `i ⊑ j`.
#[derive(Debug, Clone)]
pub struct EpSystem {
    system: Arc<ProjectiveSystem>,
    embeddings: Vec<Vec<Option<MonotoneMap>>>,
}

impl EpSystem {
    /// Uses the given embeddings; every pair `i ⊑ j` must be covered.
    pub fn new(system: Arc<ProjectiveSystem>, given: Vec<(usize, usize, MonotoneMap)>) -> Result<Self, SystemError> {
        let n = system.len();
        let mut embeddings = vec![vec![None; n]; n];
        for (i, j, e) in given {
            if i >= n || j >= n || !system.index().le(i, j) {
                return Err(SystemError::NotComparable {
                    i: i.to_string(),
                    j: j.to_string(),
                });
            }
            embeddings[i][j] = Some(e);
        }
        for i in 0..n {
            for j in system.index().above(i) {
                if embeddings[i][j].is_none() {
                    return Err(SystemError::EpLawViolation(format!(
                        "no embedding {} -> {}",
                        system.index().label(i),
                        system.index().label(j)
                    )));
                }
            }
        }
        let ep = EpSystem { system, embeddings };
        ep.check_ep_system()?;
        Ok(ep)
    }

    /// Recovers every embedding from its projection.
    pub fn reconstruct(system: Arc<ProjectiveSystem>) -> Result<Self, SystemError> {
        let mut given = Vec::new();
        for i in 0..system.len() {
            for j in system.index().above(i) {
                let pair = embedding_from_projection(system.bond(i, j))?;
                given.push((i, j, pair.embedding().clone()));
            }
        }
        Self::new(system, given)
    }

    /// Verifies that each `(p_ij, e_ij)` is an ep-pair, `e_ii = id`, and
    /// `e_jk ∘ e_ij = e_ik`.
    pub fn check_ep_system(&self) -> Result<(), SystemError> {
        let idx = self.system.index();
        let lbl = |i: usize| idx.label(i);
        for i in 0..self.system.len() {
            if !self.embedding(i, i).is_identity() {
                return Err(SystemError::EpLawViolation(format!("e_{0}{0} is not the identity", lbl(i))));
            }
            for j in idx.above(i) {
                ep_pair(self.system.bond(i, j).clone(), self.embedding(i, j).clone())?;
                for k in idx.above(j) {
                    let composed = self.embedding(j, k).compose(self.embedding(i, j))?;
                    if composed.graph() != self.embedding(i, k).graph() {
                        return Err(SystemError::EpLawViolation(format!(
                            "e_{}{} . e_{}{} != e_{}{}",
                            lbl(j),
                            lbl(k),
                            lbl(i),
                            lbl(j),
                            lbl(i),
                            lbl(k)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn system(&self) -> &Arc<ProjectiveSystem> {
        &self.system
    }

    /// `e_ij : X_i → X_j`.
    pub fn embedding(&self, i: usize, j: usize) -> &MonotoneMap {
        self.embeddings[i][j].as_ref().expect("embeddings exist for every i <= j")
    }
}

/// The ep-pairs `(p_i, e_i)` between each `X_i` and the limit, with
/// `e_i(x)_j = p_jk(e_ik(x))` for the chosen upper bound `k` of `i` and `j`.
pub fn limit_ep_structure(ep: &EpSystem, limit: &LimitSpace) -> Result<Vec<EpPair>, SystemError> {
    let sys = ep.system();
    let idx = sys.index();
    (0..sys.len())
        .map(|i| {
            let graph = (0..sys.space(i).len())
                .map(|x| {
                    let thread: Vec<usize> = (0..sys.len())
                        .map(|j| {
                            let k = idx.upper_bound(i, j);
                            sys.bond(j, k).apply(ep.embedding(i, k).apply(x))
                        })
                        .collect();
                    limit
                        .thread_index(&thread)
                        .ok_or_else(|| SystemError::EpLawViolation(format!("e_{}({}) is not a thread", idx.label(i), sys.space(i).label(x))))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let e = MonotoneMap::new(sys.space(i).clone(), limit.space().clone(), graph)?;
            ep_pair(limit.projection(i).clone(), e)
        })
        .collect()
}
