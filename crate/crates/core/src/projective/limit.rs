use std::collections::HashMap;
use std::sync::Arc;

use super::{ProjectiveSystem, Presentation, SystemError};
use crate::order::{FiniteSpace, MonotoneMap, OrderError, UpSet};
use crate::pointset::PointSet;

/// The canonical limit of a finite system, materialized as its threads.
#[derive(Debug, Clone)]
pub struct LimitSpace {
    system: Arc<ProjectiveSystem>,
    space: Arc<FiniteSpace>,
    threads: Vec<Vec<usize>>,
    projections: Vec<MonotoneMap>,
    lookup: HashMap<Vec<usize>, usize>,
}

impl LimitSpace {
    pub fn system(&self) -> &Arc<ProjectiveSystem> {
        &self.system
    }

    /// The limit as a finite space with componentwise order.
    pub fn space(&self) -> &Arc<FiniteSpace> {
        &self.space
    }

    pub fn threads(&self) -> &[Vec<usize>] {
        &self.threads
    }

    pub fn thread(&self, t: usize) -> &[usize] {
        &self.threads[t]
    }

    pub fn thread_index(&self, components: &[usize]) -> Option<usize> {
        self.lookup.get(components).copied()
    }

    /// `p_i : X → X_i`.
    pub fn projection(&self, i: usize) -> &MonotoneMap {
        &self.projections[i]
    }

    pub fn is_empty(&self) -> bool {
        self.threads.is_empty()
    }

    pub fn len(&self) -> usize {
        self.threads.len()
    }
}

/// Enumerates the threads `(x_i)` with `p_ij(x_j) = x_i` for all `i ⊑ j`,
/// assigning indices from the top down and pruning on every bond.
pub fn materialize_limit(system: &Arc<ProjectiveSystem>, max_points: usize) -> Result<LimitSpace, SystemError> {
    let idx = system.index();
    let mut order = idx.poset().linear_extension();
    order.reverse();
    let n = system.len();
    let mut threads = Vec::new();
    let mut current = vec![usize::MAX; n];

    fn search(
        sys: &ProjectiveSystem,
        order: &[usize],
        pos: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        max_points: usize,
    ) -> Result<(), OrderError> {
        if pos == order.len() {
            if out.len() == max_points {
                return Err(OrderError::SizeLimit {
                    what: "limit threads",
                    limit: max_points,
                });
            }
            out.push(current.clone());
            return Ok(());
        }
        let i = order[pos];
        let assigned_above: Vec<usize> = order[..pos].iter().copied().filter(|&j| sys.index().le(i, j)).collect();
        for x in 0..sys.space(i).len() {
            if assigned_above.iter().all(|&j| sys.bond(i, j).apply(current[j]) == x) {
                current[i] = x;
                search(sys, order, pos + 1, current, out, max_points)?;
            }
        }
        current[i] = usize::MAX;
        Ok(())
    }
    search(system, &order, 0, &mut current, &mut threads, max_points)?;

    let labels: Vec<String> = threads
        .iter()
        .map(|t| match system.presentation() {
            Presentation::ExplicitPrefix => system.space(system.top()).label(t[system.top()]).to_string(),
            Presentation::Finite if n == 1 => system.space(0).label(t[0]).to_string(),
            Presentation::Finite => {
                let parts: Vec<&str> = t.iter().enumerate().map(|(i, &x)| system.space(i).label(x)).collect();
                format!("({})", parts.join(","))
            }
        })
        .collect();
    let space = Arc::new(FiniteSpace::from_le_fn(labels, |a, b| {
        (0..n).all(|i| system.space(i).le(threads[a][i], threads[b][i]))
    }));
    let projections = (0..n)
        .map(|i| MonotoneMap::new_unchecked(space.clone(), system.space(i).clone(), threads.iter().map(|t| t[i]).collect()))
        .collect();
    let lookup = threads.iter().enumerate().map(|(k, t)| (t.clone(), k)).collect();
    Ok(LimitSpace {
        system: system.clone(),
        space,
        threads,
        projections,
        lookup,
    })
}

/// `p_i^*(U)`: the largest open `V` of `X_i` with `p_i⁻¹(V) ⊆ U`, namely
/// the points `x` with `p_i⁻¹(↑x) ⊆ U`.
pub fn upper_adjoint(limit: &LimitSpace, i: usize, u: &UpSet) -> UpSet {
    let xi = limit.system.space(i);
    let p = limit.projection(i);
    let members = PointSet::from_indices(
        xi.len(),
        (0..xi.len()).filter(|&x| p.preimage(xi.up_of(x)).is_subset(u)),
    );
    xi.up_set(members).expect("the upper adjoint is upward closed")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SteenrodOutcome {
    /// A thread, one component per index.
    Thread(Vec<usize>),
    /// Some space of the system is empty.
    Empty { index: String },
}

/// Finds a thread through a system of nonempty spaces. Chains are walked
/// level by level, choosing at each level the first point of the eventual
/// image that lies over the previous choice.
pub fn steenrod_nonempty(system: &ProjectiveSystem) -> Result<SteenrodOutcome, SystemError> {
    let idx = system.index();
    if let Some(i) = (0..system.len()).find(|&i| system.space(i).is_empty()) {
        return Ok(SteenrodOutcome::Empty {
            index: idx.label(i).to_string(),
        });
    }
    let top = system.top();
    let thread: Vec<usize> = match system.presentation() {
        Presentation::ExplicitPrefix => {
            let mut thread: Vec<usize> = Vec::with_capacity(system.len());
            for n in 0..system.len() {
                let mut candidates = system.eventual_image(n);
                if n > 0 {
                    let over = system.bond(n - 1, n).preimage(&PointSet::singleton(
                        system.space(n - 1).len(),
                        thread[n - 1],
                    ));
                    candidates = candidates.intersection(&over);
                }
                let x = candidates
                    .first()
                    .ok_or_else(|| OrderError::Internal(format!("no point over the chosen thread at level {n}")))?;
                thread.push(x);
            }
            thread
        }
        Presentation::Finite => (0..system.len()).map(|i| system.bond(i, top).apply(0)).collect(),
    };
    for i in 0..system.len() {
        for j in idx.above(i) {
            if system.bond(i, j).apply(thread[j]) != thread[i] {
                return Err(OrderError::Internal("selected family is not a thread".into()).into());
            }
        }
    }
    Ok(SteenrodOutcome::Thread(thread))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DominatingLevel {
    Found(usize),
    /// No level up to the probe depth works; the search cannot decide.
    Inconclusive { depth: usize },
}

/// For a sub-system `{Q_j}` of up-sets (`p_jk[Q_k] ⊆ Q_j`) and an open `U` of
/// `X_i` containing `↑p_i[Q]`, where `Q` is the limit of the family, returns
/// the first `j ⊒ i` with `↑p_ij[Q_j] ⊆ U`.
pub fn find_dominating_level(
    system: &ProjectiveSystem,
    i: usize,
    q: &[UpSet],
    u: &UpSet,
) -> Result<DominatingLevel, SystemError> {
    let idx = system.index();
    if q.len() != system.len() {
        return Err(SystemError::SpaceCount {
            expected: system.len(),
            got: q.len(),
        });
    }
    for j in 0..system.len() {
        if !system.space(j).is_up_set(&q[j]) {
            return Err(SystemError::NotSubsystem(format!("Q_{} is not an up-set", idx.label(j))));
        }
        for k in idx.above(j) {
            if !system.bond(j, k).image(&q[k]).is_subset(&q[j]) {
                return Err(SystemError::NotSubsystem(format!(
                    "p[Q_{}] is not inside Q_{}",
                    idx.label(k),
                    idx.label(j)
                )));
            }
        }
    }
    // The threads through every Q_j are the projections of Q_top.
    let top = system.top();
    let projected = system.bond(i, top).up_image(&q[top]);
    if !projected.is_subset(u) {
        let xi = system.space(i);
        return Err(SystemError::NotANeighbourhood(
            xi.set_labels(u).into_iter().map(String::from).collect(),
        ));
    }
    let j = idx
        .above(i)
        .find(|&j| system.bond(i, j).up_image(&q[j]).is_subset(u))
        .expect("the top index always dominates");
    Ok(DominatingLevel::Found(j))
}

#[cfg(test)]
mod tests {
    use super::super::tests::{flat, truncation_chain};
    use super::super::DirectedIndex;
    use super::*;
    use crate::order::DEFAULT_MAX_POINTS;

    fn diamond_over_sierpinski() -> Arc<ProjectiveSystem> {
        let s = Arc::new(FiniteSpace::sierpinski());
        let d = Arc::new(FiniteSpace::diamond());
        let p = MonotoneMap::from_labels(
            d.clone(),
            s.clone(),
            &[("bot", "bot"), ("a", "bot"), ("b", "bot"), ("top", "top")],
        )
        .unwrap();
        Arc::new(ProjectiveSystem::new(DirectedIndex::chain(2), vec![s, d], vec![(0, 1, p)]).unwrap())
    }

    #[test]
    fn two_level_limit_is_the_top_space() {
        let sys = diamond_over_sierpinski();
        let lim = materialize_limit(&sys, DEFAULT_MAX_POINTS).unwrap();
        assert_eq!(lim.len(), 4);
        assert_eq!(lim.space().opens().unwrap().len(), 6);
        for t in 0..4 {
            assert_eq!(lim.projection(1).apply(t), t);
            assert_eq!(lim.projection(0).apply(t), sys.bond(0, 1).apply(t));
        }
    }

    #[test]
    fn empty_spaces_give_empty_limit() {
        let e = Arc::new(FiniteSpace::empty());
        let sys = Arc::new(ProjectiveSystem::chain(vec![e.clone(), e.clone()], vec![MonotoneMap::identity(e)]).unwrap());
        assert!(materialize_limit(&sys, DEFAULT_MAX_POINTS).unwrap().is_empty());
        assert_eq!(steenrod_nonempty(&sys).unwrap(), SteenrodOutcome::Empty { index: "0".into() });
    }

    #[test]
    fn adjoint_examples() {
        let sys = diamond_over_sierpinski();
        let lim = materialize_limit(&sys, DEFAULT_MAX_POINTS).unwrap();
        let x = lim.space();
        let d = sys.space(1);
        let u = lim.projection(1).preimage_open(&d.up_set_of(&["a", "top"]).unwrap());
        assert_eq!(x.label(u.first().unwrap()), "(bot,a)");
        let s = sys.space(0);
        assert_eq!(upper_adjoint(&lim, 0, &u), s.up_set_of(&["top"]).unwrap());
        assert_eq!(upper_adjoint(&lim, 1, &u).as_set(), u.as_set());
        assert_eq!(upper_adjoint(&lim, 0, &x.whole()), s.whole());
        // Galois law and maximality against a scan of all opens
        for u in x.opens().unwrap() {
            let star = upper_adjoint(&lim, 0, &u);
            for v in s.opens().unwrap() {
                assert_eq!(lim.projection(0).preimage(&v).is_subset(&u), v.is_subset(&star));
            }
        }
    }

    #[test]
    fn steenrod_on_chain() {
        let sys = truncation_chain(5);
        match steenrod_nonempty(&sys).unwrap() {
            SteenrodOutcome::Thread(t) => assert_eq!(t, vec![0; 5]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dominating_level_on_truncation_chain() {
        // Q_1 = {0,1}, Q_2 = {0,1,2}, and Q_n = {0} from level 3 on.
        let sys = truncation_chain(6);
        let q: Vec<UpSet> = (0..6)
            .map(|n| {
                let xs: Vec<usize> = match n {
                    0 | 3.. => vec![0],
                    _ => (0..=n).collect(),
                };
                sys.space(n).up_set(PointSet::from_indices(n + 1, xs)).unwrap()
            })
            .collect();
        let u = sys.space(1).up_set(PointSet::from_indices(2, [0])).unwrap();
        assert_eq!(find_dominating_level(&sys, 1, &q, &u).unwrap(), DominatingLevel::Found(3));
        let full = sys.space(1).whole();
        assert_eq!(find_dominating_level(&sys, 1, &q, &full).unwrap(), DominatingLevel::Found(1));
        assert!(matches!(
            find_dominating_level(&sys, 1, &q, &sys.space(1).nothing()),
            Err(SystemError::NotANeighbourhood(_))
        ));
        let _ = flat(0);
    }
}
