//! ω-chains generated level by level from a rule.
//!
//! Levels are built on demand and memoized; queries look at most `depth`
//! levels beyond the level they concern. Answers that depend on the whole
//! infinite tail are exact only when the rule certifies that its bonds are
//! identities from some level on and that level is within reach.

use std::fmt;
use std::sync::{Arc, RwLock};

use super::{DominatingLevel, ProjectiveSystem, Status, SystemError};
use crate::order::{FiniteSpace, MonotoneMap, UpSet};
use crate::pointset::PointSet;
use crate::valuation::{first_difference, Valuation};
use crate::value::ExtNonneg;

/// A pure generator of an ω-chain. The same `n` must always yield the same
/// answer.
pub trait ChainRule: Send + Sync {
    fn name(&self) -> String;
    fn space(&self, n: usize) -> FiniteSpace;
    /// The graph of `p_{n,n+1} : X_{n+1} → X_n`.
    fn bond(&self, n: usize) -> Vec<usize>;
    /// Weights of the valuation at level `n`, if the chain carries one.
    fn weights(&self, _n: usize) -> Option<Vec<ExtNonneg>> {
        None
    }
    /// A level from which every bond is the identity, if known.
    fn stable_from(&self) -> Option<usize> {
        None
    }
}

struct Level {
    space: Arc<FiniteSpace>,
    // p_{n-1,n}
    down: Option<MonotoneMap>,
}

pub struct LazyChain {
    rule: Box<dyn ChainRule>,
    depth: usize,
    cache: RwLock<Vec<Arc<Level>>>,
}

impl fmt::Debug for LazyChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LazyChain")
            .field("rule", &self.rule.name())
            .field("depth", &self.depth)
            .field("cached", &self.cache.read().map(|c| c.len()).unwrap_or(0))
            .finish()
    }
}

impl LazyChain {
    pub fn new(rule: Box<dyn ChainRule>, depth: usize) -> Self {
        LazyChain {
            rule,
            depth,
            cache: RwLock::new(Vec::new()),
        }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn rule(&self) -> &dyn ChainRule {
        self.rule.as_ref()
    }

    fn level(&self, n: usize) -> Result<Arc<Level>, SystemError> {
        if let Some(l) = self.cache.read().expect("cache lock poisoned").get(n) {
            return Ok(l.clone());
        }
        let mut cache = self.cache.write().expect("cache lock poisoned");
        while cache.len() <= n {
            let m = cache.len();
            let space = Arc::new(self.rule.space(m));
            let down = if m == 0 {
                None
            } else {
                let below = cache[m - 1].space.clone();
                let p = MonotoneMap::new(space.clone(), below, self.rule.bond(m - 1))?;
                if self.rule.stable_from().is_some_and(|s| m > s) && !p.is_identity() {
                    return Err(SystemError::BondLawViolation {
                        i: (m - 1).to_string(),
                        j: m.to_string(),
                        k: m.to_string(),
                    });
                }
                Some(p)
            };
            cache.push(Arc::new(Level { space, down }));
        }
        Ok(cache[n].clone())
    }

    pub fn space(&self, n: usize) -> Result<Arc<FiniteSpace>, SystemError> {
        Ok(self.level(n)?.space.clone())
    }

    /// `p_ij` for `i <= j`.
    pub fn bond(&self, i: usize, j: usize) -> Result<MonotoneMap, SystemError> {
        assert!(i <= j, "bonds go down the chain");
        let mut p = MonotoneMap::identity(self.space(j)?);
        for m in (i + 1..=j).rev() {
            let down = self.level(m)?.down.clone().expect("levels above 0 have a bond");
            p = down.compose(&p)?;
        }
        Ok(p)
    }

    pub fn valuation(&self, n: usize) -> Result<Option<Valuation>, SystemError> {
        match self.rule.weights(n) {
            Some(w) => Ok(Some(Valuation::new(self.space(n)?, w)?)),
            None => Ok(None),
        }
    }

    fn horizon(&self, i: usize) -> (usize, Status) {
        match self.rule.stable_from() {
            Some(s) if s <= i + self.depth => (i.max(s), Status::Exact),
            _ => (i + self.depth, Status::UpperBound),
        }
    }

    /// Builds every level up to the probe depth, validating each bond.
    pub fn check_to_depth(&self) -> Result<(), SystemError> {
        self.level(self.depth).map(|_| ())
    }

    /// Compares `ν_n` with `p[ν_{n+1}]` for `n < depth`.
    pub fn check_compatibility(&self, max_opens: usize) -> Result<(), SystemError> {
        for n in 0..self.depth {
            let (Some(lo), Some(hi)) = (self.valuation(n)?, self.valuation(n + 1)?) else {
                return Ok(());
            };
            let pushed = hi.image(&self.bond(n, n + 1)?)?;
            if let Some(u) = first_difference(&lo, &pushed, max_opens)? {
                return Err(SystemError::Incompatible {
                    i: n.to_string(),
                    j: (n + 1).to_string(),
                    open: lo.space().set_labels(&u).into_iter().map(String::from).collect(),
                });
            }
        }
        Ok(())
    }

    /// The explicit chain on levels `0..=n`.
    pub fn prefix(&self, n: usize) -> Result<ProjectiveSystem, SystemError> {
        let spaces = (0..=n).map(|m| self.space(m)).collect::<Result<Vec<_>, _>>()?;
        let bonds = (0..n).map(|m| self.bond(m, m + 1)).collect::<Result<Vec<_>, _>>()?;
        ProjectiveSystem::chain(spaces, bonds)
    }

    /// The image of the levels beyond `i` in `X_i`: exact once the rule's
    /// identity tail is within depth, otherwise the superset `p_{i,i+D}[X_{i+D}]`.
    pub fn eventual_image(&self, i: usize) -> Result<(PointSet, Status), SystemError> {
        let (h, status) = self.horizon(i);
        let p = self.bond(i, h)?;
        Ok((p.image(&p.source().full_set()), status))
    }

    /// Cylinder equality decided on eventual images at the common level.
    pub fn cylinder_eq(&self, a: (usize, &UpSet), b: (usize, &UpSet)) -> Result<(bool, Status), SystemError> {
        let k = a.0.max(b.0);
        let (image, status) = self.eventual_image(k)?;
        let ua = self.bond(a.0, k)?.preimage(a.1).intersection(&image);
        let ub = self.bond(b.0, k)?.preimage(b.1).intersection(&image);
        Ok((ua == ub, status))
    }

    /// `ν(p_i⁻¹(U)) = ν_i(U)`, exact whenever the chain carries valuations.
    pub fn cylinder_value(&self, i: usize, base: &UpSet) -> Result<Option<ExtNonneg>, SystemError> {
        Ok(self.valuation(i)?.map(|v| v.eval(base)))
    }

    /// A thread prefix through levels `0..=depth`, chosen through eventual
    /// images. Any prefix found can be continued when the status is exact;
    /// otherwise only the depth-bounded images were consulted.
    pub fn steenrod_prefix(&self) -> Result<Option<(Vec<usize>, Status)>, SystemError> {
        let mut thread: Vec<usize> = Vec::new();
        let mut status = Status::Exact;
        for n in 0..=self.depth {
            let (mut candidates, st) = self.eventual_image(n)?;
            if st == Status::UpperBound {
                status = Status::UpperBound;
            }
            if n > 0 {
                let below = self.space(n - 1)?;
                candidates = candidates
                    .intersection(&self.bond(n - 1, n)?.preimage(&PointSet::singleton(below.len(), thread[n - 1])));
            }
            match candidates.first() {
                Some(x) => thread.push(x),
                None => return Ok(None),
            }
        }
        Ok(Some((thread, status)))
    }

    /// The first `j >= i` within depth with `↑p_ij[Q_j] ⊆ U`.
    pub fn find_dominating_level(
        &self,
        i: usize,
        q: impl Fn(usize) -> UpSet,
        u: &UpSet,
    ) -> Result<DominatingLevel, SystemError> {
        for j in i..=i + self.depth {
            if self.bond(i, j)?.up_image(&q(j)).is_subset(u) {
                return Ok(DominatingLevel::Found(j));
            }
        }
        Ok(DominatingLevel::Inconclusive { depth: self.depth })
    }
}

fn numbered(n: usize) -> Vec<String> {
    (0..n).map(|k| k.to_string()).collect()
}

/// `X_n = {0..n}` discrete, `p(x) = min(x, n)`, `ν_n = δ_0`. With a stop
/// level `s`, every level beyond `s` repeats `X_s` with identity bonds.
#[derive(Debug, Clone, Copy)]
pub struct Truncation {
    pub stop: Option<usize>,
}

impl ChainRule for Truncation {
    fn name(&self) -> String {
        "truncation".into()
    }

    fn space(&self, n: usize) -> FiniteSpace {
        let n = self.stop.map_or(n, |s| n.min(s));
        let labels = numbered(n + 1);
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        FiniteSpace::antichain(&refs)
    }

    fn bond(&self, n: usize) -> Vec<usize> {
        match self.stop {
            Some(s) if n >= s => (0..=s).collect(),
            _ => (0..=n + 1).map(|x| x.min(n)).collect(),
        }
    }

    fn weights(&self, n: usize) -> Option<Vec<ExtNonneg>> {
        let len = self.stop.map_or(n, |s| n.min(s)) + 1;
        let mut w = vec![ExtNonneg::zero(); len];
        w[0] = ExtNonneg::one();
        Some(w)
    }

    fn stable_from(&self) -> Option<usize> {
        self.stop
    }
}

/// `X_n` the `(n+1)`-point chain, i.e. the n-fold lift of a point, with `p`
/// collapsing the new top. The valuation puts mass 1 on the top point of
/// every level, so it moves up the chain.
#[derive(Debug, Clone, Copy)]
pub struct LiftChain {
    pub stop: Option<usize>,
}

impl ChainRule for LiftChain {
    fn name(&self) -> String {
        "lift-chain".into()
    }

    fn space(&self, n: usize) -> FiniteSpace {
        let n = self.stop.map_or(n, |s| n.min(s));
        let labels = numbered(n + 1);
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        FiniteSpace::chain(&refs)
    }

    fn bond(&self, n: usize) -> Vec<usize> {
        match self.stop {
            Some(s) if n >= s => (0..=s).collect(),
            _ => (0..=n + 1).map(|x| x.min(n)).collect(),
        }
    }

    fn weights(&self, n: usize) -> Option<Vec<ExtNonneg>> {
        let len = self.stop.map_or(n, |s| n.min(s)) + 1;
        let mut w = vec![ExtNonneg::zero(); len];
        w[len - 1] = ExtNonneg::one();
        Some(w)
    }

    fn stable_from(&self) -> Option<usize> {
        self.stop
    }
}

/// Looks up a built-in rule by name.
pub fn named_rule(name: &str, stop: Option<usize>) -> Option<Box<dyn ChainRule>> {
    match name {
        "truncation" => Some(Box::new(Truncation { stop })),
        "lift-chain" => Some(Box::new(LiftChain { stop })),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::DEFAULT_MAX_OPENS;

    #[test]
    fn truncation_without_stop_is_upper_bound() {
        let chain = LazyChain::new(Box::new(Truncation { stop: None }), 4);
        chain.check_to_depth().unwrap();
        chain.check_compatibility(DEFAULT_MAX_OPENS).unwrap();
        let (img, st) = chain.eventual_image(2).unwrap();
        assert!(img.is_full());
        assert_eq!(st, Status::UpperBound);
        let base = chain.space(0).unwrap().whole();
        assert_eq!(chain.cylinder_value(0, &base).unwrap(), Some(ExtNonneg::one()));
    }

    #[test]
    fn stop_certifies_exactness() {
        let chain = LazyChain::new(Box::new(Truncation { stop: Some(3) }), 4);
        chain.check_compatibility(DEFAULT_MAX_OPENS).unwrap();
        assert_eq!(chain.eventual_image(1).unwrap().1, Status::Exact);
        let (thread, st) = chain.steenrod_prefix().unwrap().unwrap();
        assert_eq!(thread, vec![0; 5]);
        assert_eq!(st, Status::Exact);
        // beyond the certificate's reach
        let short = LazyChain::new(Box::new(Truncation { stop: Some(30) }), 4);
        assert_eq!(short.eventual_image(1).unwrap().1, Status::UpperBound);
    }

    #[test]
    fn lift_chain_compatible_and_cylinders() {
        let chain = LazyChain::new(Box::new(LiftChain { stop: None }), 5);
        chain.check_compatibility(DEFAULT_MAX_OPENS).unwrap();
        let x1 = chain.space(1).unwrap();
        let top1 = x1.up_set_of(&["1"]).unwrap();
        assert_eq!(chain.cylinder_value(1, &top1).unwrap(), Some(ExtNonneg::one()));
        let x2 = chain.space(2).unwrap();
        let pulled = chain.bond(1, 2).unwrap().preimage_open(&top1);
        assert_eq!(pulled.as_set(), x2.up_set_of(&["1", "2"]).unwrap().as_set());
        let (eq, st) = chain.cylinder_eq((1, &top1), (2, &pulled)).unwrap();
        assert!(eq);
        assert_eq!(st, Status::UpperBound);
    }

    #[test]
    fn dominating_level_inconclusive_beyond_depth() {
        let chain = LazyChain::new(Box::new(Truncation { stop: None }), 3);
        // Q_n = X_n never shrinks into {0} at level 1
        let u = chain.space(1).unwrap().up_set(PointSet::from_indices(2, [0])).unwrap();
        let q = |n: usize| chain.space(n).unwrap().whole();
        assert_eq!(
            chain.find_dominating_level(1, q, &u).unwrap(),
            DominatingLevel::Inconclusive { depth: 3 }
        );
        let q0 = |n: usize| chain.space(n).unwrap().up_set(PointSet::from_indices(n + 1, [0])).unwrap();
        assert_eq!(chain.find_dominating_level(1, q0, &u).unwrap(), DominatingLevel::Found(1));
    }

    #[test]
    fn prefix_is_a_verified_chain() {
        let chain = LazyChain::new(Box::new(LiftChain { stop: None }), 3);
        let sys = chain.prefix(3).unwrap();
        assert_eq!(sys.len(), 4);
        assert_eq!(sys.bond(0, 3).graph(), &[0, 0, 0, 0]);
    }
}
