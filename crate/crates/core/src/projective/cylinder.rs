use super::{LimitSpace, ProjectiveSystem};
use crate::order::UpSet;
use crate::pointset::PointSet;

/// The open `p_level⁻¹(base)` of the limit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CylinderOpen {
    pub level: usize,
    pub base: UpSet,
}

impl ProjectiveSystem {
    /// The cylinder over `base` at `level`, in normal form: the first index
    /// at which it is expressible, with the least base there.
    pub fn cylinder(&self, level: usize, base: UpSet) -> CylinderOpen {
        let trace = self.cylinder_trace(&CylinderOpen { level, base });
        self.normalize_trace(&trace)
    }

    /// The cylinder as a set of points of the top space, which is how the
    /// limit of a finite system is represented up to isomorphism.
    pub fn cylinder_trace(&self, c: &CylinderOpen) -> PointSet {
        self.bond(c.level, self.top()).preimage(&c.base)
    }

    fn normalize_trace(&self, trace: &PointSet) -> CylinderOpen {
        let top = self.top();
        for m in 0..self.len() {
            let p = self.bond(m, top);
            let base = p.up_image(trace);
            if p.preimage(&base) == *trace {
                return CylinderOpen { level: m, base };
            }
        }
        unreachable!("every cylinder is expressible at the top index")
    }

    /// Pushes both cylinders to the chosen upper bound of their levels and
    /// intersects the bases there.
    pub fn cylinder_meet(&self, a: &CylinderOpen, b: &CylinderOpen) -> CylinderOpen {
        let k = self.index().upper_bound(a.level, b.level);
        let base = self
            .bond(a.level, k)
            .preimage_open(&a.base)
            .intersection(&self.bond(b.level, k).preimage_open(&b.base));
        self.cylinder(k, base)
    }

    pub fn cylinder_join(&self, a: &CylinderOpen, b: &CylinderOpen) -> CylinderOpen {
        let k = self.index().upper_bound(a.level, b.level);
        let base = self
            .bond(a.level, k)
            .preimage_open(&a.base)
            .union(&self.bond(b.level, k).preimage_open(&b.base));
        self.cylinder(k, base)
    }

    /// Equality in the limit: both bases agree on the eventual images once
    /// pushed to a common level.
    pub fn cylinder_eq(&self, a: &CylinderOpen, b: &CylinderOpen) -> bool {
        let k = self.index().upper_bound(a.level, b.level);
        let image = self.eventual_image(k);
        let ua = self.bond(a.level, k).preimage(&a.base).intersection(&image);
        let ub = self.bond(b.level, k).preimage(&b.base).intersection(&image);
        ua == ub
    }

    pub fn full_cylinder(&self) -> CylinderOpen {
        self.cylinder(0, self.space(0).whole())
    }
}

impl LimitSpace {
    /// The set of threads a cylinder denotes.
    pub fn denote(&self, c: &CylinderOpen) -> UpSet {
        self.projection(c.level).preimage_open(&c.base)
    }
}

#[cfg(test)]
mod tests {
    use super::super::materialize_limit;
    use super::super::tests::truncation_chain;
    use super::*;
    use crate::order::DEFAULT_MAX_POINTS;
    use std::sync::Arc;

    #[test]
    fn algebra_matches_materialized_limit() {
        let sys = Arc::new(truncation_chain(4));
        let lim = materialize_limit(&sys, DEFAULT_MAX_POINTS).unwrap();
        let mut cylinders = Vec::new();
        for level in 0..4 {
            for base in sys.space(level).opens().unwrap() {
                cylinders.push(sys.cylinder(level, base));
            }
        }
        for a in &cylinders {
            assert_eq!(sys.cylinder_meet(a, &sys.full_cylinder()), *a);
            assert_eq!(sys.cylinder_join(a, a), *a);
            for b in &cylinders {
                let meet = sys.cylinder_meet(a, b);
                let join = sys.cylinder_join(a, b);
                assert_eq!(lim.denote(&meet), lim.denote(a).intersection(&lim.denote(b)));
                assert_eq!(lim.denote(&join), lim.denote(a).union(&lim.denote(b)));
                assert_eq!(sys.cylinder_eq(a, b), lim.denote(a) == lim.denote(b));
                assert_eq!(sys.cylinder_eq(a, b), a == b);
            }
        }
    }

    #[test]
    fn normal_form_uses_least_level() {
        let sys = truncation_chain(4);
        // {0} at level 3 is already expressible at level 1 as {0}
        let c = sys.cylinder(3, sys.space(3).up_set(PointSet::from_indices(4, [0])).unwrap());
        assert_eq!(c.level, 1);
        assert_eq!(c.base.to_vec(), vec![0]);
        let full = sys.cylinder(2, sys.space(2).whole());
        assert_eq!(full.level, 0);
    }

    #[test]
    fn meet_of_levels_zero_and_one() {
        let sys = Arc::new(truncation_chain(3));
        let lim = materialize_limit(&sys, DEFAULT_MAX_POINTS).unwrap();
        let a = CylinderOpen {
            level: 0,
            base: sys.space(0).whole(),
        };
        let b = CylinderOpen {
            level: 1,
            base: sys.space(1).up_set(PointSet::from_indices(2, [1])).unwrap(),
        };
        let m = sys.cylinder_meet(&a, &b);
        assert_eq!(lim.denote(&m), lim.denote(&b));
    }
}
