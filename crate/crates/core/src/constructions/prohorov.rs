use std::fmt;

use super::{ep_limit_valuation, threshold_label, ConstructionError, LimitValuation, Method};
use crate::order::UpSet;
use crate::projective::{EpSystem, LimitSpace, Presentation, ValuedSystem};
use crate::valuation::{check_valuation, first_difference, is_tight, mu_circ, thresholds_for, SetFunction, Threshold};
use crate::value::{way_below, ExtNonneg};

/// Where the compact witnesses of uniform tightness come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Supplier {
    /// Every up-set of the materialized limit.
    Exhaustive,
    /// Limits of the chains built by [`loccomp_certificate`]; chains only.
    QChain,
}

impl fmt::Display for Supplier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Supplier::Exhaustive => "exhaustive",
            Supplier::QChain => "q-chain",
        })
    }
}

/// One solved instance: `↑p_i[Q] ⊆ U` and `r <= ν_j•(↑p_j[Q])` for all `j ⊒ i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformWitness {
    pub index: usize,
    pub open: UpSet,
    pub threshold: Threshold,
    pub compact: UpSet,
}

/// Certificate of uniform tightness together with
/// `μ(Q) = inf_i ν_i•(↑p_i[Q])` on the up-sets of the limit.
#[derive(Debug, Clone)]
pub struct UniformTightness {
    pub supplier: Supplier,
    pub witnesses: Vec<UniformWitness>,
    pub mu: SetFunction,
}

/// A sub-system `Q_n ⊆ X_n` of up-sets over an explicit chain, grown from
/// the base `Q_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QChain {
    pub base_level: usize,
    pub sets: Vec<UpSet>,
}

// ν_j•(Q) for an up-set Q of a finite space is ν_j(Q): Q is its own
// smallest neighbourhood.
fn bullet_of_projection(vs: &ValuedSystem, limit: &LimitSpace, j: usize, q: &UpSet) -> ExtNonneg {
    let image = limit.projection(j).up_image(q);
    vs.valuation(j).eval(&image)
}

/// Decides uniform tightness of a compatible family over a materialized
/// limit and returns `μ`.
///
/// For each index `i`, open `U` of `X_i` and probed threshold below
/// `ν_i(U)`, the least (by cardinality, then canonically) witness is
/// reported. Also verifies `ν_i = p_i[μ∘]` for every `i`.
///
/// Compatibility is a precondition but is not re-checked before the
/// search, so an incompatible family over an empty limit is reported as
/// [`ConstructionError::NotUniformlyTight`].
pub fn uniform_tightness_check(
    vs: &ValuedSystem,
    limit: &LimitSpace,
    supplier: Supplier,
    max_opens: usize,
) -> Result<UniformTightness, ConstructionError> {
    let sys = vs.system();
    if supplier == Supplier::QChain && sys.presentation() != Presentation::ExplicitPrefix {
        return Err(ConstructionError::NotAChain);
    }
    let lspace = limit.space();
    let lopens = lspace.opens_bounded(max_opens)?;
    // g[i][k] = min_{j ⊒ i} ν_j•(↑p_j[Q_k])
    let per_level: Vec<Vec<ExtNonneg>> = (0..sys.len())
        .map(|j| lopens.iter().map(|q| bullet_of_projection(vs, limit, j, q)).collect())
        .collect();
    let g: Vec<Vec<ExtNonneg>> = (0..sys.len())
        .map(|i| {
            (0..lopens.len())
                .map(|k| {
                    sys.index()
                        .above(i)
                        .map(|j| per_level[j][k].clone())
                        .min()
                        .expect("i is above itself")
                })
                .collect()
        })
        .collect();

    let mut witnesses = Vec::new();
    for i in 0..sys.len() {
        let table = vs.valuation(i).tabulate_bounded(max_opens)?;
        let attained: Vec<&ExtNonneg> = table.iter().map(|(_, v)| v).collect();
        for (u, target) in table.iter() {
            let cylinder = limit.projection(i).preimage_open(u);
            for th in thresholds_for(target, attained.iter().copied()) {
                let compact = match supplier {
                    Supplier::Exhaustive => {
                        // g is monotone, so the candidate set is an initial
                        // segment question: take the first one that reaches r.
                        lopens
                            .iter()
                            .enumerate()
                            .find(|(k, q)| q.is_subset(&cylinder) && g[i][*k] >= *th.bound())
                            .map(|(_, q)| q.clone())
                    }
                    Supplier::QChain => {
                        let chain = certificate_for(vs, i, u, &th)?;
                        let q = limit.projection(i).preimage_open(&chain.sets[i]);
                        let k = lopens.binary_search(&q).expect("preimages of opens are opens");
                        (g[i][k] >= *th.bound()).then_some(q)
                    }
                };
                match compact {
                    Some(q) => witnesses.push(UniformWitness {
                        index: i,
                        open: u.clone(),
                        threshold: th,
                        compact: q,
                    }),
                    None => {
                        return Err(ConstructionError::NotUniformlyTight {
                            index: sys.index().label(i).to_string(),
                            open: sys.space(i).set_labels(u).into_iter().map(String::from).collect(),
                            threshold: threshold_label(&th),
                        })
                    }
                }
            }
        }
    }

    let mu_values = lopens
        .iter()
        .enumerate()
        .map(|(k, q)| {
            let inf = per_level.iter().map(|row| row[k].clone()).min().unwrap_or_else(ExtNonneg::zero);
            (q.as_set().clone(), inf)
        })
        .collect();
    let mu = SetFunction::new(lspace.clone(), mu_values)?;
    let nu = check_valuation(&mu_circ(&mu))?;
    for i in 0..sys.len() {
        let marginal = nu.image(limit.projection(i))?;
        if let Some(u) = first_difference(&marginal, vs.valuation(i), max_opens)? {
            return Err(ConstructionError::MarginalMismatch {
                index: sys.index().label(i).to_string(),
                open: sys.space(i).set_labels(&u).into_iter().map(String::from).collect(),
            });
        }
    }
    Ok(UniformTightness {
        supplier,
        witnesses,
        mu,
    })
}

/// The limit valuation `ν = μ∘` of a uniformly tight family.
///
/// Asserts the marginals, tightness of `ν`, and, when the system carries an
/// ep structure, equality with the ep-limit formula on every cylinder.
pub fn prohorov_limit(
    vs: &ValuedSystem,
    limit: LimitSpace,
    certificate: UniformTightness,
    max_points: usize,
    max_opens: usize,
) -> Result<LimitValuation, ConstructionError> {
    let table = mu_circ(&certificate.mu);
    let valuation = check_valuation(&table)?;
    let report = is_tight(&table);
    if !report.tight {
        return Err(ConstructionError::Disagreement("μ∘ is not tight".into()));
    }
    let lv = LimitValuation {
        limit,
        valuation,
        method: Method::Prohorov,
        tightness: Some(certificate),
    };
    lv.check_marginals(vs, max_opens)?;
    if let Ok(ep) = EpSystem::reconstruct(vs.system().clone()) {
        let other = ep_limit_valuation(vs, &ep, max_points, max_opens)?;
        if other.valuation.weights() != lv.valuation.weights() {
            return Err(ConstructionError::Disagreement("prohorov and ep-limit weights".into()));
        }
        if let Some(c) = lv.first_disagreement(&other)? {
            return Err(ConstructionError::Disagreement(format!("cylinder at level {}", c.level)));
        }
    }
    Ok(lv)
}

/// The chain `Q_n = ↑p_nm[Q_m]` for `n <= m` and `Q_n = p_mn⁻¹(Q_m)` above,
/// checked to be a sub-system of up-sets.
pub fn q_chain_from_base(vs: &ValuedSystem, m: usize, base: &UpSet) -> Result<QChain, ConstructionError> {
    let sys = vs.system();
    if sys.presentation() != Presentation::ExplicitPrefix {
        return Err(ConstructionError::NotAChain);
    }
    for n in 0..sys.len() {
        sys.space(n)
            .sobriety_witness()
            .map_err(|_| ConstructionError::NotSober(n.to_string()))?;
    }
    let sets: Vec<UpSet> = (0..sys.len())
        .map(|n| {
            if n <= m {
                sys.bond(n, m).up_image(base)
            } else {
                sys.bond(m, n).preimage_open(base)
            }
        })
        .collect();
    for n in 0..sys.len().saturating_sub(1) {
        if !sys.bond(n, n + 1).image(&sets[n + 1]).is_subset(&sets[n]) {
            return Err(ConstructionError::Disagreement(format!("Q-chain is not a sub-system at level {n}")));
        }
    }
    Ok(QChain { base_level: m, sets })
}

/// For `r ≪ ν_i(U)`: the least up-set `Q_i ⊆ U` (by cardinality, then
/// canonically) with `r ≪ ν_i(Q_i)`, grown into a chain by
/// [`q_chain_from_base`].
pub fn loccomp_certificate(vs: &ValuedSystem, i: usize, u: &UpSet, r: &ExtNonneg) -> Result<QChain, ConstructionError> {
    let nu = vs.valuation(i);
    let value = nu.eval(u);
    if !way_below(r, &value) {
        return Err(ConstructionError::NoWitness { r: r.clone(), value });
    }
    let base = least_inside(vs, i, u, |v| way_below(r, v))?;
    q_chain_from_base(vs, i, &base)
}

// The supremum probe `<s` needs `s <= ν_i(Q)` rather than `r ≪ ν_i(Q)`.
fn certificate_for(vs: &ValuedSystem, i: usize, u: &UpSet, th: &Threshold) -> Result<QChain, ConstructionError> {
    match th {
        Threshold::Value(r) => loccomp_certificate(vs, i, u, r),
        Threshold::Below(s) => {
            let base = least_inside(vs, i, u, |v| s <= v)?;
            q_chain_from_base(vs, i, &base)
        }
    }
}

fn least_inside(
    vs: &ValuedSystem,
    i: usize,
    u: &UpSet,
    enough: impl Fn(&ExtNonneg) -> bool,
) -> Result<UpSet, ConstructionError> {
    let nu = vs.valuation(i);
    let candidates = vs.system().space(i).opens_within(u, crate::order::DEFAULT_MAX_OPENS)?;
    candidates
        .into_iter()
        .find(|q| enough(&nu.eval(q)))
        .ok_or_else(|| ConstructionError::NoWitness {
            r: ExtNonneg::zero(),
            value: nu.eval(u),
        })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::order::{FiniteSpace, MonotoneMap, DEFAULT_MAX_OPENS, DEFAULT_MAX_POINTS};
    use crate::projective::{materialize_limit, DirectedIndex, ProjectiveSystem};
    use crate::valuation::Valuation;

    fn v(s: &str) -> ExtNonneg {
        s.parse().unwrap()
    }

    fn constant(nu: &Valuation, levels: usize) -> ValuedSystem {
        let d = nu.space().clone();
        let sys = ProjectiveSystem::chain(vec![d.clone(); levels], vec![MonotoneMap::identity(d); levels - 1]).unwrap();
        ValuedSystem::from_top(Arc::new(sys), nu).unwrap()
    }

    fn truncation(levels: usize) -> ValuedSystem {
        let spaces: Vec<Arc<FiniteSpace>> = (0..levels)
            .map(|n| {
                let labels: Vec<String> = (0..=n).map(|k| k.to_string()).collect();
                Arc::new(FiniteSpace::from_covers(labels, &[]).unwrap())
            })
            .collect();
        let bonds = (0..levels - 1)
            .map(|n| MonotoneMap::new(spaces[n + 1].clone(), spaces[n].clone(), (0..=n + 1).map(|x| x.min(n)).collect()).unwrap())
            .collect();
        let sys = Arc::new(ProjectiveSystem::chain(spaces.clone(), bonds).unwrap());
        let top = Valuation::point_mass(spaces[levels - 1].clone(), 0, v("1"));
        ValuedSystem::from_top(sys, &top).unwrap()
    }

    fn run(vs: &ValuedSystem, supplier: Supplier) -> Result<LimitValuation, ConstructionError> {
        let limit = materialize_limit(vs.system(), DEFAULT_MAX_POINTS).unwrap();
        let cert = uniform_tightness_check(vs, &limit, supplier, DEFAULT_MAX_OPENS)?;
        prohorov_limit(vs, limit, cert, DEFAULT_MAX_POINTS, DEFAULT_MAX_OPENS)
    }

    #[test]
    fn constant_system_recovers_valuation() {
        let d = Arc::new(FiniteSpace::diamond());
        let nu = Valuation::from_labels(d, &[("a", v("1/2")), ("top", v("2"))]).unwrap();
        let vs = constant(&nu, 3);
        for supplier in [Supplier::Exhaustive, Supplier::QChain] {
            let lv = run(&vs, supplier).unwrap();
            assert_eq!(lv.valuation().weights(), nu.weights());
            let cert = lv.tightness().unwrap();
            // the full-mass witness for U = X is the up-closure of the support
            let x = lv.limit().space().whole();
            let w = cert
                .witnesses
                .iter()
                .find(|w| w.index == 0 && *w.open == *vs.system().space(0).whole() && matches!(w.threshold, Threshold::Below(_)))
                .unwrap();
            let support = lv.limit().space().upward_closure(&lv.valuation().support_points());
            assert_eq!(w.compact, support);
            assert!(w.compact.is_subset(&x));
        }
    }

    #[test]
    fn truncation_delta_zero() {
        let vs = truncation(4);
        let lv = run(&vs, Supplier::Exhaustive).unwrap();
        let lim = lv.limit();
        let zero = lim.thread_index(&[0, 0, 0, 0]).unwrap();
        assert_eq!(lv.valuation(), &Valuation::point_mass(lim.space().clone(), zero, v("1")));
        for i in 0..4 {
            let base = vs.system().space(i).neighbourhood(0);
            let c = vs.system().cylinder(i, base);
            assert_eq!(lv.eval_cylinder(&c), v("1"));
        }
    }

    #[test]
    fn zero_family_uses_empty_witnesses() {
        let d = Arc::new(FiniteSpace::diamond());
        let vs = constant(&Valuation::zero(d), 2);
        let lv = run(&vs, Supplier::Exhaustive).unwrap();
        assert!(lv.valuation().is_zero());
        assert!(lv.tightness().unwrap().witnesses.iter().all(|w| w.compact.is_empty()));
    }

    fn empty_top(vals: [ExtNonneg; 2]) -> ValuedSystem {
        // two incomparable indices below a top with an empty space
        let poset = FiniteSpace::from_labeled_covers(&["a", "b", "t"], &[("a", "t"), ("b", "t")]).unwrap();
        let index = DirectedIndex::new(Arc::new(poset)).unwrap();
        let pt = Arc::new(FiniteSpace::point());
        let empty = Arc::new(FiniteSpace::empty());
        let none = MonotoneMap::new(empty.clone(), pt.clone(), vec![]).unwrap();
        let sys = ProjectiveSystem::new(
            index,
            vec![pt.clone(), pt.clone(), empty.clone()],
            vec![(0, 2, none.clone()), (1, 2, none)],
        )
        .unwrap();
        let [a, b] = vals;
        let vals = vec![
            Valuation::point_mass(pt.clone(), 0, a),
            Valuation::point_mass(pt, 0, b),
            Valuation::zero(empty),
        ];
        ValuedSystem::new(Arc::new(sys), vals).unwrap()
    }

    #[test]
    fn empty_limit_zero_family() {
        let vs = empty_top([v("0"), v("0")]);
        assert!(run(&vs, Supplier::Exhaustive).unwrap().valuation().is_zero());
    }

    #[test]
    fn empty_limit_nonzero_family_is_not_uniformly_tight() {
        let vs = empty_top([v("1"), v("0")]);
        assert!(vs.check_compatibility(DEFAULT_MAX_OPENS).is_err());
        let limit = materialize_limit(vs.system(), DEFAULT_MAX_POINTS).unwrap();
        assert!(limit.is_empty());
        let err = uniform_tightness_check(&vs, &limit, Supplier::Exhaustive, DEFAULT_MAX_OPENS).unwrap_err();
        assert!(matches!(err, ConstructionError::NotUniformlyTight { ref index, .. } if index == "a"));
    }

    #[test]
    fn loccomp_examples() {
        let d = Arc::new(FiniteSpace::diamond());
        let nu = Valuation::from_labels(d.clone(), &[("a", v("1/2")), ("b", v("1/2"))]).unwrap();
        let vs = constant(&nu, 3);
        // r = 0 gives empty sets
        let c = loccomp_certificate(&vs, 1, &d.whole(), &v("0")).unwrap();
        assert!(c.sets.iter().all(|q| q.is_empty()));
        // r = ν(X) has no witness: it is not way below itself
        assert!(matches!(
            loccomp_certificate(&vs, 1, &d.whole(), &v("1")),
            Err(ConstructionError::NoWitness { .. })
        ));
        let c = loccomp_certificate(&vs, 1, &d.whole(), &v("1/2")).unwrap();
        assert_eq!(c.sets[1], d.up_set_of(&["a", "b", "top"]).unwrap());

        let vs = truncation(3);
        let u = vs.system().space(1).neighbourhood(0);
        let c = loccomp_certificate(&vs, 1, &u, &v("1/2")).unwrap();
        let x2 = vs.system().space(2);
        assert_eq!(c.sets[2], x2.up_set_of(&["0"]).unwrap());
        assert_eq!(c.sets[0], vs.system().space(0).up_set_of(&["0"]).unwrap());
    }
}
