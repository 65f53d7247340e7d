//! Worked demonstrations: an empty limit of nonempty spaces, the zero
//! criterion for solvability, an ep-chain where mass moves up, and thread
//! search on random chains.

use std::sync::Arc;

use crate::constructions::{
    ep_limit_valuation, prohorov_limit, uniform_tightness_check, ConstructionError, Supplier,
};
use crate::generate;
use crate::order::{FiniteSpace, MonotoneMap, DEFAULT_MAX_OPENS, DEFAULT_MAX_POINTS};
use crate::projective::lazy::{LazyChain, LiftChain};
use crate::projective::{
    materialize_limit, steenrod_nonempty, DirectedIndex, EpSystem, ProjectiveSystem, SteenrodOutcome, SystemError,
    ValuedSystem,
};
use crate::valuation::Valuation;

pub const NAMES: [&str; 4] = ["injections-empty-limit", "zero-criterion", "ep-lift-chain", "steenrod-random"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GalleryReport {
    pub name: String,
    pub construction: String,
    pub result: String,
    pub illustrates: String,
    pub ok: bool,
    pub details: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GalleryOptions {
    pub seed: u64,
    pub depth: usize,
}

impl Default for GalleryOptions {
    fn default() -> Self {
        GalleryOptions { seed: 0, depth: 6 }
    }
}

/// Runs one named demonstration; `None` for an unknown name.
pub fn run(name: &str, opts: GalleryOptions) -> Option<Result<GalleryReport, ConstructionError>> {
    Some(match name {
        "injections-empty-limit" => injections_empty_limit(),
        "zero-criterion" => zero_criterion(),
        "ep-lift-chain" => ep_lift_chain(opts.depth),
        "steenrod-random" => steenrod_random(opts.seed, 200),
        _ => return None,
    })
}

fn injections(domain: &[usize], codomain: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in domain {
        out = out
            .into_iter()
            .flat_map(|f: Vec<usize>| {
                (0..codomain)
                    .filter(|y| !f.contains(y))
                    .map(|y| {
                        let mut g = f.clone();
                        g.push(y);
                        g
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    out
}

/// The system over the finite subsets `J` of `{0..domain-1}` (bitmask
/// indices) with `X_J` the discrete space of injections `J → {0..codomain-1}`
/// and restriction as bonds. Its top space, hence its limit, is empty as
/// soon as `domain > codomain`, while every space below stays nonempty when
/// `J` fits.
pub fn injections_system(domain: usize, codomain: usize) -> Result<ProjectiveSystem, SystemError> {
    let n = 1usize << domain;
    let coords = |mask: usize| (0..domain).filter(|k| mask >> k & 1 == 1).collect::<Vec<_>>();
    let names = (0..n)
        .map(|mask| {
            let parts: Vec<String> = coords(mask).iter().map(|k| k.to_string()).collect();
            format!("{{{}}}", parts.join(","))
        })
        .collect();
    let index = DirectedIndex::new(Arc::new(FiniteSpace::from_le_fn(names, |a, b| a & !b == 0)))?;
    let maps: Vec<Vec<Vec<usize>>> = (0..n).map(|mask| injections(&coords(mask), codomain)).collect();
    let spaces: Vec<Arc<FiniteSpace>> = (0..n)
        .map(|mask| {
            let c = coords(mask);
            let labels = maps[mask]
                .iter()
                .map(|f| {
                    let parts: Vec<String> = c.iter().zip(f).map(|(x, y)| format!("{x}:{y}")).collect();
                    format!("{{{}}}", parts.join(","))
                })
                .collect();
            FiniteSpace::from_covers(labels, &[]).map(Arc::new)
        })
        .collect::<Result<_, _>>()?;
    let mut bonds = Vec::new();
    for small in 0..n {
        for big in (0..n).filter(|&b| b != small && small & !b == 0) {
            let cb = coords(big);
            let keep: Vec<usize> = coords(small)
                .iter()
                .map(|k| cb.iter().position(|c| c == k).expect("subset"))
                .collect();
            let graph = maps[big]
                .iter()
                .map(|f| {
                    let r: Vec<usize> = keep.iter().map(|&p| f[p]).collect();
                    maps[small].iter().position(|g| *g == r).expect("restrictions of injections are injections")
                })
                .collect();
            bonds.push((small, big, MonotoneMap::new(spaces[big].clone(), spaces[small].clone(), graph)?));
        }
    }
    ProjectiveSystem::new(index, spaces, bonds)
}

/// Checks both directions of "a family over an empty limit is solvable iff
/// every member is zero" on `injections_system(domain, codomain)`.
fn zero_criterion_on(domain: usize, codomain: usize, details: &mut Vec<String>) -> Result<bool, ConstructionError> {
    let sys = Arc::new(injections_system(domain, codomain)?);
    let limit = materialize_limit(&sys, DEFAULT_MAX_POINTS)?;
    let mut ok = limit.is_empty();

    let zeros = sys.spaces().iter().map(|s| Valuation::zero(s.clone())).collect();
    let vs = ValuedSystem::new(sys.clone(), zeros)?;
    let cert = uniform_tightness_check(&vs, &limit, Supplier::Exhaustive, DEFAULT_MAX_OPENS)?;
    let lv = prohorov_limit(&vs, limit.clone(), cert, DEFAULT_MAX_POINTS, DEFAULT_MAX_OPENS)?;
    ok &= lv.valuation().is_zero();
    details.push(format!("{domain}→{codomain}: zero family solved by the zero valuation"));

    // a point mass at any level with points, pushed down, zero elsewhere
    let mut refused = 0;
    let mut candidates = 0;
    for i in (0..sys.len()).filter(|&i| !sys.space(i).is_empty()) {
        candidates += 1;
        let delta = Valuation::point_mass(sys.space(i).clone(), 0, crate::value::ExtNonneg::one());
        let vals = (0..sys.len())
            .map(|k| {
                if sys.index().le(k, i) {
                    delta.image(sys.bond(k, i))
                } else {
                    Ok(Valuation::zero(sys.space(k).clone()))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        let vs = ValuedSystem::new(sys.clone(), vals)?;
        let incompatible = vs.check_compatibility(DEFAULT_MAX_OPENS).is_err();
        let not_tight = matches!(
            uniform_tightness_check(&vs, &limit, Supplier::Exhaustive, DEFAULT_MAX_OPENS),
            Err(ConstructionError::NotUniformlyTight { .. })
        );
        if incompatible && not_tight {
            refused += 1;
        }
    }
    ok &= refused == candidates;
    details.push(format!(
        "{domain}→{codomain}: {refused}/{candidates} nonzero families refused (incompatible, not uniformly tight)"
    ));
    Ok(ok)
}

fn injections_empty_limit() -> Result<GalleryReport, ConstructionError> {
    let sys = injections_system(3, 2)?;
    let arc = Arc::new(sys.clone());
    let limit = materialize_limit(&arc, DEFAULT_MAX_POINTS)?;
    let mut details: Vec<String> = (0..sys.len())
        .map(|i| format!("X_{} has {} points", sys.index().label(i), sys.space(i).len()))
        .collect();
    let steenrod = steenrod_nonempty(&sys)?;
    if let SteenrodOutcome::Empty { index } = &steenrod {
        details.push(format!("thread search stops at the empty space X_{index}"));
    }
    let ok = zero_criterion_on(3, 2, &mut details)? && limit.is_empty();
    Ok(GalleryReport {
        name: "injections-empty-limit".into(),
        construction: "injections J → {0,1} over the subsets J of {0,1,2}, restriction bonds".into(),
        result: if ok {
            "limit empty; solvable iff all marginals zero: demonstrated".into()
        } else {
            "criterion not demonstrated".into()
        },
        illustrates: "a projective system of injective maps with empty limit, finite analogue".into(),
        ok,
        details,
    })
}

fn zero_criterion() -> Result<GalleryReport, ConstructionError> {
    let mut details = Vec::new();
    let mut ok = true;
    for (d, c) in [(2, 1), (3, 2), (4, 3)] {
        ok &= zero_criterion_on(d, c, &mut details)?;
    }
    // a nonempty limit admits nonzero solutions
    let sys = Arc::new(injections_system(2, 2)?);
    let top = Valuation::point_mass(sys.space(sys.top()).clone(), 0, crate::value::ExtNonneg::one());
    let vs = ValuedSystem::from_top(sys.clone(), &top)?;
    let limit = materialize_limit(&sys, DEFAULT_MAX_POINTS)?;
    let cert = uniform_tightness_check(&vs, &limit, Supplier::Exhaustive, DEFAULT_MAX_OPENS)?;
    let lv = prohorov_limit(&vs, limit, cert, DEFAULT_MAX_POINTS, DEFAULT_MAX_OPENS)?;
    ok &= !lv.valuation().is_zero();
    details.push(format!("2→2: nonempty limit with {} threads carries a point mass", lv.limit().len()));
    Ok(GalleryReport {
        name: "zero-criterion".into(),
        construction: "injection systems d → d-1 for d = 2, 3, 4, and 2 → 2 as a control".into(),
        result: if ok {
            "empty limits: solvable iff every valuation is zero, both directions".into()
        } else {
            "criterion failed".into()
        },
        illustrates: "solvability over an empty limit forces every valuation to be zero".into(),
        ok,
        details,
    })
}

fn ep_lift_chain(depth: usize) -> Result<GalleryReport, ConstructionError> {
    let lazy = LazyChain::new(Box::new(LiftChain { stop: None }), depth);
    lazy.check_to_depth()?;
    lazy.check_compatibility(DEFAULT_MAX_OPENS)?;
    let sys = Arc::new(lazy.prefix(depth)?);
    let vals = (0..=depth)
        .map(|n| lazy.valuation(n).map(|v| v.expect("the rule carries valuations")))
        .collect::<Result<Vec<_>, _>>()?;
    let vs = ValuedSystem::new(sys.clone(), vals)?;
    let ep = EpSystem::reconstruct(sys.clone())?;
    let lv = ep_limit_valuation(&vs, &ep, DEFAULT_MAX_POINTS, DEFAULT_MAX_OPENS)?;
    let mut checked = 0;
    let mut ok = true;
    for level in 0..=depth {
        for base in sys.space(level).opens()? {
            let lazy_value = lazy.cylinder_value(level, &base)?.expect("valued");
            let c = sys.cylinder(level, base);
            ok &= lv.eval_cylinder(&c) == lazy_value;
            checked += 1;
        }
    }
    let top_thread = lv.valuation().support_points().first().map(|t| lv.limit().space().label(t).to_string());
    Ok(GalleryReport {
        name: "ep-lift-chain".into(),
        construction: format!("chains 0 < 1 < … < n with the top collapsed, mass 1 on the top, levels 0..={depth}"),
        result: format!(
            "{checked} cylinders agree with the level valuations; limit mass sits on thread {}",
            top_thread.unwrap_or_default()
        ),
        illustrates: "the valuation on an ep-limit as a supremum along the embeddings".into(),
        ok,
        details: vec![format!("limit has {} threads", lv.limit().len())],
    })
}

fn steenrod_random(seed: u64, count: usize) -> Result<GalleryReport, ConstructionError> {
    let mut rng = generate::rng(seed);
    let mut found = 0;
    for _ in 0..count {
        let sys = generate::random_chain(&mut rng, 5, 5);
        if let SteenrodOutcome::Thread(t) = steenrod_nonempty(&sys)? {
            let ok = (0..sys.len()).all(|i| sys.index().above(i).all(|j| sys.bond(i, j).apply(t[j]) == t[i]));
            if ok {
                found += 1;
            }
        }
    }
    Ok(GalleryReport {
        name: "steenrod-random".into(),
        construction: format!("{count} random chains of nonempty posets, seed {seed}"),
        result: format!("{found}/{count} chains yield a thread"),
        illustrates: "limits of chains of nonempty finite spaces are nonempty".into(),
        ok: found == count,
        details: vec![],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn injections_counts() {
        let sys = injections_system(3, 2).unwrap();
        let sizes: Vec<usize> = (0..8).map(|m| sys.space(m).len()).collect();
        assert_eq!(sizes, vec![1, 2, 2, 2, 2, 2, 2, 0]);
        assert_eq!(sys.space(3).label(0), "{0:0,1:1}");
    }

    #[test]
    fn every_entry_passes() {
        for name in NAMES {
            let r = run(name, GalleryOptions::default()).unwrap().unwrap();
            assert!(r.ok, "{name}: {r:?}");
        }
        let r = run("injections-empty-limit", GalleryOptions::default()).unwrap().unwrap();
        assert_eq!(r.result, "limit empty; solvable iff all marginals zero: demonstrated");
        assert!(run("nope", GalleryOptions::default()).is_none());
    }
}
