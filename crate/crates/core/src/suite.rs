//! Seeded property suites over random and exhaustive inputs. Each suite
//! returns the number of cases run and a description of every failure.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::Rng;

use crate::constructions::{
    dk_product, ep_limit_valuation, prohorov_limit, uniform_tightness_check, MarginalFamily, Supplier,
};
use crate::gallery;
use crate::generate::{self, all_posets};
use crate::order::{product_space, FiniteSpace, UpSet, DEFAULT_MAX_POINTS};
use crate::projective::{
    materialize_limit, steenrod_nonempty, upper_adjoint, EpSystem, SteenrodOutcome, ValuedSystem,
};
use crate::valuation::{check_valuation, decompose_simple, is_tight, mu_circ, nu_bullet, Threshold};

/// Opens enumerated per lattice before falling back to weight comparisons.
pub const SUITE_MAX_OPENS: usize = 1 << 12;

/// Bound for the cross-checks inside each product construction; the lifted
/// products reach 125 points, where a full scan is out of reach anyway.
const PRODUCT_INTERNAL_OPENS: usize = 1 << 9;

#[derive(Debug, Default)]
struct Log {
    failures: Vec<String>,
    notes: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub id: u8,
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
    /// Remarks about how the cases were checked.
    pub notes: Vec<String>,
    pub elapsed: Duration,
    /// Wall-clock budget for the suite.
    pub budget: Duration,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.elapsed <= self.budget
    }
}

pub const IDS: [u8; 8] = [1, 2, 3, 4, 5, 6, 7, 8];

/// Runs suite `id` (1 to 8) with the given seed.
pub fn run(id: u8, seed: u64) -> Option<SuiteOutcome> {
    let (name, budget, f): (&'static str, u64, fn(u64, &mut Log) -> usize) = match id {
        1 => ("valuation axioms", 30, axioms),
        2 => ("largest open inside a cylinder", 30, adjoints),
        3 => ("ep-limit marginals", 60, ep_limits),
        4 => ("products via lifts", 60, products),
        5 => ("tightness", 30, tightness),
        6 => ("limits of uniformly tight families", 60, prohorov),
        7 => ("threads and empty limits", 30, steenrod),
        8 => ("local finiteness", 10, local_finiteness),
        _ => return None,
    };
    let start = Instant::now();
    let mut log = Log::default();
    let cases = f(seed.wrapping_add(u64::from(id)), &mut log);
    Some(SuiteOutcome {
        id,
        name,
        cases,
        failures: log.failures,
        notes: log.notes,
        elapsed: start.elapsed(),
        budget: Duration::from_secs(budget),
    })
}

/// Runs the selected suites concurrently.
pub fn run_all(ids: &[u8], seed: u64) -> Vec<SuiteOutcome> {
    std::thread::scope(|s| {
        let handles: Vec<_> = ids.iter().map(|&id| s.spawn(move || run(id, seed))).collect();
        handles
            .into_iter()
            .filter_map(|h| h.join().expect("suite thread panicked"))
            .collect()
    })
}

fn axioms(seed: u64, log: &mut Log) -> usize {
    let mut rng = generate::rng(seed);
    let cases = 500;
    for case in 0..cases {
        let n = rng.random_range(0..=8);
        let density = rng.random_range(0.0..0.6);
        let space = Arc::new(generate::random_poset(&mut rng, n, density));
        let nu = generate::random_valuation(&mut rng, &space, 0.3);
        let table = match nu.tabulate() {
            Ok(t) => t,
            Err(e) => {
                log.failures.push(format!("case {case}: {e}"));
                continue;
            }
        };
        match check_valuation(&table) {
            Ok(back) if back == nu => {}
            Ok(_) => log.failures.push(format!("case {case}: checked valuation differs")),
            Err(e) => log.failures.push(format!("case {case}: {e}")),
        }
        match decompose_simple(&table) {
            Ok(w) if w == nu.weights() => {}
            other => log.failures.push(format!("case {case}: decomposition {other:?}")),
        }
    }
    cases
}

fn adjoints(seed: u64, log: &mut Log) -> usize {
    let mut rng = generate::rng(seed);
    let mut cases = 0;
    while cases < 100 {
        let k = rng.random_range(2..=4);
        let sys = Arc::new(generate::random_finite_system(&mut rng, k, 2, 3));
        let Ok(limit) = materialize_limit(&sys, DEFAULT_MAX_POINTS) else {
            continue;
        };
        if limit.len() > 10 {
            continue;
        }
        cases += 1;
        let idx = sys.index();
        let opens = limit.space().opens().expect("at most 10 threads");
        for u in &opens {
            let star: Vec<UpSet> = (0..sys.len()).map(|i| upper_adjoint(&limit, i, u)).collect();
            let mut union = limit.space().empty_set();
            for i in 0..sys.len() {
                let back = limit.projection(i).preimage(&star[i]);
                if !back.is_subset(u) {
                    log.failures.push(format!("case {cases}: p_i⁻¹(p_i*(U)) escapes U"));
                }
                union.union_with(&back);
                for j in idx.above(i) {
                    if !sys.bond(i, j).preimage(&star[i]).is_subset(&star[j]) {
                        log.failures.push(format!("case {cases}: item 1 fails for {} ⊑ {}", idx.label(i), idx.label(j)));
                    }
                    if !back.is_subset(&limit.projection(j).preimage(&star[j])) {
                        log.failures.push(format!("case {cases}: item 2 fails for {} ⊑ {}", idx.label(i), idx.label(j)));
                    }
                }
            }
            if union != *u.as_set() {
                log.failures.push(format!("case {cases}: cylinders do not exhaust an open"));
            }
        }
    }
    cases
}

fn pushed_family(rng: &mut impl Rng, sys: &Arc<crate::projective::ProjectiveSystem>) -> ValuedSystem {
    let top = generate::random_valuation(rng, sys.space(sys.top()), 0.3);
    ValuedSystem::from_top(sys.clone(), &top).expect("pushing down is compatible")
}

fn ep_limits(seed: u64, log: &mut Log) -> usize {
    let mut rng = generate::rng(seed);
    let cases = 100;
    for case in 0..cases {
        let levels = rng.random_range(1..=5);
        let sys = Arc::new(generate::random_ep_chain(&mut rng, levels, 6));
        let vs = pushed_family(&mut rng, &sys);
        let result = EpSystem::reconstruct(sys.clone())
            .map_err(|e| e.to_string())
            .and_then(|ep| ep_limit_valuation(&vs, &ep, DEFAULT_MAX_POINTS, SUITE_MAX_OPENS).map_err(|e| e.to_string()));
        let lv = match result {
            Ok(lv) => lv,
            Err(e) => {
                log.failures.push(format!("case {case}: {e}"));
                continue;
            }
        };
        for i in 0..sys.len() {
            let marginal = lv.marginal(i);
            let opens = sys.space(i).opens().expect("at most 6 points");
            if let Some(u) = opens.iter().find(|u| marginal.eval(u) != vs.valuation(i).eval(u)) {
                log.failures.push(format!("case {case}: level {i} differs on {:?}", sys.space(i).set_labels(u)));
            }
        }
    }
    cases
}

/// All multisets of size `k` drawn from `0..n`, as sorted index lists.
fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    multisets(n, k - 1)
        .into_iter()
        .flat_map(|m| {
            let start = m.last().copied().unwrap_or(0);
            (start..n).map(move |x| {
                let mut m = m.clone();
                m.push(x);
                m
            })
        })
        .collect()
}

fn products(seed: u64, log: &mut Log) -> usize {
    let mut rng = generate::rng(seed);
    let spaces: Vec<Arc<FiniteSpace>> = (1..=4).flat_map(all_posets).map(Arc::new).collect();
    let mut cases = 0;
    let (mut exhaustive, mut by_weights) = (0, 0);
    for k in 2..=3 {
        for pick in multisets(spaces.len(), k) {
            cases += 1;
            let factors: Vec<Arc<FiniteSpace>> = pick.iter().map(|&i| spaces[i].clone()).collect();
            let (prod, _) = product_space(&factors, DEFAULT_MAX_POINTS).expect("at most 64 points");
            let joint = generate::random_valuation(&mut rng, &prod, 0.5);
            let outcome = MarginalFamily::from_joint(factors, &joint)
                .and_then(|fam| dk_product(&fam, DEFAULT_MAX_POINTS, PRODUCT_INTERNAL_OPENS, 256));
            let pv = match outcome {
                Ok(pv) => pv,
                Err(e) => {
                    log.failures.push(format!("factors {pick:?}: {e}"));
                    continue;
                }
            };
            if pv.valuation.weights() != joint.weights() {
                log.failures.push(format!("factors {pick:?}: weights differ"));
                continue;
            }
            // brute force on the opens of the product where they can be listed
            match prod.opens_bounded(SUITE_MAX_OPENS) {
                Ok(opens) => {
                    exhaustive += 1;
                    if let Some(u) = opens.iter().find(|u| pv.valuation.eval(u) != joint.eval(u)) {
                        log.failures.push(format!("factors {pick:?}: differs on {:?}", prod.set_labels(u)));
                    }
                }
                Err(_) => by_weights += 1,
            }
        }
    }
    log.notes.push(format!(
        "{exhaustive} products compared on every open, {by_weights} with more than {SUITE_MAX_OPENS} opens compared by weights"
    ));
    cases
}

fn tightness(seed: u64, log: &mut Log) -> usize {
    let mut rng = generate::rng(seed);
    let cases = 300;
    for case in 0..cases {
        let n = rng.random_range(0..=6);
        let density = rng.random_range(0.0..0.6);
        let space = Arc::new(generate::random_poset(&mut rng, n, density));
        let nu = if case % 5 == 4 {
            generate::random_extended_valuation(&mut rng, &space, 0.3, 0.2)
        } else {
            generate::random_valuation(&mut rng, &space, 0.3)
        };
        let table = nu.tabulate().expect("small space");
        let bullet = nu_bullet(&table);
        if mu_circ(&bullet).iter().ne(table.iter()) {
            log.failures.push(format!("case {case}: ν•∘ differs from ν"));
        }
        let report = is_tight(&table);
        if !report.tight {
            log.failures.push(format!("case {case}: not tight at {:?}", report.failure));
            continue;
        }
        for w in &report.witnesses {
            let value = bullet.get(&w.compact);
            let ok = w.compact.is_subset(&w.open)
                && match &w.threshold {
                    Threshold::Value(r) => r <= value,
                    Threshold::Below(s) => s <= value,
                };
            if !ok {
                log.failures.push(format!("case {case}: bad witness {w:?}"));
            }
        }
    }
    cases
}

fn prohorov(seed: u64, log: &mut Log) -> usize {
    let mut rng = generate::rng(seed);
    let cases = 100;
    for case in 0..cases {
        let levels = rng.random_range(1..=5);
        let sys = Arc::new(if case % 2 == 0 {
            generate::random_ep_chain(&mut rng, levels, 6)
        } else {
            generate::random_chain(&mut rng, levels, 5)
        });
        let vs = pushed_family(&mut rng, &sys);
        let supplier = if case % 4 < 2 { Supplier::Exhaustive } else { Supplier::QChain };
        let result = materialize_limit(&sys, DEFAULT_MAX_POINTS)
            .map_err(|e| e.to_string())
            .and_then(|limit| {
                let cert = uniform_tightness_check(&vs, &limit, supplier, SUITE_MAX_OPENS).map_err(|e| e.to_string())?;
                prohorov_limit(&vs, limit, cert, DEFAULT_MAX_POINTS, SUITE_MAX_OPENS).map_err(|e| e.to_string())
            });
        let lv = match result {
            Ok(lv) => lv,
            Err(e) => {
                log.failures.push(format!("case {case}: {e}"));
                continue;
            }
        };
        for i in 0..sys.len() {
            for base in sys.space(i).opens().expect("small levels") {
                let want = vs.valuation(i).eval(&base);
                if lv.eval_cylinder(&sys.cylinder(i, base)) != want {
                    log.failures.push(format!("case {case}: cylinder at level {i} differs"));
                }
            }
        }
        if let Ok(ep) = EpSystem::reconstruct(sys.clone()) {
            match ep_limit_valuation(&vs, &ep, DEFAULT_MAX_POINTS, SUITE_MAX_OPENS) {
                Ok(other) => {
                    if let Ok(Some(c)) = lv.first_disagreement(&other) {
                        log.failures.push(format!("case {case}: ep-limit differs at level {}", c.level));
                    }
                }
                Err(e) => log.failures.push(format!("case {case}: ep-limit {e}")),
            }
        }
    }
    cases
}

fn steenrod(seed: u64, log: &mut Log) -> usize {
    let mut rng = generate::rng(seed);
    let cases = 200;
    for case in 0..cases {
        let levels = rng.random_range(1..=8);
        let sys = generate::random_chain(&mut rng, levels, 6);
        match steenrod_nonempty(&sys) {
            Ok(SteenrodOutcome::Thread(t)) => {
                let ok = (0..sys.len()).all(|i| sys.index().above(i).all(|j| sys.bond(i, j).apply(t[j]) == t[i]));
                if !ok {
                    log.failures.push(format!("case {case}: thread {t:?} breaks a bond"));
                }
            }
            other => log.failures.push(format!("case {case}: {other:?}")),
        }
    }
    for name in ["injections-empty-limit", "zero-criterion"] {
        match gallery::run(name, gallery::GalleryOptions::default()).expect("known entry") {
            Ok(r) if r.ok => {}
            Ok(r) => log.failures.push(format!("{name}: {}", r.result)),
            Err(e) => log.failures.push(format!("{name}: {e}")),
        }
    }
    cases + 2
}

fn local_finiteness(seed: u64, log: &mut Log) -> usize {
    let mut rng = generate::rng(seed);
    let cases = 100;
    let mut infinite = 0;
    for case in 0..cases {
        let n = rng.random_range(1..=7);
        let density = rng.random_range(0.0..0.6);
        let space = Arc::new(generate::random_poset(&mut rng, n, density));
        let nu = generate::random_extended_valuation(&mut rng, &space, 0.3, 0.25);
        if nu.has_infinite_weight() {
            infinite += 1;
        }
        match nu.local_finiteness() {
            Ok(r) if r.consistent() => {
                let expected = (0..space.len()).all(|x| nu.eval(space.up_of(x)).is_finite());
                if r.locally_finite != expected {
                    log.failures.push(format!("case {case}: verdict {} but pointwise {expected}", r.locally_finite));
                }
            }
            Ok(r) => log.failures.push(format!("case {case}: formulations disagree {r:?}")),
            Err(e) => log.failures.push(format!("case {case}: {e}")),
        }
    }
    if infinite == 0 {
        log.failures.push("no ∞-weighted valuation was generated".into());
    }
    cases
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiset_counts() {
        assert_eq!(multisets(24, 2).len(), 300);
        assert_eq!(multisets(24, 3).len(), 2600);
    }

    #[test]
    fn unknown_suite() {
        assert!(run(9, 0).is_none());
    }
}
