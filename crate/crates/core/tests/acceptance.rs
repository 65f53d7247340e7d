//! The eight acceptance criteria, run one after another so each wall-clock
//! budget is measured without competition from the others.
//!
//! The lines go straight to stderr, so they show up even when the test
//! harness captures output.

use std::io::Write;

use valim::suite;

macro_rules! say {
    ($($t:tt)*) => {
        let _ = writeln!(std::io::stderr(), $($t)*);
    };
}

const SEED: u64 = 2024;

const CRITERIA: [&str; 8] = [
    "500 random simple valuations on posets of at most 8 points: axioms on all opens, exact decomposition",
    "100 systems of 2 to 4 indices: the largest open inside a cylinder, exhaustively",
    "100 ep chains: the ep-limit valuation has the given marginals on every open",
    "all 2- and 3-factor products of posets up to 4 points: product from the marginals equals the joint",
    "nu-bullet-circ equals nu, tightness witnesses explicit",
    "100 chains: uniform tightness route reproduces marginals, agrees with the ep-limit on cylinders",
    "200 random chains have threads; injections system has an empty limit, zero criterion both ways",
    "100 valuations with infinite weights: local finiteness characterizations agree",
];

#[test]
fn acceptance_criteria() {
    let mut failed = Vec::new();
    for (k, id) in suite::IDS.into_iter().enumerate() {
        let o = suite::run(id, SEED).expect("every listed suite exists");
        say!(
            "[{}] criterion {}: {} ({} cases, {} failures, {:.2}s of {}s)",
            if o.passed() { "PASS" } else { "FAIL" },
            id,
            CRITERIA[k],
            o.cases,
            o.failures.len(),
            o.elapsed.as_secs_f64(),
            o.budget.as_secs()
        );
        for n in &o.notes {
            say!("       note: {n}");
        }
        for f in o.failures.iter().take(10) {
            say!("       failure: {f}");
        }
        if !o.passed() {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "criteria failed: {failed:?}");
}
