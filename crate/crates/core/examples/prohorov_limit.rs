//! Limits through uniform tightness: witnesses, the set function mu, and
//! the chains of compact sets built from a single level.

use std::sync::Arc;

use num_rational::BigRational;

use valim::constructions::{loccomp_certificate, prohorov_limit, uniform_tightness_check, Supplier};
use valim::generate::{self, random_valuation};
use valim::order::{DEFAULT_MAX_OPENS, DEFAULT_MAX_POINTS};
use valim::projective::{materialize_limit, ValuedSystem};

fn main() {
    // the first seeded chain with a few threads
    let (sys, vs, limit) = (0..)
        .find_map(|seed| {
            let mut rng = generate::rng(seed);
            let sys = Arc::new(generate::random_chain(&mut rng, 3, 4));
            let limit = materialize_limit(&sys, DEFAULT_MAX_POINTS).unwrap();
            let top = random_valuation(&mut rng, sys.space(sys.top()), 0.2);
            let vs = ValuedSystem::from_top(sys.clone(), &top).unwrap();
            (limit.len() >= 3 && !top.is_zero()).then_some((sys, vs, limit))
        })
        .unwrap();
    println!("chain of {} levels, limit of {} threads", sys.len(), limit.len());

    for supplier in [Supplier::Exhaustive, Supplier::QChain] {
        let cert = uniform_tightness_check(&vs, &limit, supplier, DEFAULT_MAX_OPENS).unwrap();
        println!("{supplier}: {} witnesses", cert.witnesses.len());
        let lv = prohorov_limit(&vs, limit.clone(), cert, DEFAULT_MAX_POINTS, DEFAULT_MAX_OPENS).unwrap();
        for i in 0..sys.len() {
            println!("  marginal {i} reproduced: {}", lv.marginal(i) == *vs.valuation(i));
        }
    }

    let x0 = sys.space(0);
    let whole = x0.whole();
    let total = vs.valuation(0).eval(&whole);
    let r = total.scale(&BigRational::new(1.into(), 2.into())).unwrap();
    let chain = loccomp_certificate(&vs, 0, &whole, &r).unwrap();
    println!("compact sets carrying at least {r} of {total}:");
    for (n, q) in chain.sets.iter().enumerate() {
        println!("  Q_{n} = {{{}}}", sys.space(n).set_labels(q.as_set()).join(","));
    }
}
