//! The limit valuation of an ep-system: the chain of lifts of a point,
//! with mass moving to the new top at every level.

use std::sync::Arc;

use valim::constructions::ep_limit_valuation;
use valim::order::{DEFAULT_MAX_OPENS, DEFAULT_MAX_POINTS};
use valim::projective::lazy::{LazyChain, LiftChain};
use valim::projective::{EpSystem, ValuedSystem};

fn main() {
    let depth = 5;
    let lazy = LazyChain::new(Box::new(LiftChain { stop: None }), depth);
    let sys = Arc::new(lazy.prefix(depth).unwrap());
    let top = lazy.valuation(depth).unwrap().expect("the chain carries valuations");
    let vs = ValuedSystem::from_top(sys.clone(), &top).unwrap();
    let ep = EpSystem::reconstruct(sys.clone()).expect("collapsing the top is a projection");
    let lv = ep_limit_valuation(&vs, &ep, DEFAULT_MAX_POINTS, DEFAULT_MAX_OPENS).unwrap();
    println!("limit of levels 0..={depth}: {} threads", lv.limit().len());
    for n in 0..=depth {
        let x = sys.space(n);
        for p in 0..x.len() {
            let up = x.neighbourhood(p);
            let c = sys.cylinder(n, up.clone());
            println!(
                "level {n}, cylinder over ↑{}: {} (level value {})",
                x.label(p),
                lv.eval_cylinder(&c),
                vs.valuation(n).eval(&up)
            );
        }
    }
    // beyond the prefix the value of ↑n at level n stays 1
    let x = lazy.space(depth + 3).unwrap();
    let up = x.neighbourhood(x.len() - 1);
    println!("lazy level {}: ↑top has mass {}", depth + 3, lazy.cylinder_value(depth + 3, &up).unwrap().unwrap());
}
