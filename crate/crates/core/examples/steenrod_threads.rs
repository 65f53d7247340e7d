//! Threads through chains of nonempty finite spaces, and a system of
//! nonempty spaces whose limit is empty.

use valim::gallery::injections_system;
use valim::generate;
use valim::order::DEFAULT_MAX_POINTS;
use valim::projective::lazy::{LazyChain, Truncation};
use valim::projective::{materialize_limit, steenrod_nonempty, SteenrodOutcome};

fn main() {
    let mut rng = generate::rng(1);
    for _ in 0..5 {
        let sys = generate::random_chain(&mut rng, 6, 5);
        match steenrod_nonempty(&sys).unwrap() {
            SteenrodOutcome::Thread(t) => println!("thread {t:?}"),
            SteenrodOutcome::Empty { index } => println!("empty space at {index}"),
        }
    }

    let lazy = LazyChain::new(Box::new(Truncation { stop: Some(3) }), 6);
    let (prefix, status) = lazy.steenrod_prefix().unwrap().expect("nonempty levels");
    println!("truncation chain: thread prefix {prefix:?} ({status})");

    // injections {0,1,2} -> {0,1}: every space below the top is nonempty,
    // the full level is empty and so is the limit
    let sys = std::sync::Arc::new(injections_system(3, 2).unwrap());
    for i in 0..sys.len() {
        println!("X_{} has {} points", sys.index().label(i), sys.space(i).len());
    }
    let limit = materialize_limit(&sys, DEFAULT_MAX_POINTS).unwrap();
    println!("limit threads: {}", limit.len());
}
