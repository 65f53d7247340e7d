//! Product valuations from compatible marginals, through lifted factors.

use std::sync::Arc;

use valim::constructions::{dk_product, pointed_product_valuation, MarginalFamily};
use valim::order::{FiniteSpace, DEFAULT_MAX_OPENS, DEFAULT_MAX_POINTS};
use valim::valuation::Valuation;

fn main() {
    let coin = Arc::new(FiniteSpace::antichain(&["h", "t"]));
    let fair = Valuation::from_labels(coin.clone(), &[("h", "1/2".parse().unwrap()), ("t", "1/2".parse().unwrap())]).unwrap();
    let family = MarginalFamily::independent(vec![coin.clone(), coin.clone()], &[fair.clone(), fair]).unwrap();

    // discrete factors have no bottom, so the pointed construction refuses
    let err = pointed_product_valuation(&family, DEFAULT_MAX_POINTS, DEFAULT_MAX_OPENS).unwrap_err();
    println!("pointed construction: {err}");

    let pv = dk_product(&family, DEFAULT_MAX_POINTS, DEFAULT_MAX_OPENS, 10_000).unwrap();
    let x = pv.valuation.space();
    for (p, w) in pv.valuation.weights().iter().enumerate() {
        println!("nu({}) = {w}", x.label(p));
    }
    println!("lifted product has {} points, support {}", pv.lifted.space().len(), pv.support.len());
    println!("boxes checked: {}", pv.boxes_checked);

    // a correlated joint on chains is recovered from its marginals
    let c = Arc::new(FiniteSpace::chain(&["lo", "hi"]));
    let full = valim::constructions::sub_product(&[c.clone(), c.clone(), c.clone()], 0b111).unwrap();
    let joint = Valuation::from_labels(full, &[("(lo,lo,lo)", "1/3".parse().unwrap()), ("(hi,hi,hi)", "2/3".parse().unwrap())]).unwrap();
    let family = MarginalFamily::from_joint(vec![c.clone(), c.clone(), c], &joint).unwrap();
    let pv = dk_product(&family, DEFAULT_MAX_POINTS, DEFAULT_MAX_OPENS, 10_000).unwrap();
    println!("correlated joint recovered: {}", pv.valuation.weights() == joint.weights());
}
