//! Inner and outer values: nu-bullet on compact saturated sets, mu-circ on
//! opens, and the witnesses of tightness.

use std::sync::Arc;

use valim::order::FiniteSpace;
use valim::valuation::{is_tight, mu_circ, nu_bullet, Valuation};

fn main() {
    let x = Arc::new(FiniteSpace::diamond());
    let half = "1/2".parse().unwrap();
    let nu = Valuation::from_labels(x.clone(), &[("a", half), ("top", "1/2".parse().unwrap())]).unwrap();
    let t = nu.tabulate().unwrap();
    let bullet = nu_bullet(&t);
    for (q, v) in bullet.iter() {
        println!("nu•({{{}}}) = {v}", x.set_labels(q).join(","));
    }
    println!("nu•∘ = nu: {}", mu_circ(&bullet) == t);

    let report = is_tight(&t);
    println!("tight: {}", report.tight);
    for w in &report.witnesses {
        println!(
            "  U={{{}}} r={} Q={{{}}}",
            x.set_labels(w.open.as_set()).join(","),
            w.threshold,
            x.set_labels(w.compact.as_set()).join(",")
        );
    }
}
