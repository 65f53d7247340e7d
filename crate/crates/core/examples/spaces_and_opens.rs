//! Finite T0 spaces as posets: opens are the up-sets.

use std::sync::Arc;

use valim::order::{product_space, FiniteSpace, DEFAULT_MAX_POINTS};

fn show(name: &str, x: &FiniteSpace) {
    let opens = x.opens().expect("small space");
    println!("{name}: {} points, {} opens", x.len(), opens.len());
    for u in &opens {
        println!("  {{{}}}", x.set_labels(u.as_set()).join(","));
    }
}

fn main() {
    let diamond = FiniteSpace::from_labeled_covers(
        &["b", "l", "r", "t"],
        &[("b", "l"), ("b", "r"), ("l", "t"), ("r", "t")],
    )
    .expect("a poset");
    show("diamond", &diamond);

    // every point is the generic point of its closure
    let sober = diamond.sobriety_witness().expect("small space");
    println!("irreducible closed sets: {}", sober.len());

    let s = Arc::new(FiniteSpace::sierpinski());
    let (square, _) = product_space(&[s.clone(), s.clone()], DEFAULT_MAX_POINTS).expect("4 points");
    show("sierpinski squared", &square);

    let lifted = FiniteSpace::sierpinski().lift();
    show("lifted sierpinski", &lifted);

    // a cycle in the generating pairs is not an order
    let err = FiniteSpace::from_labeled_covers(&["a", "b"], &[("a", "b"), ("b", "a")]).unwrap_err();
    println!("cyclic input: {err}");
}
