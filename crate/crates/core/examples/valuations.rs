//! Simple valuations, their tables on opens, images and supports.

use std::collections::BTreeMap;
use std::sync::Arc;

use valim::order::{FiniteSpace, MonotoneMap, DEFAULT_MAX_OPENS};
use valim::valuation::{check_valuation, decompose_simple, SetFunction, Valuation};
use valim::value::ExtNonneg;

fn v(s: &str) -> ExtNonneg {
    s.parse().expect("exact value")
}

fn main() {
    let x = Arc::new(FiniteSpace::from_labeled_covers(&["a", "b", "t"], &[("a", "t"), ("b", "t")]).unwrap());
    let nu = Valuation::from_labels(x.clone(), &[("a", v("1/2")), ("b", v("1/2")), ("t", v("inf"))]).unwrap();
    let table = nu.tabulate().unwrap();
    for (u, val) in table.iter() {
        println!("nu({{{}}}) = {val}", x.set_labels(u).join(","));
    }
    // with an infinite weight above a and b their weights cannot be read back
    println!("decomposition: {}", decompose_simple(&table).unwrap_err());
    let finite = Valuation::from_labels(x.clone(), &[("a", v("1/2")), ("b", v("1/2"))]).unwrap();
    let back = decompose_simple(&finite.tabulate().unwrap()).unwrap();
    println!("finite weights recovered: {}", back == finite.weights());

    // a table that breaks modularity
    let mut bad = BTreeMap::new();
    for u in x.opens().unwrap() {
        let value = if u.len() >= 2 { v("1") } else { v("0") };
        bad.insert(u.into_set(), value);
    }
    let bad = SetFunction::new(x.clone(), bad).unwrap();
    println!("bad table: {}", check_valuation(&bad).unwrap_err());

    // image along the map collapsing a and b
    let s = Arc::new(FiniteSpace::sierpinski());
    let f = MonotoneMap::from_labels(x.clone(), s.clone(), &[("a", "bot"), ("b", "bot"), ("t", "top")]).unwrap();
    let pushed = nu.image(&f).unwrap();
    let weights: Vec<String> = pushed.weights().iter().map(ToString::to_string).collect();
    println!("image on sierpinski: {weights:?}");

    let ab = x.set_of(&["a", "b"]).unwrap();
    println!("{{a,b}} supports: {}", finite.support_check(&ab, DEFAULT_MAX_OPENS).is_ok());
    let a = x.set_of(&["a"]).unwrap();
    println!("{{a}}: {}", finite.support_check(&a, DEFAULT_MAX_OPENS).unwrap_err());
}
