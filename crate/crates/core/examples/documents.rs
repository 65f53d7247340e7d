//! JSON documents and the command line, driven in-process.

use std::sync::Arc;

use valim::document::{self, Document, ValuedSpec};
use valim::order::FiniteSpace;
use valim::projective::lazy::{LazyChain, LiftChain};
use valim::projective::ValuedSystem;
use valim::valuation::Valuation;

fn main() {
    let x = Arc::new(FiniteSpace::diamond());
    let nu = Valuation::from_labels(x, &[("a", "1/3".parse().unwrap()), ("top", "2/3".parse().unwrap())]).unwrap();
    let text = document::to_text(&Document::Valuation(nu));
    print!("{text}");
    let again = document::to_text(&document::parse(&text).unwrap());
    println!("round trip identical: {}", again == text);

    let lazy = LazyChain::new(Box::new(LiftChain { stop: None }), 2);
    let sys = Arc::new(lazy.prefix(2).unwrap());
    let vs = ValuedSystem::from_top(sys, &lazy.valuation(2).unwrap().unwrap()).unwrap();
    let sys_text = document::to_text(&Document::ValuedSystem(ValuedSpec::Explicit(vs)));

    let dir = std::env::temp_dir().join(format!("valim-documents-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("lift.json");
    std::fs::write(&path, &sys_text).unwrap();
    let p = path.to_str().unwrap();
    let mut out = std::io::stdout();
    let code = valim::cli::run(["valim", "limit-eval", p, "--cylinder", "2:2"], &mut out);
    println!("exit code {code}");
    let code = valim::cli::run(["valim", "--format", "json", "check", p], &mut out);
    println!("exit code {code}");
    std::fs::remove_dir_all(&dir).ok();
}
