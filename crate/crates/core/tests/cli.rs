use std::path::Path;
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

const SIERPINSKI: &str = r#"{"schema":1,"kind":"space","elements":["bot","top"],"covers":[["bot","top"]]}"#;

const NON_MODULAR: &str = r#"{"schema":1,"kind":"valuation",
  "space":{"elements":["a","b","t"],"covers":[["a","t"],["b","t"]]},
  "table":[{"open":[],"value":"0"},{"open":["t"],"value":"0"},{"open":["a","t"],"value":"1"},
           {"open":["b","t"],"value":"1"},{"open":["a","b","t"],"value":"1"}]}"#;

const DIAMOND_SYSTEM: &str = r#"{"schema":1,"kind":"valued-system","system":{"presentation":"explicit-prefix",
  "index":{"elements":["0","1"],"covers":[["0","1"]]},
  "levels":{"0":{"elements":["bot","top"],"covers":[["bot","top"]]},
            "1":{"elements":["b","l","r","t"],"covers":[["b","l"],["b","r"],["l","t"],["r","t"]]}},
  "bonds":[{"from":"1","to":"0","graph":{"b":"bot","l":"bot","r":"top","t":"top"}}]},
  "top":{"l":"1/3","t":"2/3"}}"#;

const UNIFORM_2X2: &str = r#"{"schema":1,"kind":"query","op":"product",
  "factors":[{"elements":["0","1"]},{"elements":["0","1"]}],
  "marginals":{"{0}":{"0":"1/2","1":"1/2"},"{1}":{"0":"1/2","1":"1/2"},
               "{0,1}":{"(0,0)":"1/4","(0,1)":"1/4","(1,0)":"1/4","(1,1)":"1/4"}}}"#;

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut argv = vec!["valim"];
    argv.extend_from_slice(args);
    let code = valim::cli::run(argv, &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let (code, out) = run(&full);
    (code, serde_json::from_str(&out).unwrap())
}

#[test]
fn check_exit_codes() {
    let dir = TempDir::new().unwrap();
    let ok = write(&dir, "s.json", SIERPINSKI);
    let bad = write(&dir, "t.json", NON_MODULAR);
    let frac = write(&dir, "f.json", r#"{"schema":1,"kind":"valuation","space":{"elements":["x"]},"weights":{"x":"1/0"}}"#);
    let cyc = write(&dir, "c.json", r#"{"schema":1,"kind":"space","elements":["a","b"],"covers":[["a","b"],["b","a"]]}"#);
    assert_eq!(run(&["check", &ok]).0, 0);
    let (code, report) = run_json(&["check", &bad]);
    assert_eq!(code, 1);
    let msg = report["error"].as_str().unwrap();
    assert!(msg.contains("modularity") && msg.contains("\"a\", \"t\""), "{msg}");
    assert_eq!(run(&["check", &frac]).0, 2);
    assert_eq!(run(&["check", &cyc]).0, 1);
    assert_eq!(run(&["check", "/nonexistent/file.json"]).0, 2);
    assert_eq!(run(&["check", "--max-opens", "2", &ok]).0, 3);
}

#[test]
fn reports_carry_hash_and_version() {
    let dir = TempDir::new().unwrap();
    let ok = write(&dir, "s.json", SIERPINSKI);
    let (_, report) = run_json(&["check", &ok]);
    assert_eq!(report["schema"], 1);
    assert_eq!(report["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(report["input_sha256"], valim::cli::sha256_hex(SIERPINSKI.as_bytes()));
    // two runs give identical reports
    assert_eq!(run(&["--format", "json", "check", &ok]), run(&["--format", "json", "check", &ok]));
}

#[test]
fn limit_eval_matches_levels() {
    let dir = TempDir::new().unwrap();
    let sys = write(&dir, "d.json", DIAMOND_SYSTEM);
    let (code, report) = run_json(&["limit-eval", &sys, "--cylinder", "1:r,t", "--cylinder", "0:top"]);
    assert_eq!(code, 0);
    let cs = report["result"]["cylinders"].as_array().unwrap();
    assert_eq!(cs[0]["value"], "2/3");
    assert_eq!(cs[1]["value"], "2/3");
    assert_eq!(report["result"]["ep_cross_check"], true);

    let lazy = write(&dir, "l.json", r#"{"schema":1,"kind":"valued-system","rule":"truncation"}"#);
    let (code, report) = run_json(&["limit-eval", &lazy, "--cylinder", "0:0"]);
    assert_eq!(code, 0);
    assert_eq!(report["result"]["cylinders"][0]["value"], "1");

    let incompatible = DIAMOND_SYSTEM.replace(r#""top":{"l":"1/3","t":"2/3"}"#, r#""valuations":{"0":{"top":"1"},"1":{"l":"1"}}"#);
    let bad = write(&dir, "i.json", &incompatible);
    assert_eq!(run(&["limit-eval", &bad]).0, 1);
    assert_eq!(run(&["limit-eval", &sys, "--cylinder", "1:l"]).0, 2);
}

#[test]
fn product_emits_a_valuation_document() {
    let dir = TempDir::new().unwrap();
    let q = write(&dir, "p.json", UNIFORM_2X2);
    let out = dir.path().join("out.json");
    let (code, report) = run_json(&["product", &q, "--output", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    let doc = &report["result"]["document"];
    let weights = doc["weights"].as_object().unwrap();
    assert_eq!(weights.len(), 4);
    assert!(weights.values().all(|w| w == "1/4"));
    let written = std::fs::read_to_string(&out).unwrap();
    assert_eq!(written, valim::document::render(doc));
    assert_eq!(run(&["check", out.to_str().unwrap()]).0, 0);

    let bad = write(&dir, "b.json", &UNIFORM_2X2.replace(r#""{1}":{"0":"1/2","1":"1/2"}"#, r#""{1}":{"0":"1"}"#));
    let (code, report) = run_json(&["product", &bad]);
    assert_eq!(code, 1);
    assert!(report["error"].as_str().unwrap().contains("incompatible"));

    let single = write(&dir, "one.json", r#"{"schema":1,"kind":"query","op":"product",
        "factors":[{"elements":["lo","hi"],"covers":[["lo","hi"]]}],"joint":{"hi":"3/2"}}"#);
    let (code, report) = run_json(&["product", &single]);
    assert_eq!(code, 0);
    assert_eq!(report["result"]["document"]["weights"]["hi"], "3/2");
}

#[test]
fn tight_and_support() {
    let dir = TempDir::new().unwrap();
    let nu = write(&dir, "v.json", r#"{"schema":1,"kind":"valuation",
        "space":{"elements":["a","b","t"],"covers":[["a","t"],["b","t"]]},"weights":{"a":"1/2","b":"1/2"}}"#);
    let (code, report) = run_json(&["tight", &nu]);
    assert_eq!(code, 0);
    assert_eq!(report["result"]["tight"], true);
    assert_eq!(report["result"]["round_trip"], true);
    assert_eq!(run(&["support", &nu, "--subset", "a,b,t"]).0, 0);
    assert_eq!(run(&["support", &nu, "--subset", "a,b"]).0, 0);
    let (code, report) = run_json(&["support", &nu, "--subset", "a"]);
    assert_eq!(code, 1);
    assert_eq!(report["result"]["supported"], false);
}

#[test]
fn gallery_entries() {
    let (code, out) = run(&["gallery", "injections-empty-limit"]);
    assert_eq!(code, 0);
    assert!(out.contains("limit empty; solvable iff all marginals zero: demonstrated"));
    for name in valim::gallery::NAMES {
        assert_eq!(run(&["gallery", name]).0, 0, "{name}");
    }
    assert_eq!(run(&["gallery", "no-such-entry"]).0, 2);
}

#[test]
fn canonical_documents_round_trip_through_check() {
    let dir = TempDir::new().unwrap();
    for text in [SIERPINSKI, DIAMOND_SYSTEM, UNIFORM_2X2] {
        let canonical = valim::document::to_text(&valim::document::parse(text).unwrap());
        let p = write(&dir, "c.json", &canonical);
        let reread = std::fs::read_to_string(Path::new(&p)).unwrap();
        assert_eq!(valim::document::to_text(&valim::document::parse(&reread).unwrap()), canonical);
    }
}

#[test]
fn binary_runs() {
    let dir = TempDir::new().unwrap();
    let ok = write(&dir, "s.json", SIERPINSKI);
    let out = Command::new(env!("CARGO_BIN_EXE_valim")).args(["check", &ok]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let out = Command::new(env!("CARGO_BIN_EXE_valim")).args(["bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
