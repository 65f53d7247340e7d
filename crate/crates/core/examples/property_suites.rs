//! Runs the property suites named on the command line (all by default).
//!
//!     cargo run --release --example property_suites -- 1 4

use valim::suite;

fn main() {
    let ids: Vec<u8> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let ids = if ids.is_empty() { suite::IDS.to_vec() } else { ids };
    for id in ids {
        let Some(o) = suite::run(id, 2024) else {
            eprintln!("no suite {id}");
            continue;
        };
        println!(
            "{} {}: {} cases, {} failures, {:.2}s",
            if o.passed() { "PASS" } else { "FAIL" },
            o.name,
            o.cases,
            o.failures.len(),
            o.elapsed.as_secs_f64()
        );
        for f in o.failures.iter().take(5) {
            println!("  {f}");
        }
    }
}
