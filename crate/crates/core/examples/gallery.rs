//! Every gallery entry: the construction, its result and what it shows.

use valim::gallery::{self, GalleryOptions};

fn main() {
    for name in gallery::NAMES {
        match gallery::run(name, GalleryOptions::default()).expect("listed entry") {
            Ok(r) => {
                println!("== {} ({})", r.name, if r.ok { "ok" } else { "FAILED" });
                println!("construction: {}", r.construction);
                println!("result: {}", r.result);
                println!("illustrates: {}", r.illustrates);
            }
            Err(e) => println!("== {name}: error {e}"),
        }
    }
}
