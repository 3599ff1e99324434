//! Runs a few verification suites in-process and prints their reports.

use qtrace::verify::{self, VerifyConfig};

fn main() {
    let mut cfg = VerifyConfig::new(2);
    cfg.samples = 5;
    for suite in ["braiding-axioms", "third-product-closed", "quantum-trace"] {
        let reports = verify::run(suite, &cfg).unwrap();
        print!("{}", verify::render_text(&reports));
    }
    println!("available: {}", verify::suite_names().join(", "));
}
