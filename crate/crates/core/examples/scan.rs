//! Run every check over the default grid and print the worst residual of
//! each equation: `cargo run --release --example scan -- 20`.

use kkforms_core::catalog::{build, default_grid};
use kkforms_core::verify::{sample_points, suite};

fn main() {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10);
    for (fam, ps) in default_grid() {
        let inst = build(fam, &ps).unwrap();
        let pts = sample_points(&inst.domain, n, 42).unwrap();
        let t = std::time::Instant::now();
        match suite::run(&inst, &pts, 42, 1e-7) {
            Ok(reps) => {
                println!("{} ({:.2}s)", inst.label(), t.elapsed().as_secs_f64());
                for r in reps {
                    println!(
                        "   {:24} {:>10.3e} {:>10.3e} {}",
                        r.equation,
                        r.max_rel,
                        r.max_abs,
                        if r.pass { "" } else { "FAIL" }
                    );
                }
            }
            Err(e) => println!("{} ERROR {e}", inst.label()),
        }
    }
}
