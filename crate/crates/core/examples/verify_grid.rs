//! Check every closed form against the enumeration on a grid of points.

use persuade::sweep::{default_verify_grid, run_verify, ClosedForms};

fn main() {
    let grid = default_verify_grid(40);
    let report = run_verify(&grid, &ClosedForms::default());
    println!("{} points, {} checks in {:.2}s", report.points, report.checks.len(), report.seconds);
    for name in ["threshold_oracle", "final_diagnosis", "decomposition", "averaging", "gap_p2_p1"] {
        println!("  {name:<18} {:>4} checks, pass = {}", report.count(name), report.passed(name));
    }
    for c in report.failures() {
        println!("FAIL {} at {}: {}", c.name, report.params[c.point], c.detail);
    }
}
