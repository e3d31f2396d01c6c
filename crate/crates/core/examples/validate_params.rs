//! Check a parameter point against every modelling assumption.

use persuade::rational::ratio;
use persuade::{validate_params, ModelParams};

fn main() {
    let reference = ModelParams::reference();
    println!("{reference}");
    for c in &validate_params(&reference).checks {
        println!("  [{}] {:<24} {}", if c.passed { "ok" } else { "!!" }, c.name, c.detail);
    }

    // A doctor this unskilled cannot read the X-ray reliably.
    let weak = reference.with_p_doc(ratio(11, 20));
    let report = validate_params(&weak);
    println!("\n{weak}\n  valid: {}\n  {}", report.all_pass(), report.failure_summary());
}
