//! Sample the generative story and compare frequencies with exact values.

use persuade::montecarlo::{default_scenarios, run, DEFAULT_SEED};
use persuade::ModelParams;

fn main() -> persuade::Result<()> {
    let p = ModelParams::reference();
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(200_000);
    let scenarios = default_scenarios(&p)?;
    for e in run(&p, &scenarios, n, DEFAULT_SEED)? {
        println!(
            "{:<40} {:>9} exact {:.6} {}",
            e.name,
            e.estimate.map_or("-".into(), |v| format!("{v:.6}")),
            e.exact_f64,
            if e.within_4se { "" } else { "<- outside 4 se" },
        );
    }
    Ok(())
}
