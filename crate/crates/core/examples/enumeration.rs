//! Brute-force ground truth: every outcome of the model with its exact
//! probability, and thresholds found by solving on the enumeration.

use num_traits::One;
use persuade::oracle::{events, exact_threshold_in_p_doc, Oracle};
use persuade::thresholds::ThresholdKind;
use persuade::ModelParams;

fn main() -> persuade::Result<()> {
    let p = ModelParams::reference();
    let oracle = Oracle::new(&p, false)?;
    let total: persuade::Rational = oracle.atoms().iter().map(|a| &a.prob).sum();
    println!("{} outcomes, total probability {}", oracle.atoms().len(), total);
    assert!(total.is_one());

    println!("P(Z=1)               = {}", oracle.probability(events::disease));
    println!("P(Z=1 | noise)       = {}", oracle.conditional(events::disease, events::noise_present)?);
    println!("P(same critical dim) = {}", oracle.probability(events::same_critical_dim));

    for k in ThresholdKind::CORE {
        let solve = exact_threshold_in_p_doc(&p, &k.template())?;
        println!(
            "{}: root {} closed form {} ({:?}, bisection {})",
            k,
            solve.root.as_ref().unwrap(),
            k.formula(&p),
            solve.on_unit,
            solve.bisection.map_or("-".into(), |b| persuade::rational::to_decimal_string(&b, 9)),
        );
    }
    Ok(())
}
