//! Career concerns: when low-skill doctors copy the high-skill behaviour,
//! hiding the AI's reasoning can raise average accuracy.

use persuade::career::{accuracy_delta, construct_prop2_params, population_accuracy};
use persuade::oracle::Regime;
use persuade::rational::{ratio, to_decimal_string};

fn main() -> persuade::Result<()> {
    let pp = construct_prop2_params(ratio(3, 10), ratio(1, 5), ratio(1, 2), ratio(3, 5))?;
    println!("p_ai = {}, low-type p_doc = {}, tau = {}", pp.base.p_ai, pp.p_doc_low, pp.tau);

    let d = accuracy_delta(&pp)?;
    println!("delta1 = {}\ndelta2 = {}\ndelta  = {}", d.delta1, d.delta2, d.delta);
    println!("uninterpretable wins for tau < {}", to_decimal_string(&d.tau_bar, 6));

    for tau in [ratio(0, 1), pp.tau.clone(), d.tau_bar.clone(), ratio(1, 2)] {
        let q = pp.clone().with_tau(tau.clone())?;
        let i = population_accuracy(&q, Regime::Interpretable)?;
        let u = population_accuracy(&q, Regime::Uninterpretable)?;
        println!("tau {:<10} interpretable {} uninterpretable {}", to_decimal_string(&tau, 6), to_decimal_string(&i, 6), to_decimal_string(&u, 6));
    }
    Ok(())
}
