//! Persuasion thresholds at the reference point and how they move with
//! the doctor's attention.

use persuade::rational::{ratio, to_decimal_string};
use persuade::thresholds::{hallucination_thresholds, p4_reaches_half, threshold_curve, thresholds, ThresholdKind};
use persuade::ModelParams;

fn main() -> persuade::Result<()> {
    let p = ModelParams::reference();
    let set = thresholds(&p)?;
    for k in ThresholdKind::CORE {
        let v = set.get(k).unwrap();
        println!("{:<4} = {:<10} ({})", k.name(), v.to_string(), to_decimal_string(v, 6));
    }
    println!("ordered p4 <= p3 <= p1 <= p2: {}", set.is_ordered());
    println!("p4 reaches 1/2: {}", p4_reaches_half(&p));

    // Doctors with p_doc in (p1, p2] are persuaded by a negative AI only
    // when they cannot see why it disagrees.
    let doc = ratio(19, 20);
    for k in ThresholdKind::CORE {
        println!("p_doc = 19/20 persuaded under {}: {}", k, k.persuaded(&doc, set.get(k).unwrap()));
    }

    let grid: Vec<_> = (3..=10).map(|i| ratio(i, 10)).collect();
    println!("\npi_doc      p1        p2        p3        p4");
    for (pi, s) in &threshold_curve(&p, &grid)?.grid {
        let f = |v| to_decimal_string(v, 5);
        println!("{:<8} {} {} {} {}", f(pi), f(&s.p1), f(&s.p2), f(&s.p3), f(&s.p4));
    }

    let halluc = p.clone().with_phi_ai(ratio(199, 200));
    println!("\nwith phi_ai = 199/200:");
    let (a, b, c) = hallucination_thresholds(&halluc)?;
    for (k, v) in ThresholdKind::HALLUCINATION.iter().zip([a, b, c]) {
        println!("{:<4} = {}", k.name(), to_decimal_string(&v, 6));
    }
    Ok(())
}
