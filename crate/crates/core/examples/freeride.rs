//! A costly second look: the doctor may pay to see the other dimension.
//! Without the AI's reasoning she cannot tell which cases need it.

use persuade::freeride::{cost_interval, draw_table, freeride_deltas, regime_outcome, FreerideParams};
use persuade::oracle::Regime;
use persuade::rational::to_decimal_string;

fn main() -> persuade::Result<()> {
    let fp = FreerideParams::canonical();
    let report = freeride_deltas(&fp)?;
    for (i, d) in report.deltas.iter().enumerate() {
        println!("case {} gain {}", i + 1, d);
    }
    println!("pooled gains {} and {} ({})", report.mix12, report.mix34, report.branch());
    let (c1, c2) = cost_interval(&report)?;
    println!("interval ({}, {}), cost {}", c1, c2, fp.cost);

    for regime in Regime::BOTH {
        let out = regime_outcome(&fp, &report, regime)?;
        println!(
            "{:<16} draws {:?} P(draw) {} accuracy {}",
            regime.name(),
            draw_table(&report, regime, &fp.cost),
            to_decimal_string(&out.draw_probability, 6),
            to_decimal_string(&out.accuracy, 6),
        );
    }
    Ok(())
}
