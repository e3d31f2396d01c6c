//! Sweep a parameter, write CSV, and read it back exactly.

use persuade::rational::parse_decimal;
use persuade::sweep::{cmd_thresholds, decimal_matches_fraction, GridSpec, Table};
use persuade::ModelParams;

fn main() -> persuade::Result<()> {
    let out = std::env::temp_dir().join("persuade-sweep-example");
    let grid: GridSpec = "p_ai:0.7:1:0.05".parse()?;
    let run = cmd_thresholds(&ModelParams::reference(), &grid, &out)?;
    println!("wrote {} rows to {}", run.table.rows.len(), run.path.display());
    for bad in &run.invalid {
        println!("skipped {bad}");
    }

    let table = Table::read(&run.path)?;
    let (p1, p1_frac) = (table.column("p1").unwrap(), table.column("p1_frac").unwrap());
    for row in &table.rows {
        assert!(decimal_matches_fraction(&row[p1], &row[p1_frac])?);
        println!("p_ai {:<5} p1 {} = {}", row[0], row[p1], parse_decimal(&row[p1_frac])?);
    }
    Ok(())
}
