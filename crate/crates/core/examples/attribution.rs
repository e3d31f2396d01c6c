//! Why does the AI disagree? Split a disagreement into "someone missed
//! the abnormality" and "someone misread it".

use persuade::attribution::{canonical_disagreements, decompose};
use persuade::rational::to_decimal_string;
use persuade::ModelParams;

fn main() -> persuade::Result<()> {
    let p = ModelParams::reference();
    for info in canonical_disagreements() {
        let r = decompose(&p, &info)?;
        let f = |v: &persuade::Rational| to_decimal_string(v, 4);
        println!("{info}");
        println!("  attention     weight {}  posterior {}", f(&r.w_atten), r.post_atten.as_ref().map_or("-".into(), f));
        println!("  comprehension weight {}  posterior {}", f(&r.w_comp), r.post_comp.as_ref().map_or("-".into(), f));
        println!("  overall posterior {} = {}", r.post_total, f(&r.recombined()));
    }
    Ok(())
}
