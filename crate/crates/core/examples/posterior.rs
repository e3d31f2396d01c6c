//! The doctor's final diagnosis after seeing the AI, with and without
//! access to what the AI looked at.

use persuade::diagnosis::{final_diagnosis, initial_diagnosis};
use persuade::oracle::Oracle;
use persuade::{Dim, InformationSet, ModelParams, Signal};

fn main() -> persuade::Result<()> {
    let p = ModelParams::reference();
    let oracle = Oracle::new(&p, false)?;

    for x in Signal::ALL {
        println!("doctor sees {x} on L -> D = {}", initial_diagnosis(&p, x, Dim::L)? as u8);
    }

    let cases = [
        // Missed positive: the doctor saw nothing, the AI says disease.
        InformationSet::uninterpretable(Signal::NONE, Dim::L, false, true),
        InformationSet::interpretable(Signal::NONE, Dim::L, false, Signal::new(false, true), Dim::R, true),
        // False alarm from the doctor's point of view.
        InformationSet::uninterpretable(Signal::new(true, false), Dim::L, true, false),
        InformationSet::interpretable(Signal::new(true, false), Dim::L, true, Signal::NONE, Dim::R, false),
        InformationSet::interpretable(Signal::new(true, false), Dim::L, true, Signal::NONE, Dim::L, false),
    ];
    for info in cases {
        let rec = final_diagnosis(&p, &info)?;
        let post = oracle.posterior(&info)?;
        println!("{info}\n    LR {}  posterior {post}  F = {}", rec.ratio, rec.f as u8);
        assert_eq!(rec.ratio.posterior(), post);
    }
    Ok(())
}
