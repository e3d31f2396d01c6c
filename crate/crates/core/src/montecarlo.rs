//! Seeded Monte Carlo cross-check of exact probabilities.
//!
//! Samples are drawn from the generative story in `f64`, independent of
//! the enumeration. Draws are split into fixed-size chunks, chunk `i`
//! using ChaCha8 stream `i` of the seed, so the result does not depend on
//! how many threads run them.

use std::collections::HashMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Dim, ModelParams, Outcome, Signal};
use crate::oracle::{InformationSet, Oracle, Regime};
use crate::rational::{half, to_f64, to_fraction_string, Rational};

pub const DEFAULT_SEED: u64 = 0x9E37_79B9_7F4A_7C15;
pub const CHUNK: u64 = 1 << 16;

/// One draw together with the Bayes decisions made along the way.
#[derive(Debug, Clone, Copy)]
pub struct Sample {
    pub o: Outcome,
    pub d: bool,
    pub a: bool,
    pub f_interpretable: bool,
    pub f_uninterpretable: bool,
}

type Pred = Box<dyn Fn(&Sample) -> bool + Send + Sync>;

/// `P(target | given)` with its exact value.
pub struct Scenario {
    pub name: String,
    pub target: Pred,
    pub given: Pred,
    pub exact: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McEstimate {
    pub name: String,
    /// `None` when the conditioning event never occurred.
    pub estimate: Option<f64>,
    pub stderr: Option<f64>,
    /// Draws that satisfied the conditioning event.
    pub n: u64,
    pub draws: u64,
    pub exact: String,
    pub exact_f64: f64,
    pub within_4se: bool,
}

type Key = (Signal, Dim, Signal, Dim);

/// Bayes decisions on every signal profile with positive mass.
struct Decisions {
    table: HashMap<Key, (bool, bool, bool, bool)>,
}

impl Decisions {
    fn new(oracle: &Oracle) -> Result<Self> {
        let mut table = HashMap::new();
        let mut posteriors: HashMap<InformationSet, bool> = HashMap::new();
        let mut decide = |info: InformationSet| -> Result<bool> {
            if let Some(v) = posteriors.get(&info) {
                return Ok(*v);
            }
            let v = oracle.posterior(&info)? >= half();
            posteriors.insert(info, v);
            Ok(v)
        };
        for atom in oracle.atoms() {
            let o = atom.outcome;
            let key = (o.x_doc, o.w_doc, o.x_ai, o.w_ai);
            if table.contains_key(&key) {
                continue;
            }
            let (Some(i), Some(u)) = (oracle.info_at(&o, Regime::Interpretable), oracle.info_at(&o, Regime::Uninterpretable))
            else {
                continue;
            };
            let f_i = decide(i)?;
            let f_u = decide(u)?;
            table.insert(key, (i.d, i.a, f_i, f_u));
        }
        Ok(Decisions { table })
    }

    fn annotate(&self, o: Outcome) -> Option<Sample> {
        let &(d, a, f_interpretable, f_uninterpretable) = self.table.get(&(o.x_doc, o.w_doc, o.x_ai, o.w_ai))?;
        Some(Sample { o, d, a, f_interpretable, f_uninterpretable })
    }
}

/// Draws one outcome from the model in floating point.
pub fn sample_outcome<R: Rng>(rng: &mut R, p: &FloatParams) -> Outcome {
    let z = rng.random_bool(p.gamma);
    let w = if rng.random_bool(0.5) { Dim::L } else { Dim::R };
    let noise = rng.random_bool(p.lambda);
    let x = Signal::NONE.with(w, z).with(w.other(), noise);
    let mut look = |present: bool, pi: f64, phi: f64| if present { rng.random_bool(pi) } else { !rng.random_bool(phi) };
    let x_doc = Signal::new(look(x.l, p.pi_doc, 1.0), look(x.r, p.pi_doc, 1.0));
    let x_ai = Signal::new(look(x.l, p.pi_ai, p.phi_ai), look(x.r, p.pi_ai, p.phi_ai));
    let mut guess = |skill: f64| if rng.random_bool(skill) { w } else { w.other() };
    let w_doc = guess(p.p_doc);
    let w_ai = guess(p.p_ai);
    Outcome { z, x, w, x_doc, w_doc, x_ai, w_ai, x_e: None }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloatParams {
    pub gamma: f64,
    pub lambda: f64,
    pub pi_doc: f64,
    pub p_doc: f64,
    pub pi_ai: f64,
    pub p_ai: f64,
    pub phi_ai: f64,
}

impl From<&ModelParams> for FloatParams {
    fn from(p: &ModelParams) -> Self {
        FloatParams {
            gamma: to_f64(&p.gamma),
            lambda: to_f64(&p.lambda),
            pi_doc: to_f64(&p.pi_doc),
            p_doc: to_f64(&p.p_doc),
            pi_ai: to_f64(&p.pi_ai),
            p_ai: to_f64(&p.p_ai),
            phi_ai: to_f64(&p.phi_ai),
        }
    }
}

fn scenario<T, G>(oracle: &Oracle, dec: &Decisions, name: &str, target: T, given: G) -> Result<Scenario>
where
    T: Fn(&Sample) -> bool + Send + Sync + 'static,
    G: Fn(&Sample) -> bool + Send + Sync + 'static,
{
    let mut joint = Rational::zero();
    let mut base = Rational::zero();
    for atom in oracle.atoms() {
        let Some(s) = dec.annotate(atom.outcome) else { continue };
        if given(&s) {
            base += &atom.prob;
            if target(&s) {
                joint += &atom.prob;
            }
        }
    }
    if base.is_zero() {
        return Err(Error::NullEvent(format!("scenario {name}")));
    }
    Ok(Scenario { name: name.to_string(), target: Box::new(target), given: Box::new(given), exact: joint / base })
}

fn always(_: &Sample) -> bool {
    true
}

/// The standard battery of 25 targets at `p`.
pub fn default_scenarios(p: &ModelParams) -> Result<Vec<Scenario>> {
    p.require_valid()?;
    let oracle = Oracle::new(p, false)?;
    let dec = Decisions::new(&oracle)?;
    let missed = |s: &Sample| !s.d && s.a;
    let alarm = |s: &Sample| s.d && !s.a;
    Ok(vec![
        scenario(&oracle, &dec, "prior", |s| s.o.z, always)?,
        scenario(&oracle, &dec, "doctor_positive", |s| s.d, always)?,
        scenario(&oracle, &dec, "ai_positive", |s| s.a, always)?,
        scenario(&oracle, &dec, "disagreement", |s| s.d != s.a, always)?,
        scenario(&oracle, &dec, "doctor_reads_critical", |s| s.o.w_doc == s.o.w, always)?,
        scenario(&oracle, &dec, "ai_reads_critical", |s| s.o.w_ai == s.o.w, always)?,
        scenario(&oracle, &dec, "posterior_doctor_positive", |s| s.o.z, |s| s.d)?,
        scenario(&oracle, &dec, "posterior_ai_positive", |s| s.o.z, |s| s.a)?,
        scenario(&oracle, &dec, "posterior_missed_positive", |s| s.o.z, missed)?,
        scenario(&oracle, &dec, "posterior_false_alarm", |s| s.o.z, alarm)?,
        scenario(&oracle, &dec, "attention_weight_missed_positive", |s| s.o.x_ai.get(s.o.w_doc), missed)?,
        scenario(&oracle, &dec, "attention_weight_false_alarm", |s| s.o.w_ai == s.o.w_doc, alarm)?,
        scenario(&oracle, &dec, "posterior_attention_source", |s| s.o.z, move |s| missed(s) && s.o.x_ai.get(s.o.w_doc))?,
        scenario(&oracle, &dec, "posterior_comprehension_source", |s| s.o.z, move |s| {
            missed(s) && !s.o.x_ai.get(s.o.w_doc)
        })?,
        scenario(&oracle, &dec, "initial_accuracy", |s| s.d == s.o.z, always)?,
        scenario(&oracle, &dec, "ai_accuracy", |s| s.a == s.o.z, always)?,
        scenario(&oracle, &dec, "final_accuracy_interpretable", |s| s.f_interpretable == s.o.z, always)?,
        scenario(&oracle, &dec, "final_accuracy_uninterpretable", |s| s.f_uninterpretable == s.o.z, always)?,
        scenario(&oracle, &dec, "persuaded_interpretable", |s| s.f_interpretable != s.d, always)?,
        scenario(&oracle, &dec, "persuaded_uninterpretable", |s| s.f_uninterpretable != s.d, always)?,
        scenario(&oracle, &dec, "doctor_sees_nothing", |s| s.o.x_doc == Signal::NONE, always)?,
        scenario(&oracle, &dec, "noise_present", |s| s.o.x_noise(), always)?,
        scenario(&oracle, &dec, "posterior_doctor_negative", |s| s.o.z, |s| !s.d)?,
        scenario(&oracle, &dec, "combined_signals_cover_both", |s| s.o.x_doc.union(s.o.x_ai).is_both(), always)?,
        scenario(&oracle, &dec, "persuasion_case_accuracy_uninterpretable", |s| s.f_uninterpretable == s.o.z, missed)?,
    ])
}

/// Every target's hit counts over `n` draws.
fn count(p: &ModelParams, scenarios: &[Scenario], n: u64, seed: u64) -> Result<Vec<(u64, u64)>> {
    let oracle = Oracle::new(p, false)?;
    let dec = Decisions::new(&oracle)?;
    let fp = FloatParams::from(p);
    let chunks = n.div_ceil(CHUNK);
    let zero = || (vec![(0u64, 0u64); scenarios.len()], 0u64);
    let (totals, unmatched) = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk);
            let len = CHUNK.min(n - chunk * CHUNK);
            let (mut acc, mut miss) = zero();
            for _ in 0..len {
                let Some(s) = dec.annotate(sample_outcome(&mut rng, &fp)) else {
                    miss += 1;
                    continue;
                };
                for (slot, sc) in acc.iter_mut().zip(scenarios) {
                    if (sc.given)(&s) {
                        slot.1 += 1;
                        if (sc.target)(&s) {
                            slot.0 += 1;
                        }
                    }
                }
            }
            (acc, miss)
        })
        .reduce(zero, |(mut a, ma), (b, mb)| {
            for (x, y) in a.iter_mut().zip(b) {
                x.0 += y.0;
                x.1 += y.1;
            }
            (a, ma + mb)
        });
    if unmatched > 0 {
        return Err(Error::Inconsistent(format!("{unmatched} sampled profiles have zero exact mass")));
    }
    Ok(totals)
}

/// Runs every scenario on one shared stream of `n` draws.
pub fn run(p: &ModelParams, scenarios: &[Scenario], n: u64, seed: u64) -> Result<Vec<McEstimate>> {
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one draw".into()));
    }
    let counts = count(p, scenarios, n, seed)?;
    Ok(scenarios
        .iter()
        .zip(counts)
        .map(|(sc, (hits, base))| {
            let exact_f64 = to_f64(&sc.exact);
            let (estimate, stderr, within) = if base == 0 {
                (None, None, false)
            } else {
                let est = hits as f64 / base as f64;
                let se = (est * (1.0 - est) / base as f64).sqrt();
                (Some(est), Some(se), (est - exact_f64).abs() <= 4.0 * se)
            };
            McEstimate {
                name: sc.name.clone(),
                estimate,
                stderr,
                n: base,
                draws: n,
                exact: to_fraction_string(&sc.exact),
                exact_f64,
                within_4se: within,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn at_least_twenty_targets() {
        assert!(default_scenarios(&ModelParams::reference()).unwrap().len() >= 20);
    }

    #[test]
    fn same_seed_same_numbers() {
        let p = ModelParams::reference();
        let sc = default_scenarios(&p).unwrap();
        let a = run(&p, &sc, 100_000, 7).unwrap();
        let b = run(&p, &sc, 100_000, 7).unwrap();
        assert_eq!(a, b);
        let c = run(&p, &sc, 100_000, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn prior_is_close() {
        let p = ModelParams::reference();
        let sc = default_scenarios(&p).unwrap();
        let est = run(&p, &sc[..1], 200_000, DEFAULT_SEED).unwrap();
        assert_eq!(est[0].exact, "3/10");
        assert!(est[0].within_4se);
    }

    #[test]
    fn zero_draws_rejected() {
        let p = ModelParams::reference();
        assert!(run(&p, &[], 0, 1).is_err());
    }
}
