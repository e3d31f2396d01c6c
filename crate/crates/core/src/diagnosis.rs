//! Diagnosis rules from closed-form likelihood ratios.
//!
//! Every diagnosis is positive iff its likelihood ratio
//! `P(Z=1 | info) / P(Z=0 | info)` is at least one. The ratios come from
//! case-by-case formulas written with the doctor's critical dimension
//! relabelled as L; profiles not covered by a named case fall back to
//! [`marginal_ratio`], which marginalizes the state analytically.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::model::{
    ai_signal_factor, attention_factor, comprehension_factor, noisy_attention_factor, Dim, ModelParams, Signal,
};
use crate::oracle::{AiView, InformationSet};
use crate::rational::{int, LikelihoodRatio, Rational};

/// Initial, AI and final diagnosis with the ratio behind the final one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagnosisRecord {
    pub d: bool,
    pub a: bool,
    pub f: bool,
    pub ratio: LikelihoodRatio,
}

/// What is known about the AI when forming a posterior.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AiEvidence {
    Nothing,
    Signals(Signal, Dim),
    Diagnosis(bool),
}

/// Shorthand for the primitives that appear in every display.
struct Terms {
    g: Rational,
    l: Rational,
    pi_d: Rational,
    pd: Rational,
    pi_a: Rational,
    pa: Rational,
    phi: Rational,
    /// Both agents miss a present abnormality.
    k: Rational,
}

impl Terms {
    fn new(p: &ModelParams) -> Self {
        let one = Rational::one();
        Terms {
            g: p.gamma.clone(),
            l: p.lambda.clone(),
            pi_d: p.pi_doc.clone(),
            pd: p.p_doc.clone(),
            pi_a: p.pi_ai.clone(),
            pa: p.p_ai.clone(),
            phi: p.phi_ai.clone(),
            k: (&one - &p.pi_doc) * (&one - &p.pi_ai),
        }
    }

    fn c(v: &Rational) -> Rational {
        Rational::one() - v
    }

    /// `p_doc + p_ai - 2 p_doc p_ai`: exactly one of the two misreads W.
    fn one_wrong(&self) -> Rational {
        &self.pd + &self.pa - int(2) * &self.pd * &self.pa
    }
}

type Masses = (Rational, Rational);

fn ratio_of(masses: Masses, what: &str) -> Result<LikelihoodRatio> {
    LikelihoodRatio::from_masses(masses.0, masses.1)
        .map_err(|_| Error::Unrealizable(format!("{what} has probability zero")))
}

/// Signal-odds ratio for one agent that never reports phantom
/// abnormalities, with its critical dimension relabelled L.
fn single_agent_masses(t: &Terms, pi: &Rational, p: &Rational, x: Signal) -> Masses {
    let one = Rational::one();
    let (g, l) = (&t.g, &t.l);
    match (x.l, x.r) {
        (true, true) => (one, Rational::zero()),
        (false, false) => (g * Terms::c(pi), Terms::c(g)),
        (true, false) => (
            g * (p * (&one - l * pi) + Terms::c(p) * l * Terms::c(pi)),
            Terms::c(g) * Terms::c(p) * l,
        ),
        (false, true) => (g * (p * Terms::c(pi) * l + Terms::c(p) * (&one - l * pi)), Terms::c(g) * p * l),
    }
}

/// AI ratio when it may hallucinate, with its critical dimension relabelled L.
fn hallucinating_ai_masses(t: &Terms, x: Signal) -> Masses {
    let one = Rational::one();
    let (g, l, pi, p, phi) = (&t.g, &t.l, &t.pi_a, &t.pa, &t.phi);
    let (cg, cl, cpi, cp, cphi) = (Terms::c(g), Terms::c(l), Terms::c(pi), Terms::c(p), Terms::c(phi));
    match (x.l, x.r) {
        (true, true) => (g * pi, &cg * &cphi),
        (false, false) => (g * &cpi, &cg * phi),
        (true, false) => (
            g * &cl * p * pi * phi + g * &cpi * (l * p * pi + &cp * (l * pi + &cl * &cphi)),
            l * &cg * &cp * pi * phi + &cg * &cphi * (&cl * &cp * phi + p * (l * &cpi + &cl * phi)),
        ),
        (false, true) => (
            g * pi * (l * p * &cpi + &cp * (&one - l * pi)) + g * &cl * &cphi * (p - pi),
            l * &cg * p * pi + &cg * &cphi * (l * &cp - l * pi + &cl * phi),
        ),
    }
}

/// Likelihood masses `(P(Z=1, ·), P(Z=0, ·))` up to a common factor,
/// obtained by summing the state out analytically. Covers every
/// combination of doctor signals, AI evidence and an optional extra
/// attention signal.
pub fn marginal_masses(
    p: &ModelParams,
    x_doc: Signal,
    w_doc: Dim,
    ai: AiEvidence,
    extra: Option<Signal>,
) -> Masses {
    match ai {
        AiEvidence::Diagnosis(a) => {
            let mut sick = Rational::zero();
            let mut healthy = Rational::zero();
            for x_ai in Signal::ALL {
                for w_ai in Dim::ALL {
                    if x_ai.get(w_ai) == a {
                        let (s, h) = marginal_masses(p, x_doc, w_doc, AiEvidence::Signals(x_ai, w_ai), extra);
                        sick += s;
                        healthy += h;
                    }
                }
            }
            (sick, healthy)
        }
        AiEvidence::Nothing | AiEvidence::Signals(..) => {
            let one = Rational::one();
            // Probability of everything observed about dimension j given X_j.
            let seen = |j: Dim, present: bool| -> Rational {
                let mut f = attention_factor(x_doc.get(j), present, &p.pi_doc);
                if let AiEvidence::Signals(x_ai, _) = ai {
                    f *= noisy_attention_factor(x_ai.get(j), present, &p.pi_ai, &p.phi_ai);
                }
                if let Some(x_e) = extra {
                    f *= attention_factor(x_e.get(j), present, &p.pi_doc);
                }
                f
            };
            let mut sick = Rational::zero();
            let mut healthy = Rational::zero();
            for w in Dim::ALL {
                let mut q = comprehension_factor(w_doc, w, &p.p_doc);
                if let AiEvidence::Signals(_, w_ai) = ai {
                    q *= comprehension_factor(w_ai, w, &p.p_ai);
                }
                if q.is_zero() {
                    continue;
                }
                let o = w.other();
                let noise = &p.lambda * seen(o, true) + (&one - &p.lambda) * seen(o, false);
                sick += &q * seen(w, true) * &noise;
                healthy += &q * seen(w, false) * &noise;
            }
            (sick * &p.gamma, healthy * (one - &p.gamma))
        }
    }
}

/// Ratio from [`marginal_masses`]; errors on a zero-probability profile.
pub fn marginal_ratio(
    p: &ModelParams,
    x_doc: Signal,
    w_doc: Dim,
    ai: AiEvidence,
    extra: Option<Signal>,
) -> Result<LikelihoodRatio> {
    ratio_of(marginal_masses(p, x_doc, w_doc, ai, extra), "signal profile")
}

fn realizable(p: &ModelParams, x_doc: Signal, w_doc: Dim, ai: AiEvidence) -> Result<()> {
    let (s, h) = marginal_masses(p, x_doc, w_doc, ai, None);
    if s.is_zero() && h.is_zero() {
        return Err(Error::Unrealizable(format!("x_doc={x_doc} w_doc={w_doc} with {ai:?}")));
    }
    Ok(())
}

/// Ratio behind the doctor's initial diagnosis.
pub fn initial_ratio(p: &ModelParams, x_doc: Signal, w_doc: Dim) -> Result<LikelihoodRatio> {
    p.require_valid()?;
    realizable(p, x_doc, w_doc, AiEvidence::Nothing)?;
    let t = Terms::new(p);
    ratio_of(single_agent_masses(&t, &t.pi_d, &t.pd, x_doc.relative_to(w_doc)), "doctor signal")
}

/// Positive iff the doctor sees an abnormality in her critical dimension;
/// confirmed against the likelihood ratio.
pub fn initial_diagnosis(p: &ModelParams, x_doc: Signal, w_doc: Dim) -> Result<bool> {
    let by_ratio = initial_ratio(p, x_doc, w_doc)?.at_least_one();
    let by_rule = x_doc.get(w_doc);
    if by_ratio != by_rule {
        return Err(Error::Inconsistent(format!("initial diagnosis for x_doc={x_doc} w_doc={w_doc} under {p}")));
    }
    Ok(by_rule)
}

/// Ratio behind the AI's diagnosis.
pub fn ai_ratio(p: &ModelParams, x_ai: Signal, w_ai: Dim) -> Result<LikelihoodRatio> {
    p.require_valid()?;
    let t = Terms::new(p);
    let x = x_ai.relative_to(w_ai);
    let masses = if p.hallucinates() {
        hallucinating_ai_masses(&t, x)
    } else {
        single_agent_masses(&t, &t.pi_a, &t.pa, x)
    };
    // Re-check with the AI's own factors so unrealizable signals are caught
    // even where a display has cancelled a common zero factor.
    let mut reach = Rational::zero();
    for w in Dim::ALL {
        for noise in [false, true] {
            for z in [false, true] {
                let state = Signal::NONE.with(w, z).with(w.other(), noise);
                reach += ai_signal_factor(x_ai, state, &p.pi_ai, &p.phi_ai)
                    * comprehension_factor(w_ai, w, &p.p_ai)
                    * crate::model::state_probability(p, z, state, w);
            }
        }
    }
    if reach.is_zero() {
        return Err(Error::Unrealizable(format!("AI signal x_ai={x_ai} w_ai={w_ai}")));
    }
    ratio_of(masses, "AI signal")
}

/// Positive iff the AI sees an abnormality in its critical dimension;
/// confirmed against the likelihood ratio (including the hallucinating
/// cases, which require `phi_ai` above its bound).
pub fn ai_diagnosis(p: &ModelParams, x_ai: Signal, w_ai: Dim) -> Result<bool> {
    let by_ratio = ai_ratio(p, x_ai, w_ai)?.at_least_one();
    let by_rule = x_ai.get(w_ai);
    if by_ratio != by_rule {
        return Err(Error::Inconsistent(format!("AI diagnosis for x_ai={x_ai} w_ai={w_ai} under {p}")));
    }
    Ok(by_rule)
}

/// Named-case ratios for an interpretable AI, doctor's dimension relabelled L.
fn interpretable_case(t: &Terms, hallucinates: bool, xd: Signal, xa: Signal, wa: Dim) -> Option<Masses> {
    let one = Rational::one();
    let (g, l, pd_, pa_) = (&t.g, &t.l, &t.pd, &t.pa);
    let (cg, cl) = (Terms::c(g), Terms::c(l));
    let d = xd.l;
    let a = xa.get(wa);
    let covers = xd.union(xa).is_both();

    // Attention difference after D=0/A=1, or shared critical dimension
    // after D=1/A=0, without conclusive evidence.
    let agreeing_dims = || {
        (
            g * (pd_ * pa_ * &cl + l * &t.k * (&one - pd_ - pa_ + int(2) * pd_ * pa_)),
            &cg * Terms::c(pd_) * Terms::c(pa_) * l,
        )
    };

    if !hallucinates {
        if covers {
            return Some((one, Rational::zero()));
        }
        return match (d, a) {
            (false, true) if xa.l => Some(agreeing_dims()),
            (false, true) => Some((
                g * (pa_ * Terms::c(pd_) * &cl + l * &t.k * t.one_wrong()),
                &cg * pd_ * Terms::c(pa_) * l,
            )),
            (true, false) if wa == Dim::L => Some(agreeing_dims()),
            (true, false) => Some((
                g * (pd_ * Terms::c(pa_) * &cl + l * &t.k * t.one_wrong()),
                &cg * pa_ * Terms::c(pd_) * l,
            )),
            _ => None,
        };
    }

    if (d, a) != (false, true) {
        return None;
    }
    let (pi_d, pi_a, phi) = (&t.pi_d, &t.pi_a, &t.phi);
    let (cpd, cpa, cpi_d, cpi_a, cphi) =
        (Terms::c(pd_), Terms::c(pa_), Terms::c(pi_d), Terms::c(pi_a), Terms::c(phi));
    let doc_blank = !xd.r;
    if xa.l {
        // Attention difference, six sub-cases.
        return Some(match (doc_blank, xa.r, wa) {
            (true, false, _) => (
                g * &cl * pd_ * pa_ * pi_a * &cpi_d * phi
                    + g * &cpi_d * &cpi_a
                        * (l * pd_ * pa_ * pi_a * &cpi_d + &cpd * &cpa * (l * pi_a * &cpi_d + &cl * &cphi)),
                l * &cg * &cpd * &cpa * pi_a * &cpi_d * phi
                    + &cg * &cphi * (&cl * &cpd * &cpa * phi + pd_ * pa_ * (l * &cpi_d * &cpi_a + &cl * phi)),
            ),
            (true, true, _) => (g * pi_a * &cpi_d, &cg * &cphi),
            (false, _, Dim::L) => (
                g * (l * pd_ * pa_ * pi_a * &cpi_d + &cpd * &cpa * (l * pi_a * &cpi_d + &cl * &cphi)),
                l * &cg * pd_ * pa_ * &cphi,
            ),
            (false, _, Dim::R) => (
                g * (l * pd_ * &cpa * pi_a * &cpi_d + pa_ * &cpd * (l * pi_a * &cpi_d + &cl * &cphi)),
                l * &cg * pd_ * &cpa * &cphi,
            ),
        });
    }
    // Comprehension difference: the AI reads R and sees only R.
    if doc_blank {
        let missed = l * pi_a * &cpi_d + &cl * &cphi;
        let clean = l * &t.k + &cl * phi;
        Some((
            g * (pd_ * &cpa * &t.k * &missed + &cpd * pa_ * &cpi_d * pi_a * &clean),
            &cg * (pd_ * &cpa * phi * &missed + &cpd * pa_ * &cphi * &clean),
        ))
    } else {
        Some((
            g * (l * pd_ * &cpa * &t.k + l * pa_ * &cpd * &t.k + &cl * pa_ * &cpd * phi),
            l * &cg * pd_ * &cpa * phi,
        ))
    }
}

/// Ratio `P(Z=1 | x_doc, w_doc, x_ai, w_ai) / P(Z=0 | ·)`.
pub fn lr_interpretable(
    p: &ModelParams,
    x_doc: Signal,
    w_doc: Dim,
    x_ai: Signal,
    w_ai: Dim,
) -> Result<LikelihoodRatio> {
    p.require_valid()?;
    let ai = AiEvidence::Signals(x_ai, w_ai);
    realizable(p, x_doc, w_doc, ai)?;
    let t = Terms::new(p);
    let xd = x_doc.relative_to(w_doc);
    let xa = x_ai.relative_to(w_doc);
    let wa = if w_ai == w_doc { Dim::L } else { Dim::R };
    match interpretable_case(&t, p.hallucinates(), xd, xa, wa) {
        Some(masses) => ratio_of(masses, "signal profile"),
        None => marginal_ratio(p, x_doc, w_doc, ai, None),
    }
}

/// Final diagnosis with full access to the AI's signals.
pub fn final_interpretable(
    p: &ModelParams,
    x_doc: Signal,
    w_doc: Dim,
    x_ai: Signal,
    w_ai: Dim,
) -> Result<DiagnosisRecord> {
    let ratio = lr_interpretable(p, x_doc, w_doc, x_ai, w_ai)?;
    let d = initial_diagnosis(p, x_doc, w_doc)?;
    let a = ai_diagnosis(p, x_ai, w_ai)?;
    Ok(DiagnosisRecord { d, a, f: ratio.at_least_one(), ratio })
}

fn uninterpretable_case(t: &Terms, hallucinates: bool, xd: Signal, a: bool) -> Option<Masses> {
    let one = Rational::one();
    let (g, l, pi_d, pi_a, pd_, pa_, phi) = (&t.g, &t.l, &t.pi_d, &t.pi_a, &t.pd, &t.pa, &t.phi);
    let (cg, cl, cpd, cpa, cpi_d, cpi_a, cphi) = (
        Terms::c(g),
        Terms::c(l),
        Terms::c(pd_),
        Terms::c(pa_),
        Terms::c(pi_d),
        Terms::c(pi_a),
        Terms::c(phi),
    );
    if xd.is_both() {
        return Some((one, Rational::zero()));
    }
    match (xd.l, xd.r, a, hallucinates) {
        (false, false, true, false) => {
            Some((g * (pa_ * (&one - l * pi_d) + &cpa * l * &cpi_d), &cg * &cpa * l))
        }
        (false, true, true, false) => Some((
            g * (l * &cpi_d * (pd_ * pa_ + &one - pa_) + pa_ * &cpd * (&one - l * pi_d)),
            &cg * pd_ * &cpa * l,
        )),
        (false, false, true, true) => Some((
            g * &cpi_d * (pa_ * pi_a * (&one - l * pi_d) + &cpa * (l * &cpi_d * pi_a + &cl * &cphi)),
            l * &cg * &cpa * pi_a * &cpi_d + &cg * &cphi * (pa_ * (&one - l * pi_d) + &cl * &cpa),
        )),
        (false, true, true, true) => Some((
            g * (l * pi_a * &cpi_d + &cl * &cpd * (pa_ * pi_a + &cpa * &cphi)),
            l * &cg * pd_ * (pa_ * &cphi + &cpa * pi_a),
        )),
        (true, false, false, false) => Some((
            g * (l * &t.k + pd_ * &cpa * &cl + pd_ * pa_ * &cpi_a * &cl),
            &cg * l * (pa_ * &cpd + &cpd * &cpa * &cpi_a),
        )),
        _ => None,
    }
}

/// Ratio `P(Z=1 | x_doc, w_doc, A=a) / P(Z=0 | ·)`.
pub fn lr_uninterpretable(p: &ModelParams, x_doc: Signal, w_doc: Dim, a: bool) -> Result<LikelihoodRatio> {
    p.require_valid()?;
    let ai = AiEvidence::Diagnosis(a);
    realizable(p, x_doc, w_doc, ai)?;
    let t = Terms::new(p);
    match uninterpretable_case(&t, p.hallucinates(), x_doc.relative_to(w_doc), a) {
        Some(masses) => ratio_of(masses, "signal profile"),
        None => marginal_ratio(p, x_doc, w_doc, ai, None),
    }
}

/// Final diagnosis seeing only the AI's diagnosis. On agreement the
/// doctor keeps her initial diagnosis.
pub fn final_uninterpretable(p: &ModelParams, x_doc: Signal, w_doc: Dim, d: bool, a: bool) -> Result<DiagnosisRecord> {
    let initial = initial_diagnosis(p, x_doc, w_doc)?;
    if initial != d {
        return Err(Error::Unrealizable(format!(
            "D={} is impossible with x_doc={x_doc} w_doc={w_doc}",
            d as u8
        )));
    }
    let ratio = lr_uninterpretable(p, x_doc, w_doc, a)?;
    let f = if d == a { d } else { ratio.at_least_one() };
    Ok(DiagnosisRecord { d, a, f, ratio })
}

/// Final diagnosis for any information set. With an extra attention
/// signal the posterior is formed from all observations.
pub fn final_diagnosis(p: &ModelParams, info: &InformationSet) -> Result<DiagnosisRecord> {
    if let Some(x_e) = info.extra {
        let d = initial_diagnosis(p, info.x_doc, info.w_doc)?;
        let ai = match info.view {
            AiView::Interpretable { x_ai, w_ai } => {
                if ai_diagnosis(p, x_ai, w_ai)? != info.a {
                    return Err(Error::Unrealizable(format!("A={} with x_ai={x_ai}", info.a as u8)));
                }
                AiEvidence::Signals(x_ai, w_ai)
            }
            AiView::Uninterpretable => AiEvidence::Diagnosis(info.a),
        };
        if d != info.d {
            return Err(Error::Unrealizable(format!("D={} with x_doc={}", info.d as u8, info.x_doc)));
        }
        let ratio = marginal_ratio(p, info.x_doc, info.w_doc, ai, Some(x_e))?;
        return Ok(DiagnosisRecord { d, a: info.a, f: ratio.at_least_one(), ratio });
    }
    match info.view {
        AiView::Interpretable { x_ai, w_ai } => {
            let rec = final_interpretable(p, info.x_doc, info.w_doc, x_ai, w_ai)?;
            if rec.d != info.d || rec.a != info.a {
                return Err(Error::Unrealizable(format!("diagnoses inconsistent with signals in {info}")));
            }
            Ok(rec)
        }
        AiView::Uninterpretable => final_uninterpretable(p, info.x_doc, info.w_doc, info.d, info.a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::Oracle;
    use crate::rational::{half, ratio};

    const S00: Signal = Signal::new(false, false);
    const S01: Signal = Signal::new(false, true);
    const S10: Signal = Signal::new(true, false);
    const S11: Signal = Signal::new(true, true);

    fn hallucinating() -> ModelParams {
        ModelParams::reference().with_phi_ai(ratio(999, 1000))
    }

    #[test]
    fn initial_diagnosis_cases() {
        let p = ModelParams::reference();
        assert!(initial_diagnosis(&p, S11, Dim::R).unwrap());
        assert_eq!(initial_ratio(&p, S11, Dim::L).unwrap(), LikelihoodRatio::Infinite);
        assert!(!initial_diagnosis(&p, S01, Dim::L).unwrap());
        assert!(initial_diagnosis(&p, S10, Dim::L).unwrap());
        assert!(!initial_diagnosis(&p, S00, Dim::L).unwrap());
    }

    #[test]
    fn ai_diagnosis_cases() {
        let p = ModelParams::reference();
        assert!(!ai_diagnosis(&p, S00, Dim::L).unwrap());
        assert!(ai_diagnosis(&p, S11, Dim::R).unwrap());
        let h = hallucinating();
        assert!(!ai_diagnosis(&h, S00, Dim::L).unwrap());
        assert!(!ai_diagnosis(&h, S01, Dim::L).unwrap());
        assert!(ai_diagnosis(&h, S10, Dim::L).unwrap());
        assert!(ai_diagnosis(&h, S11, Dim::L).unwrap());
    }

    #[test]
    fn hallucination_below_bound_is_rejected() {
        let p = ModelParams::reference().with_phi_ai(ratio(1, 2));
        assert!(matches!(ai_diagnosis(&p, S10, Dim::L), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn doctor_without_attention_cannot_see_anything() {
        let p = ModelParams::reference().with_pi_doc(Rational::zero()).with_p_doc(Rational::one());
        assert!(matches!(initial_diagnosis(&p, S10, Dim::L), Err(Error::Unrealizable(_))));
    }

    #[test]
    fn covering_union_is_conclusive() {
        let p = ModelParams::reference();
        assert!(lr_interpretable(&p, S01, Dim::L, S10, Dim::L).unwrap().is_infinite());
    }

    #[test]
    fn comprehension_ratio_is_one_at_threshold() {
        let p = ModelParams::reference().with_p_doc(ratio(63, 71));
        let r = lr_interpretable(&p, S01, Dim::L, S01, Dim::R).unwrap();
        assert_eq!(r, LikelihoodRatio::Finite(Rational::one()));
        assert!(final_interpretable(&p, S01, Dim::L, S01, Dim::R).unwrap().f);
    }

    #[test]
    fn attention_difference_persuades() {
        for pd in [ratio(3, 4), ratio(9, 10), Rational::one()] {
            let p = ModelParams::reference().with_p_doc(pd);
            let rec = final_interpretable(&p, S00, Dim::L, S10, Dim::L).unwrap();
            assert!(!rec.d && rec.a && rec.f);
        }
    }

    #[test]
    fn positive_doctor_resists_shared_dimension_ai() {
        let p = ModelParams::reference();
        let rec = final_interpretable(&p, S10, Dim::L, S00, Dim::L).unwrap();
        assert!(rec.d && !rec.a && rec.f);
        let rec = final_interpretable(&p, S11, Dim::L, S01, Dim::R).unwrap();
        assert!(rec.f && rec.ratio.is_infinite());
    }

    #[test]
    fn certain_doctor_follows_ai_abnormality_in_her_dimension() {
        let p = ModelParams::reference().with_p_doc(Rational::one());
        let rec = final_interpretable(&p, S00, Dim::L, S10, Dim::R).unwrap();
        assert!(!rec.d && !rec.a && rec.f);
    }

    #[test]
    fn uninterpretable_examples() {
        let p = ModelParams::reference();
        assert!(final_uninterpretable(&p, S00, Dim::L, false, true).unwrap().f);
        assert!(final_uninterpretable(&p, S11, Dim::L, true, false).unwrap().f);
        let p = ModelParams::reference().with_p_doc(ratio(19, 20));
        assert!(final_uninterpretable(&p, S01, Dim::L, false, true).unwrap().f);
        assert!(matches!(
            final_uninterpretable(&p, S01, Dim::L, true, true),
            Err(Error::Unrealizable(_))
        ));
    }

    #[test]
    fn agreement_keeps_initial_diagnosis() {
        let p = ModelParams::reference();
        for x_doc in Signal::ALL {
            let d = x_doc.l;
            let rec = final_uninterpretable(&p, x_doc, Dim::L, d, d).unwrap();
            assert_eq!(rec.f, d);
            assert_eq!(rec.ratio.at_least_one(), d);
        }
    }

    fn check_against_oracle(p: &ModelParams) {
        let oracle = Oracle::new(p, false).unwrap();
        for x_doc in Signal::ALL {
            for w_doc in Dim::ALL {
                let Some(d) = oracle.doctor_decision(x_doc, w_doc) else { continue };
                assert_eq!(initial_diagnosis(p, x_doc, w_doc).unwrap(), d);
                for a in [false, true] {
                    let info = InformationSet::uninterpretable(x_doc, w_doc, d, a);
                    match oracle.likelihood_ratio(&info) {
                        Ok(expected) => assert_eq!(lr_uninterpretable(p, x_doc, w_doc, a).unwrap(), expected, "{info}"),
                        Err(_) => assert!(lr_uninterpretable(p, x_doc, w_doc, a).is_err(), "{info}"),
                    }
                }
                for x_ai in Signal::ALL {
                    for w_ai in Dim::ALL {
                        let Some(a) = oracle.ai_decision(x_ai, w_ai) else { continue };
                        let info = InformationSet::interpretable(x_doc, w_doc, d, x_ai, w_ai, a);
                        match oracle.likelihood_ratio(&info) {
                            Ok(expected) => {
                                assert_eq!(lr_interpretable(p, x_doc, w_doc, x_ai, w_ai).unwrap(), expected, "{info}");
                                assert_eq!(
                                    marginal_ratio(p, x_doc, w_doc, AiEvidence::Signals(x_ai, w_ai), None).unwrap(),
                                    expected
                                );
                            }
                            Err(_) => assert!(lr_interpretable(p, x_doc, w_doc, x_ai, w_ai).is_err(), "{info}"),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn closed_forms_match_enumeration() {
        check_against_oracle(&ModelParams::reference());
        check_against_oracle(&ModelParams::reference().with_p_doc(ratio(19, 20)));
        check_against_oracle(&ModelParams::reference().with_p_doc(Rational::one()));
        check_against_oracle(&ModelParams::reference().with_pi_doc(Rational::one()));
        check_against_oracle(&hallucinating());
        check_against_oracle(&hallucinating().with_p_doc(ratio(9, 10)));
    }

    #[test]
    fn extra_signal_posterior_matches_enumeration() {
        let p = ModelParams::reference().with_pi_ai(Rational::zero()).with_p_doc(ratio(19, 20));
        let oracle = Oracle::new(&p, true).unwrap();
        let info = InformationSet::uninterpretable(S01, Dim::L, false, false).with_extra(S10);
        let expected = oracle.posterior(&info).unwrap();
        let rec = final_diagnosis(&p, &info).unwrap();
        assert_eq!(rec.ratio.posterior(), expected);
        assert!(rec.f);
        assert!(expected > half());
    }
}
