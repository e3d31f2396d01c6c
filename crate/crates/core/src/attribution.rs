//! Bayesian attribution of a disagreement to its source.
//!
//! After `D=0, A=1` the attention difference is the event that the AI saw
//! an abnormality in the doctor's critical dimension; after `D=1, A=0` it
//! is the event that both read the same critical dimension. The
//! comprehension difference is the complement in each case, so the two
//! sources are mutually exclusive.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ModelParams, Outcome, Signal};
use crate::oracle::{InformationSet, Oracle};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Source {
    Attention,
    Comprehension,
}

impl Source {
    /// Predicate for this source given the direction of disagreement.
    pub fn event(self, info: &InformationSet) -> impl Fn(&Outcome) -> bool {
        let missed_positive = !info.d && info.a;
        move |o: &Outcome| {
            let attention = if missed_positive { o.x_ai.get(o.w_doc) } else { o.w_ai == o.w_doc };
            match self {
                Source::Attention => attention,
                Source::Comprehension => !attention,
            }
        }
    }
}

/// Source weights, source-conditional posteriors and their average.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributionRecord {
    pub w_atten: Rational,
    pub w_comp: Rational,
    /// `None` when the source has zero weight.
    pub post_atten: Option<Rational>,
    pub post_comp: Option<Rational>,
    pub post_total: Rational,
}

impl AttributionRecord {
    /// `w_atten * post_atten + w_comp * post_comp`, skipping empty sources.
    pub fn recombined(&self) -> Rational {
        let part = |w: &Rational, post: &Option<Rational>| post.as_ref().map_or_else(Rational::zero, |v| w * v);
        part(&self.w_atten, &self.post_atten) + part(&self.w_comp, &self.post_comp)
    }
}

fn require_disagreement(info: &InformationSet) -> Result<()> {
    if !info.is_disagreement() {
        return Err(Error::InvalidArgument(format!("{info} is not a disagreement")));
    }
    Ok(())
}

pub fn attribution_weights_with(oracle: &Oracle, info: &InformationSet) -> Result<(Rational, Rational)> {
    require_disagreement(info)?;
    let base = oracle.info_event(info);
    let atten = Source::Attention.event(info);
    let w_atten = oracle.conditional(atten, &base)?;
    let w_comp = Rational::one() - &w_atten;
    Ok((w_atten, w_comp))
}

/// `(P(Atten | info), P(Comp | info))`.
pub fn attribution_weights(p: &ModelParams, info: &InformationSet) -> Result<(Rational, Rational)> {
    p.require_valid()?;
    attribution_weights_with(&Oracle::new(p, false)?, info)
}

pub fn source_conditional_posterior_with(oracle: &Oracle, info: &InformationSet, source: Source) -> Result<Rational> {
    require_disagreement(info)?;
    oracle
        .posterior_given(info, source.event(info))
        .map_err(|_| Error::NullEvent(format!("{source:?} has probability zero given {info}")))
}

/// `P(Z = 1 | source, info)`.
pub fn source_conditional_posterior(p: &ModelParams, info: &InformationSet, source: Source) -> Result<Rational> {
    p.require_valid()?;
    source_conditional_posterior_with(&Oracle::new(p, false)?, info, source)
}

pub fn decompose_with(oracle: &Oracle, info: &InformationSet) -> Result<AttributionRecord> {
    let (w_atten, w_comp) = attribution_weights_with(oracle, info)?;
    let post = |w: &Rational, s: Source| -> Result<Option<Rational>> {
        if w.is_zero() {
            Ok(None)
        } else {
            source_conditional_posterior_with(oracle, info, s).map(Some)
        }
    };
    let post_atten = post(&w_atten, Source::Attention)?;
    let post_comp = post(&w_comp, Source::Comprehension)?;
    let post_total = oracle.posterior(info)?;
    Ok(AttributionRecord { w_atten, w_comp, post_atten, post_comp, post_total })
}

/// Full attribution record for a disagreement.
pub fn decompose(p: &ModelParams, info: &InformationSet) -> Result<AttributionRecord> {
    p.require_valid()?;
    decompose_with(&Oracle::new(p, false)?, info)
}

/// `P(Atten) / P(Comp)` after `D=0, A=1` when the doctor saw an
/// abnormality only outside her critical dimension.
pub fn attention_odds_missed_positive(p: &ModelParams) -> Rational {
    let one = Rational::one();
    let (g, l, pd, pa) = (&p.gamma, &p.lambda, &p.p_doc, &p.p_ai);
    let k = (&one - &p.pi_doc) * (&one - &p.pi_ai);
    let one_wrong = pd + pa - int(2) * pd * pa;
    let num = g * l * (&one - &p.pi_doc) * (pd * pa + (&one - pd) * (&one - pa) + &p.pi_ai * &one_wrong);
    let den = g * (&one - l) * pa * (&one - pd) + l * (&one - g) * pd * (&one - pa) + g * l * &k * &one_wrong;
    num / den
}

/// `P(Comp) / P(Atten)` after `D=1, A=0` when the doctor saw an
/// abnormality only in her critical dimension.
pub fn comprehension_odds_false_alarm(p: &ModelParams) -> Rational {
    let one = Rational::one();
    let (g, l, pd, pa, pi_a) = (&p.gamma, &p.lambda, &p.p_doc, &p.p_ai, &p.pi_ai);
    let k = (&one - &p.pi_doc) * (&one - pi_a);
    let one_wrong = pd + pa - int(2) * pd * pa;
    let num = g * (&one - l) * pd * (&one - pa) + l * (&one - g) * pa * (&one - pd) + g * l * &k * &one_wrong;
    let den = g * (&one - l) * pd * pa * (&one - pi_a)
        + l * (&one - g) * (&one - pd) * (&one - pa) * (&one - pi_a)
        + g * l * &k * (pd * pa + (&one - pd) * (&one - pa));
    num / den
}

/// The two disagreement information sets the closed-form odds describe,
/// with the doctor's critical dimension L.
pub fn canonical_disagreements() -> [InformationSet; 2] {
    [
        InformationSet::uninterpretable(Signal::new(false, true), crate::model::Dim::L, false, true),
        InformationSet::uninterpretable(Signal::new(true, false), crate::model::Dim::L, true, false),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnosis::lr_interpretable;
    use crate::model::Dim;
    use crate::rational::{half, ratio};

    fn missed_positive() -> InformationSet {
        canonical_disagreements()[0]
    }

    fn false_alarm() -> InformationSet {
        canonical_disagreements()[1]
    }

    #[test]
    fn weights_sum_to_one_and_average_reconstructs_posterior() {
        let p = ModelParams::reference().with_p_doc(ratio(4, 5));
        for info in canonical_disagreements() {
            let rec = decompose(&p, &info).unwrap();
            assert_eq!(&rec.w_atten + &rec.w_comp, Rational::one());
            assert_eq!(rec.recombined(), rec.post_total);
        }
    }

    #[test]
    fn closed_form_odds_match_enumeration() {
        for pd in [ratio(3, 4), ratio(4, 5), ratio(19, 20)] {
            let p = ModelParams::reference().with_p_doc(pd);
            let (wa, wc) = attribution_weights(&p, &missed_positive()).unwrap();
            assert_eq!(wa / wc, attention_odds_missed_positive(&p));
            let (wa, wc) = attribution_weights(&p, &false_alarm()).unwrap();
            assert_eq!(wc / wa, comprehension_odds_false_alarm(&p));
        }
    }

    #[test]
    fn perfect_attention_leaves_nothing_missed() {
        let p = ModelParams::reference().with_pi_doc(Rational::one());
        let rec = decompose(&p, &missed_positive()).unwrap();
        assert!(rec.w_atten.is_zero());
        assert_eq!(rec.post_atten, None);
        assert_eq!(rec.post_comp.as_ref(), Some(&rec.post_total));
    }

    #[test]
    fn attention_source_is_persuasive() {
        let p = ModelParams::reference();
        assert!(source_conditional_posterior(&p, &missed_positive(), Source::Attention).unwrap() > half());
        let healthy = Rational::one() - source_conditional_posterior(&p, &false_alarm(), Source::Attention).unwrap();
        assert!(healthy < half());
    }

    #[test]
    fn comprehension_source_at_threshold_is_even() {
        let p = ModelParams::reference().with_p_doc(ratio(63, 71));
        let post = source_conditional_posterior(&p, &missed_positive(), Source::Comprehension).unwrap();
        assert_eq!(post, half());
        let lr = lr_interpretable(&p, Signal::new(false, true), Dim::L, Signal::new(false, true), Dim::R).unwrap();
        assert_eq!(lr.posterior(), post);
    }

    #[test]
    fn shared_perfect_comprehension_removes_comprehension_source() {
        let p = ModelParams::reference().with_p_ai(Rational::one()).with_p_doc(Rational::one());
        let rec = decompose(&p, &missed_positive()).unwrap();
        assert!(rec.w_comp.is_zero());
        assert_eq!(rec.post_atten.as_ref(), Some(&rec.post_total));
    }

    #[test]
    fn agreement_is_rejected() {
        let p = ModelParams::reference();
        let info = InformationSet::uninterpretable(Signal::NONE, Dim::L, false, false);
        assert!(matches!(decompose(&p, &info), Err(Error::InvalidArgument(_))));
    }
}
