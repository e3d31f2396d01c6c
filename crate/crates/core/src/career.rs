//! Career concerns: two doctor types with shared attention, a perfect
//! high type and an imperfect low type who mimics it.
//!
//! The high type diagnoses efficiently, which on observables is
//!
//! * interpretable AI: `F = D or X^AI[W^Doc]`
//! * uninterpretable AI: `F = D or A`
//!
//! and the low type copies whichever rule is in force. Accuracy is
//! `P(F = Z)` under the ex-ante distribution.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::model::{feasible_comprehension_floor, ModelParams, Role};
use crate::oracle::{AiView, InformationSet, Oracle, Regime};
use crate::rational::{half, int, Rational};
use crate::thresholds::ThresholdKind;

/// A population of doctors facing the same AI.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PopulationParams {
    /// Shared primitives; `base.p_doc` is ignored.
    pub base: ModelParams,
    pub p_doc_high: Rational,
    pub p_doc_low: Rational,
    /// Probability of the high type.
    pub tau: Rational,
}

impl PopulationParams {
    pub fn new(base: ModelParams, p_doc_low: Rational, tau: Rational) -> Result<Self> {
        let pp = PopulationParams { base, p_doc_high: Rational::one(), p_doc_low, tau };
        pp.validate()?;
        Ok(pp)
    }

    pub fn with_tau(mut self, tau: Rational) -> Result<Self> {
        self.tau = tau;
        self.validate()?;
        Ok(self)
    }

    pub fn low(&self) -> ModelParams {
        self.base.clone().with_p_doc(self.p_doc_low.clone())
    }

    pub fn high(&self) -> ModelParams {
        self.base.clone().with_p_doc(self.p_doc_high.clone())
    }

    pub fn validate(&self) -> Result<()> {
        if self.base.hallucinates() {
            return Err(Error::InvalidParams("career model needs phi_ai = 1".into()));
        }
        if !self.p_doc_high.is_one() {
            return Err(Error::InvalidParams(format!("p_doc_high must be 1, got {}", self.p_doc_high)));
        }
        if self.tau < Rational::zero() || self.tau > Rational::one() {
            return Err(Error::InvalidParams(format!("tau = {} is not a probability", self.tau)));
        }
        self.low().require_valid()?;
        self.high().require_valid()?;
        let p2 = ThresholdKind::P2.formula(&self.base);
        let p3 = ThresholdKind::P3.formula(&self.base);
        if self.p_doc_high >= p2 {
            return Err(Error::InvalidParams(format!("need p_doc_high < p2 = {p2}")));
        }
        if self.p_doc_low <= p3 || self.p_doc_low >= self.base.p_ai {
            return Err(Error::InvalidParams(format!(
                "need p3 = {p3} < p_doc_low = {} < p_ai = {}",
                self.p_doc_low, self.base.p_ai
            )));
        }
        Ok(())
    }
}

/// The efficient high-type final diagnosis, which the low type mimics.
pub fn mimicked_final(info: &InformationSet) -> bool {
    if info.d {
        return true;
    }
    match info.view {
        AiView::Interpretable { x_ai, .. } => x_ai.get(info.w_doc),
        AiView::Uninterpretable => info.a,
    }
}

/// One `(D, A, X^AI[W^Doc])` cell and the final diagnosis in each regime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BehaviorCell {
    pub d: bool,
    pub a: bool,
    pub ai_sees_doc_dim: bool,
    pub f_interpretable: bool,
    pub f_uninterpretable: bool,
    /// Cell probability for the low and high type.
    pub mass_low: Rational,
    pub mass_high: Rational,
}

impl BehaviorCell {
    pub fn differs(&self) -> bool {
        self.f_interpretable != self.f_uninterpretable
    }

    pub fn f(&self, regime: Regime) -> bool {
        match regime {
            Regime::Interpretable => self.f_interpretable,
            Regime::Uninterpretable => self.f_uninterpretable,
        }
    }
}

fn cell_mass(oracle: &Oracle, d: bool, a: bool, x: bool) -> Rational {
    oracle.probability(|o| {
        oracle.doctor_decision(o.x_doc, o.w_doc) == Some(d)
            && oracle.ai_decision(o.x_ai, o.w_ai) == Some(a)
            && o.x_ai.get(o.w_doc) == x
    })
}

/// All eight cells. Both types act identically in every cell by
/// construction; [`high_type_is_efficient`] checks the rule itself.
pub fn behavior_diff_cases(pp: &PopulationParams) -> Result<Vec<BehaviorCell>> {
    pp.validate()?;
    let low = Oracle::new(&pp.low(), false)?;
    let high = Oracle::new(&pp.high(), false)?;
    let mut cells = Vec::with_capacity(8);
    for d in [false, true] {
        for a in [false, true] {
            for x in [false, true] {
                cells.push(BehaviorCell {
                    d,
                    a,
                    ai_sees_doc_dim: x,
                    f_interpretable: d || x,
                    f_uninterpretable: d || a,
                    mass_low: cell_mass(&low, d, a, x),
                    mass_high: cell_mass(&high, d, a, x),
                });
            }
        }
    }
    Ok(cells)
}

/// True when the mimicked rule equals the high type's Bayes decision on
/// every realizable information set of `regime`.
pub fn high_type_is_efficient(pp: &PopulationParams, regime: Regime) -> Result<bool> {
    pp.validate()?;
    let oracle = Oracle::new(&pp.high(), false)?;
    let mut seen: HashMap<InformationSet, bool> = HashMap::new();
    for atom in oracle.atoms() {
        let Some(info) = oracle.info_at(&atom.outcome, regime) else { continue };
        if seen.contains_key(&info) {
            continue;
        }
        let bayes = oracle.posterior(&info)? >= half();
        seen.insert(info, bayes);
        if bayes != mimicked_final(&info) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `P(F = Z and cell(info))` for one doctor type under `regime`.
pub fn accuracy_where<C: Fn(&InformationSet) -> bool>(p: &ModelParams, regime: Regime, cell: C) -> Result<Rational> {
    let oracle = Oracle::new(p, false)?;
    let mut total = Rational::zero();
    for atom in oracle.atoms() {
        let Some(info) = oracle.info_at(&atom.outcome, regime) else { continue };
        if cell(&info) && mimicked_final(&info) == atom.outcome.z {
            total += &atom.prob;
        }
    }
    Ok(total)
}

/// `P(F = Z)` for one doctor type under `regime`.
pub fn type_accuracy(p: &ModelParams, regime: Regime) -> Result<Rational> {
    accuracy_where(p, regime, |_| true)
}

/// `tau * acc(high) + (1 - tau) * acc(low)`.
pub fn population_accuracy(pp: &PopulationParams, regime: Regime) -> Result<Rational> {
    pp.validate()?;
    let high = type_accuracy(&pp.high(), regime)?;
    let low = type_accuracy(&pp.low(), regime)?;
    Ok(&pp.tau * high + (Rational::one() - &pp.tau) * low)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccuracyDelta {
    pub delta1: Rational,
    pub delta2: Rational,
    pub delta: Rational,
    pub tau_bar: Rational,
}

/// The two closed-form accuracy changes for low types, unchecked.
pub fn delta_formulas(base: &ModelParams, p_low: &Rational) -> (Rational, Rational) {
    let one = Rational::one();
    let (g, l, pa, pi_d, pi_a) = (&base.gamma, &base.lambda, &base.p_ai, &base.pi_doc, &base.pi_ai);
    let either = p_low + pa - int(2) * p_low * pa;
    let shared = l * g * &either * pi_a * (&one - pi_d) * (&one - pi_a);
    let d1 = pi_a * (&one - pi_d)
        * (l * (&one - g) * pa * (&one - p_low) - g * (&one - l) * p_low * (&one - pa))
        - &shared;
    let d2 = &shared + pi_a * (g * (&one - l) * pa * (&one - p_low) - l * (&one - g) * p_low * (&one - pa));
    (d1, d2)
}

/// `(p_ai - p_doc_low) * lambda * (1 - gamma)`, a lower bound on the sign
/// expression of `delta`.
pub fn delta_sign_bound(pp: &PopulationParams) -> Rational {
    (&pp.base.p_ai - &pp.p_doc_low) * &pp.base.lambda * (Rational::one() - &pp.base.gamma)
}

pub fn tau_bar(delta: &Rational) -> Rational {
    delta / (Rational::one() + delta)
}

/// `-tau + (1 - tau) * delta`.
pub fn accuracy_gain_bound(tau: &Rational, delta: &Rational) -> Rational {
    (Rational::one() - tau) * delta - tau
}

/// Closed-form deltas, each checked against the oracle's cell masses and
/// the total against the low type's accuracy difference.
pub fn accuracy_delta(pp: &PopulationParams) -> Result<AccuracyDelta> {
    pp.validate()?;
    let (delta1, delta2) = delta_formulas(&pp.base, &pp.p_doc_low);
    let low = Oracle::new(&pp.low(), false)?;
    let cell_gain = |a: bool, x: bool, sick_gains: bool| {
        let (sick, healthy) = low.split_by_disease(|o| {
            low.doctor_decision(o.x_doc, o.w_doc) == Some(false)
                && low.ai_decision(o.x_ai, o.w_ai) == Some(a)
                && o.x_ai.get(o.w_doc) == x
        });
        if sick_gains {
            sick - healthy
        } else {
            healthy - sick
        }
    };
    let o1 = cell_gain(false, true, false);
    let o2 = cell_gain(true, false, true);
    if o1 != delta1 || o2 != delta2 {
        return Err(Error::Inconsistent(format!(
            "delta1 {delta1} vs {o1}, delta2 {delta2} vs {o2} at {}",
            pp.low()
        )));
    }
    let delta = &delta1 + &delta2;
    let direct = type_accuracy(&pp.low(), Regime::Uninterpretable)? - type_accuracy(&pp.low(), Regime::Interpretable)?;
    if direct != delta {
        return Err(Error::Inconsistent(format!("delta {delta} vs accuracy change {direct}")));
    }
    let tau_bar = tau_bar(&delta);
    Ok(AccuracyDelta { delta1, delta2, delta, tau_bar })
}

fn midpoint(a: &Rational, b: &Rational) -> Rational {
    (a + b) / int(2)
}

/// Builds a population satisfying every hypothesis of the accuracy
/// comparison from the four primitives. `p_ai` and `p_doc_low` are
/// midpoints of their feasible ranges; `tau` is half of `tau_bar`.
pub fn construct_prop2_params(
    gamma: Rational,
    lambda: Rational,
    pi_doc: Rational,
    pi_ai: Rational,
) -> Result<PopulationParams> {
    let one = Rational::one();
    let probe = ModelParams::new(gamma.clone(), lambda.clone(), pi_doc.clone(), one.clone(), pi_ai.clone(), one.clone());
    probe.check_structure()?;
    if probe.gamma >= half() || probe.lambda > probe.gamma || probe.lambda.is_zero() {
        return Err(Error::InvalidParams("need 0 < lambda <= gamma < 1/2".into()));
    }
    let p2_bound = &one - &gamma / (&one - &gamma) * (&one - &pi_doc);
    let ai_floor = feasible_comprehension_floor(&probe, Role::Ai)?;
    let ai_lower = [p2_bound, ai_floor, half()].into_iter().max().expect("nonempty");
    if ai_lower >= one {
        return Err(Error::Infeasible(format!("no p_ai in ({ai_lower}, 1)")));
    }
    let p_ai = midpoint(&ai_lower, &one);
    let base = probe.with_p_ai(p_ai.clone());
    let p3 = ThresholdKind::P3.formula(&base);
    let doc_floor = feasible_comprehension_floor(&base, Role::Doctor)?;
    let low_lower = [p3, doc_floor, half()].into_iter().max().expect("nonempty");
    if low_lower >= p_ai {
        return Err(Error::Infeasible(format!("no p_doc_low in ({low_lower}, {p_ai})")));
    }
    let p_low = midpoint(&low_lower, &p_ai);
    let pp = PopulationParams::new(base, p_low, Rational::zero())
        .map_err(|e| Error::Infeasible(format!("constructed point fails: {e}")))?;
    let tau = tau_bar(&accuracy_delta(&pp)?.delta) / int(2);
    pp.with_tau(tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn canonical() -> PopulationParams {
        PopulationParams::new(ModelParams::reference().with_p_ai(ratio(4, 5)), ratio(3, 4), ratio(1, 10)).unwrap()
    }

    #[test]
    fn only_two_cells_differ() {
        let cells = behavior_diff_cases(&canonical()).unwrap();
        let differing: Vec<_> = cells.iter().filter(|c| c.differs()).collect();
        assert_eq!(differing.len(), 2);
        assert!(differing.iter().any(|c| !c.d && !c.a && c.ai_sees_doc_dim && c.f_interpretable));
        assert!(differing.iter().any(|c| !c.d && c.a && !c.ai_sees_doc_dim && c.f_uninterpretable));
        assert!(cells.iter().filter(|c| c.d).all(|c| c.f_interpretable && c.f_uninterpretable));
        let total: Rational = cells.iter().map(|c| &c.mass_low).sum();
        assert!(total.is_one());
    }

    #[test]
    fn high_type_rule_is_bayes() {
        for regime in Regime::BOTH {
            assert!(high_type_is_efficient(&canonical(), regime).unwrap(), "{regime}");
        }
    }

    #[test]
    fn canonical_delta_is_positive() {
        let pp = canonical();
        let acc = accuracy_delta(&pp).unwrap();
        assert!(acc.delta > Rational::zero());
        assert!(acc.tau_bar > Rational::zero() && acc.tau_bar < Rational::one());
        assert!(delta_sign_bound(&pp) > Rational::zero());
        assert!(accuracy_gain_bound(&acc.tau_bar, &acc.delta).is_zero());
    }

    #[test]
    fn population_gain_dominates_bound_below_tau_bar() {
        let pp = canonical();
        let acc = accuracy_delta(&pp).unwrap();
        for i in 0..10 {
            let tau = &acc.tau_bar * ratio(i, 10);
            let q = pp.clone().with_tau(tau.clone()).unwrap();
            let gain = population_accuracy(&q, Regime::Uninterpretable).unwrap()
                - population_accuracy(&q, Regime::Interpretable).unwrap();
            let bound = accuracy_gain_bound(&tau, &acc.delta);
            assert!(gain >= bound && bound > Rational::zero());
            if i == 0 {
                assert_eq!(gain, acc.delta);
            }
        }
    }

    #[test]
    fn all_high_types_is_high_accuracy() {
        let pp = canonical().with_tau(Rational::one()).unwrap();
        for regime in Regime::BOTH {
            assert_eq!(population_accuracy(&pp, regime).unwrap(), type_accuracy(&pp.high(), regime).unwrap());
        }
    }

    #[test]
    fn interpretable_helps_high_types_when_both_negative() {
        let pp = canonical();
        let cell = |i: &InformationSet| !i.d && !i.a;
        let interp = accuracy_where(&pp.high(), Regime::Interpretable, cell).unwrap();
        let uninterp = accuracy_where(&pp.high(), Regime::Uninterpretable, cell).unwrap();
        assert!(interp >= uninterp);
    }

    #[test]
    fn constructed_population_is_valid() {
        let pp = construct_prop2_params(ratio(3, 10), ratio(1, 5), ratio(1, 2), ratio(3, 5)).unwrap();
        assert!(pp.p_doc_low < pp.base.p_ai);
        let acc = accuracy_delta(&pp).unwrap();
        assert!(pp.tau < acc.tau_bar);
    }

    #[test]
    fn rejects_low_type_outside_window() {
        let base = ModelParams::reference().with_p_ai(ratio(4, 5));
        assert!(PopulationParams::new(base.clone(), ratio(81, 100), ratio(1, 2)).is_err());
        assert!(PopulationParams::new(base, ratio(13, 20), ratio(1, 2)).is_err());
    }
}
