//! A costly extra attention signal `X^E`, drawn after the AI's feedback.
//!
//! With `pi_ai = 0` the AI always reports `(0,0)` and `A = 0`, so only
//! doctors with `D = 0` ever consider drawing. Relative to the doctor's
//! critical dimension the four cases are
//!
//! | case | doctor's signal | AI's critical dim |
//! |---|---|---|
//! | 1 | `(0,0)` | same |
//! | 2 | `(0,0)` | other |
//! | 3 | `(0,1)` | same |
//! | 4 | `(0,1)` | other |
//!
//! An interpretable AI reveals the case; an uninterpretable one only
//! lets the doctor tell `{1,2}` from `{3,4}`. The final diagnosis is
//! `F = D or (drew and X^E[W^Doc] = 1)`.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::model::{Dim, ModelParams, Signal};
use crate::oracle::{InformationSet, Oracle, Regime};
use crate::rational::{half, int, Rational};
use crate::thresholds::ThresholdKind;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreerideParams {
    pub base: ModelParams,
    pub cost: Rational,
}

impl FreerideParams {
    pub fn new(base: ModelParams, cost: Rational) -> Result<Self> {
        let fp = FreerideParams { base, cost };
        fp.validate()?;
        Ok(fp)
    }

    /// `gamma = 3/10, lambda = 1/5, pi_doc = 1/2, p_doc = 19/20, pi_ai = 0,
    /// p_ai = 4/5`, with cost at the midpoint of its interval.
    pub fn canonical() -> Self {
        let base = ModelParams::parse(["0.3", "0.2", "0.5", "0.95", "0", "0.8"]).expect("literal");
        let probe = FreerideParams { base, cost: Rational::one() };
        let report = freeride_deltas(&probe).expect("canonical point is valid");
        let (c1, c2) = cost_interval(&report).expect("canonical interval is nonempty");
        probe.with_cost((c1 + c2) / int(2))
    }

    pub fn with_cost(mut self, cost: Rational) -> Self {
        self.cost = cost;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let p = &self.base;
        p.require_valid()?;
        if !p.pi_ai.is_zero() {
            return Err(Error::InvalidParams(format!("free-riding needs pi_ai = 0, got {}", p.pi_ai)));
        }
        if p.hallucinates() {
            return Err(Error::InvalidParams("free-riding needs phi_ai = 1".into()));
        }
        if self.cost <= Rational::zero() {
            return Err(Error::InvalidParams(format!("cost must be positive, got {}", self.cost)));
        }
        let p1 = ThresholdKind::P1.formula(p);
        if p.p_ai >= p1 {
            return Err(Error::InvalidParams(format!("need p_ai = {} < p1 = {p1}", p.p_ai)));
        }
        if p.p_doc < p1 {
            return Err(Error::InvalidParams(format!("need p_doc = {} >= p1 = {p1}", p.p_doc)));
        }
        Ok(())
    }
}

/// Case index 1..=4 for a doctor with `D = 0`; `None` when `D = 1`.
pub fn case_index(x_doc: Signal, w_doc: Dim, w_ai: Dim) -> Option<usize> {
    if x_doc.get(w_doc) {
        return None;
    }
    let saw_other = x_doc.get(w_doc.other());
    let same = w_ai == w_doc;
    Some(match (saw_other, same) {
        (false, true) => 1,
        (false, false) => 2,
        (true, true) => 3,
        (true, false) => 4,
    })
}

fn case_profile(case: usize) -> Result<(Signal, Dim)> {
    match case {
        1 => Ok((Signal::NONE, Dim::L)),
        2 => Ok((Signal::NONE, Dim::R)),
        3 => Ok((Signal::new(false, true), Dim::L)),
        4 => Ok((Signal::new(false, true), Dim::R)),
        _ => Err(Error::InvalidArgument(format!("case must be 1..=4, got {case}"))),
    }
}

/// Which of the three cost-interval constructions applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Branch {
    Delta2Above,
    Delta2Equal,
    Delta2Below,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Delta2Above => "delta2>delta4",
            Branch::Delta2Equal => "delta2=delta4",
            Branch::Delta2Below => "delta2<delta4",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreerideReport {
    /// Expected accuracy gain from drawing in cases 1..=4.
    pub deltas: [Rational; 4],
    pub mu: Rational,
    pub eta: Rational,
    /// `P(case | doctor's signal)` for cases 1..=4; 1,2 and 3,4 each sum to 1.
    pub weights: [Rational; 4],
    /// Gain an uninterpretable doctor expects after `(0,0)` and `(0,1)`.
    pub mix12: Rational,
    pub mix34: Rational,
}

impl FreerideReport {
    pub fn delta(&self, case: usize) -> &Rational {
        &self.deltas[case - 1]
    }

    pub fn branch(&self) -> Branch {
        match self.deltas[1].cmp(&self.deltas[3]) {
            std::cmp::Ordering::Greater => Branch::Delta2Above,
            std::cmp::Ordering::Equal => Branch::Delta2Equal,
            std::cmp::Ordering::Less => Branch::Delta2Below,
        }
    }

    /// Threshold the cost is compared against in `case` under `regime`.
    pub fn bound(&self, regime: Regime, case: usize) -> &Rational {
        match regime {
            Regime::Interpretable => self.delta(case),
            Regime::Uninterpretable if case <= 2 => &self.mix12,
            Regime::Uninterpretable => &self.mix34,
        }
    }
}

/// `p_doc p_ai / (p_doc p_ai + (1 - p_doc)(1 - p_ai))`.
pub fn mu(p: &ModelParams) -> Rational {
    let one = Rational::one();
    let agree = &p.p_doc * &p.p_ai;
    &agree / (&agree + (&one - &p.p_doc) * (&one - &p.p_ai))
}

/// `p_doc (1 - p_ai) / (p_doc (1 - p_ai) + p_ai (1 - p_doc))`.
pub fn eta(p: &ModelParams) -> Rational {
    let one = Rational::one();
    let doc_right = &p.p_doc * (&one - &p.p_ai);
    &doc_right / (&doc_right + &p.p_ai * (&one - &p.p_doc))
}

/// Gain in the cases where the doctor saw nothing, with `nu` the
/// probability that her critical dimension is right.
pub fn delta_blank(p: &ModelParams, nu: &Rational) -> Rational {
    let one = Rational::one();
    let (g, l, pi) = (&p.gamma, &p.lambda, &p.pi_doc);
    let miss = &one - l * pi;
    let num = g * (nu * &miss + (&one - nu) * l * (&one - pi)) - (&one - g) * (&one - nu) * l;
    let den = g * (&one - pi) * &miss + (&one - g) * &miss;
    pi * (&one - pi) * num / den
}

/// Gain in the cases where the doctor saw an abnormality outside her
/// critical dimension.
pub fn delta_other_seen(p: &ModelParams, nu: &Rational) -> Rational {
    let one = Rational::one();
    let (g, l, pi) = (&p.gamma, &p.lambda, &p.pi_doc);
    let num = pi * (&one - pi) * g * l;
    let den = g * nu * (&one - pi) * l + g * (&one - nu) * (&one - l * pi) + (&one - g) * nu * l;
    num / den
}

fn oracle_gain(oracle: &Oracle, case: usize) -> Result<Rational> {
    let (x_doc, w_ai) = case_profile(case)?;
    let given = |o: &crate::model::Outcome| o.x_doc == x_doc && o.w_doc == Dim::L && o.x_ai == Signal::NONE && o.w_ai == w_ai;
    let hit = |o: &crate::model::Outcome| o.x_e.is_some_and(|e| e.l);
    let sick = oracle.conditional(|o| o.z && hit(o), given)?;
    let healthy = oracle.conditional(|o| !o.z && hit(o), given)?;
    Ok(sick - healthy)
}

/// Deltas, `mu`, `eta` and mixture weights. Each closed-form delta is
/// checked against the enumeration with the extra signal.
pub fn freeride_deltas(fp: &FreerideParams) -> Result<FreerideReport> {
    fp.validate()?;
    let p = &fp.base;
    let (m, e) = (mu(p), eta(p));
    let deltas = [delta_blank(p, &m), delta_blank(p, &e), delta_other_seen(p, &m), delta_other_seen(p, &e)];
    let oracle = Oracle::new(p, true)?;
    for (i, d) in deltas.iter().enumerate() {
        let direct = oracle_gain(&oracle, i + 1)?;
        if &direct != d {
            return Err(Error::Inconsistent(format!("delta{} = {d} but enumeration gives {direct}", i + 1)));
        }
    }
    let weight = |case: usize| -> Result<Rational> {
        let (x_doc, w_ai) = case_profile(case)?;
        oracle.conditional(|o| o.w_ai == w_ai, |o| o.x_doc == x_doc && o.w_doc == Dim::L)
    };
    let weights = [weight(1)?, weight(2)?, weight(3)?, weight(4)?];
    let mix12 = &weights[0] * &deltas[0] + &weights[1] * &deltas[1];
    let mix34 = &weights[2] * &deltas[2] + &weights[3] * &deltas[3];
    Ok(FreerideReport { deltas, mu: m, eta: e, weights, mix12, mix34 })
}

/// `(c1, c2)` from the branch on `delta2` versus `delta4`.
pub fn cost_interval(report: &FreerideReport) -> Result<(Rational, Rational)> {
    let d = &report.deltas;
    let (c1, c2) = match report.branch() {
        Branch::Delta2Above => (d[3].clone(), d[1].clone().min(report.mix34.clone())),
        Branch::Delta2Equal => (d[1].clone(), report.mix12.clone().min(report.mix34.clone())),
        Branch::Delta2Below => (d[1].clone(), report.mix12.clone().min(d[3].clone())),
    };
    if c1 >= c2 {
        return Err(Error::EmptyInterval { c1: c1.to_string(), c2: c2.to_string() });
    }
    Ok((c1, c2))
}

/// Draw iff the cost is at most the expected gain the doctor can condition
/// on; ties draw.
pub fn draws(report: &FreerideReport, regime: Regime, case: usize, cost: &Rational) -> Result<bool> {
    if !(1..=4).contains(&case) {
        return Err(Error::InvalidArgument(format!("case must be 1..=4, got {case}")));
    }
    Ok(cost <= report.bound(regime, case))
}

pub fn draw_policy(fp: &FreerideParams, regime: Regime, case: usize) -> Result<bool> {
    draws(&freeride_deltas(fp)?, regime, case, &fp.cost)
}

/// Draw decisions for cases 1..=4.
pub fn draw_table(report: &FreerideReport, regime: Regime, cost: &Rational) -> [bool; 4] {
    [1, 2, 3, 4].map(|case| cost <= report.bound(regime, case))
}

pub fn draw_count(report: &FreerideReport, regime: Regime, cost: &Rational) -> usize {
    draw_table(report, regime, cost).iter().filter(|d| **d).count()
}

/// Accuracy and draw probability of one regime at one cost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegimeOutcome {
    pub accuracy: Rational,
    pub draw_probability: Rational,
}

/// `P(F = Z)` and `P(draw)` under the regime's draw policy, by enumeration
/// including the extra signal.
pub fn regime_outcome(fp: &FreerideParams, report: &FreerideReport, regime: Regime) -> Result<RegimeOutcome> {
    let oracle = Oracle::new(&fp.base, true)?;
    let table = draw_table(report, regime, &fp.cost);
    let mut accuracy = Rational::zero();
    let mut draw_probability = Rational::zero();
    for atom in oracle.atoms() {
        let o = &atom.outcome;
        let d = oracle
            .doctor_decision(o.x_doc, o.w_doc)
            .ok_or_else(|| Error::Inconsistent("atom outside the doctor's table".into()))?;
        let drew = !d && case_index(o.x_doc, o.w_doc, o.w_ai).is_some_and(|c| table[c - 1]);
        let f = d || (drew && o.x_e.is_some_and(|e| e.get(o.w_doc)));
        if drew {
            draw_probability += &atom.prob;
        }
        if f == o.z {
            accuracy += &atom.prob;
        }
    }
    Ok(RegimeOutcome { accuracy, draw_probability })
}

pub fn freeride_accuracy(fp: &FreerideParams, regime: Regime) -> Result<Rational> {
    let report = freeride_deltas(fp)?;
    Ok(regime_outcome(fp, &report, regime)?.accuracy)
}

/// True when `c1 < cost < c2`; the accuracy comparison is only claimed there.
pub fn cost_in_interval(report: &FreerideReport, cost: &Rational) -> Result<bool> {
    let (c1, c2) = cost_interval(report)?;
    Ok(&c1 < cost && cost < &c2)
}

/// Checks on the enumeration that a positive initial diagnosis stays
/// positive in both regimes, which is why `D = 1` doctors never draw.
pub fn positive_doctor_holds(fp: &FreerideParams) -> Result<bool> {
    let oracle = Oracle::new(&fp.base, false)?;
    for atom in oracle.atoms() {
        for regime in Regime::BOTH {
            let Some(info) = oracle.info_at(&atom.outcome, regime) else { continue };
            if info.d && oracle.posterior(&info)? < half() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Information set of a `D = 0` doctor in `case` who has not drawn.
pub fn case_information(case: usize, regime: Regime) -> Result<InformationSet> {
    let (x_doc, w_ai) = case_profile(case)?;
    Ok(match regime {
        Regime::Interpretable => InformationSet::interpretable(x_doc, Dim::L, false, Signal::NONE, w_ai, false),
        Regime::Uninterpretable => InformationSet::uninterpretable(x_doc, Dim::L, false, false),
    })
}
