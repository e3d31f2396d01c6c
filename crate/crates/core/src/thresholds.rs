//! Persuasion thresholds on the doctor's comprehension skill.
//!
//! | threshold | regime | disagreement | doctor's signals | persuaded iff |
//! |---|---|---|---|---|
//! | `p1` | interpretable | D=0, A=1, AI reads the other dimension | any blank critical dim | `p_doc <= p1` |
//! | `p2` | uninterpretable | D=0, A=1 | abnormality outside critical dim | `p_doc <= p2` |
//! | `p3` | interpretable | D=1, A=0, AI reads the other dimension | `x_doc != (1,1)` | `p_doc < p3` |
//! | `p4` | uninterpretable | D=1, A=0 | abnormality only in critical dim | `p_doc < p4` |
//!
//! With a hallucinating AI the interpretable threshold splits by what the
//! doctor saw (`p1'` for nothing, `p1''` for an abnormality outside her
//! critical dimension) and the uninterpretable one becomes `p2'`.
//! Thresholds are never clamped: `p2 > 1` and `p4 < 1/2` both occur.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Dim, ModelParams, Signal};
use crate::oracle::{Crossing, InformationSet};
use crate::rational::{half, int, ratio, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ThresholdKind {
    P1,
    P2,
    P3,
    P4,
    P1Prime,
    P1DoublePrime,
    P2Prime,
}

impl ThresholdKind {
    pub const CORE: [ThresholdKind; 4] = [ThresholdKind::P1, ThresholdKind::P2, ThresholdKind::P3, ThresholdKind::P4];
    pub const HALLUCINATION: [ThresholdKind; 3] =
        [ThresholdKind::P1Prime, ThresholdKind::P1DoublePrime, ThresholdKind::P2Prime];

    pub fn name(self) -> &'static str {
        match self {
            ThresholdKind::P1 => "p1",
            ThresholdKind::P2 => "p2",
            ThresholdKind::P3 => "p3",
            ThresholdKind::P4 => "p4",
            ThresholdKind::P1Prime => "p1_prime",
            ThresholdKind::P1DoublePrime => "p1_dprime",
            ThresholdKind::P2Prime => "p2_prime",
        }
    }

    /// True for the thresholds where a tie still persuades (`p_doc <= t`),
    /// false where persuasion needs `p_doc < t`.
    pub fn persuades_at_tie(self) -> bool {
        !matches!(self, ThresholdKind::P3 | ThresholdKind::P4)
    }

    pub fn persuaded(self, p_doc: &Rational, threshold: &Rational) -> bool {
        if self.persuades_at_tie() {
            p_doc <= threshold
        } else {
            p_doc < threshold
        }
    }

    /// Which comprehension skills in `[1/2, 1]` are persuaded.
    pub fn classify(self, threshold: &Rational) -> Crossing {
        let lo = half();
        let hi = Rational::one();
        if self.persuades_at_tie() {
            if *threshold >= hi {
                Crossing::Always
            } else if *threshold < lo {
                Crossing::Never
            } else {
                Crossing::Interval
            }
        } else if *threshold > hi {
            Crossing::Always
        } else if *threshold <= lo {
            Crossing::Never
        } else {
            Crossing::Interval
        }
    }

    /// Information set, with the doctor's critical dimension L, on which the
    /// doctor's posterior crosses 1/2 exactly at this threshold.
    pub fn template(self) -> InformationSet {
        let s00 = Signal::NONE;
        let s01 = Signal::new(false, true);
        let s10 = Signal::new(true, false);
        match self {
            ThresholdKind::P1 | ThresholdKind::P1DoublePrime => {
                InformationSet::interpretable(s01, Dim::L, false, s01, Dim::R, true)
            }
            ThresholdKind::P1Prime => InformationSet::interpretable(s00, Dim::L, false, s01, Dim::R, true),
            ThresholdKind::P2 | ThresholdKind::P2Prime => InformationSet::uninterpretable(s01, Dim::L, false, true),
            ThresholdKind::P3 => InformationSet::interpretable(s10, Dim::L, true, s00, Dim::R, false),
            ThresholdKind::P4 => InformationSet::uninterpretable(s10, Dim::L, true, false),
        }
    }

    /// The closed form, evaluated without checking the parameters.
    pub fn formula(self, p: &ModelParams) -> Rational {
        let one = Rational::one();
        let g_odds = (&one - &p.gamma) / &p.gamma;
        let l_odds = (&one - &p.lambda) / &p.lambda;
        let pa = &p.p_ai;
        let cpa = &one - pa;
        let k = (&one - &p.pi_doc) * (&one - &p.pi_ai);
        let bias = int(2) * pa - &one;
        let phi = &p.phi_ai;
        match self {
            ThresholdKind::P1 => {
                pa * (&l_odds + &k) / (&cpa * &g_odds + pa * &l_odds + &bias * &k)
            }
            ThresholdKind::P2 => {
                (&l_odds * pa + (&one - &p.pi_doc)) / (&g_odds * &cpa + &l_odds * pa)
            }
            ThresholdKind::P3 => pa * (&g_odds - &k) / (pa * &g_odds + &cpa * &l_odds - &bias * &k),
            ThresholdKind::P4 => {
                let seen = &one - &p.pi_ai + pa * &p.pi_ai;
                let num = &g_odds * &seen - &k;
                num.clone() / (num + &k + &l_odds * (&one - pa * &p.pi_ai))
            }
            ThresholdKind::P1Prime => {
                let (g, l) = (&p.gamma, &p.lambda);
                let x = g * &p.pi_ai * (&one - &p.pi_doc) - (&one - g) * (&one - phi);
                let y = (&one - g) * phi - g * &k;
                let missed = l * &p.pi_ai * (&one - &p.pi_doc) + (&one - l) * (&one - phi);
                let clean = l * &k + (&one - l) * phi;
                let lead = pa * &x * &clean;
                lead.clone() / (lead + &cpa * &y * &missed)
            }
            ThresholdKind::P1DoublePrime => {
                pa * (&l_odds * phi + &k) / (&l_odds * pa * phi + &g_odds * &cpa * phi + &bias * &k)
            }
            ThresholdKind::P2Prime => {
                let fake = (&one - phi) / &p.pi_ai;
                let num = &fake * &l_odds * &cpa + &l_odds * pa + (&one - &p.pi_doc);
                let den = &fake * (&g_odds * pa + &l_odds * &cpa) + &g_odds * &cpa + &l_odds * pa;
                num / den
            }
        }
    }

    pub fn is_hallucination_variant(self) -> bool {
        Self::HALLUCINATION.contains(&self)
    }
}

impl fmt::Display for ThresholdKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn checked(kind: ThresholdKind, p: &ModelParams) -> Result<Rational> {
    p.require_valid()?;
    if kind.is_hallucination_variant() && !p.hallucinates() {
        return Err(Error::InvalidParams(format!("{kind} needs phi_ai < 1")));
    }
    Ok(kind.formula(p))
}

pub fn p1(p: &ModelParams) -> Result<Rational> {
    checked(ThresholdKind::P1, p)
}

pub fn p2(p: &ModelParams) -> Result<Rational> {
    checked(ThresholdKind::P2, p)
}

pub fn p3(p: &ModelParams) -> Result<Rational> {
    checked(ThresholdKind::P3, p)
}

pub fn p4(p: &ModelParams) -> Result<Rational> {
    checked(ThresholdKind::P4, p)
}

/// `(p1', p1'', p2')`; requires a hallucinating AI above its bound.
pub fn hallucination_thresholds(p: &ModelParams) -> Result<(Rational, Rational, Rational)> {
    Ok((
        checked(ThresholdKind::P1Prime, p)?,
        checked(ThresholdKind::P1DoublePrime, p)?,
        checked(ThresholdKind::P2Prime, p)?,
    ))
}

/// Holds exactly when `p4 >= 1/2`.
pub fn p4_reaches_half(p: &ModelParams) -> bool {
    let one = Rational::one();
    let g_odds = (&one - &p.gamma) / &p.gamma;
    let l_odds = (&one - &p.lambda) / &p.lambda;
    let lhs = (&l_odds * &p.p_ai - &g_odds * (&one - &p.p_ai)) * &p.pi_ai;
    let rhs = p.lambda.recip() - p.gamma.recip() + int(2) * (&one - &p.pi_doc) * (&one - &p.pi_ai);
    lhs >= rhs
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdSet {
    pub p1: Rational,
    pub p2: Rational,
    pub p3: Rational,
    pub p4: Rational,
    pub p1_prime: Option<Rational>,
    pub p1_dprime: Option<Rational>,
    pub p2_prime: Option<Rational>,
}

impl ThresholdSet {
    pub fn get(&self, kind: ThresholdKind) -> Option<&Rational> {
        match kind {
            ThresholdKind::P1 => Some(&self.p1),
            ThresholdKind::P2 => Some(&self.p2),
            ThresholdKind::P3 => Some(&self.p3),
            ThresholdKind::P4 => Some(&self.p4),
            ThresholdKind::P1Prime => self.p1_prime.as_ref(),
            ThresholdKind::P1DoublePrime => self.p1_dprime.as_ref(),
            ThresholdKind::P2Prime => self.p2_prime.as_ref(),
        }
    }

    /// `p4 <= p3 <= p1 <= p2`, and `p1' <= p1'' <= p2'` when present.
    pub fn is_ordered(&self) -> bool {
        let core = self.p4 <= self.p3 && self.p3 <= self.p1 && self.p1 <= self.p2;
        let primes = match (&self.p1_prime, &self.p1_dprime, &self.p2_prime) {
            (Some(a), Some(b), Some(c)) => a <= b && b <= c,
            _ => true,
        };
        core && primes
    }
}

/// All thresholds at one parameter point.
pub fn thresholds(p: &ModelParams) -> Result<ThresholdSet> {
    p.require_valid()?;
    let (p1_prime, p1_dprime, p2_prime) = if p.hallucinates() {
        let (a, b, c) = hallucination_thresholds(p)?;
        (Some(a), Some(b), Some(c))
    } else {
        (None, None, None)
    };
    Ok(ThresholdSet {
        p1: ThresholdKind::P1.formula(p),
        p2: ThresholdKind::P2.formula(p),
        p3: ThresholdKind::P3.formula(p),
        p4: ThresholdKind::P4.formula(p),
        p1_prime,
        p1_dprime,
        p2_prime,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdCurve {
    pub grid: Vec<(Rational, ThresholdSet)>,
}

/// Thresholds as `pi_doc` varies, everything else fixed.
pub fn threshold_curve(p: &ModelParams, pi_docs: &[Rational]) -> Result<ThresholdCurve> {
    if pi_docs.is_empty() {
        return Err(Error::InvalidArgument("empty pi_doc grid".into()));
    }
    if pi_docs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("pi_doc grid must be strictly increasing".into()));
    }
    let mut grid = Vec::with_capacity(pi_docs.len());
    let mut invalid = Vec::new();
    for pi in pi_docs {
        let q = p.clone().with_pi_doc(pi.clone());
        match thresholds(&q) {
            Ok(set) => grid.push((pi.clone(), set)),
            Err(e) => invalid.push(format!("pi_doc={pi}: {e}")),
        }
    }
    if !invalid.is_empty() {
        return Err(Error::InvalidParams(invalid.join("; ")));
    }
    Ok(ThresholdCurve { grid })
}

/// Step used for finite-difference slopes in `pi_doc`.
pub fn default_step() -> Rational {
    ratio(1, 10_000)
}

/// Central difference of `f` in `pi_doc`, evaluated exactly.
pub fn slope_in_pi_doc<F: Fn(&ModelParams) -> Rational>(p: &ModelParams, h: &Rational, f: F) -> Rational {
    let up = p.clone().with_pi_doc(&p.pi_doc + h);
    let down = p.clone().with_pi_doc(&p.pi_doc - h);
    (f(&up) - f(&down)) / (int(2) * h)
}

/// Derivative signs around `p.pi_doc`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeCheck {
    pub slope_p1: Rational,
    pub slope_p2: Rational,
    pub slope_p3: Rational,
    pub slope_p4: Rational,
}

impl SlopeCheck {
    pub fn at(p: &ModelParams, h: &Rational) -> Self {
        let s = |k: ThresholdKind| slope_in_pi_doc(p, h, |q| k.formula(q));
        SlopeCheck {
            slope_p1: s(ThresholdKind::P1),
            slope_p2: s(ThresholdKind::P2),
            slope_p3: s(ThresholdKind::P3),
            slope_p4: s(ThresholdKind::P4),
        }
    }

    /// `p2 - p1` falls as `pi_doc` rises.
    pub fn gap_p2_p1_decreasing(&self) -> bool {
        (&self.slope_p2 - &self.slope_p1).is_negative()
    }

    /// `p3 - p4` falls as `pi_doc` rises.
    pub fn gap_p3_p4_decreasing(&self) -> bool {
        (&self.slope_p3 - &self.slope_p4).is_negative()
    }

    pub fn p1_p2_falling(&self) -> bool {
        self.slope_p1.is_negative() && self.slope_p2.is_negative() && self.slope_p2 <= self.slope_p1
    }

    pub fn p3_p4_rising(&self) -> bool {
        self.slope_p3.is_positive() && self.slope_p4.is_positive() && self.slope_p4 >= self.slope_p3
    }

    pub fn zero_free(&self) -> bool {
        !(self.slope_p1.is_zero() || self.slope_p2.is_zero() || self.slope_p3.is_zero() || self.slope_p4.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::exact_threshold_in_p_doc;

    #[test]
    fn reference_values() {
        let set = thresholds(&ModelParams::reference()).unwrap();
        assert_eq!(set.p1, ratio(63, 71));
        assert_eq!(set.p2, ratio(111, 110));
        assert_eq!(set.p3, ratio(128, 191));
        assert_eq!(set.p4, ratio(139, 310));
        assert!(set.is_ordered());
        assert!(set.p1 >= ModelParams::reference().p_ai);
        assert!(set.p3 <= ModelParams::reference().p_ai);
    }

    #[test]
    fn classification_respects_tie_rules() {
        assert_eq!(ThresholdKind::P2.classify(&ratio(111, 110)), Crossing::Always);
        assert_eq!(ThresholdKind::P2.classify(&Rational::one()), Crossing::Always);
        assert_eq!(ThresholdKind::P3.classify(&Rational::one()), Crossing::Interval);
        assert_eq!(ThresholdKind::P4.classify(&ratio(139, 310)), Crossing::Never);
        assert_eq!(ThresholdKind::P4.classify(&half()), Crossing::Never);
        assert!(ThresholdKind::P1.persuaded(&ratio(63, 71), &ratio(63, 71)));
        assert!(!ThresholdKind::P3.persuaded(&ratio(128, 191), &ratio(128, 191)));
    }

    #[test]
    fn full_attention_closes_the_averaging_gap() {
        let p = ModelParams::reference().with_pi_doc(Rational::one());
        let set = thresholds(&p).unwrap();
        assert_eq!(set.p1, set.p2);
    }

    #[test]
    fn perfect_ai_comprehension_simplifies_p1() {
        let p = ModelParams::reference().with_p_ai(Rational::one());
        let one = Rational::one();
        let l_odds = (&one - &p.lambda) / &p.lambda;
        let k = (&one - &p.pi_doc) * (&one - &p.pi_ai);
        assert_eq!(p1(&p).unwrap(), (&l_odds + &k) / (&l_odds + &k));
    }

    #[test]
    fn p4_half_condition() {
        assert!(!p4_reaches_half(&ModelParams::reference()));
        let p = ModelParams::parse(["0.3", "0.3", "0.5", "0.75", "0.8", "0.9"]).unwrap();
        assert!(p4_reaches_half(&p));
        assert!(p4(&p).unwrap() >= half());
    }

    #[test]
    fn hallucination_thresholds_match_enumeration() {
        let p = ModelParams::reference().with_phi_ai(ratio(999, 1000));
        let (a, b, c) = hallucination_thresholds(&p).unwrap();
        assert!(a <= b && b < c);
        for (kind, value) in [
            (ThresholdKind::P1Prime, &a),
            (ThresholdKind::P1DoublePrime, &b),
            (ThresholdKind::P2Prime, &c),
        ] {
            let solve = exact_threshold_in_p_doc(&p, &kind.template()).unwrap();
            assert_eq!(solve.root.as_ref(), Some(value), "{kind}");
        }
    }

    #[test]
    fn hallucination_forms_approach_the_clean_ones() {
        let clean = ModelParams::reference();
        let near = clean.clone().with_phi_ai(Rational::one() - ratio(1, 1_000_000_000));
        let tol = ratio(1, 1_000_000);
        let close = |a: Rational, b: Rational| (a - b).abs() < tol;
        assert!(close(ThresholdKind::P1DoublePrime.formula(&near), ThresholdKind::P1.formula(&clean)));
        assert!(close(ThresholdKind::P2Prime.formula(&near), ThresholdKind::P2.formula(&clean)));
        assert_eq!(ThresholdKind::P1DoublePrime.formula(&clean), ThresholdKind::P1.formula(&clean));
        assert_eq!(ThresholdKind::P2Prime.formula(&clean), ThresholdKind::P2.formula(&clean));
    }

    #[test]
    fn hallucination_variants_need_hallucination() {
        assert!(hallucination_thresholds(&ModelParams::reference()).is_err());
    }

    #[test]
    fn curve_over_attention_grid() {
        let grid: Vec<Rational> = (3..=10).map(|i| ratio(i, 10)).collect();
        let curve = threshold_curve(&ModelParams::reference(), &grid).unwrap();
        assert_eq!(curve.grid.len(), 8);
        assert!(threshold_curve(&ModelParams::reference(), &[ratio(1, 10)]).is_err());
        let gaps: Vec<Rational> = curve.grid.iter().map(|(_, s)| &s.p2 - &s.p1).collect();
        assert!(gaps.windows(2).all(|w| w[1] < w[0]));
        assert!(curve.grid.iter().all(|(_, s)| s.is_ordered()));
        let single = threshold_curve(&ModelParams::reference(), &[half()]).unwrap();
        assert_eq!(single.grid.len(), 1);
        assert!(threshold_curve(&ModelParams::reference(), &[half(), half()]).is_err());
    }

    #[test]
    fn slopes_at_reference_point() {
        let check = SlopeCheck::at(&ModelParams::reference(), &default_step());
        assert!(check.p1_p2_falling());
        assert!(check.gap_p2_p1_decreasing());
        assert!(check.slope_p3.is_positive() && check.slope_p4.is_positive());
    }
}
