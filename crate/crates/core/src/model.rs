//! Model primitives: state and signal types, parameters, assumption checks
//! and the exact joint distribution over outcomes.
//!
//! The state is a disease bit `z`, an abnormality pair `x` and a critical
//! dimension `w` with `x[w] == z`. The doctor and the AI each observe an
//! attention signal (which abnormalities they see) and a comprehension
//! signal (which dimension they believe is critical). Conditional on the
//! state the two agents' signals are independent.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{half, int, parse_decimal, ratio, to_decimal_string, Rational};

/// One of the two dimensions an abnormality can appear in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dim {
    L,
    R,
}

impl Dim {
    pub const ALL: [Dim; 2] = [Dim::L, Dim::R];

    pub fn other(self) -> Dim {
        match self {
            Dim::L => Dim::R,
            Dim::R => Dim::L,
        }
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dim::L => "L",
            Dim::R => "R",
        })
    }
}

impl FromStr for Dim {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "L" | "l" => Ok(Dim::L),
            "R" | "r" => Ok(Dim::R),
            other => Err(Error::Parse(format!("dimension must be L or R, got `{other}`"))),
        }
    }
}

/// A pair of bits indexed by [`Dim`]: an abnormality status or an
/// attention signal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Signal {
    pub l: bool,
    pub r: bool,
}

impl Signal {
    pub const NONE: Signal = Signal { l: false, r: false };
    pub const BOTH: Signal = Signal { l: true, r: true };
    pub const ALL: [Signal; 4] = [
        Signal { l: false, r: false },
        Signal { l: false, r: true },
        Signal { l: true, r: false },
        Signal { l: true, r: true },
    ];

    pub const fn new(l: bool, r: bool) -> Self {
        Signal { l, r }
    }

    pub fn get(self, dim: Dim) -> bool {
        match dim {
            Dim::L => self.l,
            Dim::R => self.r,
        }
    }

    pub fn with(self, dim: Dim, value: bool) -> Self {
        match dim {
            Dim::L => Signal { l: value, ..self },
            Dim::R => Signal { r: value, ..self },
        }
    }

    /// Componentwise `self <= other`.
    pub fn within(self, other: Signal) -> bool {
        (!self.l || other.l) && (!self.r || other.r)
    }

    /// Componentwise maximum.
    pub fn union(self, other: Signal) -> Signal {
        Signal { l: self.l || other.l, r: self.r || other.r }
    }

    pub fn is_both(self) -> bool {
        self.l && self.r
    }

    pub fn swapped(self) -> Signal {
        Signal { l: self.r, r: self.l }
    }

    /// Re-expresses the signal so that `critical` becomes dimension L.
    pub fn relative_to(self, critical: Dim) -> Signal {
        match critical {
            Dim::L => self,
            Dim::R => self.swapped(),
        }
    }
}

impl fmt::Display for Signal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.l as u8, self.r as u8)
    }
}

impl FromStr for Signal {
    type Err = Error;

    /// Accepts `01`, `(0,1)` or `0,1`.
    fn from_str(s: &str) -> Result<Self> {
        let bits: Vec<char> = s.chars().filter(|c| *c == '0' || *c == '1').collect();
        let noise = s.chars().any(|c| !matches!(c, '0' | '1' | '(' | ')' | ',' | ' '));
        if bits.len() != 2 || noise {
            return Err(Error::Parse(format!("signal must look like `01` or `(0,1)`, got `{s}`")));
        }
        Ok(Signal { l: bits[0] == '1', r: bits[1] == '1' })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    Doctor,
    Ai,
}

/// One full joint realization of state and signals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Outcome {
    pub z: bool,
    pub x: Signal,
    pub w: Dim,
    pub x_doc: Signal,
    pub w_doc: Dim,
    pub x_ai: Signal,
    pub w_ai: Dim,
    /// Extra attention signal bought by the doctor, when modelled.
    pub x_e: Option<Signal>,
}

impl Outcome {
    pub fn x_noise(&self) -> bool {
        self.x.get(self.w.other())
    }
}

/// All primitive probabilities of the model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelParams {
    /// Disease prior.
    pub gamma: Rational,
    /// Rate of an abnormality in the non-critical dimension.
    pub lambda: Rational,
    pub pi_doc: Rational,
    pub p_doc: Rational,
    pub pi_ai: Rational,
    pub p_ai: Rational,
    /// Probability the AI correctly reports a normality (1: never hallucinates).
    pub phi_ai: Rational,
    /// Upper bound on `pi_doc` assumed when `phi_ai < 1`.
    pub pi_bar: Option<Rational>,
}

impl ModelParams {
    pub fn new(
        gamma: Rational,
        lambda: Rational,
        pi_doc: Rational,
        p_doc: Rational,
        pi_ai: Rational,
        p_ai: Rational,
    ) -> Self {
        ModelParams { gamma, lambda, pi_doc, p_doc, pi_ai, p_ai, phi_ai: Rational::one(), pi_bar: None }
    }

    /// Parses the six core parameters from decimal strings, in the order
    /// gamma, lambda, pi_doc, p_doc, pi_ai, p_ai.
    pub fn parse(values: [&str; 6]) -> Result<Self> {
        let [g, l, pd, ppd, pa, ppa] = values.map(parse_decimal);
        Ok(ModelParams::new(g?, l?, pd?, ppd?, pa?, ppa?))
    }

    /// gamma = 0.3, lambda = 0.2, pi_doc = 0.5, p_doc = 0.75, pi_ai = 0.6,
    /// p_ai = 0.8, phi_ai = 1. Used throughout the tests and examples.
    pub fn reference() -> Self {
        ModelParams::new(ratio(3, 10), ratio(1, 5), ratio(1, 2), ratio(3, 4), ratio(3, 5), ratio(4, 5))
    }

    pub fn with_p_doc(mut self, v: Rational) -> Self {
        self.p_doc = v;
        self
    }

    pub fn with_pi_doc(mut self, v: Rational) -> Self {
        self.pi_doc = v;
        self
    }

    pub fn with_p_ai(mut self, v: Rational) -> Self {
        self.p_ai = v;
        self
    }

    pub fn with_pi_ai(mut self, v: Rational) -> Self {
        self.pi_ai = v;
        self
    }

    pub fn with_phi_ai(mut self, v: Rational) -> Self {
        self.phi_ai = v;
        self
    }

    pub fn with_pi_bar(mut self, v: Rational) -> Self {
        self.pi_bar = Some(v);
        self
    }

    pub fn hallucinates(&self) -> bool {
        self.phi_ai < Rational::one()
    }

    pub fn attention(&self, role: Role) -> &Rational {
        match role {
            Role::Doctor => &self.pi_doc,
            Role::Ai => &self.pi_ai,
        }
    }

    pub fn comprehension(&self, role: Role) -> &Rational {
        match role {
            Role::Doctor => &self.p_doc,
            Role::Ai => &self.p_ai,
        }
    }

    /// `pi_bar`, defaulting to `pi_doc` when unset.
    pub fn effective_pi_bar(&self) -> Rational {
        self.pi_bar.clone().unwrap_or_else(|| self.pi_doc.clone())
    }

    /// The four-term lower bound `phi_ai` must strictly exceed for the AI's
    /// hallucinations to leave the critical-dimension rule intact.
    pub fn hallucination_bound(&self) -> Rational {
        let one = Rational::one();
        let g = &self.gamma;
        let l = &self.lambda;
        let pa = &self.pi_ai;
        let bar = self.effective_pi_bar();
        let odds = g / (&one - g);
        let glg = g * l / (&one - g);
        let miss_ai = &one - pa;
        let t1 = odds;
        let t2 = &one - &glg * pa * &miss_ai;
        let t3 = &one - &glg * pa * &miss_ai * (&one - &bar) * (&one - &bar);
        let mix = g * l / (g + l - int(2) * g * l);
        let t4 = &one - mix * pa * (&one - &bar) * (int(2) * &self.p_ai - &one) * &miss_ai;
        [t1, t2, t3, t4].into_iter().max().expect("four terms")
    }

    /// Rejects anything that is not a probability; this is all the
    /// enumeration oracle needs.
    pub fn check_structure(&self) -> Result<()> {
        let fields = [
            ("gamma", &self.gamma),
            ("lambda", &self.lambda),
            ("pi_doc", &self.pi_doc),
            ("p_doc", &self.p_doc),
            ("pi_ai", &self.pi_ai),
            ("p_ai", &self.p_ai),
            ("phi_ai", &self.phi_ai),
        ];
        for (name, v) in fields {
            if v.is_negative() || *v > Rational::one() {
                return Err(Error::InvalidParams(format!("{name} = {v} is not a probability")));
            }
        }
        if let Some(bar) = &self.pi_bar {
            if bar.is_negative() || *bar > Rational::one() {
                return Err(Error::InvalidParams(format!("pi_bar = {bar} is not a probability")));
            }
        }
        Ok(())
    }

    /// Errors with the list of failed assumptions unless every check passes.
    pub fn require_valid(&self) -> Result<()> {
        let report = validate_params(self);
        if report.all_pass() {
            Ok(())
        } else {
            Err(Error::InvalidParams(report.failure_summary()))
        }
    }
}

impl fmt::Display for ModelParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "gamma={} lambda={} pi_doc={} p_doc={} pi_ai={} p_ai={} phi_ai={}",
            self.gamma, self.lambda, self.pi_doc, self.p_doc, self.pi_ai, self.p_ai, self.phi_ai
        )?;
        if let Some(bar) = &self.pi_bar {
            write!(f, " pi_bar={bar}")?;
        }
        Ok(())
    }
}

/// One assumption check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn failed(&self, name: &str) -> bool {
        self.checks.iter().any(|c| c.name == name && !c.passed)
    }

    pub fn failure_summary(&self) -> String {
        self.failures().map(|c| format!("{}: {}", c.name, c.detail)).collect::<Vec<_>>().join("; ")
    }
}

fn in_closed(v: &Rational, lo: &Rational, hi: &Rational) -> bool {
    v >= lo && v <= hi
}

/// Lists every modelling assumption as pass/fail with the inequality that
/// was tested.
pub fn validate_params(p: &ModelParams) -> ValidationReport {
    let zero = Rational::zero();
    let one = Rational::one();
    let h = half();
    let mut checks = Vec::new();
    let mut push = |name: &'static str, passed: bool, detail: String| {
        checks.push(Check { name, passed, detail });
    };

    push(
        "prior",
        in_closed(&p.gamma, &zero, &one) && p.lambda > zero && p.lambda < one,
        format!("gamma in [0,1] and lambda in (0,1): gamma = {}, lambda = {}", p.gamma, p.lambda),
    );
    push(
        "attention_range",
        in_closed(&p.pi_doc, &zero, &one) && in_closed(&p.pi_ai, &zero, &one),
        format!("pi_doc, pi_ai in [0,1]: {} , {}", p.pi_doc, p.pi_ai),
    );
    push(
        "comprehension_range",
        in_closed(&p.p_doc, &h, &one) && in_closed(&p.p_ai, &h, &one),
        format!("p_doc, p_ai in [1/2,1]: {} , {}", p.p_doc, p.p_ai),
    );
    push(
        "hallucination_range",
        in_closed(&p.phi_ai, &zero, &one),
        format!("phi_ai in [0,1]: {}", p.phi_ai),
    );
    push(
        "rarity",
        p.lambda > zero && p.lambda <= p.gamma && p.gamma < h,
        format!("0 < lambda <= gamma < 1/2: lambda = {}, gamma = {}", p.lambda, p.gamma),
    );

    let positive = p.gamma > zero && p.lambda > zero;
    for role in [Role::Doctor, Role::Ai] {
        let name = match role {
            Role::Doctor => "skill_doctor",
            Role::Ai => "skill_ai",
        };
        if positive {
            let lhs = (p.gamma.recip() + p.lambda.recip() - int(2)) * p.comprehension(role) + p.attention(role);
            let rhs = p.lambda.recip();
            let passed = lhs > rhs;
            push(
                name,
                passed,
                format!(
                    "(1/gamma + 1/lambda - 2) p + pi > 1/lambda: {} {} {}",
                    to_decimal_string(&lhs, 6),
                    if passed { ">" } else { "<=" },
                    to_decimal_string(&rhs, 6)
                ),
            );
        } else {
            push(name, false, "requires gamma > 0 and lambda > 0".into());
        }
    }

    if p.hallucinates() {
        let bar = p.effective_pi_bar();
        push(
            "attention_cap",
            p.pi_doc <= bar && bar < one,
            format!("pi_doc <= pi_bar < 1: pi_doc = {}, pi_bar = {}", p.pi_doc, bar),
        );
        let bound = p.hallucination_bound();
        push(
            "hallucination_bound",
            p.phi_ai > bound,
            format!(
                "phi_ai > {} (four-term bound): phi_ai = {}",
                to_decimal_string(&bound, 9),
                p.phi_ai
            ),
        );
    }

    ValidationReport { checks }
}

/// Strict lower bound on comprehension skill implied by the skill
/// assumption: `(1/lambda - pi) / (1/gamma + 1/lambda - 2)`.
pub fn feasible_comprehension_floor(p: &ModelParams, role: Role) -> Result<Rational> {
    if p.gamma.is_zero() || p.lambda.is_zero() {
        return Err(Error::InvalidParams("gamma and lambda must be positive".into()));
    }
    let slope = p.gamma.recip() + p.lambda.recip() - int(2);
    Ok((p.lambda.recip() - p.attention(role)) / slope)
}

/// `P(seen | present)` for one dimension of an attention signal that never
/// reports phantom abnormalities.
pub(crate) fn attention_factor(seen: bool, present: bool, pi: &Rational) -> Rational {
    match (present, seen) {
        (true, true) => pi.clone(),
        (true, false) => Rational::one() - pi,
        (false, false) => Rational::one(),
        (false, true) => Rational::zero(),
    }
}

/// Same as [`attention_factor`] but allowing false positives at rate
/// `1 - phi`.
pub(crate) fn noisy_attention_factor(seen: bool, present: bool, pi: &Rational, phi: &Rational) -> Rational {
    match (present, seen) {
        (true, true) => pi.clone(),
        (true, false) => Rational::one() - pi,
        (false, false) => phi.clone(),
        (false, true) => Rational::one() - phi,
    }
}

pub(crate) fn signal_factor(sig: Signal, x: Signal, pi: &Rational) -> Rational {
    attention_factor(sig.l, x.l, pi) * attention_factor(sig.r, x.r, pi)
}

pub(crate) fn ai_signal_factor(sig: Signal, x: Signal, pi: &Rational, phi: &Rational) -> Rational {
    noisy_attention_factor(sig.l, x.l, pi, phi) * noisy_attention_factor(sig.r, x.r, pi, phi)
}

pub(crate) fn comprehension_factor(belief: Dim, w: Dim, p: &Rational) -> Rational {
    if belief == w {
        p.clone()
    } else {
        Rational::one() - p
    }
}

/// Probability of the state `(z, x, w)` alone; zero when `x[w] != z`.
pub(crate) fn state_probability(p: &ModelParams, z: bool, x: Signal, w: Dim) -> Rational {
    if x.get(w) != z {
        return Rational::zero();
    }
    let one = Rational::one();
    let disease = if z { p.gamma.clone() } else { &one - &p.gamma };
    let noise = if x.get(w.other()) { p.lambda.clone() } else { &one - &p.lambda };
    disease * half() * noise
}

/// Joint probability without the assumption checks; only requires every
/// field to be a probability.
pub fn joint_probability_unchecked(p: &ModelParams, o: &Outcome) -> Rational {
    let mut prob = state_probability(p, o.z, o.x, o.w);
    if prob.is_zero() {
        return prob;
    }
    prob *= signal_factor(o.x_doc, o.x, &p.pi_doc);
    prob *= comprehension_factor(o.w_doc, o.w, &p.p_doc);
    prob *= ai_signal_factor(o.x_ai, o.x, &p.pi_ai, &p.phi_ai);
    prob *= comprehension_factor(o.w_ai, o.w, &p.p_ai);
    if let Some(x_e) = o.x_e {
        prob *= signal_factor(x_e, o.x, &p.pi_doc);
    }
    prob
}

/// Exact probability of one joint outcome under valid parameters.
pub fn joint_probability(p: &ModelParams, o: &Outcome) -> Result<Rational> {
    p.require_valid()?;
    Ok(joint_probability_unchecked(p, o))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn outcome(z: bool, x: Signal, w: Dim, x_doc: Signal, w_doc: Dim, x_ai: Signal, w_ai: Dim) -> Outcome {
        Outcome { z, x, w, x_doc, w_doc, x_ai, w_ai, x_e: None }
    }

    #[test]
    fn reference_point_passes_every_assumption() {
        let report = validate_params(&ModelParams::reference());
        assert!(report.all_pass(), "{}", report.failure_summary());
    }

    #[test]
    fn weak_doctor_comprehension_fails_skill_check() {
        let p = ModelParams::reference().with_p_doc(ratio(3, 5));
        let report = validate_params(&p);
        assert!(report.failed("skill_doctor"));
        assert!(!report.failed("skill_ai"));
        assert!(p.require_valid().is_err());
    }

    #[test]
    fn noise_rate_above_prior_fails_rarity() {
        let mut p = ModelParams::reference();
        p.lambda = ratio(3, 5);
        assert!(validate_params(&p).failed("rarity"));
    }

    #[test]
    fn boundary_skills_are_accepted() {
        let p = ModelParams::parse(["0.3", "0.2", "1", "1", "1", "1"]).unwrap();
        assert!(validate_params(&p).all_pass());
        let p = ModelParams::parse(["0.3", "0.2", "0", "1", "0", "1"]).unwrap();
        assert!(validate_params(&p).all_pass(), "{}", validate_params(&p).failure_summary());
    }

    #[test]
    fn hallucination_checks_only_appear_below_one() {
        let p = ModelParams::reference();
        assert!(!validate_params(&p).checks.iter().any(|c| c.name == "hallucination_bound"));
        let p = ModelParams::reference().with_phi_ai(ratio(99, 100));
        let report = validate_params(&p);
        assert!(report.checks.iter().any(|c| c.name == "hallucination_bound"));
        // pi_bar defaults to pi_doc = 1/2 < 1.
        assert!(!report.failed("attention_cap"));
    }

    #[test]
    fn comprehension_floor_values() {
        let p = ModelParams::reference();
        assert_eq!(feasible_comprehension_floor(&p, Role::Doctor).unwrap(), ratio(27, 38));
        let p = ModelParams::reference().with_pi_doc(int(1));
        assert_eq!(feasible_comprehension_floor(&p, Role::Doctor).unwrap(), ratio(12, 19));
        let mut p = ModelParams::reference().with_pi_doc(int(1));
        p.gamma = ratio(1, 5);
        assert_eq!(feasible_comprehension_floor(&p, Role::Doctor).unwrap(), half());
    }

    #[test]
    fn outcomes_off_the_critical_rule_have_zero_mass() {
        let p = ModelParams::reference();
        let o = outcome(true, Signal::new(false, true), Dim::L, Signal::NONE, Dim::L, Signal::NONE, Dim::L);
        assert!(joint_probability(&p, &o).unwrap().is_zero());
    }

    #[test]
    fn deterministic_signals_single_path() {
        let p = ModelParams::parse(["0.3", "0.2", "1", "1", "1", "1"]).unwrap();
        let x = Signal::new(true, false);
        let o = outcome(true, x, Dim::L, x, Dim::L, x, Dim::L);
        assert_eq!(joint_probability(&p, &o).unwrap(), ratio(12, 100));
    }

    #[test]
    fn signal_parsing() {
        assert_eq!("01".parse::<Signal>().unwrap(), Signal::new(false, true));
        assert_eq!("(1,0)".parse::<Signal>().unwrap(), Signal::new(true, false));
        assert!("012".parse::<Signal>().is_err());
        assert!("ab".parse::<Signal>().is_err());
        assert_eq!("R".parse::<Dim>().unwrap(), Dim::R);
    }
}
