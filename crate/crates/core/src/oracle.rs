//! Brute-force ground truth.
//!
//! The outcome space is small (at most 512 atoms, 2048 with the extra
//! signal), so every conditional probability is answered by summing exact
//! atom masses. Decisions that appear inside information sets (the doctor's
//! initial diagnosis, the AI's diagnosis) are derived here by Bayes' rule
//! from the same enumeration, never from the closed forms elsewhere in the
//! crate.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::model::{
    ai_signal_factor, comprehension_factor, signal_factor, state_probability, Dim, ModelParams, Outcome,
    Signal,
};
use crate::rational::{half, int, ratio, LikelihoodRatio, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub outcome: Outcome,
    pub prob: Rational,
}

/// Optional pins on the signal coordinates, used to prune the enumeration
/// before multiplying out the remaining factors.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub(crate) struct Pins {
    pub x_doc: Option<Signal>,
    pub w_doc: Option<Dim>,
    pub x_ai: Option<Signal>,
    pub w_ai: Option<Dim>,
}

fn pinned<T: PartialEq + Copy>(pin: Option<T>, v: T) -> bool {
    pin.is_none_or(|p| p == v)
}

/// Calls `f` on every outcome with nonzero mass. Performs no parameter
/// checks, so it also evaluates the linear extension of the mass in
/// `p_doc` outside `[0, 1]`.
pub(crate) fn visit_outcomes<F>(p: &ModelParams, with_extra: bool, pins: Pins, mut f: F)
where
    F: FnMut(&Outcome, &Rational),
{
    for z in [false, true] {
        for w in Dim::ALL {
            for noise in [false, true] {
                let x = Signal::new(false, false).with(w, z).with(w.other(), noise);
                let p_state = state_probability(p, z, x, w);
                if p_state.is_zero() {
                    continue;
                }
                for x_doc in Signal::ALL {
                    if !pinned(pins.x_doc, x_doc) {
                        continue;
                    }
                    let p_xd = &p_state * signal_factor(x_doc, x, &p.pi_doc);
                    if p_xd.is_zero() {
                        continue;
                    }
                    for w_doc in Dim::ALL {
                        if !pinned(pins.w_doc, w_doc) {
                            continue;
                        }
                        let p_wd = &p_xd * comprehension_factor(w_doc, w, &p.p_doc);
                        if p_wd.is_zero() {
                            continue;
                        }
                        for x_ai in Signal::ALL {
                            if !pinned(pins.x_ai, x_ai) {
                                continue;
                            }
                            let p_xa = &p_wd * ai_signal_factor(x_ai, x, &p.pi_ai, &p.phi_ai);
                            if p_xa.is_zero() {
                                continue;
                            }
                            for w_ai in Dim::ALL {
                                if !pinned(pins.w_ai, w_ai) {
                                    continue;
                                }
                                let p_wa = &p_xa * comprehension_factor(w_ai, w, &p.p_ai);
                                if p_wa.is_zero() {
                                    continue;
                                }
                                let base = Outcome { z, x, w, x_doc, w_doc, x_ai, w_ai, x_e: None };
                                if !with_extra {
                                    f(&base, &p_wa);
                                    continue;
                                }
                                for x_e in Signal::ALL {
                                    let p_e = &p_wa * signal_factor(x_e, x, &p.pi_doc);
                                    if p_e.is_zero() {
                                        continue;
                                    }
                                    f(&Outcome { x_e: Some(x_e), ..base }, &p_e);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

/// Every outcome with nonzero probability, exactly once.
///
/// Only requires each parameter to be a probability, so degenerate points
/// such as `gamma = 0` can be inspected.
pub fn enumerate(p: &ModelParams, with_extra: bool) -> Result<Vec<Atom>> {
    p.check_structure()?;
    let mut atoms = Vec::new();
    visit_outcomes(p, with_extra, Pins::default(), |o, prob| {
        atoms.push(Atom { outcome: *o, prob: prob.clone() })
    });
    Ok(atoms)
}

/// Exact `P(target | given)`.
pub fn conditional<T, G>(p: &ModelParams, target: T, given: G) -> Result<Rational>
where
    T: Fn(&Outcome) -> bool,
    G: Fn(&Outcome) -> bool,
{
    Oracle::new(p, false)?.conditional(target, given)
}

/// Exact `P(Z = 1 | info)`.
pub fn posterior_disease(p: &ModelParams, info: &InformationSet) -> Result<Rational> {
    Oracle::new(p, info.extra.is_some())?.posterior(info)
}

/// Whether the doctor sees the AI's signals or only its diagnosis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Interpretable,
    Uninterpretable,
}

impl Regime {
    pub const BOTH: [Regime; 2] = [Regime::Interpretable, Regime::Uninterpretable];

    pub fn name(self) -> &'static str {
        match self {
            Regime::Interpretable => "interpretable",
            Regime::Uninterpretable => "uninterpretable",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "interpretable" | "interp" | "i" => Ok(Regime::Interpretable),
            "uninterpretable" | "uninterp" | "u" => Ok(Regime::Uninterpretable),
            other => Err(Error::Parse(format!("unknown regime {other:?}"))),
        }
    }
}

/// What the doctor sees of the AI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AiView {
    /// Full AI signals and its diagnosis.
    Interpretable { x_ai: Signal, w_ai: Dim },
    /// The AI's diagnosis only.
    Uninterpretable,
}

/// The doctor's information at final-diagnosis time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct InformationSet {
    pub x_doc: Signal,
    pub w_doc: Dim,
    pub d: bool,
    pub a: bool,
    pub view: AiView,
    pub extra: Option<Signal>,
}

impl InformationSet {
    pub fn interpretable(x_doc: Signal, w_doc: Dim, d: bool, x_ai: Signal, w_ai: Dim, a: bool) -> Self {
        InformationSet { x_doc, w_doc, d, a, view: AiView::Interpretable { x_ai, w_ai }, extra: None }
    }

    pub fn uninterpretable(x_doc: Signal, w_doc: Dim, d: bool, a: bool) -> Self {
        InformationSet { x_doc, w_doc, d, a, view: AiView::Uninterpretable, extra: None }
    }

    pub fn with_extra(mut self, x_e: Signal) -> Self {
        self.extra = Some(x_e);
        self
    }

    pub fn is_interpretable(&self) -> bool {
        matches!(self.view, AiView::Interpretable { .. })
    }

    pub fn is_disagreement(&self) -> bool {
        self.d != self.a
    }

    fn pins(&self) -> Pins {
        let (x_ai, w_ai) = match self.view {
            AiView::Interpretable { x_ai, w_ai } => (Some(x_ai), Some(w_ai)),
            AiView::Uninterpretable => (None, None),
        };
        Pins { x_doc: Some(self.x_doc), w_doc: Some(self.w_doc), x_ai, w_ai }
    }
}

impl fmt::Display for InformationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x_doc={} w_doc={} D={} A={}", self.x_doc, self.w_doc, self.d as u8, self.a as u8)?;
        if let AiView::Interpretable { x_ai, w_ai } = self.view {
            write!(f, " x_ai={x_ai} w_ai={w_ai}")?;
        } else {
            write!(f, " (uninterpretable)")?;
        }
        if let Some(x_e) = self.extra {
            write!(f, " x_e={x_e}")?;
        }
        Ok(())
    }
}

fn signal_index(s: Signal) -> usize {
    (s.l as usize) * 2 + s.r as usize
}

fn dim_index(d: Dim) -> usize {
    match d {
        Dim::L => 0,
        Dim::R => 1,
    }
}

/// `P(Z=1 | s, w) >= 1/2` for each realizable (attention, comprehension)
/// pair; `None` for unrealizable pairs.
type DecisionTable = [[Option<bool>; 2]; 4];

fn decision_table(masses: &[[(Rational, Rational); 2]; 4]) -> DecisionTable {
    let mut table = [[None; 2]; 4];
    for (i, row) in masses.iter().enumerate() {
        for (j, (m1, m0)) in row.iter().enumerate() {
            if !(m1.is_zero() && m0.is_zero()) {
                table[i][j] = Some(m1 >= m0);
            }
        }
    }
    table
}

fn zero_masses() -> [[(Rational, Rational); 2]; 4] {
    std::array::from_fn(|_| std::array::from_fn(|_| (Rational::zero(), Rational::zero())))
}

/// Enumerated model at one parameter point plus the Bayes decision tables
/// derived from it.
#[derive(Debug, Clone)]
pub struct Oracle {
    params: ModelParams,
    atoms: Vec<Atom>,
    doctor: DecisionTable,
    ai: DecisionTable,
}

impl Oracle {
    pub fn new(p: &ModelParams, with_extra: bool) -> Result<Self> {
        let atoms = enumerate(p, with_extra)?;
        let mut doc = zero_masses();
        let mut ai = zero_masses();
        for atom in &atoms {
            let o = &atom.outcome;
            let d = &mut doc[signal_index(o.x_doc)][dim_index(o.w_doc)];
            let a = &mut ai[signal_index(o.x_ai)][dim_index(o.w_ai)];
            if o.z {
                d.0 += &atom.prob;
                a.0 += &atom.prob;
            } else {
                d.1 += &atom.prob;
                a.1 += &atom.prob;
            }
        }
        Ok(Oracle { params: p.clone(), atoms, doctor: decision_table(&doc), ai: decision_table(&ai) })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn probability<E: Fn(&Outcome) -> bool>(&self, event: E) -> Rational {
        let mut total = Rational::zero();
        for atom in &self.atoms {
            if event(&atom.outcome) {
                total += &atom.prob;
            }
        }
        total
    }

    /// Mass of `event` split into `(Z = 1, Z = 0)` parts.
    pub fn split_by_disease<E: Fn(&Outcome) -> bool>(&self, event: E) -> (Rational, Rational) {
        let mut sick = Rational::zero();
        let mut healthy = Rational::zero();
        for atom in &self.atoms {
            if event(&atom.outcome) {
                if atom.outcome.z {
                    sick += &atom.prob;
                } else {
                    healthy += &atom.prob;
                }
            }
        }
        (sick, healthy)
    }

    pub fn conditional<T, G>(&self, target: T, given: G) -> Result<Rational>
    where
        T: Fn(&Outcome) -> bool,
        G: Fn(&Outcome) -> bool,
    {
        let mut joint = Rational::zero();
        let mut base = Rational::zero();
        for atom in &self.atoms {
            if given(&atom.outcome) {
                base += &atom.prob;
                if target(&atom.outcome) {
                    joint += &atom.prob;
                }
            }
        }
        if base.is_zero() {
            return Err(Error::NullEvent("conditioning event has probability zero".into()));
        }
        Ok(joint / base)
    }

    /// Bayes initial diagnosis of the doctor; `None` if `(x_doc, w_doc)`
    /// never occurs.
    pub fn doctor_decision(&self, x_doc: Signal, w_doc: Dim) -> Option<bool> {
        self.doctor[signal_index(x_doc)][dim_index(w_doc)]
    }

    /// Bayes diagnosis of the AI; `None` if `(x_ai, w_ai)` never occurs.
    pub fn ai_decision(&self, x_ai: Signal, w_ai: Dim) -> Option<bool> {
        self.ai[signal_index(x_ai)][dim_index(w_ai)]
    }

    /// Predicate selecting the outcomes consistent with `info`.
    pub fn info_event<'a>(&'a self, info: &'a InformationSet) -> impl Fn(&Outcome) -> bool + 'a {
        move |o: &Outcome| {
            if o.x_doc != info.x_doc || o.w_doc != info.w_doc {
                return false;
            }
            if self.doctor_decision(o.x_doc, o.w_doc) != Some(info.d) {
                return false;
            }
            if let AiView::Interpretable { x_ai, w_ai } = info.view {
                if o.x_ai != x_ai || o.w_ai != w_ai {
                    return false;
                }
            }
            if self.ai_decision(o.x_ai, o.w_ai) != Some(info.a) {
                return false;
            }
            match info.extra {
                Some(x_e) => o.x_e == Some(x_e),
                None => true,
            }
        }
    }

    pub fn info_probability(&self, info: &InformationSet) -> Rational {
        self.probability(self.info_event(info))
    }

    pub fn is_realizable(&self, info: &InformationSet) -> bool {
        !self.info_probability(info).is_zero()
    }

    pub fn likelihood_ratio(&self, info: &InformationSet) -> Result<LikelihoodRatio> {
        let (sick, healthy) = self.split_by_disease(self.info_event(info));
        LikelihoodRatio::from_masses(sick, healthy)
            .map_err(|_| Error::NullEvent(format!("information set {info} has probability zero")))
    }

    pub fn posterior(&self, info: &InformationSet) -> Result<Rational> {
        Ok(self.likelihood_ratio(info)?.posterior())
    }

    /// The doctor's information set at `o` under `regime`, with `D` and `A`
    /// taken from the Bayes decision tables. `None` off the support.
    pub fn info_at(&self, o: &Outcome, regime: Regime) -> Option<InformationSet> {
        let d = self.doctor_decision(o.x_doc, o.w_doc)?;
        let a = self.ai_decision(o.x_ai, o.w_ai)?;
        let info = match regime {
            Regime::Interpretable => InformationSet::interpretable(o.x_doc, o.w_doc, d, o.x_ai, o.w_ai, a),
            Regime::Uninterpretable => InformationSet::uninterpretable(o.x_doc, o.w_doc, d, a),
        };
        Some(match o.x_e {
            Some(x_e) => info.with_extra(x_e),
            None => info,
        })
    }

    /// Exact `P(Z = 1 | info, event)`.
    pub fn posterior_given<E: Fn(&Outcome) -> bool>(&self, info: &InformationSet, event: E) -> Result<Rational> {
        let base = self.info_event(info);
        self.conditional(|o| o.z, |o| base(o) && event(o))
    }
}

/// Where the posterior is at least 1/2 as `p_doc` ranges over `[1/2, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Crossing {
    Never,
    Always,
    /// The crossing point lies in `[1/2, 1]` and splits it.
    Interval,
}

/// Exact solution of `posterior(p_doc) = 1/2` for a fixed template.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdSolve {
    /// Root of the linear equation, reported even outside `[1/2, 1]`;
    /// `None` when the posterior does not depend on `p_doc`.
    pub root: Option<Rational>,
    /// True when the posterior falls as `p_doc` rises.
    pub decreasing: bool,
    pub on_unit: Crossing,
    /// Midpoint of the final bisection bracket.
    pub bisection: Option<Rational>,
}

/// `P(Z=1, E) - P(Z=0, E)` and `P(E)` at a given `p_doc`.
fn template_balance(p: &ModelParams, info: &InformationSet, ai: &DecisionTable, p_doc: &Rational) -> (Rational, Rational) {
    let q = p.clone().with_p_doc(p_doc.clone());
    let mut balance = Rational::zero();
    let mut mass = Rational::zero();
    visit_outcomes(&q, info.extra.is_some(), info.pins(), |o, prob| {
        if ai[signal_index(o.x_ai)][dim_index(o.w_ai)] != Some(info.a) {
            return;
        }
        if let Some(x_e) = info.extra {
            if o.x_e != Some(x_e) {
                return;
            }
        }
        mass += prob;
        if o.z {
            balance += prob;
        } else {
            balance -= prob;
        }
    });
    (balance, mass)
}

const BISECTION_BITS: usize = 40;

/// Solves `P(Z = 1 | template) = 1/2` for `p_doc`.
///
/// The template's `d` is ignored: the doctor's own signals are pinned, and
/// whether they produce that initial diagnosis may itself depend on
/// `p_doc`. The mass difference `P(Z=1, E) - P(Z=0, E)` is linear in
/// `p_doc`; linearity is certified at three points before solving, and the
/// root is then cross-checked by bisection on freshly enumerated
/// posteriors.
pub fn exact_threshold_in_p_doc(p: &ModelParams, template: &InformationSet) -> Result<ThresholdSolve> {
    p.check_structure()?;
    let ai_table = Oracle::new(&p.clone().with_p_doc(half()), false)?.ai;
    let eval = |x: &Rational| template_balance(p, template, &ai_table, x);

    let (f0, m0) = eval(&Rational::zero());
    let (fh, mh) = eval(&half());
    let (f1, m1) = eval(&Rational::one());
    if m0.is_zero() && mh.is_zero() && m1.is_zero() {
        return Err(Error::NullEvent(format!("template {template} has probability zero for every p_doc")));
    }
    if &fh * int(2) != &f0 + &f1 {
        return Err(Error::NonMonotone(format!("mass balance is not linear in p_doc for {template}")));
    }
    let slope = &f1 - &f0;
    let at_half = fh >= Rational::zero();
    let at_one = f1 >= Rational::zero();
    let on_unit = match (at_half, at_one) {
        (true, true) => Crossing::Always,
        (false, false) => Crossing::Never,
        _ => Crossing::Interval,
    };
    if slope.is_zero() {
        return Ok(ThresholdSolve { root: None, decreasing: false, on_unit, bisection: None });
    }
    let root = -&f0 / &slope;
    let bisection = bisect(|x| eval(x).0 >= Rational::zero(), &root, template)?;
    Ok(ThresholdSolve { root: Some(root), decreasing: slope.is_negative(), on_unit, bisection: Some(bisection) })
}

fn bisect<F: Fn(&Rational) -> bool>(positive: F, root: &Rational, template: &InformationSet) -> Result<Rational> {
    let mut lo = half();
    let mut hi = Rational::one();
    let mut width = half();
    let mut expansions = 0;
    while positive(&lo) == positive(&hi) {
        expansions += 1;
        if expansions > 64 {
            return Err(Error::NonMonotone(format!("no sign change found for {template}")));
        }
        lo -= &width;
        hi += &width;
        width *= int(2);
    }
    let lo_positive = positive(&lo);
    let tolerance = ratio(1, 1i64 << BISECTION_BITS);
    while &hi - &lo > tolerance {
        let mid = (&lo + &hi) * half();
        if positive(&mid) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mid = (&lo + &hi) * half();
    if (&mid - root).abs() > tolerance {
        return Err(Error::NonMonotone(format!(
            "bisection bracket [{lo}, {hi}] disagrees with exact root {root} for {template}"
        )));
    }
    Ok(mid)
}

/// Predicates for events that recur in the analysis.
pub mod events {
    use crate::model::Outcome;

    pub fn disease(o: &Outcome) -> bool {
        o.z
    }

    /// The doctor's and the AI's observations together show an
    /// abnormality in both dimensions.
    pub fn combined_covers_both(o: &Outcome) -> bool {
        o.x_doc.union(o.x_ai).is_both()
    }

    /// The AI sees an abnormality in the doctor's critical dimension.
    pub fn ai_sees_doctor_dim(o: &Outcome) -> bool {
        o.x_ai.get(o.w_doc)
    }

    pub fn same_critical_dim(o: &Outcome) -> bool {
        o.w_ai == o.w_doc
    }

    pub fn noise_present(o: &Outcome) -> bool {
        o.x_noise()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use num_traits::One;

    fn deterministic() -> ModelParams {
        ModelParams::parse(["0.3", "0.2", "1", "1", "1", "1"]).unwrap()
    }

    #[test]
    fn masses_sum_to_one() {
        for extra in [false, true] {
            let atoms = enumerate(&ModelParams::reference(), extra).unwrap();
            let total: Rational = atoms.iter().map(|a| &a.prob).sum();
            assert_eq!(total, Rational::one());
            assert!(atoms.len() <= if extra { 2048 } else { 512 });
        }
    }

    #[test]
    fn deterministic_chain_has_eight_atoms() {
        // Two critical dimensions, times disease, healthy-with-noise and
        // healthy-without-noise, times the noise bit under disease.
        let atoms = enumerate(&deterministic(), false).unwrap();
        assert_eq!(atoms.len(), 8);
        assert!(atoms.iter().all(|a| a.outcome.x_doc == a.outcome.x && a.outcome.x_ai == a.outcome.x));
    }

    #[test]
    fn zero_prior_means_no_disease_atoms() {
        let mut p = ModelParams::reference();
        p.gamma = Rational::zero();
        let atoms = enumerate(&p, false).unwrap();
        assert!(atoms.iter().all(|a| !a.outcome.z));
    }

    #[test]
    fn basic_conditionals() {
        let p = ModelParams::reference();
        assert_eq!(conditional(&p, |o| o.z, |_| true).unwrap(), ratio(3, 10));
        assert_eq!(conditional(&p, |o| o.x_noise(), |o| !o.z).unwrap(), ratio(1, 5));
        assert_eq!(conditional(&p, |o| o.z && o.x_doc.l, |o| o.z && o.x_doc.l).unwrap(), Rational::one());
        assert!(matches!(conditional(&p, |o| o.z, |o| o.z && !o.x.get(o.w)), Err(Error::NullEvent(_))));
    }

    #[test]
    fn covering_observations_are_conclusive() {
        let p = ModelParams::reference();
        let oracle = Oracle::new(&p, false).unwrap();
        let info = InformationSet::interpretable(
            Signal::new(false, true),
            Dim::L,
            false,
            Signal::new(true, false),
            Dim::L,
            true,
        );
        assert_eq!(oracle.posterior(&info).unwrap(), Rational::one());
        assert!(oracle.likelihood_ratio(&info).unwrap().is_infinite());
    }

    #[test]
    fn noise_only_observation_is_below_half() {
        let p = ModelParams::reference();
        let oracle = Oracle::new(&p, false).unwrap();
        let (sick, healthy) = oracle.split_by_disease(|o| o.x_doc == Signal::new(false, true) && o.w_doc == Dim::L);
        assert!(sick < healthy);
        assert_eq!(oracle.doctor_decision(Signal::new(false, true), Dim::L), Some(false));
        assert_eq!(oracle.doctor_decision(Signal::new(true, false), Dim::L), Some(true));
    }

    #[test]
    fn uninterpretable_persuasion_at_reference_point() {
        let p = ModelParams::reference().with_p_doc(ratio(19, 20));
        let info = InformationSet::uninterpretable(Signal::new(false, true), Dim::L, false, true);
        assert!(posterior_disease(&p, &info).unwrap() >= half());
    }

    #[test]
    fn inconsistent_diagnosis_is_a_null_event() {
        let p = ModelParams::reference();
        let info = InformationSet::uninterpretable(Signal::new(false, true), Dim::L, true, true);
        assert!(matches!(posterior_disease(&p, &info), Err(Error::NullEvent(_))));
    }

    #[test]
    fn reference_thresholds_from_enumeration() {
        let p = ModelParams::reference();
        let s01 = Signal::new(false, true);
        let s10 = Signal::new(true, false);
        let cases = [
            (InformationSet::interpretable(s01, Dim::L, false, s01, Dim::R, true), ratio(63, 71), true),
            (InformationSet::uninterpretable(s01, Dim::L, false, true), ratio(111, 110), true),
            (InformationSet::interpretable(s10, Dim::L, true, Signal::NONE, Dim::R, false), ratio(128, 191), false),
            (InformationSet::uninterpretable(s10, Dim::L, true, false), ratio(139, 310), false),
        ];
        for (template, expected, decreasing) in cases {
            let solve = exact_threshold_in_p_doc(&p, &template).unwrap();
            assert_eq!(solve.root.as_ref(), Some(&expected), "{template}");
            assert_eq!(solve.decreasing, decreasing);
        }
    }

    #[test]
    fn conclusive_template_is_always_persuasive() {
        let p = ModelParams::reference();
        let template =
            InformationSet::interpretable(Signal::new(false, true), Dim::L, false, Signal::new(true, false), Dim::L, true);
        let solve = exact_threshold_in_p_doc(&p, &template).unwrap();
        assert_eq!(solve.on_unit, Crossing::Always);
    }

    #[test]
    fn total_probability_over_doctor_signals() {
        let p = ModelParams::reference();
        let oracle = Oracle::new(&p, false).unwrap();
        let mut rebuilt = Rational::zero();
        for x_doc in Signal::ALL {
            for w_doc in Dim::ALL {
                let given = |o: &Outcome| o.x_doc == x_doc && o.w_doc == w_doc;
                let mass = oracle.probability(given);
                if !mass.is_zero() {
                    rebuilt += oracle.conditional(|o| o.z, given).unwrap() * mass;
                }
            }
        }
        assert_eq!(rebuilt, ratio(3, 10));
    }
}
