//! Parameter files, grids, CSV output and the commands behind the
//! `persuade` binary.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::attribution;
use crate::career::{self, PopulationParams};
use crate::diagnosis;
use crate::error::{Error, Result};
use crate::freeride::{self, FreerideParams};
use crate::model::{Dim, ModelParams, Signal};
use crate::montecarlo::{self, McEstimate};
use crate::oracle::{exact_threshold_in_p_doc, InformationSet, Oracle, Regime};
use crate::rational::{half, parse_decimal, ratio, to_decimal_string, to_fraction_string, Rational};
use crate::thresholds::{self, p4_reaches_half, slope_in_pi_doc, ThresholdKind};

/// Decimal places in CSV value columns.
pub const PLACES: usize = 12;

fn number(v: &Value, field: &str) -> Result<Rational> {
    match v {
        Value::String(s) => parse_decimal(s),
        Value::Number(n) => parse_decimal(&n.to_string()),
        _ => Err(Error::Parse(format!("{field} must be a number or a numeric string"))),
    }
}

/// JSON parameter file. Numbers may be JSON numbers or strings such as
/// `"0.3"` or `"3/10"`; both are read exactly from their text.
#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsFile {
    pub gamma: Value,
    pub lambda: Value,
    pub pi_doc: Value,
    pub p_doc: Value,
    pub pi_ai: Value,
    pub p_ai: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_ai: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi_bar: Option<Value>,
    /// Low-type comprehension for the career model.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_doc_low: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<Value>,
    /// Cost of the extra attention signal.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost: Option<Value>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadedParams {
    pub model: ModelParams,
    pub p_doc_low: Option<Rational>,
    pub tau: Option<Rational>,
    pub cost: Option<Rational>,
}

impl LoadedParams {
    pub fn reference() -> Self {
        LoadedParams { model: ModelParams::reference(), p_doc_low: None, tau: None, cost: None }
    }
}

impl ParamsFile {
    pub fn resolve(&self) -> Result<LoadedParams> {
        let opt = |v: &Option<Value>, name: &str| v.as_ref().map(|x| number(x, name)).transpose();
        let mut model = ModelParams::new(
            number(&self.gamma, "gamma")?,
            number(&self.lambda, "lambda")?,
            number(&self.pi_doc, "pi_doc")?,
            number(&self.p_doc, "p_doc")?,
            number(&self.pi_ai, "pi_ai")?,
            number(&self.p_ai, "p_ai")?,
        );
        if let Some(phi) = opt(&self.phi_ai, "phi_ai")? {
            model = model.with_phi_ai(phi);
        }
        if let Some(bar) = opt(&self.pi_bar, "pi_bar")? {
            model = model.with_pi_bar(bar);
        }
        model.check_structure()?;
        Ok(LoadedParams {
            model,
            p_doc_low: opt(&self.p_doc_low, "p_doc_low")?,
            tau: opt(&self.tau, "tau")?,
            cost: opt(&self.cost, "cost")?,
        })
    }

    pub fn from_model(p: &ModelParams) -> Self {
        let s = |r: &Rational| Value::String(to_fraction_string(r));
        ParamsFile {
            gamma: s(&p.gamma),
            lambda: s(&p.lambda),
            pi_doc: s(&p.pi_doc),
            p_doc: s(&p.p_doc),
            pi_ai: s(&p.pi_ai),
            p_ai: s(&p.p_ai),
            phi_ai: p.hallucinates().then(|| s(&p.phi_ai)),
            pi_bar: p.pi_bar.as_ref().map(s),
            ..Default::default()
        }
    }
}

pub fn load_params(path: &Path) -> Result<LoadedParams> {
    let text = fs::read_to_string(path)?;
    let file: ParamsFile = serde_json::from_str(&text)?;
    file.resolve()
}

/// Variable a grid sweeps over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GridVar {
    Gamma,
    Lambda,
    PiDoc,
    PDoc,
    PiAi,
    PAi,
    PhiAi,
    Tau,
    Cost,
}

impl GridVar {
    pub fn name(self) -> &'static str {
        match self {
            GridVar::Gamma => "gamma",
            GridVar::Lambda => "lambda",
            GridVar::PiDoc => "pi_doc",
            GridVar::PDoc => "p_doc",
            GridVar::PiAi => "pi_ai",
            GridVar::PAi => "p_ai",
            GridVar::PhiAi => "phi_ai",
            GridVar::Tau => "tau",
            GridVar::Cost => "cost",
        }
    }

    /// Sets this variable on model parameters; `tau` and `cost` are not
    /// model parameters.
    pub fn apply(self, p: &ModelParams, v: Rational) -> Result<ModelParams> {
        let mut q = p.clone();
        match self {
            GridVar::Gamma => q.gamma = v,
            GridVar::Lambda => q.lambda = v,
            GridVar::PiDoc => q.pi_doc = v,
            GridVar::PDoc => q.p_doc = v,
            GridVar::PiAi => q.pi_ai = v,
            GridVar::PAi => q.p_ai = v,
            GridVar::PhiAi => q.phi_ai = v,
            GridVar::Tau | GridVar::Cost => {
                return Err(Error::InvalidArgument(format!("{} is not a model parameter", self.name())))
            }
        }
        Ok(q)
    }
}

impl FromStr for GridVar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "gamma" => GridVar::Gamma,
            "lambda" => GridVar::Lambda,
            "pi_doc" => GridVar::PiDoc,
            "p_doc" => GridVar::PDoc,
            "pi_ai" => GridVar::PiAi,
            "p_ai" => GridVar::PAi,
            "phi_ai" => GridVar::PhiAi,
            "tau" => GridVar::Tau,
            "cost" | "c" => GridVar::Cost,
            other => return Err(Error::Parse(format!("unknown grid variable {other:?}"))),
        })
    }
}

/// `var:start:stop:step`, inclusive of `stop` when it is hit exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridSpec {
    pub var: GridVar,
    pub start: Rational,
    pub stop: Rational,
    pub step: Rational,
}

impl GridSpec {
    pub fn new(var: GridVar, start: Rational, stop: Rational, step: Rational) -> Result<Self> {
        if !step.is_positive() {
            return Err(Error::InvalidArgument(format!("grid step must be positive, got {step}")));
        }
        if start > stop {
            return Err(Error::InvalidArgument(format!("grid start {start} exceeds stop {stop}")));
        }
        Ok(GridSpec { var, start, stop, step })
    }

    pub fn points(&self) -> Vec<Rational> {
        let mut out = Vec::new();
        let mut v = self.start.clone();
        while v <= self.stop {
            out.push(v.clone());
            v += &self.step;
        }
        out
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [var, start, stop, step] = parts.as_slice() else {
            return Err(Error::Parse(format!("grid must be var:start:stop:step, got {s:?}")));
        };
        GridSpec::new(var.parse()?, parse_decimal(start)?, parse_decimal(stop)?, parse_decimal(step)?)
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}:{}", self.var.name(), self.start, self.stop, self.step)
    }
}

/// A CSV table whose exact columns carry both a decimal and a fraction.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    /// `exact` names expand to `name,name_frac`.
    pub fn new(plain: &[&str], exact: &[&str]) -> Self {
        let mut header: Vec<String> = plain.iter().map(|s| s.to_string()).collect();
        for name in exact {
            header.push(name.to_string());
            header.push(format!("{name}_frac"));
        }
        Table { header, rows: Vec::new() }
    }

    pub fn push(&mut self, plain: Vec<String>, exact: &[&Rational]) {
        let mut row = plain;
        for v in exact {
            row.push(to_decimal_string(v, PLACES));
            row.push(to_fraction_string(v));
        }
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir)?;
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_path(path)?;
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let mut r = csv::Reader::from_path(path)?;
        let header = r.headers()?.iter().map(String::from).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            rows.push(rec?.iter().map(String::from).collect());
        }
        Ok(Table { header, rows })
    }
}

/// True when the decimal column equals the fraction column rounded to
/// [`PLACES`] digits.
pub fn decimal_matches_fraction(decimal: &str, fraction: &str) -> Result<bool> {
    let exact = parse_decimal(fraction)?;
    Ok(to_decimal_string(&exact, PLACES) == decimal && (parse_decimal(decimal)? - &exact).abs() <= ratio(1, 2) * ten_pow_neg(PLACES))
}

fn ten_pow_neg(places: usize) -> Rational {
    Rational::new(1.into(), num_traits::pow(num_bigint::BigInt::from(10), places))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, serde_json::to_string_pretty(value)? + "\n")?;
    Ok(())
}

fn dec(v: &Rational) -> String {
    to_decimal_string(v, PLACES)
}

/// Result of a threshold sweep.
#[derive(Debug, Clone)]
pub struct ThresholdsRun {
    pub path: PathBuf,
    pub table: Table,
    /// `value: reason` for grid points that failed validation.
    pub invalid: Vec<String>,
}

pub fn default_thresholds_grid() -> GridSpec {
    GridSpec::new(GridVar::PiDoc, ratio(1, 10), ratio(9, 10), ratio(1, 10)).expect("literal grid")
}

/// Thresholds over a grid, written to `out/thresholds.csv`. Invalid points
/// go to `out/thresholds_invalid.txt`; no CSV is written if none is valid.
pub fn cmd_thresholds(p: &ModelParams, grid: &GridSpec, out: &Path) -> Result<ThresholdsRun> {
    let points = grid.points();
    let results: Vec<(Rational, Result<thresholds::ThresholdSet>)> = points
        .par_iter()
        .map(|v| {
            let set = grid.var.apply(p, v.clone()).and_then(|q| thresholds::thresholds(&q));
            (v.clone(), set)
        })
        .collect();
    let primes = p.hallucinates();
    let mut exact = vec![grid.var.name(), "p1", "p2", "p3", "p4"];
    if primes {
        exact.extend(["p1_prime", "p1_dprime", "p2_prime"]);
    }
    let mut table = Table::new(&[], &exact);
    let mut invalid = Vec::new();
    for (v, set) in results {
        match set {
            Ok(s) => {
                let mut cells = vec![&v, &s.p1, &s.p2, &s.p3, &s.p4];
                if primes {
                    for k in ThresholdKind::HALLUCINATION {
                        cells.push(s.get(k).expect("hallucinating point has primes"));
                    }
                }
                table.push(Vec::new(), &cells);
            }
            Err(e) => invalid.push(format!("{}={}: {e}", grid.var.name(), to_decimal_string(&v, PLACES))),
        }
    }
    let sidecar = out.join("thresholds_invalid.txt");
    if !invalid.is_empty() {
        fs::create_dir_all(out)?;
        fs::write(&sidecar, invalid.join("\n") + "\n")?;
    }
    if table.rows.is_empty() {
        return Err(Error::InvalidParams(format!("no valid point on grid {grid}")));
    }
    let path = out.join("thresholds.csv");
    table.write(&path)?;
    Ok(ThresholdsRun { path, table, invalid })
}

/// Closed forms the verify suite checks; swappable so that a corrupted
/// formula can be shown to be caught.
#[derive(Clone, Copy)]
pub struct ClosedForms {
    pub threshold: fn(ThresholdKind, &ModelParams) -> Rational,
}

impl Default for ClosedForms {
    fn default() -> Self {
        ClosedForms { threshold: |k, p| k.formula(p) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyCheck {
    pub point: usize,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub points: usize,
    pub params: Vec<String>,
    pub checks: Vec<VerifyCheck>,
    pub all_pass: bool,
    pub seconds: f64,
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = &VerifyCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn passed(&self, name: &str) -> bool {
        self.checks.iter().filter(|c| c.name == name).all(|c| c.passed)
    }

    pub fn count(&self, name: &str) -> usize {
        self.checks.iter().filter(|c| c.name == name).count()
    }
}

/// Every information set with positive probability, in both regimes.
pub fn realizable_information_sets(oracle: &Oracle) -> Vec<InformationSet> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for atom in oracle.atoms().iter().filter(|a| !a.prob.is_zero()) {
        for regime in Regime::BOTH {
            if let Some(info) = oracle.info_at(&atom.outcome, regime) {
                if seen.insert(info) {
                    out.push(info);
                }
            }
        }
    }
    out
}

struct Checker {
    point: usize,
    checks: Vec<VerifyCheck>,
}

impl Checker {
    fn push(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(VerifyCheck { point: self.point, name: name.into(), passed, detail: detail.into() });
    }
}

/// Checks one point against the enumeration. Check names:
/// `valid`, `threshold_oracle`, `threshold_order`, `diagnosis_rule`,
/// `final_diagnosis`, `decomposition`, `averaging`, `gap_p2_p1`,
/// `gap_p3_p4`, `p2_falling`, `p3_rising`, `p4_rising`, `gap_hallucination`.
pub fn verify_point(point: usize, p: &ModelParams, forms: &ClosedForms) -> Vec<VerifyCheck> {
    let mut c = Checker { point, checks: Vec::new() };
    if let Err(e) = p.require_valid() {
        c.push("valid", false, e.to_string());
        return c.checks;
    }
    let th = |k: ThresholdKind| (forms.threshold)(k, p);

    // The core thresholds assume a non-hallucinating AI; with phi_ai < 1
    // only the primed variants describe the model.
    let kinds: &[ThresholdKind] = if p.hallucinates() { &ThresholdKind::HALLUCINATION } else { &ThresholdKind::CORE };
    for &k in kinds {
        let closed = th(k);
        match exact_threshold_in_p_doc(p, &k.template()) {
            Ok(solve) => {
                let ok = solve.root.as_ref() == Some(&closed);
                let root = solve.root.as_ref().map_or("none".into(), |r| r.to_string());
                c.push("threshold_oracle", ok, format!("{k}: closed {closed} oracle {root}"));
            }
            // The profile never occurs (e.g. an always-attentive AI), so
            // there is nothing to persuade and nothing to compare.
            Err(Error::NullEvent(_)) => {}
            Err(e) => c.push("threshold_oracle", false, format!("{k}: {e}")),
        }
    }

    let (p1, p2, p3, p4) = (th(ThresholdKind::P1), th(ThresholdKind::P2), th(ThresholdKind::P3), th(ThresholdKind::P4));
    c.push(
        "threshold_order",
        p4 <= p3 && p3 <= p1 && p1 <= p2,
        format!("p4 {p4} <= p3 {p3} <= p1 {p1} <= p2 {p2}"),
    );
    let averaging = if p.pi_doc < Rational::one() { p2 > p1 } else { p2 == p1 };
    c.push("averaging", averaging, format!("pi_doc {} p1 {p1} p2 {p2}", p.pi_doc));
    if p.hallucinates() {
        let (a, b) = (th(ThresholdKind::P1DoublePrime), th(ThresholdKind::P2Prime));
        let ok = if p.pi_doc < Rational::one() { b > a } else { b >= a };
        c.push("averaging", ok, format!("p1'' {a} p2' {b}"));
    }

    let h = thresholds::default_step();
    let gap = |hi: ThresholdKind, lo: ThresholdKind| slope_in_pi_doc(p, &h, |q| (forms.threshold)(hi, q) - (forms.threshold)(lo, q));
    let s21 = gap(ThresholdKind::P2, ThresholdKind::P1);
    c.push("gap_p2_p1", s21.is_negative(), format!("d(p2-p1)/dpi = {}", dec(&s21)));
    if p4_reaches_half(p) {
        let s34 = gap(ThresholdKind::P3, ThresholdKind::P4);
        c.push("gap_p3_p4", !s34.is_positive(), format!("d(p3-p4)/dpi = {}", dec(&s34)));
    }
    let single = |k: ThresholdKind| slope_in_pi_doc(p, &h, |q| (forms.threshold)(k, q));
    let s2 = single(ThresholdKind::P2);
    c.push("p2_falling", s2.is_negative(), format!("dp2/dpi = {}", dec(&s2)));
    let s3 = single(ThresholdKind::P3);
    c.push("p3_rising", !s3.is_negative(), format!("dp3/dpi = {}", dec(&s3)));
    let s4 = single(ThresholdKind::P4);
    c.push("p4_rising", !s4.is_negative(), format!("dp4/dpi = {}", dec(&s4)));
    if p.hallucinates() {
        let s = gap(ThresholdKind::P2Prime, ThresholdKind::P1DoublePrime);
        c.push("gap_hallucination", !s.is_positive(), format!("d(p2'-p1'')/dpi = {}", dec(&s)));
    }

    let oracle = match Oracle::new(p, false) {
        Ok(o) => o,
        Err(e) => {
            c.push("oracle", false, e.to_string());
            return c.checks;
        }
    };
    let mut rule_ok = true;
    let mut rule_detail = String::from("ok");
    for x in Signal::ALL {
        for w in Dim::ALL {
            for (who, got) in [("doctor", oracle.doctor_decision(x, w)), ("ai", oracle.ai_decision(x, w))] {
                if let Some(d) = got {
                    if d != x.get(w) {
                        rule_ok = false;
                        rule_detail = format!("{who} x={x} w={w}: Bayes {d}");
                    }
                }
            }
            if let (Ok(d), Some(o)) = (diagnosis::initial_diagnosis(p, x, w), oracle.doctor_decision(x, w)) {
                if d != o {
                    rule_ok = false;
                    rule_detail = format!("closed doctor rule x={x} w={w}");
                }
            }
            if let (Ok(a), Some(o)) = (diagnosis::ai_diagnosis(p, x, w), oracle.ai_decision(x, w)) {
                if a != o {
                    rule_ok = false;
                    rule_detail = format!("closed AI rule x={x} w={w}");
                }
            }
        }
    }
    c.push("diagnosis_rule", rule_ok, rule_detail);

    let mut final_ok = true;
    let mut final_detail = String::from("ok");
    let mut decomp_ok = true;
    let mut decomp_detail = String::from("ok");
    let mut decomp_count = 0usize;
    for info in realizable_information_sets(&oracle) {
        let bayes = oracle.posterior(&info).map(|post| post >= half());
        let closed = diagnosis::final_diagnosis(p, &info).map(|r| r.f);
        match (bayes, closed) {
            (Ok(b), Ok(f)) if b == f => {}
            (b, f) => {
                final_ok = false;
                final_detail = format!("{info}: oracle {b:?} closed {f:?}");
            }
        }
        if info.is_disagreement() {
            decomp_count += 1;
            match attribution::decompose_with(&oracle, &info) {
                Ok(rec) if rec.recombined() == rec.post_total && (&rec.w_atten + &rec.w_comp).is_one() => {}
                Ok(rec) => {
                    decomp_ok = false;
                    decomp_detail = format!("{info}: {} vs {}", rec.recombined(), rec.post_total);
                }
                Err(e) => {
                    decomp_ok = false;
                    decomp_detail = format!("{info}: {e}");
                }
            }
        }
    }
    c.push("final_diagnosis", final_ok, final_detail);
    c.push("decomposition", decomp_ok, format!("{decomp_count} sets; {decomp_detail}"));
    c.checks
}

/// Runs [`verify_point`] over a grid in parallel.
pub fn run_verify(grid: &[ModelParams], forms: &ClosedForms) -> VerifyReport {
    let started = Instant::now();
    let checks: Vec<VerifyCheck> =
        grid.par_iter().enumerate().flat_map_iter(|(i, p)| verify_point(i, p, forms)).collect();
    let all_pass = !grid.is_empty() && checks.iter().all(|c| c.passed);
    VerifyReport {
        points: grid.len(),
        params: grid.iter().map(|p| p.to_string()).collect(),
        checks,
        all_pass,
        seconds: started.elapsed().as_secs_f64(),
    }
}

/// A deterministic grid of `size` valid non-hallucinating points spread
/// over the primitives, reference point first, followed by a
/// hallucinating copy of every fifth point with `phi_ai` halfway between
/// its bound and 1.
pub fn default_verify_grid(size: usize) -> Vec<ModelParams> {
    let gammas = [ratio(3, 10), ratio(1, 5), ratio(2, 5), ratio(9, 20)];
    let lambdas = [ratio(1, 5), ratio(1, 10), ratio(3, 10)];
    let pi_docs = [ratio(1, 2), ratio(1, 4), ratio(3, 4), ratio(9, 10), Rational::one()];
    let p_docs = [ratio(3, 4), ratio(17, 20), ratio(19, 20), Rational::one()];
    let pi_ais = [ratio(3, 5), ratio(4, 5), ratio(2, 5), ratio(9, 10)];
    let p_ais = [ratio(4, 5), ratio(9, 10), ratio(97, 100)];
    let mut candidates = Vec::new();
    for g in &gammas {
        for l in &lambdas {
            for pd in &pi_docs {
                for ppd in &p_docs {
                    for pa in &pi_ais {
                        for ppa in &p_ais {
                            let p = ModelParams::new(g.clone(), l.clone(), pd.clone(), ppd.clone(), pa.clone(), ppa.clone());
                            if p.require_valid().is_ok() && p != ModelParams::reference() {
                                candidates.push(p);
                            }
                        }
                    }
                }
            }
        }
    }
    let mut grid = vec![ModelParams::reference()];
    if size > 1 {
        let stride = candidates.len() as f64 / (size - 1) as f64;
        grid.extend((0..size - 1).map(|i| candidates[(i as f64 * stride) as usize].clone()));
    }
    grid.truncate(size);
    let halluc: Vec<ModelParams> = grid
        .iter()
        .step_by(5)
        .filter(|p| p.pi_doc < Rational::one())
        .map(|p| {
            let phi = (p.hallucination_bound() + Rational::one()) / crate::rational::int(2);
            p.clone().with_phi_ai(phi)
        })
        .filter(|q| q.require_valid().is_ok())
        .collect();
    grid.extend(halluc);
    grid
}

/// Grid from a `var:start:stop:step` sweep around `p`, dropping invalid points.
pub fn grid_from_spec(p: &ModelParams, spec: &GridSpec) -> Result<Vec<ModelParams>> {
    let mut out = Vec::new();
    for v in spec.points() {
        let q = spec.var.apply(p, v)?;
        if q.require_valid().is_ok() {
            out.push(q);
        }
    }
    if out.is_empty() {
        return Err(Error::InvalidParams(format!("no valid point on grid {spec}")));
    }
    Ok(out)
}

/// Runs the suite and writes `out/verify.json`.
pub fn cmd_verify(grid: &[ModelParams], forms: &ClosedForms, out: &Path) -> Result<VerifyReport> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("empty verification grid".into()));
    }
    let report = run_verify(grid, forms);
    write_json(&out.join("verify.json"), &report)?;
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct CareerSummary {
    pub p_ai: String,
    pub p_doc_low: String,
    pub delta1: String,
    pub delta2: String,
    pub delta: String,
    pub tau_bar: String,
    pub tau_bar_decimal: String,
    pub sign_bound: String,
}

#[derive(Debug, Clone)]
pub struct CareerRun {
    pub delta: career::AccuracyDelta,
    pub table: Table,
}

/// Tau grid with `steps` evenly spaced points on `[0, 2 tau_bar]`.
pub fn default_tau_grid(tau_bar: &Rational, steps: i64) -> Vec<Rational> {
    (0..=steps).map(|i| tau_bar * ratio(2 * i, steps)).filter(|t| *t <= Rational::one()).collect()
}

/// Accuracy comparison over `taus`; writes `career.csv` and `career.json`.
pub fn cmd_career(pp: &PopulationParams, taus: Option<&[Rational]>, out: &Path) -> Result<CareerRun> {
    let delta = career::accuracy_delta(pp)?;
    let default;
    let taus = match taus {
        Some(t) => t,
        None => {
            default = default_tau_grid(&delta.tau_bar, 10);
            &default
        }
    };
    let hi = career::type_accuracy(&pp.high(), Regime::Interpretable)?;
    let hu = career::type_accuracy(&pp.high(), Regime::Uninterpretable)?;
    let li = career::type_accuracy(&pp.low(), Regime::Interpretable)?;
    let lu = career::type_accuracy(&pp.low(), Regime::Uninterpretable)?;
    let mut table = Table::new(&["below_tau_bar"], &["tau", "acc_interpretable", "acc_uninterpretable", "difference", "bound"]);
    for tau in taus {
        if tau.is_negative() || *tau > Rational::one() {
            return Err(Error::InvalidArgument(format!("tau {tau} is not a probability")));
        }
        let one = Rational::one();
        let ai = tau * &hi + (&one - tau) * &li;
        let au = tau * &hu + (&one - tau) * &lu;
        let diff = &au - &ai;
        let bound = career::accuracy_gain_bound(tau, &delta.delta);
        table.push(vec![(tau < &delta.tau_bar).to_string()], &[tau, &ai, &au, &diff, &bound]);
    }
    table.write(&out.join("career.csv"))?;
    let summary = CareerSummary {
        p_ai: to_fraction_string(&pp.base.p_ai),
        p_doc_low: to_fraction_string(&pp.p_doc_low),
        delta1: to_fraction_string(&delta.delta1),
        delta2: to_fraction_string(&delta.delta2),
        delta: to_fraction_string(&delta.delta),
        tau_bar: to_fraction_string(&delta.tau_bar),
        tau_bar_decimal: dec(&delta.tau_bar),
        sign_bound: to_fraction_string(&career::delta_sign_bound(pp)),
    };
    write_json(&out.join("career.json"), &summary)?;
    Ok(CareerRun { delta, table })
}

#[derive(Debug, Clone, Serialize)]
pub struct FreerideSummary {
    pub deltas: Vec<String>,
    pub mu: String,
    pub eta: String,
    pub mix12: String,
    pub mix34: String,
    pub branch: String,
    pub c1: String,
    pub c2: String,
}

#[derive(Debug, Clone)]
pub struct FreerideRun {
    pub report: freeride::FreerideReport,
    pub interval: (Rational, Rational),
    pub table: Table,
}

/// `steps + 1` costs evenly spaced on `(0, 1.25 * max gain]`.
pub fn default_cost_grid(report: &freeride::FreerideReport, steps: i64) -> Vec<Rational> {
    let top = report.deltas.iter().chain([&report.mix12, &report.mix34]).max().expect("nonempty").clone() * ratio(5, 4);
    (1..=steps).map(|i| &top * ratio(i, steps)).collect()
}

/// Draw tables and accuracies over `costs`; writes `freeride.csv` and
/// `freeride.json`.
pub fn cmd_freeride(fp: &FreerideParams, costs: Option<&[Rational]>, out: &Path) -> Result<FreerideRun> {
    let report = freeride::freeride_deltas(fp)?;
    let interval = freeride::cost_interval(&report)?;
    let default;
    let costs = match costs {
        Some(c) => c,
        None => {
            default = default_cost_grid(&report, 40);
            &default
        }
    };
    let mut table = Table::new(
        &["in_interval", "draws_interpretable", "draws_uninterpretable", "count_interpretable", "count_uninterpretable"],
        &["cost", "acc_interpretable", "acc_uninterpretable", "gap"],
    );
    let rows: Vec<Result<(Vec<String>, [Rational; 4])>> = costs
        .par_iter()
        .map(|cost| {
            let q = fp.clone().with_cost(cost.clone());
            q.validate()?;
            let i = freeride::regime_outcome(&q, &report, Regime::Interpretable)?;
            let u = freeride::regime_outcome(&q, &report, Regime::Uninterpretable)?;
            let bits = |r: Regime| {
                freeride::draw_table(&report, r, cost).iter().map(|d| if *d { '1' } else { '0' }).collect::<String>()
            };
            let plain = vec![
                (&interval.0 < cost && cost < &interval.1).to_string(),
                bits(Regime::Interpretable),
                bits(Regime::Uninterpretable),
                freeride::draw_count(&report, Regime::Interpretable, cost).to_string(),
                freeride::draw_count(&report, Regime::Uninterpretable, cost).to_string(),
            ];
            let gap = &u.accuracy - &i.accuracy;
            Ok((plain, [cost.clone(), i.accuracy, u.accuracy, gap]))
        })
        .collect();
    for row in rows {
        let (plain, [c, ai, au, gap]) = row?;
        table.push(plain, &[&c, &ai, &au, &gap]);
    }
    table.write(&out.join("freeride.csv"))?;
    let summary = FreerideSummary {
        deltas: report.deltas.iter().map(to_fraction_string).collect(),
        mu: to_fraction_string(&report.mu),
        eta: to_fraction_string(&report.eta),
        mix12: to_fraction_string(&report.mix12),
        mix34: to_fraction_string(&report.mix34),
        branch: report.branch().to_string(),
        c1: to_fraction_string(&interval.0),
        c2: to_fraction_string(&interval.1),
    };
    write_json(&out.join("freeride.json"), &summary)?;
    Ok(FreerideRun { report, interval, table })
}

/// Monte Carlo battery at `p`; writes `montecarlo.json`.
pub fn cmd_montecarlo(p: &ModelParams, n: u64, seed: u64, out: &Path) -> Result<Vec<McEstimate>> {
    let scenarios = montecarlo::default_scenarios(p)?;
    let estimates = montecarlo::run(p, &scenarios, n, seed)?;
    write_json(&out.join("montecarlo.json"), &estimates)?;
    Ok(estimates)
}

/// Fraction of estimates within four standard errors.
pub fn coverage(estimates: &[McEstimate]) -> f64 {
    if estimates.is_empty() {
        return 0.0;
    }
    estimates.iter().filter(|e| e.within_4se).count() as f64 / estimates.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_spec_parsing() {
        let g: GridSpec = "pi_doc:0.1:0.9:0.1".parse().unwrap();
        assert_eq!(g.points().len(), 9);
        assert_eq!(g.points()[4], half());
        assert!("pi_doc:0.1:0.9:0".parse::<GridSpec>().is_err());
        assert!("pi_doc:0.9:0.1:0.1".parse::<GridSpec>().is_err());
        assert!("nope:0:1:0.1".parse::<GridSpec>().is_err());
        assert!("pi_doc:0:1".parse::<GridSpec>().is_err());
        let one: GridSpec = "tau:0.5:0.5:1".parse().unwrap();
        assert_eq!(one.points(), vec![half()]);
    }

    #[test]
    fn params_file_reads_numbers_and_strings_exactly() {
        let json = r#"{"gamma": 0.3, "lambda": "1/5", "pi_doc": "0.5", "p_doc": 0.75, "pi_ai": 0.6, "p_ai": "0.8"}"#;
        let f: ParamsFile = serde_json::from_str(json).unwrap();
        assert_eq!(f.resolve().unwrap().model, ModelParams::reference());
        let round = ParamsFile::from_model(&ModelParams::reference()).resolve().unwrap();
        assert_eq!(round.model, ModelParams::reference());
        let bad = r#"{"gamma": 0.3, "lambda": "x", "pi_doc": 0.5, "p_doc": 0.75, "pi_ai": 0.6, "p_ai": 0.8}"#;
        assert!(serde_json::from_str::<ParamsFile>(bad).unwrap().resolve().is_err());
    }

    #[test]
    fn decimal_and_fraction_agree() {
        assert!(decimal_matches_fraction("0.887323943662", "63/71").unwrap());
        assert!(!decimal_matches_fraction("0.887323943663", "63/71").unwrap());
    }

    #[test]
    fn default_grid_has_requested_size_and_is_valid() {
        let grid = default_verify_grid(100);
        assert_eq!(grid.iter().filter(|p| !p.hallucinates()).count(), 100);
        assert!(grid.iter().all(|p| p.require_valid().is_ok()));
        assert!(grid.iter().filter(|p| p.hallucinates()).count() >= 10);
        assert!(grid.iter().any(p4_reaches_half));
        assert!(grid.iter().any(|p| p.pi_doc.is_one()));
        assert_eq!(default_verify_grid(1)[0], ModelParams::reference());
        assert!(default_verify_grid(1).len() <= 2);
    }

    #[test]
    fn reference_point_verifies() {
        let checks = verify_point(0, &ModelParams::reference(), &ClosedForms::default());
        let failed: Vec<_> = checks.iter().filter(|c| !c.passed).collect();
        assert!(failed.is_empty(), "{failed:?}");
    }

    #[test]
    fn corrupted_formula_is_caught() {
        let bad = ClosedForms {
            threshold: |k, p| {
                let v = k.formula(p);
                if k == ThresholdKind::P3 {
                    v + ratio(1, 1000)
                } else {
                    v
                }
            },
        };
        let report = run_verify(&[ModelParams::reference()], &bad);
        assert!(!report.all_pass);
        assert!(report.failures().any(|c| c.name == "threshold_oracle" && c.detail.starts_with("p3")));
    }
}
