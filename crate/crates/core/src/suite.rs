//! Batch verification: a configuration selects suites, the runner executes
//! every check (in parallel) and the report lists them sorted by name.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TwistError};
use crate::expr::Expr;
use crate::hopf::{
    antipode_checks, coassociativity_check, cocycle_check, counit_check, default_expansion_bound,
    factorwise_cocycle_checks, r_matrix_checks, verify_dragging, verify_dragging_alternative,
    CheckResult, Witness, WitnessKind,
};
use crate::props::core_property_checks;
use crate::rational::Rational;
use crate::roots::max_chain_length;
use crate::sparse::SparseMatrix;
use crate::states::{
    diagram_checks, heisenberg_generators, verify_extended_costructure, verify_locality,
    verify_matreshka, verify_state, verify_transition_schemes, verify_two_jordanian, StateId,
};
use crate::twist::{
    alternative_chain, chain_twist, extended_twist_generic, external_factor, jordanian_factor,
    ExternalKind, TwistSequence,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Core,
    TwistAxioms,
    Chain,
    NineStates,
    Diagram,
    Rmatrix,
    Antipode,
    Matreshka,
    Transitions,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Core,
        Suite::TwistAxioms,
        Suite::Chain,
        Suite::NineStates,
        Suite::Diagram,
        Suite::Rmatrix,
        Suite::Antipode,
        Suite::Matreshka,
        Suite::Transitions,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Core => "core",
            Suite::TwistAxioms => "twist-axioms",
            Suite::Chain => "chain",
            Suite::NineStates => "nine-states",
            Suite::Diagram => "diagram",
            Suite::Rmatrix => "rmatrix",
            Suite::Antipode => "antipode",
            Suite::Matreshka => "matreshka",
            Suite::Transitions => "transitions",
        }
    }

    /// Smallest N for which the suite has anything to check.
    pub fn min_n(&self) -> usize {
        match self {
            Suite::NineStates | Suite::Diagram => 6,
            Suite::Matreshka => 4,
            Suite::Transitions => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = TwistError;
    fn from_str(s: &str) -> Result<Self> {
        if s == "all" {
            return Err(TwistError::Parse("`all` expands to several suites".into()));
        }
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| TwistError::Parse(format!("unknown suite `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

impl FromStr for OutputFormat {
    type Err = TwistError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "json" => Ok(OutputFormat::Json),
            _ => Err(TwistError::Parse(format!("unknown format `{s}`"))),
        }
    }
}

fn all_suites() -> Vec<Suite> {
    Suite::ALL.to_vec()
}

pub fn default_alphas() -> Vec<Rational> {
    vec![
        Rational::ZERO,
        Rational::new(1, 3),
        Rational::new(1, 2),
        Rational::new(2, 5),
    ]
}

fn default_witnesses() -> Vec<WitnessKind> {
    vec![WitnessKind::Fundamental]
}

fn default_cases() -> usize {
    1000
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    #[serde(rename = "N", alias = "n")]
    pub n: usize,
    #[serde(default = "all_suites")]
    pub suites: Vec<Suite>,
    /// Empty means every admissible `r` in `3..=N-2`.
    #[serde(default)]
    pub r_values: Vec<usize>,
    #[serde(default = "default_alphas")]
    pub alpha_values: Vec<Rational>,
    #[serde(default = "default_witnesses")]
    pub witness_reps: Vec<WitnessKind>,
    #[serde(default)]
    pub output: OutputFormat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dump_dir: Option<PathBuf>,
    /// Random inputs per law in the `core` suite.
    #[serde(default = "default_cases")]
    pub core_cases: usize,
    #[serde(default)]
    pub seed: u64,
}

impl SuiteConfig {
    pub fn new(n: usize) -> Self {
        SuiteConfig {
            n,
            suites: all_suites(),
            r_values: Vec::new(),
            alpha_values: default_alphas(),
            witness_reps: default_witnesses(),
            output: OutputFormat::Text,
            dump_dir: None,
            core_cases: default_cases(),
            seed: 0,
        }
    }

    pub fn with_suites(mut self, suites: &[Suite]) -> Self {
        self.suites = suites.to_vec();
        self
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| TwistError::ConfigInvalid(e.to_string()))
    }

    /// Admissible `r` values after defaulting.
    pub fn rs(&self) -> Vec<usize> {
        if self.r_values.is_empty() && self.n >= 5 {
            (3..=self.n - 2).collect()
        } else {
            self.r_values.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(TwistError::ConfigInvalid(m));
        if self.n < 2 {
            return bad(format!("N must be >= 2, got {}", self.n));
        }
        if self.suites.is_empty() {
            return bad("no suites selected".into());
        }
        if self.witness_reps.is_empty() {
            return bad("no witness representation selected".into());
        }
        for s in &self.suites {
            if self.n < s.min_n() {
                return bad(format!(
                    "suite {s} needs N >= {}, got N={}",
                    s.min_n(),
                    self.n
                ));
            }
        }
        let uses_r = self
            .suites
            .iter()
            .any(|s| matches!(s, Suite::NineStates | Suite::Diagram));
        if uses_r {
            for &r in &self.r_values {
                if !(3 <= r && r + 2 <= self.n) {
                    return bad(format!("r={r} outside 3..=N-2 for N={}", self.n));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub summary: Summary,
    pub checks: Vec<CheckResult>,
    pub elapsed_ms: f64,
}

impl SuiteReport {
    pub fn new(config: SuiteConfig, mut checks: Vec<CheckResult>, elapsed_ms: f64) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        let passed = checks.iter().filter(|c| c.passed).count();
        SuiteReport {
            config,
            summary: Summary {
                total: checks.len(),
                passed,
                failed: checks.len() - passed,
            },
            checks,
            elapsed_ms,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }
}

/// Twists whose axioms are checked, with their report labels.
pub fn axiom_twists(n: usize, alphas: &[Rational]) -> Result<Vec<(String, TwistSequence)>> {
    let mut out = vec![(
        "jordanian".to_string(),
        TwistSequence::single(jordanian_factor(n, 1)?),
    )];
    if n >= 3 {
        for alpha in alphas {
            for r in 2..n {
                out.push((
                    format!("extended:alpha={alpha}:r={r}"),
                    extended_twist_generic(n, r, alpha)?,
                ));
            }
        }
    }
    Ok(out)
}

/// Chains of every admissible length, plus the alternative chain.
pub fn chain_twists(n: usize) -> Result<Vec<(String, TwistSequence)>> {
    let mut out = Vec::new();
    for p in 0..=max_chain_length(n) {
        out.push((format!("chain:p={p}"), chain_twist(n, p)?));
    }
    if n >= 4 {
        out.push(("alt-chain".to_string(), alternative_chain(n)?));
    }
    Ok(out)
}

/// Generators of gl(N): every `E_ij`.
pub fn gl_generators(n: usize) -> Vec<Expr> {
    let mut xs = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            xs.push(Expr::gen(i, j));
        }
    }
    xs
}

/// Elements used for the coassociativity cross-check: the union of the
/// H̃(2,1) generators over all `r` for `N > 5`, otherwise all of gl(N).
pub fn coassociativity_generators(n: usize) -> Vec<Expr> {
    if n <= 5 {
        return gl_generators(n);
    }
    let mut idx: Vec<(usize, usize)> = (3..=n - 2)
        .flat_map(|r| heisenberg_generators(n, r))
        .collect();
    idx.sort_unstable();
    idx.dedup();
    idx.into_iter().map(|(i, j)| Expr::gen(i, j)).collect()
}

type Job<'a> = Box<dyn Fn() -> Result<Vec<CheckResult>> + Send + Sync + 'a>;

fn one<'a>(f: impl Fn() -> Result<CheckResult> + Send + Sync + 'a) -> Job<'a> {
    Box::new(move || Ok(vec![f()?]))
}

fn jobs_for<'a>(cfg: &'a SuiteConfig, suite: Suite, w: &'a Witness) -> Result<Vec<Job<'a>>> {
    let n = cfg.n;
    let mut jobs: Vec<Job<'a>> = Vec::new();
    match suite {
        Suite::Core => {
            if w.kind == WitnessKind::Fundamental {
                let (cases, seed) = (cfg.core_cases, cfg.seed);
                jobs.push(Box::new(move || Ok(core_property_checks(cases, seed))));
            }
        }
        Suite::TwistAxioms => {
            for (label, f) in axiom_twists(n, &cfg.alpha_values)? {
                let empty = TwistSequence::empty(n);
                let (l2, f2) = (label.clone(), f.clone());
                jobs.push(one(move || cocycle_check(&label, &f, &empty, w)));
                jobs.push(one(move || counit_check(&l2, &f2, w)));
            }
            if n >= 3 {
                for alpha in &cfg.alpha_values {
                    for r in 2..n {
                        jobs.push(one(move || verify_extended_costructure(n, r, alpha, w)));
                    }
                }
            }
            if n >= 6 {
                for kind in [ExternalKind::E0Tilde, ExternalKind::E1Tilde] {
                    jobs.push(one(move || {
                        let f = TwistSequence::single(external_factor(n, kind)?);
                        counit_check(&format!("external:{kind}"), &f, w)
                    }));
                }
            }
        }
        Suite::Chain => {
            for (label, f) in chain_twists(n)? {
                let (l2, f2, l3, f3) = (label.clone(), f.clone(), label.clone(), f.clone());
                jobs.push(one(move || {
                    cocycle_check(&label, &f, &TwistSequence::empty(n), w)
                }));
                jobs.push(one(move || counit_check(&l2, &f2, w)));
                jobs.push(Box::new(move || factorwise_cocycle_checks(&l3, &f3, w)));
            }
            if n >= 4 {
                jobs.push(one(move || {
                    coassociativity_check(
                        "chain:p=1",
                        &chain_twist(n, 1)?,
                        &coassociativity_generators(n),
                        w,
                    )
                }));
            }
            if n >= 6 {
                jobs.push(one(move || verify_dragging(n, w)));
                jobs.push(one(move || verify_dragging_alternative(n, w)));
            }
        }
        Suite::NineStates => {
            jobs.push(one(move || verify_two_jordanian(n, w)));
            for r in cfg.rs() {
                for s in StateId::ALL {
                    jobs.push(one(move || verify_state(s, n, r, w)));
                }
            }
        }
        Suite::Diagram => {
            for r in cfg.rs() {
                jobs.push(Box::new(move || diagram_checks(n, r, w)));
                jobs.push(one(move || verify_locality(n, r, w)));
            }
        }
        Suite::Rmatrix => {
            let mut twists = axiom_twists(n, &cfg.alpha_values)?;
            twists.extend(chain_twists(n)?);
            for (label, f) in twists {
                jobs.push(one(move || r_matrix_checks(&label, &f, w)));
            }
        }
        Suite::Antipode => {
            let bound = default_expansion_bound(n);
            let mut twists = axiom_twists(n, &cfg.alpha_values)?;
            // deeper products expand fast; keep to the first chain step
            if (4..=6).contains(&n) {
                twists.push(("chain:p=0".to_string(), chain_twist(n, 0)?));
            }
            for (label, f) in twists {
                jobs.push(one(move || {
                    antipode_checks(&label, &f, &gl_generators(n), w, bound)
                }));
            }
        }
        Suite::Matreshka => {
            jobs.push(one(move || verify_matreshka(n, w)));
        }
        Suite::Transitions => {
            jobs.push(Box::new(move || {
                verify_transition_schemes(n, &cfg.alpha_values, w)
            }));
        }
    }
    Ok(jobs)
}

/// Executes every requested check. Failed checks are results; only
/// structural problems abort with an error.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let started = Instant::now();
    let mut suites = cfg.suites.clone();
    suites.sort_unstable();
    suites.dedup();
    let mut kinds = cfg.witness_reps.clone();
    kinds.sort_unstable();
    kinds.dedup();
    let witnesses: Vec<Witness> = kinds
        .iter()
        .map(|&k| Witness::new(k, cfg.n))
        .collect::<Result<_>>()?;

    let mut jobs = Vec::new();
    for w in &witnesses {
        for &s in &suites {
            jobs.extend(jobs_for(cfg, s, w)?);
        }
    }
    let checks: Vec<CheckResult> = jobs
        .par_iter()
        .map(|job| job())
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    if let Some(dir) = &cfg.dump_dir {
        dump_twists(cfg, &witnesses, dir)?;
    }
    Ok(SuiteReport::new(
        cfg.clone(),
        checks,
        started.elapsed().as_secs_f64() * 1e3,
    ))
}

fn file_stem(label: &str) -> String {
    label
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

/// Writes the materialized twist of every axiom and chain twist.
fn dump_twists(cfg: &SuiteConfig, witnesses: &[Witness], dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut twists = axiom_twists(cfg.n, &cfg.alpha_values)?;
    twists.extend(chain_twists(cfg.n)?);
    for w in witnesses {
        for (label, f) in &twists {
            let (m, _) = w.materialize(f)?;
            let path = dir.join(format!("{}_N{}_{}.dump", file_stem(label), cfg.n, w.kind));
            dump_matrix(&m, &path)?;
        }
    }
    Ok(())
}

pub fn dump_matrix(m: &SparseMatrix, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut out = std::io::BufWriter::new(file);
    m.write_dump(&mut out)?;
    std::io::Write::flush(&mut out)?;
    Ok(())
}

pub fn emit_report(rep: &SuiteReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(rep).expect("report serializes");
            s.push('\n');
            s
        }
        OutputFormat::Text => {
            let mut s = String::new();
            for c in &rep.checks {
                s.push_str(&c.to_string());
                if !c.passed {
                    if let Some(note) = &c.note {
                        s.push_str("  # ");
                        s.push_str(note);
                    }
                }
                s.push('\n');
            }
            s.push_str(&format!(
                "{} passed / {} failed\n",
                rep.summary.passed, rep.summary.failed
            ));
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::time::Duration;

    fn fake(name: &str, passed: bool) -> CheckResult {
        CheckResult {
            name: name.into(),
            passed,
            residual_nnz: usize::from(!passed),
            dims: 1,
            elapsed: Duration::ZERO,
            note: None,
        }
    }

    #[test]
    fn text_report_format() {
        let rep = SuiteReport::new(
            SuiteConfig::new(6),
            vec![fake("cocycle[jordanian,N=6]", true), fake("b", false)],
            0.0,
        );
        let text = emit_report(&rep, OutputFormat::Text);
        assert!(text.starts_with("FAIL b residual=1\nPASS cocycle[jordanian,N=6] residual=0\n"));
        assert!(text.ends_with("1 passed / 1 failed\n"));
    }

    #[test]
    fn empty_report_is_valid_json() {
        let rep = SuiteReport::new(SuiteConfig::new(3), vec![], 0.0);
        let v: serde_json::Value =
            serde_json::from_str(&emit_report(&rep, OutputFormat::Json)).unwrap();
        assert_eq!(v["summary"]["total"], 0);
        assert_eq!(v["checks"].as_array().unwrap().len(), 0);
        assert_eq!(v["config"]["alpha_values"][1], "1/3");
        assert_eq!(v["config"]["N"], 3);
    }

    #[test]
    fn config_validation() {
        let cfg = SuiteConfig::new(5).with_suites(&[Suite::NineStates]);
        assert!(matches!(run_suite(&cfg), Err(TwistError::ConfigInvalid(_))));
        let mut cfg = SuiteConfig::new(6).with_suites(&[Suite::Diagram]);
        cfg.r_values = vec![5];
        assert!(matches!(cfg.validate(), Err(TwistError::ConfigInvalid(_))));
        assert!(SuiteConfig::new(1).validate().is_err());
        let parsed = SuiteConfig::from_json(
            r#"{"N": 4, "suites": ["twist-axioms"], "alpha_values": ["1/3", 0]}"#,
        )
        .unwrap();
        assert_eq!(
            parsed.alpha_values,
            vec![Rational::new(1, 3), Rational::ZERO]
        );
        assert!(SuiteConfig::from_json(r#"{"N": 4, "bogus": 1}"#).is_err());
    }

    #[test]
    fn small_suite_passes_and_is_sorted() {
        let mut cfg = SuiteConfig::new(3).with_suites(&[Suite::TwistAxioms, Suite::Antipode]);
        cfg.alpha_values = vec![Rational::new(1, 2)];
        let rep = run_suite(&cfg).unwrap();
        assert!(rep.all_passed());
        assert!(rep.checks.windows(2).all(|w| w[0].name <= w[1].name));
        assert_eq!(rep.summary.total, rep.checks.len());
        let names: Vec<_> = rep.checks.iter().map(|c| c.name.as_str()).collect();
        assert!(names.contains(&"cocycle[jordanian,N=3]"));
    }

    #[test]
    fn nine_states_count() {
        let mut cfg = SuiteConfig::new(7).with_suites(&[Suite::NineStates]);
        cfg.r_values = vec![3, 4, 5];
        let rep = run_suite(&cfg).unwrap();
        let states = rep
            .checks
            .iter()
            .filter(|c| c.name.starts_with("state["))
            .count();
        assert_eq!(states, 27);
        assert!(rep.all_passed());
    }

    #[test]
    fn dump_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("i2.dump");
        dump_matrix(&SparseMatrix::identity(2), &path).unwrap();
        assert_eq!(
            std::fs::read_to_string(&path).unwrap(),
            "dim 2\n1 1 1 1\n2 2 1 1\n"
        );
        let w = Witness::fundamental(6).unwrap();
        let (f, _) = w.materialize(&chain_twist(6, 1).unwrap()).unwrap();
        let path = dir.path().join("chain.dump");
        dump_matrix(&f, &path).unwrap();
        let back = SparseMatrix::from_dump_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(back, f);
    }
}
