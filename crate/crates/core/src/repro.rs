//! Golden-value reproduction suite.
//!
//! The reference energies live in `golden/manifest.json`; every case is
//! checked against the analytic spectrum and, optionally, the shooting
//! oracle.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{make_params, Domain, PotentialParams, QuasiParity, StateLabel};
use crate::spectrum::{full_spectrum, mu_nq, Verdict};
use crate::verify::{oracle_agrees, shoot, ShootingProblem};

pub const MANIFEST: &str = include_str!("../golden/manifest.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenParams {
    pub gamma: f64,
    pub s: [f64; 2],
    pub lambda: [f64; 2],
    pub epsilon: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenValue {
    pub n: u32,
    pub q: i32,
    pub energy: [f64; 2],
    /// Where the value comes from: "reference", "closed-form" or "oracle".
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenCase {
    pub name: String,
    pub params: GoldenParams,
    #[serde(default)]
    pub domain: Option<Domain>,
    pub verdict: Verdict,
    pub count_plus: usize,
    #[serde(default)]
    pub count_minus: Option<usize>,
    pub tolerance: f64,
    pub expected: Vec<GoldenValue>,
}

impl GoldenCase {
    pub fn potential_params(&self) -> Result<PotentialParams> {
        let g = &self.params;
        match self.domain.unwrap_or(Domain::Line) {
            Domain::Line => make_params(
                g.gamma,
                Complex64::new(g.s[0], g.s[1]),
                Complex64::new(g.lambda[0], g.lambda[1]),
                g.epsilon,
            ),
            Domain::HalfLine => PotentialParams::hermitian_radial(g.gamma, g.s[0], g.lambda[0]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseReport {
    pub name: String,
    pub passed: bool,
    pub max_deviation: f64,
    /// Worst `|E_shoot − E| / max(1, |E|)` when the oracle ran.
    pub oracle_deviation: Option<f64>,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GoldenReport {
    pub cases: Vec<CaseReport>,
    pub passed: bool,
}

pub fn load_manifest(text: &str) -> Result<Vec<GoldenCase>> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("golden manifest: {e}")))
}

/// A case of the built-in manifest by name.
pub fn builtin_case(name: &str) -> Result<GoldenCase> {
    load_manifest(MANIFEST)?
        .into_iter()
        .find(|c| c.name == name)
        .ok_or_else(|| Error::InvalidInput(format!("no golden case named {name}")))
}

impl GoldenValue {
    pub fn label(&self) -> Result<StateLabel> {
        Ok(StateLabel::new(self.n, QuasiParity::from_i32(self.q)?))
    }

    pub fn energy(&self) -> Complex64 {
        Complex64::new(self.energy[0], self.energy[1])
    }
}

/// Run every case of the built-in manifest.
pub fn run_golden_suite(with_oracle: Option<f64>) -> Result<GoldenReport> {
    Ok(run_cases(&load_manifest(MANIFEST)?, with_oracle))
}

/// Check each case; when `oracle_step` is set, also shoot every expected
/// energy on a line-domain case with that RK4 step.
pub fn run_cases(cases: &[GoldenCase], oracle_step: Option<f64>) -> GoldenReport {
    let reports: Vec<CaseReport> = cases.iter().map(|c| run_case(c, oracle_step)).collect();
    let passed = reports.iter().all(|r| r.passed);
    GoldenReport { cases: reports, passed }
}

fn run_case(case: &GoldenCase, oracle_step: Option<f64>) -> CaseReport {
    let mut failures = Vec::new();
    let mut max_deviation: f64 = 0.0;
    let mut oracle_deviation = None;
    let p = match case.potential_params() {
        Ok(p) => p,
        Err(e) => {
            return CaseReport {
                name: case.name.clone(),
                passed: false,
                max_deviation: f64::NAN,
                oracle_deviation: None,
                failures: vec![format!("parameters rejected: {e}")],
            }
        }
    };
    match full_spectrum(&p) {
        Ok(r) => {
            if r.verdict != case.verdict {
                failures.push(format!("verdict {:?}, expected {:?}", r.verdict, case.verdict));
            }
            if r.count_plus != case.count_plus {
                failures.push(format!(
                    "{} states with q = +1, expected {}",
                    r.count_plus, case.count_plus
                ));
            }
            if let Some(m) = case.count_minus {
                if r.count_minus != m {
                    failures.push(format!("{} states with q = -1, expected {m}", r.count_minus));
                }
            }
        }
        Err(e) => failures.push(format!("spectrum failed: {e}")),
    }
    for g in &case.expected {
        let q = match QuasiParity::from_i32(g.q) {
            Ok(q) => q,
            Err(e) => {
                failures.push(format!("bad quasi-parity in manifest: {e}"));
                continue;
            }
        };
        let expected = Complex64::new(g.energy[0], g.energy[1]);
        let sv = mu_nq(&p, StateLabel::new(g.n, q));
        let dev = (sv.energy - expected).norm();
        max_deviation = max_deviation.max(dev);
        if !sv.normalizable {
            failures.push(format!("(n = {}, q = {q}) is not normalizable", g.n));
        } else if dev > case.tolerance {
            failures.push(format!(
                "(n = {}, q = {q}): E = {:.6}{:+.6}i, expected {:.6}{:+.6}i (diff {dev:.3e} > {:.1e})",
                g.n, sv.energy.re, sv.energy.im, expected.re, expected.im, case.tolerance
            ));
        }
    }
    if let (Some(step), Domain::Line) = (oracle_step, p.domain()) {
        match ShootingProblem::for_potential(&p, step) {
            Ok(problem) => {
                let mut worst: f64 = 0.0;
                for g in &case.expected {
                    let Ok(q) = QuasiParity::from_i32(g.q) else { continue };
                    let analytic = mu_nq(&p, StateLabel::new(g.n, q)).energy;
                    match shoot(&problem, analytic * 1.02) {
                        Ok(r) => {
                            worst = worst.max((r.energy - analytic).norm() / analytic.norm().max(1.0));
                            if !oracle_agrees(r.energy, analytic) {
                                failures.push(format!(
                                    "oracle (n = {}, q = {q}): {:.6}{:+.6}i vs analytic {:.6}{:+.6}i",
                                    g.n, r.energy.re, r.energy.im, analytic.re, analytic.im
                                ));
                            }
                        }
                        Err(e) => failures.push(format!("oracle (n = {}, q = {q}) failed: {e}", g.n)),
                    }
                }
                oracle_deviation = Some(worst);
            }
            Err(e) => failures.push(format!("oracle setup failed: {e}")),
        }
    }
    CaseReport {
        name: case.name.clone(),
        passed: failures.is_empty(),
        max_deviation,
        oracle_deviation,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_parses_and_passes() {
        let cases = load_manifest(MANIFEST).unwrap();
        assert_eq!(cases.len(), 4);
        assert!(cases.iter().all(|c| c.expected.iter().all(|g| !g.source.is_empty())));
        let r = run_cases(&cases, None);
        assert!(r.passed, "{r:#?}");
    }

    #[test]
    fn breach_is_reported_with_diff() {
        let mut cases = load_manifest(MANIFEST).unwrap();
        cases[0].expected[0].energy[0] += 0.01;
        cases[2].verdict = Verdict::Unbroken;
        let r = run_cases(&cases, None);
        assert!(!r.passed);
        assert_eq!(r.cases[0].failures.len(), 1);
        assert!(r.cases[0].failures[0].contains("expected -171.303"));
        assert!(r.cases[2].failures[0].contains("verdict"));
        assert!(r.cases[1].passed && r.cases[3].passed);
    }
}
