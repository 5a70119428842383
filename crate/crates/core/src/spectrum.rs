//! Exact bound-state spectrum.
//!
//! Every level depends on the parameters through `k = 2n + 1 + q(λ − 1/2)`:
//!
//! ```text
//! A   = γ²(s + 1/2)² + (1 − γ²) k²
//! μ   = (−k + √A) / γ²          (principal root)
//! E   = −γ⁴ μ²
//! ```
//!
//! A state is normalizable when `Re μ > 0`. The square root uses the
//! principal branch with ties (`Re √A = 0`) broken towards `Im √A ≥ 0`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{LambdaParam, PotentialParams, QuasiParity, SParam, StateLabel};

/// Direct enumeration runs over `n ≤ ENUMERATION_CAP`.
pub const ENUMERATION_CAP: u32 = 200;

/// Imaginary parts of A below this (relative) are treated as zero.
pub const REGIME_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralValue {
    pub label: StateLabel,
    pub mu: Complex64,
    pub energy: Complex64,
    pub normalizable: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    NonNegative,
    Negative,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Discriminant {
    pub a_value: Complex64,
    pub regime: Regime,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HypergeometricParams {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub omega: Complex64,
}

/// Sign choices in `c = 1 ± μ`, `a + b − c = ±(λ − 1/2)`, `a − b = ±ω`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignChoices {
    pub c: i8,
    pub lambda: i8,
    pub omega: i8,
}

impl Default for SignChoices {
    fn default() -> Self {
        Self {
            c: 1,
            lambda: 1,
            omega: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// All normalizable energies are real.
    Unbroken,
    /// Complex energies forming pairs `E_{n,+1} = conj(E_{n,−1})`.
    BrokenPT,
    /// Complex energies with real λ (complex s or large λ); their PT images
    /// come from the second root of the quadratic.
    Complexified,
    Empty,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    #[serde(skip)]
    pub params: PotentialParams,
    /// Normalizable states, q = +1 first, then q = −1, each by increasing n.
    pub states: Vec<SpectralValue>,
    pub verdict: Verdict,
    pub count_plus: usize,
    pub count_minus: usize,
    /// Labels with `Re μ = 0` exactly; excluded from `states`.
    pub boundary: Vec<StateLabel>,
    /// Normalizable solutions from the non-principal root `(−k − √A)/γ²`.
    pub additional_roots: Vec<SpectralValue>,
    /// Set when ε is above the shift for which the contour stays open.
    pub contour_warning: Option<String>,
}

/// Principal square root with ties on the imaginary axis sent to `Im ≥ 0`.
pub fn principal_sqrt(a: Complex64) -> Complex64 {
    if a.im == 0.0 {
        return if a.re >= 0.0 {
            Complex64::new(a.re.sqrt(), 0.0)
        } else {
            Complex64::new(0.0, (-a.re).sqrt())
        };
    }
    let r = a.sqrt();
    if r.re == 0.0 && r.im < 0.0 {
        -r
    } else {
        r
    }
}

fn a_value(p: &PotentialParams, label: StateLabel) -> (Complex64, Complex64) {
    let g2 = p.gamma2();
    let k = p.level_index(label);
    let s2 = p.s_param().shifted_square();
    let a = if k.im == 0.0 {
        Complex64::new(g2 * s2 + (1.0 - g2) * k.re * k.re, 0.0)
    } else {
        g2 * s2 + (1.0 - g2) * k * k
    };
    (k, a)
}

fn make_value(p: &PotentialParams, label: StateLabel, mu: Complex64) -> SpectralValue {
    let g4 = p.gamma2() * p.gamma2();
    SpectralValue {
        label,
        mu,
        energy: -g4 * mu * mu,
        normalizable: mu.re > 0.0,
    }
}

pub fn mu_nq(p: &PotentialParams, label: StateLabel) -> SpectralValue {
    let (k, a) = a_value(p, label);
    make_value(p, label, (-k + principal_sqrt(a)) / p.gamma2())
}

/// The other root of the quantization quadratic, `(−k − √A)/γ²`.
pub fn mu_nq_secondary(p: &PotentialParams, label: StateLabel) -> SpectralValue {
    let (k, a) = a_value(p, label);
    make_value(p, label, (-k - principal_sqrt(a)) / p.gamma2())
}

pub fn discriminant(p: &PotentialParams, label: StateLabel) -> Discriminant {
    let (_, a) = a_value(p, label);
    let regime = if a.im.abs() <= REGIME_TOL * a.norm().max(1.0) {
        if a.re >= 0.0 {
            Regime::NonNegative
        } else {
            Regime::Negative
        }
    } else {
        Regime::Complex
    };
    Discriminant { a_value: a, regime }
}

/// Labels with `Re μ > 0` for one quasi-parity, by direct enumeration.
pub fn enumerate_normalizable(p: &PotentialParams, q: QuasiParity) -> Vec<u32> {
    (0..=ENUMERATION_CAP)
        .filter(|&n| mu_nq(p, StateLabel::new(n, q)).normalizable)
        .collect()
}

/// Inclusive window `(n_lo, n_hi)` of normalizable states, or `None`.
///
/// The window comes from enumeration; [`closed_form_window`] gives the
/// analytic bounds for real λ as a cross-check.
pub fn count_window(p: &PotentialParams, q: QuasiParity) -> Option<(u32, u32)> {
    let ns = enumerate_normalizable(p, q);
    match (ns.first(), ns.last()) {
        (Some(&lo), Some(&hi)) => Some((lo, hi)),
        _ => None,
    }
}

/// Real bounds on n from the closed-form inequalities (real λ, γ² > 1).
///
/// Real s: `n` such that `−|s+½|·√(γ²/(γ²−1)) < k < |s+½|` (A ≥ 0) together
/// with `k < −|s+½|·√(γ²/(γ²−1))` (A < 0), i.e. `k < |s+½|` overall.
/// Critical s: only `k < 0`. Returns the interval of admissible real n
/// (lower bound clipped at 0) or `None` when the upper bound is negative.
pub fn closed_form_window(p: &PotentialParams, q: QuasiParity) -> Option<(f64, f64)> {
    let LambdaParam::Real(lambda) = p.lambda_param() else {
        return None;
    };
    if p.gamma2() <= 1.0 {
        return None;
    }
    let shift = q.sign() * (lambda - 0.5);
    let upper = match p.s_param() {
        SParam::Real(_) => -0.5 * (1.0 + shift - p.s_param().shifted_abs()),
        SParam::Critical { .. } => -0.5 * (1.0 + shift),
    };
    (upper >= 0.0).then_some((0.0, upper))
}

pub fn full_spectrum(p: &PotentialParams) -> Result<SpectrumReport> {
    let mut states = Vec::new();
    let mut boundary = Vec::new();
    let mut additional = Vec::new();
    for q in QuasiParity::BOTH {
        for n in 0..=ENUMERATION_CAP {
            let label = StateLabel::new(n, q);
            let sv = mu_nq(p, label);
            if sv.normalizable {
                states.push(sv);
            } else if sv.mu.re == 0.0 {
                boundary.push(label);
            }
            let second = mu_nq_secondary(p, label);
            if second.normalizable && (second.mu - sv.mu).norm() > 1e-12 * sv.mu.norm().max(1.0) {
                additional.push(second);
            }
        }
    }
    let count_plus = states.iter().filter(|s| s.label.q == QuasiParity::Plus).count();
    let count_minus = states.len() - count_plus;
    let verdict = classify(p, &states)?;
    let contour_warning = (!p.contour_is_open()).then(|| {
        format!(
            "epsilon = {} exceeds {:.6}; the shifted line does not reach infinity in u and the states are not normalizable on it",
            p.epsilon(),
            p.critical_epsilon().unwrap_or(f64::NAN)
        )
    });
    Ok(SpectrumReport {
        params: *p,
        states,
        verdict,
        count_plus,
        count_minus,
        boundary,
        additional_roots: additional,
        contour_warning,
    })
}

fn is_real_energy(e: Complex64) -> bool {
    e.im.abs() < (1e-9 * e.norm()).max(1e-9)
}

fn classify(p: &PotentialParams, states: &[SpectralValue]) -> Result<Verdict> {
    if states.is_empty() {
        return Ok(Verdict::Empty);
    }
    if states.iter().all(|s| is_real_energy(s.energy)) {
        return Ok(Verdict::Unbroken);
    }
    if p.lambda_param().is_real() {
        return Ok(Verdict::Complexified);
    }
    for s in states.iter().filter(|s| s.label.q == QuasiParity::Plus) {
        let partner = states
            .iter()
            .find(|t| t.label == StateLabel::new(s.label.n, QuasiParity::Minus));
        let defect = match partner {
            Some(t) => (s.energy.conj() - t.energy).norm(),
            None => f64::INFINITY,
        };
        if defect > 1e-9 * s.energy.norm().max(1.0) {
            return Err(Error::InconsistentPairing { n: s.label.n, defect });
        }
    }
    if states.iter().filter(|s| s.label.q == QuasiParity::Minus).count()
        != states.iter().filter(|s| s.label.q == QuasiParity::Plus).count()
    {
        return Err(Error::InconsistentPairing {
            n: 0,
            defect: f64::INFINITY,
        });
    }
    Ok(Verdict::BrokenPT)
}

/// `ω` from the quantization condition: `ω = 2n + 1 + μ + q(λ − 1/2)`.
pub fn quantization_omega(p: &PotentialParams, sv: &SpectralValue) -> Complex64 {
    p.level_index(sv.label) + sv.mu
}

pub fn hyper_params(p: &PotentialParams, sv: &SpectralValue, signs: SignChoices) -> HypergeometricParams {
    let omega = quantization_omega(p, sv);
    let lambda_half = p.lambda() - 0.5;
    let c = 1.0 + f64::from(signs.c) * sv.mu;
    let a_plus_b = c + f64::from(signs.lambda) * lambda_half;
    let a_minus_b = f64::from(signs.omega) * omega;
    HypergeometricParams {
        a: (a_plus_b + a_minus_b) / 2.0,
        b: (a_plus_b - a_minus_b) / 2.0,
        c,
        omega,
    }
}

/// `|ω² − [(s+½)² − (γ²−1)μ²]|`, zero when the quantization condition and
/// the hypergeometric parameter relations agree.
pub fn quantization_residual(p: &PotentialParams, sv: &SpectralValue) -> f64 {
    let omega = quantization_omega(p, sv);
    let rhs = p.s_param().shifted_square() - (p.gamma2() - 1.0) * sv.mu * sv.mu;
    (omega * omega - rhs).norm()
}

/// `|(γ²μ + k)² − A|`, zero for either root of the quantization quadratic.
pub fn quadratic_residual(p: &PotentialParams, sv: &SpectralValue) -> f64 {
    let (k, a) = a_value(p, sv.label);
    let lhs = p.gamma2() * sv.mu + k;
    (lhs * lhs - a).norm()
}

/// Pairs of normalizable states with opposite quasi-parity and the same `k`.
pub fn degeneracy_scan(p: &PotentialParams) -> Result<Vec<(StateLabel, StateLabel)>> {
    let LambdaParam::Real(_) = p.lambda_param() else {
        return Err(Error::InvalidInput("degeneracy scan needs real lambda".into()));
    };
    let plus = enumerate_normalizable(p, QuasiParity::Plus);
    let minus = enumerate_normalizable(p, QuasiParity::Minus);
    let mut pairs = Vec::new();
    for &n in &plus {
        let a = StateLabel::new(n, QuasiParity::Plus);
        for &m in &minus {
            let b = StateLabel::new(m, QuasiParity::Minus);
            if (p.level_index(a) - p.level_index(b)).norm() < 1e-12 {
                pairs.push((a, b));
            }
        }
    }
    Ok(pairs)
}

/// Bound-state energies of the Hermitian radial problem,
/// `μ_n = [−(2n+λ+½) + √((2n+λ+½)²(1−γ²) + γ²(s+½)²)]/γ²`, for `μ_n > 0`.
pub fn hermitian_levels(gamma: f64, s: f64, lambda: f64) -> Vec<(u32, f64, f64)> {
    let g2 = gamma * gamma;
    (0..=ENUMERATION_CAP)
        .map_while(|n| {
            let k = 2.0 * n as f64 + lambda + 0.5;
            let a = k * k * (1.0 - g2) + g2 * (s + 0.5).powi(2);
            if a < 0.0 {
                return None;
            }
            let mu = (-k + a.sqrt()) / g2;
            (mu > 0.0).then_some((n, mu, -g2 * g2 * mu * mu))
        })
        .collect()
}
