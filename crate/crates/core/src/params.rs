//! Potential parameters and their reality classification.
//!
//! The potential is PT-symmetric only when γ², s(s+1) and λ(λ−1) are real.
//! That restricts s and λ to two branches each: the real axis, or the
//! critical lines s = −1/2 + iσ and λ = 1/2 + il. Both are stored as tagged
//! enums so the reality of the couplings holds by construction.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used to decide whether a complex input sits on a branch.
const BRANCH_TOL: f64 = 1e-14;

/// The `s` parameter: real, or on the line `−1/2 + iσ` with `σ > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SParam {
    Real(f64),
    Critical { sigma: f64 },
}

/// The `λ` parameter: real with `λ ≥ 1/2`, or `1/2 + il` with `l > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LambdaParam {
    Real(f64),
    Critical { l: f64 },
}

impl SParam {
    pub fn value(&self) -> Complex64 {
        match *self {
            SParam::Real(s) => Complex64::new(s, 0.0),
            SParam::Critical { sigma } => Complex64::new(-0.5, sigma),
        }
    }

    /// `(s + 1/2)²`, which is real on both branches.
    pub fn shifted_square(&self) -> f64 {
        match *self {
            SParam::Real(s) => (s + 0.5) * (s + 0.5),
            SParam::Critical { sigma } => -sigma * sigma,
        }
    }

    /// `s(s + 1)`.
    pub fn coupling(&self) -> f64 {
        match *self {
            SParam::Real(s) => s * (s + 1.0),
            SParam::Critical { sigma } => -0.25 - sigma * sigma,
        }
    }

    /// `|s + 1/2|`, which equals `σ` on the critical line.
    pub fn shifted_abs(&self) -> f64 {
        match *self {
            SParam::Real(s) => (s + 0.5).abs(),
            SParam::Critical { sigma } => sigma.abs(),
        }
    }
}

impl LambdaParam {
    pub fn value(&self) -> Complex64 {
        match *self {
            LambdaParam::Real(l) => Complex64::new(l, 0.0),
            LambdaParam::Critical { l } => Complex64::new(0.5, l),
        }
    }

    /// `λ(λ − 1)`.
    pub fn coupling(&self) -> f64 {
        match *self {
            LambdaParam::Real(l) => l * (l - 1.0),
            LambdaParam::Critical { l } => -0.25 - l * l,
        }
    }

    /// `λ − 1/2`, kept real on the real branch.
    pub fn shift(&self) -> LambdaShift {
        match *self {
            LambdaParam::Real(l) => LambdaShift::Real(l - 0.5),
            LambdaParam::Critical { l } => LambdaShift::Imaginary(l),
        }
    }

    pub fn is_real(&self) -> bool {
        matches!(self, LambdaParam::Real(_))
    }
}

/// `λ − 1/2`, which is either real or purely imaginary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaShift {
    Real(f64),
    Imaginary(f64),
}

impl LambdaShift {
    pub fn value(&self) -> Complex64 {
        match *self {
            LambdaShift::Real(r) => Complex64::new(r, 0.0),
            LambdaShift::Imaginary(i) => Complex64::new(0.0, i),
        }
    }

    /// `q(λ − 1/2)`.
    pub fn times(&self, q: QuasiParity) -> LambdaShift {
        let sign = q.sign();
        match *self {
            LambdaShift::Real(r) => LambdaShift::Real(sign * r),
            LambdaShift::Imaginary(i) => LambdaShift::Imaginary(sign * i),
        }
    }
}

/// Which domain the parameters describe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Domain {
    /// Full real line with the imaginary shift `x + iε`.
    Line,
    /// Hermitian radial reference problem on `r > 0` (ε = 0).
    HalfLine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum QuasiParity {
    Plus,
    Minus,
}

impl QuasiParity {
    pub const BOTH: [QuasiParity; 2] = [QuasiParity::Plus, QuasiParity::Minus];

    pub fn sign(self) -> f64 {
        match self {
            QuasiParity::Plus => 1.0,
            QuasiParity::Minus => -1.0,
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            QuasiParity::Plus => 1,
            QuasiParity::Minus => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            QuasiParity::Plus => QuasiParity::Minus,
            QuasiParity::Minus => QuasiParity::Plus,
        }
    }

    pub fn from_i32(q: i32) -> Result<Self> {
        match q {
            1 => Ok(QuasiParity::Plus),
            -1 => Ok(QuasiParity::Minus),
            other => Err(Error::InvalidInput(format!(
                "quasi-parity must be +1 or -1, got {other}"
            ))),
        }
    }
}

impl fmt::Display for QuasiParity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.as_i32())
    }
}

/// Principal quantum number and quasi-parity of a bound state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StateLabel {
    pub n: u32,
    pub q: QuasiParity,
}

impl StateLabel {
    pub fn new(n: u32, q: QuasiParity) -> Self {
        Self { n, q }
    }
}

impl fmt::Display for StateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.n, self.q)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhaseTag {
    UnbrokenCandidate,
    BrokenCandidate,
}

/// Validated parameter set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialParams {
    gamma: f64,
    s: SParam,
    lambda: LambdaParam,
    epsilon: f64,
    domain: Domain,
    /// Set when a real λ < 1/2 (or l < 0) was mirrored; state labels then
    /// refer to the canonical λ, i.e. q is flipped relative to the input.
    mirrored: bool,
}

/// Validate and canonicalise a parameter set for the PT-symmetric line problem.
pub fn make_params(gamma: f64, s: Complex64, lambda: Complex64, epsilon: f64) -> Result<PotentialParams> {
    if !(gamma.is_finite() && gamma > 0.0) || gamma == 1.0 {
        return Err(Error::InvalidGamma(gamma));
    }
    build(gamma, s, lambda, epsilon, Domain::Line)
}

fn build(gamma: f64, s: Complex64, lambda: Complex64, epsilon: f64, domain: Domain) -> Result<PotentialParams> {
    if !(epsilon.is_finite() && epsilon >= 0.0) {
        return Err(Error::InvalidEpsilon(epsilon));
    }
    let s = classify_s(s)?;
    let (lambda, mirrored) = classify_lambda(lambda)?;
    if domain == Domain::Line && epsilon == 0.0 && lambda.coupling() != 0.0 {
        return Err(Error::SingularOnAxis);
    }
    Ok(PotentialParams {
        gamma,
        s,
        lambda,
        epsilon,
        domain,
        mirrored,
    })
}

fn classify_s(s: Complex64) -> Result<SParam> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::InvalidBranch { param: "s", value: s });
    }
    if s.im == 0.0 {
        Ok(SParam::Real(s.re))
    } else if (s.re + 0.5).abs() <= BRANCH_TOL {
        Ok(SParam::Critical { sigma: s.im.abs() })
    } else {
        Err(Error::InvalidBranch { param: "s", value: s })
    }
}

fn classify_lambda(lambda: Complex64) -> Result<(LambdaParam, bool)> {
    if !(lambda.re.is_finite() && lambda.im.is_finite()) {
        return Err(Error::InvalidBranch {
            param: "lambda",
            value: lambda,
        });
    }
    if lambda.im == 0.0 {
        if lambda.re < 0.5 {
            Ok((LambdaParam::Real(1.0 - lambda.re), true))
        } else {
            Ok((LambdaParam::Real(lambda.re), false))
        }
    } else if (lambda.re - 0.5).abs() <= BRANCH_TOL {
        Ok((LambdaParam::Critical { l: lambda.im.abs() }, lambda.im < 0.0))
    } else {
        Err(Error::InvalidBranch {
            param: "lambda",
            value: lambda,
        })
    }
}

impl PotentialParams {
    /// γ = 1 reference limit, where the map is the identity and the
    /// potential is of generalised Pöschl–Teller form.
    pub fn poschl_teller_limit(s: Complex64, lambda: Complex64, epsilon: f64) -> Result<Self> {
        build(1.0, s, lambda, epsilon, Domain::Line)
    }

    /// Hermitian radial problem on `r > 0` (ε = 0, real s and λ).
    pub fn hermitian_radial(gamma: f64, s: f64, lambda: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::InvalidGamma(gamma));
        }
        if lambda < 0.5 {
            return Err(Error::InvalidInput(format!(
                "radial problem needs lambda >= 1/2, got {lambda}"
            )));
        }
        build(
            gamma,
            Complex64::new(s, 0.0),
            Complex64::new(lambda, 0.0),
            0.0,
            Domain::HalfLine,
        )
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn gamma2(&self) -> f64 {
        self.gamma * self.gamma
    }

    pub fn s(&self) -> Complex64 {
        self.s.value()
    }

    pub fn s_param(&self) -> SParam {
        self.s
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda.value()
    }

    pub fn lambda_param(&self) -> LambdaParam {
        self.lambda
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn mirrored(&self) -> bool {
        self.mirrored
    }

    /// γ² < 1 changes the character of the map; results there are not
    /// covered by the acceptance checks.
    pub fn is_experimental(&self) -> bool {
        self.gamma < 1.0
    }

    /// Largest shift for which the line `x + iε` maps to a contour that runs
    /// off to infinity in `u`. Above it the line passes over the branch
    /// points of the map and the potential no longer decays. `None` for γ ≤ 1.
    pub fn critical_epsilon(&self) -> Option<f64> {
        (self.gamma > 1.0).then(|| std::f64::consts::FRAC_PI_2 / self.gamma2())
    }

    /// True when the shift is below [`Self::critical_epsilon`] (or γ ≤ 1).
    pub fn contour_is_open(&self) -> bool {
        self.critical_epsilon().is_none_or(|e| self.epsilon < e)
    }

    /// Same parameters with a different imaginary shift.
    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        build(self.gamma, self.s(), self.lambda(), epsilon, self.domain).map(|p| Self {
            mirrored: self.mirrored,
            ..p
        })
    }

    /// `2n + 1 + q(λ − 1/2)`, the combination every eigenvalue depends on.
    pub fn level_index(&self, label: StateLabel) -> Complex64 {
        let base = 2.0 * label.n as f64 + 1.0;
        match self.lambda.shift().times(label.q) {
            LambdaShift::Real(r) => Complex64::new(base + r, 0.0),
            LambdaShift::Imaginary(i) => Complex64::new(base, i),
        }
    }
}

/// The two real coupling combinations `s(s+1)` and `λ(λ−1)`.
pub fn coupling_coefficients(p: &PotentialParams) -> (f64, f64) {
    (p.s.coupling(), p.lambda.coupling())
}

/// Parameter-regime tag; the definitive verdict comes from the spectrum.
pub fn pt_phase(p: &PotentialParams) -> PhaseTag {
    match p.lambda {
        LambdaParam::Critical { l } if l != 0.0 => PhaseTag::BrokenCandidate,
        _ => PhaseTag::UnbrokenCandidate,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn accepts_reference_parameter_sets() {
        let p = make_params(1.75, c(8.1, 0.0), c(1.25, 0.0), 0.3).unwrap();
        assert_eq!(p.lambda_param(), LambdaParam::Real(1.25));
        let p = make_params(1.75, c(8.1, 0.0), c(0.5, 1.25), 0.3).unwrap();
        assert_eq!(p.lambda_param(), LambdaParam::Critical { l: 1.25 });
    }

    #[test]
    fn rejects_off_branch_values() {
        let err = make_params(1.75, c(0.3, 0.5), c(1.0, 0.0), 0.3).unwrap_err();
        assert_eq!(err.code(), "InvalidBranch");
        let err = make_params(1.75, c(8.1, 0.0), c(0.7, 0.2), 0.3).unwrap_err();
        assert_eq!(err.code(), "InvalidBranch");
    }

    #[test]
    fn rejects_bad_gamma_and_axis_singularity() {
        for g in [0.0, -1.0, 1.0, f64::NAN] {
            assert_eq!(
                make_params(g, c(8.1, 0.0), c(1.25, 0.0), 0.3).unwrap_err().code(),
                "InvalidGamma"
            );
        }
        assert_eq!(
            make_params(1.75, c(8.1, 0.0), c(1.25, 0.0), 0.0).unwrap_err(),
            Error::SingularOnAxis
        );
        // λ = 1 has no singular term, so ε = 0 is allowed
        assert!(make_params(1.75, c(8.1, 0.0), c(1.0, 0.0), 0.0).is_ok());
        assert_eq!(
            make_params(1.75, c(8.1, 0.0), c(1.0, 0.0), -0.1).unwrap_err().code(),
            "InvalidEpsilon"
        );
    }

    #[test]
    fn couplings_match_complex_arithmetic() {
        let cases = [
            (c(8.1, 0.0), c(1.25, 0.0)),
            (c(-0.5, 2.0), c(0.5, 1.25)),
            (c(3.0, 0.0), c(0.5, 0.3)),
        ];
        for (s, l) in cases {
            let p = make_params(1.75, s, l, 0.3).unwrap();
            let (c1, c2) = coupling_coefficients(&p);
            let s_c = p.s() * (p.s() + 1.0);
            let l_c = p.lambda() * (p.lambda() - 1.0);
            assert!(s_c.im.abs() < 1e-14 && l_c.im.abs() < 1e-14);
            assert!((s_c.re - c1).abs() < 1e-12);
            assert!((l_c.re - c2).abs() < 1e-12);
        }
        let p = make_params(1.75, c(8.1, 0.0), c(0.5, 1.25), 0.3).unwrap();
        let (c1, c2) = coupling_coefficients(&p);
        assert!((c1 - 73.71).abs() < 1e-12);
        assert_eq!(c2, -1.8125);
        let p = make_params(1.75, c(-0.5, 2.0), c(1.25, 0.0), 0.3).unwrap();
        assert_eq!(coupling_coefficients(&p).0, -4.25);
    }

    #[test]
    fn canonicalisation() {
        let p = make_params(1.75, c(8.1, 0.0), c(0.0, 0.0), 0.0).unwrap();
        assert_eq!(p.lambda_param(), LambdaParam::Real(1.0));
        assert!(p.mirrored());
        let p = make_params(1.75, c(-0.5, -2.0), c(0.5, -1.25), 0.3).unwrap();
        assert_eq!(p.s_param(), SParam::Critical { sigma: 2.0 });
        assert_eq!(p.lambda_param(), LambdaParam::Critical { l: 1.25 });
        // idempotent
        let q = make_params(p.gamma(), p.s(), p.lambda(), p.epsilon()).unwrap();
        assert_eq!(q.s_param(), p.s_param());
        assert_eq!(q.lambda_param(), p.lambda_param());
    }

    #[test]
    fn phase_tags() {
        let tag = |l: Complex64| pt_phase(&make_params(1.75, c(8.1, 0.0), l, 0.3).unwrap());
        assert_eq!(tag(c(1.25, 0.0)), PhaseTag::UnbrokenCandidate);
        assert_eq!(tag(c(0.5, 1.25)), PhaseTag::BrokenCandidate);
        assert_eq!(tag(c(0.5, 0.0)), PhaseTag::UnbrokenCandidate);
    }

    #[test]
    fn level_index_combination() {
        let p = make_params(1.75, c(8.1, 0.0), c(1.25, 0.0), 0.3).unwrap();
        assert_eq!(p.level_index(StateLabel::new(2, QuasiParity::Minus)), c(4.25, 0.0));
        let p = make_params(1.75, c(8.1, 0.0), c(0.5, 1.25), 0.3).unwrap();
        assert_eq!(p.level_index(StateLabel::new(1, QuasiParity::Minus)), c(3.0, -1.25));
    }

    #[test]
    fn reference_constructors() {
        assert!(PotentialParams::poschl_teller_limit(c(8.1, 0.0), c(1.25, 0.0), 0.3).is_ok());
        let p = PotentialParams::hermitian_radial(1.75, 8.1, 1.25).unwrap();
        assert_eq!(p.domain(), Domain::HalfLine);
        assert_eq!(p.epsilon(), 0.0);
    }
}
