//! Bound-state wavefunctions.
//!
//! With `a = q(λ − 1/2)` the (unnormalized) eigenfunction of state `(n, q)` is
//!
//! ```text
//! ψ = (γ² + sinh²u)^{1/4} (cosh u)^{−2n−1−μ−a} (sinh u)^{1/2+a} P_n^{(a, −2n−1−μ−a)}(cosh 2u)
//! ```
//!
//! or, equivalently up to a constant factor,
//!
//! ```text
//! ψ = (γ² + sinh²u)^{1/4} (cosh u)^{−μ−a−1} (sinh u)^{1/2+a} P_n^{(μ, a)}(2 tanh²u − 1).
//! ```
//!
//! Both satisfy the Schrödinger equation; the residual tests check each
//! form independently. Complex powers are `exp(w · ln(·))` with the
//! logarithms of `cosh u`, `tanh u` and `r = cosh u/√(γ² + sinh²u)` kept
//! continuous along a grid.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::geometry::Geometry;
use crate::jacobi::{poly_with_derivs, JacobiSpec};
use crate::map::{map_points, map_table, uniform_grid, MapOptions, MapSample, MapTable};
use crate::params::{LambdaParam, PotentialParams, QuasiParity, SParam, StateLabel};
use crate::potential::{asymptotic_offset, potential_at};
use crate::quad::{adaptive_simpson, simpson};
use crate::spectrum::{mu_nq, SpectralValue};

/// Largest change of a tracked logarithm's imaginary part between samples.
const MAX_ARG_STEP: f64 = PI / 2.0;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum JacobiForm {
    /// Argument `cosh 2u`, parameters `(a, −2n−1−μ−a)`.
    #[default]
    CoshTwoU,
    /// Argument `2 tanh²u − 1`, parameters `(μ, a)`.
    TanhSquared,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaveSample {
    pub x: f64,
    pub psi: Complex64,
    pub psi_d: Complex64,
    pub psi_dd: Complex64,
}

#[derive(Debug, Clone, Serialize)]
pub struct WaveTable {
    pub label: StateLabel,
    pub energy: Complex64,
    pub mu: Complex64,
    pub form: JacobiForm,
    pub samples: Vec<WaveSample>,
}

/// Logarithms of `cosh u`, `tanh u` and `r` at a sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogTriple {
    pub ln_cosh: Complex64,
    pub ln_tanh: Complex64,
    pub ln_r: Complex64,
}

impl LogTriple {
    pub fn principal(geo: &Geometry) -> Self {
        Self {
            ln_cosh: geo.ln_cosh(),
            ln_tanh: geo.tanh.ln(),
            ln_r: geo.r.ln(),
        }
    }

    pub fn ln_sinh(&self) -> Complex64 {
        self.ln_cosh + self.ln_tanh
    }

    /// `ln(γ² + sinh²u)`.
    pub fn ln_d(&self) -> Complex64 {
        2.0 * (self.ln_cosh - self.ln_r)
    }

    /// Principal logarithms at `geo` moved onto the sheets nearest `prev`.
    pub fn tracked(geo: &Geometry, prev: &Self, x: f64) -> Result<Self> {
        let next = Self::principal(geo);
        Ok(Self {
            ln_cosh: follow(next.ln_cosh, prev.ln_cosh, x)?,
            ln_tanh: follow(next.ln_tanh, prev.ln_tanh, x)?,
            ln_r: follow(next.ln_r, prev.ln_r, x)?,
        })
    }
}

fn follow(mut l: Complex64, prev: Complex64, x: f64) -> Result<Complex64> {
    l.im += ((prev.im - l.im) / TAU).round() * TAU;
    if (l.im - prev.im).abs() > MAX_ARG_STEP {
        return Err(Error::BranchJump { x });
    }
    Ok(l)
}

/// Exponents and Jacobi coefficients for one state in one form.
#[derive(Debug, Clone)]
struct Ansatz {
    n: u32,
    form: JacobiForm,
    cosh_exp: Complex64,
    sinh_exp: Complex64,
    coeffs: Vec<Complex64>,
    reversed: Vec<Complex64>,
}

impl Ansatz {
    fn new(p: &PotentialParams, sv: &SpectralValue, form: JacobiForm) -> Result<Self> {
        if !sv.normalizable {
            return Err(Error::NotNormalizable {
                n: sv.label.n,
                q: sv.label.q,
            });
        }
        let n = sv.label.n;
        let a = p.lambda_param().shift().times(sv.label.q).value();
        let mu = sv.mu;
        let (cosh_exp, spec) = match form {
            JacobiForm::CoshTwoU => {
                let b = -(2.0 * n as f64 + 1.0) - mu - a;
                (b, JacobiSpec::new(n, a, b)?)
            }
            JacobiForm::TanhSquared => (-mu - a - 1.0, JacobiSpec::new(n, mu, a)?),
        };
        let coeffs = spec.coefficients();
        let reversed = coeffs.iter().rev().copied().collect();
        Ok(Self {
            n,
            form,
            cosh_exp,
            sinh_exp: 0.5 + a,
            coeffs,
            reversed,
        })
    }

    /// `ψ`, `dψ/du`, `d²ψ/du²`.
    fn eval_u(&self, geo: &Geometry, logs: &LogTriple, x: f64) -> Result<[Complex64; 3]> {
        if geo.tanh.norm() == 0.0 {
            return Err(Error::SingularPoint { x });
        }
        let t = geo.tanh;
        let coth = t.inv();
        let sech2 = geo.sech2();
        let csch2 = sech2 * coth * coth;
        let r2 = geo.r * geo.r;
        let sc_over_d = t * r2;

        let mut l0 = 0.25 * logs.ln_d() + self.cosh_exp * logs.ln_cosh + self.sinh_exp * logs.ln_sinh();
        let mut l1 = 0.5 * sc_over_d + self.cosh_exp * t + self.sinh_exp * coth;
        let mut l2 = 0.5 * (geo.inv_d() + 2.0 * geo.sinh2_over_d() - 2.0 * sc_over_d * sc_over_d)
            + self.cosh_exp * sech2
            - self.sinh_exp * csch2;

        // w = (1 − ζ)/2 through its logarithm and the ratios w'/w, w''/w
        let (ln_w, rho1, rho2) = match self.form {
            JacobiForm::CoshTwoU => (
                Complex64::new(0.0, PI) + 2.0 * logs.ln_sinh(),
                2.0 * coth,
                2.0 * (coth * coth + 1.0),
            ),
            JacobiForm::TanhSquared => (-2.0 * logs.ln_cosh, -2.0 * t, 4.0 * t * t - 2.0 * sech2),
        };
        let (q, q_u, q_uu) = if ln_w.re <= 0.0 {
            let w = ln_w.exp();
            let [pv, pw, pww] = poly_with_derivs(&self.coeffs, w);
            let w_u = w * rho1;
            (pv, pw * w_u, pww * w_u * w_u + pw * w * rho2)
        } else {
            // P = w^n Q(1/w); w^n goes into the exponent
            let v = (-ln_w).exp();
            let [qv, q1, q2] = poly_with_derivs(&self.reversed, v);
            let v_u = -v * rho1;
            let v_uu = v * (2.0 * rho1 * rho1 - rho2);
            let nf = self.n as f64;
            l0 += nf * ln_w;
            l1 += nf * rho1;
            l2 += nf * (rho2 - rho1 * rho1);
            (qv, q1 * v_u, q2 * v_u * v_u + q1 * v_uu)
        };
        let e = l0.exp();
        Ok([
            e * q,
            e * (l1 * q + q_u),
            e * ((l2 + l1 * l1) * q + 2.0 * l1 * q_u + q_uu),
        ])
    }

    fn sample(&self, p: &PotentialParams, m: &MapSample, logs: &LogTriple) -> Result<WaveSample> {
        let geo = m.geometry(p);
        let [psi, psi_u, psi_uu] = self.eval_u(&geo, logs, m.x)?;
        let g2 = p.gamma2();
        let up = m.dudx;
        let upp = up * g2 * (g2 - 1.0) * geo.sinh_over_sqrt_d() * geo.inv_d();
        Ok(WaveSample {
            x: m.x,
            psi,
            psi_d: up * psi_u,
            psi_dd: up * up * psi_uu + upp * psi_u,
        })
    }
}

/// `ψ_{nq}` at one mapped point, using principal logarithms (continuous along
/// the whole line while the contour is open).
pub fn psi_nq(p: &PotentialParams, sv: &SpectralValue, m: &MapSample) -> Result<WaveSample> {
    psi_nq_with(p, sv, m, JacobiForm::default())
}

pub fn psi_nq_with(p: &PotentialParams, sv: &SpectralValue, m: &MapSample, form: JacobiForm) -> Result<WaveSample> {
    let ansatz = Ansatz::new(p, sv, form)?;
    ansatz.sample(p, m, &LogTriple::principal(&m.geometry(p)))
}

/// `ψ_{nq}` over a map table, tracking the logarithms outward from the
/// sample closest to `x = 0`.
pub fn wave_table(p: &PotentialParams, sv: &SpectralValue, map: &MapTable, form: JacobiForm) -> Result<WaveTable> {
    let ansatz = Ansatz::new(p, sv, form)?;
    let samples = &map.samples;
    let mut out = Vec::with_capacity(samples.len());
    if let Some(start) = (0..samples.len()).min_by(|&i, &j| samples[i].x.abs().total_cmp(&samples[j].x.abs())) {
        let mut logs = vec![LogTriple::principal(&samples[start].geometry(p)); samples.len()];
        for i in start + 1..samples.len() {
            logs[i] = LogTriple::tracked(&samples[i].geometry(p), &logs[i - 1], samples[i].x)?;
        }
        for i in (0..start).rev() {
            logs[i] = LogTriple::tracked(&samples[i].geometry(p), &logs[i + 1], samples[i].x)?;
        }
        for (m, l) in samples.iter().zip(&logs) {
            out.push(ansatz.sample(p, m, l)?);
        }
    }
    Ok(WaveTable {
        label: sv.label,
        energy: sv.energy,
        mu: sv.mu,
        form,
        samples: out,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualReport {
    pub label: StateLabel,
    pub energy: Complex64,
    pub form: JacobiForm,
    pub step: f64,
    pub max_psi: f64,
    /// `max |−ψ″ + Vψ − Eψ| / max|ψ|` with ψ″ from 5-point differences.
    pub fd_residual: f64,
    /// Same with the analytic second derivative.
    pub analytic_residual: f64,
    /// `max |ψ″_fd − ψ″_analytic| / max|ψ|`.
    pub fd_vs_analytic: f64,
}

/// Schrödinger residual of the analytic state on a uniform map table.
pub fn schrodinger_residual(
    p: &PotentialParams,
    sv: &SpectralValue,
    map: &MapTable,
    form: JacobiForm,
) -> Result<ResidualReport> {
    residual_at_energy(p, sv, sv.energy, map, form)
}

/// As [`schrodinger_residual`] but testing against an arbitrary energy.
pub fn residual_at_energy(
    p: &PotentialParams,
    sv: &SpectralValue,
    energy: Complex64,
    map: &MapTable,
    form: JacobiForm,
) -> Result<ResidualReport> {
    let h = map
        .step()
        .ok_or_else(|| Error::InvalidGrid("residual needs at least 5 points".into()))?;
    if map.len() < 5 {
        return Err(Error::InvalidGrid("residual needs at least 5 points".into()));
    }
    let table = wave_table(p, sv, map, form)?;
    let s = &table.samples;
    let max_psi = s.iter().map(|w| w.psi.norm()).fold(0.0, f64::max);
    let (mut fd_res, mut an_res, mut diff) = (0.0_f64, 0.0_f64, 0.0_f64);
    for i in 2..s.len() - 2 {
        let v = potential_at(p, &map.samples[i])?.v;
        let fd = (-s[i - 2].psi + 16.0 * s[i - 1].psi - 30.0 * s[i].psi + 16.0 * s[i + 1].psi - s[i + 2].psi)
            / (12.0 * h * h);
        let rest = (v - energy) * s[i].psi;
        fd_res = fd_res.max((rest - fd).norm());
        an_res = an_res.max((rest - s[i].psi_dd).norm());
        diff = diff.max((fd - s[i].psi_dd).norm());
    }
    Ok(ResidualReport {
        label: sv.label,
        energy,
        form,
        step: h,
        max_psi,
        fd_residual: fd_res / max_psi,
        analytic_residual: an_res / max_psi,
        fd_vs_analytic: diff / max_psi,
    })
}

/// Least-squares slope of `ln|ψ|` over `x ∈ [x_from, x_to]`.
pub fn decay_slope(p: &PotentialParams, sv: &SpectralValue, x_from: f64, x_to: f64, count: usize) -> Result<f64> {
    let xs = uniform_grid(x_from, x_to, count)?;
    let map = map_points(p, &xs, &MapOptions::default())?;
    let table = wave_table(p, sv, &map, JacobiForm::default())?;
    let pts: Vec<(f64, f64)> = table.samples.iter().map(|w| (w.x, w.psi.norm().ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalizationConstant {
    pub value: f64,
}

fn radial_state(p: &PotentialParams, n: u32) -> Result<(f64, f64, f64)> {
    let (SParam::Real(_), LambdaParam::Real(lambda)) = (p.s_param(), p.lambda_param()) else {
        return Err(Error::InvalidInput("normalization needs real s and lambda".into()));
    };
    if p.epsilon() != 0.0 {
        return Err(Error::InvalidInput("normalization is defined for epsilon = 0".into()));
    }
    let sv = mu_nq(p, StateLabel::new(n, QuasiParity::Plus));
    if !sv.normalizable || sv.mu.im != 0.0 {
        return Err(Error::OutOfWindow { n });
    }
    Ok((p.gamma2(), lambda, sv.mu.re))
}

/// Closed-form normalization `𝒩_n` of the radial state `ψ̃_n`
/// (see [`radial_eigenfunction`]) with `𝒩_n² ∫₀^∞ ψ̃_n² dr = 1`.
pub fn hermitian_norm(p: &PotentialParams, n: u32) -> Result<NormalizationConstant> {
    let (g2, lambda, mu) = radial_state(p, n)?;
    let nf = n as f64;
    let ln_n2 = (2.0 * g2 * mu * (mu + lambda + 2.0 * nf + 0.5) / (mu * g2 + lambda + 2.0 * nf + 0.5)).ln()
        + ln_gamma(nf + 1.0)
        + ln_gamma(mu + lambda + nf + 0.5)
        - ln_gamma(mu + nf + 1.0)
        - ln_gamma(lambda + nf + 0.5);
    Ok(NormalizationConstant {
        value: (0.5 * ln_n2).exp(),
    })
}

/// Radial state as a function of real `u`:
/// `(γ² + sinh²u)^{1/4} sinh^λ u cosh^{−μ−λ−1/2} u P_n^{(μ, λ−1/2)}(2 tanh²u − 1)`.
pub fn radial_eigenfunction(p: &PotentialParams, n: u32, u: f64) -> Result<f64> {
    let (ln_mag, jac) = radial_log_parts(p, n, u)?;
    Ok(ln_mag.exp() * jac)
}

/// `(ln |prefactor|, Jacobi factor)` of [`radial_eigenfunction`]. The large
/// `ln cosh u` contributions are collected into `−μ ln cosh u`, so the
/// logarithm stays accurate for large `u`.
fn radial_log_parts(p: &PotentialParams, n: u32, u: f64) -> Result<(f64, f64)> {
    let (g2, lambda, mu) = radial_state(p, n)?;
    if u == 0.0 {
        return Ok((f64::NEG_INFINITY, 0.0));
    }
    let t = u.tanh();
    let ln_cosh = ln_cosh_real(u);
    // (γ² + sinh²u)/cosh²u = tanh²u + γ² sech²u
    let ln_d_rel = (t * t + g2 * (-2.0 * ln_cosh).exp()).ln();
    let spec = JacobiSpec::new(n, Complex64::new(mu, 0.0), Complex64::new(lambda - 0.5, 0.0))?;
    let jac = crate::jacobi::jacobi_eval(&spec, Complex64::new(2.0 * t * t - 1.0, 0.0))?.re;
    Ok((-mu * ln_cosh + 0.25 * ln_d_rel + lambda * t.ln(), jac))
}

/// `𝒩_n² ∫₀^∞ ψ̃_n² dr` by adaptive quadrature in `u` (`dr = √D du/(γ² cosh u)`).
pub fn hermitian_norm_quadrature(p: &PotentialParams, n: u32) -> Result<f64> {
    let norm = hermitian_norm(p, n)?.value;
    let (g2, _, mu) = radial_state(p, n)?;
    let integrand = |u: f64| {
        if u == 0.0 {
            return 0.0;
        }
        let Ok((ln_mag, jac)) = radial_log_parts(p, n, u) else {
            return f64::NAN;
        };
        let t = u.tanh();
        // √D / cosh u = √(tanh²u + γ² sech²u)
        let ln_ratio = 0.5 * (t * t + g2 * (-2.0 * ln_cosh_real(u)).exp()).ln();
        norm * norm * jac * jac * (2.0 * ln_mag + ln_ratio).exp() / g2
    };
    let u_max = 40.0 / mu + 5.0;
    let mut total = 0.0;
    let mut breaks = vec![0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0];
    while breaks[breaks.len() - 1] < u_max {
        let last = breaks[breaks.len() - 1];
        breaks.push(2.0 * last);
    }
    for w in breaks.windows(2) {
        total += adaptive_simpson(&integrand, w[0], w[1], 1e-14, 40);
    }
    Ok(total)
}

fn ln_cosh_real(u: f64) -> f64 {
    crate::geometry::ln_cosh(Complex64::new(u, 0.0)).re
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PseudoNorm {
    /// `∫ ψ² dx` over `[−x_max, x_max]`, no conjugation.
    pub value: Complex64,
    /// Estimated contribution of `|x| > x_max` from the exponential tails.
    pub tail: f64,
    pub x_max: f64,
}

/// Half-width beyond which `|ψ|²` has decayed by about `e^{−30}`.
pub fn pseudo_norm_extent(p: &PotentialParams, sv: &SpectralValue) -> f64 {
    let rate = p.gamma2() * sv.mu.re;
    (15.0 - asymptotic_offset(p).min(0.0) * sv.mu.re) / rate + 2.0
}

/// Pseudo-norm `∫ ψ² dx` by Simpson's rule on `count` points (odd).
pub fn pt_pseudo_norm(p: &PotentialParams, sv: &SpectralValue, x_max: f64, count: usize) -> Result<PseudoNorm> {
    if count.is_multiple_of(2) {
        return Err(Error::InvalidGrid("Simpson quadrature needs an odd point count".into()));
    }
    let map = map_table(p, -x_max, x_max, count)?;
    let table = wave_table(p, sv, &map, JacobiForm::default())?;
    let h = map.step().unwrap_or(0.0);
    let sq: Vec<Complex64> = table.samples.iter().map(|w| w.psi * w.psi).collect();
    let value = simpson(&sq, h).ok_or_else(|| Error::InvalidGrid("too few points".into()))?;
    let rate = 2.0 * p.gamma2() * sv.mu.re;
    let tail = (sq[0].norm() + sq[sq.len() - 1].norm()) / rate;
    if tail > 1e-8 * value.norm() {
        return Err(Error::TailTooLarge { tail, value });
    }
    Ok(PseudoNorm { value, tail, x_max })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::map_at;
    use crate::params::make_params;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn reference_set(lambda: Complex64) -> PotentialParams {
        make_params(1.75, c(8.1, 0.0), lambda, 0.3).unwrap()
    }

    fn state(p: &PotentialParams, n: u32, q: QuasiParity) -> SpectralValue {
        mu_nq(p, StateLabel::new(n, q))
    }

    #[test]
    fn residual_small_in_both_forms() {
        let p = reference_set(c(1.25, 0.0));
        let map = map_table(&p, -3.0, 3.0, 6001).unwrap();
        for form in [JacobiForm::CoshTwoU, JacobiForm::TanhSquared] {
            for (n, q) in [(0, QuasiParity::Plus), (2, QuasiParity::Minus)] {
                let r = schrodinger_residual(&p, &state(&p, n, q), &map, form).unwrap();
                assert!(r.fd_residual < 1e-6, "{r:?}");
                assert!(r.analytic_residual < 1e-9, "{r:?}");
            }
        }
    }

    #[test]
    fn corrupted_energy_fails_residual() {
        let p = reference_set(c(1.25, 0.0));
        let map = map_table(&p, -3.0, 3.0, 3001).unwrap();
        let sv = state(&p, 0, QuasiParity::Plus);
        let r = residual_at_energy(&p, &sv, sv.energy + 0.1, &map, JacobiForm::default()).unwrap();
        assert!(r.fd_residual > 0.05, "{r:?}");
    }

    #[test]
    fn forms_are_proportional() {
        let p = reference_set(c(0.5, 1.25));
        let map = map_table(&p, -4.0, 4.0, 401).unwrap();
        let sv = state(&p, 3, QuasiParity::Plus);
        let a = wave_table(&p, &sv, &map, JacobiForm::CoshTwoU).unwrap();
        let b = wave_table(&p, &sv, &map, JacobiForm::TanhSquared).unwrap();
        let ratio = a.samples[200].psi / b.samples[200].psi;
        for (x, y) in a.samples.iter().zip(&b.samples) {
            assert!((x.psi - ratio * y.psi).norm() < 1e-9 * x.psi.norm().max(1e-300) + 1e-14);
        }
    }

    #[test]
    fn single_point_matches_table() {
        let p = reference_set(c(1.25, 0.0));
        let map = map_table(&p, -6.0, 6.0, 121).unwrap();
        let sv = state(&p, 1, QuasiParity::Minus);
        let t = wave_table(&p, &sv, &map, JacobiForm::default()).unwrap();
        for (m, w) in map.samples.iter().zip(&t.samples) {
            let single = psi_nq(&p, &sv, m).unwrap();
            assert!((single.psi - w.psi).norm() <= 1e-13 * w.psi.norm());
        }
    }

    #[test]
    fn far_tail_does_not_overflow() {
        let p = reference_set(c(1.25, 0.0));
        let sv = state(&p, 4, QuasiParity::Minus);
        let w = psi_nq(&p, &sv, &map_at(&p, 40.0).unwrap()).unwrap();
        assert!(w.psi.re.is_finite() && w.psi.norm() < 1e-10);
    }

    #[test]
    fn decay_rate_matches_mu() {
        let p = reference_set(c(1.25, 0.0));
        for (n, q) in [(0, QuasiParity::Plus), (3, QuasiParity::Minus)] {
            let sv = state(&p, n, q);
            let slope = decay_slope(&p, &sv, 6.0, 11.0, 51).unwrap();
            let expected = -p.gamma2() * sv.mu.re;
            assert!((slope / expected - 1.0).abs() < 0.02, "{slope} vs {expected}");
        }
    }

    #[test]
    fn not_normalizable_rejected() {
        let p = reference_set(c(1.25, 0.0));
        let sv = state(&p, 6, QuasiParity::Plus);
        let m = map_at(&p, 0.5).unwrap();
        assert!(matches!(psi_nq(&p, &sv, &m), Err(Error::NotNormalizable { n: 6, .. })));
    }

    #[test]
    fn hermitian_normalization() {
        let p = PotentialParams::hermitian_radial(1.75, 8.1, 1.25).unwrap();
        for n in 0..4 {
            let q = hermitian_norm_quadrature(&p, n).unwrap();
            assert!((q - 1.0).abs() < 1e-8, "n = {n}: {q}");
        }
        assert_eq!(hermitian_norm(&p, 4).unwrap_err(), Error::OutOfWindow { n: 4 });
        assert!(hermitian_norm(&reference_set(c(1.25, 0.0)), 0).is_err());
    }

    #[test]
    fn poschl_teller_norm_at_gamma_one() {
        let p = PotentialParams::hermitian_radial(1.0, 6.0, 1.5).unwrap();
        for n in 0..2 {
            let mu = 6.0 - 1.5 - 2.0 * n as f64;
            let nf = n as f64;
            let expected = (2.0
                * mu
                * (ln_gamma(nf + 1.0) + ln_gamma(mu + 1.5 + nf + 0.5)
                    - ln_gamma(mu + nf + 1.0)
                    - ln_gamma(1.5 + nf + 0.5))
                .exp())
            .sqrt();
            assert!((hermitian_norm(&p, n).unwrap().value - expected).abs() < 1e-12 * expected);
            assert!((hermitian_norm_quadrature(&p, n).unwrap() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn radial_limit_matches_line_wavefunction() {
        let p = PotentialParams::hermitian_radial(1.75, 8.1, 1.25).unwrap();
        let xs = uniform_grid(0.05, 3.0, 60).unwrap();
        let map = map_points(&p, &xs, &MapOptions::default()).unwrap();
        for n in 0..3 {
            let sv = state(&p, n, QuasiParity::Plus);
            let t = wave_table(&p, &sv, &map, JacobiForm::TanhSquared).unwrap();
            for (m, w) in map.samples.iter().zip(&t.samples) {
                let reference = radial_eigenfunction(&p, n, m.u.re).unwrap();
                assert!(m.u.im.abs() < 1e-14);
                assert!((w.psi - reference).norm() < 1e-11 * reference.abs().max(1e-12));
            }
        }
    }

    #[test]
    fn gamma_one_gives_poschl_teller_eigenfunctions() {
        let (s, lambda, eps) = (6.0, 1.5, 0.3);
        let p = PotentialParams::poschl_teller_limit(c(s, 0.0), c(lambda, 0.0), eps).unwrap();
        let map = map_table(&p, -3.0, 3.0, 61).unwrap();
        for n in 0..2 {
            let sv = state(&p, n, QuasiParity::Plus);
            let t = wave_table(&p, &sv, &map, JacobiForm::default()).unwrap();
            let spec = JacobiSpec::new(n, c(lambda - 0.5, 0.0), c(-s - 0.5, 0.0)).unwrap();
            let reference: Vec<Complex64> = map
                .samples
                .iter()
                .map(|m| {
                    let u = c(m.x, eps);
                    u.cosh().powf(-s)
                        * u.sinh().powf(lambda)
                        * crate::jacobi::jacobi_eval(&spec, (2.0 * u).cosh()).unwrap()
                })
                .collect();
            let ratio = t.samples[30].psi / reference[30];
            for (w, r) in t.samples.iter().zip(&reference) {
                assert!((w.psi - ratio * r).norm() < 1e-11 * w.psi.norm().max(1e-12));
            }
        }
    }

    #[test]
    fn quasi_parity_equivalence() {
        let a = reference_set(c(0.0, 0.0));
        let b = reference_set(c(1.0, 0.0));
        assert!(a.mirrored() && !b.mirrored());
        let map = map_table(&a, -2.0, 2.0, 41).unwrap();
        // (q = +1, λ = 0) is stored as (q = −1, λ = 1)
        let sa = state(&a, 1, QuasiParity::Minus);
        let sb = state(&b, 1, QuasiParity::Minus);
        let ta = wave_table(&a, &sa, &map, JacobiForm::default()).unwrap();
        let tb = wave_table(&b, &sb, &map, JacobiForm::default()).unwrap();
        for (x, y) in ta.samples.iter().zip(&tb.samples) {
            assert!((x.psi - y.psi).norm() < 1e-14 * x.psi.norm().max(1.0));
        }
    }

    #[test]
    fn pseudo_norm_converges_and_scales() {
        let p = reference_set(c(1.25, 0.0));
        let sv = state(&p, 0, QuasiParity::Plus);
        let x = pseudo_norm_extent(&p, &sv);
        let a = pt_pseudo_norm(&p, &sv, x, 4001).unwrap();
        let b = pt_pseudo_norm(&p, &sv, x + 2.0, 4801).unwrap();
        assert!((a.value - b.value).norm() < 1e-8 * a.value.norm(), "{a:?} {b:?}");
        assert!(matches!(
            pt_pseudo_norm(&p, &sv, 0.5, 101),
            Err(Error::TailTooLarge { .. })
        ));

        let map = map_table(&p, -x, x, 4001).unwrap();
        let t = wave_table(&p, &sv, &map, JacobiForm::default()).unwrap();
        let k = c(0.3, -2.0);
        let scaled: Vec<Complex64> = t.samples.iter().map(|w| (k * w.psi) * (k * w.psi)).collect();
        let i = simpson(&scaled, map.step().unwrap()).unwrap();
        assert!((i - k * k * a.value).norm() < 1e-12 * i.norm());

        let pb = reference_set(c(0.5, 1.25));
        let sv = state(&pb, 1, QuasiParity::Minus);
        let v = pt_pseudo_norm(&pb, &sv, pseudo_norm_extent(&pb, &sv), 4001).unwrap();
        assert!(v.value.re.is_finite() && v.value.norm() > 0.0);
    }
}
