//! Supersymmetric factorization and the fermionic partner potentials.
//!
//! With the ground state `(0, q)` as factorization state,
//!
//! ```text
//! W = γ²(γ²−1) sinh u / (2 D^{3/2}) + γ²μ₀ sinh u / √D − γ²(1/2 + a) / (√D sinh u)
//! V₋ = W² − W′ + E₀   (= V for either q)
//! V₊ = W² + W′ + E₀ = −A/D + B coth²u/D + C/D² − (7/4)γ⁶(γ²−1)²/D³
//! ```
//!
//! where `D = γ² + sinh²u` and `a = q(λ − 1/2)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::map::{mirror_pairs, MapSample, MapTable};
use crate::params::{PotentialParams, QuasiParity, StateLabel};
use crate::potential::{potential_at, SINGULAR_SINH};
use crate::spectrum::{full_spectrum, mu_nq};
use crate::verify::{oracle_agrees, spectrum_sweep, EigenResult, ShootingProblem, SweepReport};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SusyFactorization {
    pub q: QuasiParity,
    pub factorization_energy: Complex64,
    pub mu0: Complex64,
    /// `q(λ − 1/2)`.
    pub shift: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartnerCoefficients {
    pub a_q: Complex64,
    pub b_q: Complex64,
    pub c_q: Complex64,
}

pub fn factorization(p: &PotentialParams, q: QuasiParity) -> Result<SusyFactorization> {
    let sv = mu_nq(p, StateLabel::new(0, q));
    if !sv.normalizable {
        return Err(Error::NotNormalizable { n: 0, q });
    }
    Ok(SusyFactorization {
        q,
        factorization_energy: sv.energy,
        mu0: sv.mu,
        shift: p.lambda_param().shift().times(q).value(),
    })
}

fn check_singular(coefficient: Complex64, m: &MapSample, p: &PotentialParams) -> Result<()> {
    if coefficient.norm() != 0.0 && m.geometry(p).sinh_norm() < SINGULAR_SINH {
        return Err(Error::SingularPoint { x: m.x });
    }
    Ok(())
}

/// `W` and `dW/dx` at a mapped point.
pub fn superpotential_with_derivative(
    p: &PotentialParams,
    f: &SusyFactorization,
    m: &MapSample,
) -> Result<(Complex64, Complex64)> {
    let t = 0.5 + f.shift;
    check_singular(t, m, p)?;
    let g2 = p.gamma2();
    let geo = m.geometry(p);
    let y = geo.sinh_over_sqrt_d();
    let inv_d = geo.inv_d();
    let y2 = y * y;
    let sech2 = geo.sech2();
    let tanh = geo.tanh;
    let r = geo.r;

    let mut w = g2 * f.mu0 * y;
    let mut w_u = g2 * f.mu0 * r * (1.0 - y2);
    if g2 != 1.0 {
        w += g2 * (g2 - 1.0) / 2.0 * y * inv_d;
        w_u += g2 * (g2 - 1.0) / 2.0 * r * inv_d * (1.0 - 3.0 * y2);
    }
    if t.norm() != 0.0 {
        // 1/(√D sinh u) = sech² r / tanh
        w -= g2 * t * sech2 * r / tanh;
        w_u += g2 * t * (r * inv_d + r * sech2 / (tanh * tanh));
    }
    Ok((w, m.dudx * w_u))
}

pub fn superpotential_at(p: &PotentialParams, q: QuasiParity, m: &MapSample) -> Result<Complex64> {
    let f = factorization(p, q)?;
    Ok(superpotential_with_derivative(p, &f, m)?.0)
}

pub fn partner_coeffs(p: &PotentialParams, q: QuasiParity) -> Result<PartnerCoefficients> {
    let f = factorization(p, q)?;
    Ok(coefficients_for(p, &f))
}

fn coefficients_for(p: &PotentialParams, f: &SusyFactorization) -> PartnerCoefficients {
    let g2 = p.gamma2();
    let g4 = g2 * g2;
    let (s_coupling, l_coupling) = crate::params::coupling_coefficients(p);
    // q(2λ − 1) = 2a
    let two_a = 2.0 * f.shift;
    PartnerCoefficients {
        a_q: g4 * (s_coupling + g2 - 2.0 - 2.0 * g2 * f.mu0 - two_a),
        b_q: g4 * (l_coupling + 1.0 + two_a),
        c_q: g4 * (g2 - 1.0) * ((11.0 * g2 - 9.0) / 4.0 - 2.0 * g2 * f.mu0 - two_a),
    }
}

/// `V₊^{(q)}` from the closed-form coefficients.
pub fn partner_potential_at(p: &PotentialParams, q: QuasiParity, m: &MapSample) -> Result<Complex64> {
    let c = partner_coeffs(p, q)?;
    partner_from_coefficients(p, &c, m)
}

fn partner_from_coefficients(p: &PotentialParams, c: &PartnerCoefficients, m: &MapSample) -> Result<Complex64> {
    check_singular(c.b_q, m, p)?;
    let g2 = p.gamma2();
    let geo = m.geometry(p);
    let inv_d = geo.inv_d();
    let mut v =
        -c.a_q * inv_d + c.c_q * inv_d * inv_d - 1.75 * g2 * g2 * g2 * (g2 - 1.0).powi(2) * inv_d * inv_d * inv_d;
    if c.b_q.norm() != 0.0 {
        v += c.b_q * geo.coth2() * inv_d;
    }
    Ok(v)
}

/// Pointwise defects of the factorization over a table:
/// `max |W² − W′ + E₀ − V|` and `max |W² + W′ + E₀ − V₊|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityDefects {
    pub q: QuasiParity,
    pub bosonic: f64,
    pub partner: f64,
}

pub fn identity_defects(p: &PotentialParams, q: QuasiParity, map: &MapTable) -> Result<IdentityDefects> {
    let f = factorization(p, q)?;
    let c = coefficients_for(p, &f);
    let (mut bosonic, mut partner) = (0.0_f64, 0.0_f64);
    for m in &map.samples {
        let (w, wd) = superpotential_with_derivative(p, &f, m)?;
        let v = potential_at(p, m)?.v;
        let vp = partner_from_coefficients(p, &c, m)?;
        bosonic = bosonic.max((w * w - wd + f.factorization_energy - v).norm());
        partner = partner.max((w * w + wd + f.factorization_energy - vp).norm());
    }
    Ok(IdentityDefects { q, bosonic, partner })
}

/// `V₊^{(q)}` on every sample of a table.
pub fn partner_table(p: &PotentialParams, q: QuasiParity, map: &MapTable) -> Result<Vec<Complex64>> {
    let c = partner_coeffs(p, q)?;
    map.samples
        .iter()
        .map(|m| partner_from_coefficients(p, &c, m))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartnerPtReport {
    /// `max |V₊^{(+1)}(−x) − conj V₊^{(+1)}(x)|`; `None` if `(0, +1)` is not normalizable.
    pub defect_plus: Option<f64>,
    pub defect_minus: Option<f64>,
    /// `max |V₊^{(+1)}(x) − conj V₊^{(−1)}(−x)|`.
    pub cross_defect: Option<f64>,
}

pub fn partner_pt_check(p: &PotentialParams, map: &MapTable) -> Result<PartnerPtReport> {
    let xs: Vec<f64> = map.xs().collect();
    let pairs = mirror_pairs(&xs)?;
    let plus = partner_table(p, QuasiParity::Plus, map).ok();
    let minus = partner_table(p, QuasiParity::Minus, map).ok();
    let own = |v: &Vec<Complex64>| {
        pairs
            .iter()
            .map(|&(i, j)| (v[j] - v[i].conj()).norm())
            .fold(0.0, f64::max)
    };
    let cross = match (&plus, &minus) {
        (Some(a), Some(b)) => Some(
            pairs
                .iter()
                .map(|&(i, j)| (a[i] - b[j].conj()).norm())
                .fold(0.0, f64::max),
        ),
        _ => None,
    };
    Ok(PartnerPtReport {
        defect_plus: plus.as_ref().map(own),
        defect_minus: minus.as_ref().map(own),
        cross_defect: cross,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsospectralityReport {
    pub q: QuasiParity,
    pub removed_energy: Complex64,
    /// Distinct analytic energies expected in the partner spectrum.
    pub expected: Vec<Complex64>,
    pub sweep: SweepReport,
    /// Expected energies not reproduced by any converged seed.
    pub missing: Vec<Complex64>,
    /// Converged eigenvalues that are not expected (including the removed level).
    pub unexpected: Vec<EigenResult>,
    pub passed: bool,
}

/// Shoot on `V₊^{(q)}` from every analytic level and compare with the
/// analytic spectrum minus one copy of `E_{0,q}`.
///
/// Energies are counted with the number of labels `(n, q′)` sharing them.
/// Where levels of opposite quasi-parity coincide (λ = 1/2) the level has
/// multiplicity two but a single eigenfunction; the factorization removes
/// that eigenfunction and the level survives once in the partner spectrum.
pub fn partner_isospectrality(p: &PotentialParams, q: QuasiParity, step: f64) -> Result<IsospectralityReport> {
    let f = factorization(p, q)?;
    let spectrum = full_spectrum(p)?;
    let e0 = f.factorization_energy;
    let same = |a: Complex64, b: Complex64| (a - b).norm() < 1e-9 * b.norm().max(1.0);
    let mut levels: Vec<(Complex64, usize)> = Vec::new();
    for s in &spectrum.states {
        match levels.iter_mut().find(|(e, _)| same(*e, s.energy)) {
            Some(level) => level.1 += 1,
            None => levels.push((s.energy, 1)),
        }
    }
    if let Some(level) = levels.iter_mut().find(|(e, _)| same(*e, e0)) {
        level.1 -= 1;
    }
    let expected: Vec<Complex64> = levels.iter().filter(|l| l.1 > 0).map(|l| l.0).collect();
    let seeds: Vec<Complex64> = spectrum.states.iter().map(|s| s.energy * 1.01).collect();
    let problem = ShootingProblem::for_partner(p, q, step)?;
    let sweep = spectrum_sweep(&problem, &seeds);
    let missing: Vec<Complex64> = expected
        .iter()
        .copied()
        .filter(|&e| !sweep.eigenvalues.iter().any(|r| oracle_agrees(r.energy, e)))
        .collect();
    let unexpected: Vec<EigenResult> = sweep
        .eigenvalues
        .iter()
        .copied()
        .filter(|r| !expected.iter().any(|&e| oracle_agrees(r.energy, e)))
        .collect();
    let passed = missing.is_empty() && unexpected.is_empty();
    Ok(IsospectralityReport {
        q,
        removed_energy: e0,
        expected,
        sweep,
        missing,
        unexpected,
        passed,
    })
}
