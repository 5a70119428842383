//! Jacobi polynomials with complex parameters.
//!
//! The polynomial is expanded in `w = (1 − z)/2`:
//!
//! ```text
//! P_n^{(α,β)}(z) = Σ_k c_k w^k,
//! c_k = (−n)_k (n+α+β+1)_k / k! · (α+k+1)_{n−k} / n!
//! ```
//!
//! This ordering has no Pochhammer symbol in a denominator, so it is finite
//! for every complex α and β. [`jacobi_eval`] expands about the nearer of
//! `z = ±1` and sums in double-double arithmetic, since the monomial
//! coefficients alternate and cancel once `|w|` approaches 1/2.

use num_complex::{Complex, Complex64};
use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::error::{Error, Result};

pub const MAX_DEGREE: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JacobiSpec {
    pub degree: u32,
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl JacobiSpec {
    pub fn new(degree: u32, alpha: Complex64, beta: Complex64) -> Result<Self> {
        if degree > MAX_DEGREE {
            return Err(Error::JacobiDegree(degree));
        }
        Ok(Self { degree, alpha, beta })
    }

    /// Coefficients `c_0..=c_n` of the expansion in `w = (1 − z)/2`.
    pub fn coefficients(&self) -> Vec<Complex64> {
        let n = self.degree as usize;
        let nf = self.degree as f64;
        let ab1 = nf + self.alpha + self.beta + 1.0;
        // tail[k] = (α+k+1)_{n−k}, built from the top down
        let mut tail = vec![Complex64::new(1.0, 0.0); n + 1];
        for k in (0..n).rev() {
            tail[k] = tail[k + 1] * (self.alpha + (k + 1) as f64);
        }
        let n_fact: f64 = (1..=n).map(|i| i as f64).product();
        let mut head = Complex64::new(1.0, 0.0);
        let mut out = Vec::with_capacity(n + 1);
        for (k, t) in tail.iter().enumerate() {
            out.push(head * t / n_fact);
            let kf = k as f64;
            head *= (kf - nf) * (ab1 + kf) / (kf + 1.0);
        }
        out
    }
}

/// `P_n^{(α,β)}(z)`, expanded about whichever of `z = ±1` is nearer.
pub fn jacobi_eval(spec: &JacobiSpec, z: Complex64) -> Result<Complex64> {
    if spec.degree > MAX_DEGREE {
        return Err(Error::JacobiDegree(spec.degree));
    }
    if z.re >= 0.0 {
        return Ok(sum_dd(spec.degree, spec.alpha, spec.beta, z));
    }
    // P_n^{(α,β)}(z) = (−1)^n P_n^{(β,α)}(−z)
    let sign = if spec.degree.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * sum_dd(spec.degree, spec.beta, spec.alpha, -z))
}

type ComplexDd = Complex<TwoFloat>;

fn dd(z: Complex64) -> ComplexDd {
    Complex::new(TwoFloat::from(z.re), TwoFloat::from(z.im))
}

fn dd_real(x: f64) -> ComplexDd {
    dd(Complex64::new(x, 0.0))
}

/// Double-double quotient by a double; the library's own division keeps
/// only the leading part.
fn div_dd(x: ComplexDd, d: f64) -> ComplexDd {
    let part = |v: TwoFloat| {
        let q1 = v.hi() / d;
        let r = v - TwoFloat::from(q1) * TwoFloat::from(d);
        TwoFloat::from(q1) + TwoFloat::from((r.hi() + r.lo()) / d)
    };
    Complex::new(part(x.re), part(x.im))
}

/// `Σ c_k w^k` with `w = (1 − z)/2`, coefficients and Horner in double-double.
fn sum_dd(degree: u32, alpha: Complex64, beta: Complex64, z: Complex64) -> Complex64 {
    let n = degree as usize;
    let (a, b) = (dd(alpha), dd(beta));
    let w = (dd_real(1.0) - dd(z)) * dd_real(0.5);
    let ab1 = a + b + dd_real(degree as f64 + 1.0);
    let mut tail = vec![dd_real(1.0); n + 1];
    for k in (0..n).rev() {
        tail[k] = tail[k + 1] * (a + dd_real((k + 1) as f64));
    }
    let mut head = dd_real(1.0);
    let mut coeffs = Vec::with_capacity(n + 1);
    for (k, t) in tail.iter().enumerate() {
        coeffs.push(head * t);
        let kf = k as f64;
        head = div_dd(head * dd_real(kf - degree as f64) * (ab1 + dd_real(kf)), kf + 1.0);
    }
    let acc = coeffs.iter().rev().fold(dd_real(0.0), |acc, &ck| acc * w + ck);
    let n_fact: f64 = (1..=n).map(|i| i as f64).product();
    Complex64::new(f64::from(acc.re), f64::from(acc.im)) / n_fact
}

/// Three-term recurrence in the degree; used as an independent check of
/// [`jacobi_eval`]. Fails for parameter values where `2n + α + β` hits 0 or 1
/// during the recursion.
pub fn jacobi_recurrence(spec: &JacobiSpec, z: Complex64) -> Complex64 {
    let (a, b) = (spec.alpha, spec.beta);
    let mut prev = Complex64::new(1.0, 0.0);
    if spec.degree == 0 {
        return prev;
    }
    let mut cur = (a + 1.0) + (a + b + 2.0) * (z - 1.0) / 2.0;
    for n in 2..=spec.degree {
        let nf = n as f64;
        let c = 2.0 * nf + a + b;
        let next = ((c - 1.0) * (c * (c - 2.0) * z + a * a - b * b) * cur
            - 2.0 * (nf + a - 1.0) * (nf + b - 1.0) * c * prev)
            / (2.0 * nf * (nf + a + b) * (c - 2.0));
        prev = cur;
        cur = next;
    }
    cur
}

/// `dP_n^{(α,β)}/dz = (n+α+β+1)/2 · P_{n−1}^{(α+1,β+1)}(z)`.
pub fn jacobi_derivative(spec: &JacobiSpec, z: Complex64) -> Result<Complex64> {
    if spec.degree == 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let lower = JacobiSpec::new(spec.degree - 1, spec.alpha + 1.0, spec.beta + 1.0)?;
    Ok((spec.degree as f64 + spec.alpha + spec.beta + 1.0) / 2.0 * jacobi_eval(&lower, z)?)
}

/// Value and first two derivatives of `Σ c_k t^k`.
pub(crate) fn poly_with_derivs(c: &[Complex64], t: Complex64) -> [Complex64; 3] {
    let zero = Complex64::new(0.0, 0.0);
    let (mut p, mut d1, mut d2) = (zero, zero, zero);
    for &ck in c.iter().rev() {
        d2 = d2 * t + 2.0 * d1;
        d1 = d1 * t + p;
        p = p * t + ck;
    }
    [p, d1, d2]
}
