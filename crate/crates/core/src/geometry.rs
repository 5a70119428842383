//! Overflow-safe hyperbolic quantities at a mapped point.
//!
//! Every expression in the potential, the wavefunctions and the
//! superpotential is a rational function of `sinh u`, `cosh u` and
//! `√(γ² + sinh²u)`. Far from the origin these overflow long before the
//! physical quantities do, so everything here is written in terms of
//! `tanh u`, `sech u` and the ratio `r = cosh u / √(γ² + sinh²u)`, which
//! stay bounded. `r` carries the branch of the square root and equals
//! `(du/dx) / γ²`.

use num_complex::Complex64;

/// Beyond this |Re u| the exponential forms are used.
const SWITCH: f64 = 15.0;

#[derive(Debug, Clone, Copy)]
pub struct Geometry {
    pub u: Complex64,
    pub gamma2: f64,
    pub tanh: Complex64,
    pub sech: Complex64,
    /// `cosh u / √(γ² + sinh²u)` on the tracked branch.
    pub r: Complex64,
}

impl Geometry {
    pub fn new(gamma2: f64, u: Complex64, dudx: Complex64) -> Self {
        let (tanh, sech) = tanh_sech(u);
        Self {
            u,
            gamma2,
            tanh,
            sech,
            r: dudx / gamma2,
        }
    }

    pub fn sech2(&self) -> Complex64 {
        self.sech * self.sech
    }

    /// `1 / (γ² + sinh²u)`.
    pub fn inv_d(&self) -> Complex64 {
        self.sech2() * self.r * self.r
    }

    /// `sinh u / √(γ² + sinh²u)`.
    pub fn sinh_over_sqrt_d(&self) -> Complex64 {
        self.tanh * self.r
    }

    /// `1 / √(γ² + sinh²u)`.
    pub fn inv_sqrt_d(&self) -> Complex64 {
        self.sech * self.r
    }

    /// `cosh²u / sinh²u`.
    pub fn coth2(&self) -> Complex64 {
        (self.tanh * self.tanh).inv()
    }

    /// `sinh²u / (γ² + sinh²u)`.
    pub fn sinh2_over_d(&self) -> Complex64 {
        let y = self.sinh_over_sqrt_d();
        y * y
    }

    /// `|sinh u|`, for singularity guards near the origin.
    pub fn sinh_norm(&self) -> f64 {
        (self.tanh / self.sech).norm()
    }

    /// Principal `ln cosh u`, computed without overflow.
    pub fn ln_cosh(&self) -> Complex64 {
        ln_cosh(self.u)
    }
}

/// `tanh u` and `sech u` without overflow for large |Re u|.
pub fn tanh_sech(u: Complex64) -> (Complex64, Complex64) {
    if u.re.abs() < SWITCH {
        let c = u.cosh();
        (u.sinh() / c, c.inv())
    } else {
        let sign = u.re.signum();
        let e = (-2.0 * sign * u).exp();
        let denom = Complex64::new(1.0, 0.0) + e;
        let tanh = sign * (Complex64::new(1.0, 0.0) - e) / denom;
        let sech = 2.0 * (-sign * u).exp() / denom;
        (tanh, sech)
    }
}

/// Principal-branch `ln cosh u` (up to multiples of 2πi).
pub fn ln_cosh(u: Complex64) -> Complex64 {
    if u.re.abs() < SWITCH {
        u.cosh().ln()
    } else {
        let sign = u.re.signum();
        let e = (-2.0 * sign * u).exp();
        sign * u + ((Complex64::new(1.0, 0.0) + e) * 0.5).ln()
    }
}

/// Square root on the branch nearest to `reference`.
pub fn tracked_sqrt(z: Complex64, reference: Complex64) -> Complex64 {
    let r = z.sqrt();
    if (r * reference.conj()).re < 0.0 {
        -r
    } else {
        r
    }
}

/// `ln z` on the sheet nearest to `reference`.
pub fn tracked_ln(z: Complex64, reference: Complex64) -> Complex64 {
    let mut l = z.ln();
    let turns = ((reference.im - l.im) / std::f64::consts::TAU).round();
    l.im += turns * std::f64::consts::TAU;
    l
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stable_forms_agree_with_direct_evaluation() {
        for u in [
            Complex64::new(14.0, 0.3),
            Complex64::new(16.0, 0.3),
            Complex64::new(-17.0, 1.1),
            Complex64::new(0.2, -0.4),
        ] {
            let (t, s) = tanh_sech(u);
            assert!((t - u.tanh()).norm() < 1e-14);
            assert!((s - u.cosh().inv()).norm() < 1e-14 * u.cosh().inv().norm().max(1e-300));
            let l = ln_cosh(u);
            let d = l - u.cosh().ln();
            assert!(d.re.abs() < 1e-12);
            let k = d.im / std::f64::consts::TAU;
            assert!((k - k.round()).abs() < 1e-12);
        }
        // no overflow far out
        let (t, s) = tanh_sech(Complex64::new(800.0, 0.5));
        assert!(t.re.is_finite() && s.norm() == 0.0);
    }

    #[test]
    fn tracked_branches() {
        let reference = Complex64::new(-1.0, 0.01);
        assert!(tracked_sqrt(Complex64::new(1.0, 0.0), reference).re < 0.0);
        let l = tracked_ln(Complex64::new(-1.0, -1e-9), Complex64::new(0.0, 3.1));
        assert!((l.im - std::f64::consts::PI).abs() < 1e-8);
    }
}
