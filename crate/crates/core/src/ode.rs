//! Adaptive Dormand–Prince 5(4) integration of a complex scalar ODE.

use num_complex::Complex64;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// 5th order weights minus embedded 4th order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rtol: 1e-13,
            atol: 1e-13,
            max_steps: 200_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Outcome {
    pub y: Complex64,
    pub accepted: usize,
    pub rejected: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OdeError {
    /// Step size underflowed or the step budget ran out at parameter `t`.
    StepFailure { t: f64 },
    /// The right-hand side produced a non-finite value at `t`.
    NonFinite { t: f64 },
}

/// Integrate `dy/dt = f(t, y)` from `t0` to `t1` (either direction).
pub fn dopri5<F>(mut f: F, t0: f64, t1: f64, y0: Complex64, tol: Tolerance) -> Result<Outcome, OdeError>
where
    F: FnMut(f64, Complex64) -> Complex64,
{
    let span = t1 - t0;
    if span == 0.0 {
        return Ok(Outcome {
            y: y0,
            accepted: 0,
            rejected: 0,
        });
    }
    let dir = span.signum();
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, y);
    if !finite(k1) {
        return Err(OdeError::NonFinite { t });
    }
    let mut h = initial_step(span.abs(), y, k1, tol) * dir;
    let mut accepted = 0;
    let mut rejected = 0;

    while (t1 - t) * dir > 0.0 {
        if accepted + rejected >= tol.max_steps {
            return Err(OdeError::StepFailure { t });
        }
        if (t + h - t1) * dir > 0.0 {
            h = t1 - t;
        }
        if h.abs() <= 1e-14 * t.abs().max(1.0) * 1e-2 {
            return Err(OdeError::StepFailure { t });
        }

        let k2 = f(t + C2 * h, y + h * (A21 * k1));
        let k3 = f(t + C3 * h, y + h * (A31 * k1 + A32 * k2));
        let k4 = f(t + C4 * h, y + h * (A41 * k1 + A42 * k2 + A43 * k3));
        let k5 = f(t + C5 * h, y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4));
        let k6 = f(t + h, y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5));
        let y_new = y + h * (A71 * k1 + A73 * k3 + A74 * k4 + A75 * k5 + A76 * k6);
        let k7 = f(t + h, y_new);
        if ![k2, k3, k4, k5, k6, k7].iter().all(|k| finite(*k)) {
            // treat as a rejected step; shrink and retry
            rejected += 1;
            h *= 0.25;
            continue;
        }

        let err_vec = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);
        let scale = tol.atol + tol.rtol * y.norm().max(y_new.norm());
        let err = err_vec.norm() / scale;

        if err <= 1.0 {
            t += h;
            y = y_new;
            k1 = k7;
            accepted += 1;
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            h *= factor;
        } else {
            rejected += 1;
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
        }
    }
    Ok(Outcome { y, accepted, rejected })
}

fn finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

fn initial_step(span: f64, y: Complex64, dy: Complex64, tol: Tolerance) -> f64 {
    let scale = tol.atol + tol.rtol * y.norm();
    let d0 = y.norm() / scale;
    let d1 = dy.norm() / scale;
    let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h.min(span).min(0.05)
}
