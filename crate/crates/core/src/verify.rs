//! Shooting-method eigenvalue solver for complex potentials on the line.
//!
//! `−ψ″ + Vψ = Eψ` is integrated with fixed-step RK4 from both ends of
//! `[−L, L]`, starting from the decaying asymptotic solutions
//! `ψ ∝ e^{±κx}`, `κ = √(−E)`. The normalised Wronskian of the two
//! solutions at the matching point is driven to zero by Newton's method on
//! `(Re E, Im E)` with a finite-difference Jacobian.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::map::map_table;
use crate::params::{PotentialParams, QuasiParity};
use crate::potential::{decay_cutoff, potential_at};
use crate::susy::partner_potential_at;

/// Rescale the integration when the solution grows past this.
const RESCALE: f64 = 1e100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShootOptions {
    /// Convergence bound on the normalised matching function.
    pub tol: f64,
    pub max_iterations: usize,
}

impl Default for ShootOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iterations: 50,
        }
    }
}

/// Potential sampled at half steps on `[−L, L]`.
#[derive(Debug, Clone)]
pub struct ShootingProblem {
    half_length: f64,
    step: f64,
    /// `V(−L + j·h/2)`, `j = 0..=4L/h`.
    values: Vec<Complex64>,
    /// Index of the matching point in `values`.
    match_index: usize,
    pub options: ShootOptions,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenResult {
    pub seed: Complex64,
    pub energy: Complex64,
    pub match_residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeedFailure {
    pub seed: Complex64,
    pub code: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    /// Distinct converged eigenvalues, in seed order.
    pub eigenvalues: Vec<EigenResult>,
    /// Number of seeds that converged (before merging duplicates).
    pub converged: usize,
    pub failures: Vec<SeedFailure>,
}

#[derive(Debug, Clone, Copy)]
struct State {
    psi: Complex64,
    dpsi: Complex64,
}

impl ShootingProblem {
    /// Sample `v` on `[−L, L]` with RK4 step `h`; `L` is rounded up to a
    /// multiple of `h` so that `x = 0` is a grid point.
    pub fn from_fn<F: Fn(f64) -> Complex64>(v: F, half_length: f64, step: f64) -> Result<Self> {
        let (half_length, count) = Self::layout(half_length, step)?;
        let hh = step / 2.0;
        let values = (0..count).map(|j| v(-half_length + j as f64 * hh)).collect();
        Self::from_samples(values, half_length, step)
    }

    fn layout(half_length: f64, step: f64) -> Result<(f64, usize)> {
        if !(step > 0.0 && half_length > 0.0 && half_length.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "shooting domain needs L > 0 and h > 0, got L = {half_length}, h = {step}"
            )));
        }
        let steps = (half_length / step).ceil() as usize;
        Ok((steps as f64 * step, 4 * steps + 1))
    }

    fn from_samples(values: Vec<Complex64>, half_length: f64, step: f64) -> Result<Self> {
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::InvalidInput(
                "potential is not finite on the shooting grid".into(),
            ));
        }
        let match_index = (values.len() - 1) / 2;
        Ok(Self {
            half_length,
            step,
            values,
            match_index,
            options: ShootOptions::default(),
        })
    }

    /// The potential of `p`, on `[−L, L]` with `L` from the decay criterion.
    pub fn for_potential(p: &PotentialParams, step: f64) -> Result<Self> {
        let (l, count) = Self::layout(decay_cutoff(p, 1e-10), step)?;
        let map = map_table(p, -l, l, count)?;
        let values = map
            .samples
            .iter()
            .map(|m| potential_at(p, m).map(|s| s.v))
            .collect::<Result<Vec<_>>>()?;
        Self::from_samples(values, l, step)
    }

    /// The fermionic partner `V₊^{(q)}` of `p`.
    pub fn for_partner(p: &PotentialParams, q: QuasiParity, step: f64) -> Result<Self> {
        let (l, count) = Self::layout(decay_cutoff(p, 1e-10) + 1.0, step)?;
        let map = map_table(p, -l, l, count)?;
        let values = map
            .samples
            .iter()
            .map(|m| partner_potential_at(p, q, m))
            .collect::<Result<Vec<_>>>()?;
        Self::from_samples(values, l, step)
    }

    pub fn with_options(mut self, options: ShootOptions) -> Self {
        self.options = options;
        self
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Move the matching point to the grid node nearest `x`.
    pub fn with_match_point(mut self, x: f64) -> Self {
        let j = ((x + self.half_length) / self.step)
            .round()
            .clamp(1.0, (self.values.len() / 2 - 1) as f64) as usize;
        self.match_index = 2 * j;
        self
    }

    pub fn match_point(&self) -> f64 {
        -self.half_length + self.match_index as f64 * self.step / 2.0
    }

    fn kappa(energy: Complex64) -> Complex64 {
        crate::spectrum::principal_sqrt(-energy)
    }

    /// RK4 step of `ψ″ = (V − E)ψ` between half-grid indices `j` and
    /// `j ± 2` (direction `dir = ±1`).
    fn rk4(&self, s: State, j: usize, dir: isize, energy: Complex64) -> State {
        let h = dir as f64 * self.step;
        let v = |k: isize| self.values[(j as isize + k * dir) as usize] - energy;
        let (v0, v1, v2) = (v(0), v(1), v(2));
        let k1 = (s.dpsi, v0 * s.psi);
        let p2 = s.psi + 0.5 * h * k1.0;
        let d2 = s.dpsi + 0.5 * h * k1.1;
        let k2 = (d2, v1 * p2);
        let p3 = s.psi + 0.5 * h * k2.0;
        let d3 = s.dpsi + 0.5 * h * k2.1;
        let k3 = (d3, v1 * p3);
        let p4 = s.psi + h * k3.0;
        let d4 = s.dpsi + h * k3.1;
        let k4 = (d4, v2 * p4);
        State {
            psi: s.psi + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
            dpsi: s.dpsi + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
        }
    }

    /// Integrate from one end to half-grid index `target`, calling `visit`
    /// at every whole step.
    fn integrate(
        &self,
        energy: Complex64,
        from_left: bool,
        target: usize,
        mut visit: impl FnMut(usize, State),
    ) -> State {
        let kappa = Self::kappa(energy);
        let (mut j, dir, slope) = if from_left {
            (0usize, 1isize, kappa)
        } else {
            (self.values.len() - 1, -1isize, -kappa)
        };
        let mut s = State {
            psi: Complex64::new(1.0, 0.0),
            dpsi: slope,
        };
        visit(j, s);
        while j != target {
            s = self.rk4(s, j, dir, energy);
            j = (j as isize + 2 * dir) as usize;
            let size = s.psi.norm().max(s.dpsi.norm());
            if size > RESCALE {
                s.psi /= size;
                s.dpsi /= size;
            }
            visit(j, s);
        }
        s
    }

    fn weighted_norm(s: &State, kappa: Complex64) -> f64 {
        (s.psi.norm_sqr() + s.dpsi.norm_sqr() / kappa.norm_sqr().max(1e-300)).sqrt()
    }

    /// Normalised Wronskian `(ψ_L ψ_R′ − ψ_L′ ψ_R)/(‖y_L‖ ‖y_R‖)` at the matching point.
    pub fn matching(&self, energy: Complex64) -> Complex64 {
        let l = self.integrate(energy, true, self.match_index, |_, _| {});
        let r = self.integrate(energy, false, self.match_index, |_, _| {});
        let kappa = Self::kappa(energy);
        (l.psi * r.dpsi - l.dpsi * r.psi) / (Self::weighted_norm(&l, kappa) * Self::weighted_norm(&r, kappa))
    }

    /// Largest change of the Wronskian over `[x_m − overlap, x_m + overlap]`,
    /// relative to the product of the solution norms at `x_m`.
    pub fn wronskian_drift(&self, energy: Complex64, overlap: f64) -> f64 {
        let span = 2 * (overlap / self.step).round() as usize;
        let lo = self.match_index.saturating_sub(span).max(2);
        let hi = (self.match_index + span).min(self.values.len() - 3);
        let mut left = vec![None; self.values.len()];
        let mut right = vec![None; self.values.len()];
        // no rescaling happens inside the overlap as long as it is short
        self.integrate(energy, true, hi, |j, s| left[j] = Some(s));
        self.integrate(energy, false, lo, |j, s| right[j] = Some(s));
        let wr = |j: usize| {
            let (l, r): (State, State) = (left[j].unwrap(), right[j].unwrap());
            l.psi * r.dpsi - l.dpsi * r.psi
        };
        let kappa = Self::kappa(energy);
        let (l0, r0) = (left[self.match_index].unwrap(), right[self.match_index].unwrap());
        let scale = Self::weighted_norm(&l0, kappa) * Self::weighted_norm(&r0, kappa);
        let w0 = wr(self.match_index);
        (lo..=hi)
            .step_by(2)
            .map(|j| (wr(j) - w0).norm() / scale)
            .fold(0.0, f64::max)
    }
}

fn basin_radius(seed: Complex64) -> f64 {
    (0.25 * seed.norm()).max(1.0)
}

/// Newton iteration on the matching function from `seed`.
///
/// Iterates until the residual is below the tolerance and the Newton step
/// is negligible, so that double roots (coalescing levels) are also
/// resolved; stops early when damping can no longer reduce the residual.
pub fn shoot(problem: &ShootingProblem, seed: Complex64) -> Result<EigenResult> {
    let opts = problem.options;
    let mut e = seed;
    let mut m = problem.matching(e);
    let mut res = m.norm();
    let mut iterations = 0;
    let done = |e: Complex64, res: f64, iterations: usize| EigenResult {
        seed,
        energy: e,
        match_residual: res,
        iterations,
    };
    while iterations < opts.max_iterations && res > 0.0 {
        iterations += 1;
        let delta = 1e-7 * e.norm().max(1.0);
        let di = Complex64::new(0.0, delta);
        let mr = (problem.matching(e + delta) - problem.matching(e - delta)) / (2.0 * delta);
        let mi = (problem.matching(e + di) - problem.matching(e - di)) / (2.0 * delta);
        // [mr.re mi.re; mr.im mi.im] · (dx, dy) = −m
        let det = mr.re * mi.im - mi.re * mr.im;
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let dx = (-m.re * mi.im + mi.re * m.im) / det;
        let dy = (-mr.re * m.im + mr.im * m.re) / det;
        let mut step = Complex64::new(dx, dy);
        let mut next = e + step;
        let mut m_next = problem.matching(next);
        let mut improved = m_next.norm() < res;
        for _ in 0..20 {
            if improved {
                break;
            }
            step *= 0.5;
            next = e + step;
            m_next = problem.matching(next);
            improved = m_next.norm() < res;
        }
        if (next - seed).norm() > basin_radius(seed) || !(next.re.is_finite() && next.im.is_finite()) {
            return Err(Error::BasinEscape { seed, energy: next });
        }
        if !improved {
            // rounding floor of the matching function
            break;
        }
        e = next;
        m = m_next;
        res = m.norm();
        if res < opts.tol && step.norm() < 1e-12 * e.norm().max(1.0) {
            return Ok(done(e, res, iterations));
        }
    }
    if res < opts.tol {
        return Ok(done(e, res, iterations));
    }
    Err(Error::ShootNoConvergence {
        seed,
        iterations,
        residual: res,
    })
}

/// Shoot from every seed and merge results closer than `1e−6·max(1,|E|)`.
pub fn spectrum_sweep(problem: &ShootingProblem, seeds: &[Complex64]) -> SweepReport {
    let mut eigenvalues: Vec<EigenResult> = Vec::new();
    let mut failures = Vec::new();
    let mut converged = 0;
    for &seed in seeds {
        match shoot(problem, seed) {
            Ok(r) => {
                converged += 1;
                let dup = eigenvalues
                    .iter()
                    .any(|e| (e.energy - r.energy).norm() < 1e-6 * r.energy.norm().max(1.0));
                if !dup {
                    eigenvalues.push(r);
                }
            }
            Err(err) => failures.push(SeedFailure {
                seed,
                code: err.code(),
                message: err.to_string(),
            }),
        }
    }
    SweepReport {
        eigenvalues,
        converged,
        failures,
    }
}

/// `|E_shoot − E| < 1e−3·max(1, |E|)`.
pub fn oracle_agrees(shot: Complex64, analytic: Complex64) -> bool {
    (shot - analytic).norm() < 1e-3 * analytic.norm().max(1.0)
}
