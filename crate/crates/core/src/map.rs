//! The implicit coordinate transformation `x + iε ↦ u`.
//!
//! `u` is defined by continuation of
//!
//! ```text
//! du/dz = γ² cosh u / √(γ² + sinh²u),   u(0) = 0,
//! ```
//!
//! first along the imaginary segment `z ∈ [0, iε]` and then along the
//! horizontal line `z = x + iε`. The closed inverse `z = F(u)` (a sum of an
//! inverse hyperbolic tangent and an inverse tangent) is multivalued, so it
//! is only used to polish the ODE result with Newton's method, after
//! snapping the branch offset to the lattice of sheet differences
//! `(iπk + √(γ²−1) πm) / γ²`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{tanh_sech, tracked_sqrt, Geometry};
use crate::ode::{dopri5, Tolerance};
use crate::params::PotentialParams;

#[derive(Debug, Clone, Copy)]
pub struct MapOptions {
    /// Bound on `|F(u) − (x + iε)|` after polishing.
    pub map_tol: f64,
    pub ode: Tolerance,
    pub newton_budget: usize,
    /// Longest stretch integrated with a single branch reference.
    pub max_segment: f64,
}

impl Default for MapOptions {
    fn default() -> Self {
        Self {
            map_tol: 1e-12,
            ode: Tolerance::default(),
            newton_budget: 25,
            max_segment: 0.05,
        }
    }
}

/// A point of the real line with its image under the map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MapSample {
    pub x: f64,
    pub u: Complex64,
    pub dudx: Complex64,
    /// Residual of the implicit equation after polishing; `None` when no
    /// sheet offset matched and the ODE value was kept as is.
    pub residual: Option<f64>,
}

impl MapSample {
    pub fn geometry(&self, p: &PotentialParams) -> Geometry {
        Geometry::new(p.gamma2(), self.u, self.dudx)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MapTable {
    #[serde(skip)]
    pub params: PotentialParams,
    pub samples: Vec<MapSample>,
    pub map_tol: f64,
}

impl MapTable {
    pub fn xs(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.x)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Uniform spacing, if the grid has at least two points.
    pub fn step(&self) -> Option<f64> {
        match self.samples.as_slice() {
            [a, b, ..] => Some(b.x - a.x),
            _ => None,
        }
    }

    /// Number of samples whose sheet offset could not be matched.
    pub fn unpolished(&self) -> usize {
        self.samples.iter().filter(|s| s.residual.is_none()).count()
    }
}

/// Uniform grid whose points are exactly antisymmetric when `x_min = −x_max`.
pub fn uniform_grid(x_min: f64, x_max: f64, count: usize) -> Result<Vec<f64>> {
    if !(x_min.is_finite() && x_max.is_finite()) || x_min >= x_max {
        return Err(Error::InvalidGrid(format!(
            "need x_min < x_max, got [{x_min}, {x_max}]"
        )));
    }
    if count < 2 {
        return Err(Error::InvalidGrid(format!("need at least 2 points, got {count}")));
    }
    let m = (count - 1) as f64;
    Ok((0..count)
        .map(|i| {
            let i = i as f64;
            (x_min * (m - i) + x_max * i) / m
        })
        .collect())
}

/// Index pairs `(i, j)` with `x_j = −x_i`, or an error for asymmetric grids.
pub fn mirror_pairs(xs: &[f64]) -> Result<Vec<(usize, usize)>> {
    let n = xs.len();
    let scale = xs.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
    for i in 0..n {
        if (xs[i] + xs[n - 1 - i]).abs() > 1e-12 * scale {
            return Err(Error::AsymmetricGrid);
        }
    }
    Ok((0..n).map(|i| (i, n - 1 - i)).collect())
}

/// `u(x + iε)` at a single point.
pub fn map_at(p: &PotentialParams, x: f64) -> Result<MapSample> {
    map_at_with(p, x, &MapOptions::default())
}

pub fn map_at_with(p: &PotentialParams, x: f64, opts: &MapOptions) -> Result<MapSample> {
    let mut walker = Walker::anchor(p, opts)?;
    walker.advance_to(x)?;
    Ok(walker.sample())
}

/// `u` on a uniform grid, each sample seeding the next.
pub fn map_table(p: &PotentialParams, x_min: f64, x_max: f64, count: usize) -> Result<MapTable> {
    map_table_with(p, x_min, x_max, count, &MapOptions::default())
}

pub fn map_table_with(
    p: &PotentialParams,
    x_min: f64,
    x_max: f64,
    count: usize,
    opts: &MapOptions,
) -> Result<MapTable> {
    let xs = uniform_grid(x_min, x_max, count)?;
    map_points(p, &xs, opts)
}

/// `u` at arbitrary increasing abscissae.
pub fn map_points(p: &PotentialParams, xs: &[f64], opts: &MapOptions) -> Result<MapTable> {
    if xs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid("abscissae must be strictly increasing".into()));
    }
    let anchor = Walker::anchor(p, opts)?;
    let mut samples = vec![anchor.sample(); xs.len()];
    let split = xs.partition_point(|&x| x < 0.0);

    let mut up = anchor.clone();
    for (i, &x) in xs.iter().enumerate().skip(split) {
        up.advance_to(x)?;
        samples[i] = up.sample();
    }
    let mut down = anchor;
    for i in (0..split).rev() {
        down.advance_to(xs[i])?;
        samples[i] = down.sample();
    }
    Ok(MapTable {
        params: *p,
        samples,
        map_tol: opts.map_tol,
    })
}

/// `max |u(−x) + conj(u(x))|` over a symmetric table.
pub fn pt_reflect_check(t: &MapTable) -> Result<f64> {
    let xs: Vec<f64> = t.xs().collect();
    let pairs = mirror_pairs(&xs)?;
    Ok(pairs
        .into_iter()
        .map(|(i, j)| (t.samples[j].u + t.samples[i].u.conj()).norm())
        .fold(0.0, f64::max))
}

/// Principal-branch value of the implicit inverse `F(u)` on the square-root
/// branch implied by `dudx`.
pub fn implicit_inverse(p: &PotentialParams, u: Complex64, dudx: Complex64) -> Complex64 {
    let g2 = p.gamma2();
    let geo = Geometry::new(g2, u, dudx);
    implicit_from_geometry(p, &geo)
}

fn implicit_from_geometry(p: &PotentialParams, geo: &Geometry) -> Complex64 {
    let g2 = p.gamma2();
    let gamma = p.gamma();
    let w = geo.r.inv();
    let t = geo.tanh;
    // atanh(sinh u / √D) = ln((√D + sinh u)/γ) = −ln((√D − sinh u)/γ)  (mod iπ)
    let plus = w + t;
    let minus = w - t;
    let ln_c = geo.ln_cosh();
    let atanh_part = if plus.norm() >= minus.norm() {
        plus.ln() + ln_c - gamma.ln()
    } else {
        -(minus.ln() + ln_c - gamma.ln())
    };
    let c = Complex64::new(g2 - 1.0, 0.0).sqrt();
    let atan_part = c * (c * t * geo.r).atan();
    (atanh_part + atan_part) / g2
}

/// Continuation state: the current point on the contour with its `u`, the
/// branch of `w = √D / cosh u`, and the residual of the last polish.
#[derive(Debug, Clone)]
struct Walker<'a> {
    p: &'a PotentialParams,
    opts: &'a MapOptions,
    x: f64,
    u: Complex64,
    w: Complex64,
    residual: Option<f64>,
}

impl<'a> Walker<'a> {
    fn anchor(p: &'a PotentialParams, opts: &'a MapOptions) -> Result<Self> {
        let mut walker = Walker {
            p,
            opts,
            x: 0.0,
            u: Complex64::new(0.0, 0.0),
            w: Complex64::new(p.gamma(), 0.0),
            residual: Some(0.0),
        };
        if p.gamma() == 1.0 {
            walker.u = Complex64::new(0.0, p.epsilon());
            walker.w = Complex64::new(1.0, 0.0);
            return Ok(walker);
        }
        let eps = p.epsilon();
        if eps > 0.0 {
            // imaginary leg z = i t, t ∈ [0, ε]
            let pieces = (eps / opts.max_segment).ceil().max(1.0) as usize;
            for k in 1..=pieces {
                let t0 = eps * (k - 1) as f64 / pieces as f64;
                let t1 = eps * k as f64 / pieces as f64;
                walker.integrate(t0, t1, Complex64::new(0.0, 1.0))?;
                walker.polish(Complex64::new(0.0, t1), t1)?;
            }
        }
        Ok(walker)
    }

    fn sample(&self) -> MapSample {
        MapSample {
            x: self.x,
            u: self.u,
            dudx: self.dudx(),
            residual: self.residual,
        }
    }

    fn dudx(&self) -> Complex64 {
        self.p.gamma2() / self.w
    }

    fn branch_w(&self, u: Complex64, reference: Complex64) -> Complex64 {
        let g2 = self.p.gamma2();
        let (t, s) = tanh_sech(u);
        tracked_sqrt(g2 * s * s + t * t, reference)
    }

    fn advance_to(&mut self, x: f64) -> Result<()> {
        if self.p.gamma() == 1.0 {
            self.x = x;
            self.u = Complex64::new(x, self.p.epsilon());
            return Ok(());
        }
        let span = x - self.x;
        if span == 0.0 {
            return Ok(());
        }
        let pieces = (span.abs() / self.opts.max_segment).ceil().max(1.0) as usize;
        let start = self.x;
        for k in 1..=pieces {
            let x0 = self.x;
            let x1 = if k == pieces {
                x
            } else {
                start + span * k as f64 / pieces as f64
            };
            self.integrate(x0, x1, Complex64::new(1.0, 0.0))?;
            self.x = x1;
            self.polish(Complex64::new(x1, self.p.epsilon()), x1)?;
        }
        Ok(())
    }

    /// Integrate along `z = z(t)` with `dz/dt = direction`.
    fn integrate(&mut self, t0: f64, t1: f64, direction: Complex64) -> Result<()> {
        let g2 = self.p.gamma2();
        let reference = self.w;
        let rhs = |_t: f64, u: Complex64| direction * g2 / self.branch_w(u, reference);
        let out = dopri5(rhs, t0, t1, self.u, self.opts.ode).map_err(|_| Error::NoConvergence {
            x: t1,
            residual: f64::NAN,
        })?;
        self.u = out.y;
        self.w = self.branch_w(self.u, reference);
        Ok(())
    }

    /// Newton polish of `F(u) − lattice = z` around the continued value.
    fn polish(&mut self, z: Complex64, at: f64) -> Result<()> {
        let g2 = self.p.gamma2();
        let geo = Geometry::new(g2, self.u, self.dudx());
        let offset = implicit_from_geometry(self.p, &geo) - z;
        let Some(lattice) = snap_offset(self.p, offset) else {
            self.residual = None;
            return Ok(());
        };
        let mut residual = offset - lattice;
        for _ in 0..self.opts.newton_budget {
            if residual.norm() <= 0.01 * self.opts.map_tol {
                break;
            }
            // F'(u) = 1 / (du/dz)
            let step = -residual * self.dudx();
            let u_new = self.u + step;
            let w_new = self.branch_w(u_new, self.w);
            let geo = Geometry::new(g2, u_new, g2 / w_new);
            let r_new = implicit_from_geometry(self.p, &geo) - z - lattice;
            if r_new.norm() >= residual.norm() {
                break;
            }
            self.u = u_new;
            self.w = w_new;
            residual = r_new;
        }
        let res = residual.norm();
        if res > self.opts.map_tol {
            return Err(Error::NoConvergence { x: at, residual: res });
        }
        self.residual = Some(res);
        Ok(())
    }
}

/// Nearest sheet difference `(iπk + √(γ²−1) πm) / γ²` to `offset`, if close.
fn snap_offset(p: &PotentialParams, offset: Complex64) -> Option<Complex64> {
    let g2 = p.gamma2();
    let scaled = offset * g2;
    let c = Complex64::new(g2 - 1.0, 0.0).sqrt();
    let lattice = |k: f64, m: f64| Complex64::new(0.0, PI * k) + c * PI * m;
    let best = if g2 > 1.0 {
        let k = (scaled.im / PI).round();
        let m = (scaled.re / (c.re * PI)).round();
        lattice(k, m)
    } else {
        let mut best = Complex64::new(0.0, 0.0);
        for k in -8..=8 {
            for m in -8..=8 {
                let cand = lattice(k as f64, m as f64);
                if (scaled - cand).norm() < (scaled - best).norm() {
                    best = cand;
                }
            }
        }
        best
    };
    if (scaled - best).norm() <= 1e-6 * scaled.norm().max(1.0) {
        Some(best / g2)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::make_params;

    fn reference_set() -> PotentialParams {
        make_params(1.75, Complex64::new(8.1, 0.0), Complex64::new(1.0, 0.0), 0.3).unwrap()
    }

    #[test]
    fn anchor_is_exact_without_shift() {
        let p = make_params(1.75, Complex64::new(8.1, 0.0), Complex64::new(1.0, 0.0), 0.0).unwrap();
        let m = map_at(&p, 0.0).unwrap();
        assert_eq!(m.u, Complex64::new(0.0, 0.0));
        assert!((m.dudx - 1.75).norm() < 1e-15);
    }

    #[test]
    fn identity_map_at_gamma_one() {
        let p = PotentialParams::poschl_teller_limit(Complex64::new(2.0, 0.0), Complex64::new(1.0, 0.0), 0.3).unwrap();
        let t = map_table(&p, -5.0, 5.0, 11).unwrap();
        for s in &t.samples {
            assert_eq!(s.u, Complex64::new(s.x, 0.3));
            assert_eq!(s.dudx, Complex64::new(1.0, 0.0));
        }
        assert_eq!(pt_reflect_check(&t).unwrap(), 0.0);
    }

    #[test]
    fn residual_bound_and_symmetry() {
        let t = map_table(&reference_set(), -5.0, 5.0, 201).unwrap();
        assert_eq!(t.unpolished(), 0);
        for s in &t.samples {
            assert!(s.residual.unwrap() < 1e-12, "x = {}: {:?}", s.x, s.residual);
        }
        assert!(pt_reflect_check(&t).unwrap() < 1e-10);
        // odd real part, even imaginary part
        let n = t.len();
        for i in 0..n {
            let (a, b) = (t.samples[i].u, t.samples[n - 1 - i].u);
            assert!((a.re + b.re).abs() < 1e-10 && (a.im - b.im).abs() < 1e-10);
        }
    }

    #[test]
    fn single_point_matches_table() {
        let p = reference_set();
        let t = map_table(&p, -5.0, 5.0, 21).unwrap();
        for s in t.samples.iter().step_by(4) {
            let m = map_at(&p, s.x).unwrap();
            assert!((m.u - s.u).norm() < 1e-11);
        }
    }

    #[test]
    fn asymptotic_slope_is_gamma_squared() {
        let p = reference_set();
        let a = map_at(&p, 20.0).unwrap();
        let b = map_at(&p, 21.0).unwrap();
        let d = b.u - a.u;
        assert!((d.re - 3.0625).abs() < 1e-8, "{d}");
        assert!(d.im.abs() < 1e-8);
        assert!((a.dudx - 3.0625).norm() < 1e-8);
    }

    #[test]
    fn asymmetric_grid_is_rejected() {
        let t = map_table(&reference_set(), -4.0, 5.0, 11).unwrap();
        assert_eq!(pt_reflect_check(&t).unwrap_err(), Error::AsymmetricGrid);
    }

    #[test]
    fn corrupted_sample_is_detected() {
        let mut t = map_table(&reference_set(), -2.0, 2.0, 41).unwrap();
        t.samples[3].u += Complex64::new(0.0, 0.2);
        assert!(pt_reflect_check(&t).unwrap() > 0.1);
    }

    #[test]
    fn grid_validation() {
        assert!(uniform_grid(1.0, 1.0, 5).is_err());
        assert!(uniform_grid(0.0, 1.0, 1).is_err());
        let g = uniform_grid(-3.0, 3.0, 7).unwrap();
        assert_eq!(g, vec![-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0]);
    }
}
