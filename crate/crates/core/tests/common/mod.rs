#![allow(dead_code)]

use num_complex::Complex64;
use pt_ginocchio::map::{map_table, pt_reflect_check};
use pt_ginocchio::params::{make_params, PotentialParams, QuasiParity, StateLabel};
use pt_ginocchio::potential::{potential_table, pt_symmetry_defect};
use pt_ginocchio::spectrum::{full_spectrum, hermitian_levels, mu_nq, quadratic_residual, quantization_residual};
use pt_ginocchio::wavefunction::hermitian_norm_quadrature;
use rand::Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Raw draw of a valid parameter set: γ > 1, real s, real or critical-line λ,
/// and ε strictly below the critical shift.
#[derive(Debug, Clone, Copy)]
pub struct Draw {
    pub gamma: f64,
    pub s: f64,
    pub lambda_re: f64,
    pub lambda_im: f64,
    /// Fraction of the critical shift.
    pub eps_frac: f64,
}

impl Draw {
    pub fn random(rng: &mut impl Rng) -> Self {
        let complex = rng.gen_bool(0.5);
        Draw {
            gamma: rng.gen_range(1.1..2.5),
            s: rng.gen_range(1.0..10.0),
            lambda_re: if complex { 0.5 } else { rng.gen_range(0.5..4.0) },
            lambda_im: if complex { rng.gen_range(0.1..2.0) } else { 0.0 },
            eps_frac: rng.gen_range(0.05..0.9),
        }
    }

    pub fn params(&self) -> PotentialParams {
        let critical = std::f64::consts::FRAC_PI_2 / (self.gamma * self.gamma);
        make_params(
            self.gamma,
            c(self.s, 0.0),
            c(self.lambda_re, self.lambda_im),
            self.eps_frac * critical,
        )
        .expect("draw is a valid parameter set")
    }
}

/// Worst-case values of the structural invariants for one parameter set.
#[derive(Debug, Clone, Copy, Default)]
pub struct Defects {
    pub map_reflection: f64,
    pub potential_pt: f64,
    pub quadratic: f64,
    pub quantization: f64,
    pub epsilon_dependence: f64,
}

impl Defects {
    pub fn max(self, o: Self) -> Self {
        Defects {
            map_reflection: self.map_reflection.max(o.map_reflection),
            potential_pt: self.potential_pt.max(o.potential_pt),
            quadratic: self.quadratic.max(o.quadratic),
            quantization: self.quantization.max(o.quantization),
            epsilon_dependence: self.epsilon_dependence.max(o.epsilon_dependence),
        }
    }
}

pub fn defects(p: &PotentialParams) -> Defects {
    let map = map_table(p, -4.0, 4.0, 81).expect("map");
    let map_reflection = pt_reflect_check(&map).expect("symmetric grid");
    let potential_pt = pt_symmetry_defect(&potential_table(p, map).expect("potential")).expect("symmetric grid");

    let spectrum = full_spectrum(p).expect("spectrum");
    let mut quadratic: f64 = 0.0;
    let mut quantization: f64 = 0.0;
    for sv in &spectrum.states {
        quadratic = quadratic.max(quadratic_residual(p, sv));
        quantization = quantization.max(quantization_residual(p, sv));
    }

    let mut epsilon_dependence: f64 = 0.0;
    for eps in [0.1, 0.3, 1.0] {
        let shifted = full_spectrum(&p.with_epsilon(eps).expect("shift")).expect("spectrum");
        if shifted.states.len() != spectrum.states.len() {
            epsilon_dependence = f64::INFINITY;
            continue;
        }
        for (a, b) in spectrum.states.iter().zip(&shifted.states) {
            epsilon_dependence = epsilon_dependence.max((a.energy - b.energy).norm());
        }
    }

    Defects {
        map_reflection,
        potential_pt,
        quadratic,
        quantization,
        epsilon_dependence,
    }
}

/// Agreement of the q = +1 states at ε = 0 with the closed-form radial
/// problem: largest relative energy difference, count mismatch, and worst
/// deviation of the normalization integral from one.
#[derive(Debug, Clone, Copy, Default)]
pub struct HermitianAgreement {
    pub energy: f64,
    pub count_mismatch: usize,
    pub norm: f64,
}

pub fn hermitian_agreement(gamma: f64, s: f64, lambda: f64) -> HermitianAgreement {
    let p = PotentialParams::hermitian_radial(gamma, s, lambda).expect("radial params");
    let levels = hermitian_levels(gamma, s, lambda);
    let spectrum = full_spectrum(&p).expect("spectrum");
    let mut out = HermitianAgreement {
        count_mismatch: spectrum.count_plus.abs_diff(levels.len()),
        ..Default::default()
    };
    for &(n, _, e) in &levels {
        let sv = mu_nq(&p, StateLabel::new(n, QuasiParity::Plus));
        out.energy = out.energy.max((sv.energy - e).norm() / e.abs().max(1.0));
        if n < 3 {
            let norm = hermitian_norm_quadrature(&p, n).expect("norm");
            out.norm = out.norm.max((norm - 1.0).abs());
        }
    }
    out
}
