//! The four-term potential evaluated on the real line through the map.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Geometry;
use crate::map::{map_table, mirror_pairs, MapSample, MapTable};
use crate::params::{coupling_coefficients, PotentialParams};

/// Below this |sinh u| the λ(λ−1) term is treated as singular.
pub const SINGULAR_SINH: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PotentialSample {
    pub x: f64,
    pub v: Complex64,
    /// The individual terms, in order: well, `coth²` term, `D⁻²` term, `D⁻³` term.
    pub terms: [Complex64; 4],
}

#[derive(Debug, Clone, Serialize)]
pub struct PotentialTable {
    #[serde(skip)]
    pub params: PotentialParams,
    pub samples: Vec<PotentialSample>,
    #[serde(skip)]
    pub map: MapTable,
}

/// Terms of the potential for arbitrary (possibly complex) couplings
/// `s(s+1)` and `λ(λ−1)`.
pub fn potential_terms(gamma2: f64, s_coupling: Complex64, l_coupling: Complex64, geo: &Geometry) -> [Complex64; 4] {
    let g4 = gamma2 * gamma2;
    let g6 = g4 * gamma2;
    let inv_d = geo.inv_d();
    [
        -g4 * (s_coupling + 1.0 - gamma2) * inv_d,
        g4 * l_coupling * geo.coth2() * inv_d,
        -3.0 * g4 * (gamma2 - 1.0) * (3.0 * gamma2 - 1.0) / 4.0 * inv_d * inv_d,
        5.0 * g6 * (gamma2 - 1.0).powi(2) / 4.0 * inv_d * inv_d * inv_d,
    ]
}

pub fn potential_at(p: &PotentialParams, m: &MapSample) -> Result<PotentialSample> {
    let (c1, c2) = coupling_coefficients(p);
    let geo = m.geometry(p);
    if c2 != 0.0 && geo.sinh_norm() < SINGULAR_SINH {
        return Err(Error::SingularPoint { x: m.x });
    }
    let terms = if c2 == 0.0 {
        // avoid 0·∞ at sinh u = 0 when the singular coupling vanishes
        let mut t = potential_terms(p.gamma2(), c1.into(), Complex64::new(1.0, 0.0), &geo);
        t[1] = Complex64::new(0.0, 0.0);
        t
    } else {
        potential_terms(p.gamma2(), c1.into(), c2.into(), &geo)
    };
    Ok(PotentialSample {
        x: m.x,
        v: terms.iter().sum(),
        terms,
    })
}

pub fn potential_table(p: &PotentialParams, map: MapTable) -> Result<PotentialTable> {
    let samples = map
        .samples
        .iter()
        .map(|m| potential_at(p, m))
        .collect::<Result<Vec<_>>>()?;
    Ok(PotentialTable {
        params: *p,
        samples,
        map,
    })
}

/// `max |V(−x) − conj(V(x))|` over a symmetric grid.
pub fn pt_symmetry_defect(t: &PotentialTable) -> Result<f64> {
    let xs: Vec<f64> = t.samples.iter().map(|s| s.x).collect();
    let pairs = mirror_pairs(&xs)?;
    Ok(pairs
        .into_iter()
        .map(|(i, j)| (t.samples[j].v - t.samples[i].v.conj()).norm())
        .fold(0.0, f64::max))
}

/// Generalised Pöschl–Teller form `−s(s+1)/cosh²u + λ(λ−1)/sinh²u`.
pub fn poschl_teller(s_coupling: f64, l_coupling: f64, u: Complex64) -> Complex64 {
    let c = u.cosh();
    let s = u.sinh();
    -s_coupling / (c * c) + l_coupling / (s * s)
}

/// Largest deviation between the potential for `p` and the Pöschl–Teller
/// form evaluated at `u = x + iε`, over a uniform grid.
pub fn hermitian_limit_check(p: &PotentialParams, x_min: f64, x_max: f64, count: usize) -> Result<f64> {
    let (c1, c2) = coupling_coefficients(p);
    let table = map_table(p, x_min, x_max, count)?;
    let mut worst: f64 = 0.0;
    for m in &table.samples {
        let v = potential_at(p, m)?.v;
        let reference = poschl_teller(c1, c2, Complex64::new(m.x, p.epsilon()));
        worst = worst.max((v - reference).norm());
    }
    Ok(worst)
}

/// Asymptotic real offset of the map, `u ≈ γ²(x + iε) + offset` for large x.
pub fn asymptotic_offset(p: &PotentialParams) -> f64 {
    let g2 = p.gamma2();
    if g2 <= 1.0 {
        return p.gamma().ln();
    }
    let c = (g2 - 1.0).sqrt();
    p.gamma().ln() - c * c.atan()
}

/// Distance beyond which `|V(x)| < threshold`.
///
/// Uses `|γ² + sinh²u|⁻¹ ≈ 4 e^{−2 Re u}` with `Re u ≈ γ²|x| + offset` and
/// bounds every term by the sum of the coupling magnitudes times that
/// factor; a 10 % margin covers the approach to the asymptote.
pub fn decay_cutoff(p: &PotentialParams, threshold: f64) -> f64 {
    let g2 = p.gamma2();
    let g4 = g2 * g2;
    let (c1, c2) = coupling_coefficients(p);
    let k = g4 * ((c1 + 1.0 - g2).abs() + c2.abs())
        + (3.0 * g4 * (g2 - 1.0) * (3.0 * g2 - 1.0) / 4.0).abs()
        + (5.0 * g4 * g2 * (g2 - 1.0).powi(2) / 4.0).abs();
    let target_re_u = 0.5 * (4.0 * k.max(1e-300) / threshold).ln();
    let x = (target_re_u - asymptotic_offset(p)) / g2;
    1.1 * x.max(0.0) + 0.5
}
