//! CSV and JSON writers with fixed formatting.
//!
//! CSV: ',' separator, '.' decimal point, LF line endings and 17 significant
//! digits (`{:.16e}`), so identical inputs give byte-identical files.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::map::MapTable;
use crate::potential::PotentialTable;
use crate::wavefunction::WaveTable;

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// CSV text from a header and rows of numbers.
pub fn csv<I>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = Vec<f64>>,
{
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let line: Vec<String> = row.into_iter().map(fmt_f64).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn map_csv(t: &MapTable) -> String {
    csv(
        &["x", "re_u", "im_u", "re_dudx", "im_dudx", "residual"],
        t.samples.iter().map(|s| {
            vec![
                s.x,
                s.u.re,
                s.u.im,
                s.dudx.re,
                s.dudx.im,
                s.residual.unwrap_or(f64::NAN),
            ]
        }),
    )
}

pub fn potential_csv(t: &PotentialTable, with_terms: bool) -> String {
    let mut header = vec!["x", "re_v", "im_v"];
    if with_terms {
        header.extend([
            "re_well",
            "im_well",
            "re_coth2",
            "im_coth2",
            "re_inv_d2",
            "im_inv_d2",
            "re_inv_d3",
            "im_inv_d3",
        ]);
    }
    csv(
        &header,
        t.samples.iter().map(|s| {
            let mut row = vec![s.x, s.v.re, s.v.im];
            if with_terms {
                for term in s.terms {
                    row.extend([term.re, term.im]);
                }
            }
            row
        }),
    )
}

pub fn wave_csv(t: &WaveTable) -> String {
    csv(
        &["x", "re_psi", "im_psi", "abs_psi"],
        t.samples.iter().map(|s| vec![s.x, s.psi.re, s.psi.im, s.psi.norm()]),
    )
}

/// Two-column complex curve `x, re, im`.
pub fn curve_csv(xs: impl IntoIterator<Item = f64>, values: &[Complex64]) -> String {
    let mut out = String::from("x,re_v,im_v\n");
    for (x, v) in xs.into_iter().zip(values) {
        let _ = writeln!(out, "{},{},{}", fmt_f64(x), fmt_f64(v.re), fmt_f64(v.im));
    }
    out
}

/// Pretty JSON with a trailing newline. Complex numbers are `[re, im]`.
pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).unwrap_or_else(|e| format!("{{\"error\": \"{e}\"}}"));
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_format() {
        assert_eq!(fmt_f64(-171.31325), "-1.7131325000000001e2");
        assert_eq!(fmt_f64(0.0), "0.0000000000000000e0");
        let text = csv(&["a", "b"], [vec![1.0, -0.5]]);
        assert_eq!(text, "a,b\n1.0000000000000000e0,-5.0000000000000000e-1\n");
        assert!(!text.contains('\r'));
    }

    #[test]
    fn round_trip_is_exact() {
        for v in [std::f64::consts::PI, -1.0e-300, 123456.789e10] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        }
    }
}
