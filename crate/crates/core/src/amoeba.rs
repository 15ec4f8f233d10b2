//! Floating-point amoeba sampling for bivariate polynomials and recovery of
//! its asymptotic directions.
//!
//! Roots come from companion-matrix eigenvalues, polished by Newton steps
//! and kept only if the relative residual is at most [`RESIDUAL_TOL`].

use std::f64::consts::PI;
use std::fmt::Write as _;

use nalgebra::{Complex, DMatrix, Schur};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::rational::to_f64;
use crate::ring::LaurentPoly;

pub const RESIDUAL_TOL: f64 = 1e-9;

type C64 = Complex<f64>;

/// Which coordinate is prescribed on the grid; the other one is solved for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fibration {
    /// Prescribe `x = e^{s + iφ}` and solve for `y`.
    #[default]
    X,
    /// Prescribe `y = e^{s + iφ}` and solve for `x`.
    Y,
    /// Both of the above, concatenated.
    Both,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusStats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

/// Points `(ln|x|, ln|y|)` on the amoeba.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AmoebaCloud {
    pub points: Vec<[f64; 2]>,
    /// Roots dropped because the residual check failed.
    pub skipped: usize,
    pub radius: Option<RadiusStats>,
}

impl AmoebaCloud {
    /// CSV with header `s,ln_abs_y`, where `s = ln|x|`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,ln_abs_y\n");
        for [a, b] in &self.points {
            let _ = writeln!(out, "{a},{b}");
        }
        out
    }
}

/// Coefficients of `f` as a polynomial in variable `solve`, with the other
/// variable fixed to `fixed`, lowest degree first.
fn fiber_coefficients(f: &LaurentPoly, solve: usize, fixed: C64) -> Vec<C64> {
    let (lo, hi) = f.degree_span(solve).expect("nonzero polynomial");
    let other = 1 - solve;
    let mut coeffs = vec![C64::new(0.0, 0.0); (hi - lo + 1) as usize];
    for (g, c) in f.terms() {
        let k = (g.0[solve] - lo) as usize;
        coeffs[k] += fixed.powi(g.0[other] as i32) * to_f64(c);
    }
    coeffs
}

fn horner(coeffs: &[C64], z: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn relative_residual(coeffs: &[C64], z: C64) -> f64 {
    let (p, _) = horner(coeffs, z);
    let scale: f64 = coeffs.iter().enumerate().map(|(k, c)| c.norm() * z.norm().powi(k as i32)).sum();
    if scale == 0.0 {
        f64::INFINITY
    } else {
        p.norm() / scale
    }
}

/// Nonzero roots of `Σ coeffs[k] zᵏ`, each paired with whether it passed the
/// residual check, sorted by real then imaginary part.
fn roots(coeffs: &[C64]) -> Vec<(C64, bool)> {
    let mut c: Vec<C64> = coeffs.to_vec();
    let top = c.iter().map(|z| z.norm()).fold(0.0, f64::max);
    while c.len() > 1 && c.last().is_some_and(|z| z.norm() <= 1e-14 * top) {
        c.pop();
    }
    let low = c.iter().position(|z| z.norm() > 1e-14 * top).unwrap_or(0);
    let c = &c[low..];
    let d = c.len() - 1;
    if d == 0 {
        return Vec::new();
    }
    let lead = c[d];
    let mut found: Vec<C64> = if d == 1 {
        vec![-c[0] / lead]
    } else {
        let mut m = DMatrix::<C64>::zeros(d, d);
        for j in 0..d {
            m[(0, j)] = -c[d - 1 - j] / lead;
        }
        for i in 1..d {
            m[(i, i - 1)] = C64::new(1.0, 0.0);
        }
        match Schur::try_new(m, f64::EPSILON, 10_000).and_then(|s| s.eigenvalues()) {
            Some(ev) => ev.iter().copied().collect(),
            None => return Vec::new(),
        }
    };
    for z in found.iter_mut() {
        for _ in 0..8 {
            let (p, dp) = horner(c, *z);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            *z -= step;
            if step.norm() <= 1e-16 * z.norm() {
                break;
            }
        }
    }
    let mut out: Vec<(C64, bool)> = found
        .into_iter()
        .filter(|z| z.norm() > 0.0 && z.re.is_finite() && z.im.is_finite())
        .map(|z| (z, relative_residual(c, z) <= RESIDUAL_TOL))
        .collect();
    out.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    out
}

fn sample_fiber(f: &LaurentPoly, solve: usize, s_grid: &[f64], angles: usize) -> (Vec<[f64; 2]>, usize) {
    let grid: Vec<(f64, f64)> = s_grid
        .iter()
        .flat_map(|&s| (0..angles).map(move |k| (s, 2.0 * PI * k as f64 / angles as f64)))
        .collect();
    let per_point = par::map(&grid, |&(s, phi)| {
        let fixed = C64::from_polar(s.exp(), phi);
        let rs = roots(&fiber_coefficients(f, solve, fixed));
        let mut pts = Vec::with_capacity(rs.len());
        let mut skipped = 0;
        for (z, ok) in rs {
            if !ok {
                skipped += 1;
                continue;
            }
            let l = z.norm().ln();
            pts.push(if solve == 1 { [s, l] } else { [l, s] });
        }
        (pts, skipped)
    });
    let mut points = Vec::new();
    let mut skipped = 0;
    for (p, k) in per_point {
        points.extend(p);
        skipped += k;
    }
    (points, skipped)
}

/// Samples the amoeba of a bivariate polynomial over a grid of log-moduli
/// and `angles` equally spaced arguments.
pub fn amoeba_sample(f: &LaurentPoly, s_grid: &[f64], angles: usize, fibration: Fibration) -> Result<AmoebaCloud> {
    if f.rank() != 2 {
        return Err(Error::InvalidInput("amoeba sampling needs a polynomial in two variables".into()));
    }
    if f.is_zero() {
        return Err(Error::InvalidInput("the zero polynomial has no amoeba".into()));
    }
    let degree = |i: usize| f.degree_span(i).map_or(0, |(lo, hi)| hi - lo);
    if degree(1) == 0 {
        return Err(Error::InvalidInput("polynomial has degree 0 in y".into()));
    }
    if angles == 0 {
        return Err(Error::InvalidInput("need at least one angle".into()));
    }
    if s_grid.iter().any(|s| !s.is_finite()) {
        return Err(Error::InvalidInput("grid values must be finite".into()));
    }
    let mut points = Vec::new();
    let mut skipped = 0;
    if matches!(fibration, Fibration::X | Fibration::Both) {
        let (p, k) = sample_fiber(f, 1, s_grid, angles);
        points.extend(p);
        skipped += k;
    }
    if matches!(fibration, Fibration::Y | Fibration::Both) {
        if degree(0) == 0 {
            if fibration == Fibration::Y {
                return Err(Error::InvalidInput("polynomial has degree 0 in x".into()));
            }
        } else {
            let (p, k) = sample_fiber(f, 0, s_grid, angles);
            points.extend(p);
            skipped += k;
        }
    }
    let radius = if points.is_empty() {
        None
    } else {
        let r: Vec<f64> = points.iter().map(|[a, b]| a.hypot(*b)).collect();
        Some(RadiusStats {
            min: r.iter().copied().fold(f64::INFINITY, f64::min),
            max: r.iter().copied().fold(0.0, f64::max),
            mean: r.iter().sum::<f64>() / r.len() as f64,
        })
    };
    Ok(AmoebaCloud { points, skipped, radius })
}

/// One populated angular bin.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitDirection {
    /// Unit vector in valuation coordinates, i.e. the negated log-modulus direction.
    pub direction: [f64; 2],
    pub bin: usize,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitDirections {
    pub directions: Vec<LimitDirection>,
    pub far_points: usize,
    pub warning: Option<String>,
}

/// Bins the far points of the cloud by angle. Each populated bin reports the
/// normalized mean of its unit vectors. Directions are negated into
/// valuation coordinates (`v = -ln|·|`) so they compare directly with rays
/// of min-convention tropical sets.
pub fn log_limit_directions(cloud: &AmoebaCloud, min_radius: f64, angle_bins: usize) -> Result<LimitDirections> {
    if cloud.points.is_empty() {
        return Err(Error::InvalidInput("empty amoeba cloud".into()));
    }
    if angle_bins == 0 {
        return Err(Error::InvalidInput("need at least one angular bin".into()));
    }
    let mut sums = vec![[0.0f64; 2]; angle_bins];
    let mut counts = vec![0usize; angle_bins];
    let mut far = 0;
    for [a, b] in &cloud.points {
        let r = a.hypot(*b);
        if r < min_radius || r == 0.0 {
            continue;
        }
        far += 1;
        let u = [-a / r, -b / r];
        let theta = u[1].atan2(u[0]);
        let k = (((theta + PI) / (2.0 * PI)) * angle_bins as f64).floor() as usize % angle_bins;
        sums[k][0] += u[0];
        sums[k][1] += u[1];
        counts[k] += 1;
    }
    let directions = (0..angle_bins)
        .filter(|&k| counts[k] > 0)
        .map(|k| {
            let n = sums[k][0].hypot(sums[k][1]);
            LimitDirection { direction: [sums[k][0] / n, sums[k][1] / n], bin: k, count: counts[k] }
        })
        .collect();
    let warning = (far == 0).then(|| format!("no points at radius >= {min_radius}"));
    Ok(LimitDirections { directions, far_points: far, warning })
}

/// Angle in degrees between two nonzero plane vectors.
pub fn angle_between_deg(a: [f64; 2], b: [f64; 2]) -> f64 {
    let dot = a[0] * b[0] + a[1] * b[1];
    let cross = a[0] * b[1] - a[1] * b[0];
    cross.abs().atan2(dot).to_degrees()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse_poly, CoefficientDomain};

    fn poly(s: &str) -> LaurentPoly {
        parse_poly(s, Some(2), CoefficientDomain::RationalField).unwrap()
    }

    #[test]
    fn diagonal_amoeba() {
        let cloud = amoeba_sample(&poly("y - x"), &[-2.0, 0.5, 3.0], 5, Fibration::X).unwrap();
        assert_eq!(cloud.points.len(), 15);
        for [a, b] in &cloud.points {
            assert!((a - b).abs() < 1e-9);
        }
        let cloud = amoeba_sample(&poly("y - x"), &[-20.0, 20.0], 4, Fibration::X).unwrap();
        let dirs = log_limit_directions(&cloud, 15.0, 36).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for d in &dirs.directions {
            let near = angle_between_deg(d.direction, [s, s]).min(angle_between_deg(d.direction, [-s, -s]));
            assert!(near < 1e-6);
        }
        assert_eq!(dirs.directions.len(), 2);
    }

    #[test]
    fn line_tentacles_at_large_modulus() {
        let cloud = amoeba_sample(&poly("x + y + 1"), &[10.0], 16, Fibration::X).unwrap();
        for [_, b] in &cloud.points {
            assert!((b - 10.0).abs() < 1e-3 || b.abs() < 1e-3);
        }
    }

    #[test]
    fn constant_fiber() {
        let cloud = amoeba_sample(&poly("y - 6"), &[-1.0, 4.0], 3, Fibration::X).unwrap();
        for [_, b] in &cloud.points {
            assert!((b - 6f64.ln()).abs() < 1e-12);
        }
        assert!(amoeba_sample(&poly("x - 6"), &[1.0], 3, Fibration::X).is_err());
        assert!(amoeba_sample(&poly("y - 6"), &[1.0], 3, Fibration::Y).is_err());
        // the y fibration is skipped silently when sampling both
        assert_eq!(amoeba_sample(&poly("y - 6"), &[1.0], 3, Fibration::Both).unwrap().points.len(), 3);
    }

    #[test]
    fn empty_far_set_warns() {
        let cloud = amoeba_sample(&poly("x + y + 1"), &[0.5], 4, Fibration::X).unwrap();
        let dirs = log_limit_directions(&cloud, 100.0, 12).unwrap();
        assert!(dirs.directions.is_empty());
        assert!(dirs.warning.is_some());
    }

    #[test]
    fn roots_are_sorted_and_deterministic() {
        let f = poly("y^3 - 2*x*y + x^2");
        let a = amoeba_sample(&f, &[-3.0, 0.0, 3.0], 7, Fibration::Both).unwrap();
        let b = amoeba_sample(&f, &[-3.0, 0.0, 3.0], 7, Fibration::Both).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_csv().lines().next(), Some("s,ln_abs_y"));
    }
}
