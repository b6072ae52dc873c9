//! Points on a traced curve where `Re φ` or `Im φ` vanishes.

use serde::Serialize;

use crate::classify::{classify_point, ClassifyReport};
use crate::error::Result;
use crate::surface_core::{PointData, SurfaceData, Tolerances};
use crate::wirtinger::Complex;

use super::curvature::singular_direction_jet;
use super::trace::{project, SingularCurve};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpecialPoint {
    /// `"re_phi"` or `"im_phi"`.
    pub vanishing: &'static str,
    pub report: ClassifyReport,
}

#[derive(Clone, Copy)]
enum Part {
    Re,
    Im,
}

impl Part {
    fn name(self) -> &'static str {
        match self {
            Part::Re => "re_phi",
            Part::Im => "im_phi",
        }
    }

    fn of(self, c: Complex) -> f64 {
        match self {
            Part::Re => c.re,
            Part::Im => c.im,
        }
    }
}

struct Walker<'a> {
    data: &'a SurfaceData,
    tol: Tolerances,
}

impl Walker<'_> {
    /// Point at parameter `s ∈ [0, 1]` between `a` and `b`, projected onto the singular set.
    fn at(&self, a: Complex, b: Complex, s: f64) -> Result<Complex> {
        project(self.data, a + (b - a) * s, &self.tol)
    }

    fn value(&self, part: Part, z: Complex) -> Result<f64> {
        Ok(part.of(self.data.point(z)?.phi()?))
    }

    /// Derivative of `part` along the singular direction.
    fn slope(&self, part: Part, z: Complex) -> Result<f64> {
        let p = self.data.point(z)?;
        let phi = p.phi_jet()?;
        let jet = match part {
            Part::Re => phi.re(),
            Part::Im => phi.im(),
        };
        let zeta = singular_direction_jet(&p)?.value();
        Ok(PointData::directional(zeta, &jet).value().re)
    }

    /// Sign change of `f` between `a` and `b`, by bisection on the projected chord.
    fn bisect(&self, f: impl Fn(Complex) -> Result<f64>, a: Complex, b: Complex) -> Result<Complex> {
        let (mut lo, mut hi) = (0.0, 1.0);
        let sign_lo = f(a)?.signum();
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            let z = self.at(a, b, mid)?;
            let v = f(z)?;
            if v == 0.0 {
                return Ok(z);
            }
            if v.signum() == sign_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        self.at(a, b, 0.5 * (lo + hi))
    }
}

/// Locates sign changes and touching zeros of `Re φ` and `Im φ` between samples,
/// refines them on the singular set and classifies them.
pub fn special_points(data: &SurfaceData, curve: &SingularCurve) -> Result<Vec<SpecialPoint>> {
    let walker = Walker { data, tol: Tolerances::default() };
    let n = curve.samples.len();
    let zs: Vec<Complex> = curve.samples.iter().map(|s| s.z).collect();
    let phis = zs.iter().map(|&z| data.point(z)?.phi()).collect::<Result<Vec<_>>>()?;
    let pairs = if curve.closed { n } else { n.saturating_sub(1) };
    let mut found: Vec<(Part, Complex)> = Vec::new();
    for part in [Part::Re, Part::Im] {
        let v: Vec<f64> = phis.iter().map(|&p| part.of(p)).collect();
        for k in 0..pairs {
            let j = (k + 1) % n;
            if v[k] == 0.0 {
                found.push((part, zs[k]));
            } else if v[k] * v[j] < 0.0 {
                found.push((part, walker.bisect(|z| walker.value(part, z), zs[k], zs[j])?));
            }
        }
        if !curve.closed && n > 0 && v[n - 1] == 0.0 {
            found.push((part, zs[n - 1]));
        }
        let interior = if curve.closed { 0..n } else { 1..n.saturating_sub(1) };
        for k in interior {
            let (i, j) = ((k + n - 1) % n, (k + 1) % n);
            let local_min = v[k].abs() < v[i].abs() && v[k].abs() <= v[j].abs();
            if local_min && v[k] * v[i] > 0.0 && v[k] * v[j] > 0.0 {
                let slope = |z| walker.slope(part, z);
                let (a, b) = if slope(zs[i])? * slope(zs[k])? <= 0.0 { (zs[i], zs[k]) } else { (zs[k], zs[j]) };
                let z = walker.bisect(slope, a, b)?;
                if walker.value(part, z)?.abs() < walker.tol.zero {
                    found.push((part, z));
                }
            }
        }
    }
    let spacing = zs.windows(2).map(|w| (w[1] - w[0]).norm()).fold(f64::INFINITY, f64::min);
    let mut out: Vec<SpecialPoint> = Vec::new();
    for (part, z) in found {
        if out.iter().any(|s| s.vanishing == part.name() && (s.report.point - z).norm() < 0.25 * spacing) {
            continue;
        }
        let report = classify_point(&data.point(z)?, &walker.tol)?;
        out.push(SpecialPoint { vanishing: part.name(), report });
    }
    out.sort_by(|a, b| {
        let key = |s: &SpecialPoint| s.report.point.arg();
        key(a).total_cmp(&key(b)).then(a.vanishing.cmp(b.vanishing))
    });
    Ok(out)
}
