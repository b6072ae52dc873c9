//! Singular curves and their curvature invariants.

mod curvature;
mod fold;
mod special;
mod trace;

pub use curvature::{
    kappa_general, kappa_general_fd, kappa_general_point, kappa_s_closed, kappa_s_closed_point, singular_direction_jet,
    xi_f_norm_closed, InvariantSample,
};
pub use fold::{fold_symmetry_test, FoldVerdict, FOLD_GRID};
pub use special::{special_points, SpecialPoint};
pub use trace::{project, trace_points, trace_singular_curve, CurveSample, SingularCurve};

use crate::cmc::integrate_cmc;
use crate::error::{Error, Result};
use crate::maxface;
use crate::quadrature::PathSpec;
use crate::surface_core::{Pipeline, SurfaceData, Vec3};
use crate::wirtinger::Complex;

/// Default arc-length step in the parameter plane for tracing.
pub const DEFAULT_STEP: f64 = 0.01;
/// Default bound on steps per tracing direction.
pub const DEFAULT_MAX_STEPS: usize = 20_000;

fn increment(data: &SurfaceData, a: Complex, b: Complex) -> Result<Vec3> {
    let path = PathSpec::segment(a, b);
    match data.pipeline() {
        Pipeline::Maxface => maxface::integrate(data, &path),
        Pipeline::Cmc { .. } => integrate_cmc(data, &path),
    }
}

/// Image points `f(γ(t_k))` up to a common translation.
pub fn locus_points(curve: &SingularCurve, data: &SurfaceData) -> Result<Vec<Vec3>> {
    let mut out = Vec::with_capacity(curve.samples.len());
    let mut acc = Vec3::zeros();
    let mut prev: Option<Complex> = None;
    for s in &curve.samples {
        if let Some(a) = prev {
            acc += increment(data, a, s.z)?;
        }
        out.push(acc);
        prev = Some(s.z);
    }
    Ok(out)
}

/// Curvature of the image curve `f∘γ` by five-point differences in the sample index.
///
/// Samples without two neighbours on each side (ends of open curves) get `None`.
pub fn locus_curvature(curve: &SingularCurve, data: &SurfaceData) -> Result<Vec<Option<f64>>> {
    let n = curve.samples.len();
    if n < 5 {
        return Err(Error::TooFewSamples { got: n, need: 5 });
    }
    let pts = locus_points(curve, data)?;
    let at = |k: usize, off: isize| -> Option<Vec3> {
        let j = k as isize + off;
        if curve.closed {
            Some(pts[j.rem_euclid(n as isize) as usize])
        } else if (0..n as isize).contains(&j) {
            Some(pts[j as usize])
        } else {
            None
        }
    };
    Ok((0..n)
        .map(|k| {
            let (m2, m1, c, p1, p2) = (at(k, -2)?, at(k, -1)?, at(k, 0)?, at(k, 1)?, at(k, 2)?);
            let d1 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / 12.0;
            let d2 = (-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / 12.0;
            let speed = d1.norm();
            Some(d1.cross(&d2).norm() / speed.powi(3))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};

    use super::*;
    use crate::exprlang::{parse, DomainSpec};

    #[test]
    fn enneper_locus_curvature() {
        let d = SurfaceData::holomorphic(
            parse("z").unwrap(),
            parse("1").unwrap(),
            DomainSpec::Disk { center: [0.0, 0.0], radius: 1.5 },
        )
        .unwrap();
        let curve = trace_singular_curve(&d, Complex::new(1.1, 0.0), DEFAULT_STEP, DEFAULT_MAX_STEPS).unwrap();
        let nearest = |t: f64| curve.samples.iter().min_by(|a, b| (a.t - t).abs().total_cmp(&(b.t - t).abs())).unwrap();
        for t in [FRAC_PI_4, FRAC_PI_8] {
            let s = nearest(t);
            let want = 1.0 / (4.0 * (2.0 * s.t).sin().abs());
            assert!((s.kappa_locus.unwrap() - want).abs() < 2e-4 * want, "{s:?}");
        }
    }

    #[test]
    fn too_few_samples() {
        let d = SurfaceData::holomorphic(
            parse("z").unwrap(),
            parse("1").unwrap(),
            DomainSpec::Disk { center: [0.0, 0.0], radius: 1.5 },
        )
        .unwrap();
        let mut curve = trace_singular_curve(&d, Complex::new(1.1, 0.0), 0.5, 100).unwrap();
        curve.samples.truncate(4);
        assert!(matches!(locus_curvature(&curve, &d), Err(Error::TooFewSamples { got: 4, need: 5 })));
    }
}
