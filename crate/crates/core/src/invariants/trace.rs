//! Predictor-corrector tracing of the singular set `{λ̂ = 0}`.

use serde::Serialize;

use crate::classify::{classify_point, point_ser, SingularityType};
use crate::error::{Error, Result};
use crate::surface_core::{SurfaceData, Tolerances};
use crate::wirtinger::Complex;

use super::curvature::{kappa_general_point, kappa_s_closed_point};
use super::locus_curvature;

const I: Complex = Complex::new(0.0, 1.0);
const NEWTON_ITERATIONS: usize = 50;

/// One traced point with its invariants.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurveSample {
    pub t: f64,
    #[serde(serialize_with = "point_ser")]
    pub z: Complex,
    #[serde(serialize_with = "point_ser")]
    pub xi: Complex,
    #[serde(serialize_with = "point_ser")]
    pub eta: Complex,
    pub kappa_s_closed: Option<f64>,
    pub kappa_s_general: Option<f64>,
    pub kappa_nu: Option<f64>,
    pub kappa_locus: Option<f64>,
    pub epsilon_gamma: Option<f64>,
    #[serde(rename = "type")]
    pub singularity: SingularityType,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularCurve {
    pub samples: Vec<CurveSample>,
    pub closed: bool,
}

/// `(λ̂, λ̂_z, g)` at `z`.
fn identifier(data: &SurfaceData, z: Complex) -> Result<(f64, Complex, Complex)> {
    let p = data.point(z)?;
    Ok((p.lambda_hat(), p.lambda_hat_z(), p.g_value()))
}

fn left_domain(e: Error) -> Error {
    match e {
        Error::OutsideDomain { at } => Error::LeftDomain { at },
        other => other,
    }
}

/// Newton projection onto `λ̂ = 0` along the gradient.
pub fn project(data: &SurfaceData, z: Complex, tol: &Tolerances) -> Result<Complex> {
    let mut z = z;
    for _ in 0..NEWTON_ITERATIONS {
        let (l, lz, _) = identifier(data, z).map_err(left_domain)?;
        if lz.norm() < tol.zero {
            return Err(Error::DegenerateOnCurve { at: z });
        }
        if l.abs() <= 1e-15 {
            return Ok(z);
        }
        let delta = -l * lz.conj() / (2.0 * lz.norm_sqr());
        z += delta;
        if delta.norm() <= 1e-16 * z.norm().max(1.0) {
            let (l, ..) = identifier(data, z).map_err(left_domain)?;
            if l.abs() < tol.projection {
                return Ok(z);
            }
            break;
        }
    }
    let (l, ..) = identifier(data, z).map_err(left_domain)?;
    if l.abs() < tol.projection {
        Ok(z)
    } else {
        Err(Error::NonConvergence(format!("projection onto the singular set stalled at {z} with |λ̂| = {:e}", l.abs())))
    }
}

/// Unit tangent of the level set and `dt/ds` for the field `ζ = i·conj(λ̂_z)/|g|²`.
fn field(data: &SurfaceData, z: Complex, tol: &Tolerances) -> Result<(Complex, f64)> {
    let (_, lz, g) = identifier(data, z)?;
    let zeta = I * lz.conj() / g.norm_sqr();
    let speed = zeta.norm();
    if lz.norm() < tol.zero || !speed.is_finite() {
        return Err(Error::DegenerateOnCurve { at: z });
    }
    Ok((zeta / speed, 1.0 / speed))
}

enum Stop {
    Closed { length: f64 },
    Open,
}

/// Marches from `(z0, 0)` with signed arc-length step `h`.
fn march(
    data: &SurfaceData,
    z0: Complex,
    h: f64,
    max_steps: usize,
    detect_closure: bool,
    tol: &Tolerances,
) -> Result<(Vec<(f64, Complex)>, Stop)> {
    let mut out = vec![(0.0, z0)];
    let (mut z, mut t) = (z0, 0.0);
    let mut travelled = 0.0;
    for k in 1..=max_steps {
        let step = || -> Result<(Complex, f64)> {
            let (d1, s1) = field(data, z, tol)?;
            let (d2, s2) = field(data, z + d1 * (h / 2.0), tol)?;
            let (d3, s3) = field(data, z + d2 * (h / 2.0), tol)?;
            let (d4, s4) = field(data, z + d3 * h, tol)?;
            let zn = z + (d1 + 2.0 * d2 + 2.0 * d3 + d4) * (h / 6.0);
            let tn = t + (s1 + 2.0 * s2 + 2.0 * s3 + s4) * (h / 6.0);
            Ok((project(data, zn, tol)?, tn))
        };
        let (zn, tn) = match step() {
            Ok(v) => v,
            Err(Error::OutsideDomain { .. } | Error::LeftDomain { .. }) => return Ok((out, Stop::Open)),
            Err(e) => return Err(e),
        };
        if detect_closure && k >= 3 {
            let seg = zn - z;
            let s = (((z0 - z) * seg.conj()).re / seg.norm_sqr()).clamp(0.0, 1.0);
            if (z + seg * s - z0).norm() < h.abs() / 2.0 {
                return Ok((out, Stop::Closed { length: travelled + s * seg.norm() }));
            }
        }
        travelled += (zn - z).norm();
        z = zn;
        t = tn;
        out.push((t, z));
    }
    Ok((out, Stop::Open))
}

/// Traced points `(t, z)` of the component through `seed`, and whether it closes.
///
/// Closed components are retraced with the step adjusted to divide the length evenly.
pub fn trace_points(
    data: &SurfaceData,
    seed: Complex,
    step: f64,
    max_steps: usize,
) -> Result<(Vec<(f64, Complex)>, bool)> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Invalid(format!("trace step must be positive, got {step}")));
    }
    let tol = Tolerances::default();
    let z0 = project(data, seed, &tol)?;
    let (forward, stop) = march(data, z0, step, max_steps, true, &tol)?;
    if let Stop::Closed { length } = stop {
        let n = ((length / step).round() as usize).max(3);
        let (mut points, _) = march(data, z0, length / n as f64, n, false, &tol)?;
        if points.len() == n + 1 {
            points.pop();
            return Ok((points, true));
        }
    }
    let (backward, _) = march(data, z0, -step, max_steps, false, &tol)?;
    let mut points: Vec<_> = backward.into_iter().skip(1).rev().collect();
    points.extend(forward);
    Ok((points, false))
}

/// Traces the singular curve through `seed` and evaluates the invariants at every sample.
pub fn trace_singular_curve(data: &SurfaceData, seed: Complex, step: f64, max_steps: usize) -> Result<SingularCurve> {
    let (points, closed) = trace_points(data, seed, step, max_steps)?;
    let tol = Tolerances::default();
    let optional = |r: Result<f64>| match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::NotFirstKind { .. }) => Ok(None),
        Err(e) => Err(e),
    };
    let mut samples = Vec::with_capacity(points.len());
    for (t, z) in points {
        let p = data.point(z)?;
        if p.g_z().norm() < tol.zero {
            return Err(Error::DegenerateOnCurve { at: z });
        }
        let general = match kappa_general_point(&p, &tol) {
            Ok(s) => Some(s),
            Err(Error::NotFirstKind { .. }) => None,
            Err(e) => return Err(e),
        };
        samples.push(CurveSample {
            t,
            z,
            xi: p.xi()?,
            eta: p.eta()?,
            kappa_s_closed: optional(kappa_s_closed_point(&p, &tol))?,
            kappa_s_general: general.as_ref().map(|s| s.kappa_s),
            kappa_nu: general.as_ref().map(|s| s.kappa_nu),
            kappa_locus: None,
            epsilon_gamma: general.as_ref().map(|s| s.epsilon_gamma),
            singularity: classify_point(&p, &tol)?.singularity,
        });
    }
    let mut curve = SingularCurve { samples, closed };
    if curve.samples.len() >= 5 {
        let kappa = locus_curvature(&curve, data)?;
        for (s, k) in curve.samples.iter_mut().zip(kappa) {
            s.kappa_locus = k;
        }
    }
    Ok(curve)
}
