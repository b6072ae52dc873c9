//! Weierstrass-type pipeline: construction of `f`, Gaussian curvatures and the
//! `ψ`/`a` functions of the cuspidal `S_k` analysis.

use serde::Serialize;

use crate::classify::Criteria;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_form, PathSpec};
use crate::surface_core::{CVec3, Pipeline, PointData, SurfaceData, Tolerances, Vec3};
use crate::wirtinger::{Complex, JetError, DIVISION_EPS};

const I: Complex = Complex::new(0.0, 1.0);

fn require_maxface(data: &SurfaceData) -> Result<()> {
    match data {
        SurfaceData::Holomorphic { .. } => Ok(()),
        SurfaceData::Harmonic { .. } => Err(Error::WrongPipeline { expected: "holomorphic (maxface)" }),
    }
}

/// `f(end) - f(start)` along `path` by adaptive Gauss–Legendre quadrature.
pub fn integrate(data: &SurfaceData, path: &PathSpec) -> Result<Vec3> {
    require_maxface(data)?;
    path.check_inside(data.domain())?;
    integrate_form(path, |z| data.f_z_value(z), Tolerances::default().quadrature)
}

/// `K_E = -4|g_z|² / (((1+|g|²)² + 4|g|²)² |ω̂|²)`.
pub fn k_e(p: &PointData) -> Result<f64> {
    let w2 = p.omega_value().norm_sqr();
    if w2.sqrt() < DIVISION_EPS {
        return Err(JetError::DivisionByZero.into());
    }
    Ok(-4.0 * p.g_z().norm_sqr() / (p.normal_denominator().powi(2) * w2))
}

pub fn gaussian_curvature_e(data: &SurfaceData, z: Complex) -> Result<f64> {
    require_maxface(data)?;
    k_e(&data.point(z)?)
}

/// `K_L = |g_z|² / ((1-|g|²)⁴ |ω̂|²)`, refused within `on_set` of the singular set.
pub fn k_l(p: &PointData, on_set: f64) -> Result<f64> {
    if p.lambda_hat().abs() < on_set {
        return Err(Error::OnSingularSet { at: p.z });
    }
    let w2 = p.omega_value().norm_sqr();
    if w2.sqrt() < DIVISION_EPS {
        return Err(JetError::DivisionByZero.into());
    }
    Ok(p.g_z().norm_sqr() / (p.lambda_hat().powi(4) * w2))
}

pub fn gaussian_curvature_l(data: &SurfaceData, z: Complex) -> Result<f64> {
    require_maxface(data)?;
    k_l(&data.point(z)?, Tolerances::default().on_set)
}

/// `ν_z` from the closed form
/// `g_z/√D (ḡ(1+ρ̂(1+|g|²)), 2ρ̂ḡ Re g + 1, 2ρ̂ḡ Im g - i)` with
/// `ρ̂ = -(3+|g|²)/D`, `D = (1+|g|²)² + 4|g|²`. Valid for holomorphic `g`.
pub fn normal_z_closed(p: &PointData) -> CVec3 {
    let g = p.g_value();
    let gb = g.conj();
    let m = g.norm_sqr();
    let d = p.normal_denominator();
    let rho = -(3.0 + m) / d;
    let one = Complex::new(1.0, 0.0);
    CVec3::new(gb * (1.0 + rho * (1.0 + m)), 2.0 * rho * gb * g.re + one, 2.0 * rho * gb * g.im - I)
        * (p.g_z() / d.sqrt())
}

/// Quantities of the cuspidal `S_k` analysis at a singular point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PsiReport {
    /// `det(ξf, ν, dν(η))` with `dν` from the closed-form `ν_z`.
    pub psi_det: f64,
    /// `-|ω̂|² Im φ Re φ`.
    pub psi_closed: f64,
    /// `[Re φ, Im((g/g_z)φ_z), Re((g/g_z)((g/g_z)φ_z)_z)]`.
    pub conditions: [f64; 3],
    /// `32|ω̂|² (Im φ)⁵ Re((g/g_z)((g/g_z)φ_z)_z)`.
    pub a_value: f64,
    /// Largest deviation between the closed-form `ν_z` and the jet-propagated one.
    pub normal_z_mismatch: f64,
}

/// Evaluates the report on point data of the maxface pipeline.
pub fn psi_report(p: &PointData, tol: &Tolerances) -> Result<PsiReport> {
    if p.pipeline != Pipeline::Maxface {
        return Err(Error::WrongPipeline { expected: "holomorphic (maxface)" });
    }
    if p.lambda_hat().abs() >= tol.on_set {
        return Err(Error::NotSingular { at: p.z, lambda_hat: p.lambda_hat() });
    }
    let c = Criteria::at(p, tol)?;
    let phi = c.phi;
    let w2 = p.omega_value().norm_sqr();

    let xi = p.xi()?;
    let eta = p.eta()?;
    let xi_f = (p.f_z() * xi).map(|v| 2.0 * v.re);
    let nu_z = normal_z_closed(p);
    let eta_nu = (nu_z * eta).map(|v| 2.0 * v.re);
    let nu = p.normal();
    let psi_det = xi_f.dot(&nu.cross(&eta_nu));

    let jets = p.normal_jets()?;
    let normal_z_mismatch = (0..3).map(|k| (jets[k].partial(1, 0) - nu_z[k]).norm()).fold(0.0, f64::max);

    Ok(PsiReport {
        psi_det,
        psi_closed: -w2 * phi.im * phi.re,
        conditions: [phi.re, c.s1.im, c.s2.re],
        a_value: 32.0 * w2 * phi.im.powi(5) * c.s2.re,
        normal_z_mismatch,
    })
}

pub fn psi_analysis(data: &SurfaceData, p: Complex) -> Result<PsiReport> {
    require_maxface(data)?;
    psi_report(&data.point(p)?, &Tolerances::default())
}
