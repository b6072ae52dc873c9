//! Singular curvature and limiting normal curvature at first-kind points.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::surface_core::{Pipeline, PointData, SurfaceData, Tolerances, Vec3};
use crate::wirtinger::{Complex, Jet};

const I: Complex = Complex::new(0.0, 1.0);

fn first_kind_phi(p: &PointData, tol: &Tolerances) -> Result<Complex> {
    let lambda_hat = p.lambda_hat();
    if lambda_hat.abs() >= tol.on_set {
        return Err(Error::NotSingular { at: p.z, lambda_hat });
    }
    let phi = p.phi()?;
    if phi.im.abs() < tol.zero {
        return Err(Error::NotFirstKind { at: p.z, im_phi: phi.im });
    }
    Ok(phi)
}

/// Closed-form `κ_s`: `-|g_z|²/(4|Im φ||ω̂|²)` for maxfaces and
/// `-|H||g_z|²/(8|Im φ||ω̂|²)` for the CMC pipeline.
pub fn kappa_s_closed_point(p: &PointData, tol: &Tolerances) -> Result<f64> {
    let phi = first_kind_phi(p, tol)?;
    let base = p.g_z().norm_sqr() / (phi.im.abs() * p.omega_value().norm_sqr());
    Ok(match p.pipeline {
        Pipeline::Maxface => -base / 4.0,
        Pipeline::Cmc { h } => -h.abs() * base / 8.0,
    })
}

pub fn kappa_s_closed(data: &SurfaceData, p: Complex) -> Result<f64> {
    kappa_s_closed_point(&data.point(p)?, &Tolerances::default())
}

/// `κ_s`, `κ_ν` and `ε_γ` from the derivative formula, with intermediates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvariantSample {
    pub kappa_s: f64,
    pub kappa_nu: f64,
    pub epsilon_gamma: f64,
    /// `det(ξf, ξξf, ν)`.
    pub determinant: f64,
    /// `|ξf|`.
    pub xi_f_norm: f64,
    pub xi_f: Vec3,
    pub xi_xi_f: Vec3,
    /// `det(γ', η)`.
    pub det_tangent_null: f64,
    /// `η λ̂`.
    pub eta_lambda_hat: f64,
}

/// The tangent field `ζ = i·conj(λ̂_z)/|g|²` of the level sets of `λ̂`, as a jet.
///
/// On `|g| = 1` with `g_z̄ = 0` this is `i·conj(g_z/g)`.
pub fn singular_direction_jet(p: &PointData) -> Result<Jet> {
    let lz = p.lambda_hat_jet().dz();
    Ok(lz.conj().try_div(&p.g.abs2())? * I)
}

/// Evaluates `κ_s = ε_γ det(ξf, ξξf, ν)/|ξf|³` and `κ_ν = ⟨ξξf, ν⟩/|ξf|²` from jets.
///
/// `ηf` vanishes identically along the singular curve, so `ξf` and `ξξf` are formed with
/// `ζ - aη` (`a` the real coefficient of `η` in `ζ`) and `⟨ξξf, ν⟩` as `-⟨ξf, ξν⟩`. Both are
/// exact on the curve and keep full relative accuracy next to second-kind points.
pub fn kappa_general_point(p: &PointData, tol: &Tolerances) -> Result<InvariantSample> {
    first_kind_phi(p, tol)?;
    let zeta_jet = singular_direction_jet(p)?;
    let zeta = zeta_jet.value();
    let eta_jet = (p.g * p.omega).recip()? * I;
    let eta = eta_jet.value();
    let along = (zeta * eta.conj()).re / eta.norm_sqr();
    let reduced = zeta_jet - eta_jet * along;
    let fz = p.f_z_jets();
    let nu_jets = p.normal_jets()?;
    let mut xi_f = Vec3::zeros();
    let mut xi_xi_f = Vec3::zeros();
    let mut xi_nu = Vec3::zeros();
    for k in 0..3 {
        let first = (reduced * fz[k]).re() * 2.0;
        xi_f[k] = first.value().re;
        xi_xi_f[k] = PointData::directional(zeta, &first).value().re;
        xi_nu[k] = PointData::directional(zeta, &nu_jets[k]).value().re;
    }
    let nu = p.normal();
    let norm = xi_f.norm();
    let determinant = xi_f.dot(&xi_xi_f.cross(&nu));

    let det_tangent_null = (zeta.conj() * eta).im;
    let eta_lambda_hat = 2.0 * (eta * p.lambda_hat_z()).re;
    let sign = det_tangent_null * eta_lambda_hat;
    if sign == 0.0 || norm == 0.0 {
        return Err(Error::NotFirstKind { at: p.z, im_phi: p.phi()?.im });
    }
    let epsilon_gamma = sign.signum();
    Ok(InvariantSample {
        kappa_s: epsilon_gamma * determinant / norm.powi(3),
        kappa_nu: -xi_f.dot(&xi_nu) / (norm * norm),
        epsilon_gamma,
        determinant,
        xi_f_norm: norm,
        xi_f,
        xi_xi_f,
        det_tangent_null,
        eta_lambda_hat,
    })
}

pub fn kappa_general(data: &SurfaceData, p: Complex) -> Result<InvariantSample> {
    kappa_general_point(&data.point(p)?, &Tolerances::default())
}

/// Finite-difference oracle for `(κ_s, κ_ν)`: `ξξf` from central differences of the field
/// `ξf = 2 Re(ζ f_z)` along `ζ` with steps `h` and `h/2`, Richardson-extrapolated once.
pub fn kappa_general_fd(data: &SurfaceData, z: Complex, h: f64) -> Result<(f64, f64)> {
    let p = data.point(z)?;
    let exact = kappa_general_point(&p, &Tolerances::default())?;
    let xi_f_at = |w: Complex| -> Result<Vec3> {
        let q = data.point(w)?;
        let zeta = singular_direction_jet(&q)?.value();
        Ok(q.f_z().map(|c| 2.0 * (zeta * c).re))
    };
    let zeta = singular_direction_jet(&p)?.value();
    let unit = zeta / zeta.norm();
    let central = |s: f64| -> Result<Vec3> { Ok((xi_f_at(z + unit * s)? - xi_f_at(z - unit * s)?) / (2.0 * s)) };
    let xi_xi_f = (central(h / 2.0)? * 4.0 - central(h)?) / 3.0 * zeta.norm();
    let xi_f = xi_f_at(z)?;
    let nu = p.normal();
    let norm = xi_f.norm();
    Ok((exact.epsilon_gamma * xi_f.dot(&xi_xi_f.cross(&nu)) / norm.powi(3), xi_xi_f.dot(&nu) / (norm * norm)))
}

/// `|ξf|` in closed form: `2√2|Im φ||ω̂|²`, times `2/|H|` on the CMC pipeline.
pub fn xi_f_norm_closed(p: &PointData) -> Result<f64> {
    let base = 2.0 * std::f64::consts::SQRT_2 * p.phi()?.im.abs() * p.omega_value().norm_sqr();
    Ok(match p.pipeline {
        Pipeline::Maxface => base,
        Pipeline::Cmc { h } => 2.0 * base / h.abs(),
    })
}
