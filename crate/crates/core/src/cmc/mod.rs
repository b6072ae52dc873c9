//! Kenmotsu-type pipeline for extended harmonic maps: harmonicity, closedness,
//! gated construction, Gaussian curvature and the cuspidal butterfly criterion.

mod harmonic_oracle;

pub use harmonic_oracle::{default_seed, oracle_surface, HarmonicMapSolver, SpectralField, ORACLE_HALF_WIDTH};

use serde::Serialize;

use crate::classify::{butterfly_test, ButterflyTest};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_form, PathSpec};
use crate::surface_core::{omega_formula, CVec3, OmegaMode, PointData, SurfaceData, Tolerances, Vec3};
use crate::wirtinger::{Complex, Jet, JetError, DIVISION_EPS};

fn require_cmc(data: &SurfaceData) -> Result<()> {
    match data {
        SurfaceData::Harmonic { .. } => Ok(()),
        SurfaceData::Holomorphic { .. } => Err(Error::WrongPipeline { expected: "harmonic (cmc)" }),
    }
}

/// `ω̂ = ḡ_z / (1 - |g|²)²` at the point of `g`.
pub fn omega_from_g(g: &Jet, at: Complex, tol: &Tolerances) -> Result<Complex> {
    Ok(omega_formula(g, at, tol.on_set)?.value())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HarmonicityReport {
    /// `g_zz̄ + 2(1 - |g|²) ḡ g_z conj(ω̂)`.
    pub residual: Complex,
    pub omega_value: Complex,
    pub omega_nonzero: bool,
    /// `g² ω̂ ≠ 0`.
    pub g2omega_nonzero: bool,
}

/// Residual of the harmonic map equation from a jet of `g` (order ≥ 2) and `ω̂`.
pub fn harmonicity_from_jets(g: &Jet, omega: Complex, tol: &Tolerances) -> HarmonicityReport {
    let gv = g.value();
    let residual = g.partial(1, 1) + 2.0 * (1.0 - gv.norm_sqr()) * gv.conj() * g.partial(1, 0) * omega.conj();
    HarmonicityReport {
        residual,
        omega_value: omega,
        omega_nonzero: omega.norm() > tol.zero,
        g2omega_nonzero: (gv * gv * omega).norm() > tol.zero,
    }
}

pub fn harmonicity_residual(data: &SurfaceData, z: Complex) -> Result<HarmonicityReport> {
    let SurfaceData::Harmonic { g, omega, .. } = data else {
        return Err(Error::WrongPipeline { expected: "harmonic (cmc)" });
    };
    if !data.domain().contains(z) {
        return Err(Error::OutsideDomain { at: z });
    }
    let tol = Tolerances::default();
    let gj = g.jet(z, 2)?;
    let w = match omega {
        OmegaMode::Formula => omega_from_g(&gj, z, &tol)?,
        OmegaMode::Explicit(f) => f.value(z)?,
    };
    Ok(harmonicity_from_jets(&gj, w, &tol))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClosednessReport {
    /// `∂_z̄ f_z - ∂_z f_z̄`.
    pub residual: CVec3,
}

impl ClosednessReport {
    pub fn magnitude(&self) -> f64 {
        self.residual.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

pub fn closedness_from_point(p: &PointData) -> ClosednessReport {
    let jets = p.f_z_jets();
    ClosednessReport {
        residual: CVec3::from_fn(|k, _| {
            let d = jets[k].partial(0, 1);
            d - d.conj()
        }),
    }
}

pub fn closedness_residual(data: &SurfaceData, z: Complex) -> Result<ClosednessReport> {
    Ok(closedness_from_point(&data.point(z)?))
}

/// Samples per path segment for the closedness gate.
pub const CLOSEDNESS_SAMPLES: usize = 16;

/// `f(end) - f(start)` for harmonic data, after checking closedness along the path.
pub fn integrate_cmc(data: &SurfaceData, path: &PathSpec) -> Result<Vec3> {
    require_cmc(data)?;
    path.check_inside(data.domain())?;
    let tol = Tolerances::default();
    let mut worst = (0.0, path.start());
    let mut check = |z: Complex| -> Result<()> {
        let r = closedness_residual(data, z)?.magnitude();
        if r > worst.0 {
            worst = (r, z);
        }
        Ok(())
    };
    check(path.start())?;
    for w in path.points.windows(2) {
        for k in 1..=CLOSEDNESS_SAMPLES {
            check(w[0] + (w[1] - w[0]) * (k as f64 / CLOSEDNESS_SAMPLES as f64))?;
        }
    }
    if worst.0 > tol.closedness {
        return Err(Error::NotClosed { worst: worst.0, at: worst.1 });
    }
    integrate_form(path, |z| data.f_z_value(z), tol.quadrature)
}

/// `K_E = (|g_z̄|² - |g_z|²) H² / (((1+|g|²)² + 4|g|²)² |ω̂|²)`.
pub fn k_e_cmc(p: &PointData, h: f64) -> Result<f64> {
    let w2 = p.omega_value().norm_sqr();
    if w2.sqrt() < DIVISION_EPS {
        return Err(JetError::DivisionByZero.into());
    }
    Ok((p.g_zbar().norm_sqr() - p.g_z().norm_sqr()) * h * h / (p.normal_denominator().powi(2) * w2))
}

pub fn gaussian_curvature_e_cmc(data: &SurfaceData, z: Complex) -> Result<f64> {
    let SurfaceData::Harmonic { h, .. } = data else {
        return Err(Error::WrongPipeline { expected: "harmonic (cmc)" });
    };
    k_e_cmc(&data.point(z)?, *h)
}

/// Cuspidal butterfly criterion at a non-degenerate singular point.
pub fn butterfly_test_cmc(data: &SurfaceData, p: Complex) -> Result<ButterflyTest> {
    let point = data.point(p)?;
    let tol = Tolerances::default();
    if point.lambda_hat().abs() >= tol.on_set {
        return Err(Error::NotSingular { at: p, lambda_hat: point.lambda_hat() });
    }
    butterfly_test(&point, &tol)
}
