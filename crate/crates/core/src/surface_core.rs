//! Pointwise kernel shared by both pipelines: `f_z`, the unit normal, the signed
//! area density, the singularity identifier, `φ` and the direction fields.
//!
//! Directions in the parameter plane are complex numbers `ζ = a + ib`, read as the
//! vector field `a∂_u + b∂_v = ζ∂_z + ζ̄∂_z̄`. For a real function `F` this gives
//! `ζF = 2 Re(ζ F_z)`.

use std::sync::Arc;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::cmc::SpectralField;
use crate::error::{Error, Result};
use crate::exprlang::{
    check_holomorphic_data, eval_jet, eval_value, parse, validate_holomorphic, DataReport, DomainSpec, Expr,
    SurfaceConfig, SurfaceKind,
};
use crate::wirtinger::{Complex, Jet};

pub type Vec3 = Vector3<f64>;
pub type CVec3 = Vector3<Complex>;

const I: Complex = Complex::new(0.0, 1.0);

/// Numerical thresholds used across the crate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Zero test `τ₀` for classification conditions.
    pub zero: f64,
    /// Width of the ambiguity band `[τ₀, guard_factor·τ₀]`.
    pub guard_factor: f64,
    /// `|λ̂|` below which a point counts as singular.
    pub on_set: f64,
    /// `|λ̂|` enforced on traced curve samples.
    pub projection: f64,
    /// Largest accepted closedness residual of the CMC integrand.
    pub closedness: f64,
    /// Absolute tolerance of adaptive quadrature per segment.
    pub quadrature: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { zero: 1e-9, guard_factor: 10.0, on_set: 1e-8, projection: 1e-10, closedness: 1e-6, quadrature: 1e-12 }
    }
}

/// A function of `(z, z̄)` that can produce jets.
#[derive(Clone, Debug)]
pub enum Field {
    Expr(Expr),
    Spectral(Arc<SpectralField>),
}

impl Field {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(Field::Expr(parse(text)?))
    }

    pub fn jet(&self, z: Complex, order: usize) -> Result<Jet> {
        match self {
            Field::Expr(e) => Ok(eval_jet(e, z, order)?),
            Field::Spectral(s) => s.jet(z, order),
        }
    }

    pub fn value(&self, z: Complex) -> Result<Complex> {
        match self {
            Field::Expr(e) => Ok(eval_value(e, z)?),
            Field::Spectral(s) => Ok(s.jet(z, 0)?.value()),
        }
    }
}

impl From<Expr> for Field {
    fn from(e: Expr) -> Self {
        Field::Expr(e)
    }
}

/// How the weight `ω̂` of harmonic data is obtained.
#[derive(Clone, Debug)]
pub enum OmegaMode {
    /// `ω̂ = ḡ_z / (1 - |g|²)²`, undefined on `|g| = 1`.
    Formula,
    /// A user-supplied extension across `|g| = 1`.
    Explicit(Field),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "pipeline", rename_all = "lowercase")]
pub enum Pipeline {
    Maxface,
    Cmc { h: f64 },
}

impl Pipeline {
    /// Coefficient `c` in `f_z = c(-2g, 1+g², i(1-g²))ω̂`.
    pub fn coefficient(self) -> f64 {
        match self {
            Pipeline::Maxface => 0.5,
            Pipeline::Cmc { h } => 1.0 / h,
        }
    }
}

#[derive(Clone, Debug)]
pub enum SurfaceData {
    Holomorphic { g: Expr, omega_hat: Expr, domain: DomainSpec },
    Harmonic { g: Field, h: f64, omega: OmegaMode, domain: DomainSpec },
}

impl SurfaceData {
    /// Maxface data; both expressions must be free of `zbar`, `conj`, `re`, `im`, `abs2`.
    pub fn holomorphic(g: Expr, omega_hat: Expr, domain: DomainSpec) -> Result<Self> {
        domain.check().map_err(Error::Invalid)?;
        if let Err(violations) = validate_holomorphic(&g) {
            return Err(Error::NotHolomorphic { which: "g", violations });
        }
        if let Err(violations) = validate_holomorphic(&omega_hat) {
            return Err(Error::NotHolomorphic { which: "omega", violations });
        }
        Ok(SurfaceData::Holomorphic { g, omega_hat, domain })
    }

    pub fn harmonic(g: Field, h: f64, omega: OmegaMode, domain: DomainSpec) -> Result<Self> {
        domain.check().map_err(Error::Invalid)?;
        if h == 0.0 || !h.is_finite() {
            return Err(Error::InvalidMeanCurvature(h));
        }
        Ok(SurfaceData::Harmonic { g, h, omega, domain })
    }

    /// Builds data from a config. Sampled data-condition problems of holomorphic
    /// data are logged as warnings.
    pub fn from_config(config: &SurfaceConfig) -> Result<Self> {
        let g = parse(&config.g)?;
        match config.kind {
            SurfaceKind::Maxface => {
                let omega = config.omega.as_deref().ok_or_else(|| Error::Invalid("maxface needs omega".into()))?;
                let data = Self::holomorphic(g, parse(omega)?, config.domain.clone())?;
                for msg in data.check_data(crate::exprlang::DEFAULT_SAMPLE_GRID).messages() {
                    log::warn!("{msg}");
                }
                Ok(data)
            }
            SurfaceKind::Cmc => {
                let omega = match &config.omega {
                    Some(text) => OmegaMode::Explicit(Field::parse(text)?),
                    None => OmegaMode::Formula,
                };
                Self::harmonic(g.into(), config.h.unwrap_or(0.0), omega, config.domain.clone())
            }
        }
    }

    pub fn domain(&self) -> &DomainSpec {
        match self {
            SurfaceData::Holomorphic { domain, .. } | SurfaceData::Harmonic { domain, .. } => domain,
        }
    }

    pub fn pipeline(&self) -> Pipeline {
        match self {
            SurfaceData::Holomorphic { .. } => Pipeline::Maxface,
            SurfaceData::Harmonic { h, .. } => Pipeline::Cmc { h: *h },
        }
    }

    /// Sampled data conditions; harmonic data only gets an empty report.
    pub fn check_data(&self, n: usize) -> DataReport {
        match self {
            SurfaceData::Holomorphic { g, omega_hat, domain } => check_holomorphic_data(g, omega_hat, domain, n, 1e-9),
            SurfaceData::Harmonic { .. } => DataReport::default(),
        }
    }

    fn ensure_inside(&self, z: Complex) -> Result<()> {
        if self.domain().contains(z) {
            Ok(())
        } else {
            Err(Error::OutsideDomain { at: z })
        }
    }

    /// Jets of `g` (order 3) and `ω̂` (order 2) at `z`.
    pub fn point(&self, z: Complex) -> Result<PointData> {
        self.ensure_inside(z)?;
        match self {
            SurfaceData::Holomorphic { g, omega_hat, .. } => {
                let g = eval_jet(g, z, 3)?;
                let omega = eval_jet(omega_hat, z, 2)?;
                if omega.value().norm() == 0.0 {
                    return Err(Error::DataViolation { what: "omega vanishes".into(), at: z });
                }
                PointData::new(z, g, omega, Pipeline::Maxface)
            }
            SurfaceData::Harmonic { g, h, omega, .. } => {
                let g = g.jet(z, 3)?;
                let omega = match omega {
                    OmegaMode::Explicit(w) => w.jet(z, 2)?,
                    OmegaMode::Formula => omega_formula(&g, z, Tolerances::default().on_set).map_err(|e| match e {
                        Error::OnSingularSet { .. } => Error::ExplicitOmegaRequired { at: z },
                        other => other,
                    })?,
                };
                PointData::new(z, g, omega, Pipeline::Cmc { h: *h })
            }
        }
    }

    /// Value of `f_z` at `z` using only first-order information.
    pub fn f_z_value(&self, z: Complex) -> Result<CVec3> {
        let (g, omega) = match self {
            SurfaceData::Holomorphic { g, omega_hat, .. } => (eval_value(g, z)?, eval_value(omega_hat, z)?),
            SurfaceData::Harmonic { g, omega, .. } => match omega {
                OmegaMode::Explicit(w) => (g.value(z)?, w.value(z)?),
                OmegaMode::Formula => {
                    let gj = g.jet(z, 1)?;
                    let w = omega_formula(&gj, z, Tolerances::default().on_set)
                        .map_err(|_| Error::ExplicitOmegaRequired { at: z })?;
                    (gj.value(), w.value())
                }
            },
        };
        Ok(weierstrass_vector(g, self.pipeline().coefficient()) * omega)
    }

    pub fn frame(&self, z: Complex) -> Result<FrameSample> {
        self.point(z)?.frame()
    }

    pub fn identifier_gradient(&self, z: Complex) -> Result<(f64, f64)> {
        Ok(self.point(z)?.identifier_gradient())
    }
}

/// `ω̂ = ḡ_z / (1 - |g|²)²` as a jet of order one less than `g`.
pub fn omega_formula(g: &Jet, at: Complex, on_set: f64) -> Result<Jet> {
    let gbar = g.conj();
    let one_minus = (*g * gbar) * -1.0 + 1.0;
    if one_minus.value().norm() < on_set {
        return Err(Error::OnSingularSet { at });
    }
    Ok(gbar.dz().try_div(&(one_minus * one_minus))?)
}

/// `c(-2g, 1+g², i(1-g²))`.
pub fn weierstrass_vector(g: Complex, c: f64) -> CVec3 {
    let one = Complex::new(1.0, 0.0);
    CVec3::new(-2.0 * g, one + g * g, I * (one - g * g)) * Complex::new(c, 0.0)
}

fn real3(v: &CVec3) -> Vec3 {
    v.map(|c| c.re)
}

fn imag3(v: &CVec3) -> Vec3 {
    v.map(|c| c.im)
}

/// Local data at one point: jets of `g` and `ω̂` plus the pipeline.
///
/// Everything downstream is a function of this record, so synthetic jets can be
/// fed in directly.
#[derive(Clone, Copy, Debug)]
pub struct PointData {
    pub z: Complex,
    pub g: Jet,
    pub omega: Jet,
    pub pipeline: Pipeline,
}

/// Frame at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameSample {
    pub z: Complex,
    pub f_z: CVec3,
    pub f_zbar: CVec3,
    pub normal: Vec3,
    pub lambda: f64,
    pub lambda_hat: f64,
    pub phi: Complex,
    pub xi: Complex,
    pub eta: Complex,
}

impl PointData {
    /// Requires `g` of order 3 and `ω̂` of order at least 2.
    pub fn new(z: Complex, g: Jet, omega: Jet, pipeline: Pipeline) -> Result<Self> {
        if g.order() < 3 {
            return Err(Error::InsufficientJetOrder { need: 3, got: g.order() });
        }
        if omega.order() < 2 {
            return Err(Error::InsufficientJetOrder { need: 2, got: omega.order() });
        }
        Ok(Self { z, g, omega, pipeline })
    }

    pub fn g_value(&self) -> Complex {
        self.g.value()
    }

    pub fn g_z(&self) -> Complex {
        self.g.partial(1, 0)
    }

    pub fn g_zbar(&self) -> Complex {
        self.g.partial(0, 1)
    }

    pub fn omega_value(&self) -> Complex {
        self.omega.value()
    }

    /// `(1 + |g|²)² + 4|g|²`.
    pub fn normal_denominator(&self) -> f64 {
        let m = self.g_value().norm_sqr();
        (1.0 + m).powi(2) + 4.0 * m
    }

    /// `λ̂ = g ḡ - 1` as a real jet of order 3.
    pub fn lambda_hat_jet(&self) -> Jet {
        self.g * self.g.conj() - 1.0
    }

    pub fn lambda_hat(&self) -> f64 {
        self.g_value().norm_sqr() - 1.0
    }

    /// `∂_z λ̂`.
    pub fn lambda_hat_z(&self) -> Complex {
        self.lambda_hat_jet().partial(1, 0)
    }

    /// `(∂_u λ̂, ∂_v λ̂)`.
    pub fn identifier_gradient(&self) -> (f64, f64) {
        let d = self.lambda_hat_z();
        (2.0 * d.re, -2.0 * d.im)
    }

    /// Jets of the components of `f_z`, of order 2.
    pub fn f_z_jets(&self) -> [Jet; 3] {
        let c = self.pipeline.coefficient();
        let g = self.g;
        let w = self.omega;
        let one_minus = (g * g) * -1.0 + 1.0;
        [g * w * (-2.0 * c), (g * g + 1.0) * w * c, one_minus * w * Complex::new(0.0, c)]
    }

    pub fn f_z(&self) -> CVec3 {
        weierstrass_vector(self.g_value(), self.pipeline.coefficient()) * self.omega_value()
    }

    /// `(∂_u f, ∂_v f) = (2 Re f_z, -2 Im f_z)`.
    pub fn f_uv(&self) -> (Vec3, Vec3) {
        let fz = self.f_z();
        (real3(&fz) * 2.0, imag3(&fz) * -2.0)
    }

    pub fn normal(&self) -> Vec3 {
        let g = self.g_value();
        let m = g.norm_sqr();
        Vec3::new(1.0 + m, 2.0 * g.re, 2.0 * g.im) / self.normal_denominator().sqrt()
    }

    /// Real jets of the components of `ν`, of order 3.
    pub fn normal_jets(&self) -> Result<[Jet; 3]> {
        let g = self.g;
        let m = g.abs2();
        let p = m + 1.0;
        let inv = (p * p + m * 4.0).sqrt()?.recip()?;
        Ok([p * inv, g.re() * inv * 2.0, g.im() * inv * 2.0])
    }

    /// Closed-form signed area density `c'(|g|²-1)|ω̂|²√((1+|g|²)²+4|g|²)`
    /// with `c' = 4c²` (1 for maxfaces, `4/H²` for the CMC pipeline).
    pub fn lambda(&self) -> f64 {
        let c = self.pipeline.coefficient();
        4.0 * c * c * self.lambda_hat() * self.omega_value().norm_sqr() * self.normal_denominator().sqrt()
    }

    /// `det(f_u, f_v, ν)` from the frame vectors.
    pub fn lambda_det(&self) -> f64 {
        let (fu, fv) = self.f_uv();
        fu.cross(&fv).dot(&self.normal())
    }

    /// Jet of `φ = g_z / (g² ω̂)`, of order 2.
    pub fn phi_jet(&self) -> Result<Jet> {
        Ok(self.g.dz().try_div(&(self.g * self.g * self.omega))?)
    }

    pub fn phi(&self) -> Result<Complex> {
        let g = self.g_value();
        let den = g * g * self.omega_value();
        if den.norm() < crate::wirtinger::DIVISION_EPS {
            return Err(crate::wirtinger::JetError::DivisionByZero.into());
        }
        Ok(self.g_z() / den)
    }

    /// Singular direction `i·conj(g_z / g)`.
    pub fn xi(&self) -> Result<Complex> {
        let g = self.g_value();
        if g.norm() < crate::wirtinger::DIVISION_EPS {
            return Err(crate::wirtinger::JetError::DivisionByZero.into());
        }
        Ok(I * (self.g_z() / g).conj())
    }

    /// Null direction `i / (g ω̂)`.
    pub fn eta(&self) -> Result<Complex> {
        let den = self.g_value() * self.omega_value();
        if den.norm() < crate::wirtinger::DIVISION_EPS {
            return Err(crate::wirtinger::JetError::DivisionByZero.into());
        }
        Ok(I / den)
    }

    /// `ζF` for a jet `F`, as a jet one order lower.
    pub fn directional(zeta: Complex, f: &Jet) -> Jet {
        f.dz() * zeta + f.dzbar() * zeta.conj()
    }

    pub fn frame(&self) -> Result<FrameSample> {
        let f_z = self.f_z();
        Ok(FrameSample {
            z: self.z,
            f_zbar: f_z.map(|c| c.conj()),
            f_z,
            normal: self.normal(),
            lambda: self.lambda(),
            lambda_hat: self.lambda_hat(),
            phi: self.phi()?,
            xi: self.xi()?,
            eta: self.eta()?,
        })
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_4;

    use super::*;

    fn enneper() -> SurfaceData {
        SurfaceData::holomorphic(
            parse("z").unwrap(),
            parse("1").unwrap(),
            DomainSpec::Disk { center: [0.0, 0.0], radius: 1.5 },
        )
        .unwrap()
    }

    #[test]
    fn enneper_on_the_circle() {
        let f = enneper().frame(Complex::from_polar(1.0, FRAC_PI_4)).unwrap();
        assert!(f.lambda_hat.abs() < 1e-15);
        let s = 0.5f64.sqrt();
        assert!((f.normal - Vec3::new(s, 0.5, 0.5)).norm() < 1e-15);
        assert!((f.phi - Complex::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn enneper_at_origin() {
        let f = enneper().frame(Complex::new(0.0, 0.0));
        // φ and ξ divide by g, which vanishes at the origin
        assert!(f.is_err());
        let p = enneper().point(Complex::new(0.0, 0.0)).unwrap();
        assert_eq!(p.lambda_hat(), -1.0);
        assert_eq!(p.lambda(), -1.0);
        assert_eq!(p.normal(), Vec3::new(1.0, 0.0, 0.0));
    }

    #[test]
    fn enneper_directions_at_i() {
        let f = enneper().frame(Complex::new(0.0, 1.0)).unwrap();
        assert!((f.phi - Complex::new(-1.0, 0.0)).norm() < 1e-15);
        assert!((f.xi - Complex::new(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn identifier_gradients() {
        let (du, dv) = enneper().identifier_gradient(Complex::new(1.0, 0.0)).unwrap();
        assert_eq!((du, dv), (2.0, 0.0));
        let (du, dv) = enneper().identifier_gradient(Complex::new(0.0, 1.0)).unwrap();
        assert!(du.abs() < 1e-15 && (dv - 2.0).abs() < 1e-15);
    }

    #[test]
    fn frame_consistency() {
        let d = enneper();
        for &z in &[Complex::new(0.3, -0.2), Complex::new(1.1, 0.4), Complex::new(-0.7, 0.9)] {
            let p = d.point(z).unwrap();
            let f = p.frame().unwrap();
            assert!((f.normal.norm() - 1.0).abs() < 1e-12);
            assert!(real3(&f.f_z).dot(&f.normal).abs() < 1e-10);
            assert!(imag3(&f.f_z).dot(&f.normal).abs() < 1e-10);
            assert!((p.lambda_det() - p.lambda()).abs() < 1e-9 * p.lambda().abs());
        }
    }

    #[test]
    fn outside_domain_rejected() {
        assert!(matches!(enneper().point(Complex::new(2.0, 0.0)), Err(Error::OutsideDomain { .. })));
    }

    #[test]
    fn formula_weight_needs_extension_on_unit_circle() {
        let d = SurfaceData::harmonic(
            Field::parse("zbar/2 + z*zbar/4").unwrap(),
            1.0,
            OmegaMode::Formula,
            DomainSpec::Disk { center: [0.0, 0.0], radius: 3.0 },
        )
        .unwrap();
        assert!(d.point(Complex::new(0.5, 0.0)).is_ok());
        // g(z) = z̄/2 + |z|²/4 equals 1 at z = -1 + √5
        let z = Complex::new(5f64.sqrt() - 1.0, 0.0);
        assert!(matches!(d.point(z), Err(Error::ExplicitOmegaRequired { .. })));
    }

    #[test]
    fn zero_mean_curvature_rejected() {
        let r = SurfaceData::harmonic(
            Field::parse("zbar").unwrap(),
            0.0,
            OmegaMode::Formula,
            DomainSpec::Disk { center: [0.0, 0.0], radius: 1.0 },
        );
        assert!(matches!(r, Err(Error::InvalidMeanCurvature(_))));
    }

    #[test]
    fn zbar_rejected_for_maxface() {
        let r = SurfaceData::holomorphic(
            parse("zbar").unwrap(),
            parse("1").unwrap(),
            DomainSpec::Disk { center: [0.0, 0.0], radius: 1.0 },
        );
        assert!(matches!(r, Err(Error::NotHolomorphic { which: "g", .. })));
    }
}
