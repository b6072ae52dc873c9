//! Non-degeneracy, kind, front property and singularity type at singular points.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::surface_core::{Pipeline, PointData, SurfaceData, Tolerances};
use crate::wirtinger::Complex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SingularityType {
    CuspidalEdge,
    Swallowtail,
    CuspidalButterfly,
    CuspidalCrossCap,
    CuspidalS1Minus,
    Degenerate,
    SecondKindUnresolved,
    Unclassified,
}

impl SingularityType {
    pub fn name(self) -> &'static str {
        match self {
            SingularityType::CuspidalEdge => "CuspidalEdge",
            SingularityType::Swallowtail => "Swallowtail",
            SingularityType::CuspidalButterfly => "CuspidalButterfly",
            SingularityType::CuspidalCrossCap => "CuspidalCrossCap",
            SingularityType::CuspidalS1Minus => "CuspidalS1Minus",
            SingularityType::Degenerate => "Degenerate",
            SingularityType::SecondKindUnresolved => "SecondKindUnresolved",
            SingularityType::Unclassified => "Unclassified",
        }
    }
}

impl fmt::Display for SingularityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Kind {
    First,
    Second,
}

/// Outcome of a tolerance test on a quantity that the criteria compare with zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroTest {
    Zero,
    NonZero,
    Ambiguous,
}

impl Tolerances {
    /// `|x| < τ₀` is zero, `|x| > guard·τ₀` is non-zero, anything between is ambiguous.
    pub fn zero_test(&self, x: f64) -> ZeroTest {
        let a = x.abs();
        if a < self.zero {
            ZeroTest::Zero
        } else if a > self.zero * self.guard_factor {
            ZeroTest::NonZero
        } else {
            ZeroTest::Ambiguous
        }
    }
}

/// Values entering the criteria at a point, with `φ = g_z/(g²ω̂)` and `r = g/g_z`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Criteria {
    pub g_z_abs: f64,
    pub phi: Complex,
    /// `r φ_z`.
    pub s1: Complex,
    /// `r̄ φ_z̄`.
    pub s1bar: Complex,
    /// `r (r φ_z)_z`.
    pub s2: Complex,
    /// `r̄ (r̄ φ_z̄)_z̄`.
    pub s2bar: Complex,
    /// `φ_zz̄ / |g_z|²`.
    pub phi_zzbar_scaled: Complex,
}

impl Criteria {
    /// Fails with [`Error::Degenerate`] when `|g_z| < τ₀`.
    pub fn at(p: &PointData, tol: &Tolerances) -> Result<Self> {
        let g_z_abs = p.g_z().norm();
        if g_z_abs < tol.zero {
            return Err(Error::Degenerate { at: p.z, g_z_abs });
        }
        let phi = p.phi_jet()?;
        let r = p.g.try_div(&p.g.dz())?;
        let rb = r.conj();
        let s1 = r * phi.dz();
        let s1bar = rb * phi.dzbar();
        let s2 = r.value() * s1.partial(1, 0);
        let s2bar = rb.value() * s1bar.partial(0, 1);
        Ok(Self {
            g_z_abs,
            phi: phi.value(),
            s1: s1.value(),
            s1bar: s1bar.value(),
            s2,
            s2bar,
            phi_zzbar_scaled: phi.partial(1, 1) / (g_z_abs * g_z_abs),
        })
    }

    /// Swallowtail quantity of the CMC criteria, `Re(r φ_z) - Re(r̄ φ_z̄)`.
    pub fn cmc_swallowtail(&self) -> f64 {
        self.s1.re - self.s1bar.re
    }

    /// Cross-cap quantity of the CMC criteria, `Im(r φ_z) - Im(r̄ φ_z̄)`.
    pub fn cmc_cross_cap(&self) -> f64 {
        self.s1.im - self.s1bar.im
    }

    /// Butterfly quantity of the CMC criteria, `Im s2 + Im s̄2 - Im(φ_zz̄)/|g_z|²`.
    pub fn cmc_butterfly(&self) -> f64 {
        self.s2.im + self.s2bar.im - self.phi_zzbar_scaled.im
    }

    /// Largest modulus among the terms that carry `∂_z̄` derivatives of `φ`.
    pub fn zbar_terms(&self) -> f64 {
        self.s1bar.norm().max(self.s2bar.norm()).max(self.phi_zzbar_scaled.norm())
    }

    fn named(&self, pipeline: Pipeline) -> BTreeMap<String, f64> {
        let mut m = BTreeMap::new();
        let mut put = |k: &str, v: f64| {
            m.insert(k.to_string(), v);
        };
        put("abs_g_z", self.g_z_abs);
        put("re_phi", self.phi.re);
        put("im_phi", self.phi.im);
        put("re_s1", self.s1.re);
        put("im_s1", self.s1.im);
        put("re_s2", self.s2.re);
        put("im_s2", self.s2.im);
        if let Pipeline::Cmc { .. } = pipeline {
            put("re_s1bar", self.s1bar.re);
            put("im_s1bar", self.s1bar.im);
            put("re_s2bar", self.s2bar.re);
            put("im_s2bar", self.s2bar.im);
            put("im_phi_zzbar_scaled", self.phi_zzbar_scaled.im);
            put("cmc_swallowtail", self.cmc_swallowtail());
            put("cmc_cross_cap", self.cmc_cross_cap());
            put("cmc_butterfly", self.cmc_butterfly());
        }
        m
    }
}

pub(crate) fn point_ser<S: Serializer>(z: &Complex, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassifyReport {
    #[serde(serialize_with = "point_ser")]
    pub point: Complex,
    pub nondegenerate: bool,
    /// `None` when the kind test is ambiguous or the point is degenerate.
    pub kind: Option<Kind>,
    #[serde(rename = "front")]
    pub is_front: Option<bool>,
    #[serde(rename = "type")]
    pub singularity: SingularityType,
    pub conditions: BTreeMap<String, f64>,
    pub tolerances: Tolerances,
}

/// Classifies the singular point `p`.
pub fn classify(data: &SurfaceData, p: Complex) -> Result<ClassifyReport> {
    classify_point(&data.point(p)?, &Tolerances::default())
}

/// Decision tree on point data.
pub fn classify_point(p: &PointData, tol: &Tolerances) -> Result<ClassifyReport> {
    let lambda_hat = p.lambda_hat();
    if lambda_hat.abs() >= tol.on_set {
        return Err(Error::NotSingular { at: p.z, lambda_hat });
    }
    let mut report = ClassifyReport {
        point: p.z,
        nondegenerate: false,
        kind: None,
        is_front: None,
        singularity: SingularityType::Degenerate,
        conditions: BTreeMap::new(),
        tolerances: *tol,
    };
    let g_z_abs = p.g_z().norm();
    report.conditions.insert("abs_g_z".into(), g_z_abs);
    match tol.zero_test(g_z_abs) {
        ZeroTest::Zero => return Ok(report),
        ZeroTest::Ambiguous => {
            report.singularity = SingularityType::Unclassified;
            return Ok(report);
        }
        ZeroTest::NonZero => report.nondegenerate = true,
    }
    let c = Criteria::at(p, tol)?;
    report.conditions = c.named(p.pipeline);
    let (kind, front) = (tol.zero_test(c.phi.im), tol.zero_test(c.phi.re));
    report.kind = match kind {
        ZeroTest::NonZero => Some(Kind::First),
        ZeroTest::Zero => Some(Kind::Second),
        ZeroTest::Ambiguous => None,
    };
    report.is_front = match front {
        ZeroTest::NonZero => Some(true),
        ZeroTest::Zero => Some(false),
        ZeroTest::Ambiguous => None,
    };
    report.singularity = decide(p.pipeline, kind, front, &c, tol);
    Ok(report)
}

fn decide(pipeline: Pipeline, kind: ZeroTest, front: ZeroTest, c: &Criteria, tol: &Tolerances) -> SingularityType {
    use SingularityType::*;
    use ZeroTest::*;
    let cmc = matches!(pipeline, Pipeline::Cmc { .. });
    match (kind, front) {
        (Ambiguous, _) | (_, Ambiguous) => Unclassified,
        (NonZero, NonZero) => CuspidalEdge,
        (NonZero, Zero) => {
            let ccr = if cmc { c.cmc_cross_cap() } else { c.s1.im };
            match tol.zero_test(ccr) {
                NonZero => CuspidalCrossCap,
                Ambiguous => Unclassified,
                Zero if cmc => Unclassified,
                Zero => match tol.zero_test(c.s2.re) {
                    NonZero => CuspidalS1Minus,
                    _ => Unclassified,
                },
            }
        }
        (Zero, NonZero) => {
            let sw = if cmc { c.cmc_swallowtail() } else { c.s1.re };
            match tol.zero_test(sw) {
                NonZero => Swallowtail,
                Ambiguous => Unclassified,
                Zero => {
                    let cbf = if cmc { c.cmc_butterfly() } else { c.s2.im };
                    match tol.zero_test(cbf) {
                        NonZero => CuspidalButterfly,
                        Ambiguous => Unclassified,
                        Zero => SecondKindUnresolved,
                    }
                }
            }
        }
        (Zero, Zero) => SecondKindUnresolved,
    }
}

/// Butterfly criterion of the CMC pipeline evaluated on any point data.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ButterflyTest {
    pub re_phi: f64,
    pub im_phi: f64,
    /// `Re(r φ_z) - Re(r̄ φ_z̄)`, required to vanish.
    pub swallowtail_term: f64,
    /// `Im s2 + Im s̄2 - Im(φ_zz̄)/|g_z|²`, required to be non-zero.
    pub butterfly_term: f64,
    pub verdict: bool,
}

pub fn butterfly_test(p: &PointData, tol: &Tolerances) -> Result<ButterflyTest> {
    let c = Criteria::at(p, tol)?;
    let verdict = tol.zero_test(c.phi.re) == ZeroTest::NonZero
        && tol.zero_test(c.phi.im) == ZeroTest::Zero
        && tol.zero_test(c.cmc_swallowtail()) == ZeroTest::Zero
        && tol.zero_test(c.cmc_butterfly()) == ZeroTest::NonZero;
    Ok(ButterflyTest {
        re_phi: c.phi.re,
        im_phi: c.phi.im,
        swallowtail_term: c.cmc_swallowtail(),
        butterfly_term: c.cmc_butterfly(),
        verdict,
    })
}

/// Fold test of the Gauss map at a singular point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GaussMapFold {
    /// `det(ξ, η^ν) = Im(conj(ξ) η^ν)` with `η^ν = conj(g_z/g)`.
    pub det: f64,
    pub fold: bool,
    /// `|dν(η^ν)|`, zero when `η^ν` is a null direction of `ν`.
    pub null_residual: f64,
}

pub fn gauss_map_fold_point(p: &PointData, tol: &Tolerances) -> Result<GaussMapFold> {
    let g_z_abs = p.g_z().norm();
    if g_z_abs < tol.zero {
        return Err(Error::Degenerate { at: p.z, g_z_abs });
    }
    let xi = p.xi()?;
    let eta_nu = (p.g_z() / p.g_value()).conj();
    let det = (xi.conj() * eta_nu).im;
    let jets = p.normal_jets()?;
    let null_residual = jets.iter().map(|j| 2.0 * (eta_nu * j.partial(1, 0)).re).map(f64::abs).fold(0.0, f64::max);
    Ok(GaussMapFold { det, fold: det.abs() > tol.zero, null_residual })
}

pub fn gauss_map_fold(data: &SurfaceData, p: Complex) -> Result<GaussMapFold> {
    let point = data.point(p)?;
    let tol = Tolerances::default();
    if point.lambda_hat().abs() >= tol.on_set {
        return Err(Error::NotSingular { at: p, lambda_hat: point.lambda_hat() });
    }
    gauss_map_fold_point(&point, &tol)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::exprlang::{parse, DomainSpec};
    use crate::surface_core::{Field, OmegaMode};

    fn data(g: &str, w: &str) -> SurfaceData {
        SurfaceData::holomorphic(
            parse(g).unwrap(),
            parse(w).unwrap(),
            DomainSpec::Rectangle { u_min: -1.5, u_max: 1.5, v_min: -1.5, v_max: 1.5 },
        )
        .unwrap()
    }

    fn as_cmc(g: &str, w: &str) -> SurfaceData {
        SurfaceData::harmonic(
            Field::parse(g).unwrap(),
            2.0,
            OmegaMode::Explicit(Field::parse(w).unwrap()),
            DomainSpec::Rectangle { u_min: -1.5, u_max: 1.5, v_min: -1.5, v_max: 1.5 },
        )
        .unwrap()
    }

    fn on_circle(t: f64) -> Complex {
        Complex::from_polar(1.0, t)
    }

    #[test]
    fn enneper_special_points() {
        let d = data("z", "1");
        for k in 0..4 {
            let r = classify(&d, on_circle(k as f64 * PI / 2.0)).unwrap();
            assert_eq!(r.singularity, SingularityType::Swallowtail, "{r:?}");
            let r = classify(&d, on_circle((2 * k + 1) as f64 * PI / 4.0)).unwrap();
            assert_eq!(r.singularity, SingularityType::CuspidalCrossCap, "{r:?}");
        }
        let r = classify(&d, on_circle(0.3)).unwrap();
        assert_eq!(r.singularity, SingularityType::CuspidalEdge);
        assert_eq!(r.kind, Some(Kind::First));
        assert_eq!(r.is_front, Some(true));
    }

    #[test]
    fn derived_butterfly_and_s1_minus() {
        let one = Complex::new(1.0, 0.0);
        let r = classify(&data("z", "exp(-i*(z-1))/z^2"), one).unwrap();
        assert_eq!(r.singularity, SingularityType::CuspidalButterfly, "{r:?}");
        assert!((r.conditions["im_s2"] - 1.0).abs() < 1e-14);
        let r = classify(&data("z", "-i*exp(-i*(z-1))/z^2"), one).unwrap();
        assert_eq!(r.singularity, SingularityType::CuspidalS1Minus, "{r:?}");
    }

    #[test]
    fn not_singular_rejected() {
        assert!(matches!(classify(&data("z", "1"), Complex::new(0.5, 0.0)), Err(Error::NotSingular { .. })));
    }

    #[test]
    fn guard_band_is_unclassified() {
        // Re φ = cos 2t is 5e-9 in the band at t = π/4 - 2.5e-9
        let r = classify(&data("z", "1"), on_circle(PI / 4.0 - 2.5e-9)).unwrap();
        assert_eq!(r.singularity, SingularityType::Unclassified);
        assert_eq!(r.is_front, None);
    }

    #[test]
    fn degenerate_point_reported() {
        // g = 1 + z² has |g| = 1 and g_z = 0 at the origin
        let d = data("1 + z^2", "1");
        let r = classify(&d, Complex::new(0.0, 0.0)).unwrap();
        assert_eq!(r.singularity, SingularityType::Degenerate);
        assert!(!r.nondegenerate);
        assert!(matches!(gauss_map_fold(&d, Complex::new(0.0, 0.0)), Err(Error::Degenerate { .. })));
    }

    #[test]
    fn cmc_criteria_reduce_on_holomorphic_data() {
        for (g, w) in [("z", "1"), ("z", "exp(-i*(z-1))/z^2")] {
            for t in [0.0, 0.3, PI / 4.0, 1.0] {
                let z = on_circle(t);
                let m = classify(&data(g, w), z).unwrap();
                let c = classify(&as_cmc(g, w), z).unwrap();
                assert_eq!(m.singularity, c.singularity, "{g} {w} {t}");
                let p = as_cmc(g, w).point(z).unwrap();
                assert!(Criteria::at(&p, &Tolerances::default()).unwrap().zbar_terms() < 1e-12);
            }
        }
    }

    #[test]
    fn butterfly_test_on_data() {
        let tol = Tolerances::default();
        let one = Complex::new(1.0, 0.0);
        let p = as_cmc("z", "exp(-i*(z-1))/z^2").point(one).unwrap();
        assert!(butterfly_test(&p, &tol).unwrap().verdict);
        let p = as_cmc("z", "1").point(one).unwrap();
        let b = butterfly_test(&p, &tol).unwrap();
        assert!(!b.verdict);
        assert!((b.swallowtail_term + 2.0).abs() < 1e-14);
    }

    #[test]
    fn gauss_map_fold_values() {
        let r = gauss_map_fold(&data("z", "1"), on_circle(0.7)).unwrap();
        assert!((r.det + 1.0).abs() < 1e-14 && r.fold);
        assert!(r.null_residual < 1e-14);
        let r = gauss_map_fold(&data("z^2", "1"), Complex::new(1.0, 0.0)).unwrap();
        assert!((r.det + 4.0).abs() < 1e-14);
    }

    #[test]
    fn report_json_shape() {
        let r = classify(&data("z", "1"), Complex::new(1.0, 0.0)).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["type"], "Swallowtail");
        assert_eq!(v["kind"], "Second");
        assert_eq!(v["front"], true);
        assert_eq!(v["point"][0], 1.0);
        assert!(v["tolerances"]["zero"].is_number());
    }
}
