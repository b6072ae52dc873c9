//! Adaptive Gauss–Legendre quadrature along polylines.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::exprlang::DomainSpec;
use crate::surface_core::{CVec3, Vec3};
use crate::wirtinger::Complex;

/// Points of the base rule.
pub const BASE_POINTS: usize = 15;
/// Largest bisection depth per segment.
pub const MAX_DEPTH: u32 = 40;

/// Nodes and weights of the `n`-point rule on `[-1, 1]`, by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for k in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let dp = legendre(n, x).1;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[k] = -x;
        nodes[n - 1 - k] = x;
        weights[k] = w;
        weights[n - 1 - k] = w;
    }
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn base_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(BASE_POINTS))
}

fn max_abs(v: &CVec3) -> f64 {
    v.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn rule<F>(f: &mut F, a: f64, b: f64) -> Result<CVec3>
where
    F: FnMut(f64) -> Result<CVec3>,
{
    let (x, w) = base_rule();
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    let mut sum = CVec3::zeros();
    for (xi, wi) in x.iter().zip(w) {
        sum += f(mid + half * xi)? * Complex::new(wi * half, 0.0);
    }
    Ok(sum)
}

/// `∫_a^b f(t) dt` for a complex 3-vector valued `f`, bisecting until the
/// two-halves estimate agrees with the whole within `tol · max(1, |I|)`.
pub fn adaptive<F>(f: &mut F, a: f64, b: f64, tol: f64) -> Result<CVec3>
where
    F: FnMut(f64) -> Result<CVec3>,
{
    let whole = rule(f, a, b)?;
    refine(f, a, b, whole, tol, 0)
}

fn refine<F>(f: &mut F, a: f64, b: f64, whole: CVec3, tol: f64, depth: u32) -> Result<CVec3>
where
    F: FnMut(f64) -> Result<CVec3>,
{
    let m = 0.5 * (a + b);
    let left = rule(f, a, m)?;
    let right = rule(f, m, b)?;
    let halves = left + right;
    if max_abs(&(halves - whole)) <= tol * max_abs(&halves).max(1.0) {
        return Ok(halves);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::NonConvergence(format!("adaptive quadrature on [{a}, {b}]")));
    }
    Ok(refine(f, a, m, left, (0.5 * tol).max(1e-15), depth + 1)?
        + refine(f, m, b, right, (0.5 * tol).max(1e-15), depth + 1)?)
}

/// Polyline in the parameter plane.
#[derive(Clone, Debug, PartialEq)]
pub struct PathSpec {
    pub points: Vec<Complex>,
}

impl PathSpec {
    /// Waypoints must be non-empty with consecutive points distinct.
    pub fn new(points: Vec<Complex>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Invalid("path needs at least one point".into()));
        }
        if points.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Invalid("consecutive path points coincide".into()));
        }
        Ok(Self { points })
    }

    /// Zero-length path at `z` or the segment `a → b`.
    pub fn segment(a: Complex, b: Complex) -> Self {
        if a == b {
            Self { points: vec![a] }
        } else {
            Self { points: vec![a, b] }
        }
    }

    pub fn start(&self) -> Complex {
        self.points[0]
    }

    pub fn end(&self) -> Complex {
        *self.points.last().expect("non-empty path")
    }

    pub fn length(&self) -> f64 {
        self.points.windows(2).map(|w| (w[1] - w[0]).norm()).sum()
    }

    /// Checks waypoints and a few interior points of every segment against `domain`.
    pub fn check_inside(&self, domain: &DomainSpec) -> Result<()> {
        for w in self.points.windows(2) {
            for k in 0..=16 {
                let p = w[0] + (w[1] - w[0]) * (k as f64 / 16.0);
                if !domain.contains(p) {
                    return Err(Error::OutsideDomain { at: p });
                }
            }
        }
        if !domain.contains(self.start()) {
            return Err(Error::OutsideDomain { at: self.start() });
        }
        Ok(())
    }
}

/// `Re ∫_path 2 f_z dz`, the increment of `f` along the path.
pub fn integrate_form<F>(path: &PathSpec, mut f_z: F, tol: f64) -> Result<Vec3>
where
    F: FnMut(Complex) -> Result<CVec3>,
{
    let mut total = CVec3::zeros();
    for w in path.points.windows(2) {
        let (a, dz) = (w[0], w[1] - w[0]);
        let mut integrand = |t: f64| Ok(f_z(a + dz * t)? * (2.0 * dz));
        total += adaptive(&mut integrand, 0.0, 1.0, tol)?;
    }
    Ok(total.map(|c| c.re))
}
