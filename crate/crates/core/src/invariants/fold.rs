//! Reflection symmetry `F(u, v) = F(u, -v)` in a chart adapted to a singular curve.

use nalgebra::{Matrix3x2, Vector2};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::surface_core::Vec3;

/// Grid points per axis of the symmetry test.
pub const FOLD_GRID: usize = 21;

const FD_STEP: f64 = 1e-6;
const ROOT_ITERATIONS: usize = 200;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict")]
pub enum FoldVerdict {
    /// Largest `|F(u, v) - F(u, -v)|` on the grid is below the tolerance.
    Symmetric { deviation: f64 },
    /// No symmetry in the tested chart; `witness` is the chart point `(u, v)` of the largest deviation.
    Asymmetric { deviation: f64, witness: [f64; 2] },
}

impl FoldVerdict {
    pub fn is_symmetric(&self) -> bool {
        matches!(self, FoldVerdict::Symmetric { .. })
    }

    pub fn deviation(&self) -> f64 {
        match self {
            FoldVerdict::Symmetric { deviation } | FoldVerdict::Asymmetric { deviation, .. } => *deviation,
        }
    }
}

type P2 = Vector2<f64>;

struct Chart<'a, F> {
    f: &'a F,
}

impl<F: Fn([f64; 2]) -> Vec3> Chart<'_, F> {
    fn eval(&self, q: P2) -> Vec3 {
        (self.f)([q.x, q.y])
    }

    fn jacobian(&self, q: P2) -> Matrix3x2<f64> {
        let dx = P2::new(FD_STEP, 0.0);
        let dy = P2::new(0.0, FD_STEP);
        let cu = (self.eval(q + dx) - self.eval(q - dx)) / (2.0 * FD_STEP);
        let cv = (self.eval(q + dy) - self.eval(q - dy)) / (2.0 * FD_STEP);
        Matrix3x2::from_columns(&[cu, cv])
    }

    /// Unit null direction of `dF` at `q` with the ratio `σ_min/σ_max`.
    fn null_direction(&self, q: P2) -> Result<(P2, f64)> {
        let svd = self.jacobian(q).svd(false, true);
        let v_t = svd.v_t.ok_or_else(|| Error::ChartFailure("singular value decomposition failed".into()))?;
        let s = svd.singular_values;
        let (small, large) = if s[0] <= s[1] { (0, 1) } else { (1, 0) };
        if s[large] < 1e-12 {
            return Err(Error::ChartFailure(format!("differential vanishes at ({}, {})", q.x, q.y)));
        }
        Ok((P2::new(v_t[(small, 0)], v_t[(small, 1)]), s[small] / s[large]))
    }

    fn signed_area(&self, q: P2, n0: &Vec3) -> f64 {
        let j = self.jacobian(q);
        j.column(0).cross(&j.column(1)).dot(n0)
    }
}

/// Regula falsi (Illinois variant) for a sign change of `f` on `[a, b]`.
fn root(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> Option<f64> {
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa * fb > 0.0 {
        return None;
    }
    let mut side = 0i8;
    for _ in 0..ROOT_ITERATIONS {
        let c = (a * fb - b * fa) / (fb - fa);
        let fc = f(c);
        if fc == 0.0 || (b - a).abs() < 1e-15 {
            return Some(c);
        }
        if fc * fb > 0.0 {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
    }
    Some((a + b) / 2.0)
}

/// Tests `F(u, v) = F(u, -v)` on a `FOLD_GRID × FOLD_GRID` grid over `[-h, h]²` in a chart
/// whose `u`-lines follow the singular curve through `p` and whose `v`-lines follow the
/// null direction.
pub fn fold_symmetry_test<F>(f: F, p: [f64; 2], halfwidth: f64, tol: f64) -> Result<FoldVerdict>
where
    F: Fn([f64; 2]) -> Vec3,
{
    if !(halfwidth > 0.0 && halfwidth.is_finite()) {
        return Err(Error::Invalid(format!("halfwidth must be positive, got {halfwidth}")));
    }
    let chart = Chart { f: &f };
    let p = P2::new(p[0], p[1]);
    let (eta, ratio) = chart.null_direction(p)?;
    if ratio > 1e-6 {
        return Err(Error::ChartFailure(format!("differential has full rank at ({}, {})", p.x, p.y)));
    }
    let xi = P2::new(-eta.y, eta.x);

    let probe = 1e-3 * halfwidth;
    let j = chart.jacobian(p + eta * probe);
    let n = j.column(0).cross(&j.column(1));
    if n.norm() == 0.0 {
        return Err(Error::ChartFailure("no normal direction next to the singular point".into()));
    }
    let n0: Vec3 = n.normalize();

    let curve = |u: f64| -> Result<(P2, P2)> {
        let base = p + xi * u;
        let s = root(|s| chart.signed_area(base + eta * s, &n0), -halfwidth, halfwidth)
            .ok_or_else(|| Error::ChartFailure(format!("no singular point on the null line at u = {u}")))?;
        let q = base + eta * s;
        let (mut e, _) = chart.null_direction(q)?;
        if e.dot(&eta) < 0.0 {
            e = -e;
        }
        if e.dot(&xi).abs() > 1.0 - 1e-9 {
            return Err(Error::ChartFailure(format!("null direction tangent to the singular curve at u = {u}")));
        }
        Ok((q, e))
    };

    let step = 2.0 * halfwidth / (FOLD_GRID - 1) as f64;
    let mut worst = (0.0, [0.0, 0.0]);
    for i in 0..FOLD_GRID {
        let u = -halfwidth + step * i as f64;
        let (q, e) = curve(u)?;
        for k in 1..=FOLD_GRID / 2 {
            let v = step * k as f64;
            let d = (chart.eval(q + e * v) - chart.eval(q - e * v)).norm();
            if d > worst.0 {
                worst = (d, [u, v]);
            }
        }
    }
    Ok(if worst.0 < tol {
        FoldVerdict::Symmetric { deviation: worst.0 }
    } else {
        FoldVerdict::Asymmetric { deviation: worst.0, witness: worst.1 }
    })
}
