use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::wirtinger::Complex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Re,
    Im,
}

/// Parameter domain of a surface. Points are `[u, v]` pairs.
///
/// A half-plane is the open set where the chosen coordinate exceeds `bound`; for
/// sampling it is truncated to the window `[bound, bound + 4] x [-2, 2]` (axes
/// swapped for `im`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
pub enum DomainSpec {
    Disk { center: [f64; 2], radius: f64 },
    Annulus { center: [f64; 2], r_in: f64, r_out: f64 },
    Halfplane { axis: Axis, bound: f64 },
    Rectangle { u_min: f64, u_max: f64, v_min: f64, v_max: f64 },
}

const HALFPLANE_DEPTH: f64 = 4.0;
const HALFPLANE_HALFWIDTH: f64 = 2.0;

fn pt(p: [f64; 2]) -> Complex {
    Complex::new(p[0], p[1])
}

impl DomainSpec {
    /// Checks that the interior is non-empty and all parameters are finite.
    pub fn check(&self) -> Result<(), String> {
        let finite = |xs: &[f64]| xs.iter().all(|x| x.is_finite());
        match *self {
            DomainSpec::Disk { center, radius } => {
                if !finite(&[center[0], center[1], radius]) || radius <= 0.0 {
                    return Err(format!("disk needs a finite positive radius, got {radius}"));
                }
            }
            DomainSpec::Annulus { center, r_in, r_out } => {
                if !finite(&[center[0], center[1], r_in, r_out]) || r_in < 0.0 || r_out <= r_in {
                    return Err(format!("annulus needs 0 <= r_in < r_out, got r_in = {r_in}, r_out = {r_out}"));
                }
            }
            DomainSpec::Halfplane { bound, .. } => {
                if !bound.is_finite() {
                    return Err("halfplane bound must be finite".into());
                }
            }
            DomainSpec::Rectangle { u_min, u_max, v_min, v_max } => {
                if !finite(&[u_min, u_max, v_min, v_max]) || u_min >= u_max || v_min >= v_max {
                    return Err("rectangle needs u_min < u_max and v_min < v_max".into());
                }
            }
        }
        Ok(())
    }

    pub fn is_simply_connected(&self) -> bool {
        !matches!(self, DomainSpec::Annulus { .. })
    }

    /// Open-interior membership.
    pub fn contains(&self, z: Complex) -> bool {
        match *self {
            DomainSpec::Disk { center, radius } => (z - pt(center)).norm() < radius,
            DomainSpec::Annulus { center, r_in, r_out } => {
                let r = (z - pt(center)).norm();
                r > r_in && r < r_out
            }
            DomainSpec::Halfplane { axis: Axis::Re, bound } => z.re > bound,
            DomainSpec::Halfplane { axis: Axis::Im, bound } => z.im > bound,
            DomainSpec::Rectangle { u_min, u_max, v_min, v_max } => {
                z.re > u_min && z.re < u_max && z.im > v_min && z.im < v_max
            }
        }
    }

    /// Default base point: the centre, or the point on the positive real ray at mid
    /// radius for an annulus, or one unit inside a half-plane.
    pub fn base_point(&self) -> Complex {
        match *self {
            DomainSpec::Disk { center, .. } => pt(center),
            DomainSpec::Annulus { center, r_in, r_out } => pt(center) + 0.5 * (r_in + r_out),
            DomainSpec::Halfplane { axis: Axis::Re, bound } => Complex::new(bound + 1.0, 0.0),
            DomainSpec::Halfplane { axis: Axis::Im, bound } => Complex::new(0.0, bound + 1.0),
            DomainSpec::Rectangle { u_min, u_max, v_min, v_max } => {
                Complex::new(0.5 * (u_min + u_max), 0.5 * (v_min + v_max))
            }
        }
    }

    /// Axis-aligned sampling window `(lower-left, upper-right)`.
    pub fn bbox(&self) -> (Complex, Complex) {
        match *self {
            DomainSpec::Disk { center, radius: r } | DomainSpec::Annulus { center, r_out: r, .. } => {
                (pt(center) - Complex::new(r, r), pt(center) + Complex::new(r, r))
            }
            DomainSpec::Halfplane { axis: Axis::Re, bound } => {
                (Complex::new(bound, -HALFPLANE_HALFWIDTH), Complex::new(bound + HALFPLANE_DEPTH, HALFPLANE_HALFWIDTH))
            }
            DomainSpec::Halfplane { axis: Axis::Im, bound } => {
                (Complex::new(-HALFPLANE_HALFWIDTH, bound), Complex::new(HALFPLANE_HALFWIDTH, bound + HALFPLANE_DEPTH))
            }
            DomainSpec::Rectangle { u_min, u_max, v_min, v_max } => {
                (Complex::new(u_min, v_min), Complex::new(u_max, v_max))
            }
        }
    }

    /// Cell centres of an `n x n` grid over [`bbox`](Self::bbox) that lie in the domain,
    /// row-major with `v` as the slow index.
    pub fn sample_grid(&self, n: usize) -> Vec<Complex> {
        let (lo, hi) = self.bbox();
        let mut out = Vec::with_capacity(n * n);
        for j in 0..n {
            let v = lo.im + (hi.im - lo.im) * (j as f64 + 0.5) / n as f64;
            for i in 0..n {
                let u = lo.re + (hi.re - lo.re) * (i as f64 + 0.5) / n as f64;
                let z = Complex::new(u, v);
                if self.contains(z) {
                    out.push(z);
                }
            }
        }
        out
    }

    /// A polyline from `from` to `to` inside the domain: the straight segment for
    /// convex shapes, and radial legs joined by a mid-radius arc for an annulus.
    pub fn default_path(&self, from: Complex, to: Complex) -> Vec<Complex> {
        let DomainSpec::Annulus { center, r_in, r_out } = *self else {
            return vec![from, to];
        };
        let c = pt(center);
        let (a, b) = (from - c, to - c);
        let r_mid = 0.5 * (r_in + r_out);
        let (ta, tb) = (a.arg(), b.arg());
        let mut dt = tb - ta;
        if dt > PI {
            dt -= 2.0 * PI;
        } else if dt < -PI {
            dt += 2.0 * PI;
        }
        // chord sagitta r(1 - cos(h/2)) must stay inside the ring
        let margin = (r_mid - r_in).min(r_out - r_mid);
        let max_step = 2.0 * (1.0 - 0.5 * margin / r_mid).clamp(-1.0, 1.0).acos();
        let steps = ((dt.abs() / max_step).ceil() as usize).max(1);
        let mut path = vec![from];
        for k in 0..=steps {
            let t = ta + dt * k as f64 / steps as f64;
            path.push(c + Complex::from_polar(r_mid, t));
        }
        path.push(to);
        path.dedup_by(|p, q| (*p - *q).norm() < 1e-15);
        path
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serde_shapes() {
        let d: DomainSpec = serde_json::from_str(r#"{"shape":"disk","center":[0,0],"radius":1.5}"#).unwrap();
        assert_eq!(d, DomainSpec::Disk { center: [0.0, 0.0], radius: 1.5 });
        let h: DomainSpec = toml::from_str("shape = \"halfplane\"\naxis = \"re\"\nbound = 0.1\n").unwrap();
        assert_eq!(h, DomainSpec::Halfplane { axis: Axis::Re, bound: 0.1 });
    }

    #[test]
    fn membership() {
        let d = DomainSpec::Annulus { center: [0.0, 0.0], r_in: 0.5, r_out: 2.0 };
        assert!(d.contains(Complex::new(1.0, 0.0)));
        assert!(!d.contains(Complex::new(0.1, 0.0)));
        assert!(!d.is_simply_connected());
        let h = DomainSpec::Halfplane { axis: Axis::Im, bound: 0.0 };
        assert!(h.contains(Complex::new(-5.0, 0.1)));
        assert!(!h.contains(Complex::new(0.0, -0.1)));
    }

    #[test]
    fn empty_interiors_rejected() {
        assert!(DomainSpec::Disk { center: [0.0, 0.0], radius: 0.0 }.check().is_err());
        assert!(DomainSpec::Annulus { center: [0.0, 0.0], r_in: 1.0, r_out: 1.0 }.check().is_err());
        assert!(DomainSpec::Rectangle { u_min: 0.0, u_max: 1.0, v_min: 2.0, v_max: 1.0 }.check().is_err());
    }

    #[test]
    fn grid_is_inside() {
        let d = DomainSpec::Disk { center: [1.0, 0.0], radius: 1.0 };
        let g = d.sample_grid(16);
        assert!(!g.is_empty() && g.len() < 256);
        assert!(g.iter().all(|&z| d.contains(z)));
    }

    #[test]
    fn annulus_path_stays_inside() {
        let d = DomainSpec::Annulus { center: [0.0, 0.0], r_in: 0.5, r_out: 1.0 };
        let path = d.default_path(Complex::new(0.75, 0.0), Complex::new(-0.9, 0.1));
        for w in path.windows(2) {
            for k in 0..=20 {
                let p = w[0] + (w[1] - w[0]) * (k as f64 / 20.0);
                assert!(d.contains(p), "{p}");
            }
        }
    }
}
