//! Parameter grids, surface meshes and OBJ export.

use std::f64::consts::TAU;
use std::io::{self, Write};

use surflab::exprlang::DomainSpec;
use surflab::surface_core::Vec3;
use surflab::wirtinger::Complex;

/// Relative inset keeping boundary samples inside open domains.
const INSET: f64 = 1e-9;

/// Sample points of the parameter domain with triangles over them.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub points: Vec<Complex>,
    pub faces: Vec<[usize; 3]>,
}

fn quad(faces: &mut Vec<[usize; 3]>, a: usize, b: usize, c: usize, d: usize) {
    faces.push([a, b, c]);
    faces.push([a, c, d]);
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let pad = INSET * (hi - lo);
    let (lo, hi) = (lo + pad, hi - pad);
    (0..n).map(move |k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
}

impl Grid {
    /// `n × n` grid: polar for disks and annuli (angle fastest), rectangular otherwise
    /// (`u` fastest). Disks use a single centre vertex.
    pub fn new(domain: &DomainSpec, n: usize) -> Self {
        assert!(n >= 2, "grid resolution must be at least 2");
        let mut points = Vec::new();
        let mut faces = Vec::new();
        match *domain {
            DomainSpec::Disk { center, radius } => {
                let c = Complex::new(center[0], center[1]);
                points.push(c);
                for i in 1..n {
                    let r = radius * (i as f64 / (n - 1) as f64).min(1.0 - INSET);
                    for j in 0..n {
                        points.push(c + Complex::from_polar(r, TAU * j as f64 / n as f64));
                    }
                }
                let ring = |i: usize, j: usize| 1 + (i - 1) * n + j % n;
                for j in 0..n {
                    faces.push([0, ring(1, j), ring(1, j + 1)]);
                }
                for i in 1..n - 1 {
                    for j in 0..n {
                        quad(&mut faces, ring(i, j), ring(i + 1, j), ring(i + 1, j + 1), ring(i, j + 1));
                    }
                }
            }
            DomainSpec::Annulus { center, r_in, r_out } => {
                let c = Complex::new(center[0], center[1]);
                for r in linspace(r_in, r_out, n) {
                    for j in 0..n {
                        points.push(c + Complex::from_polar(r, TAU * j as f64 / n as f64));
                    }
                }
                let at = |i: usize, j: usize| i * n + j % n;
                for i in 0..n - 1 {
                    for j in 0..n {
                        quad(&mut faces, at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1));
                    }
                }
            }
            DomainSpec::Halfplane { .. } | DomainSpec::Rectangle { .. } => {
                let (lo, hi) = domain.bbox();
                let us: Vec<f64> = linspace(lo.re, hi.re, n).collect();
                for v in linspace(lo.im, hi.im, n) {
                    points.extend(us.iter().map(|&u| Complex::new(u, v)));
                }
                let at = |i: usize, j: usize| j * n + i;
                for j in 0..n - 1 {
                    for i in 0..n - 1 {
                        quad(&mut faces, at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1));
                    }
                }
            }
        }
        Grid { points, faces }
    }

    /// Index pairs of grid edges, each once.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<(usize, usize)> = self
            .faces
            .iter()
            .flat_map(|f| [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])])
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        e.sort_unstable();
        e.dedup();
        e
    }
}

/// Surface mesh with singular polylines and per-vertex attributes.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<Vec3>,
    pub faces: Vec<[usize; 3]>,
    pub singular_polylines: Vec<Vec<usize>>,
    pub k_e: Vec<f64>,
    pub lambda_hat: Vec<f64>,
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

impl Mesh {
    /// Index ranges, distinct face corners and attribute lengths.
    pub fn validate(&self) -> Result<(), String> {
        let n = self.vertices.len();
        if self.k_e.len() != n || self.lambda_hat.len() != n {
            return Err("attribute count differs from vertex count".into());
        }
        for (k, f) in self.faces.iter().enumerate() {
            if f.iter().any(|&i| i >= n) {
                return Err(format!("face {k} has an index out of range"));
            }
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                return Err(format!("face {k} is degenerate"));
            }
        }
        for (k, l) in self.singular_polylines.iter().enumerate() {
            if l.iter().any(|&i| i >= n) {
                return Err(format!("polyline {k} has an index out of range"));
            }
        }
        Ok(())
    }

    /// Wavefront OBJ: `v`, then `#va K_E lambda_hat` attribute comments, `f` and `l` records.
    pub fn write_obj(&self, mut w: impl Write) -> io::Result<()> {
        writeln!(w, "# surflab mesh")?;
        writeln!(
            w,
            "# vertices {} faces {} polylines {}",
            self.vertices.len(),
            self.faces.len(),
            self.singular_polylines.len()
        )?;
        for v in &self.vertices {
            writeln!(w, "v {} {} {}", num(v.x), num(v.y), num(v.z))?;
        }
        writeln!(w, "# per-vertex attributes: K_E lambda_hat")?;
        for (k, l) in self.k_e.iter().zip(&self.lambda_hat) {
            writeln!(w, "#va {} {}", num(*k), num(*l))?;
        }
        for f in &self.faces {
            writeln!(w, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1)?;
        }
        for l in &self.singular_polylines {
            let idx: Vec<String> = l.iter().map(|i| (i + 1).to_string()).collect();
            writeln!(w, "l {}", idx.join(" "))?;
        }
        Ok(())
    }
}
