//! Numerical extended harmonic maps away from `|g| = 1`.
//!
//! Solves `Δg = -8 ḡ g_z g_z̄ / (1 - |g|²)` on a square by Chebyshev collocation
//! with Dirichlet data, iterating on the right-hand side. The converged nodal
//! values are turned into a tensor Chebyshev series, which yields jets to order 3
//! anywhere in the square.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::exprlang::DomainSpec;
use crate::surface_core::{Field, OmegaMode, SurfaceData};
use crate::wirtinger::{Complex, Jet, MAX_ORDER};

/// Chebyshev differentiation matrix on the `n + 1` Gauss–Lobatto points of `[-1, 1]`.
fn cheb(n: usize) -> (DMatrix<f64>, Vec<f64>) {
    let x: Vec<f64> = (0..=n).map(|i| (std::f64::consts::PI * i as f64 / n as f64).cos()).collect();
    let c = |i: usize| (if i == 0 || i == n { 2.0 } else { 1.0 }) * if i.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut d = DMatrix::zeros(n + 1, n + 1);
    for i in 0..=n {
        for j in 0..=n {
            if i != j {
                d[(i, j)] = c(i) / c(j) / (x[i] - x[j]);
            }
        }
    }
    for i in 0..=n {
        let s: f64 = (0..=n).filter(|&j| j != i).map(|j| d[(i, j)]).sum();
        d[(i, i)] = -s;
    }
    (d, x)
}

/// Converged solution as a tensor Chebyshev series on `[c - h, c + h]²`.
#[derive(Clone, Debug)]
pub struct SpectralField {
    center: Complex,
    half_width: f64,
    /// `coeffs[m][k]` multiplies `T_m(s) T_k(t)`.
    coeffs: Vec<Vec<Complex>>,
    pub iterations: usize,
    pub last_update: f64,
}

/// `[T_m, T_m', T_m'', T_m''']` for `m = 0..=n` at `s`.
fn chebyshev_table(n: usize, s: f64) -> Vec<[f64; 4]> {
    let mut t = vec![[0.0; 4]; n + 1];
    t[0] = [1.0, 0.0, 0.0, 0.0];
    if n >= 1 {
        t[1] = [s, 1.0, 0.0, 0.0];
    }
    for m in 1..n {
        let (a, b) = (t[m], t[m - 1]);
        t[m + 1] = [
            2.0 * s * a[0] - b[0],
            2.0 * a[0] + 2.0 * s * a[1] - b[1],
            4.0 * a[1] + 2.0 * s * a[2] - b[2],
            6.0 * a[2] + 2.0 * s * a[3] - b[3],
        ];
    }
    t
}

impl SpectralField {
    pub fn domain(&self) -> DomainSpec {
        let (c, h) = (self.center, self.half_width);
        DomainSpec::Rectangle { u_min: c.re - h, u_max: c.re + h, v_min: c.im - h, v_max: c.im + h }
    }

    /// Real partials `∂_u^a ∂_v^b g` for `a + b <= order`.
    fn real_partials(&self, z: Complex, order: usize) -> [[Complex; 4]; 4] {
        let n = self.coeffs.len() - 1;
        let w = (z - self.center) / self.half_width;
        let tu = chebyshev_table(n, w.re);
        let tv = chebyshev_table(n, w.im);
        let mut out = [[Complex::new(0.0, 0.0); 4]; 4];
        for a in 0..=order {
            for b in 0..=order - a {
                let mut sum = Complex::new(0.0, 0.0);
                for (m, row) in self.coeffs.iter().enumerate() {
                    let fu = tu[m][a];
                    if fu == 0.0 {
                        continue;
                    }
                    let inner: Complex = row.iter().enumerate().map(|(k, c)| c * tv[k][b]).sum();
                    sum += inner * fu;
                }
                out[a][b] = sum / self.half_width.powi((a + b) as i32);
            }
        }
        out
    }

    /// Jet of the solution at `z`; refuses points outside the square.
    pub fn jet(&self, z: Complex, order: usize) -> Result<Jet> {
        assert!(order <= MAX_ORDER);
        let w = z - self.center;
        if w.re.abs() > self.half_width || w.im.abs() > self.half_width {
            return Err(Error::OutsideDomain { at: z });
        }
        let d = self.real_partials(z, order);
        Ok(Jet::from_partials(order, |a, b| wirtinger_from_real(&d, a, b)))
    }
}

/// `∂_z^a ∂_z̄^b = 2^{-(a+b)} (∂_u - i∂_v)^a (∂_u + i∂_v)^b`, expanded over `∂_u^p ∂_v^q`.
fn wirtinger_from_real(d: &[[Complex; 4]; 4], a: usize, b: usize) -> Complex {
    let n = a + b;
    // poly[q] is the coefficient of ∂_u^{n-q} ∂_v^q
    let mut poly = vec![Complex::new(0.0, 0.0); n + 1];
    poly[0] = Complex::new(1.0, 0.0);
    let factors = std::iter::repeat_n(Complex::new(0.0, -1.0), a).chain(std::iter::repeat_n(Complex::new(0.0, 1.0), b));
    for (deg, f) in factors.enumerate() {
        for q in (0..=deg + 1).rev() {
            let from_v = if q > 0 { poly[q - 1] * f } else { Complex::new(0.0, 0.0) };
            let keep = if q <= deg { poly[q] } else { Complex::new(0.0, 0.0) };
            poly[q] = keep + from_v;
        }
    }
    let scale = 0.5f64.powi(n as i32);
    poly.iter().enumerate().map(|(q, c)| c * d[n - q][q]).sum::<Complex>() * scale
}

/// Collocation solver for the harmonic map equation.
#[derive(Clone, Debug)]
pub struct HarmonicMapSolver {
    /// Polynomial degree per direction.
    pub degree: usize,
    pub center: Complex,
    pub half_width: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for HarmonicMapSolver {
    fn default() -> Self {
        Self { degree: 40, center: Complex::new(0.0, 0.0), half_width: 0.5, tolerance: 1e-14, max_iterations: 200 }
    }
}

impl HarmonicMapSolver {
    /// Solves with Dirichlet data `boundary`, starting from `boundary` everywhere.
    pub fn solve(&self, boundary: impl Fn(Complex) -> Complex) -> Result<SpectralField> {
        let n = self.degree;
        let (d1, x) = cheb(n);
        let d1 = d1 / self.half_width;
        let d2 = &d1 * &d1;
        let np = n + 1;
        let idx = |i: usize, j: usize| j * np + i;
        let node = |i: usize, j: usize| self.center + Complex::new(x[i], x[j]) * self.half_width;
        let interior: Vec<(usize, usize)> = (1..n).flat_map(|j| (1..n).map(move |i| (i, j))).collect();
        let pos = |i: usize, j: usize| (j - 1) * (n - 1) + (i - 1);

        let m = interior.len();
        let mut lap = DMatrix::zeros(m, m);
        for (r, &(i, j)) in interior.iter().enumerate() {
            for k in 1..n {
                lap[(r, pos(k, j))] += d2[(i, k)];
                lap[(r, pos(i, k))] += d2[(j, k)];
            }
        }
        let lu = lap.lu();

        let mut g: Vec<Complex> = (0..np * np).map(|k| boundary(node(k % np, k / np))).collect();
        let mut last_update = f64::INFINITY;
        for iteration in 1..=self.max_iterations {
            let (gu, gv) = grid_gradient(&g, &d1, np);
            let mut rhs_re = nalgebra::DVector::zeros(m);
            let mut rhs_im = nalgebra::DVector::zeros(m);
            for (r, &(i, j)) in interior.iter().enumerate() {
                let k = idx(i, j);
                let gz = 0.5 * (gu[k] - Complex::i() * gv[k]);
                let gzb = 0.5 * (gu[k] + Complex::i() * gv[k]);
                let one_minus = 1.0 - g[k].norm_sqr();
                let mut rhs = -8.0 * g[k].conj() * gz * gzb / one_minus;
                for b in [0, n] {
                    rhs -= d2[(i, b)] * g[idx(b, j)] + d2[(j, b)] * g[idx(i, b)];
                }
                rhs_re[r] = rhs.re;
                rhs_im[r] = rhs.im;
            }
            let sol_re = lu.solve(&rhs_re).ok_or_else(|| Error::NonConvergence("collocation solve".into()))?;
            let sol_im = lu.solve(&rhs_im).ok_or_else(|| Error::NonConvergence("collocation solve".into()))?;
            last_update = 0.0;
            for (r, &(i, j)) in interior.iter().enumerate() {
                let new = Complex::new(sol_re[r], sol_im[r]);
                let k = idx(i, j);
                last_update = f64::max(last_update, (new - g[k]).norm());
                g[k] = new;
            }
            if last_update < self.tolerance {
                return Ok(SpectralField {
                    center: self.center,
                    half_width: self.half_width,
                    coeffs: chebyshev_coefficients(&g, np),
                    iterations: iteration,
                    last_update,
                });
            }
        }
        Err(Error::NonConvergence(format!("harmonic map iteration (last update {last_update:e})")))
    }
}

fn grid_gradient(g: &[Complex], d1: &DMatrix<f64>, np: usize) -> (Vec<Complex>, Vec<Complex>) {
    let mut gu = vec![Complex::new(0.0, 0.0); np * np];
    let mut gv = vec![Complex::new(0.0, 0.0); np * np];
    for j in 0..np {
        for i in 0..np {
            let mut su = Complex::new(0.0, 0.0);
            let mut sv = Complex::new(0.0, 0.0);
            for k in 0..np {
                su += d1[(i, k)] * g[j * np + k];
                sv += d1[(j, k)] * g[k * np + i];
            }
            gu[j * np + i] = su;
            gv[j * np + i] = sv;
        }
    }
    (gu, gv)
}

/// Tensor Chebyshev coefficients from values at the Gauss–Lobatto grid.
fn chebyshev_coefficients(g: &[Complex], np: usize) -> Vec<Vec<Complex>> {
    let n = np - 1;
    let nf = n as f64;
    let cos_table: Vec<Vec<f64>> =
        (0..np).map(|m| (0..np).map(|i| (std::f64::consts::PI * (m * i) as f64 / nf).cos()).collect()).collect();
    let end = |i: usize| if i == 0 || i == n { 0.5 } else { 1.0 };
    let transform_1d = |vals: &[Complex]| -> Vec<Complex> {
        (0..np)
            .map(|m| {
                let s: Complex = (0..np).map(|i| vals[i] * (end(i) * cos_table[m][i])).sum();
                s * (2.0 / nf) * end(m)
            })
            .collect()
    };
    let mut by_row = vec![vec![Complex::new(0.0, 0.0); np]; np];
    for j in 0..np {
        let row: Vec<Complex> = (0..np).map(|i| g[j * np + i]).collect();
        by_row[j] = transform_1d(&row);
    }
    let mut coeffs = vec![vec![Complex::new(0.0, 0.0); np]; np];
    for m in 0..np {
        let col: Vec<Complex> = (0..np).map(|j| by_row[j][m]).collect();
        coeffs[m].copy_from_slice(&transform_1d(&col));
    }
    coeffs
}

/// Default boundary data: a small holomorphic map perturbed by `z̄`.
pub fn default_seed(z: Complex) -> Complex {
    0.3 * z + 0.2 * z.conj() + 0.1 * z * z
}

/// Half-width of the square, centred in the solver's domain, exposed by [`oracle_surface`].
pub const ORACLE_HALF_WIDTH: f64 = 0.25;

/// Harmonic data with the solved `g`, the formula weight and `H`, restricted to
/// `[-0.25, 0.25]²` where the closedness residual of the default solve stays below `1e-6`.
pub fn oracle_surface(h: f64) -> Result<SurfaceData> {
    let field = HarmonicMapSolver::default().solve(default_seed)?;
    let a = ORACLE_HALF_WIDTH;
    let domain = DomainSpec::Rectangle { u_min: -a, u_max: a, v_min: -a, v_max: a };
    SurfaceData::harmonic(Field::Spectral(std::sync::Arc::new(field)), h, OmegaMode::Formula, domain)
}
