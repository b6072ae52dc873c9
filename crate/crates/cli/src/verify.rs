//! The property suite behind `surflab verify`.

use std::fmt;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use surflab::classify::gauss_map_fold_point;
use surflab::invariants::{trace_singular_curve, DEFAULT_MAX_STEPS, DEFAULT_STEP};
use surflab::maxface::psi_report;
use surflab::surface_core::{Pipeline, Tolerances};
use surflab::wirtinger::Complex;

use crate::commands::{auto_seeds, gaussian_curvature, grid_values, surface_point};
use crate::mesh::Grid;
use crate::{output, CliError, CommonArgs, Loaded, Outcome};

/// Random targets for the path-independence check.
pub const PATH_TARGETS: usize = 20;
const RNG_SEED: u64 = 0x5eed_5eed;

/// Outcome of one property over all its samples.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub tolerance: f64,
    pub samples: usize,
    pub worst: f64,
    pub at: Option<Complex>,
    pub errors: Vec<String>,
}

impl Check {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self { name, tolerance, samples: 0, worst: 0.0, at: None, errors: Vec::new() }
    }

    /// Records a non-negative residual; the check fails if any exceeds the tolerance.
    fn observe(&mut self, residual: f64, at: Complex) {
        self.samples += 1;
        if residual > self.worst || residual.is_nan() {
            self.worst = if residual.is_nan() { f64::INFINITY } else { residual };
            self.at = Some(at);
        }
    }

    fn error(&mut self, at: Complex, e: impl fmt::Display) {
        self.errors.push(format!("at ({}, {}): {e}", at.re, at.im));
    }

    pub fn passed(&self) -> bool {
        self.errors.is_empty() && self.worst <= self.tolerance
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{verdict} {:<22} samples={:<5} worst={:.3e} tol={:.0e}",
            self.name, self.samples, self.worst, self.tolerance
        )?;
        if let (false, Some(z)) = (self.passed(), self.at) {
            write!(f, " at ({:.12}, {:.12})", z.re, z.im)?;
        }
        for e in &self.errors {
            write!(f, "\n    error {e}")?;
        }
        Ok(())
    }
}

fn random_point(rng: &mut ChaCha8Rng, loaded: &Loaded) -> Complex {
    let domain = &loaded.config.domain;
    let (lo, hi) = domain.bbox();
    loop {
        let z = Complex::new(rng.gen_range(lo.re..hi.re), rng.gen_range(lo.im..hi.im));
        if domain.contains(z) {
            return z;
        }
    }
}

fn path_independence(loaded: &Loaded) -> Check {
    let tol = match loaded.data.pipeline() {
        Pipeline::Maxface => 1e-9,
        Pipeline::Cmc { .. } => 1e-6,
    };
    let mut check = Check::new("path_independence", tol);
    let mut rng = ChaCha8Rng::seed_from_u64(RNG_SEED);
    for _ in 0..PATH_TARGETS {
        let target = random_point(&mut rng, loaded);
        let via = random_point(&mut rng, loaded);
        let direct = surface_point(&loaded.data, loaded.base, target);
        let detour = surface_point(&loaded.data, loaded.base, via)
            .and_then(|a| Ok(a + surface_point(&loaded.data, via, target)?));
        match (direct, detour) {
            (Ok(a), Ok(b)) => check.observe((a - b).norm(), target),
            (Err(e), _) | (_, Err(e)) => check.error(target, e),
        }
    }
    check
}

/// Runs every property on the loaded surface, tracing from `seeds` (or from
/// automatically found seeds when empty).
pub fn run_suite(loaded: &Loaded, seeds: &[Complex]) -> Vec<Check> {
    let data = &loaded.data;
    let tol = Tolerances::default();
    let seeds = if seeds.is_empty() {
        let grid = Grid::new(data.domain(), loaded.resolution);
        let (lambda_hat, _) = grid_values(data, &grid.points);
        auto_seeds(data, &grid, &lambda_hat)
    } else {
        seeds.to_vec()
    };

    let mut tracing = Check::new("tracing", 0.0);
    let mut projection = Check::new("projection", tol.projection);
    let mut kappa_nu = Check::new("kappa_nu_vanishes", 1e-8);
    let mut negative = Check::new("kappa_s_negative", 0.0);
    let mut agreement = Check::new("kappa_s_closed_general", 1e-7);
    let mut epsilon = Check::new("epsilon_gamma", 0.0);
    let mut sign = Check::new("sign_kappa_s_k_e", 0.0);
    let mut psi = Check::new("psi_identity", 1e-8);
    let mut fold = Check::new("gauss_map_fold", 1e-10);

    for &seed in &seeds {
        let curve = match trace_singular_curve(data, seed, DEFAULT_STEP, DEFAULT_MAX_STEPS) {
            Ok(c) => c,
            Err(e) => {
                tracing.error(seed, e);
                continue;
            }
        };
        tracing.observe(0.0, seed);
        for s in &curve.samples {
            let p = match data.point(s.z) {
                Ok(p) => p,
                Err(e) => {
                    tracing.error(s.z, e);
                    continue;
                }
            };
            projection.observe(p.lambda_hat().abs(), s.z);
            match gauss_map_fold_point(&p, &tol) {
                Ok(g) => fold.observe((g.det + p.g_z().norm_sqr()).abs() + if g.fold { 0.0 } else { 1.0 }, s.z),
                Err(e) => fold.error(s.z, e),
            }
            if p.pipeline == Pipeline::Maxface {
                match psi_report(&p, &tol) {
                    Ok(r) => psi.observe((r.psi_det - 2.0 * r.psi_closed).abs(), s.z),
                    Err(e) => psi.error(s.z, e),
                }
            }
            let (Some(closed), Some(general), Some(nu), Some(eps)) =
                (s.kappa_s_closed, s.kappa_s_general, s.kappa_nu, s.epsilon_gamma)
            else {
                continue;
            };
            kappa_nu.observe(nu.abs(), s.z);
            negative.observe(closed.max(general).max(0.0) + if closed < 0.0 && general < 0.0 { 0.0 } else { 1.0 }, s.z);
            agreement.observe((closed - general).abs() / closed.abs(), s.z);
            epsilon.observe((eps + 1.0).abs(), s.z);
            match gaussian_curvature(&p) {
                Ok(k) => sign.observe(if k.signum() == closed.signum() { 0.0 } else { 1.0 }, s.z),
                Err(e) => sign.error(s.z, e),
            }
        }
    }
    vec![path_independence(loaded), tracing, projection, kappa_nu, negative, agreement, epsilon, sign, psi, fold]
}

pub fn verify(args: &CommonArgs) -> Result<Outcome, CliError> {
    let loaded = Loaded::from_args(args)?;
    let checks = run_suite(&loaded, &args.seed);
    let mut w = output(&args.out)?;
    writeln!(w, "surflab verify {}", args.config.display())?;
    for c in &checks {
        writeln!(w, "{c}")?;
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    writeln!(w, "{} passed, {failed} failed", checks.len() - failed)?;
    w.flush()?;
    Ok(if failed == 0 { Outcome::Success } else { Outcome::PropertyFailure })
}
