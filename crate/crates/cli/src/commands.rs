//! `build`, `singular` and `invariants`.

use std::io::Write;

use serde::Serialize;
use surflab::classify::{classify_point, ClassifyReport};
use surflab::cmc::{integrate_cmc, k_e_cmc};
use surflab::invariants::{
    project, special_points, trace_points, trace_singular_curve, SingularCurve, SpecialPoint, DEFAULT_MAX_STEPS,
    DEFAULT_STEP,
};
use surflab::maxface;
use surflab::quadrature::PathSpec;
use surflab::surface_core::{OmegaMode, Pipeline, PointData, SurfaceData, Tolerances, Vec3};
use surflab::wirtinger::Complex;
use surflab::Error;

use crate::mesh::{Grid, Mesh};
use crate::{output, CliError, CommonArgs, Loaded, Outcome};

/// `f(z) - f(base)` along the domain's default path.
pub fn surface_point(data: &SurfaceData, base: Complex, z: Complex) -> surflab::Result<Vec3> {
    let mut pts = data.domain().default_path(base, z);
    pts.dedup();
    let path = PathSpec::new(pts)?;
    match data.pipeline() {
        Pipeline::Maxface => maxface::integrate(data, &path),
        Pipeline::Cmc { .. } => integrate_cmc(data, &path),
    }
}

/// `K_E` of either pipeline at point data.
pub fn gaussian_curvature(p: &PointData) -> surflab::Result<f64> {
    match p.pipeline {
        Pipeline::Maxface => maxface::k_e(p),
        Pipeline::Cmc { h } => k_e_cmc(p, h),
    }
}

/// `λ̂` and `K_E` per grid point; `NaN` where the data cannot be evaluated.
pub fn grid_values(data: &SurfaceData, points: &[Complex]) -> (Vec<f64>, Vec<f64>) {
    points
        .iter()
        .map(|&z| match data.point(z) {
            Ok(p) => (p.lambda_hat(), gaussian_curvature(&p).unwrap_or(f64::NAN)),
            Err(_) => (f64::NAN, f64::NAN),
        })
        .unzip()
}

/// Points where `λ̂` changes sign along grid edges, by linear interpolation.
pub fn sign_changes(grid: &Grid, lambda_hat: &[f64]) -> Vec<Complex> {
    grid.edges()
        .into_iter()
        .filter(|&(a, b)| lambda_hat[a] * lambda_hat[b] < 0.0)
        .map(|(a, b)| {
            let (la, lb) = (lambda_hat[a], lambda_hat[b]);
            grid.points[a] + (grid.points[b] - grid.points[a]) * (la / (la - lb))
        })
        .collect()
}

/// One seed per traced component of the singular set met by the grid.
pub fn auto_seeds(data: &SurfaceData, grid: &Grid, lambda_hat: &[f64]) -> Vec<Complex> {
    let tol = Tolerances::default();
    let mut seeds = Vec::new();
    let mut covered: Vec<Complex> = Vec::new();
    for guess in sign_changes(grid, lambda_hat) {
        let Ok(z) = project(data, guess, &tol) else { continue };
        if covered.iter().any(|c| (c - z).norm() < DEFAULT_STEP) {
            continue;
        }
        match trace_points(data, z, DEFAULT_STEP, DEFAULT_MAX_STEPS) {
            Ok((points, _)) => {
                covered.extend(points.into_iter().map(|(_, p)| p));
                seeds.push(z);
            }
            Err(e) => log::warn!("tracing from {z} failed: {e}"),
        }
    }
    seeds
}

fn formula_weight(data: &SurfaceData) -> bool {
    matches!(data, SurfaceData::Harmonic { omega: OmegaMode::Formula, .. })
}

pub fn build_mesh(loaded: &Loaded) -> Result<Mesh, CliError> {
    let data = &loaded.data;
    let grid = Grid::new(data.domain(), loaded.resolution);
    let (lambda_hat, k_e) = grid_values(data, &grid.points);
    let crossings = sign_changes(&grid, &lambda_hat);
    if formula_weight(data) {
        let near =
            grid.points.iter().zip(&lambda_hat).find(|(_, l)| l.is_nan() || l.abs() < Tolerances::default().on_set);
        if let Some(&at) = crossings.first().or(near.map(|(z, _)| z)) {
            return Err(Error::ExplicitOmegaRequired { at }.into());
        }
    }
    let mut mesh = Mesh { faces: grid.faces.clone(), k_e, lambda_hat, ..Mesh::default() };
    for &z in &grid.points {
        mesh.vertices.push(surface_point(data, loaded.base, z)?);
    }
    for seed in auto_seeds(data, &grid, &mesh.lambda_hat) {
        let (points, closed) = trace_points(data, seed, DEFAULT_STEP, DEFAULT_MAX_STEPS)?;
        let start = mesh.vertices.len();
        for &(_, z) in &points {
            let p = data.point(z)?;
            mesh.vertices.push(surface_point(data, loaded.base, z)?);
            mesh.lambda_hat.push(p.lambda_hat());
            mesh.k_e.push(gaussian_curvature(&p).unwrap_or(f64::NAN));
        }
        let mut line: Vec<usize> = (start..mesh.vertices.len()).collect();
        if closed {
            line.push(start);
        }
        mesh.singular_polylines.push(line);
    }
    mesh.validate().map_err(|e| Error::Invalid(format!("mesh: {e}")))?;
    Ok(mesh)
}

pub fn build(args: &CommonArgs) -> Result<Outcome, CliError> {
    let loaded = Loaded::from_args(args)?;
    let mesh = build_mesh(&loaded)?;
    let mut w = output(&args.out)?;
    mesh.write_obj(&mut w)?;
    w.flush()?;
    Ok(Outcome::Success)
}

#[derive(Debug, Serialize)]
pub struct SampleReport {
    pub t: f64,
    #[serde(flatten)]
    pub report: ClassifyReport,
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum CurveReport {
    Traced { seed: [f64; 2], closed: bool, samples: Vec<SampleReport>, special_points: Vec<SpecialPoint> },
    Failed { seed: [f64; 2], error: String },
}

fn curve_report(data: &SurfaceData, seed: Complex) -> surflab::Result<CurveReport> {
    let curve = trace_singular_curve(data, seed, DEFAULT_STEP, DEFAULT_MAX_STEPS)?;
    let tol = Tolerances::default();
    let samples = curve
        .samples
        .iter()
        .map(|s| Ok(SampleReport { t: s.t, report: classify_point(&data.point(s.z)?, &tol)? }))
        .collect::<surflab::Result<Vec<_>>>()?;
    Ok(CurveReport::Traced {
        seed: [seed.re, seed.im],
        closed: curve.closed,
        special_points: special_points(data, &curve)?,
        samples,
    })
}

pub fn singular_reports(data: &SurfaceData, seeds: &[Complex]) -> (Vec<CurveReport>, bool) {
    let mut all_ok = true;
    let reports = seeds
        .iter()
        .map(|&seed| {
            curve_report(data, seed).unwrap_or_else(|e| {
                all_ok = false;
                CurveReport::Failed { seed: [seed.re, seed.im], error: e.to_string() }
            })
        })
        .collect();
    (reports, all_ok)
}

pub fn singular(args: &CommonArgs) -> Result<Outcome, CliError> {
    if args.seed.is_empty() {
        return Err(CliError::Usage("singular needs at least one --seed".into()));
    }
    let loaded = Loaded::from_args(args)?;
    let (reports, all_ok) = singular_reports(&loaded.data, &args.seed);
    let mut w = output(&args.out)?;
    serde_json::to_writer_pretty(&mut w, &reports)?;
    writeln!(w)?;
    w.flush()?;
    Ok(if all_ok { Outcome::Success } else { Outcome::PropertyFailure })
}

pub const CSV_HEADER: [&str; 9] =
    ["t", "re(z)", "im(z)", "kappa_s_closed", "kappa_s_general", "kappa_nu", "kappa_locus", "type", "epsilon_gamma"];

fn cell(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.16e}")).unwrap_or_default()
}

pub fn write_csv(curve: &SingularCurve, w: impl Write) -> Result<(), CliError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CSV_HEADER)?;
    for s in &curve.samples {
        out.write_record([
            cell(Some(s.t)),
            cell(Some(s.z.re)),
            cell(Some(s.z.im)),
            cell(s.kappa_s_closed),
            cell(s.kappa_s_general),
            cell(s.kappa_nu),
            cell(s.kappa_locus),
            s.singularity.name().to_string(),
            s.epsilon_gamma.map(|e| format!("{e:.0}")).unwrap_or_default(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn invariants(args: &CommonArgs) -> Result<Outcome, CliError> {
    let [seed] = args.seed[..] else {
        return Err(CliError::Usage(format!("invariants needs exactly one --seed, got {}", args.seed.len())));
    };
    let loaded = Loaded::from_args(args)?;
    let curve = trace_singular_curve(&loaded.data, seed, DEFAULT_STEP, DEFAULT_MAX_STEPS)?;
    let mut w = output(&args.out)?;
    write_csv(&curve, &mut w)?;
    w.flush()?;
    Ok(Outcome::Success)
}
