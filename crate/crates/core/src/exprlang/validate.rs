use super::ast::{Expr, ExprKind, Func, Span};
use super::domain::DomainSpec;
use super::eval::{eval_value, EvalError};
use crate::wirtinger::Complex;

/// Default side length of the sampling grid for the data conditions.
pub const DEFAULT_SAMPLE_GRID: usize = 64;

/// A node that breaks holomorphy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub node: &'static str,
    pub span: Span,
}

/// Lists every `zbar`, `conj`, `re`, `im` and `abs2` node in pre-order.
pub fn validate_holomorphic(expr: &Expr) -> Result<(), Vec<Violation>> {
    let mut found = Vec::new();
    expr.walk(&mut |e| match &e.kind {
        ExprKind::Zbar => found.push(Violation { node: "zbar", span: e.span }),
        ExprKind::Call { func: Func::Real(r), .. } => found.push(Violation { node: r.name(), span: e.span }),
        _ => {}
    });
    if found.is_empty() {
        Ok(())
    } else {
        Err(found)
    }
}

/// Structural and sampled checks of holomorphic data `(g, ω̂)`.
#[derive(Clone, Debug, Default)]
pub struct DataReport {
    pub g_violations: Vec<Violation>,
    pub omega_violations: Vec<Violation>,
    /// Grid points where `(1 + |g|²)² |ω̂|²` vanishes within tolerance.
    pub metric_zeros: Vec<Complex>,
    /// `1 - |g|²` is below tolerance at every evaluable sample.
    pub unimodular_everywhere: bool,
    pub eval_failures: Vec<(Complex, EvalError)>,
    pub samples: usize,
}

impl DataReport {
    pub fn is_ok(&self) -> bool {
        self.g_violations.is_empty()
            && self.omega_violations.is_empty()
            && self.metric_zeros.is_empty()
            && !self.unimodular_everywhere
    }

    /// One line per problem, for warnings and error messages.
    pub fn messages(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (name, list) in [("g", &self.g_violations), ("omega", &self.omega_violations)] {
            for v in list {
                out.push(format!("{name}: non-holomorphic '{}' at bytes {}..{}", v.node, v.span.start, v.span.end));
            }
        }
        if self.unimodular_everywhere {
            out.push("1 - |g|^2 vanishes identically on the sample grid".into());
        }
        if let Some(z) = self.metric_zeros.first() {
            out.push(format!(
                "(1 + |g|^2)^2 |omega|^2 vanishes at {} sample point(s), first at {z}",
                self.metric_zeros.len()
            ));
        }
        if let Some((z, e)) = self.eval_failures.first() {
            out.push(format!("evaluation failed at {} sample point(s), first at {z}: {e}", self.eval_failures.len()));
        }
        out
    }
}

/// Runs the structural check on both expressions and samples the metric and
/// modulus conditions on an `n x n` grid over `domain`.
pub fn check_holomorphic_data(g: &Expr, omega: &Expr, domain: &DomainSpec, n: usize, zero_tol: f64) -> DataReport {
    let mut report = DataReport {
        g_violations: validate_holomorphic(g).err().unwrap_or_default(),
        omega_violations: validate_holomorphic(omega).err().unwrap_or_default(),
        ..DataReport::default()
    };
    let mut evaluable = 0usize;
    let mut unimodular = 0usize;
    for z in domain.sample_grid(n) {
        report.samples += 1;
        let (gv, wv) = match (eval_value(g, z), eval_value(omega, z)) {
            (Ok(gv), Ok(wv)) => (gv, wv),
            (Err(e), _) | (_, Err(e)) => {
                report.eval_failures.push((z, e));
                continue;
            }
        };
        evaluable += 1;
        let m = gv.norm_sqr();
        if (1.0 + m).powi(2) * wv.norm_sqr() < zero_tol {
            report.metric_zeros.push(z);
        }
        if (1.0 - m).abs() < zero_tol {
            unimodular += 1;
        }
    }
    report.unimodular_everywhere = evaluable > 0 && unimodular == evaluable;
    report
}
