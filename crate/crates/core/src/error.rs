use crate::exprlang::{ConfigError, EvalError, SyntaxError, Violation};
use crate::wirtinger::{Complex, JetError};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("evaluation failed: {0}")]
    Eval(#[from] EvalError),
    #[error("jet arithmetic failed: {0}")]
    Jet(#[from] JetError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{which} is not holomorphic: {}", describe(violations))]
    NotHolomorphic { which: &'static str, violations: Vec<Violation> },
    #[error("data condition violated at {at}: {what}")]
    DataViolation { what: String, at: Complex },
    #[error("point {at} is outside the domain")]
    OutsideDomain { at: Complex },
    #[error("H must be a finite non-zero constant, got {0}")]
    InvalidMeanCurvature(f64),
    #[error("|g| = 1 at {at}: the weight formula does not extend, supply an explicit omega")]
    ExplicitOmegaRequired { at: Complex },
    #[error("point {at} lies on the singular set")]
    OnSingularSet { at: Complex },
    #[error("point {at} is not singular (identifier {lambda_hat:e})")]
    NotSingular { at: Complex, lambda_hat: f64 },
    #[error("degenerate singular point at {at} (|g_z| = {g_z_abs:e})")]
    Degenerate { at: Complex, g_z_abs: f64 },
    #[error("singular point {at} is not of the first kind (Im phi = {im_phi:e})")]
    NotFirstKind { at: Complex, im_phi: f64 },
    #[error("degenerate point met while tracing at {at}")]
    DegenerateOnCurve { at: Complex },
    #[error("curve left the domain near {at}")]
    LeftDomain { at: Complex },
    #[error("{0} did not converge")]
    NonConvergence(String),
    #[error("integrand is not closed: residual {worst:e} at {at}")]
    NotClosed { worst: f64, at: Complex },
    #[error("need at least {need} samples, got {got}")]
    TooFewSamples { got: usize, need: usize },
    #[error("adapted chart failed: {0}")]
    ChartFailure(String),
    #[error("jet of order {need} required, got {got}")]
    InsufficientJetOrder { need: usize, got: usize },
    #[error("operation requires {expected} data")]
    WrongPipeline { expected: &'static str },
    #[error("{0}")]
    Invalid(String),
}

fn describe(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| format!("'{}' at bytes {}..{}", v.node, v.span.start, v.span.end))
        .collect::<Vec<_>>()
        .join(", ")
}
