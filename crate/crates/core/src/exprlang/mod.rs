//! Expression language for the data `g` and `ω̂`, domains and surface config files.

mod ast;
mod config;
mod domain;
mod eval;
mod parse;
mod validate;

pub use ast::{BinOp, Expr, ExprKind, Func, RealOp, Span};
pub use config::{ConfigError, SurfaceConfig, SurfaceKind};
pub use domain::{Axis, DomainSpec};
pub use eval::{eval_jet, eval_value, EvalError};
pub use parse::{parse, SyntaxError};
pub use validate::{check_holomorphic_data, validate_holomorphic, DataReport, Violation, DEFAULT_SAMPLE_GRID};
