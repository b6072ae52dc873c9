use std::fmt;

use super::ast::{BinOp, Expr, ExprKind, Func, RealOp, Span};
use crate::wirtinger::{Complex, Jet, JetError, DIVISION_EPS, MAX_ORDER};

/// Evaluation failure tagged with the source range of the failing node.
#[derive(Clone, Copy, Debug, PartialEq, thiserror::Error)]
pub struct EvalError {
    pub kind: JetError,
    pub span: Span,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at bytes {}..{}", self.kind, self.span.start, self.span.end)
    }
}

/// Jet of `expr` at `z`, with `z` and `zbar` as the independent Wirtinger variables.
pub fn eval_jet(expr: &Expr, z: Complex, order: usize) -> Result<Jet, EvalError> {
    assert!(order <= MAX_ORDER, "jet order above {MAX_ORDER}");
    let at = |kind| EvalError { kind, span: expr.span };
    Ok(match &expr.kind {
        ExprKind::Real(x) => Jet::real(*x, order),
        ExprKind::ImagUnit => Jet::constant(Complex::i(), order),
        ExprKind::Z => Jet::var_z(z, order),
        ExprKind::Zbar => Jet::var_zbar(z, order),
        ExprKind::Neg(e) => -eval_jet(e, z, order)?,
        ExprKind::Binary { op, lhs, rhs } => {
            let l = eval_jet(lhs, z, order)?;
            let r = eval_jet(rhs, z, order)?;
            match op {
                BinOp::Add => l + r,
                BinOp::Sub => l - r,
                BinOp::Mul => l * r,
                BinOp::Div => l.try_div(&r).map_err(at)?,
            }
        }
        ExprKind::Pow { base, exponent } => eval_jet(base, z, order)?.powi(*exponent).map_err(at)?,
        ExprKind::Call { func, arg } => {
            let a = eval_jet(arg, z, order)?;
            match func {
                Func::Elementary(e) => e.apply(&a).map_err(at)?,
                Func::Real(RealOp::Conj) => a.conj(),
                Func::Real(RealOp::Re) => a.re(),
                Func::Real(RealOp::Im) => a.im(),
                Func::Real(RealOp::Abs2) => a.abs2(),
            }
        }
    })
}

/// Point value of `expr`, computed with plain complex arithmetic and no jets.
pub fn eval_value(expr: &Expr, z: Complex) -> Result<Complex, EvalError> {
    let at = |kind| EvalError { kind, span: expr.span };
    Ok(match &expr.kind {
        ExprKind::Real(x) => Complex::new(*x, 0.0),
        ExprKind::ImagUnit => Complex::i(),
        ExprKind::Z => z,
        ExprKind::Zbar => z.conj(),
        ExprKind::Neg(e) => -eval_value(e, z)?,
        ExprKind::Binary { op, lhs, rhs } => {
            let l = eval_value(lhs, z)?;
            let r = eval_value(rhs, z)?;
            match op {
                BinOp::Add => l + r,
                BinOp::Sub => l - r,
                BinOp::Mul => l * r,
                BinOp::Div => {
                    if r.norm() < DIVISION_EPS {
                        return Err(at(JetError::DivisionByZero));
                    }
                    l / r
                }
            }
        }
        ExprKind::Pow { base, exponent } => {
            let b = eval_value(base, z)?;
            if *exponent < 0 && b.norm() < DIVISION_EPS {
                return Err(at(JetError::DivisionByZero));
            }
            b.powi(*exponent)
        }
        ExprKind::Call { func, arg } => {
            let a = eval_value(arg, z)?;
            match func {
                Func::Elementary(e) => e.eval(a).map_err(at)?,
                Func::Real(RealOp::Conj) => a.conj(),
                Func::Real(RealOp::Re) => Complex::new(a.re, 0.0),
                Func::Real(RealOp::Im) => Complex::new(a.im, 0.0),
                Func::Real(RealOp::Abs2) => Complex::new(a.norm_sqr(), 0.0),
            }
        }
    })
}
