use std::fmt;

use crate::wirtinger::Elementary;

/// Byte range of a node in the source text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }
}

/// Unary calls that break holomorphy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RealOp {
    Conj,
    Re,
    Im,
    Abs2,
}

impl RealOp {
    pub const ALL: [RealOp; 4] = [RealOp::Conj, RealOp::Re, RealOp::Im, RealOp::Abs2];

    pub fn name(self) -> &'static str {
        match self {
            RealOp::Conj => "conj",
            RealOp::Re => "re",
            RealOp::Im => "im",
            RealOp::Abs2 => "abs2",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Elementary(Elementary),
    Real(RealOp),
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Elementary(e) => e.name(),
            Func::Real(r) => r.name(),
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Elementary::from_name(name).map(Func::Elementary).or_else(|| RealOp::from_name(name).map(Func::Real))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Real(f64),
    ImagUnit,
    Z,
    Zbar,
    Neg(Box<Expr>),
    Binary { op: BinOp, lhs: Box<Expr>, rhs: Box<Expr> },
    Pow { base: Box<Expr>, exponent: i32 },
    Call { func: Func, arg: Box<Expr> },
}

/// Parsed expression. Equality compares tree shape only; spans are ignored.
#[derive(Clone, Debug)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Self {
        Self { kind, span }
    }

    /// Pre-order traversal of all nodes.
    pub fn walk<'a>(&'a self, visit: &mut impl FnMut(&'a Expr)) {
        visit(self);
        match &self.kind {
            ExprKind::Neg(e) | ExprKind::Pow { base: e, .. } | ExprKind::Call { arg: e, .. } => e.walk(visit),
            ExprKind::Binary { lhs, rhs, .. } => {
                lhs.walk(visit);
                rhs.walk(visit);
            }
            ExprKind::Real(_) | ExprKind::ImagUnit | ExprKind::Z | ExprKind::Zbar => {}
        }
    }
}

/// Fully parenthesised rendering that parses back to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Real(x) => write!(f, "{x:?}"),
            ExprKind::ImagUnit => f.write_str("i"),
            ExprKind::Z => f.write_str("z"),
            ExprKind::Zbar => f.write_str("zbar"),
            ExprKind::Neg(e) => write!(f, "(-{e})"),
            ExprKind::Binary { op, lhs, rhs } => write!(f, "({lhs} {} {rhs})", op.symbol()),
            ExprKind::Pow { base, exponent } => write!(f, "({base}^{exponent})"),
            ExprKind::Call { func, arg } => write!(f, "{}({arg})", func.name()),
        }
    }
}
