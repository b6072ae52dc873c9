//! Recursive-descent parser for the surface expression grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' exponent)?
//! exponent := ['-' | '+'] INT | '(' ['-' | '+'] INT ')'
//! atom   := NUMBER | 'i' | 'z' | 'zbar' | FUNC '(' expr ')' | '(' expr ')'
//! ```

use std::fmt;

use super::ast::{BinOp, Expr, ExprKind, Func, Span};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub struct SyntaxError {
    /// Byte offset of the offending token.
    pub offset: usize,
    pub found: String,
    pub expected: Vec<String>,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at byte {}: found {}, expected one of [{}]",
            self.offset,
            self.found,
            self.expected.join(", ")
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Number { value: f64, integer: Option<i64> },
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Number { value, .. } => format!("number {value}"),
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Span)>, SyntaxError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let single = match c {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            i += 1;
            out.push((tok, Span { start, end: i }));
            continue;
        }
        if c.is_ascii_digit() || (c == b'.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let mut integral = true;
            if i < bytes.len() && bytes[i] == b'.' {
                integral = false;
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    integral = false;
                    i = j;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let s = &text[start..i];
            let value: f64 = s.parse().map_err(|_| SyntaxError {
                offset: start,
                found: format!("malformed number '{s}'"),
                expected: vec!["number".into()],
            })?;
            let integer = if integral { s.parse::<i64>().ok() } else { None };
            out.push((Tok::Number { value, integer }, Span { start, end: i }));
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(text[start..i].to_string()), Span { start, end: i }));
            continue;
        }
        let ch = text[start..].chars().next().unwrap_or('?');
        return Err(SyntaxError { offset: start, found: format!("character '{ch}'"), expected: atom_expected() });
    }
    out.push((Tok::Eof, Span { start: text.len(), end: text.len() }));
    Ok(out)
}

fn atom_expected() -> Vec<String> {
    ["number", "'i'", "'z'", "'zbar'", "function call", "'('", "'-'"].iter().map(|s| s.to_string()).collect()
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> SyntaxError {
        SyntaxError {
            offset: self.span().start,
            found: self.peek().describe(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Span, SyntaxError> {
        if *self.peek() == tok {
            Ok(self.bump().1)
        } else {
            Err(self.error(&[what]))
        }
    }

    fn expr(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr, SyntaxError> {
        if *self.peek() == Tok::Minus {
            let start = self.bump().1.start;
            let inner = self.unary()?;
            let span = Span { start, end: inner.span.end };
            return Ok(Expr::new(ExprKind::Neg(Box::new(inner)), span));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, SyntaxError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let (exponent, end) = self.exponent()?;
        let span = Span { start: base.span.start, end };
        Ok(Expr::new(ExprKind::Pow { base: Box::new(base), exponent }, span))
    }

    fn exponent(&mut self) -> Result<(i32, usize), SyntaxError> {
        let parenthesised = *self.peek() == Tok::LParen;
        if parenthesised {
            self.bump();
        }
        let sign = match self.peek() {
            Tok::Minus => {
                self.bump();
                -1
            }
            Tok::Plus => {
                self.bump();
                1
            }
            _ => 1,
        };
        let n = match self.peek() {
            Tok::Number { integer: Some(n), .. } if i32::try_from(*n).is_ok() => *n as i32,
            _ => return Err(self.error(&["integer exponent"])),
        };
        let mut end = self.bump().1.end;
        if parenthesised {
            end = self.expect(Tok::RParen, "')'")?.end;
        }
        Ok((sign * n, end))
    }

    fn atom(&mut self) -> Result<Expr, SyntaxError> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Number { value, .. } => {
                self.bump();
                Ok(Expr::new(ExprKind::Real(value), span))
            }
            Tok::LParen => {
                self.bump();
                let mut inner = self.expr()?;
                let end = self.expect(Tok::RParen, "')'")?.end;
                inner.span = Span { start: span.start, end };
                Ok(inner)
            }
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "i" => Ok(Expr::new(ExprKind::ImagUnit, span)),
                    "z" => Ok(Expr::new(ExprKind::Z, span)),
                    "zbar" => Ok(Expr::new(ExprKind::Zbar, span)),
                    other => {
                        let Some(func) = Func::from_name(other) else {
                            return Err(SyntaxError {
                                offset: span.start,
                                found: format!("identifier '{other}'"),
                                expected: atom_expected(),
                            });
                        };
                        self.expect(Tok::LParen, "'('")?;
                        let arg = self.expr()?;
                        let end = self.expect(Tok::RParen, "')'")?.end;
                        Ok(Expr::new(ExprKind::Call { func, arg: Box::new(arg) }, Span { start: span.start, end }))
                    }
                }
            }
            _ => Err(SyntaxError { offset: span.start, found: self.peek().describe(), expected: atom_expected() }),
        }
    }
}

fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
    let span = Span { start: lhs.span.start, end: rhs.span.end };
    Expr::new(ExprKind::Binary { op, lhs: Box::new(lhs), rhs: Box::new(rhs) }, span)
}

/// Parses an expression in `z` and `zbar`.
pub fn parse(text: &str) -> Result<Expr, SyntaxError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error(&["'+'", "'-'", "'*'", "'/'", "end of input"]));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variable() {
        assert_eq!(parse("z").unwrap().kind, ExprKind::Z);
        assert_eq!(parse("  zbar ").unwrap().kind, ExprKind::Zbar);
    }

    #[test]
    fn power_binds_tighter_than_product_and_negation() {
        let e = parse("2*z^2").unwrap();
        let ExprKind::Binary { op: BinOp::Mul, rhs, .. } = e.kind else { panic!("{e}") };
        assert!(matches!(rhs.kind, ExprKind::Pow { exponent: 2, .. }));

        let e = parse("-z^2").unwrap();
        let ExprKind::Neg(inner) = e.kind else { panic!() };
        assert!(matches!(inner.kind, ExprKind::Pow { .. }));
    }

    #[test]
    fn left_associative_subtraction() {
        let e = parse("z - 1 - 2").unwrap();
        assert_eq!(e.to_string(), "((z - 1.0) - 2.0)");
    }

    #[test]
    fn negative_exponents() {
        assert!(matches!(parse("z^-2").unwrap().kind, ExprKind::Pow { exponent: -2, .. }));
        assert!(matches!(parse("z^(-3)").unwrap().kind, ExprKind::Pow { exponent: -3, .. }));
    }

    #[test]
    fn non_integer_exponent_rejected() {
        let err = parse("z^1.5").unwrap_err();
        assert_eq!(err.offset, 2);
        assert_eq!(err.expected, vec!["integer exponent".to_string()]);
        assert!(parse("z^z").is_err());
    }

    #[test]
    fn error_offsets() {
        let err = parse("1 + * z").unwrap_err();
        assert_eq!(err.offset, 4);
        let err = parse("exp(z").unwrap_err();
        assert_eq!(err.offset, 5);
        assert_eq!(err.expected, vec!["')'".to_string()]);
        let err = parse("foo(z)").unwrap_err();
        assert_eq!(err.offset, 0);
        let err = parse("z z").unwrap_err();
        assert_eq!(err.offset, 2);
        let err = parse("z # 1").unwrap_err();
        assert_eq!(err.offset, 2);
    }

    #[test]
    fn spans_cover_calls() {
        let e = parse("1/(z^2*exp(-i*(z-1)))").unwrap();
        assert_eq!(e.span, Span { start: 0, end: 21 });
    }

    #[test]
    fn scientific_literals() {
        assert_eq!(parse("1.5e-3").unwrap().kind, ExprKind::Real(1.5e-3));
        assert_eq!(parse(".5").unwrap().kind, ExprKind::Real(0.5));
    }
}
