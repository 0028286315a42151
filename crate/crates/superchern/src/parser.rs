//! Recursive-descent parser for the polynomial expression language.
//!
//! Grammar, loosest to tightest: `+ -`, `*`, unary `-`, `^` with a
//! non-negative integer exponent. Literals are integers or rationals like
//! `3/4`; variables are `x1` .. `xn`. Errors carry 1-based columns.

use num::BigInt;

use crate::error::{Error, Result};
use crate::scalar_poly::{Poly, Rational};

#[derive(Clone, Debug, PartialEq)]
pub enum ExprAst {
    Num(Rational),
    Var { index: usize, col: usize },
    Neg(Box<ExprAst>),
    Add(Box<ExprAst>, Box<ExprAst>),
    Sub(Box<ExprAst>, Box<ExprAst>),
    Mul(Box<ExprAst>, Box<ExprAst>),
    Pow(Box<ExprAst>, u32),
}

#[derive(Clone, Debug, PartialEq)]
enum TokenKind {
    Num(Rational),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

#[derive(Clone, Debug)]
struct Token {
    kind: TokenKind,
    col: usize,
}

fn err(col: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        col,
        msg: msg.into(),
    }
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let col = i + 1;
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
            }
            '+' => {
                tokens.push(Token {
                    kind: TokenKind::Plus,
                    col,
                });
                i += 1;
            }
            '-' => {
                tokens.push(Token {
                    kind: TokenKind::Minus,
                    col,
                });
                i += 1;
            }
            '*' => {
                tokens.push(Token {
                    kind: TokenKind::Star,
                    col,
                });
                i += 1;
            }
            '^' => {
                tokens.push(Token {
                    kind: TokenKind::Caret,
                    col,
                });
                i += 1;
            }
            '(' => {
                tokens.push(Token {
                    kind: TokenKind::LParen,
                    col,
                });
                i += 1;
            }
            ')' => {
                tokens.push(Token {
                    kind: TokenKind::RParen,
                    col,
                });
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let numerator: String = chars[start..i].iter().collect();
                let numerator: BigInt = numerator.parse().expect("digits");
                let mut value = Rational::from(numerator);
                if i < chars.len() && chars[i] == '/' {
                    i += 1;
                    let dstart = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    if dstart == i {
                        return Err(err(i + 1, "expected digits after '/'"));
                    }
                    let denominator: String = chars[dstart..i].iter().collect();
                    let denominator: BigInt = denominator.parse().expect("digits");
                    if num::Zero::is_zero(&denominator) {
                        return Err(err(dstart + 1, "division by zero"));
                    }
                    value /= Rational::from(denominator);
                }
                tokens.push(Token {
                    kind: TokenKind::Num(value),
                    col,
                });
            }
            'x' => {
                i += 1;
                let dstart = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if dstart == i {
                    return Err(err(col, "expected variable index after 'x'"));
                }
                let index: String = chars[dstart..i].iter().collect();
                let index: usize = index
                    .parse()
                    .map_err(|_| err(dstart + 1, "variable index too large"))?;
                if index == 0 {
                    return Err(err(col, "variable indices start at x1"));
                }
                tokens.push(Token {
                    kind: TokenKind::Var(index - 1),
                    col,
                });
            }
            _ => return Err(err(col, format!("unexpected character '{c}'"))),
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn current_col(&self) -> usize {
        self.peek().map(|t| t.col).unwrap_or(self.end_col)
    }

    // expr := term (('+' | '-') term)*
    fn expr(&mut self) -> Result<ExprAst> {
        let mut lhs = self.term()?;
        while let Some(t) = self.peek() {
            match t.kind {
                TokenKind::Plus => {
                    self.next();
                    lhs = ExprAst::Add(Box::new(lhs), Box::new(self.term()?));
                }
                TokenKind::Minus => {
                    self.next();
                    lhs = ExprAst::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    // term := factor ('*' factor)*
    fn term(&mut self) -> Result<ExprAst> {
        let mut lhs = self.factor()?;
        while let Some(t) = self.peek() {
            if t.kind == TokenKind::Star {
                self.next();
                lhs = ExprAst::Mul(Box::new(lhs), Box::new(self.factor()?));
            } else {
                break;
            }
        }
        Ok(lhs)
    }

    // factor := '-' factor | power
    fn factor(&mut self) -> Result<ExprAst> {
        if let Some(t) = self.peek() {
            if t.kind == TokenKind::Minus {
                self.next();
                return Ok(ExprAst::Neg(Box::new(self.factor()?)));
            }
        }
        self.power()
    }

    // power := atom ('^' uint)?
    fn power(&mut self) -> Result<ExprAst> {
        let base = self.atom()?;
        if let Some(t) = self.peek() {
            if t.kind == TokenKind::Caret {
                self.next();
                let col = self.current_col();
                match self.next() {
                    Some(Token {
                        kind: TokenKind::Num(r),
                        ..
                    }) => {
                        if !r.is_integer() {
                            return Err(err(col, "exponent must be an integer"));
                        }
                        let exponent: u32 = num::ToPrimitive::to_u32(&r.to_integer())
                            .ok_or_else(|| err(col, "exponent out of range"))?;
                        return Ok(ExprAst::Pow(Box::new(base), exponent));
                    }
                    Some(Token {
                        kind: TokenKind::Minus,
                        ..
                    }) => return Err(err(col, "negative exponent")),
                    _ => return Err(err(col, "expected integer exponent")),
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ExprAst> {
        let col = self.current_col();
        match self.next() {
            Some(Token {
                kind: TokenKind::Num(r),
                ..
            }) => Ok(ExprAst::Num(r)),
            Some(Token {
                kind: TokenKind::Var(index),
                col,
            }) => Ok(ExprAst::Var { index, col }),
            Some(Token {
                kind: TokenKind::LParen,
                ..
            }) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Token {
                        kind: TokenKind::RParen,
                        ..
                    }) => Ok(inner),
                    Some(t) => Err(err(t.col, "expected ')'")),
                    None => Err(err(self.end_col, "expected ')'")),
                }
            }
            Some(t) => Err(err(t.col, format!("unexpected {}", describe(&t.kind)))),
            None => Err(err(col, "unexpected end of input")),
        }
    }
}

fn describe(kind: &TokenKind) -> &'static str {
    match kind {
        TokenKind::Num(_) => "number",
        TokenKind::Var(_) => "variable",
        TokenKind::Plus => "'+'",
        TokenKind::Minus => "'-'",
        TokenKind::Star => "'*'",
        TokenKind::Caret => "'^'",
        TokenKind::LParen => "'('",
        TokenKind::RParen => "')'",
    }
}

pub fn parse_expression(src: &str) -> Result<ExprAst> {
    let tokens = lex(src)?;
    let end_col = src.chars().count() + 1;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end_col,
    };
    let ast = parser.expr()?;
    if let Some(t) = parser.peek() {
        return Err(err(t.col, format!("unexpected {}", describe(&t.kind))));
    }
    Ok(ast)
}

/// Largest variable index (1-based) appearing in the expression; 0 when none.
pub fn max_var_index(ast: &ExprAst) -> usize {
    match ast {
        ExprAst::Num(_) => 0,
        ExprAst::Var { index, .. } => index + 1,
        ExprAst::Neg(a) | ExprAst::Pow(a, _) => max_var_index(a),
        ExprAst::Add(a, b) | ExprAst::Sub(a, b) | ExprAst::Mul(a, b) => {
            max_var_index(a).max(max_var_index(b))
        }
    }
}

/// Lower an expression to a polynomial in `n_vars` chart variables.
pub fn lower_to_poly(ast: &ExprAst, n_vars: usize) -> Result<Poly> {
    match ast {
        ExprAst::Num(r) => Ok(Poly::constant(n_vars, r.clone())),
        ExprAst::Var { index, col } => Poly::var(n_vars, *index).map_err(|_| {
            err(
                *col,
                format!("unknown variable x{} ({} chart variables)", index + 1, n_vars),
            )
        }),
        ExprAst::Neg(a) => Ok(lower_to_poly(a, n_vars)?.neg()),
        ExprAst::Add(a, b) => lower_to_poly(a, n_vars)?.checked_add(&lower_to_poly(b, n_vars)?),
        ExprAst::Sub(a, b) => lower_to_poly(a, n_vars)?.checked_sub(&lower_to_poly(b, n_vars)?),
        ExprAst::Mul(a, b) => lower_to_poly(a, n_vars)?.checked_mul(&lower_to_poly(b, n_vars)?),
        ExprAst::Pow(a, k) => {
            let base = lower_to_poly(a, n_vars)?;
            let mut out = Poly::one(n_vars);
            for _ in 0..*k {
                out = out.checked_mul(&base)?;
            }
            Ok(out)
        }
    }
}

pub fn parse_polynomial(src: &str, n_vars: usize) -> Result<Poly> {
    lower_to_poly(&parse_expression(src)?, n_vars)
}
