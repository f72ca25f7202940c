//! Parse, represent, evaluate, and print elementary-function expressions in
//! one free variable `x`.
//!
//! The grammar (see [`parser`]) covers the usual arithmetic operators, `^`
//! (right-associative, binds tighter than unary minus), the constants `pi`,
//! `e`, `euler_gamma`, and the functions `sin`, `cos`, `tan`, `exp`, `ln`,
//! `sqrt`, `gamma`. Implicit multiplication is not supported.
//!
//! Printing an expression and reparsing it reproduces the tree exactly; see
//! the `Display` impl.

mod lexer;
mod parser;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::oracle;

/// Functions callable in an expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Ln,
    Sqrt,
    Gamma,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        match name {
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            "tan" => Some(Func::Tan),
            "exp" => Some(Func::Exp),
            "ln" => Some(Func::Ln),
            "sqrt" => Some(Func::Sqrt),
            "gamma" => Some(Func::Gamma),
            _ => None,
        }
    }

    /// The name used in source text and printed output.
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
            Func::Gamma => "gamma",
        }
    }
}

/// Built-in named constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedConstant {
    Pi,
    E,
    EulerGamma,
}

impl NamedConstant {
    /// The numeric value of the constant.
    pub fn value(self) -> f64 {
        match self {
            NamedConstant::Pi => std::f64::consts::PI,
            NamedConstant::E => std::f64::consts::E,
            NamedConstant::EulerGamma => oracle::euler_gamma(),
        }
    }

    fn name(self) -> &'static str {
        match self {
            NamedConstant::Pi => "pi",
            NamedConstant::E => "e",
            NamedConstant::EulerGamma => "euler_gamma",
        }
    }
}

/// Abstract syntax tree of an elementary integrand in the variable `x`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Constant(f64),
    NamedConstant(NamedConstant),
    Variable,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

/// Error produced by [`parse`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: expected {}, found {found}", format_expected(expected))]
    Syntax {
        /// Byte offset of the offending token in the input.
        offset: usize,
        /// What the parser would have accepted at this position.
        expected: Vec<&'static str>,
        /// Description of the token actually found.
        found: String,
    },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { offset: usize, name: String },
}

fn format_expected(expected: &[&'static str]) -> String {
    expected.join(" or ")
}

/// Parses an expression. Whitespace between tokens is ignored.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    parser::parse(text)
}

impl FromStr for Expr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

impl Expr {
    /// Evaluates at `x` with ordinary `f64` semantics. Domain violations
    /// (division by zero, `ln` of a non-positive value, `gamma` at a
    /// non-positive point) surface as non-finite results, never as panics.
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Expr::Constant(c) => *c,
            Expr::NamedConstant(c) => c.value(),
            Expr::Variable => x,
            Expr::Neg(a) => -a.eval(x),
            Expr::Add(a, b) => a.eval(x) + b.eval(x),
            Expr::Sub(a, b) => a.eval(x) - b.eval(x),
            Expr::Mul(a, b) => a.eval(x) * b.eval(x),
            Expr::Div(a, b) => a.eval(x) / b.eval(x),
            Expr::Pow(base, exponent) => {
                let b = base.eval(x);
                let e = exponent.eval(x);
                powf_or_powi(b, e)
            }
            Expr::Call(func, arg) => {
                let a = arg.eval(x);
                match func {
                    Func::Sin => a.sin(),
                    Func::Cos => a.cos(),
                    Func::Tan => a.tan(),
                    Func::Exp => a.exp(),
                    Func::Ln => a.ln(),
                    Func::Sqrt => a.sqrt(),
                    Func::Gamma => oracle::gamma_weierstrass(a, oracle::DEFAULT_GAMMA_DEPTH)
                        .unwrap_or(f64::NAN),
                }
            }
        }
    }

    /// The value of the expression if it contains no `x`, otherwise `None`.
    pub fn as_constant(&self) -> Option<f64> {
        if self.contains_variable() {
            None
        } else {
            // Evaluation never reads `x` when the variable is absent.
            Some(self.eval(f64::NAN))
        }
    }

    fn contains_variable(&self) -> bool {
        match self {
            Expr::Constant(_) | Expr::NamedConstant(_) => false,
            Expr::Variable => true,
            Expr::Neg(a) | Expr::Call(_, a) => a.contains_variable(),
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::Div(a, b)
            | Expr::Pow(a, b) => a.contains_variable() || b.contains_variable(),
        }
    }
}

/// Integer exponents use `powi`, which is exact for integral powers of
/// negative bases where `powf` semantics would be correct but slower paths
/// matter less than the jet engine's; everything else falls through to
/// `powf`.
pub(crate) fn powf_or_powi(base: f64, exponent: f64) -> f64 {
    if exponent.fract() == 0.0 && exponent.abs() <= i32::MAX as f64 {
        base.powi(exponent as i32)
    } else {
        base.powf(exponent)
    }
}

// Precedence levels used when printing: parentheses are inserted whenever a
// child sits at a looser level than its position in the grammar admits.
const LEVEL_ADD: u8 = 1;
const LEVEL_MUL: u8 = 2;
const LEVEL_NEG: u8 = 3;
const LEVEL_POW: u8 = 4;
const LEVEL_ATOM: u8 = 5;

impl Expr {
    fn level(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => LEVEL_ADD,
            Expr::Mul(..) | Expr::Div(..) => LEVEL_MUL,
            Expr::Neg(..) => LEVEL_NEG,
            Expr::Pow(..) => LEVEL_POW,
            Expr::Constant(_) | Expr::NamedConstant(_) | Expr::Variable | Expr::Call(..) => {
                LEVEL_ATOM
            }
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min_level: u8) -> fmt::Result {
        let parens = self.level() < min_level;
        if parens {
            write!(f, "(")?;
        }
        match self {
            Expr::Constant(c) => write!(f, "{c}")?,
            Expr::NamedConstant(c) => write!(f, "{}", c.name())?,
            Expr::Variable => write!(f, "x")?,
            Expr::Neg(a) => {
                write!(f, "-")?;
                a.fmt_at(f, LEVEL_NEG)?;
            }
            Expr::Add(a, b) => {
                a.fmt_at(f, LEVEL_ADD)?;
                write!(f, "+")?;
                b.fmt_at(f, LEVEL_MUL)?;
            }
            Expr::Sub(a, b) => {
                a.fmt_at(f, LEVEL_ADD)?;
                write!(f, "-")?;
                b.fmt_at(f, LEVEL_MUL)?;
            }
            Expr::Mul(a, b) => {
                a.fmt_at(f, LEVEL_MUL)?;
                write!(f, "*")?;
                b.fmt_at(f, LEVEL_NEG)?;
            }
            Expr::Div(a, b) => {
                a.fmt_at(f, LEVEL_MUL)?;
                write!(f, "/")?;
                b.fmt_at(f, LEVEL_NEG)?;
            }
            Expr::Pow(base, exponent) => {
                base.fmt_at(f, LEVEL_ATOM)?;
                write!(f, "^")?;
                exponent.fmt_at(f, LEVEL_NEG)?;
            }
            Expr::Call(func, arg) => {
                write!(f, "{}(", func.name())?;
                arg.fmt_at(f, LEVEL_ADD)?;
                write!(f, ")")?;
            }
        }
        if parens {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    /// Prints with parentheses exactly where the grammar needs them; the
    /// output reparses to a structurally identical tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, LEVEL_ADD)
    }
}
