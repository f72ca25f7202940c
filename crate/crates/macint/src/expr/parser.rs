//! Recursive-descent parser for the expression grammar:
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := unary (('*'|'/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?
//! atom   := number | 'x' | 'pi' | 'e' | 'euler_gamma' | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! `^` is right-associative (its right operand is a `unary`) and binds
//! tighter than unary minus, so `-x^2` parses as `-(x^2)`.

use super::lexer::{tokenize, Token, TokenKind};
use super::{Expr, Func, NamedConstant, ParseError};

pub(super) fn parse(text: &str) -> Result<Expr, ParseError> {
    let tokens = tokenize(text);
    let mut parser = Parser { tokens, pos: 0 };
    let expr = parser.expr()?;
    parser.expect_end()?;
    Ok(expr)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn advance(&mut self) -> Token {
        let token = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        token
    }

    fn syntax_error(&self, expected: &[&'static str]) -> ParseError {
        let token = self.peek();
        ParseError::Syntax {
            offset: token.offset,
            expected: expected.to_vec(),
            found: token.kind.describe(),
        }
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        if self.peek().kind == TokenKind::End {
            Ok(())
        } else {
            Err(self.syntax_error(&["`+`", "`-`", "`*`", "`/`", "`^`", "end of input"]))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek().kind {
                TokenKind::Plus => {
                    self.advance();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                TokenKind::Minus => {
                    self.advance();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek().kind {
                TokenKind::Star => {
                    self.advance();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                TokenKind::Slash => {
                    self.advance();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek().kind == TokenKind::Minus {
            self.advance();
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek().kind == TokenKind::Caret {
            self.advance();
            let exponent = self.unary()?;
            Ok(Expr::Pow(Box::new(base), Box::new(exponent)))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        const EXPECTED: &[&str] = &["number", "`x`", "constant", "function", "`(`"];
        match self.peek().kind.clone() {
            TokenKind::Number(value) => {
                self.advance();
                Ok(Expr::Constant(value))
            }
            TokenKind::LParen => {
                self.advance();
                let inner = self.expr()?;
                if self.peek().kind == TokenKind::RParen {
                    self.advance();
                    Ok(inner)
                } else {
                    Err(self.syntax_error(&["`)`"]))
                }
            }
            TokenKind::Ident(name) => {
                let offset = self.peek().offset;
                self.advance();
                match name.as_str() {
                    "x" => Ok(Expr::Variable),
                    "pi" => Ok(Expr::NamedConstant(NamedConstant::Pi)),
                    "e" => Ok(Expr::NamedConstant(NamedConstant::E)),
                    "euler_gamma" => Ok(Expr::NamedConstant(NamedConstant::EulerGamma)),
                    _ => match Func::from_name(&name) {
                        Some(func) => {
                            if self.peek().kind != TokenKind::LParen {
                                return Err(self.syntax_error(&["`(`"]));
                            }
                            self.advance();
                            let arg = self.expr()?;
                            if self.peek().kind != TokenKind::RParen {
                                return Err(self.syntax_error(&["`)`"]));
                            }
                            self.advance();
                            Ok(Expr::Call(func, Box::new(arg)))
                        }
                        None => Err(ParseError::UnknownIdentifier { offset, name }),
                    },
                }
            }
            _ => Err(self.syntax_error(EXPECTED)),
        }
    }
}
