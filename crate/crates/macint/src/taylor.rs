//! Truncated Taylor-coefficient (jet) arithmetic.
//!
//! A jet holds the coefficients `c_k = h^(k)(x0)/k!` of a function `h` at an
//! expansion point, truncated at a chosen order. Jets of expressions are
//! computed by structural recursion with the standard recurrences for the
//! arithmetic operators and elementary functions, so the `u`-th derivative of
//! `x·f(x)` comes out as `u!·c_u` without any symbolic differentiation.
//!
//! The engine consumes the coefficients `c_u` directly (they pair with the
//! `u!`-rescaled inner series of [`crate::weights`]); the factorial is only
//! applied when raw derivatives are reported.

use thiserror::Error;

use crate::expr::{Expr, Func};
use crate::oracle;

/// Number of Weierstrass-product factors used when a `gamma` node is
/// expanded inside a jet. Deliberately lower than the scalar reference depth
/// ([`oracle::DEFAULT_GAMMA_DEPTH`]): every factor costs jet operations.
pub const DEFAULT_GAMMA_JET_DEPTH: usize = 1_000;

/// Truncated Taylor coefficients of a function at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorJet {
    x0: f64,
    coeffs: Vec<f64>,
}

impl TaylorJet {
    /// The expansion point.
    pub fn x0(&self) -> f64 {
        self.x0
    }

    /// The truncation order `K`; the jet stores `K+1` coefficients.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// All coefficients `c_0..=c_K`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `c_k`. Panics if `k` exceeds the order.
    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs[k]
    }
}

/// The expression cannot be expanded at the requested point: some
/// intermediate jet would divide by a zero constant term or apply
/// `ln`/`sqrt`/a non-integer power/`gamma` outside its domain.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("expression is singular at x = {x0}: {reason}")]
pub struct SingularityError {
    pub x0: f64,
    pub reason: &'static str,
}

/// Taylor coefficients of `f` at `x0`, truncated at `order`.
pub fn jet_of(f: &Expr, x0: f64, order: usize) -> Result<TaylorJet, SingularityError> {
    jet_of_with_gamma_depth(f, x0, order, DEFAULT_GAMMA_JET_DEPTH)
}

/// [`jet_of`] with an explicit Weierstrass-product depth for `gamma` nodes.
pub fn jet_of_with_gamma_depth(
    f: &Expr,
    x0: f64,
    order: usize,
    gamma_depth: usize,
) -> Result<TaylorJet, SingularityError> {
    let ctx = Ctx {
        x0,
        len: order + 1,
        gamma_depth,
    };
    Ok(TaylorJet {
        x0,
        coeffs: ctx.eval(f)?,
    })
}

/// Jet of `x·f(x)` at `x0`. This is the object the series engine consumes:
/// its coefficient `c_u` carries `d^u/dx^u(x·f(x))` scaled by `1/u!`.
pub fn xf_jet(f: &Expr, x0: f64, order: usize) -> Result<TaylorJet, SingularityError> {
    let ctx = Ctx {
        x0,
        len: order + 1,
        gamma_depth: DEFAULT_GAMMA_JET_DEPTH,
    };
    let f_jet = ctx.eval(f)?;
    Ok(TaylorJet {
        x0,
        coeffs: mul(&ctx.variable(), &f_jet),
    })
}

/// Raw derivatives `g_u = d^u/dx^u(x·f(x))` at `x0` for `u = 0..=p`.
pub fn derivatives_of_xf(f: &Expr, x0: f64, p: usize) -> Result<Vec<f64>, SingularityError> {
    let jet = xf_jet(f, x0, p)?;
    let mut factorial = 1.0;
    let mut derivatives = Vec::with_capacity(p + 1);
    for (u, &c) in jet.coeffs().iter().enumerate() {
        if u > 0 {
            factorial *= u as f64;
        }
        derivatives.push(factorial * c);
    }
    Ok(derivatives)
}

struct Ctx {
    x0: f64,
    len: usize,
    gamma_depth: usize,
}

impl Ctx {
    fn singular(&self, reason: &'static str) -> SingularityError {
        SingularityError {
            x0: self.x0,
            reason,
        }
    }

    fn constant(&self, c: f64) -> Vec<f64> {
        let mut jet = vec![0.0; self.len];
        jet[0] = c;
        jet
    }

    fn variable(&self) -> Vec<f64> {
        let mut jet = vec![0.0; self.len];
        jet[0] = self.x0;
        if self.len > 1 {
            jet[1] = 1.0;
        }
        jet
    }

    fn eval(&self, f: &Expr) -> Result<Vec<f64>, SingularityError> {
        match f {
            Expr::Constant(c) => Ok(self.constant(*c)),
            Expr::NamedConstant(c) => Ok(self.constant(c.value())),
            Expr::Variable => Ok(self.variable()),
            Expr::Neg(a) => {
                let mut jet = self.eval(a)?;
                for c in &mut jet {
                    *c = -*c;
                }
                Ok(jet)
            }
            Expr::Add(a, b) => {
                let mut jet = self.eval(a)?;
                let rhs = self.eval(b)?;
                for (c, r) in jet.iter_mut().zip(&rhs) {
                    *c += r;
                }
                Ok(jet)
            }
            Expr::Sub(a, b) => {
                let mut jet = self.eval(a)?;
                let rhs = self.eval(b)?;
                for (c, r) in jet.iter_mut().zip(&rhs) {
                    *c -= r;
                }
                Ok(jet)
            }
            Expr::Mul(a, b) => Ok(mul(&self.eval(a)?, &self.eval(b)?)),
            Expr::Div(a, b) => self.div(&self.eval(a)?, &self.eval(b)?),
            Expr::Pow(base, exponent) => self.pow(base, exponent),
            Expr::Call(func, arg) => {
                let a = self.eval(arg)?;
                match func {
                    Func::Sin => Ok(sin_cos(&a).0),
                    Func::Cos => Ok(sin_cos(&a).1),
                    Func::Tan => {
                        let (s, c) = sin_cos(&a);
                        self.div(&s, &c)
                    }
                    Func::Exp => Ok(exp(&a)),
                    Func::Ln => self.ln(&a),
                    Func::Sqrt => self.sqrt(&a),
                    Func::Gamma => self.gamma(&a),
                }
            }
        }
    }

    /// Integer-valued constant exponents take the exact power recurrence;
    /// everything else goes through `exp`/`ln` composition and requires a
    /// positive base at the expansion point.
    fn pow(&self, base: &Expr, exponent: &Expr) -> Result<Vec<f64>, SingularityError> {
        if let Some(k) = exponent.as_constant() {
            if k.fract() == 0.0 && k.abs() <= i32::MAX as f64 {
                let b = self.eval(base)?;
                return self.powi(&b, k as i64);
            }
            let b = self.eval(base)?;
            if b[0] <= 0.0 {
                return Err(self.singular("non-integer power of a non-positive constant term"));
            }
            let mut log = self.ln(&b)?;
            for c in &mut log {
                *c *= k;
            }
            return Ok(exp(&log));
        }
        let b = self.eval(base)?;
        let e = self.eval(exponent)?;
        if b[0] <= 0.0 {
            return Err(self.singular("variable power of a non-positive constant term"));
        }
        Ok(exp(&mul(&e, &self.ln(&b)?)))
    }

    fn powi(&self, base: &[f64], k: i64) -> Result<Vec<f64>, SingularityError> {
        if k == 0 {
            return Ok(self.constant(1.0));
        }
        let mut remaining = k.unsigned_abs();
        let mut acc = self.constant(1.0);
        let mut square = base.to_vec();
        loop {
            if remaining & 1 == 1 {
                acc = mul(&acc, &square);
            }
            remaining >>= 1;
            if remaining == 0 {
                break;
            }
            square = mul(&square, &square);
        }
        if k < 0 {
            self.div(&self.constant(1.0), &acc)
        } else {
            Ok(acc)
        }
    }

    fn div(&self, a: &[f64], b: &[f64]) -> Result<Vec<f64>, SingularityError> {
        if b[0] == 0.0 {
            return Err(self.singular("division by a zero constant term"));
        }
        let mut out = vec![0.0; self.len];
        for k in 0..self.len {
            let mut acc = a[k];
            for j in 0..k {
                acc -= out[j] * b[k - j];
            }
            out[k] = acc / b[0];
        }
        Ok(out)
    }

    fn ln(&self, a: &[f64]) -> Result<Vec<f64>, SingularityError> {
        if a[0] <= 0.0 {
            return Err(self.singular("ln of a non-positive constant term"));
        }
        let mut out = vec![0.0; self.len];
        out[0] = a[0].ln();
        for k in 1..self.len {
            let mut acc = k as f64 * a[k];
            for j in 1..k {
                acc -= j as f64 * out[j] * a[k - j];
            }
            out[k] = acc / (k as f64 * a[0]);
        }
        Ok(out)
    }

    fn sqrt(&self, a: &[f64]) -> Result<Vec<f64>, SingularityError> {
        if a[0] <= 0.0 {
            return Err(self.singular("sqrt of a non-positive constant term"));
        }
        let mut out = vec![0.0; self.len];
        out[0] = a[0].sqrt();
        for k in 1..self.len {
            let mut acc = a[k];
            for j in 1..k {
                acc -= out[j] * out[k - j];
            }
            out[k] = acc / (2.0 * out[0]);
        }
        Ok(out)
    }

    /// Weierstrass product: `Γ(z) = e^{-γz}/z · Π_{n≥1} (1+z/n)^{-1} e^{z/n}`
    /// truncated at `gamma_depth` factors, each of which is an elementary
    /// jet. Requires a positive constant term (real branch).
    fn gamma(&self, a: &[f64]) -> Result<Vec<f64>, SingularityError> {
        if !(a[0] > 0.0) {
            return Err(self.singular("gamma of a non-positive constant term"));
        }
        let euler_gamma = oracle::euler_gamma();
        let mut scaled: Vec<f64> = a.iter().map(|c| -euler_gamma * c).collect();
        let mut acc = self.div(&exp(&scaled), a)?;
        for n in 1..=self.gamma_depth {
            let inv_n = 1.0 / n as f64;
            for (s, c) in scaled.iter_mut().zip(a) {
                *s = c * inv_n;
            }
            // scaled = z/n; factor = e^{z/n} / (1 + z/n)
            let numerator = exp(&scaled);
            scaled[0] += 1.0;
            let factor = self.div(&numerator, &scaled)?;
            acc = mul(&acc, &factor);
        }
        Ok(acc)
    }
}

/// Truncated Cauchy product.
fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len();
    let mut out = vec![0.0; n];
    for k in 0..n {
        let mut acc = 0.0;
        for i in 0..=k {
            acc += a[i] * b[k - i];
        }
        out[k] = acc;
    }
    out
}

fn exp(a: &[f64]) -> Vec<f64> {
    let n = a.len();
    let mut out = vec![0.0; n];
    out[0] = a[0].exp();
    for k in 1..n {
        let mut acc = 0.0;
        for j in 1..=k {
            acc += j as f64 * a[j] * out[k - j];
        }
        out[k] = acc / k as f64;
    }
    out
}

fn sin_cos(a: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = a.len();
    let mut s = vec![0.0; n];
    let mut c = vec![0.0; n];
    s[0] = a[0].sin();
    c[0] = a[0].cos();
    for k in 1..n {
        let mut ds = 0.0;
        let mut dc = 0.0;
        for j in 1..=k {
            let weighted = j as f64 * a[j];
            ds += weighted * c[k - j];
            dc += weighted * s[k - j];
        }
        s[k] = ds / k as f64;
        c[k] = -dc / k as f64;
    }
    (s, c)
}
