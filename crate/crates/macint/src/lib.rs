//! # macint
//!
//! Series-based antidifferentiation of elementary integrands on the open
//! interval `(0, 2)`.
//!
//! The engine evaluates the antiderivative of `f` at a point `x` as the
//! truncated double series
//!
//! ```text
//! M(x; p, q) = - Σ_{u=0}^{p}  d^u/dx^u( x·f(x) ) · Σ_{n=0}^{q} (1-x)^{n+u+1} / Π_{v=1}^{u+1}(n+v)
//! ```
//!
//! where the derivatives come from truncated Taylor jets ([`taylor`]) and the
//! inner series is evaluated in a factorial-free rescaled form ([`weights`]).
//! The produced antiderivative is normalized so that `M(1) = 0`.
//!
//! An independent adaptive Gauss–Kronrod integrator ([`oracle`]) supplies
//! ground truth for validation, and the `macint` binary wraps everything in a
//! CLI that can evaluate antiderivatives, emit convergence traces and curve
//! samples as CSV, and compare against the oracle.
//!
//! ## Quick start
//!
//! ```
//! use macint::expr::Expr;
//! use macint::engine::{self, TruncationParams};
//!
//! let f: Expr = "x^5/(x^7+1)".parse().unwrap();
//! let params = TruncationParams::default(); // p = 6, q = 10
//! let value = engine::definite(&f, 0.5, 1.5, params).unwrap();
//! assert!((value - 0.3733).abs() < 5e-4);
//! ```

pub mod engine;
pub mod expr;
pub mod oracle;
pub mod taylor;
pub mod weights;

pub mod cli;

mod kahan;
