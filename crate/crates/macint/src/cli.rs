//! Command-line front-end. Subcommands wrap the library operations; `trace`,
//! `curve`, and `table` emit CSV (header row, comma separator, newline
//! terminated), the rest print plain text. All CSV numbers carry full
//! round-trip precision except `table`, which rounds to 4 decimal places for
//! comparison against the reference values.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::engine::{self, ConditionKind, TruncationParams};
use crate::expr::{Expr, ParseError};
use crate::oracle;

#[derive(Debug, Parser)]
#[command(
    name = "macint",
    version,
    about = "Series-based antiderivatives of elementary integrands on (0, 2)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the antiderivative M(at; p, q) and its tail estimate.
    Eval {
        /// Integrand f(x).
        #[arg(long)]
        expr: String,
        /// Evaluation point in (0, 2); accepts fractions like 1/2.
        #[arg(long, value_parser = parse_endpoint)]
        at: f64,
        /// Outer truncation (upper limit on the derivative order).
        #[arg(long, default_value_t = 6)]
        p: usize,
        /// Inner truncation (upper limit on the series index).
        #[arg(long, default_value_t = 10)]
        q: usize,
    },
    /// Print M(to) - M(from).
    Definite {
        #[arg(long)]
        expr: String,
        #[arg(long, value_parser = parse_endpoint)]
        from: f64,
        #[arg(long, value_parser = parse_endpoint)]
        to: f64,
        #[arg(long, default_value_t = 6)]
        p: usize,
        #[arg(long, default_value_t = 10)]
        q: usize,
    },
    /// CSV of the definite result for every outer limit p = 0..=p-max.
    Trace {
        #[arg(long)]
        expr: String,
        #[arg(long, value_parser = parse_endpoint)]
        from: f64,
        #[arg(long, value_parser = parse_endpoint)]
        to: f64,
        #[arg(long)]
        p_max: usize,
        #[arg(long, default_value_t = 10)]
        q: usize,
        /// Write to a file instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CSV sampling of the integrand and its truncated antiderivative on a
    /// 513-point grid over [from, to].
    Curve {
        #[arg(long)]
        expr: String,
        #[arg(long, value_parser = parse_endpoint)]
        from: f64,
        #[arg(long, value_parser = parse_endpoint)]
        to: f64,
        #[arg(long, default_value_t = 6)]
        p: usize,
        #[arg(long, default_value_t = 10)]
        q: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the formula's validity conditions on (0, 2).
    Check {
        #[arg(long)]
        expr: String,
        /// Number of interior sample points.
        #[arg(long, default_value_t = 101)]
        grid: usize,
    },
    /// Compare the series result against adaptive quadrature.
    Compare {
        #[arg(long)]
        expr: String,
        #[arg(long, value_parser = parse_endpoint)]
        from: f64,
        #[arg(long, value_parser = parse_endpoint)]
        to: f64,
        #[arg(long, default_value_t = 6)]
        p: usize,
        #[arg(long, default_value_t = 10)]
        q: usize,
        /// Quadrature tolerance.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Reference-table reproduction: x^5/(x^7+1) on [1/2, 3/2], q=10,
    /// p = 0..=6, rounded to 4 decimal places.
    Table {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Engine(#[from] engine::EngineError),
    #[error("{0}")]
    Oracle(#[from] oracle::OracleError),
    #[error("curve interval [{from}, {to}] must satisfy 0 < from < to < 2")]
    CurveInterval { from: f64, to: f64 },
    #[error("could not write output: {0}")]
    Io(#[from] std::io::Error),
}

/// Accepts a plain decimal or a fraction `a/b`.
fn parse_endpoint(text: &str) -> Result<f64, String> {
    let text = text.trim();
    if let Some((numerator, denominator)) = text.split_once('/') {
        let n: f64 = numerator
            .trim()
            .parse()
            .map_err(|_| format!("invalid numerator `{numerator}`"))?;
        let d: f64 = denominator
            .trim()
            .parse()
            .map_err(|_| format!("invalid denominator `{denominator}`"))?;
        if d == 0.0 {
            return Err("denominator is zero".to_string());
        }
        Ok(n / d)
    } else {
        text.parse()
            .map_err(|_| format!("invalid number `{text}`"))
    }
}

/// Executes a subcommand, writing its output to `out` (or to the file named
/// by `--out` for the CSV subcommands).
pub fn run<W: Write>(command: &Command, out: &mut W) -> Result<(), CliError> {
    match command {
        Command::Eval { expr, at, p, q } => {
            let f: Expr = expr.parse()?;
            let params = TruncationParams { p: *p, q: *q };
            let report = engine::antiderivative_at(&f, *at, params)?;
            writeln!(out, "M({at}; p={p}, q={q}) = {}", report.value)?;
            writeln!(out, "tail estimate = {}", report.tail_estimate)?;
            Ok(())
        }
        Command::Definite {
            expr,
            from,
            to,
            p,
            q,
        } => {
            let f: Expr = expr.parse()?;
            let params = TruncationParams { p: *p, q: *q };
            let value = engine::definite(&f, *from, *to, params)?;
            writeln!(out, "{value:.9}")?;
            Ok(())
        }
        Command::Trace {
            expr,
            from,
            to,
            p_max,
            q,
            out: path,
        } => {
            let f: Expr = expr.parse()?;
            let rows = engine::partial_sum_trace(&f, *from, *to, *p_max, *q)?;
            let mut csv = String::from("p,value\n");
            for (p, value) in rows {
                csv.push_str(&format!("{p},{value}\n"));
            }
            emit(out, path.as_deref(), &csv)
        }
        Command::Curve {
            expr,
            from,
            to,
            p,
            q,
            out: path,
        } => {
            if !(0.0 < *from && *from < *to && *to < 2.0) {
                return Err(CliError::CurveInterval {
                    from: *from,
                    to: *to,
                });
            }
            let f: Expr = expr.parse()?;
            let params = TruncationParams { p: *p, q: *q };
            let mut csv = String::from("x,f,M\n");
            for i in 0..=512 {
                let x = from + (to - from) * i as f64 / 512.0;
                let report = engine::antiderivative_at(&f, x, params)?;
                csv.push_str(&format!("{x},{},{}\n", f.eval(x), report.value));
            }
            emit(out, path.as_deref(), &csv)
        }
        Command::Check { expr, grid } => {
            let f: Expr = expr.parse()?;
            let report = engine::check_conditions(&f, *grid);
            let lines = [
                ("defined on (0,2)", report.defined_ok, ConditionKind::Defined),
                (
                    "continuous on (0,2)",
                    report.continuous_ok,
                    ConditionKind::Continuous,
                ),
                (
                    "smooth (jets to order 6)",
                    report.smooth_ok,
                    ConditionKind::Smooth,
                ),
            ];
            for (label, ok, kind) in lines {
                if ok {
                    writeln!(out, "{label}: ok")?;
                } else {
                    let witness = report
                        .witness_for(kind)
                        .expect("a failed check always carries a witness");
                    writeln!(out, "{label}: FAIL (witness x = {})", witness.x)?;
                }
            }
            writeln!(out, "note: sampled at {grid} points; checks are heuristic")?;
            Ok(())
        }
        Command::Compare {
            expr,
            from,
            to,
            p,
            q,
            tol,
        } => {
            let f: Expr = expr.parse()?;
            let params = TruncationParams { p: *p, q: *q };
            let formula = engine::definite(&f, *from, *to, params)?;
            let reference = oracle::quad(|x| f.eval(x), *from, *to, *tol)?;
            writeln!(out, "formula = {formula} (p={p}, q={q})")?;
            writeln!(
                out,
                "oracle = {} (error estimate {}, {} panels)",
                reference.value, reference.abs_error_estimate, reference.subdivisions
            )?;
            writeln!(out, "difference = {}", (formula - reference.value).abs())?;
            Ok(())
        }
        Command::Table { out: path } => {
            let f: Expr = "x^5/(x^7+1)".parse().expect("built-in integrand parses");
            let rows = engine::partial_sum_trace(&f, 0.5, 1.5, 6, 10)
                .expect("built-in integrand is smooth on (0,2)");
            let mut csv = String::from("p,value\n");
            for (p, value) in rows {
                csv.push_str(&format!("{p},{value:.4}\n"));
            }
            emit(out, path.as_deref(), &csv)
        }
    }
}

fn emit<W: Write>(
    out: &mut W,
    path: Option<&std::path::Path>,
    contents: &str,
) -> Result<(), CliError> {
    match path {
        Some(path) => std::fs::write(path, contents)?,
        None => out.write_all(contents.as_bytes())?,
    }
    Ok(())
}
