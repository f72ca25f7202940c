//! Numerically stable evaluation of the inner series
//!
//! ```text
//! S_u(x; q) = Σ_{n=0}^{q} (1-x)^{n+u+1} / Π_{v=1}^{u+1}(n+v)
//! ```
//!
//! The engine works with the `u!`-rescaled form `T_u = u!·S_u` throughout:
//! pairing `T_u` with the Taylor coefficient `c_u` (which absorbs `1/u!`)
//! keeps every factor of the product `c_u·T_u` well scaled and no factorial
//! is ever materialized. The rescaled weights
//!
//! ```text
//! w(u, n) = u!·n! / (n+u+1)!
//! ```
//!
//! all lie in `(0, 1]` and follow the recurrences
//! `w(0, n) = 1/(n+1)` and `w(u, n) = w(u-1, n) · u/(n+u+1)`.

use thiserror::Error;

/// Evaluation point outside the series' interval of validity.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("evaluation point x = {x} is outside the open interval (0, 2)")]
pub struct DomainError {
    pub x: f64,
}

/// Checks `0 < x < 2`.
pub(crate) fn check_domain(x: f64) -> Result<(), DomainError> {
    if x > 0.0 && x < 2.0 {
        Ok(())
    } else {
        Err(DomainError { x })
    }
}

/// Precomputed table of the rescaled weights `w(u, n) = u!·n!/(n+u+1)!`.
#[derive(Debug, Clone)]
pub struct WeightTable {
    max_u: usize,
    max_n: usize,
    // Row-major, rows indexed by u.
    w: Vec<f64>,
}

/// Fills a [`WeightTable`] for `u = 0..=max_u`, `n = 0..=max_n` using the
/// factorial-free recurrences.
pub fn build_weights(max_u: usize, max_n: usize) -> WeightTable {
    let cols = max_n + 1;
    let mut w = vec![0.0; (max_u + 1) * cols];
    for n in 0..=max_n {
        w[n] = 1.0 / (n + 1) as f64;
    }
    for u in 1..=max_u {
        for n in 0..=max_n {
            w[u * cols + n] = w[(u - 1) * cols + n] * u as f64 / (n + u + 1) as f64;
        }
    }
    WeightTable { max_u, max_n, w }
}

impl WeightTable {
    pub fn max_u(&self) -> usize {
        self.max_u
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    /// `w(u, n)`. Panics if the indices exceed the built ranges.
    pub fn get(&self, u: usize, n: usize) -> f64 {
        assert!(
            u <= self.max_u && n <= self.max_n,
            "weight index (u={u}, n={n}) outside table ({}, {})",
            self.max_u,
            self.max_n
        );
        self.w[u * (self.max_n + 1) + n]
    }
}

/// The rescaled inner series `T_u(x; q) = Σ_{n=0}^{q} w(u,n)·(1-x)^{n+u+1}`.
///
/// The unscaled series of the formula is `S_u = T_u/u!`. Powers of `t = 1-x`
/// are accumulated multiplicatively, one multiply per term.
pub fn inner_series_scaled(
    u: usize,
    x: f64,
    q: usize,
    table: &WeightTable,
) -> Result<f64, DomainError> {
    check_domain(x)?;
    assert!(
        u <= table.max_u() && q <= table.max_n(),
        "inner series (u={u}, q={q}) outside weight table ({}, {})",
        table.max_u(),
        table.max_n()
    );
    let t = 1.0 - x;
    let mut power = 1.0;
    for _ in 0..=u {
        power *= t;
    }
    // power = t^(u+1)
    let mut sum = 0.0;
    for n in 0..=q {
        sum += table.get(u, n) * power;
        power *= t;
    }
    Ok(sum)
}

/// Rigorous upper bound on the tail `Σ_{n>q} w(u,n)·|1-x|^{n+u+1}` dropped by
/// [`inner_series_scaled`]: since `w(u, ·)` is nonincreasing, the tail is
/// dominated by the geometric series `w(u, q+1)·|t|^{q+u+2}/(1-|t|)`.
pub fn tail_bound(u: usize, x: f64, q: usize) -> Result<f64, DomainError> {
    check_domain(x)?;
    let t = (1.0 - x).abs();
    // w(u, q+1) by the recurrence in u.
    let n = q + 1;
    let mut w = 1.0 / (n + 1) as f64;
    for v in 1..=u {
        w *= v as f64 / (n + v + 1) as f64;
    }
    let mut power = 1.0;
    for _ in 0..q + u + 2 {
        power *= t;
    }
    Ok(w * power / (1.0 - t))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: usize) -> f64 {
        (1..=n).map(|k| k as f64).product()
    }

    /// Direct factorial evaluation; independent oracle for the recurrences.
    fn weight_by_factorials(u: usize, n: usize) -> f64 {
        factorial(u) * factorial(n) / factorial(n + u + 1)
    }

    #[test]
    fn weight_examples() {
        let table = build_weights(4, 8);
        assert_eq!(table.get(0, 0), 1.0);
        assert_eq!(table.get(1, 0), 0.5);
        // w(2,3) = 2!·3!/6! = 1/60
        assert!((table.get(2, 3) - 1.0 / 60.0).abs() < 1e-16);
    }

    #[test]
    fn weights_match_factorial_definition() {
        let table = build_weights(12, 16);
        for u in 0..=12 {
            for n in 0..=16 {
                let direct = weight_by_factorials(u, n);
                let rel = (table.get(u, n) - direct).abs() / direct;
                assert!(rel < 1e-14, "w({u},{n}): {} vs {direct}", table.get(u, n));
            }
        }
    }

    #[test]
    fn weights_are_in_unit_interval_and_monotone() {
        let table = build_weights(20, 40);
        for u in 0..=20 {
            for n in 0..=40 {
                let w = table.get(u, n);
                assert!(w > 0.0 && w <= 1.0, "w({u},{n}) = {w}");
                if n > 0 {
                    assert!(w <= table.get(u, n - 1), "not nonincreasing in n at ({u},{n})");
                }
                if u > 0 {
                    assert!(w <= table.get(u - 1, n), "not nonincreasing in u at ({u},{n})");
                }
            }
        }
        for n in 0..=40 {
            assert_eq!(table.get(0, n), 1.0 / (n + 1) as f64);
        }
    }

    #[test]
    fn inner_series_vanishes_at_one() {
        let table = build_weights(6, 400);
        for u in 0..=6 {
            assert_eq!(inner_series_scaled(u, 1.0, 400, &table).unwrap(), 0.0);
        }
    }

    #[test]
    fn inner_series_closed_forms() {
        let table = build_weights(1, 400);
        // T_0(x) → -ln x
        let t0 = inner_series_scaled(0, 0.5, 200, &table).unwrap();
        assert!((t0 - 0.6931471805599453).abs() < 1e-14);
        // T_1 = S_1 → x·ln x + 1 - x
        let t1 = inner_series_scaled(1, 0.5, 200, &table).unwrap();
        assert!((t1 - 0.15342640972002733).abs() < 1e-14);

        for i in 0..33 {
            let x = 0.2 + 1.6 * i as f64 / 32.0;
            let t0 = inner_series_scaled(0, x, 400, &table).unwrap();
            assert!((t0 + x.ln()).abs() < 1e-12, "T_0 at x={x}");
            let t1 = inner_series_scaled(1, x, 400, &table).unwrap();
            assert!((t1 - (x * x.ln() + 1.0 - x)).abs() < 1e-12, "T_1 at x={x}");
        }
    }

    #[test]
    fn domain_is_enforced() {
        let table = build_weights(2, 10);
        assert!(inner_series_scaled(0, 0.0, 10, &table).is_err());
        assert!(inner_series_scaled(0, 2.0, 10, &table).is_err());
        assert!(inner_series_scaled(0, -0.5, 10, &table).is_err());
        assert!(tail_bound(0, 2.5, 10).is_err());
    }

    #[test]
    fn tail_bound_dominates_true_tail_for_closed_form() {
        // True truncation error of T_0(x; q) against -ln x.
        let table = build_weights(0, 10);
        for &x in &[0.3, 0.5, 0.9, 1.1, 1.5, 1.7] {
            let q = 10;
            let truncated = inner_series_scaled(0, x, q, &table).unwrap();
            let true_tail = (-x.ln() - truncated).abs();
            let bound = tail_bound(0, x, q).unwrap();
            assert!(
                bound >= true_tail,
                "x={x}: bound {bound} < true tail {true_tail}"
            );
        }
    }

    #[test]
    fn tail_bound_edge_cases_and_monotonicity() {
        assert_eq!(tail_bound(3, 1.0, 7).unwrap(), 0.0);
        for &x in &[0.5, 1.2, 1.8] {
            let mut previous = f64::INFINITY;
            for q in [5, 10, 20, 40, 80] {
                let bound = tail_bound(2, x, q).unwrap();
                assert!(bound <= previous, "bound not nonincreasing in q at x={x}");
                previous = bound;
            }
        }
    }

    #[test]
    fn telescoping_product_identity() {
        // Π_{v=1}^{N+2} (n+v)/(n+v+1) = (n+1)/(n+N+3)
        for n in 0..=50u64 {
            for big_n in 0..=50u64 {
                let mut product = 1.0;
                for v in 1..=big_n + 2 {
                    product *= (n + v) as f64 / (n + v + 1) as f64;
                }
                let closed = (n + 1) as f64 / (n + big_n + 3) as f64;
                let rel = (product - closed).abs() / closed;
                assert!(rel < 1e-12, "n={n}, N={big_n}: {product} vs {closed}");
            }
        }
    }

    /// `d/dt S_u(t) = S_{u-1}(t)` where `S_u` is the unscaled series viewed
    /// as a function of `t = 1-x`; checked by central differences.
    #[test]
    fn derivative_shift_identity() {
        let table = build_weights(3, 400);
        let unscaled = |u: usize, t: f64| {
            let factorial: f64 = (1..=u).map(|k| k as f64).product();
            inner_series_scaled(u, 1.0 - t, 400, &table).unwrap() / factorial
        };
        let h = 1e-5;
        for u in 1..=3 {
            let mut t = -0.9;
            while t <= 0.9 {
                let fd = (unscaled(u, t + h) - unscaled(u, t - h)) / (2.0 * h);
                let expected = unscaled(u - 1, t);
                assert!(
                    (fd - expected).abs() < 1e-6,
                    "u={u}, t={t}: {fd} vs {expected}"
                );
                t += 0.15;
            }
        }
    }

    /// The unscaled series values shrink to zero as u grows; strictly in
    /// magnitude away from x = 1, identically zero at x = 1.
    #[test]
    fn unscaled_series_vanishes_as_order_grows() {
        let table = build_weights(26, 400);
        let unscaled = |u: usize, x: f64| {
            let factorial: f64 = (1..=u).map(|k| k as f64).product();
            inner_series_scaled(u, x, 400, &table).unwrap() / factorial
        };
        for &x in &[0.5, 1.5] {
            for u in 1..=25 {
                assert!(
                    unscaled(u + 1, x).abs() < unscaled(u, x).abs(),
                    "|S_{}| not smaller than |S_{u}| at x={x}",
                    u + 1
                );
            }
        }
        for u in 1..=25 {
            assert_eq!(unscaled(u, 1.0), 0.0);
        }
    }
}
