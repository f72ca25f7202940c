//! Independent ground truth: adaptive Gauss–Kronrod quadrature, the
//! Weierstrass-product Gamma function, and the reference integrand corpus
//! used by tests and the CLI's compare mode.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use thiserror::Error;

use crate::expr::Expr;
use crate::kahan::NeumaierSum;

/// Maximum number of panels the adaptive integrator will create.
pub const DEFAULT_SUBDIVISION_LIMIT: usize = 10_000;

/// Weierstrass-product depth for scalar reference evaluations of `gamma`.
pub const DEFAULT_GAMMA_DEPTH: usize = 100_000;

/// Harmonic-series length behind the cached [`euler_gamma`] value.
pub const DEFAULT_EULER_GAMMA_TERMS: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum OracleError {
    #[error(
        "quadrature did not reach tolerance {tol} within {limit} subdivisions \
         (error estimate {estimate})"
    )]
    SubdivisionLimit {
        tol: f64,
        limit: usize,
        estimate: f64,
    },
    #[error("integrand evaluated to a non-finite value at x = {x}")]
    NonFiniteSample { x: f64 },
    #[error("gamma is defined for x > 0 only (real branch), got x = {x}")]
    GammaDomain { x: f64 },
}

/// Outcome of an adaptive quadrature run.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    /// Panels in the final partition; 1 when the first rule application
    /// already met the tolerance.
    pub subdivisions: usize,
}

/// Adaptive 15-point Gauss–Kronrod integration of `f` over `[a, b]`,
/// bisecting the worst panel until the summed error estimates drop to `tol`.
pub fn quad<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadResult, OracleError> {
    quad_with_limit(f, a, b, tol, DEFAULT_SUBDIVISION_LIMIT)
}

/// [`quad`] with an explicit panel cap.
pub fn quad_with_limit<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
    limit: usize,
) -> Result<QuadResult, OracleError> {
    assert!(tol > 0.0, "tolerance must be positive");
    assert!(limit >= 1, "subdivision limit must be at least 1");
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            abs_error_estimate: 0.0,
            subdivisions: 0,
        });
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };

    let mut panels = BinaryHeap::new();
    let first = Panel::compute(&f, lo, hi)?;
    let mut total_error = first.error;
    panels.push(first);

    while total_error > tol {
        if panels.len() >= limit {
            return Err(OracleError::SubdivisionLimit {
                tol,
                limit,
                estimate: total_error,
            });
        }
        let worst = panels.pop().expect("heap is never empty here");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // The panel is a single f64 step wide; no further refinement is
            // possible.
            return Err(OracleError::SubdivisionLimit {
                tol,
                limit,
                estimate: total_error,
            });
        }
        let left = Panel::compute(&f, worst.a, mid)?;
        let right = Panel::compute(&f, mid, worst.b)?;
        total_error += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
    }

    let mut value = NeumaierSum::new();
    let mut error = NeumaierSum::new();
    for panel in &panels {
        value.add(panel.value);
        error.add(panel.error);
    }
    Ok(QuadResult {
        value: sign * value.value(),
        abs_error_estimate: error.value(),
        subdivisions: panels.len(),
    })
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl Panel {
    fn compute<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Panel, OracleError> {
        let (value, error) = gk15(f, a, b)?;
        Ok(Panel { a, b, value, error })
    }
}

// Max-heap ordered by error estimate; endpoints break ties so the order is
// total (panels are disjoint, so (a, b) distinguishes them).
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then(self.a.total_cmp(&other.a))
            .then(self.b.total_cmp(&other.b))
    }
}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

// 15-point Kronrod nodes (positive half), embedded 7-point Gauss weights,
// and Kronrod weights.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// One 15-point Gauss–Kronrod application; returns the Kronrod value and the
/// rescaled |Kronrod - Gauss| error estimate.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<(f64, f64), OracleError> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let sample = |x: f64| -> Result<f64, OracleError> {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(OracleError::NonFiniteSample { x })
        }
    };

    let f_center = sample(center)?;
    let mut result_gauss = f_center * WG[3];
    let mut result_kronrod = f_center * WGK[7];
    let mut result_abs = result_kronrod.abs();

    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    // Odd Kronrod indices coincide with the Gauss nodes.
    for j in 0..3 {
        let jtw = 2 * j + 1;
        let offset = half * XGK[jtw];
        let f1 = sample(center - offset)?;
        let f2 = sample(center + offset)?;
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        result_gauss += WG[j] * (f1 + f2);
        result_kronrod += WGK[jtw] * (f1 + f2);
        result_abs += WGK[jtw] * (f1.abs() + f2.abs());
    }
    for j in 0..4 {
        let jtwm1 = 2 * j;
        let offset = half * XGK[jtwm1];
        let f1 = sample(center - offset)?;
        let f2 = sample(center + offset)?;
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        result_kronrod += WGK[jtwm1] * (f1 + f2);
        result_abs += WGK[jtwm1] * (f1.abs() + f2.abs());
    }

    let mean = 0.5 * result_kronrod;
    let mut result_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        result_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let raw_error = (result_kronrod - result_gauss) * half;
    let value = result_kronrod * half;
    let error = rescale_error(raw_error, result_abs * half.abs(), result_asc * half.abs());
    Ok((value, error))
}

/// Standard sharpening of the raw |K - G| difference into an error estimate,
/// floored at the rounding noise of the function values.
fn rescale_error(error: f64, result_abs: f64, result_asc: f64) -> f64 {
    let mut scaled = error.abs();
    if result_asc != 0.0 && scaled != 0.0 {
        let ratio = (200.0 * scaled / result_asc).powf(1.5);
        scaled = if ratio < 1.0 { result_asc * ratio } else { result_asc };
    }
    if result_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * result_abs);
    }
    scaled
}

/// Gamma by Weierstrass's product,
/// `Γ(x) = e^{-γx}/x · Π_{n=1}^{depth} (1+x/n)^{-1} e^{x/n}`,
/// with factors multiplied in ascending `n`. Truncation error is
/// `O(x²/depth)`.
pub fn gamma_weierstrass(x: f64, depth: usize) -> Result<f64, OracleError> {
    if !(x > 0.0) {
        return Err(OracleError::GammaDomain { x });
    }
    assert!(depth >= 1, "depth must be at least 1");
    let mut value = (-euler_gamma() * x).exp() / x;
    for n in 1..=depth {
        let z = x / n as f64;
        value *= z.exp() / (1.0 + z);
    }
    Ok(value)
}

/// Euler–Mascheroni estimate `H_terms - ln(terms) - 1/(2·terms)`; the
/// midpoint correction pushes the error down to `O(1/terms²)`.
pub fn euler_gamma_const(terms: usize) -> f64 {
    assert!(terms >= 10, "need at least 10 terms");
    let mut harmonic = NeumaierSum::new();
    for n in (1..=terms).rev() {
        harmonic.add(1.0 / n as f64);
    }
    harmonic.value() - (terms as f64).ln() - 1.0 / (2.0 * terms as f64)
}

/// The Euler–Mascheroni constant at the default depth, computed once per
/// process. Backs the `euler_gamma` named constant of the expression
/// language and the gamma evaluations.
pub fn euler_gamma() -> f64 {
    static CACHE: OnceLock<f64> = OnceLock::new();
    *CACHE.get_or_init(|| euler_gamma_const(DEFAULT_EULER_GAMMA_TERMS))
}

/// A corpus integrand with its quadrature reference value.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub expr: Expr,
    pub interval: (f64, f64),
    /// Definite integral over `interval`, computed by [`quad`] at `1e-10`
    /// when the corpus is built (never hard-coded).
    pub reference: f64,
}

/// Reference integrands: the non-elementary antiderivative family plus the
/// rational integrand used throughout the engine's own validation, all on
/// `[0.5, 1.5]`.
pub fn reference_corpus() -> Vec<CorpusEntry> {
    const MEMBERS: [&str; 7] = [
        "exp(x^2)",
        "exp(-x^2)",
        "sin(x^2)",
        "cos(x^2)",
        "sin(x)/x",
        "exp(exp(x))",
        "x^5/(x^7+1)",
    ];
    MEMBERS
        .iter()
        .map(|&name| {
            let expr: Expr = name.parse().expect("corpus member parses");
            let interval = (0.5, 1.5);
            let result = quad(|x| expr.eval(x), interval.0, interval.1, 1e-10)
                .expect("corpus member is smooth on its interval");
            CorpusEntry {
                name,
                expr,
                interval,
                reference: result.value,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    #[test]
    fn quad_paper_integrand() {
        let f = parse("x^5/(x^7+1)").unwrap();
        let result = quad(|x| f.eval(x), 0.5, 1.5, 1e-8).unwrap();
        assert!((result.value - 0.3698454436574).abs() < 1e-9);
        assert!(result.abs_error_estimate <= 1e-8);
    }

    #[test]
    fn quad_constant_is_exact() {
        let result = quad(|_| 1.0, 0.5, 1.5, 1e-10).unwrap();
        assert_eq!(result.value, 1.0);
        assert_eq!(result.subdivisions, 1);
    }

    #[test]
    fn quad_sine_over_period() {
        let result = quad(f64::sin, 0.0, std::f64::consts::PI, 1e-12).unwrap();
        assert!((result.value - 2.0).abs() < 1e-10);
    }

    #[test]
    fn quad_reversed_bounds_flip_sign() {
        let forward = quad(|x| x * x, 0.0, 1.0, 1e-12).unwrap();
        let backward = quad(|x| x * x, 1.0, 0.0, 1e-12).unwrap();
        assert_eq!(forward.value, -backward.value);
        let empty = quad(|x| x, 0.7, 0.7, 1e-12).unwrap();
        assert_eq!(empty.value, 0.0);
    }

    #[test]
    fn quad_is_exact_on_low_degree_polynomials() {
        // Gauss-Kronrod 15 integrates these on a single panel; degree 13 is
        // already exact for the embedded 7-point Gauss rule.
        for degree in 0..=13 {
            let result = quad(|x| x.powi(degree), 0.0, 1.0, 1e-8).unwrap();
            let exact = 1.0 / (degree + 1) as f64;
            assert_eq!(result.subdivisions, 1, "degree {degree} split the panel");
            assert!(
                (result.value - exact).abs() <= 1e-14 * exact.abs().max(1.0),
                "degree {degree}: {} vs {exact}",
                result.value
            );
        }
    }

    #[test]
    fn quad_is_additive_over_split_point() {
        for entry in reference_corpus() {
            let (a, b) = entry.interval;
            let c = 0.5 * (a + b);
            let f = |x: f64| entry.expr.eval(x);
            let left = quad(f, a, c, 1e-10).unwrap();
            let right = quad(f, c, b, 1e-10).unwrap();
            let whole = quad(f, a, b, 1e-10).unwrap();
            let tolerance = left.abs_error_estimate
                + right.abs_error_estimate
                + whole.abs_error_estimate
                + 1e-13 * whole.value.abs();
            assert!(
                (left.value + right.value - whole.value).abs() <= tolerance,
                "{}: additivity violated",
                entry.name
            );
        }
    }

    #[test]
    fn quad_reports_nonfinite_samples() {
        // The panel center of [0, 2] is exactly the pole.
        let err = quad(|x| 1.0 / (x - 1.0), 0.0, 2.0, 1e-8).unwrap_err();
        assert_eq!(err, OracleError::NonFiniteSample { x: 1.0 });
    }

    #[test]
    fn quad_respects_subdivision_cap() {
        let err = quad_with_limit(|x: f64| (40.0 * x * x).sin(), 0.0, 1.9, 1e-13, 3).unwrap_err();
        assert!(matches!(err, OracleError::SubdivisionLimit { limit: 3, .. }));
    }

    #[test]
    fn gamma_at_small_integers() {
        let g1 = gamma_weierstrass(1.0, 10_000).unwrap();
        let g2 = gamma_weierstrass(2.0, 10_000).unwrap();
        assert!((g1 - 1.0).abs() < 1e-3);
        assert!((g2 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn gamma_at_one_half() {
        let value = gamma_weierstrass(0.5, 100_000).unwrap();
        let sqrt_pi = std::f64::consts::PI.sqrt();
        assert!((value - sqrt_pi).abs() < 1e-3, "{value} vs {sqrt_pi}");
    }

    #[test]
    fn gamma_rejects_nonpositive_arguments() {
        assert!(matches!(
            gamma_weierstrass(0.0, 100).unwrap_err(),
            OracleError::GammaDomain { .. }
        ));
        assert!(gamma_weierstrass(-1.5, 100).is_err());
        assert!(gamma_weierstrass(f64::NAN, 100).is_err());
    }

    #[test]
    fn euler_gamma_is_self_consistent() {
        let at_default = euler_gamma_const(10_000_000);
        let doubled = euler_gamma_const(20_000_000);
        assert!((at_default - doubled).abs() < 1e-8);
        assert!((at_default - 0.5772156649).abs() < 1e-8);
        assert!((euler_gamma_const(10) - euler_gamma_const(10_000)).abs() < 1e-2);
    }

    #[test]
    fn euler_gamma_sits_in_harmonic_bracket() {
        let gamma = euler_gamma();
        for n in [1usize, 2, 10, 100, 4321] {
            let harmonic: f64 = (1..=n).rev().map(|k| 1.0 / k as f64).sum();
            assert!(harmonic - ((n + 1) as f64).ln() < gamma, "lower bound at {n}");
            assert!(gamma < harmonic - (n as f64).ln(), "upper bound at {n}");
        }
    }

    #[test]
    fn corpus_members_and_references() {
        let corpus = reference_corpus();
        let names: Vec<&str> = corpus.iter().map(|e| e.name).collect();
        assert!(names.contains(&"exp(x^2)"));
        assert!(names.contains(&"sin(x)/x"));
        assert_eq!(corpus.len(), 7);
        for entry in &corpus {
            let recomputed = quad(
                |x| entry.expr.eval(x),
                entry.interval.0,
                entry.interval.1,
                1e-10,
            )
            .unwrap();
            assert_eq!(recomputed.value, entry.reference, "{}", entry.name);
            assert!(recomputed.abs_error_estimate <= 1e-10, "{}", entry.name);
        }
    }
}
