//! Summation of series of the form `sum_n f(n)` where `f(n)` is a smooth
//! function of `n` times the geometric weight `exp(-decay * n)`.
//!
//! Terms are added explicitly until the geometric tail bound drops below the
//! configured epsilon. When the decay is so slow that this would take more
//! than `head_terms` terms, the remainder from `n0 = head_terms` on is
//! replaced by its Euler–Maclaurin expansion
//!
//! ```text
//! sum_{n >= n0} f(n) = int_{n0}^inf f + f(n0)/2 - f'(n0)/12 + f'''(n0)/720 - ...
//! ```
//!
//! with the integral done by Gauss–Legendre panels of geometrically growing
//! width. `f` must therefore accept non-integer arguments beyond `n0 - 2`.

use std::sync::OnceLock;

use super::SeriesConfig;
use crate::{Error, Result};

const GAUSS_POINTS: usize = 20;
const MAX_PANELS: usize = 100_000;

/// Envelope polynomial degree; every summand used here grows at most like
/// `n^2 ln n` before the geometric weight.
const ENVELOPE_DEGREE: i32 = 2;

/// A series whose terms are bounded by
/// `scale * (n + 1)^2 * (1 + ln(n + 1)) * exp(-decay * n)`.
pub(crate) struct GeometricSeries<F> {
    pub decay: f64,
    pub scale: f64,
    pub summand: F,
}

impl<F: Fn(f64) -> f64> GeometricSeries<F> {
    fn envelope(&self, x: f64) -> f64 {
        self.scale * (x + 1.0).powi(ENVELOPE_DEGREE) * (1.0 + x.ln_1p()) * (-self.decay * x).exp()
    }

    /// Upper bound on everything from `x` onward.
    fn tail_bound(&self, x: f64) -> f64 {
        let log_ratio = -self.decay + f64::from(ENVELOPE_DEGREE + 1) * (1.0 / (x + 1.0)).ln_1p();
        if log_ratio >= 0.0 {
            return f64::INFINITY;
        }
        self.envelope(x) / -log_ratio.exp_m1()
    }

    pub fn sum(&self, r: f64, cfg: &SeriesConfig) -> Result<f64> {
        let head_limit = if cfg.accelerate_tail {
            cfg.head_terms.min(cfg.max_terms)
        } else {
            cfg.max_terms
        };
        let mut acc = NeumaierSum::default();
        for n in 0..head_limit {
            let x = n as f64;
            acc.add((self.summand)(x));
            if self.tail_bound(x + 1.0) < cfg.term_epsilon {
                return Ok(acc.value());
            }
        }
        if !cfg.accelerate_tail {
            return Err(Error::Convergence {
                r,
                max_terms: cfg.max_terms,
            });
        }
        let tail = self.euler_maclaurin_tail(head_limit as f64, r, cfg)?;
        acc.add(tail);
        Ok(acc.value())
    }

    fn euler_maclaurin_tail(&self, n0: f64, r: f64, cfg: &SeriesConfig) -> Result<f64> {
        let f = &self.summand;
        let (fm2, fm1, f0, fp1, fp2) = (f(n0 - 2.0), f(n0 - 1.0), f(n0), f(n0 + 1.0), f(n0 + 2.0));
        let d1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / 12.0;
        let d3 = (fp2 - 2.0 * fp1 + 2.0 * fm1 - fm2) / 2.0;
        let integral = self.integrate_from(n0, r, cfg)?;
        Ok(integral + 0.5 * f0 - d1 / 12.0 + d3 / 720.0)
    }

    fn integrate_from(&self, start: f64, r: f64, cfg: &SeriesConfig) -> Result<f64> {
        let cap = 2.0 / self.decay;
        let mut width = start.max(1.0).min(cap);
        let mut lo = start;
        let mut acc = NeumaierSum::default();
        for _ in 0..MAX_PANELS {
            let hi = lo + width;
            acc.add(gauss_legendre(&self.summand, lo, hi));
            lo = hi;
            if self.tail_bound(lo) < cfg.term_epsilon {
                return Ok(acc.value());
            }
            width = (2.0 * width).min(cap);
        }
        Err(Error::Convergence {
            r,
            max_terms: cfg.max_terms,
        })
    }
}

/// Compensated summation.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

fn gauss_legendre<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> f64 {
    let (nodes, weights) = gauss_legendre_rule();
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    let mut acc = NeumaierSum::default();
    for (x, w) in nodes.iter().zip(weights) {
        acc.add(w * f(mid + half * x));
    }
    acc.value() * half
}

/// Nodes and weights on [-1, 1], found by Newton iteration on P_n.
fn gauss_legendre_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GAUSS_POINTS;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre(n, x);
                let step = p / dp;
                x -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre(n, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        (nodes, weights)
    })
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// `z ln z` with `0 ln 0 = 0`.
pub(crate) fn xlnx(z: f64) -> f64 {
    if z <= 0.0 {
        0.0
    } else {
        z * z.ln()
    }
}

/// Smallest argument, in units of the step, from which the Euler–Maclaurin
/// form of [`sum_xlnx`] is used.
const XLNX_SWITCH: f64 = 20.0;

/// `sum_{x=0}^{count-1} h(a + d x)` with `h(z) = z ln z`, all arguments
/// assumed non-negative.
///
/// Up to twenty points nearest the small-argument end are added directly and
/// the rest through the Euler–Maclaurin formula, whose derivatives of `h` are
/// known in closed form. For non-integer `count` this is a smooth extension
/// of the sum in `count`, which is what the series tail needs.
pub(crate) fn sum_xlnx(a: f64, d: f64, count: f64) -> f64 {
    if count <= 0.0 {
        return 0.0;
    }
    let last = count - 1.0;
    let (a, d) = if d < 0.0 { (a + d * last, -d) } else { (a, d) };
    if d == 0.0 {
        return count * xlnx(a);
    }
    let mut acc = NeumaierSum::default();
    let mut x = 0.0;
    while x <= last && (a + d * x < XLNX_SWITCH * d || last - x < 8.0) {
        acc.add(xlnx(a + d * x));
        x += 1.0;
    }
    if x > last {
        return acc.value();
    }
    let (zl, zh) = (a + d * x, a + d * last);
    let antiderivative = |z: f64| 0.5 * z * z * z.ln() - 0.25 * z * z;
    let g1 = |z: f64| d * (z.ln() + 1.0);
    let g3 = |z: f64| -d.powi(3) / (z * z);
    let g5 = |z: f64| -6.0 * d.powi(5) / z.powi(4);
    acc.add((antiderivative(zh) - antiderivative(zl)) / d);
    acc.add(0.5 * (xlnx(zl) + xlnx(zh)));
    acc.add((g1(zh) - g1(zl)) / 12.0);
    acc.add(-(g3(zh) - g3(zl)) / 720.0);
    acc.add((g5(zh) - g5(zl)) / 30240.0);
    acc.value()
}
