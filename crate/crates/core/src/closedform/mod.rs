//! Closed-form series for fidelity, mutual information and conditional
//! entropy of the four encoding/protocol combinations, and the capacities
//! derived from them.
//!
//! All series share the geometric weight `tanh^{2n} r`; see the
//! `summation` module for how slowly decaying ones are handled at large `r`.
//! Entropies are in bits.

mod search;
mod summation;

use std::f64::consts::LN_2;

pub use search::golden_section_max;
use summation::{sum_xlnx, xlnx, GeometricSeries};

use crate::unruh::{Encoding, Preparation, Protocol, SqueezingParameter};
use crate::{Error, Result};

/// Largest squeezing for which `cosh^6 r` stays finite with room to spare.
pub const MAX_SQUEEZING: f64 = 100.0;

/// Width of the bracket at which capacity searches stop.
pub const SEARCH_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesConfig {
    pub term_epsilon: f64,
    pub max_terms: usize,
    /// Below this `r` the analytic `r -> 0` limits are returned.
    pub r_min_analytic: f64,
    /// Terms summed one by one before the tail is replaced by its
    /// Euler–Maclaurin expansion.
    pub head_terms: usize,
    pub accelerate_tail: bool,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig {
            term_epsilon: 1e-16,
            max_terms: 1_000_000,
            r_min_analytic: 1e-8,
            head_terms: 4096,
            accelerate_tail: true,
        }
    }
}

impl SeriesConfig {
    pub fn new(term_epsilon: f64, max_terms: usize, r_min_analytic: f64) -> Result<Self> {
        let cfg = SeriesConfig {
            term_epsilon,
            max_terms,
            r_min_analytic,
            ..Self::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.term_epsilon > 0.0 && self.term_epsilon < 1.0) {
            return Err(Error::input(format!(
                "term_epsilon must lie in (0, 1), got {}",
                self.term_epsilon
            )));
        }
        if self.max_terms < 100 {
            return Err(Error::input(format!(
                "max_terms must be at least 100, got {}",
                self.max_terms
            )));
        }
        if !(self.r_min_analytic >= 0.0) {
            return Err(Error::input(format!(
                "r_min_analytic must be non-negative, got {}",
                self.r_min_analytic
            )));
        }
        if self.head_terms < 16 {
            return Err(Error::input(format!(
                "head_terms must be at least 16, got {}",
                self.head_terms
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EvalOptions {
    pub series: SeriesConfig,
    /// Maximize the coherent information over `|alpha|^2` instead of
    /// reporting it at `|alpha|^2 = 1/2`.
    pub maximize_coherent_info: bool,
}

/// Everything computed at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelQuantities {
    pub fidelity: f64,
    pub mutual_info_bits: f64,
    pub conditional_entropy_bits: f64,
    /// Classical protocol: maximum mutual information. Quantum protocol:
    /// coherent information.
    pub capacity_bits: f64,
    /// Minus the conditional entropy of the row's protocol at `|alpha|^2 = 1/2`.
    pub coherent_info_bits: f64,
    /// Entropy of the sender's qubit.
    pub source_entropy_bits: f64,
}

/// An optimized value and the `|alpha|^2` attaining it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Optimum {
    pub bits: f64,
    pub alpha_sq: f64,
}

pub fn binary_entropy_bits(p: f64) -> f64 {
    -(xlnx(p) + xlnx(1.0 - p)) / LN_2
}

fn check(r: SqueezingParameter, cfg: &SeriesConfig) -> Result<()> {
    cfg.validate()?;
    if r.value() > MAX_SQUEEZING {
        return Err(Error::domain(format!(
            "squeezing r = {} exceeds the supported maximum {MAX_SQUEEZING}",
            r.value()
        )));
    }
    Ok(())
}

fn weights(alpha_sq: f64) -> Result<(f64, f64)> {
    let prep = Preparation::new(alpha_sq)?;
    Ok((prep.alpha_sq(), prep.beta_sq()))
}

/// Overlap fidelity between the receiver's images of logical 0 and 1.
pub fn fidelity_series(
    r: SqueezingParameter,
    encoding: Encoding,
    cfg: &SeriesConfig,
) -> Result<f64> {
    check(r, cfg)?;
    if r.value() < cfg.r_min_analytic {
        return Ok(0.0);
    }
    let norm = r.tanh() * r.cosh_sq().powf(1.5);
    let decay = r.decay_rate();
    let series = GeometricSeries {
        decay,
        scale: 1.0 / norm,
        summand: move |x: f64| (-decay * x).exp() * x.sqrt() / norm,
    };
    let single = series.sum(r.value(), cfg)?.powi(2);
    Ok(match encoding {
        Encoding::SingleRail => single,
        Encoding::DualRail => single * single,
    })
}

/// Classical single-rail mutual information.
pub fn mi_classical_single(
    alpha_sq: f64,
    r: SqueezingParameter,
    cfg: &SeriesConfig,
) -> Result<f64> {
    check(r, cfg)?;
    let (a2, b2) = weights(alpha_sq)?;
    let h = binary_entropy_bits(a2);
    if a2 * b2 == 0.0 || r.value() < cfg.r_min_analytic {
        return Ok(h);
    }
    let (c2, s2, decay) = (r.cosh_sq(), r.sinh_sq(), r.decay_rate());
    let ratio = b2 / (a2 * s2);
    let summand = move |x: f64| {
        let w = (-decay * x).exp() / c2;
        let sent_zero = a2 * w * (x * ratio).ln_1p();
        let sent_one = if x > 0.0 {
            b2 * x / s2 * w * (1.0 / (x * ratio)).ln_1p()
        } else {
            0.0
        };
        sent_zero + sent_one
    };
    let scale = (2.0 + s2.ln().abs() + a2.min(b2).ln().abs()) / c2;
    let loss = GeometricSeries {
        decay,
        scale,
        summand,
    }
    .sum(r.value(), cfg)?;
    Ok(h - loss / LN_2)
}

/// Quantum single-rail conditional entropy `S(A|R)`.
pub fn ce_quantum_single(alpha_sq: f64, r: SqueezingParameter, cfg: &SeriesConfig) -> Result<f64> {
    check(r, cfg)?;
    let (a2, b2) = weights(alpha_sq)?;
    if a2 * b2 == 0.0 {
        return Ok(0.0);
    }
    if r.value() < cfg.r_min_analytic {
        return Ok(-binary_entropy_bits(a2));
    }
    let (c2, s2, decay) = (r.cosh_sq(), r.sinh_sq(), r.decay_rate());
    let ln_c2 = c2.ln();
    // receiver weight / joint eigenvalue in photon sector n, both over tanh^{2n}/cosh^2
    let summand = move |x: f64| {
        let w = (-decay * x).exp() / c2;
        let p = a2 + b2 * x / s2;
        let lam = a2 + b2 * (x + 1.0) / c2;
        let d = b2 * (x - s2) / (s2 * c2);
        w * (d * (-decay * x - ln_c2 + lam.ln()) + p * (d / lam).ln_1p())
    };
    let inflation = (1.0 + 1.0 / s2).powi(2);
    let scale = inflation * (3.0 + decay + ln_c2 + s2.ln().abs() + a2.min(b2).ln().abs()) / c2;
    let ce = GeometricSeries {
        decay,
        scale,
        summand,
    }
    .sum(r.value(), cfg)?;
    Ok(ce / LN_2)
}

/// Classical dual-rail mutual information at `|alpha|^2 = 1/2`.
pub fn mi_classical_dual(r: SqueezingParameter, cfg: &SeriesConfig) -> Result<f64> {
    check(r, cfg)?;
    if r.value() < cfg.r_min_analytic {
        return Ok(1.0);
    }
    let (c6, decay) = (r.cosh_sq().powi(3), r.decay_rate());
    let summand = move |p: f64| {
        let k = p + 1.0;
        (-decay * p).exp() / c6 * (0.5 * k * (k + 1.0) * k.ln() - sum_xlnx(1.0, 1.0, k))
    };
    let loss = GeometricSeries {
        decay,
        scale: 2.0 / c6,
        summand,
    }
    .sum(r.value(), cfg)?;
    Ok(1.0 - loss / LN_2)
}

/// Quantum dual-rail conditional entropy at `|alpha|^2 = 1/2`.
pub fn ce_quantum_dual(r: SqueezingParameter, cfg: &SeriesConfig) -> Result<f64> {
    check(r, cfg)?;
    if r.value() < cfg.r_min_analytic {
        return Ok(-1.0);
    }
    let (c6, decay) = (r.cosh_sq().powi(3), r.decay_rate());
    let summand = move |p: f64| {
        let k = p + 1.0;
        (-decay * p).exp() / c6 * 0.5 * k * (k + 1.0) * (1.0 / k).ln_1p()
    };
    let sum = GeometricSeries {
        decay,
        scale: 2.0 / c6,
        summand,
    }
    .sum(r.value(), cfg)?;
    Ok(-sum / LN_2)
}

/// Classical dual-rail mutual information for any `|alpha|^2`.
pub fn mi_classical_dual_general(
    alpha_sq: f64,
    r: SqueezingParameter,
    cfg: &SeriesConfig,
) -> Result<f64> {
    check(r, cfg)?;
    let (a2, b2) = weights(alpha_sq)?;
    if a2 * b2 == 0.0 {
        return Ok(0.0);
    }
    if r.value() < cfg.r_min_analytic {
        return Ok(binary_entropy_bits(a2));
    }
    let (c6, decay) = (r.cosh_sq().powi(3), r.decay_rate());
    let summand = move |p: f64| {
        let k = p + 1.0;
        let received = sum_xlnx(b2 * k, a2 - b2, k + 1.0);
        (-decay * p).exp() / c6 * (sum_xlnx(0.0, 1.0, k + 1.0) - received)
    };
    let scale = (4.0 + 2.0 * a2.min(b2).ln().abs()) / c6;
    let mi = GeometricSeries {
        decay,
        scale,
        summand,
    }
    .sum(r.value(), cfg)?;
    Ok(mi / LN_2)
}

/// Quantum dual-rail conditional entropy for any `|alpha|^2`.
pub fn ce_quantum_dual_general(
    alpha_sq: f64,
    r: SqueezingParameter,
    cfg: &SeriesConfig,
) -> Result<f64> {
    check(r, cfg)?;
    let (a2, b2) = weights(alpha_sq)?;
    if a2 * b2 == 0.0 {
        return Ok(0.0);
    }
    if r.value() < cfg.r_min_analytic {
        return Ok(-binary_entropy_bits(a2));
    }
    let (c6, decay) = (r.cosh_sq().powi(3), r.decay_rate());
    let summand = move |p: f64| {
        let k = p + 1.0;
        let received = sum_xlnx(b2 * k, a2 - b2, k + 1.0);
        let joint = sum_xlnx(a2 + b2 * k, a2 - b2, k);
        (-decay * p).exp() / c6 * (received - joint)
    };
    let scale = (4.0 + 2.0 * a2.min(b2).ln().abs()) / c6;
    let ce = GeometricSeries {
        decay,
        scale,
        summand,
    }
    .sum(r.value(), cfg)?;
    Ok(ce / LN_2)
}

fn mi_classical(
    alpha_sq: f64,
    encoding: Encoding,
    r: SqueezingParameter,
    cfg: &SeriesConfig,
) -> Result<f64> {
    match encoding {
        Encoding::SingleRail => mi_classical_single(alpha_sq, r, cfg),
        Encoding::DualRail if alpha_sq == 0.5 => mi_classical_dual(r, cfg),
        Encoding::DualRail => mi_classical_dual_general(alpha_sq, r, cfg),
    }
}

fn ce_quantum(
    alpha_sq: f64,
    encoding: Encoding,
    r: SqueezingParameter,
    cfg: &SeriesConfig,
) -> Result<f64> {
    match encoding {
        Encoding::SingleRail => ce_quantum_single(alpha_sq, r, cfg),
        Encoding::DualRail if alpha_sq == 0.5 => ce_quantum_dual(r, cfg),
        Encoding::DualRail => ce_quantum_dual_general(alpha_sq, r, cfg),
    }
}

/// `S(A:R)`; for the quantum protocol obtained as `S(A) - S(A|R)`.
pub fn mutual_information(
    prep: &Preparation,
    encoding: Encoding,
    protocol: Protocol,
    r: SqueezingParameter,
    cfg: &SeriesConfig,
) -> Result<f64> {
    let a2 = prep.alpha_sq();
    match protocol {
        Protocol::Classical => mi_classical(a2, encoding, r, cfg),
        Protocol::Quantum => Ok(binary_entropy_bits(a2) - ce_quantum(a2, encoding, r, cfg)?),
    }
}

/// `S(A|R)`; for the classical protocol obtained as `S(A) - S(A:R)`.
pub fn conditional_entropy(
    prep: &Preparation,
    encoding: Encoding,
    protocol: Protocol,
    r: SqueezingParameter,
    cfg: &SeriesConfig,
) -> Result<f64> {
    let a2 = prep.alpha_sq();
    match protocol {
        Protocol::Classical => Ok(binary_entropy_bits(a2) - mi_classical(a2, encoding, r, cfg)?),
        Protocol::Quantum => ce_quantum(a2, encoding, r, cfg),
    }
}

/// Maximum classical mutual information. Dual rail is evaluated at
/// `|alpha|^2 = 1/2` by symmetry of its two logical states.
pub fn classical_capacity(
    encoding: Encoding,
    r: SqueezingParameter,
    cfg: &SeriesConfig,
) -> Result<Optimum> {
    match encoding {
        Encoding::DualRail => Ok(Optimum {
            bits: mi_classical_dual(r, cfg)?,
            alpha_sq: 0.5,
        }),
        Encoding::SingleRail => {
            check(r, cfg)?;
            if r.value() < cfg.r_min_analytic {
                return Ok(Optimum {
                    bits: 1.0,
                    alpha_sq: 0.5,
                });
            }
            let (alpha_sq, bits) = golden_section_max(
                |a| mi_classical_single(a, r, cfg),
                0.0,
                1.0,
                SEARCH_TOLERANCE,
            )?;
            Ok(Optimum { bits, alpha_sq })
        }
    }
}

/// `-S(A|R)` of the quantum protocol, at `|alpha|^2 = 1/2` or maximized.
pub fn coherent_information(
    encoding: Encoding,
    r: SqueezingParameter,
    opts: &EvalOptions,
) -> Result<Optimum> {
    let cfg = &opts.series;
    if !opts.maximize_coherent_info {
        return Ok(Optimum {
            bits: -ce_quantum(0.5, encoding, r, cfg)?,
            alpha_sq: 0.5,
        });
    }
    check(r, cfg)?;
    let (alpha_sq, bits) = golden_section_max(
        |a| ce_quantum(a, encoding, r, cfg).map(|ce| -ce),
        0.0,
        1.0,
        SEARCH_TOLERANCE,
    )?;
    Ok(Optimum { bits, alpha_sq })
}

/// Fills every field of [`ChannelQuantities`] at one point.
pub fn derived_quantities(
    prep: &Preparation,
    encoding: Encoding,
    protocol: Protocol,
    r: SqueezingParameter,
    opts: &EvalOptions,
) -> Result<ChannelQuantities> {
    let cfg = &opts.series;
    let source = binary_entropy_bits(prep.alpha_sq());
    let fidelity = fidelity_series(r, encoding, cfg)?;
    let (mi, ce, coherent, capacity) = match protocol {
        Protocol::Classical => {
            let mi = mi_classical(prep.alpha_sq(), encoding, r, cfg)?;
            let at_half = if prep.alpha_sq() == 0.5 {
                mi
            } else {
                mi_classical(0.5, encoding, r, cfg)?
            };
            let capacity = classical_capacity(encoding, r, cfg)?.bits;
            (mi, source - mi, at_half - 1.0, capacity)
        }
        Protocol::Quantum => {
            let ce = ce_quantum(prep.alpha_sq(), encoding, r, cfg)?;
            let coherent = if prep.alpha_sq() == 0.5 && !opts.maximize_coherent_info {
                -ce
            } else {
                coherent_information(encoding, r, opts)?.bits
            };
            (source - ce, ce, coherent, coherent)
        }
    };
    Ok(ChannelQuantities {
        fidelity,
        mutual_info_bits: mi,
        conditional_entropy_bits: ce,
        capacity_bits: capacity,
        coherent_info_bits: coherent,
        source_entropy_bits: source,
    })
}
