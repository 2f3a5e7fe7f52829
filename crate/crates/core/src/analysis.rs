//! Parameter sweeps, plateau estimates and exponential-decay fits.

use std::fmt;
use std::str::FromStr;

use crate::closedform::{derived_quantities, ChannelQuantities, EvalOptions};
use crate::parallel::{self, Execution};
use crate::unruh::{
    acceleration_from_squeezing, squeezing_from_acceleration, AccelerationSpec, Encoding,
    Preparation, Protocol, SqueezingParameter, DEFAULT_OMEGA,
};
use crate::{Error, Result};

pub const DEFAULT_FIT_WINDOW: (f64, f64) = (3.0, 6.0);
pub const FIGURE_POINTS: usize = 200;
pub const FIGURE_R_MAX: f64 = 6.0;
/// Separation used by [`estimate_plateau`] to judge convergence.
pub const PLATEAU_LOOKBACK: f64 = 2.0;
pub const PLATEAU_TOLERANCE: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Acceleration,
    Squeezing,
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" | "acceleration" => Ok(SweepAxis::Acceleration),
            "r" | "squeezing" => Ok(SweepAxis::Squeezing),
            other => Err(Error::input(format!("unknown sweep axis '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub axis: SweepAxis,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub omega: f64,
    pub alpha_sq: f64,
    pub encodings: Vec<Encoding>,
    pub protocols: Vec<Protocol>,
}

impl SweepGrid {
    pub fn new(axis: SweepAxis, start: f64, stop: f64, points: usize) -> Result<Self> {
        let grid = SweepGrid {
            axis,
            start,
            stop,
            points,
            omega: DEFAULT_OMEGA,
            alpha_sq: 0.5,
            encodings: Encoding::ALL.to_vec(),
            protocols: Protocol::ALL.to_vec(),
        };
        grid.validate()?;
        Ok(grid)
    }

    /// `r` from 0 to 6 in 200 points, all four channels.
    pub fn figures() -> Self {
        SweepGrid::new(SweepAxis::Squeezing, 0.0, FIGURE_R_MAX, FIGURE_POINTS)
            .expect("static grid is valid")
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.start.is_finite() && self.stop.is_finite() && self.start < self.stop) {
            return Err(Error::input(format!(
                "sweep needs start < stop, got {} and {}",
                self.start, self.stop
            )));
        }
        if self.points < 2 {
            return Err(Error::input(format!(
                "sweep needs at least 2 points, got {}",
                self.points
            )));
        }
        match self.axis {
            SweepAxis::Acceleration if self.start <= 0.0 => {
                return Err(Error::domain(format!(
                    "acceleration sweep must start above 0, got {}",
                    self.start
                )))
            }
            SweepAxis::Squeezing if self.start < 0.0 => {
                return Err(Error::domain(format!(
                    "squeezing sweep must start at or above 0, got {}",
                    self.start
                )))
            }
            _ => {}
        }
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(Error::domain(format!(
                "mode frequency must be positive, got {}",
                self.omega
            )));
        }
        Preparation::new(self.alpha_sq)?;
        if self.encodings.is_empty() || self.protocols.is_empty() {
            return Err(Error::input(
                "sweep needs at least one encoding and one protocol",
            ));
        }
        Ok(())
    }

    /// Evenly spaced axis values, endpoints included.
    pub fn axis_values(&self) -> Vec<f64> {
        let step = (self.stop - self.start) / (self.points - 1) as f64;
        (0..self.points)
            .map(|k| {
                if k + 1 == self.points {
                    self.stop
                } else {
                    self.start + step * k as f64
                }
            })
            .collect()
    }

    /// `(a, r)` at each axis value.
    pub fn coordinates(&self) -> Result<Vec<(f64, f64)>> {
        self.axis_values()
            .into_iter()
            .map(|x| match self.axis {
                SweepAxis::Squeezing => {
                    let r = SqueezingParameter::new(x)?;
                    Ok((acceleration_from_squeezing(r, self.omega), x))
                }
                SweepAxis::Acceleration => {
                    let r = squeezing_from_acceleration(&AccelerationSpec::new(x, self.omega)?)?;
                    Ok((x, r.value()))
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RowStatus {
    Ok,
    Failed(String),
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowStatus::Ok => f.write_str("ok"),
            RowStatus::Failed(msg) => write!(f, "error: {msg}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub a: f64,
    pub r: f64,
    pub omega: f64,
    pub alpha_sq: f64,
    pub encoding: Encoding,
    pub protocol: Protocol,
    /// `None` exactly when the status is failed.
    pub quantities: Option<ChannelQuantities>,
    pub status: RowStatus,
}

impl SweepRow {
    pub fn is_ok(&self) -> bool {
        self.status == RowStatus::Ok
    }
}

pub fn sweep(grid: &SweepGrid, opts: &EvalOptions) -> Result<Vec<SweepRow>> {
    sweep_with(grid, opts, Execution::default())
}

/// Rows come out sorted by axis value, then encoding, then protocol. A row
/// whose evaluation fails is kept with a failed status.
pub fn sweep_with(
    grid: &SweepGrid,
    opts: &EvalOptions,
    execution: Execution,
) -> Result<Vec<SweepRow>> {
    grid.validate()?;
    let prep = Preparation::new(grid.alpha_sq)?;
    let mut encodings = grid.encodings.clone();
    encodings.sort();
    encodings.dedup();
    let mut protocols = grid.protocols.clone();
    protocols.sort();
    protocols.dedup();

    let mut jobs = Vec::new();
    for (a, r) in grid.coordinates()? {
        for &encoding in &encodings {
            for &protocol in &protocols {
                jobs.push((a, r, encoding, protocol));
            }
        }
    }
    Ok(parallel::map(
        &jobs,
        execution,
        |&(a, r, encoding, protocol)| {
            let result = SqueezingParameter::new(r)
                .and_then(|sq| derived_quantities(&prep, encoding, protocol, sq, opts));
            let (quantities, status) = match result {
                Ok(q) => (Some(q), RowStatus::Ok),
                Err(e) => (None, RowStatus::Failed(e.to_string())),
            };
            SweepRow {
                a,
                r,
                omega: grid.omega,
                alpha_sq: grid.alpha_sq,
                encoding,
                protocol,
                quantities,
                status,
            }
        },
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Fidelity,
    MutualInfo,
    ConditionalEntropy,
    Capacity,
    CoherentInfo,
}

impl Quantity {
    pub fn of(self, q: &ChannelQuantities) -> f64 {
        match self {
            Quantity::Fidelity => q.fidelity,
            Quantity::MutualInfo => q.mutual_info_bits,
            Quantity::ConditionalEntropy => q.conditional_entropy_bits,
            Quantity::Capacity => q.capacity_bits,
            Quantity::CoherentInfo => q.coherent_info_bits,
        }
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fidelity" => Ok(Quantity::Fidelity),
            "mutual_info" | "mutual_info_bits" => Ok(Quantity::MutualInfo),
            "conditional_entropy" | "conditional_entropy_bits" => Ok(Quantity::ConditionalEntropy),
            "capacity" | "capacity_bits" => Ok(Quantity::Capacity),
            "coherent_info" | "coherent_info_bits" => Ok(Quantity::CoherentInfo),
            other => Err(Error::input(format!("unknown quantity '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub gamma: f64,
    pub log_intercept: f64,
    pub rms_residual: f64,
    pub window: (f64, f64),
}

fn check_window(window: (f64, f64)) -> Result<()> {
    if !(window.0.is_finite() && window.1.is_finite() && window.0 < window.1) {
        return Err(Error::input(format!(
            "fit window needs lo < hi, got {},{}",
            window.0, window.1
        )));
    }
    Ok(())
}

/// Unweighted least-squares line through `(x, ln y)` for samples with `x` in
/// the window; `gamma` is minus the slope.
pub fn fit_log_linear(samples: &[(f64, f64)], window: (f64, f64)) -> Result<FitResult> {
    check_window(window)?;
    let inside: Vec<(f64, f64)> = samples
        .iter()
        .copied()
        .filter(|&(x, _)| x >= window.0 && x <= window.1)
        .collect();
    if inside.len() < 5 {
        return Err(Error::domain(format!(
            "fit window [{}, {}] holds {} samples, need at least 5",
            window.0,
            window.1,
            inside.len()
        )));
    }
    if let Some(&(x, y)) = inside.iter().find(|s| !(s.1 > 0.0)) {
        return Err(Error::domain(format!(
            "non-positive value {y} at r = {x}; try a window ending below {x}"
        )));
    }
    let n = inside.len() as f64;
    let mean_x = inside.iter().map(|s| s.0).sum::<f64>() / n;
    let mean_y = inside.iter().map(|s| s.1.ln()).sum::<f64>() / n;
    let sxx: f64 = inside.iter().map(|s| (s.0 - mean_x).powi(2)).sum();
    let sxy: f64 = inside
        .iter()
        .map(|s| (s.0 - mean_x) * (s.1.ln() - mean_y))
        .sum();
    if sxx == 0.0 {
        return Err(Error::domain("all samples in the fit window share one r"));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let rms = (inside
        .iter()
        .map(|s| (s.1.ln() - intercept - slope * s.0).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(FitResult {
        gamma: -slope,
        log_intercept: intercept,
        rms_residual: rms,
        window,
    })
}

/// Rows must all belong to one encoding/protocol pair; failed rows are
/// skipped.
fn single_channel(rows: &[SweepRow]) -> Result<Vec<&SweepRow>> {
    let ok: Vec<&SweepRow> = rows.iter().filter(|r| r.is_ok()).collect();
    if let Some(first) = ok.first() {
        if ok
            .iter()
            .any(|r| r.encoding != first.encoding || r.protocol != first.protocol)
        {
            return Err(Error::input(
                "rows mix several encoding/protocol pairs; filter them first",
            ));
        }
    }
    Ok(ok)
}

fn samples(rows: &[&SweepRow], quantity: Quantity) -> Vec<(f64, f64)> {
    rows.iter()
        .filter_map(|r| r.quantities.as_ref().map(|q| (r.r, quantity.of(q))))
        .collect()
}

/// Fits `coherent_info ~ exp(-gamma r)` over the window.
pub fn fit_exponential_decay(rows: &[SweepRow], window: (f64, f64)) -> Result<FitResult> {
    let rows = single_channel(rows)?;
    fit_log_linear(&samples(&rows, Quantity::CoherentInfo), window)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plateau {
    pub value: f64,
    pub r: f64,
    /// `|C(r) - C(r - 2)| < 1e-2`.
    pub converged: bool,
}

/// Value at the largest `r`, with a convergence flag against the row nearest
/// `r - 2`.
pub fn estimate_plateau(rows: &[SweepRow], quantity: Quantity) -> Result<Plateau> {
    let rows = single_channel(rows)?;
    let s = samples(&rows, quantity);
    let &(r_max, value) = s
        .iter()
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .ok_or_else(|| Error::domain("no successful rows to estimate a plateau from"))?;
    if r_max < FIGURE_R_MAX {
        return Err(Error::domain(format!(
            "plateau needs rows reaching r >= {FIGURE_R_MAX}, largest is {r_max}"
        )));
    }
    let target = r_max - PLATEAU_LOOKBACK;
    let &(_, earlier) = s
        .iter()
        .min_by(|a, b| (a.0 - target).abs().total_cmp(&(b.0 - target).abs()))
        .expect("non-empty");
    Ok(Plateau {
        value,
        r: r_max,
        converged: (value - earlier).abs() < PLATEAU_TOLERANCE,
    })
}
