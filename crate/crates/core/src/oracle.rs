//! Brute-force reference pipeline.
//!
//! Builds the global pure state (sender qubit, receiver modes, their
//! causally disconnected partners and, for the classical protocol, a
//! reference qubit that decoheres the sender) in a truncated Fock space,
//! traces out subsystems and diagonalizes. Nothing here uses the series of
//! [`crate::closedform`]; [`verify_point`] compares the two.

use num_complex::Complex64;

use crate::closedform::{self, ChannelQuantities, EvalOptions};
use crate::fockcore::{
    fidelity, hermitian_eigenvalues, spectrum_entropy, von_neumann_entropy, FockDensityMatrix,
    StateVector, TruncationPolicy,
};
use crate::parallel::{self, Execution};
use crate::unruh::{
    squeezed_one_photon_vector, squeezed_vacuum_vector, tail_mass, truncation_dim, Encoding,
    Preparation, Protocol, SqueezingParameter,
};
use crate::{Error, Result};

/// Squeezing values of the default verification grid.
pub const GRID_SQUEEZING: [f64; 6] = [0.1, 0.25, 0.5, 1.0, 1.5, 2.0];
pub const GRID_ALPHA_SQ: [f64; 3] = [0.25, 0.5, 0.75];
/// Single-rail spot check beyond the main grid.
pub const SPOT_CHECK_SQUEEZING: f64 = 3.0;

/// Entropies (bits) of the sender, receiver and joint states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleEntropies {
    pub sender: f64,
    pub receiver: f64,
    pub joint: f64,
    /// Entropy of everything that was traced out to get the joint state.
    pub complement: f64,
    /// `1 - <psi|psi>` before renormalization.
    pub trace_deficit: f64,
}

impl OracleEntropies {
    pub fn mutual_info(&self) -> f64 {
        self.sender + self.receiver - self.joint
    }

    pub fn conditional_entropy(&self) -> f64 {
        self.joint - self.receiver
    }
}

/// Subsystem positions within a global state.
struct Parts {
    sender: usize,
    receiver: Vec<usize>,
    complement: Vec<usize>,
}

fn qubit(bit: usize) -> Result<StateVector> {
    StateVector::basis(&[2], bit)
}

/// Receiver-plus-partner state carrying logical `bit`; factors `[I, IV]` or
/// `[I_a, IV_a, I_b, IV_b]`.
fn logical_state(
    bit: usize,
    encoding: Encoding,
    r: SqueezingParameter,
    dim: usize,
    policy: &TruncationPolicy,
) -> Result<StateVector> {
    let vacuum = squeezed_vacuum_vector(r, dim, policy)?;
    let photon = squeezed_one_photon_vector(r, dim, policy)?;
    match (encoding, bit) {
        (Encoding::SingleRail, 0) => Ok(vacuum),
        (Encoding::SingleRail, _) => Ok(photon),
        (Encoding::DualRail, 0) => photon.tensor(&vacuum),
        (Encoding::DualRail, _) => vacuum.tensor(&photon),
    }
}

fn global_state(
    prep: &Preparation,
    encoding: Encoding,
    protocol: Protocol,
    r: SqueezingParameter,
    dim: usize,
    policy: &TruncationPolicy,
) -> Result<(StateVector, Parts)> {
    let amplitudes = [prep.alpha_sq().sqrt(), prep.beta_sq().sqrt()];
    let mut psi: Option<StateVector> = None;
    for (bit, amp) in amplitudes.into_iter().enumerate() {
        let mut branch = qubit(bit)?.tensor(&logical_state(bit, encoding, r, dim, policy)?)?;
        if protocol == Protocol::Classical {
            branch = qubit(bit)?.tensor(&branch)?;
        }
        let branch = branch.scaled(Complex64::new(amp, 0.0));
        psi = Some(match psi {
            None => branch,
            Some(acc) => acc.add(&branch)?,
        });
    }
    let psi = psi.expect("two branches");
    let offset = usize::from(protocol == Protocol::Classical);
    let (receiver, partners) = match encoding {
        Encoding::SingleRail => (vec![offset + 1], vec![offset + 2]),
        Encoding::DualRail => (vec![offset + 1, offset + 3], vec![offset + 2, offset + 4]),
    };
    let mut complement = partners;
    if offset == 1 {
        complement.insert(0, 0);
    }
    Ok((
        psi,
        Parts {
            sender: offset,
            receiver,
            complement,
        },
    ))
}

fn suggested_dim(r: SqueezingParameter, policy: &TruncationPolicy) -> usize {
    truncation_dim(r, &policy.with_max_dim(usize::MAX / 4))
}

/// Entropies of the explicitly constructed state at truncation `dim` per
/// mode.
pub fn oracle_entropies(
    prep: &Preparation,
    encoding: Encoding,
    protocol: Protocol,
    r: SqueezingParameter,
    dim: usize,
    policy: &TruncationPolicy,
) -> Result<OracleEntropies> {
    let (psi, parts) = global_state(prep, encoding, protocol, r, dim, policy)?;
    let trace_deficit = 1.0 - psi.norm_sqr();
    if trace_deficit > 100.0 * policy.tail_epsilon {
        return Err(Error::Truncation {
            dim,
            deficit: trace_deficit,
            suggested: suggested_dim(r, policy).max(dim + 1),
        });
    }
    let psi = psi.scaled(Complex64::new(1.0 / psi.norm_sqr().sqrt(), 0.0));

    let mut joint_parts = vec![parts.sender];
    joint_parts.extend(&parts.receiver);
    let joint = psi.reduced(&joint_parts)?;
    Ok(OracleEntropies {
        sender: von_neumann_entropy(&psi.reduced(&[parts.sender])?)?,
        receiver: von_neumann_entropy(&psi.reduced(&parts.receiver)?)?,
        joint: spectrum_entropy(&hermitian_eigenvalues(&joint)?)?,
        complement: von_neumann_entropy(&psi.reduced(&parts.complement)?)?,
        trace_deficit,
    })
}

/// Receiver's output for logical `bit`.
pub fn logical_output(
    bit: usize,
    encoding: Encoding,
    r: SqueezingParameter,
    dim: usize,
    policy: &TruncationPolicy,
) -> Result<FockDensityMatrix> {
    let state = logical_state(bit, encoding, r, dim, policy)?;
    match encoding {
        Encoding::SingleRail => state.reduced(&[0]),
        Encoding::DualRail => state.reduced(&[0, 2]),
    }
}

/// Matrix fidelity between the receiver's images of logical 0 and 1.
pub fn oracle_fidelity(
    encoding: Encoding,
    r: SqueezingParameter,
    dim: usize,
    policy: &TruncationPolicy,
) -> Result<f64> {
    let zero = logical_output(0, encoding, r, dim, policy)?;
    let one = logical_output(1, encoding, r, dim, policy)?;
    let (t0, t1) = (zero.trace(), one.trace());
    fidelity(&zero.scaled(1.0 / t0), &one.scaled(1.0 / t1))
}

/// All channel quantities from the Fock-space pipeline. Capacity and
/// coherent information are evaluated at the given preparation, without
/// optimization.
pub fn oracle_quantities(
    prep: &Preparation,
    encoding: Encoding,
    protocol: Protocol,
    r: SqueezingParameter,
    dim: usize,
    policy: &TruncationPolicy,
) -> Result<ChannelQuantities> {
    let e = oracle_entropies(prep, encoding, protocol, r, dim, policy)?;
    let (mi, ce) = (e.mutual_info(), e.conditional_entropy());
    Ok(ChannelQuantities {
        fidelity: oracle_fidelity(encoding, r, dim, policy)?,
        mutual_info_bits: mi,
        conditional_entropy_bits: ce,
        capacity_bits: match protocol {
            Protocol::Classical => mi,
            Protocol::Quantum => -ce,
        },
        coherent_info_bits: -ce,
        source_entropy_bits: e.sender,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub r: f64,
    pub alpha_sq: f64,
    pub encoding: Encoding,
    pub protocol: Protocol,
}

/// Series–oracle comparison at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub point: GridPoint,
    /// Absolute differences by quantity name. Entries ending in `_doubling`
    /// compare the oracle at `N` and `2N`.
    pub deltas: Vec<(&'static str, f64)>,
    pub truncation_dim: usize,
    pub tolerance: f64,
    pub passed: bool,
    /// Set when either pipeline failed outright.
    pub error: Option<String>,
}

impl VerificationReport {
    pub fn delta(&self, name: &str) -> Option<f64> {
        self.deltas.iter().find(|d| d.0 == name).map(|d| d.1)
    }

    pub fn max_delta(&self) -> f64 {
        self.deltas.iter().map(|d| d.1).fold(0.0, f64::max)
    }
}

fn compare(
    point: &GridPoint,
    policy: &TruncationPolicy,
    opts: &EvalOptions,
) -> Result<(Vec<(&'static str, f64)>, usize)> {
    let prep = Preparation::new(point.alpha_sq)?;
    let r = SqueezingParameter::new(point.r)?;
    let (enc, proto, cfg) = (point.encoding, point.protocol, &opts.series);
    let series = [
        ("fidelity", closedform::fidelity_series(r, enc, cfg)?),
        (
            "mutual_info",
            closedform::mutual_information(&prep, enc, proto, r, cfg)?,
        ),
        (
            "conditional_entropy",
            closedform::conditional_entropy(&prep, enc, proto, r, cfg)?,
        ),
        (
            "source_entropy",
            closedform::binary_entropy_bits(prep.alpha_sq()),
        ),
    ];
    let dim = truncation_dim(r, policy);
    let values = |q: &ChannelQuantities| {
        [
            q.fidelity,
            q.mutual_info_bits,
            q.conditional_entropy_bits,
            q.source_entropy_bits,
        ]
    };
    let base = values(&oracle_quantities(&prep, enc, proto, r, dim, policy)?);
    let wide = policy.with_max_dim(2 * policy.max_dim);
    let doubled = values(&oracle_quantities(&prep, enc, proto, r, 2 * dim, &wide)?);

    let mut deltas: Vec<(&'static str, f64)> = series
        .iter()
        .zip(base)
        .map(|(&(name, s), o)| (name, (s - o).abs()))
        .collect();
    let doubling_names = [
        "fidelity_doubling",
        "mutual_info_doubling",
        "conditional_entropy_doubling",
    ];
    deltas.extend(
        doubling_names
            .iter()
            .zip(base.iter().zip(doubled))
            .map(|(&n, (b, d))| (n, (b - d).abs())),
    );
    Ok((deltas, dim))
}

/// Runs both pipelines at the policy's `N` and the oracle again at `2N`.
/// Failures are reported, never returned as errors.
pub fn verify_point(
    point: GridPoint,
    tolerance: f64,
    policy: &TruncationPolicy,
    opts: &EvalOptions,
) -> VerificationReport {
    match compare(&point, policy, opts) {
        Ok((deltas, dim)) => {
            let passed = deltas.iter().all(|d| d.1 <= tolerance);
            VerificationReport {
                point,
                deltas,
                truncation_dim: dim,
                tolerance,
                passed,
                error: None,
            }
        }
        Err(e) => {
            let dim = SqueezingParameter::new(point.r)
                .map(|r| truncation_dim(r, policy))
                .unwrap_or(0);
            VerificationReport {
                point,
                deltas: Vec::new(),
                truncation_dim: dim,
                tolerance,
                passed: false,
                error: Some(e.to_string()),
            }
        }
    }
}

/// Default grid restricted to `r <= r_max`; if `r_max` reaches the spot
/// check value, balanced single-rail points there are added.
pub fn verification_grid(r_max: f64) -> Vec<GridPoint> {
    let mut grid = Vec::new();
    for &r in GRID_SQUEEZING.iter().filter(|&&r| r <= r_max) {
        for alpha_sq in GRID_ALPHA_SQ {
            for encoding in Encoding::ALL {
                for protocol in Protocol::ALL {
                    grid.push(GridPoint {
                        r,
                        alpha_sq,
                        encoding,
                        protocol,
                    });
                }
            }
        }
    }
    if r_max >= SPOT_CHECK_SQUEEZING {
        for protocol in Protocol::ALL {
            grid.push(GridPoint {
                r: SPOT_CHECK_SQUEEZING,
                alpha_sq: 0.5,
                encoding: Encoding::SingleRail,
                protocol,
            });
        }
    }
    grid
}

pub fn verify_grid(
    points: &[GridPoint],
    tolerance: f64,
    policy: &TruncationPolicy,
    opts: &EvalOptions,
    execution: Execution,
) -> Vec<VerificationReport> {
    parallel::map(points, execution, |&p| {
        verify_point(p, tolerance, policy, opts)
    })
}

/// Neglected mass at the policy's truncation, for reporting.
pub fn truncation_tail(r: SqueezingParameter, policy: &TruncationPolicy) -> f64 {
    tail_mass(r, truncation_dim(r, policy))
}
