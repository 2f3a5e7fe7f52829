//! The Unruh channel: two-mode squeezed Rindler states, the induced map on
//! the receiver's density-matrix elements, and the maps from proper
//! acceleration and Schwarzschild geometry to the squeezing strength.
//!
//! Units are natural (`hbar = c = G = 1`). The receiver's mode is taken to be
//! a single Unruh mode (right wedge only).

use std::fmt;
use std::str::FromStr;

use crate::fockcore::{real, FockDensityMatrix, StateVector, TruncationPolicy};
use crate::{Error, Result};

pub const DEFAULT_OMEGA: f64 = 1.0;

/// Two-mode squeezing strength `r >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SqueezingParameter(f64);

impl SqueezingParameter {
    pub fn new(r: f64) -> Result<Self> {
        if !r.is_finite() || r < 0.0 {
            return Err(Error::domain(format!(
                "squeezing parameter must be finite and non-negative, got {r}"
            )));
        }
        Ok(SqueezingParameter(r))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn tanh(self) -> f64 {
        self.0.tanh()
    }

    pub fn cosh_sq(self) -> f64 {
        self.0.cosh().powi(2)
    }

    pub fn sinh_sq(self) -> f64 {
        self.0.sinh().powi(2)
    }

    /// `-ln(tanh^2 r)`, accurate when `tanh r` rounds to one.
    pub fn decay_rate(self) -> f64 {
        if self.0 == 0.0 {
            return f64::INFINITY;
        }
        2.0 * (2.0 / (2.0 * self.0).exp_m1()).ln_1p()
    }
}

/// Proper acceleration of the receiver and the frequency of the mode used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccelerationSpec {
    pub a: f64,
    pub omega: f64,
}

impl AccelerationSpec {
    pub fn new(a: f64, omega: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::domain(format!(
                "proper acceleration must be positive and finite, got {a}"
            )));
        }
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::domain(format!(
                "mode frequency must be positive and finite, got {omega}"
            )));
        }
        Ok(AccelerationSpec { a, omega })
    }

    pub fn with_omega(self, omega: f64) -> Result<Self> {
        Self::new(self.a, omega)
    }
}

/// A receiver hovering at areal radius `radius` outside a black hole of mass
/// `mass`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchwarzschildSpec {
    pub mass: f64,
    pub radius: f64,
}

impl SchwarzschildSpec {
    pub fn new(mass: f64, radius: f64) -> Result<Self> {
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::domain(format!(
                "black-hole mass must be positive and finite, got {mass}"
            )));
        }
        if !(radius > 0.0) || radius.is_nan() {
            return Err(Error::domain(format!(
                "hover radius must be positive, got {radius}"
            )));
        }
        Ok(SchwarzschildSpec { mass, radius })
    }

    pub fn schwarzschild_radius(&self) -> f64 {
        2.0 * self.mass
    }
}

/// Sender's input weights; only `|alpha|^2` enters any entropy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preparation {
    alpha_sq: f64,
}

impl Preparation {
    pub fn new(alpha_sq: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha_sq) {
            return Err(Error::domain(format!(
                "|alpha|^2 must lie in [0, 1], got {alpha_sq}"
            )));
        }
        Ok(Preparation { alpha_sq })
    }

    pub fn balanced() -> Self {
        Preparation { alpha_sq: 0.5 }
    }

    pub fn alpha_sq(&self) -> f64 {
        self.alpha_sq
    }

    pub fn beta_sq(&self) -> f64 {
        1.0 - self.alpha_sq
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Encoding {
    /// Logical 0/1 as vacuum/one photon in a single mode.
    SingleRail,
    /// One photon shared between two modes: `|1,0>` and `|0,1>`.
    DualRail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Protocol {
    /// Correlated classical bits.
    Classical,
    /// Entangled sender qubit and photonic qubit.
    Quantum,
}

impl Encoding {
    pub const ALL: [Encoding; 2] = [Encoding::SingleRail, Encoding::DualRail];

    pub fn as_str(self) -> &'static str {
        match self {
            Encoding::SingleRail => "single",
            Encoding::DualRail => "dual",
        }
    }
}

impl Protocol {
    pub const ALL: [Protocol; 2] = [Protocol::Classical, Protocol::Quantum];

    pub fn as_str(self) -> &'static str {
        match self {
            Protocol::Classical => "classical",
            Protocol::Quantum => "quantum",
        }
    }
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Encoding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single" | "single_rail" => Ok(Encoding::SingleRail),
            "dual" | "dual_rail" => Ok(Encoding::DualRail),
            other => Err(Error::input(format!("unknown encoding '{other}'"))),
        }
    }
}

impl FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(Protocol::Classical),
            "quantum" => Ok(Protocol::Quantum),
            other => Err(Error::input(format!("unknown protocol '{other}'"))),
        }
    }
}

/// `r = atanh(exp(-omega pi / a))`.
pub fn squeezing_from_acceleration(spec: &AccelerationSpec) -> Result<SqueezingParameter> {
    let spec = AccelerationSpec::new(spec.a, spec.omega)?;
    let x = -spec.omega * std::f64::consts::PI / spec.a;
    // atanh(e^x) = 0.5 ln((1 + e^x) / (1 - e^x)), with 1 - e^x = -expm1(x)
    let r = 0.5 * ((1.0 + x.exp()) / -x.exp_m1()).ln();
    SqueezingParameter::new(r.max(0.0))
}

/// Inverse of [`squeezing_from_acceleration`]: `a = omega pi / (-ln tanh r)`.
/// Returns 0 at `r = 0`.
pub fn acceleration_from_squeezing(r: SqueezingParameter, omega: f64) -> f64 {
    if r.value() == 0.0 {
        return 0.0;
    }
    // -ln tanh r = ln(coth r)
    omega * std::f64::consts::PI / (0.5 * r.decay_rate())
}

/// `a = 1 / (4 M sqrt(1 - R_S / R))`, returned with the default mode
/// frequency.
pub fn acceleration_from_schwarzschild(spec: &SchwarzschildSpec) -> Result<AccelerationSpec> {
    let spec = SchwarzschildSpec::new(spec.mass, spec.radius)?;
    let rs = spec.schwarzschild_radius();
    if spec.radius <= rs {
        return Err(Error::domain(format!(
            "hover radius R = {} is at or inside the horizon R_S = {rs}",
            spec.radius
        )));
    }
    let a = 1.0 / (4.0 * spec.mass * (1.0 - rs / spec.radius).sqrt());
    AccelerationSpec::new(a, DEFAULT_OMEGA)
}

/// Smallest `N >= 2` with [`tail_mass`]`(r, N) < tail_epsilon`, capped at
/// `policy.max_dim`.
pub fn truncation_dim(r: SqueezingParameter, policy: &TruncationPolicy) -> usize {
    if r.value() == 0.0 {
        return 2;
    }
    let vacuum_only = (-policy.tail_epsilon.ln() / r.decay_rate()).floor() + 1.0;
    if vacuum_only >= policy.max_dim as f64 {
        return policy.max_dim;
    }
    let mut dim = (vacuum_only as usize).max(2);
    while dim < policy.max_dim && tail_mass(r, dim) >= policy.tail_epsilon {
        dim += 1;
    }
    dim
}

/// Occupation mass lost by truncating the squeezed one-photon state at `dim`
/// levels, `sum_{n >= dim-1} (n+1) tanh^{2n} r / cosh^4 r`. It bounds the
/// vacuum's loss `tanh^{2 dim} r` as well.
pub fn tail_mass(r: SqueezingParameter, dim: usize) -> f64 {
    if r.value() == 0.0 {
        return if dim >= 2 { 0.0 } else { 1.0 };
    }
    let t = r.tanh().powi(2);
    let m = dim.saturating_sub(1) as f64;
    (-m * r.decay_rate()).exp() * ((m + 1.0) / r.cosh_sq() + t)
}

fn check_dim(dim: usize, policy: &TruncationPolicy) -> Result<()> {
    if dim < 2 {
        return Err(Error::input(format!(
            "truncation dimension must be at least 2, got {dim}"
        )));
    }
    if dim > policy.max_dim {
        return Err(Error::Capacity {
            requested: dim,
            limit: policy.max_dim,
        });
    }
    Ok(())
}

/// The Minkowski vacuum seen in Rindler modes:
/// `sum_n tanh^n r / cosh r |n>_I |n>_IV`, truncated at `n < dim`.
/// Factors are `[I, IV]`.
pub fn squeezed_vacuum_vector(
    r: SqueezingParameter,
    dim: usize,
    policy: &TruncationPolicy,
) -> Result<StateVector> {
    check_dim(dim, policy)?;
    let (t, c) = (r.tanh(), r.value().cosh());
    StateVector::from_amplitudes(
        &[dim, dim],
        (0..dim).map(|n| (n * dim + n, real(t.powi(n as i32) / c))),
    )
}

/// One Unruh-mode excitation seen in Rindler modes:
/// `sum_n tanh^n r sqrt(n+1) / cosh^2 r |n+1>_I |n>_IV`, truncated at
/// `n + 1 < dim`. Factors are `[I, IV]`.
pub fn squeezed_one_photon_vector(
    r: SqueezingParameter,
    dim: usize,
    policy: &TruncationPolicy,
) -> Result<StateVector> {
    check_dim(dim, policy)?;
    let (t, c2) = (r.tanh(), r.cosh_sq());
    StateVector::from_amplitudes(
        &[dim, dim],
        (0..dim - 1).map(|n| {
            (
                (n + 1) * dim + n,
                real(t.powi(n as i32) * ((n + 1) as f64).sqrt() / c2),
            )
        }),
    )
}

/// Image of `|j><k|` (j, k in {0, 1}) on the receiver's side:
/// `sum_n tanh^{2n} r / cosh^{2+j+k} r (n+1)^{(j+k)/2} |n+j><n+k|`.
pub fn channel_element(
    j: usize,
    k: usize,
    r: SqueezingParameter,
    dim: usize,
    policy: &TruncationPolicy,
) -> Result<FockDensityMatrix> {
    if j > 1 || k > 1 {
        return Err(Error::input(format!(
            "channel elements are defined for j, k in {{0, 1}}, got ({j}, {k})"
        )));
    }
    check_dim(dim, policy)?;
    let t2 = r.tanh().powi(2);
    let cosh = r.value().cosh();
    let norm = cosh.powi(2 + (j + k) as i32);
    let top = j.max(k);
    FockDensityMatrix::from_triplets(
        &[dim],
        (0..dim - top).map(|n| {
            let weight = t2.powi(n as i32) / norm * ((n + 1) as f64).powf(0.5 * (j + k) as f64);
            (n + j, n + k, real(weight))
        }),
    )
}

/// The sender–receiver state after the channel.
///
/// Factor layout: `[A, I]` for single rail, `[A, I_a, I_b]` for dual rail.
/// The classical protocol keeps only the diagonal blocks in the sender index;
/// the quantum protocol adds the `alpha beta` coherences (phases dropped).
pub fn joint_state(
    prep: &Preparation,
    encoding: Encoding,
    protocol: Protocol,
    r: SqueezingParameter,
    dim: usize,
    policy: &TruncationPolicy,
) -> Result<FockDensityMatrix> {
    let (a2, b2) = (prep.alpha_sq(), prep.beta_sq());
    let coherence = match protocol {
        Protocol::Classical => 0.0,
        Protocol::Quantum => (a2 * b2).sqrt(),
    };
    let weights = [[a2, coherence], [coherence, b2]];
    let elements: Vec<Vec<FockDensityMatrix>> = (0..2)
        .map(|j| {
            (0..2)
                .map(|k| channel_element(j, k, r, dim, policy))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    // Photon number carried by each rail for logical j.
    let photons = |j: usize| -> (usize, usize) {
        if j == 0 {
            (1, 0)
        } else {
            (0, 1)
        }
    };

    let mut total: Option<FockDensityMatrix> = None;
    for j in 0..2 {
        for k in 0..2 {
            if weights[j][k] == 0.0 {
                continue;
            }
            let sender = FockDensityMatrix::from_triplets(&[2], [(j, k, real(weights[j][k]))])?;
            let receiver = match encoding {
                Encoding::SingleRail => elements[j][k].clone(),
                Encoding::DualRail => {
                    let (ja, jb) = photons(j);
                    let (ka, kb) = photons(k);
                    elements[ja][ka].tensor_product(&elements[jb][kb], policy.max_dim)?
                }
            };
            let term = sender.tensor_product(&receiver, policy.max_dim)?;
            total = Some(match total {
                None => term,
                Some(acc) => acc.add(&term)?,
            });
        }
    }
    match total {
        Some(m) => Ok(m),
        None => Err(Error::input("preparation has no weight")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockcore::{hermitian_eigenvalues, von_neumann_entropy};

    fn sq(r: f64) -> SqueezingParameter {
        SqueezingParameter::new(r).unwrap()
    }

    /// r with tanh^2 r = 1/2
    fn half_r() -> SqueezingParameter {
        sq(0.5f64.sqrt().atanh())
    }

    #[test]
    fn squeezing_examples() {
        let tiny = squeezing_from_acceleration(&AccelerationSpec::new(1e-3, 1.0).unwrap()).unwrap();
        assert!(tiny.value() < 1e-300);
        let r =
            squeezing_from_acceleration(&AccelerationSpec::new(std::f64::consts::PI, 1.0).unwrap())
                .unwrap();
        assert!((r.value() - (-1f64).exp().atanh()).abs() < 1e-15);
        assert!((r.value() - 0.385968).abs() < 1e-6);
        let huge = squeezing_from_acceleration(&AccelerationSpec::new(1e12, 1.0).unwrap()).unwrap();
        assert!(huge.value() > 13.0);
        assert!(AccelerationSpec::new(0.0, 1.0).is_err());
        assert!(AccelerationSpec::new(-1.0, 1.0).is_err());
    }

    #[test]
    fn squeezing_is_monotone_in_acceleration() {
        let rs: Vec<f64> = [0.1, 0.5, 1.0, 2.0, 10.0, 100.0, 1e4]
            .iter()
            .map(|&a| {
                squeezing_from_acceleration(&AccelerationSpec::new(a, 1.0).unwrap())
                    .unwrap()
                    .value()
            })
            .collect();
        assert!(rs.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn acceleration_round_trip() {
        for i in 0..=99 {
            let r = 0.05 + 4.95 * i as f64 / 99.0;
            for omega in [0.5, 1.0, 3.0] {
                let a = acceleration_from_squeezing(sq(r), omega);
                let back =
                    squeezing_from_acceleration(&AccelerationSpec::new(a, omega).unwrap()).unwrap();
                assert!(
                    (back.value() - r).abs() < 1e-10,
                    "r = {r}: {}",
                    back.value()
                );
            }
        }
    }

    #[test]
    fn schwarzschild_examples() {
        let far =
            acceleration_from_schwarzschild(&SchwarzschildSpec::new(1.0, 1e12).unwrap()).unwrap();
        assert!((far.a - 0.25).abs() < 1e-10);
        let mid =
            acceleration_from_schwarzschild(&SchwarzschildSpec::new(1.0, 4.0).unwrap()).unwrap();
        assert!((mid.a - 2f64.sqrt() / 4.0).abs() < 1e-15);
        assert!((mid.a - 0.353553).abs() < 1e-6);
        let near =
            acceleration_from_schwarzschild(&SchwarzschildSpec::new(1.0, 2.0 + 1e-12).unwrap())
                .unwrap();
        assert!(near.a > 1e4);
        for radius in [2.0, 1.5] {
            let err =
                acceleration_from_schwarzschild(&SchwarzschildSpec::new(1.0, radius).unwrap());
            assert!(matches!(err, Err(Error::Domain(_))));
        }
    }

    #[test]
    fn vacuum_vector_examples() {
        let policy = TruncationPolicy::default();
        let v = squeezed_vacuum_vector(sq(0.0), 4, &policy).unwrap();
        assert_eq!(v.amplitudes(), &[(0, real(1.0))]);
        let r = half_r();
        let v = squeezed_vacuum_vector(r, 30, &policy).unwrap();
        for n in 0..30 {
            let expected = 0.5f64.powi(n as i32 + 1).sqrt();
            assert!((v.amplitude(n * 30 + n).re - expected).abs() < 1e-15);
        }
        for (r, dim) in [(0.3, 5), (1.0, 40), (2.0, 100)] {
            let v = squeezed_vacuum_vector(sq(r), dim, &policy).unwrap();
            let expected = 1.0 - sq(r).tanh().powi(2 * dim as i32);
            assert!((v.norm_sqr() - expected).abs() < 1e-13);
        }
        assert!(matches!(
            squeezed_vacuum_vector(sq(1.0), 5000, &policy),
            Err(Error::Capacity { .. })
        ));
        assert!(matches!(
            squeezed_vacuum_vector(sq(1.0), 1, &policy),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn one_photon_vector_examples() {
        let policy = TruncationPolicy::default();
        let v = squeezed_one_photon_vector(sq(0.0), 4, &policy).unwrap();
        assert_eq!(v.amplitudes(), &[(4, real(1.0))]);
        let r = sq(0.8);
        let dim = truncation_dim(r, &policy);
        let v = squeezed_one_photon_vector(r, dim, &policy).unwrap();
        assert!((v.norm_sqr() - 1.0).abs() < 1e-12);
        for r in [0.0, 0.4, 1.3, 2.5] {
            let a = squeezed_vacuum_vector(sq(r), 60, &policy).unwrap();
            let b = squeezed_one_photon_vector(sq(r), 60, &policy).unwrap();
            assert_eq!(a.inner(&b).unwrap(), real(0.0));
        }
    }

    #[test]
    fn channel_element_examples() {
        let policy = TruncationPolicy::default();
        let r = half_r();
        let e00 = channel_element(0, 0, r, 40, &policy).unwrap();
        for n in 0..40 {
            assert!((e00.get(n, n).re - 0.5f64.powi(n as i32 + 1)).abs() < 1e-15);
        }
        let r = sq(1.2);
        let dim = truncation_dim(r, &policy);
        let e11 = channel_element(1, 1, r, dim, &policy).unwrap();
        assert!((e11.trace() - 1.0).abs() < 1e-12);
        let e01 = channel_element(0, 1, sq(0.0), 3, &policy).unwrap();
        assert_eq!(e01.entries(), &[(0, 1, real(1.0))]);
        assert!(channel_element(2, 0, r, 4, &policy).is_err());
    }

    #[test]
    fn channel_is_trace_preserving_on_grid() {
        let policy = TruncationPolicy::default();
        for i in 0..=20 {
            let r = sq(0.15 * i as f64);
            let dim = truncation_dim(r, &policy);
            let bound = 10.0 * tail_mass(r, dim);
            for j in 0..2 {
                let e = channel_element(j, j, r, dim, &policy).unwrap();
                assert!(
                    (e.trace() - 1.0).abs() <= bound.max(1e-13),
                    "r = {} j = {j}",
                    r.value()
                );
            }
        }
    }

    #[test]
    fn channel_elements_match_traced_rindler_states() {
        let policy = TruncationPolicy::default();
        for r in [0.0, 0.3, 0.9, 1.7] {
            let r = sq(r);
            let dim = 50;
            let vac = squeezed_vacuum_vector(r, dim, &policy)
                .unwrap()
                .reduced(&[0])
                .unwrap();
            let one = squeezed_one_photon_vector(r, dim, &policy)
                .unwrap()
                .reduced(&[0])
                .unwrap();
            let e00 = channel_element(0, 0, r, dim, &policy).unwrap();
            let e11 = channel_element(1, 1, r, dim, &policy).unwrap();
            for n in 0..dim {
                assert!((vac.get(n, n) - e00.get(n, n)).norm() < 1e-12);
                assert!((one.get(n, n) - e11.get(n, n)).norm() < 1e-12);
            }
            // cross term |vac><one| traced over IV gives the j=0, k=1 element
            let s_vac = squeezed_vacuum_vector(r, dim, &policy).unwrap();
            let s_one = squeezed_one_photon_vector(r, dim, &policy).unwrap();
            let sender0 = StateVector::basis(&[2], 0).unwrap();
            let sender1 = StateVector::basis(&[2], 1).unwrap();
            let psi = sender0
                .tensor(&s_vac)
                .unwrap()
                .add(&sender1.tensor(&s_one).unwrap())
                .unwrap();
            let joint = psi.reduced(&[0, 1]).unwrap();
            let e01 = channel_element(0, 1, r, dim, &policy).unwrap();
            for n in 0..dim - 1 {
                assert!((joint.get(n, dim + n + 1) - e01.get(n, n + 1)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn joint_state_examples() {
        let policy = TruncationPolicy::default();
        let half = Preparation::balanced();
        // r = 0 quantum single rail: maximally entangled pair inside qubit x Fock
        let rho = joint_state(
            &half,
            Encoding::SingleRail,
            Protocol::Quantum,
            sq(0.0),
            3,
            &policy,
        )
        .unwrap();
        let ev = hermitian_eigenvalues(&rho).unwrap().eigenvalues;
        assert!((ev[0] - 1.0).abs() < 1e-15 && ev[1].abs() < 1e-15);
        // <0,0|rho|1,1>
        assert!((rho.get(0, 4).re - 0.5).abs() < 1e-15);
        // r = 0 classical: perfectly correlated bits
        for enc in Encoding::ALL {
            let rho = joint_state(&half, enc, Protocol::Classical, sq(0.0), 3, &policy).unwrap();
            let s_ar = von_neumann_entropy(&rho).unwrap();
            let rob: Vec<usize> = (1..rho.factors().len()).collect();
            let s_r = von_neumann_entropy(&rho.partial_trace(&rob).unwrap()).unwrap();
            let s_a = von_neumann_entropy(&rho.partial_trace(&[0]).unwrap()).unwrap();
            assert!((s_a + s_r - s_ar - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn joint_state_sender_marginal_and_validity() {
        let policy = TruncationPolicy::default();
        for enc in Encoding::ALL {
            for proto in Protocol::ALL {
                for &r in &[0.0, 0.4, 1.0, 1.6] {
                    for &a2 in &[0.0, 0.3, 0.5, 1.0] {
                        let r = sq(r);
                        let dim = truncation_dim(r, &policy);
                        let prep = Preparation::new(a2).unwrap();
                        let rho = joint_state(&prep, enc, proto, r, dim, &policy).unwrap();
                        rho.check_hermitian(1e-12).unwrap();
                        let ev = hermitian_eigenvalues(&rho).unwrap();
                        assert!(ev.min() >= -1e-10);
                        let deficit = 1.0 - rho.trace();
                        assert!(
                            (-1e-12..1e-11).contains(&deficit),
                            "{enc} {proto} r={} deficit {deficit}",
                            r.value()
                        );
                        let alice = rho.partial_trace(&[0]).unwrap();
                        assert!((alice.get(0, 0).re - a2).abs() < 1e-11);
                        assert!((alice.get(1, 1).re - (1.0 - a2)).abs() < 1e-11);
                        assert!(alice.get(0, 1).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn truncation_dim_meets_tail_bound() {
        let policy = TruncationPolicy::default();
        assert_eq!(truncation_dim(sq(0.0), &policy), 2);
        for r in [0.1, 0.5, 1.0, 2.0, 2.5] {
            let n = truncation_dim(sq(r), &policy);
            assert!(tail_mass(sq(r), n) < policy.tail_epsilon);
            assert!(n == 2 || tail_mass(sq(r), n - 1) >= policy.tail_epsilon);
        }
        assert_eq!(truncation_dim(sq(6.0), &policy), policy.max_dim);
    }
}
