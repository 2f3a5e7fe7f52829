//! Truncated Fock-space linear algebra and the entropic primitives shared by
//! the closed-form and brute-force pipelines.
//!
//! All entropies are in bits.

pub mod dense;
mod matrix;
mod state;

use num_complex::Complex64;

pub use dense::{jacobi_eigen, DenseEigen, DenseMatrix};
pub use matrix::{FockDensityMatrix, HERMITIAN_TOLERANCE};
pub use state::StateVector;

use crate::{Error, Result};

/// Eigenvalues below this are treated as exact zeros inside entropies.
pub const EIGENVALUE_CLIP: f64 = 1e-15;

/// Most negative eigenvalue accepted as a density-matrix eigenvalue.
pub const POSITIVITY_TOLERANCE: f64 = 1e-10;

/// Largest matrix the dense fidelity path will materialize.
pub const DENSE_LIMIT: usize = 4096;

/// Controls where the infinite Fock ladders are cut.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    /// Largest neglected occupation mass, `tanh^{2N} r`.
    pub tail_epsilon: f64,
    /// Per-mode cap on the truncation dimension `N`.
    pub max_dim: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            tail_epsilon: 1e-14,
            max_dim: 4096,
        }
    }
}

impl TruncationPolicy {
    pub fn new(tail_epsilon: f64, max_dim: usize) -> Result<Self> {
        if !(tail_epsilon > 0.0 && tail_epsilon < 1.0) {
            return Err(Error::input(format!(
                "tail_epsilon must lie in (0, 1), got {tail_epsilon}"
            )));
        }
        if max_dim < 2 {
            return Err(Error::input(format!(
                "max_dim must be at least 2, got {max_dim}"
            )));
        }
        Ok(TruncationPolicy {
            tail_epsilon,
            max_dim,
        })
    }

    pub fn with_max_dim(self, max_dim: usize) -> Self {
        TruncationPolicy { max_dim, ..self }
    }
}

/// Eigenvalues of a Hermitian matrix in descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralResult {
    pub eigenvalues: Vec<f64>,
}

impl SpectralResult {
    pub fn sum(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }
}

/// Eigenvalues of `m`, diagonalizing each coupled block separately.
///
/// Basis states untouched by any entry contribute exact zeros. Blocks of size
/// one and two are handled in closed form, larger ones by Jacobi rotations.
pub fn hermitian_eigenvalues(m: &FockDensityMatrix) -> Result<SpectralResult> {
    m.check_hermitian(HERMITIAN_TOLERANCE)?;
    if m.entries().iter().all(|e| e.0 == e.1) {
        let mut values: Vec<f64> = m.entries().iter().map(|e| e.2.re).collect();
        values.resize(m.dim(), 0.0);
        values.sort_unstable_by(|a, b| b.total_cmp(a));
        return Ok(SpectralResult {
            eigenvalues: values,
        });
    }
    let mut values = Vec::with_capacity(m.dim());
    let mut touched = 0;
    m.for_each_block(|indices, entries| {
        touched += indices.len();
        let local = |x: usize| indices.binary_search(&x).expect("entry inside its block");
        match indices.len() {
            1 => values.push(entries[0].2.re),
            2 => {
                let mut d = [[Complex64::new(0.0, 0.0); 2]; 2];
                for &(i, j, v) in entries {
                    d[local(i)][local(j)] = v;
                }
                values.extend(dense::eigenvalues_2x2(d[0][0].re, d[0][1], d[1][1].re));
            }
            n => {
                let mut d = DenseMatrix::zeros(n);
                for &(i, j, v) in entries {
                    d[(local(i), local(j))] = v;
                }
                values.extend(jacobi_eigen(&d, false).values);
            }
        }
    });
    values.resize(values.len() + (m.dim() - touched), 0.0);
    values.sort_unstable_by(|a, b| b.total_cmp(a));
    Ok(SpectralResult {
        eigenvalues: values,
    })
}

/// Eigenvalues of `m` from a single dense Jacobi run over the full matrix.
pub fn hermitian_eigenvalues_dense(m: &FockDensityMatrix) -> Result<SpectralResult> {
    m.check_hermitian(HERMITIAN_TOLERANCE)?;
    if m.dim() > DENSE_LIMIT {
        return Err(Error::Capacity {
            requested: m.dim(),
            limit: DENSE_LIMIT,
        });
    }
    Ok(SpectralResult {
        eigenvalues: jacobi_eigen(&m.to_dense(), false).values,
    })
}

fn entropy_term(p: f64) -> f64 {
    if p < EIGENVALUE_CLIP {
        0.0
    } else {
        -p * p.log2()
    }
}

/// Von Neumann entropy in bits from an already computed spectrum.
pub fn spectrum_entropy(spectrum: &SpectralResult) -> Result<f64> {
    let min = spectrum.min();
    if min < -POSITIVITY_TOLERANCE {
        return Err(Error::NotPositive(min));
    }
    Ok(spectrum.eigenvalues.iter().map(|&p| entropy_term(p)).sum())
}

/// `-Tr[rho lb rho]` in bits.
pub fn von_neumann_entropy(m: &FockDensityMatrix) -> Result<f64> {
    spectrum_entropy(&hermitian_eigenvalues(m)?)
}

/// Shannon entropy of a probability vector, in bits.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    if let Some(bad) = p.iter().find(|&&x| !(x >= 0.0) || !x.is_finite()) {
        return Err(Error::input(format!(
            "probability {bad} is negative or not finite"
        )));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::input(format!("probabilities sum to {total}, not 1")));
    }
    Ok(p.iter()
        .map(|&x| if x == 0.0 { 0.0 } else { -x * x.log2() })
        .sum())
}

pub fn partial_trace(m: &FockDensityMatrix, keep: &[usize]) -> Result<FockDensityMatrix> {
    m.partial_trace(keep)
}

pub fn tensor_product(
    a: &FockDensityMatrix,
    b: &FockDensityMatrix,
    policy: &TruncationPolicy,
) -> Result<FockDensityMatrix> {
    a.tensor_product(b, policy.max_dim)
}

/// Off-diagonal magnitude below which two matrices count as co-diagonal.
const CODIAGONAL_TOLERANCE: f64 = 1e-10;

/// Uhlmann fidelity `(Tr sqrt(sqrt(m0) m1 sqrt(m0)))^2`.
///
/// When both matrices are diagonal in the stored basis this reduces to the
/// squared Bhattacharyya overlap of the diagonals, which is what the channel
/// outputs always are; the dense route is taken otherwise.
pub fn fidelity(m0: &FockDensityMatrix, m1: &FockDensityMatrix) -> Result<f64> {
    check_same_shape(m0, m1)?;
    if m0.is_diagonal(CODIAGONAL_TOLERANCE) && m1.is_diagonal(CODIAGONAL_TOLERANCE) {
        let overlap: f64 = m0
            .entries()
            .iter()
            .filter(|e| e.0 == e.1)
            .map(|&(i, _, p)| (p.re.max(0.0) * m1.get(i, i).re.max(0.0)).sqrt())
            .sum();
        return Ok((overlap * overlap).clamp(0.0, 1.0));
    }
    fidelity_uhlmann(m0, m1)
}

/// The general fidelity route through dense spectral decompositions.
pub fn fidelity_uhlmann(m0: &FockDensityMatrix, m1: &FockDensityMatrix) -> Result<f64> {
    check_same_shape(m0, m1)?;
    m0.check_hermitian(HERMITIAN_TOLERANCE)?;
    m1.check_hermitian(HERMITIAN_TOLERANCE)?;
    let n = m0.dim();
    if n > DENSE_LIMIT {
        return Err(Error::Capacity {
            requested: n,
            limit: DENSE_LIMIT,
        });
    }
    let eig = jacobi_eigen(&m0.to_dense(), true);
    let v = eig.vectors.expect("vectors requested");
    let mut scaled = v.clone();
    for (col, &lambda) in eig.values.iter().enumerate() {
        let root = lambda.max(0.0).sqrt();
        for row in 0..n {
            scaled[(row, col)] *= root;
        }
    }
    let sqrt_m0 = scaled.matmul(&v.adjoint());
    let inner = sqrt_m0.matmul(&m1.to_dense()).matmul(&sqrt_m0);
    // symmetrize away rounding before the second diagonalization
    let mut sym = DenseMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            sym[(i, j)] = (inner[(i, j)] + inner[(j, i)].conj()) * 0.5;
        }
    }
    let mu = jacobi_eigen(&sym, false).values;
    let floor = 16.0 * n as f64 * f64::EPSILON * mu.first().copied().unwrap_or(0.0).max(0.0);
    let trace_root: f64 = mu.iter().filter(|&&m| m > floor).map(|m| m.sqrt()).sum();
    Ok((trace_root * trace_root).clamp(0.0, 1.0))
}

fn check_same_shape(m0: &FockDensityMatrix, m1: &FockDensityMatrix) -> Result<()> {
    if m0.dim() != m1.dim() {
        return Err(Error::input(format!(
            "fidelity of matrices with dimensions {} and {}",
            m0.dim(),
            m1.dim()
        )));
    }
    Ok(())
}

pub(crate) fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn random_pure(factors: &[usize], seed: u64) -> StateVector {
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let dim: usize = factors.iter().product();
        let amps: Vec<(usize, Complex64)> = (0..dim)
            .map(|i| {
                (
                    i,
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                )
            })
            .collect();
        let norm = amps.iter().map(|a| a.1.norm_sqr()).sum::<f64>().sqrt();
        StateVector::from_amplitudes(factors, amps.into_iter().map(|(i, v)| (i, v / norm))).unwrap()
    }

    fn random_density(dim: usize, rank: usize, seed: u64) -> FockDensityMatrix {
        let psi = random_pure(&[dim, rank], seed);
        psi.reduced(&[0]).unwrap()
    }

    #[test]
    fn identity_eigenvalues() {
        let m = FockDensityMatrix::diagonal(&[2], &[1.0, 1.0]).unwrap();
        assert_eq!(
            hermitian_eigenvalues(&m).unwrap().eigenvalues,
            vec![1.0, 1.0]
        );
    }

    #[test]
    fn diagonal_eigenvalues_sorted() {
        let m = FockDensityMatrix::diagonal(&[2], &[0.25, 0.75]).unwrap();
        assert_eq!(
            hermitian_eigenvalues(&m).unwrap().eigenvalues,
            vec![0.75, 0.25]
        );
    }

    #[test]
    fn rank_one_projector_eigenvalues() {
        let m = FockDensityMatrix::from_real_dense(&[2], &[0.5, 0.5, 0.5, 0.5]).unwrap();
        let ev = hermitian_eigenvalues(&m).unwrap().eigenvalues;
        assert!((ev[0] - 1.0).abs() < 1e-15 && ev[1].abs() < 1e-15);
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = FockDensityMatrix::from_real_dense(&[2], &[0.5, 0.4, 0.1, 0.5]).unwrap();
        assert!(matches!(
            hermitian_eigenvalues(&m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn entropy_examples() {
        let pure = random_pure(&[5], 3).projector().unwrap();
        assert!(von_neumann_entropy(&pure).unwrap().abs() < 1e-12);
        let mixed = FockDensityMatrix::diagonal(&[2], &[0.5, 0.5]).unwrap();
        assert!((von_neumann_entropy(&mixed).unwrap() - 1.0).abs() < 1e-15);
        // p_n = 2^-(n+1): sum (n+1) 2^-(n+1) = 2
        let geometric: Vec<f64> = (0..80).map(|n| 0.5f64.powi(n + 1)).collect();
        let m = FockDensityMatrix::diagonal(&[80], &geometric).unwrap();
        assert!((von_neumann_entropy(&m).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn entropy_rejects_negative_spectrum() {
        let m = FockDensityMatrix::diagonal(&[2], &[1.1, -0.1]).unwrap();
        assert!(matches!(
            von_neumann_entropy(&m),
            Err(Error::NotPositive(_))
        ));
    }

    #[test]
    fn shannon_examples() {
        assert_eq!(shannon_entropy(&[1.0, 0.0]).unwrap(), 0.0);
        assert!((shannon_entropy(&[0.5, 0.5]).unwrap() - 1.0).abs() < 1e-15);
        let expected = 2.0 - 0.75 * 3f64.log2();
        assert!((shannon_entropy(&[0.25, 0.75]).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 0.8113).abs() < 1e-4);
        assert!(shannon_entropy(&[0.5, 0.4]).is_err());
        assert!(shannon_entropy(&[1.5, -0.5]).is_err());
    }

    #[test]
    fn tensor_trace_and_entropy_are_multiplicative_and_additive() {
        let policy = TruncationPolicy::default();
        for seed in 0..4 {
            let a = random_density(3, 2, seed);
            let b = random_density(4, 3, seed + 100).scaled(0.5);
            let ab = tensor_product(&a, &b, &policy).unwrap();
            assert!((ab.trace() - a.trace() * b.trace()).abs() < 1e-14);
            let b = b.scaled(2.0);
            let ab = tensor_product(&a, &b, &policy).unwrap();
            let lhs = von_neumann_entropy(&ab).unwrap();
            let rhs = von_neumann_entropy(&a).unwrap() + von_neumann_entropy(&b).unwrap();
            assert!((lhs - rhs).abs() < 1e-10, "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn fidelity_examples() {
        let rho = random_density(4, 2, 11);
        assert!((fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-10);
        let zero = FockDensityMatrix::diagonal(&[2], &[1.0, 0.0]).unwrap();
        let one = FockDensityMatrix::diagonal(&[2], &[0.0, 1.0]).unwrap();
        assert_eq!(fidelity(&zero, &one).unwrap(), 0.0);
        let half = FockDensityMatrix::diagonal(&[2], &[0.5, 0.5]).unwrap();
        assert!((fidelity(&half, &zero).unwrap() - 0.5).abs() < 1e-15);
        let three = FockDensityMatrix::diagonal(&[3], &[1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(fidelity(&zero, &three), Err(Error::Input(_))));
    }

    #[test]
    fn orthogonal_pure_states_have_zero_fidelity() {
        let s = 0.5f64.sqrt();
        let plus = StateVector::from_amplitudes(&[2], [(0, real(s)), (1, real(s))]).unwrap();
        let minus = StateVector::from_amplitudes(&[2], [(0, real(s)), (1, real(-s))]).unwrap();
        let f = fidelity(&plus.projector().unwrap(), &minus.projector().unwrap()).unwrap();
        assert!(f.abs() < 1e-12);
    }

    #[test]
    fn block_and_dense_spectra_agree() {
        // two decoupled random blocks inside a 9-dimensional space
        let a = random_density(4, 4, 21).scaled(0.6);
        let b = random_density(3, 2, 22).scaled(0.4);
        let mut triplets: Vec<_> = a.entries().to_vec();
        triplets.extend(b.entries().iter().map(|&(i, j, v)| (i + 5, j + 5, v)));
        let m = FockDensityMatrix::from_triplets(&[9], triplets).unwrap();
        let blocks = hermitian_eigenvalues(&m).unwrap().eigenvalues;
        let dense = hermitian_eigenvalues_dense(&m).unwrap().eigenvalues;
        for (x, y) in blocks.iter().zip(&dense) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn pure_bipartite_marginals_share_entropy(da in 2usize..7, db in 2usize..6, seed in any::<u64>()) {
            let psi = random_pure(&[da, db], seed);
            let sa = von_neumann_entropy(&psi.reduced(&[0]).unwrap()).unwrap();
            let sb = von_neumann_entropy(&psi.reduced(&[1]).unwrap()).unwrap();
            prop_assert!((sa - sb).abs() < 1e-8);
        }

        #[test]
        fn fidelity_is_symmetric(seed in any::<u64>()) {
            let a = random_density(4, 2, seed);
            let b = random_density(4, 3, seed.wrapping_add(1));
            let ab = fidelity(&a, &b).unwrap();
            let ba = fidelity(&b, &a).unwrap();
            prop_assert!((ab - ba).abs() < 1e-10);
            prop_assert!((0.0..=1.0).contains(&ab));
        }

        #[test]
        fn diagonal_shortcut_matches_uhlmann(p in prop::collection::vec(0.0f64..1.0, 2..8), seed in any::<u64>()) {
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let q: Vec<f64> = p.iter().map(|_| rng.gen_range(0.0..1.0)).collect();
            let norm = |v: &[f64]| { let s: f64 = v.iter().sum(); v.iter().map(|x| x / s).collect::<Vec<_>>() };
            let (p, q) = (norm(&p), norm(&q));
            let m0 = FockDensityMatrix::diagonal(&[p.len()], &p).unwrap();
            let m1 = FockDensityMatrix::diagonal(&[q.len()], &q).unwrap();
            let fast = fidelity(&m0, &m1).unwrap();
            let full = fidelity_uhlmann(&m0, &m1).unwrap();
            prop_assert!((fast - full).abs() < 1e-8);
        }

        #[test]
        fn shannon_equals_von_neumann_on_diagonals(p in prop::collection::vec(0.0f64..1.0, 1..12)) {
            let total: f64 = p.iter().sum();
            prop_assume!(total > 1e-6);
            let p: Vec<f64> = p.iter().map(|x| x / total).collect();
            let m = FockDensityMatrix::diagonal(&[p.len()], &p).unwrap();
            let vn = von_neumann_entropy(&m).unwrap();
            let sh = shannon_entropy(&p).unwrap();
            prop_assert!((vn - sh).abs() < 1e-10);
        }

        #[test]
        fn partial_trace_preserves_trace_and_hermiticity(seed in any::<u64>()) {
            let psi = random_pure(&[2, 3, 4], seed);
            let rho = psi.reduced(&[0, 1]).unwrap();
            let reduced = rho.partial_trace(&[1]).unwrap();
            prop_assert!((reduced.trace() - rho.trace()).abs() < 1e-13);
            prop_assert!(reduced.check_hermitian(1e-12).is_ok());
        }
    }
}
