//! Dense complex Hermitian matrices and a cyclic Jacobi eigensolver.

use num_complex::Complex64;

const MAX_SWEEPS: usize = 100;

/// Row-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Panics if `data.len() != n * n`.
    pub fn from_row_major(n: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), n * n, "expected {} entries", n * n);
        DenseMatrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    fn off_diagonal_norm_sqr(&self) -> f64 {
        let n = self.n;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    acc += self[(i, j)].norm_sqr();
                }
            }
        }
        acc
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// Eigenvalues (descending) and, if requested, the unitary whose columns are
/// the matching eigenvectors.
#[derive(Debug, Clone)]
pub struct DenseEigen {
    pub values: Vec<f64>,
    pub vectors: Option<DenseMatrix>,
}

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
///
/// Each rotation first removes the phase of the pivot `a[p][q]` with a
/// diagonal unitary and then applies the real symmetric Jacobi rotation that
/// annihilates it. The input is assumed Hermitian; only the upper triangle's
/// phases are read when choosing rotations.
pub fn jacobi_eigen(m: &DenseMatrix, want_vectors: bool) -> DenseEigen {
    let n = m.dim();
    let mut a = m.clone();
    for i in 0..n {
        a[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
    }
    let mut v = want_vectors.then(|| DenseMatrix::identity(n));

    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);
    let target = (f64::EPSILON * scale).powi(2);

    for sweep in 0..MAX_SWEEPS {
        let off = a.off_diagonal_norm_sqr();
        if off <= target {
            break;
        }
        // early sweeps skip negligible pivots; later sweeps rotate everything
        let threshold = if sweep < 3 {
            0.2 * off.sqrt() / (n * n) as f64
        } else {
            0.0
        };
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag == 0.0 || mag < threshold {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                // pivot is negligible against both diagonal entries
                let g = 100.0 * mag;
                if sweep > 3 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    a[(p, q)] = Complex64::new(0.0, 0.0);
                    a[(q, p)] = Complex64::new(0.0, 0.0);
                    continue;
                }
                let phase = apq / mag;
                let theta = (aqq - app) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                rotate(&mut a, p, q, phase, c, s);
                a[(p, p)] = Complex64::new(app - t * mag, 0.0);
                a[(q, q)] = Complex64::new(aqq + t * mag, 0.0);
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                if let Some(v) = v.as_mut() {
                    rotate_columns(v, p, q, phase, c, s);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = v.map(|v| {
        let mut sorted = DenseMatrix::zeros(n);
        for (new_col, &old_col) in order.iter().enumerate() {
            for row in 0..n {
                sorted[(row, new_col)] = v[(row, old_col)];
            }
        }
        sorted
    });
    DenseEigen { values, vectors }
}

/// `a <- U^dagger a U` restricted to rows/columns other than the pivot pair,
/// with `U = diag(1, conj(phase)) * [[c, s], [-s, c]]` on (p, q).
fn rotate(a: &mut DenseMatrix, p: usize, q: usize, phase: Complex64, c: f64, s: f64) {
    let n = a.dim();
    let conj_phase = phase.conj();
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[(k, p)];
        let akq = a[(k, q)] * conj_phase;
        let new_kp = akp * c - akq * s;
        let new_kq = akp * s + akq * c;
        a[(k, p)] = new_kp;
        a[(k, q)] = new_kq;
        a[(p, k)] = new_kp.conj();
        a[(q, k)] = new_kq.conj();
    }
}

fn rotate_columns(v: &mut DenseMatrix, p: usize, q: usize, phase: Complex64, c: f64, s: f64) {
    let conj_phase = phase.conj();
    for k in 0..v.dim() {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)] * conj_phase;
        v[(k, p)] = vkp * c - vkq * s;
        v[(k, q)] = vkp * s + vkq * c;
    }
}

/// Closed-form eigenvalues of a 2x2 Hermitian block, descending.
pub fn eigenvalues_2x2(a: f64, b: Complex64, d: f64) -> [f64; 2] {
    let mean = 0.5 * (a + d);
    let radius = (0.5 * (a - d)).hypot(b.norm());
    // avoid cancellation in the smaller root when the block is near rank one
    let hi = mean + radius;
    let det = a * d - b.norm_sqr();
    let lo = if hi.abs() > 0.0 && mean > 0.0 {
        det / hi
    } else {
        mean - radius
    };
    [hi, lo]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_hermitian(n: usize, seed: u64) -> DenseMatrix {
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let mut m = DenseMatrix::zeros(n);
        for i in 0..n {
            m[(i, i)] = c(rng.gen_range(-1.0..1.0), 0.0);
            for j in (i + 1)..n {
                let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        m
    }

    #[test]
    fn residual_within_contract() {
        for (n, seed) in [(2, 1), (7, 2), (24, 3), (40, 4)] {
            let m = random_hermitian(n, seed);
            let eig = jacobi_eigen(&m, true);
            let vecs = eig.vectors.unwrap();
            let norm = m.frobenius_norm();
            for (col, &lambda) in eig.values.iter().enumerate() {
                let mut residual = 0.0;
                for i in 0..n {
                    let mut acc = c(0.0, 0.0);
                    for k in 0..n {
                        acc += m[(i, k)] * vecs[(k, col)];
                    }
                    residual += (acc - vecs[(i, col)] * lambda).norm_sqr();
                }
                assert!(
                    residual.sqrt() <= 1e-10 * norm,
                    "n={n} residual {}",
                    residual.sqrt()
                );
            }
            assert!(eig.values.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn eigenvectors_are_unitary() {
        let m = random_hermitian(12, 9);
        let v = jacobi_eigen(&m, true).vectors.unwrap();
        let prod = v.adjoint().matmul(&v);
        for i in 0..12 {
            for j in 0..12 {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((prod[(i, j)] - c(expected, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn trace_is_sum_of_eigenvalues() {
        let m = random_hermitian(16, 5);
        let trace: f64 = (0..16).map(|i| m[(i, i)].re).sum();
        let sum: f64 = jacobi_eigen(&m, false).values.iter().sum();
        assert!((trace - sum).abs() < 1e-12);
    }

    #[test]
    fn two_by_two_matches_jacobi() {
        let b = c(0.3, -0.4);
        let closed = eigenvalues_2x2(0.7, b, 0.2);
        let m = DenseMatrix::from_row_major(2, vec![c(0.7, 0.0), b, b.conj(), c(0.2, 0.0)]);
        let jac = jacobi_eigen(&m, false).values;
        assert!((closed[0] - jac[0]).abs() < 1e-14);
        assert!((closed[1] - jac[1]).abs() < 1e-14);
    }

    #[test]
    fn rank_one_block_has_exact_zero() {
        // [[x, sqrt(xy)], [sqrt(xy), y]] is rank one
        let (x, y) = (1e-9, 3.0e-7);
        let ev = eigenvalues_2x2(x, c((x * y).sqrt(), 0.0), y);
        assert!((ev[0] - (x + y)).abs() < 1e-22);
        assert!(ev[1].abs() < 1e-15 * ev[0]);
    }
}
