use num_complex::Complex64;

use super::dense::DenseMatrix;
use crate::{Error, Result};

/// Hermiticity tolerance for structural validation.
pub const HERMITIAN_TOLERANCE: f64 = 1e-9;

/// Mixed-radix indexing over a list of subsystem dimensions. The first factor
/// is the most significant digit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Layout {
    factors: Vec<usize>,
    strides: Vec<usize>,
    dim: usize,
}

impl Layout {
    pub(crate) fn new(factors: &[usize]) -> Result<Self> {
        if factors.is_empty() || factors.contains(&0) {
            return Err(Error::input(format!("invalid factor list {factors:?}")));
        }
        let mut strides = vec![1; factors.len()];
        let mut dim: usize = 1;
        for (i, &f) in factors.iter().enumerate().rev() {
            strides[i] = dim;
            dim = dim.checked_mul(f).ok_or(Error::Capacity {
                requested: usize::MAX,
                limit: usize::MAX,
            })?;
        }
        Ok(Layout {
            factors: factors.to_vec(),
            strides,
            dim,
        })
    }

    pub(crate) fn dim(&self) -> usize {
        self.dim
    }

    pub(crate) fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub(crate) fn digit(&self, index: usize, factor: usize) -> usize {
        (index / self.strides[factor]) % self.factors[factor]
    }

    /// Splits `index` into (kept, traced) indices for the given sorted `keep`
    /// list, each in the mixed radix of its own factor subset.
    pub(crate) fn split(&self, index: usize, keep: &[bool]) -> (usize, usize) {
        let mut kept = 0;
        let mut traced = 0;
        for (f, &dim) in self.factors.iter().enumerate() {
            let d = self.digit(index, f);
            if keep[f] {
                kept = kept * dim + d;
            } else {
                traced = traced * dim + d;
            }
        }
        (kept, traced)
    }

    pub(crate) fn keep_mask(&self, keep: &[usize]) -> Result<Vec<bool>> {
        if keep.is_empty() {
            return Err(Error::input(
                "partial trace must keep at least one subsystem",
            ));
        }
        let mut mask = vec![false; self.factors.len()];
        for &k in keep {
            if k >= self.factors.len() {
                return Err(Error::input(format!(
                    "subsystem index {k} out of range for {} factors",
                    self.factors.len()
                )));
            }
            mask[k] = true;
        }
        Ok(mask)
    }

    pub(crate) fn kept_factors(&self, mask: &[bool]) -> Vec<usize> {
        self.factors
            .iter()
            .zip(mask)
            .filter(|(_, &m)| m)
            .map(|(&f, _)| f)
            .collect()
    }
}

/// A density matrix on a truncated occupation-number basis, possibly a tensor
/// product of several subsystems.
///
/// Entries are kept as sorted `(row, col, value)` triplets without explicit
/// zeros; every state produced by the channel is block sparse, and the
/// two-mode states reach millions of basis vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct FockDensityMatrix {
    layout: Layout,
    entries: Vec<(usize, usize, Complex64)>,
}

impl FockDensityMatrix {
    /// Builds a matrix from unordered triplets; duplicates are summed.
    pub fn from_triplets<I>(factors: &[usize], triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Complex64)>,
    {
        let layout = Layout::new(factors)?;
        let mut entries: Vec<_> = triplets.into_iter().collect();
        if let Some(&(i, j, _)) = entries
            .iter()
            .find(|(i, j, _)| *i >= layout.dim || *j >= layout.dim)
        {
            return Err(Error::input(format!(
                "entry ({i}, {j}) outside dimension {}",
                layout.dim
            )));
        }
        entries.sort_unstable_by_key(|&(i, j, _)| (i, j));
        let mut merged: Vec<(usize, usize, Complex64)> = Vec::with_capacity(entries.len());
        for (i, j, v) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == i && last.1 == j => last.2 += v,
                _ => merged.push((i, j, v)),
            }
        }
        merged.retain(|e| e.2 != Complex64::new(0.0, 0.0));
        Ok(FockDensityMatrix {
            layout,
            entries: merged,
        })
    }

    pub fn diagonal(factors: &[usize], diag: &[f64]) -> Result<Self> {
        Self::from_triplets(
            factors,
            diag.iter()
                .enumerate()
                .map(|(i, &p)| (i, i, Complex64::new(p, 0.0))),
        )
    }

    /// Row-major dense input of size `dim * dim`.
    pub fn from_dense(factors: &[usize], data: &[Complex64]) -> Result<Self> {
        let layout = Layout::new(factors)?;
        let n = layout.dim;
        if data.len() != n * n {
            return Err(Error::input(format!(
                "expected {} entries, got {}",
                n * n,
                data.len()
            )));
        }
        Self::from_triplets(
            factors,
            data.iter().enumerate().map(|(k, &v)| (k / n, k % n, v)),
        )
    }

    pub fn from_real_dense(factors: &[usize], data: &[f64]) -> Result<Self> {
        let complex: Vec<_> = data.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_dense(factors, &complex)
    }

    pub fn dim(&self) -> usize {
        self.layout.dim
    }

    pub fn factors(&self) -> &[usize] {
        self.layout.factors()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, usize, Complex64)] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries
            .binary_search_by_key(&(row, col), |&(i, j, _)| (i, j))
            .map(|k| self.entries[k].2)
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn trace(&self) -> f64 {
        self.entries
            .iter()
            .filter(|e| e.0 == e.1)
            .map(|e| e.2.re)
            .sum()
    }

    pub fn is_diagonal(&self, tolerance: f64) -> bool {
        self.entries
            .iter()
            .all(|&(i, j, v)| i == j || v.norm() <= tolerance)
    }

    /// Largest `|m[i][j] - conj(m[j][i])|` with its location.
    pub fn hermiticity_defect(&self) -> (f64, usize, usize) {
        let mut worst = (0.0, 0, 0);
        for &(i, j, v) in &self.entries {
            let partner = if i == j { v } else { self.get(j, i) };
            let dev = (v - partner.conj()).norm();
            if dev > worst.0 {
                worst = (dev, i, j);
            }
        }
        worst
    }

    pub fn check_hermitian(&self, tolerance: f64) -> Result<()> {
        let (deviation, row, col) = self.hermiticity_defect();
        if deviation > tolerance {
            return Err(Error::NotHermitian {
                row,
                col,
                deviation,
            });
        }
        Ok(())
    }

    pub fn scaled(&self, factor: f64) -> Self {
        FockDensityMatrix {
            layout: self.layout.clone(),
            entries: self
                .entries
                .iter()
                .map(|&(i, j, v)| (i, j, v * factor))
                .filter(|e| e.2 != Complex64::new(0.0, 0.0))
                .collect(),
        }
    }

    /// Entrywise sum; factor lists must match.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.layout != other.layout {
            return Err(Error::input(format!(
                "cannot add matrices with factors {:?} and {:?}",
                self.factors(),
                other.factors()
            )));
        }
        Self::from_triplets(
            self.factors(),
            self.entries.iter().chain(&other.entries).copied(),
        )
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.dim();
        let mut m = DenseMatrix::zeros(n);
        for &(i, j, v) in &self.entries {
            m[(i, j)] = v;
        }
        m
    }

    /// Traces out every subsystem not listed in `keep`.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let mask = self.layout.keep_mask(keep)?;
        let kept = self.layout.kept_factors(&mask);
        let triplets = self.entries.iter().filter_map(|&(i, j, v)| {
            let (ki, ti) = self.layout.split(i, &mask);
            let (kj, tj) = self.layout.split(j, &mask);
            (ti == tj).then_some((ki, kj, v))
        });
        Self::from_triplets(&kept, triplets)
    }

    /// Kronecker product with the factor lists concatenated. Each factor must
    /// stay within `max_factor_dim`.
    pub fn tensor_product(&self, other: &Self, max_factor_dim: usize) -> Result<Self> {
        let factors: Vec<usize> = self
            .factors()
            .iter()
            .chain(other.factors())
            .copied()
            .collect();
        if let Some(&big) = factors.iter().find(|&&f| f > max_factor_dim) {
            return Err(Error::Capacity {
                requested: big,
                limit: max_factor_dim,
            });
        }
        let layout = Layout::new(&factors).map_err(|_| Error::Capacity {
            requested: usize::MAX,
            limit: max_factor_dim,
        })?;
        let nb = other.dim();
        let mut entries = Vec::with_capacity(self.nnz() * other.nnz());
        for &(ia, ja, va) in &self.entries {
            for &(ib, jb, vb) in &other.entries {
                entries.push((ia * nb + ib, ja * nb + jb, va * vb));
            }
        }
        entries.sort_unstable_by_key(|&(i, j, _)| (i, j));
        entries.retain(|e| e.2 != Complex64::new(0.0, 0.0));
        Ok(FockDensityMatrix { layout, entries })
    }

    /// Groups the support into connected blocks: two basis indices share a
    /// block when a nonzero entry couples them. Returns the sorted index list
    /// of every block touched by at least one entry.
    #[cfg(test)]
    pub(crate) fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        self.for_each_block(|indices, _| out.push(indices.to_vec()));
        out
    }

    /// Calls `f(indices, entries)` for every block in order of its smallest
    /// index; `entries` are the block's triplets in row-major order.
    pub(crate) fn for_each_block<F>(&self, mut f: F)
    where
        F: FnMut(&[usize], &[(usize, usize, Complex64)]),
    {
        // rows come sorted; columns only add nodes for non-Hermitian input
        let mut nodes: Vec<usize> = self.entries.iter().map(|e| e.0).collect();
        nodes.dedup();
        if self
            .entries
            .iter()
            .any(|e| nodes.binary_search(&e.1).is_err())
        {
            nodes.extend(self.entries.iter().map(|e| e.1));
            nodes.sort_unstable();
            nodes.dedup();
        }
        // direct lookup table when the dimension is not much larger than the support
        let table: Option<Vec<usize>> = (self.dim() <= 8 * nodes.len()).then(|| {
            let mut t = vec![usize::MAX; self.dim()];
            for (k, &x) in nodes.iter().enumerate() {
                t[x] = k;
            }
            t
        });
        let id = |x: usize| match &table {
            Some(t) => t[x],
            None => nodes.binary_search(&x).expect("node collected above"),
        };
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut parent: Vec<usize> = (0..nodes.len()).collect();
        for &(i, j, _) in self.entries.iter().filter(|e| e.0 != e.1) {
            let (ra, rb) = (find(&mut parent, id(i)), find(&mut parent, id(j)));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let roots: Vec<usize> = (0..nodes.len()).map(|k| find(&mut parent, k)).collect();

        // bucket nodes and entries by root; roots are the smallest member, so
        // ascending root order is ascending first index
        let n = nodes.len();
        let mut node_start = vec![0usize; n + 1];
        for &r in &roots {
            node_start[r + 1] += 1;
        }
        for k in 0..n {
            node_start[k + 1] += node_start[k];
        }
        let mut entry_start = vec![0usize; n + 1];
        let entry_root: Vec<usize> = self.entries.iter().map(|e| roots[id(e.0)]).collect();
        for &r in &entry_root {
            entry_start[r + 1] += 1;
        }
        for k in 0..n {
            entry_start[k + 1] += entry_start[k];
        }
        let mut members = vec![0usize; n];
        let mut fill = node_start.clone();
        for (k, &r) in roots.iter().enumerate() {
            members[fill[r]] = nodes[k];
            fill[r] += 1;
        }
        let mut grouped = vec![(0usize, 0usize, Complex64::new(0.0, 0.0)); self.entries.len()];
        let mut fill = entry_start.clone();
        for (e, &r) in entry_root.iter().enumerate() {
            grouped[fill[r]] = self.entries[e];
            fill[r] += 1;
        }
        for r in (0..n).filter(|&r| roots[r] == r) {
            f(
                &members[node_start[r]..node_start[r + 1]],
                &grouped[entry_start[r]..entry_start[r + 1]],
            );
        }
    }
}
