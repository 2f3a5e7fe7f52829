use num_complex::Complex64;

use super::matrix::{FockDensityMatrix, Layout};
use crate::{Error, Result};

/// Sparse pure state over a product of truncated subsystems.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    layout: Layout,
    amplitudes: Vec<(usize, Complex64)>,
}

impl StateVector {
    /// Duplicated indices are summed; zero amplitudes are dropped.
    pub fn from_amplitudes<I>(factors: &[usize], amplitudes: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, Complex64)>,
    {
        let layout = Layout::new(factors)?;
        let mut amps: Vec<_> = amplitudes.into_iter().collect();
        if let Some(&(i, _)) = amps.iter().find(|(i, _)| *i >= layout.dim()) {
            return Err(Error::input(format!(
                "basis index {i} outside dimension {}",
                layout.dim()
            )));
        }
        amps.sort_unstable_by_key(|a| a.0);
        let mut merged: Vec<(usize, Complex64)> = Vec::with_capacity(amps.len());
        for (i, v) in amps {
            match merged.last_mut() {
                Some(last) if last.0 == i => last.1 += v,
                _ => merged.push((i, v)),
            }
        }
        merged.retain(|a| a.1 != Complex64::new(0.0, 0.0));
        Ok(StateVector {
            layout,
            amplitudes: merged,
        })
    }

    pub fn basis(factors: &[usize], index: usize) -> Result<Self> {
        Self::from_amplitudes(factors, [(index, Complex64::new(1.0, 0.0))])
    }

    pub fn factors(&self) -> &[usize] {
        self.layout.factors()
    }

    pub fn dim(&self) -> usize {
        self.layout.dim()
    }

    pub fn amplitudes(&self) -> &[(usize, Complex64)] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes
            .binary_search_by_key(&index, |a| a.0)
            .map(|k| self.amplitudes[k].1)
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.1.norm_sqr()).sum()
    }

    /// `<self|other>`; factor lists must match.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_same_layout(other)?;
        let mut acc = Complex64::new(0.0, 0.0);
        let (mut a, mut b) = (0, 0);
        while a < self.amplitudes.len() && b < other.amplitudes.len() {
            let (ia, va) = self.amplitudes[a];
            let (ib, vb) = other.amplitudes[b];
            match ia.cmp(&ib) {
                std::cmp::Ordering::Less => a += 1,
                std::cmp::Ordering::Greater => b += 1,
                std::cmp::Ordering::Equal => {
                    acc += va.conj() * vb;
                    a += 1;
                    b += 1;
                }
            }
        }
        Ok(acc)
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        StateVector {
            layout: self.layout.clone(),
            amplitudes: self
                .amplitudes
                .iter()
                .map(|&(i, v)| (i, v * factor))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_layout(other)?;
        Self::from_amplitudes(
            self.factors(),
            self.amplitudes.iter().chain(&other.amplitudes).copied(),
        )
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let factors: Vec<usize> = self
            .factors()
            .iter()
            .chain(other.factors())
            .copied()
            .collect();
        let nb = other.dim();
        let amps = self.amplitudes.iter().flat_map(|&(ia, va)| {
            other
                .amplitudes
                .iter()
                .map(move |&(ib, vb)| (ia * nb + ib, va * vb))
        });
        Self::from_amplitudes(&factors, amps)
    }

    /// `|psi><psi|` as a density matrix.
    pub fn projector(&self) -> Result<FockDensityMatrix> {
        let amps = &self.amplitudes;
        FockDensityMatrix::from_triplets(
            self.factors(),
            amps.iter()
                .flat_map(|&(i, vi)| amps.iter().map(move |&(j, vj)| (i, j, vi * vj.conj()))),
        )
    }

    /// Reduced density matrix of `|psi><psi|` on the subsystems in `keep`,
    /// computed without forming the full projector.
    pub fn reduced(&self, keep: &[usize]) -> Result<FockDensityMatrix> {
        let mask = self.layout.keep_mask(keep)?;
        let kept_factors = self.layout.kept_factors(&mask);
        let mut split: Vec<(usize, usize, Complex64)> = self
            .amplitudes
            .iter()
            .map(|&(i, v)| {
                let (kept, traced) = self.layout.split(i, &mask);
                (traced, kept, v)
            })
            .collect();
        split.sort_unstable_by_key(|s| (s.0, s.1));

        let mut triplets = Vec::new();
        let mut start = 0;
        while start < split.len() {
            let traced = split[start].0;
            let end = start + split[start..].iter().take_while(|s| s.0 == traced).count();
            let group = &split[start..end];
            for &(_, ki, vi) in group {
                for &(_, kj, vj) in group {
                    triplets.push((ki, kj, vi * vj.conj()));
                }
            }
            start = end;
        }
        FockDensityMatrix::from_triplets(&kept_factors, triplets)
    }

    fn check_same_layout(&self, other: &Self) -> Result<()> {
        if self.layout != other.layout {
            return Err(Error::input(format!(
                "state factor lists differ: {:?} vs {:?}",
                self.factors(),
                other.factors()
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn reduced_matches_projector_trace() {
        let s = 0.5f64.sqrt();
        let psi =
            StateVector::from_amplitudes(&[2, 3, 2], [(0, c(s * 0.6)), (5, c(s * 0.8)), (7, c(s))])
                .unwrap();
        let full = psi.projector().unwrap();
        for keep in [vec![0], vec![1], vec![0, 2], vec![1, 2]] {
            assert_eq!(
                psi.reduced(&keep).unwrap(),
                full.partial_trace(&keep).unwrap()
            );
        }
    }

    #[test]
    fn tensor_and_inner() {
        let a = StateVector::from_amplitudes(&[2], [(0, c(0.6)), (1, c(0.8))]).unwrap();
        let b = StateVector::basis(&[3], 2).unwrap();
        let ab = a.tensor(&b).unwrap();
        assert_eq!(ab.factors(), &[2, 3]);
        assert_eq!(ab.amplitude(5), c(0.8));
        assert!((ab.inner(&ab).unwrap() - c(1.0)).norm() < 1e-15);
        assert!(a.inner(&b).is_err());
    }
}
