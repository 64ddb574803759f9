//! Tensor-product index bookkeeping for multipartite Hilbert spaces.

use crate::error::{Error, Result};
use nalgebra::DVector;
use num_complex::Complex64;

/// Dense complex column vector; the ket type used across the crate.
pub type Ket = DVector<Complex64>;

/// Local dimensions of a tensor-product space, e.g. `[3, 3]` for two qutrits
/// or `[2, 2, 2]` for three qubits.
///
/// Flat indices are big-endian in the factors: the multi-index
/// `(i_1, .., i_n)` maps to `sum_k i_k * prod_{l>k} d_l`, so the first factor
/// is the most significant digit. For `[2, 2, 2]` this orders the basis as
/// `|000>, |001>, |010>, .., |111>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorSpace {
    dims: Vec<usize>,
}

impl TensorSpace {
    pub fn new(dims: &[usize]) -> Result<Self> {
        if dims.is_empty() || dims.iter().any(|&d| d < 2) {
            return Err(Error::InvalidDims(dims.to_vec()));
        }
        Ok(Self {
            dims: dims.to_vec(),
        })
    }

    pub fn bipartite(da: usize, db: usize) -> Result<Self> {
        Self::new(&[da, db])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn factors(&self) -> usize {
        self.dims.len()
    }

    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    /// Stride of each factor in the flat index.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1usize; self.dims.len()];
        for k in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.dims[k + 1];
        }
        strides
    }

    pub fn flat_index(&self, multi: &[usize]) -> usize {
        debug_assert_eq!(multi.len(), self.dims.len());
        multi
            .iter()
            .zip(self.strides())
            .map(|(&i, s)| i * s)
            .sum()
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let strides = self.strides();
        let mut multi = vec![0usize; self.dims.len()];
        for (k, &s) in strides.iter().enumerate() {
            multi[k] = flat / s;
            flat %= s;
        }
        multi
    }

    pub fn check_subsystem(&self, subsystem: usize) -> Result<()> {
        if subsystem >= self.factors() {
            return Err(Error::SubsystemOutOfRange {
                index: subsystem,
                factors: self.factors(),
            });
        }
        Ok(())
    }

    pub fn check_same(&self, other: &Self) -> Result<()> {
        if self != other {
            return Err(Error::SpaceMismatch(
                self.dims.clone(),
                other.dims.clone(),
            ));
        }
        Ok(())
    }
}

/// Computational-basis ket `|i_1 .. i_n>` as a dense complex vector.
pub fn basis_ket(space: &TensorSpace, multi: &[usize]) -> DVector<Complex64> {
    let mut v = DVector::from_element(space.total(), Complex64::new(0.0, 0.0));
    v[space.flat_index(multi)] = Complex64::new(1.0, 0.0);
    v
}

/// Kronecker product of per-factor local vectors, big-endian.
pub fn product_ket(locals: &[&DVector<Complex64>]) -> DVector<Complex64> {
    let mut out = DVector::from_element(1, Complex64::new(1.0, 0.0));
    for local in locals {
        let mut next = DVector::from_element(out.len() * local.len(), Complex64::new(0.0, 0.0));
        for (i, a) in out.iter().enumerate() {
            for (j, b) in local.iter().enumerate() {
                next[i * local.len() + j] = a * b;
            }
        }
        out = next;
    }
    out
}
