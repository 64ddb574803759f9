//! Hermitian operators on tensor-product spaces: partial transpose,
//! eigendecomposition, kernels, subspace intersection, Schmidt coefficients.

use crate::error::{Error, Result};
use crate::space::TensorSpace;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

/// Relative tolerance for the Hermiticity check at construction.
pub const HERMITICITY_RTOL: f64 = 1e-12;
/// Absolute tolerance on the minimum eigenvalue of a density state.
pub const PSD_ATOL: f64 = 1e-10;
/// Absolute tolerance on the trace of a density state.
pub const TRACE_ATOL: f64 = 1e-12;
/// Default zero threshold (relative to the spectral radius) for kernels and
/// negative eigenspaces.
pub const ZERO_EIG_RTOL: f64 = 1e-9;
/// Default tolerance on principal cosines for subspace intersection
/// (directions with cos >= 1 - tol are kept).
pub const INTERSECTION_TOL: f64 = 1e-8;
/// Maximum tolerated imaginary residue on traces of Hermitian products.
pub const TRACE_IMAG_ATOL: f64 = 1e-10;

/// Dense complex Hermitian operator tagged with its tensor-factor dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorOperator {
    space: TensorSpace,
    entries: DMatrix<Complex64>,
}

impl TensorOperator {
    /// Validates shape and Hermiticity (max |M - M^dag| entry <= 1e-12 max|M|).
    pub fn new(space: TensorSpace, entries: DMatrix<Complex64>) -> Result<Self> {
        let total = space.total();
        if entries.nrows() != total || entries.ncols() != total {
            return Err(Error::ShapeMismatch {
                rows: entries.nrows(),
                cols: entries.ncols(),
                total,
            });
        }
        let scale = entries.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let mut asymmetry = 0.0f64;
        for i in 0..total {
            for j in i..total {
                let d = (entries[(i, j)] - entries[(j, i)].conj()).norm();
                asymmetry = asymmetry.max(d);
            }
        }
        let tol = HERMITICITY_RTOL * scale;
        if asymmetry > tol {
            return Err(Error::NotHermitian { asymmetry, tol });
        }
        Ok(Self { space, entries })
    }

    /// Real matrix constructor, mostly for literal matrices in tests.
    pub fn from_real(space: TensorSpace, rows: &[&[f64]]) -> Result<Self> {
        let total = space.total();
        if rows.len() != total || rows.iter().any(|r| r.len() != total) {
            return Err(Error::ShapeMismatch {
                rows: rows.len(),
                cols: rows.first().map_or(0, |r| r.len()),
                total,
            });
        }
        let entries =
            DMatrix::from_fn(total, total, |i, j| Complex64::new(rows[i][j], 0.0));
        Self::new(space, entries)
    }

    pub fn identity(space: TensorSpace) -> Self {
        let total = space.total();
        Self {
            space,
            entries: DMatrix::identity(total, total),
        }
    }

    pub fn zero(space: TensorSpace) -> Self {
        let total = space.total();
        Self {
            space,
            entries: DMatrix::from_element(total, total, Complex64::new(0.0, 0.0)),
        }
    }

    /// Sum of |v><v| over the given vectors. With `normalize` each vector is
    /// scaled to unit norm first; otherwise the vectors enter as provided
    /// (the convention used by the literal matrices reproduced in tests).
    pub fn projector_sum(
        space: TensorSpace,
        vectors: &[DVector<Complex64>],
        normalize: bool,
    ) -> Result<Self> {
        let total = space.total();
        let mut entries = DMatrix::from_element(total, total, Complex64::new(0.0, 0.0));
        for v in vectors {
            if v.len() != total {
                return Err(Error::ShapeMismatch {
                    rows: v.len(),
                    cols: 1,
                    total,
                });
            }
            let v = if normalize { v.normalize() } else { v.clone() };
            for i in 0..total {
                for j in 0..total {
                    entries[(i, j)] += v[i] * v[j].conj();
                }
            }
        }
        Self::new(space, entries)
    }

    pub fn space(&self) -> &TensorSpace {
        &self.space
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Real part of the trace; the imaginary part of a Hermitian trace is
    /// exactly zero up to rounding.
    pub fn trace(&self) -> f64 {
        self.entries.diagonal().iter().map(|z| z.re).sum()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.space.check_same(&other.space)?;
        Ok(Self {
            space: self.space.clone(),
            entries: &self.entries + &other.entries,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.space.check_same(&other.space)?;
        Ok(Self {
            space: self.space.clone(),
            entries: &self.entries - &other.entries,
        })
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            space: self.space.clone(),
            entries: &self.entries * Complex64::new(factor, 0.0),
        }
    }

    /// Transposes the indices of one tensor factor only. A pure permutation
    /// of the entries: involutive at bit level and trace preserving.
    pub fn partial_transpose(&self, subsystem: usize) -> Result<Self> {
        self.space.check_subsystem(subsystem)?;
        let total = self.space.total();
        let mut out = DMatrix::from_element(total, total, Complex64::new(0.0, 0.0));
        for r in 0..total {
            let mut rm = self.space.multi_index(r);
            for c in 0..total {
                let mut cm = self.space.multi_index(c);
                std::mem::swap(&mut rm[subsystem], &mut cm[subsystem]);
                let sr = self.space.flat_index(&rm);
                let sc = self.space.flat_index(&cm);
                // restore for the next column
                std::mem::swap(&mut rm[subsystem], &mut cm[subsystem]);
                out[(r, c)] = self.entries[(sr, sc)];
            }
        }
        Ok(Self {
            space: self.space.clone(),
            entries: out,
        })
    }

    /// Hermitian eigendecomposition, eigenvalues ascending, eigenvectors
    /// orthonormal. Deterministic for a fixed input.
    pub fn eigh(&self) -> Spectrum {
        let decomp = SymmetricEigen::new(self.entries.clone());
        let n = self.space.total();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            decomp.eigenvalues[a]
                .partial_cmp(&decomp.eigenvalues[b])
                .expect("eigenvalues of a Hermitian matrix are finite reals")
        });
        let eigenvalues: Vec<f64> = order.iter().map(|&i| decomp.eigenvalues[i]).collect();
        let eigenvectors: Vec<DVector<Complex64>> = order
            .iter()
            .map(|&i| decomp.eigenvectors.column(i).into_owned())
            .collect();
        Spectrum {
            eigenvalues,
            eigenvectors,
        }
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigh().min()
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigh()
            .eigenvalues
            .iter()
            .map(|l| l.abs())
            .fold(0.0, f64::max)
    }

    /// PSD within `-PSD_ATOL * max(1, spectral radius)`.
    pub fn is_psd(&self) -> bool {
        let spectrum = self.eigh();
        let scale = spectrum.max_abs().max(1.0);
        spectrum.min() >= -PSD_ATOL * scale
    }

    /// Orthonormal basis of the span of eigenvectors with
    /// |eigenvalue| <= tol * spectral radius. A zero operator yields the
    /// whole space.
    pub fn kernel_basis(&self, tol: f64) -> Subspace {
        let spectrum = self.eigh();
        let radius = spectrum.max_abs();
        let threshold = tol * radius;
        let basis: Vec<_> = spectrum
            .eigenvalues
            .iter()
            .zip(&spectrum.eigenvectors)
            .filter(|(l, _)| l.abs() <= threshold || radius == 0.0)
            .map(|(_, v)| v.clone())
            .collect();
        Subspace {
            space: self.space.clone(),
            basis,
            tol,
        }
    }

    /// Orthonormal basis of the span of eigenvectors with
    /// eigenvalue < -tol * spectral radius.
    pub fn negative_eigenspace(&self, tol: f64) -> Subspace {
        let spectrum = self.eigh();
        let threshold = -tol * spectrum.max_abs();
        let basis: Vec<_> = spectrum
            .eigenvalues
            .iter()
            .zip(&spectrum.eigenvectors)
            .filter(|(l, _)| **l < threshold)
            .map(|(_, v)| v.clone())
            .collect();
        Subspace {
            space: self.space.clone(),
            basis,
            tol,
        }
    }

    /// Quadratic form <v|M|v>; real for Hermitian M.
    pub fn expectation(&self, v: &DVector<Complex64>) -> f64 {
        let mv = &self.entries * v;
        v.iter().zip(mv.iter()).map(|(a, b)| (a.conj() * b).re).sum()
    }

    /// Re Tr(A B) with the imaginary residue asserted small; both operators
    /// Hermitian makes the trace real up to rounding.
    pub fn trace_product(&self, other: &Self) -> Result<f64> {
        self.space.check_same(&other.space)?;
        let mut t = Complex64::new(0.0, 0.0);
        let n = self.space.total();
        for i in 0..n {
            for j in 0..n {
                t += self.entries[(i, j)] * other.entries[(j, i)];
            }
        }
        let scale = (self.max_abs() * other.max_abs()).max(1.0);
        if t.im.abs() > TRACE_IMAG_ATOL * scale {
            return Err(Error::NonRealTrace(t.im));
        }
        Ok(t.re)
    }

    pub fn approx_eq(&self, other: &Self, atol: f64) -> bool {
        self.space == other.space
            && self
                .entries
                .iter()
                .zip(other.entries.iter())
                .all(|(a, b)| (a - b).norm() <= atol)
    }
}

/// Eigenvalues (ascending) with matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<DVector<Complex64>>,
}

impl Spectrum {
    pub fn min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.eigenvalues.iter().map(|l| l.abs()).fold(0.0, f64::max)
    }

    /// Rebuilds sum_i lambda_i |v_i><v_i| for reconstruction checks.
    pub fn reconstruct(&self, space: &TensorSpace) -> TensorOperator {
        let total = space.total();
        let mut entries = DMatrix::from_element(total, total, Complex64::new(0.0, 0.0));
        for (l, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            for i in 0..total {
                for j in 0..total {
                    entries[(i, j)] += Complex64::new(*l, 0.0) * v[i] * v[j].conj();
                }
            }
        }
        TensorOperator {
            space: space.clone(),
            entries,
        }
    }
}

/// A Hermitian operator constrained to unit trace and positive
/// semidefiniteness, carrying a free-form provenance label.
#[derive(Debug, Clone)]
pub struct DensityState {
    op: TensorOperator,
    label: String,
}

impl DensityState {
    pub fn new(op: TensorOperator, label: impl Into<String>) -> Result<Self> {
        let trace = op.trace();
        if (trace - 1.0).abs() > TRACE_ATOL {
            return Err(Error::NotUnitTrace(trace));
        }
        let min = op.min_eigenvalue();
        if min < -PSD_ATOL {
            return Err(Error::NotPsd(min));
        }
        Ok(Self {
            op,
            label: label.into(),
        })
    }

    /// Rank-1 state |psi><psi| from a (normalized) vector.
    pub fn pure(space: TensorSpace, psi: &DVector<Complex64>, label: impl Into<String>) -> Result<Self> {
        let op = TensorOperator::projector_sum(space, std::slice::from_ref(psi), true)?;
        Self::new(op, label)
    }

    pub fn op(&self) -> &TensorOperator {
        &self.op
    }

    pub fn space(&self) -> &TensorSpace {
        self.op.space()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn purity(&self) -> f64 {
        self.op
            .trace_product(&self.op)
            .expect("same space")
    }

    pub fn pt_min_eigenvalue(&self, subsystem: usize) -> Result<f64> {
        Ok(self.op.partial_transpose(subsystem)?.min_eigenvalue())
    }

    /// PPT at the crate-wide tolerance: min PT eigenvalue >= -1e-10.
    pub fn is_ppt(&self, subsystem: usize) -> Result<bool> {
        Ok(self.pt_min_eigenvalue(subsystem)? >= -PSD_ATOL)
    }

    pub fn kernel(&self, tol: f64) -> Subspace {
        self.op.kernel_basis(tol)
    }
}

/// Orthonormal basis of a linear subspace, remembering the zero threshold
/// that produced it.
#[derive(Debug, Clone)]
pub struct Subspace {
    space: TensorSpace,
    basis: Vec<DVector<Complex64>>,
    tol: f64,
}

impl Subspace {
    pub fn new(space: TensorSpace, basis: Vec<DVector<Complex64>>, tol: f64) -> Self {
        Self { space, basis, tol }
    }

    pub fn space(&self) -> &TensorSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[DVector<Complex64>] {
        &self.basis
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Projector onto the subspace.
    pub fn projector(&self) -> TensorOperator {
        TensorOperator::projector_sum(self.space.clone(), &self.basis, false)
            .expect("orthonormal basis vectors have the right length")
    }

    /// Squared overlap of a unit vector with the subspace.
    pub fn overlap(&self, v: &DVector<Complex64>) -> f64 {
        let u = v.normalize();
        self.basis
            .iter()
            .map(|b| b.iter().zip(u.iter()).map(|(x, y)| x.conj() * y).sum::<Complex64>().norm_sqr())
            .sum()
    }

    /// Norm of the component of `v` outside the subspace.
    pub fn residual(&self, v: &DVector<Complex64>) -> f64 {
        let u = v.normalize();
        (1.0 - self.overlap(&u)).max(0.0).sqrt()
    }
}

/// Intersection of two subspaces via principal angles: the cross-Gram SVD
/// selects the directions with cosine >= 1 - tol, and the returned basis is
/// the matching top eigenspace of the projector sum (which pins residuals in
/// both inputs down to rounding level).
pub fn subspace_intersection(a: &Subspace, b: &Subspace, tol: f64) -> Result<Subspace> {
    a.space().check_same(b.space())?;
    if a.is_empty() || b.is_empty() {
        return Ok(Subspace::new(a.space().clone(), Vec::new(), tol));
    }
    let n = a.space().total();
    let gram = DMatrix::from_fn(a.dim(), b.dim(), |i, j| {
        a.basis()[i]
            .iter()
            .zip(b.basis()[j].iter())
            .map(|(x, y)| x.conj() * y)
            .sum::<Complex64>()
    });
    let mut cosines: Vec<f64> = gram.svd(false, false).singular_values.iter().copied().collect();
    cosines.sort_by(|x, y| y.partial_cmp(x).expect("finite singular values"));
    let count = cosines.iter().take_while(|c| **c >= 1.0 - tol).count();
    if count == 0 {
        return Ok(Subspace::new(a.space().clone(), Vec::new(), tol));
    }
    let sum = a.projector().add(&b.projector())?;
    let spectrum = sum.eigh();
    let basis: Vec<DVector<Complex64>> = (0..count)
        .map(|k| spectrum.eigenvectors[n - 1 - k].clone())
        .collect();
    Ok(Subspace::new(a.space().clone(), basis, tol))
}

/// Singular values, descending, of the coefficient matrix of a bipartite
/// pure-state vector. Their squares sum to 1 for a normalized input; the
/// Schmidt rank is the count above 1e-9.
pub fn schmidt_coefficients(vec: &DVector<Complex64>, space: &TensorSpace) -> Result<Vec<f64>> {
    if space.factors() != 2 {
        return Err(Error::NotBipartite(space.factors()));
    }
    let (da, db) = (space.dims()[0], space.dims()[1]);
    let coeff = DMatrix::from_fn(da, db, |i, j| vec[i * db + j]);
    let mut sv: Vec<f64> = coeff.svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|x, y| y.partial_cmp(x).expect("finite singular values"));
    Ok(sv)
}

/// Number of Schmidt coefficients above the 1e-9 threshold.
pub fn schmidt_rank(vec: &DVector<Complex64>, space: &TensorSpace) -> Result<usize> {
    Ok(schmidt_coefficients(vec, space)?
        .iter()
        .filter(|c| **c > 1e-9)
        .count())
}
