//! Witness operators: construction from negative partial-transpose
//! eigenvectors, the edge form P + Q^T - eps*I, the form Q^T - k(I - P),
//! Schmidt-class witnesses I - (m/(k-1))P, evaluation, and a product-state
//! validation audit.
//!
//! A witness is a Hermitian operator with nonnegative expectation on every
//! separable state and a negative expectation on at least one state; it
//! therefore needs at least one negative eigenvalue. Decomposability is
//! tagged by construction only: an operator assembled as P + Q^T with PSD
//! P, Q and no subtracted offset is decomposable by construction, anything
//! else is merely a candidate for non-decomposability.

use crate::error::{Error, Result};
use crate::operator::{DensityState, TensorOperator, PSD_ATOL};
use crate::productopt::{min_product_expectation, OptConfig, ProductVector};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    PtEigvec,
    Edge,
    W1,
    Tripartite,
    Schmidt,
    ProjectorMinusEps,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decomposability {
    DecomposableByConstruction,
    NondecomposableCandidate,
}

/// A Hermitian witness operator with its construction metadata. The offset
/// parameter (eps or k) is kept alongside the parameter-free base so the
/// operator can be re-assembled at other offsets.
#[derive(Debug, Clone)]
pub struct Witness {
    op: TensorOperator,
    kind: WitnessKind,
    eps: Option<f64>,
    k: Option<f64>,
    schmidt_class: Option<usize>,
    decomposability: Decomposability,
    base: TensorOperator,
    penalty: Option<TensorOperator>,
}

impl Witness {
    pub fn operator(&self) -> &TensorOperator {
        &self.op
    }

    pub fn kind(&self) -> WitnessKind {
        self.kind
    }

    pub fn eps(&self) -> Option<f64> {
        self.eps
    }

    pub fn k(&self) -> Option<f64> {
        self.k
    }

    pub fn schmidt_class(&self) -> Option<usize> {
        self.schmidt_class
    }

    pub fn decomposability(&self) -> Decomposability {
        self.decomposability
    }

    /// Parameter-free part of the construction (P + Q^T, Q^T, ..).
    pub fn base(&self) -> &TensorOperator {
        &self.base
    }

    /// Re-assembles the operator at another offset value; identical to the
    /// base when the construction has no offset.
    pub fn operator_at(&self, offset: f64) -> TensorOperator {
        match &self.penalty {
            Some(pen) => self
                .base
                .sub(&pen.scale(offset))
                .expect("base and penalty share a space"),
            None => self.base.clone(),
        }
    }
}

fn check_psd(op: &TensorOperator) -> Result<()> {
    let spectrum = op.eigh();
    let scale = spectrum.max_abs().max(1.0);
    let min = spectrum.min();
    if min < -PSD_ATOL * scale {
        return Err(Error::NotPsd(min));
    }
    Ok(())
}

fn check_has_negative_eigenvalue(op: &TensorOperator) -> Result<()> {
    if op.min_eigenvalue() >= 0.0 {
        return Err(Error::NoNegativeEigenvalue);
    }
    Ok(())
}

/// Partial transpose of the projector onto the most negative eigenvector of
/// rho^{T_subsystem}; decomposable by construction.
pub fn witness_from_npt_eigvec(rho: &DensityState, subsystem: usize) -> Result<Witness> {
    let pt = rho.op().partial_transpose(subsystem)?;
    let spectrum = pt.eigh();
    if spectrum.min() >= -1e-9 {
        return Err(Error::NoNptEigenvector);
    }
    let vec = spectrum.eigenvectors[0].normalize();
    pt_projector_witness(rho.space().clone(), &vec, subsystem)
}

/// Witness (|eta><eta|)^{T_subsystem} from an explicit (normalized) vector.
pub fn pt_projector_witness(
    space: crate::space::TensorSpace,
    eta: &nalgebra::DVector<Complex64>,
    subsystem: usize,
) -> Result<Witness> {
    let proj = TensorOperator::projector_sum(space, std::slice::from_ref(eta), true)?;
    let op = proj.partial_transpose(subsystem)?;
    Ok(Witness {
        base: op.clone(),
        op,
        kind: WitnessKind::PtEigvec,
        eps: None,
        k: None,
        schmidt_class: None,
        decomposability: Decomposability::DecomposableByConstruction,
        penalty: None,
    })
}

/// Edge witness P + Q^{T_subsystem} - eps*I for PSD P, Q and eps >= 0.
/// With eps = 0 the result is decomposable by construction; with eps > 0 it
/// is a non-decomposability candidate and must carry a negative eigenvalue.
/// A zero Q yields the bare projector-minus-offset form.
pub fn edge_witness(
    p: &TensorOperator,
    q: &TensorOperator,
    eps: f64,
    subsystem: usize,
) -> Result<Witness> {
    p.space().check_same(q.space())?;
    if eps < 0.0 {
        return Err(Error::ParamOutOfRange(format!(
            "eps must be nonnegative, got {eps}"
        )));
    }
    check_psd(p)?;
    check_psd(q)?;
    let base = p.add(&q.partial_transpose(subsystem)?)?;
    let identity = TensorOperator::identity(p.space().clone());
    let op = base.sub(&identity.scale(eps))?;
    if eps > 0.0 {
        check_has_negative_eigenvalue(&op)?;
    }
    let kind = if q.max_abs() == 0.0 {
        WitnessKind::ProjectorMinusEps
    } else {
        WitnessKind::Edge
    };
    let decomposability = if eps > 0.0 {
        Decomposability::NondecomposableCandidate
    } else {
        Decomposability::DecomposableByConstruction
    };
    Ok(Witness {
        op,
        kind,
        eps: Some(eps),
        k: None,
        schmidt_class: None,
        decomposability,
        base,
        penalty: Some(identity),
    })
}

/// Witness Q^{T_subsystem} - k(I - P) for PSD P, Q and k > 0. Tagged
/// tripartite on three-factor spaces.
pub fn w1_witness(
    q: &TensorOperator,
    p: &TensorOperator,
    k: f64,
    subsystem: usize,
) -> Result<Witness> {
    p.space().check_same(q.space())?;
    if k <= 0.0 {
        return Err(Error::ParamOutOfRange(format!(
            "k must be positive, got {k}"
        )));
    }
    check_psd(p)?;
    check_psd(q)?;
    let base = q.partial_transpose(subsystem)?;
    let penalty = TensorOperator::identity(p.space().clone()).sub(p)?;
    let op = base.sub(&penalty.scale(k))?;
    check_has_negative_eigenvalue(&op)?;
    let kind = if p.space().factors() == 3 {
        WitnessKind::Tripartite
    } else {
        WitnessKind::W1
    };
    Ok(Witness {
        op,
        kind,
        eps: None,
        k: Some(k),
        schmidt_class: None,
        decomposability: Decomposability::NondecomposableCandidate,
        base,
        penalty: Some(penalty),
    })
}

/// Schmidt-class witness I - (m/(class-1)) P on an m x m space, with P the
/// projector onto the maximally entangled state. Nonnegative on states of
/// Schmidt number below `class`, negative on some state of Schmidt number
/// `class`.
pub fn schmidt_witness(m: usize, class: usize) -> Result<Witness> {
    if class < 2 || class > m {
        return Err(Error::BadSchmidtClass { class, m });
    }
    let p = crate::states::max_entangled(m)?;
    let identity = TensorOperator::identity(p.space().clone());
    let op = identity.sub(&p.op().scale(m as f64 / (class as f64 - 1.0)))?;
    Ok(Witness {
        base: op.clone(),
        op,
        kind: WitnessKind::Schmidt,
        eps: None,
        k: None,
        schmidt_class: Some(class),
        decomposability: Decomposability::NondecomposableCandidate,
        penalty: None,
    })
}

/// Tr(W rho): real by Hermiticity, with the imaginary residue checked.
pub fn evaluate(w: &Witness, rho: &DensityState) -> Result<f64> {
    w.operator().trace_product(rho.op())
}

/// Product-state audit of the witness condition: the minimized expectation
/// over product vectors and whether it stays above -1e-8 (nonnegativity on
/// separable states follows by convexity).
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub min_product_expectation: f64,
    pub argmin: ProductVector,
    pub is_def3_witness: bool,
    pub restarts_used: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReportJson {
    pub min: f64,
    pub argmin_local_vectors: Vec<Vec<[f64; 2]>>,
    pub is_witness: bool,
    pub restarts: usize,
}

impl ValidationReport {
    pub fn to_json_value(&self) -> ValidationReportJson {
        ValidationReportJson {
            min: self.min_product_expectation,
            argmin_local_vectors: self.argmin.to_component_lists(),
            is_witness: self.is_def3_witness,
            restarts: self.restarts_used,
        }
    }
}

pub fn validate_witness(w: &Witness, cfg: &OptConfig) -> ValidationReport {
    validate_operator(w.operator(), cfg)
}

pub fn validate_operator(op: &TensorOperator, cfg: &OptConfig) -> ValidationReport {
    let r = min_product_expectation(op, cfg);
    ValidationReport {
        min_product_expectation: r.value,
        argmin: r.argmin,
        is_def3_witness: r.value >= -1e-8,
        restarts_used: r.restarts,
    }
}

/// Trace norm of the realigned matrix of a bipartite state. A value above 1
/// certifies entanglement; at or below 1 the test is inconclusive.
pub fn realignment_diagnostic(rho: &DensityState) -> Result<f64> {
    let space = rho.space();
    if space.factors() != 2 {
        return Err(Error::NotBipartite(space.factors()));
    }
    let (da, db) = (space.dims()[0], space.dims()[1]);
    let entries = rho.op().entries();
    let realigned = DMatrix::from_fn(da * da, db * db, |r, c| {
        let (i, j) = (r / da, r % da);
        let (k, l) = (c / db, c % db);
        entries[(i * db + k, j * db + l)]
    });
    Ok(realigned.svd(false, false).singular_values.iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{basis_ket, TensorSpace};
    use crate::states::{horodecki_alpha, isotropic, max_entangled, pure_bipartite, tau};

    fn bell_in_qutrits() -> DensityState {
        let s = TensorSpace::bipartite(3, 3).unwrap();
        pure_bipartite(
            &[std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2],
            &s,
        )
        .unwrap()
    }

    #[test]
    fn npt_eigvec_witness_traces() {
        let rho1 = bell_in_qutrits();
        let rho2 = max_entangled(3).unwrap();
        let w = witness_from_npt_eigvec(&rho1, 0).unwrap();
        assert_eq!(w.kind(), WitnessKind::PtEigvec);
        assert_eq!(
            w.decomposability(),
            Decomposability::DecomposableByConstruction
        );
        assert!((evaluate(&w, &rho1).unwrap() + 0.5).abs() < 1e-12);
        assert!((evaluate(&w, &rho2).unwrap() + 1.0 / 3.0).abs() < 1e-12);

        let mixed = isotropic(0.0).unwrap();
        assert!((evaluate(&w, &mixed).unwrap() - 1.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn npt_eigvec_witness_rejects_ppt_states() {
        let ppt = tau(0.4, 0.0).unwrap();
        assert!(matches!(
            witness_from_npt_eigvec(&ppt, 0),
            Err(Error::NoNptEigenvector)
        ));
    }

    fn eq17_parts() -> (TensorOperator, TensorOperator) {
        let s = TensorSpace::bipartite(2, 4).unwrap();
        let a = basis_ket(&s, &[0, 1]) + basis_ket(&s, &[1, 2]);
        let b1 = basis_ket(&s, &[0, 3]) + basis_ket(&s, &[1, 2]);
        let b2 = basis_ket(&s, &[0, 1]) + basis_ket(&s, &[1, 0]);
        let p = TensorOperator::projector_sum(s.clone(), &[a], false).unwrap();
        let q = TensorOperator::projector_sum(s, &[b1, b2], false).unwrap();
        (p, q)
    }

    /// The expected 8x8 edge-witness matrix: diagonal
    /// (-e, 2-e, -e, 1-e, 1-e, -e, 2-e, -e) and unit entries at
    /// (0,5), (1,6), (2,7) and transposes.
    fn eq17_expected(eps: f64) -> TensorOperator {
        let s = TensorSpace::bipartite(2, 4).unwrap();
        let mut rows = vec![vec![0.0f64; 8]; 8];
        let diag = [
            -eps,
            2.0 - eps,
            -eps,
            1.0 - eps,
            1.0 - eps,
            -eps,
            2.0 - eps,
            -eps,
        ];
        for (i, d) in diag.iter().enumerate() {
            rows[i][i] = *d;
        }
        for (i, j) in [(0, 5), (1, 6), (2, 7)] {
            rows[i][j] = 1.0;
            rows[j][i] = 1.0;
        }
        let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
        TensorOperator::from_real(s, &refs).unwrap()
    }

    #[test]
    fn edge_witness_reproduces_the_literal_matrix_exactly() {
        let (p, q) = eq17_parts();
        for eps in [0.1, 0.25, 0.5] {
            let w = edge_witness(&p, &q, eps, 0).unwrap();
            let expected = eq17_expected(eps);
            assert_eq!(w.operator().entries(), expected.entries());
            assert_eq!(w.kind(), WitnessKind::Edge);
            assert_eq!(
                w.decomposability(),
                Decomposability::NondecomposableCandidate
            );
        }
        // offset re-assembly matches a fresh construction
        let w = edge_witness(&p, &q, 0.1, 0).unwrap();
        assert_eq!(
            w.operator_at(0.5).entries(),
            eq17_expected(0.5).entries()
        );
    }

    #[test]
    fn edge_witness_detects_the_tau_pair() {
        let (p, q) = eq17_parts();
        let w = edge_witness(&p, &q, 0.25, 0).unwrap();
        for b in [0.4, 0.5] {
            let t = tau(b, 0.0).unwrap();
            let trace = evaluate(&w, &t).unwrap();
            assert!((trace + 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn edge_witness_degenerate_and_error_cases() {
        let s = TensorSpace::bipartite(2, 2).unwrap();
        let zero = TensorOperator::zero(s.clone());
        let w = edge_witness(&zero, &zero, 0.0, 0).unwrap();
        assert_eq!(w.operator().max_abs(), 0.0);
        assert_eq!(
            w.decomposability(),
            Decomposability::DecomposableByConstruction
        );

        assert!(edge_witness(&zero, &zero, -0.1, 0).is_err());
        let not_psd = TensorOperator::identity(s.clone()).scale(-1.0);
        assert!(matches!(
            edge_witness(&not_psd, &zero, 0.1, 0),
            Err(Error::NotPsd(_))
        ));
        // P = I, Q = 0, small eps: no negative eigenvalue, so not a witness
        let id = TensorOperator::identity(s);
        assert!(matches!(
            edge_witness(&id, &zero, 0.1, 0),
            Err(Error::NoNegativeEigenvalue)
        ));
    }

    #[test]
    fn projector_minus_eps_annihilates_the_whole_family() {
        // P built from |11> - |00> and |22> - |00>, which the family of
        // horodecki_alpha states cannot see: Tr((P - eps I) Upsilon) = -eps
        let s = TensorSpace::bipartite(3, 3).unwrap();
        let v1 = basis_ket(&s, &[1, 1]) - basis_ket(&s, &[0, 0]);
        let v2 = basis_ket(&s, &[2, 2]) - basis_ket(&s, &[0, 0]);
        let p = TensorOperator::projector_sum(s.clone(), &[v1, v2], false).unwrap();
        let q = TensorOperator::zero(s);
        let eps = 0.25;
        let w = edge_witness(&p, &q, eps, 1).unwrap();
        assert_eq!(w.kind(), WitnessKind::ProjectorMinusEps);
        for param in [3.2, 3.5, 4.0, 4.5, 5.0] {
            let u = horodecki_alpha(param).unwrap();
            assert!(p.trace_product(u.op()).unwrap().abs() <= 1e-12);
            assert!((evaluate(&w, &u).unwrap() + eps).abs() < 1e-12);
        }
    }

    fn eq20_parts() -> (TensorOperator, TensorOperator) {
        let s = TensorSpace::new(&[2, 2, 2]).unwrap();
        let ker = basis_ket(&s, &[1, 1, 1]) - basis_ket(&s, &[0, 0, 0]);
        let pt_ker = basis_ket(&s, &[1, 1, 0]) - basis_ket(&s, &[0, 0, 1]);
        let p = TensorOperator::projector_sum(s.clone(), &[ker], false).unwrap();
        let q = TensorOperator::projector_sum(s, &[pt_ker], false).unwrap();
        (p, q)
    }

    /// Expected 8x8 matrix: diagonal (0, 1-k, -k, -k, -k, -k, 1-k, 0) and
    /// corner entries -k-1 at (0,7), (7,0).
    fn eq20_expected(k: f64) -> TensorOperator {
        let s = TensorSpace::new(&[2, 2, 2]).unwrap();
        let mut rows = vec![vec![0.0f64; 8]; 8];
        let diag = [0.0, 1.0 - k, -k, -k, -k, -k, 1.0 - k, 0.0];
        for (i, d) in diag.iter().enumerate() {
            rows[i][i] = *d;
        }
        rows[0][7] = -k - 1.0;
        rows[7][0] = -k - 1.0;
        let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
        TensorOperator::from_real(s, &refs).unwrap()
    }

    #[test]
    fn w1_witness_reproduces_the_literal_tripartite_matrix_exactly() {
        let (p, q) = eq20_parts();
        for k in [0.1, 0.25, 0.5] {
            let w = w1_witness(&q, &p, k, 2).unwrap();
            assert_eq!(w.operator().entries(), eq20_expected(k).entries());
            assert_eq!(w.kind(), WitnessKind::Tripartite);
        }
        assert!(w1_witness(&q, &p, 0.0, 2).is_err());
        assert!(w1_witness(&q, &p, -0.2, 2).is_err());
    }

    #[test]
    fn w1_witness_detects_both_tripartite_edge_states() {
        let (p, q) = eq20_parts();
        let k = 0.3;
        let w = w1_witness(&q, &p, k, 2).unwrap();
        let d1 = crate::states::delta_tri(1.0, 1.0, 1.0).unwrap();
        let d2 = crate::states::delta_tri(1.0, 2.0, 2.0).unwrap();
        assert!((evaluate(&w, &d1).unwrap() + k).abs() < 1e-12);
        assert!((evaluate(&w, &d2).unwrap() + k).abs() < 1e-12);
    }

    #[test]
    fn schmidt_witness_formulas() {
        // class 2 on the isotropic family: trace is (2 - 8 alpha)/3,
        // negative exactly above alpha = 1/4
        let w2 = schmidt_witness(3, 2).unwrap();
        for alpha in [-0.125, 0.0, 0.2, 0.25, 0.3, 0.5, 1.0] {
            let omega = isotropic(alpha).unwrap();
            let t = evaluate(&w2, &omega).unwrap();
            assert!((t - (2.0 - 8.0 * alpha) / 3.0).abs() < 1e-12);
        }

        // class 3 on a rank-3 pure state
        let w3 = schmidt_witness(3, 3).unwrap();
        let s = TensorSpace::bipartite(3, 3).unwrap();
        let phi = pure_bipartite(&[0.5, 0.5, 0.5f64.sqrt()], &s).unwrap();
        let expected = 1.0 - (0.5 + 0.5 + 0.5f64.sqrt()).powi(2) / 2.0;
        assert!((evaluate(&w3, &phi).unwrap() - expected).abs() < 1e-12);
        assert!((expected + 0.4571).abs() < 1e-4);

        // class 2 on a product state sits exactly on the boundary
        let product = pure_bipartite(&[1.0], &s).unwrap();
        assert!(evaluate(&w2, &product).unwrap().abs() < 1e-12);

        assert!(schmidt_witness(3, 1).is_err());
        assert!(schmidt_witness(3, 4).is_err());
    }

    #[test]
    fn schmidt_class3_never_detects_rank2_states() {
        let w3 = schmidt_witness(3, 3).unwrap();
        let s = TensorSpace::bipartite(3, 3).unwrap();
        for i in 0..=20 {
            let t = i as f64 / 20.0;
            let chi = pure_bipartite(&[t, (1.0 - t * t).sqrt()], &s).unwrap();
            assert!(evaluate(&w3, &chi).unwrap() >= -1e-12);
        }
    }

    #[test]
    fn evaluate_is_linear_in_the_state() {
        let w = schmidt_witness(3, 2).unwrap();
        let a = isotropic(0.7).unwrap();
        let b = max_entangled(3).unwrap();
        for lambda in [0.0, 0.3, 0.5, 0.9, 1.0] {
            let mix = crate::states::mix_pair(&a, &b, lambda).unwrap();
            let lhs = evaluate(&w, &mix).unwrap();
            let rhs = lambda * evaluate(&w, &a).unwrap()
                + (1.0 - lambda) * evaluate(&w, &b).unwrap();
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn validate_witness_on_a_decomposable_construction() {
        let rho = max_entangled(3).unwrap();
        let w = witness_from_npt_eigvec(&rho, 0).unwrap();
        let report = validate_witness(&w, &OptConfig::default());
        assert!(report.is_def3_witness);
        assert!(report.min_product_expectation >= -1e-9);
    }

    #[test]
    fn validate_witness_exposes_the_edge_offset_defect() {
        // with eps = 0.1 the product state |00> reads off the diagonal
        // entry -eps, so the operator fails the witness condition
        let (p, q) = eq17_parts();
        let w = edge_witness(&p, &q, 0.1, 0).unwrap();
        let report = validate_witness(&w, &OptConfig::default());
        assert!(!report.is_def3_witness);
        assert!((report.min_product_expectation + 0.1).abs() < 1e-9);
        let p00 = ProductVector::basis(w.operator().space(), &[0, 0]);
        let at00 =
            crate::productopt::product_expectation(w.operator(), &p00).unwrap();
        assert_eq!(at00, -0.1);
    }

    #[test]
    fn validate_witness_on_the_tripartite_form() {
        let (p, q) = eq20_parts();
        let k = 0.2;
        let w = w1_witness(&q, &p, k, 2).unwrap();
        let report = validate_witness(&w, &OptConfig::default());
        // |1,0,0> gives Q^T zero and I - P expectation 1, hence -k
        assert!(report.min_product_expectation <= -k + 1e-9);
        assert!(!report.is_def3_witness);
    }

    #[test]
    fn realignment_on_reference_states() {
        let uniform = isotropic(0.0).unwrap();
        assert!((realignment_diagnostic(&uniform).unwrap() - 1.0 / 3.0).abs() < 1e-10);

        let psi = max_entangled(3).unwrap();
        assert!((realignment_diagnostic(&psi).unwrap() - 3.0).abs() < 1e-10);

        let s = TensorSpace::bipartite(3, 3).unwrap();
        let product = pure_bipartite(&[1.0], &s).unwrap();
        assert!((realignment_diagnostic(&product).unwrap() - 1.0).abs() < 1e-10);

        let tri = crate::states::delta_tri(1.0, 1.0, 1.0).unwrap();
        assert!(realignment_diagnostic(&tri).is_err());
    }

    #[test]
    fn detection_sign_is_scale_invariant() {
        let rho = max_entangled(3).unwrap();
        let w = witness_from_npt_eigvec(&rho, 0).unwrap();
        let t = evaluate(&w, &rho).unwrap();
        for c in [0.1, 2.0, 100.0] {
            let scaled = w.operator().scale(c);
            let ts = scaled.trace_product(rho.op()).unwrap();
            assert_eq!(ts.signum(), t.signum());
        }
    }
}
