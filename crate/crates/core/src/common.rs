//! Common-witness machinery: shared negative PT eigenvectors, kernel
//! intersection edge witnesses (bipartite and tripartite), common
//! Schmidt-class witnesses, lambda-segment scans, and the decomposable
//! versus non-decomposable classification of common witnesses.
//!
//! Whenever one of these searches returns a witness with negative traces on
//! both inputs, linearity of the trace makes the witness negative on every
//! convex mixture of them; the scans verify that numerically.

use crate::error::{Error, Result};
use crate::operator::{
    schmidt_rank, subspace_intersection, DensityState, TensorOperator, INTERSECTION_TOL,
    PSD_ATOL, ZERO_EIG_RTOL,
};
use crate::productopt::{min_product_expectation, min_ratio_product, OptConfig, DEFAULT_DEN_FLOOR};
use crate::states::{mix_pair, PPT_ENTANGLED_MARKER};
use crate::witness::{
    edge_witness, evaluate, pt_projector_witness, schmidt_witness, validate_witness, w1_witness,
    ValidationReport, Witness,
};
use serde::Serialize;

/// A computed offset at or below this value cannot produce strictly negative
/// traces, so the construction is reported as degenerate instead.
pub const DEGENERATE_OFFSET: f64 = 1e-9;
/// Strict-negativity tolerance on evidence traces.
pub const EVIDENCE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommonMethod {
    Theorem1,
    Theorem2,
    Theorem3,
    Schmidt,
    NoneFound,
}

/// Result of a common-witness search. `witness` is present only when the
/// evidence traces on all inputs are strictly negative; a construction whose
/// computed offset degenerates to zero keeps `witness` empty and sets
/// `offset_degenerate`.
#[derive(Debug, Clone)]
pub struct CommonWitnessResult {
    pub witness: Option<Witness>,
    pub method: CommonMethod,
    pub evidence: Vec<f64>,
    pub intersection_dim: usize,
    pub pt_intersection_dim: Option<usize>,
    pub offset: Option<f64>,
    pub offset_degenerate: bool,
    pub validation: Option<ValidationReport>,
}

impl CommonWitnessResult {
    fn none_found() -> Self {
        Self {
            witness: None,
            method: CommonMethod::NoneFound,
            evidence: Vec::new(),
            intersection_dim: 0,
            pt_intersection_dim: None,
            offset: None,
            offset_degenerate: false,
            validation: None,
        }
    }
}

/// How the offset (eps or k) of a kernel-intersection witness is chosen:
/// computed from the product-state optimization, or supplied by the caller
/// to reproduce the literal matrices.
#[derive(Debug, Clone, Copy)]
pub enum OffsetMode {
    Computed,
    Fixed(f64),
}

/// Shared negative PT eigenvector search. Intersects the negative
/// eigenspaces of both partial transposes; a unit vector in the
/// intersection turns into the witness (|eta><eta|)^T with strictly
/// negative traces on both states. The condition is sufficient, not
/// necessary, so an empty intersection reports none-found.
pub fn common_npt_witness(
    rho1: &DensityState,
    rho2: &DensityState,
    subsystem: usize,
    tol: f64,
) -> Result<CommonWitnessResult> {
    rho1.space().check_same(rho2.space())?;
    let n1 = rho1
        .op()
        .partial_transpose(subsystem)?
        .negative_eigenspace(tol);
    let n2 = rho2
        .op()
        .partial_transpose(subsystem)?
        .negative_eigenspace(tol);
    let cap = subspace_intersection(&n1, &n2, INTERSECTION_TOL)?;
    if cap.is_empty() {
        return Ok(CommonWitnessResult::none_found());
    }
    let eta = cap.basis()[0].clone();
    let w = pt_projector_witness(rho1.space().clone(), &eta, subsystem)?;
    let evidence = vec![evaluate(&w, rho1)?, evaluate(&w, rho2)?];
    debug_assert!(evidence.iter().all(|t| *t < -EVIDENCE_TOL));
    Ok(CommonWitnessResult {
        witness: Some(w),
        method: CommonMethod::Theorem1,
        evidence,
        intersection_dim: cap.dim(),
        pt_intersection_dim: None,
        offset: None,
        offset_degenerate: false,
        validation: None,
    })
}

/// Kernel-intersection witness for a pair of edge states. P projects onto
/// ker(d1) ∩ ker(d2) and Q onto ker(d1^T) ∩ ker(d2^T); a bipartite space
/// gets the form P + Q^T - eps*I, a three-factor space the form
/// Q^T - k(I - P), with the offset chosen per `mode`. `paper_scale` doubles
/// the intersection projectors, matching the convention in which kernel
/// vectors of the reproduced families are sums or differences of two basis
/// kets and enter projectors unnormalized.
pub fn common_edge_witness(
    d1: &DensityState,
    d2: &DensityState,
    subsystem: usize,
    mode: OffsetMode,
    paper_scale: bool,
    cfg: &OptConfig,
) -> Result<CommonWitnessResult> {
    d1.space().check_same(d2.space())?;
    let factors = d1.space().factors();
    if factors != 2 && factors != 3 {
        return Err(Error::ParamOutOfRange(format!(
            "kernel-intersection witnesses cover 2 or 3 factors, got {factors}"
        )));
    }
    let method = if factors == 2 {
        CommonMethod::Theorem2
    } else {
        CommonMethod::Theorem3
    };

    let ker = subspace_intersection(
        &d1.kernel(ZERO_EIG_RTOL),
        &d2.kernel(ZERO_EIG_RTOL),
        INTERSECTION_TOL,
    )?;
    let pt1 = d1.op().partial_transpose(subsystem)?;
    let pt2 = d2.op().partial_transpose(subsystem)?;
    let pt_ker = subspace_intersection(
        &pt1.kernel_basis(ZERO_EIG_RTOL),
        &pt2.kernel_basis(ZERO_EIG_RTOL),
        INTERSECTION_TOL,
    )?;
    if ker.is_empty() && pt_ker.is_empty() {
        return Ok(CommonWitnessResult::none_found());
    }

    let scale = if paper_scale { 2.0 } else { 1.0 };
    let p = ker.projector().scale(scale);
    let q = pt_ker.projector().scale(scale);

    let offset = match mode {
        OffsetMode::Fixed(v) => v,
        OffsetMode::Computed => {
            if factors == 2 {
                let base = p.add(&q.partial_transpose(subsystem)?)?;
                min_product_expectation(&base, cfg).value.max(0.0)
            } else {
                let num = q.partial_transpose(subsystem)?;
                let den = TensorOperator::identity(d1.space().clone()).sub(&p)?;
                match min_ratio_product(&num, &den, DEFAULT_DEN_FLOOR, cfg) {
                    Ok(r) => r.value.max(0.0),
                    Err(Error::RatioInfeasible(_)) => 0.0,
                    Err(e) => return Err(e),
                }
            }
        }
    };

    if offset <= DEGENERATE_OFFSET {
        return Ok(CommonWitnessResult {
            witness: None,
            method,
            evidence: Vec::new(),
            intersection_dim: ker.dim(),
            pt_intersection_dim: Some(pt_ker.dim()),
            offset: Some(offset),
            offset_degenerate: true,
            validation: None,
        });
    }

    let w = if factors == 2 {
        edge_witness(&p, &q, offset, subsystem)?
    } else {
        w1_witness(&q, &p, offset, subsystem)?
    };
    let evidence = vec![evaluate(&w, d1)?, evaluate(&w, d2)?];
    let validation = Some(validate_witness(&w, cfg));
    if evidence.iter().any(|t| *t >= -EVIDENCE_TOL) {
        return Ok(CommonWitnessResult {
            witness: None,
            method,
            evidence,
            intersection_dim: ker.dim(),
            pt_intersection_dim: Some(pt_ker.dim()),
            offset: Some(offset),
            offset_degenerate: true,
            validation,
        });
    }
    Ok(CommonWitnessResult {
        witness: Some(w),
        method,
        evidence,
        intersection_dim: ker.dim(),
        pt_intersection_dim: Some(pt_ker.dim()),
        offset: Some(offset),
        offset_degenerate: false,
        validation,
    })
}

/// A state entering the common Schmidt-witness search, with an optional
/// caller-supplied Schmidt class for mixed inputs (the Schmidt number of a
/// mixed state is not computed here).
pub type SchmidtInput = (DensityState, Option<usize>);

/// Common Schmidt-class witness: the candidate class is the minimum over
/// the inputs (pure states contribute their Schmidt rank, mixed states the
/// supplied class), and the witness I - (m/(class-1))P is returned exactly
/// when its trace is strictly negative on every input. A found witness
/// certifies that every convex combination of the inputs keeps Schmidt
/// number at least `class`.
pub fn common_schmidt_witness(states: &[SchmidtInput], m: usize) -> Result<CommonWitnessResult> {
    if states.is_empty() {
        return Err(Error::ParamOutOfRange(
            "need at least one state".to_string(),
        ));
    }
    let space = crate::space::TensorSpace::bipartite(m, m)?;
    let mut class = usize::MAX;
    for (state, supplied) in states {
        state.space().check_same(&space)?;
        let k = match supplied {
            Some(k) => *k,
            None => {
                if (state.purity() - 1.0).abs() > 1e-10 {
                    return Err(Error::MixedStateNeedsClass(state.label().to_string()));
                }
                let spectrum = state.op().eigh();
                let top = spectrum
                    .eigenvectors
                    .last()
                    .expect("nonempty spectrum")
                    .clone();
                schmidt_rank(&top, state.space())?
            }
        };
        class = class.min(k);
    }
    if class < 2 {
        return Err(Error::BadSchmidtClass { class, m });
    }
    let w = schmidt_witness(m, class)?;
    let mut evidence = Vec::with_capacity(states.len());
    for (state, _) in states {
        evidence.push(evaluate(&w, state)?);
    }
    let all_negative = evidence.iter().all(|t| *t < -EVIDENCE_TOL);
    Ok(CommonWitnessResult {
        witness: all_negative.then_some(w),
        method: if all_negative {
            CommonMethod::Schmidt
        } else {
            CommonMethod::NoneFound
        },
        evidence,
        intersection_dim: 0,
        pt_intersection_dim: None,
        offset: None,
        offset_degenerate: false,
        validation: None,
    })
}

/// NPT/PPT tag of a scanned mixture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum PtTag {
    Npt,
    Ppt,
}

impl std::fmt::Display for PtTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PtTag::Npt => write!(f, "NPT"),
            PtTag::Ppt => write!(f, "PPT"),
        }
    }
}

/// Per-lambda classification of the segment between two states.
#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub lambda_grid: Vec<f64>,
    pub classification: Vec<PtTag>,
    pub min_pt_eigenvalue: Vec<f64>,
    pub detected_by: Option<Vec<f64>>,
    pub params: Vec<(String, f64)>,
}

impl ScanReport {
    /// CSV with one row per grid point: lambda, min_pt_eig, tag, witness trace.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("lambda,min_pt_eig,tag,witness_trace\n");
        for i in 0..self.lambda_grid.len() {
            let trace = self
                .detected_by
                .as_ref()
                .map(|t| t[i].to_string())
                .unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{}\n",
                self.lambda_grid[i], self.min_pt_eigenvalue[i], self.classification[i], trace
            ));
        }
        out
    }

    /// Bracketing interval of the first tag change, if any. Table semantics
    /// are interval-based, so no interpolated root is produced.
    pub fn first_boundary(&self) -> Option<(f64, f64)> {
        self.classification
            .windows(2)
            .position(|w| w[0] != w[1])
            .map(|i| (self.lambda_grid[i], self.lambda_grid[i + 1]))
    }
}

/// Scans lambda*rho1 + (1-lambda)*rho2 on a uniform grid, recording the
/// minimum PT eigenvalue, the NPT/PPT tag, and optionally a witness trace
/// (linear in lambda by construction).
pub fn lambda_scan(
    rho1: &DensityState,
    rho2: &DensityState,
    grid_points: usize,
    subsystem: usize,
    witness: Option<&Witness>,
) -> Result<ScanReport> {
    rho1.space().check_same(rho2.space())?;
    rho1.space().check_subsystem(subsystem)?;
    if grid_points < 2 {
        return Err(Error::ParamOutOfRange(format!(
            "lambda grid needs at least 2 points, got {grid_points}"
        )));
    }
    use rayon::prelude::*;
    type Row = (f64, f64, PtTag, Option<f64>);
    let rows: Result<Vec<Row>> = (0..grid_points)
        .into_par_iter()
        .map(|i| {
            let lambda = i as f64 / (grid_points - 1) as f64;
            let mix = mix_pair(rho1, rho2, lambda)?;
            let min_eig = mix.pt_min_eigenvalue(subsystem)?;
            let tag = if min_eig < -PSD_ATOL {
                PtTag::Npt
            } else {
                PtTag::Ppt
            };
            let trace = witness.map(|w| evaluate(w, &mix)).transpose()?;
            Ok((lambda, min_eig, tag, trace))
        })
        .collect();
    let rows = rows?;
    let detected_by = rows
        .iter()
        .map(|r| r.3)
        .collect::<Option<Vec<f64>>>();
    Ok(ScanReport {
        lambda_grid: rows.iter().map(|r| r.0).collect(),
        classification: rows.iter().map(|r| r.2).collect(),
        min_pt_eigenvalue: rows.iter().map(|r| r.1).collect(),
        detected_by,
        params: Vec::new(),
    })
}

/// Whether a common witness for the pair can be decomposable. Both inputs
/// NPT means a decomposable operator suffices; an input that is PPT yet
/// labeled entangled forces a non-decomposable common witness, because
/// decomposable operators cannot detect any PPT entangled state. A pair
/// that is not NPT-detected and not claimed entangled keeps the
/// decomposable-sufficient rule with a caveat flag.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "advice")]
pub enum DecomposabilityAdvice {
    DecomposableSufficient { both_npt: bool },
    NondecomposableRequired { ppt_entangled_labels: Vec<String> },
}

pub fn decomposability_advice(
    rho1: &DensityState,
    rho2: &DensityState,
) -> Result<DecomposabilityAdvice> {
    rho1.space().check_same(rho2.space())?;
    if rho1.space().factors() != 2 {
        return Err(Error::NotBipartite(rho1.space().factors()));
    }
    let subsystem = 1;
    let mut ppt_entangled_labels = Vec::new();
    let mut both_npt = true;
    for state in [rho1, rho2] {
        let ppt = state.is_ppt(subsystem)?;
        if ppt {
            both_npt = false;
            if state.label().contains(PPT_ENTANGLED_MARKER) {
                ppt_entangled_labels.push(state.label().to_string());
            }
        }
    }
    if ppt_entangled_labels.is_empty() {
        Ok(DecomposabilityAdvice::DecomposableSufficient { both_npt })
    } else {
        Ok(DecomposabilityAdvice::NondecomposableRequired {
            ppt_entangled_labels,
        })
    }
}
