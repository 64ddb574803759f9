//! Constructors for the state families used throughout the crate, with
//! parameter validation matching their admissible ranges.
//!
//! Labels carry provenance; families that are PPT yet entangled for the
//! given parameters include the marker `ppt-entangled`, which the
//! decomposability advice in [`crate::common`] reads back.

use crate::error::{Error, Result};
use crate::operator::{DensityState, TensorOperator, TRACE_ATOL};
use crate::space::TensorSpace;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Marker substring in labels of states that are PPT entangled by provenance.
pub const PPT_ENTANGLED_MARKER: &str = "ppt-entangled";

fn real_matrix(total: usize) -> DMatrix<Complex64> {
    DMatrix::from_element(total, total, Complex64::new(0.0, 0.0))
}

/// Maximally entangled state (1/sqrt(d)) sum_i |ii> on a d x d space. The
/// projector entries are written as exactly 1/d, so operators derived from
/// it stay clean at the |ii> positions.
pub fn max_entangled(d: usize) -> Result<DensityState> {
    if d < 2 {
        return Err(Error::ParamOutOfRange(format!(
            "max_entangled needs d >= 2, got {d}"
        )));
    }
    let space = TensorSpace::bipartite(d, d)?;
    let mut m = real_matrix(space.total());
    for i in 0..d {
        for j in 0..d {
            m[(space.flat_index(&[i, i]), space.flat_index(&[j, j]))] =
                Complex64::new(1.0 / d as f64, 0.0);
        }
    }
    let op = TensorOperator::new(space, m)?;
    DensityState::new(op, format!("max-entangled(d={d})"))
}

/// Pure bipartite state sum_i c_i |ii> on the diagonal Schmidt basis.
/// Coefficients must be normalized: sum c_i^2 = 1 within 1e-10.
pub fn pure_bipartite(coeffs: &[f64], space: &TensorSpace) -> Result<DensityState> {
    if space.factors() != 2 {
        return Err(Error::NotBipartite(space.factors()));
    }
    let dmin = space.dims()[0].min(space.dims()[1]);
    if coeffs.is_empty() || coeffs.len() > dmin {
        return Err(Error::ParamOutOfRange(format!(
            "need between 1 and {dmin} coefficients, got {}",
            coeffs.len()
        )));
    }
    let sumsq: f64 = coeffs.iter().map(|c| c * c).sum();
    if (sumsq - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized(sumsq));
    }
    let mut psi = DVector::from_element(space.total(), Complex64::new(0.0, 0.0));
    for (i, c) in coeffs.iter().enumerate() {
        psi[space.flat_index(&[i, i])] = Complex64::new(*c, 0.0);
    }
    let label = format!(
        "pure-bipartite(coeffs=[{}])",
        coeffs
            .iter()
            .map(|c| format!("{c}"))
            .collect::<Vec<_>>()
            .join(", ")
    );
    DensityState::pure(space.clone(), &psi, label)
}

/// The literal two-level operator with weight `beta` (not `beta^2`) on
/// |00><00|. Its trace is beta + 1 - beta^2, so it is not a density state;
/// it exists for documentation and comparison only. All computations use
/// [`pure_bipartite`] with coefficients (beta, sqrt(1 - beta^2)) instead.
pub fn beta_literal_pair(beta: f64, space: &TensorSpace) -> Result<TensorOperator> {
    if space.factors() != 2 || space.dims()[0] < 2 || space.dims()[1] < 2 {
        return Err(Error::NotBipartite(space.factors()));
    }
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::ParamOutOfRange(format!(
            "beta must lie in [0, 1], got {beta}"
        )));
    }
    let cross = beta * (1.0 - beta * beta).sqrt();
    let i00 = space.flat_index(&[0, 0]);
    let i11 = space.flat_index(&[1, 1]);
    let mut m = real_matrix(space.total());
    m[(i00, i00)] = Complex64::new(beta, 0.0);
    m[(i00, i11)] = Complex64::new(cross, 0.0);
    m[(i11, i00)] = Complex64::new(cross, 0.0);
    m[(i11, i11)] = Complex64::new(1.0 - beta * beta, 0.0);
    TensorOperator::new(space.clone(), m)
}

/// Family of edge states on C^2 x C^4 with parameters 0 < b < 1, |s| < b:
/// an 8x8 matrix with prefactor 1/(2(2 + b + 1/b)).
pub fn tau(b: f64, s: f64) -> Result<DensityState> {
    if !(0.0 < b && b < 1.0) {
        return Err(Error::ParamOutOfRange(format!(
            "tau needs 0 < b < 1, got b = {b}"
        )));
    }
    if s.abs() >= b {
        return Err(Error::ParamOutOfRange(format!(
            "tau needs |s| < b, got s = {s}, b = {b}"
        )));
    }
    let space = TensorSpace::bipartite(2, 4)?;
    let binv = 1.0 / b;
    let pref = 1.0 / (2.0 * (2.0 + b + binv));
    let diag = [b, 1.0, binv, 1.0, 1.0, binv, 1.0, b];
    let mut m = real_matrix(8);
    for (i, d) in diag.iter().enumerate() {
        m[(i, i)] = Complex64::new(d * pref, 0.0);
    }
    for (i, j) in [(0, 5), (1, 6), (2, 7)] {
        m[(i, j)] = Complex64::new(-pref, 0.0);
        m[(j, i)] = Complex64::new(-pref, 0.0);
    }
    m[(3, 4)] = Complex64::new(s * pref, 0.0);
    m[(4, 3)] = Complex64::new(s * pref, 0.0);
    let op = TensorOperator::new(space, m)?;
    DensityState::new(op, format!("tau(b={b},s={s}) [edge; ppt-entangled]"))
}

/// Tripartite edge-state family on C^2 x C^2 x C^2 with a, b, c > 0,
/// normalized by n = 2 + a + b + c + 1/a + 1/b + 1/c. Basis order
/// |000>, |001>, .., |111>.
pub fn delta_tri(a: f64, b: f64, c: f64) -> Result<DensityState> {
    if a <= 0.0 || b <= 0.0 || c <= 0.0 {
        return Err(Error::ParamOutOfRange(format!(
            "delta_tri needs positive parameters, got ({a}, {b}, {c})"
        )));
    }
    let space = TensorSpace::new(&[2, 2, 2])?;
    let n = 2.0 + a + b + c + 1.0 / a + 1.0 / b + 1.0 / c;
    let diag = [1.0, a, b, c, 1.0 / c, 1.0 / b, 1.0 / a, 1.0];
    let mut m = real_matrix(8);
    for (i, d) in diag.iter().enumerate() {
        m[(i, i)] = Complex64::new(d / n, 0.0);
    }
    m[(0, 7)] = Complex64::new(1.0 / n, 0.0);
    m[(7, 0)] = Complex64::new(1.0 / n, 0.0);
    let op = TensorOperator::new(space, m)?;
    DensityState::new(
        op,
        format!("delta-tri(a={a},b={b},c={c}) [edge; ppt-entangled]"),
    )
}

/// Two-qutrit family (2/7)|psi+><psi+| + (p/7) rho_plus + ((5-p)/7) rho_minus
/// where rho_plus averages |01>, |12>, |20> and rho_minus averages |10>,
/// |21>, |02>. Both weights are nonnegative for p in [0, 5]. The same
/// formula serves the PPT branch (3 < p <= 4, marked ppt-entangled) and the
/// NPT branch (4 < p <= 5).
pub fn horodecki_alpha(alpha: f64) -> Result<DensityState> {
    if !(0.0..=5.0).contains(&alpha) {
        return Err(Error::ParamOutOfRange(format!(
            "horodecki_alpha needs 0 <= alpha <= 5, got {alpha}"
        )));
    }
    let space = TensorSpace::bipartite(3, 3)?;
    let mut m = real_matrix(9);
    // (2/7) |psi+><psi+| with |psi+> = (1/sqrt 3) sum |ii>
    let diag_idx: Vec<usize> = (0..3).map(|i| space.flat_index(&[i, i])).collect();
    for &i in &diag_idx {
        for &j in &diag_idx {
            m[(i, j)] += Complex64::new(2.0 / 21.0, 0.0);
        }
    }
    for (i, j) in [(0, 1), (1, 2), (2, 0)] {
        let f = space.flat_index(&[i, j]);
        m[(f, f)] += Complex64::new(alpha / 21.0, 0.0);
    }
    for (i, j) in [(1, 0), (2, 1), (0, 2)] {
        let f = space.flat_index(&[i, j]);
        m[(f, f)] += Complex64::new((5.0 - alpha) / 21.0, 0.0);
    }
    let op = TensorOperator::new(space, m)?;
    let marker = if alpha > 3.0 && alpha <= 4.0 {
        " [ppt-entangled]"
    } else if alpha > 4.0 {
        " [npt]"
    } else {
        ""
    };
    DensityState::new(op, format!("horodecki(alpha={alpha}){marker}"))
}

/// Two-qutrit isotropic state alpha P + ((1 - alpha)/9) I with P the
/// projector onto the maximally entangled state; PSD for alpha in [-1/8, 1].
pub fn isotropic(alpha: f64) -> Result<DensityState> {
    if !(-0.125..=1.0).contains(&alpha) {
        return Err(Error::ParamOutOfRange(format!(
            "isotropic needs -1/8 <= alpha <= 1, got {alpha}"
        )));
    }
    let p = max_entangled(3)?;
    let id = TensorOperator::identity(p.space().clone());
    let op = p.op().scale(alpha).add(&id.scale((1.0 - alpha) / 9.0))?;
    DensityState::new(op, format!("isotropic(alpha={alpha})"))
}

/// Convex mixture sum_i w_i rho_i; weights nonnegative and summing to 1
/// within 1e-12.
pub fn convex_mix(states: &[DensityState], weights: &[f64]) -> Result<DensityState> {
    if states.is_empty() || states.len() != weights.len() {
        return Err(Error::BadWeights(weights.iter().sum()));
    }
    let sum: f64 = weights.iter().sum();
    if weights.iter().any(|w| *w < 0.0) || (sum - 1.0).abs() > TRACE_ATOL {
        return Err(Error::BadWeights(sum));
    }
    let space = states[0].space().clone();
    let mut acc = TensorOperator::zero(space);
    for (state, w) in states.iter().zip(weights) {
        acc = acc.add(&state.op().scale(*w))?;
    }
    let label = format!(
        "mix({})",
        states
            .iter()
            .zip(weights)
            .map(|(s, w)| format!("{w}*[{}]", s.label()))
            .collect::<Vec<_>>()
            .join(" + ")
    );
    DensityState::new(acc, label)
}

/// Two-state mixture lambda rho1 + (1 - lambda) rho2.
pub fn mix_pair(rho1: &DensityState, rho2: &DensityState, lambda: f64) -> Result<DensityState> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::ParamOutOfRange(format!(
            "mixing weight must lie in [0, 1], got {lambda}"
        )));
    }
    convex_mix(
        &[rho1.clone(), rho2.clone()],
        &[lambda, 1.0 - lambda],
    )
}

/// State-family dispatch used by the CLI.
#[derive(Debug, Clone)]
pub enum StateFamily {
    MaxEntangled { d: usize },
    PureBipartite { coeffs: Vec<f64>, d: usize },
    Tau { b: f64, s: f64 },
    DeltaTri { a: f64, b: f64, c: f64 },
    Horodecki { alpha: f64 },
    Isotropic { alpha: f64 },
}

impl StateFamily {
    pub fn build(&self) -> Result<DensityState> {
        match self {
            StateFamily::MaxEntangled { d } => max_entangled(*d),
            StateFamily::PureBipartite { coeffs, d } => {
                pure_bipartite(coeffs, &TensorSpace::bipartite(*d, *d)?)
            }
            StateFamily::Tau { b, s } => tau(*b, *s),
            StateFamily::DeltaTri { a, b, c } => delta_tri(*a, *b, *c),
            StateFamily::Horodecki { alpha } => horodecki_alpha(*alpha),
            StateFamily::Isotropic { alpha } => isotropic(*alpha),
        }
    }
}
