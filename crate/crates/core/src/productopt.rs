//! Optimization over pure product vectors: multi-start alternating
//! eigenvector descent for expectation minima, ratio minima with a
//! denominator floor, and a brute-force grid oracle for cross-validation.
//!
//! The minimum of a linear functional over separable states is attained at
//! an extreme point of that convex set, i.e. at a pure product state, so
//! optimizing over product vectors is enough. Ratio objectives are
//! linear-fractional in the state, and the same extreme-point argument
//! applies on the floor-feasible set.

use crate::error::{Error, Result};
use crate::operator::TensorOperator;
use crate::space::{product_ket, TensorSpace};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

/// Sweep-to-sweep objective change below which the descent stops.
pub const DESCENT_TOL: f64 = 1e-12;
/// Cap on alternating sweeps per restart.
pub const MAX_SWEEPS: usize = 500;
/// Default denominator floor for ratio minimization.
pub const DEFAULT_DEN_FLOOR: f64 = 1e-8;
/// Largest total dimension the grid oracle will enumerate.
pub const GRID_ORACLE_LIMIT: usize = 16;

/// Restart count and RNG seed for the multi-start optimizers.
#[derive(Debug, Clone, Copy)]
pub struct OptConfig {
    pub restarts: usize,
    pub seed: u64,
}

impl Default for OptConfig {
    fn default() -> Self {
        Self {
            restarts: 64,
            seed: 42,
        }
    }
}

impl OptConfig {
    pub fn new(restarts: usize, seed: u64) -> Self {
        Self { restarts, seed }
    }
}

/// List of normalized local vectors, one per tensor factor, gauge-fixed so
/// the first nonzero component of each local vector is real nonnegative.
#[derive(Debug, Clone)]
pub struct ProductVector {
    locals: Vec<DVector<Complex64>>,
}

impl ProductVector {
    pub fn new(locals: Vec<DVector<Complex64>>, space: &TensorSpace) -> Result<Self> {
        if locals.len() != space.factors()
            || locals
                .iter()
                .zip(space.dims())
                .any(|(l, d)| l.len() != *d)
        {
            return Err(Error::SpaceMismatch(
                space.dims().to_vec(),
                locals.iter().map(|l| l.len()).collect(),
            ));
        }
        for l in &locals {
            if (l.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::NotNormalized(l.norm_squared()));
            }
        }
        Ok(Self {
            locals: locals.into_iter().map(|l| gauge_fix(&l)).collect(),
        })
    }

    /// Haar-random product vector: per-factor complex Gaussian, normalized.
    pub fn random(space: &TensorSpace, rng: &mut ChaCha8Rng) -> Self {
        let locals = space
            .dims()
            .iter()
            .map(|&d| {
                let v = DVector::from_fn(d, |_, _| {
                    let re: f64 = StandardNormal.sample(rng);
                    let im: f64 = StandardNormal.sample(rng);
                    Complex64::new(re, im)
                });
                gauge_fix(&v.normalize())
            })
            .collect();
        Self { locals }
    }

    /// Product of computational-basis vectors, e.g. |0> x |0>.
    pub fn basis(space: &TensorSpace, multi: &[usize]) -> Self {
        let locals = space
            .dims()
            .iter()
            .zip(multi)
            .map(|(&d, &i)| {
                let mut v = DVector::from_element(d, Complex64::new(0.0, 0.0));
                v[i] = Complex64::new(1.0, 0.0);
                v
            })
            .collect();
        Self { locals }
    }

    pub fn locals(&self) -> &[DVector<Complex64>] {
        &self.locals
    }

    pub fn assemble(&self) -> DVector<Complex64> {
        product_ket(&self.locals.iter().collect::<Vec<_>>())
    }

    /// Serialization form: per factor, a list of [re, im] pairs.
    pub fn to_component_lists(&self) -> Vec<Vec<[f64; 2]>> {
        self.locals
            .iter()
            .map(|l| l.iter().map(|z| [z.re, z.im]).collect())
            .collect()
    }
}

fn gauge_fix(v: &DVector<Complex64>) -> DVector<Complex64> {
    let first = v.iter().find(|z| z.norm() > 1e-14);
    match first {
        Some(z) => {
            let phase = z.conj() / z.norm();
            v * phase
        }
        None => v.clone(),
    }
}

/// Outcome of a multi-start minimization. When `attained` is false the value
/// is an infimum estimate (from the bisection route) that no feasible point
/// reached, and `argmin` holds the best feasible point instead.
#[derive(Debug, Clone)]
pub struct OptResult {
    pub value: f64,
    pub argmin: ProductVector,
    pub restarts: usize,
    pub converged_fraction: f64,
    pub attained: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct OptResultJson {
    pub value: f64,
    pub argmin: Vec<Vec<[f64; 2]>>,
    pub restarts: usize,
    pub converged_fraction: f64,
    pub attained: bool,
}

impl OptResult {
    pub fn to_json_value(&self) -> OptResultJson {
        OptResultJson {
            value: self.value,
            argmin: self.argmin.to_component_lists(),
            restarts: self.restarts,
            converged_fraction: self.converged_fraction,
            attained: self.attained,
        }
    }
}

/// Quadratic form <p|op|p> at a product vector.
pub fn product_expectation(op: &TensorOperator, p: &ProductVector) -> Result<f64> {
    let dims: Vec<usize> = p.locals.iter().map(|l| l.len()).collect();
    if dims != op.space().dims() {
        return Err(Error::SpaceMismatch(op.space().dims().to_vec(), dims));
    }
    Ok(op.expectation(&p.assemble()))
}

/// Effective single-factor operator: freeze all locals except factor `k`,
/// contract, and return the d_k x d_k Hermitian matrix M with
/// <e|M|e> = <..e..|op|..e..>.
fn effective_local(
    op: &TensorOperator,
    locals: &[DVector<Complex64>],
    k: usize,
) -> DMatrix<Complex64> {
    let space = op.space();
    let total = space.total();
    let dk = space.dims()[k];
    let mut u = DMatrix::from_element(total, dk, Complex64::new(0.0, 0.0));
    for flat in 0..total {
        let multi = space.multi_index(flat);
        let mut amp = Complex64::new(1.0, 0.0);
        for (i, l) in locals.iter().enumerate() {
            if i != k {
                amp *= l[multi[i]];
            }
        }
        u[(flat, multi[k])] = amp;
    }
    let wu = op.entries() * &u;
    u.adjoint() * wu
}

fn lowest_eigvec(m: &DMatrix<Complex64>) -> (f64, DVector<Complex64>) {
    let decomp = SymmetricEigen::new(m.clone());
    let mut best = 0usize;
    for i in 1..decomp.eigenvalues.len() {
        if decomp.eigenvalues[i] < decomp.eigenvalues[best] {
            best = i;
        }
    }
    (
        decomp.eigenvalues[best],
        decomp.eigenvectors.column(best).normalize(),
    )
}

/// One alternating-descent run from a given start. With all factors but one
/// frozen the objective is a local Hermitian quadratic form minimized by its
/// lowest eigenvector, so every update is exactly solvable and the sweep
/// objectives are non-increasing.
pub struct DescentRun {
    pub argmin: ProductVector,
    pub value: f64,
    pub converged: bool,
    /// Objective after each full sweep.
    pub objectives: Vec<f64>,
}

pub fn alternating_descent(
    op: &TensorOperator,
    start: ProductVector,
    max_sweeps: usize,
    tol: f64,
) -> DescentRun {
    let factors = op.space().factors();
    let mut locals: Vec<DVector<Complex64>> = start.locals.clone();
    let mut objectives = Vec::new();
    let mut prev = f64::INFINITY;
    let mut converged = false;
    for _ in 0..max_sweeps {
        let mut last = prev;
        for k in 0..factors {
            let m = effective_local(op, &locals, k);
            let (lambda, vec) = lowest_eigvec(&m);
            locals[k] = vec;
            last = lambda;
        }
        objectives.push(last);
        if (prev - last).abs() < tol {
            converged = true;
            break;
        }
        prev = last;
    }
    let argmin = ProductVector {
        locals: locals.iter().map(gauge_fix).collect(),
    };
    let value = op.expectation(&argmin.assemble());
    DescentRun {
        argmin,
        value,
        converged,
        objectives,
    }
}

fn restart_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Best product-state expectation over `cfg.restarts` independent descents.
/// Restart RNG streams are derived from (seed, index), so parallel and
/// serial schedules agree bit for bit.
pub fn min_product_expectation(op: &TensorOperator, cfg: &OptConfig) -> OptResult {
    let restarts = cfg.restarts.max(1);
    let runs: Vec<DescentRun> = (0..restarts)
        .into_par_iter()
        .map(|idx| {
            let mut rng = restart_rng(cfg.seed, idx);
            let start = ProductVector::random(op.space(), &mut rng);
            alternating_descent(op, start, MAX_SWEEPS, DESCENT_TOL)
        })
        .collect();
    let converged = runs.iter().filter(|r| r.converged).count();
    let best = runs
        .into_iter()
        .reduce(|a, b| if b.value < a.value { b } else { a })
        .expect("at least one restart");
    OptResult {
        value: best.value,
        argmin: best.argmin,
        restarts,
        converged_fraction: converged as f64 / restarts as f64,
        attained: true,
    }
}

fn ratio_at(
    num: &TensorOperator,
    den: &TensorOperator,
    p: &ProductVector,
    floor: f64,
) -> Option<f64> {
    let v = p.assemble();
    let d = den.expectation(&v);
    if d < floor {
        return None;
    }
    Some(num.expectation(&v) / d)
}

/// One alternating step on the ratio objective for factor `k`; keeps the
/// previous local unless the candidate is feasible and strictly better.
fn ratio_update(
    num: &TensorOperator,
    den: &TensorOperator,
    locals: &mut [DVector<Complex64>],
    k: usize,
    floor: f64,
    current: f64,
) -> f64 {
    let a = effective_local(num, locals, k);
    let b = effective_local(den, locals, k);
    // clamp the denominator's local spectrum away from zero and solve the
    // generalized Rayleigh problem through its square-root transform
    let decomp = SymmetricEigen::new(b.clone());
    let scale = decomp
        .eigenvalues
        .iter()
        .fold(0.0f64, |m, l| m.max(l.abs()))
        .max(1.0);
    let clamp = 1e-12 * scale;
    let d = b.nrows();
    let mut inv_sqrt = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
    for i in 0..d {
        let l = decomp.eigenvalues[i].max(clamp);
        let col = decomp.eigenvectors.column(i);
        let w = 1.0 / l.sqrt();
        for r in 0..d {
            for c in 0..d {
                inv_sqrt[(r, c)] += Complex64::new(w, 0.0) * col[r] * col[c].conj();
            }
        }
    }
    let m = &inv_sqrt * a * &inv_sqrt;
    let m = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let (_, w) = lowest_eigvec(&m);
    let candidate = (&inv_sqrt * w).normalize();
    let old = locals[k].clone();
    locals[k] = candidate;
    let p = ProductVector {
        locals: locals.to_vec(),
    };
    match ratio_at(num, den, &p, floor) {
        Some(r) if r < current => r,
        _ => {
            locals[k] = old;
            current
        }
    }
}

/// Minimum of <p|num|p> / <p|den|p> over product vectors with denominator at
/// least `den_floor`. Runs alternating descent on the ratio, then a bisection
/// on t over the sign of the product minimum of num - t*den; the lower of the
/// two estimates is reported, with `attained` false when only the bisection
/// reaches it.
pub fn min_ratio_product(
    num: &TensorOperator,
    den: &TensorOperator,
    den_floor: f64,
    cfg: &OptConfig,
) -> Result<OptResult> {
    num.space().check_same(den.space())?;
    let restarts = cfg.restarts.max(1);
    let runs: Vec<Option<(f64, ProductVector, bool)>> = (0..restarts)
        .into_par_iter()
        .map(|idx| {
            let mut rng = restart_rng(cfg.seed, idx);
            // resample a feasible start
            let mut start = None;
            for _ in 0..50 {
                let p = ProductVector::random(num.space(), &mut rng);
                if let Some(r) = ratio_at(num, den, &p, den_floor) {
                    start = Some((p, r));
                    break;
                }
            }
            let (p, mut current) = start?;
            let mut locals = p.locals;
            let factors = num.space().factors();
            let mut converged = false;
            for _ in 0..MAX_SWEEPS {
                let before = current;
                for k in 0..factors {
                    current = ratio_update(num, den, &mut locals, k, den_floor, current);
                }
                if (before - current).abs() < DESCENT_TOL {
                    converged = true;
                    break;
                }
            }
            let argmin = ProductVector {
                locals: locals.iter().map(gauge_fix).collect(),
            };
            let value = ratio_at(num, den, &argmin, den_floor).unwrap_or(current);
            Some((value, argmin, converged))
        })
        .collect();
    let feasible: Vec<&(f64, ProductVector, bool)> = runs.iter().flatten().collect();
    if feasible.is_empty() {
        return Err(Error::RatioInfeasible(den_floor));
    }
    let converged = feasible.iter().filter(|r| r.2).count();
    let best = feasible
        .iter()
        .min_by(|a, b| a.0.partial_cmp(&b.0).expect("finite ratios"))
        .expect("nonempty");
    let alternating_value = best.0;

    // Bisection fallback: the infimum of the ratio is the largest t for
    // which num - t*den stays nonnegative on products.
    let probe_cfg = OptConfig::new(restarts.min(16), cfg.seed.wrapping_add(1));
    let g = |t: f64| -> f64 {
        let shifted = num.sub(&den.scale(t)).expect("same space");
        min_product_expectation(&shifted, &probe_cfg).value
    };
    let mut lo = alternating_value.min(0.0);
    let mut lo_ok = g(lo) >= -1e-12;
    let mut widen = 0;
    while !lo_ok && widen < 40 {
        lo = lo * 2.0 - 1.0;
        lo_ok = g(lo) >= -1e-12;
        widen += 1;
    }
    let bisection_value = if lo_ok {
        let mut hi = alternating_value;
        if g(hi) >= -1e-12 {
            // the alternating value itself looks feasible as an offset;
            // no smaller infimum is indicated
            hi
        } else {
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if g(mid) >= -1e-12 {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo < 1e-12 {
                    break;
                }
            }
            lo
        }
    } else {
        alternating_value
    };

    let (value, attained) = if bisection_value < alternating_value - 1e-9 {
        (bisection_value, false)
    } else {
        (alternating_value, true)
    };
    Ok(OptResult {
        value,
        argmin: best.1.clone(),
        restarts,
        converged_fraction: converged as f64 / restarts as f64,
        attained,
    })
}

/// Hyperspherical grid over one local dimension: `steps` points per angle,
/// magnitudes on [0, pi/2] inclusive, phases on [0, 2pi) exclusive.
struct LocalGrid {
    dim: usize,
    steps: usize,
    cos_theta: Vec<f64>,
    sin_theta: Vec<f64>,
    phase: Vec<Complex64>,
}

impl LocalGrid {
    fn new(dim: usize, steps: usize) -> Self {
        let cos_theta: Vec<f64> = (0..steps)
            .map(|i| {
                let t = (i as f64) / ((steps - 1) as f64) * std::f64::consts::FRAC_PI_2;
                t.cos()
            })
            .collect();
        let sin_theta: Vec<f64> = (0..steps)
            .map(|i| {
                let t = (i as f64) / ((steps - 1) as f64) * std::f64::consts::FRAC_PI_2;
                t.sin()
            })
            .collect();
        let phase: Vec<Complex64> = (0..steps)
            .map(|i| {
                let p = (i as f64) / (steps as f64) * std::f64::consts::TAU;
                Complex64::new(p.cos(), p.sin())
            })
            .collect();
        Self {
            dim,
            steps,
            cos_theta,
            sin_theta,
            phase,
        }
    }

    fn angle_count(&self) -> usize {
        2 * (self.dim - 1)
    }

    fn point_count(&self) -> usize {
        self.steps.pow(self.angle_count() as u32)
    }

    /// Vector for the lexicographic angle tuple index: the first dim-1
    /// digits are magnitude angles, the rest phases.
    fn vector(&self, mut index: usize) -> DVector<Complex64> {
        let m = self.dim - 1;
        let mut digits = vec![0usize; 2 * m];
        for d in (0..2 * m).rev() {
            digits[d] = index % self.steps;
            index /= self.steps;
        }
        let mut v = DVector::from_element(self.dim, Complex64::new(0.0, 0.0));
        let mut running = 1.0f64;
        for j in 0..m {
            let t = digits[j];
            let magnitude = running * self.cos_theta[t];
            let phase = if j == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                self.phase[digits[m + j - 1]]
            };
            v[j] = phase * magnitude;
            running *= self.sin_theta[t];
        }
        v[m] = self.phase[digits[2 * m - 1]] * running;
        v
    }
}

fn grid_checks(space: &TensorSpace, steps: usize) -> Result<()> {
    if space.total() > GRID_ORACLE_LIMIT {
        return Err(Error::GridTooLarge {
            total: space.total(),
            limit: GRID_ORACLE_LIMIT,
        });
    }
    if steps < 8 {
        return Err(Error::GridTooCoarse(steps));
    }
    Ok(())
}

/// Exhaustive minimum over the angle grid. The factors other than the last
/// are enumerated in an outer (parallel) loop; for each combination the
/// last factor reduces to a small quadratic form swept over its own grid.
pub fn grid_min_expectation(op: &TensorOperator, steps: usize) -> Result<f64> {
    grid_checks(op.space(), steps)?;
    Ok(grid_scan(op.space(), steps, |outer_locals, inner| {
        let m = effective_qform(op, outer_locals);
        let mut best = f64::INFINITY;
        for idx in 0..inner.point_count() {
            let v = inner.vector(idx);
            best = best.min(qform(&m, &v));
        }
        best
    }))
}

/// Exhaustive minimum of the ratio over the angle grid, skipping points with
/// denominator below the floor.
pub fn grid_min_ratio(
    num: &TensorOperator,
    den: &TensorOperator,
    den_floor: f64,
    steps: usize,
) -> Result<f64> {
    num.space().check_same(den.space())?;
    grid_checks(num.space(), steps)?;
    let best = grid_scan(num.space(), steps, |outer_locals, inner| {
        let mn = effective_qform(num, outer_locals);
        let md = effective_qform(den, outer_locals);
        let mut best = f64::INFINITY;
        for idx in 0..inner.point_count() {
            let v = inner.vector(idx);
            let d = qform(&md, &v);
            if d >= den_floor {
                best = best.min(qform(&mn, &v) / d);
            }
        }
        best
    });
    if best.is_infinite() {
        return Err(Error::RatioInfeasible(den_floor));
    }
    Ok(best)
}

/// Lipschitz-style discretization bound: the objective moves by at most
/// ||op|| * sum of half-steps over every angle of every factor between a
/// grid point and the true minimizer.
pub fn grid_resolution_bound(op: &TensorOperator, steps: usize) -> f64 {
    let h_theta = std::f64::consts::FRAC_PI_2 / ((steps - 1) as f64);
    let h_phase = std::f64::consts::TAU / (steps as f64);
    let angle_sum: f64 = op
        .space()
        .dims()
        .iter()
        .map(|&d| (d - 1) as f64 * (h_theta + h_phase))
        .sum();
    op.spectral_radius() * angle_sum
}

fn qform(m: &DMatrix<Complex64>, v: &DVector<Complex64>) -> f64 {
    let mut acc = 0.0;
    let n = v.len();
    for i in 0..n {
        acc += m[(i, i)].re * v[i].norm_sqr();
        for j in (i + 1)..n {
            acc += 2.0 * (v[i].conj() * m[(i, j)] * v[j]).re;
        }
    }
    acc
}

fn effective_qform(op: &TensorOperator, outer_locals: &[DVector<Complex64>]) -> DMatrix<Complex64> {
    let space = op.space();
    let k = space.factors() - 1;
    let mut locals: Vec<DVector<Complex64>> = outer_locals.to_vec();
    locals.push(DVector::from_element(
        space.dims()[k],
        Complex64::new(0.0, 0.0),
    ));
    effective_local(op, &locals, k)
}

/// Enumerates the outer-factor grid in parallel, calling `inner_min` per
/// combination and reducing with the exact minimum.
fn grid_scan<F>(space: &TensorSpace, steps: usize, inner_min: F) -> f64
where
    F: Fn(&[DVector<Complex64>], &LocalGrid) -> f64 + Sync,
{
    let factors = space.factors();
    let outer_grids: Vec<LocalGrid> = space.dims()[..factors - 1]
        .iter()
        .map(|&d| LocalGrid::new(d, steps))
        .collect();
    let inner = LocalGrid::new(space.dims()[factors - 1], steps);
    let outer_count: usize = outer_grids.iter().map(|g| g.point_count()).product();
    (0..outer_count)
        .into_par_iter()
        .map(|mut index| {
            let mut locals = Vec::with_capacity(factors - 1);
            for g in outer_grids.iter().rev() {
                let i = index % g.point_count();
                index /= g.point_count();
                locals.push(g.vector(i));
            }
            locals.reverse();
            inner_min(&locals, &inner)
        })
        .reduce(|| f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::basis_ket;
    use crate::states::max_entangled;

    fn eq17_base() -> TensorOperator {
        let s = TensorSpace::bipartite(2, 4).unwrap();
        let a = basis_ket(&s, &[0, 1]) + basis_ket(&s, &[1, 2]);
        let b1 = basis_ket(&s, &[0, 3]) + basis_ket(&s, &[1, 2]);
        let b2 = basis_ket(&s, &[0, 1]) + basis_ket(&s, &[1, 0]);
        let p = TensorOperator::projector_sum(s.clone(), &[a], false).unwrap();
        let q = TensorOperator::projector_sum(s, &[b1, b2], false).unwrap();
        p.add(&q.partial_transpose(0).unwrap()).unwrap()
    }

    #[test]
    fn product_expectation_examples() {
        let s = TensorSpace::bipartite(3, 3).unwrap();
        let id = TensorOperator::identity(s.clone());
        let p = ProductVector::basis(&s, &[1, 2]);
        assert!((product_expectation(&id, &p).unwrap() - 1.0).abs() < 1e-14);

        let psi = max_entangled(3).unwrap();
        let p00 = ProductVector::basis(&s, &[0, 0]);
        assert!((product_expectation(psi.op(), &p00).unwrap() - 1.0 / 3.0).abs() < 1e-14);

        let base = eq17_base();
        let s24 = TensorSpace::bipartite(2, 4).unwrap();
        let q00 = ProductVector::basis(&s24, &[0, 0]);
        assert_eq!(product_expectation(&base, &q00).unwrap(), 0.0);

        assert!(product_expectation(&base, &p00).is_err());
    }

    #[test]
    fn gauge_fixing_makes_first_nonzero_component_real() {
        let s = TensorSpace::bipartite(2, 2).unwrap();
        let v = DVector::from_vec(vec![
            Complex64::new(0.0, 0.6),
            Complex64::new(0.8, 0.0),
        ]);
        let w = DVector::from_vec(vec![
            Complex64::new(-0.6, 0.0),
            Complex64::new(0.0, 0.8),
        ]);
        let p = ProductVector::new(vec![v, w], &s).unwrap();
        for l in p.locals() {
            let first = l.iter().find(|z| z.norm() > 1e-14).unwrap();
            assert!(first.im.abs() < 1e-14 && first.re > 0.0);
        }
    }

    #[test]
    fn min_product_expectation_of_identity_is_one() {
        let s = TensorSpace::bipartite(2, 2).unwrap();
        let id = TensorOperator::identity(s);
        let r = min_product_expectation(&id, &OptConfig::default());
        assert!((r.value - 1.0).abs() < 1e-10);
        assert!(r.attained);
    }

    #[test]
    fn min_product_expectation_of_max_entangled_projector_is_zero() {
        let psi = max_entangled(3).unwrap();
        let r = min_product_expectation(psi.op(), &OptConfig::default());
        assert!(r.value.abs() < 1e-9);
    }

    #[test]
    fn min_product_expectation_finds_the_zero_of_the_edge_base() {
        let base = eq17_base();
        let r = min_product_expectation(&base, &OptConfig::default());
        assert!(r.value.abs() < 1e-9);
        // re-evaluating the argmin reproduces the value
        let again = product_expectation(&base, &r.argmin).unwrap();
        assert!((again - r.value).abs() < 1e-10);
    }

    #[test]
    fn descent_objectives_never_increase() {
        let base = eq17_base();
        let mut rng = restart_rng(7, 3);
        let start = ProductVector::random(base.space(), &mut rng);
        let run = alternating_descent(&base, start, MAX_SWEEPS, DESCENT_TOL);
        let slack = 1e-12 * (1.0 + base.max_abs());
        for w in run.objectives.windows(2) {
            assert!(w[1] <= w[0] + slack);
        }
    }

    #[test]
    fn fixed_seed_reproduces_bit_identical_values() {
        let base = eq17_base();
        let cfg = OptConfig::new(16, 123);
        let a = min_product_expectation(&base, &cfg);
        let b = min_product_expectation(&base, &cfg);
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }

    #[test]
    fn ratio_of_identical_operators_is_one() {
        let s = TensorSpace::bipartite(2, 2).unwrap();
        let id = TensorOperator::identity(s);
        let r = min_ratio_product(&id, &id, DEFAULT_DEN_FLOOR, &OptConfig::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10);

        // num = den = I - P: the ratio is 1 at every feasible point
        let bell = max_entangled(2).unwrap();
        let comp = TensorOperator::identity(bell.space().clone())
            .sub(bell.op())
            .unwrap();
        let r = min_ratio_product(&comp, &comp, DEFAULT_DEN_FLOOR, &OptConfig::default()).unwrap();
        assert_eq!(r.value, 1.0);
        assert!(r.attained);
    }

    #[test]
    fn ratio_with_negative_denominator_is_infeasible() {
        let s = TensorSpace::bipartite(2, 2).unwrap();
        let id = TensorOperator::identity(s);
        let neg = id.scale(-1.0);
        assert!(matches!(
            min_ratio_product(&id, &neg, DEFAULT_DEN_FLOOR, &OptConfig::default()),
            Err(Error::RatioInfeasible(_))
        ));
    }

    #[test]
    fn grid_oracle_on_identity_and_max_entangled() {
        let s = TensorSpace::bipartite(2, 2).unwrap();
        let id = TensorOperator::identity(s);
        assert!((grid_min_expectation(&id, 8).unwrap() - 1.0).abs() < 1e-12);

        let bell = max_entangled(2).unwrap();
        let g = grid_min_expectation(bell.op(), 16).unwrap();
        assert!((-1e-12..=0.01).contains(&g));
    }

    #[test]
    fn grid_oracle_rejects_large_spaces_and_coarse_grids() {
        let s = TensorSpace::bipartite(3, 3).unwrap();
        let id = TensorOperator::identity(s.clone());
        assert!(matches!(
            grid_min_expectation(&TensorOperator::identity(TensorSpace::bipartite(5, 4).unwrap()), 8),
            Err(Error::GridTooLarge { .. })
        ));
        assert!(matches!(
            grid_min_expectation(&id, 4),
            Err(Error::GridTooCoarse(4))
        ));
    }

    #[test]
    fn grid_oracle_hits_the_edge_base_zero() {
        let base = eq17_base();
        let g = grid_min_expectation(&base, 8).unwrap();
        assert!(g.abs() <= 1e-3);
    }
}
