//! Heuristic convex-roof minimization.
//!
//! Every pure-state decomposition of a rank-`r` state `ρ = Σ λ_j |e_j⟩⟨e_j|`
//! with `m` members is `|ψ̃_i⟩ = Σ_j U_ij √λ_j |e_j⟩` for an `m×r` isometry
//! `U` (`U†U = I`). The search moves `U` by coordinate pattern steps on its
//! real and imaginary entries and maps back onto the isometries with the
//! Löwdin orthonormalization `X ↦ X (X†X)^{-1/2}`. Weights come out as the
//! squared norms `‖ψ̃_i‖²`, so no simplex constraint is needed.
//!
//! The result is an achievable ensemble, i.e. an upper bound on the roof.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Result};
use crate::linalg::{inner, orthonormalize_columns, CMatrix, C64, ZERO};
use crate::state::{DensityMatrix, PureState, ZERO_EIGENVALUE};
use crate::states::rng_from_seed;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoofBudget {
    /// Random isometry starts on top of the spectral and caller-seeded ones.
    pub restarts: usize,
    /// Ensemble size; `None` means twice the rank.
    pub max_ensemble: Option<usize>,
    pub initial_step: f64,
    pub min_step: f64,
    /// Objective evaluations allowed per start.
    pub max_evals: usize,
}

impl Default for RoofBudget {
    fn default() -> Self {
        Self { restarts: 2, max_ensemble: None, initial_step: 0.5, min_step: 1e-6, max_evals: 20_000 }
    }
}

impl RoofBudget {
    /// Seeded ensembles only, no local search. Yields exactly the seeded
    /// (and spectral) averages.
    pub fn seeds_only() -> Self {
        Self { restarts: 0, max_ensemble: Some(1), initial_step: 0.5, min_step: 1e-6, max_evals: 0 }
    }
}

#[derive(Debug, Clone)]
pub struct RoofResult {
    /// `Σ p_i · measure(ψ_i)` over the returned ensemble: an upper bound.
    pub value: f64,
    pub weights: Vec<f64>,
    pub states: Vec<PureState>,
    /// Objective evaluations over all starts.
    pub iterations: usize,
    /// The winning start reached the minimal step size.
    pub converged: bool,
    /// Value of the spectral ensemble alone.
    pub spectral_value: f64,
}

impl RoofResult {
    pub fn ensemble(&self) -> Vec<(f64, PureState)> {
        self.weights.iter().copied().zip(self.states.iter().cloned()).collect()
    }
}

struct Problem<'a, F> {
    rho: &'a DensityMatrix,
    /// `√λ_j |e_j⟩`, one per retained eigenvalue.
    scaled: Vec<Vec<C64>>,
    measure: &'a F,
}

impl<F: Fn(&PureState) -> f64> Problem<'_, F> {
    fn rank(&self) -> usize {
        self.scaled.len()
    }

    fn members(&self, u: &CMatrix) -> Vec<(f64, Vec<C64>)> {
        let d = self.rho.dim();
        (0..u.rows())
            .map(|i| {
                let mut v = vec![ZERO; d];
                for (j, basis) in self.scaled.iter().enumerate() {
                    let c = u[(i, j)];
                    if c == ZERO {
                        continue;
                    }
                    for (x, b) in v.iter_mut().zip(basis) {
                        *x += c * b;
                    }
                }
                let p: f64 = v.iter().map(|z| z.norm_sqr()).sum();
                (p, v)
            })
            .collect()
    }

    fn evaluate(&self, u: &CMatrix) -> f64 {
        self.members(u)
            .into_iter()
            .filter(|(p, _)| *p > 1e-14)
            .map(|(p, v)| {
                let s = PureState::normalized(self.rho.shape().clone(), v).expect("nonzero member");
                p * (self.measure)(&s)
            })
            .sum()
    }

    fn ensemble(&self, u: &CMatrix) -> (Vec<f64>, Vec<PureState>) {
        let mut weights = Vec::new();
        let mut states = Vec::new();
        for (p, v) in self.members(u) {
            if p > 1e-14 {
                weights.push(p);
                states.push(PureState::normalized(self.rho.shape().clone(), v).expect("nonzero member"));
            }
        }
        (weights, states)
    }

    /// Isometry reproducing a caller ensemble: `U_ij = √p_i ⟨e_j|φ_i⟩ / √λ_j`.
    fn isometry_from_ensemble(&self, ensemble: &[(f64, PureState)], rows: usize) -> Result<CMatrix> {
        let r = self.rank();
        let mut u = CMatrix::zeros(rows.max(ensemble.len()), r);
        for (i, (p, phi)) in ensemble.iter().enumerate() {
            if phi.shape() != self.rho.shape() || *p < 0.0 {
                return invalid("seed ensemble does not match the state");
            }
            for (j, basis) in self.scaled.iter().enumerate() {
                let lam: f64 = basis.iter().map(|z| z.norm_sqr()).sum();
                u[(i, j)] = inner(basis, phi.amplitudes()) * p.sqrt() / lam;
            }
        }
        let gram = u.adjoint().matmul(&u)?;
        let err = gram.max_abs_diff(&CMatrix::identity(r));
        if err > 1e-6 {
            return invalid(format!("seed ensemble does not decompose the state (isometry error {err:.2e})"));
        }
        Ok(u)
    }

    fn pattern_search(&self, start: CMatrix, budget: &RoofBudget) -> (CMatrix, f64, usize, bool) {
        let mut best = start;
        let mut fbest = self.evaluate(&best);
        let mut evals = 1;
        let mut step = budget.initial_step;
        let n_coords = 2 * best.rows() * best.cols();
        while step >= budget.min_step {
            let mut improved = false;
            for coord in 0..n_coords {
                for sign in [1.0, -1.0] {
                    if evals >= budget.max_evals {
                        return (best, fbest, evals, false);
                    }
                    let mut x = best.clone();
                    let entry = &mut x.as_mut_slice()[coord / 2];
                    if coord % 2 == 0 {
                        entry.re += sign * step;
                    } else {
                        entry.im += sign * step;
                    }
                    let Some(u) = orthonormalize_columns(&x) else { continue };
                    let f = self.evaluate(&u);
                    evals += 1;
                    if f < fbest - 1e-15 {
                        best = u;
                        fbest = f;
                        improved = true;
                        break;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        (best, fbest, evals, true)
    }
}

/// Upper bound on the convex roof `min Σ p_i E(ψ_i)` of `measure` at `rho`.
///
/// Starts: the spectral ensemble, each of `seeds` (ensembles that must
/// decompose `rho`), then `budget.restarts` Haar-random isometries drawn from
/// `seed`. The smallest value wins; ties go to the earlier start.
pub fn convex_roof_min<F>(
    rho: &DensityMatrix,
    measure: F,
    budget: &RoofBudget,
    seed: u64,
    seeds: &[Vec<(f64, PureState)>],
) -> Result<RoofResult>
where
    F: Fn(&PureState) -> f64,
{
    let eig = rho.eig();
    let scaled: Vec<Vec<C64>> = eig
        .eigvals
        .iter()
        .zip(&eig.eigvecs)
        .filter(|(&l, _)| l > ZERO_EIGENVALUE)
        .map(|(&l, v)| v.iter().map(|z| z * l.sqrt()).collect())
        .collect();
    let problem = Problem { rho, scaled, measure: &measure };
    let r = problem.rank();
    if r == 0 {
        return invalid("state has no support");
    }

    let m = budget.max_ensemble.unwrap_or(2 * r).max(r);
    let mut spectral = CMatrix::zeros(m, r);
    for j in 0..r {
        spectral[(j, j)] = C64::new(1.0, 0.0);
    }
    let spectral_value = problem.evaluate(&spectral);
    if r == 1 {
        let (weights, states) = problem.ensemble(&spectral);
        return Ok(RoofResult { value: spectral_value, weights, states, iterations: 1, converged: true, spectral_value });
    }

    let mut starts = vec![spectral];
    for s in seeds {
        starts.push(problem.isometry_from_ensemble(s, m)?);
    }
    let mut rng = rng_from_seed(seed);
    for _ in 0..budget.restarts {
        loop {
            let data: Vec<C64> = (0..m * r)
                .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            let g = CMatrix::from_vec(m, r, data)?;
            if let Some(u) = orthonormalize_columns(&g) {
                starts.push(u);
                break;
            }
        }
    }

    let mut best: Option<(f64, CMatrix, bool)> = None;
    let mut total_evals = 0;
    for start in starts {
        let (u, f, evals, converged) = problem.pattern_search(start, budget);
        total_evals += evals;
        if best.as_ref().map_or(true, |(bf, _, _)| f < *bf) {
            best = Some((f, u, converged));
        }
    }
    let (value, u, converged) = best.expect("at least one start");
    let (weights, states) = problem.ensemble(&u);
    Ok(RoofResult { value, weights, states, iterations: total_evals, converged, spectral_value })
}
