//! Extendability predicates, purifications and the extensibility measure.
//!
//! A state on `k` parties extends to a partitewise entangled state iff two of
//! its single-party marginals are mixed, and to a genuinely entangled one iff
//! it is mixed with no pure marginal. The extensibility is the genuine
//! measure of the spectral purification `Σ_j √q_j |ψ_j⟩|j⟩^C`, with the
//! ancilla `C` appended as the last party.

use crate::convex_roof::{convex_roof_min, RoofBudget};
use crate::error::{invalid, Result};
use crate::linalg::{CMatrix, C64, ZERO};
use crate::measures::{genuine_measure_pure, MeasureConfig};
use crate::separability::subsets_of_size;
use crate::state::{partial_trace, DensityMatrix, PureState, RegisterShape, ZERO_EIGENVALUE};
use crate::states::{random_unitary_with, rng_from_seed};

/// Eigenvalues in `(ZERO_EIGENVALUE, NEAR_RANK_THRESHOLD]` get flagged.
pub const NEAR_RANK_THRESHOLD: f64 = 1e-10;

/// Slack allowed when comparing sampled extensions against the extensibility.
pub const TOL_CMP: f64 = 1e-7;

fn marginal_rank(rho: &DensityMatrix, parties: &[usize]) -> usize {
    partial_trace(rho, parties).expect("valid parties").rank()
}

/// At least two single-party marginals have rank ≥ 2.
pub fn is_pw_extendable(rho: &DensityMatrix) -> bool {
    (0..rho.shape().n_parties())
        .filter(|&p| marginal_rank(rho, &[p]) >= 2)
        .count()
        >= 2
}

/// Mixed, and no marginal on a nonempty proper party subset is pure.
pub fn is_gpw_extendable(rho: &DensityMatrix) -> bool {
    if rho.rank() < 2 {
        return false;
    }
    let n = rho.shape().n_parties();
    (1..n).all(|size| subsets_of_size(n, size).iter().all(|s| marginal_rank(rho, s) >= 2))
}

#[derive(Debug, Clone)]
pub struct PurificationResult {
    /// Original parties followed by the ancilla.
    pub state: PureState,
    pub ancilla_dim: usize,
    /// Weights of the purified ensemble (the spectrum for the canonical one).
    pub weights: Vec<f64>,
    /// An eigenvalue sits just above the rank threshold.
    pub near_threshold: bool,
}

impl PurificationResult {
    pub fn ancilla(&self) -> usize {
        self.state.shape().n_parties() - 1
    }
}

fn purify(shape: &RegisterShape, members: &[(f64, &[C64])]) -> PureState {
    let r = members.len();
    let d = shape.total_dim();
    let mut amp = vec![ZERO; d * r];
    for (j, (w, v)) in members.iter().enumerate() {
        let s = w.sqrt();
        for i in 0..d {
            amp[i * r + j] = v[i] * s;
        }
    }
    PureState::normalized(shape.with_appended(r), amp).expect("nonzero purification")
}

/// `|Φ⟩ = Σ_j √q_j |ψ_j⟩|j⟩^C` over the eigenpairs with `q_j > 10⁻¹²`,
/// in descending eigenvalue order.
pub fn canonical_purification(rho: &DensityMatrix) -> PurificationResult {
    let eig = rho.eig();
    let kept: Vec<(f64, &[C64])> = eig
        .eigvals
        .iter()
        .zip(&eig.eigvecs)
        .filter(|(&l, _)| l > ZERO_EIGENVALUE)
        .map(|(&l, v)| (l, v.as_slice()))
        .collect();
    let near_threshold = kept.iter().any(|(l, _)| *l <= NEAR_RANK_THRESHOLD);
    let state = purify(rho.shape(), &kept);
    PurificationResult {
        state,
        ancilla_dim: kept.len(),
        weights: kept.iter().map(|(l, _)| *l).collect(),
        near_threshold,
    }
}

/// `Σ_i √p_i |ψ_i⟩|i⟩^C` for an arbitrary ensemble.
pub fn ensemble_purification(ensemble: &[(f64, PureState)]) -> Result<PurificationResult> {
    let Some((_, first)) = ensemble.first() else {
        return invalid("empty ensemble");
    };
    let total: f64 = ensemble.iter().map(|(w, _)| w).sum();
    if ensemble.iter().any(|(w, _)| *w <= 0.0) || (total - 1.0).abs() > 1e-9 {
        return invalid(format!("ensemble weights must be positive and sum to 1 (sum {total})"));
    }
    if ensemble.iter().any(|(_, s)| s.shape() != first.shape()) {
        return invalid("ensemble members live on different registers");
    }
    let members: Vec<(f64, &[C64])> = ensemble.iter().map(|(w, s)| (*w, s.amplitudes())).collect();
    Ok(PurificationResult {
        state: purify(first.shape(), &members),
        ancilla_dim: ensemble.len(),
        weights: ensemble.iter().map(|(w, _)| *w).collect(),
        near_threshold: false,
    })
}

/// Extensibility: the genuine measure of the canonical purification when
/// `rho` is partitewise-entanglement extendable, zero otherwise.
pub fn e_ext(rho: &DensityMatrix, cfg: &MeasureConfig) -> f64 {
    if !is_pw_extendable(rho) {
        return 0.0;
    }
    genuine_measure_pure(&canonical_purification(rho).state, cfg)
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExtensionKind {
    Purification,
    /// `p ρ ⊗ ρ^C + (1−p)|Φ⟩⟨Φ|`.
    Mixture { p: f64 },
    /// `(1−p_α) ρ₂ ⊗ ρ^C + p_α |Φ_α⟩⟨Φ_α|` for a proper subset `α` of the
    /// spectral indices.
    Split { alpha: Vec<usize>, p_alpha: f64 },
}

impl ExtensionKind {
    pub fn label(&self) -> String {
        match self {
            ExtensionKind::Purification => "purification".into(),
            ExtensionKind::Mixture { p } => format!("mixture p={p:.1}"),
            ExtensionKind::Split { alpha, p_alpha } => format!("split alpha={alpha:?} p_alpha={p_alpha:.6}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExtensionSample {
    pub kind: ExtensionKind,
    pub state: DensityMatrix,
    /// Ensemble the sample was assembled from.
    pub ensemble: Vec<(f64, PureState)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtensionStrategy {
    /// Ancilla basis `|j⟩` as constructed.
    Canonical,
    /// Ancilla rotated by a seeded Haar-random unitary (a locally equivalent
    /// family of extensions).
    RotatedAncilla,
}

/// Largest spectral index set for which split extensions are enumerated.
const MAX_SPLIT_RANK: usize = 4;

/// The three extension families: the purification, mixtures with the
/// uncorrelated extension for `p = 0.1, …, 0.9`, and the spectral splits.
pub fn sample_extensions(
    rho: &DensityMatrix,
    strategy: ExtensionStrategy,
    seed: u64,
) -> Result<Vec<ExtensionSample>> {
    let pur = canonical_purification(rho);
    let m = pur.ancilla_dim;
    if m < 2 {
        return invalid("extensions are sampled for mixed states only");
    }
    let q = &pur.weights;
    let eig = rho.eig();
    let vecs: Vec<PureState> = eig.eigvecs[..m]
        .iter()
        .map(|v| PureState::new(rho.shape().clone(), v.clone()))
        .collect::<Result<_>>()?;
    let anc_shape = RegisterShape::new(vec![m])?;
    let anc: Vec<PureState> = (0..m).map(|i| PureState::basis(anc_shape.clone(), &[i])).collect::<Result<_>>()?;

    let mut raw: Vec<(ExtensionKind, Vec<(f64, PureState)>)> = Vec::new();
    raw.push((ExtensionKind::Purification, vec![(1.0, pur.state.clone())]));
    for step in 1..=9 {
        let p = step as f64 / 10.0;
        let mut ens = Vec::with_capacity(m * m + 1);
        for (j, v) in vecs.iter().enumerate() {
            for (i, a) in anc.iter().enumerate() {
                ens.push((p * q[j] * q[i], v.tensor(a)));
            }
        }
        ens.push((1.0 - p, pur.state.clone()));
        raw.push((ExtensionKind::Mixture { p }, ens));
    }
    if m <= MAX_SPLIT_RANK {
        for size in 1..m {
            for alpha in subsets_of_size(m, size) {
                let p_alpha: f64 = alpha.iter().map(|&j| q[j]).sum();
                let mut ens = Vec::new();
                for (j, v) in vecs.iter().enumerate() {
                    if alpha.contains(&j) {
                        continue;
                    }
                    for (i, a) in anc.iter().enumerate() {
                        ens.push((q[j] * q[i], v.tensor(a)));
                    }
                }
                let members: Vec<(f64, &[C64])> = alpha
                    .iter()
                    .map(|&j| (q[j] / p_alpha, vecs[j].amplitudes()))
                    .collect();
                // Φ_α keeps the ancilla labels j ∈ α of the full register.
                let mut amp = vec![ZERO; rho.dim() * m];
                for (&j, (w, v)) in alpha.iter().zip(&members) {
                    for (x, z) in v.iter().enumerate() {
                        amp[x * m + j] = z * w.sqrt();
                    }
                }
                let phi_alpha = PureState::normalized(rho.shape().with_appended(m), amp)?;
                ens.push((p_alpha, phi_alpha));
                raw.push((ExtensionKind::Split { alpha, p_alpha }, ens));
            }
        }
    }

    let rotation: Option<CMatrix> = match strategy {
        ExtensionStrategy::Canonical => None,
        ExtensionStrategy::RotatedAncilla => Some(random_unitary_with(m, &mut rng_from_seed(seed))),
    };
    let ancilla = rho.shape().n_parties();
    raw.into_iter()
        .map(|(kind, mut ensemble)| {
            if let Some(u) = &rotation {
                for (_, s) in ensemble.iter_mut() {
                    *s = s.apply_local(ancilla, u)?;
                }
            }
            ensemble.retain(|(w, _)| *w > 0.0);
            let total: f64 = ensemble.iter().map(|(w, _)| w).sum();
            for (w, _) in ensemble.iter_mut() {
                *w /= total;
            }
            let state = DensityMatrix::from_ensemble(&ensemble)?;
            Ok(ExtensionSample { kind, state, ensemble })
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct SampleBound {
    pub kind: ExtensionKind,
    /// Average of the genuine measure over the sample's own ensemble.
    pub seeded_value: f64,
    /// Best ensemble value found by the roof search (≤ `seeded_value`).
    pub bound: f64,
}

#[derive(Debug, Clone)]
pub struct MaximalityReport {
    pub e_ext: f64,
    pub samples: Vec<SampleBound>,
    pub tol: f64,
    pub passed: bool,
}

/// Roof budget used per sampled extension.
pub fn harness_budget() -> RoofBudget {
    RoofBudget { restarts: 0, max_ensemble: None, initial_step: 0.25, min_step: 1e-4, max_evals: 300 }
}

/// Checks that no sampled extension carries more genuine entanglement than
/// the extensibility: for every sample, an achievable-ensemble upper bound
/// on its genuine measure must not exceed `e_ext(ρ) + TOL_CMP`.
pub fn verify_extension_maximality(rho: &DensityMatrix, cfg: &MeasureConfig, seed: u64) -> Result<MaximalityReport> {
    if rho.rank() < 2 {
        return invalid("maximality harness needs a mixed state");
    }
    if (0..rho.shape().n_parties()).any(|p| marginal_rank(rho, &[p]) < 2) {
        return invalid("maximality harness needs every single-party marginal mixed");
    }
    let target = e_ext(rho, cfg);
    let budget = harness_budget();
    let measure = |psi: &PureState| genuine_measure_pure(psi, cfg);
    let mut samples = Vec::new();
    for (i, sample) in sample_extensions(rho, ExtensionStrategy::RotatedAncilla, seed)?
        .into_iter()
        .enumerate()
    {
        let seeded_value: f64 = sample.ensemble.iter().map(|(w, s)| w * measure(s)).sum();
        let roof = convex_roof_min(
            &sample.state,
            measure,
            &budget,
            seed.wrapping_add(i as u64),
            std::slice::from_ref(&sample.ensemble),
        )?;
        samples.push(SampleBound { kind: sample.kind, seeded_value, bound: roof.value.min(seeded_value) });
    }
    let passed = samples.iter().all(|s| s.seeded_value <= target + TOL_CMP);
    Ok(MaximalityReport { e_ext: target, samples, tol: TOL_CMP, passed })
}
