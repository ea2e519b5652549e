//! Reduced functions and the partitewise entanglement measure families.
//!
//! Pure-state measures are evaluated directly; mixed states go through
//! [`crate::convex_roof`] and are reported as upper bounds.

use std::fmt;

use crate::convex_roof::{convex_roof_min, RoofBudget, RoofResult};
use crate::error::{invalid, Result};
use crate::linalg::{hermitian_eig, trace_norm, CMatrix, C64, ZERO};
use crate::separability::{finest_factorization, subsets_of_size, Factorization, DEFAULT_TOL_FACT};
use crate::state::{
    linear_entropy, partial_trace, partial_transpose, relative_entropy, von_neumann_entropy, DensityMatrix, PureState,
    RegisterShape, ZERO_EIGENVALUE,
};
use crate::states::{check_designated_query, enumerate_admissible_partitions, random_pure_with, rng_from_seed, PartitionSpec};

/// Unitarily invariant function vanishing exactly on pure states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReducedFunction {
    /// `2(1 − tr ρ²)`, the tangle's reduced function.
    LinSq,
    /// `√(2(1 − tr ρ²))`.
    LinSqrt,
    /// Von Neumann entropy in bits.
    VonNeumann,
}

impl ReducedFunction {
    pub fn name(self) -> &'static str {
        match self {
            ReducedFunction::LinSq => "lin-sq",
            ReducedFunction::LinSqrt => "lin-sqrt",
            ReducedFunction::VonNeumann => "von-neumann",
        }
    }
}

impl fmt::Display for ReducedFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How single-party values combine into a genuine measure of a pure state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GenuineForm {
    /// `min_i h(ρ^{A_i})`, zero on biseparable states.
    MinParties,
    /// `½ Σ_i h(ρ^{A_i})`, no biseparability gate.
    HalfSum,
}

impl GenuineForm {
    pub fn name(self) -> &'static str {
        match self {
            GenuineForm::MinParties => "min",
            GenuineForm::HalfSum => "half-sum",
        }
    }
}

impl fmt::Display for GenuineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Evaluation rule for the two-party mixed term `E(A₁A₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BipartiteMixedRule {
    /// Closed-form concurrence for two qubits, convex roof of `h` otherwise.
    WoottersWhenTwoQubit,
    ConvexRoofAlways,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasureConfig {
    pub h: ReducedFunction,
    pub genuine_form: GenuineForm,
    pub bipartite_mixed_rule: BipartiteMixedRule,
    pub tol_fact: f64,
    pub roof_budget: RoofBudget,
    pub seed: u64,
}

impl Default for MeasureConfig {
    fn default() -> Self {
        Self {
            h: ReducedFunction::LinSq,
            genuine_form: GenuineForm::MinParties,
            bipartite_mixed_rule: BipartiteMixedRule::WoottersWhenTwoQubit,
            tol_fact: DEFAULT_TOL_FACT,
            roof_budget: RoofBudget::default(),
            seed: 42,
        }
    }
}

impl MeasureConfig {
    pub fn new(h: ReducedFunction, genuine_form: GenuineForm) -> Self {
        Self { h, genuine_form, ..Self::default() }
    }

    /// `h = √(2(1−trρ²))` with the half-sum genuine form.
    pub fn figure() -> Self {
        Self::new(ReducedFunction::LinSqrt, GenuineForm::HalfSum)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Provenance string printed next to every reported value.
    pub fn describe(&self) -> String {
        format!("h={} eg={} tol_fact={:e}", self.h, self.genuine_form, self.tol_fact)
    }
}

pub fn h_value(rho: &DensityMatrix, h: ReducedFunction) -> f64 {
    let defect = linear_entropy(rho);
    match h {
        ReducedFunction::LinSq => 2.0 * defect,
        ReducedFunction::LinSqrt => (2.0 * defect).sqrt(),
        ReducedFunction::VonNeumann => von_neumann_entropy(rho).max(0.0),
    }
}

fn check_proper_block(shape: &RegisterShape, block: &[usize]) -> Result<Vec<usize>> {
    let b = shape.normalize_subset(block)?;
    if b.is_empty() || b.len() == shape.n_parties() {
        return invalid("block must be a nonempty proper party subset");
    }
    Ok(b)
}

/// `h(ρ^X)` for a pure state, the bipartite monotone across `X | X̄`.
pub fn bipartite_e_pure(psi: &PureState, block: &[usize], h: ReducedFunction) -> Result<f64> {
    let b = check_proper_block(psi.shape(), block)?;
    Ok(h_value(&psi.marginal(&b)?, h))
}

fn sigma_y_sigma_y() -> CMatrix {
    // σ_y ⊗ σ_y = antidiag(-1, 1, 1, -1)
    let mut m = CMatrix::zeros(4, 4);
    m[(0, 3)] = C64::new(-1.0, 0.0);
    m[(1, 2)] = C64::new(1.0, 0.0);
    m[(2, 1)] = C64::new(1.0, 0.0);
    m[(3, 0)] = C64::new(-1.0, 0.0);
    m
}

/// Two-qubit concurrence `max(0, λ₁−λ₂−λ₃−λ₄)`.
///
/// The `λ_i` are the square roots of the eigenvalues of `ρ ρ̃`, obtained as
/// the eigenvalues of the Hermitian `√(√ρ ρ̃ √ρ)`.
pub fn wootters_concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.shape().dims() != [2, 2] {
        return invalid(format!("concurrence needs two qubits, got dims {:?}", rho.shape().dims()));
    }
    // The λ_i are the singular values of A = √ρ (σ_y⊗σ_y) √ρ*, read off the
    // Hermitian dilation [[0, A], [A†, 0]] (eigenvalues ±λ_i) so that no
    // square roots of squared values lose precision. Rounding-level
    // eigenvalues of ρ are zeroed for the same reason.
    let yy = sigma_y_sigma_y();
    let sqrt_rho = rho.eig().reconstruct_with(|l| if l > ZERO_EIGENVALUE { l.sqrt() } else { 0.0 });
    let a = &(&sqrt_rho * &yy) * &sqrt_rho.conj();
    let mut dilation = CMatrix::zeros(8, 8);
    for r in 0..4 {
        for c in 0..4 {
            dilation.as_mut_slice()[r * 8 + c + 4] = a[(r, c)];
            dilation.as_mut_slice()[(c + 4) * 8 + r] = a[(r, c)].conj();
        }
    }
    let lam: Vec<f64> = hermitian_eig(&dilation)?.eigvals[..4].iter().map(|&x| x.max(0.0)).collect();
    Ok((lam[0] - lam[1] - lam[2] - lam[3]).max(0.0))
}

/// Pure-state concurrence `|⟨ψ|σ_y⊗σ_y|ψ*⟩|` of two qubits.
pub fn pure_concurrence(psi: &PureState) -> Result<f64> {
    if psi.shape().dims() != [2, 2] {
        return invalid("concurrence needs two qubits");
    }
    let a = psi.amplitudes();
    Ok((2.0 * (a[0] * a[3] - a[1] * a[2])).norm())
}

/// `(‖ρ^{T_X}‖₁ − 1)/2`.
pub fn negativity(rho: &DensityMatrix, block: &[usize]) -> Result<f64> {
    check_proper_block(rho.shape(), block)?;
    let pt = partial_transpose(rho, block)?;
    Ok(((trace_norm(&pt)? - 1.0) / 2.0).max(0.0))
}

fn single_party_values(psi: &PureState, h: ReducedFunction) -> Vec<f64> {
    (0..psi.shape().n_parties())
        .map(|p| h_value(&psi.marginal(&[p]).expect("valid party"), h))
        .collect()
}

/// Genuine measure of a pure state in the configured form.
pub fn genuine_measure_pure(psi: &PureState, cfg: &MeasureConfig) -> f64 {
    let values = single_party_values(psi, cfg.h);
    match cfg.genuine_form {
        GenuineForm::HalfSum => 0.5 * values.iter().sum::<f64>(),
        GenuineForm::MinParties => {
            if psi.shape().n_parties() < 2 || !finest_factorization(psi, cfg.tol_fact).is_single() {
                0.0
            } else {
                values.into_iter().fold(f64::INFINITY, f64::min)
            }
        }
    }
}

/// `E_g^{(t)}` of a non-biseparable block with `t` parties; for `t = 2` the
/// bipartite monotone, for a single party zero.
fn block_genuine(psi: &PureState, cfg: &MeasureConfig) -> f64 {
    match psi.shape().n_parties() {
        0 | 1 => 0.0,
        2 => h_value(&psi.marginal(&[0]).expect("valid party"), cfg.h),
        _ => genuine_measure_pure(psi, cfg),
    }
}

/// `E(A₁A₂)` for a two-party (possibly mixed) state.
pub fn bipartite_mixed_e(rho: &DensityMatrix, cfg: &MeasureConfig) -> Result<f64> {
    if rho.shape().n_parties() != 2 {
        return invalid("bipartite term needs a two-party state");
    }
    if cfg.bipartite_mixed_rule == BipartiteMixedRule::WoottersWhenTwoQubit && rho.shape().dims() == [2, 2] {
        return wootters_concurrence(rho);
    }
    let h = cfg.h;
    let res = convex_roof_min(
        rho,
        |psi: &PureState| h_value(&psi.marginal(&[0]).expect("valid party"), h),
        &cfg.roof_budget,
        cfg.seed,
        &[],
    )?;
    Ok(res.value)
}

fn designated_per_factor<'a>(fact: &'a Factorization, designated: &[usize]) -> Vec<(usize, &'a crate::separability::Factor)> {
    fact.factors
        .iter()
        .map(|f| (f.parties.iter().filter(|p| designated.contains(p)).count(), f))
        .collect()
}

/// Partitewise measure built from genuine measures of the factors that hold
/// at least two designated parties; for `k = 2` the two-party term `E(A₁A₂)`
/// is added and a two-party factor contributes through it alone.
pub fn pwem_gem_pure(psi: &PureState, designated: &[usize], cfg: &MeasureConfig) -> Result<f64> {
    check_designated_query(psi.shape(), designated)?;
    let fact = finest_factorization(psi, cfg.tol_fact);
    let groups = designated_per_factor(&fact, designated);
    if groups.iter().all(|(c, _)| *c <= 1) {
        return Ok(0.0);
    }
    if designated.len() == 2 {
        let pair = psi.marginal(designated)?;
        let e_pair = bipartite_mixed_e(&pair, cfg)?;
        let (_, factor) = groups.iter().find(|(c, _)| *c == 2).expect("checked above");
        let genuine = if factor.parties.len() >= 3 { block_genuine(&factor.state, cfg) } else { 0.0 };
        return Ok(e_pair + genuine);
    }
    Ok(groups
        .iter()
        .filter(|(c, _)| *c >= 2)
        .map(|(_, f)| block_genuine(&f.state, cfg))
        .sum())
}

/// Genuine partitewise measure: `E_g` of the single factor holding every
/// designated party, zero when the designated parties are spread out.
pub fn gpwem_gem_pure(psi: &PureState, designated: &[usize], cfg: &MeasureConfig) -> Result<f64> {
    check_designated_query(psi.shape(), designated)?;
    let fact = finest_factorization(psi, cfg.tol_fact);
    let factor = fact.factor_of(designated[0]);
    if !designated.iter().all(|d| factor.parties.contains(d)) {
        return Ok(0.0);
    }
    Ok(block_genuine(&factor.state, cfg))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BipartitionVariant {
    Min,
    Sum,
    Geo,
}

impl BipartitionVariant {
    pub fn name(self) -> &'static str {
        match self {
            BipartitionVariant::Min => "min",
            BipartitionVariant::Sum => "sum",
            BipartitionVariant::Geo => "geo",
        }
    }
}

/// Values below this count as zero in the sum-variant gate.
const GATE_ZERO: f64 = 1e-12;

fn combine(inner: &[f64], variant: BipartitionVariant) -> f64 {
    let min = inner.iter().copied().fold(f64::INFINITY, f64::min);
    match variant {
        BipartitionVariant::Min => min,
        BipartitionVariant::Sum => {
            if min <= GATE_ZERO {
                0.0
            } else {
                inner.iter().sum()
            }
        }
        BipartitionVariant::Geo => {
            let k = inner.len() as f64;
            inner.iter().map(|x| x.max(0.0)).product::<f64>().powf(1.0 / k)
        }
    }
}

/// For each designated `A_i`: minimum of `f(A_i ∪ Z)` over `Z` drawn from the
/// undesignated parties (including `Z = ∅`), skipping the full register.
fn inner_minima(
    shape: &RegisterShape,
    designated: &[usize],
    mut f: impl FnMut(&[usize]) -> Result<f64>,
) -> Result<Vec<f64>> {
    let mut sorted = designated.to_vec();
    sorted.sort_unstable();
    let free = shape.complement(&sorted);
    let n = shape.n_parties();
    designated
        .iter()
        .map(|&a| {
            let mut best = f64::INFINITY;
            for size in 0..=free.len() {
                for pick in subsets_of_size(free.len(), size) {
                    let mut block: Vec<usize> = pick.iter().map(|&i| free[i]).collect();
                    block.push(a);
                    block.sort_unstable();
                    if block.len() == n {
                        continue;
                    }
                    best = best.min(f(&block)?);
                }
            }
            Ok(best)
        })
        .collect()
}

/// Bipartition-based family: `min`, gated `sum`, or geometric mean of the
/// per-party minima `min_Z h(ρ^{A_i Z})`.
pub fn pwem_bipartition(
    psi: &PureState,
    designated: &[usize],
    h: ReducedFunction,
    variant: BipartitionVariant,
) -> Result<f64> {
    check_designated_query(psi.shape(), designated)?;
    let inner = inner_minima(psi.shape(), designated, |block| Ok(h_value(&psi.marginal(block)?, h)))?;
    Ok(combine(&inner, variant))
}

/// Negativity family: same structure with `N(ρ^{A_iZ_i | rest})`. Works on
/// mixed states directly; it is not faithful.
pub fn pwem_negativity(rho: &DensityMatrix, designated: &[usize], variant: BipartitionVariant) -> Result<f64> {
    check_designated_query(rho.shape(), designated)?;
    let inner = inner_minima(rho.shape(), designated, |block| negativity(rho, block))?;
    Ok(combine(&inner, variant))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeeSawBudget {
    /// Random starts in addition to the marginal-eigenvector start.
    pub restarts: usize,
    pub max_sweeps: usize,
    /// Stop when one sweep gains less overlap than this.
    pub gain_tol: f64,
    pub seed: u64,
}

impl Default for SeeSawBudget {
    fn default() -> Self {
        Self { restarts: 32, max_sweeps: 1000, gain_tol: 1e-10, seed: 42 }
    }
}

#[derive(Debug, Clone)]
pub struct GeometricResult {
    /// `1 − best overlap`: an upper bound on the measure.
    pub value: f64,
    /// Achieved overlap, a lower bound on the true maximum.
    pub max_overlap: f64,
    pub partition: PartitionSpec,
    /// Product state attaining `max_overlap`.
    pub witness: PureState,
}

/// `⟨⊗_{j≠i} φ_j | ψ⟩` as a vector on block `i`.
fn contract_except(psi: &PureState, locals: &[Vec<usize>], states: &[Vec<C64>], i: usize) -> Vec<C64> {
    let mut out = vec![ZERO; states[i].len()];
    for (idx, &a) in psi.amplitudes().iter().enumerate() {
        if a == ZERO {
            continue;
        }
        let mut w = a;
        for (j, st) in states.iter().enumerate() {
            if j != i {
                w *= st[locals[j][idx]].conj();
            }
        }
        out[locals[i][idx]] += w;
    }
    out
}

fn block_locals(shape: &RegisterShape, blocks: &[Vec<usize>]) -> Vec<Vec<usize>> {
    blocks
        .iter()
        .map(|b| {
            let strides = shape.sub_shape(b).strides();
            (0..shape.total_dim())
                .map(|idx| {
                    let digits = shape.digits(idx);
                    b.iter().zip(&strides).map(|(&p, &s)| digits[p] * s).sum()
                })
                .collect()
        })
        .collect()
}

fn unit(mut v: Vec<C64>) -> (Vec<C64>, f64) {
    let n = crate::linalg::norm(&v);
    if n > 1e-300 {
        for z in v.iter_mut() {
            *z /= n;
        }
    }
    (v, n * n)
}

/// Alternating maximization of the overlap with products across `partition`.
fn see_saw(psi: &PureState, partition: &PartitionSpec, budget: &SeeSawBudget, seed: u64) -> (f64, Vec<Vec<C64>>) {
    let blocks = partition.blocks();
    let locals = block_locals(psi.shape(), blocks);
    let mut rng = rng_from_seed(seed);
    let mut starts: Vec<Vec<Vec<C64>>> = Vec::with_capacity(budget.restarts + 1);
    starts.push(
        blocks
            .iter()
            .map(|b| psi.marginal(b).expect("valid block").eig().eigvecs.swap_remove(0))
            .collect(),
    );
    for _ in 0..budget.restarts {
        starts.push(
            blocks
                .iter()
                .map(|b| random_pure_with(&psi.shape().sub_shape(b), &mut rng).into_amplitudes())
                .collect(),
        );
    }
    let mut best = (-1.0, Vec::new());
    for mut states in starts {
        let mut prev = -1.0;
        let mut current = 0.0;
        for _ in 0..budget.max_sweeps {
            for i in 0..blocks.len() {
                let (v, ov) = unit(contract_except(psi, &locals, &states, i));
                if ov > 1e-300 {
                    states[i] = v;
                }
                current = ov;
            }
            if current - prev < budget.gain_tol {
                break;
            }
            prev = current;
        }
        if current > best.0 + 1e-15 {
            best = (current, states);
        }
    }
    best
}

/// Distance-based measure `1 − max |⟨ψ|φ⟩|²` over products `φ` across
/// admissible partitions, via see-saw with restarts.
pub fn geometric_pwem(psi: &PureState, designated: &[usize], budget: &SeeSawBudget) -> Result<GeometricResult> {
    let partitions = enumerate_admissible_partitions(psi.shape(), designated)?;
    let mut best: Option<(f64, PartitionSpec, Vec<Vec<C64>>)> = None;
    for (idx, part) in partitions.into_iter().enumerate() {
        let (ov, states) = see_saw(psi, &part, budget, budget.seed.wrapping_add(idx as u64));
        if best.as_ref().map_or(true, |(b, _, _)| ov > *b + 1e-15) {
            best = Some((ov, part, states));
        }
    }
    let (max_overlap, partition, states) = best.expect("at least one admissible partition");
    let shape = psi.shape();
    let block_states: Vec<PureState> = partition
        .blocks()
        .iter()
        .zip(states)
        .map(|(b, v)| PureState::normalized(shape.sub_shape(b), v))
        .collect::<Result<_>>()?;
    let pairs: Vec<(Vec<usize>, &PureState)> = partition.blocks().iter().cloned().zip(block_states.iter()).collect();
    let witness = PureState::from_blocks(shape, &pairs)?;
    let max_overlap = max_overlap.min(1.0);
    Ok(GeometricResult { value: (1.0 - max_overlap).max(0.0), max_overlap, partition, witness })
}

#[derive(Debug, Clone)]
pub struct RelativeEntropyBound {
    /// Smallest relative entropy found; `+∞` when no candidate has finite value.
    pub value: f64,
    /// Label of the minimizing candidate.
    pub best: Option<String>,
    pub candidates_tried: usize,
}

impl RelativeEntropyBound {
    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
    }
}

/// Upper bound on the relative entropy of partitewise entanglement from a
/// finite candidate family: for every admissible partition the product of
/// `ρ`'s block marginals and its computational-basis dephasing, the
/// dephasing of `ρ` itself, and the caller's candidates (assumed
/// partitewise separable).
pub fn relative_entropy_pwem_upper(
    rho: &DensityMatrix,
    designated: &[usize],
    extra: &[DensityMatrix],
) -> Result<RelativeEntropyBound> {
    let partitions = enumerate_admissible_partitions(rho.shape(), designated)?;
    let mut candidates: Vec<(String, DensityMatrix)> = Vec::new();
    for part in &partitions {
        let marginals: Vec<DensityMatrix> = part
            .blocks()
            .iter()
            .map(|b| partial_trace(rho, b))
            .collect::<Result<_>>()?;
        let pairs: Vec<(Vec<usize>, &DensityMatrix)> = part.blocks().iter().cloned().zip(marginals.iter()).collect();
        let product = DensityMatrix::from_blocks(rho.shape(), &pairs)?;
        candidates.push((format!("product {}", part.label()), product.clone()));
        candidates.push((format!("dephased product {}", part.label()), product.dephased()));
    }
    candidates.push(("dephased state".to_string(), rho.dephased()));
    for (i, sigma) in extra.iter().enumerate() {
        if sigma.shape() != rho.shape() {
            return invalid("candidate lives on a different register");
        }
        candidates.push((format!("candidate {i}"), sigma.clone()));
    }
    relative_entropy_over(rho, candidates)
}

/// Minimum of `S(ρ‖σ)` over labeled candidates.
pub fn relative_entropy_over(
    rho: &DensityMatrix,
    candidates: Vec<(String, DensityMatrix)>,
) -> Result<RelativeEntropyBound> {
    let mut best = RelativeEntropyBound { value: f64::INFINITY, best: None, candidates_tried: candidates.len() };
    for (label, sigma) in candidates {
        let s = relative_entropy(rho, &sigma)?;
        if s < best.value {
            best.value = s;
            best.best = Some(label);
        }
    }
    Ok(best)
}

/// Convex-roof upper bound for a mixed state of any pure-state measure.
pub fn roof_upper_bound<F>(rho: &DensityMatrix, measure: F, cfg: &MeasureConfig) -> Result<RoofResult>
where
    F: Fn(&PureState) -> f64,
{
    convex_roof_min(rho, measure, &cfg.roof_budget, cfg.seed, &[])
}

/// Smallest eigenvalue of `ρ^{T_X}`; negative means NPT across `X`.
pub fn min_pt_eigenvalue(rho: &DensityMatrix, block: &[usize]) -> Result<f64> {
    let pt = partial_transpose(rho, block)?;
    Ok(hermitian_eig(&pt)?.eigvals.last().copied().unwrap_or(0.0))
}
