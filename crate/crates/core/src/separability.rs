//! Finest tensor factorization of pure states and partitewise separability.
//!
//! A pure state factorizes across `S | S̄` exactly when its marginal on `S`
//! is pure, so the finest product decomposition is found by scanning party
//! subsets in increasing size and splitting off the first one whose
//! marginal has (numerically) vanishing linear entropy.

use crate::error::Result;
use crate::linalg::{inner, C64};
use crate::state::{linear_entropy, partial_trace, partial_transpose, DensityMatrix, PureState, RegisterShape, ZERO_EIGENVALUE};
use crate::states::{check_designated_query, PartitionSpec};

/// Linear-entropy threshold below which a marginal counts as pure.
pub const DEFAULT_TOL_FACT: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct Factor {
    /// Original party indices, ascending.
    pub parties: Vec<usize>,
    pub state: PureState,
}

#[derive(Debug, Clone)]
pub struct Factorization {
    /// Ordered by smallest party index.
    pub factors: Vec<Factor>,
    pub tol: f64,
    /// Some scanned marginal had linear entropy in `[tol, 10·tol]`.
    pub borderline: bool,
}

impl Factorization {
    pub fn party_sets(&self) -> Vec<Vec<usize>> {
        self.factors.iter().map(|f| f.parties.clone()).collect()
    }

    pub fn factor_of(&self, party: usize) -> &Factor {
        self.factors
            .iter()
            .find(|f| f.parties.contains(&party))
            .expect("factors cover every party")
    }

    /// Tensor product of the factors on the original register.
    pub fn reconstruct(&self, shape: &RegisterShape) -> Result<PureState> {
        let blocks: Vec<(Vec<usize>, &PureState)> =
            self.factors.iter().map(|f| (f.parties.clone(), &f.state)).collect();
        PureState::from_blocks(shape, &blocks)
    }

    pub fn is_single(&self) -> bool {
        self.factors.len() == 1
    }
}

/// Ascending `size`-subsets of `0..n` in lexicographic order.
pub(crate) fn subsets_of_size(n: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < size - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, size, &mut Vec::with_capacity(size), &mut out);
    out
}

fn dominant_vector(rho: &DensityMatrix) -> Vec<C64> {
    rho.eig().eigvecs.into_iter().next().expect("nonempty")
}

fn split_recursive(state: PureState, parties: Vec<usize>, tol: f64, out: &mut Vec<Factor>, borderline: &mut bool) {
    let n = parties.len();
    if n == 1 {
        out.push(Factor { parties, state });
        return;
    }
    for size in 1..=n / 2 {
        for subset in subsets_of_size(n, size) {
            let marginal = state.marginal(&subset).expect("valid subset");
            let le = linear_entropy(&marginal);
            if (tol..=10.0 * tol).contains(&le) {
                *borderline = true;
            }
            if le >= tol {
                continue;
            }
            let shape = state.shape();
            let rest: Vec<usize> = shape.complement(&subset);
            let head_amp = dominant_vector(&marginal);
            // rest amplitudes: contract ψ with ⟨head|
            let m = state.bipartite_matrix(&subset).expect("valid subset");
            let rest_amp: Vec<C64> = (0..m.cols())
                .map(|c| (0..m.rows()).map(|r| head_amp[r].conj() * m[(r, c)]).sum())
                .collect();
            let head = PureState::normalized(shape.sub_shape(&subset), head_amp).expect("unit eigenvector");
            let tail = PureState::normalized(shape.sub_shape(&rest), rest_amp).expect("nonzero contraction");
            let head_parties = subset.iter().map(|&i| parties[i]).collect();
            let tail_parties = rest.iter().map(|&i| parties[i]).collect();
            split_recursive(head, head_parties, tol, out, borderline);
            split_recursive(tail, tail_parties, tol, out, borderline);
            return;
        }
    }
    out.push(Factor { parties, state });
}

/// Finest decomposition of `psi` into non-biseparable tensor factors.
///
/// The global phase is folded into the first factor so that
/// [`Factorization::reconstruct`] returns `psi` itself.
pub fn finest_factorization(psi: &PureState, tol: f64) -> Factorization {
    let n = psi.shape().n_parties();
    let mut factors = Vec::new();
    let mut borderline = false;
    split_recursive(psi.clone(), (0..n).collect(), tol, &mut factors, &mut borderline);
    factors.sort_by_key(|f| f.parties[0]);
    let mut fact = Factorization { factors, tol, borderline };
    if fact.factors.len() > 1 {
        let prod = fact.reconstruct(psi.shape()).expect("factors partition the register");
        let c = inner(prod.amplitudes(), psi.amplitudes());
        if c.norm() > 1e-300 {
            let first = &mut fact.factors[0];
            first.state = first.state.with_phase(c.arg());
        }
    }
    fact
}

/// Outcome of the pure-state partitewise separability decision.
#[derive(Debug, Clone)]
pub struct KpwDecision {
    pub separable: bool,
    /// Admissible partition across which the state factorizes.
    pub witness: Option<PartitionSpec>,
    pub factorization: Factorization,
}

/// Decides whether `psi` is k-partitewise separable up to `designated`:
/// true iff no factor of the finest factorization holds two designated parties.
pub fn is_kpw_separable_pure(psi: &PureState, designated: &[usize], tol: f64) -> Result<KpwDecision> {
    check_designated_query(psi.shape(), designated)?;
    let factorization = finest_factorization(psi, tol);
    let separable = factorization
        .factors
        .iter()
        .all(|f| f.parties.iter().filter(|p| designated.contains(p)).count() <= 1);
    let witness = if separable {
        let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); designated.len()];
        for f in &factorization.factors {
            let slot = designated.iter().position(|d| f.parties.contains(d)).unwrap_or(0);
            blocks[slot].extend_from_slice(&f.parties);
        }
        Some(PartitionSpec::new(psi.shape().clone(), blocks, designated.to_vec())?)
    } else {
        None
    };
    Ok(KpwDecision { separable, witness, factorization })
}

/// `ρ` equals the product of its single-party marginals within `tol`
/// (Frobenius norm).
pub fn is_product_reduced(rho: &DensityMatrix, tol: f64) -> bool {
    let n = rho.shape().n_parties();
    let marginals: Vec<DensityMatrix> = (0..n)
        .map(|p| partial_trace(rho, &[p]).expect("valid party"))
        .collect();
    let blocks: Vec<(Vec<usize>, &DensityMatrix)> =
        marginals.iter().enumerate().map(|(p, m)| (vec![p], m)).collect();
    let product = DensityMatrix::from_blocks(rho.shape(), &blocks).expect("single-party blocks");
    rho.distance_frobenius(&product) < tol
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NecessaryVerdict {
    /// A necessary condition for partitewise separability fails.
    CertifiedEntangled,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NecessaryCheckReport {
    /// Designated marginal equals the product of its single-party marginals.
    pub product_reduced: bool,
    /// Designated marginal is PPT across every bipartition of its parties.
    pub marginal_ppt_all_cuts: bool,
    /// Global state has rank one; only then does a non-product marginal certify.
    pub global_pure: bool,
    pub verdict: NecessaryVerdict,
}

/// Necessary criteria for k-partitewise separability of a (possibly mixed)
/// state up to `designated`.
///
/// A k-partitewise separable pure state has a product designated marginal;
/// a separable mixed state has a fully separable one, hence PPT across every
/// cut. Failing either applicable check certifies entanglement; otherwise the
/// verdict is inconclusive.
pub fn mixed_kpw_necessary_checks(rho: &DensityMatrix, designated: &[usize]) -> Result<NecessaryCheckReport> {
    check_designated_query(rho.shape(), designated)?;
    let marginal = partial_trace(rho, designated)?;
    let product_reduced = is_product_reduced(&marginal, 1e-8);
    let k = marginal.shape().n_parties();
    let mut ppt = true;
    // cuts containing the first party cover every bipartition once
    'outer: for size in 0..k - 1 {
        for rest in subsets_of_size(k - 1, size) {
            let mut cut = vec![0];
            cut.extend(rest.iter().map(|&i| i + 1));
            let pt = partial_transpose(&marginal, &cut)?;
            let eig = crate::linalg::hermitian_eig_tol(&pt, 1e-8)?;
            if eig.eigvals.last().copied().unwrap_or(0.0) < -1e-9 {
                ppt = false;
                break 'outer;
            }
        }
    }
    let global_pure = rho.eig().rank(ZERO_EIGENVALUE) == 1;
    let verdict = if !ppt || (global_pure && !product_reduced) {
        NecessaryVerdict::CertifiedEntangled
    } else {
        NecessaryVerdict::Inconclusive
    };
    Ok(NecessaryCheckReport { product_reduced, marginal_ppt_all_cuts: ppt, global_pure, verdict })
}
