//! Named states, parameterized families and designated-party partitions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Result};
use crate::linalg::{orthonormalize_columns, CMatrix, C64, ZERO};
use crate::state::{party_label, DensityMatrix, PureState, RegisterShape};

/// Seedable generator used for every stochastic routine.
///
/// `ChaCha8Rng::seed_from_u64(seed)`; complex Gaussian draws take the real
/// part first, then the imaginary part, in basis order.
pub type StdRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> StdRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn check_unit(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return invalid(format!("parameter {name} = {x} outside [0, 1]"));
    }
    Ok(())
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `(1/√d) Σ_j |j…j⟩` on `n` parties of dimension `d`.
pub fn make_ghz(n: usize, d: usize) -> Result<PureState> {
    if n < 2 || d < 2 {
        return invalid(format!("GHZ needs n >= 2 and d >= 2 (got n={n}, d={d})"));
    }
    let shape = RegisterShape::new(vec![d; n])?;
    let mut amp = vec![ZERO; shape.total_dim()];
    let a = re(1.0 / (d as f64).sqrt());
    for j in 0..d {
        amp[shape.index(&vec![j; n])] = a;
    }
    PureState::new(shape, amp)
}

/// Uniform superposition of the single-excitation qubit basis states.
pub fn make_w(n: usize) -> Result<PureState> {
    if n < 2 {
        return invalid(format!("W state needs n >= 2 (got {n})"));
    }
    let shape = RegisterShape::qubits(n);
    let mut amp = vec![ZERO; shape.total_dim()];
    let a = re(1.0 / (n as f64).sqrt());
    for k in 0..n {
        amp[1 << k] = a;
    }
    PureState::new(shape, amp)
}

/// `|Φ⁺⟩ = (|00⟩ + |11⟩)/√2`.
pub fn bell() -> PureState {
    make_ghz(2, 2).expect("valid parameters")
}

/// Absolutely maximally entangled five-qubit state.
pub fn make_ame5() -> PureState {
    const TERMS: [(usize, f64); 8] = [
        (0b00000, -1.0),
        (0b01111, 1.0),
        (0b10011, -1.0),
        (0b11100, 1.0),
        (0b00110, 1.0),
        (0b01001, 1.0),
        (0b10101, 1.0),
        (0b11010, 1.0),
    ];
    let shape = RegisterShape::qubits(5);
    let mut amp = vec![ZERO; 32];
    let s = 1.0 / 8f64.sqrt();
    for (idx, sign) in TERMS {
        amp[idx] = re(sign * s);
    }
    PureState::new(shape, amp).expect("normalized by construction")
}

/// `p|φ⟩⟨φ| + (1−p) I₄/4` with `|φ⟩ = √t|00⟩ + √(1−t)|11⟩`.
pub fn fig1_state(p: f64, t: f64) -> Result<DensityMatrix> {
    check_unit("p", p)?;
    check_unit("t", t)?;
    let shape = RegisterShape::qubits(2);
    let phi = PureState::new(shape.clone(), vec![re(t.sqrt()), ZERO, ZERO, re((1.0 - t).sqrt())])?;
    phi.to_density().mix(p, &DensityMatrix::maximally_mixed(shape))
}

/// `p|Φ⁺⟩⟨Φ⁺| + (1−p)|+⟩⟨+| ⊗ |0⟩⟨0|`.
pub fn fig2a_state(p: f64) -> Result<DensityMatrix> {
    check_unit("p", p)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let plus_zero = PureState::new(RegisterShape::qubits(2), vec![re(s), ZERO, re(s), ZERO])?;
    bell().to_density().mix(p, &plus_zero.to_density())
}

/// `p|Φ⁺⟩⟨Φ⁺| + (1−p) I₄/4`.
pub fn fig2b_state(p: f64) -> Result<DensityMatrix> {
    check_unit("p", p)?;
    bell().to_density().mix(p, &DensityMatrix::maximally_mixed(RegisterShape::qubits(2)))
}

/// A split of (some of) the parties into disjoint blocks, together with
/// the designated parties whose mutual entanglement is queried.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionSpec {
    shape: RegisterShape,
    blocks: Vec<Vec<usize>>,
    designated: Vec<usize>,
}

impl PartitionSpec {
    pub fn new(shape: RegisterShape, blocks: Vec<Vec<usize>>, designated: Vec<usize>) -> Result<Self> {
        let n = shape.n_parties();
        let mut seen = vec![false; n];
        let mut blocks_sorted = Vec::with_capacity(blocks.len());
        for b in blocks {
            if b.is_empty() {
                return invalid("partition blocks must be nonempty");
            }
            let b = shape.normalize_subset(&b)?;
            for &p in &b {
                if seen[p] {
                    return invalid(format!("party {} appears in two blocks", party_label(p)));
                }
                seen[p] = true;
            }
            blocks_sorted.push(b);
        }
        check_designated(&shape, &designated)?;
        for b in &blocks_sorted {
            if b.iter().filter(|p| designated.contains(p)).count() > 1 {
                return invalid("a block holds more than one designated party");
            }
        }
        Ok(Self { shape, blocks: blocks_sorted, designated })
    }

    /// Partition with no designated parties (used for product constructions).
    pub fn blocks_only(shape: RegisterShape, blocks: Vec<Vec<usize>>) -> Result<Self> {
        Self::new(shape, blocks, Vec::new())
    }

    pub fn shape(&self) -> &RegisterShape {
        &self.shape
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn designated(&self) -> &[usize] {
        &self.designated
    }

    pub fn covers_all(&self) -> bool {
        self.blocks.iter().map(Vec::len).sum::<usize>() == self.shape.n_parties()
    }

    /// `k` blocks covering every party, block `i` seeded by designated party `i`.
    pub fn is_admissible(&self) -> bool {
        self.covers_all()
            && self.blocks.len() == self.designated.len()
            && self.blocks.iter().zip(&self.designated).all(|(b, d)| b.contains(d))
    }

    /// e.g. `AC|B`.
    pub fn label(&self) -> String {
        self.blocks
            .iter()
            .map(|b| b.iter().map(|&p| party_label(p)).collect::<String>())
            .collect::<Vec<_>>()
            .join("|")
    }
}

pub(crate) fn check_designated(shape: &RegisterShape, designated: &[usize]) -> Result<()> {
    let normalized = shape.normalize_subset(designated)?;
    if normalized.len() != designated.len() {
        return invalid("designated parties must be distinct");
    }
    Ok(())
}

/// Validates a designated set for a partitewise query (`2 ≤ k ≤ n`).
pub fn check_designated_query(shape: &RegisterShape, designated: &[usize]) -> Result<()> {
    check_designated(shape, designated)?;
    let k = designated.len();
    if k < 2 || k > shape.n_parties() {
        return invalid(format!(
            "need 2 <= k <= n designated parties (k={k}, n={})",
            shape.n_parties()
        ));
    }
    Ok(())
}

/// Every way of distributing the undesignated parties among the `k` blocks
/// seeded by the designated parties. Block `i` always holds `designated[i]`.
pub fn enumerate_admissible_partitions(
    shape: &RegisterShape,
    designated: &[usize],
) -> Result<Vec<PartitionSpec>> {
    check_designated_query(shape, designated)?;
    let k = designated.len();
    let free: Vec<usize> = shape.complement(&{
        let mut d = designated.to_vec();
        d.sort_unstable();
        d
    });
    let count = k.pow(free.len() as u32);
    let mut out = Vec::with_capacity(count);
    let mut assign = vec![0usize; free.len()];
    for _ in 0..count {
        let mut blocks: Vec<Vec<usize>> = designated.iter().map(|&d| vec![d]).collect();
        for (&p, &b) in free.iter().zip(&assign) {
            blocks[b].push(p);
        }
        out.push(PartitionSpec::new(shape.clone(), blocks, designated.to_vec())?);
        // odometer, last free party fastest
        for slot in assign.iter_mut().rev() {
            *slot += 1;
            if *slot < k {
                break;
            }
            *slot = 0;
        }
    }
    Ok(out)
}

fn gaussian_vec<R: Rng>(rng: &mut R, len: usize) -> Vec<C64> {
    (0..len)
        .map(|_| {
            let a: f64 = rng.sample(StandardNormal);
            let b: f64 = rng.sample(StandardNormal);
            C64::new(a, b)
        })
        .collect()
}

/// Normalized complex Gaussian amplitudes (Haar-distributed direction).
pub fn random_pure_with<R: Rng>(shape: &RegisterShape, rng: &mut R) -> PureState {
    loop {
        let amp = gaussian_vec(rng, shape.total_dim());
        if let Ok(s) = PureState::normalized(shape.clone(), amp) {
            return s;
        }
    }
}

pub fn random_pure(shape: &RegisterShape, seed: u64) -> PureState {
    random_pure_with(shape, &mut rng_from_seed(seed))
}

/// Tensor product of independent random block states, one per block.
pub fn random_product(partition: &PartitionSpec, seed: u64) -> Result<PureState> {
    if !partition.covers_all() {
        return invalid("random_product needs blocks covering every party");
    }
    let mut rng = rng_from_seed(seed);
    let shape = partition.shape();
    let states: Vec<PureState> = partition
        .blocks()
        .iter()
        .map(|b| random_pure_with(&shape.sub_shape(b), &mut rng))
        .collect();
    let blocks: Vec<(Vec<usize>, &PureState)> =
        partition.blocks().iter().cloned().zip(states.iter()).collect();
    PureState::from_blocks(shape, &blocks)
}

/// Haar-random unitary (polar factor of a Ginibre matrix).
pub fn random_unitary_with<R: Rng>(d: usize, rng: &mut R) -> CMatrix {
    loop {
        let g = CMatrix::from_vec(d, d, gaussian_vec(rng, d * d)).expect("sized");
        if let Some(u) = orthonormalize_columns(&g) {
            return u;
        }
    }
}

/// Random state of the given rank: `G G† / tr(G G†)` with Gaussian `G`.
pub fn random_density_with<R: Rng>(shape: &RegisterShape, rank: usize, rng: &mut R) -> DensityMatrix {
    let d = shape.total_dim();
    let rank = rank.clamp(1, d);
    let g = CMatrix::from_vec(d, rank, gaussian_vec(rng, d * rank)).expect("sized");
    let m = g.matmul(&g.adjoint()).expect("sized");
    let tr = m.trace().re;
    DensityMatrix::from_parts_unchecked(shape.clone(), m.scale_real(1.0 / tr))
}

pub fn random_density(shape: &RegisterShape, rank: usize, seed: u64) -> DensityMatrix {
    random_density_with(shape, rank, &mut rng_from_seed(seed))
}

/// Applies an independent Haar-random unitary to every party.
pub fn random_local_unitaries(shape: &RegisterShape, seed: u64) -> Vec<CMatrix> {
    let mut rng = rng_from_seed(seed);
    shape.dims().iter().map(|&d| random_unitary_with(d, &mut rng)).collect()
}

pub fn apply_local_unitaries_pure(psi: &PureState, us: &[CMatrix]) -> Result<PureState> {
    us.iter().enumerate().try_fold(psi.clone(), |s, (p, u)| s.apply_local(p, u))
}

pub fn apply_local_unitaries_mixed(rho: &DensityMatrix, us: &[CMatrix]) -> Result<DensityMatrix> {
    us.iter().enumerate().try_fold(rho.clone(), |s, (p, u)| s.apply_local(p, u))
}
