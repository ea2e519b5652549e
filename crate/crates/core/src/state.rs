//! Registers, pure states, density matrices and the reductions on them.
//!
//! Basis order is row-major mixed-radix over party index `0..n`: party 0 is
//! the most significant digit. Reduced objects keep the original relative
//! order of the parties they retain.

use crate::error::{invalid, Error, Result};
use crate::linalg::{hermitian_eig_tol, inner, kron, kron_vec, norm, CMatrix, SpectralDecomposition, C64, ZERO};

/// Numerical tolerances shared by the whole crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub norm: f64,
    pub herm: f64,
    pub psd: f64,
    pub recon: f64,
    pub eig: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { norm: 1e-9, herm: 1e-9, psd: 1e-9, recon: 1e-8, eig: 1e-8 }
    }
}

/// Eigenvalues below this are exact zeros in entropies and ranks.
pub const ZERO_EIGENVALUE: f64 = 1e-12;

/// Ordered per-party local dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RegisterShape {
    dims: Vec<usize>,
}

impl RegisterShape {
    /// Dimension-1 parties are accepted; they appear as trivial ancillas.
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return invalid("a register needs at least one party");
        }
        if dims.iter().any(|&d| d == 0) {
            return invalid("local dimensions must be positive");
        }
        let total = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d));
        if total.is_none() {
            return invalid("total dimension overflows");
        }
        Ok(Self { dims })
    }

    pub fn qubits(n: usize) -> Self {
        Self { dims: vec![2; n.max(1)] }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn n_parties(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Place value of each party's digit.
    pub fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.dims.len()];
        for i in (0..self.dims.len().saturating_sub(1)).rev() {
            s[i] = s[i + 1] * self.dims[i + 1];
        }
        s
    }

    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for i in (0..self.dims.len()).rev() {
            out[i] = index % self.dims[i];
            index /= self.dims[i];
        }
        out
    }

    pub fn index(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.dims).fold(0, |acc, (&x, &d)| acc * d + x)
    }

    /// Shape of the parties in `parties` (taken in the given order).
    pub fn sub_shape(&self, parties: &[usize]) -> RegisterShape {
        RegisterShape { dims: parties.iter().map(|&p| self.dims[p]).collect() }
    }

    /// Shape with one extra party appended.
    pub fn with_appended(&self, dim: usize) -> RegisterShape {
        let mut dims = self.dims.clone();
        dims.push(dim);
        RegisterShape { dims }
    }

    /// Sorted, deduplicated, range-checked party subset.
    pub fn normalize_subset(&self, parties: &[usize]) -> Result<Vec<usize>> {
        let mut v = parties.to_vec();
        v.sort_unstable();
        let len = v.len();
        v.dedup();
        if v.len() != len {
            return invalid(format!("party subset {parties:?} has duplicates"));
        }
        if let Some(&p) = v.iter().find(|&&p| p >= self.n_parties()) {
            return invalid(format!("party {p} out of range for {} parties", self.n_parties()));
        }
        Ok(v)
    }

    pub fn complement(&self, parties: &[usize]) -> Vec<usize> {
        (0..self.n_parties()).filter(|p| !parties.contains(p)).collect()
    }

    /// Bookkeeping for splitting the register into `keep` and the rest.
    pub(crate) fn split(&self, keep: &[usize]) -> Split {
        let rest = self.complement(keep);
        let keep_shape = self.sub_shape(keep);
        let rest_shape = self.sub_shape(&rest);
        let strides = self.strides();
        let keep_dim = keep_shape.total_dim();
        let rest_dim = rest_shape.total_dim();
        let offsets = |parties: &[usize], shape: &RegisterShape| -> Vec<usize> {
            (0..shape.total_dim())
                .map(|i| {
                    shape
                        .digits(i)
                        .iter()
                        .zip(parties)
                        .map(|(&x, &p)| x * strides[p])
                        .sum()
                })
                .collect()
        };
        Split {
            keep_offsets: offsets(keep, &keep_shape),
            rest_offsets: offsets(&rest, &rest_shape),
            keep_dim,
            rest_dim,
        }
    }
}

/// Full index = keep_offsets[k] + rest_offsets[r].
pub(crate) struct Split {
    pub keep_offsets: Vec<usize>,
    pub rest_offsets: Vec<usize>,
    pub keep_dim: usize,
    pub rest_dim: usize,
}

/// Party labels `A, B, C, …` for display.
pub fn party_label(p: usize) -> String {
    if p < 26 {
        ((b'A' + p as u8) as char).to_string()
    } else {
        format!("P{p}")
    }
}

pub fn subset_label(parties: &[usize]) -> String {
    parties.iter().map(|&p| party_label(p)).collect()
}

/// Applies the operator `u` on party `party` to an amplitude vector.
fn apply_local_to_vec(shape: &RegisterShape, party: usize, u: &CMatrix, v: &[C64]) -> Vec<C64> {
    let split = shape.split(&[party]);
    let d = split.keep_dim;
    let mut out = vec![ZERO; v.len()];
    let mut buf = vec![ZERO; d];
    for &r in &split.rest_offsets {
        for (k, b) in buf.iter_mut().enumerate() {
            *b = v[split.keep_offsets[k] + r];
        }
        for i in 0..d {
            let mut acc = ZERO;
            for (j, b) in buf.iter().enumerate() {
                acc += u[(i, j)] * b;
            }
            out[split.keep_offsets[i] + r] = acc;
        }
    }
    out
}

fn check_local_op(shape: &RegisterShape, party: usize, u: &CMatrix) -> Result<()> {
    if party >= shape.n_parties() {
        return invalid(format!("party {party} out of range"));
    }
    let d = shape.dims()[party];
    if u.rows() != d || u.cols() != d {
        return invalid(format!("local operator must be {d}x{d}"));
    }
    Ok(())
}

/// Normalized amplitude vector over a register.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    shape: RegisterShape,
    amp: Vec<C64>,
}

impl PureState {
    pub fn new(shape: RegisterShape, amp: Vec<C64>) -> Result<Self> {
        Self::new_with_tol(shape, amp, Tolerances::default().norm)
    }

    pub fn new_with_tol(shape: RegisterShape, amp: Vec<C64>, tol_norm: f64) -> Result<Self> {
        if amp.len() != shape.total_dim() {
            return invalid(format!(
                "{} amplitudes for a register of dimension {}",
                amp.len(),
                shape.total_dim()
            ));
        }
        let n = norm(&amp);
        if (n - 1.0).abs() > tol_norm {
            return Err(Error::InvalidState(format!("state norm is {n}, expected 1")));
        }
        Ok(Self { shape, amp })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(shape: RegisterShape, mut amp: Vec<C64>) -> Result<Self> {
        if amp.len() != shape.total_dim() {
            return invalid("amplitude count does not match register");
        }
        let n = norm(&amp);
        if !(n > 1e-300) || !n.is_finite() {
            return Err(Error::InvalidState("cannot normalize the zero vector".into()));
        }
        for z in amp.iter_mut() {
            *z /= n;
        }
        Ok(Self { shape, amp })
    }

    pub fn basis(shape: RegisterShape, digits: &[usize]) -> Result<Self> {
        if digits.len() != shape.n_parties()
            || digits.iter().zip(shape.dims()).any(|(&x, &d)| x >= d)
        {
            return invalid(format!("basis digits {digits:?} do not fit {:?}", shape.dims()));
        }
        let mut amp = vec![ZERO; shape.total_dim()];
        amp[shape.index(digits)] = C64::new(1.0, 0.0);
        Ok(Self { shape, amp })
    }

    pub fn shape(&self) -> &RegisterShape {
        &self.shape
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amp
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amp
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix { shape: self.shape.clone(), mat: CMatrix::outer(&self.amp) }
    }

    /// `ψ` reshaped into a `keep × rest` matrix (the Schmidt matrix).
    pub fn bipartite_matrix(&self, keep: &[usize]) -> Result<CMatrix> {
        let keep = self.shape.normalize_subset(keep)?;
        let split = self.shape.split(&keep);
        let mut m = CMatrix::zeros(split.keep_dim, split.rest_dim);
        for (k, &ko) in split.keep_offsets.iter().enumerate() {
            for (r, &ro) in split.rest_offsets.iter().enumerate() {
                m[(k, r)] = self.amp[ko + ro];
            }
        }
        Ok(m)
    }

    /// Reduced state on `keep` (original party order).
    pub fn marginal(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let keep = self.shape.normalize_subset(keep)?;
        if keep.is_empty() {
            return invalid("cannot keep an empty party set");
        }
        let m = self.bipartite_matrix(&keep)?;
        let mut mat = m.matmul(&m.adjoint())?;
        mat.hermitize();
        Ok(DensityMatrix { shape: self.shape.sub_shape(&keep), mat })
    }

    /// `self ⊗ other`, other's parties appended.
    pub fn tensor(&self, other: &PureState) -> PureState {
        let mut dims = self.shape.dims().to_vec();
        dims.extend_from_slice(other.shape.dims());
        PureState { shape: RegisterShape { dims }, amp: kron_vec(&self.amp, &other.amp) }
    }

    /// Assembles a product state from block states living on the given
    /// party subsets of `shape`. Blocks must partition all parties.
    pub fn from_blocks(shape: &RegisterShape, blocks: &[(Vec<usize>, &PureState)]) -> Result<Self> {
        check_block_cover(shape, blocks.iter().map(|(p, s)| (p.as_slice(), s.shape())))?;
        let strides_per_block: Vec<Vec<usize>> =
            blocks.iter().map(|(_, s)| s.shape().strides()).collect();
        let amp = (0..shape.total_dim())
            .map(|i| {
                let digits = shape.digits(i);
                blocks
                    .iter()
                    .zip(&strides_per_block)
                    .map(|((parties, st), strides)| {
                        let local: usize =
                            parties.iter().zip(strides).map(|(&p, &s)| digits[p] * s).sum();
                        st.amp[local]
                    })
                    .product()
            })
            .collect();
        Ok(Self { shape: shape.clone(), amp })
    }

    /// `(I ⊗ … ⊗ U ⊗ … ⊗ I)|ψ⟩` with `U` on `party`.
    pub fn apply_local(&self, party: usize, u: &CMatrix) -> Result<PureState> {
        check_local_op(&self.shape, party, u)?;
        Ok(PureState { shape: self.shape.clone(), amp: apply_local_to_vec(&self.shape, party, u, &self.amp) })
    }

    pub fn with_phase(&self, theta: f64) -> PureState {
        let ph = C64::from_polar(1.0, theta);
        PureState { shape: self.shape.clone(), amp: self.amp.iter().map(|z| z * ph).collect() }
    }
}

fn check_block_cover<'a>(
    shape: &RegisterShape,
    blocks: impl Iterator<Item = (&'a [usize], &'a RegisterShape)>,
) -> Result<()> {
    let mut seen = vec![false; shape.n_parties()];
    for (parties, bshape) in blocks {
        if parties.len() != bshape.n_parties() {
            return invalid("block state does not match its party count");
        }
        for (&p, &d) in parties.iter().zip(bshape.dims()) {
            if p >= shape.n_parties() || seen[p] {
                return invalid(format!("party {p} repeated or out of range in blocks"));
            }
            if shape.dims()[p] != d {
                return invalid(format!("block dimension {d} does not match party {p}"));
            }
            seen[p] = true;
        }
    }
    if seen.iter().any(|s| !s) {
        return invalid("blocks do not cover every party");
    }
    Ok(())
}

/// Hermitian, positive semidefinite, trace-one matrix over a register.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    shape: RegisterShape,
    mat: CMatrix,
}

impl DensityMatrix {
    pub fn new(shape: RegisterShape, mat: CMatrix) -> Result<Self> {
        Self::new_with_tol(shape, mat, &Tolerances::default())
    }

    pub fn new_with_tol(shape: RegisterShape, mut mat: CMatrix, tol: &Tolerances) -> Result<Self> {
        let d = shape.total_dim();
        if mat.rows() != d || mat.cols() != d {
            return invalid(format!("density matrix must be {d}x{d}"));
        }
        let herr = mat.hermiticity_error();
        if herr > tol.herm {
            return Err(Error::InvalidState(format!("matrix not Hermitian (deviation {herr:.3e})")));
        }
        mat.hermitize();
        let tr = mat.trace().re;
        if (tr - 1.0).abs() > tol.norm {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let eig = hermitian_eig_tol(&mat, tol.herm)?;
        let min = eig.eigvals.last().copied().unwrap_or(0.0);
        if min < -tol.psd {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(Self { shape, mat })
    }

    /// Skips validation; callers guarantee the invariants by construction.
    pub(crate) fn from_parts_unchecked(shape: RegisterShape, mut mat: CMatrix) -> Self {
        mat.hermitize();
        Self { shape, mat }
    }

    pub fn maximally_mixed(shape: RegisterShape) -> Self {
        let d = shape.total_dim();
        Self { shape, mat: CMatrix::identity(d).scale_real(1.0 / d as f64) }
    }

    /// `Σ p_i |ψ_i⟩⟨ψ_i|`; weights must be nonnegative and sum to one.
    pub fn from_ensemble(ensemble: &[(f64, PureState)]) -> Result<Self> {
        let Some((_, first)) = ensemble.first() else {
            return invalid("empty ensemble");
        };
        let shape = first.shape().clone();
        let total: f64 = ensemble.iter().map(|(w, _)| w).sum();
        if ensemble.iter().any(|(w, _)| *w < 0.0) || (total - 1.0).abs() > Tolerances::default().norm
        {
            return invalid(format!("ensemble weights must be nonnegative and sum to 1 (sum {total})"));
        }
        let d = shape.total_dim();
        let mut mat = CMatrix::zeros(d, d);
        for (w, psi) in ensemble {
            if psi.shape() != &shape {
                return invalid("ensemble members live on different registers");
            }
            let a = psi.amplitudes();
            for i in 0..d {
                let ai = a[i] * *w;
                if ai == ZERO {
                    continue;
                }
                for j in 0..d {
                    mat[(i, j)] += ai * a[j].conj();
                }
            }
        }
        Ok(Self::from_parts_unchecked(shape, mat))
    }

    pub fn shape(&self) -> &RegisterShape {
        &self.shape
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn eig(&self) -> SpectralDecomposition {
        hermitian_eig_tol(&self.mat, f64::INFINITY).expect("density matrix is square")
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.eig().eigvals
    }

    /// Number of eigenvalues above `ZERO_EIGENVALUE`.
    pub fn rank(&self) -> usize {
        self.eig().rank(ZERO_EIGENVALUE)
    }

    pub fn purity(&self) -> f64 {
        self.mat.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        partial_trace(self, keep)
    }

    /// `p·self + (1−p)·other`.
    pub fn mix(&self, p: f64, other: &DensityMatrix) -> Result<DensityMatrix> {
        if self.shape != other.shape {
            return invalid("cannot mix states on different registers");
        }
        if !(0.0..=1.0).contains(&p) {
            return invalid(format!("mixing weight {p} outside [0, 1]"));
        }
        let mat = &self.mat.scale_real(p) + &other.mat.scale_real(1.0 - p);
        Ok(Self::from_parts_unchecked(self.shape.clone(), mat))
    }

    /// `self ⊗ other`, other's parties appended.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let mut dims = self.shape.dims().to_vec();
        dims.extend_from_slice(other.shape.dims());
        Self::from_parts_unchecked(RegisterShape { dims }, kron(&self.mat, &other.mat))
    }

    /// Product of block states placed on party subsets of `shape`.
    pub fn from_blocks(shape: &RegisterShape, blocks: &[(Vec<usize>, &DensityMatrix)]) -> Result<Self> {
        check_block_cover(shape, blocks.iter().map(|(p, s)| (p.as_slice(), s.shape())))?;
        let d = shape.total_dim();
        let locals: Vec<Vec<usize>> = blocks
            .iter()
            .map(|(parties, st)| {
                let strides = st.shape().strides();
                (0..d)
                    .map(|i| {
                        let digits = shape.digits(i);
                        parties.iter().zip(&strides).map(|(&p, &s)| digits[p] * s).sum()
                    })
                    .collect()
            })
            .collect();
        let mut mat = CMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                let mut z = C64::new(1.0, 0.0);
                for ((_, st), loc) in blocks.iter().zip(&locals) {
                    z *= st.mat[(loc[i], loc[j])];
                    if z == ZERO {
                        break;
                    }
                }
                mat[(i, j)] = z;
            }
        }
        Ok(Self::from_parts_unchecked(shape.clone(), mat))
    }

    /// `U ρ U†` with `U` acting on one party.
    pub fn apply_local(&self, party: usize, u: &CMatrix) -> Result<DensityMatrix> {
        check_local_op(&self.shape, party, u)?;
        let d = self.dim();
        // Columns first: M = (U⊗I) ρ.
        let mut m = CMatrix::zeros(d, d);
        for j in 0..d {
            let col = apply_local_to_vec(&self.shape, party, u, &self.mat.col(j));
            for i in 0..d {
                m[(i, j)] = col[i];
            }
        }
        // Then rows: M (U⊗I)† = ((U⊗I) M†)†.
        let mut out = CMatrix::zeros(d, d);
        for i in 0..d {
            let row: Vec<C64> = m.row(i).iter().map(|z| z.conj()).collect();
            let r = apply_local_to_vec(&self.shape, party, u, &row);
            for j in 0..d {
                out[(i, j)] = r[j].conj();
            }
        }
        Ok(Self::from_parts_unchecked(self.shape.clone(), out))
    }

    /// Diagonal part in the computational basis.
    pub fn dephased(&self) -> DensityMatrix {
        let d = self.dim();
        let diag: Vec<f64> = (0..d).map(|i| self.mat[(i, i)].re).collect();
        Self::from_parts_unchecked(self.shape.clone(), CMatrix::from_real_diag(&diag))
    }

    pub fn distance_frobenius(&self, other: &DensityMatrix) -> f64 {
        (&self.mat - &other.mat).frobenius_norm()
    }
}

/// Reduced state on `keep`, which may be the full party set.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let keep = rho.shape.normalize_subset(keep)?;
    if keep.is_empty() {
        return invalid("cannot keep an empty party set");
    }
    if keep.len() == rho.shape.n_parties() {
        return Ok(rho.clone());
    }
    let split = rho.shape.split(&keep);
    let mut out = CMatrix::zeros(split.keep_dim, split.keep_dim);
    for (a, &ao) in split.keep_offsets.iter().enumerate() {
        for (b, &bo) in split.keep_offsets.iter().enumerate() {
            let mut acc = ZERO;
            for &r in &split.rest_offsets {
                acc += rho.mat[(ao + r, bo + r)];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(DensityMatrix::from_parts_unchecked(rho.shape.sub_shape(&keep), out))
}

/// `ρ^{T_S}`: transpose of the digits of the parties in `subset`.
pub fn partial_transpose(rho: &DensityMatrix, subset: &[usize]) -> Result<CMatrix> {
    partial_transpose_matrix(&rho.shape, &rho.mat, subset)
}

/// Partial transpose of any operator on `shape`; an involution.
pub fn partial_transpose_matrix(shape: &RegisterShape, m: &CMatrix, subset: &[usize]) -> Result<CMatrix> {
    let subset = shape.normalize_subset(subset)?;
    if subset.is_empty() || subset.len() == shape.n_parties() {
        return invalid("partial transpose needs a nonempty proper party subset");
    }
    let d = shape.total_dim();
    if m.rows() != d || m.cols() != d {
        return invalid(format!("operator must be {d}x{d}"));
    }
    let split = shape.split(&subset);
    let mut out = CMatrix::zeros(d, d);
    for &ra in &split.rest_offsets {
        for &rb in &split.rest_offsets {
            for &sa in &split.keep_offsets {
                for &sb in &split.keep_offsets {
                    out[(sa + ra, sb + rb)] = m[(sb + ra, sa + rb)];
                }
            }
        }
    }
    Ok(out)
}

/// `1 − tr ρ²`.
/// Purity defects below this are rounding; for a pure marginal they would
/// otherwise surface as ~1e-8 after a square root.
const PURITY_ROUNDOFF: f64 = 1e-14;

pub fn linear_entropy(rho: &DensityMatrix) -> f64 {
    let defect = 1.0 - rho.purity();
    if defect < PURITY_ROUNDOFF {
        0.0
    } else {
        defect
    }
}

fn xlog2x(x: f64) -> f64 {
    if x <= ZERO_EIGENVALUE {
        0.0
    } else {
        x * x.log2()
    }
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    -rho.eigenvalues().into_iter().map(xlog2x).sum::<f64>()
}

/// `tr ρ (log₂ρ − log₂σ)`, or `+∞` when the support of `ρ` leaks outside
/// the support of `σ`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.shape != sigma.shape {
        return invalid("relative entropy of states on different registers");
    }
    let neg_entropy: f64 = rho.eigenvalues().into_iter().map(xlog2x).sum();
    let es = sigma.eig();
    let mut cross = 0.0;
    for (&lam, v) in es.eigvals.iter().zip(&es.eigvecs) {
        let weight = rho.mat.expectation(v);
        if lam <= ZERO_EIGENVALUE {
            if weight > 1e-10 {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        cross += weight * lam.log2();
    }
    Ok((neg_entropy - cross).max(0.0))
}

/// `|⟨ψ|φ⟩|²`.
pub fn overlap(psi: &PureState, phi: &PureState) -> Result<f64> {
    if psi.shape != phi.shape {
        return invalid("overlap of states on different registers");
    }
    Ok(inner(&psi.amp, &phi.amp).norm_sqr().min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_eig, trace_norm, ONE};

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn bell() -> PureState {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        PureState::new(RegisterShape::qubits(2), vec![r(s), ZERO, ZERO, r(s)]).unwrap()
    }

    #[test]
    fn mixed_radix_roundtrip() {
        let shape = RegisterShape::new(vec![2, 3, 4]).unwrap();
        for i in 0..24 {
            assert_eq!(shape.index(&shape.digits(i)), i);
        }
        assert_eq!(shape.strides(), vec![12, 4, 1]);
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let rho = bell().to_density();
        let a = partial_trace(&rho, &[0]).unwrap();
        assert!(a.matrix().max_abs_diff(&CMatrix::identity(2).scale_real(0.5)) < 1e-15);
    }

    #[test]
    fn empty_keep_rejected() {
        let rho = bell().to_density();
        assert!(partial_trace(&rho, &[]).is_err());
        assert!(partial_transpose(&rho, &[]).is_err());
        assert!(partial_transpose(&rho, &[0, 1]).is_err());
    }

    #[test]
    fn bell_partial_transpose_spectrum() {
        let pt = partial_transpose(&bell().to_density(), &[0]).unwrap();
        let eig = hermitian_eig(&pt).unwrap();
        assert!((eig.eigvals[3] + 0.5).abs() < 1e-14);
        assert!((trace_norm(&pt).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn entropies() {
        let mixed = DensityMatrix::maximally_mixed(RegisterShape::qubits(2));
        assert!((linear_entropy(&mixed) - 0.75).abs() < 1e-15);
        assert!(linear_entropy(&bell().to_density()).abs() < 1e-15);
        let d = DensityMatrix::new(RegisterShape::qubits(1), CMatrix::from_real_diag(&[2.0 / 3.0, 1.0 / 3.0]))
            .unwrap();
        assert!((linear_entropy(&d) - 4.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn relative_entropy_cases() {
        let q = RegisterShape::qubits(1);
        let zero = PureState::basis(q.clone(), &[0]).unwrap().to_density();
        let one = PureState::basis(q.clone(), &[1]).unwrap().to_density();
        let mixed = DensityMatrix::maximally_mixed(q);
        assert!(relative_entropy(&zero, &zero).unwrap().abs() < 1e-12);
        assert!((relative_entropy(&zero, &mixed).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(relative_entropy(&zero, &one).unwrap(), f64::INFINITY);
        let two = DensityMatrix::maximally_mixed(RegisterShape::qubits(2));
        assert!(relative_entropy(&zero, &two).is_err());
    }

    #[test]
    fn overlap_cases() {
        let q = RegisterShape::qubits(1);
        let zero = PureState::basis(q.clone(), &[0]).unwrap();
        let one = PureState::basis(q, &[1]).unwrap();
        assert_eq!(overlap(&zero, &one).unwrap(), 0.0);
        assert!((overlap(&bell(), &bell()).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn density_validation() {
        let q = RegisterShape::qubits(1);
        let bad_trace = CMatrix::from_real_diag(&[1.0, 1.0]);
        assert!(DensityMatrix::new(q.clone(), bad_trace).is_err());
        let negative = CMatrix::from_real_diag(&[1.5, -0.5]);
        assert!(DensityMatrix::new(q.clone(), negative).is_err());
        let non_herm = CMatrix::from_vec(2, 2, vec![r(0.5), ONE, ZERO, r(0.5)]).unwrap();
        assert!(DensityMatrix::new(q, non_herm).is_err());
    }

    #[test]
    fn blocks_respect_party_placement() {
        // |1⟩ on party 0 and |0⟩ on party 2, Bell-free middle |1⟩.
        let q = RegisterShape::qubits(1);
        let one = PureState::basis(q.clone(), &[1]).unwrap();
        let zero = PureState::basis(q, &[0]).unwrap();
        let shape = RegisterShape::qubits(3);
        let s = PureState::from_blocks(&shape, &[(vec![0, 2], &one.tensor(&zero)), (vec![1], &one)])
            .unwrap();
        assert_eq!(s.amplitudes()[0b110], ONE);
    }

    #[test]
    fn local_unitary_on_density_matches_pure() {
        let h = CMatrix::from_vec(2, 2, vec![r(1.0), r(1.0), r(1.0), r(-1.0)])
            .unwrap()
            .scale_real(std::f64::consts::FRAC_1_SQRT_2);
        let psi = bell().apply_local(1, &h).unwrap();
        let rho = bell().to_density().apply_local(1, &h).unwrap();
        assert!(rho.matrix().max_abs_diff(psi.to_density().matrix()) < 1e-14);
    }
}
