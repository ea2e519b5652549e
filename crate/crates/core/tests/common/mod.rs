//! Independent oracles for the integration suites. Linear algebra goes
//! through nalgebra and index arithmetic is done by hand, so none of these
//! share code paths with the library under test.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64 as C;
use pwent::{CMatrix, DensityMatrix, PureState, RegisterShape};
use rand::Rng;

pub fn to_na(m: &CMatrix) -> DMatrix<C> {
    DMatrix::from_fn(m.rows(), m.cols(), |r, c| m[(r, c)])
}

/// Hermitian spectrum, descending.
pub fn herm_eigvals(m: &DMatrix<C>) -> Vec<f64> {
    let mut v: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

fn digits(dims: &[usize], mut idx: usize) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for p in (0..dims.len()).rev() {
        out[p] = idx % dims[p];
        idx /= dims[p];
    }
    out
}

fn index(dims: &[usize], digits: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (d, n)| acc * n + d)
}

/// Reduced matrix on `keep` (ascending) by explicit summation.
pub fn partial_trace_brute(rho: &DensityMatrix, keep: &[usize]) -> DMatrix<C> {
    let dims = rho.shape().dims().to_vec();
    let kdims: Vec<usize> = keep.iter().map(|&p| dims[p]).collect();
    let kd: usize = kdims.iter().product();
    let mut out = DMatrix::from_element(kd, kd, C::new(0.0, 0.0));
    let n = rho.dim();
    for i in 0..n {
        let di = digits(&dims, i);
        for j in 0..n {
            let dj = digits(&dims, j);
            let traced_equal = (0..dims.len()).filter(|p| !keep.contains(p)).all(|p| di[p] == dj[p]);
            if !traced_equal {
                continue;
            }
            let ki: Vec<usize> = keep.iter().map(|&p| di[p]).collect();
            let kj: Vec<usize> = keep.iter().map(|&p| dj[p]).collect();
            out[(index(&kdims, &ki), index(&kdims, &kj))] += rho.matrix()[(i, j)];
        }
    }
    out
}

pub fn purity(m: &DMatrix<C>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}

/// `ψ` reshaped to a `d_X × d_X̄` coefficient matrix.
pub fn reshape(psi: &PureState, block: &[usize]) -> DMatrix<C> {
    let dims = psi.shape().dims().to_vec();
    let rest: Vec<usize> = (0..dims.len()).filter(|p| !block.contains(p)).collect();
    let bdims: Vec<usize> = block.iter().map(|&p| dims[p]).collect();
    let rdims: Vec<usize> = rest.iter().map(|&p| dims[p]).collect();
    let mut m = DMatrix::from_element(bdims.iter().product(), rdims.iter().product(), C::new(0.0, 0.0));
    for (i, a) in psi.amplitudes().iter().enumerate() {
        let d = digits(&dims, i);
        let r = index(&bdims, &block.iter().map(|&p| d[p]).collect::<Vec<_>>());
        let c = index(&rdims, &rest.iter().map(|&p| d[p]).collect::<Vec<_>>());
        m[(r, c)] = *a;
    }
    m
}

/// Squared Schmidt coefficients across `block | rest`, descending.
pub fn schmidt_spectrum(psi: &PureState, block: &[usize]) -> Vec<f64> {
    let mut s: Vec<f64> = reshape(psi, block).singular_values().iter().map(|x| x * x).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Wootters concurrence from the singular values of
/// `τ = Ψᵀ (σ_y ⊗ σ_y) Ψ`, `Ψ` holding the subnormalized eigenvectors.
pub fn wootters_oracle(rho: &DensityMatrix) -> f64 {
    let m = to_na(rho.matrix());
    let eig = m.symmetric_eigen();
    let cols: Vec<nalgebra::DVector<C>> = eig
        .eigenvalues
        .iter()
        .zip(eig.eigenvectors.column_iter())
        .filter(|(l, _)| **l > 1e-14)
        .map(|(l, v)| v.into_owned() * C::new(l.sqrt(), 0.0))
        .collect();
    let psi = DMatrix::from_columns(&cols);
    let mut yy = DMatrix::from_element(4, 4, C::new(0.0, 0.0));
    yy[(0, 3)] = C::new(-1.0, 0.0);
    yy[(1, 2)] = C::new(1.0, 0.0);
    yy[(2, 1)] = C::new(1.0, 0.0);
    yy[(3, 0)] = C::new(-1.0, 0.0);
    let tau = psi.transpose() * yy * &psi;
    let mut s: Vec<f64> = tau.singular_values().iter().copied().collect();
    s.resize(4, 0.0);
    s.sort_by(|a, b| b.total_cmp(a));
    (s[0] - s[1] - s[2] - s[3]).max(0.0)
}

/// All ways to attach each undesignated party to one designated party.
pub fn admissible_partitions_brute(n: usize, designated: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let free: Vec<usize> = (0..n).filter(|p| !designated.contains(p)).collect();
    let k = designated.len();
    let total = k.pow(free.len() as u32);
    (0..total)
        .map(|mut code| {
            let mut blocks: Vec<Vec<usize>> = designated.iter().map(|&d| vec![d]).collect();
            for &f in &free {
                blocks[code % k].push(f);
                code /= k;
            }
            for b in blocks.iter_mut() {
                b.sort_unstable();
            }
            blocks
        })
        .collect()
}

/// Random set partition of `0..n`, blocks sorted by smallest element.
pub fn random_set_partition<R: Rng>(n: usize, rng: &mut R) -> Vec<Vec<usize>> {
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for p in 0..n {
        let slot = rng.random_range(0..=blocks.len());
        if slot == blocks.len() {
            blocks.push(vec![p]);
        } else {
            blocks[slot].push(p);
        }
    }
    blocks
}

/// Random subset of `0..n` with at least two elements, ascending.
pub fn random_designated<R: Rng>(n: usize, rng: &mut R) -> Vec<usize> {
    loop {
        let d: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
        if d.len() >= 2 {
            return d;
        }
    }
}

pub fn random_dims<R: Rng>(n: usize, max_dim: usize, rng: &mut R) -> RegisterShape {
    RegisterShape::new((0..n).map(|_| rng.random_range(2..=max_dim)).collect()).unwrap()
}
