//! Dense complex matrices and the Hermitian eigensolver.
//!
//! Everything is row-major and sized for desk-scale registers (sides up to a
//! few hundred). The eigensolver is a cyclic complex Jacobi iteration, which
//! is slow for large matrices but deterministic and accurate to machine
//! precision on the sizes used here.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{invalid, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return invalid(format!(
                "matrix data has {} entries, expected {}x{}",
                data.len(),
                rows,
                cols
            ));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    /// Column vector from amplitudes.
    pub fn column(v: &[C64]) -> Self {
        Self { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    /// `|v⟩⟨v|`.
    pub fn outer(v: &[C64]) -> Self {
        let n = v.len();
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn row(&self, r: usize) -> &[C64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m[(c, r)] = self[(r, c)].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m[(c, r)] = self[(r, c)];
            }
        }
        m
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest elementwise deviation from Hermiticity.
    pub fn hermiticity_error(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut err: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                err = err.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        err
    }

    /// Symmetrizes `(M + M†)/2` in place; diagonal made exactly real.
    pub fn hermitize(&mut self) {
        let n = self.rows;
        for i in 0..n {
            self.data[i * n + i].im = 0.0;
            for j in (i + 1)..n {
                let avg = (self.data[i * n + j] + self.data[j * n + i].conj()) * 0.5;
                self.data[i * n + j] = avg;
                self.data[j * n + i] = avg.conj();
            }
        }
    }

    pub fn matmul(&self, other: &CMatrix) -> Result<CMatrix> {
        if self.cols != other.rows {
            return invalid(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            ));
        }
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let orow = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    /// `⟨v|M|v⟩` for Hermitian `M` (real part).
    pub fn expectation(&self, v: &[C64]) -> f64 {
        let mv = self.mul_vec(v);
        v.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum::<C64>().re
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + c]
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.matmul(rhs).expect("matrix product dimension mismatch")
    }
}

/// Kronecker product `a ⊗ b` in row-major basis order.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = CMatrix::zeros(rows, cols);
    for ar in 0..a.rows {
        for ac in 0..a.cols {
            let x = a[(ar, ac)];
            if x == ZERO {
                continue;
            }
            for br in 0..b.rows {
                for bc in 0..b.cols {
                    out[(ar * b.rows + br, ac * b.cols + bc)] = x * b[(br, bc)];
                }
            }
        }
    }
    out
}

/// Kronecker product of amplitude vectors.
pub fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &x in a {
        for &y in b {
            out.push(x * y);
        }
    }
    out
}

pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Multiplies `v` by the phase that makes its first significant component
/// real and positive.
pub fn phase_normalize(v: &mut [C64]) {
    let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return;
    }
    if let Some(first) = v.iter().find(|z| z.norm() > 1e-8 * scale).copied() {
        let phase = first.conj() / first.norm();
        for z in v.iter_mut() {
            *z *= phase;
        }
    }
}

/// Eigenvalues (descending) and orthonormal eigenvectors of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigvals: Vec<f64>,
    pub eigvecs: Vec<Vec<C64>>,
}

impl SpectralDecomposition {
    pub fn len(&self) -> usize {
        self.eigvals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigvals.is_empty()
    }

    /// `Σ f(λ_j) |v_j⟩⟨v_j|`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.eigvecs.first().map_or(0, Vec::len);
        let mut out = CMatrix::zeros(n, n);
        for (&lam, v) in self.eigvals.iter().zip(&self.eigvecs) {
            let w = f(lam);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vi = v[i] * w;
                for j in 0..n {
                    out[(i, j)] += vi * v[j].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.reconstruct_with(|x| x)
    }

    /// Number of eigenvalues strictly above `threshold`.
    pub fn rank(&self, threshold: f64) -> usize {
        self.eigvals.iter().filter(|&&l| l > threshold).count()
    }
}

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_OFF_TOL: f64 = 1e-12;

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.rows;
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
///
/// Fails when `m` is not square or deviates from Hermiticity by more than
/// `tol_herm` in any entry.
pub fn hermitian_eig_tol(m: &CMatrix, tol_herm: f64) -> Result<SpectralDecomposition> {
    if !m.is_square() {
        return invalid(format!("eigensolver needs a square matrix, got {}x{}", m.rows, m.cols));
    }
    let herr = m.hermiticity_error();
    if herr > tol_herm {
        return invalid(format!("matrix is not Hermitian (deviation {herr:.3e})"));
    }
    let n = m.rows;
    let mut a = m.clone();
    a.hermitize();
    let mut v = CMatrix::identity(n);
    let threshold = JACOBI_OFF_TOL * a.frobenius_norm().max(1.0);

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) < threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let g = apq.norm();
                if g < 1e-300 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * g);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // V = diag(1, e^{-iφ}) · [[c, s], [-s, c]] on the (p, q) plane.
                let ph = (apq / g).conj();
                let vpp = C64::new(c, 0.0);
                let vpq = C64::new(s, 0.0);
                let vqp = ph * (-s);
                let vqq = ph * c;
                // A ← A V
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * vpp + akq * vqp;
                    a[(k, q)] = akp * vpq + akq * vqq;
                }
                // A ← V† A
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = vpp.conj() * apk + vqp.conj() * aqk;
                    a[(q, k)] = vpq.conj() * apk + vqq.conj() * aqk;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;
                for k in 0..n {
                    let wkp = v[(k, p)];
                    let wkq = v[(k, q)];
                    v[(k, p)] = wkp * vpp + wkq * vqp;
                    v[(k, q)] = wkp * vpq + wkq * vqq;
                }
            }
        }
    }

    let mut pairs: Vec<(f64, Vec<C64>)> = (0..n)
        .map(|j| {
            let mut col = v.col(j);
            phase_normalize(&mut col);
            (a[(j, j)].re, col)
        })
        .collect();
    pairs.sort_by(|x, y| {
        if (x.0 - y.0).abs() > 1e-12 {
            y.0.partial_cmp(&x.0).unwrap()
        } else {
            cmp_vectors(&x.1, &y.1)
        }
    });
    let (eigvals, eigvecs) = pairs.into_iter().unzip();
    Ok(SpectralDecomposition { eigvals, eigvecs })
}

/// Lexicographic order on phase-normalized vectors: earlier first
/// significant component wins, then larger magnitudes.
fn cmp_vectors(a: &[C64], b: &[C64]) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    let first = |v: &[C64]| v.iter().position(|z| z.norm() > 1e-8).unwrap_or(v.len());
    match first(a).cmp(&first(b)) {
        Ordering::Equal => {}
        o => return o,
    }
    for (x, y) in a.iter().zip(b) {
        if (x.re - y.re).abs() > 1e-10 {
            return y.re.partial_cmp(&x.re).unwrap();
        }
        if (x.im - y.im).abs() > 1e-10 {
            return y.im.partial_cmp(&x.im).unwrap();
        }
    }
    Ordering::Equal
}

/// Hermitian eigendecomposition with the default Hermiticity tolerance.
pub fn hermitian_eig(m: &CMatrix) -> Result<SpectralDecomposition> {
    hermitian_eig_tol(m, crate::Tolerances::default().herm)
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
pub fn trace_norm(m: &CMatrix) -> Result<f64> {
    Ok(hermitian_eig(m)?.eigvals.iter().map(|l| l.abs()).sum())
}

/// Löwdin orthonormalization of the columns of `m` (`m (m†m)^{-1/2}`).
///
/// Returns `None` when the columns are numerically dependent.
pub fn orthonormalize_columns(m: &CMatrix) -> Option<CMatrix> {
    let gram = m.adjoint().matmul(m).ok()?;
    let eig = hermitian_eig_tol(&gram, 1e-6).ok()?;
    if eig.eigvals.iter().any(|&l| l < 1e-12) {
        return None;
    }
    let inv_sqrt = eig.reconstruct_with(|l| 1.0 / l.sqrt());
    let mut u = m.matmul(&inv_sqrt).ok()?;
    // The eigensolver error is amplified by the conditioning of m†m;
    // Newton–Schulz steps u (3 − u†u)/2 restore orthonormality to roundoff.
    let n = u.cols();
    for _ in 0..4 {
        let gram = u.adjoint().matmul(&u).ok()?;
        if gram.max_abs_diff(&CMatrix::identity(n)) < 1e-15 {
            break;
        }
        let mut corr = gram.scale_real(-0.5);
        for i in 0..n {
            corr.as_mut_slice()[i * n + i] += C64::new(1.5, 0.0);
        }
        u = u.matmul(&corr).ok()?;
    }
    Some(u)
}
