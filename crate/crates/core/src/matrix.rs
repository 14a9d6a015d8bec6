//! Dense complex matrices and the handful of spectral routines everything
//! else is built on.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::tolerance::Tolerance;

pub type C64 = Complex64;

/// Largest row or column count produced by [`kron`] and block assembly.
pub const MAX_DIM: usize = 8192;

/// Above this size the operator norm switches from a full SVD to power iteration.
pub const SVD_LIMIT: usize = 512;

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub(crate) fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Dense rectangular complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidMatrix(format!("empty shape {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::InvalidMatrix(format!(
                "{} entries for shape {rows}x{cols}",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        Ok(Self(DMatrix::from_row_slice(rows, cols, &data)))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self(DMatrix::from_fn(rows, cols, f))
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidMatrix("ragged rows".into()));
        }
        let data = rows.iter().flat_map(|r| r.iter().map(|&x| cr(x))).collect();
        Self::new(n, m, data)
    }

    pub fn from_dmatrix(m: DMatrix<C64>) -> Self {
        Self(m)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn scalar(z: C64) -> Self {
        Self(DMatrix::from_element(1, 1, z))
    }

    pub fn from_diag(d: &[C64]) -> Self {
        let n = d.len();
        Self::from_fn(n, n, |i, j| if i == j { d[i] } else { C64::default() })
    }

    pub fn column(v: &[C64]) -> Self {
        Self(DMatrix::from_column_slice(v.len(), 1, v))
    }

    pub fn row(v: &[C64]) -> Self {
        Self(DMatrix::from_row_slice(1, v.len(), v))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<C64> {
        self.0
    }

    /// Row-major copy of the entries.
    pub fn to_row_major(&self) -> Vec<C64> {
        let (r, c) = self.shape();
        (0..r)
            .flat_map(|i| (0..c).map(move |j| (i, j)))
            .map(|(i, j)| self.0[(i, j)])
            .collect()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn conj(&self) -> Self {
        Self(self.0.map(|z| z.conj()))
    }

    pub fn scale(&self, s: C64) -> Self {
        Self(&self.0 * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(cr(s))
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn frobenius(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn submatrix(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        Self(self.0.view((r0, c0), (nr, nc)).into_owned())
    }

    /// Returns a copy with `block` written at offset `(r0, c0)`.
    pub fn with_block(&self, r0: usize, c0: usize, block: &ComplexMatrix) -> Self {
        let mut m = self.0.clone();
        m.view_mut((r0, c0), block.shape()).copy_from(&block.0);
        Self(m)
    }

    /// Assembles a matrix from a grid of blocks with consistent row heights
    /// and column widths.
    pub fn from_blocks(grid: &[Vec<ComplexMatrix>]) -> Result<Self> {
        let nbr = grid.len();
        if nbr == 0 || grid[0].is_empty() {
            return Err(Error::InvalidMatrix("empty block grid".into()));
        }
        let nbc = grid[0].len();
        if grid.iter().any(|r| r.len() != nbc) {
            return Err(Error::InvalidMatrix("ragged block grid".into()));
        }
        let heights: Vec<usize> = grid.iter().map(|r| r[0].rows()).collect();
        let widths: Vec<usize> = grid[0].iter().map(|b| b.cols()).collect();
        for (bi, r) in grid.iter().enumerate() {
            for (bj, b) in r.iter().enumerate() {
                if b.rows() != heights[bi] || b.cols() != widths[bj] {
                    return Err(Error::InvalidMatrix(format!(
                        "block ({bi},{bj}) has shape {:?}",
                        b.shape()
                    )));
                }
            }
        }
        let rows: usize = heights.iter().sum();
        let cols: usize = widths.iter().sum();
        if rows > MAX_DIM || cols > MAX_DIM {
            return Err(Error::DimensionCap(rows.max(cols), MAX_DIM));
        }
        let mut m = DMatrix::zeros(rows, cols);
        let mut r0 = 0;
        for (bi, r) in grid.iter().enumerate() {
            let mut c0 = 0;
            for (bj, b) in r.iter().enumerate() {
                m.view_mut((r0, c0), b.shape()).copy_from(&b.0);
                c0 += widths[bj];
            }
            r0 += heights[bi];
        }
        Ok(Self(m))
    }

    /// Direct sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &ComplexMatrix) -> Self {
        let (r1, c1) = self.shape();
        let (r2, c2) = other.shape();
        Self::zeros(r1 + r2, c1 + c2)
            .with_block(0, 0, self)
            .with_block(r1, c1, other)
    }

    /// Largest singular value.
    pub fn norm(&self) -> f64 {
        if self.rows().max(self.cols()) <= SVD_LIMIT {
            svd_norm(&self.0)
        } else {
            power_norm(&self.0)
        }
    }

    pub fn singular_values(&self) -> Vec<f64> {
        let mut s: Vec<f64> = self.0.clone().singular_values().iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    /// Distance from Hermitian symmetry, `max |h_ij - conj(h_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        (&self.0 - self.0.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Eigen-decomposition of the Hermitian part; eigenvalues ascending.
    pub fn hermitian_eigen(&self) -> (Vec<f64>, DMatrix<C64>) {
        let h = (&self.0 + self.0.adjoint()) * cr(0.5);
        let n = h.nrows();
        let eig = h.symmetric_eigen();
        let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let vals = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vecs = DMatrix::from_fn(n, idx.len(), |r, k| eig.eigenvectors[(r, idx[k])]);
        (vals, vecs)
    }

    /// Applies `f` to the eigenvalues of the Hermitian part.
    fn hermitian_apply(&self, f: impl Fn(f64) -> f64) -> Self {
        let (vals, vecs) = self.hermitian_eigen();
        let n = vals.len();
        let d = DMatrix::from_fn(n, n, |i, j| if i == j { cr(f(vals[i])) } else { C64::default() });
        Self(&vecs * d * vecs.adjoint())
    }

    pub fn commutator_norm(&self, other: &ComplexMatrix) -> f64 {
        (&(self * other) - &(other * self)).norm()
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::identity(self.rows());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }
}

fn svd_norm(m: &DMatrix<C64>) -> f64 {
    if m.iter().all(|z| *z == C64::default()) {
        return 0.0;
    }
    m.clone().singular_values().iter().copied().fold(0.0, f64::max)
}

fn power_norm(m: &DMatrix<C64>) -> f64 {
    // Subspace iteration on M*M with a Rayleigh-Ritz step; a block of
    // vectors keeps convergence reasonable when the top singular values
    // are clustered.
    let n = m.ncols();
    let k = n.min(8);
    let mh = m.adjoint();
    let mut q = DMatrix::from_fn(n, k, |i, j| {
        let t = (i as f64 + 1.0) * (0.618_033_988_75 + j as f64 * 0.414_213_562);
        cr(t.sin() + if j == 0 { 1.5 } else { 0.0 })
    });
    let mut sigma = 0.0f64;
    for _ in 0..5000 {
        let y = &mh * (m * &q);
        q = y.qr().q();
        let small = q.adjoint() * (&mh * (m * &q));
        let top = small
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .fold(0.0, f64::max)
            .max(0.0)
            .sqrt();
        let done = (top - sigma).abs() <= 1e-15 * top.max(1.0);
        sigma = top;
        if done {
            break;
        }
    }
    sigma
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson {
            rows: self.rows(),
            cols: self.cols(),
            data: self.to_row_major().iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        let data = j.data.iter().map(|p| c(p[0], p[1])).collect();
        ComplexMatrix::new(j.rows, j.cols, data).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    data: Vec<[f64; 2]>,
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

/// Operator norm with validation of the entries.
pub fn operator_norm(m: &ComplexMatrix) -> Result<f64> {
    if !m.is_finite() {
        return Err(Error::InvalidMatrix("non-finite entry".into()));
    }
    Ok(m.norm())
}

pub fn is_contraction(m: &ComplexMatrix, tol: &Tolerance) -> Result<bool> {
    Ok(operator_norm(m)? <= 1.0 + tol.spectral)
}

/// Smallest eigenvalue of a Hermitian matrix, after checking symmetry.
pub fn min_eigenvalue(h: &ComplexMatrix, tol: &Tolerance) -> Result<f64> {
    if !h.is_finite() {
        return Err(Error::InvalidMatrix("non-finite entry".into()));
    }
    if !h.is_square() {
        return Err(Error::InvalidMatrix(format!("shape {:?} is not square", h.shape())));
    }
    let defect = h.hermitian_defect();
    if defect > tol.algebraic * (1.0 + h.max_abs()) {
        return Err(Error::NotHermitian(defect));
    }
    let (vals, _) = h.hermitian_eigen();
    Ok(vals[0])
}

pub fn psd_check(h: &ComplexMatrix, tol: &Tolerance) -> Result<bool> {
    Ok(min_eigenvalue(h, tol)? >= -tol.spectral)
}

/// Positive square root of a positive semidefinite matrix.
pub fn psd_sqrt(h: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    let lo = min_eigenvalue(h, tol)?;
    if lo < -tol.spectral {
        return Err(Error::NotPsd(lo));
    }
    Ok(h.hermitian_apply(|x| x.max(0.0).sqrt()))
}

/// Moore-Penrose inverse of a positive semidefinite matrix; eigenvalues
/// at or below `cutoff` are treated as zero.
pub fn psd_pinv(h: &ComplexMatrix, cutoff: f64) -> ComplexMatrix {
    h.hermitian_apply(|x| if x > cutoff { 1.0 / x } else { 0.0 })
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let rows = a.rows() * b.rows();
    let cols = a.cols() * b.cols();
    if rows > MAX_DIM || cols > MAX_DIM {
        return Err(Error::DimensionCap(rows.max(cols), MAX_DIM));
    }
    Ok(ComplexMatrix(a.0.kronecker(&b.0)))
}

/// Defect operator `(I - T*T)^{1/2}` of a contraction.
pub fn defect(t: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    let n = operator_norm(t)?;
    if n > 1.0 + tol.spectral {
        return Err(Error::NotContraction(n));
    }
    let g = &ComplexMatrix::identity(t.cols()) - &(&t.adjoint() * t);
    psd_sqrt(&g, tol)
}

/// One-step unitary dilation `[[T, D_{T*}], [D_T, -T*]]` of a square contraction.
pub fn unitary_dilation(t: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    if !t.is_square() {
        return Err(Error::InvalidMatrix("dilation needs a square matrix".into()));
    }
    let dt = defect(t, tol)?;
    let dts = defect(&t.adjoint(), tol)?;
    ComplexMatrix::from_blocks(&[vec![t.clone(), dts], vec![dt, -&t.adjoint()]])
}

/// Upper-triangular block Toeplitz matrix with `blocks[k]` on the k-th
/// block superdiagonal.
pub fn upper_block_toeplitz(blocks: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    let n = blocks.len();
    if n == 0 {
        return Err(Error::InvalidMatrix("no blocks".into()));
    }
    let (r, cc) = blocks[0].shape();
    if blocks.iter().any(|b| b.shape() != (r, cc)) {
        return Err(Error::InvalidMatrix("blocks differ in shape".into()));
    }
    let zero = ComplexMatrix::zeros(r, cc);
    let grid: Vec<Vec<ComplexMatrix>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if j >= i { blocks[j - i].clone() } else { zero.clone() })
                .collect()
        })
        .collect();
    ComplexMatrix::from_blocks(&grid)
}

/// Scalar version of [`upper_block_toeplitz`].
pub fn upper_toeplitz(entries: &[C64]) -> Result<ComplexMatrix> {
    let blocks: Vec<ComplexMatrix> = entries.iter().map(|&z| ComplexMatrix::scalar(z)).collect();
    upper_block_toeplitz(&blocks)
}
