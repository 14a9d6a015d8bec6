//! Laurent polynomials on the circle and their truncated multiplication
//! operators on `span{z^-N, …, z^N}` inside `L²(𝕋)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};
use crate::poly::MultiPoly;

/// `Σ_k coeffs[k] z^(low + k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Laurent {
    low: i32,
    coeffs: Vec<C64>,
}

impl Laurent {
    pub fn new(low: i32, coeffs: Vec<C64>) -> Self {
        let mut l = Self { low, coeffs };
        l.trim();
        l
    }

    pub fn zero() -> Self {
        Self {
            low: 0,
            coeffs: vec![],
        }
    }

    pub fn constant(a: C64) -> Self {
        Self::new(0, vec![a])
    }

    /// Single term `a z^k`.
    pub fn monomial(k: i32, a: C64) -> Self {
        Self::new(k, vec![a])
    }

    /// Analytic polynomial with coefficients `a_0, a_1, …`.
    pub fn analytic(coeffs: &[C64]) -> Self {
        Self::new(0, coeffs.to_vec())
    }

    pub fn from_poly(p: &MultiPoly) -> Result<Self> {
        if p.nvars() != 1 {
            return Err(Error::ArityMismatch {
                expected: 1,
                got: p.nvars(),
            });
        }
        Ok(Self::analytic(&p.univariate_coeffs()))
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|a| *a == C64::default()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|a| **a == C64::default()).count();
        if lead == self.coeffs.len() {
            self.low = 0;
            self.coeffs.clear();
        } else if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i32;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient (0 for the zero symbol).
    pub fn low(&self) -> i32 {
        self.low
    }

    /// Highest exponent with a nonzero coefficient (`low − 1` for zero).
    pub fn high(&self) -> i32 {
        self.low + self.coeffs.len() as i32 - 1
    }

    pub fn coeff(&self, k: i32) -> C64 {
        let i = k - self.low;
        if i < 0 {
            return C64::default();
        }
        self.coeffs.get(i as usize).copied().unwrap_or_default()
    }

    /// `(exponent, coefficient)` pairs, nonzero ones only.
    pub fn terms(&self) -> impl Iterator<Item = (i32, C64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, a)| **a != C64::default())
            .map(move |(i, a)| (self.low + i as i32, *a))
    }

    pub fn is_analytic(&self) -> bool {
        self.is_zero() || self.low >= 0
    }

    /// Dense analytic coefficients `a_0..=a_high`; `None` if a negative power
    /// is present.
    pub fn analytic_coeffs(&self) -> Option<Vec<C64>> {
        if !self.is_analytic() {
            return None;
        }
        if self.is_zero() {
            return Some(vec![]);
        }
        Some((0..=self.high()).map(|k| self.coeff(k)).collect())
    }

    pub fn to_poly(&self) -> Result<MultiPoly> {
        match self.analytic_coeffs() {
            Some(a) => Ok(MultiPoly::univariate(&a)),
            None => Err(Error::PreconditionFailed(format!(
                "symbol has a z^{} term",
                self.low
            ))),
        }
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.terms().map(|(k, a)| a * z.powi(k)).sum()
    }

    pub fn eval_angle(&self, t: f64) -> C64 {
        self.terms().map(|(k, a)| a * C64::from_polar(1.0, k as f64 * t)).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.low, self.coeffs.iter().map(|a| a * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let low = self.low.min(other.low);
        let high = self.high().max(other.high());
        Self::new(low, (low..=high).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![C64::default(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(self.low + other.low, out)
    }

    /// Multiplies by `z^k`.
    pub fn shift(&self, k: i32) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self::new(self.low + k, self.coeffs.clone())
    }

    pub fn l1(&self) -> f64 {
        self.coeffs.iter().map(|a| a.norm()).sum()
    }

    /// Largest coefficient modulus.
    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// Grid estimate of `sup_𝕋 |q|`.
    pub fn sup_circle(&self, grid: usize) -> f64 {
        let g = grid.max(1);
        (0..g)
            .map(|i| self.eval_angle(std::f64::consts::TAU * i as f64 / g as f64).norm())
            .fold(0.0, f64::max)
    }
}

/// Compression of multiplication by a Laurent symbol to the `2N+1` Fourier
/// modes `z^-N, …, z^N`. Entry `(i, j)` is the coefficient of `z^(i−j)`, so
/// analytic symbols give lower-triangular matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncatedMultOp {
    symbol: Laurent,
    window: usize,
}

impl TruncatedMultOp {
    pub fn new(poly: &MultiPoly, window: usize) -> Result<Self> {
        Ok(Self::from_laurent(Laurent::from_poly(poly)?, window))
    }

    pub fn from_laurent(symbol: Laurent, window: usize) -> Self {
        Self { symbol, window }
    }

    pub fn zero(window: usize) -> Self {
        Self::from_laurent(Laurent::zero(), window)
    }

    pub fn symbol(&self) -> &Laurent {
        &self.symbol
    }

    pub fn window(&self) -> usize {
        self.window
    }

    /// Side length `2N+1`.
    pub fn dim(&self) -> usize {
        2 * self.window + 1
    }

    pub fn matrix(&self) -> ComplexMatrix {
        laurent_matrix(&self.symbol, self.window)
    }

    /// Symbol-level product; the window must agree.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.window != other.window {
            return Err(Error::WindowMismatch(self.window, other.window));
        }
        Ok(Self::from_laurent(self.symbol.mul(&other.symbol), self.window))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.window != other.window {
            return Err(Error::WindowMismatch(self.window, other.window));
        }
        Ok(Self::from_laurent(self.symbol.add(&other.symbol), self.window))
    }

    pub fn norm(&self) -> f64 {
        self.matrix().norm()
    }
}

/// `(2N+1)²` matrix of multiplication by `q` on the modes `−N..=N`.
pub fn laurent_matrix(q: &Laurent, window: usize) -> ComplexMatrix {
    let n = 2 * window + 1;
    ComplexMatrix::from_fn(n, n, |i, j| q.coeff(i as i32 - j as i32))
}

/// Symbol read back from a truncated block, with defects that measure how
/// far the central part of the block is from a banded Toeplitz matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymbolExtraction {
    pub symbol: Laurent,
    /// Largest entry of the central column outside the allowed exponents.
    pub band_defect: f64,
    /// Largest deviation of the central sub-block from Toeplitz structure.
    pub toeplitz_defect: f64,
}

impl SymbolExtraction {
    pub fn is_clean(&self, threshold: f64) -> bool {
        self.band_defect <= threshold && self.toeplitz_defect <= threshold
    }
}

/// Reads the symbol off the central column of a `(2N+1)²` block, keeping
/// exponents `|d| ≤ N/2` and rounding entries below `threshold` to zero.
/// Exponents outside `allowed` count towards the band defect, and the
/// Toeplitz check runs over the central `(N/2)`-wide sub-block only, where
/// truncation does not reach.
pub fn extract_symbol(
    m: &ComplexMatrix,
    window: usize,
    allowed: std::ops::RangeInclusive<i32>,
    threshold: f64,
) -> Result<SymbolExtraction> {
    let n = 2 * window + 1;
    if m.shape() != (n, n) {
        return Err(Error::InvalidMatrix(format!(
            "block is {:?}, window {window} needs {n}x{n}",
            m.shape()
        )));
    }
    let half = (window / 2) as i32;
    let mid = window as i32;
    let mut coeffs = Vec::with_capacity(2 * half as usize + 1);
    let mut band_defect: f64 = 0.0;
    for d in -half..=half {
        let a = m.get((mid + d) as usize, mid as usize);
        let keep = a.norm() > threshold;
        if !allowed.contains(&d) {
            band_defect = band_defect.max(a.norm());
        }
        coeffs.push(if keep && allowed.contains(&d) { a } else { C64::default() });
    }
    let symbol = Laurent::new(-half, coeffs);
    let lo = (mid - half / 2).max(0);
    let hi = (mid + half / 2).min(n as i32 - 1);
    let mut toeplitz_defect: f64 = 0.0;
    for i in lo..=hi {
        for j in lo..=hi {
            let want = m.get((mid + i - j) as usize, mid as usize);
            toeplitz_defect = toeplitz_defect.max((m.get(i as usize, j as usize) - want).norm());
        }
    }
    Ok(SymbolExtraction {
        symbol,
        band_defect,
        toeplitz_defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{c, cr};

    #[test]
    fn laurent_arithmetic() {
        let p = Laurent::analytic(&[cr(1.0), cr(2.0)]);
        let q = Laurent::monomial(-1, cr(3.0));
        let pq = p.mul(&q);
        assert_eq!(pq.low(), -1);
        assert_eq!(pq.coeff(-1), cr(3.0));
        assert_eq!(pq.coeff(0), cr(6.0));
        assert!(!pq.is_analytic());
        let z = c(0.3, -0.7);
        assert!((pq.eval(z) - p.eval(z) * q.eval(z)).norm() < 1e-12);
        assert!(p.sub(&p).is_zero());
        assert_eq!(Laurent::new(0, vec![cr(0.0), cr(0.0)]), Laurent::zero());
    }

    #[test]
    fn shift_matrix_is_lower() {
        let m = TruncatedMultOp::from_laurent(Laurent::monomial(1, cr(1.0)), 3).matrix();
        assert_eq!(m.shape(), (7, 7));
        assert_eq!(m.get(1, 0), cr(1.0));
        assert_eq!(m.get(0, 1), cr(0.0));
        assert!((m.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn norm_grows_towards_sup() {
        let q = Laurent::analytic(&[cr(1.0), cr(1.0)]);
        let mut last = 0.0;
        for w in [2, 4, 8, 16, 32] {
            let v = TruncatedMultOp::from_laurent(q.clone(), w).norm();
            assert!(v >= last - 1e-12);
            assert!(v <= 2.0 + 1e-12);
            last = v;
        }
        assert!(last > 1.99);
    }

    #[test]
    fn extraction_round_trip() {
        let q = Laurent::analytic(&[cr(0.5), c(0.0, 0.25), cr(-0.125)]);
        let m = laurent_matrix(&q, 8);
        let e = extract_symbol(&m, 8, 0..=2, 1e-8).unwrap();
        assert_eq!(e.symbol, q);
        assert!(e.is_clean(1e-12));
        let e = extract_symbol(&m, 8, 0..=1, 1e-8).unwrap();
        assert!((e.band_defect - 0.125).abs() < 1e-15);
        let mut bad = m.clone();
        bad = bad.with_block(8, 9, &ComplexMatrix::scalar(cr(0.1)));
        assert!(extract_symbol(&bad, 8, 0..=2, 1e-8).unwrap().toeplitz_defect > 0.05);
    }

    #[test]
    fn products_compose_for_analytic_symbols() {
        // Lower-triangular Toeplitz compressions of analytic symbols multiply
        // exactly on the modes that stay inside the window from below.
        let a = TruncatedMultOp::new(&MultiPoly::univariate(&[cr(0.2), cr(0.3)]), 5).unwrap();
        let b = TruncatedMultOp::new(&MultiPoly::univariate(&[cr(-0.1), cr(0.0), cr(0.4)]), 5).unwrap();
        let direct = &a.matrix() * &b.matrix();
        let symbol = a.mul(&b).unwrap().matrix();
        assert!((&direct - &symbol).max_abs() < 1e-15);
    }
}
