//! Cayley-transform coefficients and Korányi–Pukánszky block matrices.
//!
//! For `f = Σ a_n z^n` with `f(0) = 0`, the function `(1 + f)/(2(1 − f))`
//! has coefficients `c_0 = 1/2` and `c_n = a_n + Σ_{j<n} a_j c_{n−j}`.
//! Positivity of the Hermitian Toeplitz matrix built from the `c_n` is
//! equivalent to contractivity of `𝒯(a_1, …, a_n)`, through the identity
//! `P C P* = (I − AA*) ⊕ 1`.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{cr, upper_block_toeplitz, upper_toeplitz, ComplexMatrix, C64};
use crate::multop::{Laurent, TruncatedMultOp};

/// `c_0, …, c_n` with `c_0 = 1/2`; `a[j]` holds `a_{j+1}`.
pub fn cayley_coeffs_1d(a: &[C64], n: usize) -> Vec<C64> {
    let coeff = |j: usize| if j >= 1 && j <= a.len() { a[j - 1] } else { C64::default() };
    let mut c = vec![cr(0.5)];
    for k in 1..=n {
        let mut s = coeff(k);
        for j in 1..k {
            s += coeff(j) * c[k - j];
        }
        c.push(s);
    }
    c
}

/// `P_n`: upper triangular Toeplitz with 1 on the diagonal and `−a_k` on the
/// `k`-th superdiagonal, size `n + 1`.
fn p_matrix(a: &[C64], n: usize) -> ComplexMatrix {
    let mut entries = vec![cr(1.0)];
    entries.extend((1..=n).map(|k| -a.get(k - 1).copied().unwrap_or_default()));
    upper_toeplitz(&entries).expect("finite")
}

/// Hermitian Toeplitz matrix with 1 on the diagonal, `c_{i−j}` below it and
/// conjugates above, size `n + 1`.
fn c_matrix(c: &[C64], n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n + 1, n + 1, |i, j| match i.cmp(&j) {
        Ordering::Equal => cr(1.0),
        Ordering::Greater => c[i - j],
        Ordering::Less => c[j - i].conj(),
    })
}

/// `‖P_n C_nᵗ P_n* − ((I − A_n A_n*) ⊕ 1)‖` with `A_n = 𝒯(a_1, …, a_n)`.
pub fn kp_identity_check(a: &[C64], n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let c = cayley_coeffs_1d(a, n);
    let p = p_matrix(a, n);
    let cm = c_matrix(&c, n);
    let lhs = &(&p * &cm.transpose()) * &p.adjoint();
    let entries: Vec<C64> = (1..=n).map(|k| a.get(k - 1).copied().unwrap_or_default()).collect();
    let t = upper_toeplitz(&entries).expect("finite");
    let defect = &ComplexMatrix::identity(n) - &(&t * &t.adjoint());
    let rhs = defect.direct_sum(&ComplexMatrix::identity(1));
    (&lhs - &rhs).norm()
}

/// Point of ℤ² ordered by diagonal `x + y` first, then lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DSliceIndex {
    pub x: i64,
    pub y: i64,
}

impl DSliceIndex {
    pub fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }

    pub fn diagonal(&self) -> i64 {
        self.x + self.y
    }
}

impl Ord for DSliceIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.diagonal(), self.x, self.y).cmp(&(other.diagonal(), other.x, other.y))
    }
}

impl PartialOrd for DSliceIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All points with `|x + y| ≤ W` and `|x| ≤ W`, in D-slice order.
pub fn dslice_enumerate(window: usize) -> Vec<DSliceIndex> {
    let w = window as i64;
    let mut out = Vec::new();
    for d in -w..=w {
        for x in -w..=w {
            out.push(DSliceIndex::new(x, d - x));
        }
    }
    out.sort();
    out
}

fn check_windows(blocks: &[TruncatedMultOp]) -> Result<usize> {
    let w = blocks.first().map_or(0, |b| b.window());
    for b in blocks {
        if b.window() != w {
            return Err(Error::WindowMismatch(w, b.window()));
        }
    }
    Ok(w)
}

/// `(m+1) × (m+1)` block Hermitian Toeplitz matrix with `I` on the diagonal,
/// `C_j` on the `j`-th block subdiagonal and `C_j*` above.
pub fn kp_matrix_2d(c_blocks: &[TruncatedMultOp], m: usize) -> Result<ComplexMatrix> {
    let w = check_windows(c_blocks)?;
    if c_blocks.len() < m {
        return Err(Error::PreconditionFailed(format!(
            "{} blocks given, {m} needed",
            c_blocks.len()
        )));
    }
    let mats: Vec<ComplexMatrix> = c_blocks[..m].iter().map(|b| b.matrix()).collect();
    let d = 2 * w + 1;
    let grid: Vec<Vec<ComplexMatrix>> = (0..=m)
        .map(|i| {
            (0..=m)
                .map(|j| match i.cmp(&j) {
                    Ordering::Equal => ComplexMatrix::identity(d),
                    Ordering::Greater => mats[i - j - 1].clone(),
                    Ordering::Less => mats[j - i - 1].adjoint(),
                })
                .collect()
        })
        .collect();
    ComplexMatrix::from_blocks(&grid)
}

/// `𝒯(A_1, …, A_m)` of the truncated blocks.
pub fn toeplitz_of_blocks(blocks: &[TruncatedMultOp]) -> Result<ComplexMatrix> {
    check_windows(blocks)?;
    upper_block_toeplitz(&blocks.iter().map(|b| b.matrix()).collect::<Vec<_>>())
}

fn check_degrees(blocks: &[TruncatedMultOp]) -> Result<()> {
    for (i, b) in blocks.iter().enumerate() {
        let s = b.symbol();
        if !s.is_zero() && (s.low() < 0 || s.high() > i as i32 + 1) {
            let degree = if s.low() < 0 { s.low() } else { s.high() };
            return Err(Error::DegreeOverflow {
                index: i + 1,
                degree: degree as i64,
            });
        }
    }
    Ok(())
}

/// `C_n = A_n + Σ_{j<n} A_j C_{n−j}` at symbol level; `a_blocks[j]` holds
/// `A_{j+1}`, whose symbol must have degree at most `j + 1`.
pub fn cayley_coeffs_2d(a_blocks: &[TruncatedMultOp], n: usize) -> Result<Vec<TruncatedMultOp>> {
    let w = check_windows(a_blocks)?;
    check_degrees(a_blocks)?;
    let a = |k: usize| {
        a_blocks
            .get(k - 1)
            .map_or_else(Laurent::zero, |b| b.symbol().clone())
    };
    let mut c: Vec<Laurent> = Vec::with_capacity(n);
    for k in 1..=n {
        let mut s = a(k);
        for j in 1..k {
            s = s.add(&a(j).mul(&c[k - j - 1]));
        }
        c.push(s);
    }
    let out: Vec<TruncatedMultOp> = c.into_iter().map(|s| TruncatedMultOp::from_laurent(s, w)).collect();
    check_degrees(&out)?;
    Ok(out)
}

/// Inverse of [`cayley_coeffs_2d`]: `A_n = C_n − Σ_{j<n} A_j C_{n−j}`.
pub fn cayley_inverse_2d(c_blocks: &[TruncatedMultOp]) -> Result<Vec<TruncatedMultOp>> {
    let w = check_windows(c_blocks)?;
    let mut a: Vec<Laurent> = Vec::with_capacity(c_blocks.len());
    for k in 1..=c_blocks.len() {
        let mut s = c_blocks[k - 1].symbol().clone();
        for j in 1..k {
            s = s.sub(&a[j - 1].mul(c_blocks[k - j - 1].symbol()));
        }
        a.push(s);
    }
    Ok(a.into_iter().map(|s| TruncatedMultOp::from_laurent(s, w)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{c, psd_check};
    use crate::tolerance::Tolerance;

    #[test]
    fn one_variable_coefficients() {
        let c1 = cayley_coeffs_1d(&[c(0.3, 0.2)], 5);
        assert_eq!(c1[0], cr(0.5));
        for (n, cn) in c1.iter().enumerate().skip(1) {
            assert!((cn - c(0.3, 0.2).powu(n as u32)).norm() < 1e-15);
        }
        assert!(cayley_coeffs_1d(&[], 4)[1..].iter().all(|z| z.norm() == 0.0));
        let c = cayley_coeffs_1d(&[cr(0.6), cr(0.64)], 3);
        assert!((c[1] - cr(0.6)).norm() < 1e-15);
        assert!((c[2] - cr(1.0)).norm() < 1e-15);
        assert!((c[3] - cr(0.984)).norm() < 1e-15);
    }

    #[test]
    fn identity_residuals() {
        assert_eq!(kp_identity_check(&[], 3), 0.0);
        assert!(kp_identity_check(&[cr(0.6), cr(0.64)], 2) < 1e-12);
        let a = [c(0.1, 0.2), c(-0.3, 0.1), cr(0.25), c(0.0, -0.4), c(0.2, 0.2), cr(-0.1)];
        assert!(kp_identity_check(&a, 6) < 1e-10);
    }

    #[test]
    fn dslice_order() {
        assert_eq!(dslice_enumerate(0), vec![DSliceIndex::new(0, 0)]);
        assert!(DSliceIndex::new(0, 0) < DSliceIndex::new(1, 0));
        assert!(DSliceIndex::new(0, 1) < DSliceIndex::new(1, 0));
        let all = dslice_enumerate(2);
        assert_eq!(all.len(), 25);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn kp_blocks() {
        let z = TruncatedMultOp::zero(3);
        let m = kp_matrix_2d(&[z.clone(), z.clone()], 2).unwrap();
        assert_eq!(m, ComplexMatrix::identity(21));
        let other = TruncatedMultOp::zero(4);
        assert_eq!(kp_matrix_2d(&[z, other], 2), Err(Error::WindowMismatch(3, 4)));
    }

    #[test]
    fn two_variable_recursion() {
        let a1 = TruncatedMultOp::from_laurent(Laurent::analytic(&[cr(0.3), cr(0.2)]), 6);
        let c = cayley_coeffs_2d(std::slice::from_ref(&a1), 4).unwrap();
        let mut pow = Laurent::constant(cr(1.0));
        for ck in &c {
            pow = pow.mul(a1.symbol());
            assert_eq!(ck.symbol(), &pow);
        }
        let back = cayley_inverse_2d(&c).unwrap();
        assert_eq!(back[0].symbol(), a1.symbol());
        assert!(back[1..].iter().all(|b| b.symbol().max_coeff() < 1e-15));
        let bad = TruncatedMultOp::from_laurent(Laurent::monomial(3, cr(1.0)), 6);
        assert!(matches!(
            cayley_coeffs_2d(&[bad], 2),
            Err(Error::DegreeOverflow { index: 1, .. })
        ));
    }

    #[test]
    fn psd_matches_contraction_on_a_small_family() {
        let tol = Tolerance::default();
        for scale in [0.3, 0.6, 0.9, 1.2] {
            let a = vec![
                TruncatedMultOp::from_laurent(Laurent::analytic(&[cr(0.5 * scale), cr(0.3 * scale)]), 8),
                TruncatedMultOp::from_laurent(Laurent::analytic(&[c(0.0, 0.2 * scale), cr(0.0), cr(0.3 * scale)]), 8),
            ];
            let cb = cayley_coeffs_2d(&a, 2).unwrap();
            let psd = psd_check(&kp_matrix_2d(&cb, 2).unwrap(), &tol).unwrap();
            let contraction = toeplitz_of_blocks(&a).unwrap().norm() <= 1.0 + tol.spectral;
            assert_eq!(psd, contraction, "scale {scale}");
        }
    }
}
