//! Shared generators for the property suites.
#![allow(dead_code)]

use cflab::{ComplexMatrix, MultiPoly, C64};
use proptest::prelude::*;

pub fn c64(r: f64) -> impl Strategy<Value = C64> {
    (-r..r, -r..r).prop_map(|(a, b)| C64::new(a, b))
}

pub fn unit_phase() -> impl Strategy<Value = C64> {
    (0.0..std::f64::consts::TAU).prop_map(|t| C64::from_polar(1.0, t))
}

pub fn disc_point(radius: f64) -> impl Strategy<Value = C64> {
    (0.0..1.0f64, 0.0..std::f64::consts::TAU).prop_map(move |(r, t)| C64::from_polar(radius * r.sqrt(), t))
}

pub fn cvec(n: usize, r: f64) -> impl Strategy<Value = Vec<C64>> {
    proptest::collection::vec(c64(r), n)
}

pub fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = ComplexMatrix> {
    cvec(rows * cols, 1.0).prop_map(move |v| ComplexMatrix::new(rows, cols, v).unwrap())
}

pub fn square(max: usize) -> impl Strategy<Value = ComplexMatrix> {
    (1..=max).prop_flat_map(|n| matrix(n, n))
}

/// Random matrix rescaled to norm `s ∈ (0, 1]`.
pub fn contraction(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    (matrix(n, n), 0.05..1.0f64).prop_map(|(m, s)| {
        let nm = m.norm();
        if nm == 0.0 {
            m
        } else {
            m.scale_re(s / nm)
        }
    })
}

/// `V e^{iΛ} V*` from the eigendecomposition of a random Hermitian matrix.
pub fn unitary(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    matrix(n, n).prop_map(move |m| {
        let h = &m + &m.adjoint();
        let (vals, vecs) = h.hermitian_eigen();
        let v = ComplexMatrix::from_dmatrix(vecs);
        let phases: Vec<C64> = vals.iter().map(|l| C64::from_polar(1.0, *l)).collect();
        &(&v * &ComplexMatrix::from_diag(&phases)) * &v.adjoint()
    })
}

/// Dense polynomial in `nvars` variables of total degree at most `deg`.
pub fn poly(nvars: usize, deg: usize) -> impl Strategy<Value = MultiPoly> {
    let exps = exponents(nvars, deg);
    cvec(exps.len(), 1.0).prop_map(move |cs| MultiPoly::from_terms(nvars, exps.iter().cloned().zip(cs)).unwrap())
}

pub fn exponents(nvars: usize, deg: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..nvars {
        out = out
            .into_iter()
            .flat_map(|e: Vec<u32>| {
                let used: u32 = e.iter().sum();
                (0..=deg as u32 - used).map(move |k| {
                    let mut f = e.clone();
                    f.push(k);
                    f
                })
            })
            .collect();
    }
    out
}

pub fn identity_scaled(n: usize, z: C64) -> ComplexMatrix {
    ComplexMatrix::identity(n).scale(z)
}

pub fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Matrix polynomial with `dim × dim` coefficients on the monomials of
/// total degree at most `deg`.
pub fn matrix_poly(nvars: usize, deg: usize, dim: usize) -> impl Strategy<Value = cflab::MatrixPoly> {
    let exps = exponents(nvars, deg);
    proptest::collection::vec(matrix(dim, dim), exps.len())
        .prop_map(move |ms| cflab::MatrixPoly::new(nvars, exps.iter().cloned().zip(ms).collect()).unwrap())
}
