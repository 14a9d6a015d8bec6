//! Completion of a 2×2 block contraction with one unknown corner.
//!
//! The block layout is
//!
//! ```text
//! ( A  X )
//! ( C  D )
//! ```
//!
//! with `A: H1 → K1`, `C: H1 → K2`, `D: H2 → K2` known and `X: H2 → K1` sought.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{cr, psd_pinv, psd_sqrt, upper_block_toeplitz, ComplexMatrix, C64};
use crate::tolerance::Tolerance;

/// Known blocks of a partially specified contraction.
#[derive(Debug, Clone, PartialEq)]
pub struct ParrottData {
    a: ComplexMatrix,
    c: ComplexMatrix,
    d: ComplexMatrix,
}

impl ParrottData {
    /// Validates shapes and checks that the known column `(A; C)` and row
    /// `(C D)` are contractions.
    pub fn new(a: ComplexMatrix, c: ComplexMatrix, d: ComplexMatrix, tol: &Tolerance) -> Result<Self> {
        if a.cols() != c.cols() || c.rows() != d.rows() {
            return Err(Error::InvalidMatrix(format!(
                "non-conformal blocks A {:?}, C {:?}, D {:?}",
                a.shape(),
                c.shape(),
                d.shape()
            )));
        }
        let data = Self { a, c, d };
        let col = data.column().norm();
        let row = data.row().norm();
        let worst = col.max(row);
        if worst > 1.0 + tol.spectral {
            return Err(Error::NotContraction(worst));
        }
        Ok(data)
    }

    pub fn a(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn c(&self) -> &ComplexMatrix {
        &self.c
    }

    pub fn d(&self) -> &ComplexMatrix {
        &self.d
    }

    /// `(A; C)`.
    pub fn column(&self) -> ComplexMatrix {
        ComplexMatrix::from_blocks(&[vec![self.a.clone()], vec![self.c.clone()]]).expect("validated shapes")
    }

    /// `(C D)`.
    pub fn row(&self) -> ComplexMatrix {
        ComplexMatrix::from_blocks(&[vec![self.c.clone(), self.d.clone()]]).expect("validated shapes")
    }

    /// Shape of the unknown corner.
    pub fn corner_shape(&self) -> (usize, usize) {
        (self.a.rows(), self.d.cols())
    }

    /// The full block matrix for a given corner.
    pub fn complete(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        ComplexMatrix::from_blocks(&[
            vec![self.a.clone(), x.clone()],
            vec![self.c.clone(), self.d.clone()],
        ])
    }
}

/// A corner produced by [`parrott_solve`] together with its certificates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Completion {
    pub x: ComplexMatrix,
    /// Operator norm of the completed block matrix.
    pub norm: f64,
    /// Residual of the factor equation `D = (I − CC*)^{1/2} Y`.
    pub y_residual: f64,
    /// Residual of the factor equation `A = Z (I − C*C)^{1/2}`.
    pub z_residual: f64,
    /// `‖I − Y*Y‖`; zero means the free parameter has no effect.
    pub freedom: f64,
}

/// Returns `X = (I − ZZ*)^{1/2} V (I − Y*Y)^{1/2} − Z C* Y`, where `Y` and
/// `Z` solve the factor equations through pseudo-inverses of the defect
/// square roots. `V = None` means `V = 0`.
pub fn parrott_solve(data: &ParrottData, v: Option<&ComplexMatrix>, tol: &Tolerance) -> Result<Completion> {
    let (k1, h2) = data.corner_shape();
    if let Some(v) = v {
        if v.shape() != (k1, h2) {
            return Err(Error::InvalidMatrix(format!(
                "free parameter has shape {:?}, corner is {k1}x{h2}",
                v.shape()
            )));
        }
        let nv = v.norm();
        if nv > 1.0 + tol.spectral {
            return Err(Error::NotContraction(nv));
        }
    }
    let c = data.c();
    let k2 = c.rows();
    let h1 = c.cols();
    let cutoff = tol.algebraic;
    let slack = tol.spectral.sqrt();

    let left = psd_sqrt(&(&ComplexMatrix::identity(k2) - &(c * &c.adjoint())), tol)?;
    let y = &psd_pinv(&left, cutoff) * data.d();
    let y_residual = (&(&left * &y) - data.d()).norm();
    if y_residual > slack * (1.0 + data.d().norm()) {
        return Err(Error::FactorizationFailed(y_residual));
    }

    let right = psd_sqrt(&(&ComplexMatrix::identity(h1) - &(&c.adjoint() * c)), tol)?;
    let z = data.a() * &psd_pinv(&right, cutoff);
    let z_residual = (&(&z * &right) - data.a()).norm();
    if z_residual > slack * (1.0 + data.a().norm()) {
        return Err(Error::FactorizationFailed(z_residual));
    }

    let central = -&(&(&z * &c.adjoint()) * &y);
    let yy = &ComplexMatrix::identity(h2) - &(&y.adjoint() * &y);
    let freedom = yy.norm();
    let x = match v {
        None => central,
        Some(v) => {
            let zz = &ComplexMatrix::identity(k1) - &(&z * &z.adjoint());
            let lz = psd_sqrt(&zz, tol)?;
            let ry = psd_sqrt(&yy, tol)?;
            &(&(&lz * v) * &ry) + &central
        }
    };
    let norm = data.complete(&x)?.norm();
    Ok(Completion {
        x,
        norm,
        y_residual,
        z_residual,
        freedom,
    })
}

/// Given contractive `𝒯(A₁,…,Aₙ)`, returns the block `Aₙ₊₁` obtained by
/// completing the top-right corner of `𝒯(A₁,…,Aₙ,·)` with free parameter
/// `v` (zero when `None`).
pub fn toeplitz_extend_step(
    blocks: &[ComplexMatrix],
    v: Option<&ComplexMatrix>,
    tol: &Tolerance,
) -> Result<Completion> {
    let n = blocks.len();
    if n == 0 {
        return Err(Error::InvalidMatrix("no blocks".into()));
    }
    let b = blocks[0].rows();
    if blocks.iter().any(|m| m.shape() != (b, b)) {
        return Err(Error::InvalidMatrix("blocks must share one square shape".into()));
    }
    let t = upper_block_toeplitz(blocks)?;
    let nt = t.norm();
    if nt > 1.0 + tol.spectral {
        return Err(Error::NotContraction(nt));
    }
    let mut ext: Vec<ComplexMatrix> = blocks.to_vec();
    ext.push(ComplexMatrix::zeros(b, b));
    let full = upper_block_toeplitz(&ext)?;
    let a = full.submatrix(0, 0, b, n * b);
    let c = full.submatrix(b, 0, n * b, n * b);
    let d = full.submatrix(b, n * b, n * b, b);
    let data = ParrottData::new(a, c, d, tol)?;
    parrott_solve(&data, v, tol)
}

/// `[[ω, α, 0], [0, ω, β], [0, 0, ω]]`.
pub fn jordan3(omega: C64, alpha: C64, beta: C64) -> ComplexMatrix {
    let z = C64::default();
    ComplexMatrix::new(3, 3, vec![omega, alpha, z, z, omega, beta, z, z, omega]).expect("finite entries")
}

/// Closed-form contractivity test for [`jordan3`]:
/// `|α|, |β| ≤ 1 − |ω|²` and
/// `|αβω|² ≤ ((1−|ω|²)² − |α|²)((1−|ω|²)² − |β|²)`.
pub fn contraction_3x3(omega: C64, alpha: C64, beta: C64) -> bool {
    let eps = 1e-12;
    let c = 1.0 - omega.norm_sqr();
    let (a, b, w) = (alpha.norm(), beta.norm(), omega.norm());
    if w > 1.0 + eps {
        return false;
    }
    if a > c + eps || b > c + eps {
        return false;
    }
    let lhs = (a * b * w).powi(2);
    let rhs = (c * c - a * a) * (c * c - b * b);
    lhs <= rhs + eps
}

/// Largest common `|α| = |β|` for which [`jordan3`] is a contraction:
/// `(1 − |ω|)√(1 + |ω|)`.
pub fn equal_offdiag_threshold(omega: f64) -> f64 {
    let w = omega.abs();
    (1.0 - w) * (1.0 + w).sqrt()
}

/// Corner entries making `[[ω, α, a], [0, ω, β], [0, 0, ω]]` contractive:
/// `√(c − |α|²/c) v √(c − |β|²/c) − ω̄βα/c` with `c = 1 − |ω|²` and `|v| ≤ 1`.
pub fn corner_3x3(omega: C64, alpha: C64, beta: C64, v: C64) -> Result<C64> {
    let c = 1.0 - omega.norm_sqr();
    if c <= 0.0 {
        return Err(Error::PreconditionFailed("|ω| must be below 1".into()));
    }
    let l = c - alpha.norm_sqr() / c;
    let r = c - beta.norm_sqr() / c;
    if l < -1e-12 || r < -1e-12 {
        return Err(Error::NotContraction(alpha.norm().max(beta.norm()) / c));
    }
    Ok(v * cr(l.max(0.0).sqrt() * r.max(0.0).sqrt()) - omega.conj() * beta * alpha / cr(c))
}
