//! One-variable Carathéodory–Fejér problem for the jet `a₁z + a₂z²`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{cr, upper_toeplitz, C64};
use crate::poly::MultiPoly;
use crate::tolerance::Tolerance;

/// Find `f: 𝔻 → 𝔻` with `f(0) = 0`, `f′(0) = a1`, `f″(0)/2 = a2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CFProblem1D {
    pub a1: C64,
    pub a2: C64,
}

impl CFProblem1D {
    pub fn new(a1: C64, a2: C64) -> Self {
        Self { a1, a2 }
    }

    /// `‖𝒯(a1, a2)‖ = (|a2| + √(|a2|² + 4|a1|²))/2`.
    pub fn toeplitz_norm(&self) -> f64 {
        let (a, b) = (self.a1.norm(), self.a2.norm());
        0.5 * (b + (b * b + 4.0 * a * a).sqrt())
    }
}

/// Solvable exactly when `|a2| + |a1|² ≤ 1`.
pub fn cf1_feasible(prob: &CFProblem1D) -> bool {
    prob.a2.norm() + prob.a1.norm_sqr() <= 1.0 + 1e-12
}

/// Quotient of one-variable polynomials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalFn {
    pub num: MultiPoly,
    pub den: MultiPoly,
}

impl RationalFn {
    pub fn new(num: &[C64], den: &[C64]) -> Result<Self> {
        if den.first().is_none_or(|d| d.norm() == 0.0) {
            return Err(Error::PreconditionFailed("denominator vanishes at 0".into()));
        }
        Ok(Self {
            num: MultiPoly::univariate(num),
            den: MultiPoly::univariate(den),
        })
    }

    pub fn polynomial(coeffs: &[C64]) -> Self {
        Self::new(coeffs, &[cr(1.0)]).expect("unit denominator")
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.num.eval_unchecked(&[z]) / self.den.eval_unchecked(&[z])
    }

    /// First `n` Taylor coefficients at 0, by series division.
    pub fn taylor(&self, n: usize) -> Vec<C64> {
        let num = self.num.univariate_coeffs();
        let den = self.den.univariate_coeffs();
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let mut s = num.get(k).copied().unwrap_or_default();
            for j in 1..=k.min(den.len().saturating_sub(1)) {
                s -= den[j] * out[k - j];
            }
            out.push(s / den[0]);
        }
        out
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            num: self.num.scale(s),
            den: self.den.clone(),
        }
    }

    /// Grid estimate of `sup_𝕋 |f|`.
    pub fn sup_circle(&self, grid: usize) -> f64 {
        (0..grid.max(1))
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / grid.max(1) as f64;
                self.eval(C64::from_polar(1.0, t)).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// `s(w + uz)/(1 + w̄uz)` with `s = ‖𝒯(c0, c1)‖`, `w = c0/s`,
/// `u = (c1/s)/(1 − |w|²)`: the extension of `c0 + c1 z` whose sup norm is
/// exactly `‖𝒯(c0, c1)‖`.
pub fn minimal_extension(c0: C64, c1: C64) -> RationalFn {
    let s = CFProblem1D::new(c0, c1).toeplitz_norm();
    if s == 0.0 {
        return RationalFn::polynomial(&[]);
    }
    if c1.norm() == 0.0 {
        return RationalFn::polynomial(&[c0]);
    }
    let w = c0 / cr(s);
    let u = (c1 / cr(s)) / cr(1.0 - w.norm_sqr());
    RationalFn::new(&[w * cr(s), u * cr(s)], &[cr(1.0), w.conj() * u]).expect("unit constant term")
}

/// Builds an extension of a feasible jet.
///
/// With `theta = None` the jet is scaled radially onto the boundary of the
/// feasible set, `t = ‖𝒯(a1, a2)‖`, and `f = z·t·B` with `B` the Möbius map
/// matching `(a1/t, a2/t)`; then `sup |f| = t`. With `theta = Some(θ)` the
/// Schur parameter `γ = a2/(1 − |a1|²)` is continued by the unimodular
/// `e^{iθ}`, giving `f = z(a1 + zB₁)/(1 + ā1 z B₁)` with
/// `B₁ = (γ + e^{iθ}z)/(1 + γ̄e^{iθ}z)`; on the boundary `|γ| = 1` this is
/// the usual `z(e^{iθ}z + β)/(1 + β̄e^{iθ}z)` form up to normalization.
pub fn cf1_construct(prob: &CFProblem1D, theta: Option<f64>, tol: &Tolerance) -> Result<RationalFn> {
    if !cf1_feasible(prob) {
        return Err(Error::Infeasible(format!(
            "|a2| + |a1|² = {} exceeds 1",
            prob.a2.norm() + prob.a1.norm_sqr()
        )));
    }
    let (a1, a2) = (prob.a1, prob.a2);
    let f = match theta {
        None => {
            let b = minimal_extension(a1, a2);
            RationalFn {
                num: b.num.mul(&MultiPoly::var(1, 0))?,
                den: b.den,
            }
        }
        Some(t) => {
            let rest = 1.0 - a1.norm_sqr();
            if rest <= 1e-14 {
                RationalFn::polynomial(&[cr(0.0), a1])
            } else {
                let g = a2 / cr(rest);
                let g = if g.norm() > 1.0 { g / cr(g.norm()) } else { g };
                let e = C64::from_polar(1.0, t);
                RationalFn::new(
                    &[cr(0.0), a1, a1 * g.conj() * e + g, e],
                    &[cr(1.0), g.conj() * e + a1.conj() * g, a1.conj() * e],
                )?
            }
        }
    };
    let taylor = f.taylor(3);
    let miss = (taylor[0].norm())
        .max((taylor[1] - a1).norm())
        .max((taylor[2] - a2).norm());
    if miss > 1e-10 {
        return Err(Error::CrossCheck(format!("Taylor coefficients off by {miss:.3e}")));
    }
    let sup = f.sup_circle(1024);
    if sup > 1.0 + tol.grid {
        return Err(Error::CrossCheck(format!("constructed map has sup norm {sup}")));
    }
    Ok(f)
}

/// `‖𝒯(a1, a2)‖` by SVD of the 2×2 matrix, as an independent check on
/// [`cf1_feasible`].
pub fn cf1_toeplitz_svd_norm(prob: &CFProblem1D) -> f64 {
    upper_toeplitz(&[prob.a1, prob.a2]).expect("finite").norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::c;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn feasibility_examples() {
        assert!(cf1_feasible(&CFProblem1D::new(cr(1.0), cr(0.0))));
        assert!(cf1_feasible(&CFProblem1D::new(cr(0.6), cr(0.64))));
        assert!(!cf1_feasible(&CFProblem1D::new(cr(0.8), cr(0.5))));
        let p = CFProblem1D::new(c(0.3, 0.4), c(0.0, -0.7));
        assert!((p.toeplitz_norm() - cf1_toeplitz_svd_norm(&p)).abs() < 1e-12);
    }

    #[test]
    fn constructions() {
        let sq = cf1_construct(&CFProblem1D::new(cr(0.0), cr(1.0)), Some(0.0), &tol()).unwrap();
        let t = sq.taylor(5);
        assert!((t[2] - cr(1.0)).norm() < 1e-14 && t[3].norm() < 1e-14 && t[4].norm() < 1e-14);
        let rot = cf1_construct(&CFProblem1D::new(cr(1.0), cr(0.0)), None, &tol()).unwrap();
        let z = c(0.3, 0.2);
        assert!((rot.eval(z) - z).norm() < 1e-14);
        let b = cf1_construct(&CFProblem1D::new(cr(0.6), cr(0.64)), None, &tol()).unwrap();
        assert!((b.sup_circle(2048) - 1.0).abs() < 1e-9);
        let inner = CFProblem1D::new(c(0.2, 0.1), c(-0.3, 0.2));
        for theta in [None, Some(0.0), Some(2.0)] {
            let f = cf1_construct(&inner, theta, &tol()).unwrap();
            let t = f.taylor(3);
            assert!((t[1] - inner.a1).norm() < 1e-12 && (t[2] - inner.a2).norm() < 1e-12);
        }
        assert!(matches!(
            cf1_construct(&CFProblem1D::new(cr(0.8), cr(0.5)), None, &tol()),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn minimal_extension_norm() {
        let h = minimal_extension(cr(1.0), c(0.3, 0.3));
        let want = CFProblem1D::new(cr(1.0), c(0.3, 0.3)).toeplitz_norm();
        assert!((h.sup_circle(4096) - want).abs() < 1e-9);
        let t = h.taylor(2);
        assert!((t[0] - cr(1.0)).norm() < 1e-14 && (t[1] - c(0.3, 0.3)).norm() < 1e-14);
    }
}
