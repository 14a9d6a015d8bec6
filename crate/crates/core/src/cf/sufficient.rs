//! A class of two-variable jets with explicit extensions.
//!
//! For `p₁(λ) = γ + δλ` and `p₂(λ) = (α + βλ)p₁(λ)` the jet is
//! `(γz₁ + δz₂)(1 + αz₁ + βz₂)` up to degree two, and the extension is
//! `(γz₁ + δz₂)·h(z₁, z₂)` with `h` built from one-variable minimal
//! extensions:
//!
//! * `β = 0`: `h = h̃(z₁)` extending `1 + αz`;
//! * `α = 0`: `h = h̃(z₂)` extending `1 + βz`;
//! * otherwise `1 + αz₁ + βz₂` is split as `(a + αz₁) + (1 − a + βz₂)` with
//!   `a = ρ/(1 + ρ)`, `ρ = |α|/|β|`, and each part is extended separately.
//!   This needs `arg α − arg β = arg γ − arg δ` unless `γδ = 0`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{cr, C64};
use crate::multop::Laurent;
use crate::poly::MultiPoly;
use crate::tolerance::Tolerance;
use crate::torus;

use super::onevar::{minimal_extension, RationalFn};
use super::twovar::{assemble, cf2_necessary, CFProblem2D};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SufficientCase {
    /// `β = 0`.
    FirstVariable,
    /// `α = 0`.
    SecondVariable,
    /// Both nonzero, split between the variables.
    Split,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SufficientReport {
    pub case: SufficientCase,
    /// Extension factor in `z₁` (absent in the second-variable case).
    pub h1: Option<RationalFn>,
    /// Extension factor in `z₂` (absent in the first-variable case).
    pub h2: Option<RationalFn>,
    /// `(a, ρ)` for the split case.
    pub split: Option<(f64, f64)>,
    /// Slice polynomials `p₁, …, p_max_degree` of the extension.
    pub blocks: Vec<Laurent>,
    /// Taylor polynomial of the extension up to `max_degree`.
    pub partial_sum: MultiPoly,
    /// Grid value of `sup_{𝕋²} |f|` for the closed-form extension.
    pub sup_norm: f64,
    pub gamma: C64,
    pub delta: C64,
}

impl SufficientReport {
    /// `f(z₁, z₂) = (γz₁ + δz₂)(h₁(z₁) + h₂(z₂))`.
    pub fn eval(&self, z1: C64, z2: C64) -> C64 {
        let h = self.h1.as_ref().map_or(C64::default(), |h| h.eval(z1))
            + self.h2.as_ref().map_or(C64::default(), |h| h.eval(z2));
        (self.gamma * z1 + self.delta * z2) * h
    }
}

/// The problem `(γz₁ + δz₂)(1 + αz₁ + βz₂)` truncated at degree two.
pub fn sufficient_problem(alpha: C64, beta: C64, gamma: C64, delta: C64) -> CFProblem2D {
    CFProblem2D::new(gamma, delta, alpha * gamma, alpha * delta + beta * gamma, beta * delta)
}

pub fn cf2_sufficient_class(
    alpha: C64,
    beta: C64,
    gamma: C64,
    delta: C64,
    max_degree: usize,
    tol: &Tolerance,
) -> Result<SufficientReport> {
    let prob = sufficient_problem(alpha, beta, gamma, delta);
    if !cf2_necessary(&prob, 720) {
        return Err(Error::Infeasible("|p₂| + |p₁|² exceeds 1 somewhere on the circle".into()));
    }
    let zero = C64::default();
    let (case, h1, h2, split) = if beta == zero {
        (SufficientCase::FirstVariable, Some(minimal_extension(cr(1.0), alpha)), None, None)
    } else if alpha == zero {
        (SufficientCase::SecondVariable, None, Some(minimal_extension(cr(1.0), beta)), None)
    } else {
        let aligned = alpha * delta * (beta * gamma).conj();
        let arg_ok = aligned.im.abs() <= tol.algebraic * (1.0 + aligned.norm()) && aligned.re > 0.0;
        if gamma != zero && delta != zero && !arg_ok {
            return Err(Error::NotInClass(
                "arg α − arg β differs from arg γ − arg δ".into(),
            ));
        }
        let rho = alpha.norm() / beta.norm();
        let a = rho / (1.0 + rho);
        (
            SufficientCase::Split,
            Some(minimal_extension(cr(a), alpha)),
            Some(minimal_extension(cr(1.0 - a), beta)),
            Some((a, rho)),
        )
    };
    let n = max_degree.max(2);
    let t1 = h1.as_ref().map_or(vec![zero; n], |h| h.taylor(n));
    let t2 = h2.as_ref().map_or(vec![zero; n], |h| h.taylor(n));
    let p1 = Laurent::analytic(&[gamma, delta]);
    let blocks: Vec<Laurent> = (1..=n)
        .map(|k| {
            let j = k - 1;
            let s = Laurent::constant(t1[j]).add(&Laurent::monomial(j as i32, t2[j]));
            p1.mul(&s)
        })
        .collect();
    let partial_sum = assemble(&blocks)?;
    let mut report = SufficientReport {
        case,
        h1,
        h2,
        split,
        blocks,
        partial_sum,
        sup_norm: 0.0,
        gamma,
        delta,
    };
    let m = torus::maximize(2, 128, 3, false, |t| {
        report
            .eval(C64::from_polar(1.0, t[0]), C64::from_polar(1.0, t[1]))
            .norm()
    });
    report.sup_norm = m.value;
    if m.value > 1.0 + tol.grid {
        return Err(Error::CrossCheck(format!(
            "constructed extension reaches {} on the torus",
            m.value
        )));
    }
    let jet = report.partial_sum.homogeneous_part(1).add(&report.partial_sum.homogeneous_part(2))?;
    let miss = jet.sub(&prob.to_poly())?.coeff_l1();
    if miss > tol.algebraic {
        return Err(Error::CrossCheck(format!("extension misses the jet by {miss:.3e}")));
    }
    Ok(report)
}
