//! Multiplication and Hankel operators on `L²(𝕋²)` at truncation scale.
//!
//! With `z₂ = λz₁`, the monomial `z₁^m z₂^n` becomes `z₁^{m+n} λⁿ`, so
//! `L²(𝕋²) = ⊕_k z₁^k L²(𝕋_λ)`. Multiplication by `φ = Σ_k z₁^k f_k(λ)`
//! maps block `a` to block `a + k` through `M_{f_k}`, and the subspace
//! `H₁ = ⊕_{k≥0} z₁^k L²` is the span of monomials with `m + n ≥ 0`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cf::CFProblem2D;
use crate::error::{Error, Result};
use crate::matrix::{cr, ComplexMatrix, C64};
use crate::multop::{laurent_matrix, Laurent};
use crate::poly::MultiPoly;
use crate::tolerance::Tolerance;
use crate::torus;

/// Trigonometric polynomial `Σ a_mn z₁^m z₂^n` on 𝕋², `m, n ∈ ℤ`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Symbol2D {
    coeffs: BTreeMap<(i32, i32), C64>,
}

impl Symbol2D {
    pub fn new(terms: impl IntoIterator<Item = ((i32, i32), C64)>) -> Self {
        let mut s = Self::default();
        for (k, a) in terms {
            s.add_term(k, a);
        }
        s
    }

    pub fn from_poly(p: &MultiPoly) -> Result<Self> {
        if p.nvars() != 2 {
            return Err(Error::ArityMismatch {
                expected: 2,
                got: p.nvars(),
            });
        }
        Ok(Self::new(p.terms().map(|(e, a)| ((e[0] as i32, e[1] as i32), *a))))
    }

    /// `z̄₁^k φ`.
    pub fn shift(&self, dm: i32, dn: i32) -> Self {
        Self::new(self.coeffs.iter().map(|(&(m, n), &a)| ((m + dm, n + dn), a)))
    }

    fn add_term(&mut self, k: (i32, i32), a: C64) {
        let e = self.coeffs.entry(k).or_default();
        *e += a;
        if *e == C64::default() {
            self.coeffs.remove(&k);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = ((i32, i32), C64)> + '_ {
        self.coeffs.iter().map(|(k, a)| (*k, *a))
    }

    pub fn coeff(&self, m: i32, n: i32) -> C64 {
        self.coeffs.get(&(m, n)).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut s = self.clone();
        for (k, a) in other.terms() {
            s.add_term(k, -a);
        }
        s
    }

    /// Whether every term has `m + n ≥ 0`.
    pub fn in_h1(&self) -> bool {
        self.coeffs.keys().all(|(m, n)| m + n >= 0)
    }

    /// Largest `|m + n|` in the support.
    pub fn max_diagonal(&self) -> usize {
        self.coeffs.keys().map(|(m, n)| (m + n).unsigned_abs() as usize).max().unwrap_or(0)
    }

    /// Largest `|n|` in the support.
    pub fn max_slice_degree(&self) -> usize {
        self.coeffs.keys().map(|(_, n)| n.unsigned_abs() as usize).max().unwrap_or(0)
    }

    pub fn eval_angles(&self, t1: f64, t2: f64) -> C64 {
        self.terms()
            .map(|((m, n), a)| a * C64::from_polar(1.0, m as f64 * t1 + n as f64 * t2))
            .sum()
    }

    /// Grid lower bound for `sup_{𝕋²} |φ|`.
    pub fn sup_torus(&self, grid: usize, refine: usize) -> f64 {
        torus::maximize(2, grid, refine, false, |t| self.eval_angles(t[0], t[1]).norm()).value
    }
}

#[derive(Serialize, Deserialize)]
struct SymbolTerm {
    m: i32,
    n: i32,
    re: f64,
    #[serde(default)]
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct SymbolRepr {
    terms: Vec<SymbolTerm>,
}

impl Serialize for Symbol2D {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SymbolRepr {
            terms: self
                .terms()
                .map(|((m, n), a)| SymbolTerm { m, n, re: a.re, im: a.im })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Symbol2D {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = SymbolRepr::deserialize(d)?;
        if r.terms.iter().any(|t| !t.re.is_finite() || !t.im.is_finite()) {
            return Err(serde::de::Error::custom("non-finite coefficient"));
        }
        Ok(Symbol2D::new(r.terms.into_iter().map(|t| ((t.m, t.n), C64::new(t.re, t.im)))))
    }
}

/// `f_k(λ) = Σ_{m+n=k} a_mn λⁿ`, nonzero slices only.
pub fn slice_functions(phi: &Symbol2D) -> BTreeMap<i32, Laurent> {
    let mut out: BTreeMap<i32, Laurent> = BTreeMap::new();
    for ((m, n), a) in phi.terms() {
        let e = out.entry(m + n).or_insert_with(Laurent::zero);
        *e = e.add(&Laurent::monomial(n, a));
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn check_window(phi: &Symbol2D, window: usize) -> Result<()> {
    let need = 2 * phi.max_diagonal().max(phi.max_slice_degree());
    if window < need.max(1) {
        return Err(Error::WindowTooSmall {
            window,
            degree: need / 2,
        });
    }
    Ok(())
}

/// Truncated block Laurent matrix of `M_φ` on the blocks `−W..=W`, each
/// block itself truncated to the λ-modes `−W..=W`.
pub fn mult_op_2d(phi: &Symbol2D, window: usize) -> Result<ComplexMatrix> {
    check_window(phi, window)?;
    let slices = slice_functions(phi);
    let nb = 2 * window + 1;
    let zero = ComplexMatrix::zeros(nb, nb);
    let mats: BTreeMap<i32, ComplexMatrix> = slices.iter().map(|(k, f)| (*k, laurent_matrix(f, window))).collect();
    let grid: Vec<Vec<ComplexMatrix>> = (0..nb)
        .map(|i| {
            (0..nb)
                .map(|j| mats.get(&(i as i32 - j as i32)).unwrap_or(&zero).clone())
                .collect()
        })
        .collect();
    ComplexMatrix::from_blocks(&grid)
}

pub fn mult_op_2d_norm(phi: &Symbol2D, window: usize) -> Result<f64> {
    Ok(mult_op_2d(phi, window)?.norm())
}

/// Truncated block Hankel matrix with block `(i, j)` equal to
/// `M_{f_{−(i+j−1)}}`, for `i, j = 1..=K` where `K` is the deepest negative
/// diagonal of the symbol (blocks further out vanish).
pub fn hankel_2d(phi: &Symbol2D, window: usize) -> Result<ComplexMatrix> {
    check_window(phi, window)?;
    let slices = slice_functions(phi);
    let depth = slices.keys().filter(|k| **k < 0).map(|k| k.unsigned_abs() as usize).max().unwrap_or(1);
    let nb = 2 * window + 1;
    let zero = ComplexMatrix::zeros(nb, nb);
    let mats: BTreeMap<i32, ComplexMatrix> = slices.iter().map(|(k, f)| (*k, laurent_matrix(f, window))).collect();
    let grid: Vec<Vec<ComplexMatrix>> = (1..=depth)
        .map(|i| {
            (1..=depth)
                .map(|j| mats.get(&-((i + j - 1) as i32)).unwrap_or(&zero).clone())
                .collect()
        })
        .collect();
    ComplexMatrix::from_blocks(&grid)
}

/// Bracket `lower ≤ dist(φ, H₁) ≲ upper`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NehariBracket {
    /// `‖H_φ‖` at the window.
    pub lower: f64,
    /// `sup |φ − g|` for the best `g ∈ H₁` found.
    pub upper: f64,
    pub window: usize,
    /// Best upper value after each descent sweep; nonincreasing.
    pub monotonicity_trace: Vec<f64>,
    pub best: Symbol2D,
}

/// Lower bound from the truncated Hankel norm, upper bound from a pattern
/// search over `g ∈ H₁` supported on diagonals `0..=d` (`d = min(W/2, 4)`)
/// near the support of `φ`. `search_budget` caps the number of sweeps.
pub fn nehari_gap(phi: &Symbol2D, window: usize, search_budget: usize, seed: u64) -> Result<NehariBracket> {
    let lower = hankel_2d(phi, window)?.norm();
    let analytic = Symbol2D::new(phi.terms().filter(|((m, n), _)| m + n >= 0));
    if phi.in_h1() {
        return Ok(NehariBracket {
            lower,
            upper: 0.0,
            window,
            monotonicity_trace: vec![0.0],
            best: analytic,
        });
    }
    let d = (window / 2).min(4) as i32;
    let (nlo, nhi) = phi
        .terms()
        .fold((i32::MAX, i32::MIN), |(lo, hi), ((_, n), _)| (lo.min(n), hi.max(n)));
    let support: Vec<(i32, i32)> = (0..=d)
        .flat_map(|k| (nlo - d..=nhi + d).map(move |n| (k - n, n)))
        .collect();
    let g = 48usize;
    let pts: Vec<(f64, f64)> = (0..g * g)
        .map(|i| {
            let step = std::f64::consts::TAU / g as f64;
            ((i % g) as f64 * step, (i / g) as f64 * step)
        })
        .collect();
    let basis: Vec<Vec<C64>> = support
        .iter()
        .map(|&(m, n)| {
            pts.iter()
                .map(|&(a, b)| C64::from_polar(1.0, m as f64 * a + n as f64 * b))
                .collect()
        })
        .collect();
    let base: Vec<C64> = pts.iter().map(|&(a, b)| phi.eval_angles(a, b)).collect();
    let sup = |r: &[C64]| r.iter().map(|z| z.norm()).fold(0.0, f64::max);
    // Residual φ − g on the grid, starting from g = 0 or from the analytic
    // part of φ, whichever is better.
    let mut coef = vec![C64::default(); support.len()];
    let mut resid = base.clone();
    let with_analytic: Vec<C64> = support.iter().map(|&(m, n)| analytic.coeff(m, n)).collect();
    let mut trial = base.clone();
    for (c, b) in with_analytic.iter().zip(&basis) {
        for (t, v) in trial.iter_mut().zip(b) {
            *t -= c * v;
        }
    }
    if sup(&trial) < sup(&resid) {
        coef = with_analytic;
        resid = trial;
    }
    let mut best = sup(&resid);
    let mut trace = vec![best];
    let mut step = 0.25 * best.max(1e-3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dirs = [cr(1.0), cr(-1.0), C64::new(0.0, 1.0), C64::new(0.0, -1.0)];
    for _ in 0..search_budget {
        let mut improved = false;
        let start = rng.gen_range(0..support.len());
        for off in 0..support.len() {
            let j = (start + off) % support.len();
            for dir in dirs {
                let delta = dir * cr(step);
                let cand: Vec<C64> = resid.iter().zip(&basis[j]).map(|(r, b)| r - delta * b).collect();
                let v = sup(&cand);
                if v < best - 1e-15 {
                    best = v;
                    resid = cand;
                    coef[j] += delta;
                    improved = true;
                }
            }
        }
        trace.push(best);
        if !improved {
            step *= 0.5;
            if step < 1e-9 {
                break;
            }
        }
    }
    let g_sym = Symbol2D::new(support.iter().copied().zip(coef));
    let upper = phi.sub(&g_sym).sup_torus(128, 3);
    Ok(NehariBracket {
        lower,
        upper,
        window,
        monotonicity_trace: trace,
        best: g_sym,
    })
}

/// `φ = z̄₁³ p` for the jet `p`; its Hankel matrix starts with the blocks
/// `(M_{p₂}, M_{p₁}; M_{p₁}, 0)`.
pub fn cf_hankel_symbol(prob: &CFProblem2D) -> Symbol2D {
    Symbol2D::from_poly(&prob.to_poly())
        .expect("two variables")
        .shift(-3, 0)
}

/// `‖H_φ‖ ≤ 1 + tol.spectral` for `φ = z̄₁³ p`.
pub fn cf_hankel_necessary(prob: &CFProblem2D, window: usize, tol: &Tolerance) -> Result<bool> {
    Ok(cf_hankel_norm(prob, window)? <= 1.0 + tol.spectral)
}

pub fn cf_hankel_norm(prob: &CFProblem2D, window: usize) -> Result<f64> {
    let phi = cf_hankel_symbol(prob);
    if phi.is_zero() {
        return Ok(0.0);
    }
    Ok(hankel_2d(&phi, window)?.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(terms: &[((i32, i32), f64)]) -> Symbol2D {
        Symbol2D::new(terms.iter().map(|&(k, a)| (k, cr(a))))
    }

    #[test]
    fn slices() {
        let s = slice_functions(&sym(&[((1, 1), 1.0)]));
        assert_eq!(s.len(), 1);
        assert_eq!(s[&2], Laurent::monomial(1, cr(1.0)));
        let s = slice_functions(&sym(&[((-1, 0), 1.0)]));
        assert_eq!(s[&-1], Laurent::constant(cr(1.0)));
        let p = CFProblem2D::new(cr(0.5f64.sqrt()), cr(0.0), cr(0.0), cr(0.0), cr(0.5));
        let s = slice_functions(&cf_hankel_symbol(&p));
        assert_eq!(s[&-2], p.p1());
        assert_eq!(s[&-1], p.p2());
        assert!(!s.contains_key(&-3));
    }

    #[test]
    fn reconstruction() {
        let phi = sym(&[((-2, 1), 0.5), ((1, 1), -0.25), ((0, -1), 0.3)]);
        let slices = slice_functions(&phi);
        let (t1, t2) = (0.4, -1.1);
        let lam = C64::from_polar(1.0, t2 - t1);
        let z1 = C64::from_polar(1.0, t1);
        let v: C64 = slices.iter().map(|(k, f)| f.eval(lam) * z1.powi(*k)).sum();
        assert!((v - phi.eval_angles(t1, t2)).norm() < 1e-13);
    }

    #[test]
    fn multiplication_norms() {
        assert!((mult_op_2d_norm(&sym(&[((0, 0), 1.0)]), 4).unwrap() - 1.0).abs() < 1e-12);
        let v = mult_op_2d_norm(&sym(&[((1, 0), 1.0), ((0, 1), 1.0)]), 8).unwrap();
        assert!(v <= 2.0 + 1e-12 && v > 1.9);
        let sq = sym(&[((2, 0), 1.0), ((1, 1), -2.0), ((0, 2), 1.0)]);
        let v = mult_op_2d_norm(&sq, 8).unwrap();
        assert!(v <= 4.0 + 1e-9 && v >= 0.95 * 4.0, "{v}");
        assert!(matches!(mult_op_2d_norm(&sq, 3), Err(Error::WindowTooSmall { .. })));
    }

    #[test]
    fn hankel_structure() {
        let analytic = sym(&[((1, 0), 1.0), ((2, -1), 0.5)]);
        assert_eq!(hankel_2d(&analytic, 4).unwrap().max_abs(), 0.0);
        let p = CFProblem2D::new(cr(0.5f64.sqrt()), cr(0.0), cr(0.0), cr(0.0), cr(0.5));
        let h = hankel_2d(&cf_hankel_symbol(&p), 8).unwrap();
        let b = 17;
        assert_eq!(h.shape(), (2 * b, 2 * b));
        assert_eq!(h.submatrix(0, 0, b, b), laurent_matrix(&p.p2(), 8));
        assert_eq!(h.submatrix(0, b, b, b), laurent_matrix(&p.p1(), 8));
        assert_eq!(h.submatrix(b, 0, b, b), h.submatrix(0, b, b, b));
        assert_eq!(h.submatrix(b, b, b, b).max_abs(), 0.0);
        let phi = cf_hankel_symbol(&p);
        assert!(h.norm() <= mult_op_2d_norm(&phi, 8).unwrap() + 1e-12);
    }

    #[test]
    fn nehari_examples() {
        let analytic = sym(&[((1, 0), 1.0), ((0, 1), 0.5)]);
        let r = nehari_gap(&analytic, 4, 10, 1).unwrap();
        assert_eq!((r.lower, r.upper), (0.0, 0.0));
        let bar = sym(&[((-1, 0), 1.0)]);
        let r = nehari_gap(&bar, 4, 20, 1).unwrap();
        assert!((r.lower - 1.0).abs() < 1e-12);
        assert!(r.upper <= 1.0 + 1e-9);
        assert!(r.lower <= r.upper + 1e-3);
        assert!(r.monotonicity_trace.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn hankel_necessary_examples() {
        let tol = Tolerance::default();
        let zero = CFProblem2D::new(cr(0.0), cr(0.0), cr(0.0), cr(0.0), cr(0.0));
        assert!(cf_hankel_necessary(&zero, 8, &tol).unwrap());
        let b = CFProblem2D::new(cr(0.5f64.sqrt()), cr(0.0), cr(0.0), cr(0.0), cr(0.5));
        assert!(cf_hankel_necessary(&b, 8, &tol).unwrap());
        let two = CFProblem2D::new(cr(2.0), cr(0.0), cr(0.0), cr(0.0), cr(0.0));
        assert!(!cf_hankel_necessary(&two, 8, &tol).unwrap());
    }
}
