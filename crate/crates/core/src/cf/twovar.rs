//! Two-variable Carathéodory–Fejér problem for degree-two jets.
//!
//! Writing `z₂ = λz₁`, a polynomial `P = Σ a_mn z₁^m z₂^n` becomes
//! `Σ_k p_k(λ) z₁^k` with slice polynomials `p_k(λ) = Σ_{m+n=k} a_mn λⁿ`.
//! Extending `P` to a map `𝔻² → 𝔻` amounts to extending the block Toeplitz
//! contraction `𝒯(M_{p₁}, M_{p₂})` by multiplication operators of
//! polynomials `p_k` of degree at most `k`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{cr, ComplexMatrix, C64};
use crate::multop::{extract_symbol, laurent_matrix, Laurent, TruncatedMultOp};
use crate::parrott::toeplitz_extend_step;
use crate::poly::{slice_polynomials, MultiPoly};
use crate::tolerance::Tolerance;
use crate::torus;

use super::kp::{cayley_coeffs_2d, cayley_inverse_2d, toeplitz_of_blocks};
use super::onevar::CFProblem1D;

/// Default Fourier window for truncated multiplication operators.
pub const DEFAULT_WINDOW: usize = 16;

/// `a10 z₁ + a01 z₂ + a20 z₁² + a11 z₁z₂ + a02 z₂²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CFProblem2D {
    pub a10: C64,
    pub a01: C64,
    pub a20: C64,
    pub a11: C64,
    pub a02: C64,
}

impl CFProblem2D {
    pub fn new(a10: C64, a01: C64, a20: C64, a11: C64, a02: C64) -> Self {
        Self {
            a10,
            a01,
            a20,
            a11,
            a02,
        }
    }

    pub fn from_poly(p: &MultiPoly) -> Result<Self> {
        let (p1, p2) = slice_polynomials(p)?;
        let l = p1.univariate_coeffs();
        let q = p2.univariate_coeffs();
        let at = |v: &[C64], i: usize| v.get(i).copied().unwrap_or_default();
        Ok(Self::new(at(&l, 0), at(&l, 1), at(&q, 0), at(&q, 1), at(&q, 2)))
    }

    /// Coefficients in the order `a10, a01, a20, a11, a02`.
    pub fn from_slice(v: &[C64]) -> Result<Self> {
        if v.len() != 5 {
            return Err(Error::ArityMismatch {
                expected: 5,
                got: v.len(),
            });
        }
        Ok(Self::new(v[0], v[1], v[2], v[3], v[4]))
    }

    pub fn to_poly(&self) -> MultiPoly {
        MultiPoly::from_terms(
            2,
            [
                (vec![1, 0], self.a10),
                (vec![0, 1], self.a01),
                (vec![2, 0], self.a20),
                (vec![1, 1], self.a11),
                (vec![0, 2], self.a02),
            ],
        )
        .expect("fixed arity")
    }

    /// `p₁(λ) = a10 + a01 λ`.
    pub fn p1(&self) -> Laurent {
        Laurent::analytic(&[self.a10, self.a01])
    }

    /// `p₂(λ) = a20 + a11 λ + a02 λ²`.
    pub fn p2(&self) -> Laurent {
        Laurent::analytic(&[self.a20, self.a11, self.a02])
    }
}

/// Pointwise and truncated forms of the necessary condition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NecessaryReport {
    pub holds: bool,
    /// `max_λ |p₂(λ)| + |p₁(λ)|²` on the grid.
    pub worst: f64,
    pub worst_angle: f64,
    /// `‖𝒯(M_{p₁}, M_{p₂})‖` at the window.
    pub truncated_norm: f64,
    pub window: usize,
}

/// `|p₂(λ)| + |p₁(λ)|² ≤ 1 + tol.grid` on a `grid`-point sample of 𝕋.
pub fn cf2_necessary(prob: &CFProblem2D, grid: usize) -> bool {
    necessary_worst(prob, grid).0 <= 1.0 + Tolerance::default().grid
}

fn necessary_worst(prob: &CFProblem2D, grid: usize) -> (f64, f64) {
    let (p1, p2) = (prob.p1(), prob.p2());
    let m = torus::maximize(1, grid.max(8), 3, false, |t| {
        p2.eval_angle(t[0]).norm() + p1.eval_angle(t[0]).norm_sqr()
    });
    (m.value, m.angles[0])
}

/// [`cf2_necessary`] together with the truncated block norm.
pub fn cf2_necessary_report(prob: &CFProblem2D, grid: usize, window: usize, tol: &Tolerance) -> NecessaryReport {
    let (worst, worst_angle) = necessary_worst(prob, grid);
    let blocks = [
        TruncatedMultOp::from_laurent(prob.p1(), window),
        TruncatedMultOp::from_laurent(prob.p2(), window),
    ];
    let truncated_norm = toeplitz_of_blocks(&blocks).expect("shared window").norm();
    NecessaryReport {
        holds: worst <= 1.0 + tol.grid,
        worst,
        worst_angle,
        truncated_norm,
        window,
    }
}

/// Outcome of [`cf2_extend`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ExtendStatus {
    Extended,
    /// The block forced at step `k` is not a polynomial of degree at most `k`.
    DegreeViolation { k: usize, forced: Laurent },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cf2Extension {
    pub status: ExtendStatus,
    /// Symbols `p₁, p₂, …` produced so far.
    pub blocks: Vec<Laurent>,
    /// `‖𝒯(M_{p₁}, …, M_{p_k})‖` after each accepted step.
    pub norms: Vec<f64>,
    /// Band and Toeplitz defects of each extracted block.
    pub defects: Vec<(f64, f64)>,
    /// Set when a violation occurs for data outside the exactly degenerate
    /// case `(1 − |p₁|²)² ≡ |p₂|²`, where the zero free parameter is not the
    /// only admissible choice.
    pub caveat: Option<String>,
    pub window: usize,
}

impl Cf2Extension {
    /// Two-variable polynomial `Σ_k p_k(z₂/z₁) z₁^k`.
    pub fn assembled(&self) -> Result<MultiPoly> {
        assemble(&self.blocks)
    }
}

/// `Σ_k p_k(z₂/z₁) z₁^k` for blocks `p_k` of degree at most `k`.
pub fn assemble(blocks: &[Laurent]) -> Result<MultiPoly> {
    let mut terms = Vec::new();
    for (i, b) in blocks.iter().enumerate() {
        let k = i as i32 + 1;
        if !b.is_zero() && (b.low() < 0 || b.high() > k) {
            return Err(Error::DegreeOverflow {
                index: i + 1,
                degree: b.high() as i64,
            });
        }
        for (n, a) in b.terms() {
            terms.push((vec![(k - n) as u32, n as u32], a));
        }
    }
    MultiPoly::from_terms(2, terms)
}

/// Runs the Parrott extension with zero free parameter on the truncated
/// blocks `M_{p₁}, M_{p₂}`, reading each new block back as a symbol.
///
/// Each new block must be a banded Toeplitz matrix of degree at most `k` in
/// the interior of the window; otherwise the run stops with
/// [`ExtendStatus::DegreeViolation`]. Accepted symbols replace the raw
/// completion so that later steps see exact multiplication operators.
pub fn cf2_extend(prob: &CFProblem2D, max_degree: usize, window: usize, tol: &Tolerance) -> Result<Cf2Extension> {
    if 2 * max_degree >= window {
        return Err(Error::WindowTooSmall {
            window,
            degree: max_degree,
        });
    }
    let report = cf2_necessary_report(prob, 720, window, tol);
    if !report.holds {
        return Err(Error::Infeasible(format!(
            "|p₂| + |p₁|² reaches {} at angle {}",
            report.worst, report.worst_angle
        )));
    }
    let mut symbols = vec![prob.p1(), prob.p2()];
    let mut mats: Vec<ComplexMatrix> = symbols.iter().map(|s| laurent_matrix(s, window)).collect();
    let mut norms = vec![upper_block(&mats)?];
    let mut defects = Vec::new();
    let half = (window / 2) as i32;
    for k in 3..=max_degree {
        let step = toeplitz_extend_step(&mats, None, tol)?;
        let within = extract_symbol(&step.x, window, 0..=k as i32, tol.spectral)?;
        defects.push((within.band_defect, within.toeplitz_defect));
        if !within.is_clean(tol.spectral) {
            let forced = extract_symbol(&step.x, window, -half..=half, tol.spectral)?.symbol;
            let caveat = (!degenerate(prob)).then(|| {
                "the zero free parameter was used; another contraction might extend this data".to_string()
            });
            return Ok(Cf2Extension {
                status: ExtendStatus::DegreeViolation { k, forced },
                blocks: symbols,
                norms,
                defects,
                caveat,
                window,
            });
        }
        mats.push(laurent_matrix(&within.symbol, window));
        symbols.push(within.symbol);
        let n = upper_block(&mats)?;
        if n > 1.0 + tol.spectral {
            return Err(Error::NotContraction(n));
        }
        norms.push(n);
    }
    let ext = Cf2Extension {
        status: ExtendStatus::Extended,
        blocks: symbols,
        norms,
        defects,
        caveat: None,
        window,
    };
    // Round trip through the Cayley coefficients as a bookkeeping check.
    let ops: Vec<TruncatedMultOp> = ext
        .blocks
        .iter()
        .map(|s| TruncatedMultOp::from_laurent(s.clone(), window))
        .collect();
    let back = cayley_inverse_2d(&cayley_coeffs_2d(&ops, ops.len())?)?;
    let drift = back
        .iter()
        .zip(&ext.blocks)
        .map(|(b, s)| b.symbol().sub(s).max_coeff())
        .fold(0.0, f64::max);
    if drift > tol.algebraic {
        return Err(Error::CrossCheck(format!("Cayley round trip drifted by {drift:.3e}")));
    }
    Ok(ext)
}

fn upper_block(mats: &[ComplexMatrix]) -> Result<f64> {
    Ok(crate::matrix::upper_block_toeplitz(mats)?.norm())
}

/// Whether `(1 − |p₁|²)² − |p₂|²` vanishes on the circle (to grid tolerance).
fn degenerate(prob: &CFProblem2D) -> bool {
    let (p1, p2) = (prob.p1(), prob.p2());
    (0..720).all(|i| {
        let t = std::f64::consts::TAU * i as f64 / 720.0;
        let r = 1.0 - p1.eval_angle(t).norm_sqr();
        (r * r - p2.eval_angle(t).norm_sqr()).abs() <= 1e-9
    })
}

/// Derivatives `(∂₁f, ∂₂f, ∂₁₁f, ∂₁₂f, ∂₂₂f)` at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Jet2 {
    pub d1: C64,
    pub d2: C64,
    pub d11: C64,
    pub d12: C64,
    pub d22: C64,
}

impl Jet2 {
    pub fn to_problem(&self) -> CFProblem2D {
        let h = cr(0.5);
        CFProblem2D::new(self.d1, self.d2, self.d11 * h, self.d12, self.d22 * h)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremalValue {
    /// `‖𝒯(M_{p₁}, M_{p₂})‖` at the window; nondecreasing in the window.
    pub truncated: f64,
    /// `sup_λ ‖𝒯(p₁(λ), p₂(λ))‖` on a grid.
    pub scalar_sup: f64,
    /// Whether the two agree to `tol.grid`; truncation converges from below,
    /// so slow symbols can need larger windows.
    pub agree: bool,
}

/// The quantity bounded by 1 for every `f: 𝔻² → 𝔻` with `f(0) = 0`.
pub fn extremal_value(jet: &Jet2, window: usize, tol: &Tolerance) -> ExtremalValue {
    let prob = jet.to_problem();
    let blocks = [
        TruncatedMultOp::from_laurent(prob.p1(), window),
        TruncatedMultOp::from_laurent(prob.p2(), window),
    ];
    let truncated = toeplitz_of_blocks(&blocks).expect("shared window").norm();
    let (p1, p2) = (prob.p1(), prob.p2());
    let m = torus::maximize(1, 720, 3, false, |t| {
        CFProblem1D::new(p1.eval_angle(t[0]), p2.eval_angle(t[0])).toeplitz_norm()
    });
    ExtremalValue {
        truncated,
        scalar_sup: m.value,
        agree: (truncated - m.value).abs() <= tol.grid,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn counterexample() -> CFProblem2D {
        CFProblem2D::new(cr(0.5f64.sqrt()), cr(0.0), cr(0.0), cr(0.0), cr(0.5))
    }

    #[test]
    fn necessary_examples() {
        assert!(cf2_necessary(&counterexample(), 360));
        assert!(cf2_necessary(&CFProblem2D::new(cr(1.0), cr(0.0), cr(0.0), cr(0.0), cr(0.0)), 360));
        assert!(!cf2_necessary(&CFProblem2D::new(cr(1.0), cr(0.0), cr(0.0), cr(0.0), cr(1.0)), 360));
        let r = cf2_necessary_report(&counterexample(), 360, 16, &tol());
        assert!((r.worst - 1.0).abs() < 1e-12);
        assert!(r.truncated_norm <= 1.0 + 1e-12);
    }

    #[test]
    fn counterexample_violates_degree() {
        let e = cf2_extend(&counterexample(), 4, 16, &tol()).unwrap();
        match &e.status {
            ExtendStatus::DegreeViolation { k, forced } => {
                assert_eq!(*k, 3);
                assert_eq!(forced.low(), 4);
                assert_eq!(forced.high(), 4);
                assert!((forced.coeff(4) + cr(1.0 / (2.0 * 2f64.sqrt()))).norm() < 1e-8);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(e.caveat.is_none());
    }

    #[test]
    fn degenerate_families_extend() {
        let only_p1 = CFProblem2D::new(cr(0.5), cr(0.3), cr(0.0), cr(0.0), cr(0.0));
        let e = cf2_extend(&only_p1, 6, 16, &tol()).unwrap();
        assert_eq!(e.status, ExtendStatus::Extended);
        assert!(e.blocks[2..].iter().all(|b| b.is_zero()));
        let sq = CFProblem2D::new(cr(0.0), cr(0.0), cr(1.0), cr(0.0), cr(0.0));
        let e = cf2_extend(&sq, 5, 16, &tol()).unwrap();
        assert_eq!(e.status, ExtendStatus::Extended);
        assert_eq!(e.assembled().unwrap(), MultiPoly::var(2, 0).pow(2));
        assert!(matches!(
            cf2_extend(&sq, 8, 16, &tol()),
            Err(Error::WindowTooSmall { .. })
        ));
    }

    #[test]
    fn extremal_examples() {
        let z1 = Jet2 {
            d1: cr(1.0),
            d2: cr(0.0),
            d11: cr(0.0),
            d12: cr(0.0),
            d22: cr(0.0),
        };
        assert!((extremal_value(&z1, 8, &tol()).truncated - 1.0).abs() < 1e-12);
        let z1z2 = Jet2 { d1: cr(0.0), d12: cr(1.0), ..z1 };
        assert!((extremal_value(&z1z2, 8, &tol()).truncated - 1.0).abs() < 1e-12);
        let b = Jet2 {
            d1: cr(0.5f64.sqrt()),
            d22: cr(1.0),
            ..z1
        };
        let v = extremal_value(&b, 16, &tol());
        assert!((v.truncated - 1.0).abs() < 1e-9);
        assert!((v.scalar_sup - 1.0).abs() < 1e-9);
        assert!(v.agree);
    }
}
