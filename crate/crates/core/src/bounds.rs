//! Quantitative experiments around the von Neumann inequality: ℓ∞→ℓ¹
//! norms of coefficient matrices, the Varopoulos–Kaijser ratio, minimal
//! sums of inner products and a second-derivative probe for bounded
//! holomorphic maps of the polydisc.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{cr, ComplexMatrix, C64};
use crate::poly::{check_budget, functional_calculus, jet_at_zero, sup_norm_torus, varopoulos_kaijser};
use crate::poly::{CommutingTuple, MultiPoly};
use crate::tolerance::Tolerance;
use crate::torus;
use crate::varopoulos::commuting_type1_tuple;

/// Largest matrix side accepted by [`norm_linf_to_l1`].
pub const LINF_L1_MAX_DIM: usize = 6;

/// `3√3/2`.
pub fn second_derivative_bound() -> f64 {
    1.5 * 3f64.sqrt()
}

/// Matrix of the Varopoulos–Kaijser form: 1 on the diagonal, −1 elsewhere.
pub fn varopoulos_kaijser_matrix() -> ComplexMatrix {
    ComplexMatrix::from_fn(3, 3, |i, j| cr(if i == j { 1.0 } else { -1.0 }))
}

/// `Σ a_jk z_j w_k`.
pub fn bilinear_form(a: &ComplexMatrix, z: &[C64], w: &[C64]) -> C64 {
    let mut s = C64::default();
    for (j, zj) in z.iter().enumerate() {
        for (k, wk) in w.iter().enumerate() {
            s += a.get(j, k) * zj * wk;
        }
    }
    s
}

/// Lower bound for `‖A‖_{ℓ∞→ℓ¹}` with the phase vectors attaining it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinfL1Norm {
    pub value: f64,
    pub z: Vec<C64>,
    pub w: Vec<C64>,
    /// Exact maximum over sign vectors, for real matrices.
    pub sign_max: Option<f64>,
    pub evaluations: u64,
}

fn column_mass(a: &ComplexMatrix, z: &[C64]) -> (f64, Vec<C64>) {
    let mut total = 0.0;
    let mut w = Vec::with_capacity(a.cols());
    for k in 0..a.cols() {
        let s: C64 = z.iter().enumerate().map(|(j, zj)| a.get(j, k) * zj).sum();
        let r = s.norm();
        total += r;
        w.push(if r > 0.0 { s.conj() / r } else { cr(1.0) });
    }
    (total, w)
}

/// `sup |Σ a_jk z_j w_k|` over unimodular `z`, `w`. For fixed `z` the best
/// `w` aligns each column sum, so only `z` is searched, on a grid with the
/// first phase pinned, followed by local refinement.
pub fn norm_linf_to_l1(a: &ComplexMatrix, grid: usize) -> Result<LinfL1Norm> {
    let n = a.rows();
    if n == 0 || a.cols() == 0 {
        return Err(Error::InvalidMatrix("empty matrix".into()));
    }
    if n > LINF_L1_MAX_DIM || a.cols() > LINF_L1_MAX_DIM {
        return Err(Error::BudgetExceeded(format!(
            "{}x{} matrix, phase grids are limited to side {LINF_L1_MAX_DIM}",
            a.rows(),
            a.cols()
        )));
    }
    check_budget(n, grid, n - 1)?;
    let phases = |t: &[f64]| -> Vec<C64> { t.iter().map(|&x| C64::from_polar(1.0, x)).collect() };
    let m = torus::maximize(n, grid, 4, true, |t| column_mass(a, &phases(t)).0);
    let z = phases(&m.angles);
    let (value, w) = column_mass(a, &z);
    let real = (0..n).all(|j| (0..a.cols()).all(|k| a.get(j, k).im == 0.0));
    let sign_max = real.then(|| {
        (0..1u64 << (n - 1))
            .map(|mask| {
                let s: Vec<C64> = (0..n)
                    .map(|j| cr(if j > 0 && mask >> (j - 1) & 1 == 1 { -1.0 } else { 1.0 }))
                    .collect();
                column_mass(a, &s).0
            })
            .fold(0.0, f64::max)
    });
    Ok(LinfL1Norm {
        value: value.max(sign_max.unwrap_or(0.0)),
        z,
        w,
        sign_max,
        evaluations: m.evaluations,
    })
}

/// Ratios of `‖p_V(T)‖` to `‖p_V‖_∞` for type I triples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct C2Report {
    pub pv_supnorm: f64,
    /// Triple of unit vectors in ℝ² summing to zero.
    pub value_best: f64,
    pub ratio_best: f64,
    /// The Varopoulos–Kaijser triple.
    pub value_vk: f64,
    pub ratio_vk: f64,
    /// Orthonormal vectors, where only the diagonal survives.
    pub ratio_orthonormal: f64,
}

/// Unit vectors `(cos 2πj/3, sin 2πj/3)`, which sum to zero.
pub fn centroid_triple() -> Vec<Vec<C64>> {
    (0..3)
        .map(|j| {
            let t = TAU * j as f64 / 3.0;
            vec![cr(t.cos()), cr(t.sin())]
        })
        .collect()
}

/// The Varopoulos–Kaijser vectors `x_j` (sign patterns over √3) and the
/// standard basis `y_j`.
pub fn varopoulos_kaijser_vectors() -> (Vec<Vec<C64>>, Vec<Vec<C64>>) {
    let s = 1.0 / 3f64.sqrt();
    let xs = (0..3)
        .map(|j| (0..3).map(|i| cr(if i == j { s } else { -s })).collect())
        .collect();
    let ys = (0..3)
        .map(|j| (0..3).map(|i| cr(if i == j { 1.0 } else { 0.0 })).collect())
        .collect();
    (xs, ys)
}

pub fn c2_lower_experiment() -> Result<C2Report> {
    let tol = Tolerance::default();
    let pv = varopoulos_kaijser();
    let sup = sup_norm_torus(&pv, 360, 4)?.value;
    let value_of = |xs: &[Vec<C64>], ys: &[Vec<C64>]| -> Result<f64> {
        let t = commuting_type1_tuple(xs, ys, &tol)?;
        Ok(functional_calculus(&pv, &t)?.norm())
    };
    let best = centroid_triple();
    let value_best = value_of(&best, &best)?;
    let (xs, ys) = varopoulos_kaijser_vectors();
    let value_vk = value_of(&xs, &ys)?;
    let value_on = value_of(&ys, &ys)?;
    Ok(C2Report {
        pv_supnorm: sup,
        value_best,
        ratio_best: value_best / sup,
        value_vk,
        ratio_vk: value_vk / sup,
        ratio_orthonormal: value_on / sup,
    })
}

fn normalize(v: &mut [f64]) {
    let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if r > 0.0 {
        v.iter_mut().for_each(|x| *x /= r);
    }
}

/// Minimizes `Σ_{i<j} ⟨x_i, x_j⟩` over `m` unit vectors in ℝⁿ by projected
/// gradient descent from `restarts` random starts. The objective equals
/// `(‖Σ x_i‖² − m)/2`.
pub fn min_inner_product_sum(m: usize, n: usize, restarts: usize, seed: u64) -> Result<f64> {
    if n < 2 {
        return Err(Error::PreconditionFailed("dimension must be at least 2".into()));
    }
    if m == 0 {
        return Ok(0.0);
    }
    let objective = |xs: &[Vec<f64>]| -> f64 {
        let mut s = 0.0;
        for i in 0..xs.len() {
            for j in i + 1..xs.len() {
                s += xs[i].iter().zip(&xs[j]).map(|(a, b)| a * b).sum::<f64>();
            }
        }
        s
    };
    let best = (0..restarts.max(1))
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(r as u64));
            let mut xs: Vec<Vec<f64>> = (0..m)
                .map(|_| {
                    let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                    normalize(&mut v);
                    v
                })
                .collect();
            let step = 0.5 / m as f64;
            let mut last = objective(&xs);
            for _ in 0..20_000 {
                let sum: Vec<f64> = (0..n).map(|d| xs.iter().map(|x| x[d]).sum()).collect();
                for x in xs.iter_mut() {
                    for d in 0..n {
                        x[d] -= step * (sum[d] - x[d]);
                    }
                    normalize(x);
                }
                let now = objective(&xs);
                if (last - now).abs() < 1e-15 {
                    break;
                }
                last = now;
            }
            objective(&xs)
        })
        .reduce(|| f64::INFINITY, f64::min);
    Ok(best)
}

/// Members of the sampled family of holomorphic maps `𝔻ⁿ → 𝔻`.
#[derive(Debug, Clone, PartialEq)]
pub enum SampleMap {
    /// `u Π_j φ_{a_j}(z_j)^{e_j}` with `φ_a(z) = (z − a)/(1 − āz)`.
    MobiusProduct { unit: C64, centers: Vec<C64>, powers: Vec<u32> },
    /// Convex combination of maps.
    Average { weights: Vec<f64>, maps: Vec<SampleMap> },
    /// Polynomial divided by its sup norm.
    Polynomial(MultiPoly),
}

fn mobius(a: C64, z: C64) -> C64 {
    (z - a) / (cr(1.0) - a.conj() * z)
}

impl SampleMap {
    pub fn eval(&self, z: &[C64]) -> C64 {
        match self {
            SampleMap::MobiusProduct { unit, centers, powers } => centers
                .iter()
                .zip(powers)
                .zip(z)
                .fold(*unit, |acc, ((a, &e), &zi)| acc * mobius(*a, zi).powu(e)),
            SampleMap::Average { weights, maps } => {
                weights.iter().zip(maps).map(|(w, m)| m.eval(z) * cr(*w)).sum()
            }
            SampleMap::Polynomial(p) => p.eval_unchecked(z),
        }
    }

    /// `D²f(0)`: exact for polynomial members, central differences with one
    /// Richardson step otherwise.
    pub fn hessian(&self, n: usize) -> ComplexMatrix {
        match self {
            SampleMap::Polynomial(p) => jet_at_zero(p).1,
            SampleMap::Average { weights, maps } => {
                let mut h = ComplexMatrix::zeros(n, n);
                for (w, m) in weights.iter().zip(maps) {
                    h = &h + &m.hessian(n).scale_re(*w);
                }
                h
            }
            _ => hessian_fd(|z| self.eval(z), n, 1e-4),
        }
    }
}

/// Central-difference Hessian at the origin of a holomorphic function,
/// refined by Richardson extrapolation between steps `h` and `h/2`.
pub fn hessian_fd(f: impl Fn(&[C64]) -> C64, n: usize, h: f64) -> ComplexMatrix {
    let at = |h: f64| -> ComplexMatrix {
        let point = |j: usize, sj: f64, k: usize, sk: f64| {
            let mut z = vec![C64::default(); n];
            z[j] += cr(sj * h);
            z[k] += cr(sk * h);
            f(&z)
        };
        let f0 = f(&vec![C64::default(); n]);
        ComplexMatrix::from_fn(n, n, |j, k| {
            if j == k {
                let mut zp = vec![C64::default(); n];
                let mut zm = vec![C64::default(); n];
                zp[j] = cr(h);
                zm[j] = cr(-h);
                (f(&zp) - f0 * cr(2.0) + f(&zm)) / cr(h * h)
            } else {
                (point(j, 1.0, k, 1.0) - point(j, 1.0, k, -1.0) - point(j, -1.0, k, 1.0)
                    + point(j, -1.0, k, -1.0))
                    / cr(4.0 * h * h)
            }
        })
    };
    let coarse = at(h);
    let fine = at(h / 2.0);
    &fine.scale_re(4.0 / 3.0) - &coarse.scale_re(1.0 / 3.0)
}

/// Result of [`second_derivative_bound_probe`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct D2Probe {
    pub samples: usize,
    pub max_norm: f64,
    pub bound: f64,
    pub fraction_of_bound: f64,
    /// Index of the sample attaining the maximum; sample 0 is `p_V/5`.
    pub argmax: usize,
}

fn random_disc(rng: &mut ChaCha8Rng, radius: f64) -> C64 {
    C64::from_polar(radius * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..TAU))
}

fn random_mobius_product(rng: &mut ChaCha8Rng, n: usize) -> SampleMap {
    SampleMap::MobiusProduct {
        unit: C64::from_polar(1.0, rng.gen_range(0.0..TAU)),
        centers: (0..n).map(|_| random_disc(rng, 0.9)).collect(),
        powers: (0..n).map(|_| rng.gen_range(0..3)).collect(),
    }
}

fn random_quadratic(rng: &mut ChaCha8Rng, n: usize) -> Result<SampleMap> {
    let signs = rng.gen_bool(0.5);
    let mut terms = Vec::new();
    for j in 0..n {
        for k in j..n {
            let mut e = vec![0; n];
            e[j] += 1;
            e[k] += 1;
            let a = if signs {
                cr(if rng.gen_bool(0.5) { 1.0 } else { -1.0 })
            } else {
                random_disc(rng, 1.0)
            };
            terms.push((e, a));
        }
    }
    let p = MultiPoly::from_terms(n, terms)?;
    let sup = sup_norm_torus(&p, 48, 4)?.value;
    Ok(SampleMap::Polynomial(p.scale(cr(1.0 / sup))))
}

/// Draws `samples` maps `𝔻³ → 𝔻` (sample 0 is `p_V/5`, then Möbius
/// products, averages and normalized quadratics in rotation) and returns the
/// largest `‖D²f(0)‖_{ℓ∞→ℓ¹}`. Errors if it exceeds `3√3/2 + tol.grid`.
pub fn second_derivative_bound_probe(samples: usize, seed: u64, tol: &Tolerance) -> Result<D2Probe> {
    let n = 3;
    let witness = SampleMap::Polynomial(varopoulos_kaijser().scale(cr(0.2)));
    let norms = (0..samples)
        .into_par_iter()
        .map(|i| -> Result<f64> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let f = match i % 3 {
                _ if i == 0 => witness.clone(),
                0 => random_quadratic(&mut rng, n)?,
                1 => random_mobius_product(&mut rng, n),
                _ => {
                    let t = rng.gen::<f64>();
                    SampleMap::Average {
                        weights: vec![t, 1.0 - t],
                        maps: vec![random_mobius_product(&mut rng, n), random_quadratic(&mut rng, n)?],
                    }
                }
            };
            Ok(norm_linf_to_l1(&f.hessian(n), 48)?.value)
        })
        .collect::<Result<Vec<f64>>>()?;
    let (argmax, max_norm) = norms
        .iter()
        .copied()
        .enumerate()
        .fold((0, 0.0), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
    let bound = second_derivative_bound();
    if max_norm > bound + tol.grid {
        return Err(Error::CrossCheck(format!(
            "sample {argmax} has ‖D²f(0)‖ = {max_norm} above 3√3/2"
        )));
    }
    Ok(D2Probe {
        samples,
        max_norm,
        bound,
        fraction_of_bound: max_norm / bound,
        argmax,
    })
}

/// User-supplied stand-in for the complex Grothendieck constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KgBracket {
    pub value: f64,
    /// Whether `value` is asserted to be an upper bound for K_G.
    pub is_upper: bool,
}

impl Default for KgBracket {
    fn default() -> Self {
        Self {
            value: 1.4049,
            is_upper: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VnBound {
    pub lhs: f64,
    pub rhs: f64,
    pub sup_norm: f64,
    /// `Some` only when the bracket is declared an upper bound.
    pub holds: Option<bool>,
}

/// `‖p(T)‖` against `(3√3/4)·K·‖p‖_∞` for a degree-two polynomial.
pub fn degree2_vn_bound_check(
    p: &MultiPoly,
    t: &CommutingTuple,
    kg: KgBracket,
    grid: usize,
    tol: &Tolerance,
) -> Result<VnBound> {
    if p.degree() > 2 {
        return Err(Error::DegreeTooHigh(p.degree()));
    }
    let worst = t.max_norm();
    if worst > 1.0 + tol.spectral {
        return Err(Error::NotContraction(worst));
    }
    let lhs = functional_calculus(p, t)?.norm();
    let sup = if p.is_zero() { 0.0 } else { sup_norm_torus(p, grid, 4)?.value };
    let rhs = 0.75 * 3f64.sqrt() * kg.value * sup;
    Ok(VnBound {
        lhs,
        rhs,
        sup_norm: sup,
        holds: kg.is_upper.then_some(lhs <= rhs + tol.grid),
    })
}

/// `(‖p(T)‖, ‖p‖_∞)` for a commuting tuple.
pub fn von_neumann_gap(p: &MultiPoly, t: &CommutingTuple, grid: usize) -> Result<(f64, f64)> {
    let lhs = functional_calculus(p, t)?.norm();
    let sup = if p.is_zero() { 0.0 } else { sup_norm_torus(p, grid, 4)?.value };
    Ok((lhs, sup))
}

/// Phase point `(1, e^{2πi/3}, e^{4πi/3})` and the value of the
/// sesquilinear form `Σ a_jk z_j z̄_k` of `A_V` there, which is 6.
pub fn cube_root_certificate() -> (Vec<C64>, f64) {
    let z: Vec<C64> = (0..3).map(|j| C64::from_polar(1.0, 2.0 * PI * j as f64 / 3.0)).collect();
    let w: Vec<C64> = z.iter().map(|x| x.conj()).collect();
    let v = bilinear_form(&varopoulos_kaijser_matrix(), &z, &w).norm();
    (z, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::c;

    #[test]
    fn linf_l1_examples() {
        let one = norm_linf_to_l1(&ComplexMatrix::identity(1), 16).unwrap();
        assert!((one.value - 1.0).abs() < 1e-12);
        let ones = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]).unwrap();
        assert!((norm_linf_to_l1(&ones, 16).unwrap().value - 4.0).abs() < 1e-12);
        let av = norm_linf_to_l1(&varopoulos_kaijser_matrix(), 360).unwrap();
        assert!((av.value - 6.0).abs() < 1e-9);
        assert_eq!(av.sign_max, Some(5.0));
        let attained = bilinear_form(&varopoulos_kaijser_matrix(), &av.z, &av.w).norm();
        assert!((attained - av.value).abs() < 1e-12);
        assert!((cube_root_certificate().1 - 6.0).abs() < 1e-12);
        assert!(matches!(
            norm_linf_to_l1(&ComplexMatrix::identity(7), 16),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn c2_ratios() {
        let r = c2_lower_experiment().unwrap();
        assert!((r.ratio_best - 1.2).abs() < 1e-9);
        assert!((r.ratio_vk - 27f64.sqrt() / 5.0).abs() < 1e-9);
        assert!((r.ratio_orthonormal - 0.6).abs() < 1e-9);
    }

    #[test]
    fn inner_product_minima() {
        assert!((min_inner_product_sum(3, 2, 10, 1).unwrap() + 1.5).abs() < 1e-6);
        assert!((min_inner_product_sum(2, 2, 4, 1).unwrap() + 1.0).abs() < 1e-6);
        assert!((min_inner_product_sum(4, 3, 10, 1).unwrap() + 2.0).abs() < 1e-6);
    }

    #[test]
    fn hessians() {
        let sq = SampleMap::Polynomial(MultiPoly::var(3, 0).pow(2));
        assert!((norm_linf_to_l1(&sq.hessian(3), 16).unwrap().value - 2.0).abs() < 1e-12);
        let pv = SampleMap::Polynomial(varopoulos_kaijser().scale(cr(0.2)));
        assert!((norm_linf_to_l1(&pv.hessian(3), 48).unwrap().value - 2.4).abs() < 1e-9);
        let m = SampleMap::MobiusProduct {
            unit: cr(1.0),
            centers: vec![c(0.3, 0.1), cr(-0.2), cr(0.0)],
            powers: vec![1, 1, 2],
        };
        let analytic = m.hessian(3);
        let coarse = hessian_fd(|z| m.eval(z), 3, 1e-3);
        assert!((&analytic - &coarse).max_abs() < 1e-6);
        let konst = SampleMap::MobiusProduct {
            unit: cr(0.5),
            centers: vec![cr(0.0); 3],
            powers: vec![0; 3],
        };
        assert!(konst.hessian(3).max_abs() < 1e-6);
    }

    #[test]
    fn probe_stays_below_bound() {
        let p = second_derivative_bound_probe(60, 7, &Tolerance::default()).unwrap();
        assert!(p.max_norm <= second_derivative_bound() + 1e-3);
        assert!(p.max_norm >= 2.4 - 1e-9);
    }

    #[test]
    fn kg_scaffolding() {
        let tol = Tolerance::default();
        let (xs, ys) = varopoulos_kaijser_vectors();
        let t = commuting_type1_tuple(&xs, &ys, &tol).unwrap();
        let r = degree2_vn_bound_check(
            &varopoulos_kaijser(),
            &t,
            KgBracket {
                value: 1.6,
                is_upper: true,
            },
            120,
            &tol,
        )
        .unwrap();
        assert!((r.lhs - 27f64.sqrt()).abs() < 1e-12);
        assert!((r.rhs - 0.75 * 3f64.sqrt() * 1.6 * 5.0).abs() < 1e-6);
        assert_eq!(r.holds, Some(true));
        let z = degree2_vn_bound_check(&MultiPoly::zero(3), &t, KgBracket::default(), 120, &tol).unwrap();
        assert_eq!((z.lhs, z.rhs, z.holds), (0.0, 0.0, None));
    }
}
