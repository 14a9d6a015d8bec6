//! Matrix norms on `ℓ¹(n)`.
//!
//! The MIN norm of `Σ eᵢ ⊗ Aᵢ` is `sup_{z ∈ 𝕋ⁿ} ‖Σ zᵢAᵢ‖`. Tensor products of
//! diagonal unitaries with dense spectrum embed `ℓ¹(n)` almost isometrically,
//! while no finite family of scalars on the circle does.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{cr, kron, ComplexMatrix, C64};
use crate::poly::{MatrixPoly, SupNorm};

/// Default refinement for MIN norm searches.
pub const MIN_NORM_REFINE: usize = 3;

/// Largest number of joint diagonal entries the isometry probe enumerates.
pub const PROBE_MAX_COMBINATIONS: usize = 1 << 20;

/// `sup_{z ∈ 𝕋ⁿ} ‖Σ zᵢAᵢ‖` with its maximizer.
pub fn min_norm_witness(a_list: &[ComplexMatrix], grid: usize) -> Result<SupNorm> {
    MatrixPoly::linear(a_list)?.sup_torus(grid, MIN_NORM_REFINE)
}

pub fn min_norm(a_list: &[ComplexMatrix], grid: usize) -> Result<f64> {
    Ok(min_norm_witness(a_list, grid)?.value)
}

/// Scalar pair that no point set `{e^{iθⱼ}}` norms isometrically.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Refutation {
    pub a1: C64,
    pub a2: C64,
    pub psi: f64,
    /// `|a1| + |a2| − maxⱼ |a1 + e^{iθⱼ}a2|`.
    pub gap: f64,
}

/// Picks `a1 = 1`, `a2 = e^{iψ}` with `ψ` the midpoint of the largest gap
/// between the angles `−θⱼ` on the circle, so every `|1 + e^{i(θⱼ+ψ)}|`
/// stays below 2.
pub fn finite_embedding_refuter(thetas: &[f64]) -> Result<Refutation> {
    if thetas.is_empty() {
        return Err(Error::PreconditionFailed("empty angle list".into()));
    }
    if thetas.iter().any(|t| !t.is_finite()) {
        return Err(Error::PreconditionFailed("non-finite angle".into()));
    }
    // |1 + e^{i(θ+ψ)}a| is largest when θ + ψ ≡ 0, so ψ should stay far from
    // every −θⱼ; with the reflected set this is the largest gap of θ itself
    // followed by a sign flip of the midpoint.
    let mut s: Vec<f64> = thetas.iter().map(|t| t.rem_euclid(TAU)).collect();
    s.sort_by(f64::total_cmp);
    let mut best = (s[0] + TAU - s[s.len() - 1], s[s.len() - 1]);
    for w in s.windows(2) {
        if w[1] - w[0] > best.0 {
            best = (w[1] - w[0], w[0]);
        }
    }
    let mid = best.1 + 0.5 * best.0;
    let psi = (-mid).rem_euclid(TAU);
    let psi = if psi > PI { psi - TAU } else { psi };
    let a1 = cr(1.0);
    let a2 = C64::from_polar(1.0, psi);
    let worst = thetas
        .iter()
        .map(|t| (a1 + C64::from_polar(1.0, *t) * a2).norm())
        .fold(0.0, f64::max);
    Ok(Refutation {
        a1,
        a2,
        psi,
        gap: 2.0 - worst,
    })
}

/// `diag(1, ω, …, ω^{n−1})` with `ω = e^{2πi/n}`.
pub fn root_of_unity_diagonal(n: usize) -> ComplexMatrix {
    let d: Vec<C64> = (0..n).map(|k| C64::from_polar(1.0, TAU * k as f64 / n as f64)).collect();
    ComplexMatrix::from_diag(&d)
}

/// Largest angular gap between the unimodular diagonal entries of `t`.
pub fn spectral_gap(t: &ComplexMatrix) -> f64 {
    let mut a: Vec<f64> = (0..t.rows())
        .map(|i| t.get(i, i))
        .filter(|z| (z.norm() - 1.0).abs() < 1e-9)
        .map(|z| z.arg().rem_euclid(TAU))
        .collect();
    if a.is_empty() {
        return TAU;
    }
    a.sort_by(f64::total_cmp);
    let wrap = a[0] + TAU - a[a.len() - 1];
    a.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::max)
}

fn is_diagonal(t: &ComplexMatrix) -> bool {
    t.is_square() && (0..t.rows()).all(|i| (0..t.cols()).all(|j| i == j || t.get(i, j) == C64::default()))
}

/// `T̃ᵢ = I ⊗ … ⊗ Tᵢ ⊗ … ⊗ I` for small families.
pub fn tensor_lift(t_list: &[ComplexMatrix]) -> Result<Vec<ComplexMatrix>> {
    let dims: Vec<usize> = t_list.iter().map(|t| t.rows()).collect();
    let total: usize = dims.iter().product();
    if total > 512 {
        return Err(Error::BudgetExceeded(format!("tensor dimension {total}")));
    }
    t_list
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let mut m = ComplexMatrix::identity(1);
            for (j, d) in dims.iter().enumerate() {
                let f = if i == j { t.clone() } else { ComplexMatrix::identity(*d) };
                m = kron(&m, &f)?;
            }
            Ok(m)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsometryProbe {
    /// `max |‖Σ aᵢT̃ᵢ‖ − ‖a‖₁|` over the trials.
    pub max_deviation: f64,
    /// Largest `deviation/‖a‖₁`.
    pub max_relative: f64,
    /// `1 − cos(g/2)` for the largest spectral gap `g`: the relative loss
    /// allowed by angle quantization.
    pub quantization_bound: f64,
    pub trials: usize,
}

/// Compares `‖Σ aᵢT̃ᵢ‖` with `‖a‖₁` for random `a`. Each `Tᵢ` must be a
/// diagonal contraction whose unimodular entries leave no angular gap above
/// `max_gap`. Every fourth trial zeroes one coordinate.
pub fn tensor_embedding_isometry_probe(
    t_list: &[ComplexMatrix],
    trials: usize,
    max_gap: f64,
    seed: u64,
) -> Result<IsometryProbe> {
    if t_list.is_empty() {
        return Err(Error::PreconditionFailed("empty operator list".into()));
    }
    let mut diags = Vec::with_capacity(t_list.len());
    let mut worst_gap = 0.0f64;
    for t in t_list {
        if !is_diagonal(t) {
            return Err(Error::PreconditionFailed("probe operators must be diagonal".into()));
        }
        let d: Vec<C64> = (0..t.rows()).map(|i| t.get(i, i)).collect();
        if d.iter().any(|z| z.norm() > 1.0 + 1e-12) {
            return Err(Error::PreconditionFailed("probe operators must be contractions".into()));
        }
        let g = spectral_gap(t);
        if g > max_gap {
            return Err(Error::SpectrumTooSparse(g));
        }
        worst_gap = worst_gap.max(g);
        diags.push(d);
    }
    let combos = diags.iter().try_fold(1usize, |acc, d| acc.checked_mul(d.len()));
    if combos.is_none_or(|c| c > PROBE_MAX_COMBINATIONS) {
        return Err(Error::BudgetExceeded("too many joint diagonal entries".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = t_list.len();
    let mut max_dev = 0.0f64;
    let mut max_rel = 0.0f64;
    for trial in 0..trials {
        let mut a: Vec<C64> = (0..n)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        if n > 1 && trial % 4 == 3 {
            a[rng.gen_range(0..n)] = C64::default();
        }
        let l1: f64 = a.iter().map(|z| z.norm()).sum();
        let norm = diagonal_sum_norm(&a, &diags);
        let dev = (norm - l1).abs();
        max_dev = max_dev.max(dev);
        if l1 > 0.0 {
            max_rel = max_rel.max(dev / l1);
        }
    }
    Ok(IsometryProbe {
        max_deviation: max_dev,
        max_relative: max_rel,
        quantization_bound: 1.0 - (0.5 * worst_gap).cos(),
        trials,
    })
}

/// `‖Σ aᵢT̃ᵢ‖` for diagonal `Tᵢ`: the largest `|Σ aᵢ dᵢ(jᵢ)|` over all
/// joint indices.
fn diagonal_sum_norm(a: &[C64], diags: &[Vec<C64>]) -> f64 {
    let mut partial = vec![C64::default()];
    for (ai, d) in a.iter().zip(diags) {
        if *ai == C64::default() {
            continue;
        }
        let mut next = Vec::with_capacity(partial.len() * d.len());
        for p in &partial {
            for x in d {
                next.push(p + ai * x);
            }
        }
        partial = next;
    }
    partial.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// The two real symmetric unitaries with `I ⊗ I + U ⊗ U + V ⊗ V` of norm 3.
pub fn parrott_unitaries() -> (ComplexMatrix, ComplexMatrix) {
    let h = 0.75f64.sqrt();
    let u = ComplexMatrix::from_real_rows(&[&[0.5, h], &[h, -0.5]]).expect("2x2");
    let v = ComplexMatrix::from_real_rows(&[&[0.5, -h], &[h, 0.5]]).expect("2x2");
    (u, v)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OssDemo {
    /// `‖I ⊗ I + U ⊗ U + V ⊗ V‖`.
    pub tensor_norm: f64,
    /// `sup_{𝕋³} ‖z₁I + z₂U + z₃V‖`.
    pub min_norm: f64,
    pub min_norm_angles: Vec<f64>,
    /// `‖h(z)‖/min_norm` at the maximizer; at most 1.
    pub normalized_peak: f64,
    /// Isometry probe deviation for three root-of-unity diagonals standing
    /// in for an operator with the whole circle in its spectrum.
    pub stand_in_relative_deviation: f64,
    pub distinct: bool,
}

pub fn parrott_oss_demo() -> Result<OssDemo> {
    let (u, v) = parrott_unitaries();
    let i2 = ComplexMatrix::identity(2);
    let t = kron(&i2, &i2)?;
    let t = &(&t + &kron(&u, &u)?) + &kron(&v, &v)?;
    let tensor_norm = t.norm();
    let list = [i2, u, v];
    let w = min_norm_witness(&list, 256)?;
    let z: Vec<C64> = w.angles.iter().map(|a| C64::from_polar(1.0, *a)).collect();
    let h = MatrixPoly::linear(&list)?.eval(&z)?;
    let normalized_peak = h.norm() / w.value;
    let d = root_of_unity_diagonal(32);
    let probe = tensor_embedding_isometry_probe(&[d.clone(), d.clone(), d], 64, 0.2, 7)?;
    Ok(OssDemo {
        tensor_norm,
        min_norm: w.value,
        min_norm_angles: w.angles,
        normalized_peak,
        stand_in_relative_deviation: probe.max_relative,
        distinct: w.value < tensor_norm - 1e-3,
    })
}
