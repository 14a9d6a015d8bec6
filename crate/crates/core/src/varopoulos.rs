//! Varopoulos operators and the homomorphisms they induce.
//!
//! A type I operator acts on `ℂ ⊕ H ⊕ ℂ` as
//!
//! ```text
//! ( 0  x♯  0 )
//! ( 0  0   y )
//! ( 0  0   0 )
//! ```
//!
//! where `x♯(y) = Σ x_j y_j` is the bilinear (not sesquilinear) pairing.
//! A type II operator of order `k` has a fixed block `X` on every slot of
//! the first block superdiagonal of a `(k+1) × (k+1)` block matrix.

use crate::bounds::norm_linf_to_l1;
use crate::error::{Error, Result};
use crate::matrix::{cr, ComplexMatrix, C64};
use crate::poly::{functional_calculus, jet_at_zero, CommutingTuple, MultiPoly};
use crate::tolerance::Tolerance;

/// `x♯(y) = Σ x_j y_j`.
pub fn pairing(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Euclidean inner product `⟨x, y⟩ = Σ x_j ȳ_j`.
pub fn inner(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

pub fn vec_norm(x: &[C64]) -> f64 {
    x.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

fn check_pair(x: &[C64], y: &[C64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::ArityMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    Ok(())
}

/// `T_{x,y}` in the basis `(e, H, f)`: `x` fills the first row and `y` the
/// last column.
pub fn build_type1(x: &[C64], y: &[C64]) -> Result<ComplexMatrix> {
    check_pair(x, y)?;
    let n = x.len();
    Ok(ComplexMatrix::from_fn(n + 2, n + 2, |i, j| {
        if i == 0 && (1..=n).contains(&j) {
            x[j - 1]
        } else if j == n + 1 && (1..=n).contains(&i) {
            y[i - 1]
        } else {
            C64::default()
        }
    }))
}

/// `T_{x,y}` with the two scalar basis vectors exchanged, so that `y` fills
/// the first column and `x` the last row. This is the layout in which the
/// classical Varopoulos–Kaijser triple is usually written down.
pub fn build_type1_swapped(x: &[C64], y: &[C64]) -> Result<ComplexMatrix> {
    let t = build_type1(x, y)?;
    let n = t.rows();
    let flip = |i: usize| {
        if i == 0 {
            n - 1
        } else if i == n - 1 {
            0
        } else {
            i
        }
    };
    Ok(ComplexMatrix::from_fn(n, n, |i, j| t.get(flip(i), flip(j))))
}

/// Block superdiagonal matrix with `k` copies of `X`.
pub fn build_type2(x: &ComplexMatrix, k: usize) -> Result<ComplexMatrix> {
    if !x.is_square() {
        return Err(Error::InvalidMatrix(format!("X is {:?}, must be square", x.shape())));
    }
    if k == 0 {
        return Err(Error::PreconditionFailed("order must be at least 1".into()));
    }
    let b = x.rows();
    let mut out = ComplexMatrix::zeros(b * (k + 1), b * (k + 1));
    for s in 0..k {
        out = out.with_block(s * b, (s + 1) * b, x);
    }
    Ok(out)
}

/// Matrix of pairings `[x_j♯, y_k]`.
pub fn pairing_matrix(xs: &[Vec<C64>], ys: &[Vec<C64>]) -> Result<ComplexMatrix> {
    if xs.len() != ys.len() {
        return Err(Error::ArityMismatch {
            expected: xs.len(),
            got: ys.len(),
        });
    }
    for (x, y) in xs.iter().zip(ys) {
        check_pair(x, y)?;
    }
    let n = xs.len();
    Ok(ComplexMatrix::from_fn(n, n, |j, k| pairing(&xs[j], &ys[k])))
}

/// Type I tuple `(T_{x_1,y_1}, …)`; commutes exactly when the pairing
/// matrix is symmetric.
pub fn commuting_type1_tuple(xs: &[Vec<C64>], ys: &[Vec<C64>], tol: &Tolerance) -> Result<CommutingTuple> {
    let a = pairing_matrix(xs, ys)?;
    let asym = (&a - &a.transpose()).max_abs();
    if asym > tol.algebraic * (1.0 + a.max_abs()) {
        return Err(Error::NonCommuting(asym));
    }
    let ms = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| build_type1(x, y))
        .collect::<Result<Vec<_>>>()?;
    CommutingTuple::new(ms, tol)
}

/// Type II tuple of common order `k`; the blocks must commute.
pub fn commuting_type2_tuple(xs: &[ComplexMatrix], k: usize, tol: &Tolerance) -> Result<CommutingTuple> {
    let ms = xs.iter().map(|x| build_type2(x, k)).collect::<Result<Vec<_>>>()?;
    CommutingTuple::new(ms, tol)
}

/// Tuple of `[[ω_j, α_j, 0], [0, ω_j, β_j], [0, 0, ω_j]]`; commutes when
/// `α_i β_j = α_j β_i`.
pub fn jordan3_tuple(omega: &[C64], alpha: &[C64], beta: &[C64], tol: &Tolerance) -> Result<CommutingTuple> {
    if omega.len() != alpha.len() || alpha.len() != beta.len() {
        return Err(Error::ArityMismatch {
            expected: omega.len(),
            got: alpha.len().min(beta.len()),
        });
    }
    let ms = (0..omega.len())
        .map(|j| crate::parrott::jordan3(omega[j], alpha[j], beta[j]))
        .collect();
    CommutingTuple::new(ms, tol)
}

/// `p(ωI + T_{x,y})` assembled from the Taylor jet of `p` at `ω`:
/// `p(ω)` on the diagonal, `Dp(ω)·x♯` and `Dp(ω)·y` next to it, and
/// `½ D²p(ω)·A_{x,y}` in the corner. The result is checked against direct
/// evaluation of `p` on the shifted tuple.
pub fn rho_eval(
    p: &MultiPoly,
    omega: &[C64],
    xs: &[Vec<C64>],
    ys: &[Vec<C64>],
    tol: &Tolerance,
) -> Result<ComplexMatrix> {
    let m = p.nvars();
    for len in [omega.len(), xs.len(), ys.len()] {
        if len != m {
            return Err(Error::ArityMismatch { expected: m, got: len });
        }
    }
    let tuple = commuting_type1_tuple(xs, ys, tol)?;
    let q = p.recenter(omega)?;
    let value = q.coeff(&vec![0; m]);
    let (grad, hess) = jet_at_zero(&q);
    let h = xs.first().map_or(0, |x| x.len());
    let row: Vec<C64> = (0..h).map(|i| (0..m).map(|j| grad[j] * xs[j][i]).sum()).collect();
    let col: Vec<C64> = (0..h).map(|i| (0..m).map(|j| grad[j] * ys[j][i]).sum()).collect();
    let a = pairing_matrix(xs, ys)?;
    let corner: C64 = (0..m)
        .flat_map(|j| (0..m).map(move |k| (j, k)))
        .map(|(j, k)| hess.get(j, k) * a.get(j, k))
        .sum::<C64>()
        * cr(0.5);
    let mut out = build_type1(&row, &col)?;
    out = out.with_block(0, h + 1, &ComplexMatrix::scalar(corner));
    out = &out + &ComplexMatrix::identity(h + 2).scale(value);

    let shifted = CommutingTuple::new(
        tuple
            .matrices()
            .iter()
            .zip(omega)
            .map(|(t, w)| t + &ComplexMatrix::identity(h + 2).scale(*w))
            .collect(),
        tol,
    )?;
    let direct = functional_calculus(p, &shifted)?;
    let gap = (&direct - &out).max_abs();
    if gap > tol.algebraic * (1.0 + direct.max_abs()) {
        return Err(Error::CrossCheck(format!(
            "recentred jet and direct evaluation differ by {gap:.3e}"
        )));
    }
    Ok(out)
}

/// `ρ(f)` for `f(ω) = 0` written with its vector data: first row `Df·x♯`,
/// last column `Df·y`, corner `½D²f·A`.
pub fn rho_block(df_x: &[C64], df_y: &[C64], corner: C64) -> Result<ComplexMatrix> {
    let t = build_type1(df_x, df_y)?;
    Ok(t.with_block(0, df_x.len() + 1, &ComplexMatrix::scalar(corner)))
}

/// Closed-form contractivity of [`rho_block`]: both vectors in the unit
/// ball and `|corner|² ≤ (1 − ‖Df·x‖²)(1 − ‖Df·y‖²)`.
pub fn rho_contractive_iff(df_x: &[C64], df_y: &[C64], corner: C64) -> bool {
    let eps = 1e-12;
    let a = vec_norm(df_x).powi(2);
    let b = vec_norm(df_y).powi(2);
    a <= 1.0 + eps && b <= 1.0 + eps && corner.norm_sqr() <= (1.0 - a) * (1.0 - b) + eps
}

/// Output of [`grothendieck_construction`].
#[derive(Debug, Clone, PartialEq)]
pub struct GrothendieckWitness {
    pub tuple: CommutingTuple,
    pub poly: MultiPoly,
    /// `‖p_Ã(T)‖`.
    pub value: f64,
}

/// For `‖A‖_{ℓ∞→ℓ¹} ≤ 1` and unit vectors, builds the symmetric
/// `Ã = ½(0, A; Aᵗ, 0)`, the type I tuple of `(x_1, …, x_n, ȳ_1, …, ȳ_n)`
/// and the quadratic form `p_Ã`, and returns `‖p_Ã(T)‖`, which equals
/// `|Σ a_jk ⟨x_j, y_k⟩|`.
pub fn grothendieck_construction(
    a: &ComplexMatrix,
    xs: &[Vec<C64>],
    ys: &[Vec<C64>],
    tol: &Tolerance,
) -> Result<GrothendieckWitness> {
    let n = a.rows();
    if !a.is_square() || xs.len() != n || ys.len() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            got: xs.len().min(ys.len()),
        });
    }
    for v in xs.iter().chain(ys) {
        if (vec_norm(v) - 1.0).abs() > tol.spectral {
            return Err(Error::PreconditionFailed(format!(
                "vector of norm {} is not a unit vector",
                vec_norm(v)
            )));
        }
    }
    let bound = norm_linf_to_l1(a, 64)?;
    if bound.value > 1.0 + tol.grid {
        return Err(Error::PreconditionFailed(format!(
            "ℓ∞→ℓ¹ norm {} exceeds 1",
            bound.value
        )));
    }
    let mut terms = Vec::new();
    for j in 0..n {
        for k in 0..n {
            // ã_{j,n+k} = ã_{n+k,j} = a_jk/2 and both orders give z_j z_{n+k}.
            let mut e = vec![0; 2 * n];
            e[j] += 1;
            e[n + k] += 1;
            terms.push((e, a.get(j, k)));
        }
    }
    let poly = MultiPoly::from_terms(2 * n, terms)?;
    let vs: Vec<Vec<C64>> = xs
        .iter()
        .cloned()
        .chain(ys.iter().map(|y| y.iter().map(|c| c.conj()).collect()))
        .collect();
    let tuple = commuting_type1_tuple(&vs, &vs, tol)?;
    let value = functional_calculus(&poly, &tuple)?.norm();
    let expected = (0..n)
        .flat_map(|j| (0..n).map(move |k| (j, k)))
        .map(|(j, k)| a.get(j, k) * inner(&xs[j], &ys[k]))
        .sum::<C64>()
        .norm();
    if (value - expected).abs() > tol.algebraic * (1.0 + expected) {
        return Err(Error::CrossCheck(format!(
            "‖p(T)‖ = {value} but Σ a⟨x,y⟩ has modulus {expected}"
        )));
    }
    Ok(GrothendieckWitness { tuple, poly, value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::c;
    use crate::poly::varopoulos_kaijser;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    pub(crate) fn vk_data() -> (Vec<Vec<C64>>, Vec<Vec<C64>>) {
        let s = 1.0 / 3f64.sqrt();
        let xs = vec![
            vec![cr(s), cr(-s), cr(-s)],
            vec![cr(-s), cr(s), cr(-s)],
            vec![cr(-s), cr(-s), cr(s)],
        ];
        let ys = (0..3)
            .map(|k| (0..3).map(|i| cr(if i == k { 1.0 } else { 0.0 })).collect())
            .collect();
        (xs, ys)
    }

    #[test]
    fn type1_norms() {
        let e1 = vec![cr(1.0), cr(0.0)];
        assert!((build_type1(&e1, &e1).unwrap().norm() - 1.0).abs() < 1e-12);
        let z = vec![cr(0.0); 3];
        assert_eq!(build_type1(&z, &z).unwrap().max_abs(), 0.0);
        let x = vec![c(0.3, 0.1), cr(-0.2)];
        let y = vec![cr(0.9), c(0.0, 0.4)];
        let want = vec_norm(&x).max(vec_norm(&y));
        assert!((build_type1(&x, &y).unwrap().norm() - want).abs() < 1e-10);
        assert!(matches!(build_type1(&x, &z), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn swapped_layout_matches_classical_triple() {
        let s = 1.0 / 3f64.sqrt();
        let a1 = ComplexMatrix::from_real_rows(&[
            &[0.0, 0.0, 0.0, 0.0, 0.0],
            &[1.0, 0.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0, 0.0],
            &[0.0, s, -s, -s, 0.0],
        ])
        .unwrap();
        let (xs, ys) = vk_data();
        assert_eq!(build_type1_swapped(&xs[0], &ys[0]).unwrap(), a1);
    }

    #[test]
    fn type2_shapes() {
        let j = build_type2(&ComplexMatrix::scalar(cr(1.0)), 2).unwrap();
        assert_eq!(j, crate::parrott::jordan3(cr(0.0), cr(1.0), cr(1.0)));
        assert!((j.norm() - 1.0).abs() < 1e-12);
        let x = ComplexMatrix::from_real_rows(&[&[0.1, 0.5], &[-0.3, 0.2]]).unwrap();
        let t = build_type2(&x, 3).unwrap();
        let t2 = t.pow(2);
        assert_eq!(t2.submatrix(0, 4, 2, 2), x.pow(2));
        assert!(t2.submatrix(0, 2, 2, 2).max_abs() == 0.0);
        assert_eq!(t.pow(4).max_abs(), 0.0);
        assert_eq!(build_type2(&ComplexMatrix::zeros(2, 2), 1).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn vk_triple_value() {
        let (xs, ys) = vk_data();
        let t = commuting_type1_tuple(&xs, &ys, &tol()).unwrap();
        let v = functional_calculus(&varopoulos_kaijser(), &t).unwrap().norm();
        assert!((v - 27f64.sqrt()).abs() < 1e-12);
        let r = rho_eval(&varopoulos_kaijser(), &[cr(0.0); 3], &xs, &ys, &tol()).unwrap();
        assert!((r.get(0, 4).norm() - 27f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn asymmetric_pairing_is_rejected() {
        let xs = vec![vec![cr(1.0), cr(0.0)], vec![cr(0.0), cr(1.0)]];
        let ys = vec![vec![cr(0.0), cr(1.0)], vec![cr(0.0), cr(0.0)]];
        assert!(matches!(
            commuting_type1_tuple(&xs, &ys, &tol()),
            Err(Error::NonCommuting(_))
        ));
        let t1 = build_type1(&xs[0], &ys[0]).unwrap();
        let t2 = build_type1(&xs[1], &ys[1]).unwrap();
        assert!(t1.commutator_norm(&t2) > 0.5);
    }

    #[test]
    fn rho_eval_off_origin() {
        let p = MultiPoly::from_terms(
            2,
            [
                (vec![1, 0], c(0.2, 0.1)),
                (vec![2, 1], cr(-0.5)),
                (vec![0, 3], c(0.0, 0.3)),
                (vec![0, 0], cr(0.1)),
            ],
        )
        .unwrap();
        let xs = vec![vec![c(0.3, 0.1), cr(0.2)], vec![cr(-0.4), c(0.1, 0.1)]];
        let ys = xs.clone();
        let r = rho_eval(&p, &[c(0.2, -0.1), cr(0.5)], &xs, &ys, &tol()).unwrap();
        assert_eq!(r.shape(), (4, 4));
    }

    #[test]
    fn rho_closed_form_examples() {
        assert!(rho_contractive_iff(&[cr(1.0)], &[cr(0.0), cr(1.0)], cr(0.0)));
        assert!(rho_contractive_iff(&[cr(0.0)], &[cr(0.0)], cr(1.0)));
        assert!(!rho_contractive_iff(&[cr(0.0)], &[cr(0.0)], cr(1.01)));
        let b = rho_block(&[cr(0.6)], &[cr(0.6)], cr(0.64)).unwrap();
        assert!((b.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn grothendieck_examples() {
        let one = ComplexMatrix::identity(1);
        let e = vec![vec![cr(1.0)]];
        let w = grothendieck_construction(&one, &e, &e, &tol()).unwrap();
        assert!((w.value - 1.0).abs() < 1e-12);
        let av = ComplexMatrix::from_real_rows(&[&[1.0, -1.0, -1.0], &[-1.0, 1.0, -1.0], &[-1.0, -1.0, 1.0]])
            .unwrap();
        let (xs, ys) = vk_data();
        let w = grothendieck_construction(&av.scale_re(1.0 / 6.0), &xs, &ys, &tol()).unwrap();
        assert!((w.value - 27f64.sqrt() / 6.0).abs() < 1e-12);
        assert!(matches!(
            grothendieck_construction(&av, &xs, &ys, &tol()),
            Err(Error::PreconditionFailed(_))
        ));
    }
}
