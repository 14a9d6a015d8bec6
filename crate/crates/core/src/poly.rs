//! Sparse multivariate polynomials with complex coefficients.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::{c, cr, ComplexMatrix, C64};
use crate::tolerance::Tolerance;
use crate::torus;

/// Exponent multi-index.
pub type Exponent = Vec<u32>;

/// Sparse polynomial in `nvars` commuting variables.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Exponent, C64>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, a: C64) -> Self {
        Self::monomial(vec![0; nvars], a)
    }

    /// The coordinate function `z_{i+1}`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, cr(1.0))
    }

    pub fn monomial(exp: Exponent, a: C64) -> Self {
        let mut p = Self::zero(exp.len());
        p.add_term(exp, a);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponent, C64)>) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (e, a) in terms {
            if e.len() != nvars {
                return Err(Error::ArityMismatch {
                    expected: nvars,
                    got: e.len(),
                });
            }
            if !a.re.is_finite() || !a.im.is_finite() {
                return Err(Error::Parse("non-finite coefficient".into()));
            }
            p.add_term(e, a);
        }
        Ok(p)
    }

    /// One-variable polynomial from dense coefficients `a_0, a_1, ...`.
    pub fn univariate(coeffs: &[C64]) -> Self {
        let mut p = Self::zero(1);
        for (k, &a) in coeffs.iter().enumerate() {
            p.add_term(vec![k as u32], a);
        }
        p
    }

    fn add_term(&mut self, exp: Exponent, a: C64) {
        let entry = self.terms.entry(exp.clone()).or_default();
        *entry += a;
        if *entry == C64::default() {
            self.terms.remove(&exp);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &C64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &[u32]) -> C64 {
        self.terms.get(exp).copied().unwrap_or_default()
    }

    pub fn degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    /// Sum of absolute values of the coefficients, an upper bound for the
    /// supremum on the closed polydisc.
    pub fn coeff_l1(&self) -> f64 {
        self.terms.values().map(|a| a.norm()).sum()
    }

    /// Dense coefficients of a one-variable polynomial.
    pub fn univariate_coeffs(&self) -> Vec<C64> {
        let mut v = vec![C64::default(); self.degree() + 1];
        for (e, a) in &self.terms {
            v[e[0] as usize] = *a;
        }
        v
    }

    pub fn homogeneous_part(&self, k: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e.iter().sum::<u32>() as usize == k)
            .map(|(e, a)| (e.clone(), *a));
        Self::from_terms(self.nvars, terms).expect("same arity")
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, a) in &self.terms {
            p.add_term(e.clone(), a * s);
        }
        p
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let mut p = self.clone();
        for (e, a) in &other.terms {
            p.add_term(e.clone(), *a);
        }
        Ok(p)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(cr(-1.0)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let mut p = Self::zero(self.nvars);
        for (e1, a1) in &self.terms {
            for (e2, a2) in &other.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
                p.add_term(e, a1 * a2);
            }
        }
        Ok(p)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.nvars, cr(1.0));
        for _ in 0..k {
            acc = acc.mul(self).expect("same arity");
        }
        acc
    }

    fn check_arity(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                got: other.nvars,
            });
        }
        Ok(())
    }

    /// Partial derivative in variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, a) in &self.terms {
            if e[i] > 0 {
                let mut d = e.clone();
                d[i] -= 1;
                p.add_term(d, a * cr(e[i] as f64));
            }
        }
        p
    }

    /// The polynomial `z ↦ p(ω + z)`.
    pub fn recenter(&self, omega: &[C64]) -> Result<Self> {
        self.check_len(omega.len())?;
        let mut p = Self::zero(self.nvars);
        for (e, a) in &self.terms {
            let mut factor = Self::constant(self.nvars, *a);
            for (i, &k) in e.iter().enumerate() {
                let lin = Self::constant(self.nvars, omega[i])
                    .add(&Self::var(self.nvars, i))
                    .expect("same arity");
                factor = factor.mul(&lin.pow(k)).expect("same arity");
            }
            p = p.add(&factor).expect("same arity");
        }
        Ok(p)
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if n != self.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                got: n,
            });
        }
        Ok(())
    }

    pub fn evaluate(&self, z: &[C64]) -> Result<C64> {
        self.check_len(z.len())?;
        Ok(self.eval_unchecked(z))
    }

    pub(crate) fn eval_unchecked(&self, z: &[C64]) -> C64 {
        self.terms
            .iter()
            .map(|(e, a)| {
                e.iter()
                    .zip(z)
                    .fold(*a, |acc, (&k, &zi)| acc * zi.powu(k))
            })
            .sum()
    }

    /// Value at `(e^{iθ_1}, …, e^{iθ_n})`.
    pub fn eval_torus(&self, angles: &[f64]) -> C64 {
        self.terms
            .iter()
            .map(|(e, a)| {
                let phase: f64 = e.iter().zip(angles).map(|(&k, &t)| k as f64 * t).sum();
                a * C64::from_polar(1.0, phase)
            })
            .sum()
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, a) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if a.im == 0.0 {
                write!(f, "{}", a.re)?;
            } else {
                write!(f, "({}{:+}i)", a.re, a.im)?;
            }
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, " z{}", i + 1)?,
                    _ => write!(f, " z{}^{}", i + 1, k)?,
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    nvars: usize,
    terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: Vec<u32>,
    re: f64,
    #[serde(default)]
    im: f64,
}

impl Serialize for MultiPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, a)| TermJson {
                    exp: e.clone(),
                    re: a.re,
                    im: a.im,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PolyJson::deserialize(d)?;
        MultiPoly::from_terms(j.nvars, j.terms.into_iter().map(|t| (t.exp, c(t.re, t.im))))
            .map_err(serde::de::Error::custom)
    }
}

/// Result of [`sup_norm_torus`]: a lower bound attained at `angles`, with
/// the coefficient ℓ¹ norm as an upper bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupNorm {
    pub value: f64,
    pub angles: Vec<f64>,
    pub upper: f64,
}

/// Rejects searches that would not finish in reasonable time.
pub(crate) fn check_budget(nvars: usize, grid: usize, free: usize) -> Result<()> {
    if grid < 8 {
        return Err(Error::PreconditionFailed(format!("grid {grid} is below 8")));
    }
    if nvars > 4 && grid > 256 {
        return Err(Error::BudgetExceeded(format!("{nvars} variables at grid {grid}")));
    }
    let points = (grid as f64).powi(free as i32);
    if points > 5e8 {
        return Err(Error::BudgetExceeded(format!("{points:.3e} grid points")));
    }
    Ok(())
}

/// Lower bound for `sup |p|` over the torus from a uniform grid, polished by
/// local coordinate search.
pub fn sup_norm_torus(p: &MultiPoly, grid: usize, refine: usize) -> Result<SupNorm> {
    let n = p.nvars();
    let pin = n > 0 && p.is_homogeneous();
    check_budget(n, grid, if pin { n - 1 } else { n })?;
    let terms: Vec<(Vec<f64>, C64)> = p
        .terms()
        .map(|(e, a)| (e.iter().map(|&k| k as f64).collect(), *a))
        .collect();
    let f = |t: &[f64]| -> f64 {
        terms
            .iter()
            .map(|(e, a)| {
                let phase: f64 = e.iter().zip(t).map(|(k, x)| k * x).sum();
                a * C64::from_polar(1.0, phase)
            })
            .sum::<C64>()
            .norm()
    };
    let m = torus::maximize(n, grid, refine, pin, f);
    Ok(SupNorm {
        value: m.value.max(0.0),
        angles: m.angles,
        upper: p.coeff_l1(),
    })
}

/// First and second derivatives at the origin.
pub fn jet_at_zero(p: &MultiPoly) -> (Vec<C64>, ComplexMatrix) {
    let n = p.nvars();
    let mut grad = vec![C64::default(); n];
    let mut hess = ComplexMatrix::zeros(n.max(1), n.max(1));
    for (e, a) in p.terms() {
        let deg: u32 = e.iter().sum();
        let nz: Vec<usize> = (0..n).filter(|&i| e[i] > 0).collect();
        match (deg, nz.as_slice()) {
            (1, [i]) => grad[*i] = *a,
            (2, [i]) => {
                hess = hess.with_block(*i, *i, &ComplexMatrix::scalar(a * cr(2.0)));
            }
            (2, [i, j]) => {
                let s = ComplexMatrix::scalar(*a);
                hess = hess.with_block(*i, *j, &s).with_block(*j, *i, &s);
            }
            _ => {}
        }
    }
    (grad, hess)
}

/// Ordered family of pairwise commuting square matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutingTuple {
    dim: usize,
    matrices: Vec<ComplexMatrix>,
    residual: f64,
}

impl CommutingTuple {
    pub fn new(matrices: Vec<ComplexMatrix>, tol: &Tolerance) -> Result<Self> {
        let dim = matrices.first().map_or(0, |m| m.rows());
        if dim == 0 {
            return Err(Error::InvalidMatrix("empty tuple".into()));
        }
        for m in &matrices {
            if m.shape() != (dim, dim) {
                return Err(Error::InvalidMatrix(format!(
                    "tuple member has shape {:?}, expected {dim}x{dim}",
                    m.shape()
                )));
            }
        }
        let norms: Vec<f64> = matrices.iter().map(|m| m.norm()).collect();
        let mut residual = 0.0f64;
        for i in 0..matrices.len() {
            for j in (i + 1)..matrices.len() {
                let r = matrices[i].commutator_norm(&matrices[j]);
                residual = residual.max(r);
                if r > tol.algebraic * (1.0 + norms[i] * norms[j]) {
                    return Err(Error::NonCommuting(r));
                }
            }
        }
        Ok(Self {
            dim,
            matrices,
            residual,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn matrices(&self) -> &[ComplexMatrix] {
        &self.matrices
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// `max_i ‖T_i‖`.
    pub fn max_norm(&self) -> f64 {
        self.matrices.iter().map(|m| m.norm()).fold(0.0, f64::max)
    }
}

/// `p(T_1, …, T_n)` for a commuting tuple.
pub fn functional_calculus(p: &MultiPoly, t: &CommutingTuple) -> Result<ComplexMatrix> {
    if p.nvars() != t.len() {
        return Err(Error::ArityMismatch {
            expected: p.nvars(),
            got: t.len(),
        });
    }
    let n = t.dim();
    let mut powers: Vec<Vec<ComplexMatrix>> = t
        .matrices()
        .iter()
        .map(|_| vec![ComplexMatrix::identity(n)])
        .collect();
    let mut out = ComplexMatrix::zeros(n, n);
    for (e, a) in p.terms() {
        let mut term = ComplexMatrix::identity(n).scale(*a);
        for (i, &k) in e.iter().enumerate() {
            while powers[i].len() <= k as usize {
                let next = &powers[i][powers[i].len() - 1] * &t.matrices()[i];
                powers[i].push(next);
            }
            if k > 0 {
                term = &term * &powers[i][k as usize];
            }
        }
        out = &out + &term;
    }
    Ok(out)
}

/// Splits a two-variable polynomial of degree at most two without constant
/// term into its linear and quadratic slices:
/// `p1(λ) = a10 + a01 λ` and `p2(λ) = a20 + a11 λ + a02 λ²`.
pub fn slice_polynomials(p: &MultiPoly) -> Result<(MultiPoly, MultiPoly)> {
    if p.nvars() != 2 {
        return Err(Error::ArityMismatch {
            expected: 2,
            got: p.nvars(),
        });
    }
    if p.degree() > 2 {
        return Err(Error::DegreeTooHigh(p.degree()));
    }
    if p.coeff(&[0, 0]) != C64::default() {
        return Err(Error::NonzeroConstant);
    }
    let p1 = MultiPoly::univariate(&[p.coeff(&[1, 0]), p.coeff(&[0, 1])]);
    let p2 = MultiPoly::univariate(&[p.coeff(&[2, 0]), p.coeff(&[1, 1]), p.coeff(&[0, 2])]);
    Ok((p1, p2))
}

/// Varopoulos–Kaijser polynomial `Σ z_j² − 2 Σ_{j<k} z_j z_k` in three variables.
pub fn varopoulos_kaijser() -> MultiPoly {
    let t = |e: [u32; 3], a: f64| (e.to_vec(), cr(a));
    MultiPoly::from_terms(
        3,
        [
            t([2, 0, 0], 1.0),
            t([0, 2, 0], 1.0),
            t([0, 0, 2], 1.0),
            t([1, 1, 0], -2.0),
            t([0, 1, 1], -2.0),
            t([1, 0, 1], -2.0),
        ],
    )
    .expect("fixed arity")
}

/// Polynomial with square matrix coefficients, `P(z) = Σ A_α z^α`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixPoly {
    nvars: usize,
    dim: usize,
    terms: Vec<(Exponent, ComplexMatrix)>,
}

impl MatrixPoly {
    pub fn new(nvars: usize, terms: Vec<(Exponent, ComplexMatrix)>) -> Result<Self> {
        let dim = terms.first().map_or(1, |(_, a)| a.rows());
        for (e, a) in &terms {
            if e.len() != nvars {
                return Err(Error::ArityMismatch {
                    expected: nvars,
                    got: e.len(),
                });
            }
            if a.shape() != (dim, dim) || !a.is_finite() {
                return Err(Error::InvalidMatrix(format!(
                    "coefficient of shape {:?}, expected {dim}x{dim}",
                    a.shape()
                )));
            }
        }
        Ok(Self { nvars, dim, terms })
    }

    /// Degree-one form `Σ z_i A_i`.
    pub fn linear(coeffs: &[ComplexMatrix]) -> Result<Self> {
        let n = coeffs.len();
        let terms = coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let mut e = vec![0; n];
                e[i] = 1;
                (e, a.clone())
            })
            .collect();
        Self::new(n, terms)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[(Exponent, ComplexMatrix)] {
        &self.terms
    }

    pub fn degree(&self) -> usize {
        self.terms
            .iter()
            .map(|(e, _)| e.iter().sum::<u32>() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.iter().map(|(e, _)| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|k| k == d),
        }
    }

    pub fn eval(&self, z: &[C64]) -> Result<ComplexMatrix> {
        if z.len() != self.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                got: z.len(),
            });
        }
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for (e, a) in &self.terms {
            let w = e.iter().zip(z).fold(cr(1.0), |acc, (&k, &zi)| acc * zi.powu(k));
            out = &out + &a.scale(w);
        }
        Ok(out)
    }

    fn eval_angles(&self, t: &[f64]) -> ComplexMatrix {
        let z: Vec<C64> = t.iter().map(|&x| C64::from_polar(1.0, x)).collect();
        self.eval(&z).expect("arity checked by caller")
    }

    /// `Σ A_α ⊗ T^α`.
    pub fn eval_tuple(&self, t: &CommutingTuple) -> Result<ComplexMatrix> {
        if t.len() != self.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                got: t.len(),
            });
        }
        let n = t.dim();
        let mut out = ComplexMatrix::zeros(self.dim * n, self.dim * n);
        for (e, a) in &self.terms {
            let mut m = ComplexMatrix::identity(n);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    m = &m * &t.matrices()[i].pow(k);
                }
            }
            out = &out + &crate::matrix::kron(a, &m)?;
        }
        Ok(out)
    }

    /// Grid lower bound for `sup_{𝕋ⁿ} ‖P(z)‖`.
    pub fn sup_torus(&self, grid: usize, refine: usize) -> Result<SupNorm> {
        let n = self.nvars;
        let pin = n > 0 && self.is_homogeneous();
        check_budget(n, grid, if pin { n - 1 } else { n })?;
        let m = torus::maximize(n, grid, refine, pin, |t| self.eval_angles(t).norm());
        Ok(SupNorm {
            value: m.value.max(0.0),
            angles: m.angles,
            upper: self.terms.iter().map(|(_, a)| a.norm()).sum(),
        })
    }
}
