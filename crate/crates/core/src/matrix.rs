//! Polynomial and Laurent polynomial matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::{interpolate_unit_roots, unit_root, LaurentPoly, Poly, TRIM_TOL};

/// Dense complex matrix.
pub type CMat = DMatrix<Complex64>;

pub(crate) fn zeros(m: usize) -> CMat {
    CMat::zeros(m, m)
}

pub(crate) fn mat_max_abs(a: &CMat) -> f64 {
    a.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

pub(crate) fn det(a: &CMat) -> Complex64 {
    match a.nrows() {
        0 => Complex64::new(1.0, 0.0),
        1 => a[(0, 0)],
        2 => a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)],
        _ => a.clone().lu().determinant(),
    }
}

fn check_square(coeffs: &[CMat]) -> Result<usize> {
    let m = coeffs
        .first()
        .ok_or_else(|| Error::InvalidInput("matrix polynomial needs at least one coefficient".into()))?
        .nrows();
    if m == 0 {
        return Err(Error::InvalidInput("matrix dimension must be at least 1".into()));
    }
    for c in coeffs {
        if c.nrows() != m || c.ncols() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: if c.nrows() != m { c.nrows() } else { c.ncols() },
            });
        }
        if c.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite("matrix coefficient"));
        }
    }
    Ok(m)
}

/// `P(z) = sum_{n=0}^{N} B_n z^n` with `m x m` coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix {
    dim: usize,
    coeffs: Vec<CMat>,
}

impl PolyMatrix {
    /// Trailing coefficients below `TRIM_TOL` relative to the largest entry
    /// are dropped (the constant term is always kept).
    pub fn new(coeffs: Vec<CMat>) -> Result<Self> {
        let dim = check_square(&coeffs)?;
        let mut p = PolyMatrix { dim, coeffs };
        let cutoff = TRIM_TOL * p.max_abs();
        while p.coeffs.len() > 1 && mat_max_abs(p.coeffs.last().unwrap()) <= cutoff {
            p.coeffs.pop();
        }
        Ok(p)
    }

    /// Keeps the coefficient list as given.
    pub(crate) fn from_parts(dim: usize, coeffs: Vec<CMat>) -> Self {
        debug_assert!(coeffs.iter().all(|c| c.nrows() == dim && c.ncols() == dim));
        PolyMatrix { dim, coeffs }
    }

    pub fn identity(m: usize) -> Self {
        PolyMatrix {
            dim: m,
            coeffs: vec![CMat::identity(m, m)],
        }
    }

    pub fn constant(a: CMat) -> Result<Self> {
        Self::new(vec![a])
    }

    /// Diagonal matrix with the given scalar polynomials.
    pub fn diagonal(entries: &[Poly]) -> Result<Self> {
        let m = entries.len();
        let len = entries.iter().map(|p| p.coeffs().len()).max().unwrap_or(1).max(1);
        let mut coeffs = vec![zeros(m); len];
        for (i, p) in entries.iter().enumerate() {
            for (k, &c) in p.coeffs().iter().enumerate() {
                coeffs[k][(i, i)] = c;
            }
        }
        Self::new(coeffs)
    }

    pub fn scalar(p: &Poly) -> Result<Self> {
        Self::diagonal(std::slice::from_ref(p))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[CMat] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &CMat {
        &self.coeffs[n]
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(mat_max_abs).fold(0.0, f64::max)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> CMat {
        let mut acc = zeros(self.dim);
        for b in self.coeffs.iter().rev() {
            acc = acc * z + b;
        }
        acc
    }

    /// Derivative evaluated at `z`.
    pub fn eval_derivative(&self, z: Complex64) -> CMat {
        let mut acc = zeros(self.dim);
        for (n, b) in self.coeffs.iter().enumerate().skip(1).rev() {
            acc = acc * z + b * Complex64::new(n as f64, 0.0);
        }
        acc
    }

    /// `sum_n |B_n|_max |z|^n`.
    pub fn eval_scale(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, b| acc * r + mat_max_abs(b))
    }

    /// The adjoint `sum_n B_n^* z^{-n}` as a Laurent matrix over `-N..N`.
    pub fn tilde(&self) -> LaurentMatrix {
        let n = self.degree();
        let mut coeffs = vec![zeros(self.dim); 2 * n + 1];
        for (k, b) in self.coeffs.iter().enumerate() {
            coeffs[n - k] = b.adjoint();
        }
        LaurentMatrix::from_parts(self.dim, coeffs)
    }

    /// `P * tilde(P)`: coefficient `k` is `sum_n B_{n+k} B_n^*`.
    pub fn mul_factor(&self) -> LaurentMatrix {
        let n = self.degree();
        let mut coeffs = vec![zeros(self.dim); 2 * n + 1];
        for k in 0..=n {
            let mut ck = zeros(self.dim);
            for j in 0..=(n - k) {
                ck += &self.coeffs[j + k] * self.coeffs[j].adjoint();
            }
            coeffs[n - k] = ck.adjoint();
            coeffs[n + k] = ck;
        }
        LaurentMatrix::from_parts(self.dim, coeffs)
    }

    /// Matrix polynomial product.
    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut coeffs = vec![zeros(self.dim); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        PolyMatrix::new(coeffs)
    }

    /// `P(z) * u` for a constant matrix `u`; the degree is kept as is.
    pub fn mul_right(&self, u: &CMat) -> Result<PolyMatrix> {
        if u.nrows() != self.dim || u.ncols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: u.nrows(),
            });
        }
        Ok(PolyMatrix::from_parts(
            self.dim,
            self.coeffs.iter().map(|b| b * u).collect(),
        ))
    }

    /// `det P(z)` of degree at most `mN`, interpolated from `mN + 1` roots of unity.
    pub fn det_poly(&self) -> Poly {
        let count = self.dim * self.degree() + 1;
        let values: Vec<_> = (0..count).map(|j| det(&self.eval(unit_root(j, count)))).collect();
        clean_interpolated(interpolate_unit_roots(&values))
    }

    /// Entry `(i, j)` as a scalar polynomial.
    pub fn entry(&self, i: usize, j: usize) -> Poly {
        Poly::from_exact(self.coeffs.iter().map(|b| b[(i, j)]).collect())
    }
}

/// Zeroes interpolation noise and trims the leading tail.
fn clean_interpolated(mut coeffs: Vec<Complex64>) -> Poly {
    let cutoff = TRIM_TOL * crate::poly::max_abs(&coeffs);
    for c in coeffs.iter_mut() {
        if c.norm() <= cutoff {
            *c = Complex64::new(0.0, 0.0);
        }
    }
    Poly::from_exact(coeffs)
}

/// `S(z) = sum_{n=-N}^{N} C_n z^n`, stored as `C_{-N}, .., C_N`.
///
/// Spectral-factorization inputs must be para-Hermitian (`C_{-n} = C_n^*`);
/// operations that require it check on entry.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentMatrix {
    dim: usize,
    degree: usize,
    coeffs: Vec<CMat>,
}

impl LaurentMatrix {
    /// Coefficients for indices `-N..=N`; outer pairs that are both zero
    /// to `TRIM_TOL` are trimmed.
    pub fn new(coeffs: Vec<CMat>) -> Result<Self> {
        let dim = check_square(&coeffs)?;
        if coeffs.len() % 2 == 0 {
            return Err(Error::InvalidInput(format!(
                "Laurent matrix needs an odd number of coefficients, got {}",
                coeffs.len()
            )));
        }
        let mut s = LaurentMatrix::from_parts(dim, coeffs);
        let cutoff = TRIM_TOL * s.max_abs();
        while s.degree > 0
            && mat_max_abs(s.coeff(s.degree as i64)) <= cutoff
            && mat_max_abs(s.coeff(-(s.degree as i64))) <= cutoff
        {
            s.coeffs.pop();
            s.coeffs.remove(0);
            s.degree -= 1;
        }
        Ok(s)
    }

    pub(crate) fn from_parts(dim: usize, coeffs: Vec<CMat>) -> Self {
        let degree = coeffs.len() / 2;
        LaurentMatrix { dim, degree, coeffs }
    }

    pub fn identity(m: usize) -> Self {
        LaurentMatrix::from_parts(m, vec![CMat::identity(m, m)])
    }

    /// Diagonal matrix with the given scalar Laurent polynomials.
    pub fn diagonal(entries: &[LaurentPoly]) -> Result<Self> {
        let m = entries.len();
        let half = entries.iter().map(|p| p.half_degree()).max().unwrap_or(0);
        let mut coeffs = vec![zeros(m); 2 * half + 1];
        for (i, p) in entries.iter().enumerate() {
            for n in -(half as i64)..=half as i64 {
                coeffs[(n + half as i64) as usize][(i, i)] = p.coeff(n);
            }
        }
        Self::new(coeffs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// All coefficients, index `-N` first.
    pub fn coeffs(&self) -> &[CMat] {
        &self.coeffs
    }

    /// `C_n`; panics if `|n| > N`.
    pub fn coeff(&self, n: i64) -> &CMat {
        &self.coeffs[(n + self.degree as i64) as usize]
    }

    fn coeff_or_zero(&self, n: i64) -> CMat {
        if n.unsigned_abs() as usize > self.degree {
            zeros(self.dim)
        } else {
            self.coeff(n).clone()
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(mat_max_abs).fold(0.0, f64::max)
    }

    pub fn eval(&self, z: Complex64) -> CMat {
        let mut acc = zeros(self.dim);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc * z.powi(-(self.degree as i32))
    }

    /// `C_n -> C_{-n}^*`.
    pub fn tilde(&self) -> LaurentMatrix {
        LaurentMatrix::from_parts(
            self.dim,
            self.coeffs.iter().rev().map(|c| c.adjoint()).collect(),
        )
    }

    /// Largest entry of `C_{-n} - C_n^*` over all `n`.
    pub fn para_hermitian_defect(&self) -> f64 {
        (0..=self.degree as i64)
            .map(|n| mat_max_abs(&(self.coeff(-n) - self.coeff(n).adjoint())))
            .fold(0.0, f64::max)
    }

    pub fn is_para_hermitian(&self, tol: f64) -> bool {
        self.para_hermitian_defect() <= tol * self.max_abs().max(f64::MIN_POSITIVE)
    }

    pub(crate) fn require_para_hermitian(&self) -> Result<()> {
        let defect = self.para_hermitian_defect();
        if defect > 1e-10 * self.max_abs().max(f64::MIN_POSITIVE) {
            return Err(Error::NotParaHermitian { defect });
        }
        Ok(())
    }

    /// Coefficientwise max-abs difference, padding the shorter range with zeros.
    pub fn max_abs_diff(&self, other: &LaurentMatrix) -> Result<f64> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let h = self.degree.max(other.degree) as i64;
        Ok((-h..=h)
            .map(|n| mat_max_abs(&(self.coeff_or_zero(n) - other.coeff_or_zero(n))))
            .fold(0.0, f64::max))
    }

    /// Entry `(i, j)` as a scalar Laurent polynomial.
    pub fn entry(&self, i: usize, j: usize) -> LaurentPoly {
        LaurentPoly::new(self.coeffs.iter().map(|c| c[(i, j)]).collect())
            .expect("odd coefficient count")
    }

    /// `det S(z)` over `-mN..mN`, interpolated from `2mN + 1` roots of unity.
    pub fn det_laurent(&self) -> Result<LaurentPoly> {
        self.require_para_hermitian()?;
        let half = self.dim * self.degree;
        let count = 2 * half + 1;
        let values: Vec<_> = (0..count)
            .map(|j| {
                let z = unit_root(j, count);
                det(&self.eval(z)) * unit_root(j * half, count)
            })
            .collect();
        let mut coeffs = interpolate_unit_roots(&values);
        let cutoff = TRIM_TOL * crate::poly::max_abs(&coeffs);
        for c in coeffs.iter_mut() {
            if c.norm() <= cutoff {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        Ok(LaurentPoly::new(coeffs)?.symmetrized().trimmed(TRIM_TOL))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::cis;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn double_root_pair(a: f64) -> PolyMatrix {
        PolyMatrix::diagonal(&[
            Poly::from_real(&[-a, 1.0]).unwrap(),
            Poly::from_real(&[1.0, -a]).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn eval_identity_and_diagonal() {
        let id = PolyMatrix::identity(3);
        assert_eq!(id.eval(c(3.0)), CMat::identity(3, 3));
        let p = double_root_pair(0.5);
        let v = p.eval(c(0.5));
        assert!(v[(0, 0)].norm() < 1e-16);
        assert!((v[(1, 1)] - c(0.75)).norm() < 1e-16);
        assert_eq!(v[(0, 1)], c(0.0));
    }

    #[test]
    fn mul_factor_of_double_root_pair() {
        let s = double_root_pair(0.5).mul_factor();
        for i in 0..2 {
            assert!((s.coeff(1)[(i, i)] - c(-0.5)).norm() < 1e-15);
            assert!((s.coeff(0)[(i, i)] - c(1.25)).norm() < 1e-15);
            assert!((s.coeff(-1)[(i, i)] - c(-0.5)).norm() < 1e-15);
        }
        assert!(s.is_para_hermitian(0.0));
    }

    #[test]
    fn det_poly_of_double_root_pair() {
        let d = double_root_pair(0.5).det_poly();
        let expected = [c(-0.5), c(1.25), c(-0.5)];
        assert_eq!(d.degree(), Some(2));
        for (a, b) in d.coeffs().iter().zip(expected) {
            assert!((a - b).norm() < 1e-14);
        }
        assert_eq!(PolyMatrix::identity(4).det_poly(), Poly::one());
    }

    #[test]
    fn det_laurent_squares_the_scalar() {
        let s = double_root_pair(0.5).mul_factor();
        let d = s.det_laurent().unwrap();
        let expected = [0.25, -1.25, 2.0625, -1.25, 0.25];
        assert_eq!(d.half_degree(), 2);
        for (n, e) in (-2..=2).zip(expected) {
            assert!((d.coeff(n) - c(e)).norm() < 1e-13, "n = {n}");
        }
        assert_eq!(
            LaurentMatrix::identity(2).det_laurent().unwrap().coeffs(),
            &[c(1.0)]
        );
    }

    #[test]
    fn det_laurent_rejects_non_para_hermitian() {
        let mut coeffs = vec![zeros(1), CMat::identity(1, 1), zeros(1)];
        coeffs[2][(0, 0)] = c(0.3);
        let s = LaurentMatrix::new(coeffs).unwrap();
        assert!(matches!(s.det_laurent(), Err(Error::NotParaHermitian { .. })));
    }

    #[test]
    fn tilde_is_pointwise_adjoint() {
        let p = double_root_pair(0.3);
        let z = cis(1.1) * 1.7;
        let lhs = p.tilde().eval(z);
        let rhs = p.eval(Complex64::new(1.0, 0.0) / z.conj()).adjoint();
        assert!(mat_max_abs(&(lhs - rhs)) < 1e-14);
    }

    #[test]
    fn laurent_new_trims_zero_pairs() {
        let s = LaurentMatrix::new(vec![zeros(2), CMat::identity(2, 2), zeros(2)]).unwrap();
        assert_eq!(s.degree(), 0);
    }
}
