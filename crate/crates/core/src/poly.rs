//! Scalar polynomials and Laurent polynomials with complex coefficients.

use std::f64::consts::PI;
use std::ops::Mul;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative threshold below which leading coefficients are treated as zero.
pub const TRIM_TOL: f64 = 1e-12;

pub(crate) fn cis(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

/// The point `exp(2 pi i j / n)` with the angle reduced exactly first.
pub(crate) fn unit_root(j: usize, n: usize) -> Complex64 {
    cis(2.0 * PI * ((j % n) as f64) / n as f64)
}

pub(crate) fn max_abs(values: &[Complex64]) -> f64 {
    values.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn all_finite(values: &[Complex64]) -> bool {
    values.iter().all(|c| c.re.is_finite() && c.im.is_finite())
}

/// Coefficients `c_k = (1/n) sum_j v_j w^{-jk}` for samples `v_j` taken at
/// the n-th roots of unity `w^j`.
pub(crate) fn interpolate_unit_roots(values: &[Complex64]) -> Vec<Complex64> {
    let n = values.len();
    let scale = 1.0 / n as f64;
    (0..n)
        .map(|k| {
            let sum: Complex64 = values
                .iter()
                .enumerate()
                .map(|(j, v)| v * unit_root(j * k, n).conj())
                .sum();
            sum * scale
        })
        .collect()
}

/// Polynomial `sum_k a_k z^k` stored in ascending order.
///
/// The zero polynomial has no coefficients; otherwise the leading coefficient
/// is nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    coeffs: Vec<Complex64>,
}

impl Poly {
    /// Builds a polynomial from ascending coefficients, trimming leading
    /// entries below `TRIM_TOL` times the largest coefficient modulus.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if !all_finite(&coeffs) {
            return Err(Error::NonFinite("polynomial"));
        }
        let mut p = Poly { coeffs };
        p.trim(TRIM_TOL);
        Ok(p)
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Keeps every coefficient, dropping only exactly-zero leading terms.
    pub(crate) fn from_exact(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::from_exact(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    /// `lead * prod (z - r)`.
    pub fn from_roots(roots: &[Complex64], lead: Complex64) -> Self {
        let mut coeffs = vec![lead];
        for &r in roots {
            coeffs.push(Complex64::new(0.0, 0.0));
            for k in (1..coeffs.len()).rev() {
                let prev = coeffs[k - 1];
                coeffs[k] = prev - r * coeffs[k];
            }
            coeffs[0] = -r * coeffs[0];
        }
        Self::from_exact(coeffs)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or_default()
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.coeffs)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `sum_k |a_k| |z|^k`, the natural scale for rounding errors of `eval`.
    pub fn eval_abs(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Poly {
        Self::from_exact(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn scale(&self, c: Complex64) -> Poly {
        Self::from_exact(self.coeffs.iter().map(|&a| a * c).collect())
    }

    /// Number of exactly-zero low-order coefficients (multiplicity of the root at 0).
    pub fn low_order_zeros(&self) -> usize {
        self.coeffs
            .iter()
            .take_while(|c| c.norm() == 0.0)
            .count()
    }

    /// Coefficients of `t -> p(c + t)`.
    pub fn taylor_at(&self, c: Complex64) -> Vec<Complex64> {
        let mut t = self.coeffs.clone();
        let n = t.len();
        for i in 0..n {
            for k in (i..n.saturating_sub(1)).rev() {
                let hi = t[k + 1];
                t[k] += c * hi;
            }
        }
        t
    }

    /// The adjoint `conj(p(1/conj z)) = sum_k conj(a_k) z^{-k}`.
    pub fn tilde(&self) -> LaurentPoly {
        let d = self.coeffs.len().saturating_sub(1);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * d + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[d - k] = c.conj();
        }
        LaurentPoly {
            half: d,
            coeffs,
        }
    }

    /// Embeds the polynomial into the Laurent range `-deg..deg`.
    pub fn to_laurent(&self) -> LaurentPoly {
        let d = self.coeffs.len().saturating_sub(1);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * d + 1];
        coeffs[d..d + self.coeffs.len()].copy_from_slice(&self.coeffs);
        LaurentPoly { half: d, coeffs }
    }

    /// `p * tilde(p)`, para-Hermitian by construction.
    pub fn times_tilde(&self) -> LaurentPoly {
        let d = self.coeffs.len().saturating_sub(1);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * d + 1];
        for k in 0..=d {
            let ck: Complex64 = (0..self.coeffs.len().saturating_sub(k))
                .map(|n| self.coeffs[n + k] * self.coeffs[n].conj())
                .sum();
            coeffs[d + k] = ck;
            coeffs[d - k] = ck.conj();
        }
        if self.is_zero() {
            coeffs = vec![Complex64::new(0.0, 0.0)];
        }
        LaurentPoly { half: d, coeffs }
    }

    fn trim(&mut self, tol: f64) {
        let cutoff = tol * self.max_abs();
        while self.coeffs.last().is_some_and(|c| c.norm() <= cutoff) {
            self.coeffs.pop();
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_exact(out)
    }
}

/// Laurent polynomial `sum_{n=-L}^{L} c_n z^n` over a symmetric index range.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentPoly {
    half: usize,
    coeffs: Vec<Complex64>,
}

impl LaurentPoly {
    /// Coefficients for indices `-L..=L`; the length must be odd.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() % 2 == 0 {
            return Err(Error::InvalidInput(format!(
                "Laurent coefficient list must have odd length, got {}",
                coeffs.len()
            )));
        }
        if !all_finite(&coeffs) {
            return Err(Error::NonFinite("Laurent polynomial"));
        }
        Ok(LaurentPoly {
            half: coeffs.len() / 2,
            coeffs,
        })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Builds `sum_k coeffs[k] z^{low + k}`, widening to a symmetric range.
    pub fn from_range(low: i64, coeffs: &[Complex64]) -> Result<Self> {
        if coeffs.is_empty() {
            return Self::new(vec![Complex64::new(0.0, 0.0)]);
        }
        let high = low + coeffs.len() as i64 - 1;
        let half = low.unsigned_abs().max(high.unsigned_abs()) as usize;
        let mut out = vec![Complex64::new(0.0, 0.0); 2 * half + 1];
        for (k, &c) in coeffs.iter().enumerate() {
            out[(low + k as i64 + half as i64) as usize] = c;
        }
        Self::new(out)
    }

    pub fn constant(c: Complex64) -> Self {
        LaurentPoly {
            half: 0,
            coeffs: vec![c],
        }
    }

    /// `L`, the largest index magnitude in the stored range.
    pub fn half_degree(&self) -> usize {
        self.half
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, n: i64) -> Complex64 {
        let idx = n + self.half as i64;
        if idx < 0 {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs.get(idx as usize).copied().unwrap_or_default()
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.coeffs)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let poly = self
            .coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
        poly * z.powi(-(self.half as i32))
    }

    /// Largest violation of `c_{-n} = conj(c_n)`.
    pub fn para_hermitian_defect(&self) -> f64 {
        (0..=self.half as i64)
            .map(|n| (self.coeff(-n) - self.coeff(n).conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_para_hermitian(&self, tol: f64) -> bool {
        self.para_hermitian_defect() <= tol * self.max_abs().max(f64::MIN_POSITIVE)
    }

    /// Replaces each coefficient pair by its para-Hermitian average.
    pub fn symmetrized(&self) -> LaurentPoly {
        let mut out = self.clone();
        for n in 0..=self.half as i64 {
            let avg = (self.coeff(n) + self.coeff(-n).conj()) * 0.5;
            out.coeffs[(self.half as i64 + n) as usize] = avg;
            out.coeffs[(self.half as i64 - n) as usize] = avg.conj();
        }
        out
    }

    /// Drops outer index pairs whose coefficients are both below `tol * max`.
    pub fn trimmed(&self, tol: f64) -> LaurentPoly {
        let cutoff = tol * self.max_abs();
        let mut half = self.half;
        while half > 0
            && self.coeff(half as i64).norm() <= cutoff
            && self.coeff(-(half as i64)).norm() <= cutoff
        {
            half -= 1;
        }
        let start = self.half - half;
        LaurentPoly {
            half,
            coeffs: self.coeffs[start..start + 2 * half + 1].to_vec(),
        }
    }

    /// The ordinary polynomial `z^L s(z)` of degree at most `2L`.
    pub fn to_shifted_poly(&self) -> Poly {
        Poly::from_exact(self.coeffs.clone())
    }

    /// The adjoint, `c_n -> conj(c_{-n})`.
    pub fn tilde(&self) -> LaurentPoly {
        LaurentPoly {
            half: self.half,
            coeffs: self.coeffs.iter().rev().map(|c| c.conj()).collect(),
        }
    }

    /// Largest coefficient difference, treating missing indices as zero.
    pub fn max_abs_diff(&self, other: &LaurentPoly) -> f64 {
        let h = self.half.max(other.half) as i64;
        (-h..=h)
            .map(|n| (self.coeff(n) - other.coeff(n)).norm())
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, c: Complex64) -> LaurentPoly {
        LaurentPoly {
            half: self.half,
            coeffs: self.coeffs.iter().map(|&a| a * c).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let half = self.half + rhs.half;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * half + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        LaurentPoly { half, coeffs }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn from_roots_expands_product() {
        let p = Poly::from_roots(&[c(0.5, 0.0), c(2.0, 0.0)], c(-0.5, 0.0));
        let expected = [c(-0.5, 0.0), c(1.25, 0.0), c(-0.5, 0.0)];
        for (a, b) in p.coeffs().iter().zip(expected) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn new_trims_noise_and_rejects_nan() {
        let p = Poly::new(vec![c(1.0, 0.0), c(2.0, 0.0), c(1e-15, 0.0)]).unwrap();
        assert_eq!(p.degree(), Some(1));
        assert!(Poly::new(vec![c(f64::NAN, 0.0)]).is_err());
        assert!(Poly::new(vec![c(0.0, 0.0)]).unwrap().is_zero());
    }

    #[test]
    fn tilde_of_linear_factor() {
        // (z - 0.5)~ = z^{-1} - 0.5
        let p = Poly::from_real(&[-0.5, 1.0]).unwrap();
        let t = p.tilde();
        assert_eq!(t.coeff(-1), c(1.0, 0.0));
        assert_eq!(t.coeff(0), c(-0.5, 0.0));
        assert_eq!(t.coeff(1), c(0.0, 0.0));
    }

    #[test]
    fn times_tilde_matches_laurent_product() {
        let p = Poly::new(vec![c(0.3, -1.0), c(2.0, 0.5), c(-0.7, 0.1)]).unwrap();
        let direct = &p.to_laurent() * &p.tilde();
        assert!(direct.max_abs_diff(&p.times_tilde()) < 1e-14);
        assert!(p.times_tilde().is_para_hermitian(1e-15));
    }

    #[test]
    fn taylor_shift_reproduces_values() {
        let p = Poly::new(vec![c(1.0, 2.0), c(-3.0, 0.0), c(0.5, 0.5), c(2.0, -1.0)]).unwrap();
        let center = c(0.3, -0.8);
        let shifted = Poly::from_exact(p.taylor_at(center));
        let t = c(0.11, 0.07);
        assert!((shifted.eval(t) - p.eval(center + t)).norm() < 1e-13);
    }

    #[test]
    fn interpolation_inverts_sampling() {
        let p = Poly::new(vec![c(1.0, 0.0), c(0.0, 2.0), c(-1.5, 0.25)]).unwrap();
        let n = 5;
        let samples: Vec<_> = (0..n).map(|j| p.eval(unit_root(j, n))).collect();
        let back = interpolate_unit_roots(&samples);
        for k in 0..n {
            assert!((back[k] - p.coeff(k)).norm() < 1e-14);
        }
    }

    #[test]
    fn laurent_eval_and_trim() {
        let s = LaurentPoly::from_real(&[0.0, -0.5, 1.25, -0.5, 0.0]).unwrap();
        let t = s.trimmed(TRIM_TOL);
        assert_eq!(t.half_degree(), 1);
        let z = cis(0.7);
        let expected = 1.25 - 0.7f64.cos();
        assert!((t.eval(z) - c(expected, 0.0)).norm() < 1e-15);
        assert!(t.tilde().max_abs_diff(&t) == 0.0);
    }
}
