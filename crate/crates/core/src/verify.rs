//! Independent checks: positivity on the circle, factorization residuals,
//! determinant zero locations, and the multiple-root non-uniqueness example.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flip::equal_up_to_unitary;
use crate::linalg::hermitian_min_eigenvalue;
use crate::matrix::{mat_max_abs, LaurentMatrix, PolyMatrix};
use crate::poly::{cis, LaurentPoly, Poly, TRIM_TOL};
use crate::roots::{roots, RootConfig};

/// Default relative tolerance for `check_spectral_factor`.
pub const FACTOR_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PositivityReport {
    pub samples: usize,
    /// Smallest eigenvalue of the Hermitian part over all samples.
    pub min_eigenvalue: f64,
    pub worst_theta: f64,
    pub worst_point: Complex64,
    /// Largest `|S(z) - S(z)^*|_max` over all samples.
    pub hermitian_defect: f64,
}

/// Samples `S` at `samples` equally spaced circle points.
pub fn check_positive_definite(s: &LaurentMatrix, samples: usize) -> PositivityReport {
    let samples = samples.max(1);
    let mut report = PositivityReport {
        samples,
        min_eigenvalue: f64::INFINITY,
        worst_theta: 0.0,
        worst_point: Complex64::new(1.0, 0.0),
        hermitian_defect: 0.0,
    };
    for j in 0..samples {
        let theta = 2.0 * PI * j as f64 / samples as f64;
        let z = cis(theta);
        let value = s.eval(z);
        let eig = hermitian_min_eigenvalue(&value);
        if eig < report.min_eigenvalue {
            report.min_eigenvalue = eig;
            report.worst_theta = theta;
            report.worst_point = z;
        }
        let defect = mat_max_abs(&(&value - value.adjoint()));
        report.hermitian_defect = report.hermitian_defect.max(defect);
    }
    report
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorReport {
    /// `|P P~ - S|` over coefficients (max modulus).
    pub coefficient_residual: f64,
    /// `max_z |P(z) P(z)^* - S(z)|_max` over 64 circle points.
    pub sample_residual: f64,
    pub density_norm: f64,
    pub tolerance: f64,
    /// Both residuals within `tolerance * density_norm`.
    pub pass: bool,
}

/// Residual of `P P~ = S`, relative tolerance `tol`.
pub fn check_spectral_factor(p: &PolyMatrix, s: &LaurentMatrix, tol: f64) -> Result<FactorReport> {
    if p.dim() != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            found: p.dim(),
        });
    }
    let coefficient_residual = p.mul_factor().max_abs_diff(s)?;
    let sample_residual = (0..64)
        .map(|j| {
            let z = cis(2.0 * PI * j as f64 / 64.0);
            let pz = p.eval(z);
            mat_max_abs(&(&pz * pz.adjoint() - s.eval(z)))
        })
        .fold(0.0, f64::max);
    let density_norm = s.max_abs();
    let bound = tol * density_norm;
    Ok(FactorReport {
        coefficient_residual,
        sample_residual,
        density_norm,
        tolerance: tol,
        pass: coefficient_residual <= bound && sample_residual <= bound,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroReport {
    pub inside: Vec<Complex64>,
    pub outside: Vec<Complex64>,
    pub on_circle: Vec<Complex64>,
    /// No determinant zeros in the open disk.
    pub optimal: bool,
}

/// Determinant roots of `P` (with multiplicity) by location.
pub fn zero_report(p: &PolyMatrix, cfg: &RootConfig) -> Result<ZeroReport> {
    let d = p.det_poly();
    let mut report = ZeroReport {
        inside: Vec::new(),
        outside: Vec::new(),
        on_circle: Vec::new(),
        optimal: true,
    };
    if d.is_zero() {
        return Err(Error::InvalidInput("determinant vanishes identically".into()));
    }
    if d.degree() == Some(0) {
        return Ok(report);
    }
    for r in roots(&d, cfg)?.expanded() {
        let gap = r.norm() - 1.0;
        if gap.abs() < cfg.boundary_tol {
            report.on_circle.push(r);
        } else if gap < 0.0 {
            report.inside.push(r);
        } else {
            report.outside.push(r);
        }
    }
    report.optimal = report.inside.is_empty();
    Ok(report)
}

/// Best fit `q = c z^k p` between two polynomials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeterminantMatch {
    pub shift: i64,
    pub constant: Complex64,
    /// `|q - c z^k p| / |q|` over coefficients; infinite when the degrees
    /// cannot match.
    pub residual: f64,
}

impl DeterminantMatch {
    /// Residual and `||c| - 1|` both within `tol`.
    pub fn agrees(&self, tol: f64) -> bool {
        self.residual <= tol && (self.constant.norm() - 1.0).abs() <= tol
    }
}

fn significant_range(p: &Poly) -> Option<(usize, &[Complex64])> {
    let scale = p.max_abs();
    if scale == 0.0 {
        return None;
    }
    let c = p.coeffs();
    let lo = c.iter().position(|x| x.norm() > TRIM_TOL * scale)?;
    let hi = c.iter().rposition(|x| x.norm() > TRIM_TOL * scale)?;
    Some((lo, &c[lo..=hi]))
}

/// Compares two determinants up to a unimodular constant and a power of `z`.
pub fn determinant_match(q: &Poly, p: &Poly) -> DeterminantMatch {
    let none = DeterminantMatch {
        shift: 0,
        constant: Complex64::new(0.0, 0.0),
        residual: f64::INFINITY,
    };
    let (Some((kq, cq)), Some((kp, cp))) = (significant_range(q), significant_range(p)) else {
        return none;
    };
    let shift = kq as i64 - kp as i64;
    if cq.len() != cp.len() {
        return DeterminantMatch { shift, ..none };
    }
    let dot: Complex64 = cp.iter().zip(cq).map(|(a, b)| a.conj() * b).sum();
    let norm: f64 = cp.iter().map(|a| a.norm_sqr()).sum();
    let constant = dot / norm;
    let scale = cq.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let residual = cq
        .iter()
        .zip(cp)
        .map(|(b, a)| (b - constant * a).norm())
        .fold(0.0, f64::max)
        / scale;
    DeterminantMatch {
        shift,
        constant,
        residual,
    }
}

pub fn determinants_agree(q: &Poly, p: &Poly, tol: f64) -> bool {
    determinant_match(q, p).agrees(tol)
}

/// Two factors of `diag(s, s)`, `s = (z - a)(z^{-1} - conj(a))`, with equal
/// determinants that differ by the non-constant `diag(u, 1/u)`.
#[derive(Debug, Clone, Serialize)]
pub struct NonuniquenessFixture {
    pub a: Complex64,
    #[serde(skip)]
    pub p_plus: PolyMatrix,
    #[serde(skip)]
    pub r_plus: PolyMatrix,
    #[serde(skip)]
    pub density: LaurentMatrix,
    pub p_plus_residual: f64,
    pub r_plus_residual: f64,
    pub determinant_residual: f64,
    pub both_factors: bool,
    pub determinants_agree: bool,
    pub equivalent: bool,
}

impl NonuniquenessFixture {
    /// Both are factors, determinants agree and no constant unitary links them.
    pub fn holds(&self) -> bool {
        self.both_factors && self.determinants_agree && !self.equivalent
    }
}

pub fn nonuniqueness_fixture(a: Complex64, boundary_tol: f64) -> Result<NonuniquenessFixture> {
    if !(a.norm() < 1.0 - boundary_tol) {
        return Err(Error::InvalidInput(format!(
            "|a| = {} must be below 1 - {boundary_tol}",
            a.norm()
        )));
    }
    let one = Complex64::new(1.0, 0.0);
    let zma = Poly::new(vec![-a, one])?;
    let omaz = Poly::new(vec![one, -a.conj()])?;
    let p_plus = PolyMatrix::diagonal(&[zma.clone(), omaz.clone()])?;
    let r_plus = PolyMatrix::diagonal(&[omaz, zma])?;
    let s = LaurentPoly::new(vec![-a, Complex64::new(1.0 + a.norm_sqr(), 0.0), -a.conj()])?;
    let density = LaurentMatrix::diagonal(&[s.clone(), s])?;

    let p_check = check_spectral_factor(&p_plus, &density, 1e-12)?;
    let r_check = check_spectral_factor(&r_plus, &density, 1e-12)?;
    let det = determinant_match(&p_plus.det_poly(), &r_plus.det_poly());
    let equivalent = equal_up_to_unitary(&p_plus, &r_plus)?.is_some();
    Ok(NonuniquenessFixture {
        a,
        p_plus_residual: p_check.coefficient_residual,
        r_plus_residual: r_check.coefficient_residual,
        determinant_residual: det.residual,
        both_factors: p_check.pass && r_check.pass,
        determinants_agree: det.agrees(1e-12),
        equivalent,
        p_plus,
        r_plus,
        density,
    })
}
