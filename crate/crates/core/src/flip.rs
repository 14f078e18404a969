//! Moving one determinant zero of a polynomial spectral factor to its
//! reflection through the unit circle, without changing `P P~`.
//!
//! For a zero `r` of `det P`, a constant unitary `V` is chosen so that the
//! first column of `P V` vanishes at `r`. That column is divided by `z - r`
//! and multiplied by `z - 1/conj(r)`, scaled so that the change is the
//! diagonal Blaschke factor `diag(u, 1, .., 1)`, which is unimodular on the
//! circle. The degree is unchanged.

use std::f64::consts::PI;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{smallest_singular_pair, unitary_defect};
use crate::matrix::{mat_max_abs, CMat, PolyMatrix};
use crate::poly::{cis, unit_root};
use crate::roots::reflect;

const EPS: f64 = f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlipConfig {
    /// Singular values below `rank_tol * sigma_1` count as zero.
    pub rank_tol: f64,
    /// Largest synthetic-division remainder relative to the column size.
    pub remainder_tol: f64,
    pub boundary_tol: f64,
    /// Accept a null space of dimension above one (determinant roots of
    /// higher multiplicity); an arbitrary null direction is then used.
    pub allow_multiple: bool,
    /// Polish the root against `det P` by Newton steps before flipping.
    pub refine_root: bool,
}

impl Default for FlipConfig {
    fn default() -> Self {
        FlipConfig {
            rank_tol: 1e-8,
            remainder_tol: 1e-8,
            boundary_tol: 1e-6,
            allow_multiple: false,
            refine_root: true,
        }
    }
}

/// Ordered list of zero moves `from -> 1/conj(from)`.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct FlipPlan {
    steps: Vec<FlipStep>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlipStep {
    pub from: Complex64,
    pub to: Complex64,
}

impl FlipPlan {
    pub fn new(from: &[Complex64], boundary_tol: f64) -> Result<Self> {
        let steps = from
            .iter()
            .map(|&f| {
                if (f.norm() - 1.0).abs() < boundary_tol {
                    return Err(Error::RootOnCircle {
                        root: f,
                        boundary_tol,
                    });
                }
                Ok(FlipStep { from: f, to: reflect(f) })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FlipPlan { steps })
    }

    /// Reorders the steps by decreasing `|from|`.
    pub fn sorted(mut self) -> Self {
        self.steps
            .sort_by(|a, b| b.from.norm().total_cmp(&a.from.norm()));
        self
    }

    pub fn steps(&self) -> &[FlipStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Singular values of `m` divided by the largest one, in descending order.
pub fn rank_ratios(m: &CMat) -> Vec<f64> {
    let (s, _) = smallest_singular_pair(m);
    let top = s[0];
    if top == 0.0 {
        return vec![0.0; s.len()];
    }
    s.iter().map(|x| x / top).collect()
}

fn canonical_phase(mut w: DVector<Complex64>) -> DVector<Complex64> {
    let norm = w.norm();
    w /= Complex64::new(norm, 0.0);
    let (k, &big) = w
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .expect("nonempty vector");
    let phase = big.conj() / big.norm();
    let mut w = w * phase;
    w[k] = Complex64::new(big.norm(), 0.0);
    w
}

/// Unit vector spanning the kernel of a matrix of numerical rank `m - 1`.
///
/// The phase is fixed by making the largest component positive real. For
/// `m = 1` the single entry is compared against `rank_tol` directly.
pub fn null_vector(m: &CMat, rank_tol: f64) -> Result<DVector<Complex64>> {
    null_vector_with(m, rank_tol, false, Complex64::new(0.0, 0.0))
}

fn null_vector_with(
    m: &CMat,
    rank_tol: f64,
    allow_multiple: bool,
    point: Complex64,
) -> Result<DVector<Complex64>> {
    let dim = m.nrows();
    if dim == 1 {
        let ratio = m[(0, 0)].norm();
        if ratio > rank_tol {
            return Err(Error::RankDeficiencyMismatch {
                point,
                ratios: vec![ratio],
            });
        }
        return Ok(DVector::from_element(1, Complex64::new(1.0, 0.0)));
    }
    let (s, v) = smallest_singular_pair(m);
    if allow_multiple {
        // the caller has established that `m` is singular
        return Ok(canonical_phase(v));
    }
    let ratios: Vec<f64> = if s[0] == 0.0 {
        vec![0.0; dim]
    } else {
        s.iter().map(|x| x / s[0]).collect()
    };
    if s[0] == 0.0 || ratios[dim - 1] > rank_tol || ratios[dim - 2] <= rank_tol {
        return Err(Error::RankDeficiencyMismatch { point, ratios });
    }
    Ok(canonical_phase(v))
}

/// Unitary `V` with `V e_1 = w`, built from one Householder reflector and a
/// phase on the first column.
pub fn unitary_completion(w: &DVector<Complex64>) -> CMat {
    let m = w.len();
    let w0 = w[0];
    let alpha = if w0.norm() > 0.0 {
        w0 / w0.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    // y = conj(alpha) w has a real nonnegative first entry.
    let y = w * alpha.conj();
    let mut u = y.clone();
    u[0] += Complex64::new(1.0, 0.0);
    let uu = u.norm_squared();
    let mut h = CMat::identity(m, m);
    if uu > 0.0 {
        h -= &u * u.adjoint() * Complex64::new(2.0 / uu, 0.0);
    }
    // H e_1 = -y, so V = H diag(-alpha, 1, .., 1) sends e_1 to w.
    let mut v = h;
    for i in 0..m {
        v[(i, 0)] *= -alpha;
    }
    v
}

/// Newton steps `z -= 1 / tr(P(z)^{-1} P'(z))` on `det P`.
fn refine_root(p: &PolyMatrix, start: Complex64) -> Complex64 {
    let mut z = start;
    for _ in 0..3 {
        let lu = p.eval(z).lu();
        let Some(x) = lu.solve(&p.eval_derivative(z)) else {
            break;
        };
        let step = Complex64::new(1.0, 0.0) / x.trace();
        if !(step.re.is_finite() && step.im.is_finite()) {
            break;
        }
        if (z - step - start).norm() > 1e-6 * (1.0 + start.norm()) {
            break;
        }
        z -= step;
        if step.norm() <= 4.0 * EPS * z.norm().max(1.0) {
            break;
        }
    }
    z
}

/// Divides the vector polynomial `c` by `z - r`, returning the quotient and
/// the size of the remainder. The recursion runs from whichever end keeps
/// the multiplier `r` or `1/r` at most one in modulus.
fn divide_linear(c: &[DVector<Complex64>], r: Complex64) -> (Vec<DVector<Complex64>>, f64) {
    let n = c.len() - 1;
    let m = c[0].len();
    let mut q = vec![DVector::zeros(m); n];
    let remainder = if r.norm() <= 1.0 {
        q[n - 1] = c[n].clone();
        for k in (1..n).rev() {
            q[k - 1] = &c[k] + &q[k] * r;
        }
        &c[0] + &q[0] * r
    } else {
        let inv = Complex64::new(1.0, 0.0) / r;
        q[0] = &c[0] * (-inv);
        for k in 1..n {
            q[k] = (&q[k - 1] - &c[k]) * inv;
        }
        &c[n] - &q[n - 1]
    };
    let rem = remainder.iter().map(|x| x.norm()).fold(0.0, f64::max);
    (q, rem)
}

/// Moves the determinant zero at `from_zero` to `1/conj(from_zero)`.
///
/// The result `P1 = P V U(z)` satisfies `P1 P1~ = P P~`, has the same
/// degree, and `det P1 = det P * det V * u(z)` with `|det V| = 1` and
/// `u(z) = (z - a)/(1 - conj(a) z)`, `a = 1/conj(from_zero)` (for an outside
/// zero) or `u^{-1}` with `a = from_zero` (for an inside zero).
pub fn flip_zero(p: &PolyMatrix, from_zero: Complex64, cfg: &FlipConfig) -> Result<PolyMatrix> {
    if (from_zero.norm() - 1.0).abs() < cfg.boundary_tol {
        return Err(Error::RootOnCircle {
            root: from_zero,
            boundary_tol: cfg.boundary_tol,
        });
    }
    let m = p.dim();
    let n = p.degree();
    let r = if cfg.refine_root && n > 0 {
        refine_root(p, from_zero)
    } else {
        from_zero
    };
    let value = p.eval(r);

    let w = if m == 1 {
        let ratio = value[(0, 0)].norm() / p.eval_scale(r);
        if n == 0 || ratio > cfg.rank_tol {
            return Err(Error::NotARoot { point: from_zero, ratio });
        }
        DVector::from_element(1, Complex64::new(1.0, 0.0))
    } else {
        // When the whole of P(r) is at noise level (a root of higher
        // multiplicity) sigma_1 is no reference, so the coefficient scale
        // of P is accepted as well.
        let (s, _) = smallest_singular_pair(&value);
        let relative = if s[0] > 0.0 { s[m - 1] / s[0] } else { 0.0 };
        let absolute = s[m - 1] / p.eval_scale(r);
        if n == 0 || relative.min(absolute) > cfg.rank_tol {
            return Err(Error::NotARoot {
                point: from_zero,
                ratio: relative,
            });
        }
        null_vector_with(&value, cfg.rank_tol, cfg.allow_multiple, from_zero)?
    };

    let v = unitary_completion(&w);
    let rotated = p.mul_right(&v)?;
    let mut coeffs: Vec<CMat> = rotated.coeffs().to_vec();
    let column: Vec<DVector<Complex64>> = coeffs.iter().map(|b| b.column(0).into_owned()).collect();
    let size = column
        .iter()
        .flat_map(|c| c.iter().map(|x| x.norm()))
        .fold(0.0, f64::max);
    let (q, rem) = divide_linear(&column, r);
    if rem > cfg.remainder_tol * size {
        return Err(Error::RemainderTooLarge {
            point: from_zero,
            remainder: rem / size,
        });
    }

    let zero = DVector::zeros(m);
    let q_at = |k: isize| -> &DVector<Complex64> {
        if k < 0 || k as usize >= n {
            &zero
        } else {
            &q[k as usize]
        }
    };
    for (k, b) in coeffs.iter_mut().enumerate() {
        let k = k as isize;
        let new = if r.norm() > 1.0 {
            // (z - r) q * u(z) = -r (z - a) q with a = 1/conj(r)
            let a = reflect(r);
            (q_at(k - 1) - q_at(k) * a) * (-r)
        } else {
            // (z - r) q * u^{-1}(z) = (1 - conj(r) z) q
            q_at(k) - q_at(k - 1) * r.conj()
        };
        b.set_column(0, &new);
    }
    Ok(PolyMatrix::from_parts(m, coeffs))
}

/// Maximal tolerated `|U^* U - I|` and relative sampled mismatch.
pub const EQUIVALENCE_TOL: f64 = 1e-7;

/// Constant unitary `U` with `P1 = P2 U`, with the measured defects.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatch {
    pub unitary: CMat,
    pub unitary_defect: f64,
    /// `max_z |P1(z) - P2(z) U|_max / |P2|_max` over 32 circle points.
    pub sample_defect: f64,
}

/// Tests whether `P1 = P2 U` for a constant unitary `U`.
pub fn equal_up_to_unitary(p1: &PolyMatrix, p2: &PolyMatrix) -> Result<Option<UnitaryMatch>> {
    equal_up_to_unitary_with(p1, p2, EQUIVALENCE_TOL)
}

pub fn equal_up_to_unitary_with(
    p1: &PolyMatrix,
    p2: &PolyMatrix,
    tol: f64,
) -> Result<Option<UnitaryMatch>> {
    if p1.dim() != p2.dim() {
        return Err(Error::DimensionMismatch {
            expected: p1.dim(),
            found: p2.dim(),
        });
    }
    let smallest = |p: &PolyMatrix, z| *smallest_singular_pair(&p.eval(z)).0.last().unwrap();
    let (z0, best) = (0..64)
        .map(|j| {
            let z = unit_root(j, 64);
            (z, smallest(p1, z).min(smallest(p2, z)))
        })
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("samples");
    let scale = p1.max_abs().max(p2.max_abs());
    if best <= 1e-12 * scale {
        return Err(Error::AllSamplesSingular);
    }
    let u = p2
        .eval(z0)
        .lu()
        .solve(&p1.eval(z0))
        .ok_or(Error::AllSamplesSingular)?;
    let unitary_defect = unitary_defect(&u);
    if unitary_defect > tol {
        return Ok(None);
    }
    let sample_defect = (0..32)
        .map(|j| {
            let z = cis(2.0 * PI * (j as f64 + 0.5) / 32.0);
            mat_max_abs(&(p1.eval(z) - p2.eval(z) * &u))
        })
        .fold(0.0, f64::max)
        / p2.max_abs();
    if sample_defect > tol {
        return Ok(None);
    }
    Ok(Some(UnitaryMatch {
        unitary: u,
        unitary_defect,
        sample_defect,
    }))
}
