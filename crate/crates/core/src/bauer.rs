//! Optimal (minimum-phase) matrix spectral factor by Bauer's method.
//!
//! The block Toeplitz sections `T_k = [C_{i-j}]_{i,j=0..k}` are factored by
//! banded block Cholesky, one block row at a time. The last block row
//! `(L_{k,k-N}, .., L_{k,k})` converges to `(A_N, .., A_0)`, the
//! coefficients of the factor whose determinant has no zeros in the disk.

use std::collections::VecDeque;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::hermitian_min_eigenvalue;
use crate::matrix::{mat_max_abs, zeros, CMat, LaurentMatrix, PolyMatrix};
use crate::poly::cis;
use crate::roots::RootConfig;
use crate::scalar::min_phase;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BauerConfig {
    /// Relative change of the last block row, and relative coefficient
    /// residual of `P P~ - S`, both required for convergence.
    pub tol: f64,
    /// Largest Toeplitz section (in blocks) before giving up.
    pub max_block: usize,
    /// Convergence is tested every `check_stride` block rows.
    pub check_stride: usize,
    /// Smallest admissible eigenvalue on the circle, relative to `|S|_max`.
    pub pd_floor: f64,
    pub pd_samples: usize,
}

impl Default for BauerConfig {
    fn default() -> Self {
        BauerConfig {
            tol: 1e-10,
            max_block: 4096,
            check_stride: 1,
            pd_floor: 1e-10,
            pd_samples: 64,
        }
    }
}

fn check_positive_definite(s: &LaurentMatrix, cfg: &BauerConfig) -> Result<()> {
    let floor = cfg.pd_floor * s.max_abs();
    let samples = cfg.pd_samples.max(1);
    let (theta, min_eig) = (0..samples)
        .map(|j| {
            let theta = 2.0 * PI * j as f64 / samples as f64;
            (theta, hermitian_min_eigenvalue(&s.eval(cis(theta))))
        })
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("at least one sample");
    if min_eig <= floor {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: min_eig,
            theta,
        });
    }
    Ok(())
}

fn hermitian_cholesky(a: CMat) -> Option<CMat> {
    let h = (&a + a.adjoint()) * Complex64::new(0.5, 0.0);
    h.cholesky().map(|c| c.l())
}

/// The optimal factor `S_+ = sum_{n=0}^N A_n z^n` with `S_+ S_+~ = S`,
/// normalized so that `A_0` is lower triangular with positive diagonal.
pub fn bauer_factor(s: &LaurentMatrix, cfg: &BauerConfig) -> Result<PolyMatrix> {
    s.require_para_hermitian()?;
    check_positive_definite(s, cfg)?;
    let m = s.dim();
    let n = s.degree();
    let norm = s.max_abs();
    let not_pd = |theta: f64| Error::NotPositiveDefinite {
        min_eigenvalue: f64::NAN,
        theta,
    };

    if n == 0 {
        let l = hermitian_cholesky(s.coeff(0).clone()).ok_or_else(|| not_pd(0.0))?;
        return PolyMatrix::new(vec![l]);
    }

    // Previous `n` block rows; row[d] = L_{i,i-d}, which tends to A_d.
    let mut rows: VecDeque<Vec<CMat>> = VecDeque::with_capacity(n + 1);
    let mut previous: Option<Vec<CMat>> = None;
    let (mut change, mut residual) = (f64::INFINITY, f64::INFINITY);
    let stride = cfg.check_stride.max(1);

    for i in 0..cfg.max_block {
        let mut row = vec![zeros(m); n + 1];
        for d in (1..=i.min(n)).rev() {
            let j = i - d;
            let row_j = &rows[rows.len() - d];
            let mut x = s.coeff(d as i64).clone();
            for l in i.saturating_sub(n)..j {
                x -= &row[i - l] * row_j[j - l].adjoint();
            }
            let y = row_j[0]
                .solve_lower_triangular(&x.adjoint())
                .ok_or_else(|| Error::Breakdown("singular Cholesky block".into()))?;
            row[d] = y.adjoint();
        }
        let mut diag = s.coeff(0).clone();
        for block in &row[1..] {
            diag -= block * block.adjoint();
        }
        row[0] = hermitian_cholesky(diag).ok_or_else(|| not_pd(f64::NAN))?;

        if i >= n {
            if let Some(prev) = &previous {
                let scale = row.iter().map(mat_max_abs).fold(0.0, f64::max);
                change = row
                    .iter()
                    .zip(prev)
                    .map(|(a, b)| mat_max_abs(&(a - b)))
                    .fold(0.0, f64::max)
                    / scale;
            }
            previous = Some(row.clone());
            if change < cfg.tol && i % stride == 0 {
                let factor = PolyMatrix::from_parts(m, row.clone());
                residual = factor.mul_factor().max_abs_diff(s)? / norm;
                if residual <= cfg.tol {
                    return Ok(factor);
                }
            }
        }

        rows.push_back(row);
        if rows.len() > n {
            rows.pop_front();
        }
    }
    Err(Error::NoConvergence {
        blocks: cfg.max_block,
        change,
        residual,
    })
}

/// Scalar (`m = 1`) optimal factor via the root-based minimum-phase factor.
pub fn optimal_scalar_shortcut(s: &LaurentMatrix, cfg: &RootConfig) -> Result<PolyMatrix> {
    if s.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: s.dim(),
        });
    }
    let p = min_phase(&s.entry(0, 0), cfg)?;
    PolyMatrix::scalar(&p)
}
