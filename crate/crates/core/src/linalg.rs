//! Small dense helpers on top of nalgebra.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::matrix::{mat_max_abs, CMat};

/// Singular values in descending order.
pub fn singular_values(a: &CMat) -> Vec<f64> {
    let mut s: Vec<f64> = a.clone().singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Singular values (descending) and the right singular vector of the smallest one.
pub fn smallest_singular_pair(a: &CMat) -> (Vec<f64>, DVector<Complex64>) {
    let m = a.ncols();
    let svd = a.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested V^*");
    let (idx, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(y.1))
        .expect("nonempty matrix");
    let v = DVector::from_fn(m, |j, _| v_t[(idx, j)].conj());
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    (s, v)
}

/// Smallest eigenvalue of the Hermitian part `(A + A^*)/2`.
pub fn hermitian_min_eigenvalue(a: &CMat) -> f64 {
    let h = (a + a.adjoint()) * Complex64::new(0.5, 0.0);
    h.symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Largest entry of `U^* U - I`.
pub fn unitary_defect(u: &CMat) -> f64 {
    let n = u.ncols();
    mat_max_abs(&(u.adjoint() * u - CMat::identity(n, n)))
}
