//! Random test instances with planted determinant roots.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::matrix::{CMat, LaurentMatrix, PolyMatrix};
use crate::roots::reflect;

/// Haar-distributed unitary matrix (QR of a complex Gaussian matrix with
/// the phases of `R`'s diagonal removed).
pub fn random_unitary<R: Rng + ?Sized>(m: usize, rng: &mut R) -> CMat {
    let g = DMatrix::from_fn(m, m, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..m {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..m {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// `count` points with modulus in `[min_mod, max_mod]`, pairwise at least
/// `min_sep` apart.
pub fn random_inside_roots<R: Rng + ?Sized>(
    count: usize,
    min_mod: f64,
    max_mod: f64,
    min_sep: f64,
    rng: &mut R,
) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = Vec::with_capacity(count);
    while out.len() < count {
        let r = rng.random_range(min_mod..=max_mod);
        let z = Complex64::from_polar(r, rng.random_range(0.0..2.0 * PI));
        if out.iter().all(|w| (w - z).norm() >= min_sep) {
            out.push(z);
        }
    }
    out
}

/// `G * prod_k (diag(z - r_k) W_k)` where `G` is a random well-conditioned
/// matrix and `W_k` random unitaries; `det` has exactly the roots given.
///
/// `roots.len()` must equal `m * degree`.
pub fn planted_factor<R: Rng + ?Sized>(
    m: usize,
    degree: usize,
    roots: &[Complex64],
    rng: &mut R,
) -> Result<PolyMatrix> {
    assert_eq!(roots.len(), m * degree, "need m * degree planted roots");
    let scales = DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            Complex64::new(rng.random_range(0.5..2.0), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let g = random_unitary(m, rng) * scales * random_unitary(m, rng);
    let mut q = PolyMatrix::constant(g)?;
    for k in 0..degree {
        let lin = &roots[k * m..(k + 1) * m];
        let c0 = DMatrix::from_fn(m, m, |i, j| if i == j { -lin[i] } else { Complex64::new(0.0, 0.0) });
        let step = PolyMatrix::new(vec![c0, CMat::identity(m, m)])?;
        q = q.mul(&step)?.mul_right(&random_unitary(m, rng))?;
    }
    Ok(q)
}

/// A random density `S = Q Q~` together with its planted factor.
#[derive(Debug, Clone)]
pub struct PlantedInstance {
    pub density: LaurentMatrix,
    pub factor: PolyMatrix,
    /// Roots of `det factor`.
    pub roots: Vec<Complex64>,
}

/// Planted instance with `m * degree` determinant roots of modulus in
/// `[0.1, 0.9]`; each root is reflected outside the disk with probability
/// `outside_prob`.
pub fn planted_instance<R: Rng + ?Sized>(
    m: usize,
    degree: usize,
    outside_prob: f64,
    rng: &mut R,
) -> Result<PlantedInstance> {
    let inside = random_inside_roots(m * degree, 0.1, 0.9, 0.05, rng);
    let roots: Vec<Complex64> = inside
        .into_iter()
        .map(|r| if rng.random_bool(outside_prob) { reflect(r) } else { r })
        .collect();
    let factor = planted_factor(m, degree, &roots, rng)?;
    Ok(PlantedInstance {
        density: factor.mul_factor(),
        factor,
        roots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unitary_defect;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = StdRng::seed_from_u64(7);
        for m in 1..5 {
            assert!(unitary_defect(&random_unitary(m, &mut rng)) < 1e-14);
        }
    }

    #[test]
    fn planted_roots_are_determinant_roots() {
        let mut rng = StdRng::seed_from_u64(11);
        let inst = planted_instance(3, 2, 0.5, &mut rng).unwrap();
        assert_eq!(inst.factor.degree(), 2);
        let d = inst.factor.det_poly();
        assert_eq!(d.degree(), Some(6));
        for r in &inst.roots {
            assert!(d.eval(*r).norm() < 1e-10 * d.eval_abs(*r));
        }
    }
}
