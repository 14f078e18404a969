//! Polynomial root finding (Aberth–Ehrlich) and reflection pairing of the
//! roots of para-Hermitian Laurent polynomials.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{cis, LaurentPoly, Poly};

const EPS: f64 = f64::EPSILON;

/// Tolerances for root finding and pairing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootConfig {
    /// Accepted residual `|p(r)| <= residual_tol * |p|_max * max(1,|r|)^deg`.
    pub residual_tol: f64,
    /// Roots closer than `cluster_tol * (1 + |r|)` are always merged.
    pub cluster_tol: f64,
    /// Roots with `| |r| - 1 | < boundary_tol` count as lying on the circle.
    pub boundary_tol: f64,
    /// Relative distance allowed between a root and the reflection of its partner.
    pub pairing_tol: f64,
    pub max_iterations: usize,
}

impl Default for RootConfig {
    fn default() -> Self {
        RootConfig {
            residual_tol: 1e-10,
            cluster_tol: 1e-8,
            boundary_tol: 1e-6,
            pairing_tol: 1e-6,
            max_iterations: 500,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Root {
    pub value: Complex64,
    pub multiplicity: usize,
}

/// Distinct roots with multiplicities, sorted by `(|r|, arg r)`.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct RootSet {
    pub roots: Vec<Root>,
}

impl RootSet {
    pub fn degree(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    /// Every root repeated according to its multiplicity.
    pub fn expanded(&self) -> Vec<Complex64> {
        self.roots
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.value, r.multiplicity))
            .collect()
    }

    pub fn is_simple(&self) -> bool {
        self.roots.iter().all(|r| r.multiplicity == 1)
    }
}

/// A root `inside` of modulus below one and its reflection `1/conj(inside)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootPair {
    pub inside: Complex64,
    pub outside: Complex64,
    pub multiplicity: usize,
}

impl RootPair {
    pub fn new(inside: Complex64, multiplicity: usize) -> Self {
        RootPair {
            inside,
            outside: reflect(inside),
            multiplicity,
        }
    }
}

/// Reflection through the unit circle, `1/conj(z)`.
pub fn reflect(z: Complex64) -> Complex64 {
    Complex64::new(1.0, 0.0) / z.conj()
}

fn order_key(z: Complex64) -> (f64, f64) {
    let arg = z.arg();
    (z.norm(), if arg < 0.0 { arg + 2.0 * PI } else { arg })
}

fn sort_by_modulus_arg<T>(items: &mut [T], key: impl Fn(&T) -> Complex64) {
    items.sort_by(|a, b| {
        let (ma, aa) = order_key(key(a));
        let (mb, ab) = order_key(key(b));
        ma.total_cmp(&mb).then(aa.total_cmp(&ab))
    });
}

/// All roots of `p` with multiplicities.
pub fn roots(p: &Poly, cfg: &RootConfig) -> Result<RootSet> {
    let degree = p
        .degree()
        .ok_or_else(|| Error::InvalidInput("the zero polynomial has no finite root set".into()))?;
    let zeros_at_origin = p.low_order_zeros();
    let reduced = Poly::from_exact(p.coeffs()[zeros_at_origin..].to_vec());
    let mut found = if reduced.degree().unwrap_or(0) > 0 {
        aberth(reduced.coeffs(), cfg.max_iterations)?
    } else {
        Vec::new()
    };

    let scale = p.max_abs();
    let residuals: Vec<f64> = found.iter().map(|&r| reduced.eval(r).norm()).collect();
    let bad = found.iter().zip(&residuals).any(|(r, res)| {
        *res > cfg.residual_tol * scale * r.norm().max(1.0).powi(degree as i32)
    });
    if bad {
        return Err(Error::RootsNoConvergence {
            iterations: cfg.max_iterations,
            best: found,
            residuals,
        });
    }

    let mut set = cluster(&reduced, &mut found, cfg);
    if zeros_at_origin > 0 {
        set.push(Root {
            value: Complex64::new(0.0, 0.0),
            multiplicity: zeros_at_origin,
        });
    }
    sort_by_modulus_arg(&mut set, |r| r.value);
    Ok(RootSet { roots: set })
}

/// Returns `(p/p', converged)` evaluated stably for either side of the unit circle.
fn newton_ratio(a: &[Complex64], z: Complex64) -> (Complex64, bool) {
    let n = a.len() - 1;
    let zero = Complex64::new(0.0, 0.0);
    if z.norm() <= 1.0 {
        let r = z.norm();
        let (mut p, mut dp, mut bound) = (zero, zero, 0.0);
        for c in a.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
            bound = bound * r + c.norm();
        }
        let converged = p.norm() <= 4.0 * EPS * bound;
        (p / dp, converged)
    } else {
        // p(z) = z^n q(w) with w = 1/z and q the reversed polynomial.
        let w = Complex64::new(1.0, 0.0) / z;
        let r = w.norm();
        let (mut q, mut dq, mut bound) = (zero, zero, 0.0);
        for c in a.iter() {
            dq = dq * w + q;
            q = q * w + c;
            bound = bound * r + c.norm();
        }
        let converged = q.norm() <= 4.0 * EPS * bound;
        (z * q / (q * n as f64 - w * dq), converged)
    }
}

/// Starting points on circles whose radii come from the upper convex hull
/// of `(k, log |a_k|)`.
fn initial_guesses(a: &[Complex64]) -> Vec<Complex64> {
    let n = a.len() - 1;
    let pts: Vec<(usize, f64)> = a
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > 0.0)
        .map(|(k, c)| (k, c.norm().ln()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (k1, y1) = hull[hull.len() - 2];
            let (k2, y2) = hull[hull.len() - 1];
            let cross = (k2 as f64 - k1 as f64) * (pt.1 - y1) - (y2 - y1) * (pt.0 as f64 - k1 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut out = Vec::with_capacity(n);
    for win in hull.windows(2) {
        let (i, yi) = win[0];
        let (j, yj) = win[1];
        let count = j - i;
        let radius = ((yi - yj) / count as f64).exp();
        for l in 0..count {
            let angle = 2.0 * PI * l as f64 / count as f64 + 2.0 * PI * i as f64 / n as f64 + 0.4;
            out.push(cis(angle) * radius);
        }
    }
    out
}

/// Gauss–Seidel Aberth–Ehrlich iteration on a polynomial with nonzero
/// constant and leading coefficients.
fn aberth(a: &[Complex64], max_iterations: usize) -> Result<Vec<Complex64>> {
    let n = a.len() - 1;
    if n == 1 {
        return Ok(vec![-a[0] / a[1]]);
    }
    let mut z = initial_guesses(a);
    let mut done = vec![false; n];
    for _ in 0..max_iterations {
        let mut all_done = true;
        for k in 0..n {
            if done[k] {
                continue;
            }
            let (ratio, converged) = newton_ratio(a, z[k]);
            if converged {
                done[k] = true;
                continue;
            }
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| Complex64::new(1.0, 0.0) / (z[k] - z[j]))
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.re.is_finite() && step.im.is_finite() {
                z[k] -= step;
            }
            if step.norm() <= EPS * z[k].norm() {
                done[k] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            return Ok(z);
        }
    }
    let p = Poly::from_exact(a.to_vec());
    let residuals = z.iter().map(|&r| p.eval(r).norm()).collect();
    Err(Error::RootsNoConvergence {
        iterations: max_iterations,
        best: z,
        residuals,
    })
}

/// Merges numerically coincident roots.
///
/// A group of `k` approximations around a centroid `c` is accepted as one
/// root of multiplicity `k` when its radius is within `cluster_tol`, or
/// within the perturbation radius `(eps |p|_c / |p^(k)(c)/k!|)^(1/k)` that
/// rounding alone produces for a `k`-fold root.
fn cluster(p: &Poly, found: &mut Vec<Complex64>, cfg: &RootConfig) -> Vec<Root> {
    let mut remaining = std::mem::take(found);
    let mut out = Vec::new();
    while let Some(seed) = remaining.first().copied() {
        let mut by_distance: Vec<usize> = (0..remaining.len()).collect();
        by_distance.sort_by(|&i, &j| {
            (remaining[i] - seed).norm().total_cmp(&(remaining[j] - seed).norm())
        });
        let reach = 0.05 * (1.0 + seed.norm());
        let mut best = 1;
        let mut center = seed;
        for k in 2..=by_distance.len() {
            if (remaining[by_distance[k - 1]] - seed).norm() > reach {
                break;
            }
            let group = &by_distance[..k];
            let c = group.iter().map(|&i| remaining[i]).sum::<Complex64>() / k as f64;
            let radius = group
                .iter()
                .map(|&i| (remaining[i] - c).norm())
                .fold(0.0, f64::max);
            let taylor = p.taylor_at(c);
            let tk = taylor.get(k).map(|t| t.norm()).unwrap_or(0.0);
            let noise = if tk > 0.0 {
                (64.0 * EPS * p.eval_abs(c) / tk).powf(1.0 / k as f64)
            } else {
                f64::INFINITY
            };
            if radius <= cfg.cluster_tol * (1.0 + c.norm()) || radius <= noise {
                best = k;
                center = c;
            }
        }
        let mut members: Vec<usize> = by_distance[..best].to_vec();
        members.sort_unstable_by(|a, b| b.cmp(a));
        for i in members {
            remaining.swap_remove(i);
        }
        out.push(Root {
            value: if best > 1 { polish_multiple(p, center, best) } else { center },
            multiplicity: best,
        });
    }
    out
}

/// Newton on `p^(k-1)`, which has a simple root at a `k`-fold root of `p`.
fn polish_multiple(p: &Poly, start: Complex64, k: usize) -> Complex64 {
    let mut q = p.clone();
    for _ in 1..k {
        q = q.derivative();
    }
    let dq = q.derivative();
    let mut z = start;
    for _ in 0..8 {
        let step = q.eval(z) / dq.eval(z);
        if !(step.re.is_finite() && step.im.is_finite()) {
            break;
        }
        let next = z - step;
        if (next - start).norm() > 1e-3 * (1.0 + start.norm()) {
            break;
        }
        z = next;
        if step.norm() <= 4.0 * EPS * z.norm().max(1.0) {
            break;
        }
    }
    z
}

/// Roots of a para-Hermitian Laurent polynomial split into reflection pairs
/// and roots on the unit circle.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SymmetricRoots {
    pub pairs: Vec<RootPair>,
    pub circle: Vec<Root>,
}

fn check_nonnegative(s: &LaurentPoly) -> Result<()> {
    let samples = 64;
    let scale = s.max_abs();
    for j in 0..samples {
        let theta = 2.0 * PI * j as f64 / samples as f64;
        let v = s.eval(cis(theta));
        if v.re < -1e-9 * scale || v.im.abs() > 1e-9 * scale {
            return Err(Error::InvalidInput(format!(
                "Laurent polynomial is not nonnegative on the unit circle (value {v} at theta = {theta:.4})"
            )));
        }
    }
    Ok(())
}

/// Classifies the roots of `z^L s(z)` into reflection pairs and circle roots.
pub fn split_symmetric(s: &LaurentPoly, cfg: &RootConfig) -> Result<SymmetricRoots> {
    if !s.is_para_hermitian(1e-10) {
        return Err(Error::NotParaHermitian {
            defect: s.para_hermitian_defect(),
        });
    }
    check_nonnegative(s)?;
    let s = s.trimmed(crate::poly::TRIM_TOL);
    let half = s.half_degree();
    if half == 0 {
        return Ok(SymmetricRoots::default());
    }
    let set = roots(&s.to_shifted_poly(), cfg)?;

    let mut circle = Vec::new();
    let mut inner = Vec::new();
    let mut outer = Vec::new();
    for r in set.roots {
        let modulus = r.value.norm();
        if (modulus - 1.0).abs() < cfg.boundary_tol {
            if r.multiplicity % 2 == 1 {
                return Err(Error::OddCircleMultiplicity {
                    root: r.value,
                    multiplicity: r.multiplicity,
                });
            }
            circle.push(r);
        } else if modulus < 1.0 {
            inner.push(r);
        } else {
            outer.push(r);
        }
    }

    let mut pairs = Vec::new();
    for r in inner {
        let target = reflect(r.value);
        let (idx, dist) = outer
            .iter()
            .enumerate()
            .map(|(i, o)| (i, (o.value - target).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .ok_or(Error::UnpairedRoot { root: r.value })?;
        let partner = outer[idx];
        if dist > cfg.pairing_tol * (1.0 + target.norm()) || partner.multiplicity != r.multiplicity {
            return Err(Error::UnpairedRoot { root: r.value });
        }
        outer.swap_remove(idx);
        let inside = (r.value + reflect(partner.value)) * 0.5;
        pairs.push(RootPair::new(inside, r.multiplicity));
    }
    if let Some(o) = outer.first() {
        return Err(Error::UnpairedRoot { root: o.value });
    }
    sort_by_modulus_arg(&mut pairs, |p| p.inside);
    sort_by_modulus_arg(&mut circle, |r| r.value);
    Ok(SymmetricRoots { pairs, circle })
}

/// Reflection pairs `(a, 1/conj(a))` of the roots of a para-Hermitian
/// Laurent polynomial that is nonnegative on the unit circle.
///
/// Fails with `RootOnCircle` when any root lies within `boundary_tol` of the circle.
pub fn pair_symmetric(s: &LaurentPoly, cfg: &RootConfig) -> Result<Vec<RootPair>> {
    let split = split_symmetric(s, cfg)?;
    if let Some(r) = split.circle.first() {
        return Err(Error::RootOnCircle {
            root: r.value,
            boundary_tol: cfg.boundary_tol,
        });
    }
    Ok(split.pairs)
}

pub fn all_simple(pairs: &[RootPair]) -> bool {
    pairs.iter().all(|p| p.multiplicity == 1)
}

/// Total number of pair slots, counting multiplicity.
pub fn slot_count(pairs: &[RootPair]) -> usize {
    pairs.iter().map(|p| p.multiplicity).sum()
}
