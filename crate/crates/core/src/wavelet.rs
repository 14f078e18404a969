//! Daubechies lowpass filters as spectral factors of the halfband product
//! filter, with a choice of root per free reflection pair.
//!
//! The product filter is `2 ((2 + z + 1/z)/4)^K R_K(y)` with
//! `y = (2 - z - 1/z)/4` and `R_K(y) = sum_{j<K} C(K-1+j, j) y^j`. The
//! `2K`-fold zero at `z = -1` is split evenly, so only the `K - 1` root pairs
//! of the remainder are selected.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{cis, LaurentPoly, Poly};
use crate::roots::RootConfig;
use crate::scalar::{group_delay, group_delay_variance, FactorSelection, ScalarFactorizer};

pub const MAX_ORDER: usize = 12;

fn check_order(k: usize) -> Result<()> {
    if !(1..=MAX_ORDER).contains(&k) {
        return Err(Error::InvalidInput(format!("order K = {k} outside 1..={MAX_ORDER}")));
    }
    Ok(())
}

fn binomial(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `2 R_K((2 - z - 1/z)/4)` as a Laurent polynomial of half-degree `K - 1`.
pub fn daubechies_remainder(k: usize) -> Result<LaurentPoly> {
    check_order(k)?;
    let y = LaurentPoly::from_real(&[-0.25, 0.5, -0.25])?;
    let mut power = LaurentPoly::constant(Complex64::new(1.0, 0.0));
    let mut sum = LaurentPoly::constant(Complex64::new(0.0, 0.0));
    for j in 0..k {
        let term = power.scale(Complex64::new(2.0 * binomial((k - 1 + j) as u64, j as u64), 0.0));
        sum = add(&sum, &term);
        power = &power * &y;
    }
    Ok(sum)
}

fn add(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    let half = a.half_degree().max(b.half_degree()) as i64;
    let coeffs: Vec<Complex64> = (-half..=half).map(|n| a.coeff(n) + b.coeff(n)).collect();
    LaurentPoly::new(coeffs).expect("odd length")
}

/// The order-`K` product filter: value 2 at `z = 1`, zero of order `2K` at
/// `z = -1`, half-degree `2K - 1`.
pub fn daubechies_product(k: usize) -> Result<LaurentPoly> {
    let mut p = daubechies_remainder(k)?;
    let lowpass = LaurentPoly::from_real(&[0.25, 0.5, 0.25])?;
    for _ in 0..k {
        p = &p * &lowpass;
    }
    Ok(p)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DesignMode {
    /// All free roots outside the disk.
    MinPhase,
    /// Smallest group-delay variance over all selections.
    MidPhase,
    /// Inside and outside root counts as equal as possible.
    Balanced,
    Selection(FactorSelection),
}

/// Root data of the remainder, shared by all designs of one order.
#[derive(Debug, Clone)]
pub struct FilterDesigner {
    order: usize,
    remainder: ScalarFactorizer,
}

impl FilterDesigner {
    pub fn new(k: usize, cfg: &RootConfig) -> Result<Self> {
        let remainder = ScalarFactorizer::new(&daubechies_remainder(k)?, cfg)?;
        Ok(FilterDesigner { order: k, remainder })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of free root pairs, `K - 1`.
    pub fn free_pairs(&self) -> usize {
        self.remainder.slot_count()
    }

    /// Filter `h` for one selection, normalized to `h(1) = sqrt(2)`.
    pub fn filter(&self, sel: &FactorSelection) -> Result<Poly> {
        let q = self.remainder.factor(sel)?;
        let half = Poly::from_real(&[0.5, 0.5])?;
        let mut h = q;
        for _ in 0..self.order {
            h = &h * &half;
        }
        let at_one = h.eval(Complex64::new(1.0, 0.0));
        Ok(h.scale(at_one.conj() / at_one.norm()))
    }

    /// All `2^(K-1)` filters by selection index.
    pub fn enumerate(&self) -> Result<Vec<(FactorSelection, Poly)>> {
        let len = self.free_pairs();
        (0..1u64 << len)
            .map(|i| {
                let sel = FactorSelection::from_index(i, len);
                self.filter(&sel).map(|h| (sel, h))
            })
            .collect()
    }

    pub fn design(&self, mode: &DesignMode) -> Result<(FactorSelection, Poly)> {
        let len = self.free_pairs();
        let sel = match mode {
            DesignMode::MinPhase => FactorSelection::all_outside(len),
            DesignMode::Selection(sel) => sel.clone(),
            DesignMode::MidPhase | DesignMode::Balanced => {
                let mut best: Option<(f64, FactorSelection)> = None;
                for (sel, h) in self.enumerate()? {
                    let score = match mode {
                        DesignMode::MidPhase => symmetry_score(&h),
                        _ => (2.0 * sel.inside_count() as f64 - len as f64).abs(),
                    };
                    if best.as_ref().is_none_or(|(b, _)| score < b - 1e-9 * b.abs().max(1.0)) {
                        best = Some((score, sel));
                    }
                }
                best.expect("at least one selection").1
            }
        };
        let h = self.filter(&sel)?;
        Ok((sel, h))
    }
}

/// Lowpass filter of order `K` chosen by `mode`.
pub fn design_filter(k: usize, mode: &DesignMode, cfg: &RootConfig) -> Result<(FactorSelection, Poly)> {
    FilterDesigner::new(k, cfg)?.design(mode)
}

/// Group-delay variance over the circle; zero for linear-phase filters.
pub fn symmetry_score(h: &Poly) -> f64 {
    group_delay_variance(h)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResponseSample {
    pub theta: f64,
    pub magnitude: f64,
    pub group_delay: f64,
}

/// Magnitude and group delay at `n` midpoints of `[0, pi]`.
pub fn frequency_response(h: &Poly, n: usize) -> Vec<ResponseSample> {
    (0..n)
        .map(|j| {
            let theta = PI * (j as f64 + 0.5) / n as f64;
            ResponseSample {
                theta,
                magnitude: h.eval(cis(theta)).norm(),
                group_delay: group_delay(h, theta),
            }
        })
        .collect()
}

/// Reference db2 lowpass coefficients in ascending powers of `z`.
pub fn db2_reference() -> [f64; 4] {
    let s3 = 3f64.sqrt();
    let d = 4.0 * SQRT_2;
    [(1.0 + s3) / d, (3.0 + s3) / d, (3.0 - s3) / d, (1.0 - s3) / d]
}
