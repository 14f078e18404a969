//! Non-optimal spectral factors with a prescribed determinant.
//!
//! Starting from an optimal factor (all determinant zeros outside the
//! disk), every zero the target determinant keeps inside is moved there by
//! one `flip_zero` call. With simple determinant roots the result is unique
//! up to a constant right unitary factor, so enumerating the `2^L` scalar
//! choices enumerates all matrix factors.

use num_complex::Complex64;

use crate::bauer::{bauer_factor, BauerConfig};
use crate::error::{Error, Result};
use crate::flip::{flip_zero, FlipConfig, FlipPlan};
use crate::matrix::{LaurentMatrix, PolyMatrix};
use crate::poly::{LaurentPoly, Poly, TRIM_TOL};
use crate::roots::{all_simple, pair_symmetric, roots, slot_count, RootConfig, RootPair};
use crate::scalar::{FactorSelection, MAX_ENUMERATION_PAIRS};
use crate::verify::determinant_match;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FactorConfig {
    pub roots: RootConfig,
    pub bauer: BauerConfig,
    pub flip: FlipConfig,
    pub tolerances: FactorTolerances,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorTolerances {
    /// Relative mismatch allowed between `p p~` and `det S`.
    pub det_tol: f64,
    /// Relative coefficient residual `|P P~ - S| / |S|` required of results.
    pub residual_tol: f64,
    /// Relative distance within which a root of `p` is matched to a root
    /// of `det S`.
    pub match_tol: f64,
}

impl Default for FactorTolerances {
    fn default() -> Self {
        FactorTolerances {
            det_tol: 1e-8,
            residual_tol: 1e-8,
            match_tol: 1e-5,
        }
    }
}

/// A factor with prescribed determinant and the flips that produced it.
#[derive(Debug, Clone)]
pub struct DeterminantFactor {
    pub factor: PolyMatrix,
    pub plan: FlipPlan,
    /// False when `det S` has multiple roots; the factor is then one of
    /// several inequivalent factors with the same determinant.
    pub unique: bool,
}

/// Optimal factor and determinant root pairs of one density, reused for
/// every requested determinant.
#[derive(Debug, Clone)]
pub struct Factorizer {
    density: LaurentMatrix,
    det: LaurentPoly,
    pairs: Vec<RootPair>,
    optimal: PolyMatrix,
    cfg: FactorConfig,
}

impl Factorizer {
    /// Runs Bauer's method and pairs the roots of `det S`.
    pub fn new(s: &LaurentMatrix, cfg: &FactorConfig) -> Result<Self> {
        let optimal = bauer_factor(s, &cfg.bauer)?;
        Self::assemble(s, optimal, cfg)
    }

    /// Uses a caller-supplied optimal factor, which is checked to be a
    /// spectral factor of `s` with no determinant zeros in the disk.
    pub fn from_optimal(s: &LaurentMatrix, optimal: PolyMatrix, cfg: &FactorConfig) -> Result<Self> {
        s.require_para_hermitian()?;
        if optimal.dim() != s.dim() {
            return Err(Error::DimensionMismatch {
                expected: s.dim(),
                found: optimal.dim(),
            });
        }
        let residual = optimal.mul_factor().max_abs_diff(s)? / s.max_abs();
        if residual > cfg.tolerances.residual_tol {
            return Err(Error::InvalidInput(format!(
                "supplied factor does not reproduce the density (relative residual {residual:.3e})"
            )));
        }
        let d = optimal.det_poly();
        if d.degree().unwrap_or(0) > 0 {
            let limit = 1.0 - cfg.roots.boundary_tol;
            if let Some(r) = roots(&d, &cfg.roots)?.roots.iter().find(|r| r.value.norm() < limit) {
                return Err(Error::InvalidInput(format!(
                    "supplied factor is not optimal: determinant vanishes at {} inside the disk",
                    r.value
                )));
            }
        }
        Self::assemble(s, optimal, cfg)
    }

    fn assemble(s: &LaurentMatrix, optimal: PolyMatrix, cfg: &FactorConfig) -> Result<Self> {
        let det = s.det_laurent()?;
        let pairs = pair_symmetric(&det, &cfg.roots)?;
        Ok(Factorizer {
            density: s.clone(),
            det,
            pairs,
            optimal,
            cfg: *cfg,
        })
    }

    pub fn density(&self) -> &LaurentMatrix {
        &self.density
    }

    pub fn determinant(&self) -> &LaurentPoly {
        &self.det
    }

    pub fn pairs(&self) -> &[RootPair] {
        &self.pairs
    }

    pub fn optimal(&self) -> &PolyMatrix {
        &self.optimal
    }

    pub fn is_simple(&self) -> bool {
        all_simple(&self.pairs)
    }

    /// Number of selection slots `L` (pairs counted with multiplicity).
    pub fn slot_count(&self) -> usize {
        slot_count(&self.pairs)
    }

    /// Flips that turn the optimal factor into one whose determinant has
    /// the inside roots chosen by `sel`.
    pub fn plan_for_selection(&self, sel: &FactorSelection) -> Result<FlipPlan> {
        if sel.len() != self.slot_count() {
            return Err(Error::SelectionLength {
                expected: self.slot_count(),
                found: sel.len(),
            });
        }
        let mut from = Vec::new();
        let mut bits = sel.bits().iter();
        for pair in &self.pairs {
            for _ in 0..pair.multiplicity {
                if *bits.next().expect("length checked") {
                    from.push(pair.outside);
                }
            }
        }
        Ok(FlipPlan::new(&from, self.cfg.roots.boundary_tol)?.sorted())
    }

    /// Flips needed for a factor with `det P = c z^k p`.
    pub fn plan_for_determinant(&self, p: &Poly) -> Result<FlipPlan> {
        let core = strip_low_zeros(p)?;
        let defect = core.times_tilde().max_abs_diff(&self.det) / self.det.max_abs();
        if !(defect <= self.cfg.tolerances.det_tol) {
            return Err(Error::DeterminantMismatch { defect });
        }
        let mut from = Vec::new();
        if core.degree().unwrap_or(0) > 0 {
            let found = roots(&core, &self.cfg.roots)?;
            let tol = self.cfg.tolerances.match_tol;
            let near = |a: Complex64, b: Complex64| (a - b).norm() <= tol * (1.0 + b.norm());
            for pair in &self.pairs {
                let count = |target| -> usize {
                    found
                        .roots
                        .iter()
                        .filter(|r| near(r.value, target))
                        .map(|r| r.multiplicity)
                        .sum()
                };
                let (inside, outside) = (count(pair.inside), count(pair.outside));
                if inside + outside != pair.multiplicity {
                    return Err(Error::DeterminantMismatch { defect });
                }
                from.extend(std::iter::repeat_n(pair.outside, inside));
            }
        }
        Ok(FlipPlan::new(&from, self.cfg.roots.boundary_tol)?.sorted())
    }

    /// Applies a plan to the optimal factor and verifies the result.
    pub fn apply(&self, plan: &FlipPlan) -> Result<PolyMatrix> {
        let flip_cfg = FlipConfig {
            allow_multiple: self.cfg.flip.allow_multiple || !self.is_simple(),
            ..self.cfg.flip
        };
        let mut p = self.optimal.clone();
        for step in plan.steps() {
            p = flip_zero(&p, step.from, &flip_cfg)?;
        }
        let residual = p.mul_factor().max_abs_diff(&self.density)? / self.density.max_abs();
        if !(residual <= self.cfg.tolerances.residual_tol) {
            return Err(Error::Breakdown(format!(
                "flipped factor lost accuracy (relative residual {residual:.3e})"
            )));
        }
        Ok(p)
    }

    /// A factor whose determinant is `c z^k p` with `|c| = 1`.
    pub fn with_determinant(&self, p: &Poly) -> Result<DeterminantFactor> {
        let plan = self.plan_for_determinant(p)?;
        let factor = self.apply(&plan)?;
        let check = determinant_match(&factor.det_poly(), p);
        if !check.agrees(1e-7) {
            return Err(Error::Breakdown(format!(
                "determinant of the flipped factor drifted (residual {:.3e})",
                check.residual
            )));
        }
        Ok(DeterminantFactor {
            factor,
            plan,
            unique: self.is_simple(),
        })
    }

    pub fn with_selection(&self, sel: &FactorSelection) -> Result<PolyMatrix> {
        self.apply(&self.plan_for_selection(sel)?)
    }

    /// All `2^L` factors, ordered by selection index. Index 0 is the
    /// optimal factor.
    pub fn enumerate(&self) -> Result<Vec<(FactorSelection, PolyMatrix)>> {
        self.enumerate_limited(MAX_ENUMERATION_PAIRS)
    }

    /// As `enumerate`, refusing more than `max_pairs` pairs.
    pub fn enumerate_limited(&self, max_pairs: usize) -> Result<Vec<(FactorSelection, PolyMatrix)>> {
        if !self.is_simple() {
            return Err(Error::SimpleRootsRequired);
        }
        let len = self.slot_count();
        let limit = max_pairs.min(MAX_ENUMERATION_PAIRS);
        if len > limit {
            return Err(Error::TooLarge {
                what: "root pairs",
                count: len,
                limit,
            });
        }
        (0..1u64 << len)
            .map(|i| {
                let sel = FactorSelection::from_index(i, len);
                self.with_selection(&sel).map(|p| (sel, p))
            })
            .collect()
    }
}

/// Removes the factor `z^k` carried by negligible low-order coefficients.
fn strip_low_zeros(p: &Poly) -> Result<Poly> {
    let scale = p.max_abs();
    if scale == 0.0 {
        return Err(Error::InvalidInput("determinant target is the zero polynomial".into()));
    }
    let first = p
        .coeffs()
        .iter()
        .position(|c| c.norm() > TRIM_TOL * scale)
        .expect("nonzero polynomial");
    Poly::new(p.coeffs()[first..].to_vec())
}

/// A factor of `s` with `det P = c z^k p`, `|c| = 1`.
pub fn factor_with_determinant(s: &LaurentMatrix, p: &Poly, cfg: &FactorConfig) -> Result<DeterminantFactor> {
    Factorizer::new(s, cfg)?.with_determinant(p)
}

/// All `2^L` factors of `s`, which must have simple determinant roots.
pub fn enumerate_matrix_factors(
    s: &LaurentMatrix,
    cfg: &FactorConfig,
) -> Result<Vec<(FactorSelection, PolyMatrix)>> {
    Factorizer::new(s, cfg)?.enumerate()
}
