//! Scalar Fejér–Riesz factorization with an arbitrary choice of root per
//! reflection pair.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{cis, LaurentPoly, Poly};
use crate::roots::{split_symmetric, RootConfig, RootPair, SymmetricRoots};

/// Largest number of pairs `enumerate_scalar` will expand (2^24 factors).
pub const MAX_ENUMERATION_PAIRS: usize = 24;

/// Circle samples used by the phase-nonlinearity score.
pub const GROUP_DELAY_SAMPLES: usize = 256;

/// Per-slot choice of root: `true` takes the inside root `a`, `false` the
/// outside root `1/conj(a)`. Slots follow the pair order, with a pair of
/// multiplicity `k` occupying `k` consecutive slots.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FactorSelection {
    bits: Vec<bool>,
}

impl FactorSelection {
    pub fn new(bits: Vec<bool>) -> Self {
        FactorSelection { bits }
    }

    pub fn all_outside(len: usize) -> Self {
        FactorSelection {
            bits: vec![false; len],
        }
    }

    /// Selection number `index` in lexicographic order: slot 0 is the most
    /// significant bit.
    pub fn from_index(index: u64, len: usize) -> Self {
        FactorSelection {
            bits: (0..len).map(|j| (index >> (len - 1 - j)) & 1 == 1).collect(),
        }
    }

    pub fn index(&self) -> u64 {
        self.bits.iter().fold(0, |acc, &b| (acc << 1) | b as u64)
    }

    /// Parses a string of `0`/`1` characters.
    pub fn parse(s: &str) -> Result<Self> {
        s.chars()
            .map(|ch| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidInput(format!("selection bit must be 0 or 1, got {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(FactorSelection::new)
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn inside_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

impl fmt::Display for FactorSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// How `mid_phase` ranks candidate factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PhaseMetric {
    /// Variance of the group delay over the unit circle.
    #[default]
    GroupDelayVariance,
    /// Smallest imbalance between inside and outside root counts.
    BalancedCount,
}

/// Root data of a nonnegative para-Hermitian Laurent polynomial, prepared
/// once and reused for every selection.
#[derive(Clone, Debug)]
pub struct ScalarFactorizer {
    roots: SymmetricRoots,
    anchor: Complex64,
    anchor_value: f64,
    samples: Vec<(Complex64, f64)>,
}

impl ScalarFactorizer {
    pub fn new(s: &LaurentPoly, cfg: &RootConfig) -> Result<Self> {
        let roots = split_symmetric(s, cfg)?;
        let samples: Vec<(Complex64, f64)> = (0..64)
            .map(|j| {
                let z = cis(2.0 * PI * j as f64 / 64.0);
                (z, s.eval(z).re)
            })
            .collect();
        let &(anchor, anchor_value) = samples
            .iter()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty samples");
        if anchor_value <= 0.0 {
            return Err(Error::InvalidInput("Laurent polynomial vanishes on the unit circle".into()));
        }
        Ok(ScalarFactorizer {
            roots,
            anchor,
            anchor_value,
            samples,
        })
    }

    pub fn pairs(&self) -> &[RootPair] {
        &self.roots.pairs
    }

    pub fn symmetric_roots(&self) -> &SymmetricRoots {
        &self.roots
    }

    pub fn slot_count(&self) -> usize {
        crate::roots::slot_count(&self.roots.pairs)
    }

    /// Roots of the factor picked by `sel`, circle roots contributing half
    /// their multiplicity.
    pub fn selected_roots(&self, sel: &FactorSelection) -> Result<Vec<Complex64>> {
        if sel.len() != self.slot_count() {
            return Err(Error::SelectionLength {
                expected: self.slot_count(),
                found: sel.len(),
            });
        }
        let mut bits = sel.bits().iter();
        let mut out = Vec::new();
        for pair in &self.roots.pairs {
            for _ in 0..pair.multiplicity {
                let inside = *bits.next().expect("length checked");
                out.push(if inside { pair.inside } else { pair.outside });
            }
        }
        for r in &self.roots.circle {
            out.extend(std::iter::repeat_n(r.value, r.multiplicity / 2));
        }
        Ok(out)
    }

    /// `c * prod (z - r)` with `c > 0` fixed so that `|p|^2 = s` on the circle.
    pub fn factor(&self, sel: &FactorSelection) -> Result<Poly> {
        let roots = self.selected_roots(sel)?;
        let monic = Poly::from_roots(&roots, Complex64::new(1.0, 0.0));
        let denom = monic.eval(self.anchor).norm_sqr();
        let c = (self.anchor_value / denom).sqrt();
        let p = monic.scale(Complex64::new(c, 0.0));
        let worst = self
            .samples
            .iter()
            .map(|&(z, v)| (p.eval(z).norm_sqr() - v).abs())
            .fold(0.0, f64::max);
        if worst > 1e-7 * self.anchor_value {
            return Err(Error::Breakdown(format!(
                "scalar factor misses |p|^2 = s by {worst:.3e}"
            )));
        }
        Ok(p)
    }
}

/// The spectral factor of `s` whose roots are chosen by `sel`; the leading
/// coefficient is positive real.
pub fn scalar_factor(s: &LaurentPoly, sel: &FactorSelection, cfg: &RootConfig) -> Result<Poly> {
    ScalarFactorizer::new(s, cfg)?.factor(sel)
}

/// All `2^L` spectral factors of `s`, ordered by selection index.
pub fn enumerate_scalar(s: &LaurentPoly, cfg: &RootConfig) -> Result<Vec<(FactorSelection, Poly)>> {
    let fz = simple_factorizer(s, cfg)?;
    let len = fz.slot_count();
    (0..1u64 << len)
        .map(|i| {
            let sel = FactorSelection::from_index(i, len);
            fz.factor(&sel).map(|p| (sel, p))
        })
        .collect()
}

fn simple_factorizer(s: &LaurentPoly, cfg: &RootConfig) -> Result<ScalarFactorizer> {
    let fz = ScalarFactorizer::new(s, cfg)?;
    if let Some(r) = fz.roots.circle.first() {
        return Err(Error::RootOnCircle {
            root: r.value,
            boundary_tol: cfg.boundary_tol,
        });
    }
    if !crate::roots::all_simple(fz.pairs()) {
        return Err(Error::SimpleRootsRequired);
    }
    if fz.slot_count() > MAX_ENUMERATION_PAIRS {
        return Err(Error::TooLarge {
            what: "root pairs",
            count: fz.slot_count(),
            limit: MAX_ENUMERATION_PAIRS,
        });
    }
    Ok(fz)
}

/// The factor with no roots in the open unit disk.
pub fn min_phase(s: &LaurentPoly, cfg: &RootConfig) -> Result<Poly> {
    let fz = ScalarFactorizer::new(s, cfg)?;
    fz.factor(&FactorSelection::all_outside(fz.slot_count()))
}

/// Among all `2^L` factors, the one with the most nearly linear phase.
///
/// Scores within a relative `1e-9` of each other count as ties and the
/// lexicographically smaller selection wins.
pub fn mid_phase(
    s: &LaurentPoly,
    metric: PhaseMetric,
    cfg: &RootConfig,
) -> Result<(FactorSelection, Poly)> {
    let fz = simple_factorizer(s, cfg)?;
    let len = fz.slot_count();
    let mut best: Option<(f64, FactorSelection, Poly)> = None;
    for i in 0..1u64 << len {
        let sel = FactorSelection::from_index(i, len);
        let p = fz.factor(&sel)?;
        let score = match metric {
            PhaseMetric::GroupDelayVariance => group_delay_variance(&p),
            PhaseMetric::BalancedCount => (2.0 * sel.inside_count() as f64 - len as f64).abs(),
        };
        let better = match &best {
            None => true,
            Some((b, _, _)) => score < b - 1e-9 * b.abs().max(1.0),
        };
        if better {
            best = Some((score, sel, p));
        }
    }
    let (_, sel, p) = best.expect("at least one selection");
    Ok((sel, p))
}

/// Derivative of `arg p(e^{i theta})`, by a central difference of the phase.
pub fn group_delay(p: &Poly, theta: f64) -> f64 {
    let h = 1e-5;
    let ratio = p.eval(cis(theta + h)) / p.eval(cis(theta - h));
    ratio.arg() / (2.0 * h)
}

/// Variance of the group delay over `GROUP_DELAY_SAMPLES` midpoint samples
/// of the circle; zero for linear-phase polynomials.
pub fn group_delay_variance(p: &Poly) -> f64 {
    let n = GROUP_DELAY_SAMPLES;
    let delays: Vec<f64> = (0..n)
        .map(|j| group_delay(p, 2.0 * PI * (j as f64 + 0.5) / n as f64))
        .collect();
    let mean = delays.iter().sum::<f64>() / n as f64;
    delays.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / n as f64
}
