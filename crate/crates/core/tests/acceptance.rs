//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Tolerances are fixed here, instances come from fixed seeds.

use std::process::ExitCode;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use specfact_core::bauer::{bauer_factor, BauerConfig};
use specfact_core::factorize::{FactorConfig, Factorizer};
use specfact_core::flip::{equal_up_to_unitary, flip_zero, rank_ratios, FlipConfig};
use specfact_core::random::{planted_instance, random_unitary, PlantedInstance};
use specfact_core::roots::{roots, RootConfig};
use specfact_core::scalar::enumerate_scalar;
use specfact_core::verify::{determinant_match, nonuniqueness_fixture, zero_report};
use specfact_core::wavelet::{db2_reference, design_filter, symmetry_score, DesignMode, FilterDesigner};
use specfact_core::{CMat, Complex64, LaurentMatrix, PolyMatrix};

struct Report {
    failures: usize,
}

impl Report {
    fn line(&mut self, id: usize, name: &str, pass: bool, detail: String) {
        if !pass {
            self.failures += 1;
        }
        println!("{} [{id}] {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    }
}

fn instances(count: usize, seed: u64) -> Vec<PlantedInstance> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let m = rng.random_range(1..=3);
            let n = rng.random_range(1..=4);
            planted_instance(m, n, 0.0, &mut rng).expect("planted instance")
        })
        .collect()
}

fn residual(p: &PolyMatrix, s: &LaurentMatrix) -> f64 {
    p.mul_factor().max_abs_diff(s).expect("same dimension") / s.max_abs()
}

fn criterion1(r: &mut Report, batch: &[PlantedInstance]) {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut inside = 0;
    let mut errors = 0;
    for inst in batch {
        match bauer_factor(&inst.density, &BauerConfig::default()) {
            Ok(p) => {
                worst = worst.max(residual(&p, &inst.density));
                inside += zero_report(&p, &RootConfig::default()).map_or(1, |z| z.inside.len());
            }
            Err(_) => errors += 1,
        }
    }
    let secs = start.elapsed().as_secs_f64();
    r.line(
        1,
        "optimal factor residual",
        errors == 0 && worst <= 1e-8 && inside == 0 && secs < 60.0,
        format!(
            "{} instances, max residual {worst:.2e} (<= 1e-8), inside zeros {inside}, errors {errors}, {secs:.2} s (< 60 s)",
            batch.len()
        ),
    );
}

fn criteria2_and_6(r: &mut Report, batch: &[PlantedInstance]) {
    let cfg = FactorConfig::default();
    let mut worst_det = 0.0f64;
    let mut calls = 0;
    let mut errors = 0;
    let mut min_gap = f64::INFINITY;
    let mut max_null = 0.0f64;
    let mut roots_checked = 0;
    for inst in batch {
        let fz = match Factorizer::new(&inst.density, &cfg) {
            Ok(fz) => fz,
            Err(_) => {
                errors += 1;
                continue;
            }
        };
        let Ok(scalars) = enumerate_scalar(fz.determinant(), &cfg.roots) else {
            errors += 1;
            continue;
        };
        for (_, p) in scalars {
            calls += 1;
            let Ok(result) = fz.with_determinant(&p) else {
                errors += 1;
                continue;
            };
            let m = determinant_match(&result.factor.det_poly(), &p);
            worst_det = worst_det.max(m.residual.max((m.constant.norm() - 1.0).abs()));
            let m = result.factor.dim();
            if m < 2 {
                continue;
            }
            let det = result.factor.det_poly();
            for a in roots(&det, &cfg.roots).expect("roots").expanded() {
                let ratios = rank_ratios(&result.factor.eval(a));
                min_gap = min_gap.min(ratios[m - 2]);
                max_null = max_null.max(ratios[m - 1]);
                roots_checked += 1;
            }
        }
    }
    r.line(
        2,
        "factor with prescribed determinant",
        errors == 0 && worst_det <= 1e-7,
        format!(
            "{} densities, {calls} determinants, max det residual {worst_det:.2e} (<= 1e-7), errors {errors}",
            batch.len()
        ),
    );
    r.line(
        6,
        "rank m-1 at simple determinant roots",
        roots_checked > 0 && min_gap > 1e-6 && max_null < 1e-8,
        format!("{roots_checked} roots, min sigma_(m-1)/sigma_1 {min_gap:.2e} (> 1e-6), max sigma_m/sigma_1 {max_null:.2e} (< 1e-8)"),
    );
}

fn criterion3(r: &mut Report) {
    let cfg = FactorConfig::default();
    let mut rng = StdRng::seed_from_u64(3);
    let mut worst = 0.0f64;
    let mut failures = 0;
    for _ in 0..25 {
        let m = rng.random_range(2..=3);
        let n = rng.random_range(1..=2);
        let inst = planted_instance(m, n, 0.5, &mut rng).expect("planted instance");
        let outcome = (|| {
            let base = Factorizer::new(&inst.density, &cfg)?;
            let w = random_unitary(m, &mut rng);
            let rotated = Factorizer::from_optimal(&inst.density, base.optimal().mul_right(&w)?, &cfg)?;
            let scalars = enumerate_scalar(base.determinant(), &cfg.roots)?;
            let (_, p) = &scalars[rng.random_range(0..scalars.len())];
            let a = base.with_determinant(p)?.factor;
            let b = rotated.with_determinant(p)?.factor;
            equal_up_to_unitary(&a, &b)
        })();
        match outcome {
            Ok(Some(found)) => worst = worst.max(found.unitary_defect.max(found.sample_defect)),
            _ => failures += 1,
        }
    }
    r.line(
        3,
        "uniqueness up to a constant unitary",
        failures == 0 && worst <= 1e-6,
        format!("25 densities, max defect {worst:.2e} (<= 1e-6), failures {failures}"),
    );
}

fn criterion4(r: &mut Report) {
    let cfg = FactorConfig::default();
    let mut rng = StdRng::seed_from_u64(4);
    let mut bad = Vec::new();
    for i in 0..10 {
        let inst = planted_instance(2, 1, 0.5, &mut rng).expect("planted instance");
        let Ok(all) = Factorizer::new(&inst.density, &cfg).and_then(|fz| fz.enumerate()) else {
            bad.push(format!("#{i}: error"));
            continue;
        };
        let optimal = all
            .iter()
            .filter(|(_, p)| zero_report(p, &cfg.roots).is_ok_and(|z| z.optimal))
            .count();
        let mut equivalent_pairs = 0;
        for a in 0..all.len() {
            for b in 0..a {
                if !matches!(equal_up_to_unitary(&all[a].1, &all[b].1), Ok(None)) {
                    equivalent_pairs += 1;
                }
            }
        }
        if all.len() != 4 || optimal != 1 || equivalent_pairs != 0 {
            bad.push(format!("#{i}: {} factors, {optimal} optimal, {equivalent_pairs} equivalent pairs", all.len()));
        }
    }
    let mut scalar_counts = Vec::new();
    for l in 1..=6 {
        let inst = planted_instance(1, l, 0.5, &mut rng).expect("planted instance");
        let count = Factorizer::new(&inst.density, &cfg)
            .and_then(|fz| fz.enumerate())
            .map_or(0, |all| all.len());
        if count != 1 << l {
            bad.push(format!("m=1, L={l}: {count} factors"));
        }
        scalar_counts.push(count.to_string());
    }
    r.line(
        4,
        "2^L factor count",
        bad.is_empty(),
        if bad.is_empty() {
            format!(
                "10 instances with m=2, L=2: 4 pairwise inequivalent factors, one optimal; m=1 counts {}",
                scalar_counts.join(",")
            )
        } else {
            bad.join("; ")
        },
    );
}

fn criterion5(r: &mut Report) {
    let mut rng = StdRng::seed_from_u64(5);
    let mut points = vec![Complex64::new(0.5, 0.0), Complex64::new(0.3, 0.4), Complex64::new(0.0, 0.0)];
    points.extend((0..10).map(|_| Complex64::from_polar(rng.random_range(0.0..0.95), rng.random_range(0.0..6.28))));
    let mut bad = Vec::new();
    let mut worst = 0.0f64;
    for a in &points {
        match nonuniqueness_fixture(*a, 1e-6) {
            Ok(fx) if fx.holds() => {
                worst = worst
                    .max(fx.p_plus_residual)
                    .max(fx.r_plus_residual)
                    .max(fx.determinant_residual);
            }
            _ => bad.push(a.to_string()),
        }
    }
    r.line(
        5,
        "non-uniqueness with a double determinant root",
        bad.is_empty(),
        format!(
            "a in {{0.5, 0.3+0.4i, 0}} and 10 random points: both factors valid, determinants agree, not unitarily equivalent; max residual {worst:.1e}; failing {bad:?}"
        ),
    );
}

fn criterion7(r: &mut Report) {
    let mut rng = StdRng::seed_from_u64(7);
    let mut worst = 0.0f64;
    let mut degree_changes = 0;
    let mut errors = 0;
    for _ in 0..500 {
        let m = rng.random_range(1..=3);
        let n = rng.random_range(1..=4);
        let inst = planted_instance(m, n, 0.5, &mut rng).expect("planted instance");
        let target = inst.roots[rng.random_range(0..inst.roots.len())];
        match flip_zero(&inst.factor, target, &FlipConfig::default()) {
            Ok(q) => {
                worst = worst.max(residual(&q, &inst.density));
                if q.degree() != inst.factor.degree() {
                    degree_changes += 1;
                }
            }
            Err(_) => errors += 1,
        }
    }
    r.line(
        7,
        "flip conservation",
        errors == 0 && degree_changes == 0 && worst <= 1e-9,
        format!("500 flips, max |P1 P1~ - S| / |S| {worst:.2e} (<= 1e-9), degree changes {degree_changes}, errors {errors}"),
    );
}

fn criterion8(r: &mut Report) {
    let cfg = RootConfig::default();
    let mut notes = Vec::new();
    let mut pass = true;

    let haar = design_filter(1, &DesignMode::MinPhase, &cfg).map(|(_, h)| h);
    let haar_err = haar.as_ref().map_or(f64::INFINITY, |h| {
        if h.coeffs().len() != 2 {
            return f64::INFINITY;
        }
        h.coeffs()
            .iter()
            .map(|c| (c - std::f64::consts::FRAC_1_SQRT_2).norm())
            .fold(0.0, f64::max)
    });
    pass &= haar_err <= 1e-15;
    notes.push(format!("Haar error {haar_err:.1e}"));

    let db2_err = design_filter(2, &DesignMode::MinPhase, &cfg).map_or(f64::INFINITY, |(_, h)| {
        h.coeffs()
            .iter()
            .zip(db2_reference())
            .map(|(c, e)| (c - e).norm())
            .fold(0.0, f64::max)
    });
    pass &= db2_err <= 1e-10;
    notes.push(format!("db2 error {db2_err:.1e} (<= 1e-10)"));

    let scores = design_filter(4, &DesignMode::MinPhase, &cfg)
        .and_then(|(_, min)| design_filter(4, &DesignMode::MidPhase, &cfg).map(|(_, mid)| (min, mid)))
        .map(|(min, mid)| (symmetry_score(&min), symmetry_score(&mid)));
    match scores {
        Ok((min, mid)) => {
            pass &= mid < min;
            notes.push(format!("K=4 score mid {mid:.4} < min {min:.4}"));
        }
        Err(e) => {
            pass = false;
            notes.push(format!("K=4 failed: {e}"));
        }
    }

    let mut counts = Vec::new();
    for k in 1..=6 {
        let filters = FilterDesigner::new(k, &cfg).and_then(|d| d.enumerate()).unwrap_or_default();
        let mut distinct = 0;
        for (i, (_, h)) in filters.iter().enumerate() {
            let repeated = filters[..i].iter().any(|(_, g)| {
                g.coeffs().len() == h.coeffs().len()
                    && g.coeffs().iter().zip(h.coeffs()).all(|(a, b)| (a - b).norm() < 1e-8)
            });
            if !repeated {
                distinct += 1;
            }
        }
        pass &= distinct == 1 << (k - 1);
        counts.push(distinct.to_string());
    }
    notes.push(format!("distinct filters K=1..6: {}", counts.join(",")));
    r.line(8, "Daubechies filters", pass, notes.join("; "));
}

fn criterion9(r: &mut Report) {
    let mut rng = StdRng::seed_from_u64(9);
    let mut det_worst = 0.0f64;
    let mut involution_failures = 0;
    for _ in 0..200 {
        let m = rng.random_range(1..=3);
        let mut poly = |n: usize| {
            let coeffs = (0..=n)
                .map(|_| {
                    CMat::from_fn(m, m, |_, _| {
                        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                    })
                })
                .collect();
            PolyMatrix::new(coeffs).expect("finite coefficients")
        };
        let a = poly(2);
        let b = poly(1);
        let lhs = a.mul(&b).expect("same dimension").det_poly();
        let rhs = &a.det_poly() * &b.det_poly();
        let n = lhs.coeffs().len().max(rhs.coeffs().len());
        let diff = (0..n).map(|k| (lhs.coeff(k) - rhs.coeff(k)).norm()).fold(0.0, f64::max);
        det_worst = det_worst.max(diff / rhs.max_abs());
        let laurent = LaurentMatrix::new(poly(4).coeffs().to_vec()).expect("odd length");
        let s = a.mul_factor();
        if laurent.tilde().tilde() != laurent || s.tilde().max_abs_diff(&s).expect("same dimension") > 1e-14 * s.max_abs() {
            involution_failures += 1;
        }
    }
    r.line(
        9,
        "determinant multiplicativity and tilde involution",
        det_worst <= 1e-10 && involution_failures == 0,
        format!("200 instances, max relative det defect {det_worst:.2e} (<= 1e-10), involution failures {involution_failures}"),
    );
}

fn main() -> ExitCode {
    let mut report = Report { failures: 0 };
    let batch = instances(100, 1);
    criterion1(&mut report, &batch);
    criteria2_and_6(&mut report, &batch[..50]);
    criterion3(&mut report);
    criterion4(&mut report);
    criterion5(&mut report);
    criterion7(&mut report);
    criterion8(&mut report);
    criterion9(&mut report);
    if report.failures == 0 {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} criteria failed", report.failures);
        ExitCode::FAILURE
    }
}
