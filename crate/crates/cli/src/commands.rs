use std::fs;
use std::path::Path;

use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::Serialize;
use specfact_core::bauer::bauer_factor;
use specfact_core::factorize::{FactorConfig, Factorizer};
use specfact_core::flip::{flip_zero, FlipConfig, FlipStep};
use specfact_core::json::{self, MatrixFile};
use specfact_core::random::planted_instance;
use specfact_core::roots::reflect;
use specfact_core::scalar::FactorSelection;
use specfact_core::verify::{
    check_spectral_factor, determinant_match, nonuniqueness_fixture, zero_report, DeterminantMatch,
    FactorReport, ZeroReport, FACTOR_TOL,
};
use specfact_core::wavelet::{frequency_response, symmetry_score, DesignMode, FilterDesigner, ResponseSample};
use specfact_core::{Complex64, RootConfig};

use crate::failure::Failure;
use crate::{FactorMode, Format, WaveletMode};

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::io(path, e))
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::io(path, e))
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// `--tol`, else `SPECFACT_TOL`, else `fallback`.
fn tolerance(flag: Option<f64>, fallback: f64) -> Result<f64, Failure> {
    let tol = match flag {
        Some(t) => t,
        None => match std::env::var("SPECFACT_TOL") {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| Failure::usage(format!("SPECFACT_TOL={v:?} is not a number")))?,
            Err(_) => fallback,
        },
    };
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Failure::usage(format!("tolerance {tol} must lie in (0, 1)")));
    }
    Ok(tol)
}

/// Parses `"re,im"` or a bare real number.
fn parse_complex(text: &str) -> Result<Complex64, Failure> {
    let bad = || Failure::usage(format!("expected a complex number as \"re,im\", got {text:?}"));
    let mut parts = text.split(',').map(|p| p.trim().parse::<f64>());
    let re = parts.next().ok_or_else(bad)?.map_err(|_| bad())?;
    let im = match parts.next() {
        Some(p) => p.map_err(|_| bad())?,
        None => 0.0,
    };
    if parts.next().is_some() || !re.is_finite() || !im.is_finite() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

#[derive(Serialize)]
struct FactorOutput {
    mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    factor: Option<MatrixFile>,
    verification: FactorReport,
    zeros: ZeroReport,
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    determinant: Option<DeterminantDetails>,
}

#[derive(Serialize)]
struct DeterminantDetails {
    unique: bool,
    flips: Vec<FlipStep>,
    determinant: DeterminantMatch,
}

pub fn factor(
    input: &Path,
    mode: FactorMode,
    det_file: Option<&Path>,
    tol: Option<f64>,
    max_block: usize,
    out: Option<&Path>,
) -> Outcome {
    let s = json::parse_laurent(&read(input)?)?;
    let mut cfg = FactorConfig::default();
    cfg.bauer.tol = tolerance(tol, cfg.bauer.tol)?;
    cfg.bauer.max_block = max_block;
    let check_tol = cfg.bauer.tol.max(FACTOR_TOL);
    cfg.tolerances.residual_tol = check_tol;

    let (p, mode_name, determinant) = match mode {
        FactorMode::Optimal => {
            if det_file.is_some() {
                return Err(Failure::usage("--det-file requires --mode with-det"));
            }
            (bauer_factor(&s, &cfg.bauer)?, "optimal", None)
        }
        FactorMode::WithDet => {
            let path = det_file.ok_or_else(|| Failure::usage("--mode with-det requires --det-file"))?;
            let target = json::parse_scalar_poly(&read(path)?)?;
            let result = Factorizer::new(&s, &cfg)?.with_determinant(&target)?;
            if !result.unique {
                eprintln!(
                    r#"{{"warning":"NotUnique","message":"det S has multiple roots; other inequivalent factors share this determinant"}}"#
                );
            }
            let details = DeterminantDetails {
                unique: result.unique,
                flips: result.plan.steps().to_vec(),
                determinant: determinant_match(&result.factor.det_poly(), &target),
            };
            (result.factor, "with-det", Some(details))
        }
    };

    let factor = match out {
        Some(path) => {
            write(path, &json::poly_matrix_to_json(&p))?;
            None
        }
        None => Some(MatrixFile::from(&p)),
    };
    let output = FactorOutput {
        mode: mode_name,
        factor,
        verification: check_spectral_factor(&p, &s, check_tol)?,
        zeros: zero_report(&p, &cfg.roots)?,
        determinant,
    };
    print!("{}", pretty(&output));
    if !output.verification.pass {
        return Err(Failure::Check("factor does not reproduce the density within tolerance".into()));
    }
    Ok(())
}

#[derive(Serialize)]
struct Manifest {
    m: usize,
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "L")]
    l: usize,
    count: usize,
    optimal_count: usize,
    factors: Vec<ManifestEntry>,
}

#[derive(Serialize)]
struct ManifestEntry {
    selection: String,
    file: String,
    residual: f64,
    zeros: ZeroReport,
}

fn factor_file_name(sel: &FactorSelection) -> String {
    if sel.is_empty() {
        "factor.json".into()
    } else {
        format!("factor_{sel}.json")
    }
}

pub fn enumerate(input: &Path, max_l: usize, out_dir: &Path, tol: Option<f64>) -> Outcome {
    let s = json::parse_laurent(&read(input)?)?;
    let mut cfg = FactorConfig::default();
    cfg.bauer.tol = tolerance(tol, cfg.bauer.tol)?;
    cfg.tolerances.residual_tol = cfg.bauer.tol.max(FACTOR_TOL);
    let fz = Factorizer::new(&s, &cfg)?;
    let all = fz.enumerate_limited(max_l)?;

    fs::create_dir_all(out_dir).map_err(|e| Failure::io(out_dir, e))?;
    let mut factors = Vec::with_capacity(all.len());
    for (sel, p) in &all {
        let file = factor_file_name(sel);
        write(&out_dir.join(&file), &json::poly_matrix_to_json(p))?;
        factors.push(ManifestEntry {
            selection: sel.to_string(),
            file,
            residual: p.mul_factor().max_abs_diff(&s)? / s.max_abs(),
            zeros: zero_report(p, &cfg.roots)?,
        });
    }
    let manifest = Manifest {
        m: s.dim(),
        n: s.degree(),
        l: fz.slot_count(),
        count: factors.len(),
        optimal_count: factors.iter().filter(|f| f.zeros.optimal).count(),
        factors,
    };
    let text = pretty(&manifest);
    write(&out_dir.join("manifest.json"), &text)?;
    print!("{text}");
    Ok(())
}

#[derive(Serialize)]
struct FlipOutput {
    from: Complex64,
    to: Complex64,
    degree: usize,
    /// `|P1 P1~ - P P~| / |P P~|` over coefficients.
    conservation_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    factor: Option<MatrixFile>,
}

pub fn flip(input: &Path, root: &str, allow_multiple: bool, out: Option<&Path>) -> Outcome {
    let p = json::parse_poly_matrix(&read(input)?)?;
    let from = parse_complex(root)?;
    let cfg = FlipConfig {
        allow_multiple,
        ..FlipConfig::default()
    };
    let flipped = flip_zero(&p, from, &cfg)?;
    let before = p.mul_factor();
    let mut output = FlipOutput {
        from,
        to: reflect(from),
        degree: flipped.degree(),
        conservation_residual: flipped.mul_factor().max_abs_diff(&before)? / before.max_abs(),
        factor: None,
    };
    match out {
        Some(path) => write(path, &json::poly_matrix_to_json(&flipped))?,
        None => output.factor = Some(MatrixFile::from(&flipped)),
    }
    print!("{}", pretty(&output));
    Ok(())
}

#[derive(Serialize)]
struct VerifyOutput {
    pass: bool,
    verification: FactorReport,
    zeros: ZeroReport,
}

pub fn verify(factor: &Path, matrix: &Path, tol: Option<f64>) -> Outcome {
    let p = json::parse_poly_matrix(&read(factor)?)?;
    let s = json::parse_laurent(&read(matrix)?)?;
    let verification = check_spectral_factor(&p, &s, tolerance(tol, FACTOR_TOL)?)?;
    let output = VerifyOutput {
        pass: verification.pass,
        zeros: zero_report(&p, &RootConfig::default())?,
        verification,
    };
    print!("{}", pretty(&output));
    if !output.pass {
        return Err(Failure::Check("factor does not reproduce the density within tolerance".into()));
    }
    Ok(())
}

#[derive(Serialize)]
struct FilterOutput {
    #[serde(rename = "K")]
    k: usize,
    mode: &'static str,
    selection: String,
    coefficients: Vec<Complex64>,
    sum: Complex64,
    symmetry_score: f64,
    response: Vec<ResponseSample>,
}

pub fn daubechies(
    k: usize,
    mode: WaveletMode,
    selection: Option<&str>,
    format: Format,
    samples: usize,
    curves: bool,
) -> Outcome {
    let design_mode = match (mode, selection) {
        (WaveletMode::Selection, Some(bits)) => DesignMode::Selection(FactorSelection::parse(bits)?),
        (WaveletMode::Selection, None) => return Err(Failure::usage("--mode selection requires --selection")),
        (_, Some(_)) => return Err(Failure::usage("--selection requires --mode selection")),
        (WaveletMode::MinPhase, None) => DesignMode::MinPhase,
        (WaveletMode::MidPhase, None) => DesignMode::MidPhase,
        (WaveletMode::Balanced, None) => DesignMode::Balanced,
    };
    let designer = FilterDesigner::new(k, &RootConfig::default())?;
    let (sel, h) = designer.design(&design_mode)?;
    let response = frequency_response(&h, samples);

    match format {
        Format::Json => {
            let output = FilterOutput {
                k,
                mode: match mode {
                    WaveletMode::MinPhase => "min-phase",
                    WaveletMode::MidPhase => "mid-phase",
                    WaveletMode::Balanced => "balanced",
                    WaveletMode::Selection => "selection",
                },
                selection: sel.to_string(),
                coefficients: h.coeffs().to_vec(),
                sum: h.coeffs().iter().sum(),
                symmetry_score: symmetry_score(&h),
                response,
            };
            print!("{}", pretty(&output));
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            let result = if curves {
                response.iter().try_for_each(|r| w.serialize(r))
            } else {
                w.write_record(["n", "re", "im"]).and_then(|_| {
                    h.coeffs().iter().enumerate().try_for_each(|(n, c)| {
                        w.write_record([n.to_string(), format!("{:?}", c.re), format!("{:?}", c.im)])
                    })
                })
            };
            result
                .and_then(|_| w.flush().map_err(csv::Error::from))
                .map_err(|e| Failure::Io(e.to_string()))?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct NonuniqueOutput {
    a: Complex64,
    p_plus: MatrixFile,
    r_plus: MatrixFile,
    density: MatrixFile,
    p_plus_residual: f64,
    r_plus_residual: f64,
    determinant_residual: f64,
    both_factors: bool,
    determinants_agree: bool,
    equivalent: bool,
}

pub fn example_nonunique(a: &str) -> Outcome {
    let a = parse_complex(a)?;
    let fx = nonuniqueness_fixture(a, RootConfig::default().boundary_tol)?;
    let output = NonuniqueOutput {
        a,
        p_plus: MatrixFile::from(&fx.p_plus),
        r_plus: MatrixFile::from(&fx.r_plus),
        density: MatrixFile::from(&fx.density),
        p_plus_residual: fx.p_plus_residual,
        r_plus_residual: fx.r_plus_residual,
        determinant_residual: fx.determinant_residual,
        both_factors: fx.both_factors,
        determinants_agree: fx.determinants_agree,
        equivalent: fx.equivalent,
    };
    print!("{}", pretty(&output));
    if !fx.holds() {
        return Err(Failure::Check("fixture did not show non-uniqueness".into()));
    }
    Ok(())
}

pub fn random(seed: u64, m: usize, n: usize, outside_prob: f64, factor_out: Option<&Path>) -> Outcome {
    if m == 0 || n == 0 {
        return Err(Failure::usage("--m and --N must be positive"));
    }
    if !(0.0..=1.0).contains(&outside_prob) {
        return Err(Failure::usage("--outside-prob must lie in [0, 1]"));
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let inst = planted_instance(m, n, outside_prob, &mut rng)?;
    if let Some(path) = factor_out {
        write(path, &json::poly_matrix_to_json(&inst.factor))?;
    }
    print!("{}", json::laurent_to_json(&inst.density));
    Ok(())
}
