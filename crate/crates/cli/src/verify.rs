//! The invariant suite behind `verify`.

use std::collections::BTreeMap;
use std::sync::OnceLock;
use std::time::Instant;

use serde::Serialize;
use wigner_lab::tolerance;
use wigner_lab::*;

use crate::config::Config;
use crate::error::CliError;
use crate::fig1;
use crate::output::{json_bytes, write_file};
use crate::reference as r;
use crate::scenarios;

pub const REPORT_NAME: &str = "verify_report.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sense {
    /// Passes when the measured value is at most the tolerance.
    AtMost,
    /// Passes when the measured value is at least the tolerance.
    AtLeast,
}

type Probe = fn(&Config) -> Result<(f64, String), CliError>;

pub struct Check {
    pub name: &'static str,
    pub quick: bool,
    pub tolerance: f64,
    pub sense: Sense,
    probe: Probe,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub tolerance: f64,
    pub sense: Sense,
    pub value: Option<f64>,
    pub passed: bool,
    pub seconds: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub quick: bool,
    pub passed: bool,
    pub first_failure: Option<&'static str>,
    pub total_seconds: f64,
    pub tolerances: BTreeMap<&'static str, f64>,
    pub checks: Vec<CheckResult>,
}

const fn check(
    name: &'static str,
    quick: bool,
    tolerance: f64,
    sense: Sense,
    probe: Probe,
) -> Check {
    Check {
        name,
        quick,
        tolerance,
        sense,
        probe,
    }
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

/// The composed-symbol scenario is the slowest; two checks share one run.
fn nonfactor_default() -> Result<&'static scenarios::Nonfactor, CliError> {
    static CACHE: OnceLock<Result<scenarios::Nonfactor, String>> = OnceLock::new();
    CACHE
        .get_or_init(|| scenarios::nonfactor(&Config::default()).map_err(|e| e.to_string()))
        .as_ref()
        .map_err(|e| CliError::CheckFailed {
            name: "analysis.nonfactor".into(),
            detail: e.clone(),
        })
}

fn projected_origin(_: &Config) -> Result<(f64, String), CliError> {
    let grid = PhaseSpaceGridF64::new(-1.0, 1.0, 21, -1.0, 1.0, 21)?;
    let mut worst: f64 = 0.0;
    for (sigma, a) in [(1.0, 3.0), (1.0, 1.0), (2.0, 3.0), (0.3, 0.2)] {
        let w = projected_wigner_analytic(&ProjectedGaussianParams::new(sigma, a)?, &grid);
        worst = worst.max((w.value(10, 10) - 2.0).abs());
    }
    Ok((worst, "|W'(0,0) - 2| over four (sigma, a) pairs".into()))
}

pub fn checks() -> Vec<Check> {
    use Sense::*;
    vec![
        check("special.erf_reference", true, 1e-9, AtMost, |_| {
            let mut worst: f64 = 0.0;
            for &((x, y), (re, im)) in r::CERF {
                let z = cerf(Complex::new(x, y))?;
                worst = worst.max((z - Complex::new(re, im)).norm() / re.hypot(im));
            }
            Ok((
                worst,
                "max relative error of erf(z) over the reference table".into(),
            ))
        }),
        check("special.scaled_erf_reference", true, 1e-9, AtMost, |_| {
            let worst = max_of(
                r::SCALED_ERF_RE
                    .iter()
                    .map(|&(al, be, v)| ((scaled_erf_re(al, be) - v) / v).abs()),
            );
            Ok((worst, "max relative error of Re[erf(a+ib)]exp(-b^2)".into()))
        }),
        check("special.symmetries", true, 1e-14, AtMost, |_| {
            let mut worst: f64 = 0.0;
            for i in 0..25 {
                for j in 0..25 {
                    let z = Complex::new(-6.0 + 0.5 * i as f64, -11.0 + 0.9 * j as f64);
                    let e = cerf(z)?;
                    let s = e.norm().max(f64::MIN_POSITIVE);
                    worst = worst.max((cerf(-z)? + e).norm() / s);
                    worst = worst.max((cerf(z.conj())? - e.conj()).norm() / s);
                }
            }
            Ok((
                worst,
                "erf(-z) = -erf(z) and erf(conj z) = conj erf(z) on a lattice".into(),
            ))
        }),
        check(
            "kernel.window_idempotence",
            true,
            tolerance::EXACT,
            AtMost,
            |_| {
                let xg = PositionGrid::window_aligned(3.0, 4.0, 0.05)?;
                let p = window_projector_kernel(3.0, &xg)?;
                let d = compose_kernels(&p, &p)?.max_deviation(&p)?;
                Ok((d, "max |P∘P - P|".into()))
            },
        ),
        check(
            "kernel.composition_hermitian",
            true,
            tolerance::EXACT,
            AtMost,
            |_| {
                let xg = PositionGrid::window_aligned(3.0, 9.0, 0.02)?;
                let psi = sample_gaussian(&GaussianState::centered(1.0)?, &xg)?;
                let p = window_projector_kernel(3.0, &xg)?;
                let prp = compose_kernels(&compose_kernels(&p, &rank_one_kernel(&psi)?)?, &p)?;
                Ok((prp.hermitian_defect(), "hermitian defect of P rho P".into()))
            },
        ),
        check("wigner.gaussian_oracle", true, 1e-6, AtMost, |_| {
            let errs: Vec<_> = [0.5, 1.0, 2.0]
                .into_iter()
                .map(scenarios::gaussian_oracle)
                .collect::<Result<_, _>>()?;
            let worst = max_of(errs.iter().map(|g| g.max_error));
            Ok((
                worst,
                "max-norm error of the transformed Gaussian, sigma in {0.5, 1, 2}".into(),
            ))
        }),
        check(
            "wigner.gaussian_peak",
            true,
            tolerance::QUADRATURE,
            AtMost,
            |_| {
                let g = scenarios::gaussian_oracle(1.0)?;
                Ok(((g.peak - 2.0).abs(), "|max W - 2|".into()))
            },
        ),
        check(
            "wigner.gaussian_normalization",
            true,
            tolerance::QUADRATURE,
            AtMost,
            |_| {
                let errs: Vec<_> = [0.5, 1.0, 2.0]
                    .into_iter()
                    .map(scenarios::gaussian_oracle)
                    .collect::<Result<_, _>>()?;
                Ok((
                    max_of(errs.iter().map(|g| (g.normalization - 1.0).abs())),
                    "|∫∫W dq dp/2π - 1|".into(),
                ))
            },
        ),
        check(
            "wigner.origin_identity",
            true,
            1e-10,
            AtMost,
            projected_origin,
        ),
        check(
            "wigner.analytic_numeric_equivalence",
            false,
            1e-6,
            AtMost,
            |_| {
                let mut worst: f64 = 0.0;
                for (sigma, a) in [(1.0, 3.0), (1.0, 1.0), (2.0, 3.0)] {
                    worst = worst.max(scenarios::equivalence(sigma, a, 5e-4)?.max_error);
                }
                Ok((
                    worst,
                    "closed-form projected WF against the transform of the masked state".into(),
                ))
            },
        ),
        check("wigner.analytic_numeric_quick", true, 1e-5, AtMost, |_| {
            let e = scenarios::equivalence(1.0, 3.0, 2e-3)?;
            Ok((
                e.max_error,
                "sigma = 1, a = 3 on a coarse position grid".into(),
            ))
        }),
        check(
            "measurement.window_symbol_proper",
            true,
            tolerance::PROPER_ANALYTIC,
            AtMost,
            |_| {
                let p = scenarios::properness(1.0, 3.0)?;
                Ok((
                    p.window.max_distance,
                    "distance of the window symbol from {0, 1}".into(),
                ))
            },
        ),
        check(
            "measurement.gaussian_symbol_improper",
            true,
            tolerance::PROPER_ANALYTIC,
            AtMost,
            |_| {
                let p = scenarios::properness(1.0, 3.0)?;
                let r = &p.rank_one_gaussian;
                let off = (r.max_distance - 1.0)
                    .abs()
                    .max((r.witness_value - 2.0).abs());
                Ok((
                    off,
                    format!(
                        "distance {} with witness value {}",
                        r.max_distance, r.witness_value
                    ),
                ))
            },
        ),
        check(
            "measurement.window_projection_negative",
            true,
            -1e-3,
            AtMost,
            |_| {
                let p = scenarios::properness(1.0, 3.0)?;
                Ok((
                    p.window_projected_min,
                    "min WF after the window projection".into(),
                ))
            },
        ),
        check(
            "measurement.gaussian_projection_nonnegative",
            true,
            -1e-9,
            AtLeast,
            |_| {
                let p = scenarios::properness(1.0, 3.0)?;
                Ok((
                    p.gaussian_projected_min,
                    "min WF after projecting onto a Gaussian".into(),
                ))
            },
        ),
        check(
            "measurement.rank_n_gram",
            true,
            tolerance::QUADRATURE,
            AtMost,
            |_| {
                let cases = scenarios::rank_n(1.0, 2)?;
                Ok((
                    max_of(cases.iter().map(|c| c.gram_defect)),
                    "max |G - I|, N = 0..2".into(),
                ))
            },
        ),
        check(
            "measurement.rank_n_idempotence",
            true,
            tolerance::CHAIN,
            AtMost,
            |_| {
                let cases = scenarios::rank_n(1.0, 2)?;
                Ok((
                    max_of(cases.iter().map(|c| c.idempotence_defect)),
                    "max |P∘P - P|, N = 0..2".into(),
                ))
            },
        ),
        check(
            "measurement.rank_n_target",
            true,
            tolerance::CHAIN,
            AtMost,
            |_| {
                let cases = scenarios::rank_n(1.0, 2)?;
                Ok((
                    max_of(cases.iter().map(|c| 1.0 - c.target_fidelity)),
                    "1 - fidelity of P psi_G1 with psi_G2".into(),
                ))
            },
        ),
        check(
            "analysis.fig1_regression",
            true,
            tolerance::EXACT,
            AtMost,
            |_| {
                let w = scenarios::fig1_field(&Config::default())?;
                let m = negativity_report(&w, tolerance::NEGATIVITY).min_value;
                Ok(((m - r::FIG1_MIN_301X351).abs(), format!("min W' = {m}")))
            },
        ),
        check("analysis.fig1_negative", true, -1e-3, AtMost, |_| {
            let w = scenarios::fig1_field(&Config::default())?;
            Ok((
                negativity_report(&w, tolerance::NEGATIVITY).min_value,
                "min W' on the figure grid".into(),
            ))
        }),
        check(
            "analysis.negativity_refinement",
            false,
            1e-4,
            AtMost,
            |_| {
                let coarse = negativity_report(
                    &scenarios::fig1_field(&Config::default())?,
                    tolerance::NEGATIVITY,
                );
                let fine_cfg = Config {
                    grid: "601x701".parse().expect("valid grid"),
                    ..Config::default()
                };
                let fine =
                    negativity_report(&scenarios::fig1_field(&fine_cfg)?, tolerance::NEGATIVITY);
                Ok((
                    (coarse.min_value - fine.min_value).abs(),
                    "min W' change from 301x351 to 601x701".into(),
                ))
            },
        ),
        check(
            "analysis.uncertainty_var_p",
            true,
            tolerance::QUADRATURE,
            AtMost,
            |_| {
                let u = scenarios::uncertainty(1.0, 3.0)?;
                Ok((
                    (u.truncated.var_p - 0.25).abs(),
                    "|var_p - 1/4| after naive truncation".into(),
                ))
            },
        ),
        check(
            "analysis.truncated_var_q",
            true,
            tolerance::CHAIN,
            AtMost,
            |_| {
                let u = scenarios::uncertainty(1.0, 3.0)?;
                Ok((
                    (u.truncated.var_q - r::TRUNCATED_VAR_Q)
                        .abs()
                        .max(u.var_q_error),
                    "var_q against the truncated-normal reference".into(),
                ))
            },
        ),
        check("analysis.uncertainty_product", true, 1e-3, AtMost, |_| {
            let u = scenarios::uncertainty(1.0, 3.0)?;
            Ok((
                (u.truncated.uncertainty_product - r::TRUNCATED_PRODUCT).abs(),
                format!("product {}", u.truncated.uncertainty_product),
            ))
        }),
        check("analysis.uncertainty_violation", true, 0.25, AtMost, |_| {
            let u = scenarios::uncertainty(1.0, 3.0)?;
            Ok((
                u.truncated.uncertainty_product,
                "var_q var_p of the truncated WF".into(),
            ))
        }),
        check(
            "analysis.gaussian_uncertainty",
            true,
            tolerance::QUADRATURE,
            AtMost,
            |_| {
                let errs: Vec<_> = [0.5, 1.0, 2.0]
                    .into_iter()
                    .map(scenarios::gaussian_oracle)
                    .collect::<Result<_, _>>()?;
                Ok((
                    max_of(errs.iter().map(|g| (g.uncertainty_product - 0.25).abs())),
                    "|var_q var_p - 1/4| for transformed Gaussians".into(),
                ))
            },
        ),
        check(
            "analysis.nonfactor_margin",
            false,
            r::NONFACTOR_MARGIN,
            AtLeast,
            |_| {
                let n = nonfactor_default()?;
                Ok((
                    n.max_gap,
                    format!("max gap at ({}, {})", n.argmax.0, n.argmax.1),
                ))
            },
        ),
        check("analysis.nonfactor_reference", false, 1e-3, AtMost, |_| {
            let n = nonfactor_default()?;
            Ok((
                (n.max_gap - r::NONFACTOR_GAP_301X351)
                    .abs()
                    .max(n.composed_vs_analytic),
                "composed symbol against the closed form and the reference gap".into(),
            ))
        }),
        check(
            "analysis.expectation_equivalence",
            false,
            1e-5,
            AtMost,
            |_| {
                let cases = scenarios::expectations(1.0, 3.0)?;
                Ok((
                    max_of(cases.iter().map(|c| c.difference)),
                    "phase-space against Hilbert-space averages".into(),
                ))
            },
        ),
        check(
            "analysis.window_probability",
            false,
            tolerance::CHAIN,
            AtMost,
            |_| {
                let cases = scenarios::expectations(1.0, 3.0)?;
                let p = cases.iter().find(|c| c.observable == "P").expect("P case");
                let pap = cases
                    .iter()
                    .find(|c| c.observable == "P x^2 P")
                    .expect("PAP case");
                Ok((
                    (p.phase_space - r::WINDOW_PROBABILITY)
                        .abs()
                        .max((pap.phase_space - r::WINDOW_SECOND_MOMENT).abs()),
                    "<P> and <P x^2 P> against 1-D quadrature".into(),
                ))
            },
        ),
        check(
            "analysis.chained_projection",
            true,
            -tolerance::NEGATIVITY,
            AtMost,
            |_| {
                let xg = PositionGrid::window_aligned(3.0, 12.0, 5e-3)?;
                let psi = sample_gaussian(&GaussianState::centered(1.0)?, &xg)?;
                let p = window_projector_kernel(3.0, &xg)?;
                let pap = compose_kernels(
                    &compose_kernels(&p, &diagonal_observable_kernel(|x| x * x, &xg)?)?,
                    &p,
                )?;
                let avg = expectation_hilbert(&psi, &pap)?;
                let grid = PhaseSpaceGrid::reflection_aligned(&xg, 1.5, 0.02, 1.5, 5.0, 71)?;
                let w = wigner_numeric(&apply_window_projector(&psi, 3.0)?, &grid)?;
                let min = negativity_report(&w, tolerance::NEGATIVITY).min_value;
                let value = if avg.is_finite() { min } else { f64::INFINITY };
                Ok((
                    value,
                    format!("<P x^2 P> = {avg} is finite; min WF of the projected state"),
                ))
            },
        ),
        check("analysis.hudson_consistency", true, 0.0, AtMost, |_| {
            let cases = scenarios::hudson(1.0, 3.0)?;
            let bad = cases
                .iter()
                .filter(|c| {
                    !c.verdict.consistent || c.verdict.classified_gaussian != c.expect_gaussian
                })
                .count();
            Ok((
                bad as f64,
                "cases with an unexpected classification or verdict".into(),
            ))
        }),
        check("cli.csv_round_trip", true, tolerance::EXACT, AtMost, |_| {
            let cfg = Config::default();
            let out = fig1::render(&cfg)?;
            let err = csv_round_trip_error(&out.csv, cfg.sigma, cfg.a)?;
            Ok((
                err,
                "fig1.csv against a re-evaluation at the parsed (q, p)".into(),
            ))
        }),
        check("cli.determinism", true, 0.0, AtMost, |_| {
            let cfg = Config::default();
            let a = fig1::render(&cfg)?;
            let b = fig1::render(&cfg)?;
            let differing = (a.csv != b.csv) as u8
                + (a.report_json != b.report_json) as u8
                + (a.script != b.script) as u8;
            Ok((
                differing as f64,
                "outputs differing between two identical runs".into(),
            ))
        }),
    ]
}

/// Re-evaluates the closed form at every `(q, p)` read back from the CSV.
pub fn csv_round_trip_error(csv_bytes: &[u8], sigma: f64, a: f64) -> Result<f64, CliError> {
    let mut rdr = csv::Reader::from_reader(csv_bytes);
    let params = ProjectedGaussianParams::new(sigma, a)?;
    let mut worst: f64 = 0.0;
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let parse = |k: usize| -> f64 { rec[k].parse().unwrap_or(f64::NAN) };
        rows.push((parse(0), parse(1), parse(2)));
    }
    for (q, p, w) in rows {
        let d = (params.wigner_at(q, p) - w).abs();
        worst = if d.is_nan() {
            f64::INFINITY
        } else {
            worst.max(d)
        };
    }
    Ok(worst)
}

/// Runs the suite. `overrides` replace the tolerances of named checks.
pub fn run_suite(cfg: &Config, quick: bool, overrides: &BTreeMap<String, f64>) -> VerifyReport {
    let start = Instant::now();
    let mut results = Vec::new();
    for c in checks().into_iter().filter(|c| c.quick || !quick) {
        let tolerance = overrides.get(c.name).copied().unwrap_or(c.tolerance);
        let t = Instant::now();
        let outcome = (c.probe)(cfg);
        let seconds = t.elapsed().as_secs_f64();
        let (value, passed, detail) = match outcome {
            Ok((v, detail)) => {
                let passed = match c.sense {
                    Sense::AtMost => v <= tolerance,
                    Sense::AtLeast => v >= tolerance,
                };
                (Some(v), passed, detail)
            }
            Err(e) => (None, false, e.to_string()),
        };
        results.push(CheckResult {
            name: c.name,
            tolerance,
            sense: c.sense,
            value,
            passed,
            seconds,
            detail,
        });
    }
    let first_failure = results.iter().find(|c| !c.passed).map(|c| c.name);
    VerifyReport {
        quick,
        passed: first_failure.is_none(),
        first_failure,
        total_seconds: start.elapsed().as_secs_f64(),
        tolerances: BTreeMap::from([
            ("exact", tolerance::EXACT),
            ("quadrature", tolerance::QUADRATURE),
            ("chain", tolerance::CHAIN),
            ("negativity", tolerance::NEGATIVITY),
            ("proper_analytic", tolerance::PROPER_ANALYTIC),
            ("proper_numeric", tolerance::PROPER_NUMERIC),
        ]),
        checks: results,
    }
}

/// Runs the suite, writes the report and fails on the first failing check.
pub fn run(
    cfg: &Config,
    quick: bool,
    overrides: &BTreeMap<String, f64>,
) -> Result<VerifyReport, CliError> {
    let known: Vec<_> = checks().iter().map(|c| c.name).collect();
    if let Some(bad) = overrides.keys().find(|k| !known.contains(&k.as_str())) {
        return Err(CliError::Config(crate::error::ConfigInvalid {
            source: "command line".into(),
            field: "inject-tolerance".into(),
            line: None,
            message: format!("no check named `{bad}`"),
        }));
    }
    let report = run_suite(cfg, quick, overrides);
    write_file(&cfg.out, REPORT_NAME, &json_bytes(&report))?;
    if let Some(name) = report.first_failure {
        let c = report
            .checks
            .iter()
            .find(|c| c.name == name)
            .expect("failing check");
        return Err(CliError::CheckFailed {
            name: name.to_string(),
            detail: format!(
                "value {} against tolerance {} ({:?}): {}",
                c.value.map_or("none".to_string(), |v| v.to_string()),
                c.tolerance,
                c.sense,
                c.detail
            ),
        });
    }
    Ok(report)
}
