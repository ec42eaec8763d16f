//! Named demonstrations, each writing `demo_<name>.json` with its inputs,
//! results and the verdict on the invariant it illustrates.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::config::Config;
use crate::error::CliError;
use crate::fig1::Inputs;
use crate::output::{json_bytes, write_file};
use crate::reference::NONFACTOR_MARGIN;
use crate::scenarios;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Demo {
    Uncertainty,
    Nonfactor,
    Properness,
    Hudson,
    RankN,
}

impl Demo {
    pub const ALL: [Demo; 5] = [
        Demo::Uncertainty,
        Demo::Nonfactor,
        Demo::Properness,
        Demo::Hudson,
        Demo::RankN,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Demo::Uncertainty => "uncertainty",
            Demo::Nonfactor => "nonfactor",
            Demo::Properness => "properness",
            Demo::Hudson => "hudson",
            Demo::RankN => "rankN",
        }
    }

    pub fn file_name(self) -> String {
        format!("demo_{}.json", self.name())
    }
}

impl fmt::Display for Demo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Demo {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Demo::ALL
            .into_iter()
            .find(|d| d.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| CliError::UnknownDemo {
                name: s.to_string(),
                valid: Demo::ALL.map(Demo::name).join(", "),
            })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Invariant {
    pub statement: String,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DemoReport<R> {
    pub demo: &'static str,
    pub inputs: Inputs,
    pub results: R,
    pub invariant: Invariant,
}

/// Runs a demo and writes its JSON; returns the bytes and whether the
/// invariant held.
pub fn render(demo: Demo, cfg: &Config) -> Result<(Vec<u8>, bool), CliError> {
    let (sigma, a) = (cfg.sigma, cfg.a);
    let inputs = Inputs::from(cfg);
    fn pack<R: Serialize>(
        demo: Demo,
        inputs: Inputs,
        results: R,
        statement: String,
        passed: bool,
    ) -> (Vec<u8>, bool) {
        let report = DemoReport {
            demo: demo.name(),
            inputs,
            results,
            invariant: Invariant { statement, passed },
        };
        (json_bytes(&report), passed)
    }
    let out = match demo {
        Demo::Uncertainty => {
            let r = scenarios::uncertainty(sigma, a)?;
            let passed = (r.original.uncertainty_product - 0.25).abs() < 1e-8
                && r.truncated.uncertainty_product < 0.25;
            let statement = format!(
                "the Gaussian saturates var_q var_p = 1/4 ({:.10}) while the naively truncated WF gives {:.6} < 1/4",
                r.original.uncertainty_product, r.truncated.uncertainty_product
            );
            pack(demo, inputs, r, statement, passed)
        }
        Demo::Nonfactor => {
            let r = scenarios::nonfactor(cfg)?;
            let passed = r.max_gap > NONFACTOR_MARGIN;
            let statement = format!(
                "the symbol of P rho P / <P> differs from W_P W_rho by up to {:.6} at (q, p) = ({:.4}, {:.4}); margin {NONFACTOR_MARGIN}",
                r.max_gap, r.argmax.0, r.argmax.1
            );
            pack(demo, inputs, r, statement, passed)
        }
        Demo::Properness => {
            let r = scenarios::properness(sigma, a)?;
            let passed = r.window.verdict == wigner_lab::Verdict::Proper
                && r.rank_one_gaussian.verdict == wigner_lab::Verdict::Improper;
            let statement = format!(
                "window symbol takes only the values 0 and 1; the rank-one Gaussian projector symbol reaches {:.6} at ({}, {})",
                r.rank_one_gaussian.witness_value, r.rank_one_gaussian.witness.0, r.rank_one_gaussian.witness.1
            );
            pack(demo, inputs, r, statement, passed)
        }
        Demo::Hudson => {
            let r = scenarios::hudson(sigma, a)?;
            let passed = r.iter().all(|c| {
                c.verdict.consistent && c.verdict.classified_gaussian == c.expect_gaussian
            });
            let statement = "Gaussian states have non-negative WFs; the window-projected state is non-Gaussian and its WF goes negative".to_string();
            pack(demo, inputs, r, statement, passed)
        }
        Demo::RankN => {
            let r = scenarios::rank_n(sigma, 2)?;
            let passed = r.iter().all(|c| {
                c.gram_defect < 1e-8
                    && c.idempotence_defect < 1e-6
                    && c.target_fidelity >= 1.0 - 1e-6
            });
            let statement = "each rank-(N+1) projector is idempotent, has orthonormal members and maps psi_G1 onto psi_G2; properness is reported, not asserted".to_string();
            pack(demo, inputs, r, statement, passed)
        }
    };
    Ok(out)
}

pub fn run(demo: Demo, cfg: &Config) -> Result<bool, CliError> {
    let (bytes, passed) = render(demo, cfg)?;
    write_file(&cfg.out, &demo.file_name(), &bytes)?;
    Ok(passed)
}
