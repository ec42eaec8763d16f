//! Projected Gaussian WF over the figure viewport.

use std::collections::BTreeMap;

use serde::Serialize;
use wigner_lab::{
    negativity_report, tolerance, NegativityReport, WignerField, NORMALIZATION_CONVENTION,
};

use crate::config::Config;
use crate::error::CliError;
use crate::output::{json_bytes, number, write_file};
use crate::scenarios::fig1_field;

pub const CSV_NAME: &str = "fig1.csv";
pub const REPORT_NAME: &str = "fig1_report.json";
pub const SCRIPT_NAME: &str = "fig1.gp";

#[derive(Debug, Clone, Serialize)]
pub struct Inputs {
    pub sigma: f64,
    pub a: f64,
    pub grid: String,
    pub q_range: [f64; 2],
    pub p_range: [f64; 2],
}

impl From<&Config> for Inputs {
    fn from(c: &Config) -> Self {
        Inputs {
            sigma: c.sigma,
            a: c.a,
            grid: c.grid.to_string(),
            q_range: c.q_range,
            p_range: c.p_range,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Fig1Report {
    pub inputs: Inputs,
    #[serde(flatten)]
    pub negativity: NegativityReport,
    pub tolerances: BTreeMap<&'static str, f64>,
    pub normalization_convention: &'static str,
}

/// File contents of one run, before anything touches the disk.
pub struct Fig1Output {
    pub csv: Vec<u8>,
    pub report: Fig1Report,
    pub report_json: Vec<u8>,
    pub script: Vec<u8>,
}

pub fn render(cfg: &Config) -> Result<Fig1Output, CliError> {
    let field = fig1_field(cfg)?;
    let csv = csv_bytes(&field)?;
    let report = Fig1Report {
        inputs: cfg.into(),
        negativity: negativity_report(&field, tolerance::NEGATIVITY),
        tolerances: BTreeMap::from([("negativity", tolerance::NEGATIVITY)]),
        normalization_convention: NORMALIZATION_CONVENTION,
    };
    let report_json = json_bytes(&report);
    Ok(Fig1Output {
        csv,
        report,
        report_json,
        script: gnuplot_script(cfg).into_bytes(),
    })
}

pub fn run(cfg: &Config) -> Result<Fig1Report, CliError> {
    let out = render(cfg)?;
    write_file(&cfg.out, CSV_NAME, &out.csv)?;
    write_file(&cfg.out, REPORT_NAME, &out.report_json)?;
    write_file(&cfg.out, SCRIPT_NAME, &out.script)?;
    Ok(out.report)
}

fn csv_bytes(field: &WignerField) -> Result<Vec<u8>, CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(["q", "p", "W"])?;
    let grid = field.grid();
    for ((i, j), &v) in field.values().indexed_iter() {
        w.write_record([number(grid.q(i)), number(grid.p(j)), number(v)])?;
    }
    w.into_inner()
        .map_err(|e| CliError::Csv(e.into_error().into()))
}

fn gnuplot_script(cfg: &Config) -> String {
    let [q0, q1] = cfg.q_range;
    let [p0, p1] = cfg.p_range;
    format!(
        "# projected Gaussian WF, sigma = {sigma}, a = {a}\n\
         set datafile separator ','\n\
         set xrange [{q0}:{q1}]\n\
         set yrange [{p0}:{p1}]\n\
         set xlabel 'q'\n\
         set ylabel 'p'\n\
         set zlabel 'W'\n\
         set ticslevel 0\n\
         set view 60, 30\n\
         set palette rgbformulae 33,13,10\n\
         splot '{CSV_NAME}' skip 1 using 1:2:3 with points pointtype 7 pointsize 0.2 palette notitle\n\
         pause -1\n",
        sigma = cfg.sigma,
        a = cfg.a,
    )
}
