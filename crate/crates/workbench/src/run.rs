use std::f64::consts::PI;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use tdirac_core::clifford::build_clifford;
use tdirac_core::cohomology::{
    carriere_model, cohomology_dims, conformal_shift, poincare_check, tautness, taut_suspension_model,
    CohomologyReport, PoincareReport, TautnessReport,
};
use tdirac_core::euler::{
    average_against, character_by_label, lefschetz_euler, load_foliation_dataset, load_strata_dataset,
    FiniteGroup, GroupSpec, LinearTorusAction,
};
use tdirac_core::exterior::{bigstar, hodge_star, Form, FormJson, MetricPoint};
use tdirac_core::linalg::CMat;
use tdirac_core::spectrum::{SpectrumReport, MERGE_TOL};
use tdirac_core::torus::{circle_dirac, dirac_t2, harmonic_dims};
use tdirac_core::transversal::{
    heisenberg_points, mean_curvature_with, slope_distribution_dq, warped_torus_dl, warped_torus_dq, Curvature,
    DistributionFrame, Stencil, DEFAULT_STEP,
};
use tdirac_core::{Error, Result};

use crate::config::{require, Format, RunConfig};
use crate::output::to_canonical_json;

pub const COMMANDS: &[&str] = &[
    "circle-dirac",
    "t2-dirac",
    "harmonic-dims",
    "clifford",
    "hodge-star",
    "warped-dl",
    "warped-dq",
    "slope",
    "mean-curvature",
    "carriere",
    "conformal-shift",
    "taut-suspension",
    "lefschetz-euler",
    "character-average",
    "strata-euler",
    "gauss-bonnet",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarmonicDimsReport {
    pub n: usize,
    pub truncation: usize,
    pub dims: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CliffordReport {
    pub n: usize,
    pub k: usize,
    /// Row-major entries as `[re, im]`.
    pub generators: Vec<Vec<Vec<[f64; 2]>>>,
    pub relation_residual: f64,
    pub skew_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HodgeStarReport {
    pub star: FormJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bigstar: Option<FormJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeanCurvatureReport {
    pub frame: String,
    pub which: String,
    pub step: f64,
    pub points: Vec<Vec<f64>>,
    pub values: Vec<Vec<f64>>,
    pub max_norm: f64,
    pub tangency_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConformalShiftReport {
    pub truncation: usize,
    pub residual: f64,
    pub twisted_betti: Vec<usize>,
    pub untwisted_betti: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuspensionReport {
    pub poincare: PoincareReport,
    pub tautness: TautnessReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EulerReport {
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<String>,
    pub chi: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lefschetz_numbers: Option<Vec<i64>>,
}

#[derive(Debug, Clone)]
pub enum Report {
    Spectrum(SpectrumReport),
    HarmonicDims(HarmonicDimsReport),
    Clifford(CliffordReport),
    HodgeStar(HodgeStarReport),
    MeanCurvature(MeanCurvatureReport),
    Cohomology(CohomologyReport),
    ConformalShift(ConformalShiftReport),
    Suspension(SuspensionReport),
    Euler(EulerReport),
}

impl Report {
    pub fn default_format(&self) -> Format {
        match self {
            Report::Spectrum(_) => Format::Csv,
            _ => Format::Json,
        }
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match (self, format) {
            (Report::Spectrum(s), Format::Csv) => Ok(s.to_csv()),
            (Report::Spectrum(s), Format::Json) => to_canonical_json(s),
            (_, Format::Csv) => Err(Error::InvalidArgument("CSV output is only available for spectra".into())),
            (Report::HarmonicDims(r), _) => to_canonical_json(r),
            (Report::Clifford(r), _) => to_canonical_json(r),
            (Report::HodgeStar(r), _) => to_canonical_json(r),
            (Report::MeanCurvature(r), _) => to_canonical_json(r),
            (Report::Cohomology(r), _) => to_canonical_json(r),
            (Report::ConformalShift(r), _) => to_canonical_json(r),
            (Report::Suspension(r), _) => to_canonical_json(r),
            (Report::Euler(r), _) => to_canonical_json(r),
        }
    }
}

/// Runs the configured command and renders its report.
pub fn run(cfg: &RunConfig) -> Result<String> {
    cfg.validate()?;
    let report = execute(cfg)?;
    let format = cfg.format.unwrap_or(report.default_format());
    report.render(format)
}

pub fn execute(cfg: &RunConfig) -> Result<Report> {
    let cmd = cfg.command.as_str();
    let need_m = || require(&cfg.m, "M", cmd);
    let need_n = || require(&cfg.big_n, "N", cmd);
    let report = match cmd {
        "circle-dirac" => Report::Spectrum(remerge(circle_dirac(need_m()?).spectrum, cfg)),
        "t2-dirac" => {
            let d = dirac_t2(need_m()?)?;
            Report::Spectrum(
                remerge(d.spectrum, cfg)
                    .with_diagnostic("kernel_plus", d.kernel_plus as f64)
                    .with_diagnostic("kernel_minus", d.kernel_minus as f64),
            )
        }
        "harmonic-dims" => {
            let n = require(&cfg.n, "n", cmd)?;
            let m = need_m()?;
            let dims = (0..=n).into_par_iter().map(|r| harmonic_dims(n, m, r)).collect::<Result<Vec<_>>>()?;
            Report::HarmonicDims(HarmonicDimsReport { n, truncation: m, dims })
        }
        "clifford" => {
            let rep = build_clifford(require(&cfg.n, "n", cmd)?)?;
            Report::Clifford(CliffordReport {
                n: rep.n(),
                k: rep.k(),
                generators: rep.generators().iter().map(matrix_pairs).collect(),
                relation_residual: rep.relation_residual(),
                skew_residual: rep.skew_residual(),
            })
        }
        "hodge-star" => Report::HodgeStar(hodge_star_report(cfg)?),
        "warped-dl" => {
            let g = require(&cfg.g, "g", cmd)?;
            Report::Spectrum(remerge(warped_torus_dl(&g, need_n()?, cfg.x_modes.unwrap_or(0))?, cfg))
        }
        "warped-dq" => {
            let g = require(&cfg.g, "g", cmd)?;
            let x_mode = require(&cfg.x_mode, "x_mode", cmd)?;
            Report::Spectrum(remerge(warped_torus_dq(&g, x_mode, need_n()?)?, cfg))
        }
        "slope" => Report::Spectrum(remerge(slope_distribution_dq(require(&cfg.r, "r", cmd)?, need_m()?)?, cfg)),
        "mean-curvature" => Report::MeanCurvature(mean_curvature_report(cfg)?),
        "carriere" => {
            let cx = carriere_model(require(&cfg.lambda, "lambda", cmd)?, need_n()?)?;
            Report::Cohomology(cohomology_dims(&cx, cfg.twisted.unwrap_or(true))?)
        }
        "conformal-shift" => {
            let n = need_n()?;
            let cx = carriere_model(require(&cfg.lambda, "lambda", cmd)?, n)?;
            let shift = conformal_shift(&cx, &require(&cfg.h, "h", cmd)?)?;
            let (tw, un) = rayon::join(
                || cohomology_dims(&shift.shifted, true),
                || cohomology_dims(&shift.shifted, false),
            );
            Report::ConformalShift(ConformalShiftReport {
                truncation: n,
                residual: shift.residual,
                twisted_betti: tw?.betti,
                untwisted_betti: un?.betti,
            })
        }
        "taut-suspension" => {
            let cx = taut_suspension_model()?;
            Report::Suspension(SuspensionReport { poincare: poincare_check(&cx)?, tautness: tautness(&cx)? })
        }
        "lefschetz-euler" => {
            let action = torus_action(cfg)?;
            let rho = character_by_label(action.group(), &require(&cfg.rho, "rho", cmd)?)?;
            Report::Euler(EulerReport {
                source: action.group().label().to_string(),
                rho: Some(rho.label.clone()),
                chi: lefschetz_euler(&action, &rho)?,
                lefschetz_numbers: Some(action.lefschetz_numbers()),
            })
        }
        "character-average" => {
            let group = finite_group(&require(&cfg.group, "group", cmd)?)?;
            let lefschetz = require(&cfg.lefschetz, "lefschetz", cmd)?;
            if lefschetz.len() != group.order() {
                return Err(Error::DimensionMismatch { expected: group.order(), got: lefschetz.len() });
            }
            let rho = character_by_label(&group, &require(&cfg.rho, "rho", cmd)?)?;
            Report::Euler(EulerReport {
                source: group.label().to_string(),
                rho: Some(rho.label.clone()),
                chi: average_against(&group, &lefschetz, &rho)?,
                lefschetz_numbers: Some(lefschetz),
            })
        }
        "strata-euler" => {
            let name = require(&cfg.dataset, "dataset", cmd)?;
            let rho = require(&cfg.rho, "rho", cmd)?;
            let chi = load_strata_dataset(&name)?.euler(&rho)?;
            Report::Euler(EulerReport { source: name, rho: Some(rho), chi, lefschetz_numbers: None })
        }
        "gauss-bonnet" => {
            let name = require(&cfg.dataset, "dataset", cmd)?;
            let chi = load_foliation_dataset(&name)?.euler()?;
            Report::Euler(EulerReport { source: name, rho: None, chi, lefschetz_numbers: None })
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown command `{other}`; expected one of {}",
                COMMANDS.join(", ")
            )))
        }
    };
    Ok(report)
}

fn remerge(s: SpectrumReport, cfg: &RunConfig) -> SpectrumReport {
    match cfg.merge_tol() {
        Some(tol) if tol != MERGE_TOL => {
            let mut out = SpectrumReport::from_values(s.operator_label.clone(), s.truncation, s.expanded(), tol);
            out.diagnostics = s.diagnostics;
            out
        }
        _ => s,
    }
}

fn matrix_pairs(m: &CMat) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

fn hodge_star_report(cfg: &RunConfig) -> Result<HodgeStarReport> {
    let form: Form = require(&cfg.form, "form", "hodge-star")?.try_into()?;
    let n = form.n();
    let metric = match &cfg.metric {
        Some(rows) => {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(Error::InvalidArgument(format!("metric must be {n}x{n}")));
            }
            let flat: Vec<f64> = rows.iter().flatten().copied().collect();
            MetricPoint::new(DMatrix::from_row_slice(n, n, &flat), cfg.orientation.unwrap_or(1))?
        }
        None => MetricPoint::euclidean(n).with_orientation(cfg.orientation.unwrap_or(1))?,
    };
    let star = FormJson::from(&hodge_star(&metric, &form)?);
    let bigstar = if n % 2 == 0 { Some(FormJson::from(&bigstar(&metric, &form)?)) } else { None };
    Ok(HodgeStarReport { star, bigstar })
}

fn mean_curvature_report(cfg: &RunConfig) -> Result<MeanCurvatureReport> {
    let cmd = "mean-curvature";
    let frame_name = require(&cfg.frame, "frame", cmd)?;
    let (frame, default_points) = match frame_name.as_str() {
        "warped" => {
            let pts = (0..16).map(|j| vec![0.1 * j as f64, 2.0 * PI * j as f64 / 16.0]).collect();
            (DistributionFrame::warped_torus(require(&cfg.g, "g", cmd)?)?, pts)
        }
        "heisenberg" => (DistributionFrame::heisenberg()?, heisenberg_points(6, 2.0, 0.0)),
        "slope" => {
            let pts = (0..16).map(|j| vec![j as f64 / 16.0, 0.5]).collect();
            (DistributionFrame::slope(require(&cfg.r, "r", cmd)?)?, pts)
        }
        other => return Err(Error::InvalidArgument(format!("unknown frame `{other}`"))),
    };
    let which_name = cfg.which.clone().unwrap_or_else(|| "L".into());
    let which = match which_name.as_str() {
        "L" => Curvature::OfL,
        "Q" => Curvature::OfQ,
        other => return Err(Error::InvalidArgument(format!("`which` must be L or Q, got `{other}`"))),
    };
    let points = cfg.points.clone().unwrap_or(default_points);
    let step = cfg.step().unwrap_or(DEFAULT_STEP);
    let field = mean_curvature_with(&frame, which, &points, step, Stencil::Central2)?;
    field.check_tangency(&frame)?;
    Ok(MeanCurvatureReport {
        frame: frame_name,
        which: which_name,
        step,
        max_norm: field.max_norm(),
        tangency_residual: field.tangency_residual(&frame),
        points: field.points,
        values: field.values,
    })
}

fn finite_group(spec: &GroupSpec) -> Result<FiniteGroup> {
    match spec {
        GroupSpec::Cyclic(n) => FiniteGroup::cyclic(*n),
        GroupSpec::Product(m) => FiniteGroup::product(m),
        GroupSpec::Named(g) => Err(Error::Unsupported(format!("group `{}` has no multiplication table", g.label))),
    }
}

fn torus_action(cfg: &RunConfig) -> Result<LinearTorusAction> {
    let cmd = "lefschetz-euler";
    if let Some(gens) = &cfg.generators {
        let group = finite_group(&require(&cfg.group, "group", cmd)?)?;
        let mats = gens
            .iter()
            .map(|rows| {
                let n = rows.len();
                if n == 0 || rows.iter().any(|r| r.len() != n) {
                    return Err(Error::InvalidArgument("generators must be square and nonempty".into()));
                }
                Ok(DMatrix::from_row_slice(n, n, &rows.concat()))
            })
            .collect::<Result<Vec<_>>>()?;
        return LinearTorusAction::from_generators(group, &mats);
    }
    match require(&cfg.action, "action", cmd)?.as_str() {
        "z4_rotation" => LinearTorusAction::z4_rotation(),
        "negation" => LinearTorusAction::negation(require(&cfg.n, "n", cmd)?),
        "trivial" => LinearTorusAction::trivial(require(&cfg.n, "n", cmd)?),
        other => Err(Error::InvalidArgument(format!("unknown action `{other}`"))),
    }
}
