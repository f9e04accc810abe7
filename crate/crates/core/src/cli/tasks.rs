//! Task execution: config in, [`Report`] out.

use std::path::Path;

use rayon::prelude::*;

use super::config::{set_path, Geometry, Observable, RunConfig, Task};
use super::output::{Cell, Column, Report};
use crate::casimir::{
    energy_per_area, fluctuation_spectra, force_per_area, profile, ProfileOptions, Settings, SpectraOptions,
};
use crate::error::{Error, Result};
use crate::materials::{log_grid, validate_passivity, Material};
use crate::oracles::{ideal_mirror_energy_density, ideal_mirror_pressure, lifshitz_halfspace_pressure};
use crate::stack::LayerStack;

/// A finished task. `failure` is set when the report was produced but the
/// run must still exit non-zero, as for a material that fails validation.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub failure: Option<Error>,
}

impl From<Report> for Outcome {
    fn from(report: Report) -> Self {
        Self { report, failure: None }
    }
}

/// Runs `config.task`. `raw` is the parsed file the config came from; sweeps
/// edit and re-read it.
pub fn execute(config: &RunConfig, raw: &toml::Table, base: &Path, settings: &Settings) -> Result<Outcome> {
    match config.task {
        Task::Force => force(config, base, settings).map(Into::into),
        Task::Profile => profile_task(config, base, settings).map(Into::into),
        Task::Sweep => sweep(config, raw, base, settings).map(Into::into),
        Task::Spectra => spectra(config, base, settings).map(Into::into),
        Task::Validate => validate(config, base),
        Task::OracleCompare => oracle_compare(config, base, settings).map(Into::into),
    }
}

fn observable(config: &RunConfig, stack: &LayerStack, which: Observable, settings: &Settings) -> Result<f64> {
    let gap = config.gap_layer(stack)?;
    match which {
        Observable::Force => force_per_area(stack, gap, config.temperature, settings),
        Observable::Energy => Ok(energy_per_area(stack, gap, config.temperature, settings)?.value),
    }
}

fn force(config: &RunConfig, base: &Path, settings: &Settings) -> Result<Report> {
    let geometry = config.geometry(base)?;
    let stack = geometry.stack();
    let gap = config.gap_layer(stack)?;
    let f = force_per_area(stack, gap, config.temperature, settings)?;
    let mut r = Report::new("force", vec![Column::new("gap_thickness", "m"), Column::new("force_per_area", "Pa")], vec![0, 1]);
    r.push(vec![stack.thickness(gap).into(), f.into()]);
    Ok(r)
}

fn profile_task(config: &RunConfig, base: &Path, settings: &Settings) -> Result<Report> {
    let opts = ProfileOptions {
        points_per_side: config.profile.points_per_side,
        outer_extent: config.profile.outer_extent,
        gap: None,
    };
    let t = config.temperature;
    let report = match config.geometry(base)? {
        Geometry::Layered(s) => profile(&s, t, settings, &opts)?,
        Geometry::Graded(g) => profile(&g, t, settings, &opts)?,
    };
    let mut r = Report::new(
        "profile",
        vec![
            Column::new("z", "m"),
            Column::new("energy_density", "J/m^3"),
            Column::new("sigma_xx", "Pa"),
            Column::new("sigma_yy", "Pa"),
            Column::new("sigma_zz", "Pa"),
            Column::new("divergence_z", "Pa/m"),
        ],
        vec![0, 1, 2, 4],
    );
    for i in 0..report.z.len() {
        r.push(
            [report.z[i], report.rho[i], report.sigma_xx[i], report.sigma_yy[i], report.sigma_zz[i], report.divergence[i]]
                .map(Cell::from)
                .to_vec(),
        );
    }
    Ok(r)
}

fn sweep(config: &RunConfig, raw: &toml::Table, base: &Path, settings: &Settings) -> Result<Report> {
    let spec = config.sweep.as_ref().ok_or_else(|| Error::Config("sweep: section missing".into()))?;
    let values = spec.range.values();
    let results = values
        .par_iter()
        .map(|&x| {
            let mut table = raw.clone();
            set_path(&mut table, &spec.parameter, x)?;
            let point = RunConfig::from_table(table)?;
            let geometry = point.geometry(base)?;
            observable(&point, geometry.stack(), spec.observable, settings)
        })
        .collect::<Result<Vec<f64>>>()?;
    let (name, unit) = match spec.observable {
        Observable::Force => ("force_per_area", "Pa"),
        Observable::Energy => ("energy_per_area", "J/m^2"),
    };
    let mut r = Report::new("sweep", vec![Column::new(&spec.parameter, ""), Column::new(name, unit)], vec![0, 1]);
    for (x, y) in values.into_iter().zip(results) {
        r.push(vec![x.into(), y.into()]);
    }
    Ok(r)
}

fn spectra(config: &RunConfig, base: &Path, _settings: &Settings) -> Result<Report> {
    let spec = config.spectra.as_ref().ok_or_else(|| Error::Config("spectra: section missing".into()))?;
    let geometry = config.geometry(base)?;
    let stack = geometry.stack();
    let mut opts = SpectraOptions::default();
    if let Some(c) = spec.cutoff {
        opts.cutoff = c;
    }
    opts.k.rel_tol = config.tolerances.relative;
    let omegas = spec.omega.values();
    let rows = omegas
        .par_iter()
        .map(|&w| fluctuation_spectra(stack, spec.z, w, config.temperature, &opts))
        .collect::<Result<Vec<_>>>()?;
    let mut r = Report::new(
        "spectra",
        vec![
            Column::new("omega", "rad/s"),
            Column::new("coth", ""),
            Column::new("ee_scattering", "V^2 s/m^2"),
            Column::new("bb_scattering", "T^2 s"),
            Column::new("ee_bulk", "V^2 s/m^2"),
            Column::new("bb_bulk", "T^2 s"),
        ],
        vec![0, 2, 3],
    );
    for s in rows {
        r.push([s.omega, s.coth, s.ee_scattering, s.bb_scattering, s.ee_bulk, s.bb_bulk].map(Cell::from).to_vec());
    }
    Ok(r)
}

fn validate(config: &RunConfig, base: &Path) -> Result<Outcome> {
    let library = config.library(base)?;
    let range = config.validate.omega;
    let grid = match range.spacing {
        super::config::Spacing::Log => log_grid(range.start, range.stop, range.points),
        super::config::Spacing::Linear => range.values(),
    };
    let mut r = Report::new(
        "validate",
        vec![Column::new("material", ""), Column::new("status", ""), Column::new("path", ""), Column::new("message", "")],
        vec![],
    );
    let mut failed = Vec::new();
    for (name, material) in &library {
        let rep = validate_passivity(material, &grid);
        for v in &rep.violations {
            r.push(vec![name.as_str().into(), "fail".into(), format!("materials.{name}.{}", v.path).into(), v.message.as_str().into()]);
        }
        for f in &rep.flags {
            r.push(vec![name.as_str().into(), "flag".into(), "".into(), f.as_str().into()]);
        }
        if rep.passed() {
            r.push(vec![name.as_str().into(), "pass".into(), "".into(), "".into()]);
        } else {
            failed.push(name.clone());
        }
    }
    let failure = (!failed.is_empty()).then(|| Error::validation(format!("materials failing validation: {}", failed.join(", "))));
    Ok(Outcome { report: r, failure })
}

/// Main pipeline against the independent references for a three-layer
/// vacuum cavity.
fn oracle_compare(config: &RunConfig, base: &Path, settings: &Settings) -> Result<Report> {
    let geometry = config.geometry(base)?;
    let stack = geometry.stack();
    if stack.len() != 3 || !stack.layer(1).material.is_vacuum() {
        return Err(Error::Config("stack: oracle comparison needs [half-space | vacuum gap | half-space]".into()));
    }
    let (m1, m2) = (&stack.layer(0).material, &stack.layer(2).material);
    let a = stack.thickness(1);
    let t = config.temperature;
    let mut r = Report::new(
        "oracle-compare",
        vec![
            Column::new("quantity", ""),
            Column::new("pipeline", ""),
            Column::new("oracle", ""),
            Column::new("oracle_error", ""),
            Column::new("relative_difference", ""),
            Column::new("method", ""),
        ],
        vec![],
    );
    let mut row = |name: &str, main: f64, o: crate::oracles::OracleResult| {
        let rel = if o.value == 0.0 { main.abs() } else { (main / o.value - 1.0).abs() };
        r.push(vec![name.into(), main.into(), o.value.into(), o.error_estimate.into(), rel.into(), o.method.into()]);
    };
    let force = force_per_area(stack, 1, t, settings)?;
    let mirrors = match (m1, m2) {
        (Material::PerfectMirror { static_te: a1 }, Material::PerfectMirror { static_te: a2 }) if a1 == a2 => Some(*a1),
        _ => None,
    };
    match mirrors {
        Some(static_te) => {
            row("force_per_area [Pa]", force, ideal_mirror_pressure(a, t, static_te)?);
            if t == crate::casimir::Temperature::Zero {
                let rho = crate::casimir::energy_density_t0(stack, stack.midpoint(1)?, settings)?;
                row("energy_density [J/m^3]", rho.value, ideal_mirror_energy_density(a)?);
            }
        }
        None => row("force_per_area [Pa]", force, lifshitz_halfspace_pressure(m1, m2, a, t)?),
    }
    Ok(r)
}
