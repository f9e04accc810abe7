//! Run descriptions read from TOML.
//!
//! ```toml
//! task = "force"
//! temperature = "zero"        # or kelvin
//! format = "csv"
//!
//! [materials.mirror]
//! kind = "perfect-mirror"
//!
//! [materials.vacuum]
//! kind = "vacuum"
//!
//! [[stack]]
//! material = "mirror"
//! thickness = "semi-infinite"
//!
//! [[stack]]
//! material = "vacuum"
//! thickness = 1e-6
//!
//! [[stack]]
//! material = "mirror"
//! thickness = "semi-infinite"
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::casimir::{Settings, Temperature};
use crate::error::{Error, Result};
use crate::materials::{ImagAxisTable, Material, MaterialModel, Oscillator, ResponseFunction, StaticTe};
use crate::stack::{build_stack, BlendShape, GradedProfile, GradedStack, LayerSpec, LayerStack, MaterialLibrary};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Profile,
    #[default]
    Force,
    Sweep,
    Spectra,
    Validate,
    OracleCompare,
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::Profile => "profile",
            Task::Force => "force",
            Task::Sweep => "sweep",
            Task::Spectra => "spectra",
            Task::Validate => "validate",
            Task::OracleCompare => "oracle-compare",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// One response function as written in a material block.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ResponseSpec {
    Vacuum,
    Constant {
        value: f64,
    },
    Drude {
        plasma_frequency: f64,
        damping: f64,
    },
    Lorentz {
        oscillators: Vec<Oscillator>,
    },
    /// ε(iξ) samples, inline or from a two-column file relative to the config.
    Tabulated {
        #[serde(default)]
        points: Option<Vec<[f64; 2]>>,
        #[serde(default)]
        file: Option<PathBuf>,
    },
    PerfectMirror {
        #[serde(default)]
        static_te: StaticTe,
    },
}

/// A named material: ε inline (with `kind`), μ optional.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaterialSpec {
    #[serde(flatten)]
    pub epsilon: ResponseSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<ResponseSpec>,
}

/// A graded region inserted before `stack[position]` and staircased into
/// `steps` layers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradedSpec {
    pub position: usize,
    pub thickness: f64,
    pub from: String,
    pub to: String,
    #[serde(default = "linear")]
    pub shape: BlendShape,
    pub steps: usize,
}

fn linear() -> BlendShape {
    BlendShape::Linear
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl Range {
    pub fn check(&self, path: &str) -> Result<()> {
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(Error::Config(format!("{path}: range ends must be finite")));
        }
        if self.points == 0 {
            return Err(Error::Config(format!("{path}.points: must be at least 1")));
        }
        if self.points > 1 && self.start == self.stop {
            return Err(Error::Config(format!("{path}: start and stop coincide")));
        }
        if self.spacing == Spacing::Log && !(self.start > 0.0 && self.stop > 0.0) {
            return Err(Error::Config(format!("{path}: log spacing needs positive ends")));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let n = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                let t = i as f64 / n;
                match self.spacing {
                    Spacing::Linear => self.start + t * (self.stop - self.start),
                    Spacing::Log => (self.start.ln() + t * (self.stop / self.start).ln()).exp(),
                }
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Observable {
    #[default]
    Force,
    Energy,
}

/// A parameter scan. `parameter` is a dotted path into this file, such as
/// `stack.1.thickness`, `temperature` or `materials.gold.damping`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub parameter: String,
    #[serde(flatten)]
    pub range: Range,
    #[serde(default)]
    pub observable: Observable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSpec {
    #[serde(default = "points_per_side")]
    pub points_per_side: usize,
    #[serde(default)]
    pub outer_extent: Option<f64>,
}

fn points_per_side() -> usize {
    12
}

impl Default for ProfileSpec {
    fn default() -> Self {
        Self { points_per_side: points_per_side(), outer_extent: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectraSpec {
    pub z: f64,
    pub omega: Range,
    #[serde(default)]
    pub cutoff: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateSpec {
    pub omega: Range,
}

impl Default for ValidateSpec {
    fn default() -> Self {
        Self { omega: Range { start: 1e10, stop: 1e18, points: 161, spacing: Spacing::Log } }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Relative tolerance of every integral and series.
    #[serde(default = "relative")]
    pub relative: f64,
    #[serde(default)]
    pub max_matsubara_terms: Option<usize>,
}

fn relative() -> f64 {
    1e-8
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { relative: relative(), max_matsubara_terms: None }
    }
}

impl Tolerances {
    pub fn settings(&self) -> Settings {
        let mut s = Settings::default().with_tolerance(self.relative);
        if let (Some(n), crate::spectral::Truncation::Adaptive { max_terms, .. }) = (self.max_matsubara_terms, &mut s.truncation) {
            *max_terms = n;
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub task: Task,
    pub temperature: Temperature,
    pub materials: BTreeMap<String, MaterialSpec>,
    pub stack: Vec<LayerSpec>,
    #[serde(default)]
    pub graded: Option<GradedSpec>,
    /// Layer across which force and energy are evaluated. Defaults to the
    /// only finite layer.
    #[serde(default)]
    pub gap: Option<usize>,
    #[serde(default)]
    pub sweep: Option<SweepSpec>,
    #[serde(default)]
    pub profile: ProfileSpec,
    #[serde(default)]
    pub spectra: Option<SpectraSpec>,
    #[serde(default)]
    pub validate: ValidateSpec,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
}

/// Geometry built from a config, with the continuous profile kept when
/// there is one.
#[derive(Clone, Debug)]
pub enum Geometry {
    Layered(LayerStack),
    Graded(GradedStack),
}

impl Geometry {
    pub fn stack(&self) -> &LayerStack {
        match self {
            Geometry::Layered(s) => s,
            Geometry::Graded(g) => &g.stack,
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let value: toml::Table = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Self::from_table(value)
    }

    pub fn from_table(table: toml::Table) -> Result<Self> {
        let config: RunConfig = table.try_into().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        config.check()?;
        Ok(config)
    }

    fn check(&self) -> Result<()> {
        if !(self.tolerances.relative > 0.0 && self.tolerances.relative < 1.0) {
            return Err(Error::Config(format!("tolerances.relative: must lie in (0, 1), got {}", self.tolerances.relative)));
        }
        if self.tolerances.max_matsubara_terms == Some(0) {
            return Err(Error::Config("tolerances.max_matsubara_terms: must be positive".into()));
        }
        for (i, l) in self.stack.iter().enumerate() {
            if !self.materials.contains_key(&l.material) {
                return Err(Error::Config(format!("stack.{i}.material: unknown material `{}`", l.material)));
            }
        }
        if let Some(g) = &self.graded {
            for (field, name) in [("from", &g.from), ("to", &g.to)] {
                if !self.materials.contains_key(name) {
                    return Err(Error::Config(format!("graded.{field}: unknown material `{name}`")));
                }
            }
            if g.position == 0 || g.position >= self.stack.len() {
                return Err(Error::Config(format!("graded.position: must lie in 1..{}", self.stack.len())));
            }
        }
        if let Some(s) = &self.sweep {
            s.range.check("sweep")?;
        }
        if let Some(s) = &self.spectra {
            s.omega.check("spectra.omega")?;
        }
        self.validate.omega.check("validate.omega")?;
        if let Some(gap) = self.gap {
            if gap == 0 || gap + 1 >= self.stack.len() {
                return Err(Error::Config(format!("gap: layer {gap} is not an interior layer")));
            }
        }
        Ok(())
    }

    /// Materials resolved against `base`, the directory of the config file.
    pub fn library(&self, base: &Path) -> Result<MaterialLibrary> {
        self.materials.iter().map(|(name, spec)| Ok((name.clone(), resolve(name, spec, base)?))).collect()
    }

    pub fn geometry(&self, base: &Path) -> Result<Geometry> {
        let library = self.library(base)?;
        let stack = build_stack(&self.stack, &library)?;
        let Some(g) = &self.graded else {
            return Ok(Geometry::Layered(stack));
        };
        let model = |field: &str, name: &str| -> Result<MaterialModel> {
            library[name]
                .model()
                .cloned()
                .ok_or_else(|| Error::Config(format!("graded.{field}: `{name}` is a perfect mirror")))
        };
        let profile = GradedProfile { thickness: g.thickness, from: model("from", &g.from)?, to: model("to", &g.to)?, shape: g.shape };
        let layers = stack.layers();
        let graded = GradedStack::new(layers[..g.position].to_vec(), profile, g.steps, layers[g.position..].to_vec())?;
        Ok(Geometry::Graded(graded))
    }

    /// The force/energy layer: `gap` if set, else the only finite layer.
    pub fn gap_layer(&self, stack: &LayerStack) -> Result<usize> {
        if let Some(g) = self.gap {
            return Ok(g);
        }
        match stack.len() {
            3 => Ok(1),
            n => Err(Error::Config(format!("gap: the stack has {} finite layers; choose one", n - 2))),
        }
    }
}

fn resolve(name: &str, spec: &MaterialSpec, base: &Path) -> Result<Material> {
    let path = |field: &str| format!("materials.{name}.{field}");
    if let ResponseSpec::PerfectMirror { static_te } = spec.epsilon {
        if spec.mu.is_some() {
            return Err(Error::Config(format!("{}: a perfect mirror takes no permeability", path("mu"))));
        }
        return Ok(Material::PerfectMirror { static_te });
    }
    let epsilon = response(&spec.epsilon, base).map_err(|e| Error::Config(format!("{}: {e}", path("kind"))))?;
    let mu = match &spec.mu {
        Some(m) => response(m, base).map_err(|e| Error::Config(format!("{}: {e}", path("mu"))))?,
        None => ResponseFunction::Vacuum,
    };
    Ok(Material::Medium(MaterialModel::new(epsilon, mu)))
}

fn response(spec: &ResponseSpec, base: &Path) -> Result<ResponseFunction> {
    Ok(match spec {
        ResponseSpec::Vacuum => ResponseFunction::Vacuum,
        ResponseSpec::Constant { value } => ResponseFunction::constant(*value),
        ResponseSpec::Drude { plasma_frequency, damping } => ResponseFunction::drude(*plasma_frequency, *damping),
        ResponseSpec::Lorentz { oscillators } => ResponseFunction::lorentz(oscillators.clone()),
        ResponseSpec::Tabulated { points, file } => {
            let table = match (points, file) {
                (Some(p), None) => ImagAxisTable::new(p.iter().map(|r| (r[0], r[1])).collect())?,
                (None, Some(f)) => ImagAxisTable::parse(&std::fs::read_to_string(base.join(f))?)?,
                _ => return Err(Error::validation("tabulated needs exactly one of `points` or `file`")),
            };
            ResponseFunction::Tabulated { table }
        }
        ResponseSpec::PerfectMirror { .. } => return Err(Error::validation("perfect-mirror is not a response function")),
    })
}

/// Sets the dotted `path` in `table` to `value`; numeric segments index arrays.
pub fn set_path(table: &mut toml::Table, path: &str, value: f64) -> Result<()> {
    let bad = |why: String| Error::Config(format!("sweep.parameter `{path}`: {why}"));
    let mut segments = path.split('.');
    let first = segments.next().unwrap_or_default();
    let mut slot = table.get_mut(first).ok_or_else(|| bad(format!("no entry `{first}`")))?;
    for seg in segments {
        slot = step(slot, seg).ok_or_else(|| bad(format!("no entry `{seg}`")))?;
    }
    if !matches!(slot, toml::Value::Float(_) | toml::Value::Integer(_) | toml::Value::String(_)) {
        return Err(bad("not a scalar".into()));
    }
    *slot = toml::Value::Float(value);
    Ok(())
}

fn step<'a>(v: &'a mut toml::Value, seg: &str) -> Option<&'a mut toml::Value> {
    match v {
        toml::Value::Table(t) => t.get_mut(seg),
        toml::Value::Array(a) => seg.parse::<usize>().ok().and_then(|i| a.get_mut(i)),
        _ => None,
    }
}
