//! Planar layer stacks along z.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::materials::{Material, MaterialModel, ResponseFunction};

/// Layer thickness: finite in metres, or the outer semi-infinite marker.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Thickness {
    Finite(f64),
    #[serde(with = "semi_infinite")]
    SemiInfinite,
}

mod semi_infinite {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str("semi-infinite")
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(), D::Error> {
        let s = String::deserialize(d)?;
        if s == "semi-infinite" {
            Ok(())
        } else {
            Err(serde::de::Error::custom(format!("expected a number or \"semi-infinite\", got \"{s}\"")))
        }
    }
}

impl Thickness {
    pub fn value(&self) -> f64 {
        match self {
            Thickness::Finite(d) => *d,
            Thickness::SemiInfinite => f64::INFINITY,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub name: String,
    pub material: Material,
    pub thickness: Thickness,
}

impl Layer {
    pub fn new(name: impl Into<String>, material: Material, thickness: Thickness) -> Self {
        Self { name: name.into(), material, thickness }
    }

    pub fn semi_infinite(name: impl Into<String>, material: Material) -> Self {
        Self::new(name, material, Thickness::SemiInfinite)
    }

    pub fn finite(name: impl Into<String>, material: Material, d: f64) -> Self {
        Self::new(name, material, Thickness::Finite(d))
    }
}

/// Layer description referring to a material by name.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayerSpec {
    pub material: String,
    pub thickness: Thickness,
}

pub type MaterialLibrary = BTreeMap<String, Material>;

/// Ordered layers with interface coordinates; the first interface is at z = 0.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LayerStack {
    layers: Vec<Layer>,
    interfaces: Vec<f64>,
}

/// Result of [`LayerStack::locate`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Location {
    pub index: usize,
    /// Distance to the interface below (∞ in the bottom layer).
    pub below: f64,
    /// Distance to the interface above (∞ in the top layer).
    pub above: f64,
}

impl Location {
    pub fn nearest(&self) -> f64 {
        self.below.min(self.above)
    }

    pub fn on_interface(&self) -> bool {
        self.below == 0.0
    }
}

pub fn build_stack(specs: &[LayerSpec], library: &MaterialLibrary) -> Result<LayerStack> {
    let layers = specs
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let m = library
                .get(&s.material)
                .ok_or_else(|| Error::Stack(format!("layer {i}: unknown material `{}`", s.material)))?;
            Ok(Layer::new(s.material.clone(), m.clone(), s.thickness))
        })
        .collect::<Result<Vec<_>>>()?;
    LayerStack::new(layers)
}

impl LayerStack {
    pub fn new(layers: Vec<Layer>) -> Result<Self> {
        let n = layers.len();
        if n < 2 {
            return Err(Error::Stack(format!("a stack needs at least 2 layers, got {n}")));
        }
        for (i, l) in layers.iter().enumerate() {
            let outer = i == 0 || i == n - 1;
            match (outer, l.thickness) {
                (true, Thickness::SemiInfinite) => {}
                (true, Thickness::Finite(_)) => {
                    return Err(Error::Stack(format!("layer {i} (`{}`): outer layers must be semi-infinite", l.name)))
                }
                (false, Thickness::SemiInfinite) => {
                    return Err(Error::Stack(format!("layer {i} (`{}`): only outer layers may be semi-infinite", l.name)))
                }
                (false, Thickness::Finite(d)) => {
                    if !(d > 0.0 && d.is_finite()) {
                        return Err(Error::Stack(format!(
                            "layer {i} (`{}`): thickness must be positive and finite, got {d}",
                            l.name
                        )));
                    }
                }
            }
        }
        let mut interfaces = vec![0.0];
        for l in &layers[1..n - 1] {
            let last = *interfaces.last().unwrap();
            interfaces.push(last + l.thickness.value());
        }
        Ok(Self { layers, interfaces })
    }

    /// `[lower∞ | gap (thickness a) | upper∞]`.
    pub fn cavity(lower: Material, gap: Material, a: f64, upper: Material) -> Result<Self> {
        Self::new(vec![
            Layer::semi_infinite("lower", lower),
            Layer::finite("gap", gap, a),
            Layer::semi_infinite("upper", upper),
        ])
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn layer(&self, i: usize) -> &Layer {
        &self.layers[i]
    }

    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    pub fn interfaces(&self) -> &[f64] {
        &self.interfaces
    }

    /// Lower boundary of layer `i` (−∞ for the first layer).
    pub fn lower(&self, i: usize) -> f64 {
        if i == 0 {
            f64::NEG_INFINITY
        } else {
            self.interfaces[i - 1]
        }
    }

    /// Upper boundary of layer `i` (+∞ for the last layer).
    pub fn upper(&self, i: usize) -> f64 {
        if i + 1 == self.layers.len() {
            f64::INFINITY
        } else {
            self.interfaces[i]
        }
    }

    pub fn thickness(&self, i: usize) -> f64 {
        self.layers[i].thickness.value()
    }

    pub fn midpoint(&self, i: usize) -> Result<f64> {
        self.check_interior(i)?;
        Ok(0.5 * (self.lower(i) + self.upper(i)))
    }

    pub fn check_interior(&self, i: usize) -> Result<()> {
        if i == 0 || i + 1 >= self.layers.len() {
            return Err(Error::Stack(format!("layer {i} is not a finite interior layer")));
        }
        Ok(())
    }

    /// Layer containing z; a point on an interface belongs to the layer above it.
    pub fn locate(&self, z: f64) -> Location {
        let index = self.interfaces.partition_point(|&zi| zi <= z);
        Location { index, below: z - self.lower(index), above: self.upper(index) - z }
    }

    /// Copy with interior layer `i` resized.
    pub fn with_thickness(&self, i: usize, d: f64) -> Result<Self> {
        self.check_interior(i)?;
        let mut layers = self.layers.clone();
        layers[i].thickness = Thickness::Finite(d);
        Self::new(layers)
    }

    /// Smallest finite thickness, or ∞ for a single-interface stack.
    pub fn min_thickness(&self) -> f64 {
        (1..self.layers.len() - 1).map(|i| self.thickness(i)).fold(f64::INFINITY, f64::min)
    }

    pub fn is_all_vacuum(&self) -> bool {
        self.layers.iter().all(|l| l.material.is_vacuum())
    }
}

/// Shape of the blend weight w(s), s ∈ [0, 1].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlendShape {
    Linear,
    /// 3s² − 2s³.
    Smoothstep,
    /// (1 − cos πs)/2.
    Cosine,
}

impl BlendShape {
    fn weight(&self, s: f64) -> f64 {
        let s = s.clamp(0.0, 1.0);
        match self {
            BlendShape::Linear => s,
            BlendShape::Smoothstep => s * s * (3.0 - 2.0 * s),
            BlendShape::Cosine => 0.5 * (1.0 - (std::f64::consts::PI * s).cos()),
        }
    }

    fn slope(&self, s: f64) -> f64 {
        if !(0.0..=1.0).contains(&s) {
            return 0.0;
        }
        match self {
            BlendShape::Linear => 1.0,
            BlendShape::Smoothstep => 6.0 * s * (1.0 - s),
            BlendShape::Cosine => 0.5 * std::f64::consts::PI * (std::f64::consts::PI * s).sin(),
        }
    }
}

/// A region of thickness `thickness` in which ε and μ blend from `from` to `to`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradedProfile {
    pub thickness: f64,
    pub from: MaterialModel,
    pub to: MaterialModel,
    pub shape: BlendShape,
}

impl GradedProfile {
    fn blended(&self, w: f64) -> MaterialModel {
        let mix = |a: &ResponseFunction, b: &ResponseFunction| ResponseFunction::Blend {
            weight: w,
            from: Box::new(a.clone()),
            to: Box::new(b.clone()),
        };
        MaterialModel { epsilon: mix(&self.from.epsilon, &self.to.epsilon), mu: mix(&self.from.mu, &self.to.mu) }
    }

    /// Homogeneous approximation with `steps` equal layers, each taking the
    /// blend at its midpoint.
    pub fn staircase(&self, steps: usize) -> Vec<Layer> {
        let h = self.thickness / steps as f64;
        (0..steps)
            .map(|i| {
                let w = self.shape.weight((i as f64 + 0.5) / steps as f64);
                Layer::finite(format!("graded[{i}]"), Material::Medium(self.blended(w)), h)
            })
            .collect()
    }
}

/// A stack whose interior contains a staircased [`GradedProfile`], keeping
/// the continuous profile for analytic material gradients.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedStack {
    pub stack: LayerStack,
    pub profile: GradedProfile,
    /// z where the profile starts.
    pub start: f64,
    pub steps: usize,
}

impl GradedStack {
    /// `below` must start with a semi-infinite layer and `above` end with one.
    pub fn new(below: Vec<Layer>, profile: GradedProfile, steps: usize, above: Vec<Layer>) -> Result<Self> {
        if steps == 0 || !(profile.thickness > 0.0) {
            return Err(Error::Stack("graded profile needs positive thickness and at least one step".into()));
        }
        let n_below = below.len();
        let mut layers = below;
        layers.extend(profile.staircase(steps));
        layers.extend(above);
        let stack = LayerStack::new(layers)?;
        let start = stack.lower(n_below);
        Ok(Self { stack, profile, start, steps })
    }

    /// (∂_z ε, ∂_z (1/μ)) of the continuous profile at (z, iξ).
    pub fn gradients(&self, z: f64, xi: f64) -> Result<(f64, f64)> {
        let s = (z - self.start) / self.profile.thickness;
        let dw = self.profile.shape.slope(s) / self.profile.thickness;
        if dw == 0.0 {
            return Ok((0.0, 0.0));
        }
        let p = &self.profile;
        let d_eps = dw * (p.to.epsilon.eval_imag_axis(xi)? - p.from.epsilon.eval_imag_axis(xi)?);
        if !d_eps.is_finite() {
            return Err(Error::validation("graded profile gradient is singular at this frequency"));
        }
        let w = p.shape.weight(s);
        let mu_from = p.from.mu.eval_imag_axis(xi)?;
        let mu_to = p.to.mu.eval_imag_axis(xi)?;
        let mu = (1.0 - w) * mu_from + w * mu_to;
        Ok((d_eps, -dw * (mu_to - mu_from) / (mu * mu)))
    }
}
