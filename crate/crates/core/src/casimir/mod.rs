//! Casimir observables of a planar stack: energy density, stress tensor,
//! force per area, energy per area, stress divergence and field
//! fluctuation spectra.
//!
//! Imaginary-frequency observables share one pattern: per frequency, the
//! coincidence-limit components are combined into the observable at the
//! level of the k⊥ integrand, integrated over k⊥, then summed over
//! Matsubara frequencies (k_B T Σ′) or integrated over ξ at zero
//! temperature ((ħ/2π)∫dξ).

mod energy;
mod local;
mod report;
mod spectra;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::constants::{C, HBAR, K_B};
use crate::error::{Error, Result};
use crate::green1d::KQuadrature;
use crate::spectral::quadrature::{norm, Integral};
use crate::spectral::{matsubara_grid, primed_sum, zero_t_integral, HalfLineControl, Truncation};

pub use energy::{energy_per_area, EnergyPerArea};
pub use local::{
    energy_density, energy_density_t0, force_per_area, local_observables, stress_divergence, stress_tensor,
    stress_tensor_t0, Divergence, EnergyDensity, LocalObservables, MaterialGradient, StressTensor,
};
pub use report::{profile, profile_grid, FieldStressReport, ProfileOptions, ReportMetadata};
pub use spectra::{fluctuation_spectra, FluctuationSpectra, SpectraOptions};

/// Absolute temperature, with zero handled by a frequency integral.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Temperature {
    Zero,
    Kelvin(f64),
}

impl Temperature {
    /// `0` maps to [`Temperature::Zero`].
    pub fn from_kelvin(t: f64) -> Result<Self> {
        if t == 0.0 {
            Ok(Temperature::Zero)
        } else if t > 0.0 && t.is_finite() {
            Ok(Temperature::Kelvin(t))
        } else {
            Err(Error::validation(format!("temperature must be >= 0 K, got {t}")))
        }
    }

    pub fn kelvin(&self) -> f64 {
        match self {
            Temperature::Zero => 0.0,
            Temperature::Kelvin(t) => *t,
        }
    }
}

impl std::fmt::Display for Temperature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Temperature::Zero => write!(f, "zero"),
            Temperature::Kelvin(t) => write!(f, "{t} K"),
        }
    }
}

impl Serialize for Temperature {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Temperature::Zero => s.serialize_str("zero"),
            Temperature::Kelvin(t) => s.serialize_f64(*t),
        }
    }
}

impl<'de> Deserialize<'de> for Temperature {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Number(f64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Number(t) => Temperature::from_kelvin(t).map_err(serde::de::Error::custom),
            Repr::Text(s) if s == "zero" => Ok(Temperature::Zero),
            Repr::Text(s) => Err(serde::de::Error::custom(format!("expected kelvin or \"zero\", got \"{s}\""))),
        }
    }
}

/// Numerical controls shared by all observables.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Settings {
    pub k: KQuadrature,
    /// Zero-temperature ξ integral; its `scale` is set per evaluation from
    /// the geometry.
    pub xi: HalfLineControl,
    pub truncation: Truncation,
}

impl Settings {
    /// Same settings with every relative tolerance set to `tol`.
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.k.rel_tol = tol;
        self.xi.rel_tol = tol;
        if let Truncation::Adaptive { rel_tol, .. } | Truncation::TailBound { rel_tol, .. } = &mut self.truncation {
            *rel_tol = tol * 1e-2;
        }
        self
    }
}

/// How the frequency sum or integral behind a number was evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Convergence {
    /// Matsubara terms, or exp-sinh nodes at zero temperature.
    pub evaluations: usize,
    /// Size of the last Matsubara term or the last refinement change, in
    /// the units of the result.
    pub error_estimate: f64,
    pub converged: bool,
}

impl Convergence {
    pub(crate) fn exact() -> Self {
        Self { evaluations: 0, error_estimate: 0.0, converged: true }
    }
}

/// k_B T Σ′ f(ξ_n), or (ħ/2π)∫₀^∞ f(ξ) dξ at zero temperature.
///
/// `length` sets the ξ scale c/(2·length) of the zero-temperature quadrature.
pub(crate) fn over_frequencies<const N: usize, F>(
    f: F,
    temperature: Temperature,
    length: f64,
    settings: &Settings,
) -> Result<([f64; N], Convergence)>
where
    F: Fn(f64) -> Result<[f64; N]> + Sync,
{
    match temperature {
        Temperature::Kelvin(t) => {
            let grid = matsubara_grid(t, settings.truncation)?;
            let sum = primed_sum(&f, &grid)?;
            let pre = K_B * t;
            let last = sum.terms.last().map(norm).unwrap_or(0.0);
            Ok((
                sum.value.map(|v| pre * v),
                Convergence { evaluations: sum.terms.len(), error_estimate: pre * last, converged: true },
            ))
        }
        Temperature::Zero => {
            if !(length > 0.0 && length.is_finite()) {
                return Err(Error::validation("zero-temperature integral needs a finite length scale"));
            }
            let ctl = HalfLineControl { scale: C / (2.0 * length), ..settings.xi };
            let int = zero_t_integral(f, &ctl)?;
            let pre = HBAR / (2.0 * std::f64::consts::PI);
            Ok((
                int.value.map(|v| pre * v),
                Convergence { evaluations: int.evaluations, error_estimate: pre * int.error, converged: true },
            ))
        }
    }
}

/// Error of a k⊥ integral that stopped short of its tolerance, zero otherwise.
/// Carried as an extra frequency channel so that it is weighted like the
/// result it contaminates.
pub(crate) fn shortfall<const N: usize>(r: &Integral<N>) -> f64 {
    if r.converged {
        0.0
    } else {
        r.error
    }
}

/// Accepts a frequency-level result whose last channel holds the propagated
/// [`shortfall`] when that error is within `rel_tol` of the other channels.
pub(crate) fn accept_shortfall<const N: usize>(v: &[f64; N], rel_tol: f64) -> Result<()> {
    let (values, err) = v.split_at(N - 1);
    let size = values.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if err[0].abs() > rel_tol * size {
        return Err(Error::Integration(format!(
            "k-integrals that reached their interval limit carry error {:e} against a result of size {size:e}",
            err[0]
        )));
    }
    Ok(())
}
