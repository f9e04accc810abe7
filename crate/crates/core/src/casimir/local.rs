//! Observables at a single point z.

use serde::{Deserialize, Serialize};

use super::{accept_shortfall, over_frequencies, shortfall, Convergence, Settings, Temperature};
use crate::error::{Error, Result};
use crate::green1d::{integrate_k, Components, FrequencyView, KQuadrature};
use crate::stack::{GradedStack, LayerStack, Location};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyDensity {
    /// ρ [J/m³].
    pub value: f64,
    pub z: f64,
    pub temperature: Temperature,
    pub convergence: Convergence,
}

/// Diagonal stress tensor [Pa]; off-diagonal components vanish in planar
/// geometry.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StressTensor {
    pub xx: f64,
    pub yy: f64,
    pub zz: f64,
    pub z: f64,
    pub temperature: Temperature,
    pub convergence: Convergence,
}

impl StressTensor {
    pub fn component(&self, i: usize, j: usize) -> f64 {
        self.matrix()[i][j]
    }

    pub fn matrix(&self) -> [[f64; 3]; 3] {
        [[self.xx, 0.0, 0.0], [0.0, self.yy, 0.0], [0.0, 0.0, self.zz]]
    }
}

/// ρ and the stress tensor from one pass over frequencies.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalObservables {
    pub z: f64,
    pub rho: f64,
    pub sigma_xx: f64,
    pub sigma_zz: f64,
    pub convergence: Convergence,
}

/// z-component of the stress divergence [Pa/m].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Divergence {
    pub value: f64,
    pub z: f64,
    pub temperature: Temperature,
    pub convergence: Convergence,
}

fn interior_point(stack: &LayerStack, z: f64) -> Result<Location> {
    if !z.is_finite() {
        return Err(Error::validation("evaluation point must be finite"));
    }
    let loc = stack.locate(z);
    if loc.on_interface() {
        return Err(Error::validation(format!("z = {z:e} lies on an interface; observables are discontinuous there")));
    }
    Ok(loc)
}

/// Up to three observables evaluated together; unused channels stay zero.
type Channels = [f64; 3];

/// Runs `per_k` through the k⊥ and frequency integrals at `loc`.
fn evaluate<F>(stack: &LayerStack, loc: &Location, t: Temperature, settings: &Settings, per_k: F) -> Result<(Channels, Convergence)>
where
    F: Fn(&FrequencyView<'_>, &Components, f64) -> (Channels, f64) + Sync,
{
    if stack.layer(loc.index).material.is_mirror() || stack.is_all_vacuum() {
        return Ok(([0.0; 3], Convergence::exact()));
    }
    let kq: KQuadrature = settings.k;
    let (v, convergence) = over_frequencies(
        |xi| {
            let view = FrequencyView::new(stack, xi)?;
            let r = integrate_k(&view, loc, |c, k| per_k(&view, c, k), &kq)?;
            Ok([r.value[0], r.value[1], r.value[2], shortfall(&r)])
        },
        t,
        loc.nearest(),
        settings,
    )?;
    accept_shortfall(&v, kq.rel_tol)?;
    Ok(([v[0], v[1], v[2]], convergence))
}

fn rho_k(view: &FrequencyView<'_>, index: usize, c: &Components) -> (f64, f64) {
    match view.medium(index) {
        Some(m) => c.weighted_trace(m.dispersion_e, m.dispersion_b),
        None => (0.0, 0.0),
    }
}

/// ρ, σ_xx and σ_zz at z.
pub fn local_observables(stack: &LayerStack, z: f64, t: Temperature, settings: &Settings) -> Result<LocalObservables> {
    let loc = interior_point(stack, z)?;
    let j = loc.index;
    let (v, convergence) = evaluate(stack, &loc, t, settings, |view, c, _| {
        let (rho, rho_size) = rho_k(view, j, c);
        let (sxx, sxx_size) = c.sigma_xx();
        let szz = c.sigma_zz();
        ([rho, sxx, szz], rho_size + sxx_size + szz.abs())
    })?;
    Ok(LocalObservables { z, rho: v[0], sigma_xx: v[1], sigma_zz: v[2], convergence })
}

/// Casimir energy density at finite temperature.
pub fn energy_density(stack: &LayerStack, z: f64, temperature: f64, settings: &Settings) -> Result<EnergyDensity> {
    if !(temperature > 0.0) {
        return Err(Error::validation("energy_density needs T > 0; use energy_density_t0 at zero temperature"));
    }
    energy_density_at(stack, z, Temperature::Kelvin(temperature), settings)
}

/// Casimir energy density at zero temperature.
pub fn energy_density_t0(stack: &LayerStack, z: f64, settings: &Settings) -> Result<EnergyDensity> {
    energy_density_at(stack, z, Temperature::Zero, settings)
}

pub(crate) fn energy_density_at(stack: &LayerStack, z: f64, t: Temperature, settings: &Settings) -> Result<EnergyDensity> {
    let loc = interior_point(stack, z)?;
    let j = loc.index;
    let (v, convergence) = evaluate(stack, &loc, t, settings, |view, c, _| {
        let (rho, size) = rho_k(view, j, c);
        ([rho, 0.0, 0.0], size)
    })?;
    Ok(EnergyDensity { value: v[0], z, temperature: t, convergence })
}

/// Casimir stress tensor at finite temperature.
pub fn stress_tensor(stack: &LayerStack, z: f64, temperature: f64, settings: &Settings) -> Result<StressTensor> {
    if !(temperature > 0.0) {
        return Err(Error::validation("stress_tensor needs T > 0; use stress_tensor_t0 at zero temperature"));
    }
    stress_tensor_at(stack, z, Temperature::Kelvin(temperature), settings)
}

/// Casimir stress tensor at zero temperature.
pub fn stress_tensor_t0(stack: &LayerStack, z: f64, settings: &Settings) -> Result<StressTensor> {
    stress_tensor_at(stack, z, Temperature::Zero, settings)
}

pub(crate) fn stress_tensor_at(stack: &LayerStack, z: f64, t: Temperature, settings: &Settings) -> Result<StressTensor> {
    let loc = interior_point(stack, z)?;
    let (v, convergence) = evaluate(stack, &loc, t, settings, |_, c, _| {
        let (sxx, sxx_size) = c.sigma_xx();
        let szz = c.sigma_zz();
        ([sxx, szz, 0.0], sxx_size + szz.abs())
    })?;
    Ok(StressTensor { xx: v[0], yy: v[0], zz: v[1], z, temperature: t, convergence })
}

/// Force per area between the half-stacks on either side of interior layer
/// `gap`, from σ_zz at the layer midpoint. Negative values attract.
pub fn force_per_area(stack: &LayerStack, gap: usize, t: Temperature, settings: &Settings) -> Result<f64> {
    let z = stack.midpoint(gap)?;
    if stack.layer(gap).material.is_mirror() {
        return Err(Error::Stack(format!("layer {gap} is a perfect mirror and cannot be the gap")));
    }
    let loc = stack.locate(z);
    Ok(evaluate(stack, &loc, t, settings, |_, c, _| {
        let szz = c.sigma_zz();
        ([szz, 0.0, 0.0], szz.abs())
    })?
    .0[0])
}

/// Source of the material gradients entering the stress divergence.
pub trait MaterialGradient: Sync {
    fn layers(&self) -> &LayerStack;

    /// (∂_z ε, ∂_z(1/μ)) at (z, iξ).
    fn gradients(&self, z: f64, xi: f64) -> Result<(f64, f64)>;

    /// True when the material functions are constant near z at every frequency.
    fn is_flat(&self, z: f64) -> bool;
}

impl MaterialGradient for LayerStack {
    fn layers(&self) -> &LayerStack {
        self
    }

    fn gradients(&self, _z: f64, _xi: f64) -> Result<(f64, f64)> {
        Ok((0.0, 0.0))
    }

    fn is_flat(&self, _z: f64) -> bool {
        true
    }
}

impl MaterialGradient for GradedStack {
    fn layers(&self) -> &LayerStack {
        &self.stack
    }

    fn gradients(&self, z: f64, xi: f64) -> Result<(f64, f64)> {
        GradedStack::gradients(self, z, xi)
    }

    fn is_flat(&self, z: f64) -> bool {
        let s = (z - self.start) / self.profile.thickness;
        !(0.0..=1.0).contains(&s)
    }
}

/// z-component of ∇·σ at z: k_B T Σ′[(1/c²) tr ΔE ∂_z ε − tr ΔB ∂_z(1/μ)].
///
/// Gradients come from the continuous material profile, coincidence limits
/// from the layered stack.
pub fn stress_divergence<G: MaterialGradient>(graded: &G, z: f64, t: Temperature, settings: &Settings) -> Result<Divergence> {
    let stack = graded.layers();
    let loc = interior_point(stack, z)?;
    if graded.is_flat(z) || stack.layer(loc.index).material.is_mirror() || stack.is_all_vacuum() {
        return Ok(Divergence { value: 0.0, z, temperature: t, convergence: Convergence::exact() });
    }
    let kq = settings.k;
    let (v, convergence) = over_frequencies(
        |xi| {
            let (d_eps, d_kappa) = graded.gradients(z, xi)?;
            let view = FrequencyView::new(stack, xi)?;
            let Some(m) = view.medium(loc.index).copied() else {
                return Ok([0.0; 2]);
            };
            if d_eps == 0.0 && d_kappa == 0.0 {
                return Ok([0.0; 2]);
            }
            let (ce, cb) = (d_eps / m.eps.value(), -m.mu.coef * d_kappa);
            let r = integrate_k(
                &view,
                &loc,
                |c, _| {
                    let (e, e_size) = c.weighted_trace(ce, 0.0);
                    let (b, b_size) = c.weighted_trace(0.0, cb);
                    ([e + b], e_size + b_size)
                },
                &kq,
            )?;
            Ok([r.value[0], shortfall(&r)])
        },
        t,
        loc.nearest(),
        settings,
    )?;
    accept_shortfall(&v, kq.rel_tol)?;
    Ok(Divergence { value: v[0], z, temperature: t, convergence })
}
