//! Energy per area: ρ integrated over z through every layer.
//!
//! The z-integral is done analytically per (ξ, k⊥). Each face's isolated
//! interface contribution, r e^{−2κx}/(2κ) integrated over a half-line, is
//! removed. It depends only on the two materials that meet at that face, so it
//! does not change with layer thicknesses. It also carries the
//! non-integrable interface self-energy.

use serde::{Deserialize, Serialize};

use super::{accept_shortfall, over_frequencies, shortfall, Convergence, Settings, Temperature};
use crate::error::{Error, Result};
use crate::green1d::kernel::{one_minus, Parts};
use crate::green1d::{Components, Direction, FrequencyView, Polarization};
use crate::spectral::quadrature::{integrate_scaled_partial, AdaptiveControl};
use crate::stack::LayerStack;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyPerArea {
    /// E/A [J/m²].
    pub value: f64,
    /// Contribution of each layer, in stack order.
    pub per_layer: Vec<f64>,
    pub temperature: Temperature,
    pub convergence: Convergence,
}

/// z-integrals over layer j of the single-reflection and round-trip parts of
/// one polarization, after interface subtraction.
fn integrated(view: &FrequencyView<'_>, pol: Polarization, j: usize, kappa: f64, k: f64) -> Result<Parts<f64>> {
    let up = view.reflection_excess(pol, j, Direction::Up, k)?;
    let dn = view.reflection_excess(pol, j, Direction::Down, k)?;
    let two_k = 2.0 * kappa;
    let (single, round_trip) = match (up, dn) {
        (Some((ru, iu, du)), Some((rd, id, dd))) => {
            let d = view.stack.thickness(j);
            let e = (-two_k * d).exp();
            let x = ru * rd * e;
            let denom = one_minus(ru * rd, two_k * d);
            let delta = (du + dd - (ru + rd) * e) / two_k;
            let iso = (iu + id) / two_k;
            ((delta + iso * x) / denom, x * d / denom)
        }
        (Some((_, _, delta)), None) | (None, Some((_, _, delta))) => (delta / two_k, 0.0),
        (None, None) => (0.0, 0.0),
    };
    Ok(Parts { single, round_trip })
}

/// Per-layer ∫ρ dz integrands at (ξ, k⊥), per unit ∫ k dk/2π. Returns the
/// summed size of the individual terms.
fn layer_energies(view: &FrequencyView<'_>, k: f64, out: &mut [f64]) -> Result<f64> {
    let mut size = 0.0;
    for (j, slot) in out.iter_mut().enumerate() {
        let Some(m) = view.medium(j).copied() else {
            *slot = 0.0;
            continue;
        };
        let kappa = m.kappa(k);
        let s = integrated(view, Polarization::S, j, kappa, k)?;
        let p = integrated(view, Polarization::P, j, kappa, k)?;
        let c = Components::assemble(kappa, k, m.index_term, &s, &p);
        let (value, scale) = c.weighted_trace(m.dispersion_e, m.dispersion_b);
        *slot = value;
        size += scale;
    }
    Ok(size)
}

const MAX_LAYERS: usize = 64;
/// Per-layer channels plus the k⊥ shortfall.
const CHANNELS: usize = MAX_LAYERS + 1;

/// Casimir energy per area of the whole stack, as a function of its layer
/// thicknesses. `gap` names the layer whose thickness the caller varies; it
/// sets the frequency and wavenumber scales.
pub fn energy_per_area(stack: &LayerStack, gap: usize, t: Temperature, settings: &Settings) -> Result<EnergyPerArea> {
    stack.check_interior(gap)?;
    let n = stack.len();
    if n > MAX_LAYERS {
        return Err(Error::validation(format!("energy_per_area supports at most {MAX_LAYERS} layers, got {n}")));
    }
    if stack.is_all_vacuum() {
        return Ok(EnergyPerArea { value: 0.0, per_layer: vec![0.0; n], temperature: t, convergence: Convergence::exact() });
    }
    let thinnest = stack.min_thickness();
    let k_max = settings.k.decay_exponent / (2.0 * thinnest);
    let quad = AdaptiveControl { rel_tol: settings.k.rel_tol, abs_tol: settings.k.abs_tol, max_intervals: settings.k.max_intervals };
    let (v, convergence) = over_frequencies::<CHANNELS, _>(
        |xi| {
            let view = FrequencyView::new(stack, xi)?;
            let integrand = |k: f64| -> Result<([f64; CHANNELS], f64)> {
                let mut out = [0.0; CHANNELS];
                let size = layer_energies(&view, k, &mut out[..n])?;
                let w = k / (2.0 * std::f64::consts::PI);
                Ok((out.map(|x| x * w), size * w))
            };
            let r = integrate_scaled_partial(integrand, 0.0, k_max, &quad)?;
            let mut out = r.value;
            out[MAX_LAYERS] = shortfall(&r);
            Ok(out)
        },
        t,
        stack.thickness(gap),
        settings,
    )?;
    accept_shortfall(&v, settings.k.rel_tol)?;
    let per_layer = v[..n].to_vec();
    let value = crate::spectral::quadrature::pairwise_sum(&per_layer);
    Ok(EnergyPerArea { value, per_layer, temperature: t, convergence })
}
