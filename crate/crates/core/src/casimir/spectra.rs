//! Equal-time field fluctuation spectra on the real frequency axis.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::Temperature;
use crate::constants::{C, HBAR, MU_0};
use crate::error::{Error, Result};
use crate::green1d::real_axis::RealFrequencyView;
use crate::green1d::KQuadrature;
use crate::spectral::quadrature::{integrate, AdaptiveControl};
use crate::spectral::thermal_weight;
use crate::stack::LayerStack;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectraOptions {
    /// Point-splitting distance [m] for the bulk part.
    pub cutoff: f64,
    pub k: KQuadrature,
}

impl Default for SpectraOptions {
    fn default() -> Self {
        Self { cutoff: 1e-9, k: KQuadrature { max_intervals: 4000, ..KQuadrature::default() } }
    }
}

/// Traces of the electric [V²·s/m²] and magnetic [T²·s] spectral densities at
/// one point and frequency.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FluctuationSpectra {
    pub omega: f64,
    pub z: f64,
    pub temperature: Temperature,
    pub coth: f64,
    /// Scattering (regularized) parts.
    pub ee_scattering: f64,
    pub bb_scattering: f64,
    /// Homogeneous-medium parts at point splitting `cutoff`.
    pub ee_bulk: f64,
    pub bb_bulk: f64,
    pub cutoff: f64,
    /// True when the bulk part grows without bound as `cutoff` → 0, which
    /// happens in absorbing media.
    pub bulk_diverges: bool,
    /// Im tr G₀ of the local medium at the cutoff [1/m], before prefactors.
    pub bulk_trace: f64,
}

impl FluctuationSpectra {
    pub fn ee_raw(&self) -> f64 {
        self.ee_scattering + self.ee_bulk
    }

    pub fn bb_raw(&self) -> f64 {
        self.bb_scattering + self.bb_bulk
    }
}

/// Breakpoints Re(n_j)ω/c where some layer's κ changes character.
fn branch_points(view: &RealFrequencyView<'_>, layers: usize) -> Vec<f64> {
    let mut b: Vec<f64> = (0..layers).map(|j| view.index(j).re * view.omega / C).filter(|&x| x > 0.0).collect();
    b.sort_by(f64::total_cmp);
    b.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs());
    b
}

/// ω² coth·Im tr G and coth·Im tr[∇×G×∇′] at (z, z) with prefactor ħμ₀/π.
pub fn fluctuation_spectra(stack: &LayerStack, z: f64, omega: f64, t: Temperature, opts: &SpectraOptions) -> Result<FluctuationSpectra> {
    if !(opts.cutoff > 0.0) {
        return Err(Error::validation("point-splitting cutoff must be positive"));
    }
    let view = RealFrequencyView::new(stack, omega)?;
    let loc = stack.locate(z);
    if loc.on_interface() {
        return Err(Error::validation(format!("z = {z:e} lies on an interface")));
    }
    let weight = thermal_weight(omega, t.kelvin())?;
    let w = omega / C;
    let (scat_g, scat_curl) = if stack.is_all_vacuum() {
        (0.0, 0.0)
    } else {
        scattering(&view, stack, &loc, opts)?
    };

    let (eps, mu) = view.response(loc.index);
    let km = view.index(loc.index) * w;
    let r = opts.cutoff;
    let phase = (Complex64::i() * km * r).exp() / (2.0 * std::f64::consts::PI * r);
    let bulk_g = (mu * phase).im;
    let bulk_curl = (mu * km * km * phase).im;
    let pre = HBAR * MU_0 / std::f64::consts::PI * weight.coth;
    Ok(FluctuationSpectra {
        omega,
        z,
        temperature: t,
        coth: weight.coth,
        ee_scattering: pre * omega * omega * scat_g,
        bb_scattering: pre * scat_curl,
        ee_bulk: pre * omega * omega * bulk_g,
        bb_bulk: pre * bulk_curl,
        cutoff: r,
        bulk_diverges: mu.im != 0.0 || eps.im != 0.0,
        bulk_trace: bulk_g,
    })
}

/// ∫ k dk/2π of (Im tr G, Im tr curl-curl), with the k-axis broken at every
/// branch point and the square-root behaviour there removed by substitution.
fn scattering(view: &RealFrequencyView<'_>, stack: &LayerStack, loc: &crate::stack::Location, opts: &SpectraOptions) -> Result<(f64, f64)> {
    let w2 = (view.omega / C).powi(2);
    let f = |k: f64| -> [f64; 2] {
        let (g, curl) = view.traces(loc, k);
        let s = k / (2.0 * std::f64::consts::PI);
        [s * w2 * g.im, s * curl.im]
    };
    let quad = AdaptiveControl { rel_tol: opts.k.rel_tol, abs_tol: opts.k.abs_tol, max_intervals: opts.k.max_intervals };
    let breaks = branch_points(view, stack.len());
    let mut total = [0.0; 2];
    let mut add = |v: [f64; 2]| {
        total[0] += v[0];
        total[1] += v[1];
    };
    let mut a = 0.0;
    for &b in &breaks {
        let seg = integrate(
            |t: f64| {
                let (s, c) = (std::f64::consts::PI * t).sin_cos();
                let jac = 0.5 * std::f64::consts::PI * (b - a) * s;
                Ok(f(a + 0.5 * (b - a) * (1.0 - c)).map(|x| x * jac))
            },
            0.0,
            1.0,
            &quad,
        )?;
        add(seg.value);
        a = b;
    }
    let dist = loc.nearest();
    let span = opts.k.decay_exponent / (2.0 * dist);
    let tail = integrate(|u: f64| Ok(f(a + u * u).map(|x| 2.0 * u * x)), 0.0, span.sqrt(), &quad)?;
    add(tail.value);
    if !(total[0].is_finite() && total[1].is_finite()) {
        return Err(Error::Integration(format!("spectral k-integral not finite at omega = {:e}", view.omega)));
    }
    Ok((total[0] / w2, total[1]))
}
