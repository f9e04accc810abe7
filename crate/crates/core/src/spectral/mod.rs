//! Matsubara grids, primed sums, zero-temperature frequency integrals and
//! thermal weights.

pub mod quadrature;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::{HBAR, K_B};
use crate::error::{Error, Result};
pub use quadrature::{AdaptiveControl, HalfLineControl, Integral};
use quadrature::{norm, pairwise_sum_vec};

/// How a Matsubara series is truncated.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum Truncation {
    /// Terms n = 0..=max_n.
    Fixed { max_n: usize },
    /// Stop once `consecutive` successive terms are each below
    /// `rel_tol` times the running sum.
    Adaptive { rel_tol: f64, consecutive: usize, max_terms: usize },
    /// Stop once a geometric bound on the remaining tail, fitted to the last
    /// two terms, is below `rel_tol` times the running sum.
    TailBound { rel_tol: f64, max_terms: usize },
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation::Adaptive { rel_tol: 1e-10, consecutive: 3, max_terms: 100_000 }
    }
}

/// Matsubara frequencies ξ_n = 2π k_B T n / ħ with primed-sum weights.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThermalGrid {
    pub temperature: f64,
    pub truncation: Truncation,
}

impl ThermalGrid {
    /// Spacing ξ_1 [rad/s].
    pub fn spacing(&self) -> f64 {
        2.0 * std::f64::consts::PI * K_B * self.temperature / HBAR
    }

    pub fn frequency(&self, n: usize) -> f64 {
        n as f64 * self.spacing()
    }

    pub fn weight(&self, n: usize) -> f64 {
        if n == 0 {
            0.5
        } else {
            1.0
        }
    }

    /// k_B T.
    pub fn thermal_energy(&self) -> f64 {
        K_B * self.temperature
    }

    fn max_terms(&self) -> usize {
        match self.truncation {
            Truncation::Fixed { max_n } => max_n + 1,
            Truncation::Adaptive { max_terms, .. } | Truncation::TailBound { max_terms, .. } => max_terms,
        }
    }
}

pub fn matsubara_grid(temperature: f64, truncation: Truncation) -> Result<ThermalGrid> {
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(Error::validation(format!(
            "temperature must be positive and finite for a Matsubara grid, got {temperature}"
        )));
    }
    match truncation {
        Truncation::Adaptive { rel_tol, max_terms, .. } | Truncation::TailBound { rel_tol, max_terms }
            if !(rel_tol > 0.0) || max_terms == 0 =>
        {
            return Err(Error::validation("truncation tolerance and term cap must be positive"));
        }
        _ => {}
    }
    Ok(ThermalGrid { temperature, truncation })
}

/// coth(ħω/2k_BT) together with the Planck occupancy.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThermalWeight {
    pub omega: f64,
    pub coth: f64,
    pub occupancy: f64,
}

/// Thermal weight at real frequency ω > 0. `temperature = 0` gives coth = 1.
pub fn thermal_weight(omega: f64, temperature: f64) -> Result<ThermalWeight> {
    if !(omega > 0.0) || temperature < 0.0 {
        return Err(Error::validation("thermal weight needs omega > 0 and T >= 0"));
    }
    if temperature == 0.0 {
        return Ok(ThermalWeight { omega, coth: 1.0, occupancy: 0.0 });
    }
    let x = HBAR * omega / (K_B * temperature);
    let occupancy = 1.0 / x.exp_m1();
    let half = 0.5 * x;
    let coth = if half < 1e-4 {
        1.0 / half + half / 3.0
    } else {
        1.0 / half.tanh()
    };
    Ok(ThermalWeight { omega, coth, occupancy })
}

/// A Matsubara summand. `static_term` is the ξ → 0 limit hook; callers
/// override it when the n = 0 term needs a limit rather than a plain
/// evaluation.
pub trait Summand<const N: usize>: Sync {
    fn term(&self, xi: f64) -> Result<[f64; N]>;

    fn static_term(&self) -> Result<[f64; N]> {
        self.term(0.0)
    }
}

impl<const N: usize, F> Summand<N> for F
where
    F: Fn(f64) -> Result<[f64; N]> + Sync,
{
    fn term(&self, xi: f64) -> Result<[f64; N]> {
        self(xi)
    }
}

/// Outcome of a truncated primed sum.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesSum<const N: usize> {
    pub value: [f64; N],
    /// Weighted terms w_n f(ξ_n) in order.
    pub terms: Vec<[f64; N]>,
}

impl<const N: usize> SeriesSum<N> {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Σ′ w_n f(ξ_n) without the k_B T prefactor.
///
/// Terms are evaluated in parallel blocks and reduced pairwise in index
/// order, so the result does not depend on the thread count.
pub fn primed_sum<const N: usize, S: Summand<N>>(summand: &S, grid: &ThermalGrid) -> Result<SeriesSum<N>> {
    let cap = grid.max_terms();
    let eval = |n: usize| -> Result<[f64; N]> {
        let v = if n == 0 { summand.static_term() } else { summand.term(grid.frequency(n)) };
        let mut v = v.map_err(|e| annotate(e, n))?;
        for x in v.iter_mut() {
            *x *= grid.weight(n);
        }
        Ok(v)
    };
    let mut terms: Vec<[f64; N]> = Vec::new();
    let mut quiet = 0usize;
    let mut block = 8usize;
    'outer: while terms.len() < cap {
        let start = terms.len();
        let end = (start + block).min(cap);
        let fresh: Vec<[f64; N]> = (start..end).into_par_iter().map(eval).collect::<Result<_>>()?;
        for v in fresh {
            terms.push(v);
            if stop(&grid.truncation, &terms, &mut quiet) {
                break 'outer;
            }
        }
        block = (block * 2).min(256);
    }
    if terms.len() >= cap && !matches!(grid.truncation, Truncation::Fixed { .. }) {
        let last = terms.last().map(norm).unwrap_or(0.0);
        let total = norm(&pairwise_sum_vec(&terms));
        if last > 0.0 && last > 1e-6 * total {
            return Err(Error::Truncation(format!(
                "Matsubara series not converged after {cap} terms (last term {last:e}, sum {total:e})"
            )));
        }
    }
    Ok(SeriesSum { value: pairwise_sum_vec(&terms), terms })
}

fn annotate(e: Error, n: usize) -> Error {
    match e {
        Error::Integration(m) => Error::Integration(format!("Matsubara term n = {n}: {m}")),
        Error::Validation(m) => Error::Validation(format!("Matsubara term n = {n}: {m}")),
        other => other,
    }
}

fn stop<const N: usize>(t: &Truncation, terms: &[[f64; N]], quiet: &mut usize) -> bool {
    match *t {
        Truncation::Fixed { .. } => false,
        Truncation::Adaptive { rel_tol, consecutive, .. } => {
            let running = norm(&pairwise_sum_vec(terms));
            let last = norm(terms.last().unwrap());
            if last <= rel_tol * running {
                *quiet += 1;
            } else {
                *quiet = 0;
            }
            *quiet >= consecutive.max(1)
        }
        Truncation::TailBound { rel_tol, .. } => {
            let n = terms.len();
            if n < 3 {
                return false;
            }
            let (a, b) = (norm(&terms[n - 2]), norm(&terms[n - 1]));
            if b == 0.0 {
                return a == 0.0;
            }
            let q = b / a;
            if q >= 1.0 {
                return false;
            }
            b * q / (1.0 - q) <= rel_tol * norm(&pairwise_sum_vec(terms))
        }
    }
}

/// Scalar convenience wrapper around [`primed_sum`].
pub fn primed_sum_scalar<F>(f: F, grid: &ThermalGrid) -> Result<f64>
where
    F: Fn(f64) -> f64 + Sync,
{
    Ok(primed_sum(&|x: f64| Ok([f(x)]), grid)?.value[0])
}

/// ∫₀^∞ f(ξ) dξ without the ħ/2π prefactor.
pub fn zero_t_integral<const N: usize, F>(f: F, ctl: &HalfLineControl) -> Result<Integral<N>>
where
    F: Fn(f64) -> Result<[f64; N]> + Sync,
{
    quadrature::integrate_half_line(f, ctl)
}
