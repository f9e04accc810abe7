//! Independent reference values: closed forms for perfect mirrors and a
//! direct two-half-space Lifshitz evaluation.
//!
//! Nothing here calls into [`crate::green1d`] or [`crate::casimir`]; the
//! reflection coefficients, frequency sums and quadrature are separate code,
//! so agreement with the main pipeline is evidence rather than repetition.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use serde::{Deserialize, Serialize};

use crate::casimir::Temperature;
use crate::constants::{C, HBAR, K_B, ZETA_3};
use crate::error::{Error, Result};
use crate::materials::{Material, StaticTe};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub value: f64,
    pub method: String,
    pub error_estimate: f64,
}

fn check_gap(a: f64) -> Result<()> {
    if a > 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(Error::validation(format!("gap must be positive and finite, got {a}")))
    }
}

/// −π²ħc/(240a⁴) [Pa].
pub fn ideal_mirror_pressure_t0(a: f64) -> f64 {
    -PI * PI * HBAR * C / (240.0 * a.powi(4))
}

/// −k_B T ζ(3)/(8πa³), the n = 0 term alone with the static TE mode
/// excluded; twice that when it is included.
pub fn ideal_mirror_pressure_high_t(a: f64, temperature: f64, static_te: StaticTe) -> f64 {
    let modes = match static_te {
        StaticTe::Excluded => 1.0,
        StaticTe::Included => 2.0,
    };
    -modes * K_B * temperature * ZETA_3 / (8.0 * PI * a.powi(3))
}

/// Σ_m e^{−2mqa}[q²/(2ma) + 2q/(2ma)² + 2/(2ma)³] = ∫_q^∞ κ² X/(1 − X) dκ
/// with X = e^{−2κa}.
fn mirror_mode_sum(q: f64, a: f64) -> f64 {
    if q == 0.0 {
        return 2.0 * ZETA_3 / (2.0 * a).powi(3);
    }
    let mut total = 0.0;
    for m in 1.. {
        let l = 2.0 * m as f64 * a;
        let term = (-q * l).exp() * (q * q / l + 2.0 * q / (l * l) + 2.0 / (l * l * l));
        total += term;
        if term <= 1e-17 * total {
            break;
        }
    }
    total
}

/// Pressure between perfect mirrors: the closed form at zero temperature,
/// the Matsubara series with r_s = −1, r_p = +1 at finite temperature.
pub fn ideal_mirror_pressure(a: f64, temperature: Temperature, static_te: StaticTe) -> Result<OracleResult> {
    check_gap(a)?;
    let t = match temperature {
        Temperature::Zero => {
            return Ok(OracleResult { value: ideal_mirror_pressure_t0(a), method: "closed form".into(), error_estimate: 0.0 })
        }
        Temperature::Kelvin(t) => t,
    };
    let spacing = 2.0 * PI * K_B * t / HBAR;
    let static_modes = match static_te {
        StaticTe::Excluded => 1.0,
        StaticTe::Included => 2.0,
    };
    let mut total = 0.5 * static_modes * mirror_mode_sum(0.0, a);
    let mut last = total;
    for n in 1..10_000_000usize {
        let q = n as f64 * spacing / C;
        last = 2.0 * mirror_mode_sum(q, a);
        total += last;
        if last <= 1e-15 * total {
            break;
        }
    }
    let pre = -K_B * t / PI;
    Ok(OracleResult { value: pre * total, method: "mirror Matsubara series".into(), error_estimate: (pre * last).abs() })
}

/// ζ(−n) = (−1)ⁿ B_{n+1}/(n+1) with Bernoulli numbers from the standard
/// recurrence Σ_{k<m} C(m+1, k) B_k = −(m+1) B_m.
fn zeta_negative(n: usize) -> f64 {
    let m_max = n + 1;
    let mut b = vec![0.0f64; m_max + 1];
    b[0] = 1.0;
    for m in 1..=m_max {
        let mut s = 0.0;
        let mut binom = 1.0;
        for (k, bk) in b.iter().enumerate().take(m) {
            s += binom * bk;
            binom *= (m + 1 - k) as f64 / (k + 1) as f64;
        }
        b[m] = -s / (m + 1) as f64;
    }
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    sign * b[n + 1] / (n + 1) as f64
}

/// Uniform energy density between perfect mirrors at zero temperature.
///
/// Mode sum: with ∫d²k/(2π)² √(k² + M²) → −M³/(6π) and two polarizations
/// per n ≥ 1, E/A = −(ħc/6π)(π/a)³ ζ(−3). The cross-check integrates the
/// pressure from a to ∞ with Gauss–Legendre on u = a/a′; the difference
/// is the error estimate.
pub fn ideal_mirror_energy_density(a: f64) -> Result<OracleResult> {
    check_gap(a)?;
    let energy = -(HBAR * C / (6.0 * PI)) * (PI / a).powi(3) * zeta_negative(3);
    let rule = GaussLegendre::new(NonZeroUsize::new(8).unwrap());
    let from_pressure = rule.integrate(0.0, 1.0, |u| if u == 0.0 { 0.0 } else { ideal_mirror_pressure_t0(a / u) * a / (u * u) });
    let rho = energy / a;
    Ok(OracleResult { value: rho, method: "zeta mode sum".into(), error_estimate: (from_pressure / a - rho).abs() })
}

/// Reflection coefficients (s, p) of a half-space seen from vacuum.
fn halfspace_reflection(m: &Material, xi: f64, k: f64) -> Result<(f64, f64)> {
    let k0 = ((xi / C).powi(2) + k * k).sqrt();
    match m {
        Material::PerfectMirror { static_te } => {
            let rs = if xi == 0.0 && *static_te == StaticTe::Excluded { 0.0 } else { -1.0 };
            Ok((rs, 1.0))
        }
        Material::Medium(model) => {
            if xi > 0.0 {
                let eps = model.epsilon.eval_imag_axis(xi)?;
                let mu = model.mu.eval_imag_axis(xi)?;
                let k1 = (eps * mu * (xi / C).powi(2) + k * k).sqrt();
                return Ok(((mu * k0 - k1) / (mu * k0 + k1), (eps * k0 - k1) / (eps * k0 + k1)));
            }
            let eps = model.epsilon.static_limit();
            let mu = model.mu.static_limit();
            if mu.pole_order > 0 {
                return Err(Error::validation("static pole in the permeability"));
            }
            let n2 = match eps.pole_order {
                0 | 1 => 0.0,
                2 => eps.coef * mu.coef / (C * C),
                _ => return Err(Error::validation("static permittivity pole of order > 2")),
            };
            let k1 = (n2 + k * k).sqrt();
            let rs = (mu.coef * k0 - k1) / (mu.coef * k0 + k1);
            let rp = if eps.pole_order > 0 { 1.0 } else { (eps.coef * k0 - k1) / (eps.coef * k0 + k1) };
            Ok((rs, rp))
        }
    }
}

/// Σ_σ r₁r₂X/(1 − r₁r₂X) at (ξ, κ₀), with X = e^{−2κ₀a}.
fn round_trip(m1: &Material, m2: &Material, a: f64, xi: f64, kappa: f64) -> Result<f64> {
    let q = xi / C;
    let k = (kappa * kappa - q * q).max(0.0).sqrt();
    let (s1, p1) = halfspace_reflection(m1, xi, k)?;
    let (s2, p2) = halfspace_reflection(m2, xi, k)?;
    let arg = 2.0 * kappa * a;
    let one = |r: f64| {
        if r == 0.0 {
            return 0.0;
        }
        // 1 − r e^{−arg} without cancellation when r → 1.
        let denom = (1.0 - r) - r * (-arg).exp_m1();
        r * (-arg).exp() / denom
    };
    Ok(one(s1 * s2) + one(p1 * p2))
}

/// Composite Gauss–Legendre over consecutive panels.
fn composite<F: FnMut(f64) -> Result<f64>>(rule: &GaussLegendre, edges: &[f64], mut f: F) -> Result<f64> {
    let mut total = 0.0;
    for w in edges.windows(2) {
        let mut err = None;
        let v = rule.integrate(w[0], w[1], |x| match f(x) {
            Ok(v) => v,
            Err(e) => {
                err.get_or_insert(e);
                0.0
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        total += v;
    }
    Ok(total)
}

/// Panel edges for x = 2κa on [x0, x0 + 64], doubling in width.
fn x_panels(x0: f64) -> Vec<f64> {
    let mut e = vec![x0];
    let mut w = 0.25;
    while *e.last().unwrap() < x0 + 64.0 {
        let next = (e.last().unwrap() + w).min(x0 + 64.0);
        e.push(next);
        w *= 2.0;
    }
    e
}

/// Panel edges for t = q/κ on [0, 1], refined geometrically toward 0 where
/// dispersive reflections vary on the damping scale.
fn t_panels() -> Vec<f64> {
    let mut e = vec![0.0];
    e.extend((-10..0).map(|p| 10f64.powi(p)));
    e.extend([0.3, 0.6, 1.0]);
    e
}

fn lifshitz_at(m1: &Material, m2: &Material, a: f64, t: Temperature, order: usize) -> Result<f64> {
    let rule = GaussLegendre::new(NonZeroUsize::new(order).expect("order > 0"));
    let scale = 1.0 / (2.0 * a);
    match t {
        Temperature::Zero => {
            // P = −(ħc/2π²) ∫₀^∞ κ³ dκ ∫₀¹ dt F(ξ = cκt, κ), κ = x/(2a).
            let tp = t_panels();
            let v = composite(&rule, &x_panels(0.0), |x| {
                let kappa = x * scale;
                let inner = composite(&rule, &tp, |tt| round_trip(m1, m2, a, C * kappa * tt, kappa))?;
                Ok(kappa.powi(3) * inner)
            })?;
            Ok(-HBAR * C / (2.0 * PI * PI) * v * scale)
        }
        Temperature::Kelvin(temp) => {
            // P = −(k_B T/π) Σ′ ∫_{q_n}^∞ κ² F dκ.
            let spacing = 2.0 * PI * K_B * temp / HBAR;
            let term = |n: usize| -> Result<f64> {
                let xi = n as f64 * spacing;
                let x0 = 2.0 * a * xi / C;
                let v = composite(&rule, &x_panels(x0), |x| {
                    let kappa = x * scale;
                    Ok(kappa * kappa * round_trip(m1, m2, a, xi, kappa)?)
                })?;
                Ok(v * scale)
            };
            let mut total = 0.5 * term(0)?;
            for n in 1..1_000_000 {
                let v = term(n)?;
                total += v;
                if v.abs() <= 1e-14 * total.abs() {
                    break;
                }
            }
            Ok(-K_B * temp / PI * total)
        }
    }
}

/// Pressure between two half-spaces across a vacuum gap a, from the
/// textbook Lifshitz formula. The error estimate is the change between
/// 24- and 48-point Gauss–Legendre panels.
pub fn lifshitz_halfspace_pressure(m1: &Material, m2: &Material, a: f64, t: Temperature) -> Result<OracleResult> {
    check_gap(a)?;
    if m1.is_vacuum() || m2.is_vacuum() {
        return Ok(OracleResult { value: 0.0, method: "lifshitz half-space".into(), error_estimate: 0.0 });
    }
    let coarse = lifshitz_at(m1, m2, a, t, 24)?;
    let fine = lifshitz_at(m1, m2, a, t, 48)?;
    if !fine.is_finite() {
        return Err(Error::Oracle("Lifshitz integral is not finite".into()));
    }
    Ok(OracleResult { value: fine, method: "lifshitz half-space".into(), error_estimate: (fine - coarse).abs() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::ResponseFunction;

    #[test]
    fn closed_form_values() {
        assert!((ideal_mirror_pressure_t0(1e-6) / -1.300e-3 - 1.0).abs() < 1e-3);
        assert!((ideal_mirror_pressure_t0(2e-6) * 16.0 / ideal_mirror_pressure_t0(1e-6) - 1.0).abs() < 1e-14);
        let high = ideal_mirror_pressure_high_t(1e-5, 300.0, StaticTe::Excluded);
        assert!((high / -1.98e-7 - 1.0).abs() < 5e-3);
    }

    #[test]
    fn zeta_at_negative_integers() {
        assert!((zeta_negative(1) + 1.0 / 12.0).abs() < 1e-15);
        assert!((zeta_negative(3) - 1.0 / 120.0).abs() < 1e-15);
        assert!(zeta_negative(2).abs() < 1e-15);
    }

    #[test]
    fn energy_density_mode_sum() {
        let r = ideal_mirror_energy_density(1e-6).unwrap();
        assert!((r.value / -4.33e-4 - 1.0).abs() < 2e-3);
        assert!(r.error_estimate < 1e-10 * r.value.abs());
        assert!((3.0 * r.value / ideal_mirror_pressure_t0(1e-6) - 1.0).abs() < 1e-12);
        let half = ideal_mirror_energy_density(2e-6).unwrap();
        assert!((half.value * 16.0 / r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mirror_series_reaches_the_classical_limit() {
        let p = ideal_mirror_pressure(1e-5, Temperature::Kelvin(300.0), StaticTe::Excluded).unwrap();
        let high = ideal_mirror_pressure_high_t(1e-5, 300.0, StaticTe::Excluded);
        assert!((p.value / high - 1.0).abs() < 1e-2, "{} {high}", p.value);
        let cold = ideal_mirror_pressure(1e-6, Temperature::Kelvin(1.0), StaticTe::Included).unwrap();
        assert!((cold.value / ideal_mirror_pressure_t0(1e-6) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn lifshitz_mirror_limit() {
        let m = Material::perfect_mirror();
        for a in [1e-7, 1e-6] {
            let p = lifshitz_halfspace_pressure(&m, &m, a, Temperature::Zero).unwrap();
            assert!((p.value / ideal_mirror_pressure_t0(a) - 1.0).abs() < 1e-6, "{}", p.value);
        }
        let hot = lifshitz_halfspace_pressure(&m, &m, 1e-5, Temperature::Kelvin(300.0)).unwrap();
        let series = ideal_mirror_pressure(1e-5, Temperature::Kelvin(300.0), StaticTe::Excluded).unwrap();
        assert!((hot.value / series.value - 1.0).abs() < 1e-6);
    }

    #[test]
    fn lifshitz_vacuum_and_monotone() {
        let v = lifshitz_halfspace_pressure(&Material::vacuum(), &Material::drude(1e16, 1e14), 1e-7, Temperature::Zero).unwrap();
        assert_eq!(v.value, 0.0);
        let gold = Material::drude(1.37e16, 5.32e13);
        let mut last = f64::NEG_INFINITY;
        for a in [5e-8, 1e-7, 2e-7, 5e-7] {
            let p = lifshitz_halfspace_pressure(&gold, &gold, a, Temperature::Zero).unwrap().value;
            assert!(p < 0.0 && p > last);
            last = p;
        }
        let glass = Material::dielectric(ResponseFunction::constant(2.25));
        let p = lifshitz_halfspace_pressure(&glass, &gold, 1e-7, Temperature::Zero).unwrap();
        assert!(p.value < 0.0 && p.error_estimate < 1e-6 * p.value.abs());
    }
}
