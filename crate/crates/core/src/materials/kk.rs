use serde::{Deserialize, Serialize};

use super::ResponseFunction;
use crate::error::{Error, Result};
use crate::spectral::quadrature::{integrate, AdaptiveControl};

/// Quadrature control for the Kramers–Kronig transform.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KkControl {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for KkControl {
    fn default() -> Self {
        Self { abs_tol: 1e-6, rel_tol: 1e-9, max_intervals: 4000 }
    }
}

/// Re ε(ω′) = 1 + (2/π) P∫₀^∞ ω ε_I(ω)/(ω² − ω′²) dω.
///
/// The principal value on [0, 2ω′] is taken with nodes placed symmetrically
/// about the pole, which turns the integrand into
/// `[F(ω′+t)/(2ω′+t) − F(ω′−t)/(2ω′−t)]/t` with F = ω ε_I. The tail
/// [2ω′, ∞) is mapped onto (0, 1] by ω = 2ω′/u.
pub fn kk_real_from_imag(model: &ResponseFunction, omega: f64, ctl: &KkControl) -> Result<f64> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::validation("Kramers-Kronig evaluation frequency must be positive"));
    }
    let f = |w: f64| -> Result<f64> {
        if w <= 0.0 {
            return Ok(0.0);
        }
        Ok(w * model.eval_real_axis(w)?.im)
    };
    let quad = AdaptiveControl { rel_tol: ctl.rel_tol, abs_tol: 0.0, max_intervals: ctl.max_intervals };
    let scale = 2.0 / std::f64::consts::PI;

    let near = integrate(
        |t: f64| {
            let v = if t == 0.0 {
                let h = 1e-6 * omega;
                (f(omega + h)? / (2.0 * omega + h) - f(omega - h)? / (2.0 * omega - h)) / h
            } else {
                (f(omega + t)? / (2.0 * omega + t) - f(omega - t)? / (2.0 * omega - t)) / t
            };
            Ok([v])
        },
        0.0,
        omega,
        &AdaptiveControl { abs_tol: 0.25 * ctl.abs_tol / scale, ..quad },
    )?;
    let tail = integrate(
        |u: f64| {
            if u == 0.0 {
                return Ok([0.0]);
            }
            let w = 2.0 * omega / u;
            Ok([f(w)? / (w * w - omega * omega) * 2.0 * omega / (u * u)])
        },
        0.0,
        1.0,
        &AdaptiveControl { abs_tol: 0.25 * ctl.abs_tol / scale, ..quad },
    )
    .map_err(|e| match e {
        Error::Integration(m) => Error::Integration(format!("Kramers-Kronig tail: {m}")),
        other => other,
    })?;
    Ok(1.0 + scale * (near.value[0] + tail.value[0]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::Oscillator;

    #[test]
    fn lossless_gives_unity() {
        let v = kk_real_from_imag(&ResponseFunction::Vacuum, 1e15, &KkControl::default()).unwrap();
        assert_eq!(v, 1.0);
    }

    #[test]
    fn drude_real_part() {
        let (wp, g) = (1.37e16, 5.32e13);
        let m = ResponseFunction::drude(wp, g);
        let w = 1e16;
        let v = kk_real_from_imag(&m, w, &KkControl::default()).unwrap();
        let exact = 1.0 - wp * wp / (w * w + g * g);
        assert!((v - exact).abs() < 1e-5 * exact.abs(), "{v} vs {exact}");
        assert!((v - -0.8769).abs() < 1e-4);
    }

    #[test]
    fn lorentz_below_resonance() {
        let o = Oscillator { strength: 1.2e16, resonance: 4e15, damping: 2e14 };
        let m = ResponseFunction::lorentz(vec![o]);
        let w = 0.5 * o.resonance;
        let v = kk_real_from_imag(&m, w, &KkControl::default()).unwrap();
        let exact = m.eval_real_axis(w).unwrap().re;
        assert!((v / exact - 1.0).abs() < 1e-6, "{v} vs {exact}");
    }

    #[test]
    fn unresolved_integral_is_an_error() {
        let m = ResponseFunction::drude(1.37e16, 5.32e13);
        let err = kk_real_from_imag(&m, 1e16, &KkControl { max_intervals: 1, ..Default::default() }).unwrap_err();
        assert!(matches!(err, Error::Integration(_)));
    }
}
