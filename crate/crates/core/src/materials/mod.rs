//! Causal permittivity and permeability models.
//!
//! A [`ResponseFunction`] is one of ε(ω) or μ(ω); a [`MaterialModel`] pairs
//! the two. [`Material`] adds the perfect-mirror marker, which carries no
//! response functions at all.

mod kk;
mod passivity;
mod table;

pub use kk::{kk_real_from_imag, KkControl};
pub use passivity::{log_grid, validate_passivity, PassivityReport, Violation};
pub use table::ImagAxisTable;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One term of a Lorentz sum, all in rad/s.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Oscillator {
    pub strength: f64,
    pub resonance: f64,
    pub damping: f64,
}

/// A scalar causal response function (ε or μ).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ResponseFunction {
    Vacuum,
    /// Frequency-independent and lossless.
    Constant { value: f64 },
    /// 1 − ω_p²/(ω(ω + iγ)). γ = 0 is the plasma model.
    Drude { plasma_frequency: f64, damping: f64 },
    /// 1 + Σ_j ω_{p,j}²/(ω_{0,j}² − ω² − iγ_j ω).
    Lorentz { oscillators: Vec<Oscillator> },
    /// Imaginary-axis samples only.
    Tabulated { table: ImagAxisTable },
    /// (1 − w)·from + w·to, used for graded profiles.
    Blend { weight: f64, from: Box<ResponseFunction>, to: Box<ResponseFunction> },
}

/// Leading behaviour of a response function on the imaginary axis:
/// `coef · ξ^(−pole_order)`. Away from ξ = 0 the order is zero and `coef`
/// is the value itself.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ImagResponse {
    pub coef: f64,
    pub pole_order: u32,
}

impl ImagResponse {
    pub fn finite(v: f64) -> Self {
        Self { coef: v, pole_order: 0 }
    }

    /// Value, with `+∞` standing in for a pole at ξ = 0.
    pub fn value(&self) -> f64 {
        if self.pole_order > 0 {
            f64::INFINITY
        } else {
            self.coef
        }
    }

    /// Reciprocal value; zero at a pole.
    pub fn recip(&self) -> f64 {
        if self.pole_order > 0 {
            0.0
        } else {
            1.0 / self.coef
        }
    }

    /// Ratio `self / other` in the extended sense.
    pub fn ratio(&self, other: &ImagResponse) -> f64 {
        match self.pole_order.cmp(&other.pole_order) {
            std::cmp::Ordering::Greater => f64::INFINITY,
            std::cmp::Ordering::Less => 0.0,
            std::cmp::Ordering::Equal => self.coef / other.coef,
        }
    }

    fn combine(terms: impl IntoIterator<Item = (f64, ImagResponse)>) -> ImagResponse {
        let mut out = ImagResponse::finite(0.0);
        for (w, t) in terms {
            if w == 0.0 {
                continue;
            }
            if t.pole_order > out.pole_order {
                out = ImagResponse { coef: w * t.coef, pole_order: t.pole_order };
            } else if t.pole_order == out.pole_order {
                out.coef += w * t.coef;
            }
        }
        out
    }
}

impl ResponseFunction {
    pub fn drude(plasma_frequency: f64, damping: f64) -> Self {
        ResponseFunction::Drude { plasma_frequency, damping }
    }

    pub fn lorentz(oscillators: Vec<Oscillator>) -> Self {
        ResponseFunction::Lorentz { oscillators }
    }

    pub fn constant(value: f64) -> Self {
        ResponseFunction::Constant { value }
    }

    /// Evaluates the model at an arbitrary complex frequency ω.
    ///
    /// Tabulated models have no continuation off the imaginary axis.
    pub fn eval_complex(&self, w: Complex64) -> Result<Complex64> {
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::i();
        Ok(match self {
            ResponseFunction::Vacuum => one,
            ResponseFunction::Constant { value } => Complex64::new(*value, 0.0),
            ResponseFunction::Drude { plasma_frequency: wp, damping: g } => one - wp * wp / (w * (w + i * g)),
            ResponseFunction::Lorentz { oscillators } => {
                one + oscillators
                    .iter()
                    .map(|o| o.strength * o.strength / (o.resonance * o.resonance - w * w - i * o.damping * w))
                    .sum::<Complex64>()
            }
            ResponseFunction::Tabulated { .. } => {
                return Err(Error::validation("tabulated imaginary-axis model cannot be evaluated off that axis"))
            }
            ResponseFunction::Blend { weight, from, to } => {
                from.eval_complex(w)? * (1.0 - weight) + to.eval_complex(w)? * *weight
            }
        })
    }

    /// ε(ω) on the real axis, ω > 0.
    pub fn eval_real_axis(&self, omega: f64) -> Result<ComplexPermittivity> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::validation(format!("real-axis frequency must be positive, got {omega}")));
        }
        let v = self.eval_complex(Complex64::new(omega, 0.0))?;
        Ok(ComplexPermittivity { re: v.re, im: v.im, omega })
    }

    /// ε(iξ), real. Returns `+∞` at ξ = 0 for models with a static pole.
    pub fn eval_imag_axis(&self, xi: f64) -> Result<f64> {
        Ok(self.imag_response(xi)?.value())
    }

    /// Imaginary-axis value with the ξ = 0 pole resolved into its leading term.
    pub fn imag_response(&self, xi: f64) -> Result<ImagResponse> {
        if !(xi >= 0.0 && xi.is_finite()) {
            return Err(Error::validation(format!("imaginary-axis frequency must be >= 0, got {xi}")));
        }
        if xi == 0.0 {
            return Ok(self.static_limit());
        }
        Ok(ImagResponse::finite(match self {
            ResponseFunction::Vacuum => 1.0,
            ResponseFunction::Constant { value } => *value,
            ResponseFunction::Drude { plasma_frequency: wp, damping: g } => 1.0 + wp * wp / (xi * (xi + g)),
            ResponseFunction::Lorentz { oscillators } => {
                1.0 + oscillators
                    .iter()
                    .map(|o| o.strength * o.strength / (o.resonance * o.resonance + xi * xi + o.damping * xi))
                    .sum::<f64>()
            }
            ResponseFunction::Tabulated { table } => table.eval(xi),
            ResponseFunction::Blend { weight, from, to } => {
                (1.0 - weight) * from.eval_imag_axis(xi)? + weight * to.eval_imag_axis(xi)?
            }
        }))
    }

    /// Leading term of ε(iξ) as ξ → 0.
    pub fn static_limit(&self) -> ImagResponse {
        match self {
            ResponseFunction::Vacuum => ImagResponse::finite(1.0),
            ResponseFunction::Constant { value } => ImagResponse::finite(*value),
            ResponseFunction::Drude { plasma_frequency: wp, damping: g } => pole(wp * wp, 0.0, *g),
            ResponseFunction::Lorentz { oscillators } => ImagResponse::combine(
                std::iter::once((1.0, ImagResponse::finite(1.0)))
                    .chain(oscillators.iter().map(|o| (1.0, pole(o.strength * o.strength, o.resonance, o.damping)))),
            ),
            ResponseFunction::Tabulated { table } => ImagResponse::finite(table.first_value()),
            ResponseFunction::Blend { weight, from, to } => {
                ImagResponse::combine([(1.0 - weight, from.static_limit()), (*weight, to.static_limit())])
            }
        }
    }

    /// d[ξ ε(iξ)]/dξ for ξ > 0.
    pub fn xi_derivative(&self, xi: f64) -> Result<f64> {
        if !(xi > 0.0) {
            return Err(Error::validation("dispersion derivative requires xi > 0"));
        }
        let eps = self.eval_imag_axis(xi)?;
        Ok(match self {
            ResponseFunction::Vacuum | ResponseFunction::Constant { .. } => eps,
            ResponseFunction::Drude { plasma_frequency: wp, damping: g } => {
                let d = xi * (xi + g);
                eps - xi * wp * wp * (2.0 * xi + g) / (d * d)
            }
            ResponseFunction::Lorentz { oscillators } => {
                eps - xi
                    * oscillators
                        .iter()
                        .map(|o| {
                            let d = o.resonance * o.resonance + xi * xi + o.damping * xi;
                            o.strength * o.strength * (2.0 * xi + o.damping) / (d * d)
                        })
                        .sum::<f64>()
            }
            ResponseFunction::Tabulated { table } => {
                let h = 1e-4 * xi;
                ((xi + h) * table.eval(xi + h) - (xi - h) * table.eval(xi - h)) / (2.0 * h)
            }
            ResponseFunction::Blend { weight, from, to } => {
                (1.0 - weight) * from.xi_derivative(xi)? + weight * to.xi_derivative(xi)?
            }
        })
    }

    /// d[ξε]/dξ / ε, finite also at ξ = 0 where it tends to 1 − (pole order).
    pub fn dispersion_ratio(&self, xi: f64) -> Result<f64> {
        if xi == 0.0 {
            return Ok(1.0 - self.static_limit().pole_order as f64);
        }
        Ok(self.xi_derivative(xi)? / self.eval_imag_axis(xi)?)
    }

    /// Imaginary part on the real axis, vanishing for lossless kinds.
    pub fn loss(&self, omega: f64) -> Result<f64> {
        Ok(self.eval_real_axis(omega)?.im)
    }

    /// True when the model has no absorption anywhere on the real axis.
    pub fn is_lossless(&self) -> bool {
        match self {
            ResponseFunction::Vacuum | ResponseFunction::Constant { .. } => true,
            ResponseFunction::Drude { plasma_frequency, damping } => *plasma_frequency == 0.0 || *damping == 0.0,
            ResponseFunction::Lorentz { oscillators } => {
                oscillators.iter().all(|o| o.strength == 0.0 || o.damping == 0.0)
            }
            ResponseFunction::Tabulated { .. } => false,
            ResponseFunction::Blend { weight, from, to } => {
                (*weight == 1.0 || from.is_lossless()) && (*weight == 0.0 || to.is_lossless())
            }
        }
    }

    pub fn is_vacuum(&self) -> bool {
        match self {
            ResponseFunction::Vacuum => true,
            ResponseFunction::Constant { value } => *value == 1.0,
            ResponseFunction::Drude { plasma_frequency, .. } => *plasma_frequency == 0.0,
            ResponseFunction::Lorentz { oscillators } => oscillators.iter().all(|o| o.strength == 0.0),
            ResponseFunction::Tabulated { .. } => false,
            ResponseFunction::Blend { from, to, .. } => from.is_vacuum() && to.is_vacuum(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            ResponseFunction::Vacuum => "vacuum",
            ResponseFunction::Constant { .. } => "constant",
            ResponseFunction::Drude { .. } => "drude",
            ResponseFunction::Lorentz { .. } => "lorentz",
            ResponseFunction::Tabulated { .. } => "tabulated",
            ResponseFunction::Blend { .. } => "blend",
        }
    }
}

/// Static behaviour of ω_p²/(ω_0² + ξ² + γξ).
fn pole(strength2: f64, resonance: f64, damping: f64) -> ImagResponse {
    if strength2 == 0.0 {
        ImagResponse::finite(0.0)
    } else if resonance > 0.0 {
        ImagResponse::finite(strength2 / (resonance * resonance))
    } else if damping > 0.0 {
        ImagResponse { coef: strength2 / damping, pole_order: 1 }
    } else {
        ImagResponse { coef: strength2, pole_order: 2 }
    }
}

/// ε(ω) (or μ(ω)) at a real frequency.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexPermittivity {
    pub re: f64,
    pub im: f64,
    pub omega: f64,
}

impl ComplexPermittivity {
    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// ε and μ of a medium.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaterialModel {
    pub epsilon: ResponseFunction,
    #[serde(default = "vacuum_response")]
    pub mu: ResponseFunction,
}

fn vacuum_response() -> ResponseFunction {
    ResponseFunction::Vacuum
}

impl MaterialModel {
    pub fn new(epsilon: ResponseFunction, mu: ResponseFunction) -> Self {
        Self { epsilon, mu }
    }

    pub fn dielectric(epsilon: ResponseFunction) -> Self {
        Self { epsilon, mu: ResponseFunction::Vacuum }
    }

    /// Exchanges ε and μ (electromagnetic duality).
    pub fn dual(&self) -> Self {
        Self { epsilon: self.mu.clone(), mu: self.epsilon.clone() }
    }
}

/// How a perfect mirror treats the transverse-electric mode at ξ = 0.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StaticTe {
    /// r_s(0) = 0, the zero-frequency limit of a dissipative conductor.
    #[default]
    Excluded,
    /// r_s(0) = −1, the limit of a dissipationless conductor.
    Included,
}

/// A layer material: a medium or the perfect-mirror idealization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Material {
    Medium(MaterialModel),
    /// r_s = −1, r_p = +1 exactly; no field inside.
    PerfectMirror {
        #[serde(default)]
        static_te: StaticTe,
    },
}

impl Material {
    pub fn vacuum() -> Self {
        Material::Medium(MaterialModel::dielectric(ResponseFunction::Vacuum))
    }

    pub fn perfect_mirror() -> Self {
        Material::PerfectMirror { static_te: StaticTe::Excluded }
    }

    pub fn drude(plasma_frequency: f64, damping: f64) -> Self {
        Material::Medium(MaterialModel::dielectric(ResponseFunction::drude(plasma_frequency, damping)))
    }

    pub fn dielectric(epsilon: ResponseFunction) -> Self {
        Material::Medium(MaterialModel::dielectric(epsilon))
    }

    pub fn model(&self) -> Option<&MaterialModel> {
        match self {
            Material::Medium(m) => Some(m),
            Material::PerfectMirror { .. } => None,
        }
    }

    pub fn is_mirror(&self) -> bool {
        matches!(self, Material::PerfectMirror { .. })
    }

    pub fn is_vacuum(&self) -> bool {
        matches!(self, Material::Medium(m) if m.epsilon.is_vacuum() && m.mu.is_vacuum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gold() -> ResponseFunction {
        ResponseFunction::drude(1.37e16, 5.32e13)
    }

    fn two_oscillators() -> ResponseFunction {
        ResponseFunction::lorentz(vec![
            Oscillator { strength: 2e16, resonance: 8e15, damping: 1e14 },
            Oscillator { strength: 5e15, resonance: 1e15, damping: 3e13 },
        ])
    }

    #[test]
    fn vacuum_is_identity() {
        let v = ResponseFunction::Vacuum.eval_real_axis(1e15).unwrap();
        assert_eq!((v.re, v.im), (1.0, 0.0));
        assert_eq!(ResponseFunction::Vacuum.eval_imag_axis(3e14).unwrap(), 1.0);
    }

    #[test]
    fn drude_real_axis_value() {
        let v = gold().eval_real_axis(1e16).unwrap();
        assert!((v.re - -0.876_846_9).abs() < 1e-6, "{}", v.re);
        assert!((v.im - 0.009_985_7).abs() < 1e-6, "{}", v.im);
    }

    #[test]
    fn drude_imag_axis_value() {
        let v = gold().eval_imag_axis(1e15).unwrap();
        assert!((v - 179.2093).abs() < 1e-3, "{v}");
        assert_eq!(gold().eval_imag_axis(0.0).unwrap(), f64::INFINITY);
    }

    #[test]
    fn lorentz_static_and_asymptotic() {
        let l = two_oscillators();
        let expected = 1.0 + (2e16f64 / 8e15).powi(2) + (5e15f64 / 1e15).powi(2);
        assert!((l.eval_imag_axis(0.0).unwrap() - expected).abs() < 1e-12);
        let single = ResponseFunction::lorentz(vec![Oscillator { strength: 1e15, resonance: 1e15, damping: 1e13 }]);
        let far = single.eval_real_axis(1e18).unwrap();
        assert!((far.re - 1.0).abs() < 2e-6 && far.im.abs() < 1e-9);
    }

    #[test]
    fn negative_frequency_rejected() {
        assert!(gold().eval_imag_axis(-1.0).is_err());
        assert!(gold().eval_real_axis(0.0).is_err());
    }

    #[test]
    fn tabulated_has_no_real_axis() {
        let t = ResponseFunction::Tabulated { table: ImagAxisTable::new(vec![(0.0, 3.0), (1e15, 1.5)]).unwrap() };
        assert!(t.eval_real_axis(1e14).is_err());
        assert_eq!(t.eval_imag_axis(0.0).unwrap(), 3.0);
    }

    #[test]
    fn static_orders() {
        assert_eq!(gold().static_limit().pole_order, 1);
        assert_eq!(ResponseFunction::drude(1e16, 0.0).static_limit().pole_order, 2);
        assert_eq!(two_oscillators().static_limit().pole_order, 0);
        assert_eq!(gold().dispersion_ratio(0.0).unwrap(), 0.0);
        assert_eq!(ResponseFunction::drude(1e16, 0.0).dispersion_ratio(0.0).unwrap(), -1.0);
        assert_eq!(ResponseFunction::Vacuum.dispersion_ratio(0.0).unwrap(), 1.0);
    }

    #[test]
    fn dispersion_ratio_continuous_at_zero() {
        for m in [gold(), ResponseFunction::drude(1e16, 0.0), two_oscillators()] {
            let r0 = m.dispersion_ratio(0.0).unwrap();
            let r = m.dispersion_ratio(1e3).unwrap();
            assert!((r - r0).abs() < 1e-6, "{} {r0} {r}", m.kind_name());
        }
    }

    #[test]
    fn blend_interpolates() {
        let b = ResponseFunction::Blend { weight: 0.25, from: Box::new(ResponseFunction::Vacuum), to: Box::new(two_oscillators()) };
        let xi = 3e15;
        let want = 0.75 + 0.25 * two_oscillators().eval_imag_axis(xi).unwrap();
        assert!((b.eval_imag_axis(xi).unwrap() - want).abs() < 1e-14);
        let gb = ResponseFunction::Blend { weight: 0.5, from: Box::new(ResponseFunction::Vacuum), to: Box::new(gold()) };
        assert_eq!(gb.static_limit().pole_order, 1);
    }

    #[test]
    fn serde_round_trip() {
        let m = Material::Medium(MaterialModel::new(two_oscillators(), ResponseFunction::constant(2.0)));
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(serde_json::from_str::<Material>(&s).unwrap(), m);
    }

    fn derivative_fd(m: &ResponseFunction, xi: f64) -> f64 {
        let h = 1e-5 * xi;
        ((xi + h) * m.eval_imag_axis(xi + h).unwrap() - (xi - h) * m.eval_imag_axis(xi - h).unwrap()) / (2.0 * h)
    }

    proptest! {
        #[test]
        fn crossing_symmetry(lw in 12f64..18.0, im in 0f64..1.0) {
            let w = Complex64::new(10f64.powf(lw), im * 10f64.powf(lw));
            for m in [gold(), two_oscillators()] {
                let a = m.eval_complex(-w.conj()).unwrap();
                let b = m.eval_complex(w).unwrap().conj();
                prop_assert!((a - b).norm() <= 1e-12 * b.norm());
            }
        }

        #[test]
        fn imag_axis_matches_continuation(lx in 12f64..18.0) {
            let xi = 10f64.powf(lx);
            for m in [gold(), two_oscillators()] {
                let c = m.eval_complex(Complex64::new(0.0, xi)).unwrap();
                let r = m.eval_imag_axis(xi).unwrap();
                prop_assert!((c.re - r).abs() <= 1e-12 * r && c.im.abs() <= 1e-12 * r);
            }
        }

        #[test]
        fn imag_axis_real_at_least_one_non_increasing(lx in 10f64..18.0, step in 1.001f64..3.0) {
            let xi = 10f64.powf(lx);
            for m in [gold(), two_oscillators()] {
                let a = m.eval_imag_axis(xi).unwrap();
                let b = m.eval_imag_axis(xi * step).unwrap();
                prop_assert!(a >= 1.0 && b >= 1.0 && b <= a);
            }
        }

        #[test]
        fn passive_on_real_axis(lw in 10f64..18.0) {
            for m in [gold(), two_oscillators()] {
                prop_assert!(m.eval_real_axis(10f64.powf(lw)).unwrap().im >= 0.0);
            }
        }

        #[test]
        fn analytic_derivative_matches_difference(lx in 12f64..17.0) {
            let xi = 10f64.powf(lx);
            for m in [gold(), two_oscillators()] {
                let a = m.xi_derivative(xi).unwrap();
                let f = derivative_fd(&m, xi);
                prop_assert!((a - f).abs() <= 1e-6 * a.abs().max(1.0));
            }
        }
    }
}
