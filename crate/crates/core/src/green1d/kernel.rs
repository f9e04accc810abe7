//! Closed-form pieces shared by the imaginary- and real-axis evaluations.

use num_complex::{Complex64, ComplexFloat};

/// Field types the kernels run over: `f64` on the imaginary axis,
/// `Complex64` on the real axis.
pub trait Scalar: ComplexFloat<Real = f64> + From<f64> {
    fn expm1(self) -> Self;

    fn real(v: f64) -> Self {
        <Self as From<f64>>::from(v)
    }
}

impl Scalar for f64 {
    fn expm1(self) -> f64 {
        self.exp_m1()
    }
}

impl Scalar for Complex64 {
    fn expm1(self) -> Complex64 {
        if self.norm() < 1e-4 {
            self * (1.0 + self * (0.5 + self / 6.0))
        } else {
            self.exp() - 1.0
        }
    }
}

/// Reflection at an interface seen from medium 1:
/// `(ρκ₁ − κ₂)/(ρκ₁ + κ₂)` with ρ = m₂/m₁ (m = μ for s, ε for p).
pub fn fresnel<T: Scalar>(rho: T, k1: T, k2: T) -> T {
    let a = rho * k1;
    (a - k2) / (a + k2)
}

/// Reflection from the near face of a layer of attenuation
/// `att = e^{−2κd}` backed by a reflector `beyond`.
pub fn compose<T: Scalar>(r: T, beyond: T, att: T) -> T {
    let x = beyond * att;
    (r + x) / (T::real(1.0) + r * x)
}

/// 1 − ρ e^{−x}, accurate when ρ ≈ 1 and x ≈ 0.
pub fn one_minus<T: Scalar>(rho: T, x: T) -> T {
    (T::real(1.0) - rho) - rho * (-x).expm1()
}

/// Bulk-subtracted coincident reduced Green function and its mixed
/// derivative inside a layer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coincident<T> {
    /// ∂_z ∂_z′ ĝ at z = z′.
    pub curl: T,
    /// ĝ at z = z′.
    pub value: T,
}

/// Layer geometry seen from a point: half-stack reflections above and below
/// with the distances to the corresponding interfaces, and the thickness.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Surroundings<T> {
    pub up: Option<T>,
    pub down: Option<T>,
    pub dist_up: f64,
    pub dist_down: f64,
}

/// The two pieces of the coincident functions: P/(1 − X), from single
/// reflections off each face, and X/(1 − X), from round trips.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Parts<T> {
    pub single: T,
    pub round_trip: T,
}

pub fn parts<T: Scalar>(kappa: T, s: &Surroundings<T>) -> Parts<T> {
    let zero = T::real(0.0);
    let two = T::real(2.0);
    let e_up = s.up.map_or(zero, |r| r * (-two * kappa * T::real(s.dist_up)).exp());
    let e_dn = s.down.map_or(zero, |r| r * (-two * kappa * T::real(s.dist_down)).exp());
    let p = e_up + e_dn;
    match (s.up, s.down) {
        (Some(a), Some(b)) => {
            let arg = two * kappa * T::real(s.dist_up + s.dist_down);
            let denom = one_minus(a * b, arg);
            Parts { single: p / denom, round_trip: a * b * (-arg).exp() / denom }
        }
        _ => Parts { single: p, round_trip: zero },
    }
}

impl<T: Scalar> Parts<T> {
    pub fn coincident(&self, kappa: T) -> Coincident<T> {
        let two = T::real(2.0);
        Coincident {
            curl: kappa * (self.single - two * self.round_trip) / two,
            value: (self.single + two * self.round_trip) / (two * kappa),
        }
    }
}

pub fn coincident<T: Scalar>(kappa: T, s: &Surroundings<T>) -> Coincident<T> {
    parts(kappa, s).coincident(kappa)
}

/// ĝ(z, z′) − bulk for both points in the same layer, with reference planes
/// at the layer faces. Used to cross-check the general solution.
pub fn same_layer<T: Scalar>(kappa: T, s: &Surroundings<T>, z_from_bottom: f64, zp_from_bottom: f64) -> T {
    let zero = T::real(0.0);
    let two = T::real(2.0);
    let d = s.dist_up + s.dist_down;
    let dz = (z_from_bottom - zp_from_bottom).abs();
    let sum = z_from_bottom + zp_from_bottom;
    let up = s.up.map_or(zero, |r| r * (-kappa * T::real(2.0 * d - sum)).exp());
    let dn = s.down.map_or(zero, |r| r * (-kappa * T::real(sum)).exp());
    let (x, denom) = match (s.up, s.down) {
        (Some(a), Some(b)) => (a * b * (-two * kappa * T::real(d)).exp(), one_minus(a * b, two * kappa * T::real(d))),
        _ => (zero, T::real(1.0)),
    };
    let bulk = (-kappa * T::real(dz)).exp() + (kappa * T::real(dz)).exp();
    (x * bulk + up + dn) / (two * kappa * denom)
}
