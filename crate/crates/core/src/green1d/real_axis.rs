//! Coincident scattering Green traces at real frequency ω for lossy stacks.

use num_complex::Complex64;

use super::kernel::{coincident, compose, fresnel, Surroundings};
use super::{Direction, Polarization};
use crate::constants::C;
use crate::error::{Error, Result};
use crate::materials::Material;
use crate::stack::{LayerStack, Location};

/// A stack evaluated at one real frequency.
#[derive(Clone, Debug)]
pub struct RealFrequencyView<'a> {
    stack: &'a LayerStack,
    pub omega: f64,
    media: Vec<(Complex64, Complex64)>,
}

impl<'a> RealFrequencyView<'a> {
    /// Rejects lossless non-vacuum layers and perfect mirrors, for which the
    /// spectral densities are distributions rather than functions.
    pub fn new(stack: &'a LayerStack, omega: f64) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::validation("real frequency must be positive"));
        }
        let mut media = Vec::with_capacity(stack.len());
        for (j, layer) in stack.layers().iter().enumerate() {
            match &layer.material {
                Material::PerfectMirror { .. } => {
                    return Err(Error::validation(format!(
                        "layer {j} (`{}`): perfect mirrors are lossless; spectra need absorbing media",
                        layer.name
                    )))
                }
                Material::Medium(m) => {
                    if !layer.material.is_vacuum() && m.epsilon.is_lossless() && m.mu.is_lossless() {
                        return Err(Error::validation(format!(
                            "layer {j} (`{}`): lossless material on the real axis",
                            layer.name
                        )));
                    }
                    let eps = m.epsilon.eval_real_axis(omega)?.as_complex();
                    let mu = m.mu.eval_real_axis(omega)?.as_complex();
                    media.push((eps, mu));
                }
            }
        }
        Ok(Self { stack, omega, media })
    }

    fn medium(&self, j: usize) -> (Complex64, Complex64) {
        self.media[j]
    }

    /// κ = −i k_z with k_z = sqrt(εμω²/c² − k²), Im k_z ≥ 0, so that e^{−κ|z|}
    /// is outgoing or decaying.
    pub fn kappa(&self, j: usize, k: f64) -> Complex64 {
        let (eps, mu) = self.medium(j);
        let w = self.omega / C;
        let kz = (eps * mu * (w * w) - k * k).sqrt();
        Complex64::new(kz.im, -kz.re)
    }

    fn interface(&self, pol: Polarization, from: usize, to: usize, k: f64) -> Complex64 {
        let (e1, m1) = self.medium(from);
        let (e2, m2) = self.medium(to);
        let rho = match pol {
            Polarization::S => m2 / m1,
            Polarization::P => e2 / e1,
        };
        fresnel(rho, self.kappa(from, k), self.kappa(to, k))
    }

    pub fn reflection(&self, pol: Polarization, j: usize, dir: Direction, k: f64) -> Option<Complex64> {
        let n = self.stack.len();
        let path: Vec<usize> = match dir {
            Direction::Up => (j..n).collect(),
            Direction::Down => (0..=j).rev().collect(),
        };
        if path.len() < 2 {
            return None;
        }
        let mut beyond: Option<Complex64> = None;
        for w in path.windows(2).rev() {
            let (near, far) = (w[0], w[1]);
            let r = self.interface(pol, near, far, k);
            beyond = Some(match beyond {
                Some(b) => {
                    let att = (-2.0 * self.kappa(far, k) * self.stack.thickness(far)).exp();
                    compose(r, b, att)
                }
                None => r,
            });
        }
        beyond
    }

    /// Integrands of tr G^scat(z, z) and tr[∇×G^scat×∇′](z, z) per unit ∫ k dk/2π.
    pub fn traces(&self, loc: &Location, k: f64) -> (Complex64, Complex64) {
        let j = loc.index;
        let (eps, mu) = self.medium(j);
        let kappa = self.kappa(j, k);
        let sur = |pol| Surroundings {
            up: self.reflection(pol, j, Direction::Up, k),
            down: self.reflection(pol, j, Direction::Down, k),
            dist_up: loc.above,
            dist_down: loc.below,
        };
        let s = coincident(kappa, &sur(Polarization::S));
        let p = coincident(kappa, &sur(Polarization::P));
        let w2 = (self.omega / C).powi(2);
        let k2 = Complex64::from(k * k);
        let tr_g = mu * s.value + (p.curl + k2 * p.value) / (eps * w2);
        let tr_curl = mu * (s.curl + k2 * s.value) + mu * mu * eps * w2 * p.value;
        (tr_g, tr_curl)
    }

    /// Effective refractive index n = sqrt(εμ) of layer j (Im ≥ 0).
    pub fn index(&self, j: usize) -> Complex64 {
        let (eps, mu) = self.medium(j);
        let n = (eps * mu).sqrt();
        if n.im < 0.0 {
            -n
        } else {
            n
        }
    }

    pub fn response(&self, j: usize) -> (Complex64, Complex64) {
        self.medium(j)
    }
}
