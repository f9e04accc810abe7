//! Full 3×3 Green tensor in the mixed (k_x, k_y; z, z′) representation,
//! reconstructed from the two scalar problems, and a numerical check that it
//! solves the curl-curl equation.

use num_complex::Complex64;

use super::{scalar_green_derivatives, Polarization};
use crate::constants::C;
use crate::error::{Error, Result};
use crate::stack::LayerStack;

pub type Tensor3 = [[Complex64; 3]; 3];

fn layer_response(stack: &LayerStack, z: f64, xi: f64) -> Result<(f64, f64)> {
    let layer = stack.layer(stack.locate(z).index);
    let model = layer
        .material
        .model()
        .ok_or_else(|| Error::validation("Green tensor requested inside a perfect mirror"))?;
    Ok((model.epsilon.eval_imag_axis(xi)?, model.mu.eval_imag_axis(xi)?))
}

/// G(k_x, k_y; z, z′) at imaginary frequency ξ > 0, for z ≠ z′.
pub fn green_tensor(stack: &LayerStack, xi: f64, kx: f64, ky: f64, z: f64, zp: f64) -> Result<Tensor3> {
    if !(xi > 0.0) {
        return Err(Error::validation("green_tensor needs xi > 0"));
    }
    let k = kx.hypot(ky);
    let (ux, uy) = if k > 0.0 { (kx / k, ky / k) } else { (1.0, 0.0) };
    let gs = scalar_green_derivatives(stack, Polarization::S, xi, k, z, zp)?;
    let h = scalar_green_derivatives(stack, Polarization::P, xi, k, z, zp)?;
    let (eps, _) = layer_response(stack, z, xi)?;
    let (eps_p, _) = layer_response(stack, zp, xi)?;
    let pre = C * C / (xi * xi) / (eps * eps_p);
    let i = Complex64::i();
    let g_kk = Complex64::from(-pre * h.dz_dzp);
    let g_ss = Complex64::from(gs.value);
    let g_zz = Complex64::from(-pre * k * k * h.value);
    let g_kz = -i * pre * k * h.dz;
    let g_zk = i * pre * k * h.dzp;
    let (kh, sh) = ([ux, uy], [-uy, ux]);
    let mut g = [[Complex64::default(); 3]; 3];
    for a in 0..2 {
        for b in 0..2 {
            g[a][b] = g_kk * (kh[a] * kh[b]) + g_ss * (sh[a] * sh[b]);
        }
        g[a][2] = g_kz * kh[a];
        g[2][a] = g_zk * kh[a];
    }
    g[2][2] = g_zz;
    Ok(g)
}

/// Relative residual of ∇×(μ⁻¹∇×G) + (ξ²/c²)εG at (z, z′), z ≠ z′, with
/// in-plane derivatives applied exactly and z-derivatives by fourth-order
/// central differences.
pub fn curl_curl_residual(stack: &LayerStack, xi: f64, kx: f64, ky: f64, z: f64, zp: f64) -> Result<f64> {
    let loc = stack.locate(z);
    let (eps, mu) = layer_response(stack, z, xi)?;
    let q2 = (xi / C).powi(2);
    let kappa = (eps * mu * q2 + kx * kx + ky * ky).sqrt();
    let room = loc.nearest().min((z - zp).abs());
    if room == 0.0 {
        return Err(Error::validation("residual needs z away from interfaces and from z'"));
    }
    let h = (5e-3 / kappa).min(0.2 * room);
    let samples: Vec<Tensor3> =
        (-2..=2).map(|m| green_tensor(stack, xi, kx, ky, z + m as f64 * h, zp)).collect::<Result<_>>()?;
    let d1 = |a: usize, b: usize| {
        (samples[0][a][b] - samples[1][a][b] * 8.0 + samples[3][a][b] * 8.0 - samples[4][a][b]) / (12.0 * h)
    };
    let d2 = |a: usize, b: usize| {
        (-samples[0][a][b] + samples[1][a][b] * 16.0 - samples[2][a][b] * 30.0 + samples[3][a][b] * 16.0 - samples[4][a][b])
            / (12.0 * h * h)
    };
    let i = Complex64::i();
    let g = samples[2];
    let k = [kx, ky];
    let mut residual = 0.0;
    let mut scale = 0.0;
    for b in 0..3 {
        // ∇·G for column b and its gradient.
        let div = i * k[0] * g[0][b] + i * k[1] * g[1][b] + d1(2, b);
        let d_div_z = i * k[0] * d1(0, b) + i * k[1] * d1(1, b) + d2(2, b);
        for a in 0..3 {
            let grad_div = if a < 2 { i * k[a] * div } else { d_div_z };
            let lap = g[a][b] * (-(kx * kx + ky * ky)) + d2(a, b);
            let curl_curl = (grad_div - lap) / mu;
            let mass = g[a][b] * (q2 * eps);
            residual += (curl_curl + mass).norm_sqr();
            scale += (grad_div / mu).norm_sqr() + (lap / mu).norm_sqr() + mass.norm_sqr();
        }
    }
    Ok((residual / scale).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::{Material, MaterialModel, ResponseFunction};
    use crate::stack::Layer;

    fn stack() -> LayerStack {
        LayerStack::new(vec![
            Layer::semi_infinite("metal", Material::drude(1.37e16, 5.32e13)),
            Layer::finite("gap", Material::vacuum(), 2e-7),
            Layer::finite("film", Material::Medium(MaterialModel::new(ResponseFunction::constant(3.0), ResponseFunction::constant(1.5))), 1e-7),
            Layer::semi_infinite("top", Material::dielectric(ResponseFunction::constant(2.0))),
        ])
        .unwrap()
    }

    #[test]
    fn residual_vanishes_off_coincidence() {
        let s = stack();
        for &(z, zp) in &[(5e-8, 1.5e-7), (2.5e-7, 1e-7), (-2e-8, 2.6e-7), (4e-7, 1.2e-7)] {
            let r = curl_curl_residual(&s, 8e14, 3e6, -4e6, z, zp).unwrap();
            assert!(r < 1e-6, "residual {r} at ({z}, {zp})");
        }
    }

    #[test]
    fn reciprocity_of_tensor() {
        let s = stack();
        let (kx, ky) = (2e6, 5e6);
        let g1 = green_tensor(&s, 6e14, kx, ky, 5e-8, 2.5e-7).unwrap();
        let g2 = green_tensor(&s, 6e14, -kx, -ky, 2.5e-7, 5e-8).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                assert!((g1[a][b] - g2[b][a]).norm() <= 1e-10 * g1[a][b].norm().max(1e-30));
            }
        }
    }
}
