//! The closed-form reduced Green function of a three-layer magnetodielectric
//! stack against an independent finite-difference solve, and the curl-curl
//! residual of the assembled Green tensor.

use casimir::green1d::ode_oracle::{ode_oracle_green, OdeOracleConfig};
use casimir::green1d::tensor::curl_curl_residual;
use casimir::green1d::{scalar_green, Polarization};
use casimir::prelude::*;

fn main() -> casimir::Result<()> {
    let film = Material::Medium(MaterialModel::new(ResponseFunction::constant(4.0), ResponseFunction::constant(2.0)));
    let stack = LayerStack::new(vec![
        Layer::semi_infinite("gold", Material::drude(1.37e16, 5.32e13)),
        Layer::finite("gap", Material::vacuum(), 1.5e-7),
        Layer::finite("film", film, 1e-7),
        Layer::semi_infinite("top", Material::dielectric(ResponseFunction::constant(2.1))),
    ])?;
    let (xi, k) = (6e14, 5e6);
    println!("{:>4} {:>10} {:>10} {:>16} {:>16} {:>10}", "pol", "z", "z'", "closed form", "finite diff.", "rel");
    for pol in Polarization::BOTH {
        for (r, zp) in [(-5e-8, 5e-8), (1e-7, 2e-7), (3e-7, 1e-7)] {
            for cfg in [OdeOracleConfig { resolution: 4e-3, ..Default::default() }, OdeOracleConfig { resolution: 1e-3, ..Default::default() }] {
                let g = scalar_green(&stack, pol, xi, k, r, zp)?;
                let o = ode_oracle_green(&stack, pol, xi, k, r, zp, &cfg)?;
                println!("{pol:>4?} {r:10.2e} {zp:10.2e} {g:16.9e} {o:16.9e} {:10.2e}", ((g - o) / g).abs());
            }
        }
    }
    for (z, zp) in [(5e-8, 2e-7), (2e-7, -3e-8)] {
        println!("curl-curl residual at ({z:.1e}, {zp:.1e}): {:.2e}", curl_curl_residual(&stack, xi, 3e6, -2e6, z, zp)?);
    }
    Ok(())
}
