//! ρ, σ_xx and σ_zz through a gold | vacuum | magnetodielectric film |
//! silica-like stack, sampled densely near every interface.

use casimir::casimir::{profile, ProfileOptions};
use casimir::prelude::*;

fn main() -> casimir::Result<()> {
    let film = Material::Medium(MaterialModel::new(ResponseFunction::constant(3.0), ResponseFunction::constant(1.5)));
    let stack = LayerStack::new(vec![
        Layer::semi_infinite("gold", Material::drude(1.37e16, 5.32e13)),
        Layer::finite("gap", Material::vacuum(), 2e-7),
        Layer::finite("film", film, 1e-7),
        Layer::semi_infinite("substrate", Material::dielectric(ResponseFunction::constant(2.1))),
    ])?;
    let opts = ProfileOptions { points_per_side: 6, outer_extent: Some(1e-7), gap: Some(1) };
    let report = profile(&stack, Temperature::Zero, &Settings::default(), &opts)?;

    println!("# z [m]  rho [J/m^3]  sigma_xx [Pa]  sigma_zz [Pa]");
    for i in 0..report.z.len() {
        println!("{:.6e} {:.6e} {:.6e} {:.6e}", report.z[i], report.rho[i], report.sigma_xx[i], report.sigma_zz[i]);
    }
    println!("# force per area across the gap: {:.6e} Pa", report.force_per_area.unwrap_or(f64::NAN));
    Ok(())
}
