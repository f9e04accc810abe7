//! Electric and magnetic fluctuation spectra above a gold half-space on the
//! real frequency axis at room temperature.

use casimir::casimir::{fluctuation_spectra, SpectraOptions};
use casimir::materials::log_grid;
use casimir::prelude::*;

fn main() -> casimir::Result<()> {
    let stack = LayerStack::new(vec![
        Layer::semi_infinite("gold", Material::drude(1.37e16, 5.32e13)),
        Layer::semi_infinite("vacuum", Material::vacuum()),
    ])?;
    let opts = SpectraOptions::default();
    let t = Temperature::Kelvin(300.0);
    for z in [5e-8, 2e-7] {
        println!("# z = {z:.1e} m");
        println!("# omega [rad/s]  coth  EE scat [V^2 s/m^2]  BB scat [T^2 s]  EE bulk  BB bulk");
        for w in log_grid(1e13, 1e16, 13) {
            let s = fluctuation_spectra(&stack, z, w, t, &opts)?;
            println!(
                "{w:.4e} {:.4e} {:.6e} {:.6e} {:.6e} {:.6e}",
                s.coth, s.ee_scattering, s.bb_scattering, s.ee_bulk, s.bb_bulk
            );
        }
    }
    Ok(())
}
