//! The force from σ_zz against the centred difference −dE/da of the energy
//! per area.

use casimir::prelude::*;

fn main() -> casimir::Result<()> {
    let settings = Settings::default();
    for (name, m) in [("perfect mirrors", Material::perfect_mirror()), ("gold", Material::drude(1.37e16, 5.32e13))] {
        for a in [1e-7, 3e-7, 1e-6] {
            let cavity = |d: f64| LayerStack::cavity(m.clone(), Material::vacuum(), d, m.clone());
            let h = 1e-3 * a;
            let ep = energy_per_area(&cavity(a + h)?, 1, Temperature::Zero, &settings)?.value;
            let em = energy_per_area(&cavity(a - h)?, 1, Temperature::Zero, &settings)?.value;
            let slope = -(ep - em) / (2.0 * h);
            let f = force_per_area(&cavity(a)?, 1, Temperature::Zero, &settings)?;
            println!("{name:>16} a = {a:.1e}  -dE/da = {slope:.8e}  F/A = {f:.8e}  rel = {:.1e}", (slope / f - 1.0).abs());
        }
    }
    Ok(())
}
