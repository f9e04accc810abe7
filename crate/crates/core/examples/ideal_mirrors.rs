//! Perfect mirrors at zero temperature: the pressure against −π²ħc/(240a⁴)
//! and the uniform energy density between the plates.

use casimir::prelude::*;
use casimir::oracles::ideal_mirror_energy_density;

fn main() -> casimir::Result<()> {
    let settings = Settings::default();
    println!("{:>10} {:>16} {:>16} {:>10}", "a [m]", "F/A [Pa]", "closed form", "ratio");
    for a in [1e-7, 5e-7, 1e-6, 5e-6] {
        let stack = LayerStack::cavity(Material::perfect_mirror(), Material::vacuum(), a, Material::perfect_mirror())?;
        let f = force_per_area(&stack, 1, Temperature::Zero, &settings)?;
        let exact = ideal_mirror_pressure_t0(a);
        println!("{a:10.2e} {f:16.8e} {exact:16.8e} {:10.8}", f / exact);
    }

    let a = 1e-6;
    let stack = LayerStack::cavity(Material::perfect_mirror(), Material::vacuum(), a, Material::perfect_mirror())?;
    let rho = ideal_mirror_energy_density(a)?.value;
    println!("\nenergy density across a 1 um gap (closed form {rho:.8e} J/m^3)");
    for i in 1..10 {
        let z = i as f64 * a / 10.0;
        let e = energy_density_t0(&stack, z, &settings)?;
        println!("  z/a = {:.1}  rho = {:.10e}", z / a, e.value);
    }
    Ok(())
}
