//! Gold plates: force against separation at 0 K and 300 K, compared with the
//! perfect-mirror result.

use casimir::prelude::*;

fn main() -> casimir::Result<()> {
    let gold = Material::drude(1.37e16, 5.32e13);
    let settings = Settings::default();
    println!("{:>10} {:>14} {:>14} {:>10} {:>10}", "a [m]", "F/A 0 K", "F/A 300 K", "eta(0 K)", "eta(300 K)");
    for a in [5e-8, 1e-7, 2e-7, 5e-7, 1e-6, 2e-6, 5e-6] {
        let stack = LayerStack::cavity(gold.clone(), Material::vacuum(), a, gold.clone())?;
        let f0 = force_per_area(&stack, 1, Temperature::Zero, &settings)?;
        let f300 = force_per_area(&stack, 1, Temperature::Kelvin(300.0), &settings)?;
        let ideal = ideal_mirror_pressure_t0(a);
        println!("{a:10.2e} {f0:14.6e} {f300:14.6e} {:10.4} {:10.4}", f0 / ideal, f300 / ideal);
    }
    Ok(())
}
