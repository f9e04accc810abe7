//! Perfect mirrors from the quantum to the classical regime at 300 K, with
//! both treatments of the static transverse-electric mode.

use casimir::materials::StaticTe;
use casimir::oracles::ideal_mirror_pressure_high_t;
use casimir::prelude::*;

fn main() -> casimir::Result<()> {
    let settings = Settings::default();
    let t = 300.0;
    println!("{:>10} {:>14} {:>14} {:>14} {:>14}", "a [m]", "T = 0", "300 K excl.", "300 K incl.", "classical");
    for a in [1e-7, 3e-7, 1e-6, 3e-6, 1e-5] {
        let mirrors = |s: StaticTe| LayerStack::cavity(Material::PerfectMirror { static_te: s }, Material::vacuum(), a, Material::PerfectMirror { static_te: s });
        let f0 = force_per_area(&mirrors(StaticTe::Excluded)?, 1, Temperature::Zero, &settings)?;
        let fx = force_per_area(&mirrors(StaticTe::Excluded)?, 1, Temperature::Kelvin(t), &settings)?;
        let fi = force_per_area(&mirrors(StaticTe::Included)?, 1, Temperature::Kelvin(t), &settings)?;
        let classical = ideal_mirror_pressure_high_t(a, t, StaticTe::Excluded);
        println!("{a:10.2e} {f0:14.6e} {fx:14.6e} {fi:14.6e} {classical:14.6e}");
    }
    Ok(())
}
