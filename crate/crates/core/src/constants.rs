//! Physical constants (CODATA 2018, SI).

/// Reduced Planck constant [J s].
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant [J/K].
pub const K_B: f64 = 1.380_649e-23;
/// Speed of light in vacuum [m/s].
pub const C: f64 = 299_792_458.0;
/// Vacuum permeability [H/m].
pub const MU_0: f64 = 1.256_637_062_12e-6;
/// Vacuum permittivity [F/m].
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;

/// Riemann zeta(3).
pub const ZETA_3: f64 = 1.202_056_903_159_594_2;

/// Snapshot of the constants, recorded in run manifests.
pub fn table() -> Vec<(&'static str, f64)> {
    vec![
        ("hbar", HBAR),
        ("k_B", K_B),
        ("c", C),
        ("mu_0", MU_0),
        ("epsilon_0", EPSILON_0),
    ]
}
