//! Casimir energy density, stress tensor and field fluctuation spectra for
//! planar stacks of dispersive, absorbing magnetodielectric layers.
//!
//! The crate is organised bottom-up:
//!
//! - [`materials`]: permittivity and permeability models on both frequency axes,
//!   Kramers–Kronig and passivity checks.
//! - [`stack`]: layer geometry and point location.
//! - [`green1d`]: the reduced scalar Green functions of the planar problem,
//!   reflection recursions, coincidence-limit tensors, and an independent
//!   finite-difference solver used for verification.
//! - [`spectral`]: Matsubara grids, thermal weights and quadrature.
//! - [`casimir`]: energy density, stress, force, energy per area, stress
//!   divergence and fluctuation spectra.
//! - [`oracles`]: closed forms and an independent Lifshitz evaluation.
//! - [`cli`]: configuration files, report writers and the `casimir` binary.
//!
//! The `examples/` directory holds one runnable program per capability:
//!
//! ```text
//! cargo run --example material_response
//! cargo run --example ideal_mirrors
//! cargo run --example drude_plates
//! cargo run --example energy_profile
//! cargo run --example energy_force_consistency
//! cargo run --example thermal_crossover
//! cargo run --example graded_divergence
//! cargo run --example fluctuation_spectra
//! cargo run --example green_function_check
//! ```
//!
//! A minimal force evaluation:
//!
//! ```
//! use casimir::prelude::*;
//!
//! let stack = LayerStack::cavity(Material::perfect_mirror(), Material::vacuum(), 1e-6,
//!                                Material::perfect_mirror()).unwrap();
//! let f = force_per_area(&stack, 1, Temperature::Zero, &Settings::default()).unwrap();
//! assert!((f / ideal_mirror_pressure_t0(1e-6) - 1.0).abs() < 1e-3);
//! ```

pub mod casimir;
pub mod cli;
pub mod constants;
pub mod error;
pub mod green1d;
pub mod materials;
pub mod oracles;
pub mod spectral;
pub mod stack;

pub use error::{Error, Result};

/// Commonly used items.
pub mod prelude {
    pub use crate::casimir::{
        energy_density, energy_density_t0, energy_per_area, fluctuation_spectra, force_per_area,
        stress_divergence, stress_tensor, stress_tensor_t0, Settings, Temperature,
    };
    pub use crate::error::{Error, Result};
    pub use crate::materials::{Material, MaterialModel, Oscillator, ResponseFunction};
    pub use crate::oracles::ideal_mirror_pressure_t0;
    pub use crate::stack::{Layer, LayerStack, Thickness};
}
