//! Stress divergence inside a linearly graded layer, from the continuous
//! material gradient, against a finite difference of σ_zz across the
//! staircase.

use casimir::casimir::{local_observables, stress_divergence};
use casimir::prelude::*;
use casimir::stack::{BlendShape, GradedProfile, GradedStack};

fn main() -> casimir::Result<()> {
    let c = ResponseFunction::constant;
    let (thickness, steps) = (1e-6, 64);
    let profile = GradedProfile {
        thickness,
        from: MaterialModel::new(c(2.0), c(1.0)),
        to: MaterialModel::new(c(2.0002), c(1.0001)),
        shape: BlendShape::Linear,
    };
    let graded = GradedStack::new(
        vec![Layer::semi_infinite("gold", Material::drude(1.37e16, 5.32e13)), Layer::finite("gap", Material::vacuum(), 1e-7)],
        profile,
        steps,
        vec![Layer::semi_infinite("substrate", Material::Medium(MaterialModel::new(c(2.0002), c(1.0001))))],
    )?;
    let s = Settings::default();
    let t = Temperature::Zero;
    let stack = &graded.stack;
    let h = thickness / steps as f64;
    let mid = |i: usize| stack.midpoint(2 + i);
    let szz = |i: usize| -> casimir::Result<f64> { Ok(local_observables(stack, mid(i)?, t, &s)?.sigma_zz) };

    println!("{:>6} {:>14} {:>14} {:>10}", "step", "div [Pa/m]", "FD [Pa/m]", "rel");
    for i in (8..=56).step_by(8) {
        let d = stress_divergence(&graded, mid(i)?, t, &s)?.value;
        let fd1 = (szz(i + 1)? - szz(i - 1)?) / (2.0 * h);
        let fd2 = (szz(i + 2)? - szz(i - 2)?) / (4.0 * h);
        let fd = (4.0 * fd1 - fd2) / 3.0;
        println!("{i:>6} {d:14.6e} {fd:14.6e} {:10.2e}", (d / fd - 1.0).abs());
    }
    let gap = stress_divergence(&graded, 1e-8, t, &s)?.value;
    println!("inside the homogeneous gap: {gap:e}");
    Ok(())
}
