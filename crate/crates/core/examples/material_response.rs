//! Permittivity of gold (Drude) and a two-oscillator dielectric on both
//! frequency axes, with a Kramers-Kronig reconstruction and passivity check.

use casimir::materials::{kk_real_from_imag, log_grid, validate_passivity, KkControl, Material, Oscillator, ResponseFunction};

fn main() -> casimir::Result<()> {
    let gold = ResponseFunction::drude(1.37e16, 5.32e13);
    let glass = ResponseFunction::lorentz(vec![
        Oscillator { strength: 1.6e16, resonance: 2.0e16, damping: 1e14 },
        Oscillator { strength: 2.0e14, resonance: 1.5e14, damping: 5e12 },
    ]);

    println!("{:>12} {:>14} {:>14}", "xi [rad/s]", "gold eps(ixi)", "glass eps(ixi)");
    for xi in log_grid(1e13, 1e17, 9) {
        println!("{xi:12.3e} {:14.6e} {:14.6e}", gold.eval_imag_axis(xi)?, glass.eval_imag_axis(xi)?);
    }

    println!("\n{:>12} {:>14} {:>14} {:>14}", "omega", "Re eps", "KK Re eps", "Im eps");
    let ctl = KkControl::default();
    for w in log_grid(1.37e15, 1.37e17, 5) {
        let e = gold.eval_real_axis(w)?;
        println!("{w:12.3e} {:14.6e} {:14.6e} {:14.6e}", e.re, kk_real_from_imag(&gold, w, &ctl)?, e.im);
    }

    let report = validate_passivity(&Material::dielectric(glass), &log_grid(1e12, 1e18, 121));
    println!("\nglass passes passivity: {}", report.passed());
    Ok(())
}
