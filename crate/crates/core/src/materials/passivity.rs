use serde::{Deserialize, Serialize};

use super::{Material, ResponseFunction};

/// One failed check, with the parameter path it concerns.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

/// Result of [`validate_passivity`]: hard violations plus informational flags
/// (for example lossless idealizations).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PassivityReport {
    pub violations: Vec<Violation>,
    pub flags: Vec<String>,
}

impl PassivityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn fail(&mut self, path: String, message: impl Into<String>) {
        self.violations.push(Violation { path, message: message.into() });
    }
}

/// Checks parameter signs, ε_I ≥ 0 and μ_I ≥ 0 on `grid`, and that ε(iξ),
/// μ(iξ) are real, ≥ 1 and non-increasing on the same values read as ξ.
pub fn validate_passivity(material: &Material, grid: &[f64]) -> PassivityReport {
    let mut report = PassivityReport::default();
    match material {
        Material::PerfectMirror { .. } => report.flags.push("perfect mirror idealization".into()),
        Material::Medium(m) => {
            check_response(&m.epsilon, "epsilon", grid, &mut report);
            check_response(&m.mu, "mu", grid, &mut report);
        }
    }
    report
}

fn check_response(r: &ResponseFunction, path: &str, grid: &[f64], report: &mut PassivityReport) {
    check_parameters(r, path, report);
    if !report.violations.iter().all(|v| !v.path.starts_with(path)) {
        return;
    }
    if !matches!(r, ResponseFunction::Tabulated { .. }) {
        for &w in grid.iter().filter(|w| **w > 0.0) {
            match r.eval_real_axis(w) {
                Ok(v) if v.im < -1e-12 * v.re.abs().max(1.0) => {
                    report.fail(format!("{path}.imag({w:e})"), format!("negative loss {:e}", v.im));
                }
                Ok(_) => {}
                Err(e) => report.fail(path.to_string(), e.to_string()),
            }
        }
    }
    let mut xs: Vec<f64> = grid.iter().copied().filter(|x| *x > 0.0 && x.is_finite()).collect();
    if let ResponseFunction::Tabulated { table } = r {
        xs.extend(table.points().map(|p| p.0).filter(|x| *x > 0.0));
    }
    xs.sort_by(f64::total_cmp);
    let mut prev: Option<(f64, f64)> = None;
    for x in xs {
        let v = match r.eval_imag_axis(x) {
            Ok(v) => v,
            Err(e) => {
                report.fail(path.to_string(), e.to_string());
                return;
            }
        };
        if !v.is_finite() || v < 1.0 {
            report.fail(format!("{path}(i{x:e})"), format!("imaginary-axis value {v} is below 1"));
            return;
        }
        if let Some((px, pv)) = prev {
            if v > pv * (1.0 + 1e-12) {
                report.fail(format!("{path}(i{x:e})"), format!("increases from {pv} at {px:e} to {v}"));
                return;
            }
        }
        prev = Some((x, v));
    }
}

fn check_parameters(r: &ResponseFunction, path: &str, report: &mut PassivityReport) {
    let finite = |v: f64| v.is_finite();
    match r {
        ResponseFunction::Vacuum => {}
        ResponseFunction::Constant { value } => {
            if !finite(*value) || *value < 1.0 {
                report.fail(format!("{path}.value"), format!("constant value {value} must be >= 1"));
            } else if *value != 1.0 {
                report.flags.push(format!("{path}: lossless idealization (constant)"));
            }
        }
        ResponseFunction::Drude { plasma_frequency, damping } => {
            if !finite(*plasma_frequency) || *plasma_frequency < 0.0 {
                report.fail(format!("{path}.plasma_frequency"), "must be >= 0");
            }
            if !finite(*damping) || *damping < 0.0 {
                report.fail(format!("{path}.damping"), format!("damping {damping} must be > 0"));
            } else if *damping == 0.0 {
                report.flags.push(format!("{path}: lossless idealization (plasma model, damping = 0)"));
            }
        }
        ResponseFunction::Lorentz { oscillators } => {
            for (j, o) in oscillators.iter().enumerate() {
                if !finite(o.strength) || o.strength < 0.0 {
                    report.fail(format!("{path}.oscillators[{j}].strength"), "must be >= 0");
                }
                if !finite(o.resonance) || o.resonance < 0.0 {
                    report.fail(format!("{path}.oscillators[{j}].resonance"), "must be >= 0");
                }
                if !finite(o.damping) || o.damping < 0.0 {
                    report.fail(format!("{path}.oscillators[{j}].damping"), format!("damping {} must be > 0", o.damping));
                } else if o.damping == 0.0 {
                    report.flags.push(format!("{path}.oscillators[{j}]: lossless idealization"));
                }
            }
        }
        ResponseFunction::Tabulated { .. } => {}
        ResponseFunction::Blend { weight, from, to } => {
            if !(0.0..=1.0).contains(weight) {
                report.fail(format!("{path}.weight"), "must lie in [0, 1]");
            }
            check_parameters(from, &format!("{path}.from"), report);
            check_parameters(to, &format!("{path}.to"), report);
        }
    }
}

/// A logarithmic grid from `lo` to `hi` with `n` points.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::{ImagAxisTable, MaterialModel};

    fn grid() -> Vec<f64> {
        log_grid(1e12, 1e18, 60)
    }

    #[test]
    fn valid_drude_passes() {
        let r = validate_passivity(&Material::drude(1.37e16, 5.32e13), &grid());
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn negative_damping_points_to_gamma() {
        let r = validate_passivity(&Material::drude(1.37e16, -5.32e13), &grid());
        assert!(!r.passed());
        assert_eq!(r.violations[0].path, "epsilon.damping");
    }

    #[test]
    fn non_monotone_table_fails() {
        let t = ImagAxisTable::new(vec![(0.0, 3.0), (1e14, 2.0), (1e15, 2.5), (1e16, 1.0)]).unwrap();
        let m = Material::Medium(MaterialModel::dielectric(ResponseFunction::Tabulated { table: t }));
        let r = validate_passivity(&m, &grid());
        assert!(!r.passed());
    }

    #[test]
    fn constant_is_flagged_not_rejected() {
        let r = validate_passivity(&Material::dielectric(ResponseFunction::constant(4.0)), &grid());
        assert!(r.passed());
        assert!(r.flags.iter().any(|f| f.contains("lossless")));
        let bad = validate_passivity(&Material::dielectric(ResponseFunction::constant(0.5)), &grid());
        assert_eq!(bad.violations[0].path, "epsilon.value");
    }

    #[test]
    fn permeability_checked_too() {
        let m = Material::Medium(MaterialModel::new(ResponseFunction::Vacuum, ResponseFunction::drude(1e15, -1.0)));
        let r = validate_passivity(&m, &grid());
        assert_eq!(r.violations[0].path, "mu.damping");
    }
}
