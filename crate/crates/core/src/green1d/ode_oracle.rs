//! Finite-difference reference solver for the planar scalar problems.
//!
//! Independent of the closed forms: it reads layer responses straight from
//! the material models, discretizes
//! `−(a g′)′ + a κ² g = δ(z − z′)` with a flux-conservative three-point
//! stencil on a grid that has nodes at every interface and at z, z′, and
//! solves the tridiagonal system directly. Perfect mirrors become Dirichlet
//! (s) or Neumann (p) walls. Intended for verification only.

use serde::{Deserialize, Serialize};

use super::Polarization;
use crate::constants::C;
use crate::error::{Error, Result};
use crate::materials::Material;
use crate::stack::LayerStack;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OdeOracleConfig {
    /// Target κh in each segment.
    pub resolution: f64,
    /// Window margin beyond the outermost features, in decay lengths 1/κ.
    pub margin: f64,
    /// Largest admissible |g| next to a truncated boundary, relative to max |g|.
    pub boundary_tol: f64,
    pub min_cells: usize,
}

impl Default for OdeOracleConfig {
    fn default() -> Self {
        Self { resolution: 4e-3, margin: 20.0, boundary_tol: 1e-8, min_cells: 16 }
    }
}

#[derive(Clone, Copy, Debug)]
enum Wall {
    Dirichlet,
    Neumann,
}

#[derive(Clone, Copy, Debug)]
struct Coeff {
    a: f64,
    kappa2: f64,
}

fn coefficients(m: &Material, pol: Polarization, xi: f64, k: f64) -> Result<Option<Coeff>> {
    let Material::Medium(model) = m else { return Ok(None) };
    let eps = model.epsilon.eval_imag_axis(xi)?;
    let mu = model.mu.eval_imag_axis(xi)?;
    if !(eps.is_finite() && mu.is_finite()) {
        return Err(Error::Oracle("finite-difference solve needs finite responses (use xi > 0)".into()));
    }
    let q = xi / C;
    let a = match pol {
        Polarization::S => 1.0 / mu,
        Polarization::P => 1.0 / eps,
    };
    Ok(Some(Coeff { a, kappa2: eps * mu * q * q + k * k }))
}

/// g_σ(z, z′) from a second-order finite-difference solve.
pub fn ode_oracle_green(
    stack: &LayerStack,
    pol: Polarization,
    xi: f64,
    k: f64,
    z: f64,
    zp: f64,
    cfg: &OdeOracleConfig,
) -> Result<f64> {
    if !(xi > 0.0 || k > 0.0) {
        return Err(Error::Oracle("(xi, k) = (0, 0) is excluded".into()));
    }
    let n = stack.len();
    let coeffs = stack
        .layers()
        .iter()
        .map(|l| coefficients(&l.material, pol, xi, k))
        .collect::<Result<Vec<_>>>()?;
    let (jz, jp) = (stack.locate(z).index, stack.locate(zp).index);
    if coeffs[jp].is_none() || coeffs[jz].is_none() {
        return Ok(0.0);
    }
    let mut first = jp;
    while first > 0 && coeffs[first - 1].is_some() {
        first -= 1;
    }
    let mut last = jp;
    while last + 1 < n && coeffs[last + 1].is_some() {
        last += 1;
    }
    if !(first..=last).contains(&jz) {
        return Ok(0.0);
    }
    let wall = match pol {
        Polarization::S => Wall::Dirichlet,
        Polarization::P => Wall::Neumann,
    };
    let kappa = |j: usize| coeffs[j].unwrap().kappa2.sqrt();
    let (lo_wall, lo) = if first > 0 {
        (wall, stack.lower(first))
    } else {
        let edge = stack.upper(0).min(z).min(zp);
        (Wall::Dirichlet, edge - cfg.margin / kappa(0))
    };
    let (hi_wall, hi) = if last + 1 < n {
        (wall, stack.upper(last))
    } else {
        let edge = stack.lower(n - 1).max(z).max(zp);
        (Wall::Dirichlet, edge + cfg.margin / kappa(n - 1))
    };

    let mut breaks: Vec<f64> = vec![lo, hi, z, zp];
    breaks.extend(stack.interfaces().iter().copied().filter(|&x| x > lo && x < hi));
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    let mut nodes = vec![breaks[0]];
    let mut cells: Vec<Coeff> = Vec::new();
    for w in breaks.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        let c = coeffs[stack.locate(mid).index].unwrap();
        let len = w[1] - w[0];
        let m = ((len * c.kappa2.sqrt() / cfg.resolution).ceil() as usize).max(cfg.min_cells);
        for i in 1..=m {
            nodes.push(if i == m { w[1] } else { w[0] + len * i as f64 / m as f64 });
            cells.push(c);
        }
    }
    let find = |x: f64| nodes.iter().position(|&v| v == x).expect("breakpoint is a node");
    let (iz, ip) = (find(z), find(zp));

    let nn = nodes.len();
    let mut diag = vec![0.0; nn];
    let mut off = vec![0.0; nn - 1];
    for (c, cell) in cells.iter().enumerate() {
        let h = nodes[c + 1] - nodes[c];
        let stiff = cell.a / h;
        let mass = 0.5 * cell.a * cell.kappa2 * h;
        diag[c] += stiff + mass;
        diag[c + 1] += stiff + mass;
        off[c] = -stiff;
    }
    let start = usize::from(matches!(lo_wall, Wall::Dirichlet));
    let end = nn - usize::from(matches!(hi_wall, Wall::Dirichlet));
    if ip < start || ip >= end {
        return Ok(0.0);
    }
    let mut rhs = vec![0.0; nn];
    rhs[ip] = 1.0;
    let mut g = vec![0.0; nn];
    thomas(&diag[start..end], &off[start..end - 1], &rhs[start..end], &mut g[start..end]);

    let peak = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for (idx, truncated) in [(start, first == 0), (end - 1, last + 1 == n)] {
        if truncated && g[idx].abs() > cfg.boundary_tol * peak {
            return Err(Error::Oracle(format!(
                "window too small: |g| next to the boundary is {:e} of the peak",
                g[idx].abs() / peak
            )));
        }
    }
    Ok(g[iz])
}

/// Solves a symmetric tridiagonal system.
fn thomas(diag: &[f64], off: &[f64], rhs: &[f64], out: &mut [f64]) {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut denom = diag[0];
    c[0] = if n > 1 { off[0] / denom } else { 0.0 };
    d[0] = rhs[0] / denom;
    for i in 1..n {
        denom = diag[i] - off[i - 1] * c[i - 1];
        if i + 1 < n {
            c[i] = off[i] / denom;
        }
        d[i] = (rhs[i] - off[i - 1] * d[i - 1]) / denom;
    }
    out[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        out[i] = d[i] - c[i] * out[i + 1];
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::{MaterialModel, ResponseFunction};
    use crate::stack::Layer;

    fn vacuum_stack() -> LayerStack {
        LayerStack::cavity(Material::vacuum(), Material::vacuum(), 1e-6, Material::vacuum()).unwrap()
    }

    fn exact_vacuum(xi: f64, k: f64, dz: f64) -> f64 {
        let kappa = ((xi / C).powi(2) + k * k).sqrt();
        (-kappa * dz.abs()).exp() / (2.0 * kappa)
    }

    #[test]
    fn vacuum_matches_analytic() {
        let (xi, k) = (3e14, 2e6);
        let g = ode_oracle_green(&vacuum_stack(), Polarization::S, xi, k, 2e-7, 5e-7, &OdeOracleConfig::default()).unwrap();
        let exact = exact_vacuum(xi, k, 3e-7);
        assert!((g / exact - 1.0).abs() < 1e-5, "{g} {exact}");
    }

    #[test]
    fn second_order_convergence() {
        let stack = LayerStack::new(vec![
            Layer::semi_infinite("a", Material::dielectric(ResponseFunction::constant(4.0))),
            Layer::finite("b", Material::vacuum(), 3e-7),
            Layer::semi_infinite("c", Material::Medium(MaterialModel::new(ResponseFunction::constant(2.0), ResponseFunction::constant(3.0)))),
        ])
        .unwrap();
        let (xi, k) = (5e14, 4e6);
        let solve = |r: f64| {
            let cfg = OdeOracleConfig { resolution: r, min_cells: 2, ..Default::default() };
            ode_oracle_green(&stack, Polarization::P, xi, k, -1e-7, 1e-7, &cfg).unwrap()
        };
        let exact = crate::green1d::scalar_green(&stack, Polarization::P, xi, k, -1e-7, 1e-7).unwrap();
        let (e1, e2) = ((solve(0.08) - exact).abs(), (solve(0.04) - exact).abs());
        let rate = (e1 / e2).log2();
        assert!((rate - 2.0).abs() < 0.2, "rate {rate}");
    }

    #[test]
    fn reciprocal() {
        let stack = LayerStack::cavity(Material::drude(1.37e16, 5.32e13), Material::vacuum(), 2e-7, Material::dielectric(ResponseFunction::constant(3.0)))
            .unwrap();
        let cfg = OdeOracleConfig::default();
        for pol in Polarization::BOTH {
            let a = ode_oracle_green(&stack, pol, 1e15, 3e6, -1e-8, 1.5e-7, &cfg).unwrap();
            let b = ode_oracle_green(&stack, pol, 1e15, 3e6, 1.5e-7, -1e-8, &cfg).unwrap();
            assert!((a - b).abs() <= 1e-10 * a.abs());
        }
    }

    #[test]
    fn small_window_is_rejected() {
        let cfg = OdeOracleConfig { margin: 2.0, ..Default::default() };
        let err = ode_oracle_green(&vacuum_stack(), Polarization::S, 3e14, 2e6, 2e-7, 5e-7, &cfg).unwrap_err();
        assert!(matches!(err, Error::Oracle(_)));
    }
}
