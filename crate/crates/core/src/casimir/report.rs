//! z-profiles of the local observables.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::local::{local_observables, stress_divergence, MaterialGradient};
use super::{force_per_area, Settings, Temperature};
use crate::error::Result;
use crate::stack::LayerStack;

/// Growth factor of the z-spacing away from interfaces.
const GROWTH: f64 = 1.3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ProfileOptions {
    /// Points per half of each finite layer, and per semi-infinite layer.
    pub points_per_side: usize,
    /// Extent sampled into semi-infinite layers [m]; defaults to the
    /// thickest finite layer.
    pub outer_extent: Option<f64>,
    /// Finite layer whose midpoint defines the reported force.
    pub gap: Option<usize>,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        Self { points_per_side: 12, outer_extent: None, gap: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    /// SHA-256 of the stack's JSON form.
    pub stack_hash: String,
    pub settings: Settings,
    pub grid_points: usize,
    pub max_matsubara_terms: usize,
    pub all_converged: bool,
}

/// Observables on a z-grid, with the force across one layer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldStressReport {
    pub temperature: Temperature,
    pub z: Vec<f64>,
    pub rho: Vec<f64>,
    pub sigma_xx: Vec<f64>,
    pub sigma_yy: Vec<f64>,
    pub sigma_zz: Vec<f64>,
    pub divergence: Vec<f64>,
    pub force_per_area: Option<f64>,
    pub metadata: ReportMetadata,
}

/// `m` offsets from an interface whose spacing grows by [`GROWTH`] per step,
/// the last one at `length`.
fn geometric(length: f64, m: usize) -> Vec<f64> {
    let h0 = length * (GROWTH - 1.0) / (GROWTH.powi(m as i32) - 1.0);
    let mut out = Vec::with_capacity(m);
    let mut x = 0.0;
    let mut h = h0;
    for _ in 0..m {
        x += h;
        out.push(x);
        h *= GROWTH;
    }
    out
}

/// Sample points refined geometrically toward every interface. Points
/// inside perfect mirrors are skipped.
pub fn profile_grid(stack: &LayerStack, opts: &ProfileOptions) -> Vec<f64> {
    let m = opts.points_per_side.max(1);
    let n = stack.len();
    let thickest = (1..n - 1).map(|i| stack.thickness(i)).fold(0.0, f64::max);
    let outer = opts.outer_extent.unwrap_or(if thickest > 0.0 { thickest } else { 1e-6 });
    let mut z = Vec::new();
    for j in 0..n {
        if stack.layer(j).material.is_mirror() {
            continue;
        }
        let (lo, hi) = (stack.lower(j), stack.upper(j));
        if j == 0 {
            z.extend(geometric(outer, m).into_iter().rev().map(|x| hi - x));
        } else if j == n - 1 {
            z.extend(geometric(outer, m).into_iter().map(|x| lo + x));
        } else {
            let half = 0.5 * (hi - lo);
            let pts = geometric(half, m);
            z.extend(pts.iter().map(|x| lo + x));
            z.extend(pts.iter().rev().skip(1).map(|x| hi - x));
        }
    }
    z.sort_by(f64::total_cmp);
    z.dedup();
    z
}

fn stack_hash(stack: &LayerStack) -> String {
    let json = serde_json::to_vec(stack).expect("stack serializes");
    Sha256::digest(&json).iter().map(|b| format!("{b:02x}")).collect()
}

/// ρ, σ and ∇·σ on [`profile_grid`], points evaluated in parallel.
pub fn profile<G: MaterialGradient>(graded: &G, t: Temperature, settings: &Settings, opts: &ProfileOptions) -> Result<FieldStressReport> {
    let stack = graded.layers();
    let z = profile_grid(stack, opts);
    let rows = z
        .par_iter()
        .map(|&zi| Ok((local_observables(stack, zi, t, settings)?, stress_divergence(graded, zi, t, settings)?)))
        .collect::<Result<Vec<_>>>()?;
    let force = opts.gap.map(|g| force_per_area(stack, g, t, settings)).transpose()?;
    let max_terms = rows.iter().map(|(o, _)| o.convergence.evaluations).max().unwrap_or(0);
    let all_converged = rows.iter().all(|(o, d)| o.convergence.converged && d.convergence.converged);
    Ok(FieldStressReport {
        temperature: t,
        rho: rows.iter().map(|(o, _)| o.rho).collect(),
        sigma_xx: rows.iter().map(|(o, _)| o.sigma_xx).collect(),
        sigma_yy: rows.iter().map(|(o, _)| o.sigma_xx).collect(),
        sigma_zz: rows.iter().map(|(o, _)| o.sigma_zz).collect(),
        divergence: rows.iter().map(|(_, d)| d.value).collect(),
        force_per_area: force,
        metadata: ReportMetadata {
            stack_hash: stack_hash(stack),
            settings: *settings,
            grid_points: z.len(),
            max_matsubara_terms: if matches!(t, Temperature::Zero) { 0 } else { max_terms },
            all_converged,
        },
        z,
    })
}
