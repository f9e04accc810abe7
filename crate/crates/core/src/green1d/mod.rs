//! Planar Green functions on the imaginary frequency axis.
//!
//! For a transverse wavevector k⊥ the s-polarized problem is
//!
//! ```text
//! −∂_z(μ⁻¹ ∂_z g) + (μ⁻¹ k⊥² + ε ξ²/c²) g = δ(z − z′)
//! ```
//!
//! and the p-polarized one follows by ε ↔ μ. Inside a layer the reduced
//! functions ĝ = g_s/μ and ĥ = g_p/ε are sums of exponentials whose
//! amplitudes come from the half-stack reflection coefficients.

pub mod kernel;
pub mod ode_oracle;
pub mod real_axis;
pub mod tensor;

use serde::{Deserialize, Serialize};

use crate::constants::C;
use crate::error::{Error, Result};
use crate::materials::{ImagResponse, Material, StaticTe};
use crate::spectral::quadrature::{integrate_scaled_partial, norm, AdaptiveControl, Integral};
use crate::stack::{LayerStack, Location};
use kernel::{compose, parts, Surroundings};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarization {
    S,
    P,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::S, Polarization::P];

    /// Reflection of a perfect mirror for this polarization.
    pub fn mirror_reflection(self) -> f64 {
        match self {
            Polarization::S => -1.0,
            Polarization::P => 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Up,
    Down,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolarizedReflection {
    pub s: f64,
    pub p: f64,
}

impl PolarizedReflection {
    pub fn get(&self, pol: Polarization) -> f64 {
        match pol {
            Polarization::S => self.s,
            Polarization::P => self.p,
        }
    }
}

/// κ = sqrt(εμξ²/c² + k⊥²).
pub fn longitudinal_wavenumber(xi: f64, k: f64, eps: f64, mu: f64) -> f64 {
    let q = xi / C;
    (eps * mu * q * q + k * k).sqrt()
}

/// εμξ²/c², finite at ξ = 0 for the supported static behaviours.
fn index_term(xi: f64, eps: &ImagResponse, mu: &ImagResponse) -> Result<f64> {
    if xi > 0.0 {
        let q = xi / C;
        return Ok(eps.coef * mu.coef * q * q);
    }
    match eps.pole_order + mu.pole_order {
        0 | 1 => Ok(0.0),
        2 => Ok(eps.coef * mu.coef / (C * C)),
        _ => Err(Error::validation("static response too singular: combined pole order of eps*mu exceeds 2")),
    }
}

/// A layer's medium at one imaginary frequency.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MediumAt {
    pub eps: ImagResponse,
    pub mu: ImagResponse,
    /// εμξ²/c².
    pub index_term: f64,
    /// d[ξε]/dξ / ε and d[ξμ]/dξ / μ.
    pub dispersion_e: f64,
    pub dispersion_b: f64,
}

impl MediumAt {
    pub fn vacuum(xi: f64) -> Self {
        let q = xi / C;
        let one = ImagResponse::finite(1.0);
        Self { eps: one, mu: one, index_term: q * q, dispersion_e: 1.0, dispersion_b: 1.0 }
    }

    pub fn kappa(&self, k: f64) -> f64 {
        (self.index_term + k * k).sqrt()
    }
}

/// What a polarization sees in a layer.
#[derive(Clone, Copy, Debug, PartialEq)]
enum Site {
    /// `m` is μ for s and ε for p; `product` is εμ.
    Medium { m: ImagResponse, index_term: f64, product: f64 },
    Mirror { r: f64 },
}

/// A stack with all layer responses evaluated at one imaginary frequency ξ.
#[derive(Clone, Debug)]
pub struct FrequencyView<'a> {
    pub stack: &'a LayerStack,
    pub xi: f64,
    media: Vec<Option<MediumAt>>,
    sites: [Vec<Site>; 2],
}

fn pol_index(pol: Polarization) -> usize {
    match pol {
        Polarization::S => 0,
        Polarization::P => 1,
    }
}

impl<'a> FrequencyView<'a> {
    pub fn new(stack: &'a LayerStack, xi: f64) -> Result<Self> {
        if !(xi >= 0.0 && xi.is_finite()) {
            return Err(Error::validation(format!("imaginary frequency must be >= 0, got {xi}")));
        }
        let mut media = Vec::with_capacity(stack.len());
        let mut sites = [Vec::with_capacity(stack.len()), Vec::with_capacity(stack.len())];
        for (j, layer) in stack.layers().iter().enumerate() {
            match &layer.material {
                Material::PerfectMirror { static_te } => {
                    media.push(None);
                    let transparent_te = xi == 0.0 && *static_te == StaticTe::Excluded;
                    sites[0].push(if transparent_te {
                        Site::Medium { m: ImagResponse::finite(1.0), index_term: 0.0, product: 1.0 }
                    } else {
                        Site::Mirror { r: Polarization::S.mirror_reflection() }
                    });
                    sites[1].push(Site::Mirror { r: Polarization::P.mirror_reflection() });
                }
                Material::Medium(model) => {
                    let wrap = |e: Error| match e {
                        Error::Validation(m) => Error::Validation(format!("layer {j} (`{}`): {m}", layer.name)),
                        other => other,
                    };
                    let eps = model.epsilon.imag_response(xi).map_err(wrap)?;
                    let mu = model.mu.imag_response(xi).map_err(wrap)?;
                    if mu.pole_order > 0 {
                        return Err(wrap(Error::validation("permeability with a static pole is not supported")));
                    }
                    if !(eps.coef > 0.0 && mu.coef > 0.0) {
                        return Err(wrap(Error::validation("imaginary-axis response must be positive")));
                    }
                    let n2 = index_term(xi, &eps, &mu).map_err(wrap)?;
                    let medium = MediumAt {
                        eps,
                        mu,
                        index_term: n2,
                        dispersion_e: model.epsilon.dispersion_ratio(xi).map_err(wrap)?,
                        dispersion_b: model.mu.dispersion_ratio(xi).map_err(wrap)?,
                    };
                    media.push(Some(medium));
                    let product = eps.coef * mu.coef;
                    sites[0].push(Site::Medium { m: mu, index_term: n2, product });
                    sites[1].push(Site::Medium { m: eps, index_term: n2, product });
                }
            }
        }
        Ok(Self { stack, xi, media, sites })
    }

    /// Medium of layer `j`, `None` inside a perfect mirror.
    pub fn medium(&self, j: usize) -> Option<&MediumAt> {
        self.media[j].as_ref()
    }

    fn site(&self, pol: Polarization, j: usize) -> Site {
        self.sites[pol_index(pol)][j]
    }

    /// Reflection at the interface between adjacent layers, seen from `from`.
    fn interface(&self, pol: Polarization, from: usize, to: usize, k: f64) -> Result<f64> {
        match (self.site(pol, from), self.site(pol, to)) {
            (_, Site::Mirror { r }) => Ok(r),
            (Site::Mirror { .. }, _) => Err(Error::validation("reflection requested from inside a perfect mirror")),
            (Site::Medium { m: m1, index_term: n1, product: p1 }, Site::Medium { m: m2, index_term: n2, product: p2 }) => {
                let k1 = (n1 + k * k).sqrt();
                let k2 = (n2 + k * k).sqrt();
                let rho = m2.ratio(&m1);
                Ok(if rho.is_infinite() {
                    1.0
                } else if rho == 0.0 {
                    -1.0
                } else {
                    // ρκ₁ − κ₂ from the material differences, so that nearly
                    // matched layers keep full relative accuracy.
                    let dn = if self.xi > 0.0 { (p1 - p2) * (self.xi / C).powi(2) } else { n1 - n2 };
                    let gap = k1 * ((m2.coef - m1.coef) / m1.coef) + dn / (k1 + k2);
                    gap / (rho * k1 + k2)
                })
            }
        }
    }

    fn kappa(&self, pol: Polarization, j: usize, k: f64) -> Option<f64> {
        match self.site(pol, j) {
            Site::Medium { index_term, .. } => Some((index_term + k * k).sqrt()),
            Site::Mirror { .. } => None,
        }
    }

    /// Half-stack reflection seen from layer `j` at its face in `dir`;
    /// `None` when there is no interface that way.
    pub fn reflection(&self, pol: Polarization, j: usize, dir: Direction, k: f64) -> Result<Option<f64>> {
        if let Site::Mirror { .. } = self.site(pol, j) {
            return Err(Error::validation(format!("layer {j} is a perfect mirror")));
        }
        let n = self.stack.len();
        let next = |i: usize| -> Option<usize> {
            match dir {
                Direction::Up => (i + 1 < n).then_some(i + 1),
                Direction::Down => i.checked_sub(1),
            }
        };
        // Walk outward to the first mirror or the outermost layer.
        let mut path = vec![j];
        while let Some(i) = next(*path.last().unwrap()) {
            path.push(i);
            if matches!(self.site(pol, i), Site::Mirror { .. }) {
                break;
            }
        }
        if path.len() == 1 {
            return Ok(None);
        }
        let mut r_beyond: Option<f64> = None;
        for w in path.windows(2).rev() {
            let (near, far) = (w[0], w[1]);
            let r = self.interface(pol, near, far, k)?;
            r_beyond = Some(match (r_beyond, self.kappa(pol, far, k)) {
                (Some(beyond), Some(kf)) => {
                    let d = self.stack.thickness(far);
                    compose(r, beyond, (-2.0 * kf * d).exp())
                }
                _ => r,
            });
        }
        Ok(r_beyond)
    }

    /// Half-stack reflection R at the face of layer `j` in `dir`, the direct
    /// interface reflection r there, and R − r evaluated without
    /// cancellation. `None` when there is no interface that way or `j` is a
    /// mirror for this polarization.
    pub(crate) fn reflection_excess(&self, pol: Polarization, j: usize, dir: Direction, k: f64) -> Result<Option<(f64, f64, f64)>> {
        if matches!(self.site(pol, j), Site::Mirror { .. }) {
            return Ok(None);
        }
        let n = self.stack.len();
        let next = match dir {
            Direction::Up if j + 1 < n => j + 1,
            Direction::Down if j > 0 => j - 1,
            _ => return Ok(None),
        };
        let r = self.interface(pol, j, next, k)?;
        let outermost = next == 0 || next == n - 1;
        let (Some(kappa), false) = (self.kappa(pol, next, k), outermost) else {
            return Ok(Some((r, r, 0.0)));
        };
        let beyond = self.reflection(pol, next, dir, k)?.unwrap_or(0.0);
        let x = beyond * (-2.0 * kappa * self.stack.thickness(next)).exp();
        let denom = 1.0 + r * x;
        Ok(Some(((r + x) / denom, r, x * (1.0 - r * r) / denom)))
    }

    /// Half-stack reflections above and below `loc` for one polarization.
    pub(crate) fn surroundings(&self, pol: Polarization, loc: &Location, k: f64) -> Result<Surroundings<f64>> {
        Ok(Surroundings {
            up: self.reflection(pol, loc.index, Direction::Up, k)?,
            down: self.reflection(pol, loc.index, Direction::Down, k)?,
            dist_up: loc.above,
            dist_down: loc.below,
        })
    }

    /// Weighted coincidence-limit components at transverse wavenumber k.
    pub fn components(&self, loc: &Location, k: f64) -> Result<Components> {
        let Some(medium) = self.medium(loc.index) else {
            return Ok(Components::default());
        };
        let kappa = medium.kappa(k);
        let s = parts(kappa, &self.surroundings(Polarization::S, loc, k)?);
        let p = parts(kappa, &self.surroundings(Polarization::P, loc, k)?);
        Ok(Components::assemble(kappa, k, medium.index_term, &s, &p))
    }

    /// Slowest exponential decay length (in 1/k units) of the coincident
    /// integrand at `loc`, or `None` when nothing reflects.
    pub(crate) fn decay_distance(&self, loc: &Location) -> Option<f64> {
        let j = loc.index;
        self.medium(j)?;
        let has = |dir| {
            Polarization::BOTH.iter().any(|&pol| self.reflection(pol, j, dir, 1.0).map(|r| r.is_some()).unwrap_or(false))
        };
        let mut d = f64::INFINITY;
        if loc.above.is_finite() && has(Direction::Up) {
            d = d.min(loc.above);
        }
        if loc.below.is_finite() && has(Direction::Down) {
            d = d.min(loc.below);
        }
        d.is_finite().then_some(d)
    }

    /// True when no interface reflects at this frequency (uniform medium).
    pub fn is_uniform(&self) -> bool {
        let s = &self.sites;
        (1..self.stack.len()).all(|j| {
            s[0][j] == s[0][0] && s[1][j] == s[1][0] && matches!(s[0][0], Site::Medium { .. })
        })
    }
}

/// Coincidence-limit components weighted so that the observables are linear
/// in them: `exx = ε ΔE_xx/c²`, `ezz = ε ΔE_zz/c²`, `bxx = ΔB_xx/μ`,
/// `bzz = ΔB_zz/μ`, per unit of ∫ k dk/2π.
///
/// The observables are assembled from the single-reflection and round-trip
/// parts directly, grouped so that terms which cancel analytically never meet
/// in floating point. Each comes with the size of its groups, the floor
/// against which genuine cancellation is resolved.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Components {
    pub exx: f64,
    pub ezz: f64,
    pub bxx: f64,
    pub bzz: f64,
    s: kernel::Parts<f64>,
    p: kernel::Parts<f64>,
    kappa: f64,
    k2: f64,
    n2: f64,
}

impl Components {
    pub(crate) fn assemble(kappa: f64, k: f64, n2: f64, s: &kernel::Parts<f64>, p: &kernel::Parts<f64>) -> Self {
        let (cs, cp) = (s.coincident(kappa), p.coincident(kappa));
        let k2 = k * k;
        Self {
            exx: 0.5 * (cp.curl - n2 * cs.value),
            ezz: k2 * cp.value,
            bxx: 0.5 * (cs.curl - n2 * cp.value),
            bzz: k2 * cs.value,
            s: *s,
            p: *p,
            kappa,
            k2,
            n2,
        }
    }

    /// `f_e tr E + f_b tr B` with `tr E = 2exx + ezz`, `tr B = 2bxx + bzz`.
    pub fn weighted_trace(&self, f_e: f64, f_b: f64) -> (f64, f64) {
        let (s, p, n2) = (&self.s, &self.p, self.n2);
        let half = 0.5 / self.kappa;
        let sum = self.kappa * self.kappa + self.k2;
        let groups = [
            sum * (f_e * p.single + f_b * s.single),
            -n2 * (f_e * s.single + f_b * p.single),
            -2.0 * n2 * (f_e + f_b) * (s.round_trip + p.round_trip),
        ];
        (half * groups.iter().sum::<f64>(), half * groups.iter().map(|g| g.abs()).sum::<f64>())
    }

    pub fn trace_e(&self) -> f64 {
        self.weighted_trace(1.0, 0.0).0
    }

    pub fn trace_b(&self) -> f64 {
        self.weighted_trace(0.0, 1.0).0
    }

    /// `ezz + bzz`.
    pub fn sigma_xx(&self) -> (f64, f64) {
        let scale = self.k2 / (2.0 * self.kappa);
        let groups = [self.s.single + self.p.single, 2.0 * (self.s.round_trip + self.p.round_trip)];
        (scale * (groups[0] + groups[1]), scale * (groups[0].abs() + groups[1].abs()))
    }

    /// `2exx − ezz + 2bxx − bzz`.
    pub fn sigma_zz(&self) -> f64 {
        -2.0 * self.kappa * (self.s.round_trip + self.p.round_trip)
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.exx, self.ezz, self.bxx, self.bzz]
    }

    pub fn magnitude(&self) -> f64 {
        self.exx.abs() + self.ezz.abs() + self.bxx.abs() + self.bzz.abs()
    }
}

/// Control of the k⊥ integral.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KQuadrature {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
    /// The range is cut where e^{−2κ·distance} drops below e^{−decay_exponent}.
    pub decay_exponent: f64,
}

impl Default for KQuadrature {
    fn default() -> Self {
        Self { rel_tol: 1e-8, abs_tol: 0.0, max_intervals: 2000, decay_exponent: 14.0 * std::f64::consts::LN_10 }
    }
}

/// ∫₀^∞ (k/2π) f(components(k), k) dk at a fixed point and frequency.
///
/// `f` returns the integrands and their size. Convergence is judged relative
/// to the larger of the result and the integrated size, so that combinations
/// which cancel to far below their terms are not chased into roundoff. When
/// the interval budget runs out the best estimate is returned with
/// `converged = false`; callers decide whether its error matters.
pub fn integrate_k<const N: usize, F>(view: &FrequencyView<'_>, loc: &Location, f: F, ctl: &KQuadrature) -> Result<Integral<N>>
where
    F: Fn(&Components, f64) -> ([f64; N], f64),
{
    let Some(dist) = view.decay_distance(loc) else {
        return Ok(Integral { value: [0.0; N], error: 0.0, evaluations: 0, converged: true });
    };
    if dist == 0.0 {
        return Err(Error::validation("coincidence limit evaluated exactly on an interface"));
    }
    let integrand = |k: f64| -> Result<([f64; N], f64)> {
        let c = view.components(loc, k)?;
        let w = k / (2.0 * std::f64::consts::PI);
        let (values, size) = f(&c, k);
        Ok((values.map(|x| x * w), size * w))
    };
    let k_max = ctl.decay_exponent / (2.0 * dist);
    let quad = AdaptiveControl { rel_tol: ctl.rel_tol, abs_tol: ctl.abs_tol, max_intervals: ctl.max_intervals };
    let mut body = integrate_scaled_partial(integrand, 0.0, k_max, &quad)?;
    let edge = integrand(k_max)?.0;
    // Exponential tail beyond k_max with decay rate 2·dist.
    let rate = 2.0 * dist - 3.0 / k_max;
    if rate > 0.0 {
        for j in 0..N {
            body.value[j] += edge[j] / rate;
        }
    }
    if norm(&body.value).is_nan() {
        return Err(Error::Integration(format!("k-integral produced NaN at xi = {:e}", view.xi)));
    }
    Ok(body)
}

/// [`integrate_k`] that fails unless the tolerance was met.
pub fn integrate_k_strict<const N: usize, F>(view: &FrequencyView<'_>, loc: &Location, f: F, ctl: &KQuadrature) -> Result<[f64; N]>
where
    F: Fn(&Components, f64) -> ([f64; N], f64),
{
    let r = integrate_k(view, loc, f, ctl)?;
    if !r.converged {
        return Err(Error::Integration(format!(
            "k-integral at xi = {:e} reached {} intervals with error {:e}",
            view.xi, ctl.max_intervals, r.error
        )));
    }
    Ok(r.value)
}

/// Regularized coincidence-limit tensors at one imaginary frequency.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaTensors {
    pub e_xx: f64,
    pub e_yy: f64,
    pub e_zz: f64,
    pub b_xx: f64,
    pub b_yy: f64,
    pub b_zz: f64,
    pub z: f64,
    pub xi: f64,
    pub regularized: bool,
}

impl DeltaTensors {
    pub fn trace_e(&self) -> f64 {
        self.e_xx + self.e_yy + self.e_zz
    }

    pub fn trace_b(&self) -> f64 {
        self.b_xx + self.b_yy + self.b_zz
    }
}

pub(crate) fn locate_checked(stack: &LayerStack, z: f64) -> Result<Location> {
    if !z.is_finite() {
        return Err(Error::validation("evaluation point must be finite"));
    }
    let loc = stack.locate(z);
    if loc.on_interface() {
        log::warn!("z = {z:e} lies on an interface; using the layer above");
    }
    Ok(loc)
}

/// ΔE_ij = (iξ)² G^scat_ij and ΔB_ij = [∇×G^scat×∇′]_ij at coincidence,
/// integrated over k⊥.
pub fn delta_tensors(stack: &LayerStack, z: f64, xi: f64, ctl: &KQuadrature) -> Result<DeltaTensors> {
    let loc = locate_checked(stack, z)?;
    let view = FrequencyView::new(stack, xi)?;
    let w = integrate_k_strict(&view, &loc, |c, _| (c.as_array(), c.magnitude()), ctl)?;
    let (e_scale, b_scale) = match view.medium(loc.index) {
        Some(m) => (C * C * m.eps.recip(), m.mu.coef),
        None => (0.0, 0.0),
    };
    Ok(DeltaTensors {
        e_xx: e_scale * w[0],
        e_yy: e_scale * w[0],
        e_zz: e_scale * w[1],
        b_xx: b_scale * w[2],
        b_yy: b_scale * w[2],
        b_zz: b_scale * w[3],
        z,
        xi,
        regularized: true,
    })
}

pub fn interface_reflection(xi: f64, k: f64, from: &Material, to: &Material) -> Result<PolarizedReflection> {
    let stack = LayerStack::new(vec![
        crate::stack::Layer::semi_infinite("1", from.clone()),
        crate::stack::Layer::semi_infinite("2", to.clone()),
    ])?;
    half_stack_reflection(&stack, 0, Direction::Up, xi, k)
}

pub fn half_stack_reflection(stack: &LayerStack, layer: usize, dir: Direction, xi: f64, k: f64) -> Result<PolarizedReflection> {
    if layer >= stack.len() {
        return Err(Error::validation(format!("layer index {layer} out of range")));
    }
    let view = FrequencyView::new(stack, xi)?;
    let get = |pol| -> Result<f64> {
        view.reflection(pol, layer, dir, k)?
            .ok_or_else(|| Error::validation(format!("no interface {dir:?} from layer {layer}")))
    };
    Ok(PolarizedReflection { s: get(Polarization::S)?, p: get(Polarization::P)? })
}

/// Values and first derivatives of a scalar Green function at (z, z′).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GreenDerivatives {
    pub value: f64,
    pub dz: f64,
    pub dzp: f64,
    pub dz_dzp: f64,
}

/// Solutions of the homogeneous problem decaying downward (`u−`) and upward
/// (`u+`), stored in log form per layer.
struct Chain {
    first: usize,
    last: usize,
    kappa: Vec<f64>,
    coupling: Vec<f64>,
    up: Vec<Option<f64>>,
    down: Vec<Option<f64>>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    log_l: Vec<f64>,
    log_m: Vec<f64>,
}

impl Chain {
    fn new(view: &FrequencyView<'_>, pol: Polarization, j: usize, k: f64) -> Result<Self> {
        let n = view.stack.len();
        let is_mirror = |i: usize| matches!(view.site(pol, i), Site::Mirror { .. });
        let mut first = j;
        while first > 0 && !is_mirror(first - 1) {
            first -= 1;
        }
        let mut last = j;
        while last + 1 < n && !is_mirror(last + 1) {
            last += 1;
        }
        let mut kappa = vec![0.0; n];
        let mut coupling = vec![0.0; n];
        let mut up = vec![None; n];
        let mut down = vec![None; n];
        let mut lo = vec![0.0; n];
        let mut hi = vec![0.0; n];
        for i in first..=last {
            let Site::Medium { m, index_term, .. } = view.site(pol, i) else { unreachable!() };
            if m.pole_order > 0 {
                return Err(Error::validation(
                    "scalar Green function is degenerate in a layer with a static pole; use xi > 0",
                ));
            }
            kappa[i] = (index_term + k * k).sqrt();
            coupling[i] = 1.0 / m.coef;
            up[i] = view.reflection(pol, i, Direction::Up, k)?;
            down[i] = view.reflection(pol, i, Direction::Down, k)?;
            let (l, h) = (view.stack.lower(i), view.stack.upper(i));
            lo[i] = if l.is_finite() { l } else { h };
            hi[i] = if h.is_finite() { h } else { l };
        }
        let mut chain = Chain { first, last, kappa, coupling, up, down, lo, hi, log_l: vec![0.0; n], log_m: vec![0.0; n] };
        for i in first..last {
            let z_i = chain.hi[i];
            chain.log_l[i + 1] = chain.log_u_minus(i, z_i) - ln_1p(chain.down[i + 1].unwrap_or(0.0));
        }
        for i in (first..last).rev() {
            let z_i = chain.hi[i];
            chain.log_m[i] = chain.log_u_plus(i + 1, z_i) - ln_1p(chain.up[i].unwrap_or(0.0));
        }
        Ok(chain)
    }

    fn log_u_minus(&self, i: usize, z: f64) -> f64 {
        let x = z - self.lo[i];
        self.log_l[i] + self.kappa[i] * x + ln_1p(self.down[i].map_or(0.0, |r| r * (-2.0 * self.kappa[i] * x).exp()))
    }

    fn log_u_plus(&self, i: usize, z: f64) -> f64 {
        let x = self.hi[i] - z;
        self.log_m[i] + self.kappa[i] * x + ln_1p(self.up[i].map_or(0.0, |r| r * (-2.0 * self.kappa[i] * x).exp()))
    }

    fn dlog_u_minus(&self, i: usize, z: f64) -> f64 {
        let e = self.down[i].map_or(0.0, |r| r * (-2.0 * self.kappa[i] * (z - self.lo[i])).exp());
        self.kappa[i] * (1.0 - e) / (1.0 + e)
    }

    fn dlog_u_plus(&self, i: usize, z: f64) -> f64 {
        let e = self.up[i].map_or(0.0, |r| r * (-2.0 * self.kappa[i] * (self.hi[i] - z)).exp());
        -self.kappa[i] * (1.0 - e) / (1.0 + e)
    }

    fn log_wronskian(&self, i: usize) -> f64 {
        let d = self.hi[i] - self.lo[i];
        let one_minus_x = match (self.up[i], self.down[i]) {
            (Some(a), Some(b)) => kernel::one_minus(a * b, 2.0 * self.kappa[i] * d),
            _ => 1.0,
        };
        self.coupling[i].ln() + self.log_l[i] + self.log_m[i] + (2.0 * self.kappa[i]).ln() + self.kappa[i] * d + one_minus_x.ln()
    }

    fn contains(&self, i: usize) -> bool {
        (self.first..=self.last).contains(&i)
    }
}

fn ln_1p(x: f64) -> f64 {
    x.ln_1p()
}

fn check_k(xi: f64, k: f64) -> Result<()> {
    if !(k >= 0.0 && k.is_finite()) || !(xi >= 0.0 && xi.is_finite()) {
        return Err(Error::validation("xi and k must be finite and non-negative"));
    }
    if xi == 0.0 && k == 0.0 {
        return Err(Error::validation("(xi, k) = (0, 0) is excluded"));
    }
    Ok(())
}

/// g_σ(z, z′) with its first and mixed derivatives.
pub fn scalar_green_derivatives(
    stack: &LayerStack,
    pol: Polarization,
    xi: f64,
    k: f64,
    z: f64,
    zp: f64,
) -> Result<GreenDerivatives> {
    check_k(xi, k)?;
    let view = FrequencyView::new(stack, xi)?;
    let (lz, lzp) = (locate_checked(stack, z)?, locate_checked(stack, zp)?);
    let zero = GreenDerivatives { value: 0.0, dz: 0.0, dzp: 0.0, dz_dzp: 0.0 };
    if matches!(view.site(pol, lzp.index), Site::Mirror { .. }) || matches!(view.site(pol, lz.index), Site::Mirror { .. }) {
        return Ok(zero);
    }
    let chain = Chain::new(&view, pol, lzp.index, k)?;
    if !chain.contains(lz.index) {
        return Ok(zero);
    }
    let (lower, upper, swapped) = if z <= zp { ((lz.index, z), (lzp.index, zp), false) } else { ((lzp.index, zp), (lz.index, z), true) };
    let log_g = chain.log_u_minus(lower.0, lower.1) + chain.log_u_plus(upper.0, upper.1) - chain.log_wronskian(lzp.index);
    let value = log_g.exp();
    let d_lower = chain.dlog_u_minus(lower.0, lower.1);
    let d_upper = chain.dlog_u_plus(upper.0, upper.1);
    let (dz, dzp) = if swapped { (d_upper, d_lower) } else { (d_lower, d_upper) };
    Ok(GreenDerivatives { value, dz: value * dz, dzp: value * dzp, dz_dzp: value * d_lower * d_upper })
}

/// g_σ(z, z′) for the planar problem, decaying at ±∞.
pub fn scalar_green(stack: &LayerStack, pol: Polarization, xi: f64, k: f64, z: f64, zp: f64) -> Result<f64> {
    Ok(scalar_green_derivatives(stack, pol, xi, k, z, zp)?.value)
}
