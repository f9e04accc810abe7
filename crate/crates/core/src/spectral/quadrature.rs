//! Vector-valued quadrature: adaptive Gauss–Kronrod on finite intervals,
//! exp-sinh on the half line, and pairwise summation.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Tolerances for adaptive integration on a finite interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdaptiveControl {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for AdaptiveControl {
    fn default() -> Self {
        Self { rel_tol: 1e-8, abs_tol: 0.0, max_intervals: 2000 }
    }
}

/// Integral value with its error estimate (max-norm over components).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Integral<const N: usize> {
    pub value: [f64; N],
    pub error: f64,
    pub evaluations: usize,
    /// False when the interval budget ran out before the tolerance was met.
    pub converged: bool,
}

pub(crate) fn norm<const N: usize>(v: &[f64; N]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

struct Segment<const N: usize> {
    a: f64,
    b: f64,
    value: [f64; N],
    error: f64,
    scale: f64,
}

impl<const N: usize> PartialEq for Segment<N> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<const N: usize> Eq for Segment<N> {}
impl<const N: usize> PartialOrd for Segment<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<const N: usize> Ord for Segment<N> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error).then(other.a.total_cmp(&self.a))
    }
}

fn gk15<const N: usize, F>(f: &mut F, a: f64, b: f64) -> Result<Segment<N>>
where
    F: FnMut(f64) -> Result<([f64; N], f64)>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut k = [0.0; N];
    let mut g = [0.0; N];
    let (fc, sc) = f(c)?;
    let mut scale = WGK[7] * sc.abs();
    for j in 0..N {
        k[j] = WGK[7] * fc[j];
        g[j] = WG[3] * fc[j];
    }
    for i in 0..7 {
        let dx = h * XGK[i];
        let (f1, s1) = f(c - dx)?;
        let (f2, s2) = f(c + dx)?;
        scale += WGK[i] * (s1.abs() + s2.abs());
        for j in 0..N {
            let s = f1[j] + f2[j];
            k[j] += WGK[i] * s;
            if i % 2 == 1 {
                g[j] += WG[i / 2] * s;
            }
        }
    }
    let mut err = 0.0f64;
    for j in 0..N {
        k[j] *= h;
        g[j] *= h;
        err = err.max((k[j] - g[j]).abs());
    }
    Ok(Segment { a, b, value: k, error: err, scale: scale * h })
}

/// Globally adaptive G7/K15 integration of a vector-valued function over `[a, b]`.
///
/// Converges when the summed error estimate falls below
/// `max(abs_tol, rel_tol * |I|)` in the max-norm.
pub fn integrate<const N: usize, F>(mut f: F, a: f64, b: f64, ctl: &AdaptiveControl) -> Result<Integral<N>>
where
    F: FnMut(f64) -> Result<[f64; N]>,
{
    integrate_scaled(|x| Ok((f(x)?, 0.0)), a, b, ctl)
}

const UNDERFLOW: f64 = f64::MIN_POSITIVE / f64::EPSILON;

/// As [`integrate`], with the integrand also reporting a non-negative size
/// s(x). The tolerance becomes `max(abs_tol, rel_tol * max(|I|, ∫s))`, which
/// stops refinement once the result is resolved relative to the terms it
/// was assembled from.
pub fn integrate_scaled<const N: usize, F>(f: F, a: f64, b: f64, ctl: &AdaptiveControl) -> Result<Integral<N>>
where
    F: FnMut(f64) -> Result<([f64; N], f64)>,
{
    let r = integrate_scaled_partial(f, a, b, ctl)?;
    if !r.converged {
        return Err(Error::Integration(format!(
            "adaptive quadrature on [{a:e}, {b:e}] reached {} intervals with error {:e}",
            ctl.max_intervals, r.error
        )));
    }
    Ok(r)
}

/// As [`integrate_scaled`], but an exhausted interval budget returns the best
/// estimate with `converged = false` instead of an error.
pub fn integrate_scaled_partial<const N: usize, F>(mut f: F, a: f64, b: f64, ctl: &AdaptiveControl) -> Result<Integral<N>>
where
    F: FnMut(f64) -> Result<([f64; N], f64)>,
{
    if a == b {
        return Ok(Integral { value: [0.0; N], error: 0.0, evaluations: 0, converged: true });
    }
    let mut heap = BinaryHeap::new();
    heap.push(gk15(&mut f, a, b)?);
    let mut evaluations = 15;
    loop {
        let (total, err, size) = totals(&heap);
        // Below the normal range roundoff is absolute, so nothing finer is attainable.
        let target = ctl.abs_tol.max(ctl.rel_tol * norm(&total).max(size)).max(UNDERFLOW);
        if err <= target || norm(&total) == 0.0 && err == 0.0 {
            return Ok(Integral { value: total, error: err, evaluations, converged: true });
        }
        if heap.len() >= ctl.max_intervals {
            return Ok(Integral { value: total, error: err, evaluations, converged: false });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Ok(Integral { value: total, error: err, evaluations, converged: false });
        }
        heap.push(gk15(&mut f, worst.a, mid)?);
        heap.push(gk15(&mut f, mid, worst.b)?);
        evaluations += 30;
    }
}

fn totals<const N: usize>(heap: &BinaryHeap<Segment<N>>) -> ([f64; N], f64, f64) {
    let mut segs: Vec<&Segment<N>> = heap.iter().collect();
    segs.sort_by(|x, y| x.a.total_cmp(&y.a));
    let values: Vec<[f64; N]> = segs.iter().map(|s| s.value).collect();
    let err = pairwise_sum(&segs.iter().map(|s| s.error).collect::<Vec<_>>());
    let size = pairwise_sum(&segs.iter().map(|s| s.scale).collect::<Vec<_>>());
    (pairwise_sum_vec(&values), err, size)
}

/// Control for half-line integration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfLineControl {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Characteristic scale of the integrand; nodes cluster around it.
    pub scale: f64,
    pub max_level: u32,
}

impl Default for HalfLineControl {
    fn default() -> Self {
        Self { rel_tol: 1e-8, abs_tol: 0.0, scale: 1.0, max_level: 12 }
    }
}

/// exp-sinh quadrature of ∫₀^∞ f(x) dx with x = s·exp(π/2·sinh t).
///
/// The step is halved until successive estimates agree to the tolerance.
/// The left end is truncated where the omitted mass is below
/// `rel_tol·1e-3` of a bounded integrand; the right end where three
/// consecutive weighted samples are negligible.
pub fn integrate_half_line<const N: usize, F>(f: F, ctl: &HalfLineControl) -> Result<Integral<N>>
where
    F: Fn(f64) -> Result<[f64; N]> + Sync,
{
    use std::f64::consts::FRAC_PI_2;
    let s = ctl.scale;
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::validation("half-line quadrature scale must be positive"));
    }
    let node = |t: f64| {
        let x = s * (FRAC_PI_2 * t.sinh()).exp();
        (x, x * FRAC_PI_2 * t.cosh())
    };
    let x_min_ratio = (ctl.rel_tol * 1e-3).max(1e-300);
    let t_lo = -((-x_min_ratio.ln()) / FRAC_PI_2).asinh();
    let t_cap = 6.0;

    let eval = |t: f64| -> Result<[f64; N]> {
        let (x, w) = node(t);
        if !x.is_finite() || w == 0.0 {
            return Ok([0.0; N]);
        }
        let mut v = f(x)?;
        for c in v.iter_mut() {
            *c *= w;
        }
        Ok(v)
    };

    // Level 0: nodes at integer multiples of h0; find the right truncation point.
    let h0 = 0.5;
    let m_lo = (t_lo / h0).floor() as i64;
    let mut samples: Vec<[f64; N]> = Vec::new();
    for m in m_lo..0 {
        samples.push(eval(m as f64 * h0)?);
    }
    let mut m_hi = 0i64;
    let mut quiet = 0;
    loop {
        let v = eval(m_hi as f64 * h0)?;
        let running = norm(&pairwise_sum_vec(&samples));
        samples.push(v);
        if norm(&v) <= 1e-18 * running || norm(&v) == 0.0 {
            quiet += 1;
        } else {
            quiet = 0;
        }
        if quiet >= 3 || m_hi as f64 * h0 >= t_cap {
            break;
        }
        m_hi += 1;
    }
    let (t_start, t_end) = (m_lo as f64 * h0, m_hi as f64 * h0);
    let mut sum = pairwise_sum_vec(&samples);
    let mut estimate = scale(&sum, h0);
    let mut evaluations = samples.len();
    let mut h = h0;
    for _level in 1..=ctl.max_level {
        h *= 0.5;
        let count = ((t_end - t_start) / (2.0 * h)).round() as i64;
        let ts: Vec<f64> = (0..count).map(|j| t_start + (2 * j + 1) as f64 * h).collect();
        let fresh = {
            use rayon::prelude::*;
            ts.par_iter().map(|&t| eval(t)).collect::<Result<Vec<_>>>()?
        };
        evaluations += fresh.len();
        let add = pairwise_sum_vec(&fresh);
        for j in 0..N {
            sum[j] += add[j];
        }
        let next = scale(&sum, h);
        let mut diff = [0.0; N];
        for j in 0..N {
            diff[j] = next[j] - estimate[j];
        }
        let err = norm(&diff);
        estimate = next;
        if err <= ctl.abs_tol.max(ctl.rel_tol * norm(&estimate)) {
            return Ok(Integral { value: estimate, error: err, evaluations, converged: true });
        }
    }
    Err(Error::Integration(format!(
        "exp-sinh quadrature did not converge after {} levels (scale {s:e})",
        ctl.max_level
    )))
}

fn scale<const N: usize>(v: &[f64; N], h: f64) -> [f64; N] {
    let mut out = *v;
    for x in out.iter_mut() {
        *x *= h;
    }
    out
}

/// Pairwise (cascade) summation; the result depends only on the input order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let m = xs.len() / 2;
    pairwise_sum(&xs[..m]) + pairwise_sum(&xs[m..])
}

pub fn pairwise_sum_vec<const N: usize>(xs: &[[f64; N]]) -> [f64; N] {
    if xs.len() <= 8 {
        let mut acc = [0.0; N];
        for x in xs {
            for j in 0..N {
                acc[j] += x[j];
            }
        }
        return acc;
    }
    let m = xs.len() / 2;
    let l = pairwise_sum_vec(&xs[..m]);
    let r = pairwise_sum_vec(&xs[m..]);
    let mut acc = [0.0; N];
    for j in 0..N {
        acc[j] = l[j] + r[j];
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gk_polynomial_exact() {
        let r = integrate(|x| Ok([x.powi(5) - 2.0 * x]), 0.0, 2.0, &AdaptiveControl::default()).unwrap();
        assert!((r.value[0] - (64.0 / 6.0 - 4.0)).abs() < 1e-13);
    }

    #[test]
    fn gk_adapts_to_peak() {
        let w: f64 = 1e-4;
        let exact = 2.0 * (1.0 / w).atan() / w;
        let r = integrate(|x: f64| Ok([1.0 / (x * x + w * w)]), -1.0, 1.0, &AdaptiveControl::default()).unwrap();
        assert!((r.value[0] / exact - 1.0).abs() < 1e-8);
    }

    #[test]
    fn gk_reports_failure() {
        let ctl = AdaptiveControl { max_intervals: 10, ..Default::default() };
        assert!(integrate(|x: f64| Ok([1.0 / x.abs().sqrt().max(1e-300)]), -1.0, 1.0, &ctl).is_err());
    }

    #[test]
    fn partial_returns_best_estimate() {
        let ctl = AdaptiveControl { max_intervals: 10, ..Default::default() };
        let r = integrate_scaled_partial(|x: f64| Ok(([1.0 / x.abs().sqrt().max(1e-300)], 0.0)), -1.0, 1.0, &ctl).unwrap();
        assert!(!r.converged);
        assert!((r.value[0] - 4.0).abs() < 0.5);
        assert!(r.error > 0.0);
    }

    #[test]
    fn half_line_exponential_moments() {
        let a = 1e-14;
        let ctl = HalfLineControl { scale: 1.0 / a, ..Default::default() };
        let r = integrate_half_line(|x| Ok([(-a * x).exp(), x * x * (-a * x).exp()]), &ctl).unwrap();
        assert!((r.value[0] * a - 1.0).abs() < 1e-8);
        assert!((r.value[1] * a.powi(3) / 2.0 - 1.0).abs() < 1e-8);
    }

    #[test]
    fn half_line_tolerates_poor_scale() {
        let ctl = HalfLineControl { scale: 1.0, ..Default::default() };
        let a = 1e-14;
        let r = integrate_half_line(|x| Ok([(-a * x).exp()]), &ctl).unwrap();
        assert!((r.value[0] * a - 1.0).abs() < 1e-8);
    }

    #[test]
    fn pairwise_matches_naive() {
        let xs: Vec<f64> = (0..1000).map(|i| 1.0 / (i as f64 + 1.0)).collect();
        let naive: f64 = xs.iter().sum();
        assert!((pairwise_sum(&xs) - naive).abs() < 1e-12);
    }
}
