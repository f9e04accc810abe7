//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use casimir::casimir::{
    energy_density_t0, energy_per_area, fluctuation_spectra, force_per_area, local_observables, stress_divergence,
    stress_tensor_t0, Settings, SpectraOptions, Temperature,
};
use casimir::constants::{C, HBAR, K_B, ZETA_3};
use casimir::green1d::ode_oracle::{ode_oracle_green, OdeOracleConfig};
use casimir::green1d::tensor::curl_curl_residual;
use casimir::green1d::{scalar_green, Polarization};
use casimir::materials::{kk_real_from_imag, KkControl, Material, MaterialModel, Oscillator, ResponseFunction};
use casimir::oracles::lifshitz_halfspace_pressure;
use casimir::spectral::Truncation;
use casimir::stack::{BlendShape, GradedProfile, GradedStack, Layer, LayerStack};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

fn mirrors(a: f64) -> LayerStack {
    LayerStack::cavity(Material::perfect_mirror(), Material::vacuum(), a, Material::perfect_mirror()).unwrap()
}

fn gold() -> Material {
    Material::drude(1.37e16, 5.32e13)
}

fn medium(eps: f64, mu: f64) -> Material {
    Material::Medium(MaterialModel::new(ResponseFunction::constant(eps), ResponseFunction::constant(mu)))
}

fn ideal_mirror_pressure() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for a in [1e-7, 5e-7, 1e-6, 5e-6] {
        let f = force_per_area(&mirrors(a), 1, Temperature::Zero, &Settings::default()).map_err(|e| e.to_string())?;
        worst = worst.max(rel(f, -PI * PI * HBAR * C / (240.0 * a.powi(4))));
    }
    let t = start.elapsed();
    check(worst < 1e-3 && t < Duration::from_secs(5), format!("max rel {worst:.2e}, {t:.2?}"))
}

fn ideal_mirror_energy_density() -> Outcome {
    let a = 1e-6;
    let stack = mirrors(a);
    let s = Settings::default();
    let expect = -PI * PI * HBAR * C / (720.0 * a.powi(4));
    let mid = energy_density_t0(&stack, 0.5 * a, &s).map_err(|e| e.to_string())?.value;
    let profile: Vec<f64> = (1..20)
        .map(|i| energy_density_t0(&stack, i as f64 * a / 20.0, &s).map(|r| r.value))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let spread = profile.iter().map(|v| rel(*v, mid)).fold(0.0, f64::max);
    check(rel(mid, expect) < 5e-3 && spread < 1e-4, format!("midpoint rel {:.2e}, profile spread {spread:.2e}", rel(mid, expect)))
}

fn classical_limit() -> Outcome {
    let (a, t) = (1e-5, 300.0);
    let stack = mirrors(a);
    let s = Settings::default();
    let f = force_per_area(&stack, 1, Temperature::Kelvin(t), &s).map_err(|e| e.to_string())?;
    let first = Settings { truncation: Truncation::Fixed { max_n: 0 }, ..s };
    let f0 = force_per_area(&stack, 1, Temperature::Kelvin(t), &first).map_err(|e| e.to_string())?;
    let expect = -K_B * t * ZETA_3 / (8.0 * PI * a.powi(3));
    let share = f0 / f;
    check(rel(f, expect) < 1e-2 && share > 0.99, format!("rel {:.2e}, n = 0 share {share:.5}", rel(f, expect)))
}

fn random_response(rng: &mut ChaCha8Rng) -> (Material, &'static str) {
    match rng.random_range(0..3) {
        0 => (Material::drude(rng.random_range(5e15..2e16), rng.random_range(1e13..1e14)), "drude"),
        1 => (
            Material::dielectric(ResponseFunction::lorentz(vec![Oscillator {
                strength: rng.random_range(1e16..3e16),
                resonance: rng.random_range(5e15..1.5e16),
                damping: rng.random_range(1e13..1e14),
            }])),
            "lorentz",
        ),
        _ => (Material::dielectric(ResponseFunction::constant(rng.random_range(1.5..10.0))), "constant"),
    }
}

fn lifshitz_cross_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut label = String::new();
    for _ in 0..20 {
        let (m1, n1) = random_response(&mut rng);
        let (m2, n2) = random_response(&mut rng);
        let a = (rng.random_range((5e-8f64).ln()..(2e-6f64).ln())).exp();
        let t = if rng.random_bool(0.5) { Temperature::Zero } else { Temperature::Kelvin(300.0) };
        let stack = LayerStack::cavity(m1.clone(), Material::vacuum(), a, m2.clone()).unwrap();
        let f = force_per_area(&stack, 1, t, &Settings::default()).map_err(|e| e.to_string())?;
        let o = lifshitz_halfspace_pressure(&m1, &m2, a, t).map_err(|e| e.to_string())?;
        let r = rel(f, o.value);
        if r > worst {
            worst = r;
            label = format!("{n1}/{n2} a = {a:.3e} {t}");
        }
    }
    let t = start.elapsed();
    check(worst < 1e-5 && t < Duration::from_secs(60), format!("max rel {worst:.2e} ({label}), {t:.2?}"))
}

fn random_stack(rng: &mut ChaCha8Rng) -> LayerStack {
    let mut m = || medium(rng.random_range(1.0..12.0), rng.random_range(1.0..4.0));
    let (m0, m1, m2, m3) = (m(), m(), m(), m());
    LayerStack::new(vec![
        Layer::semi_infinite("bottom", m0),
        Layer::finite("a", m1, rng.random_range(2e-8..3e-7)),
        Layer::finite("b", m2, rng.random_range(2e-8..3e-7)),
        Layer::semi_infinite("top", m3),
    ])
    .unwrap()
}

fn green_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cfg = OdeOracleConfig { resolution: 1e-3, ..Default::default() };
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let stack = random_stack(&mut rng);
        let pol = if i % 2 == 0 { Polarization::S } else { Polarization::P };
        let xi = rng.random_range(1e14..3e15);
        let k = rng.random_range(1e6..2e7);
        let top = stack.interfaces()[2];
        let z = rng.random_range(-1e-7..top + 1e-7);
        let zp = rng.random_range(-1e-7..top + 1e-7);
        let g = scalar_green(&stack, pol, xi, k, z, zp).map_err(|e| e.to_string())?;
        let o = ode_oracle_green(&stack, pol, xi, k, z, zp, &cfg).map_err(|e| e.to_string())?;
        worst = worst.max((g - o).abs() / g.abs());
    }

    let stack = LayerStack::new(vec![
        Layer::semi_infinite("a", medium(4.0, 1.0)),
        Layer::finite("b", Material::vacuum(), 3e-7),
        Layer::semi_infinite("c", medium(2.0, 3.0)),
    ])
    .unwrap();
    let (xi, k, z, zp) = (5e14, 4e6, -1e-7, 1e-7);
    let exact = scalar_green(&stack, Polarization::P, xi, k, z, zp).map_err(|e| e.to_string())?;
    let err = |r: f64| {
        let cfg = OdeOracleConfig { resolution: r, min_cells: 2, ..Default::default() };
        ode_oracle_green(&stack, Polarization::P, xi, k, z, zp, &cfg).map(|g| (g - exact).abs())
    };
    let rate = (err(0.08).map_err(|e| e.to_string())? / err(0.04).map_err(|e| e.to_string())?).log2();
    check(worst < 1e-4 && (rate - 2.0).abs() <= 0.2, format!("max rel {worst:.2e}, refinement rate {rate:.3}"))
}

fn pde_residual() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    let mut samples = 0;
    while samples < 40 {
        let stack = random_stack(&mut rng);
        let top = stack.interfaces()[2];
        let z = rng.random_range(-1e-7..top + 1e-7);
        let zp = rng.random_range(-1e-7..top + 1e-7);
        let loc = stack.locate(z);
        if loc.nearest() < 5e-9 || (z - zp).abs() < 5e-9 {
            continue;
        }
        let xi = rng.random_range(1e14..3e15);
        let (kx, ky) = (rng.random_range(-1e7..1e7), rng.random_range(-1e7..1e7));
        let r = curl_curl_residual(&stack, xi, kx, ky, z, zp).map_err(|e| e.to_string())?;
        worst = worst.max(r);
        samples += 1;
    }
    check(worst < 1e-6, format!("max residual {worst:.2e} over {samples} samples"))
}

fn energy_force_consistency() -> Outcome {
    let s = Settings::default();
    let a = 2e-7;
    let h = 1e-3 * a;
    let mut out = Vec::new();
    for (name, m, tol) in [("ideal", Material::perfect_mirror(), 1e-3), ("drude", gold(), 1e-2)] {
        let cavity = |d: f64| LayerStack::cavity(m.clone(), Material::vacuum(), d, m.clone()).unwrap();
        let e = |d: f64| energy_per_area(&cavity(d), 1, Temperature::Zero, &s).map(|r| r.value);
        let de = -(e(a + h).map_err(|e| e.to_string())? - e(a - h).map_err(|e| e.to_string())?) / (2.0 * h);
        let f = force_per_area(&cavity(a), 1, Temperature::Zero, &s).map_err(|e| e.to_string())?;
        out.push((name, rel(de, f), tol));
    }
    let detail = out.iter().map(|(n, r, _)| format!("{n} rel {r:.2e}")).collect::<Vec<_>>().join(", ");
    check(out.iter().all(|(_, r, t)| r < t), detail)
}

fn kramers_kronig() -> Outcome {
    let wp = 1.37e16;
    let drude = ResponseFunction::drude(wp, 5.32e13);
    let lorentz = ResponseFunction::lorentz(vec![Oscillator { strength: wp, resonance: 0.6 * wp, damping: 0.05 * wp }]);
    let ctl = KkControl::default();
    let mut worst: f64 = 0.0;
    for model in [&drude, &lorentz] {
        for i in 0..=40 {
            let w = 0.1 * wp * 100f64.powf(i as f64 / 40.0);
            let kk = kk_real_from_imag(model, w, &ctl).map_err(|e| e.to_string())?;
            let exact = model.eval_real_axis(w).map_err(|e| e.to_string())?.re;
            worst = worst.max(((kk - exact) / exact).abs());
        }
    }
    check(worst < 1e-3, format!("max rel {worst:.2e}"))
}

fn vacuum_null() -> Outcome {
    let s = Settings::default();
    let v = Material::vacuum;
    let stack = LayerStack::new(vec![
        Layer::semi_infinite("a", v()),
        Layer::finite("b", v(), 3e-7),
        Layer::finite("c", v(), 2e-7),
        Layer::semi_infinite("d", v()),
    ])
    .unwrap();
    let vac = MaterialModel::dielectric(ResponseFunction::Vacuum);
    let graded = GradedStack::new(
        vec![Layer::semi_infinite("a", v())],
        GradedProfile { thickness: 4e-7, from: vac.clone(), to: vac, shape: BlendShape::Cosine },
        8,
        vec![Layer::semi_infinite("d", v())],
    )
    .unwrap();
    let mut worst: f64 = 0.0;
    for t in [Temperature::Zero, Temperature::Kelvin(300.0)] {
        for z in [-1e-7, 1e-7, 4e-7, 7e-7] {
            let o = local_observables(&stack, z, t, &s).map_err(|e| e.to_string())?;
            let d = stress_divergence(&graded, z + 1e-9, t, &s).map_err(|e| e.to_string())?;
            let sp = fluctuation_spectra(&stack, z, 1e15, t, &SpectraOptions::default()).map_err(|e| e.to_string())?;
            for x in [o.rho, o.sigma_xx, o.sigma_zz, d.value, sp.ee_scattering, sp.bb_scattering] {
                worst = worst.max(x.abs());
            }
        }
    }
    check(worst < 1e-14, format!("max |value| {worst:.2e}"))
}

fn divergence_law() -> Outcome {
    let s = Settings::default();
    let t = Temperature::Zero;

    let cavity = LayerStack::new(vec![
        Layer::semi_infinite("metal", gold()),
        Layer::finite("gap", Material::vacuum(), 1e-7),
        Layer::finite("film", medium(3.0, 1.5), 2e-7),
        Layer::semi_infinite("top", medium(2.0, 1.0)),
    ])
    .unwrap();
    let mut flat: f64 = 0.0;
    for z in [-5e-8, 3e-8, 1.5e-7, 2.2e-7, 4e-7] {
        flat = flat.max(stress_divergence(&cavity, z, t, &s).map_err(|e| e.to_string())?.value.abs());
    }

    let (l, steps) = (1e-6, 64);
    let model = |e: f64, m: f64| MaterialModel::new(ResponseFunction::constant(e), ResponseFunction::constant(m));
    let graded = GradedStack::new(
        vec![Layer::semi_infinite("metal", gold()), Layer::finite("gap", Material::vacuum(), 1e-7)],
        GradedProfile { thickness: l, from: model(2.0, 1.0), to: model(2.0002, 1.0001), shape: BlendShape::Linear },
        steps,
        vec![Layer::semi_infinite("substrate", medium(2.0002, 1.0001))],
    )
    .unwrap();
    let stack = &graded.stack;
    let h = l / steps as f64;
    let mid = |i: usize| stack.midpoint(2 + i).unwrap();
    let szz = |i: usize| local_observables(stack, mid(i), t, &s).map(|o| o.sigma_zz);
    let mut worst: f64 = 0.0;
    for i in [24, 32, 40] {
        let d = stress_divergence(&graded, mid(i), t, &s).map_err(|e| e.to_string())?.value;
        let v = |j: usize| szz(j).map_err(|e| e.to_string());
        let fd1 = (v(i + 1)? - v(i - 1)?) / (2.0 * h);
        let fd2 = (v(i + 2)? - v(i - 2)?) / (4.0 * h);
        let fd = (4.0 * fd1 - fd2) / 3.0;
        worst = worst.max(rel(d, fd));
    }
    check(flat == 0.0 && worst < 1e-2, format!("homogeneous max |div| {flat:.1e}, graded vs FD max rel {worst:.2e}"))
}

fn symmetry_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let s = Settings::default();
    let mut worst_even: f64 = 0.0;
    let mut worst_recip: f64 = 0.0;
    let mut worst_diag: f64 = 0.0;
    for _ in 0..6 {
        let (outer, _) = random_response(&mut rng);
        let inner = medium(rng.random_range(1.5..6.0), rng.random_range(1.0..2.5));
        let (d1, d2) = (rng.random_range(5e-8..2e-7), rng.random_range(5e-8..2e-7));
        let stack = LayerStack::new(vec![
            Layer::semi_infinite("l", outer.clone()),
            Layer::finite("g1", Material::vacuum(), d1),
            Layer::finite("core", inner, d2),
            Layer::finite("g2", Material::vacuum(), d1),
            Layer::semi_infinite("r", outer),
        ])
        .unwrap();
        let centre = d1 + 0.5 * d2;
        for frac in [0.2, 0.6, 1.3] {
            let dz = frac * 0.5 * d2.min(d1);
            let (a, b) = (
                local_observables(&stack, centre - dz, Temperature::Zero, &s).map_err(|e| e.to_string())?,
                local_observables(&stack, centre + dz, Temperature::Zero, &s).map_err(|e| e.to_string())?,
            );
            for (x, y) in [(a.rho, b.rho), (a.sigma_xx, b.sigma_xx), (a.sigma_zz, b.sigma_zz)] {
                worst_even = worst_even.max((x - y).abs() / x.abs().max(y.abs()));
            }
        }
        let st = stress_tensor_t0(&stack, 0.5 * d1, &s).map_err(|e| e.to_string())?;
        let m = st.matrix();
        let off = [m[0][1], m[0][2], m[1][0], m[1][2], m[2][0], m[2][1]].iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        worst_diag = worst_diag.max(off).max((m[0][0] - m[1][1]).abs() / m[0][0].abs());

        for _ in 0..10 {
            let top = stack.interfaces()[3];
            let (z, zp) = (rng.random_range(-5e-8..top + 5e-8), rng.random_range(-5e-8..top + 5e-8));
            let (xi, k) = (rng.random_range(1e14..3e15), rng.random_range(1e6..2e7));
            for pol in Polarization::BOTH {
                let g1 = scalar_green(&stack, pol, xi, k, z, zp).map_err(|e| e.to_string())?;
                let g2 = scalar_green(&stack, pol, xi, k, zp, z).map_err(|e| e.to_string())?;
                worst_recip = worst_recip.max((g1 - g2).abs() / g1.abs());
            }
        }
    }
    check(
        worst_even < 1e-8 && worst_recip < 1e-8 && worst_diag < 1e-8,
        format!("midplane parity {worst_even:.1e}, reciprocity {worst_recip:.1e}, xx/yy and off-diagonal {worst_diag:.1e}"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("ideal-mirror pressure at T = 0", ideal_mirror_pressure),
        ("ideal-mirror energy density and uniform profile", ideal_mirror_energy_density),
        ("classical limit at 10 um, 300 K", classical_limit),
        ("two-half-space Lifshitz cross-check", lifshitz_cross_check),
        ("scalar Green function vs finite-difference solve", green_equivalence),
        ("curl-curl residual of the Green tensor", pde_residual),
        ("energy derivative equals force", energy_force_consistency),
        ("Kramers-Kronig reconstruction", kramers_kronig),
        ("all-vacuum stack is null", vacuum_null),
        ("stress divergence law", divergence_law),
        ("symmetry and structure", symmetry_suite),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let t = start.elapsed();
        match result {
            Ok(d) => println!("PASS {:>2} {name}: {d} [{t:.2?}]", i + 1),
            Err(d) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {d} [{t:.2?}]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
