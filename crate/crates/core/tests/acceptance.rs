//! The twelve acceptance criteria, run sequentially with wall-clock budgets.
//! Prints one line per criterion and exits non-zero if any fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use herglotz_core::dos::{
    check_dap_gamma, dos_measure, lyapunov, max_window_mass, moment_residual, thouless_rhs,
    w_pair, DapPlan,
};
use herglotz_core::herglotz::{
    atom_constructor, eval, from_krein, is_reflectionless, kernel_integral, krein_xi, point_mass,
    pointmass_possible, rearranged, KreinFn,
};
use herglotz_core::jacobi::{fminus, truncate, CoeffModel};
use herglotz_core::measures::kolmogorov;
use herglotz_core::potential::{
    check_capacity_bounds, check_dos_equilibrium, equilibrium, frostman_residual, DEFAULT_NODES,
};
use herglotz_core::{Measure, Schedule, SetUnion};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn periodic() -> CoeffModel {
    CoeffModel::periodic(vec![1.0, 1.0], vec![1.0, -1.0]).unwrap()
}

fn periodic_bands() -> SetUnion {
    let s5 = 5f64.sqrt();
    SetUnion::from_pairs(&[(-s5, -1.0), (1.0, s5)]).unwrap()
}

fn free_band() -> SetUnion {
    SetUnion::from_pairs(&[(-2.0, 2.0)]).unwrap()
}

fn thouless_identity() -> Outcome {
    let grid: Vec<Complex64> = (0..20)
        .map(|k| Complex64::new(-3.0 + 6.0 * k as f64 / 19.0, 0.1 + 1.4 * ((k * 7) % 20) as f64 / 19.0))
        .collect();
    let mut worst: f64 = 0.0;
    for seed in 0..20u64 {
        let b = 0.5 + 0.1 * (seed % 5) as f64;
        let model = CoeffModel::random(seed, (0.5, 1.5), (-b, b)).unwrap();
        for n in [50, 200, 1000] {
            let d = dos_measure(&model, n).map_err(|e| e.to_string())?;
            for &z in &grid {
                let lhs = lyapunov(&model, z, n).map_err(|e| e.to_string())?;
                let rhs = thouless_rhs(&d, z).map_err(|e| e.to_string())?;
                worst = worst.max((lhs - rhs).abs() / lhs.abs());
            }
        }
    }
    check(worst <= 1e-9, format!("max relative error {worst:.3e} (tol 1e-9)"))
}

fn oscillation_count() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut done = 0;
    let mut mismatches = 0;
    while done < 100 {
        let model = CoeffModel::random(rng.random(), (0.5, 1.5), (-1.0, 1.0)).unwrap();
        let n = rng.random_range(1..=200);
        let j = truncate(&model, n);
        let (lo, hi) = j.gershgorin();
        let t = rng.random_range(lo..hi);
        let f = fminus(&model, t, n).map_err(|e| e.to_string())?;
        if f.hits_root() {
            continue;
        }
        if f.sign_changes() != n - j.sturm_count(t) {
            mismatches += 1;
        }
        done += 1;
    }
    check(mismatches == 0, format!("{mismatches} mismatches in {done} cases"))
}

fn free_dos() -> Outcome {
    let d = dos_measure(&CoeffModel::free(), 1000).map_err(|e| e.to_string())?;
    let dist = kolmogorov(d.dk(), &Measure::arcsine(-2.0, 2.0).unwrap());
    let eig_err = d
        .eigenvalues()
        .iter()
        .rev()
        .enumerate()
        .map(|(k, l)| (l - 2.0 * (PI * (k + 1) as f64 / 1001.0).cos()).abs())
        .fold(0.0, f64::max);
    check(
        dist <= 0.01 && eig_err <= 1e-10,
        format!("kolmogorov {dist:.3e} (tol 1e-2), eigenvalue error {eig_err:.3e} (tol 1e-10)"),
    )
}

fn moment_identity() -> Outcome {
    let models = [CoeffModel::free(), periodic(), CoeffModel::random(7, (0.5, 1.5), (-1.0, 1.0)).unwrap()];
    let mut worst: f64 = 0.0;
    for m in &models {
        let d = dos_measure(m, 500).map_err(|e| e.to_string())?;
        worst = worst.max(moment_residual(m, &d).map_err(|e| e.to_string())?);
    }
    check(worst <= 1e-8, format!("max moment residual {worst:.3e} (tol 1e-8)"))
}

fn w_sum() -> Outcome {
    let grid: Vec<Complex64> =
        (0..10).map(|k| Complex64::new(-2.7 + 0.6 * k as f64, 0.5)).collect();
    let mut lines = Vec::new();
    let mut ok = true;
    for (name, model) in [("free", CoeffModel::free()), ("periodic", periodic())] {
        let mean = |n: usize| -> Result<(f64, f64), String> {
            let mut total = 0.0;
            let mut worst: f64 = 0.0;
            for &z in &grid {
                let r = w_pair(&model, z, n, 1 << 14).map_err(|e| e.to_string())?.sum_residual();
                total += r;
                worst = worst.max(r);
            }
            Ok((total / grid.len() as f64, worst))
        };
        let (m500, w500) = mean(500)?;
        let (m1000, _) = mean(1000)?;
        ok &= w500 <= 0.05 && m1000 <= 0.75 * m500;
        lines.push(format!("{name}: max {w500:.3e} at N=500, ratio {:.3}", m1000 / m500));
    }
    check(ok, format!("{} (tol 0.05, ratio ≤ 0.75)", lines.join("; ")))
}

fn dap_gamma() -> Outcome {
    let plan = DapPlan::default();
    let model = CoeffModel::free();
    let mut lines = Vec::new();
    let mut ok = true;
    for x in [0.0, 0.5, -0.5, 3.0, -3.0] {
        let r = check_dap_gamma(&model, x, &plan).map_err(|e| e.to_string())?;
        let d = r.derivative.value.unwrap_or(r.derivative.candidate);
        if x.abs() > 2.0 {
            let exact = x.signum() / 5f64.sqrt();
            let err = (d - exact).abs();
            ok &= r.derivative.value.is_some() && r.difference <= 1e-2 && err <= 1e-2;
            lines.push(format!("x={x}: {:.2e}/{err:.2e}", r.difference));
        } else {
            ok &= r.derivative.value.is_some() && r.difference <= 5e-3;
            lines.push(format!("x={x}: {:.2e}", r.difference));
        }
    }
    check(ok, format!("|D_ap γ + Re g| {} (tol 5e-3 inside, 1e-2 and vs ±1/√5 outside)", lines.join(", ")))
}

fn capacities() -> Outcome {
    let r = equilibrium(&free_band(), DEFAULT_NODES).map_err(|e| e.to_string())?;
    let probes = free_band().interior_grid(200, 0.001);
    let frost = frostman_residual(&r, &probes).map_err(|e| e.to_string())?;
    let cap1 = r.capacity();
    let two = SetUnion::from_pairs(&[(-2.0, -1.0), (1.0, 2.0)]).unwrap();
    let r2 = equilibrium(&two, DEFAULT_NODES).map_err(|e| e.to_string())?;
    let cap2 = r2.capacity();
    let mut energy_err: f64 = 0.0;
    for rr in [&r, &r2] {
        energy_err = energy_err.max((rr.omega.energy().map_err(|e| e.to_string())? - rr.robin).abs());
    }
    let want2 = 3f64.sqrt() / 2.0;
    check(
        (cap1 - 1.0).abs() <= 1e-6 && frost <= 1e-6 && (cap2 - want2).abs() <= 1e-4 && energy_err <= 1e-6,
        format!(
            "cap[-2,2] {cap1:.12} frostman {frost:.2e}; cap two-band {cap2:.10} (√3/2 {want2:.10}); energy error {energy_err:.2e}"
        ),
    )
}

fn capacity_suite() -> Outcome {
    let free = dos_measure(&CoeffModel::free(), 1000).map_err(|e| e.to_string())?;
    let b = check_capacity_bounds(&free, &free_band(), &free_band(), 0.01).map_err(|e| e.to_string())?;
    let want = [1.0, 1.0, 1.0, 4.0, 4.0];
    let got = [b.cap_z, b.a_mean, b.cap_k, b.len_z, b.four_a];
    let close = got.iter().zip(want).all(|(g, w)| (g - w).abs() <= 0.01 * w);
    let grid = SetUnion::from_pairs(&[(-1.9, 1.9)]).unwrap().interior_grid(200, 0.0);
    let eq = check_dos_equilibrium(&free, &free_band(), &grid, 0.01, 0.02).map_err(|e| e.to_string())?;

    let per = dos_measure(&periodic(), 1000).map_err(|e| e.to_string())?;
    let bands = periodic_bands();
    let pb = check_capacity_bounds(&per, &bands, &bands, 0.01).map_err(|e| e.to_string())?;
    let pgrid = bands.interior_grid(100, 0.05);
    let peq = check_dos_equilibrium(&per, &bands, &pgrid, 0.01, 0.03).map_err(|e| e.to_string())?;
    let pcap_ok = (pb.cap_k - 1.0).abs() <= 0.01;
    check(
        close && b.pass() && eq.pass && pb.pass() && peq.pass && pcap_ok,
        format!(
            "free (capZ, A, capK, |Z|, 4A) = ({:.4}, {:.4}, {:.4}, {:.4}, {:.4}), kolmogorov {:.2e}, max|γ-α| {:.2e}; periodic cap {:.6}, A {:.4}, |Z| {:.4}, kolmogorov {:.2e}, max|γ-α| {:.2e}",
            got[0], got[1], got[2], got[3], got[4], eq.kolmogorov, eq.max_gamma_deviation,
            pb.cap_k, pb.a_mean, pb.len_z, peq.kolmogorov, peq.max_gamma_deviation
        ),
    )
}

fn reflectionless_atom() -> Outcome {
    let s = Schedule::default();
    let e = SetUnion::from_pairs(&[(-2.0, -1.0), (1.0, 2.0)]).unwrap();
    let g = from_krein(&atom_constructor(&e, 0.0).map_err(|e| e.to_string())?, 0.0);
    let r = is_reflectionless(&g, &e.interior_grid(50, 0.01), 1e-3, &s);
    let mass = point_mass(&g, 0.0, &s).mass;
    let interior = e.interior_grid(20, 0.0);
    let none_inside = interior.iter().all(|&x| !pointmass_possible(&e, x));
    check(
        r.pass && mass > 1e-3 && none_inside && pointmass_possible(&e, 0.0),
        format!("max|Re G| {:.2e} (tol 1e-3), point mass {mass:.4} (> 1e-3), interior points admit no atom: {none_inside}", r.max_abs_re),
    )
}

fn random_step(rng: &mut ChaCha8Rng) -> (KreinFn, f64, f64) {
    let a = rng.random_range(-2.0..0.0);
    let b = a + rng.random_range(0.1..3.0);
    let k = rng.random_range(1..8);
    let mut breaks: Vec<f64> = (0..k).map(|_| rng.random_range(a..b)).collect();
    breaks.extend([a, b]);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let mut values = vec![0.0];
    values.extend((0..breaks.len() - 1).map(|_| rng.random::<f64>()));
    values.push(0.0);
    (KreinFn::new(breaks, values).unwrap(), a, b)
}

fn rearrangement_inequality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut min_slack = f64::INFINITY;
    for _ in 0..500 {
        let (xi, a, b) = random_step(&mut rng);
        let dist = rng.random_range(0.01..3.0);
        let x = if rng.random::<bool>() { b + dist } else { a - dist };
        let lhs = kernel_integral(&xi, a, b, x).map_err(|e| e.to_string())?;
        let rhs = kernel_integral(&rearranged(&xi, a, b).map_err(|e| e.to_string())?, a, b, x)
            .map_err(|e| e.to_string())?;
        min_slack = min_slack.min(rhs - lhs);
    }
    check(min_slack >= -1e-12, format!("min slack {min_slack:.3e} over 500 cases (≥ -1e-12)"))
}

fn random_krein(rng: &mut ChaCha8Rng) -> KreinFn {
    let k = rng.random_range(1..6);
    let mut breaks: Vec<f64> = (0..k).map(|_| rng.random_range(-3.0..3.0)).collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|p, q| (*p - *q).abs() < 0.05);
    let (l, r) = match rng.random_range(0..5) {
        0 => (0.0, 0.0),
        1 => (0.0, 1.0),
        2 => (1.0, 0.0),
        3 => (1.0, 1.0),
        _ => {
            let v = rng.random::<f64>();
            (v, v)
        }
    };
    let mut values = vec![l];
    values.extend((0..breaks.len() - 1).map(|_| rng.random::<f64>()));
    values.push(r);
    KreinFn::new(breaks, values).unwrap()
}

fn krein_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let s = Schedule::default();
    let mut worst: f64 = 0.0;
    let mut points = 0;
    for _ in 0..100 {
        let xi = random_krein(&mut rng);
        let g = from_krein(&xi, rng.random_range(-1.0..1.0));
        for _ in 0..5 {
            let x = rng.random_range(-4.0..4.0);
            if !xi.breaks().iter().all(|b| (b - x).abs() > 1e-3) {
                continue;
            }
            worst = worst.max((krein_xi(&g, x, &s).xi - xi.eval(x)).abs());
            points += 1;
        }
    }
    let mut half_err: f64 = 0.0;
    let half = KreinFn::constant(0.5).unwrap();
    for c in [-1.0, 0.0, 0.7] {
        let g = from_krein(&half, c);
        for z in [Complex64::new(0.0, 1.0), Complex64::new(-3.0, 0.01), Complex64::new(2.5, 4.0)] {
            let want = Complex64::new(0.0, f64::exp(c));
            half_err = half_err.max((eval(&g, z).map_err(|e| e.to_string())? - want).norm());
        }
    }
    check(
        worst <= 1e-4 && half_err <= 1e-10,
        format!("max |ξ error| {worst:.2e} over {points} points (tol 1e-4); ξ≡½ error {half_err:.2e} (tol 1e-10)"),
    )
}

fn log_holder() -> Outcome {
    let d = dos_measure(&CoeffModel::free(), 1000).map_err(|e| e.to_string())?;
    let worst = (2..=10)
        .map(|k| {
            let h = 2f64.powi(-k);
            max_window_mass(d.dk(), h) * -h.ln()
        })
        .fold(0.0, f64::max);
    check(worst <= 4.0, format!("max (k(t+h)-k(t))·(-ln h) = {worst:.4} (≤ 4)"))
}

fn main() {
    let criteria: [(&str, u64, fn() -> Outcome); 12] = [
        ("exact Thouless identity", 60, thouless_identity),
        ("oscillation count equality", 30, oscillation_count),
        ("free model density of states", 10, free_dos),
        ("moment identity", 60, moment_identity),
        ("w+ + w- = iπ", 60, w_sum),
        ("approximate derivative of γ", 120, dap_gamma),
        ("equilibrium and capacity", 30, capacities),
        ("capacity inequalities", 60, capacity_suite),
        ("reflectionless atom construction", 30, reflectionless_atom),
        ("rearrangement inequality", 5, rearrangement_inequality),
        ("Krein round trip", 60, krein_round_trip),
        ("log-Hölder continuity of k", 60, log_holder),
    ];
    let mut failed = 0;
    let total = Instant::now();
    for (k, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*budget);
        let (ok, detail) = match outcome {
            Ok(d) => (in_time, d),
            Err(d) => (false, d),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "[{}] {:>2} {name}: {detail}; {:.2} s (budget {budget} s)",
            if ok { "PASS" } else { "FAIL" },
            k + 1,
            elapsed.as_secs_f64(),
        );
    }
    println!("{} of 12 criteria passed in {:.1} s", 12 - failed, total.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
