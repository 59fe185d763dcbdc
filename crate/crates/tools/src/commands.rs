//! One function per command. Each writes its artifact and returns whether the
//! declared checks passed.

use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, Subcommand};
use herglotz_core::dos::{
    check_dap_gamma, dos_measure, identity_row, lyapunov, moment_residual, thouless_rhs, w_pair,
    DapPlan,
};
use herglotz_core::herglotz::{
    atom_constructor, atom_integral, from_krein, from_krein_calibrated, is_reflectionless,
    krein_xi, point_mass, pointmass_possible, Herglotz, KreinFn, ReflectionlessReport,
};
use herglotz_core::jacobi::{CoeffModel, GreenAverage};
use herglotz_core::measures::inverse_distance_integral;
use herglotz_core::potential::{capacity, check_capacity_bounds, check_dos_equilibrium, equilibrium};
use herglotz_core::{Measure, Schedule, SetUnion};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::formats::{cx, read_json, read_measure, write_csv, write_json, EquilibriumDoc, KreinDoc};
use crate::parse::{parse_grid, parse_model, parse_point, parse_set, UsageError};

fn set_pairs(e: &SetUnion) -> Vec<[f64; 2]> {
    e.intervals().iter().map(|i| [i.lo, i.hi]).collect()
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) {
        bail!(UsageError(format!("--{name} must be positive, got {v}")));
    }
    Ok(())
}

fn check_increasing(ns: &[usize]) -> Result<()> {
    if ns.is_empty() || ns.contains(&0) || ns.windows(2).any(|w| w[0] >= w[1]) {
        bail!(UsageError(format!("--N must be a nonempty increasing list of positive integers, got {ns:?}")));
    }
    Ok(())
}

/// Twenty points in `[-3, 3] × [0.1, 1.5]`.
pub fn thouless_default_grid() -> Vec<Complex64> {
    (0..20)
        .map(|k| Complex64::new(-3.0 + 6.0 * k as f64 / 19.0, 0.1 + 1.4 * ((k * 7) % 20) as f64 / 19.0))
        .collect()
}

/// Ten points on `Im z = 0.5`.
pub fn identity_default_grid() -> Vec<Complex64> {
    (0..10).map(|k| Complex64::new(-2.7 + 0.6 * k as f64, 0.5)).collect()
}

#[derive(Args, Debug)]
pub struct DosArgs {
    #[arg(long)]
    pub model: String,
    #[arg(long = "N", alias = "n")]
    pub n: usize,
    /// Atoms with columns lambda, weight, k (cdf just after the atom).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Optional (t, k(t)) table on a uniform grid spanning the spectrum.
    #[arg(long)]
    pub cdf_out: Option<PathBuf>,
    #[arg(long, default_value_t = 1001)]
    pub cdf_points: usize,
}

#[derive(Serialize)]
struct DosSummary {
    n: usize,
    a_mean: f64,
    lambda_min: f64,
    lambda_max: f64,
}

pub fn dos(a: &DosArgs) -> Result<bool> {
    let model = parse_model(&a.model)?;
    if a.n == 0 {
        bail!(UsageError("--N must be positive".into()));
    }
    let d = dos_measure(&model, a.n)?;
    let w = 1.0 / a.n as f64;
    let ev = d.eigenvalues();
    let rows = ev.iter().enumerate().map(|(k, l)| vec![*l, w, (k + 1) as f64 * w]);
    match &a.out {
        Some(p) => write_csv(Some(p), &["lambda", "weight", "k"], rows)?,
        None if a.cdf_out.is_none() => write_csv(None, &["lambda", "weight", "k"], rows)?,
        None => {}
    }
    let (lo, hi) = (ev[0], ev[ev.len() - 1]);
    if let Some(p) = &a.cdf_out {
        let m = a.cdf_points.max(2);
        let pad = 0.05 * (hi - lo).max(1.0);
        let step = (hi - lo + 2.0 * pad) / (m - 1) as f64;
        write_csv(Some(p), &["t", "k"], (0..m).map(|i| {
            let t = lo - pad + step * i as f64;
            vec![t, d.k(t)]
        }))?;
    }
    if a.out.is_some() || a.cdf_out.is_some() {
        write_json(None, &DosSummary { n: a.n, a_mean: d.a_mean(), lambda_min: lo, lambda_max: hi })?;
    }
    Ok(true)
}

#[derive(Args, Debug)]
pub struct LyapunovArgs {
    #[arg(long)]
    pub model: String,
    #[arg(long = "N", alias = "n")]
    pub n: usize,
    #[arg(long, default_value_t = -3.0, allow_negative_numbers = true)]
    pub x_min: f64,
    #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
    pub x_max: f64,
    #[arg(long, default_value_t = 601)]
    pub points: usize,
    /// Imaginary part of the evaluation points; 0 uses the real recursion.
    #[arg(long, default_value_t = 0.0)]
    pub im: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn lyapunov_table(a: &LyapunovArgs) -> Result<bool> {
    let model = parse_model(&a.model)?;
    if a.n == 0 || a.points < 2 || !(a.x_min < a.x_max) || !(a.im >= 0.0) {
        bail!(UsageError("need --N ≥ 1, --points ≥ 2, x-min < x-max and im ≥ 0".into()));
    }
    let step = (a.x_max - a.x_min) / (a.points - 1) as f64;
    let rows: Vec<Vec<f64>> = (0..a.points)
        .into_par_iter()
        .map(|k| {
            let x = a.x_min + step * k as f64;
            let g = if a.im == 0.0 {
                lyapunov(&model, x, a.n)
            } else {
                lyapunov(&model, Complex64::new(x, a.im), a.n)
            };
            g.map(|g| vec![x, a.im, g])
        })
        .collect::<Result<_, _>>()?;
    write_csv(a.out.as_deref(), &["x", "y", "gamma"], rows)?;
    Ok(true)
}

#[derive(Args, Debug)]
pub struct ThoulessArgs {
    #[arg(long)]
    pub model: String,
    #[arg(long = "N", alias = "n", value_delimiter = ',', default_value = "500")]
    pub n: Vec<usize>,
    #[arg(long, default_value = "default")]
    pub grid: String,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct ThoulessRow {
    n: usize,
    z: [f64; 2],
    lyapunov: f64,
    thouless_rhs: f64,
    rel_error: f64,
}

#[derive(Serialize)]
struct ThoulessReport {
    rows: Vec<ThoulessRow>,
    max_rel_error: f64,
    tol: f64,
    pass: bool,
}

pub fn thouless_check(a: &ThoulessArgs) -> Result<bool> {
    let model = parse_model(&a.model)?;
    check_increasing(&a.n)?;
    check_positive("tol", a.tol)?;
    let grid = parse_grid(&a.grid, thouless_default_grid)?;
    let mut rows = Vec::new();
    for &n in &a.n {
        let d = dos_measure(&model, n)?;
        let part: Vec<ThoulessRow> = grid
            .par_iter()
            .map(|&z| {
                let l = lyapunov(&model, z, n)?;
                let r = thouless_rhs(&d, z)?;
                Ok(ThoulessRow { n, z: cx(z), lyapunov: l, thouless_rhs: r, rel_error: (l - r).abs() / l.abs() })
            })
            .collect::<Result<_, herglotz_core::Error>>()?;
        rows.extend(part);
    }
    let max_rel_error = rows.iter().map(|r| r.rel_error).fold(0.0, f64::max);
    let pass = max_rel_error <= a.tol;
    write_json(a.out.as_deref(), &ThoulessReport { rows, max_rel_error, tol: a.tol, pass })?;
    Ok(pass)
}

#[derive(Args, Debug)]
pub struct IdentitiesArgs {
    #[arg(long)]
    pub model: String,
    #[arg(long = "N", alias = "n", value_delimiter = ',', default_value = "500,1000")]
    pub n: Vec<usize>,
    /// Points need `Im z ≥ 0.5`.
    #[arg(long, default_value = "default")]
    pub grid: String,
    #[arg(long, default_value_t = 1 << 14)]
    pub depth: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub moment_tol: f64,
    #[arg(long, default_value_t = 0.05)]
    pub sum_tol: f64,
    /// Required ratio of mean sum residuals when `N` doubles.
    #[arg(long, default_value_t = 0.75)]
    pub halving: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct IdentityRowDoc {
    n: usize,
    z: [f64; 2],
    sum_residual: f64,
    derivative_residual: f64,
}

#[derive(Serialize)]
struct IdentitySummary {
    n: usize,
    moment_residual: f64,
    mean_sum_residual: f64,
    max_sum_residual: f64,
    max_derivative_residual: f64,
}

#[derive(Serialize)]
struct IdentityReport {
    rows: Vec<IdentityRowDoc>,
    summary: Vec<IdentitySummary>,
    halving_ratios: Vec<[f64; 2]>,
    pass: bool,
}

pub fn identities(a: &IdentitiesArgs) -> Result<bool> {
    let model = parse_model(&a.model)?;
    check_increasing(&a.n)?;
    for (name, v) in [("moment-tol", a.moment_tol), ("sum-tol", a.sum_tol), ("halving", a.halving)] {
        check_positive(name, v)?;
    }
    let grid = parse_grid(&a.grid, identity_default_grid)?;
    if grid.iter().any(|z| z.im < 0.5) {
        bail!(UsageError("identity grid needs Im z ≥ 0.5".into()));
    }
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for &n in &a.n {
        let d = dos_measure(&model, n)?;
        let moment = moment_residual(&model, &d)?;
        let part = grid
            .par_iter()
            .map(|&z| identity_row(&model, z, n, a.depth, moment))
            .collect::<Result<Vec<_>, _>>()?;
        let sums: Vec<f64> = part.iter().map(|r| r.sum).collect();
        summary.push(IdentitySummary {
            n,
            moment_residual: moment,
            mean_sum_residual: sums.iter().sum::<f64>() / sums.len().max(1) as f64,
            max_sum_residual: sums.iter().copied().fold(0.0, f64::max),
            max_derivative_residual: part.iter().map(|r| r.derivative).fold(0.0, f64::max),
        });
        rows.extend(part.into_iter().map(|r| IdentityRowDoc {
            n,
            z: cx(r.z),
            sum_residual: r.sum,
            derivative_residual: r.derivative,
        }));
    }
    let mut halving_ratios = Vec::new();
    let mut pass = summary.iter().all(|s| s.moment_residual <= a.moment_tol && s.max_sum_residual <= a.sum_tol);
    for w in summary.windows(2) {
        if w[1].n == 2 * w[0].n {
            let ratio = w[1].mean_sum_residual / w[0].mean_sum_residual;
            pass &= ratio <= a.halving;
            halving_ratios.push([w[0].n as f64, ratio]);
        }
    }
    write_json(a.out.as_deref(), &IdentityReport { rows, summary, halving_ratios, pass })?;
    Ok(pass)
}

#[derive(Args, Debug)]
pub struct WPairArgs {
    #[arg(long)]
    pub model: String,
    #[arg(long = "N", alias = "n")]
    pub n: usize,
    /// Evaluation point `x,y` with `y > 0`.
    #[arg(long, allow_hyphen_values = true)]
    pub z: String,
    #[arg(long, default_value_t = 1 << 14)]
    pub depth: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct WPairDoc {
    z: [f64; 2],
    n: usize,
    w_plus: [f64; 2],
    w_minus: [f64; 2],
    sum_residual: f64,
    tail_error: f64,
}

pub fn w_pair_cmd(a: &WPairArgs) -> Result<bool> {
    let model = parse_model(&a.model)?;
    let z = parse_point(&a.z)?;
    if a.n == 0 {
        bail!(UsageError("--N must be positive".into()));
    }
    let p = w_pair(&model, z, a.n, a.depth)?;
    write_json(
        a.out.as_deref(),
        &WPairDoc {
            z: cx(z),
            n: a.n,
            w_plus: cx(p.w_plus),
            w_minus: cx(p.w_minus),
            sum_residual: p.sum_residual(),
            tail_error: p.tail_error,
        },
    )?;
    Ok(true)
}

#[derive(Args, Debug)]
pub struct EquilibriumArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub set: String,
    #[arg(long, default_value_t = herglotz_core::potential::DEFAULT_NODES)]
    pub nodes: usize,
    /// Declared bound on the Frostman residual.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn equilibrium_cmd(a: &EquilibriumArgs) -> Result<bool> {
    let e = parse_set(&a.set)?;
    check_positive("tol", a.tol)?;
    let r = equilibrium(&e, a.nodes)?;
    write_json(a.out.as_deref(), &EquilibriumDoc::from(&r))?;
    Ok(r.residual <= a.tol)
}

#[derive(Args, Debug)]
pub struct CapacityArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub set: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct CapacityDoc {
    set: Vec<[f64; 2]>,
    capacity: f64,
}

pub fn capacity_cmd(a: &CapacityArgs) -> Result<bool> {
    let e = parse_set(&a.set)?;
    write_json(a.out.as_deref(), &CapacityDoc { set: set_pairs(&e), capacity: capacity(&e)? })?;
    Ok(true)
}

#[derive(Args, Debug)]
#[group(skip)]
#[command(group(clap::ArgGroup::new("source").required(true).multiple(false)))]
pub struct SourceArgs {
    /// Cauchy transform of a measure (JSON document).
    #[arg(long, group = "source")]
    pub measure: Option<PathBuf>,
    /// Herglotz function of a Krein function (JSON document).
    #[arg(long, group = "source")]
    pub xi: Option<PathBuf>,
    /// Cauchy transform of the equilibrium measure of a set.
    #[arg(long, group = "source", allow_hyphen_values = true)]
    pub equilibrium_of: Option<String>,
    /// Averaged diagonal Green function of a model.
    #[arg(long, group = "source")]
    pub model: Option<String>,
    /// Additive constant `c` for `--xi`.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub c: f64,
    #[arg(long, default_value_t = 1 << 15)]
    pub n_green: usize,
    #[arg(long, default_value_t = 1 << 16)]
    pub depth: usize,
}

enum Source {
    Measure(Measure),
    Krein(herglotz_core::herglotz::KreinHerglotz),
    Green(CoeffModel, usize, usize),
}

impl SourceArgs {
    fn load(&self) -> Result<Source> {
        if let Some(p) = &self.measure {
            let doc = read_measure(p).map_err(|e| UsageError(format!("{e:#}")))?;
            return Ok(Source::Measure(Measure::try_from(&doc).map_err(|e| UsageError(e.to_string()))?));
        }
        if let Some(p) = &self.xi {
            return Ok(Source::Krein(from_krein(&load_xi(p)?, self.c)));
        }
        if let Some(s) = &self.equilibrium_of {
            return Ok(Source::Measure(equilibrium(&parse_set(s)?, herglotz_core::potential::DEFAULT_NODES)?.omega));
        }
        if let Some(m) = &self.model {
            return Ok(Source::Green(parse_model(m)?, self.n_green, self.depth));
        }
        bail!(UsageError("one source is required".into()))
    }
}

impl Source {
    fn with<R>(&self, f: impl FnOnce(&(dyn Herglotz + Sync)) -> R) -> R {
        match self {
            Source::Measure(m) => f(m),
            Source::Krein(k) => f(k),
            Source::Green(model, n, depth) => f(&GreenAverage { model, n: *n, depth: *depth }),
        }
    }
}

fn load_xi(p: &std::path::Path) -> Result<KreinFn> {
    let doc: KreinDoc = read_json(p).map_err(|e| UsageError(format!("{e:#}")))?;
    Ok(KreinFn::try_from(&doc).map_err(|e| UsageError(e.to_string()))?)
}

#[derive(Args, Debug)]
pub struct ReflectionlessArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Set whose interior is sampled.
    #[arg(long, allow_hyphen_values = true)]
    pub on: String,
    #[arg(long, default_value_t = 50)]
    pub points: usize,
    /// Relative distance kept from interval endpoints.
    #[arg(long, default_value_t = 0.01)]
    pub margin: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
    /// Smallest `Im z` used in the boundary limit (0 = none).
    #[arg(long, default_value_t = 0.0)]
    pub floor: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct ReflectionlessDoc {
    max_abs_re: f64,
    worst_x: f64,
    tol: f64,
    points: usize,
    nonconvergent: Vec<f64>,
    pass: bool,
}

impl From<ReflectionlessReport> for ReflectionlessDoc {
    fn from(r: ReflectionlessReport) -> Self {
        Self {
            max_abs_re: r.max_abs_re,
            worst_x: r.worst_x,
            tol: r.tol,
            points: r.points,
            nonconvergent: r.nonconvergent,
            pass: r.pass,
        }
    }
}

fn schedule_with_floor(floor: f64) -> Schedule {
    if floor > 0.0 {
        Schedule::default().with_floor(floor).with_tol(1e-6)
    } else {
        Schedule::default()
    }
}

pub fn reflectionless(a: &ReflectionlessArgs) -> Result<bool> {
    let e = parse_set(&a.on)?;
    check_positive("tol", a.tol)?;
    let source = a.source.load()?;
    let grid = e.interior_grid(a.points, a.margin);
    let schedule = schedule_with_floor(a.floor);
    // one grid point per task; the report is reassembled in grid order
    let parts: Vec<ReflectionlessReport> = grid
        .par_iter()
        .map(|&x| source.with(|f| is_reflectionless(f, &[x], a.tol, &schedule)))
        .collect();
    let mut report = ReflectionlessDoc {
        max_abs_re: 0.0,
        worst_x: f64::NAN,
        tol: a.tol,
        points: grid.len(),
        nonconvergent: Vec::new(),
        pass: true,
    };
    for (x, p) in grid.iter().zip(parts) {
        report.nonconvergent.extend(p.nonconvergent);
        if !(p.max_abs_re <= report.max_abs_re) {
            report.max_abs_re = p.max_abs_re;
            report.worst_x = *x;
        }
    }
    report.pass = report.max_abs_re <= a.tol;
    let pass = report.pass;
    write_json(a.out.as_deref(), &report)?;
    Ok(pass)
}

#[derive(Subcommand, Debug)]
pub enum KreinCommand {
    /// Evaluate `G = exp(c + ∫ (1/(t-z) - t/(t²+1)) ξ(t) dt)` at points.
    From(KreinFromArgs),
    /// Recover `ξ(x) = (1/π) arg` of a boundary value on a grid.
    To(KreinToArgs),
}

#[derive(Args, Debug)]
pub struct KreinFromArgs {
    #[arg(long)]
    pub xi: PathBuf,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true, conflicts_with = "modulus")]
    pub c: f64,
    /// Calibrate `c` so that `|G(i)|` equals this value.
    #[arg(long)]
    pub modulus: Option<f64>,
    /// Points `x,y;x,y;...`.
    #[arg(long, allow_hyphen_values = true)]
    pub z: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct KreinToArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, default_value_t = -3.0, allow_negative_numbers = true)]
    pub x_min: f64,
    #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
    pub x_max: f64,
    #[arg(long, default_value_t = 61)]
    pub points: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn krein(cmd: &KreinCommand) -> Result<bool> {
    match cmd {
        KreinCommand::From(a) => {
            let xi = load_xi(&a.xi)?;
            let g = match a.modulus {
                Some(m) => {
                    check_positive("modulus", m)?;
                    from_krein_calibrated(&xi, m)?
                }
                None => from_krein(&xi, a.c),
            };
            let z = parse_grid(&a.z, Vec::new)?;
            let rows: Vec<Vec<f64>> = z
                .iter()
                .map(|&z| {
                    let v = g.value(z);
                    vec![z.re, z.im, v.re, v.im]
                })
                .collect();
            write_csv(a.out.as_deref(), &["x", "y", "re", "im"], rows)?;
            Ok(true)
        }
        KreinCommand::To(a) => {
            if a.points < 2 || !(a.x_min < a.x_max) {
                bail!(UsageError("need --points ≥ 2 and x-min < x-max".into()));
            }
            let source = a.source.load()?;
            let schedule = Schedule::default();
            let step = (a.x_max - a.x_min) / (a.points - 1) as f64;
            let rows: Vec<Vec<f64>> = (0..a.points)
                .into_par_iter()
                .map(|k| {
                    let x = a.x_min + step * k as f64;
                    let v = source.with(|f| krein_xi(f, x, &schedule));
                    vec![x, v.xi, f64::from(u8::from(v.flagged))]
                })
                .collect();
            write_csv(a.out.as_deref(), &["x", "xi", "flagged"], rows)?;
            Ok(true)
        }
    }
}

#[derive(Args, Debug)]
pub struct PointmassArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub set: String,
    #[arg(long, allow_negative_numbers = true)]
    pub x: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct Construction {
    xi: KreinDoc,
    atom_integral: f64,
    point_mass: f64,
    max_abs_re_on_set: f64,
}

#[derive(Serialize)]
struct PointmassDoc {
    x: f64,
    possible: bool,
    /// `∫_{x-1}^{x+1} χ_E(t)/|t-x| dt`, `null` when divergent.
    inverse_distance_integral: Option<f64>,
    construction: Option<Construction>,
}

pub fn pointmass(a: &PointmassArgs) -> Result<bool> {
    let e = parse_set(&a.set)?;
    let possible = pointmass_possible(&e, a.x);
    let construction = if possible {
        let xi = atom_constructor(&e, a.x)?;
        let g = from_krein(&xi, 0.0);
        let s = Schedule::default();
        let r = is_reflectionless(&g, &e.interior_grid(20, 0.01), 1e-6, &s);
        Some(Construction {
            atom_integral: atom_integral(&xi, a.x),
            point_mass: point_mass(&g, a.x, &s).mass,
            max_abs_re_on_set: r.max_abs_re,
            xi: KreinDoc::from(&xi),
        })
    } else {
        None
    };
    let idi = inverse_distance_integral(&e, a.x);
    let doc = PointmassDoc {
        x: a.x,
        possible,
        inverse_distance_integral: idi.is_finite().then_some(idi),
        construction,
    };
    write_json(a.out.as_deref(), &doc)?;
    Ok(true)
}

#[derive(Args, Debug)]
pub struct DapArgs {
    #[arg(long)]
    pub model: String,
    #[arg(long, value_delimiter = ',', default_value = "0,0.5,-0.5", allow_negative_numbers = true)]
    pub x: Vec<f64>,
    /// Optional exact derivatives, one per point.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub expect: Vec<f64>,
    #[arg(long, default_value_t = 5e-3)]
    pub tol: f64,
    #[arg(long, default_value_t = 1 << 20)]
    pub n_gamma: usize,
    #[arg(long, default_value_t = 1 << 17)]
    pub n_green: usize,
    #[arg(long, default_value_t = 1 << 18)]
    pub depth: usize,
    #[arg(long, value_delimiter = ',', default_value = "0.125,0.0625,0.03125,0.015625")]
    pub hs: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.05,0.01")]
    pub eps: Vec<f64>,
    #[arg(long, default_value_t = 1e-3)]
    pub floor: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct DapRow {
    x: f64,
    accepted: bool,
    derivative: f64,
    minus_re_g: f64,
    difference: f64,
    expected: Option<f64>,
    densities: Vec<[f64; 3]>,
}

#[derive(Serialize)]
struct DapDoc {
    rows: Vec<DapRow>,
    tol: f64,
    pass: bool,
}

pub fn dap_check(a: &DapArgs) -> Result<bool> {
    let model = parse_model(&a.model)?;
    check_positive("tol", a.tol)?;
    if !a.expect.is_empty() && a.expect.len() != a.x.len() {
        bail!(UsageError("--expect needs one value per --x".into()));
    }
    let plan = DapPlan {
        n_gamma: a.n_gamma,
        n_green: a.n_green,
        depth: a.depth,
        hs: a.hs.clone(),
        eps: a.eps.clone(),
        schedule: Schedule::default().with_floor(a.floor).with_tol(1e-6),
    };
    let reports = a
        .x
        .par_iter()
        .map(|&x| check_dap_gamma(&model, x, &plan))
        .collect::<Result<Vec<_>, _>>()?;
    let rows: Vec<DapRow> = reports
        .into_iter()
        .enumerate()
        .map(|(k, r)| DapRow {
            x: r.x,
            accepted: r.derivative.value.is_some(),
            derivative: r.derivative.value.unwrap_or(r.derivative.candidate),
            minus_re_g: r.minus_re_g,
            difference: r.difference,
            expected: a.expect.get(k).copied(),
            densities: r.derivative.densities.iter().map(|d| [d.0, d.1, d.2]).collect(),
        })
        .collect();
    let pass = rows.iter().all(|r| {
        r.accepted
            && r.difference <= a.tol
            && r.expected.map_or(true, |e| (r.derivative - e).abs() <= a.tol)
    });
    write_json(a.out.as_deref(), &DapDoc { rows, tol: a.tol, pass })?;
    Ok(pass)
}

#[derive(Args, Debug)]
pub struct InequalitiesArgs {
    #[arg(long)]
    pub model: String,
    #[arg(long = "N", alias = "n")]
    pub n: usize,
    /// The set where `γ = 0`.
    #[arg(long, allow_hyphen_values = true)]
    pub z: String,
    /// A set containing the spectrum.
    #[arg(long, allow_hyphen_values = true)]
    pub k: String,
    #[arg(long, default_value_t = 0.01)]
    pub tol: f64,
    /// Also compare `dk_N` with the equilibrium measure of `K`, sampling `γ`
    /// on this set.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma_on: Option<String>,
    #[arg(long, default_value_t = 0.01)]
    pub kolmogorov_tol: f64,
    #[arg(long, default_value_t = 0.02)]
    pub gamma_tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct BoundsDoc {
    cap_z: f64,
    a_mean: f64,
    cap_k: f64,
    len_z: f64,
    four_a: f64,
    cap_z_le_a: bool,
    a_le_cap_k: bool,
    len_z_le_four_a: bool,
}

#[derive(Serialize)]
struct EquilibriumCheckDoc {
    kolmogorov: f64,
    alpha: f64,
    max_gamma_deviation: f64,
    pass: bool,
}

#[derive(Serialize)]
struct InequalitiesDoc {
    bounds: BoundsDoc,
    equilibrium: Option<EquilibriumCheckDoc>,
    pass: bool,
}

pub fn inequalities(a: &InequalitiesArgs) -> Result<bool> {
    let model = parse_model(&a.model)?;
    let (z, k) = (parse_set(&a.z)?, parse_set(&a.k)?);
    for (name, v) in [("tol", a.tol), ("kolmogorov-tol", a.kolmogorov_tol), ("gamma-tol", a.gamma_tol)] {
        check_positive(name, v)?;
    }
    if a.n == 0 {
        bail!(UsageError("--N must be positive".into()));
    }
    let d = dos_measure(&model, a.n)?;
    let b = check_capacity_bounds(&d, &z, &k, a.tol)?;
    let equilibrium = match &a.gamma_on {
        Some(s) => {
            let grid = parse_set(s)?.interior_grid(100, 0.0);
            let c = check_dos_equilibrium(&d, &k, &grid, a.kolmogorov_tol, a.gamma_tol)?;
            Some(EquilibriumCheckDoc {
                kolmogorov: c.kolmogorov,
                alpha: c.alpha,
                max_gamma_deviation: c.max_gamma_deviation,
                pass: c.pass,
            })
        }
        None => None,
    };
    let pass = b.pass() && equilibrium.as_ref().map_or(true, |e| e.pass);
    let bounds = BoundsDoc {
        cap_z: b.cap_z,
        a_mean: b.a_mean,
        cap_k: b.cap_k,
        len_z: b.len_z,
        four_a: b.four_a,
        cap_z_le_a: b.lower_ok,
        a_le_cap_k: b.upper_ok,
        len_z_le_four_a: b.length_ok,
    };
    write_json(a.out.as_deref(), &InequalitiesDoc { bounds, equilibrium, pass })?;
    Ok(pass)
}
