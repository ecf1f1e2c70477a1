//! Command-line front end: spectrum tables, first-eigenvalue sweeps, figure
//! regeneration, verification runs, and diamagnetic reports.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use magsteklov::diamagnetic::{b4_crossing, bound_coefficients_b2n, check_violation};
use magsteklov::figures::{figure_data, to_csv, FigureData, FigureKind};
use magsteklov::oracle::{
    b2_family_for, ode_residual, rayleigh_galerkin_b2, reconcile_b4_exact, series_solve, steklov_eigenvalue_oracle,
    steklov_eigen_profile, verify_harmonic_extension_b2n, GalerkinConfig, RadialSystemSpec,
};
use magsteklov::spectra::{
    b2_steklov_eigenvalue, first_eigenvalue, spectrum, CoexactSign, EigenvalueRecord,
    MagneticParameter, Spectrum, DEFAULT_K_MAX,
};
use magsteklov::Domain;

#[derive(Parser)]
#[command(name = "magsteklov", version, about = "Magnetic Steklov and Hodge spectra on model spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Args)]
struct SweepArgs {
    /// Single magnetic coupling strength.
    #[arg(long, conflicts_with_all = ["t_start", "t_stop", "t_steps"])]
    t: Option<f64>,
    #[arg(long, requires = "t_stop")]
    t_start: Option<f64>,
    #[arg(long, requires = "t_start")]
    t_stop: Option<f64>,
    #[arg(long, default_value_t = 256)]
    t_steps: usize,
}

impl SweepArgs {
    fn grid(&self) -> Result<Vec<f64>> {
        match (self.t, self.t_start, self.t_stop) {
            (Some(t), _, _) => Ok(vec![t]),
            (None, Some(a), Some(b)) => {
                Ok(magsteklov::figures::sample_grid(a, b, self.t_steps)?)
            }
            _ => bail!("provide --t or a --t-start/--t-stop range"),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Full eigenvalue table for a domain at a single coupling t.
    Spectrum {
        #[arg(long)]
        domain: Domain,
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = DEFAULT_K_MAX)]
        k_max: u32,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// First (smallest) eigenvalue, at one t or swept over a range.
    First {
        #[arg(long)]
        domain: Domain,
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long, default_value_t = DEFAULT_K_MAX)]
        k_max: u32,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regenerate the data behind one of the published figures.
    Figure {
        /// fig1-left | fig1-right | fig2
        kind: FigureKind,
        #[arg(long)]
        k_max: Option<u32>,
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the oracle/verification suite and emit a JSON report.
    Verify {
        /// Run a single named check.
        #[arg(long)]
        only: Option<String>,
        /// Override the per-check tolerance.
        #[arg(long)]
        tolerance: Option<f64>,
        /// Restrict the harmonic-extension audit to one half-dimension n.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Diamagnetic-bound comparison rows and the B⁴ crossing estimate.
    Diamagnetic {
        #[arg(long)]
        domain: Domain,
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    init_thread_pool();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

/// MAGSTEKLOV_THREADS caps sweep parallelism (default: hardware concurrency).
fn init_thread_pool() {
    if let Ok(threads) = std::env::var("MAGSTEKLOV_THREADS") {
        if let Ok(threads) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.max(1))
                .build_global();
        }
    }
}

fn emit(out: Option<&PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, content).with_context(|| format!("writing {path:?}"))?,
        None => print!("{content}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Spectrum {
            domain,
            t,
            k_max,
            format,
            out,
        } => {
            let spec = spectrum(domain, MagneticParameter::new(t)?, k_max)?;
            let content = match format {
                Format::Csv => spectrum_csv(&spec),
                Format::Json => serde_json::to_string_pretty(&spec)? + "\n",
                Format::Svg => bail!("spectrum tables have no SVG rendering; use csv or json"),
            };
            emit(out.as_ref(), &content)?;
            if spec.excluded.is_empty() {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!(
                    "note: {} mode(s) excluded at t = {t} (eigenvalue-curve pole); output is partial",
                    spec.excluded.len()
                );
                Ok(ExitCode::from(3))
            }
        }
        Command::First {
            domain,
            sweep,
            k_max,
            format,
            out,
        } => {
            let grid = sweep.grid()?;
            let rows: Vec<(f64, f64, EigenvalueRecord)> = grid
                .par_iter()
                .map(|&t| {
                    let (value, mode) = first_eigenvalue(domain, MagneticParameter::new(t)?, k_max)?;
                    Ok((
                        t,
                        value,
                        EigenvalueRecord {
                            value,
                            mode,
                            multiplicity: None,
                        },
                    ))
                })
                .collect::<Result<_>>()?;
            let content = match format {
                Format::Csv => {
                    let mut s = String::from("t,value,family,k,p\n");
                    for (t, value, rec) in &rows {
                        let p = rec.mode.p.map(|p| p.to_string()).unwrap_or_default();
                        writeln!(s, "{t},{value},{},{},{p}", rec.mode.family.as_str(), rec.mode.k)?;
                    }
                    s
                }
                Format::Json => {
                    #[derive(Serialize)]
                    struct Row<'a> {
                        t: f64,
                        value: f64,
                        family: &'a str,
                        k: u32,
                        p: Option<u32>,
                    }
                    let rows: Vec<Row> = rows
                        .iter()
                        .map(|(t, value, rec)| Row {
                            t: *t,
                            value: *value,
                            family: rec.mode.family.as_str(),
                            k: rec.mode.k,
                            p: rec.mode.p,
                        })
                        .collect();
                    serde_json::to_string_pretty(&rows)? + "\n"
                }
                Format::Svg => bail!("first-eigenvalue sweeps have no SVG rendering; use csv or json"),
            };
            emit(out.as_ref(), &content)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Figure {
            kind,
            k_max,
            sweep,
            format,
            out,
        } => {
            let (start, stop) = match (sweep.t, sweep.t_start, sweep.t_stop) {
                (Some(_), _, _) => bail!("figures need a t range, not a single --t"),
                (None, Some(a), Some(b)) => (a, b),
                _ => kind.default_range(),
            };
            let data = figure_data(
                kind,
                k_max.unwrap_or_else(|| kind.default_k_max()),
                start,
                stop,
                sweep.t_steps,
            )?;
            let content = match format {
                Format::Csv => to_csv(&data),
                Format::Json => serde_json::to_string_pretty(&data)? + "\n",
                Format::Svg => figure_svg(&data),
            };
            emit(out.as_ref(), &content)?;
            let has_gaps = data.rows.iter().any(|row| row[1..].iter().any(Option::is_none));
            if has_gaps {
                eprintln!("note: excluded (pole) points leave gaps in the sampled curves");
                Ok(ExitCode::from(3))
            } else {
                Ok(ExitCode::SUCCESS)
            }
        }
        Command::Verify {
            only,
            tolerance,
            n,
            out,
        } => {
            let report = run_verification(only.as_deref(), tolerance, n)?;
            let content = serde_json::to_string_pretty(&report)? + "\n";
            emit(out.as_ref(), &content)?;
            if report.pass {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("verification failed; see report");
                Ok(ExitCode::FAILURE)
            }
        }
        Command::Diamagnetic {
            domain,
            sweep,
            format,
            out,
        } => {
            let grid = sweep.grid()?;
            let report = check_violation(domain, &grid)?;
            let content = match format {
                Format::Csv => {
                    let mut s = String::from("t,bound,actual,sigma0,violated,dominated\n");
                    for row in &report.rows {
                        writeln!(
                            s,
                            "{},{},{},{},{},{}",
                            row.t, row.bound, row.actual, report.sigma0, row.violated, row.dominated
                        )?;
                    }
                    if let Some(crossing) = report.crossing {
                        writeln!(s, "# crossing of sigma0,{crossing}")?;
                    }
                    s
                }
                Format::Json => serde_json::to_string_pretty(&report)? + "\n",
                Format::Svg => bail!("diamagnetic reports have no SVG rendering; use csv or json"),
            };
            emit(out.as_ref(), &content)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn spectrum_csv(spec: &Spectrum) -> String {
    let mut s = String::from("value,family,k,p,multiplicity\n");
    for rec in &spec.records {
        let p = rec.mode.p.map(|p| p.to_string()).unwrap_or_default();
        let m = rec.multiplicity.map(|m| m.to_string()).unwrap_or_default();
        let _ = writeln!(s, "{},{},{},{p},{m}", rec.value, rec.mode.family.as_str(), rec.mode.k);
    }
    s
}

// ---------------------------------------------------------------------------
// SVG polyline rendering
// ---------------------------------------------------------------------------

const SVG_COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

/// Renders figure data as polyline plots; None cells break the polyline.
fn figure_svg(data: &FigureData) -> String {
    let (w, h) = (800.0, 500.0);
    let (ml, mr, mt, mb) = (60.0, 20.0, 20.0, 45.0);
    let ts: Vec<f64> = data.rows.iter().filter_map(|r| r[0]).collect();
    let (t_min, t_max) = (
        ts.iter().cloned().fold(f64::INFINITY, f64::min),
        ts.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    );
    // Curve columns: every column after t whose header is numeric data
    // (fig1-right carries label columns k/p/family, which are skipped).
    let curve_cols: Vec<usize> = (1..data.header.len())
        .filter(|&i| !matches!(data.header[i].as_str(), "family" | "k" | "p"))
        .collect();
    let mut v_min = f64::INFINITY;
    let mut v_max = f64::NEG_INFINITY;
    for row in &data.rows {
        for &i in &curve_cols {
            if let Some(v) = row[i] {
                v_min = v_min.min(v);
                v_max = v_max.max(v);
            }
        }
    }
    if !(v_min.is_finite() && v_max.is_finite()) {
        v_min = 0.0;
        v_max = 1.0;
    }
    if v_max - v_min < 1e-12 {
        v_max = v_min + 1.0;
    }
    let x = |t: f64| ml + (t - t_min) / (t_max - t_min) * (w - ml - mr);
    let y = |v: f64| h - mb - (v - v_min) / (v_max - v_min) * (h - mt - mb);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
    );
    let _ = writeln!(
        svg,
        "<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\
         <line x1=\"{ml}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\
         <line x1=\"{ml}\" y1=\"{mt}\" x2=\"{ml}\" y2=\"{}\" stroke=\"black\"/>",
        h - mb,
        w - mr,
        h - mb,
        h - mb
    );
    let _ = writeln!(
        svg,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"14\">t</text>\
         <text x=\"15\" y=\"{}\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 15 {})\">eigenvalue</text>",
        (ml + w - mr) / 2.0,
        h - 10.0,
        (mt + h - mb) / 2.0,
        (mt + h - mb) / 2.0
    );
    for (tick, label) in [(t_min, format!("{t_min}")), (t_max, format!("{t_max}"))] {
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"12\">{label}</text>",
            x(tick),
            h - mb + 18.0
        );
    }
    for (tick, label) in [(v_min, format!("{v_min:.3}")), (v_max, format!("{v_max:.3}"))] {
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-size=\"12\">{label}</text>",
            ml - 6.0,
            y(tick) + 4.0
        );
    }
    for (ci, &col) in curve_cols.iter().enumerate() {
        let color = SVG_COLORS[ci % SVG_COLORS.len()];
        let mut segment: Vec<(f64, f64)> = Vec::new();
        let flush = |seg: &mut Vec<(f64, f64)>, svg: &mut String| {
            if seg.len() >= 2 {
                let points: Vec<String> =
                    seg.iter().map(|(px, py)| format!("{px:.2},{py:.2}")).collect();
                let _ = writeln!(
                    svg,
                    "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>",
                    points.join(" ")
                );
            }
            seg.clear();
        };
        for row in &data.rows {
            match (row[0], row[col]) {
                (Some(t), Some(v)) => segment.push((x(t), y(v))),
                _ => flush(&mut segment, &mut svg),
            }
        }
        flush(&mut segment, &mut svg);
    }
    svg.push_str("</svg>\n");
    svg
}

// ---------------------------------------------------------------------------
// Verification suite
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct CheckResult {
    name: String,
    status: String,
    max_error: f64,
    tolerance: f64,
    details: String,
}

#[derive(Serialize)]
struct VerifyReport {
    checks: Vec<CheckResult>,
    pass: bool,
}

struct CheckBuilder {
    name: &'static str,
    tolerance: f64,
    max_error: f64,
    details: Vec<String>,
}

impl CheckBuilder {
    fn new(name: &'static str, default_tol: f64, tolerance: Option<f64>) -> Self {
        Self {
            name,
            tolerance: tolerance.unwrap_or(default_tol),
            max_error: 0.0,
            details: Vec::new(),
        }
    }

    fn record(&mut self, err: f64, detail: impl FnOnce() -> String) {
        if err > self.max_error {
            self.max_error = err;
        }
        if err > self.tolerance {
            self.details.push(detail());
        }
    }

    fn note(&mut self, detail: String) {
        self.details.push(detail);
    }

    fn finish(self) -> CheckResult {
        let pass = self.max_error <= self.tolerance;
        CheckResult {
            name: self.name.to_string(),
            status: if pass { "pass" } else { "fail" }.to_string(),
            max_error: self.max_error,
            tolerance: self.tolerance,
            details: self.details.join("; "),
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

const CHECK_NAMES: [&str; 8] = [
    "b2-oracle",
    "b4-coexact-oracle",
    "b4-exact-reconcile",
    "residuals",
    "w-branch-ratio",
    "galerkin",
    "harmonic-extension",
    "diamagnetic",
];

fn run_verification(
    only: Option<&str>,
    tolerance: Option<f64>,
    n_filter: Option<usize>,
) -> Result<VerifyReport> {
    if let Some(name) = only {
        if !CHECK_NAMES.contains(&name) {
            bail!("unknown check {name:?}; available: {}", CHECK_NAMES.join(", "));
        }
    }
    let wanted = |name: &str| only.is_none_or(|o| o == name);
    let mut checks = Vec::new();

    if wanted("b2-oracle") {
        let mut check = CheckBuilder::new("b2-oracle", 1e-8, tolerance);
        for k in 0..=10u32 {
            for &t in &[0.1, 0.5, 1.0, 2.0, 5.0] {
                for conjugate in [false, true] {
                    if k == 0 && conjugate {
                        continue;
                    }
                    let closed = b2_steklov_eigenvalue(
                        k,
                        b2_family_for(conjugate, k),
                        MagneticParameter::new(t)?,
                    )?;
                    let oracle =
                        steklov_eigenvalue_oracle(&RadialSystemSpec::b2(k, t, conjugate))?;
                    check.record(rel(closed, oracle), || {
                        format!("(k={k}, t={t}, conjugate={conjugate}): {closed} vs {oracle}")
                    });
                }
            }
        }
        checks.push(check.finish());
    }

    if wanted("b4-coexact-oracle") {
        let mut check = CheckBuilder::new("b4-coexact-oracle", 1e-6, tolerance);
        for k in 1..=5u32 {
            for p in 0..=k {
                for &t in &[0.25, 1.0, 2.0] {
                    for sign in [CoexactSign::Plus, CoexactSign::Minus] {
                        let closed = magsteklov::spectra::b4_steklov_coexact(
                            k,
                            p,
                            sign,
                            MagneticParameter::new(t)?,
                        )?;
                        let oracle = steklov_eigenvalue_oracle(&RadialSystemSpec::b4_coexact(
                            k, p, sign, t,
                        ))?;
                        check.record(rel(closed, oracle), || {
                            format!("(k={k}, p={p}, t={t}, {sign:?}): {closed} vs {oracle}")
                        });
                    }
                }
            }
        }
        checks.push(check.finish());
    }

    if wanted("b4-exact-reconcile") {
        let mut check = CheckBuilder::new("b4-exact-reconcile", 1e-6, tolerance);
        for k in 1..=5u32 {
            for p in 0..=k {
                for &t in &[0.25, 1.0, 2.0] {
                    let rec = reconcile_b4_exact(k, p, t)?;
                    let best = rel(rec.proof, rec.oracle).min(rel(rec.theorem, rec.oracle));
                    check.record(best, || {
                        format!(
                            "(k={k}, p={p}, t={t}): neither printed form matches oracle {} (theorem={}, proof={})",
                            rec.oracle, rec.theorem_matches, rec.proof_matches
                        )
                    });
                }
            }
        }
        checks.push(check.finish());
    }

    if wanted("residuals") {
        let mut check = CheckBuilder::new("residuals", 1e-9, tolerance);
        let sample_r = [0.15, 0.35, 0.5, 0.75, 1.0];
        let mut specs = vec![RadialSystemSpec::b2(0, 1.5, false)];
        for k in 1..=5u32 {
            for &t in &[0.25, 1.0, 3.0] {
                specs.push(RadialSystemSpec::b2(k, t, false));
                specs.push(RadialSystemSpec::b2(k, t, true));
                specs.push(RadialSystemSpec::b4_exact(k, k / 2, t));
                specs.push(RadialSystemSpec::b4_coexact(k, k / 2, CoexactSign::Minus, t));
            }
        }
        for spec in &specs {
            let (_, profile) = steklov_eigen_profile(spec)?;
            check.record(ode_residual(&profile, spec, &sample_r), || {
                format!("{spec:?}")
            });
        }
        checks.push(check.finish());
    }

    if wanted("w-branch-ratio") {
        let mut check = CheckBuilder::new("w-branch-ratio", 1e-9, tolerance);
        for k in 1..=4u32 {
            for &(t, conjugate) in &[(0.7, false), (0.7, true), (3.0, false)] {
                let (_, w) = series_solve(&RadialSystemSpec::b2(k, t, conjugate), 160)?;
                let w = w.expect("paired B² system");
                let st = if conjugate { t } else { -t };
                let direct = |r: f64| -> Result<f64> {
                    let tail = magsteklov::specfun::exp_taylor_remainder(k, -st * r * r)?;
                    Ok((0.5 * st * r * r).exp() * tail / r.powi(2 * k as i32))
                };
                let base = w.eval_q(0.3) / (-0.5 * 0.3f64.powi(k as i32) * direct(0.3)?);
                for &r in &[0.55f64, 0.8, 1.0] {
                    let ratio = w.eval_q(r) / (-0.5 * r.powi(k as i32) * direct(r)?);
                    check.record(rel(ratio, base), || {
                        format!("(k={k}, t={t}, conjugate={conjugate}, r={r})")
                    });
                }
            }
        }
        checks.push(check.finish());
    }

    if wanted("galerkin") {
        let mut check = CheckBuilder::new("galerkin", 1e-6, tolerance);
        let v = rayleigh_galerkin_b2(&GalerkinConfig::new(1, 0.0, 40))?;
        check.record(rel(v, 2.0), || format!("(k=1, t=0): {v}"));
        let target = 1.0 / (std::f64::consts::E - 2.0);
        let v = rayleigh_galerkin_b2(&GalerkinConfig::new(1, 1.0, 40))?;
        check.record(rel(v, target), || format!("(k=1, t=1): {v} vs {target}"));
        checks.push(check.finish());
    }

    if wanted("harmonic-extension") {
        let mut check = CheckBuilder::new("harmonic-extension", 1e-6, tolerance);
        let mut state = 0x853C49E6748FEA9Bu64;
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64) / ((1u64 << 53) as f64) * 2.0 - 1.0
        };
        for n in 1..=2usize {
            if n_filter.is_some_and(|want| want != n) {
                continue;
            }
            let mut points = Vec::new();
            while points.len() < 20 {
                let x: Vec<f64> = (0..2 * n).map(|_| next()).collect();
                let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                if norm > 0.05 {
                    let radius = 0.1 + 0.8 * points.len() as f64 / 20.0;
                    points.push(x.iter().map(|v| v / norm * radius).collect());
                }
            }
            let report = verify_harmonic_extension_b2n(n, &points)?;
            check.record(
                report
                    .max_laplacian_residual
                    .max(report.max_lie_residual)
                    .max(report.max_eta_residual),
                || format!("n={n}: {report:?}"),
            );
        }
        checks.push(check.finish());
    }

    if wanted("diamagnetic") {
        let mut check = CheckBuilder::new("diamagnetic", 1e-9, tolerance);
        let grid: Vec<f64> = (1..=10).map(|i| 0.05 * i as f64).collect();
        for domain in [Domain::B2, Domain::B4] {
            let report = check_violation(domain, &grid)?;
            for row in &report.rows {
                check.record((row.actual - row.bound).max(0.0), || {
                    format!("{domain:?} t={}: bound {} < actual {}", row.t, row.bound, row.actual)
                });
                if !row.violated {
                    check.note(format!("{domain:?} t={}: no violation", row.t));
                }
            }
            let _ = bound_coefficients_b2n(if domain == Domain::B2 { 1 } else { 2 })?;
        }
        let crossing = b4_crossing()?;
        check.record(((crossing - 2.99).abs() - 0.05).max(0.0), || {
            format!("B⁴ crossing {crossing} outside 2.99 ± 0.05")
        });
        checks.push(check.finish());
    }

    let pass = checks.iter().all(|c| c.status == "pass");
    Ok(VerifyReport { checks, pass })
}

// Domain and FigureKind implement FromStr in the library; clap uses those.
