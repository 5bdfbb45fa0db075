//! The experiment commands. Each one is a pure function of its configuration:
//! trials run in parallel on derived seeds and rows are assembled in trial order.

use std::collections::BTreeMap;
use std::time::Instant;

use gmreslab_core::crouzeix::{self, BlaschkeProduct};
use gmreslab_core::csv::CsvTable;
use gmreslab_core::ensembles::{make_system, sample_ginibre, RhsMode, Seed};
use gmreslab_core::gmres::{self, ResidualCurve};
use gmreslab_core::linalg::{self, DEFAULT_TOL};
use gmreslab_core::spectral_sets::{self, edge_profile_table, linspace, ResolventProbe};
use gmreslab_core::{CMat, Cx};
use rayon::prelude::*;

use crate::config::{Command, ExperimentConfig, PlotKind};
use crate::error::CliError;
use crate::manifest::{write_atomic, OutputSet, RunManifest};
use crate::render::{plot_for, svg_for};
use crate::svg::{Mark, Series};

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// Range and size of the `|z|² − 1` grid of the resolvent figure.
pub const FIG2_X_RANGE: (f64, f64) = (0.05, 1.5);
pub const FIG2_POINTS: usize = 30;

/// Real roots of the Blaschke sweep lie on a uniform grid over this interval.
pub const SWEEP_RANGE: (f64, f64) = (-0.9, 0.9);

struct Report {
    metrics: BTreeMap<String, f64>,
    notes: BTreeMap<String, String>,
}

impl Report {
    fn new() -> Self {
        Self { metrics: BTreeMap::new(), notes: BTreeMap::new() }
    }

    fn metric(&mut self, key: &str, v: f64) {
        // JSON has no infinities; those values stay in the CSVs only
        if v.is_finite() {
            self.metrics.insert(key.to_string(), v);
        }
    }

    fn note(&mut self, key: &str, v: impl Into<String>) {
        self.notes.insert(key.to_string(), v.into());
    }
}

/// Log-spaced grid with `n ≥ 2` points from `a` to `b`.
pub fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    let (la, lb) = (a.ln(), b.ln());
    (0..n).map(|i| (la + (lb - la) * i as f64 / (n - 1) as f64).exp()).collect()
}

/// Runs one experiment, writes its outputs and then its manifest.
pub fn run(config: &ExperimentConfig) -> Result<RunManifest, CliError> {
    config.validate()?;
    let start = Instant::now();
    let mut out = OutputSet::create(&config.out_dir)?;
    let mut report = Report::new();
    match config.command {
        Command::Fig1 => fig1(config, &mut out, &mut report)?,
        Command::Fig2 => fig2(config, &mut out, &mut report)?,
        Command::Fig3 => fig3(config, &mut out, &mut report)?,
        Command::Fig4 => fig4(config, &mut out, &mut report)?,
        Command::Gmres => gmres_cmd(config, &mut out, &mut report)?,
        Command::Pseudo => pseudo(config, &mut out, &mut report)?,
        Command::Nrange => nrange(config, &mut out, &mut report)?,
        Command::Crouzeix => crouzeix_cmd(config, &mut out, &mut report)?,
    }
    let manifest = RunManifest {
        config: config.clone(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        outputs: out.files().to_vec(),
        metrics: report.metrics,
        notes: report.notes,
    };
    write_atomic(&out.dir().join(RunManifest::file_name(config)), manifest.to_json().as_bytes())?;
    Ok(manifest)
}

fn write_table(out: &mut OutputSet, cfg: &ExperimentConfig, name: &str, table: &CsvTable, kind: Option<PlotKind>) -> Result<(), CliError> {
    out.write(&format!("{name}.csv"), &table.to_csv())?;
    if let (true, Some(kind)) = (cfg.emit_svg, kind) {
        out.write(&format!("{name}.svg"), &svg_for(kind, table)?)?;
    }
    Ok(())
}

fn ginibre(n: usize, seed: Seed) -> Result<CMat, CliError> {
    Ok(sample_ginibre(n, seed)?)
}

fn curve_metrics(report: &mut Report, prefix: &str, curve: &ResidualCurve) {
    for &k in &[1usize, 5, 10] {
        if let Some(&r) = curve.rel_residuals.get(k) {
            report.metric(&format!("{prefix}_residual_k{k}"), r);
            report.metric(&format!("{prefix}_ratio_to_rate_k{k}"), r / curve.prediction[k]);
        }
    }
}

fn fig1(cfg: &ExperimentConfig, out: &mut OutputSet, report: &mut Report) -> Result<(), CliError> {
    let seed = Seed(cfg.seed);
    let curve = |mode| -> Result<ResidualCurve, CliError> {
        let sys = make_system(cfg.n, cfg.sigma, mode, seed)?;
        Ok(gmres::gmres_residuals(&sys, cfg.k_max)?)
    };
    let (ind, adv) = rayon::join(|| curve(RhsMode::Independent), || curve(RhsMode::Adversarial));
    let (ind, adv) = (ind?, adv?);
    write_table(out, cfg, "fig1_independent", &ind.to_table(), Some(PlotKind::Residual))?;
    write_table(out, cfg, "fig1_adversarial", &adv.to_table(), Some(PlotKind::Residual))?;
    curve_metrics(report, "independent", &ind);
    curve_metrics(report, "adversarial", &adv);
    report.note("matrix", "both curves use the same G; b is drawn independently or maximizes ||(A - I)^10 b||");
    Ok(())
}

fn fig2(cfg: &ExperimentConfig, out: &mut OutputSet, report: &mut Report) -> Result<(), CliError> {
    let xs = logspace(FIG2_X_RANGE.0, FIG2_X_RANGE.1, FIG2_POINTS);
    let radii: Vec<f64> = xs.iter().map(|x| (1.0 + x).sqrt()).collect();
    let per_trial: Vec<Vec<f64>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| -> Result<Vec<f64>, CliError> {
            let g = ginibre(cfg.n, Seed(cfg.seed).derive(t as u64))?;
            let probe = ResolventProbe::new(&g, DEFAULT_TOL)?;
            radii.iter().map(|&r| Ok(probe.norm(Cx::new(r, 0.0))?.value)).collect()
        })
        .collect::<Result<_, _>>()?;
    let mut table = CsvTable::new(&["trial", "x", "abs_z", "resolvent_norm", "inverse_norm"]);
    let mut worst: f64 = 0.0;
    for (t, norms) in per_trial.iter().enumerate() {
        for ((&x, &r), &v) in xs.iter().zip(&radii).zip(norms) {
            table.push(vec![t as f64, x, r, v, 1.0 / v]);
            let limit = spectral_sets::edge_e(r)?.sqrt();
            worst = worst.max((1.0 / v - limit).abs() / limit);
        }
    }
    write_table(out, cfg, "fig2", &table, Some(PlotKind::Resolvent))?;
    out.write("fig2_edge.csv", &edge_profile_table(&radii)?.to_csv())?;
    report.metric("max_relative_gap_to_edge", worst);
    report.note(
        "grid",
        format!(
            "x = |z|^2 - 1 at {FIG2_POINTS} log-spaced points in [{}, {}]; z = sqrt(1 + x) on the positive real axis",
            FIG2_X_RANGE.0, FIG2_X_RANGE.1
        ),
    );
    Ok(())
}

fn boundary_metrics(report: &mut Report, poly: &crouzeix::BoundaryPolygon<f64>) -> Result<(), CliError> {
    report.metric("hausdorff_to_disk_sqrt2", spectral_sets::hausdorff_to_disk(&poly.vertices, true, SQRT2)?);
    report.metric("max_support_value", poly.support_values.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    report.metric("min_support_value", poly.support_values.iter().copied().fold(f64::INFINITY, f64::min));
    Ok(())
}

fn fig3(cfg: &ExperimentConfig, out: &mut OutputSet, report: &mut Report) -> Result<(), CliError> {
    let g = ginibre(cfg.n, Seed(cfg.seed))?;
    let (poly, eigs) = rayon::join(|| crouzeix::numerical_range_boundary(&g, cfg.angles), || linalg::eigenvalues(&g));
    let (poly, eigs) = (poly?, eigs?);
    let boundary = poly.to_table();
    out.write("fig3_boundary.csv", &boundary.to_csv())?;
    let mut ev = CsvTable::new(&["re", "im"]);
    for z in &eigs {
        ev.push(vec![z.re, z.im]);
    }
    out.write("fig3_eigenvalues.csv", &ev.to_csv())?;
    let mut circle = CsvTable::new(&["theta", "re", "im"]);
    for j in 0..cfg.angles {
        let t = std::f64::consts::TAU * j as f64 / cfg.angles as f64;
        circle.push(vec![t, SQRT2 * t.cos(), SQRT2 * t.sin()]);
    }
    out.write("fig3_circle.csv", &circle.to_csv())?;
    if cfg.emit_svg {
        let mut plot = plot_for(PlotKind::Boundary, &boundary);
        plot.title = format!("Numerical range and eigenvalues, N = {}", cfg.n);
        plot.series.push(Series::new("eigenvalues", eigs.iter().map(|z| (z.re, z.im)).collect(), Mark::Dots));
        let svg = plot.render().ok_or_else(|| CliError::Usage("nothing to draw".into()))?;
        out.write("fig3.svg", &svg)?;
    }
    boundary_metrics(report, &poly)?;
    report.metric("spectral_radius", eigs.iter().map(|z| z.norm()).fold(0.0, f64::max));
    Ok(())
}

fn sweep_alphas(cfg: &ExperimentConfig) -> Vec<f64> {
    linspace(SWEEP_RANGE.0, SWEEP_RANGE.1, cfg.alphas)
}

fn fig4(cfg: &ExperimentConfig, out: &mut OutputSet, report: &mut Report) -> Result<(), CliError> {
    let alphas = sweep_alphas(cfg);
    let sweeps: Vec<Vec<(f64, f64)>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| -> Result<_, CliError> {
            let g = ginibre(cfg.n, Seed(cfg.seed).derive(t as u64))?;
            Ok(crouzeix::alpha_sweep(&g, &alphas, SQRT2)?)
        })
        .collect::<Result<_, _>>()?;
    let mut table = CsvTable::new(&["trial", "alpha", "norm"]);
    for (t, sweep) in sweeps.iter().enumerate() {
        for &(a, v) in sweep {
            table.push(vec![t as f64, a, v]);
        }
    }
    write_table(out, cfg, "fig4", &table, Some(PlotKind::Sweep))?;
    let all = sweeps.iter().flatten();
    report.metric("max_norm", all.clone().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max));
    let center = alphas.iter().enumerate().min_by(|a, b| a.1.abs().total_cmp(&b.1.abs())).map(|(i, _)| i).unwrap_or(0);
    report.metric("mean_norm_at_center_alpha", sweeps.iter().map(|s| s[center].1).sum::<f64>() / sweeps.len() as f64);
    report.note("alpha_grid", format!("{} uniform points in [{}, {}]", cfg.alphas, SWEEP_RANGE.0, SWEEP_RANGE.1));
    Ok(())
}

fn gmres_cmd(cfg: &ExperimentConfig, out: &mut OutputSet, report: &mut Report) -> Result<(), CliError> {
    let sys = make_system(cfg.n, cfg.sigma, cfg.rhs, Seed(cfg.seed))?;
    let curve = gmres::gmres_residuals(&sys, cfg.k_max)?;
    write_table(out, cfg, "gmres", &curve.to_table(), Some(PlotKind::Residual))?;
    curve_metrics(report, &cfg.rhs.to_string(), &curve);
    Ok(())
}

fn pseudo(cfg: &ExperimentConfig, out: &mut OutputSet, report: &mut Report) -> Result<(), CliError> {
    let g = ginibre(cfg.n, Seed(cfg.seed))?;
    let probe = spectral_sets::annulus_probe(&g, cfg.r_inner, cfg.r_outer, cfg.radial, cfg.angles)?;
    write_table(out, cfg, "pseudo_annulus", &probe.to_table(), Some(PlotKind::Annulus))?;
    out.write("pseudo_edge.csv", &edge_profile_table(&linspace(cfg.r_inner, cfg.r_outer, cfg.radial))?.to_csv())?;
    report.metric("min_norm", probe.min_norm);
    report.metric("max_norm", probe.max_norm);
    report.metric("limit_lower", spectral_sets::edge_e(cfg.r_outer)?.powf(-0.5));
    report.metric("limit_upper", spectral_sets::edge_e(cfg.r_inner)?.powf(-0.5));
    report.metric("any_singular", if probe.any_singular { 1.0 } else { 0.0 });
    Ok(())
}

fn nrange(cfg: &ExperimentConfig, out: &mut OutputSet, report: &mut Report) -> Result<(), CliError> {
    let g = ginibre(cfg.n, Seed(cfg.seed))?;
    let poly = crouzeix::numerical_range_boundary(&g, cfg.angles)?;
    write_table(out, cfg, "nrange", &poly.to_table(), Some(PlotKind::Boundary))?;
    boundary_metrics(report, &poly)
}

fn crouzeix_cmd(cfg: &ExperimentConfig, out: &mut OutputSet, report: &mut Report) -> Result<(), CliError> {
    let seed = Seed(cfg.seed);
    let g = ginibre(cfg.n, seed)?;
    let origin = Cx::new(0.0, 0.0);

    let sweep = crouzeix::alpha_sweep(&g, &sweep_alphas(cfg), SQRT2)?;
    write_table(out, cfg, "crouzeix_sweep", &crouzeix::sweep_table(&sweep), Some(PlotKind::Sweep))?;
    report.metric("sweep_max_norm", sweep.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max));

    // f = B_0 ∘ φ with φ(z) = z/√2, so f(A) = A/√2 and f(c) = 0 at the centre
    let f = |z: Cx<f64>| z / SQRT2;
    let defect = crouzeix::cauchy_defect(&g, origin, SQRT2, cfg.quad, Some(&f))?;
    out.write("crouzeix_defect.json", &(defect.to_json() + "\n"))?;
    let f_of_a = BlaschkeProduct::degree_one(origin)?.eval_matrix(&g.scale_real(1.0 / SQRT2))?;
    let lhs = crouzeix::defect_inequality_lhs(&f_of_a, origin, defect.gamma.unwrap_or(origin))?;
    report.metric("delta", defect.delta);
    report.metric("defect_inequality_lhs", lhs);
    report.metric("defect_inequality_rhs", 2.0 + defect.delta);

    let est = crouzeix::spectral_set_constant_estimate(&g, origin, SQRT2, cfg.degree, cfg.trials, seed)?;
    let json = serde_json::to_string_pretty(&est).expect("estimate serializes") + "\n";
    out.write("crouzeix_search.json", &json)?;
    report.metric("search_best_norm", est.best_norm);
    report.metric("search_converged_starts", est.converged_starts as f64);
    report.note("disk", "D(0, sqrt 2); the search uses `trials` random starts of the given degree");
    Ok(())
}
