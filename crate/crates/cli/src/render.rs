//! CSV → plot conversion, shared by `render` and the `--svg` flag.

use std::path::{Path, PathBuf};

use gmreslab_core::csv::CsvTable;
use gmreslab_core::spectral_sets::edge_e;

use crate::config::PlotKind;
use crate::error::CliError;
use crate::manifest::write_atomic;
use crate::svg::{Mark, Plot, Series};

const SQRT2: f64 = std::f64::consts::SQRT_2;

pub fn required_columns(kind: PlotKind) -> &'static [&'static str] {
    match kind {
        PlotKind::Residual => &["k", "residual", "prediction", "bound_pseudo", "bound_nr"],
        PlotKind::Resolvent => &["trial", "x", "abs_z", "resolvent_norm", "inverse_norm"],
        PlotKind::Boundary => &["theta", "support_value", "vertex_re", "vertex_im"],
        PlotKind::Sweep => &["alpha", "norm"],
        PlotKind::Annulus => &["re_z", "im_z", "abs_z", "resolvent_norm"],
    }
}

fn col(t: &CsvTable, name: &str) -> Vec<f64> {
    t.column(name).unwrap_or_default()
}

/// Splits row indices by the value of `key`, keeping first-seen order.
fn groups(keys: &[f64]) -> Vec<(f64, Vec<usize>)> {
    let mut out: Vec<(f64, Vec<usize>)> = Vec::new();
    for (i, &k) in keys.iter().enumerate() {
        match out.iter_mut().find(|(g, _)| (g - k).abs() <= 1e-9 * (1.0 + k.abs())) {
            Some((_, rows)) => rows.push(i),
            None => out.push((k, vec![i])),
        }
    }
    out
}

fn circle(r: f64, n: usize) -> Vec<(f64, f64)> {
    (0..=n).map(|j| std::f64::consts::TAU * j as f64 / n as f64).map(|t| (r * t.cos(), r * t.sin())).collect()
}

/// Builds the plot for a table whose schema has already been checked.
pub fn plot_for(kind: PlotKind, t: &CsvTable) -> Plot {
    match kind {
        PlotKind::Residual => {
            let k = col(t, "k");
            let line = |name: &str| k.iter().copied().zip(col(t, name)).collect::<Vec<_>>();
            Plot {
                title: "GMRES relative residual".into(),
                x_label: "iteration k".into(),
                y_label: "||r_k|| / ||b||".into(),
                log_y: true,
                equal_aspect: false,
                series: vec![
                    Series::new("GMRES", line("residual"), Mark::Line),
                    Series::new("limiting rate", line("prediction"), Mark::Dashed),
                    Series::new("pseudospectral bound", line("bound_pseudo"), Mark::Line),
                    Series::new("numerical-range bound", line("bound_nr"), Mark::Line),
                ],
            }
        }
        PlotKind::Resolvent => {
            let (x, inv, abs_z) = (col(t, "x"), col(t, "inverse_norm"), col(t, "abs_z"));
            let mut series: Vec<Series> = groups(&col(t, "trial"))
                .into_iter()
                .map(|(trial, rows)| Series::new(format!("sample {trial}"), rows.iter().map(|&i| (x[i], inv[i])).collect(), Mark::Line))
                .collect();
            let mut edge: Vec<(f64, f64)> = groups(&x)
                .into_iter()
                .filter_map(|(xv, rows)| edge_e(abs_z[rows[0]]).ok().map(|e| (xv, e.sqrt())))
                .collect();
            edge.sort_by(|a, b| a.0.total_cmp(&b.0));
            series.push(Series::new("sqrt e(|z|)", edge, Mark::Dashed));
            Plot {
                title: "Smallest singular value of zI - G".into(),
                x_label: "|z|^2 - 1".into(),
                y_label: "1 / ||R(z, G)||".into(),
                log_y: false,
                equal_aspect: false,
                series,
            }
        }
        PlotKind::Boundary => {
            let mut poly: Vec<(f64, f64)> = col(t, "vertex_re").into_iter().zip(col(t, "vertex_im")).collect();
            if let Some(&first) = poly.first() {
                poly.push(first);
            }
            Plot {
                title: "Numerical range".into(),
                x_label: "Re".into(),
                y_label: "Im".into(),
                log_y: false,
                equal_aspect: true,
                series: vec![
                    Series::new("boundary polygon", poly, Mark::Line),
                    Series::new("|z| = sqrt 2", circle(SQRT2, 256), Mark::Dashed),
                ],
            }
        }
        PlotKind::Sweep => {
            let (alpha, norm) = (col(t, "alpha"), col(t, "norm"));
            let trials = t.column("trial").unwrap_or_else(|| vec![0.0; alpha.len()]);
            let mut series: Vec<Series> = groups(&trials)
                .into_iter()
                .map(|(trial, rows)| Series::new(format!("sample {trial}"), rows.iter().map(|&i| (alpha[i], norm[i])).collect(), Mark::Line))
                .collect();
            let lo = alpha.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = alpha.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            series.push(Series::new("sqrt 2", vec![(lo, SQRT2), (hi, SQRT2)], Mark::Dashed));
            Plot {
                title: "Degree-one Blaschke product norm".into(),
                x_label: "alpha".into(),
                y_label: "||B_alpha(G / sqrt 2)||".into(),
                log_y: false,
                equal_aspect: false,
                series,
            }
        }
        PlotKind::Annulus => {
            let (re, im, norm) = (col(t, "re_z"), col(t, "im_z"), col(t, "resolvent_norm"));
            let series = groups(&col(t, "abs_z"))
                .into_iter()
                .map(|(r, rows)| {
                    let mut pts: Vec<(f64, f64)> = rows.iter().map(|&i| (im[i].atan2(re[i]), norm[i])).collect();
                    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
                    Series::new(format!("|z| = {r:.4}"), pts, Mark::Line)
                })
                .collect();
            Plot {
                title: "Resolvent norm on the annulus".into(),
                x_label: "arg z".into(),
                y_label: "||R(z, G)||".into(),
                log_y: false,
                equal_aspect: false,
                series,
            }
        }
    }
}

pub fn check_schema(kind: PlotKind, t: &CsvTable) -> Result<(), CliError> {
    let missing: Vec<&str> = required_columns(kind).iter().copied().filter(|c| !t.header().iter().any(|h| h == c)).collect();
    if !missing.is_empty() {
        return Err(CliError::Usage(format!("CSV does not match kind {kind:?}: missing columns {}", missing.join(", "))));
    }
    if t.is_empty() {
        return Err(CliError::Usage("CSV has no data rows".into()));
    }
    Ok(())
}

/// SVG text for a table, or a usage error if it cannot be drawn.
pub fn svg_for(kind: PlotKind, t: &CsvTable) -> Result<String, CliError> {
    check_schema(kind, t)?;
    plot_for(kind, t).render().ok_or_else(|| CliError::Usage("CSV has no drawable values".into()))
}

/// Renders `csv_path` and writes the SVG next to it (or to `out`). Nothing is
/// written when the input is unusable.
pub fn render_svg(csv_path: &Path, kind: PlotKind, out: Option<&Path>) -> Result<PathBuf, CliError> {
    let text = std::fs::read_to_string(csv_path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", csv_path.display())))?;
    let table = CsvTable::parse(&text).map_err(|e| CliError::Usage(format!("{}: {e}", csv_path.display())))?;
    let svg = svg_for(kind, &table)?;
    let out = out.map(Path::to_path_buf).unwrap_or_else(|| csv_path.with_extension("svg"));
    write_atomic(&out, svg.as_bytes())?;
    Ok(out)
}
