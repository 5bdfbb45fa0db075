//! Command-line surface and the resolved per-run configuration.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gmreslab_core::ensembles::RhsMode;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "gmreslab", version, about = "GMRES, pseudospectra and numerical-range experiments on shifted Ginibre matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Residual curves for independent and adversarial right-hand sides, with the limiting rate and both bounds.
    Fig1(RunArgs),
    /// Inverse resolvent norm against |z|² − 1 for several samples, with the edge curve.
    Fig2(RunArgs),
    /// Numerical range polygon, eigenvalues and the circle of radius √2.
    Fig3(RunArgs),
    /// Norm of the degree-one Blaschke product against its real root, for several samples.
    Fig4(RunArgs),
    /// One GMRES residual curve.
    Gmres(RunArgs),
    /// Resolvent norms on an annulus grid.
    Pseudo(RunArgs),
    /// Numerical range polygon of one sample.
    Nrange(RunArgs),
    /// Blaschke sweep, disk defect and multi-start search on one sample.
    Crouzeix(RunArgs),
    /// Render a CSV produced by another command as SVG.
    Render(RenderArgs),
}

/// Flags shared by the experiment commands; unset flags take per-command defaults.
#[derive(Debug, Args, Clone, Default)]
pub struct RunArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long = "k-max")]
    pub k_max: Option<usize>,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Also write SVG renderings.
    #[arg(long)]
    pub svg: bool,
    /// Trapezoid nodes for the disk defect.
    #[arg(long)]
    pub quad: Option<usize>,
    /// Angles for numerical ranges (angular samples for `pseudo`).
    #[arg(long)]
    pub angles: Option<usize>,
    /// Number of real roots in the Blaschke sweep, uniform on [−0.9, 0.9].
    #[arg(long)]
    pub alphas: Option<usize>,
    /// Right-hand side for `gmres`.
    #[arg(long)]
    pub rhs: Option<RhsArg>,
    /// Degree of the multi-start Blaschke search.
    #[arg(long)]
    pub degree: Option<usize>,
    #[arg(long = "r-inner")]
    pub r_inner: Option<f64>,
    #[arg(long = "r-outer")]
    pub r_outer: Option<f64>,
    /// Radial samples for `pseudo`.
    #[arg(long)]
    pub radial: Option<usize>,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    pub csv: PathBuf,
    #[arg(long)]
    pub kind: PlotKind,
    /// Output path; defaults to the CSV path with an `.svg` extension.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RhsArg {
    Independent,
    Adversarial,
}

impl From<RhsArg> for RhsMode {
    fn from(r: RhsArg) -> Self {
        match r {
            RhsArg::Independent => RhsMode::Independent,
            RhsArg::Adversarial => RhsMode::Adversarial,
        }
    }
}

/// CSV schemas understood by `render`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlotKind {
    /// `k, residual, prediction, bound_pseudo, bound_nr` (log-scale y).
    Residual,
    /// `trial, x, abs_z, resolvent_norm, inverse_norm`.
    Resolvent,
    /// `theta, support_value, vertex_re, vertex_im`.
    Boundary,
    /// `[trial,] alpha, norm`.
    Sweep,
    /// `re_z, im_z, abs_z, resolvent_norm`.
    Annulus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Gmres,
    Pseudo,
    Nrange,
    Crouzeix,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Fig1 => "fig1",
            Command::Fig2 => "fig2",
            Command::Fig3 => "fig3",
            Command::Fig4 => "fig4",
            Command::Gmres => "gmres",
            Command::Pseudo => "pseudo",
            Command::Nrange => "nrange",
            Command::Crouzeix => "crouzeix",
        }
    }
}

/// Fully resolved run parameters, echoed into the manifest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub command: Command,
    pub n: usize,
    pub sigma: f64,
    pub seed: u64,
    pub trials: usize,
    pub k_max: usize,
    pub out_dir: PathBuf,
    pub emit_svg: bool,
    pub quad: usize,
    pub angles: usize,
    pub alphas: usize,
    pub rhs: RhsMode,
    pub degree: usize,
    pub r_inner: f64,
    pub r_outer: f64,
    pub radial: usize,
}

impl ExperimentConfig {
    /// `fig1` and `fig3` use one sample; `fig2` and `fig4` default to ten at N = 1000.
    pub fn defaults(command: Command) -> Self {
        let base = Self {
            command,
            n: 1000,
            sigma: 0.25,
            seed: 1,
            trials: 1,
            k_max: 30,
            out_dir: PathBuf::from("out"),
            emit_svg: false,
            quad: 256,
            angles: 256,
            alphas: 33,
            rhs: RhsMode::Independent,
            degree: 3,
            r_inner: 1.2,
            r_outer: 1.5,
            radial: 4,
        };
        match command {
            Command::Fig1 => Self { n: 1500, ..base },
            Command::Fig2 | Command::Fig4 => Self { trials: 10, ..base },
            Command::Fig3 => base,
            Command::Gmres => Self { n: 500, ..base },
            Command::Pseudo => Self { n: 500, angles: 32, ..base },
            Command::Nrange => Self { n: 500, ..base },
            Command::Crouzeix => Self { n: 100, trials: 4, ..base },
        }
    }

    pub fn resolve(command: Command, args: &RunArgs) -> Result<Self, CliError> {
        let d = Self::defaults(command);
        let cfg = Self {
            command,
            n: args.n.unwrap_or(d.n),
            sigma: args.sigma.unwrap_or(d.sigma),
            seed: args.seed.unwrap_or(d.seed),
            trials: args.trials.unwrap_or(d.trials),
            k_max: args.k_max.unwrap_or(d.k_max),
            out_dir: args.out.clone(),
            emit_svg: args.svg,
            quad: args.quad.unwrap_or(d.quad),
            angles: args.angles.unwrap_or(d.angles),
            alphas: args.alphas.unwrap_or(d.alphas),
            rhs: args.rhs.map(RhsMode::from).unwrap_or(d.rhs),
            degree: args.degree.unwrap_or(d.degree),
            r_inner: args.r_inner.unwrap_or(d.r_inner),
            r_outer: args.r_outer.unwrap_or(d.r_outer),
            radial: args.radial.unwrap_or(d.radial),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let fail = |msg: String| Err(CliError::Usage(msg));
        if self.n < 2 {
            return fail(format!("--n must be at least 2, got {}", self.n));
        }
        if self.trials < 1 {
            return fail("--trials must be at least 1".into());
        }
        match self.command {
            Command::Fig1 | Command::Gmres => {
                if !(self.sigma > 0.0 && self.sigma < 1.0) {
                    return fail(format!("--sigma must lie in (0, 1), got {}", self.sigma));
                }
                if self.k_max < 1 || self.k_max >= self.n {
                    return fail(format!("--k-max must satisfy 1 <= k-max < n, got {} with n = {}", self.k_max, self.n));
                }
            }
            Command::Fig3 | Command::Nrange if self.angles < 3 => {
                return fail(format!("--angles must be at least 3, got {}", self.angles));
            }
            Command::Fig4 | Command::Crouzeix if self.alphas < 2 => {
                return fail(format!("--alphas must be at least 2, got {}", self.alphas));
            }
            Command::Pseudo => {
                if !(self.r_inner >= 1.0 && self.r_outer >= self.r_inner && self.r_outer.is_finite()) {
                    return fail(format!("need 1 <= r-inner <= r-outer, got {} and {}", self.r_inner, self.r_outer));
                }
                if self.radial < 1 || self.angles < 1 {
                    return fail("--radial and --angles must be positive".into());
                }
            }
            _ => {}
        }
        if self.command == Command::Crouzeix {
            if self.quad < gmreslab_core::crouzeix::defect::MIN_QUADRATURE {
                return fail(format!("--quad must be at least {}, got {}", gmreslab_core::crouzeix::defect::MIN_QUADRATURE, self.quad));
            }
            if self.degree < 1 {
                return fail("--degree must be at least 1".into());
            }
        }
        Ok(())
    }
}
