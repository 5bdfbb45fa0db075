//! Command-line driver: each experiment writes CSV tables (and optional SVG
//! plots) plus a JSON manifest with SHA-256 hashes of every output.

pub mod config;
pub mod error;
pub mod manifest;
pub mod render;
pub mod run;
pub mod svg;

pub use config::{Cli, CliCommand, Command, ExperimentConfig, PlotKind, RunArgs};
pub use error::CliError;
pub use manifest::RunManifest;
pub use render::render_svg;
pub use run::run;

/// Executes a parsed command line; returns the paths written.
pub fn dispatch(cli: &Cli) -> Result<Vec<std::path::PathBuf>, CliError> {
    let (command, args) = match &cli.command {
        CliCommand::Render(r) => return Ok(vec![render_svg(&r.csv, r.kind, r.out.as_deref())?]),
        CliCommand::Fig1(a) => (Command::Fig1, a),
        CliCommand::Fig2(a) => (Command::Fig2, a),
        CliCommand::Fig3(a) => (Command::Fig3, a),
        CliCommand::Fig4(a) => (Command::Fig4, a),
        CliCommand::Gmres(a) => (Command::Gmres, a),
        CliCommand::Pseudo(a) => (Command::Pseudo, a),
        CliCommand::Nrange(a) => (Command::Nrange, a),
        CliCommand::Crouzeix(a) => (Command::Crouzeix, a),
    };
    let config = ExperimentConfig::resolve(command, args)?;
    let manifest = run(&config)?;
    let mut paths: Vec<_> = manifest.outputs.iter().map(|f| config.out_dir.join(&f.path)).collect();
    paths.push(config.out_dir.join(RunManifest::file_name(&config)));
    Ok(paths)
}

/// Caps the global thread pool from `LAB_THREADS` when it is set.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("LAB_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| CliError::Usage(format!("LAB_THREADS must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot size thread pool: {e}")))
}
