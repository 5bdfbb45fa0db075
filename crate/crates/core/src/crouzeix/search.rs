//! Multi-start search for Blaschke products with large `‖B((A − cI)/r)‖`, giving
//! lower bounds on the spectral-set constant of the disk `D(c, r)`.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::crouzeix::blaschke::{BlaschkeNormEvaluator, BlaschkeProduct};
use crate::ensembles::{Seed, STREAM_MISC};
use crate::error::{LabError, Result};
use crate::linalg::CMatrix;
use crate::optimize::{nelder_mead_projected, NelderMeadOptions};
use crate::scalar::Cx;

/// Roots are kept in the closed disk of this radius.
pub const ROOT_RADIUS_CAP: f64 = 0.99;

/// Initial roots are drawn uniformly from the disk of this radius.
pub const START_RADIUS: f64 = 0.8;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectralSetEstimate {
    pub best_norm: f64,
    pub best_roots: Vec<Cx<f64>>,
    /// Best value reached from each start, in start order.
    pub start_norms: Vec<f64>,
    pub converged_starts: usize,
    pub evaluations: usize,
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub nelder_mead: NelderMeadOptions,
    /// Lanczos residual tolerance for each norm evaluation.
    pub norm_tol: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            nelder_mead: NelderMeadOptions { step: 0.1, max_evals: 600, f_tol: 1e-6, x_tol: 1e-3 },
            norm_tol: 1e-7,
        }
    }
}

fn project(x: &mut [f64]) {
    for p in x.chunks_mut(2) {
        let r = p[0].hypot(p[1]);
        if r > ROOT_RADIUS_CAP {
            p[0] *= ROOT_RADIUS_CAP / r;
            p[1] *= ROOT_RADIUS_CAP / r;
        }
    }
}

fn roots(x: &[f64]) -> Vec<Cx<f64>> {
    x.chunks(2).map(|p| Cx::new(p[0], p[1])).collect()
}

/// Maximizes `‖B((A − cI)/r)‖` over the roots of degree-`degree` products with
/// Nelder–Mead from `n_starts` random starts (start `i` uses `seed.derive(i)`).
pub fn spectral_set_constant_estimate(
    a: &CMatrix<f64>,
    center: Cx<f64>,
    radius: f64,
    degree: usize,
    n_starts: usize,
    seed: Seed,
) -> Result<SpectralSetEstimate> {
    spectral_set_constant_estimate_with(a, center, radius, degree, n_starts, seed, &SearchOptions::default())
}

pub fn spectral_set_constant_estimate_with(
    a: &CMatrix<f64>,
    center: Cx<f64>,
    radius: f64,
    degree: usize,
    n_starts: usize,
    seed: Seed,
    opts: &SearchOptions,
) -> Result<SpectralSetEstimate> {
    if degree == 0 || n_starts == 0 {
        return Err(LabError::Parameter("degree and number of starts must be positive".into()));
    }
    let mut eval = BlaschkeNormEvaluator::new(a, center, radius)?;
    eval.tol = opts.norm_tol;
    let runs: Vec<Result<(f64, Vec<Cx<f64>>, usize, bool)>> = (0..n_starts)
        .into_par_iter()
        .map(|i| {
            let mut rng = seed.derive(i as u64).rng(STREAM_MISC);
            let x0: Vec<f64> = (0..degree)
                .flat_map(|_| {
                    let r = START_RADIUS * rng.random::<f64>().sqrt();
                    let t = std::f64::consts::TAU * rng.random::<f64>();
                    [r * t.cos(), r * t.sin()]
                })
                .collect();
            let mut start: Option<Vec<Cx<f64>>> = None;
            let mut failure: Option<LabError> = None;
            let objective = |x: &[f64]| -> f64 {
                let b = BlaschkeProduct { phase: 0.0, roots: roots(x) };
                match eval.norm_with_vector(&b, start.as_deref()) {
                    Ok((v, vec)) => {
                        start = Some(vec);
                        -v
                    }
                    Err(e) => {
                        failure.get_or_insert(e);
                        f64::INFINITY
                    }
                }
            };
            let res = nelder_mead_projected(objective, project, &x0, &opts.nelder_mead);
            if !res.value.is_finite() {
                return Err(failure.unwrap_or(LabError::NoConvergence {
                    op: "spectral_set_constant_estimate",
                    detail: format!("start {i} produced no finite value"),
                }));
            }
            Ok((-res.value, roots(&res.x), res.evals, res.converged))
        })
        .collect();

    let mut best: Option<(f64, Vec<Cx<f64>>)> = None;
    let mut start_norms = Vec::with_capacity(n_starts);
    let mut converged_starts = 0;
    let mut evaluations = 0;
    let mut last_err = None;
    for run in runs {
        match run {
            Ok((v, roots, evals, converged)) => {
                evaluations += evals;
                if converged {
                    converged_starts += 1;
                }
                start_norms.push(v);
                if best.as_ref().is_none_or(|(b, _)| v > *b) {
                    best = Some((v, roots));
                }
            }
            Err(e) => {
                start_norms.push(f64::NAN);
                last_err = Some(e);
            }
        }
    }
    if converged_starts == 0 {
        return Err(last_err.unwrap_or(LabError::NoConvergence {
            op: "spectral_set_constant_estimate",
            detail: format!("none of {n_starts} starts converged"),
        }));
    }
    let (best_norm, best_roots) = best.expect("a converged start has a value");
    Ok(SpectralSetEstimate { best_norm, best_roots, start_norms, converged_starts, evaluations })
}
