//! Numerical range boundaries, Blaschke products, disk defects and searches for
//! large `‖f(A)‖/‖f‖` over disks.

pub mod blaschke;
pub mod boundary;
pub mod defect;
pub mod search;

pub use blaschke::{alpha_sweep, crouzeix_ratio, BlaschkeNormEvaluator, BlaschkeProduct};
pub use boundary::{numerical_range_boundary, BoundaryPolygon, SupportFunction};
pub use defect::{cauchy_defect, defect_bound, defect_inequality_lhs, DefectReport};
pub use search::{spectral_set_constant_estimate, spectral_set_constant_estimate_with, SearchOptions, SpectralSetEstimate};

use crate::csv::CsvTable;

/// CSV `alpha,norm` for a sweep.
pub fn sweep_table(sweep: &[(f64, f64)]) -> CsvTable {
    let mut t = CsvTable::new(&["alpha", "norm"]);
    for &(a, v) in sweep {
        t.push(vec![a, v]);
    }
    t
}
