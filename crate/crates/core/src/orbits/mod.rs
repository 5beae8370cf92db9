//! Nilpotent orbits, local charts and decay scans.

pub mod chart;
pub mod horizontal;
pub mod poly;
pub mod scaling;
pub mod scan;
pub mod scenario;

pub use chart::{chart_solve, dist_surrogate, dist_surrogate_sq, orbit_eval, Chart};
pub use horizontal::{
    connection_shape, horizontality_check, horizontality_with, ConnectionReport, HorizontalityReport,
    HorizontalityWitness,
};
pub use poly::MatrixPoly;
pub use scaling::{int_pow, scaling_operator};
pub use scan::{decay_scan, fit_decay, format_float, sample_dist_sq, scan_csv, DecayFit, Scan, ScanRow};
pub use scenario::{LimitData, OrbitScenario, Samples};
