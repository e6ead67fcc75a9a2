//! Scans over the coupling angle and the observables recorded along them.

mod analysis;
mod blocks;
mod record;
mod runner;

pub use analysis::{central_difference, find_extrema, find_zero_crossing, ExtremumKind, Extremum};
pub use blocks::{block_sites, crossing_bonds, BlockFamily, BlockSpec, CrossingBonds};
pub use record::{csv_header, write_csv, SweepRecord};
pub use runner::{
    in_uniqueness_window, run_sweep, solve_point, theta_grid, PairSelection, PointSolution, SweepConfig,
    UNIQUENESS_WINDOW,
};
