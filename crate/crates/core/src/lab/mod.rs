//! Monte Carlo threshold sweeps and the statistics around them.

pub mod stats;
pub mod sweep;

pub use stats::{crossing, estimate_crossing, pooled_se, wilson, NoBracket, Z_95};
pub use sweep::{
    couple_experiment, run_coupled_sweep, run_coupled_sweep_detailed, run_sweep, to_csv_string,
    write_csv, ColorRule, CoupleReport, CoupledSweep, PGrid, Spacing, SweepConfig, SweepResult,
};
