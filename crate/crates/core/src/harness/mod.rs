//! Experiments, CSV output and the command line.

mod cli;
mod csvout;
mod experiments;

pub use cli::{cli_main, parse_combo};
pub use csvout::{
    density_csv, entropy_csv, generic_csv, obstruction_csv, RNG_NAME, SCHEMA_VERSION,
};
pub use experiments::{
    combo_measure, entropy_table, find_gluing, ln_golden, render_combo, rng, root_loop_pool,
    run_density, run_entropy, run_generic, run_obstruction, sample_word, DensityConfig, DensityRow,
    EntropyRow, EntropyTable, GenericConfig, ObstructionReport, MAX_GLUING_GAP, MAX_PERIOD_DYCK,
    MAX_PERIOD_XDOUBLEPRIME,
};
