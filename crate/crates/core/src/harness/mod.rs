//! Experiment configuration, benchmark runs, table reproduction and CSV output.

pub mod config;
mod csv;
pub mod problem;
mod run;
mod scan;
mod tables;

pub use config::{ExperimentConfig, Method, Problem};
pub use csv::{render_csv, render_scan_csv};
pub use problem::Instance;
pub use run::{compute_rate, run_experiment, run_single, RunRecord, RATE_PLATEAU};
pub use scan::{initial_hamiltonian, spectral_scan};
pub use tables::{reproduce_table, table_blocks, TableBlock};
