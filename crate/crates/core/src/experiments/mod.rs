//! Experiment drivers behind the `ionfield` command line: sweeps, reports,
//! manifests and golden-table verification.

pub mod cli;
mod format;
mod golden;
mod manifest;
mod sweeps;
mod tolerance;

pub use format::{fmt_sig, rows_to_csv, CsvRow, SIG_DIGITS};
pub use golden::{
    golden_check, load_golden, CellCheck, GoldenReport, GoldenSource, GoldenTable, TableId,
};
pub use manifest::RunManifest;
pub use sweeps::{
    chain_report, fidelity_row, fidelity_sweep, fock_rows, ion_negativity, negativity_cell,
    negativity_sweep, scalar_negativity, ChainReport, FidelityRow, FockRow, NegativityRow,
    NegativityValue, System, Treatment,
};
pub use tolerance::{sig_figs, TolPolicy, Tolerance};
