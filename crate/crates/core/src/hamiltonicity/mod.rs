//! Extending pairings to Hamiltonian cycles, and the PMH / PH deciders.

mod blocking;
mod decide;
mod extend;
mod table;

pub use blocking::{blocking_completions, build_blocking_matching, BlockingLayout};
pub use decide::{
    check_stream, default_workers, extend_query, is_ph, is_pmh, Budget, DeciderOptions, Stats,
    Status, Verdict,
};
pub use extend::{
    extend_to_hamiltonian, extend_with_limits, is_hamiltonian_cycle, union_edges, Extension,
    SearchLimits,
};
pub use table::{
    pmh_table, reference_cell, Agreement, CellStatus, CellStore, PmhTable, ReferenceCell, TableCell,
};
