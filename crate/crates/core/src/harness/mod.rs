//! Command-line front end, run records, the result cache and table reports.

mod cli;
mod record;
mod report;
mod spec;
mod store;

pub use cli::{parse_table_scope, run, EXIT_BUDGET, EXIT_FAILS, EXIT_OK, EXIT_USAGE};
pub use record::{parse_pairing, NamedVerdict, RunRecord, TOOL_VERSION};
pub use report::{agreement_text, table_csv, table_text, write_table, TableFiles};
pub use spec::GraphSpec;
pub use store::ResultStore;
