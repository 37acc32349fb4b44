//! Seeded multi-trial experiments: run a configuration, summarize the
//! measurements against the theoretical references, and write records and
//! summaries as CSV or JSON.

mod config;
mod emit;
mod run;
mod summary;

pub use config::{ExperimentConfig, Method, SampleKind};
pub use emit::{emit_records_csv, emit_summary_csv, emit_summary_json, RECORD_COLUMNS};
pub use run::{run_trials, TrialRecord};
pub use summary::{
    c_key, k_small_reference, summarize, theorem1_reference, theorem1_report, theorem2_report,
    verify_theorem1, verify_theorem2, Summary, TailEntry,
};
