//! Record ingestion and validation, command orchestration and report output.

pub mod commands;
pub mod records;
pub mod report;

pub use commands::{
    cmd_coincidences, cmd_density, cmd_empirical, cmd_positivity, cmd_scan, exit_code, CoincidenceEntry,
    CoincidenceReport, DensityReport, EmpiricalReport, EmpiricalRow, PositivityReport, PositivityRow, RunConfig,
    ScanReport, SkippedRecord, EXIT_COUNTEREXAMPLE, GOOD_REDUCTION_POLICY,
};
pub use records::{
    parse_records, parse_records_str, validate, Corpus, CurveRecord, LoadedRecord, RecordFile, SCHEMA_VERSION,
};
pub use report::Report;
