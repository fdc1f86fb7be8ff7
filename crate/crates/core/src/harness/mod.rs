//! Configuration, initial conditions, run orchestration and the on-disk
//! formats for series, fields and reports.

mod config;
mod ic;
mod io;
mod run;

pub use config::{
    ConstantsConfig, DiagnosticsConfig, OutputConfig, RunConfig, TheoremConfig, CONFIG_SCHEMA,
};
pub use ic::{make_ic, IcSpec, IcVariant};
pub use io::{
    export_series, field_to_string, parse_field, parse_series, read_field, read_series,
    series_to_string, write_field, SeriesHeader,
    FIELD_SCHEMA, SERIES_SCHEMA,
};
pub use run::{execute, exit_code, run, verify_command, RunOutcome, TheoremObserver};
