//! Library side of the `grt` command-line tool.
//!
//! Each `cmd_*` function is a pure function of its config and input
//! files: reruns produce byte-identical outputs regardless of the number
//! of worker threads.

pub mod commands;
pub mod config;
pub mod svg;
pub mod table;

pub use commands::{
    cmd_compare, cmd_cvt, cmd_nonconvex, cmd_refine, cmd_render, cmd_verify, validate_partition, Outcome, Strategy,
};
pub use config::RunConfig;
pub use svg::RenderOptions;

/// Exit code for a run whose checks failed.
pub const EXIT_VERIFICATION_FAILED: i32 = 2;
/// Exit code for usage, config and I/O errors.
pub const EXIT_ERROR: i32 = 1;
