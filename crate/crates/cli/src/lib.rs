//! Library side of the `noonsim` command-line tool: configuration parsing,
//! sweep execution, figure presets, CSV and SVG emission. The binary in
//! `main.rs` is a thin shell over these modules so integration tests can
//! drive them directly.

pub mod config;
pub mod csvout;
pub mod figures;
pub mod plot;
pub mod sweep;
