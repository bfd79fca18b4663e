//! File formats: polygon JSON documents, signature CSV tables, SVG
//! snapshots and experiment configuration.

pub mod config;
pub mod document;
pub mod signature_csv;
pub mod svg;

pub use config::ExperimentConfig;
pub use document::PolygonDocument;
pub use signature_csv::{format_signature_table, read_signature_csv, write_signature_csv};
pub use svg::svg_snapshot;
