//! File formats, dataset ingestion, timeline simulation, oracle suites and
//! the experiment runner built on [`mecnet_core`].

pub mod error;
pub mod experiment;
pub mod format;
pub mod openflights;
pub mod svg;
pub mod timeline;
pub mod verify;

pub use error::{Error, Result};
