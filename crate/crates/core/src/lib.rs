//! Routing primitives for inter-domain quantum networks built on graph states.
//!
//! The crate models the combinatorial side of multipartite entanglement
//! complementation (MEC): an entanglement graph split into QNets, a control
//! layer whose Pauli-X measurement turns the inter-domain graph into its
//! complement, and a scheduler that groups remote requests into sets that can
//! be served in the same cycle. A small stabilizer-tableau simulator is
//! included to check the graph rewrite rules at the state level.
//!
//! Everything here is `no_std` + `alloc`; file formats, dataset ingestion and
//! the experiment runner live in the `mecnet` crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod bitset;
pub mod cqr;
pub mod error;
pub mod graph;
pub mod metrics;
pub mod netgen;
pub mod pairs;
pub mod qnet;
pub mod stabilizer;

pub use bitset::BitSet;
pub use error::Error;
pub use graph::{Basis, Byproduct, Edge, Graph, MeasurementRecord, Vertex};
pub use qnet::{ControlledInterQNet, InterQNet, K0Policy, QNetPartition};

pub type Result<T> = core::result::Result<T, Error>;
