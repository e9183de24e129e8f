//! Semantic sensor-data encodings and their transmission cost.
//!
//! This crate implements the two ways of shipping a sensor observation as a
//! self-describing document — the SSW form (RDFa annotations layered on a
//! standard O&M record) and the ES3N form (explicit ontology individuals) —
//! together with the machinery to show that they carry the same information
//! while costing very different amounts to transmit:
//!
//! - [`observation`]: the reading model shared by everything else;
//! - [`ssw`] / [`es3n`]: the codecs, byte-deterministic in both directions;
//! - [`triple`]: RDF triples, canonicalization, and the projection under
//!   which the two encodings are equivalent;
//! - [`netsim`]: a deterministic multi-hop sensor-network simulation that
//!   charges radio energy for every transmitted byte;
//! - [`report`]: sweeps over network sizes and the CSV/plot outputs;
//! - [`scenario`]: the reading-file and scenario-file formats used by the
//!   `semsensor` command-line tool.
//!
//! The accompanying guide in `book/` walks through the concepts; its code
//! samples are compiled and run as part of `cargo test`.

pub mod cli;
pub mod codec;
pub mod es3n;
pub mod netsim;
pub mod observation;
pub mod report;
pub mod scenario;
pub mod ssw;
pub mod triple;
pub mod xml;

pub use codec::{measure, CodecOptions, EncodedPayload, Encoding};
pub use observation::{
    atmospheric_record, canonical_f64, default_reading, DataRecord, PhenomenonDefinition,
    QuantityObservation, SensorReading, TimeInstant, UomIdentifier, Violation,
};
pub use triple::{equivalent, project, SemanticProjection, Term, Triple, TripleSet};

#[cfg(doctest)]
mod book;
