//! Machine-interpretable GDPR rights management.
//!
//! Rights requests, justifications, notices and exercise records are all
//! represented as RDF graphs using DPV-aligned terms. The crate is split into:
//!
//! - [`graph`]: a small RDF data model with a Turtle subset parser/serializer.
//! - [`vocab`]: the rights, legal bases, applicability table and justification
//!   taxonomy, loaded from a Turtle seed file.
//! - [`lifecycle`]: the rights-request state machine with deadline, extension
//!   and breach tracking.
//! - [`notices`]: typed notices and their validation.
//! - [`records`]: right-exercise records as ordered catalogs of activities.
//! - [`policy`]: rights requests as deontic policies and their evaluator.

pub mod graph;
pub mod lifecycle;
pub mod notices;
pub mod ns;
pub mod policy;
pub mod records;
pub mod vocab;

mod datetime;
mod mint;

pub use datetime::{format_timestamp, parse_timestamp};
pub use mint::mint_iri;

/// UTC timestamp used throughout the engine.
pub type Timestamp = chrono::DateTime<chrono::Utc>;

/// A graph that does not have the structure an importer expects.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("shape violation: {0}")]
pub struct ShapeViolation(pub String);
