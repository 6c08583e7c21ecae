//! Open Annotation toolkit core.
//!
//! Annotations associate at most one body with one or more targets. This crate
//! holds the RDF substrate they are expressed in, the typed annotation model
//! and its graph mapping, media-fragment and constraint addressing of
//! segments, temporal classification and archive-based reconstruction, and a
//! validator that reports coded findings.

pub mod constraints;
pub mod fragments;
pub mod model;
pub mod rdf;
pub mod temporal;
pub mod urn;
pub mod validation;
pub mod vocab;

pub use constraints::{Constraint, ConstraintKind, ConstraintPayload, SvgRegion, SvgShape};
pub use fragments::{FragmentSelector, FragmentUri};
pub use model::{Annotation, BodyRef, ConstrainedTarget, InlineContent, TargetRef};
pub use rdf::{Graph, Iri, Literal, Subject, Term, Triple};
pub use temporal::{ArchiveIndex, Memento, Role, TemporalClass};
pub use urn::UrnMinter;
pub use validation::{Finding, Severity, ValidationReport};
