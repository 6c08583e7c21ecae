//! Typed annotation model and its mapping to and from RDF graphs.
//!
//! An [`Annotation`] carries at most one body and one or more targets. Bodies
//! are remote resources, inline content identified by a `urn:uuid:`, or
//! constrained segments of a remote resource. Targets are either direct
//! (possibly fragment) URIs or constrained segments.

mod graph;

use std::collections::BTreeSet;

use base64::Engine as _;
use chrono::{DateTime, SecondsFormat, SubsecRound, Utc};
use thiserror::Error;

use crate::constraints::{Constraint, ConstraintError, ConstraintKind};
use crate::rdf::{Graph, Iri, Literal, RdfError};
use crate::validation::Finding;
use crate::vocab;

pub(crate) use graph::{emit_inline, read_inline};
pub use graph::{from_graph, to_graph};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("cardinality: {0}")]
    Cardinality(String),
    #[error("{0} is not typed oac:Annotation")]
    NotAnAnnotation(Iri),
    #[error("annotation violates the model: {}", codes(.0))]
    ModelViolation(Vec<Finding>),
    #[error("body is not identified by a URN")]
    NoUrnBody,
    #[error("invalid inline content: {0}")]
    InvalidInline(String),
    #[error("oac:when on the annotation conflicts with WebTime constraints on its body or targets")]
    TemporalConflict,
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Constraint(#[from] ConstraintError),
    #[error(transparent)]
    Rdf(#[from] RdfError),
}

fn codes(findings: &[Finding]) -> String {
    findings
        .iter()
        .map(|f| f.code.as_str())
        .collect::<Vec<_>>()
        .join(", ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ContentKind {
    Text,
    Base64,
    Xml,
}

impl ContentKind {
    pub fn class(self) -> Iri {
        match self {
            ContentKind::Text => vocab::cnt::content_as_text(),
            ContentKind::Base64 => vocab::cnt::content_as_base64(),
            ContentKind::Xml => vocab::cnt::content_as_xml(),
        }
    }

    pub fn from_class(class: &Iri) -> Option<Self> {
        [ContentKind::Text, ContentKind::Base64, ContentKind::Xml]
            .into_iter()
            .find(|k| k.class() == *class)
    }
}

/// A resource representation carried inside the graph via `cnt:chars`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InlineContent {
    pub chars: String,
    /// Empty when the graph did not state an encoding.
    pub character_encoding: String,
    pub kind: ContentKind,
}

impl InlineContent {
    pub fn new(
        chars: impl Into<String>,
        character_encoding: impl Into<String>,
        kind: ContentKind,
    ) -> Result<Self, ModelError> {
        let content = InlineContent {
            chars: chars.into(),
            character_encoding: character_encoding.into(),
            kind,
        };
        content.check()?;
        Ok(content)
    }

    pub fn text(chars: impl Into<String>, character_encoding: impl Into<String>) -> Self {
        InlineContent {
            chars: chars.into(),
            character_encoding: character_encoding.into(),
            kind: ContentKind::Text,
        }
    }

    pub fn check(&self) -> Result<(), ModelError> {
        if self.kind == ContentKind::Base64 {
            let compact: String = self.chars.split_ascii_whitespace().collect();
            base64::engine::general_purpose::STANDARD
                .decode(compact)
                .map_err(|e| ModelError::InvalidInline(format!("not valid base64: {e}")))?;
        }
        Ok(())
    }
}

/// A segment of `constrains` described by `constraint`, identified by `uri`.
/// Used for constrained targets and, symmetrically, constrained bodies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstrainedTarget {
    pub uri: Iri,
    pub constrains: Iri,
    pub constraint: Constraint,
}

impl ConstrainedTarget {
    pub fn new(uri: Iri, constrains: Iri, constraint: Constraint) -> Result<Self, ModelError> {
        if uri == constrains {
            return Err(ModelError::Invalid(format!(
                "constrained resource {uri} cannot constrain itself"
            )));
        }
        Ok(ConstrainedTarget {
            uri,
            constrains,
            constraint,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BodyKind {
    Remote(Iri),
    Inline { urn: Iri, content: InlineContent },
    Constrained(ConstrainedTarget),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BodyRef {
    pub kind: BodyKind,
    /// HTTP URI declared equivalent (`owl:sameAs`) to a URN-identified body.
    pub equivalent_http: Option<Iri>,
}

impl BodyRef {
    pub fn remote(uri: Iri) -> Self {
        BodyRef {
            kind: BodyKind::Remote(uri),
            equivalent_http: None,
        }
    }

    pub fn inline(urn: Iri, content: InlineContent) -> Result<Self, ModelError> {
        if !urn.is_urn_uuid() {
            return Err(ModelError::InvalidInline(format!(
                "inline body must be identified by urn:uuid, got {urn}"
            )));
        }
        content.check()?;
        Ok(BodyRef {
            kind: BodyKind::Inline { urn, content },
            equivalent_http: None,
        })
    }

    pub fn constrained(ct: ConstrainedTarget) -> Self {
        BodyRef {
            kind: BodyKind::Constrained(ct),
            equivalent_http: None,
        }
    }

    /// The graph node standing for the body.
    pub fn node(&self) -> &Iri {
        match &self.kind {
            BodyKind::Remote(uri) => uri,
            BodyKind::Inline { urn, .. } => urn,
            BodyKind::Constrained(ct) => &ct.uri,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TargetKind {
    Direct(Iri),
    Constrained(ConstrainedTarget),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetRef {
    pub kind: TargetKind,
    pub is_part_of: Option<Iri>,
}

impl TargetRef {
    pub fn direct(uri: Iri) -> Self {
        TargetRef {
            kind: TargetKind::Direct(uri),
            is_part_of: None,
        }
    }

    /// Direct target that records the full resource via `dcterms:isPartOf`
    /// when the URI carries a fragment.
    pub fn direct_with_part_of(uri: Iri) -> Self {
        let is_part_of = uri.fragment().filter(|f| !f.is_empty()).map(|_| uri.defragment());
        TargetRef {
            kind: TargetKind::Direct(uri),
            is_part_of,
        }
    }

    pub fn constrained(ct: ConstrainedTarget) -> Self {
        TargetRef {
            kind: TargetKind::Constrained(ct),
            is_part_of: None,
        }
    }

    pub fn node(&self) -> &Iri {
        match &self.kind {
            TargetKind::Direct(uri) => uri,
            TargetKind::Constrained(ct) => &ct.uri,
        }
    }

    /// The full resource this target addresses, without fragment.
    pub fn full_resource(&self) -> Iri {
        match &self.kind {
            TargetKind::Direct(uri) => uri.defragment(),
            TargetKind::Constrained(ct) => ct.constrains.defragment(),
        }
    }
}

/// Optional provenance and temporal fields of an annotation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Provenance {
    pub created: Option<DateTime<Utc>>,
    pub creator: Option<Iri>,
    pub title: Option<String>,
    pub when: Option<DateTime<Utc>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Annotation {
    pub uri: Iri,
    pub body: Option<BodyRef>,
    /// Kept sorted by target node; multiple targets carry no grouping semantics.
    pub targets: Vec<TargetRef>,
    pub created: Option<DateTime<Utc>>,
    pub creator: Option<Iri>,
    pub title: Option<String>,
    /// Uniform-time mark.
    pub when: Option<DateTime<Utc>>,
    pub types: BTreeSet<Iri>,
    /// Pass-through triples about nodes reachable from the annotation.
    pub extra: Graph,
}

impl Annotation {
    pub fn is_reply(&self) -> bool {
        self.types.contains(&vocab::oac::reply())
    }

    /// Checks the model invariants that construction enforces.
    pub fn check(&self) -> Result<(), ModelError> {
        if self.targets.is_empty() {
            return Err(ModelError::Cardinality(
                "an annotation needs one or more targets".into(),
            ));
        }
        let mut nodes = BTreeSet::new();
        for target in &self.targets {
            if !nodes.insert(target.node()) {
                return Err(ModelError::Cardinality(format!(
                    "target {} listed twice",
                    target.node()
                )));
            }
        }
        if !self.types.contains(&vocab::oac::annotation()) {
            return Err(ModelError::Invalid("types must include oac:Annotation".into()));
        }
        if let Some(body) = &self.body {
            if let BodyKind::Inline { urn, content } = &body.kind {
                if !urn.is_urn_uuid() {
                    return Err(ModelError::InvalidInline(format!(
                        "inline body must be identified by urn:uuid, got {urn}"
                    )));
                }
                content.check()?;
            }
            if let Some(http) = &body.equivalent_http {
                if !http.is_http() {
                    return Err(ModelError::Invalid(format!(
                        "equivalent body URI {http} is not http(s)"
                    )));
                }
            }
        }
        for ct in self.constrained_resources() {
            if ct.uri == ct.constrains {
                return Err(ModelError::Invalid(format!(
                    "constrained resource {} cannot constrain itself",
                    ct.uri
                )));
            }
            ct.constraint.check()?;
        }
        if self.when.is_some() && self.has_web_time_constraints() {
            return Err(ModelError::TemporalConflict);
        }
        Ok(())
    }

    pub(crate) fn constrained_resources(&self) -> impl Iterator<Item = &ConstrainedTarget> {
        let body = self.body.as_ref().and_then(|b| match &b.kind {
            BodyKind::Constrained(ct) => Some(ct),
            _ => None,
        });
        let targets = self.targets.iter().filter_map(|t| match &t.kind {
            TargetKind::Constrained(ct) => Some(ct),
            TargetKind::Direct(_) => None,
        });
        body.into_iter().chain(targets)
    }

    fn has_web_time_constraints(&self) -> bool {
        self.constrained_resources()
            .any(|ct| ct.constraint.kind == ConstraintKind::WebTime)
    }
}

/// Build a checked annotation with a single optional body.
pub fn build_annotation(
    uri: Iri,
    body: Option<BodyRef>,
    targets: Vec<TargetRef>,
    meta: Provenance,
) -> Result<Annotation, ModelError> {
    let mut builder = AnnotationBuilder::new(uri).provenance(meta);
    if let Some(body) = body {
        builder = builder.body(body);
    }
    targets
        .into_iter()
        .fold(builder, AnnotationBuilder::target)
        .build()
}

/// Incremental construction; cardinality is checked in [`AnnotationBuilder::build`].
#[derive(Debug, Clone)]
pub struct AnnotationBuilder {
    uri: Iri,
    bodies: Vec<BodyRef>,
    targets: Vec<TargetRef>,
    meta: Provenance,
    types: BTreeSet<Iri>,
    extra: Graph,
}

impl AnnotationBuilder {
    pub fn new(uri: Iri) -> Self {
        AnnotationBuilder {
            uri,
            bodies: Vec::new(),
            targets: Vec::new(),
            meta: Provenance::default(),
            types: BTreeSet::from([vocab::oac::annotation()]),
            extra: Graph::new(),
        }
    }

    pub fn body(mut self, body: BodyRef) -> Self {
        self.bodies.push(body);
        self
    }

    pub fn target(mut self, target: TargetRef) -> Self {
        self.targets.push(target);
        self
    }

    pub fn provenance(mut self, meta: Provenance) -> Self {
        self.meta = meta;
        self
    }

    pub fn created(mut self, at: DateTime<Utc>) -> Self {
        self.meta.created = Some(at);
        self
    }

    pub fn creator(mut self, agent: Iri) -> Self {
        self.meta.creator = Some(agent);
        self
    }

    pub fn title(mut self, title: impl Into<String>) -> Self {
        self.meta.title = Some(title.into());
        self
    }

    pub fn when(mut self, at: DateTime<Utc>) -> Self {
        self.meta.when = Some(at);
        self
    }

    pub fn with_type(mut self, class: Iri) -> Self {
        self.types.insert(class);
        self
    }

    pub fn extra(mut self, graph: Graph) -> Self {
        self.extra.extend(graph);
        self
    }

    pub fn build(self) -> Result<Annotation, ModelError> {
        if self.bodies.len() > 1 {
            return Err(ModelError::Cardinality(format!(
                "at most one body per annotation, got {}",
                self.bodies.len()
            )));
        }
        let mut targets = self.targets;
        targets.sort_by(|a, b| a.node().cmp(b.node()));
        let annotation = Annotation {
            uri: self.uri,
            body: self.bodies.into_iter().next(),
            targets,
            created: self.meta.created.map(to_seconds),
            creator: self.meta.creator,
            title: self.meta.title,
            when: self.meta.when.map(to_seconds),
            types: self.types,
            extra: self.extra,
        };
        annotation.check()?;
        Ok(annotation)
    }
}

/// Give a URN-identified body an HTTP URI under `base`. A second call is a
/// no-op.
pub fn assign_http_equivalence(a: &Annotation, base: &Iri) -> Result<Annotation, ModelError> {
    let body = a.body.as_ref().ok_or(ModelError::NoUrnBody)?;
    if body.equivalent_http.is_some() {
        return Ok(a.clone());
    }
    let urn = match &body.kind {
        BodyKind::Inline { urn, .. } => urn,
        BodyKind::Remote(uri) if uri.is_urn() => uri,
        _ => return Err(ModelError::NoUrnBody),
    };
    let mut out = a.clone();
    out.body.as_mut().expect("checked above").equivalent_http = Some(mint_under(base, urn)?);
    Ok(out)
}

/// `base` joined with a path segment derived from a URN.
pub fn mint_under(base: &Iri, urn: &Iri) -> Result<Iri, ModelError> {
    let id = if urn.is_urn_uuid() {
        urn.as_str()[9..].to_ascii_lowercase()
    } else {
        urn.as_str()[4..]
            .chars()
            .map(|c| {
                if c.is_ascii_alphanumeric() || matches!(c, '-' | '.' | '_' | '~') {
                    c
                } else {
                    '-'
                }
            })
            .collect()
    };
    let sep = if base.as_str().ends_with('/') { "" } else { "/" };
    Ok(Iri::new(format!("{base}{sep}{id}"))?)
}

/// A reply: an annotation whose single target is `parent`.
pub fn make_reply(parent: &Annotation, body: BodyRef, uri: Iri) -> Result<Annotation, ModelError> {
    AnnotationBuilder::new(uri)
        .with_type(vocab::oac::reply())
        .body(body)
        .target(TargetRef::direct(parent.uri.clone()))
        .build()
}

pub(crate) fn to_seconds(dt: DateTime<Utc>) -> DateTime<Utc> {
    dt.trunc_subsecs(0)
}

/// `xsd:dateTime` literal in UTC with a `Z` suffix, second precision.
pub fn datetime_literal(dt: &DateTime<Utc>) -> Literal {
    Literal::typed(format_datetime(dt), vocab::xsd::date_time())
}

pub fn format_datetime(dt: &DateTime<Utc>) -> String {
    dt.to_rfc3339_opts(SecondsFormat::Secs, true)
}

/// Parse an ISO-8601 datetime with offset, normalised to UTC seconds.
pub fn parse_datetime(text: &str) -> Option<DateTime<Utc>> {
    DateTime::parse_from_rfc3339(text.trim())
        .ok()
        .map(|dt| to_seconds(dt.with_timezone(&Utc)))
}
