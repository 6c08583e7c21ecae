//! Constraint resources describing segments that fragment URIs cannot
//! express: SVG regions, per-role time marks, and opaque constraint payloads.

mod svg;

use chrono::{DateTime, Utc};
use thiserror::Error;

use crate::fragments::{SpatialSelector, SpatialUnit};
use crate::model::{
    datetime_literal, parse_datetime, ConstrainedTarget, ContentKind, InlineContent, ModelError,
};
use crate::rdf::{Graph, Iri, Literal, Subject, Term, Triple};
use crate::urn::UrnMinter;
use crate::vocab::{dc, dcterms, oac, rdf};

pub use svg::{parse_svg_constraint, PathCommand, SvgRegion, SvgShape};

pub const SVG_MEDIA_TYPE: &str = "image/svg+xml";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstraintError {
    #[error("invalid constraint: {0}")]
    Invalid(String),
    #[error("unsupported SVG: {0}")]
    UnsupportedSvg(String),
    #[error("malformed SVG: {0}")]
    MalformedSvg(String),
    #[error("percent regions cannot be converted without the image dimensions")]
    PercentNotConvertible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstraintKind {
    Svg,
    WebTime,
    Generic,
}

impl ConstraintKind {
    pub fn class(self) -> Iri {
        match self {
            ConstraintKind::Svg => oac::svg_constraint(),
            ConstraintKind::WebTime => oac::web_time_constraint(),
            ConstraintKind::Generic => oac::constraint(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstraintPayload {
    /// A dereferenceable document; usually the constraint's own URI.
    Remote(Iri),
    Inline(InlineContent),
    /// Time constraints carry no payload.
    None,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub uri: Iri,
    pub kind: ConstraintKind,
    pub format: Option<String>,
    pub payload: ConstraintPayload,
    pub when: Option<DateTime<Utc>>,
}

impl Constraint {
    pub fn new(
        uri: Iri,
        kind: ConstraintKind,
        format: Option<String>,
        payload: ConstraintPayload,
        when: Option<DateTime<Utc>>,
    ) -> Result<Self, ConstraintError> {
        let c = Constraint {
            uri,
            kind,
            format,
            payload,
            when: when.map(crate::model::to_seconds),
        };
        c.check()?;
        Ok(c)
    }

    /// SVG document published at `uri`.
    pub fn svg_remote(uri: Iri) -> Self {
        Constraint {
            payload: ConstraintPayload::Remote(uri.clone()),
            uri,
            kind: ConstraintKind::Svg,
            format: Some(SVG_MEDIA_TYPE.into()),
            when: None,
        }
    }

    pub fn web_time(uri: Iri, when: DateTime<Utc>) -> Self {
        Constraint {
            uri,
            kind: ConstraintKind::WebTime,
            format: None,
            payload: ConstraintPayload::None,
            when: Some(crate::model::to_seconds(when)),
        }
    }

    pub fn check(&self) -> Result<(), ConstraintError> {
        let invalid = |m: &str| Err(ConstraintError::Invalid(format!("{}: {m}", self.uri)));
        match self.kind {
            ConstraintKind::Svg => {
                if self.format.as_deref() != Some(SVG_MEDIA_TYPE) {
                    return invalid("SVG constraints must declare format image/svg+xml");
                }
                if self.payload == ConstraintPayload::None {
                    return invalid("SVG constraints need a payload");
                }
            }
            ConstraintKind::WebTime => {
                if self.when.is_none() {
                    return invalid("time constraints need oac:when");
                }
                if self.payload != ConstraintPayload::None {
                    return invalid("time constraints carry no payload");
                }
            }
            ConstraintKind::Generic => {
                if self.payload == ConstraintPayload::None {
                    return invalid("constraints other than time constraints need a payload");
                }
            }
        }
        if self.kind != ConstraintKind::WebTime && self.when.is_some() {
            return invalid("only time constraints carry oac:when");
        }
        if let ConstraintPayload::Inline(content) = &self.payload {
            content
                .check()
                .map_err(|e| ConstraintError::Invalid(e.to_string()))?;
        }
        Ok(())
    }

    /// Graph form of the constraint node.
    pub fn triples(&self) -> Vec<Triple> {
        let mut g = Graph::new();
        let node = self.uri.clone();
        g.add(node.clone(), rdf::type_(), self.kind.class());
        if let Some(format) = &self.format {
            g.add(node.clone(), dc::format(), Literal::plain(format.clone()));
        }
        match &self.payload {
            ConstraintPayload::Inline(content) => crate::model::emit_inline(&mut g, &node, content),
            ConstraintPayload::Remote(doc) if *doc != self.uri => {
                g.add(node.clone(), dcterms::source(), doc.clone())
            }
            ConstraintPayload::Remote(_) | ConstraintPayload::None => {}
        }
        if let Some(when) = &self.when {
            g.add(node, oac::when(), datetime_literal(when));
        }
        g.into_iter().collect()
    }

    /// Read the constraint at `node`, returning the triples it was built from.
    pub fn from_graph(g: &Graph, node: &Iri) -> Result<(Constraint, Vec<Triple>), ModelError> {
        let s = Subject::Iri(node.clone());
        let mut used = Vec::new();
        let typed = |class: Iri| g.has_type(&s, &class);
        let kind = if typed(oac::svg_constraint()) {
            ConstraintKind::Svg
        } else if typed(oac::web_time_constraint()) {
            ConstraintKind::WebTime
        } else {
            ConstraintKind::Generic
        };
        if typed(kind.class()) {
            used.push(Triple::new(s.clone(), rdf::type_(), kind.class()));
        }
        let format = g.objects(&s, &dc::format()).find_map(Term::as_literal).cloned();
        if let Some(f) = &format {
            used.push(Triple::new(s.clone(), dc::format(), f.clone()));
        }
        let payload = if g.objects(&s, &crate::vocab::cnt::chars()).next().is_some() {
            let (content, triples) = crate::model::read_inline(g, node)?;
            used.extend(triples);
            ConstraintPayload::Inline(content)
        } else if let Some(doc) = g.objects(&s, &dcterms::source()).find_map(Term::as_iri) {
            used.push(Triple::new(s.clone(), dcterms::source(), doc.clone()));
            ConstraintPayload::Remote(doc.clone())
        } else if kind == ConstraintKind::WebTime {
            ConstraintPayload::None
        } else {
            ConstraintPayload::Remote(node.clone())
        };
        let when = g
            .objects(&s, &oac::when())
            .filter_map(Term::as_literal)
            .find_map(|l| parse_datetime(l.lexical()).map(|dt| (l.clone(), dt)));
        if let Some((lit, dt)) = &when {
            if datetime_literal(dt) == *lit {
                used.push(Triple::new(s.clone(), oac::when(), lit.clone()));
            }
        }
        let constraint = Constraint::new(
            node.clone(),
            kind,
            format.map(|l| l.lexical().to_string()),
            payload,
            when.map(|(_, dt)| dt),
        )?;
        Ok((constraint, used))
    }

    /// The SVG region of an inline SVG payload. Remote payloads are not
    /// fetched.
    pub fn inline_svg_region(&self) -> Option<Result<SvgRegion, ConstraintError>> {
        match (&self.kind, &self.payload) {
            (ConstraintKind::Svg, ConstraintPayload::Inline(content)) => {
                Some(parse_svg_constraint(&content.chars))
            }
            _ => None,
        }
    }
}

/// Mint a constrained resource for the segment of `full` described by
/// `constraint`. Serves targets and bodies alike.
pub fn make_constrained_target(
    full: Iri,
    constraint: Constraint,
    minter: &mut UrnMinter,
) -> Result<ConstrainedTarget, ModelError> {
    constraint.check()?;
    ConstrainedTarget::new(minter.mint(), full, constraint)
}

/// Inline SVG rectangle constraint with the geometry of a pixel region.
pub fn fragment_to_constraint(
    s: &SpatialSelector,
    minter: &mut UrnMinter,
) -> Result<Constraint, ConstraintError> {
    if s.unit == SpatialUnit::Percent {
        return Err(ConstraintError::PercentNotConvertible);
    }
    let region = SvgRegion::new(SvgShape::Rect {
        x: s.x,
        y: s.y,
        width: s.w,
        height: s.h,
    })?;
    Ok(Constraint {
        uri: minter.mint(),
        kind: ConstraintKind::Svg,
        format: Some(SVG_MEDIA_TYPE.into()),
        payload: ConstraintPayload::Inline(InlineContent {
            chars: region.to_svg(),
            character_encoding: "utf-8".into(),
            kind: ContentKind::Xml,
        }),
        when: None,
    })
}

/// Constraint whose description is carried inline under a fresh URN.
/// Payloads that parse as SVG become SVG constraints.
pub fn inline_constraint(content: InlineContent, minter: &mut UrnMinter) -> Constraint {
    let is_svg = !content.chars.trim().is_empty()
        && roxmltree::Document::parse(&content.chars)
            .map(|doc| doc.root_element().tag_name().name() == "svg")
            .unwrap_or(false);
    let (kind, format) = if is_svg {
        (ConstraintKind::Svg, Some(SVG_MEDIA_TYPE.to_string()))
    } else {
        (ConstraintKind::Generic, None)
    };
    Constraint {
        uri: minter.mint(),
        kind,
        format,
        payload: ConstraintPayload::Inline(content),
        when: None,
    }
}
