//! Reference annotations shared by the golden, temporal and acceptance tests.
#![allow(dead_code)]

use chrono::{DateTime, TimeZone, Utc};
use oac_core::constraints::{make_constrained_target, Constraint};
use oac_core::model::{AnnotationBuilder, TargetRef};
use oac_core::rdf::{Graph, Iri, Literal, Triple};
use oac_core::vocab::{dcterms, foaf};
use oac_core::{Annotation, BodyRef, InlineContent, UrnMinter};

pub fn iri(s: &str) -> Iri {
    Iri::new(s).unwrap()
}

pub fn utc(y: i32, mo: u32, d: u32, h: u32, mi: u32, s: u32) -> DateTime<Utc> {
    Utc.with_ymd_and_hms(y, mo, d, h, mi, s).unwrap()
}

pub const VIDEO: &str = "http://example.org/videos/hubble-anniversary.mp4";
pub const IMAGE: &str = "http://example.org/images/hubble-deep-field.jpg";
pub const BERGEN: &str = "http://example.org/images/bergen-cathedral.jpg";
pub const TWEET: &str = "http://twitter.com/alice/status/42";
pub const CNN: &str = "http://cnn.com/";
pub const CARTOON: &str = "http://example.org/cartoon";
pub const ALICE: &str = "http://example.org/users/alice";

/// Body, target and the annotation node; nothing else.
pub fn baseline() -> Annotation {
    AnnotationBuilder::new(iri("http://example.org/annotations/A-1"))
        .body(BodyRef::remote(iri(VIDEO)))
        .target(TargetRef::direct(iri(IMAGE)))
        .build()
        .unwrap()
}

/// Baseline plus provenance on the annotation and third-party authorship of
/// body and target.
pub fn extended_properties() -> Annotation {
    let extra: Graph = [
        Triple::new(iri(ALICE), foaf::name(), Literal::plain("Alice")),
        Triple::new(
            iri(VIDEO),
            dcterms::creator(),
            iri("http://example.org/users/bob"),
        ),
        Triple::new(
            iri(IMAGE),
            dcterms::creator(),
            iri("http://example.org/users/carol"),
        ),
        Triple::new(
            iri(IMAGE),
            dcterms::created(),
            Literal::typed("2004-03-09T00:00:00Z", oac_core::vocab::xsd::date_time()),
        ),
    ]
    .into_iter()
    .collect();
    AnnotationBuilder::new(iri("http://example.org/annotations/A-2"))
        .body(BodyRef::remote(iri(VIDEO)))
        .target(TargetRef::direct(iri(IMAGE)))
        .created(utc(2011, 3, 10, 15, 21, 0))
        .creator(iri(ALICE))
        .title("The Hubble telescope explained")
        .extra(extra)
        .build()
        .unwrap()
}

pub fn inline_body() -> Annotation {
    let mut minter = UrnMinter::seeded(6);
    let body = BodyRef::inline(minter.mint(), InlineContent::text("I like this image!", "utf-8")).unwrap();
    AnnotationBuilder::new(iri("http://example.org/annotations/A-3"))
        .body(body)
        .target(TargetRef::direct(iri(BERGEN)))
        .created(utc(2011, 3, 10, 16, 0, 0))
        .creator(iri(ALICE))
        .build()
        .unwrap()
}

/// Tweet about a non-rectangular image region described by a published SVG
/// document.
pub fn constrained_target() -> Annotation {
    let mut minter = UrnMinter::seeded(8);
    let constraint = Constraint::svg_remote(iri("http://example.org/constraints/cathedral.svg"));
    let ct = make_constrained_target(iri(BERGEN), constraint, &mut minter).unwrap();
    AnnotationBuilder::new(iri("http://example.org/annotations/A-4"))
        .body(BodyRef::remote(iri(TWEET)))
        .target(TargetRef::constrained(ct))
        .created(utc(2011, 3, 11, 9, 30, 0))
        .creator(iri(ALICE))
        .build()
        .unwrap()
}

/// Tweet commenting on the live CNN home page at one moment.
pub fn uniform_time() -> Annotation {
    AnnotationBuilder::new(iri("http://example.org/annotations/A-5"))
        .body(BodyRef::remote(iri(TWEET)))
        .target(TargetRef::direct(iri(CNN)))
        .created(utc(2011, 3, 12, 12, 0, 0))
        .creator(iri(ALICE))
        .when(utc(2011, 3, 12, 11, 45, 0))
        .build()
        .unwrap()
}

/// "This is the front page of CNN": holds whatever CNN looks like.
pub fn timeless() -> Annotation {
    let mut minter = UrnMinter::seeded(10);
    let body = BodyRef::inline(
        minter.mint(),
        InlineContent::text("This is the front page of CNN", "utf-8"),
    )
    .unwrap();
    AnnotationBuilder::new(iri("http://example.org/annotations/A-6"))
        .body(body)
        .target(TargetRef::direct(iri(CNN)))
        .created(utc(2011, 3, 12, 12, 0, 0))
        .creator(iri(ALICE))
        .build()
        .unwrap()
}

/// Cartoon published after the mocked story left the CNN home page; body and
/// target are pinned to different moments.
pub fn varied_time() -> Annotation {
    let mut minter = UrnMinter::seeded(11);
    let body_time = Constraint::web_time(minter.mint(), utc(2011, 3, 14, 8, 0, 0));
    let target_time = Constraint::web_time(minter.mint(), utc(2011, 3, 12, 11, 45, 0));
    let body = make_constrained_target(iri(CARTOON), body_time, &mut minter).unwrap();
    let target = make_constrained_target(iri(CNN), target_time, &mut minter).unwrap();
    AnnotationBuilder::new(iri("http://example.org/annotations/A-7"))
        .body(BodyRef::constrained(body))
        .target(TargetRef::constrained(target))
        .created(utc(2011, 3, 14, 9, 0, 0))
        .creator(iri(ALICE))
        .build()
        .unwrap()
}

/// The five reference graphs with their golden file stems.
pub fn golden_patterns() -> Vec<(&'static str, Annotation)> {
    vec![
        ("baseline", baseline()),
        ("extended_properties", extended_properties()),
        ("inline_body", inline_body()),
        ("constrained_target", constrained_target()),
        ("uniform_time", uniform_time()),
    ]
}
