//! Deterministic workloads for the benchmarks.

use std::collections::BTreeMap;

use chrono::{Duration, TimeZone, Utc};
use oac_core::model::{to_graph, AnnotationBuilder, TargetRef};
use oac_core::rdf::{Graph, Iri};
use oac_core::{ArchiveIndex, BodyRef, InlineContent, Memento, UrnMinter};

fn iri(s: &str) -> Iri {
    Iri::new(s).expect("absolute IRI")
}

/// Fragment URIs cycling through the media, text and PDF grammars.
pub fn fragment_uris(n: usize) -> Vec<(Iri, Option<&'static str>)> {
    (0..n)
        .map(|i| match i % 5 {
            0 => (
                iri(&format!(
                    "http://media.example/{i}.png#xywh={},{},320,240",
                    i % 640,
                    i % 480
                )),
                None,
            ),
            1 => (
                iri(&format!(
                    "http://media.example/{i}.mp4#t=npt:{},{}.5",
                    i % 60,
                    i % 60 + 10
                )),
                None,
            ),
            2 => (
                iri(&format!(
                    "http://media.example/{i}.pdf#page={}&viewrect=20,100,50,60",
                    i % 90 + 1
                )),
                None,
            ),
            3 => (
                iri(&format!(
                    "http://media.example/{i}.txt#line={},{}",
                    i % 100,
                    i % 100 + 5
                )),
                Some("text/plain"),
            ),
            _ => (
                iri(&format!(
                    "http://media.example/{i}.mp4#t={}&xywh=percent:10,10,50,50",
                    i % 30
                )),
                None,
            ),
        })
        .collect()
}

/// `n` annotations with inline bodies and fragment targets, as one graph.
pub fn annotation_graph(n: usize) -> Graph {
    let mut minter = UrnMinter::seeded(42);
    let created = Utc.with_ymd_and_hms(2011, 3, 12, 11, 45, 0).unwrap();
    let mut g = Graph::new();
    for i in 0..n {
        let body = BodyRef::inline(minter.mint(), InlineContent::text(format!("note {i}"), "utf-8"))
            .expect("valid inline body");
        let a = AnnotationBuilder::new(iri(&format!("http://example.org/annotations/{i}")))
            .body(body)
            .target(TargetRef::direct_with_part_of(iri(&format!(
                "http://media.example/{}.png#xywh={},0,10,10",
                i % 7,
                i
            ))))
            .created(created + Duration::minutes(i as i64))
            .creator(iri("http://example.org/users/alice"))
            .build()
            .expect("valid annotation");
        g.extend(to_graph(&a).iter().cloned());
    }
    g
}

/// One original with `n` mementos an hour apart.
pub fn archive(n: usize) -> (ArchiveIndex, Iri) {
    let original = iri("http://cnn.com/");
    let start = Utc.with_ymd_and_hms(2011, 1, 1, 0, 0, 0).unwrap();
    let mementos = (0..n)
        .map(|i| Memento {
            datetime: start + Duration::hours(i as i64),
            snapshot: iri(&format!("http://archive.example/{i}/http://cnn.com/")),
        })
        .collect();
    let index = ArchiveIndex::new(BTreeMap::from([(original.clone(), mementos)])).expect("sorted index");
    (index, original)
}
