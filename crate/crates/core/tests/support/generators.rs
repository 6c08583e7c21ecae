//! Proptest strategies for fragment URIs and annotations.
#![allow(dead_code)]

use chrono::{DateTime, TimeZone, Utc};
use oac_core::constraints::{
    fragment_to_constraint, inline_constraint, make_constrained_target, Constraint, ConstraintKind,
    ConstraintPayload,
};
use oac_core::fragments::{
    FragmentSelector, FragmentUri, PdfSelector, SpatialSelector, TemporalSelector, TextRange, ViewRect,
};
use oac_core::model::{AnnotationBuilder, BodyRef, ContentKind, InlineContent, TargetRef};
use oac_core::rdf::{Graph, Iri, Literal, Term, Triple};
use oac_core::{Annotation, UrnMinter};
use proptest::collection::vec;
use proptest::option;
use proptest::prelude::*;

pub fn iri(s: &str) -> Iri {
    Iri::new(s).unwrap()
}

/// Values with up to three decimals, the resolution fragment writers use.
fn decimal(max: u32) -> impl Strategy<Value = f64> {
    (0..=max * 1000).prop_map(|v| f64::from(v) / 1000.0)
}

fn coarse_decimal() -> impl Strategy<Value = f64> {
    prop_oneof![decimal(5000), (0u32..100_000).prop_map(f64::from)]
}

fn name() -> impl Strategy<Value = String> {
    prop_oneof!["[A-Za-z][A-Za-z0-9_.~-]{0,12}", "\\PC{1,8}",]
}

fn spatial() -> impl Strategy<Value = FragmentSelector> {
    prop_oneof![
        (
            coarse_decimal(),
            coarse_decimal(),
            coarse_decimal(),
            coarse_decimal()
        )
            .prop_map(|(x, y, w, h)| FragmentSelector::Spatial(SpatialSelector::pixel(x, y, w, h))),
        (decimal(100), decimal(100), decimal(100), decimal(100))
            .prop_map(|(x, y, w, h)| FragmentSelector::Spatial(SpatialSelector::percent(x, y, w, h))),
    ]
}

fn temporal() -> impl Strategy<Value = FragmentSelector> {
    (
        option::of(decimal(20_000)),
        option::of(decimal(20_000)),
        1u32..5000,
    )
        .prop_map(|(start, end, gap)| {
            let (start, end) = match (start, end) {
                (None, None) => (Some(0.0), None),
                (Some(s), Some(_)) => (Some(s), Some(s + f64::from(gap) / 10.0)),
                other => other,
            };
            FragmentSelector::Temporal(TemporalSelector::new(start, end).unwrap())
        })
}

fn media() -> impl Strategy<Value = Vec<FragmentSelector>> {
    (
        option::of(temporal()),
        option::of(spatial()),
        option::of(name().prop_map(FragmentSelector::Track)),
        option::of(name().prop_map(FragmentSelector::NamedId)),
    )
        .prop_map(|(t, s, tr, id)| [t, s, tr, id].into_iter().flatten().collect::<Vec<_>>())
        .prop_filter("at least one dimension", |v| !v.is_empty())
}

fn integrity() -> impl Strategy<Value = Vec<String>> {
    vec(
        prop_oneof![
            (0u64..100_000).prop_map(|n| format!("length={n}")),
            "[0-9a-f]{32}".prop_map(|h| format!("md5={h}")),
        ],
        0..3,
    )
}

fn text_range() -> impl Strategy<Value = TextRange> {
    (0u64..1_000_000, 0u64..1000, integrity()).prop_map(|(start, len, integrity)| TextRange {
        start,
        end: start + len,
        integrity,
    })
}

fn pdf() -> impl Strategy<Value = FragmentSelector> {
    (
        1u32..5000,
        option::of((
            coarse_decimal(),
            coarse_decimal(),
            coarse_decimal(),
            coarse_decimal(),
        )),
    )
        .prop_map(|(page, rect)| {
            FragmentSelector::PdfView(PdfSelector {
                page,
                viewrect: rect.map(|(left, top, width, height)| ViewRect {
                    left,
                    top,
                    width,
                    height,
                }),
            })
        })
}

fn base() -> impl Strategy<Value = Iri> {
    (
        "(http|https)",
        "[a-z]{1,10}",
        "[a-z0-9]{1,8}",
        "(png|mpg|txt|pdf|html)",
    )
        .prop_map(|(scheme, host, path, ext)| iri(&format!("{scheme}://{host}.example/{path}.{ext}")))
}

pub fn fragment_uri() -> impl Strategy<Value = FragmentUri> {
    let selectors = prop_oneof![
        4 => media(),
        1 => text_range().prop_map(|r| vec![FragmentSelector::TextChar(r)]),
        1 => text_range().prop_map(|r| vec![FragmentSelector::TextLine(r)]),
        1 => pdf().prop_map(|p| vec![p]),
        1 => name().prop_map(|n| vec![FragmentSelector::NamedAnchor(n)]),
    ];
    (base(), selectors).prop_map(|(b, s)| FragmentUri::new(b, s).unwrap())
}

pub fn datetime() -> impl Strategy<Value = DateTime<Utc>> {
    // 1995 .. 2035, with sub-second noise the model truncates
    (800_000_000i64..2_050_000_000, 0u32..1_000_000_000)
        .prop_map(|(secs, nanos)| Utc.timestamp_opt(secs, nanos).unwrap())
}

fn http(prefix: &'static str) -> impl Strategy<Value = Iri> {
    "[a-z0-9]{1,10}".prop_map(move |p| iri(&format!("http://{prefix}.example.org/{p}")))
}

fn literal_text() -> impl Strategy<Value = String> {
    prop_oneof!["[ -~]{0,40}", "\\PC{0,20}", "[\t\n\r\"\\\\a-z\u{7f}\u{1}]{0,20}"]
}

fn inline_content() -> impl Strategy<Value = InlineContent> {
    prop_oneof![
        (
            literal_text(),
            prop_oneof![
                Just(String::new()),
                Just("utf-8".to_string()),
                "[A-Za-z0-9-]{1,10}"
            ]
        )
            .prop_map(|(chars, enc)| InlineContent::text(chars, enc)),
        "([A-Za-z0-9+/]{4}){0,6}"
            .prop_map(|chars| InlineContent::new(chars, "utf-8", ContentKind::Base64).unwrap()),
        "[a-z]{1,8}".prop_map(|tag| {
            InlineContent::new(format!("<{tag}>x</{tag}>"), "utf-8", ContentKind::Xml).unwrap()
        }),
    ]
}

#[derive(Debug, Clone)]
enum ConstraintSpec {
    SvgRemote,
    SvgFromRect(f64, f64, f64, f64),
    GenericRemote(Iri),
    GenericInline(InlineContent),
    WebTime(DateTime<Utc>),
}

fn constraint_spec(allow_time: bool) -> BoxedStrategy<ConstraintSpec> {
    let base = prop_oneof![
        Just(ConstraintSpec::SvgRemote),
        (
            coarse_decimal(),
            coarse_decimal(),
            coarse_decimal(),
            coarse_decimal()
        )
            .prop_map(|(x, y, w, h)| ConstraintSpec::SvgFromRect(x, y, w, h)),
        http("data").prop_map(ConstraintSpec::GenericRemote),
        inline_content().prop_map(ConstraintSpec::GenericInline),
    ];
    if allow_time {
        prop_oneof![3 => base, 1 => datetime().prop_map(ConstraintSpec::WebTime)].boxed()
    } else {
        base.boxed()
    }
}

fn realize(spec: ConstraintSpec, minter: &mut UrnMinter) -> Constraint {
    match spec {
        ConstraintSpec::SvgRemote => {
            let id = minter.uuid();
            Constraint::svg_remote(iri(&format!("http://constraints.example.org/{id}.svg")))
        }
        ConstraintSpec::SvgFromRect(x, y, w, h) => {
            fragment_to_constraint(&SpatialSelector::pixel(x, y, w, h), minter).unwrap()
        }
        ConstraintSpec::GenericRemote(doc) => Constraint::new(
            minter.mint(),
            ConstraintKind::Generic,
            Some("model/x3d+xml".into()),
            ConstraintPayload::Remote(doc),
            None,
        )
        .unwrap(),
        ConstraintSpec::GenericInline(content) => inline_constraint(content, minter),
        ConstraintSpec::WebTime(when) => Constraint::web_time(minter.mint(), when),
    }
}

#[derive(Debug, Clone)]
enum BodySpec {
    Remote(Iri),
    Inline(InlineContent, Option<Iri>),
    Constrained(Iri, ConstraintSpec),
}

#[derive(Debug, Clone)]
enum TargetSpec {
    Direct(Iri, Option<FragmentUri>, bool),
    Constrained(Iri, ConstraintSpec),
}

fn body_spec(allow_time: bool) -> impl Strategy<Value = BodySpec> {
    prop_oneof![
        http("bodies").prop_map(BodySpec::Remote),
        (inline_content(), option::of(http("published"))).prop_map(|(c, h)| BodySpec::Inline(c, h)),
        (http("media"), constraint_spec(allow_time)).prop_map(|(u, c)| BodySpec::Constrained(u, c)),
    ]
}

fn target_spec(allow_time: bool) -> impl Strategy<Value = TargetSpec> {
    prop_oneof![
        (http("targets"), option::of(fragment_uri()), any::<bool>())
            .prop_map(|(u, f, part_of)| TargetSpec::Direct(u, f, part_of)),
        (http("targets"), constraint_spec(allow_time)).prop_map(|(u, c)| TargetSpec::Constrained(u, c)),
    ]
}

fn extra_triples(node: Iri) -> impl Strategy<Value = Graph> {
    vec(
        (
            "[a-z]{1,6}",
            prop_oneof![
                literal_text().prop_map(|s| Term::Literal(Literal::plain(s))),
                ("[a-z ]{0,10}", "[a-z]{2}(-[A-Z]{2})?")
                    .prop_map(|(s, l)| Term::Literal(Literal::lang(s, l))),
                http("things").prop_map(Term::Iri),
            ],
        ),
        0..3,
    )
    .prop_map(move |pairs| {
        pairs
            .into_iter()
            .map(|(p, o)| Triple::new(node.clone(), iri(&format!("http://vocab.example.org/{p}")), o))
            .collect()
    })
}

/// Valid annotations covering every body and target shape.
pub fn annotation() -> impl Strategy<Value = Annotation> {
    (any::<bool>(), "[a-z0-9]{1,10}")
        .prop_flat_map(|(uniform, id)| {
            let uri = iri(&format!("http://annotations.example.org/{id}"));
            (
                Just(uri.clone()),
                option::of(body_spec(!uniform)),
                vec(target_spec(!uniform), 1..4),
                option::of(datetime()),
                option::of(http("users")),
                option::of(literal_text()),
                if uniform {
                    option::of(datetime()).boxed()
                } else {
                    Just(None).boxed()
                },
                any::<bool>(),
                extra_triples(uri),
                any::<u64>(),
            )
        })
        .prop_map(
            |(uri, body, targets, created, creator, title, when, reply, extra, seed)| {
                let mut minter = UrnMinter::seeded(seed);
                let mut b = AnnotationBuilder::new(uri);
                if let Some(body) = body {
                    b = b.body(match body {
                        BodySpec::Remote(u) => BodyRef::remote(u),
                        BodySpec::Inline(content, http) => {
                            let mut r = BodyRef::inline(minter.mint(), content).unwrap();
                            r.equivalent_http = http;
                            r
                        }
                        BodySpec::Constrained(full, spec) => {
                            let c = realize(spec, &mut minter);
                            BodyRef::constrained(make_constrained_target(full, c, &mut minter).unwrap())
                        }
                    });
                }
                let mut seen = std::collections::BTreeSet::new();
                for t in targets {
                    let target = match t {
                        TargetSpec::Direct(u, frag, part_of) => {
                            let uri = match frag {
                                Some(f) => {
                                    oac_core::fragments::serialize_fragment(&FragmentUri { base: u, ..f })
                                }
                                None => u,
                            };
                            if part_of {
                                TargetRef::direct_with_part_of(uri)
                            } else {
                                TargetRef::direct(uri)
                            }
                        }
                        TargetSpec::Constrained(full, spec) => {
                            let c = realize(spec, &mut minter);
                            TargetRef::constrained(make_constrained_target(full, c, &mut minter).unwrap())
                        }
                    };
                    if seen.insert(target.node().clone()) {
                        b = b.target(target);
                    }
                }
                if let Some(at) = created {
                    b = b.created(at);
                }
                if let Some(agent) = creator {
                    b = b.creator(agent);
                }
                if let Some(t) = title {
                    b = b.title(t);
                }
                if let Some(at) = when {
                    b = b.when(at);
                }
                if reply {
                    b = b.with_type(oac_core::vocab::oac::reply());
                }
                b.extra(extra).build().unwrap()
            },
        )
}
