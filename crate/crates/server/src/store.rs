use std::collections::{BTreeMap, BTreeSet};

use oac_core::fragments::{
    fragments_overlap, parse_fragment, FragmentSelector, OverlapContext, SpatialSelector,
};
use oac_core::model::{from_graph, mint_under, to_graph, Annotation, ModelError, TargetKind, TargetRef};
use oac_core::rdf::{Graph, Iri, Subject, Term, Triple};
use oac_core::validation::{validate_node, Finding};
use oac_core::vocab::{oac, owl, rdf};
use serde::Serialize;

/// Upper bound on `/search` results; callers see `truncated: true` past it.
pub const SEARCH_CAP: usize = 500;

/// In-memory annotations, indexed by the full resource of every target.
#[derive(Debug, Default)]
pub struct AnnotationStore {
    annotations: BTreeMap<Iri, Annotation>,
    target_index: BTreeMap<Iri, BTreeSet<Iri>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct IngestOutcome {
    pub stored: Vec<Iri>,
    pub rejected: Vec<Rejection>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Rejection {
    pub annotation: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub findings: Vec<Finding>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl AnnotationStore {
    pub fn len(&self) -> usize {
        self.annotations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.annotations.is_empty()
    }

    pub fn get(&self, uri: &Iri) -> Option<&Annotation> {
        self.annotations.get(uri)
    }

    pub fn uris(&self) -> impl Iterator<Item = &Iri> {
        self.annotations.keys()
    }

    /// Store every annotation in `g` that validates without errors.
    ///
    /// URN-identified annotations are renamed to `{base}annotations/{id}`
    /// with an `owl:sameAs` link back to the URN. Stored annotations are
    /// immutable: a second ingest of the same URI is rejected.
    pub fn ingest(&mut self, g: &Graph, base: &Iri) -> IngestOutcome {
        let (accepted, mut outcome) = prepare(g, base);
        for a in accepted {
            if self.annotations.contains_key(&a.uri) {
                outcome.rejected.push(Rejection {
                    annotation: a.uri.to_string(),
                    findings: Vec::new(),
                    error: Some("annotation already stored".into()),
                });
                continue;
            }
            outcome.stored.push(a.uri.clone());
            self.insert(a);
        }
        outcome.rejected.sort_by(|a, b| a.annotation.cmp(&b.annotation));
        outcome
    }

    fn insert(&mut self, a: Annotation) {
        for target in &a.targets {
            self.target_index
                .entry(target.full_resource())
                .or_default()
                .insert(a.uri.clone());
        }
        self.annotations.insert(a.uri.clone(), a);
    }

    /// Annotations with a target on `target`, optionally only those whose
    /// segment overlaps `selectors`.
    ///
    /// A target with no fragment and no inline SVG constraint does not match
    /// a selector query, and neither does one whose selectors share no
    /// dimension with the query or need media dimensions to resolve.
    pub fn query(&self, target: &Iri, selectors: Option<&[FragmentSelector]>) -> Vec<Iri> {
        let full = target.defragment();
        let Some(candidates) = self.target_index.get(&full) else {
            return Vec::new();
        };
        let Some(query) = selectors.filter(|s| !s.is_empty()) else {
            return candidates.iter().cloned().collect();
        };
        candidates
            .iter()
            .filter(|uri| {
                self.annotations[*uri]
                    .targets
                    .iter()
                    .filter(|t| t.full_resource() == full)
                    .any(|t| target_overlaps(t, query))
            })
            .cloned()
            .collect()
    }

    /// Union of every stored annotation's graph.
    pub fn to_graph(&self) -> Graph {
        let mut g = Graph::new();
        for a in self.annotations.values() {
            g.extend(to_graph(a).iter().cloned());
        }
        g
    }
}

fn target_overlaps(t: &TargetRef, query: &[FragmentSelector]) -> bool {
    let ctx = OverlapContext::default();
    let selectors = match &t.kind {
        TargetKind::Direct(uri) => match parse_fragment(uri, None) {
            Ok(f) => f.selectors,
            Err(_) => return false,
        },
        TargetKind::Constrained(ct) => match ct.constraint.inline_svg_region() {
            Some(Ok(region)) => {
                let b = region.bbox;
                vec![FragmentSelector::Spatial(SpatialSelector::pixel(
                    b.x, b.y, b.width, b.height,
                ))]
            }
            _ => return false,
        },
    };
    !selectors.is_empty() && fragments_overlap(&selectors, query, &ctx).unwrap_or(false)
}

fn prepare(g: &Graph, base: &Iri) -> (Vec<Annotation>, IngestOutcome) {
    let class = Term::Iri(oac::annotation());
    let nodes: BTreeSet<Subject> = g.subjects(&rdf::type_(), &class).cloned().collect();
    let mut accepted = Vec::new();
    let mut outcome = IngestOutcome::default();
    for node in nodes {
        let reject = |findings: Vec<Finding>, error: Option<String>| Rejection {
            annotation: match &node {
                Subject::Iri(iri) => iri.to_string(),
                Subject::Blank(label) => format!("_:{label}"),
            },
            findings,
            error,
        };
        let uri = match &node {
            Subject::Iri(uri) => uri,
            Subject::Blank(_) => {
                let report = validate_node(g, &node);
                outcome
                    .rejected
                    .push(reject(report.errors().cloned().collect(), None));
                continue;
            }
        };
        match from_graph(g, uri).and_then(|a| publishable(a, base)) {
            Ok(a) => accepted.push(a),
            Err(ModelError::ModelViolation(findings)) => outcome.rejected.push(reject(findings, None)),
            Err(e) => outcome.rejected.push(reject(Vec::new(), Some(e.to_string()))),
        }
    }
    (accepted, outcome)
}

fn publishable(a: Annotation, base: &Iri) -> Result<Annotation, ModelError> {
    if !a.uri.is_urn() {
        return Ok(a);
    }
    let home = Iri::new(format!("{base}annotations/"))?;
    let http = mint_under(&home, &a.uri)?;
    Ok(rename(a, http))
}

fn rename(mut a: Annotation, to: Iri) -> Annotation {
    let from = a.uri.clone();
    let old = Subject::Iri(from.clone());
    let mut extra = Graph::new();
    for t in a.extra.iter() {
        let subject = if t.subject == old {
            Subject::Iri(to.clone())
        } else {
            t.subject.clone()
        };
        let object = if t.object == Term::Iri(from.clone()) {
            Term::Iri(to.clone())
        } else {
            t.object.clone()
        };
        extra.insert(Triple::new(subject, t.predicate.clone(), object));
    }
    extra.add(to.clone(), owl::same_as(), from);
    a.extra = extra;
    a.uri = to;
    a
}
