//! Turtle output. Subjects are grouped, `rdf:type` is written as `a`, and
//! IRIs under a declared namespace are abbreviated to prefixed names.

use std::collections::{BTreeMap, BTreeSet};

use super::ntriples::{escape_string, iri_to_ntriples};
use super::{Graph, Iri, Subject, Term};
use crate::vocab;

pub type PrefixMap = BTreeMap<String, Iri>;

pub fn default_prefixes() -> PrefixMap {
    [
        ("oac", vocab::oac::NS),
        ("dcterms", vocab::dcterms::NS),
        ("dc", vocab::dc::NS),
        ("cnt", vocab::cnt::NS),
        ("rdf", vocab::rdf::NS),
        ("foaf", vocab::foaf::NS),
        ("xsd", vocab::xsd::NS),
    ]
    .into_iter()
    .map(|(p, ns)| (p.to_string(), Iri::new(ns).expect("static namespace")))
    .collect()
}

pub fn serialize_turtle(graph: &Graph, prefixes: &PrefixMap) -> String {
    let mut out = String::new();
    for (prefix, ns) in prefixes {
        out.push_str(&format!("@prefix {prefix}: {} .\n", iri_to_ntriples(ns)));
    }

    let rdf_type = vocab::rdf::type_();
    let mut grouped: BTreeMap<&Subject, BTreeMap<&Iri, BTreeSet<&Term>>> = BTreeMap::new();
    for t in graph {
        grouped
            .entry(&t.subject)
            .or_default()
            .entry(&t.predicate)
            .or_default()
            .insert(&t.object);
    }

    for (subject, predicates) in grouped {
        out.push('\n');
        out.push_str(&match subject {
            Subject::Iri(iri) => render_iri(iri, prefixes),
            Subject::Blank(label) => format!("_:{label}"),
        });
        let ordered = predicates
            .get(&rdf_type)
            .map(|objs| (&rdf_type, objs))
            .into_iter()
            .chain(
                predicates
                    .iter()
                    .filter(|(p, _)| ***p != rdf_type)
                    .map(|(p, o)| (*p, o)),
            );
        let mut first = true;
        for (predicate, objects) in ordered {
            if first {
                out.push(' ');
                first = false;
            } else {
                out.push_str(" ;\n    ");
            }
            if *predicate == rdf_type {
                out.push('a');
            } else {
                out.push_str(&render_iri(predicate, prefixes));
            }
            out.push(' ');
            let rendered: Vec<String> = objects.iter().map(|o| render_term(o, prefixes)).collect();
            out.push_str(&rendered.join(" , "));
        }
        out.push_str(" .\n");
    }
    out
}

fn render_term(term: &Term, prefixes: &PrefixMap) -> String {
    match term {
        Term::Iri(iri) => render_iri(iri, prefixes),
        Term::Blank(label) => format!("_:{label}"),
        Term::Literal(lit) => {
            let mut out = String::from("\"");
            escape_string(lit.lexical(), &mut out);
            out.push('"');
            if let Some(lang) = lit.language() {
                out.push('@');
                out.push_str(lang);
            } else if let Some(dt) = lit.datatype() {
                out.push_str("^^");
                out.push_str(&render_iri(dt, prefixes));
            }
            out
        }
    }
}

fn render_iri(iri: &Iri, prefixes: &PrefixMap) -> String {
    prefixes
        .iter()
        .filter_map(|(prefix, ns)| {
            iri.as_str()
                .strip_prefix(ns.as_str())
                .filter(|local| is_safe_local_name(local))
                .map(|local| (ns.as_str().len(), prefix, local))
        })
        .max_by_key(|(len, _, _)| *len)
        .map(|(_, prefix, local)| format!("{prefix}:{local}"))
        .unwrap_or_else(|| iri_to_ntriples(iri))
}

// Conservative subset of PN_LOCAL that never needs escaping.
fn is_safe_local_name(local: &str) -> bool {
    let mut chars = local.chars();
    match chars.next() {
        None => return true,
        Some(c) if c.is_ascii_alphanumeric() || c == '_' => {}
        Some(_) => return false,
    }
    !local.ends_with('.') && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}
