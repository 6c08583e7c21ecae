//! Blank-node isomorphism by signature-pruned backtracking.

use std::collections::{HashMap, HashSet};

use super::{Graph, RdfError, Subject, Term, Triple};

/// Upper bound on blank nodes per graph for the exhaustive search.
pub const MAX_BLANK_NODES: usize = 20;

/// True iff some bijection between blank node labels maps `a` onto `b`.
/// Ground graphs compare as sets.
pub fn graph_isomorphic(a: &Graph, b: &Graph) -> Result<bool, RdfError> {
    let blanks_a: Vec<&str> = a.blank_nodes().into_iter().collect();
    let blanks_b: Vec<&str> = b.blank_nodes().into_iter().collect();
    for count in [blanks_a.len(), blanks_b.len()] {
        if count > MAX_BLANK_NODES {
            return Err(RdfError::TooManyBlankNodes {
                count,
                max: MAX_BLANK_NODES,
            });
        }
    }
    if a.len() != b.len() || blanks_a.len() != blanks_b.len() {
        return Ok(false);
    }

    let (ground_a, open_a): (Vec<&Triple>, Vec<&Triple>) = a.iter().partition(|t| is_ground(t));
    let (ground_b, open_b): (Vec<&Triple>, Vec<&Triple>) = b.iter().partition(|t| is_ground(t));
    if ground_a != ground_b {
        return Ok(false);
    }
    if open_a.is_empty() {
        return Ok(true);
    }

    let sig_a = signatures(&open_a);
    let sig_b = signatures(&open_b);
    let mut order: Vec<(&str, Vec<&str>)> = Vec::with_capacity(blanks_a.len());
    for label in &blanks_a {
        let sig = &sig_a[label];
        let candidates: Vec<&str> = blanks_b
            .iter()
            .copied()
            .filter(|other| &sig_b[other] == sig)
            .collect();
        if candidates.is_empty() {
            return Ok(false);
        }
        order.push((label, candidates));
    }
    order.sort_by_key(|(_, c)| c.len());

    let target: HashSet<&Triple> = open_b.iter().copied().collect();
    let mut search = Search {
        order: &order,
        open_a: &open_a,
        target: &target,
        mapping: HashMap::new(),
        used: HashSet::new(),
    };
    Ok(search.assign(0))
}

fn is_ground(t: &Triple) -> bool {
    matches!(t.subject, Subject::Iri(_)) && !matches!(t.object, Term::Blank(_))
}

// Per blank node: sorted description of every incident edge, with other blank
// endpoints anonymised.
fn signatures<'a>(triples: &[&'a Triple]) -> HashMap<&'a str, Vec<String>> {
    let mut sigs: HashMap<&str, Vec<String>> = HashMap::new();
    for t in triples {
        if let Subject::Blank(label) = &t.subject {
            let other = match &t.object {
                Term::Blank(o) if o == label => "self".to_string(),
                Term::Blank(_) => "_".to_string(),
                other => other.to_string(),
            };
            sigs.entry(label)
                .or_default()
                .push(format!("s {} {}", t.predicate, other));
        }
        if let Term::Blank(label) = &t.object {
            let other = match &t.subject {
                Subject::Blank(s) if s == label => "self".to_string(),
                Subject::Blank(_) => "_".to_string(),
                other => other.to_string(),
            };
            sigs.entry(label)
                .or_default()
                .push(format!("o {} {}", t.predicate, other));
        }
    }
    for sig in sigs.values_mut() {
        sig.sort();
    }
    sigs
}

struct Search<'s, 'g> {
    order: &'s [(&'g str, Vec<&'g str>)],
    open_a: &'s [&'g Triple],
    target: &'s HashSet<&'g Triple>,
    mapping: HashMap<&'g str, &'g str>,
    used: HashSet<&'g str>,
}

impl<'s, 'g> Search<'s, 'g> {
    fn assign(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let (label, candidates) = &self.order[depth];
        for candidate in candidates {
            if self.used.contains(candidate) {
                continue;
            }
            self.mapping.insert(label, candidate);
            self.used.insert(candidate);
            if self.consistent(label) && self.assign(depth + 1) {
                return true;
            }
            self.mapping.remove(label);
            self.used.remove(candidate);
        }
        false
    }

    // Every fully mapped triple touching `label` must land in the target.
    fn consistent(&self, label: &str) -> bool {
        self.open_a
            .iter()
            .filter(|t| touches(t, label))
            .filter_map(|t| self.map_triple(t))
            .all(|mapped| self.target.contains(&mapped))
    }

    fn map_triple(&self, t: &Triple) -> Option<Triple> {
        let subject = match &t.subject {
            Subject::Blank(l) => Subject::Blank(self.mapping.get(l.as_str())?.to_string()),
            s => s.clone(),
        };
        let object = match &t.object {
            Term::Blank(l) => Term::Blank(self.mapping.get(l.as_str())?.to_string()),
            o => o.clone(),
        };
        Some(Triple {
            subject,
            predicate: t.predicate.clone(),
            object,
        })
    }
}

fn touches(t: &Triple, label: &str) -> bool {
    matches!(&t.subject, Subject::Blank(l) if l == label) || matches!(&t.object, Term::Blank(l) if l == label)
}

/// Relabel blank nodes through `mapping`; labels not in the map are kept.
#[cfg(test)]
pub(crate) fn relabel(graph: &Graph, mapping: &std::collections::BTreeMap<String, String>) -> Graph {
    graph
        .iter()
        .map(|t| Triple {
            subject: match &t.subject {
                Subject::Blank(l) => Subject::Blank(mapping.get(l).cloned().unwrap_or_else(|| l.clone())),
                s => s.clone(),
            },
            predicate: t.predicate.clone(),
            object: match &t.object {
                Term::Blank(l) => Term::Blank(mapping.get(l).cloned().unwrap_or_else(|| l.clone())),
                o => o.clone(),
            },
        })
        .collect()
}
