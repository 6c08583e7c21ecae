//! Isomorphism by exhaustive search over blank node bijections.
#![allow(dead_code)]

use std::collections::BTreeMap;

use oac_core::rdf::{Graph, Subject, Term, Triple};

fn labels(g: &Graph) -> Vec<String> {
    g.blank_nodes().into_iter().map(str::to_string).collect()
}

fn relabel(g: &Graph, map: &BTreeMap<&str, &str>) -> Graph {
    let swap = |l: &String| map[l.as_str()].to_string();
    g.iter()
        .map(|t| {
            let subject = match &t.subject {
                Subject::Blank(l) => Subject::Blank(swap(l)),
                s => s.clone(),
            };
            let object = match &t.object {
                Term::Blank(l) => Term::Blank(swap(l)),
                o => o.clone(),
            };
            Triple::new(subject, t.predicate.clone(), object)
        })
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Tries all |B|! label bijections; keep |B| small.
pub fn brute_force_isomorphic(a: &Graph, b: &Graph) -> bool {
    let (la, lb) = (labels(a), labels(b));
    if a.len() != b.len() || la.len() != lb.len() {
        return false;
    }
    permutations(la.len()).into_iter().any(|perm| {
        let map: BTreeMap<&str, &str> = la
            .iter()
            .zip(perm.iter().map(|&i| &lb[i]))
            .map(|(x, y)| (x.as_str(), y.as_str()))
            .collect();
        relabel(a, &map) == *b
    })
}
