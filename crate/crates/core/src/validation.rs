//! Coded findings for graphs that claim to contain annotations.
//!
//! | code | severity | condition |
//! |------|----------|-----------|
//! | E001 | error | more than one `oac:hasBody` |
//! | E002 | error | no `oac:hasTarget` |
//! | E003 | error | annotation node is a blank node |
//! | E101 | error | constrained resource without exactly one `oac:constrains` |
//! | E102 | error | constrained resource with zero or several constraints |
//! | E201 | error | `oac:when` on both the annotation and a constraint, or several values |
//! | W001 | warning | no `dcterms:created` |
//! | W002 | warning | no `dcterms:creator` |
//! | W101 | warning | fragment target without `dcterms:isPartOf` |
//! | W102 | warning | URN body without an HTTP equivalent |
//! | W103 | warning | inline payload without `cnt:characterEncoding` |
//! | W104 | warning | inline payload with empty `cnt:chars` |

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::model::{to_graph, Annotation};
use crate::rdf::{Graph, Iri, Subject, Term};
use crate::vocab::{cnt, dcterms, oac, owl};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "ERROR",
            Severity::Warning => "WARNING",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub code: String,
    pub severity: Severity,
    #[serde(serialize_with = "subject_text")]
    pub subject: Subject,
    pub message: String,
}

fn subject_text<S: Serializer>(subject: &Subject, s: S) -> Result<S::Ok, S::Error> {
    match subject {
        Subject::Iri(iri) => s.serialize_str(iri.as_str()),
        Subject::Blank(label) => s.serialize_str(&format!("_:{label}")),
    }
}

impl Finding {
    fn new(code: &str, subject: Subject, message: impl Into<String>) -> Self {
        let severity = if code.starts_with('E') {
            Severity::Error
        } else {
            Severity::Warning
        };
        Finding {
            code: code.to_string(),
            severity,
            subject,
            message: message.into(),
        }
    }

    fn sort_key(&self) -> (&Subject, &str, &str) {
        (&self.subject, &self.code, &self.message)
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {}",
            self.severity, self.code, self.subject, self.message
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
    pub checked_annotations: usize,
}

impl ValidationReport {
    fn from_findings(mut findings: Vec<Finding>, checked_annotations: usize) -> Self {
        findings.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        findings.dedup();
        ValidationReport {
            findings,
            checked_annotations,
        }
    }

    pub fn has_errors(&self) -> bool {
        self.errors().next().is_some()
    }

    pub fn errors(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.severity == Severity::Error)
    }

    pub fn codes(&self) -> Vec<&str> {
        self.findings.iter().map(|f| f.code.as_str()).collect()
    }

    /// One `SEVERITY CODE <subject> message` line per finding.
    pub fn to_text(&self) -> String {
        self.findings.iter().map(|f| format!("{f}\n")).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.findings).expect("findings serialize")
    }
}

/// Check every node typed `oac:Annotation`.
pub fn validate(g: &Graph) -> ValidationReport {
    let type_ = crate::vocab::rdf::type_();
    let class = Term::Iri(oac::annotation());
    let annotations: BTreeSet<&Subject> = g.subjects(&type_, &class).collect();
    let findings = annotations.iter().flat_map(|s| check_annotation(g, s)).collect();
    ValidationReport::from_findings(findings, annotations.len())
}

/// Findings rooted at one annotation node of `g`.
pub fn validate_node(g: &Graph, node: &Subject) -> ValidationReport {
    ValidationReport::from_findings(check_annotation(g, node), 1)
}

/// Findings for the annotation built from `a`.
pub fn validate_annotation(a: &Annotation) -> ValidationReport {
    validate_node(&to_graph(a), &Subject::Iri(a.uri.clone()))
}

/// Findings rooted at a single annotation node.
pub(crate) fn check_annotation(g: &Graph, node: &Subject) -> Vec<Finding> {
    let mut out = Vec::new();
    if let Subject::Blank(_) = node {
        out.push(Finding::new(
            "E003",
            node.clone(),
            "annotation node is a blank node",
        ));
    }

    let bodies: Vec<&Term> = g.objects(node, &oac::has_body()).collect();
    if bodies.len() > 1 {
        out.push(Finding::new(
            "E001",
            node.clone(),
            format!("{} bodies; at most one is allowed", bodies.len()),
        ));
    }
    let targets: Vec<&Term> = g.objects(node, &oac::has_target()).collect();
    if targets.is_empty() {
        out.push(Finding::new("E002", node.clone(), "annotation has no target"));
    }

    if g.objects(node, &dcterms::created()).next().is_none() {
        out.push(Finding::new("W001", node.clone(), "missing dcterms:created"));
    }
    if g.objects(node, &dcterms::creator()).next().is_none() {
        out.push(Finding::new("W002", node.clone(), "missing dcterms:creator"));
    }

    let annotation_when = g.objects(node, &oac::when()).count();
    if annotation_when > 1 {
        out.push(Finding::new(
            "E201",
            node.clone(),
            format!("{annotation_when} oac:when values on the annotation"),
        ));
    }

    let mut timed_constraints = Vec::new();
    for body in &bodies {
        let Some(s) = body.as_subject() else { continue };
        if is_constrained(g, &s) {
            timed_constraints.extend(check_constrained(g, &s, &mut out));
            continue;
        }
        inline_payload(g, &s, &mut out);
        if let Subject::Iri(iri) = &s {
            if iri.is_urn() && !has_http_equivalent(g, body) {
                out.push(Finding::new(
                    "W102",
                    s.clone(),
                    "URN body has no HTTP URI declared equivalent",
                ));
            }
        }
    }
    for target in &targets {
        let Some(s) = target.as_subject() else { continue };
        if is_constrained(g, &s) {
            timed_constraints.extend(check_constrained(g, &s, &mut out));
            continue;
        }
        if let Subject::Iri(iri) = &s {
            if iri.fragment().is_some_and(|f| !f.is_empty())
                && g.objects(&s, &dcterms::is_part_of()).next().is_none()
            {
                out.push(Finding::new(
                    "W101",
                    s.clone(),
                    format!("fragment target lacks dcterms:isPartOf <{}>", iri.defragment()),
                ));
            }
        }
    }

    if annotation_when > 0 && !timed_constraints.is_empty() {
        out.push(Finding::new(
            "E201",
            node.clone(),
            format!(
                "oac:when on the annotation and on {} constraint(s)",
                timed_constraints.len()
            ),
        ));
    }
    out
}

fn is_constrained(g: &Graph, s: &Subject) -> bool {
    g.has_type(s, &oac::constrained_target())
        || g.has_type(s, &oac::constrained_body())
        || g.objects(s, &oac::constrains()).next().is_some()
        || g.objects(s, &oac::has_constraint()).next().is_some()
}

/// Structural checks for a constrained body or target; returns the
/// constraint nodes that carry `oac:when`.
fn check_constrained(g: &Graph, s: &Subject, out: &mut Vec<Finding>) -> Vec<Subject> {
    let constrains = g.objects(s, &oac::constrains()).count();
    if constrains != 1 {
        out.push(Finding::new(
            "E101",
            s.clone(),
            format!("{constrains} oac:constrains values; exactly one is required"),
        ));
    }
    let constraints: Vec<Subject> = g
        .objects(s, &oac::has_constraint())
        .filter_map(Term::as_subject)
        .collect();
    if constraints.len() != 1 {
        out.push(Finding::new(
            "E102",
            s.clone(),
            format!("{} constraints; exactly one is required", constraints.len()),
        ));
    }
    let mut timed = Vec::new();
    for c in constraints {
        inline_payload(g, &c, out);
        if g.objects(&c, &oac::when()).next().is_some() {
            timed.push(c);
        }
    }
    timed
}

fn inline_payload(g: &Graph, s: &Subject, out: &mut Vec<Finding>) {
    let chars: Vec<&Term> = g.objects(s, &cnt::chars()).collect();
    if chars.is_empty() {
        return;
    }
    if g.objects(s, &cnt::character_encoding()).next().is_none() {
        out.push(Finding::new(
            "W103",
            s.clone(),
            "inline payload lacks cnt:characterEncoding",
        ));
    }
    if chars
        .iter()
        .filter_map(|t| t.as_literal())
        .any(|l| l.lexical().is_empty())
    {
        out.push(Finding::new("W104", s.clone(), "inline payload is empty"));
    }
}

fn has_http_equivalent(g: &Graph, body: &Term) -> bool {
    g.subjects(&owl::same_as(), body)
        .filter_map(Subject::as_iri)
        .any(Iri::is_http)
}
