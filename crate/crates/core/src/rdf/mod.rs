//! Minimal RDF engine: terms, triples, set-semantics graphs, N-Triples in/out,
//! Turtle out and blank-node isomorphism for small graphs.

mod iso;
mod ntriples;
mod turtle;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use iso::{graph_isomorphic, MAX_BLANK_NODES};
pub use ntriples::{parse_ntriples, serialize_ntriples_canonical, term_to_ntriples};
pub use turtle::{default_prefixes, serialize_turtle, PrefixMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RdfError {
    #[error("invalid IRI {0:?}: expected an absolute IRI with a scheme")]
    InvalidIri(String),
    #[error("literal cannot carry both a datatype and a language tag")]
    DatatypeAndLanguage,
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("canonical N-Triples cannot contain blank nodes (found _:{0})")]
    BlankNodeInCanonical(String),
    #[error("graph has {count} blank nodes; isomorphism search is bounded to {max}")]
    TooManyBlankNodes { count: usize, max: usize },
}

/// An absolute IRI. Only the scheme shape is checked; the rest is kept verbatim.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Iri(String);

impl Iri {
    pub fn new(value: impl Into<String>) -> Result<Self, RdfError> {
        let value = value.into();
        if has_scheme(&value) {
            Ok(Iri(value))
        } else {
            Err(RdfError::InvalidIri(value))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn scheme(&self) -> &str {
        // checked at construction
        &self.0[..self.0.find(':').unwrap()]
    }

    /// Fragment text after the first `#`, if any.
    pub fn fragment(&self) -> Option<&str> {
        self.0.find('#').map(|i| &self.0[i + 1..])
    }

    /// The IRI with any fragment part removed.
    pub fn defragment(&self) -> Iri {
        match self.0.find('#') {
            Some(i) => Iri(self.0[..i].to_string()),
            None => self.clone(),
        }
    }

    pub fn is_http(&self) -> bool {
        let scheme = self.scheme();
        scheme.eq_ignore_ascii_case("http") || scheme.eq_ignore_ascii_case("https")
    }

    pub fn is_urn(&self) -> bool {
        self.scheme().eq_ignore_ascii_case("urn")
    }

    pub fn is_urn_uuid(&self) -> bool {
        self.0.len() > 9 && self.0[..9].eq_ignore_ascii_case("urn:uuid:")
    }
}

fn has_scheme(value: &str) -> bool {
    let Some(colon) = value.find(':') else {
        return false;
    };
    let scheme = &value[..colon];
    let mut chars = scheme.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
        && !value
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '<' | '>' | '"'))
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Iri {
    type Err = RdfError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Iri::new(s)
    }
}

impl TryFrom<String> for Iri {
    type Error = RdfError;
    fn try_from(value: String) -> Result<Self, Self::Error> {
        Iri::new(value)
    }
}

impl From<Iri> for String {
    fn from(iri: Iri) -> Self {
        iri.0
    }
}

impl AsRef<str> for Iri {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    lexical: String,
    datatype: Option<Iri>,
    language: Option<String>,
}

impl Literal {
    pub fn plain(lexical: impl Into<String>) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype: None,
            language: None,
        }
    }

    pub fn typed(lexical: impl Into<String>, datatype: Iri) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype: Some(datatype),
            language: None,
        }
    }

    pub fn lang(lexical: impl Into<String>, language: impl Into<String>) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype: None,
            language: Some(language.into()),
        }
    }

    pub fn new(
        lexical: impl Into<String>,
        datatype: Option<Iri>,
        language: Option<String>,
    ) -> Result<Self, RdfError> {
        if datatype.is_some() && language.is_some() {
            return Err(RdfError::DatatypeAndLanguage);
        }
        Ok(Literal {
            lexical: lexical.into(),
            datatype,
            language,
        })
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> Option<&Iri> {
        self.datatype.as_ref()
    }

    pub fn language(&self) -> Option<&str> {
        self.language.as_deref()
    }
}

/// Node that can occupy the subject position.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Subject {
    Iri(Iri),
    Blank(String),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(Iri),
    Literal(Literal),
    Blank(String),
}

impl Subject {
    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Subject::Iri(iri) => Some(iri),
            Subject::Blank(_) => None,
        }
    }
}

impl Term {
    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(lit) => Some(lit),
            _ => None,
        }
    }

    /// The term as a subject, if it can be one.
    pub fn as_subject(&self) -> Option<Subject> {
        match self {
            Term::Iri(iri) => Some(Subject::Iri(iri.clone())),
            Term::Blank(label) => Some(Subject::Blank(label.clone())),
            Term::Literal(_) => None,
        }
    }
}

impl From<Iri> for Subject {
    fn from(iri: Iri) -> Self {
        Subject::Iri(iri)
    }
}

impl From<Subject> for Term {
    fn from(s: Subject) -> Self {
        match s {
            Subject::Iri(iri) => Term::Iri(iri),
            Subject::Blank(label) => Term::Blank(label),
        }
    }
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Self {
        Term::Iri(iri)
    }
}

impl From<Literal> for Term {
    fn from(lit: Literal) -> Self {
        Term::Literal(lit)
    }
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subject::Iri(iri) => write!(f, "<{iri}>"),
            Subject::Blank(label) => write!(f, "_:{label}"),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&term_to_ntriples(self))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub subject: Subject,
    pub predicate: Iri,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: impl Into<Subject>, predicate: Iri, object: impl Into<Term>) -> Self {
        Triple {
            subject: subject.into(),
            predicate,
            object: object.into(),
        }
    }

    fn blank_labels(&self) -> impl Iterator<Item = &str> {
        let s = match &self.subject {
            Subject::Blank(l) => Some(l.as_str()),
            Subject::Iri(_) => None,
        };
        let o = match &self.object {
            Term::Blank(l) => Some(l.as_str()),
            _ => None,
        };
        s.into_iter().chain(o)
    }
}

/// A set of triples with an optional base IRI.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    triples: BTreeSet<Triple>,
    base: Option<Iri>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_base(base: Iri) -> Self {
        Graph {
            triples: BTreeSet::new(),
            base: Some(base),
        }
    }

    pub fn base(&self) -> Option<&Iri> {
        self.base.as_ref()
    }

    /// Returns false when the triple was already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        self.triples.insert(triple)
    }

    pub fn add(&mut self, subject: impl Into<Subject>, predicate: Iri, object: impl Into<Term>) {
        self.triples.insert(Triple::new(subject, predicate, object));
    }

    pub fn remove(&mut self, triple: &Triple) -> bool {
        self.triples.remove(triple)
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.triples.contains(triple)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    pub fn extend(&mut self, other: impl IntoIterator<Item = Triple>) {
        self.triples.extend(other);
    }

    /// Triples with the given subject.
    pub fn about<'a>(&'a self, subject: &'a Subject) -> impl Iterator<Item = &'a Triple> + 'a {
        let floor = Triple {
            subject: subject.clone(),
            predicate: Iri(String::new()),
            object: Term::Iri(Iri(String::new())),
        };
        self.triples
            .range(floor..)
            .take_while(move |t| &t.subject == subject)
    }

    /// Objects of `(subject, predicate, ?)`.
    pub fn objects<'a>(
        &'a self,
        subject: &'a Subject,
        predicate: &Iri,
    ) -> impl Iterator<Item = &'a Term> + 'a {
        let floor = Triple {
            subject: subject.clone(),
            predicate: predicate.clone(),
            object: Term::Iri(Iri(String::new())),
        };
        let predicate = predicate.clone();
        self.triples
            .range(floor..)
            .take_while(move |t| &t.subject == subject && t.predicate == predicate)
            .map(|t| &t.object)
    }

    /// Subjects of `(?, predicate, object)`.
    pub fn subjects<'a>(
        &'a self,
        predicate: &'a Iri,
        object: &'a Term,
    ) -> impl Iterator<Item = &'a Subject> + 'a {
        self.triples
            .iter()
            .filter(move |t| &t.predicate == predicate && &t.object == object)
            .map(|t| &t.subject)
    }

    pub fn has_type(&self, subject: &Subject, class: &Iri) -> bool {
        self.contains(&Triple::new(
            subject.clone(),
            crate::vocab::rdf::type_(),
            class.clone(),
        ))
    }

    /// Distinct blank node labels in subject or object position.
    pub fn blank_nodes(&self) -> BTreeSet<&str> {
        self.triples.iter().flat_map(|t| t.blank_labels()).collect()
    }

    pub fn is_ground(&self) -> bool {
        self.triples.iter().all(|t| t.blank_labels().next().is_none())
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        Graph {
            triples: iter.into_iter().collect(),
            base: None,
        }
    }
}

impl IntoIterator for Graph {
    type Item = Triple;
    type IntoIter = std::collections::btree_set::IntoIter<Triple>;
    fn into_iter(self) -> Self::IntoIter {
        self.triples.into_iter()
    }
}

impl<'a> IntoIterator for &'a Graph {
    type Item = &'a Triple;
    type IntoIter = std::collections::btree_set::Iter<'a, Triple>;
    fn into_iter(self) -> Self::IntoIter {
        self.triples.iter()
    }
}
