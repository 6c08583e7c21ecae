use std::collections::{BTreeSet, VecDeque};

use super::{
    datetime_literal, parse_datetime, Annotation, BodyKind, BodyRef, ConstrainedTarget, ContentKind,
    InlineContent, ModelError, TargetKind, TargetRef,
};
use crate::constraints::Constraint;
use crate::rdf::{Graph, Iri, Literal, Subject, Term, Triple};
use crate::validation::{self, Severity};
use crate::vocab::{cnt, dc, dcterms, oac, owl, rdf};

/// Render an annotation as triples. Never emits blank nodes; `extra` is
/// appended verbatim.
pub fn to_graph(a: &Annotation) -> Graph {
    let mut g = Graph::new();
    let node = a.uri.clone();
    for class in &a.types {
        g.add(node.clone(), rdf::type_(), class.clone());
    }
    if let Some(body) = &a.body {
        g.add(node.clone(), oac::has_body(), body.node().clone());
        emit_body(&mut g, body);
    }
    for target in &a.targets {
        g.add(node.clone(), oac::has_target(), target.node().clone());
        emit_target(&mut g, target);
    }
    if let Some(created) = &a.created {
        g.add(node.clone(), dcterms::created(), datetime_literal(created));
    }
    if let Some(creator) = &a.creator {
        g.add(node.clone(), dcterms::creator(), creator.clone());
    }
    if let Some(title) = &a.title {
        g.add(node.clone(), dc::title(), Literal::plain(title.clone()));
    }
    if let Some(when) = &a.when {
        g.add(node, oac::when(), datetime_literal(when));
    }
    g.extend(a.extra.iter().cloned());
    g
}

fn emit_body(g: &mut Graph, body: &BodyRef) {
    match &body.kind {
        BodyKind::Remote(uri) => g.add(uri.clone(), rdf::type_(), oac::body()),
        BodyKind::Inline { urn, content } => {
            g.add(urn.clone(), rdf::type_(), oac::body());
            emit_inline(g, urn, content);
        }
        BodyKind::Constrained(ct) => emit_constrained(g, ct, oac::constrained_body()),
    }
    if let Some(http) = &body.equivalent_http {
        g.add(http.clone(), owl::same_as(), body.node().clone());
    }
}

fn emit_target(g: &mut Graph, target: &TargetRef) {
    match &target.kind {
        TargetKind::Direct(uri) => g.add(uri.clone(), rdf::type_(), oac::target()),
        TargetKind::Constrained(ct) => emit_constrained(g, ct, oac::constrained_target()),
    }
    if let Some(whole) = &target.is_part_of {
        g.add(target.node().clone(), dcterms::is_part_of(), whole.clone());
    }
}

fn emit_constrained(g: &mut Graph, ct: &ConstrainedTarget, class: Iri) {
    g.add(ct.uri.clone(), rdf::type_(), class);
    g.add(ct.uri.clone(), oac::constrains(), ct.constrains.clone());
    g.add(ct.uri.clone(), oac::has_constraint(), ct.constraint.uri.clone());
    g.extend(ct.constraint.triples());
}

/// `cnt:` triples for an inline representation.
pub(crate) fn emit_inline(g: &mut Graph, node: &Iri, content: &InlineContent) {
    g.add(node.clone(), rdf::type_(), content.kind.class());
    g.add(node.clone(), cnt::chars(), Literal::plain(content.chars.clone()));
    if !content.character_encoding.is_empty() {
        g.add(
            node.clone(),
            cnt::character_encoding(),
            Literal::plain(content.character_encoding.clone()),
        );
    }
}

/// Read the annotation `annotation_uri` back out of `g`.
///
/// Triples the model does not recognise are kept in `extra` when their subject
/// is reachable from the annotation without passing through another
/// annotation node.
pub fn from_graph(g: &Graph, annotation_uri: &Iri) -> Result<Annotation, ModelError> {
    let subject = Subject::Iri(annotation_uri.clone());
    if !g.has_type(&subject, &oac::annotation()) {
        return Err(ModelError::NotAnAnnotation(annotation_uri.clone()));
    }
    let errors: Vec<_> = validation::check_annotation(g, &subject)
        .into_iter()
        .filter(|f| f.severity == Severity::Error)
        .collect();
    if !errors.is_empty() {
        return Err(ModelError::ModelViolation(errors));
    }

    let mut reader = Reader {
        g,
        consumed: BTreeSet::new(),
    };

    let mut types = BTreeSet::new();
    for object in reader.objects(&subject, &rdf::type_()) {
        if let Term::Iri(class) = object {
            reader.consume(&subject, &rdf::type_(), &Term::Iri(class.clone()));
            types.insert(class);
        }
    }

    let body = match reader.objects(&subject, &oac::has_body()).into_iter().next() {
        Some(term) => {
            let node = reader.iri_object(&subject, &oac::has_body(), term)?;
            Some(reader.body(node)?)
        }
        None => None,
    };

    let mut targets = Vec::new();
    for term in reader.objects(&subject, &oac::has_target()) {
        let node = reader.iri_object(&subject, &oac::has_target(), term)?;
        targets.push(reader.target(node)?);
    }
    targets.sort_by(|a, b| a.node().cmp(b.node()));

    let created = reader.datetime(&subject, &dcterms::created());
    let when = reader.datetime(&subject, &oac::when());
    let creator = reader.first_iri(&subject, &dcterms::creator());
    let title = reader
        .first_literal(&subject, &dc::title())
        .map(|l| l.lexical().to_string());

    let mut roots = vec![subject.clone()];
    if let Some(http) = body.as_ref().and_then(|b| b.equivalent_http.clone()) {
        roots.push(Subject::Iri(http));
    }
    let extra = reader.reachable_unconsumed(roots, &subject);

    let annotation = Annotation {
        uri: annotation_uri.clone(),
        body,
        targets,
        created,
        creator,
        title,
        when,
        types,
        extra,
    };
    annotation.check()?;
    Ok(annotation)
}

struct Reader<'g> {
    g: &'g Graph,
    consumed: BTreeSet<Triple>,
}

impl<'g> Reader<'g> {
    fn objects(&self, subject: &Subject, predicate: &Iri) -> Vec<Term> {
        self.g.objects(subject, predicate).cloned().collect()
    }

    fn consume(&mut self, subject: &Subject, predicate: &Iri, object: &Term) {
        self.consumed
            .insert(Triple::new(subject.clone(), predicate.clone(), object.clone()));
    }

    fn iri_object(&mut self, subject: &Subject, predicate: &Iri, term: Term) -> Result<Iri, ModelError> {
        match term {
            Term::Iri(iri) => {
                self.consume(subject, predicate, &Term::Iri(iri.clone()));
                Ok(iri)
            }
            other => Err(ModelError::Invalid(format!(
                "object of {predicate} must be an IRI, found {other}"
            ))),
        }
    }

    fn has_type(&mut self, node: &Iri, class: Iri) -> bool {
        let s = Subject::Iri(node.clone());
        if self.g.has_type(&s, &class) {
            self.consume(&s, &rdf::type_(), &Term::Iri(class));
            true
        } else {
            false
        }
    }

    fn body(&mut self, node: Iri) -> Result<BodyRef, ModelError> {
        let s = Subject::Iri(node.clone());
        self.has_type(&node, oac::body());
        let kind = if self.is_constrained(&node, oac::constrained_body()) {
            BodyKind::Constrained(self.constrained(node.clone())?)
        } else if node.is_urn_uuid() && self.g.objects(&s, &cnt::chars()).next().is_some() {
            let content = self.inline(&node)?;
            BodyKind::Inline {
                urn: node.clone(),
                content,
            }
        } else {
            BodyKind::Remote(node.clone())
        };
        let same_as = owl::same_as();
        let object = Term::Iri(node);
        let equivalent_http = self
            .g
            .subjects(&same_as, &object)
            .filter_map(|s| s.as_iri())
            .find(|iri| iri.is_http())
            .cloned();
        if let Some(http) = &equivalent_http {
            self.consume(&Subject::Iri(http.clone()), &same_as, &object);
        }
        Ok(BodyRef {
            kind,
            equivalent_http,
        })
    }

    fn target(&mut self, node: Iri) -> Result<TargetRef, ModelError> {
        let kind = if self.is_constrained(&node, oac::constrained_target()) {
            TargetKind::Constrained(self.constrained(node.clone())?)
        } else {
            self.has_type(&node, oac::target());
            TargetKind::Direct(node.clone())
        };
        let is_part_of = self.first_iri(&Subject::Iri(node), &dcterms::is_part_of());
        Ok(TargetRef { kind, is_part_of })
    }

    fn is_constrained(&mut self, node: &Iri, class: Iri) -> bool {
        let typed = self.has_type(node, class);
        typed
            || self
                .g
                .objects(&Subject::Iri(node.clone()), &oac::constrains())
                .next()
                .is_some()
    }

    fn constrained(&mut self, node: Iri) -> Result<ConstrainedTarget, ModelError> {
        let s = Subject::Iri(node.clone());
        let constrains = self
            .first_iri(&s, &oac::constrains())
            .ok_or_else(|| ModelError::Invalid(format!("{node} lacks oac:constrains")))?;
        let constraint_node = self
            .first_iri(&s, &oac::has_constraint())
            .ok_or_else(|| ModelError::Invalid(format!("{node} lacks oac:hasConstraint")))?;
        let (constraint, used) = Constraint::from_graph(self.g, &constraint_node)?;
        self.consumed.extend(used);
        ConstrainedTarget::new(node, constrains, constraint)
    }

    fn inline(&mut self, node: &Iri) -> Result<InlineContent, ModelError> {
        let (content, used) = read_inline(self.g, node)?;
        self.consumed.extend(used);
        Ok(content)
    }

    fn first_iri(&mut self, subject: &Subject, predicate: &Iri) -> Option<Iri> {
        let found = self
            .g
            .objects(subject, predicate)
            .find_map(|o| o.as_iri())
            .cloned()?;
        self.consume(subject, predicate, &Term::Iri(found.clone()));
        Some(found)
    }

    fn first_literal(&mut self, subject: &Subject, predicate: &Iri) -> Option<Literal> {
        let found = self
            .g
            .objects(subject, predicate)
            .find_map(|o| o.as_literal())
            .cloned()?;
        self.consume(subject, predicate, &Term::Literal(found.clone()));
        Some(found)
    }

    fn datetime(&mut self, subject: &Subject, predicate: &Iri) -> Option<chrono::DateTime<chrono::Utc>> {
        let (lit, dt) = self
            .g
            .objects(subject, predicate)
            .filter_map(|o| o.as_literal())
            .find_map(|l| parse_datetime(l.lexical()).map(|dt| (l.clone(), dt)))?;
        // only the canonical rendering round-trips; keep anything else as data
        if datetime_literal(&dt) == lit {
            self.consume(subject, predicate, &Term::Literal(lit));
        }
        Some(dt)
    }

    fn reachable_unconsumed(&self, roots: Vec<Subject>, annotation: &Subject) -> Graph {
        let mut seen: BTreeSet<Subject> = roots.iter().cloned().collect();
        let mut queue: VecDeque<Subject> = roots.into();
        let mut extra = Graph::new();
        let annotation_class = oac::annotation();
        while let Some(node) = queue.pop_front() {
            for t in self.g.about(&node) {
                if !self.consumed.contains(t) {
                    extra.insert(t.clone());
                }
                if let Some(next) = t.object.as_subject() {
                    if &next != annotation
                        && !self.g.has_type(&next, &annotation_class)
                        && seen.insert(next.clone())
                    {
                        queue.push_back(next);
                    }
                }
            }
        }
        extra
    }
}

/// Inline content at `node` plus the triples it was read from.
pub(crate) fn read_inline(g: &Graph, node: &Iri) -> Result<(InlineContent, Vec<Triple>), ModelError> {
    let s = Subject::Iri(node.clone());
    let mut used = Vec::new();
    let chars = g
        .objects(&s, &cnt::chars())
        .find_map(|o| o.as_literal())
        .ok_or_else(|| ModelError::InvalidInline(format!("{node} has no cnt:chars literal")))?
        .clone();
    used.push(Triple::new(s.clone(), cnt::chars(), chars.clone()));
    let encoding = g
        .objects(&s, &cnt::character_encoding())
        .find_map(|o| o.as_literal())
        .cloned();
    if let Some(enc) = &encoding {
        used.push(Triple::new(s.clone(), cnt::character_encoding(), enc.clone()));
    }
    let kind = g
        .objects(&s, &rdf::type_())
        .filter_map(|o| o.as_iri())
        .find_map(ContentKind::from_class);
    if let Some(kind) = kind {
        used.push(Triple::new(s.clone(), rdf::type_(), kind.class()));
    }
    let content = InlineContent {
        chars: chars.lexical().to_string(),
        character_encoding: encoding.map(|l| l.lexical().to_string()).unwrap_or_default(),
        kind: kind.unwrap_or(ContentKind::Text),
    };
    content.check()?;
    Ok((content, used))
}
