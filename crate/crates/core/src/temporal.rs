//! Temporal classes of annotations and reconstruction against archived
//! snapshots.

use std::collections::BTreeMap;
use std::fmt;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constraints::ConstraintKind;
use crate::model::{
    format_datetime, parse_datetime, Annotation, BodyKind, ConstrainedTarget, ModelError, TargetKind,
};
use crate::rdf::{Iri, Triple};
use crate::vocab::dcterms;

#[derive(Debug, Error)]
pub enum TemporalError {
    #[error("no archived versions of {0}")]
    UnknownOriginal(Iri),
    #[error("oac:when is attached both to the annotation and to a constraint")]
    ConflictingTemporalMarks,
    #[error("timeless annotations have no datetime to resolve against")]
    NotTimeAnchored,
    #[error("invalid archive index: {0}")]
    InvalidIndex(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A body or target position within an annotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    Body,
    /// Index into [`Annotation::targets`].
    Target(usize),
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Body => f.write_str("body"),
            Role::Target(i) => write!(f, "target[{i}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TemporalClass {
    Timeless,
    UniformTime(DateTime<Utc>),
    /// Never empty.
    VariedTime(BTreeMap<Role, DateTime<Utc>>),
}

impl TemporalClass {
    pub fn name(&self) -> &'static str {
        match self {
            TemporalClass::Timeless => "Timeless",
            TemporalClass::UniformTime(_) => "UniformTime",
            TemporalClass::VariedTime(_) => "VariedTime",
        }
    }
}

impl fmt::Display for TemporalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TemporalClass::Timeless => f.write_str("Timeless"),
            TemporalClass::UniformTime(when) => write!(f, "UniformTime {}", format_datetime(when)),
            TemporalClass::VariedTime(marks) => {
                f.write_str("VariedTime")?;
                for (role, when) in marks {
                    write!(f, " {role}={}", format_datetime(when))?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Memento {
    pub datetime: DateTime<Utc>,
    pub snapshot: Iri,
}

/// Archived snapshots per original resource, ascending by datetime.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ArchiveIndex {
    entries: BTreeMap<Iri, Vec<Memento>>,
}

#[derive(Serialize, Deserialize)]
struct MementoRecord {
    datetime: String,
    snapshot: Iri,
}

impl ArchiveIndex {
    pub fn new(entries: BTreeMap<Iri, Vec<Memento>>) -> Result<Self, TemporalError> {
        for (original, mementos) in &entries {
            if mementos.is_empty() {
                return Err(TemporalError::InvalidIndex(format!("{original} has no mementos")));
            }
            for pair in mementos.windows(2) {
                if pair[0].datetime >= pair[1].datetime {
                    return Err(TemporalError::InvalidIndex(format!(
                        "{original}: datetimes must be strictly increasing ({} then {})",
                        format_datetime(&pair[0].datetime),
                        format_datetime(&pair[1].datetime)
                    )));
                }
            }
            let mut seen = std::collections::BTreeSet::new();
            for m in mementos {
                if !seen.insert(&m.snapshot) {
                    return Err(TemporalError::InvalidIndex(format!(
                        "{original}: snapshot {} listed twice",
                        m.snapshot
                    )));
                }
            }
        }
        Ok(ArchiveIndex { entries })
    }

    /// Load `{"original": [{"datetime": "...Z", "snapshot": "..."}, ...]}`.
    pub fn from_json(text: &str) -> Result<Self, TemporalError> {
        let raw: BTreeMap<Iri, Vec<MementoRecord>> =
            serde_json::from_str(text).map_err(|e| TemporalError::InvalidIndex(e.to_string()))?;
        let mut entries = BTreeMap::new();
        for (original, records) in raw {
            let mut mementos = Vec::with_capacity(records.len());
            for r in records {
                let datetime = parse_datetime(&r.datetime).ok_or_else(|| {
                    TemporalError::InvalidIndex(format!("{original}: bad datetime {:?}", r.datetime))
                })?;
                mementos.push(Memento {
                    datetime,
                    snapshot: r.snapshot,
                });
            }
            entries.insert(original, mementos);
        }
        Self::new(entries)
    }

    pub fn to_json(&self) -> String {
        let raw: BTreeMap<&Iri, Vec<MementoRecord>> = self
            .entries
            .iter()
            .map(|(k, v)| {
                let records = v
                    .iter()
                    .map(|m| MementoRecord {
                        datetime: format_datetime(&m.datetime),
                        snapshot: m.snapshot.clone(),
                    })
                    .collect();
                (k, records)
            })
            .collect();
        serde_json::to_string_pretty(&raw).expect("index serializes")
    }

    pub fn mementos(&self, original: &Iri) -> Option<&[Memento]> {
        self.entries.get(original).map(Vec::as_slice)
    }

    pub fn originals(&self) -> impl Iterator<Item = &Iri> {
        self.entries.keys()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Temporal class of a checked annotation.
pub fn classify(a: &Annotation) -> Result<TemporalClass, TemporalError> {
    let marks = constraint_marks(a);
    match (a.when, marks.is_empty()) {
        (Some(_), false) => Err(TemporalError::ConflictingTemporalMarks),
        (Some(when), true) => Ok(TemporalClass::UniformTime(when)),
        (None, false) => Ok(TemporalClass::VariedTime(marks)),
        (None, true) => Ok(TemporalClass::Timeless),
    }
}

fn constraint_marks(a: &Annotation) -> BTreeMap<Role, DateTime<Utc>> {
    let mark = |ct: &ConstrainedTarget| {
        (ct.constraint.kind == ConstraintKind::WebTime)
            .then_some(ct.constraint.when)
            .flatten()
    };
    let mut marks = BTreeMap::new();
    if let Some(BodyKind::Constrained(ct)) = a.body.as_ref().map(|b| &b.kind) {
        if let Some(when) = mark(ct) {
            marks.insert(Role::Body, when);
        }
    }
    for (i, t) in a.targets.iter().enumerate() {
        if let TargetKind::Constrained(ct) = &t.kind {
            if let Some(when) = mark(ct) {
                marks.insert(Role::Target(i), when);
            }
        }
    }
    marks
}

/// The memento of `original` closest to `at`; ties go to the earlier one.
pub fn resolve_memento(
    idx: &ArchiveIndex,
    original: &Iri,
    at: DateTime<Utc>,
) -> Result<Memento, TemporalError> {
    let mementos = idx
        .mementos(original)
        .ok_or_else(|| TemporalError::UnknownOriginal(original.clone()))?;
    let after = mementos.partition_point(|m| m.datetime < at);
    let best = match (after.checked_sub(1).map(|i| &mementos[i]), mementos.get(after)) {
        (Some(before), Some(next)) => {
            if next.datetime - at < at - before.datetime {
                next
            } else {
                before
            }
        }
        (Some(only), None) | (None, Some(only)) => only,
        (None, None) => unreachable!("index entries are non-empty"),
    };
    Ok(best.clone())
}

/// Replace remote bodies and targets with the snapshots matching their
/// temporal marks. Each replaced node gains `(new dcterms:isVersionOf old)`.
pub fn reconstruct(a: &Annotation, idx: &ArchiveIndex) -> Result<Annotation, TemporalError> {
    let class = classify(a)?;
    let at = |role: Role| -> Option<DateTime<Utc>> {
        match &class {
            TemporalClass::Timeless => None,
            TemporalClass::UniformTime(when) => Some(*when),
            TemporalClass::VariedTime(marks) => marks.get(&role).copied().or(a.created),
        }
    };
    if class == TemporalClass::Timeless {
        return Err(TemporalError::NotTimeAnchored);
    }

    let mut out = a.clone();
    let mut provenance = Vec::new();
    if let (Some(body), Some(when)) = (out.body.as_mut(), at(Role::Body)) {
        match &mut body.kind {
            BodyKind::Remote(uri) => *uri = swap(idx, uri, when, &mut provenance)?,
            BodyKind::Constrained(ct) => ct.constrains = swap(idx, &ct.constrains, when, &mut provenance)?,
            BodyKind::Inline { .. } => {}
        }
    }
    for (i, target) in out.targets.iter_mut().enumerate() {
        let Some(when) = at(Role::Target(i)) else { continue };
        match &mut target.kind {
            TargetKind::Direct(uri) => {
                *uri = swap(idx, uri, when, &mut provenance)?;
                if target.is_part_of.is_some() {
                    target.is_part_of = Some(uri.defragment());
                }
            }
            TargetKind::Constrained(ct) => ct.constrains = swap(idx, &ct.constrains, when, &mut provenance)?,
        }
    }
    out.targets.sort_by(|x, y| x.node().cmp(y.node()));
    out.extra.extend(provenance);
    out.check()?;
    Ok(out)
}

fn swap(
    idx: &ArchiveIndex,
    uri: &Iri,
    when: DateTime<Utc>,
    provenance: &mut Vec<Triple>,
) -> Result<Iri, TemporalError> {
    let memento = resolve_memento(idx, &uri.defragment(), when)?;
    let replaced = match uri.fragment() {
        Some(fragment) => Iri::new(format!("{}#{fragment}", memento.snapshot.defragment()))
            .expect("snapshot keeps its scheme"),
        None => memento.snapshot,
    };
    if &replaced != uri {
        provenance.push(Triple::new(
            replaced.clone(),
            dcterms::is_version_of(),
            uri.clone(),
        ));
    }
    Ok(replaced)
}
