use std::process::ExitCode;

use clap::Subcommand;
use oac_core::model::{format_datetime, from_graph};
use oac_core::rdf::{Iri, Subject, Term};
use oac_core::temporal::{classify, resolve_memento};
use oac_core::vocab::{oac, rdf};
use oac_core::{ArchiveIndex, TemporalClass};
use serde_json::{json, Value};

use crate::{parse_when, read_graph, read_input, CmdResult, Failure};

#[derive(Debug, Subcommand)]
pub enum TemporalCommand {
    /// Print Timeless, UniformTime or VariedTime for each annotation.
    ///
    /// With a single annotation only the class is printed; otherwise each
    /// line starts with the annotation URI.
    Classify {
        path: String,
        /// Only this annotation.
        #[arg(long)]
        annotation: Option<String>,
    },
    /// Print the snapshot of ORIGINAL nearest a datetime.
    Resolve {
        original: String,
        /// Archive index JSON.
        #[arg(long)]
        index: String,
        /// RFC 3339 or RFC 1123 datetime.
        #[arg(long)]
        at: String,
    },
}

pub fn run(cmd: &TemporalCommand, json: bool) -> CmdResult {
    match cmd {
        TemporalCommand::Classify { path, annotation } => classify_cmd(path, annotation.as_deref(), json),
        TemporalCommand::Resolve { original, index, at } => {
            let index =
                ArchiveIndex::from_json(&read_input(index)?).map_err(|e| Failure(format!("{index}: {e}")))?;
            let original = Iri::new(original.as_str())?;
            let memento = resolve_memento(&index, &original, parse_when(at)?)?;
            if json {
                println!(
                    "{:#}",
                    json!({
                        "original": original,
                        "datetime": format_datetime(&memento.datetime),
                        "snapshot": memento.snapshot,
                    })
                );
            } else {
                println!("{}", memento.snapshot);
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn class_json(class: &TemporalClass) -> Value {
    match class {
        TemporalClass::Timeless => json!({ "class": class.name() }),
        TemporalClass::UniformTime(when) => json!({ "class": class.name(), "when": format_datetime(when) }),
        TemporalClass::VariedTime(marks) => {
            let roles: serde_json::Map<String, Value> = marks
                .iter()
                .map(|(role, when)| (role.to_string(), Value::from(format_datetime(when))))
                .collect();
            json!({ "class": class.name(), "roles": roles })
        }
    }
}

fn classify_cmd(path: &str, only: Option<&str>, json: bool) -> CmdResult {
    let graph = read_graph(path)?;
    let class = Term::Iri(oac::annotation());
    let mut uris: Vec<Iri> = graph
        .subjects(&rdf::type_(), &class)
        .filter_map(|s| match s {
            Subject::Iri(iri) => Some(iri.clone()),
            Subject::Blank(_) => None,
        })
        .collect();
    uris.sort();
    uris.dedup();
    if let Some(only) = only {
        let only = Iri::new(only)?;
        if !uris.contains(&only) {
            return Err(Failure(format!("{only} is not an annotation in {path}")));
        }
        uris = vec![only];
    }
    if uris.is_empty() {
        return Err(Failure(format!("{path}: no annotations")));
    }

    let mut rows = Vec::new();
    for uri in &uris {
        let a = from_graph(&graph, uri).map_err(|e| Failure(format!("{uri}: {e}")))?;
        let class = classify(&a).map_err(|e| Failure(format!("{uri}: {e}")))?;
        rows.push((uri, class));
    }
    if json {
        let out: Vec<Value> = rows
            .iter()
            .map(|(uri, class)| {
                let mut v = class_json(class);
                v["annotation"] = Value::from(uri.as_str());
                v
            })
            .collect();
        println!("{:#}", Value::from(out));
    } else if rows.len() == 1 {
        println!("{}", rows[0].1);
    } else {
        for (uri, class) in &rows {
            println!("{uri} {class}");
        }
    }
    Ok(ExitCode::SUCCESS)
}
