use std::process::ExitCode;

use clap::Args;
use oac_core::model::{assign_http_equivalence, to_graph, AnnotationBuilder, TargetRef};
use oac_core::rdf::Iri;
use oac_core::validation::validate_annotation;
use oac_core::{BodyRef, InlineContent, UrnMinter};
use serde_json::json;

use crate::{parse_when, render, report_json, CmdResult, Failure, RdfFormat};

#[derive(Debug, Args)]
pub struct NewArgs {
    /// Annotation URI; a fresh urn:uuid when omitted.
    #[arg(long)]
    uri: Option<String>,
    /// Remote body URI.
    #[arg(long, conflicts_with = "inline_body")]
    body: Option<String>,
    /// Plain-text body carried inside the annotation.
    #[arg(long)]
    inline_body: Option<String>,
    /// Target URI; repeat for several targets.
    #[arg(long = "target")]
    targets: Vec<String>,
    #[arg(long)]
    created: Option<String>,
    #[arg(long)]
    creator: Option<String>,
    #[arg(long)]
    title: Option<String>,
    /// Uniform-time mark.
    #[arg(long)]
    when: Option<String>,
    /// Give a URN body an HTTP URI under this base.
    #[arg(long)]
    base: Option<String>,
    /// Seed for URN minting; output is reproducible for a fixed seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = RdfFormat::Ntriples)]
    to: RdfFormat,
}

pub fn run(args: &NewArgs, json: bool) -> CmdResult {
    if args.targets.is_empty() {
        return Err(Failure("at least one --target is required".into()));
    }
    let mut minter = match args.seed {
        Some(seed) => UrnMinter::seeded(seed),
        None => UrnMinter::from_entropy(),
    };
    let uri = match &args.uri {
        Some(u) => Iri::new(u.as_str())?,
        None => minter.mint(),
    };
    let mut builder = AnnotationBuilder::new(uri);
    if let Some(body) = &args.body {
        builder = builder.body(BodyRef::remote(Iri::new(body.as_str())?));
    }
    if let Some(text) = &args.inline_body {
        builder = builder.body(BodyRef::inline(
            minter.mint(),
            InlineContent::text(text.as_str(), "utf-8"),
        )?);
    }
    for target in &args.targets {
        builder = builder.target(TargetRef::direct_with_part_of(Iri::new(target.as_str())?));
    }
    if let Some(created) = &args.created {
        builder = builder.created(parse_when(created)?);
    }
    if let Some(creator) = &args.creator {
        builder = builder.creator(Iri::new(creator.as_str())?);
    }
    if let Some(title) = &args.title {
        builder = builder.title(title.as_str());
    }
    if let Some(when) = &args.when {
        builder = builder.when(parse_when(when)?);
    }
    let mut annotation = builder.build()?;
    if let Some(base) = &args.base {
        annotation = assign_http_equivalence(&annotation, &Iri::new(base.as_str())?)?;
    }

    let report = validate_annotation(&annotation);
    let text = render(&to_graph(&annotation), args.to)?;
    if json {
        println!(
            "{:#}",
            json!({ "annotation": annotation.uri, "document": text, "report": report_json(&report) })
        );
    } else {
        print!("{text}");
        for finding in report.errors() {
            eprintln!("{finding}");
        }
    }
    Ok(if report.has_errors() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}
