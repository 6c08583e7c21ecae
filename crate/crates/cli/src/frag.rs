use std::process::ExitCode;

use clap::{Args, Subcommand};
use oac_core::fragments::{
    fragments_overlap, parse_fragment, serialize_fragment, FragmentSelector, FragmentUri, OverlapContext,
    PdfSelector, SpatialSelector, SpatialUnit, TemporalSelector, TextRange, ViewRect,
};
use oac_core::rdf::Iri;
use serde_json::{json, Value};

use crate::{CmdResult, Failure};

#[derive(Debug, Subcommand)]
pub enum FragCommand {
    /// Print the selectors of a fragment URI, one per line.
    Parse {
        uri: String,
        /// Media type that picks the fragment grammar, e.g. `text/html`.
        #[arg(long)]
        media_type: Option<String>,
    },
    /// Build a fragment URI from selector flags.
    Make(MakeArgs),
    /// Print whether two fragment URIs address overlapping segments.
    Overlap {
        a: String,
        b: String,
        #[arg(long)]
        media_type: Option<String>,
        /// Media width in pixels, for percent regions.
        #[arg(long)]
        width: Option<f64>,
        #[arg(long)]
        height: Option<f64>,
        /// Media duration in seconds, for open-ended intervals.
        #[arg(long)]
        duration: Option<f64>,
    },
}

#[derive(Debug, Args)]
pub struct MakeArgs {
    /// Resource URI without fragment.
    base: String,
    /// Time range `START,END`, `START` or `,END` in seconds.
    #[arg(long)]
    t: Option<String>,
    /// Region `X,Y,W,H`.
    #[arg(long)]
    xywh: Option<String>,
    /// Read `--xywh` as percentages.
    #[arg(long, requires = "xywh")]
    percent: bool,
    #[arg(long)]
    track: Option<String>,
    #[arg(long)]
    id: Option<String>,
    /// Character range `START,END` or position `N`.
    #[arg(long = "char")]
    chars: Option<String>,
    /// Line range `START,END` or position `N`.
    #[arg(long)]
    line: Option<String>,
    #[arg(long)]
    page: Option<u32>,
    /// PDF view rectangle `LEFT,TOP,WIDTH,HEIGHT`.
    #[arg(long, requires = "page")]
    viewrect: Option<String>,
    /// Named anchor, as for HTML.
    #[arg(long)]
    anchor: Option<String>,
}

pub fn run(cmd: &FragCommand, json: bool) -> CmdResult {
    match cmd {
        FragCommand::Parse { uri, media_type } => {
            let f = parse_fragment(&Iri::new(uri.as_str())?, media_type.as_deref())?;
            if json {
                let selectors: Vec<Value> = f.selectors.iter().map(selector_json).collect();
                println!("{:#}", json!({ "base": f.base, "selectors": selectors }));
            } else {
                for s in &f.selectors {
                    println!("{}", describe(s));
                }
            }
        }
        FragCommand::Make(args) => {
            let f = FragmentUri::new(Iri::new(args.base.as_str())?, make_selectors(args)?)?;
            let uri = serialize_fragment(&f);
            if json {
                println!("{:#}", json!({ "uri": uri }));
            } else {
                println!("{uri}");
            }
        }
        FragCommand::Overlap {
            a,
            b,
            media_type,
            width,
            height,
            duration,
        } => {
            let fa = parse_fragment(&Iri::new(a.as_str())?, media_type.as_deref())?;
            let fb = parse_fragment(&Iri::new(b.as_str())?, media_type.as_deref())?;
            if fa.base != fb.base {
                return Err(Failure(format!(
                    "{} and {} address different resources",
                    fa.base, fb.base
                )));
            }
            let ctx = OverlapContext {
                width: *width,
                height: *height,
                duration: *duration,
            };
            let overlap = fragments_overlap(&fa.selectors, &fb.selectors, &ctx)?;
            if json {
                println!("{:#}", json!({ "overlap": overlap }));
            } else {
                println!("{overlap}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn numbers(flag: &str, text: &str, n: usize) -> Result<Vec<f64>, Failure> {
    let values: Vec<f64> = text
        .split(',')
        .map(|v| v.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| Failure(format!("--{flag} {text:?}: {e}")))?;
    if values.len() != n {
        return Err(Failure(format!("--{flag} expects {n} comma-separated numbers")));
    }
    Ok(values)
}

fn optional(flag: &str, text: &str) -> Result<Option<f64>, Failure> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(None);
    }
    text.parse()
        .map(Some)
        .map_err(|e| Failure(format!("--{flag} {text:?}: {e}")))
}

fn range(flag: &str, text: &str) -> Result<TextRange, Failure> {
    let parse = |v: &str| {
        v.trim()
            .parse::<u64>()
            .map_err(|e| Failure(format!("--{flag} {text:?}: {e}")))
    };
    let (start, end) = match text.split_once(',') {
        Some((s, e)) => (parse(s)?, parse(e)?),
        None => {
            let p = parse(text)?;
            (p, p)
        }
    };
    Ok(TextRange::new(start, end)?)
}

fn make_selectors(args: &MakeArgs) -> Result<Vec<FragmentSelector>, Failure> {
    let mut out = Vec::new();
    if let Some(t) = &args.t {
        let (start, end) = match t.split_once(',') {
            Some((s, e)) => (optional("t", s)?, optional("t", e)?),
            None => (optional("t", t)?, None),
        };
        out.push(FragmentSelector::Temporal(TemporalSelector::new(start, end)?));
    }
    if let Some(xywh) = &args.xywh {
        let v = numbers("xywh", xywh, 4)?;
        out.push(FragmentSelector::Spatial(if args.percent {
            SpatialSelector::percent(v[0], v[1], v[2], v[3])
        } else {
            SpatialSelector::pixel(v[0], v[1], v[2], v[3])
        }));
    }
    if let Some(track) = &args.track {
        out.push(FragmentSelector::Track(track.clone()));
    }
    if let Some(id) = &args.id {
        out.push(FragmentSelector::NamedId(id.clone()));
    }
    if let Some(chars) = &args.chars {
        out.push(FragmentSelector::TextChar(range("char", chars)?));
    }
    if let Some(line) = &args.line {
        out.push(FragmentSelector::TextLine(range("line", line)?));
    }
    if let Some(page) = args.page {
        let viewrect = match &args.viewrect {
            Some(text) => {
                let v = numbers("viewrect", text, 4)?;
                Some(ViewRect {
                    left: v[0],
                    top: v[1],
                    width: v[2],
                    height: v[3],
                })
            }
            None => None,
        };
        out.push(FragmentSelector::PdfView(PdfSelector { page, viewrect }));
    }
    if let Some(anchor) = &args.anchor {
        out.push(FragmentSelector::NamedAnchor(anchor.clone()));
    }
    if out.is_empty() {
        return Err(Failure("no selector flags given".into()));
    }
    Ok(out)
}

fn unit(u: SpatialUnit) -> &'static str {
    match u {
        SpatialUnit::Pixel => "pixel",
        SpatialUnit::Percent => "percent",
    }
}

fn bound(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |v| v.to_string())
}

/// `spatial pixel 160 120 320 240`, `temporal npt 10 20`, `pdf 10 20 100 50 60`, ...
fn describe(s: &FragmentSelector) -> String {
    let dim = s.dimension();
    match s {
        FragmentSelector::Spatial(r) => format!("{dim} {} {} {} {} {}", unit(r.unit), r.x, r.y, r.w, r.h),
        FragmentSelector::Temporal(t) => format!("{dim} npt {} {}", bound(t.start), bound(t.end)),
        FragmentSelector::Track(name)
        | FragmentSelector::NamedId(name)
        | FragmentSelector::NamedAnchor(name) => {
            format!("{dim} {name}")
        }
        FragmentSelector::TextChar(r) | FragmentSelector::TextLine(r) => {
            let mut line = format!("{dim} {} {}", r.start, r.end);
            for check in &r.integrity {
                line.push(' ');
                line.push_str(check);
            }
            line
        }
        FragmentSelector::PdfView(p) => match p.viewrect {
            Some(v) => format!("{dim} {} {} {} {} {}", p.page, v.left, v.top, v.width, v.height),
            None => format!("{dim} {}", p.page),
        },
    }
}

fn selector_json(s: &FragmentSelector) -> Value {
    let family = s.dimension().to_string();
    match s {
        FragmentSelector::Spatial(r) => json!({
            "family": family, "unit": unit(r.unit), "x": r.x, "y": r.y, "w": r.w, "h": r.h,
        }),
        FragmentSelector::Temporal(t) => json!({ "family": family, "start": t.start, "end": t.end }),
        FragmentSelector::Track(name)
        | FragmentSelector::NamedId(name)
        | FragmentSelector::NamedAnchor(name) => {
            json!({ "family": family, "name": name })
        }
        FragmentSelector::TextChar(r) | FragmentSelector::TextLine(r) => json!({
            "family": family, "start": r.start, "end": r.end, "integrity": r.integrity,
        }),
        FragmentSelector::PdfView(p) => json!({
            "family": family,
            "page": p.page,
            "viewrect": p.viewrect.map(|v| [v.left, v.top, v.width, v.height]),
        }),
    }
}
