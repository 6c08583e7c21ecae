//! Fragment URIs for media (spatial, temporal, track, id), plain text
//! character and line ranges, PDF page views, and named anchors in markup.
//!
//! Parsing picks the family by grammar match unless a media type hint selects
//! one. Serialization is canonical: media dimensions in the order
//! `t`, `xywh`, `track`, `id`; the default `pixel:` unit omitted; `npt:` always
//! written; numbers in their shortest form.

mod parse;

use std::fmt;

use percent_encoding::{utf8_percent_encode, AsciiSet, NON_ALPHANUMERIC};
use thiserror::Error;

use crate::rdf::Iri;

pub use parse::parse_fragment;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FragmentError {
    #[error("offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("fragment {0:?} matches more than one grammar; supply a media type hint")]
    Ambiguous(String),
    #[error("invalid selector: {0}")]
    InvalidSelector(String),
    #[error("interval starts at or after the end of the media")]
    EmptyInterval,
    #[error("cannot compare {0} with {1}")]
    FamilyMismatch(Dimension, Dimension),
    #[error("missing context: {0}")]
    MissingContext(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SpatialUnit {
    Pixel,
    Percent,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialSelector {
    pub unit: SpatialUnit,
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl SpatialSelector {
    pub fn pixel(x: f64, y: f64, w: f64, h: f64) -> Self {
        SpatialSelector {
            unit: SpatialUnit::Pixel,
            x,
            y,
            w,
            h,
        }
    }

    pub fn percent(x: f64, y: f64, w: f64, h: f64) -> Self {
        SpatialSelector {
            unit: SpatialUnit::Percent,
            x,
            y,
            w,
            h,
        }
    }

    fn check(&self) -> Result<(), FragmentError> {
        for v in [self.x, self.y, self.w, self.h] {
            if !v.is_finite() || v < 0.0 {
                return Err(FragmentError::InvalidSelector(format!(
                    "spatial values must be finite and non-negative, got {v}"
                )));
            }
            if self.unit == SpatialUnit::Percent && v > 100.0 {
                return Err(FragmentError::InvalidSelector(format!(
                    "percent values must not exceed 100, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Normal play time range in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemporalSelector {
    pub start: Option<f64>,
    pub end: Option<f64>,
}

impl TemporalSelector {
    pub fn new(start: Option<f64>, end: Option<f64>) -> Result<Self, FragmentError> {
        let t = TemporalSelector { start, end };
        t.check()?;
        Ok(t)
    }

    fn check(&self) -> Result<(), FragmentError> {
        if self.start.is_none() && self.end.is_none() {
            return Err(FragmentError::InvalidSelector(
                "temporal range needs a start or an end".into(),
            ));
        }
        for v in [self.start, self.end].into_iter().flatten() {
            if !v.is_finite() || v < 0.0 {
                return Err(FragmentError::InvalidSelector(format!(
                    "times must be finite and non-negative, got {v}"
                )));
            }
        }
        if let (Some(s), Some(e)) = (self.start, self.end) {
            if s >= e {
                return Err(FragmentError::InvalidSelector(format!(
                    "temporal start {s} must precede end {e}"
                )));
            }
        }
        Ok(())
    }
}

/// Character or line range; `start == end` denotes a position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TextRange {
    pub start: u64,
    pub end: u64,
    /// `length=` / `md5=` integrity checks, kept verbatim and unverified.
    pub integrity: Vec<String>,
}

impl TextRange {
    pub fn new(start: u64, end: u64) -> Result<Self, FragmentError> {
        if end < start {
            return Err(FragmentError::InvalidSelector(format!(
                "range end {end} precedes start {start}"
            )));
        }
        Ok(TextRange {
            start,
            end,
            integrity: Vec::new(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViewRect {
    pub left: f64,
    pub top: f64,
    pub width: f64,
    pub height: f64,
}

/// PDF open parameters. `viewrect` values are stored as written, measured
/// from the top-left of the page; no conversion to PDF user space is done.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdfSelector {
    pub page: u32,
    pub viewrect: Option<ViewRect>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FragmentSelector {
    Spatial(SpatialSelector),
    Temporal(TemporalSelector),
    Track(String),
    NamedId(String),
    TextChar(TextRange),
    TextLine(TextRange),
    PdfView(PdfSelector),
    NamedAnchor(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dimension {
    Temporal,
    Spatial,
    Track,
    Id,
    Char,
    Line,
    Pdf,
    Anchor,
}

impl Dimension {
    pub fn is_media(self) -> bool {
        matches!(
            self,
            Dimension::Temporal | Dimension::Spatial | Dimension::Track | Dimension::Id
        )
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dimension::Temporal => "temporal",
            Dimension::Spatial => "spatial",
            Dimension::Track => "track",
            Dimension::Id => "id",
            Dimension::Char => "char",
            Dimension::Line => "line",
            Dimension::Pdf => "pdf",
            Dimension::Anchor => "anchor",
        })
    }
}

impl FragmentSelector {
    pub fn dimension(&self) -> Dimension {
        match self {
            FragmentSelector::Spatial(_) => Dimension::Spatial,
            FragmentSelector::Temporal(_) => Dimension::Temporal,
            FragmentSelector::Track(_) => Dimension::Track,
            FragmentSelector::NamedId(_) => Dimension::Id,
            FragmentSelector::TextChar(_) => Dimension::Char,
            FragmentSelector::TextLine(_) => Dimension::Line,
            FragmentSelector::PdfView(_) => Dimension::Pdf,
            FragmentSelector::NamedAnchor(_) => Dimension::Anchor,
        }
    }

    pub fn check(&self) -> Result<(), FragmentError> {
        match self {
            FragmentSelector::Spatial(s) => s.check(),
            FragmentSelector::Temporal(t) => t.check(),
            FragmentSelector::Track(name)
            | FragmentSelector::NamedId(name)
            | FragmentSelector::NamedAnchor(name) => {
                if name.is_empty() {
                    Err(FragmentError::InvalidSelector("empty name".into()))
                } else {
                    Ok(())
                }
            }
            FragmentSelector::TextChar(r) | FragmentSelector::TextLine(r) => {
                TextRange::new(r.start, r.end).map(|_| ())
            }
            FragmentSelector::PdfView(p) => {
                if p.page == 0 {
                    return Err(FragmentError::InvalidSelector(
                        "PDF pages are numbered from 1".into(),
                    ));
                }
                if let Some(v) = p.viewrect {
                    for n in [v.left, v.top, v.width, v.height] {
                        if !n.is_finite() || n < 0.0 {
                            return Err(FragmentError::InvalidSelector(format!(
                                "viewrect values must be non-negative, got {n}"
                            )));
                        }
                    }
                }
                Ok(())
            }
        }
    }

    /// Text of this selector inside a fragment, e.g. `xywh=1,2,3,4`.
    pub fn to_fragment_text(&self) -> String {
        match self {
            FragmentSelector::Spatial(s) => {
                let unit = match s.unit {
                    SpatialUnit::Pixel => "",
                    SpatialUnit::Percent => "percent:",
                };
                format!("xywh={unit}{},{},{},{}", num(s.x), num(s.y), num(s.w), num(s.h))
            }
            FragmentSelector::Temporal(t) => {
                let mut out = String::from("t=npt:");
                if let Some(start) = t.start {
                    out.push_str(&num(start));
                }
                if let Some(end) = t.end {
                    out.push(',');
                    out.push_str(&num(end));
                }
                out
            }
            FragmentSelector::Track(name) => format!("track={}", encode_name(name)),
            FragmentSelector::NamedId(name) => format!("id={}", encode_name(name)),
            FragmentSelector::TextChar(r) => text_range("char", r),
            FragmentSelector::TextLine(r) => text_range("line", r),
            FragmentSelector::PdfView(p) => match p.viewrect {
                Some(v) => format!(
                    "page={}&viewrect={},{},{},{}",
                    p.page,
                    num(v.left),
                    num(v.top),
                    num(v.width),
                    num(v.height)
                ),
                None => format!("page={}", p.page),
            },
            FragmentSelector::NamedAnchor(name) => encode_name(name),
        }
    }
}

fn text_range(scheme: &str, r: &TextRange) -> String {
    let mut out = if r.start == r.end {
        format!("{scheme}={}", r.start)
    } else {
        format!("{scheme}={},{}", r.start, r.end)
    };
    for check in &r.integrity {
        out.push(';');
        out.push_str(check);
    }
    out
}

/// Shortest decimal form: no leading zeros, no trailing fraction zeros, no
/// decimal point for integers.
pub(crate) fn num(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v}")
}

const NAME_ESCAPES: &AsciiSet = &NON_ALPHANUMERIC
    .remove(b'-')
    .remove(b'.')
    .remove(b'_')
    .remove(b'~');

fn encode_name(name: &str) -> String {
    utf8_percent_encode(name, NAME_ESCAPES).to_string()
}

/// A full resource plus the selectors addressing a segment of it.
#[derive(Debug, Clone, PartialEq)]
pub struct FragmentUri {
    pub base: Iri,
    pub selectors: Vec<FragmentSelector>,
}

impl FragmentUri {
    pub fn new(base: Iri, mut selectors: Vec<FragmentSelector>) -> Result<Self, FragmentError> {
        if base.fragment().is_some() {
            return Err(FragmentError::InvalidSelector(format!(
                "base {base} already has a fragment"
            )));
        }
        for s in &selectors {
            s.check()?;
        }
        selectors.sort_by_key(FragmentSelector::dimension);
        for pair in selectors.windows(2) {
            let (a, b) = (pair[0].dimension(), pair[1].dimension());
            if a == b {
                return Err(FragmentError::InvalidSelector(format!("{a} given twice")));
            }
            if !(a.is_media() && b.is_media()) {
                return Err(FragmentError::InvalidSelector(format!(
                    "{a} and {b} cannot be combined"
                )));
            }
        }
        Ok(FragmentUri { base, selectors })
    }

    /// Fragment text without the leading `#`.
    pub fn fragment_text(&self) -> String {
        self.selectors
            .iter()
            .map(FragmentSelector::to_fragment_text)
            .collect::<Vec<_>>()
            .join("&")
    }

    pub fn get(&self, dimension: Dimension) -> Option<&FragmentSelector> {
        self.selectors.iter().find(|s| s.dimension() == dimension)
    }
}

/// Canonical IRI for a fragment URI.
pub fn serialize_fragment(f: &FragmentUri) -> Iri {
    if f.selectors.is_empty() {
        return f.base.clone();
    }
    Iri::new(format!("{}#{}", f.base, f.fragment_text())).expect("base is absolute")
}

/// Numeric normal form of a selector. Idempotent.
pub fn canonicalize(s: &FragmentSelector) -> FragmentSelector {
    fn z(v: f64) -> f64 {
        if v == 0.0 {
            0.0
        } else {
            v
        }
    }
    match s {
        FragmentSelector::Spatial(sp) => FragmentSelector::Spatial(SpatialSelector {
            unit: sp.unit,
            x: z(sp.x),
            y: z(sp.y),
            w: z(sp.w),
            h: z(sp.h),
        }),
        FragmentSelector::Temporal(t) => FragmentSelector::Temporal(TemporalSelector {
            start: t.start.map(z),
            end: t.end.map(z),
        }),
        FragmentSelector::PdfView(p) => FragmentSelector::PdfView(PdfSelector {
            page: p.page,
            viewrect: p.viewrect.map(|v| ViewRect {
                left: z(v.left),
                top: z(v.top),
                width: z(v.width),
                height: z(v.height),
            }),
        }),
        other => other.clone(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x: f64,
    pub y: f64,
    pub width: f64,
    pub height: f64,
}

impl Rect {
    pub fn new(x: f64, y: f64, width: f64, height: f64) -> Self {
        Rect { x, y, width, height }
    }

    pub fn area(&self) -> f64 {
        self.width * self.height
    }

    pub fn intersection(&self, other: &Rect) -> Option<Rect> {
        let x0 = self.x.max(other.x);
        let y0 = self.y.max(other.y);
        let x1 = (self.x + self.width).min(other.x + other.width);
        let y1 = (self.y + self.height).min(other.y + other.height);
        (x1 > x0 && y1 > y0).then(|| Rect::new(x0, y0, x1 - x0, y1 - y0))
    }

    pub fn contains_point(&self, x: f64, y: f64) -> bool {
        x >= self.x && y >= self.y && x <= self.x + self.width && y <= self.y + self.height
    }
}

/// Pixel rectangle for a spatial selector on a `width` x `height` image,
/// percent units resolved and the result clipped to the image.
pub fn spatial_region(s: &SpatialSelector, width: f64, height: f64) -> Rect {
    let (x, y, w, h) = match s.unit {
        SpatialUnit::Pixel => (s.x, s.y, s.w, s.h),
        SpatialUnit::Percent => (
            s.x * width / 100.0,
            s.y * height / 100.0,
            s.w * width / 100.0,
            s.h * height / 100.0,
        ),
    };
    let x0 = x.min(width);
    let y0 = y.min(height);
    let x1 = (x + w).min(width);
    let y1 = (y + h).min(height);
    Rect::new(x0, y0, x1 - x0, y1 - y0)
}

/// Half-open `[start, end)` in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub start: f64,
    pub end: f64,
}

/// Resolve a temporal selector against a media duration.
pub fn temporal_interval(s: &TemporalSelector, duration: f64) -> Result<Interval, FragmentError> {
    let start = s.start.unwrap_or(0.0);
    if start >= duration {
        return Err(FragmentError::EmptyInterval);
    }
    let end = s.end.unwrap_or(duration).min(duration);
    Ok(Interval { start, end })
}

/// Media properties needed to resolve relative or open-ended selectors.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct OverlapContext {
    pub width: Option<f64>,
    pub height: Option<f64>,
    pub duration: Option<f64>,
}

/// Whether two selectors of the same dimension address intersecting segments
/// of positive measure. Names compare by equality.
pub fn selectors_overlap(
    a: &FragmentSelector,
    b: &FragmentSelector,
    ctx: &OverlapContext,
) -> Result<bool, FragmentError> {
    use FragmentSelector as F;
    match (a, b) {
        (F::Spatial(sa), F::Spatial(sb)) => {
            let ra = resolve_rect(sa, ctx)?;
            let rb = resolve_rect(sb, ctx)?;
            Ok(ra.intersection(&rb).is_some_and(|r| r.area() > 0.0))
        }
        (F::Temporal(ta), F::Temporal(tb)) => {
            let (Some(ia), Some(ib)) = (resolve_interval(ta, ctx), resolve_interval(tb, ctx)) else {
                return Ok(false);
            };
            Ok(ia.start.max(ib.start) < ia.end.min(ib.end))
        }
        (F::TextChar(ra), F::TextChar(rb)) | (F::TextLine(ra), F::TextLine(rb)) => {
            Ok(ra.start.max(rb.start) < ra.end.min(rb.end))
        }
        (F::PdfView(pa), F::PdfView(pb)) => {
            if pa.page != pb.page {
                return Ok(false);
            }
            Ok(match (pa.viewrect, pb.viewrect) {
                (Some(va), Some(vb)) => {
                    let ra = Rect::new(va.left, va.top, va.width, va.height);
                    let rb = Rect::new(vb.left, vb.top, vb.width, vb.height);
                    ra.intersection(&rb).is_some()
                }
                _ => true,
            })
        }
        (F::Track(na), F::Track(nb))
        | (F::NamedId(na), F::NamedId(nb))
        | (F::NamedAnchor(na), F::NamedAnchor(nb)) => Ok(na == nb),
        _ => Err(FragmentError::FamilyMismatch(a.dimension(), b.dimension())),
    }
}

/// Selector lists overlap when they share at least one dimension and every
/// shared dimension overlaps.
pub fn fragments_overlap(
    a: &[FragmentSelector],
    b: &[FragmentSelector],
    ctx: &OverlapContext,
) -> Result<bool, FragmentError> {
    let mut shared = 0;
    for sa in a {
        if let Some(sb) = b.iter().find(|sb| sb.dimension() == sa.dimension()) {
            shared += 1;
            if !selectors_overlap(sa, sb, ctx)? {
                return Ok(false);
            }
        }
    }
    if shared == 0 {
        let da = a
            .first()
            .map(FragmentSelector::dimension)
            .unwrap_or(Dimension::Anchor);
        let db = b
            .first()
            .map(FragmentSelector::dimension)
            .unwrap_or(Dimension::Anchor);
        return Err(FragmentError::FamilyMismatch(da, db));
    }
    Ok(true)
}

fn resolve_rect(s: &SpatialSelector, ctx: &OverlapContext) -> Result<Rect, FragmentError> {
    match (s.unit, ctx.width, ctx.height) {
        (_, Some(w), Some(h)) => Ok(spatial_region(s, w, h)),
        (SpatialUnit::Pixel, _, _) => Ok(Rect::new(s.x, s.y, s.w, s.h)),
        (SpatialUnit::Percent, _, _) => Err(FragmentError::MissingContext(
            "percent regions need the image width and height",
        )),
    }
}

fn resolve_interval(t: &TemporalSelector, ctx: &OverlapContext) -> Option<Interval> {
    match ctx.duration {
        Some(d) => temporal_interval(t, d).ok(),
        None => Some(Interval {
            start: t.start.unwrap_or(0.0),
            end: t.end.unwrap_or(f64::INFINITY),
        }),
    }
}
