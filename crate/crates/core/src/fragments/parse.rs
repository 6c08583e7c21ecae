use percent_encoding::percent_decode_str;

use super::{
    FragmentError, FragmentSelector, FragmentUri, PdfSelector, SpatialSelector, SpatialUnit,
    TemporalSelector, TextRange, ViewRect,
};
use crate::rdf::Iri;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    Media,
    Text,
    Pdf,
    Anchor,
}

const MEDIA_DIMENSIONS: [&str; 4] = ["t", "xywh", "track", "id"];

/// Parse the fragment of `uri`. `media_hint` (e.g. `image/png`) selects the
/// grammar outright; without it the most specific matching grammar wins.
pub fn parse_fragment(uri: &Iri, media_hint: Option<&str>) -> Result<FragmentUri, FragmentError> {
    let base = uri.defragment();
    let text = uri.as_str();
    let Some(hash) = text.find('#') else {
        return Ok(FragmentUri {
            base,
            selectors: Vec::new(),
        });
    };
    let fragment = &text[hash + 1..];
    if fragment.is_empty() {
        return Ok(FragmentUri {
            base,
            selectors: Vec::new(),
        });
    }
    let offset = hash + 1;
    let family = match media_hint.and_then(family_for_media_type) {
        Some(f) => f,
        None => sniff(fragment)?,
    };
    let selectors = match family {
        Family::Media => parse_media(fragment, offset)?,
        Family::Text => vec![parse_text(fragment, offset)?],
        Family::Pdf => vec![parse_pdf(fragment, offset)?],
        Family::Anchor => vec![FragmentSelector::NamedAnchor(decode_name(fragment, offset)?)],
    };
    FragmentUri::new(base, selectors).map_err(|e| match e {
        FragmentError::InvalidSelector(message) => FragmentError::Parse { offset, message },
        other => other,
    })
}

fn family_for_media_type(hint: &str) -> Option<Family> {
    let essence = hint.split(';').next()?.trim().to_ascii_lowercase();
    let (kind, sub) = essence.split_once('/')?;
    match (kind, sub) {
        ("image" | "video" | "audio", _) => Some(Family::Media),
        ("text", "plain") => Some(Family::Text),
        ("application", "pdf") => Some(Family::Pdf),
        ("text", "html" | "xml") | ("application", "xhtml+xml" | "xml") => Some(Family::Anchor),
        (_, s) if s.ends_with("+xml") => Some(Family::Anchor),
        _ => None,
    }
}

fn sniff(fragment: &str) -> Result<Family, FragmentError> {
    let is_media = fragment.split('&').all(|part| {
        part.split_once('=')
            .is_some_and(|(name, _)| MEDIA_DIMENSIONS.contains(&name))
    });
    if is_media {
        Ok(Family::Media)
    } else if fragment.starts_with("char=") || fragment.starts_with("line=") {
        Ok(Family::Text)
    } else if fragment.starts_with("page=") {
        Ok(Family::Pdf)
    } else if !fragment.contains('=') {
        Ok(Family::Anchor)
    } else {
        // key=value shape of no known grammar, or an anchor name containing '='
        Err(FragmentError::Ambiguous(fragment.to_string()))
    }
}

fn perr(offset: usize, message: impl Into<String>) -> FragmentError {
    FragmentError::Parse {
        offset,
        message: message.into(),
    }
}

fn parse_media(fragment: &str, offset: usize) -> Result<Vec<FragmentSelector>, FragmentError> {
    let mut selectors: Vec<FragmentSelector> = Vec::new();
    let mut at = offset;
    for part in fragment.split('&') {
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| perr(at, "expected name=value"))?;
        let value_at = at + name.len() + 1;
        let selector = match name {
            "t" => FragmentSelector::Temporal(parse_temporal(value, value_at)?),
            "xywh" => FragmentSelector::Spatial(parse_xywh(value, value_at)?),
            "track" => FragmentSelector::Track(decode_name(value, value_at)?),
            "id" => FragmentSelector::NamedId(decode_name(value, value_at)?),
            other => return Err(perr(at, format!("unknown media fragment dimension {other:?}"))),
        };
        // a repeated dimension replaces the earlier one
        selectors.retain(|s| s.dimension() != selector.dimension());
        selectors.push(selector);
        at += part.len() + 1;
    }
    Ok(selectors)
}

fn parse_temporal(value: &str, at: usize) -> Result<TemporalSelector, FragmentError> {
    let (body, body_at) = match value.split_once(':') {
        Some(("npt", rest)) => (rest, at + 4),
        Some((scheme, _)) if scheme.chars().all(|c| c.is_ascii_alphabetic()) => {
            return Err(perr(
                at,
                format!("unsupported time scheme {scheme:?}; only npt is supported"),
            ))
        }
        _ => (value, at),
    };
    let (start_text, end_text) = match body.split_once(',') {
        Some((s, e)) => (s, Some(e)),
        None => (body, None),
    };
    let start = if start_text.is_empty() {
        None
    } else {
        Some(parse_npt(start_text, body_at)?)
    };
    let end_at = body_at + start_text.len() + 1;
    let end = match end_text {
        Some("") => return Err(perr(end_at, "missing end time after ','")),
        Some(e) => Some(parse_npt(e, end_at)?),
        None => None,
    };
    if start.is_none() && end.is_none() {
        return Err(perr(body_at, "empty time range"));
    }
    if let (Some(s), Some(e)) = (start, end) {
        if s >= e {
            return Err(perr(end_at, format!("end {e} must be after start {s}")));
        }
    }
    Ok(TemporalSelector { start, end })
}

/// `ss[.frac]`, `mm:ss[.frac]` or `h:mm:ss[.frac]`.
fn parse_npt(text: &str, at: usize) -> Result<f64, FragmentError> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || perr(at, format!("malformed npt time {text:?}"));
    let seconds = |s: &str| parse_decimal(s).ok_or_else(bad);
    let two_digits = |s: &str, max: u32| -> Result<f64, FragmentError> {
        if s.len() == 2 && s.chars().all(|c| c.is_ascii_digit()) {
            let v: u32 = s.parse().map_err(|_| bad())?;
            if v <= max {
                return Ok(f64::from(v));
            }
        }
        Err(bad())
    };
    let clock_seconds = |s: &str| -> Result<f64, FragmentError> {
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        let whole = two_digits(int, 59)?;
        if !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        Ok(whole + parse_decimal(&format!("0.{frac}0")).ok_or_else(bad)?)
    };
    match parts.as_slice() {
        [s] => seconds(s),
        [m, s] => Ok(two_digits(m, 59)? * 60.0 + clock_seconds(s)?),
        [h, m, s] => {
            if h.is_empty() || !h.chars().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            let hours: f64 = h.parse().map_err(|_| bad())?;
            Ok(hours * 3600.0 + two_digits(m, 59)? * 60.0 + clock_seconds(s)?)
        }
        _ => Err(bad()),
    }
}

/// `DIGIT+ ["." DIGIT*]`
fn parse_decimal(text: &str) -> Option<f64> {
    let (int, frac) = match text.split_once('.') {
        Some((i, f)) => (i, f),
        None => (text, ""),
    };
    if int.is_empty() || !int.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit())
    {
        return None;
    }
    text.parse().ok().filter(|v: &f64| v.is_finite())
}

fn parse_four(value: &str, at: usize, what: &str) -> Result<[f64; 4], FragmentError> {
    let mut out = [0.0; 4];
    let mut pos = at;
    let mut count = 0;
    for (i, item) in value.split(',').enumerate() {
        if i >= 4 {
            return Err(perr(pos, format!("{what} takes exactly four values")));
        }
        out[i] = parse_decimal(item).ok_or_else(|| perr(pos, format!("malformed {what} value {item:?}")))?;
        pos += item.len() + 1;
        count += 1;
    }
    if count != 4 {
        return Err(perr(at, format!("{what} takes exactly four values")));
    }
    Ok(out)
}

fn parse_xywh(value: &str, at: usize) -> Result<SpatialSelector, FragmentError> {
    let (unit, rest, rest_at) = if let Some(r) = value.strip_prefix("pixel:") {
        (SpatialUnit::Pixel, r, at + 6)
    } else if let Some(r) = value.strip_prefix("percent:") {
        (SpatialUnit::Percent, r, at + 8)
    } else {
        (SpatialUnit::Pixel, value, at)
    };
    let [x, y, w, h] = parse_four(rest, rest_at, "xywh")?;
    let s = SpatialSelector { unit, x, y, w, h };
    s.check().map_err(|e| perr(rest_at, e.to_string()))?;
    Ok(s)
}

fn parse_text(fragment: &str, offset: usize) -> Result<FragmentSelector, FragmentError> {
    let mut pieces = fragment.split(';');
    let head = pieces.next().unwrap_or_default();
    let (scheme, range) = head
        .split_once('=')
        .ok_or_else(|| perr(offset, "expected char= or line="))?;
    let range_at = offset + scheme.len() + 1;
    let int = |s: &str, at: usize| -> Result<u64, FragmentError> {
        if s.is_empty() || !s.chars().all(|c| c.is_ascii_digit()) {
            return Err(perr(at, format!("malformed position {s:?}")));
        }
        s.parse()
            .map_err(|_| perr(at, format!("position {s:?} out of range")))
    };
    let (start, end) = match range.split_once(',') {
        Some(("", e)) => (0, int(e, range_at + 1)?),
        Some((s, "")) => {
            return Err(perr(
                range_at + s.len() + 1,
                "open-ended ranges need the resource length and are not supported",
            ))
        }
        Some((s, e)) => (int(s, range_at)?, int(e, range_at + s.len() + 1)?),
        None => {
            let p = int(range, range_at)?;
            (p, p)
        }
    };
    if end < start {
        return Err(perr(range_at, format!("range end {end} precedes start {start}")));
    }
    let mut at = offset + head.len() + 1;
    let mut integrity = Vec::new();
    for check in pieces {
        if !(check.starts_with("length=") || check.starts_with("md5=")) {
            return Err(perr(at, format!("unknown integrity check {check:?}")));
        }
        integrity.push(check.to_string());
        at += check.len() + 1;
    }
    let r = TextRange {
        start,
        end,
        integrity,
    };
    match scheme {
        "char" => Ok(FragmentSelector::TextChar(r)),
        "line" => Ok(FragmentSelector::TextLine(r)),
        other => Err(perr(offset, format!("unknown text fragment scheme {other:?}"))),
    }
}

fn parse_pdf(fragment: &str, offset: usize) -> Result<FragmentSelector, FragmentError> {
    let mut page = None;
    let mut viewrect = None;
    let mut at = offset;
    for part in fragment.split('&') {
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| perr(at, "expected name=value"))?;
        let value_at = at + name.len() + 1;
        match name {
            "page" if page.is_none() => {
                let n: u32 = value
                    .parse()
                    .ok()
                    .filter(|n| *n >= 1 && value.chars().all(|c| c.is_ascii_digit()))
                    .ok_or_else(|| perr(value_at, format!("malformed page number {value:?}")))?;
                page = Some(n);
            }
            "viewrect" if viewrect.is_none() => {
                let [left, top, width, height] = parse_four(value, value_at, "viewrect")?;
                viewrect = Some(ViewRect {
                    left,
                    top,
                    width,
                    height,
                });
            }
            other => {
                return Err(perr(
                    at,
                    format!("unsupported or repeated PDF parameter {other:?}"),
                ))
            }
        }
        at += part.len() + 1;
    }
    let page = page.ok_or_else(|| perr(offset, "missing page="))?;
    Ok(FragmentSelector::PdfView(PdfSelector { page, viewrect }))
}

fn decode_name(text: &str, at: usize) -> Result<String, FragmentError> {
    if text.is_empty() {
        return Err(perr(at, "empty name"));
    }
    percent_decode_str(text)
        .decode_utf8()
        .map(|s| s.into_owned())
        .map_err(|_| perr(at, "percent-encoded name is not UTF-8"))
}
