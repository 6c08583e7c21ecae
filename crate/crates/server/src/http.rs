use std::sync::Arc;
use std::time::Instant;

use axum::body::Bytes;
use axum::extract::{Path, Query, Request, State};
use axum::http::{header, HeaderMap, HeaderValue, StatusCode};
use axum::middleware::{self, Next};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use chrono::{DateTime, Utc};
use oac_core::fragments::parse_fragment;
use oac_core::model::{mint_under, to_graph};
use oac_core::rdf::{default_prefixes, parse_ntriples, serialize_ntriples_canonical, serialize_turtle, Iri};
use oac_core::temporal::{resolve_memento, TemporalError};
use serde::Deserialize;
use serde_json::json;

use crate::store::SEARCH_CAP;
use crate::AppState;

const NTRIPLES: &str = "application/n-triples";
const TURTLE: &str = "text/turtle";

/// Representations offered for a stored annotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    NTriples,
    Turtle,
}

impl Format {
    const ALL: [Format; 2] = [Format::NTriples, Format::Turtle];

    pub fn media_type(self) -> &'static str {
        match self {
            Format::NTriples => NTRIPLES,
            Format::Turtle => TURTLE,
        }
    }
}

/// Pick a representation for an `Accept` header value.
///
/// Each format takes the q-value of the most specific range that matches it;
/// the highest positive q wins and ties go to N-Triples. No header at all
/// means N-Triples.
pub fn negotiate(accept: Option<&str>) -> Option<Format> {
    let Some(accept) = accept.filter(|a| !a.trim().is_empty()) else {
        return Some(Format::NTriples);
    };
    let ranges: Vec<(String, f32)> = accept
        .split(',')
        .filter_map(|part| {
            let mut pieces = part.split(';');
            let range = pieces.next()?.trim().to_ascii_lowercase();
            if range.is_empty() {
                return None;
            }
            let mut q = 1.0;
            for param in pieces {
                if let Some((k, v)) = param.split_once('=') {
                    if k.trim().eq_ignore_ascii_case("q") {
                        q = v.trim().parse::<f32>().unwrap_or(0.0).clamp(0.0, 1.0);
                    }
                }
            }
            Some((range, q))
        })
        .collect();

    let mut best: Option<(Format, f32)> = None;
    for format in Format::ALL {
        let media = format.media_type();
        let family = media.split('/').next().unwrap_or_default();
        let q = ranges
            .iter()
            .filter_map(|(range, q)| {
                let specificity = if range == media {
                    2
                } else if range.strip_suffix("/*") == Some(family) {
                    1
                } else if range == "*/*" {
                    0
                } else {
                    return None;
                };
                Some((specificity, *q))
            })
            .max_by_key(|(specificity, _)| *specificity)
            .map(|(_, q)| q)
            .unwrap_or(0.0);
        if q > 0.0 && !matches!(best, Some((_, bq)) if bq >= q) {
            best = Some((format, q));
        }
    }
    best.map(|(format, _)| format)
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/annotations", post(ingest))
        .route("/annotations/:id", get(get_annotation))
        .route("/search", get(search))
        .route("/timegate/:original", get(timegate))
        .layer(middleware::from_fn(log_request))
        .with_state(state)
}

async fn log_request(req: Request, next: Next) -> Response {
    let method = req.method().clone();
    let uri = req.uri().clone();
    let started = Instant::now();
    let response = next.run(req).await;
    tracing::info!(
        "{} {} {} {:.1}ms",
        method,
        uri,
        response.status().as_u16(),
        started.elapsed().as_secs_f64() * 1000.0
    );
    response
}

fn problem(status: StatusCode, message: impl Into<String>) -> Response {
    (status, Json(json!({ "error": message.into() }))).into_response()
}

async fn ingest(State(state): State<Arc<AppState>>, headers: HeaderMap, body: Bytes) -> Response {
    let content_type = headers
        .get(header::CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .and_then(|v| v.split(';').next())
        .map(|v| v.trim().to_ascii_lowercase());
    if content_type.as_deref() != Some(NTRIPLES) {
        return problem(
            StatusCode::UNSUPPORTED_MEDIA_TYPE,
            format!("expected Content-Type {NTRIPLES}"),
        );
    }
    let Ok(text) = std::str::from_utf8(&body) else {
        return problem(StatusCode::BAD_REQUEST, "body is not UTF-8");
    };
    let graph = match parse_ntriples(text) {
        Ok(g) => g,
        Err(e) => return problem(StatusCode::BAD_REQUEST, e.to_string()),
    };
    let outcome = state
        .store
        .write()
        .expect("store lock")
        .ingest(&graph, &state.base);
    let status = if !outcome.stored.is_empty() {
        StatusCode::CREATED
    } else if outcome.rejected.is_empty() {
        return problem(StatusCode::UNPROCESSABLE_ENTITY, "no oac:Annotation in the graph");
    } else {
        StatusCode::UNPROCESSABLE_ENTITY
    };
    (status, Json(outcome)).into_response()
}

fn annotation_uri(state: &AppState, id: &str) -> Option<Iri> {
    if id.contains("://") {
        return Iri::new(id).ok();
    }
    if id.starts_with("urn:") {
        let home = Iri::new(format!("{}annotations/", state.base)).ok()?;
        return mint_under(&home, &Iri::new(id).ok()?).ok();
    }
    Iri::new(format!("{}annotations/{id}", state.base)).ok()
}

async fn get_annotation(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    headers: HeaderMap,
) -> Response {
    let accept = headers.get(header::ACCEPT).and_then(|v| v.to_str().ok());
    let Some(format) = negotiate(accept) else {
        let supported: Vec<&str> = Format::ALL.iter().map(|f| f.media_type()).collect();
        let mut response = (
            StatusCode::NOT_ACCEPTABLE,
            Json(json!({ "error": "no acceptable representation", "supported": supported })),
        )
            .into_response();
        response
            .headers_mut()
            .insert(header::VARY, HeaderValue::from_static("Accept"));
        return response;
    };
    let Some(uri) = annotation_uri(&state, &id) else {
        return problem(StatusCode::NOT_FOUND, format!("no annotation {id}"));
    };
    let graph = {
        let store = state.store.read().expect("store lock");
        match store.get(&uri) {
            Some(a) => to_graph(a),
            None => return problem(StatusCode::NOT_FOUND, format!("no annotation {uri}")),
        }
    };
    let body = match format {
        Format::NTriples => match serialize_ntriples_canonical(&graph) {
            Ok(text) => text,
            Err(e) => return problem(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()),
        },
        Format::Turtle => serialize_turtle(&graph, &default_prefixes()),
    };
    (
        [
            (header::CONTENT_TYPE, format.media_type()),
            (header::VARY, "Accept"),
        ],
        body,
    )
        .into_response()
}

#[derive(Debug, Deserialize)]
struct SearchParams {
    target: String,
    selector: Option<String>,
}

async fn search(State(state): State<Arc<AppState>>, Query(params): Query<SearchParams>) -> Response {
    let target = match Iri::new(params.target.as_str()) {
        Ok(t) => t.defragment(),
        Err(e) => return problem(StatusCode::BAD_REQUEST, e.to_string()),
    };
    let selectors = match params.selector.as_deref().map(|s| s.trim_start_matches('#')) {
        Some(s) if !s.is_empty() => {
            let parsed = Iri::new(format!("{target}#{s}"))
                .map_err(|e| e.to_string())
                .and_then(|uri| parse_fragment(&uri, None).map_err(|e| e.to_string()));
            match parsed {
                Ok(f) => Some(f.selectors),
                Err(e) => return problem(StatusCode::BAD_REQUEST, format!("selector: {e}")),
            }
        }
        _ => None,
    };
    let mut results = state
        .store
        .read()
        .expect("store lock")
        .query(&target, selectors.as_deref());
    let truncated = results.len() > SEARCH_CAP;
    results.truncate(SEARCH_CAP);
    Json(json!({
        "target": target,
        "results": results,
        "truncated": truncated,
    }))
    .into_response()
}

/// `Accept-Datetime` in RFC 1123 form, e.g. `Sat, 12 Mar 2011 11:45:00 GMT`.
fn parse_http_date(value: &str) -> Option<DateTime<Utc>> {
    DateTime::parse_from_rfc2822(value.trim())
        .ok()
        .map(|dt| dt.with_timezone(&Utc))
}

fn http_date(dt: &DateTime<Utc>) -> String {
    dt.format("%a, %d %b %Y %H:%M:%S GMT").to_string()
}

async fn timegate(
    State(state): State<Arc<AppState>>,
    Path(original): Path<String>,
    headers: HeaderMap,
) -> Response {
    let Some(index) = &state.archive else {
        return problem(StatusCode::NOT_FOUND, "no archive index loaded");
    };
    let original = match Iri::new(original) {
        Ok(o) => o,
        Err(e) => return problem(StatusCode::BAD_REQUEST, e.to_string()),
    };
    let at = match headers.get("accept-datetime") {
        None => None,
        Some(value) => match value.to_str().ok().and_then(parse_http_date) {
            Some(at) => Some(at),
            None => return problem(StatusCode::BAD_REQUEST, "unparsable Accept-Datetime"),
        },
    };
    let chosen = match at {
        Some(at) => resolve_memento(index, &original, at),
        None => index
            .mementos(&original)
            .and_then(|m| m.last().cloned())
            .ok_or(TemporalError::UnknownOriginal(original.clone())),
    };
    match chosen {
        Ok(memento) => (
            StatusCode::FOUND,
            [
                (header::LOCATION, memento.snapshot.to_string()),
                (
                    header::HeaderName::from_static("memento-datetime"),
                    http_date(&memento.datetime),
                ),
                (header::VARY, "accept-datetime".to_string()),
            ],
        )
            .into_response(),
        Err(TemporalError::UnknownOriginal(o)) => {
            problem(StatusCode::NOT_FOUND, format!("no mementos for {o}"))
        }
        Err(e) => problem(StatusCode::BAD_REQUEST, e.to_string()),
    }
}
