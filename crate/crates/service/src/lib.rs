//! HTTP service over a directory of `.bundle.json` files.
//!
//! Reads are concurrent. Writes to one fragment are serialized and guarded by a
//! version token: the SHA-256 of the bundle file the writer last read. A PUT with
//! any other token gets 409 and the file is left alone.

pub mod api;
pub mod error;
pub mod ops;
pub mod store;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::rejection::QueryRejection;
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderMap, HeaderValue};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use labov_core::format::Bundle;
use labov_core::label::ExactMatchMode;
use labov_core::lint::{lint_structure, LintConfig, LintFinding, Severity};
use labov_core::model::{ClauseId, Fragment, MacroLabel, MicroLabel, NarrativeSpan, Topic};
use labov_core::seg::{BedMode, DEFAULT_NT};
use labov_core::wizard::{Chart, ChartAnswer, PartialAnswers};
use labov_core::{AnnotatorLayer, Segmentation};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

pub use error::ApiError;
use store::Store;

/// Header naming the annotator making a request.
pub const ANNOTATOR_HEADER: &str = "x-annotator";

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub data_dir: PathBuf,
    pub lint: LintConfig,
    pub chart: Chart,
    pub n_t: usize,
}

impl ServiceConfig {
    pub fn new(data_dir: impl Into<PathBuf>) -> Self {
        ServiceConfig {
            data_dir: data_dir.into(),
            lint: LintConfig::default(),
            chart: Chart::builtin().clone(),
            n_t: DEFAULT_NT,
        }
    }
}

pub struct AppState {
    pub store: Store,
    pub config: ServiceConfig,
}

pub type Shared = Arc<AppState>;

impl AppState {
    pub fn open(config: ServiceConfig) -> std::io::Result<Shared> {
        Ok(Arc::new(AppState { store: Store::open(&config.data_dir)?, config }))
    }
}

pub fn router(state: Shared) -> Router {
    Router::new()
        .route("/fragments", get(list_fragments))
        .route("/fragments/{id}/layers/{annotator}", get(get_layer).put(put_layer))
        .route("/lint", post(lint))
        .route("/wizard/next", post(wizard_next))
        .route("/wizard/decide", post(wizard_decide))
        .route("/metrics/segmentation", post(metrics_segmentation))
        .route("/metrics/labels", post(metrics_labels))
        .route("/adjudicate", post(adjudicate))
        .route("/adjudicate/resolve", post(adjudicate_resolve))
        .route("/stats", get(stats))
        .fallback(|| async { ApiError::NotFound("no such route".into()) })
        .with_state(state)
}

/// Binds and serves until the process is stopped.
pub async fn serve(config: ServiceConfig, addr: SocketAddr) -> std::io::Result<()> {
    let state = AppState::open(config)?;
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(state)).await
}

fn json<T: DeserializeOwned>(body: &[u8]) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request(format!("invalid JSON body: {e}")))
}

#[derive(Serialize)]
struct FragmentSummary {
    fragment_id: String,
    topic: Topic,
    atoms: usize,
    annotators: Vec<String>,
    has_gold: bool,
    version: String,
}

async fn list_fragments(State(s): State<Shared>) -> Result<Json<Vec<FragmentSummary>>, ApiError> {
    let stored = s.store.list().await?;
    Ok(Json(
        stored
            .into_iter()
            .map(|st| FragmentSummary {
                atoms: st.bundle.atoms(),
                annotators: st.bundle.layers.iter().map(|l| l.annotator_id.clone()).collect(),
                has_gold: st.bundle.gold.is_some(),
                fragment_id: st.bundle.fragment_id,
                topic: st.bundle.topic,
                version: st.version,
            })
            .collect(),
    ))
}

#[derive(Serialize)]
struct LayerView<'a> {
    fragment_id: &'a str,
    annotator_id: &'a str,
    version: &'a str,
    raw_text: &'a str,
    reference: Option<&'a Segmentation>,
    layer: Option<&'a AnnotatorLayer>,
    findings: Vec<LintFinding>,
}

fn etag(version: &str) -> HeaderValue {
    HeaderValue::from_str(&format!("\"{version}\"")).expect("hex token is a valid header")
}

async fn get_layer(State(s): State<Shared>, Path((id, annotator)): Path<(String, String)>) -> Result<Response, ApiError> {
    let st = s.store.load(&id).await?;
    let layer = st.bundle.layer(&annotator);
    let findings = layer.map_or_else(Vec::new, |l| ops::lint(&st.bundle.layer_fragment(l), &s.config.lint).findings);
    let view = LayerView {
        fragment_id: &st.bundle.fragment_id,
        annotator_id: &annotator,
        version: &st.version,
        raw_text: &st.bundle.raw_text,
        reference: st.bundle.reference.as_ref(),
        layer,
        findings,
    };
    let mut resp = Json(view).into_response();
    resp.headers_mut().insert(header::ETAG, etag(&st.version));
    Ok(resp)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LayerBody {
    #[serde(default)]
    version: Option<String>,
    clause_boundaries: Segmentation,
    #[serde(default)]
    spans: Vec<NarrativeSpan>,
    #[serde(default)]
    micro: std::collections::BTreeMap<ClauseId, MicroLabel>,
    #[serde(rename = "macro", default)]
    macro_labels: std::collections::BTreeMap<ClauseId, MacroLabel>,
}

#[derive(Serialize)]
struct Saved {
    version: String,
    findings: Vec<LintFinding>,
}

fn if_match(headers: &HeaderMap) -> Result<Option<String>, ApiError> {
    match headers.get(header::IF_MATCH) {
        None => Ok(None),
        Some(v) => {
            let v = v.to_str().map_err(|_| ApiError::bad_request("If-Match is not ASCII"))?;
            Ok(Some(v.trim().trim_start_matches("W/").trim_matches('"').to_string()))
        }
    }
}

async fn put_layer(
    State(s): State<Shared>,
    Path((id, annotator)): Path<(String, String)>,
    headers: HeaderMap,
    body: Bytes,
) -> Result<Response, ApiError> {
    if let Some(who) = headers.get(ANNOTATOR_HEADER) {
        if who.to_str().ok() != Some(annotator.as_str()) {
            return Err(ApiError::Forbidden(format!("{ANNOTATOR_HEADER} does not match annotator {annotator:?}")));
        }
    }
    if annotator.trim().is_empty() {
        return Err(ApiError::bad_request("annotator id is empty"));
    }
    let body: LayerBody = json(&body)?;
    let token = if_match(&headers)?.or(body.version).ok_or(ApiError::VersionRequired)?;

    let lock = s.store.lock(&id);
    let _guard = lock.lock().await;
    let st = s.store.load(&id).await?;
    if st.version != token {
        return Err(ApiError::Conflict { current: st.version });
    }

    let mut bundle: Bundle = st.bundle;
    let layer = AnnotatorLayer {
        annotator_id: annotator.clone(),
        fragment_id: bundle.fragment_id.clone(),
        clause_boundaries: body.clause_boundaries,
        spans: body.spans,
        micro: body.micro,
        macro_labels: body.macro_labels,
    };
    match bundle.layers.iter_mut().find(|l| l.annotator_id == annotator) {
        Some(slot) => *slot = layer,
        None => bundle.layers.push(layer),
    }
    bundle.check().map_err(ApiError::bad_request)?;

    let layer = bundle.layer(&annotator).expect("just inserted");
    let view = bundle.layer_fragment(layer);
    let structural: Vec<LintFinding> = lint_structure(&view)
        .into_iter()
        .filter(|f| f.severity == Severity::Error && !s.config.lint.disabled.contains(&f.rule_id))
        .collect();
    if !structural.is_empty() {
        let ids: Vec<&str> = structural.iter().map(|f| f.rule_id.as_str()).collect();
        return Err(ApiError::BadRequest {
            message: format!("layer rejected: {}", ids.join(", ")),
            findings: structural,
        });
    }
    let findings = ops::lint(&view, &s.config.lint).findings;
    let version = s.store.save(&bundle).await?;
    let mut resp = Json(Saved { version: version.clone(), findings }).into_response();
    resp.headers_mut().insert(header::ETAG, etag(&version));
    Ok(resp)
}

async fn lint(State(s): State<Shared>, body: Bytes) -> Result<Json<ops::LintReport>, ApiError> {
    let fragment: Fragment = json(&body)?;
    Ok(Json(ops::lint(&fragment, &s.config.lint)))
}

async fn wizard_next(State(s): State<Shared>, body: Bytes) -> Result<Response, ApiError> {
    let answers: PartialAnswers = json(&body)?;
    Ok(Json(s.config.chart.next_question(&answers)).into_response())
}

#[derive(Serialize)]
struct Decision {
    label: Option<MicroLabel>,
}

async fn wizard_decide(State(s): State<Shared>, body: Bytes) -> Result<Response, ApiError> {
    let answers: ChartAnswer = json(&body)?;
    Ok(Json(Decision { label: s.config.chart.decide(&answers) }).into_response())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SegQuery {
    nt: Option<usize>,
    #[serde(default)]
    bed_mode: BedMode,
}

fn query<T>(q: Result<Query<T>, QueryRejection>) -> Result<T, ApiError> {
    q.map(|Query(q)| q).map_err(|e| ApiError::bad_request(e.body_text()))
}

async fn metrics_segmentation(
    State(s): State<Shared>,
    q: Result<Query<SegQuery>, QueryRejection>,
    body: Bytes,
) -> Result<Response, ApiError> {
    let q = query(q)?;
    let bundles = ops::parse_bundles(&body).map_err(ApiError::bad_request)?;
    let report = ops::segmentation_report(&bundles, q.nt.unwrap_or(s.config.n_t), q.bed_mode).map_err(ApiError::bad_request)?;
    Ok(Json(report).into_response())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LabelQuery {
    #[serde(default)]
    field: ops::LabelField,
    #[serde(default)]
    mode: ExactMatchMode,
}

async fn metrics_labels(q: Result<Query<LabelQuery>, QueryRejection>, body: Bytes) -> Result<Response, ApiError> {
    let q = query(q)?;
    let bundles = ops::parse_bundles(&body).map_err(ApiError::bad_request)?;
    let report = ops::label_report(&bundles, q.field, q.mode).map_err(ApiError::bad_request)?;
    Ok(Json(report).into_response())
}

async fn adjudicate(body: Bytes) -> Result<Response, ApiError> {
    let bundle = labov_core::format::parse_bundle(&body).map_err(ApiError::bad_request)?;
    Ok(Json(ops::adjudicate(&bundle).map_err(ApiError::bad_request)?).into_response())
}

async fn adjudicate_resolve(body: Bytes) -> Result<Response, ApiError> {
    let r: ops::Resolution = json(&body)?;
    Ok(Json(ops::resolve(r).map_err(ApiError::bad_request)?).into_response())
}

async fn stats(State(s): State<Shared>) -> Result<Response, ApiError> {
    let bundles: Vec<Bundle> = s.store.list().await?.into_iter().map(|st| st.bundle).collect();
    Ok(Json(ops::gold_stats(&bundles)).into_response())
}
