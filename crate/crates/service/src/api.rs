//! HTTP interface.
//!
//! Graph payloads (policies, notices, records) are `text/turtle`; control
//! metadata is JSON. Graph endpoints answer 406 when the `Accept` header
//! rules out Turtle. The acting agent is taken from `X-Agent-Iri`.

use std::sync::{Arc, RwLock};

use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderMap, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use rights_core::graph::{serialize_turtle, Graph, Iri};
use rights_core::lifecycle::{HistoryKind, RequestId, RequestStatus, RightsRequest};
use rights_core::notices::export_notice;
use rights_core::policy::{export_policy, format_event_log};
use rights_core::records::{export_record, subject_key};
use rights_core::vocab::JustificationCategory;
use rights_core::{format_timestamp, parse_timestamp};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::store::{allowed_actions, notice_key, Action, DecisionInput, Store, StoreError};

pub const TURTLE: &str = "text/turtle";
pub const AGENT_HEADER: &str = "x-agent-iri";

pub type SharedStore = Arc<RwLock<Store>>;

pub fn router(store: SharedStore) -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/requests", post(submit).get(list_requests))
        .route("/requests/{id}", get(get_request))
        .route("/requests/{id}/events", get(get_events))
        .route("/requests/{id}/policy", get(get_policy))
        .route("/requests/{id}/{action}", post(decide))
        .route("/records/{key}", get(get_record))
        .route("/notices/{id}", get(get_notice))
        .route("/rights", get(get_rights))
        .route("/justifications", get(get_justifications))
        .route("/admin/clock", put(put_clock))
        .with_state(store)
}

pub struct ApiError(StoreError);

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        ApiError(e)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, kind) = match &self.0 {
            StoreError::NotFound(_) => (StatusCode::NOT_FOUND, "not-found"),
            StoreError::BadRequest { .. } => (StatusCode::BAD_REQUEST, "bad-request"),
            StoreError::Conflict(_) => (StatusCode::CONFLICT, "conflict"),
            StoreError::Unprocessable(_) => (StatusCode::UNPROCESSABLE_ENTITY, "unprocessable"),
            StoreError::Internal(e) => {
                tracing::error!(error = %e, "internal error");
                (StatusCode::INTERNAL_SERVER_ERROR, "internal")
            }
        };
        let mut body = json!({ "error": kind, "message": self.0.to_string() });
        if let StoreError::BadRequest {
            line: Some(line),
            column: Some(column),
            ..
        } = &self.0
        {
            body["line"] = json!(line);
            body["column"] = json!(column);
        }
        (status, Json(body)).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

fn not_acceptable() -> Response {
    (
        StatusCode::NOT_ACCEPTABLE,
        Json(json!({ "error": "not-acceptable", "message": "this resource is only available as text/turtle" })),
    )
        .into_response()
}

/// Whether the `Accept` header admits `text/turtle`. A missing header
/// accepts anything; a `q=0` range excludes.
pub fn accepts_turtle(headers: &HeaderMap) -> bool {
    let values: Vec<&str> = headers.get_all(header::ACCEPT).iter().filter_map(|v| v.to_str().ok()).collect();
    if values.is_empty() {
        return true;
    }
    values.iter().flat_map(|v| v.split(',')).any(|range| {
        let mut parts = range.split(';').map(str::trim);
        let media = parts.next().unwrap_or("").to_ascii_lowercase();
        let excluded = parts.any(|p| {
            p.strip_prefix("q=")
                .and_then(|q| q.parse::<f32>().ok())
                .is_some_and(|q| q <= 0.0)
        });
        !excluded && matches!(media.as_str(), "text/turtle" | "text/*" | "*/*")
    })
}

fn turtle(status: StatusCode, g: &Graph) -> Response {
    let mut res = (status, serialize_turtle(g)).into_response();
    res.headers_mut()
        .insert(header::CONTENT_TYPE, HeaderValue::from_static("text/turtle; charset=utf-8"));
    res
}

fn agent(headers: &HeaderMap) -> ApiResult<Option<Iri>> {
    match headers.get(AGENT_HEADER) {
        None => Ok(None),
        Some(v) => {
            let s = v.to_str().map_err(|_| StoreError::BadRequest {
                message: "X-Agent-Iri is not valid text".into(),
                line: None,
                column: None,
            })?;
            Iri::new(s.trim()).map(Some).map_err(|e| {
                StoreError::BadRequest {
                    message: format!("X-Agent-Iri: {e}"),
                    line: None,
                    column: None,
                }
                .into()
            })
        }
    }
}

fn read_store(store: &SharedStore) -> std::sync::RwLockReadGuard<'_, Store> {
    store.read().unwrap_or_else(|poisoned| poisoned.into_inner())
}

fn write_store(store: &SharedStore) -> std::sync::RwLockWriteGuard<'_, Store> {
    store.write().unwrap_or_else(|poisoned| poisoned.into_inner())
}

async fn health() -> Json<serde_json::Value> {
    Json(json!({ "status": "ok" }))
}

async fn submit(State(store): State<SharedStore>, headers: HeaderMap, body: String) -> ApiResult<Response> {
    if !accepts_turtle(&headers) {
        return Ok(not_acceptable());
    }
    let agent = agent(&headers)?;
    let (id, notice) = write_store(&store).submit(&body, agent)?;
    tracing::info!(request = %id, "request submitted");
    let mut res = turtle(StatusCode::CREATED, &export_notice(&notice));
    let h = res.headers_mut();
    if let Ok(v) = HeaderValue::from_str(&format!("/requests/{id}")) {
        h.insert(header::LOCATION, v);
    }
    if let Ok(v) = HeaderValue::from_str(id.as_str()) {
        h.insert("x-request-id", v);
    }
    if let Ok(v) = HeaderValue::from_str(notice_key(&notice.id)) {
        h.insert("x-notice-id", v);
    }
    Ok(res)
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DecisionBody {
    pub justification: Option<String>,
    pub outcome: Option<bool>,
}

async fn decide(
    State(store): State<SharedStore>,
    Path((id, action)): Path<(String, String)>,
    headers: HeaderMap,
    body: String,
) -> ApiResult<Response> {
    if !accepts_turtle(&headers) {
        return Ok(not_acceptable());
    }
    let action = Action::from_name(&action).ok_or_else(|| StoreError::NotFound(format!("unknown action {action:?}")))?;
    let body: DecisionBody = if body.trim().is_empty() {
        DecisionBody::default()
    } else {
        serde_json::from_str(&body).map_err(|e| StoreError::BadRequest {
            message: format!("decision body: {e}"),
            line: Some(e.line()),
            column: Some(e.column()),
        })?
    };
    let agent = agent(&headers)?;
    let id = RequestId(id);
    let mut guard = write_store(&store);
    let notice = guard.decide(
        &id,
        action,
        DecisionInput {
            justification: body.justification,
            outcome: body.outcome,
        },
        agent,
    )?;
    let status = guard.request(&id)?.status();
    drop(guard);
    tracing::info!(request = %id, action = action.name(), %status, "decision applied");
    let mut res = turtle(StatusCode::OK, &export_notice(&notice));
    let h = res.headers_mut();
    if let Ok(v) = HeaderValue::from_str(&status.to_string()) {
        h.insert("x-request-status", v);
    }
    if let Ok(v) = HeaderValue::from_str(notice_key(&notice.id)) {
        h.insert("x-notice-id", v);
    }
    Ok(res)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HistoryView {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub event: Option<String>,
    pub from: String,
    pub to: String,
    pub at: String,
    pub actor: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub justification: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub notice_id: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RequestView {
    pub id: String,
    pub iri: String,
    pub data_subject: String,
    pub controller: String,
    pub right: String,
    pub right_article: Option<String>,
    pub right_label: Option<String>,
    pub status: String,
    pub submitted_at: String,
    pub deadline: String,
    pub extension_applied: bool,
    pub identity_verified: bool,
    pub breach: bool,
    pub policy_id: String,
    pub policy_verdict: String,
    pub record_key: String,
    pub allowed_actions: Vec<String>,
    pub history: Vec<HistoryView>,
}

fn view(store: &Store, r: &RightsRequest) -> ApiResult<RequestView> {
    let right = store.vocab().right(r.right());
    Ok(RequestView {
        id: r.id().to_string(),
        iri: r.iri().to_string(),
        data_subject: r.data_subject().to_string(),
        controller: r.controller().to_string(),
        right: r.right().to_string(),
        right_article: right.map(|x| x.gdpr_article.clone()),
        right_label: right.map(|x| x.label.clone()),
        status: r.status().to_string(),
        submitted_at: format_timestamp(&r.submitted_at()),
        deadline: format_timestamp(&r.deadline()),
        extension_applied: r.extension_applied(),
        identity_verified: r.identity_verified(),
        breach: r.check_breach(store.now()).is_some(),
        policy_id: store.policy(r.id())?.id.to_string(),
        policy_verdict: store.policy_verdict(r.id())?.to_string(),
        record_key: subject_key(r.data_subject()),
        allowed_actions: allowed_actions(r).into_iter().map(|a| a.name().to_string()).collect(),
        history: r
            .history()
            .iter()
            .map(|e| HistoryView {
                kind: match e.kind {
                    HistoryKind::Submitted => "submitted",
                    HistoryKind::Transition(_) => "transition",
                    HistoryKind::IdentityVerified => "identity-verified",
                    HistoryKind::ExtensionApplied => "extension-applied",
                }
                .to_string(),
                event: match e.kind {
                    HistoryKind::Transition(ev) => Some(ev.name().to_string()),
                    _ => None,
                },
                from: e.from_status.to_string(),
                to: e.to_status.to_string(),
                at: format_timestamp(&e.at),
                actor: e.actor.to_string(),
                justification: e.justification.as_ref().map(Iri::to_string),
                notice_id: e.notice_id.as_deref().map(|n| n.rsplit('/').next().unwrap_or(n).to_string()),
            })
            .collect(),
    })
}

async fn get_request(State(store): State<SharedStore>, Path(id): Path<String>) -> ApiResult<Json<RequestView>> {
    let s = read_store(&store);
    let r = s.request(&RequestId(id))?;
    Ok(Json(view(&s, r)?))
}

#[derive(Debug, Deserialize)]
pub struct ListQuery {
    status: Option<String>,
}

async fn list_requests(State(store): State<SharedStore>, Query(q): Query<ListQuery>) -> ApiResult<Json<Vec<RequestView>>> {
    let status = match q.status.as_deref() {
        None | Some("") => None,
        Some(s) => Some(s.parse::<RequestStatus>().map_err(|e| StoreError::BadRequest {
            message: e,
            line: None,
            column: None,
        })?),
    };
    let s = read_store(&store);
    let views = s.requests(status).into_iter().map(|r| view(&s, r)).collect::<ApiResult<Vec<_>>>()?;
    Ok(Json(views))
}

async fn get_events(State(store): State<SharedStore>, Path(id): Path<String>) -> ApiResult<Response> {
    let s = read_store(&store);
    let text = format_event_log(s.events(&RequestId(id))?);
    Ok(([(header::CONTENT_TYPE, "text/plain; charset=utf-8")], text).into_response())
}

async fn get_policy(State(store): State<SharedStore>, Path(id): Path<String>, headers: HeaderMap) -> ApiResult<Response> {
    if !accepts_turtle(&headers) {
        return Ok(not_acceptable());
    }
    let s = read_store(&store);
    Ok(turtle(StatusCode::OK, &export_policy(s.policy(&RequestId(id))?)))
}

async fn get_record(State(store): State<SharedStore>, Path(key): Path<String>, headers: HeaderMap) -> ApiResult<Response> {
    if !accepts_turtle(&headers) {
        return Ok(not_acceptable());
    }
    let s = read_store(&store);
    Ok(turtle(StatusCode::OK, &export_record(s.record(&key)?)))
}

async fn get_notice(State(store): State<SharedStore>, Path(id): Path<String>, headers: HeaderMap) -> ApiResult<Response> {
    if !accepts_turtle(&headers) {
        return Ok(not_acceptable());
    }
    let s = read_store(&store);
    Ok(turtle(StatusCode::OK, &export_notice(s.notice(&id)?)))
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RightsQuery {
    legal_basis: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RightView {
    pub iri: String,
    pub article: String,
    pub label: String,
    pub exercisable_by_request: bool,
}

async fn get_rights(State(store): State<SharedStore>, Query(q): Query<RightsQuery>) -> ApiResult<Json<serde_json::Value>> {
    let s = read_store(&store);
    let ds = s.vocab();
    let as_view = |iri: &Iri| {
        ds.right(iri).map(|r| RightView {
            iri: r.iri.to_string(),
            article: r.gdpr_article.clone(),
            label: r.label.clone(),
            exercisable_by_request: r.exercisable_by_request,
        })
    };
    match q.legal_basis.as_deref() {
        None => {
            let rights: Vec<RightView> = ds.rights().filter_map(|r| as_view(&r.iri)).collect();
            Ok(Json(json!({ "rights": rights })))
        }
        Some(key) => {
            let basis = ds
                .resolve_legal_basis(key)
                .map_err(|e| StoreError::NotFound(e.to_string()))?;
            let applicable = ds.applicable_rights(&basis.iri).map_err(|e| StoreError::NotFound(e.to_string()))?;
            let rights: Vec<RightView> = applicable.iter().filter_map(as_view).collect();
            Ok(Json(json!({
                "legalBasis": basis.iri.to_string(),
                "clause": basis.gdpr_clause,
                "rights": rights,
            })))
        }
    }
}

#[derive(Debug, Deserialize)]
pub struct JustificationQuery {
    category: Option<String>,
}

async fn get_justifications(
    State(store): State<SharedStore>,
    Query(q): Query<JustificationQuery>,
) -> ApiResult<Json<serde_json::Value>> {
    let s = read_store(&store);
    let ds = s.vocab();
    let categories: Vec<JustificationCategory> = match q.category.as_deref() {
        None | Some("") => JustificationCategory::ALL.to_vec(),
        Some(c) => vec![c.parse::<JustificationCategory>().map_err(|e| StoreError::BadRequest {
            message: e.to_string(),
            line: None,
            column: None,
        })?],
    };
    let items: Vec<serde_json::Value> = categories
        .into_iter()
        .flat_map(|c| ds.justifications_for(c))
        .map(|j| {
            json!({
                "iri": j.iri.to_string(),
                "name": j.iri.local_name(),
                "label": j.label,
                "category": j.category.to_string(),
            })
        })
        .collect();
    Ok(Json(json!({ "justifications": items })))
}

#[derive(Debug, Deserialize)]
pub struct ClockBody {
    now: String,
}

async fn put_clock(State(store): State<SharedStore>, Json(body): Json<ClockBody>) -> ApiResult<Json<serde_json::Value>> {
    let t = parse_timestamp(&body.now).ok_or_else(|| StoreError::BadRequest {
        message: format!("not an RFC 3339 timestamp: {:?}", body.now),
        line: None,
        column: None,
    })?;
    let mut s = write_store(&store);
    s.set_clock(t)?;
    Ok(Json(json!({ "now": format_timestamp(&s.now()) })))
}
