//! JSON over HTTP.
//!
//! | method | path | body / query |
//! |---|---|---|
//! | POST | `/api/fortress` | `{text, parent_id?, layout?}` |
//! | GET | `/api/fortress` | `?limit=N` |
//! | GET | `/api/fortress/{id}` | |
//! | GET | `/api/fortress/{id}/lineage` | |
//! | POST | `/api/fortress/{id}/play` | |
//! | GET | `/api/search` | `?user=&name=` |
//! | POST | `/api/users/register` | `{username, password, email?}` |
//! | POST | `/api/users/login` | `{username, password}` |
//! | GET, POST | `/api/backpack` | `{fortress_id, entity_char}` |
//! | POST | `/api/backpack/place` | `{index, fortress_chars}` |
//! | GET | `/api/stats/nodes` | |
//! | POST | `/api/validate` | `{text}` |
//!
//! Authenticated calls send `Authorization: Bearer <token>`. Failures are
//! `{code, message, details}`.

use std::collections::BTreeMap;
use std::net::SocketAddr;
use std::sync::Arc;

use axum::extract::rejection::{JsonRejection, PathRejection, QueryRejection};
use axum::extract::{FromRequest, FromRequestParts, Request, State};
use axum::http::request::Parts;
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use fortress_core::{validate_text, CompileError, EntityClass};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::backpack::{backpack_place, PlaceReport};
use crate::error::StoreError;
use crate::record::{FortressRecord, RECENT_CAP};
use crate::store::{NewFortress, Store};

type Shared = Arc<Store>;

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    code: String,
    message: String,
    details: Vec<serde_json::Value>,
}

impl ApiError {
    fn bad_request(message: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            code: "BadRequest".into(),
            message: message.into(),
            details: Vec::new(),
        }
    }
}

fn status_of(e: &StoreError) -> StatusCode {
    match e {
        StoreError::ValidationFailed(_) | StoreError::NoCriteria | StoreError::InvalidInput(_) => {
            StatusCode::BAD_REQUEST
        }
        StoreError::BadCredentials | StoreError::Unauthorized => StatusCode::UNAUTHORIZED,
        StoreError::UnknownId(_)
        | StoreError::UnknownParent(_)
        | StoreError::UnknownEntity { .. } => StatusCode::NOT_FOUND,
        StoreError::UsernameTaken(_) | StoreError::BackpackFull(_) => StatusCode::CONFLICT,
        StoreError::Io(_) | StoreError::Corrupt { .. } => StatusCode::INTERNAL_SERVER_ERROR,
    }
}

fn compile_details(errors: &[CompileError]) -> Vec<serde_json::Value> {
    errors
        .iter()
        .map(|e| json!({ "code": e.code.code(), "line": e.line, "message": e.message }))
        .collect()
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        let details = match &e {
            StoreError::ValidationFailed(errors) => compile_details(errors),
            _ => Vec::new(),
        };
        ApiError {
            status: status_of(&e),
            code: e.code().to_string(),
            message: e.to_string(),
            details,
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        if self.status.is_server_error() {
            tracing::error!(code = %self.code, message = %self.message, "request failed");
        }
        let body = json!({ "code": self.code, "message": self.message, "details": self.details });
        (self.status, Json(body)).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

/// `Json` whose rejections use the API error shape.
pub struct ApiJson<T>(pub T);

impl<S: Send + Sync, T: DeserializeOwned> FromRequest<S> for ApiJson<T> {
    type Rejection = ApiError;

    async fn from_request(req: Request, state: &S) -> Result<Self, Self::Rejection> {
        Json::<T>::from_request(req, state)
            .await
            .map(|Json(v)| ApiJson(v))
            .map_err(|e: JsonRejection| ApiError::bad_request(e.body_text()))
    }
}

pub struct ApiQuery<T>(pub T);

impl<S: Send + Sync, T: DeserializeOwned> FromRequestParts<S> for ApiQuery<T> {
    type Rejection = ApiError;

    async fn from_request_parts(parts: &mut Parts, state: &S) -> Result<Self, Self::Rejection> {
        axum::extract::Query::<T>::from_request_parts(parts, state)
            .await
            .map(|q| ApiQuery(q.0))
            .map_err(|e: QueryRejection| ApiError::bad_request(e.body_text()))
    }
}

pub struct ApiPath<T>(pub T);

impl<S: Send + Sync, T: DeserializeOwned + Send> FromRequestParts<S> for ApiPath<T> {
    type Rejection = ApiError;

    async fn from_request_parts(parts: &mut Parts, state: &S) -> Result<Self, Self::Rejection> {
        axum::extract::Path::<T>::from_request_parts(parts, state)
            .await
            .map(|p| ApiPath(p.0))
            .map_err(|e: PathRejection| ApiError::bad_request(e.body_text()))
    }
}

fn bearer(headers: &HeaderMap) -> Option<&str> {
    headers
        .get(header::AUTHORIZATION)?
        .to_str()
        .ok()?
        .strip_prefix("Bearer ")
        .map(str::trim)
}

fn require_bearer(headers: &HeaderMap) -> ApiResult<String> {
    bearer(headers)
        .map(str::to_string)
        .ok_or_else(|| StoreError::Unauthorized.into())
}

/// Runs a store call off the async workers; hashing and fsync block.
async fn blocking<T, F>(store: Shared, f: F) -> ApiResult<T>
where
    T: Send + 'static,
    F: FnOnce(&Store) -> Result<T, StoreError> + Send + 'static,
{
    tokio::task::spawn_blocking(move || f(&store))
        .await
        .map_err(|e| ApiError {
            status: StatusCode::INTERNAL_SERVER_ERROR,
            code: "Internal".into(),
            message: e.to_string(),
            details: Vec::new(),
        })?
        .map_err(ApiError::from)
}

pub fn router(store: Arc<Store>) -> Router {
    Router::new()
        .route("/api/fortress", post(submit).get(recent))
        .route("/api/fortress/{id}", get(fetch))
        .route("/api/fortress/{id}/lineage", get(lineage))
        .route("/api/fortress/{id}/play", post(play))
        .route("/api/search", get(search))
        .route("/api/users/register", post(register))
        .route("/api/users/login", post(login))
        .route("/api/backpack", get(backpack).post(backpack_add))
        .route("/api/backpack/place", post(place))
        .route("/api/stats/nodes", get(node_stats))
        .route("/api/validate", post(validate))
        .with_state(store)
}

#[derive(Serialize)]
struct Created {
    id: u64,
}

async fn submit(
    State(store): State<Shared>,
    headers: HeaderMap,
    ApiJson(body): ApiJson<NewFortress>,
) -> ApiResult<(StatusCode, Json<Created>)> {
    let token = bearer(&headers).map(str::to_string);
    let id = blocking(store, move |s| s.submit(body, token.as_deref())).await?;
    Ok((StatusCode::CREATED, Json(Created { id })))
}

#[derive(Deserialize)]
struct RecentQuery {
    limit: Option<usize>,
}

async fn recent(
    State(store): State<Shared>,
    ApiQuery(q): ApiQuery<RecentQuery>,
) -> Json<Vec<FortressRecord>> {
    Json(store.recent(q.limit.unwrap_or(RECENT_CAP)))
}

async fn fetch(
    State(store): State<Shared>,
    ApiPath(id): ApiPath<u64>,
) -> ApiResult<Json<FortressRecord>> {
    Ok(Json(store.get(id)?))
}

async fn lineage(
    State(store): State<Shared>,
    ApiPath(id): ApiPath<u64>,
) -> ApiResult<Json<Vec<u64>>> {
    Ok(Json(store.lineage(id)?))
}

#[derive(Serialize)]
struct PlayCount {
    play_count: u64,
}

async fn play(
    State(store): State<Shared>,
    ApiPath(id): ApiPath<u64>,
) -> ApiResult<Json<PlayCount>> {
    let play_count = blocking(store, move |s| s.record_play(id)).await?;
    Ok(Json(PlayCount { play_count }))
}

#[derive(Deserialize)]
struct SearchQuery {
    user: Option<String>,
    name: Option<String>,
}

async fn search(
    State(store): State<Shared>,
    ApiQuery(q): ApiQuery<SearchQuery>,
) -> ApiResult<Json<Vec<FortressRecord>>> {
    Ok(Json(store.search(q.user.as_deref(), q.name.as_deref())?))
}

#[derive(Deserialize)]
struct Credentials {
    username: String,
    password: String,
    #[serde(default)]
    email: Option<String>,
}

#[derive(Serialize)]
struct SessionBody {
    username: String,
    token: String,
}

async fn register(
    State(store): State<Shared>,
    ApiJson(c): ApiJson<Credentials>,
) -> ApiResult<(StatusCode, Json<SessionBody>)> {
    let username = c.username.clone();
    let token = blocking(store, move |s| {
        s.register(&c.username, &c.password, c.email.as_deref())
    })
    .await?;
    Ok((StatusCode::CREATED, Json(SessionBody { username, token })))
}

async fn login(
    State(store): State<Shared>,
    ApiJson(c): ApiJson<Credentials>,
) -> ApiResult<Json<SessionBody>> {
    let username = c.username.clone();
    let token = blocking(store, move |s| s.login(&c.username, &c.password)).await?;
    Ok(Json(SessionBody { username, token }))
}

async fn backpack(
    State(store): State<Shared>,
    headers: HeaderMap,
) -> ApiResult<Json<Vec<EntityClass>>> {
    let token = require_bearer(&headers)?;
    Ok(Json(store.backpack(&token)?))
}

#[derive(Deserialize)]
struct BackpackAdd {
    fortress_id: u64,
    entity_char: char,
}

async fn backpack_add(
    State(store): State<Shared>,
    headers: HeaderMap,
    ApiJson(b): ApiJson<BackpackAdd>,
) -> ApiResult<Json<Vec<EntityClass>>> {
    let token = require_bearer(&headers)?;
    let bp = blocking(store, move |s| {
        s.backpack_add(&token, b.fortress_id, b.entity_char)
    })
    .await?;
    Ok(Json(bp))
}

#[derive(Deserialize)]
struct PlaceBody {
    /// Position in the caller's backpack.
    index: usize,
    /// Characters already defined in the destination fortress.
    fortress_chars: String,
}

async fn place(
    State(store): State<Shared>,
    headers: HeaderMap,
    ApiJson(b): ApiJson<PlaceBody>,
) -> ApiResult<Json<PlaceReport>> {
    let token = require_bearer(&headers)?;
    let bp = store.backpack(&token)?;
    let entity = bp
        .get(b.index)
        .ok_or_else(|| StoreError::InvalidInput(format!("backpack has no slot {}", b.index)))?;
    let chars = b.fortress_chars.chars().collect();
    Ok(Json(backpack_place(
        entity,
        &chars,
        &mut rand::thread_rng(),
    )))
}

async fn node_stats(State(store): State<Shared>) -> Json<BTreeMap<&'static str, u64>> {
    Json(
        store
            .node_stats()
            .all()
            .into_iter()
            .map(|(k, n)| (k.name(), n))
            .collect(),
    )
}

#[derive(Deserialize)]
struct ValidateBody {
    text: String,
}

async fn validate(ApiJson(b): ApiJson<ValidateBody>) -> Json<serde_json::Value> {
    let errors = validate_text(&b.text);
    Json(json!({ "ok": errors.is_empty(), "errors": compile_details(&errors) }))
}

/// Serves the API on `addr` until Ctrl-C.
pub async fn serve(addr: SocketAddr, store: Arc<Store>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!(addr = %listener.local_addr()?, "listening");
    axum::serve(listener, router(store))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
