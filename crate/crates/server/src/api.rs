//! JSON-over-HTTP routes.

use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use classnet_core::survey::AnswerRecord;
use serde::Deserialize;
use serde_json::json;
use tower_http::services::ServeDir;

use crate::service::{ExportFormat, Service, ServiceError};

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let status = match &self {
            ServiceError::NotFound(_) => StatusCode::NOT_FOUND,
            ServiceError::Conflict(_) => StatusCode::CONFLICT,
            ServiceError::Invalid { .. } => StatusCode::UNPROCESSABLE_ENTITY,
            ServiceError::BadRequest(_) => StatusCode::BAD_REQUEST,
            ServiceError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        };
        let body = match &self {
            ServiceError::Invalid { report: Some(r), .. } => json!({ "error": self.to_string(), "report": r }),
            _ => json!({ "error": self.to_string() }),
        };
        (status, Json(body)).into_response()
    }
}

type Shared = Arc<Service>;
type ApiResult<T> = Result<T, ServiceError>;

/// Runs a store call off the async executor.
async fn blocking<T: Send + 'static>(f: impl FnOnce() -> ApiResult<T> + Send + 'static) -> ApiResult<T> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ServiceError::Internal(e.to_string()))?
}

#[derive(Deserialize)]
struct NewStudy {
    title: String,
    #[serde(default)]
    seed: Option<u64>,
}

async fn create_study(State(svc): State<Shared>, Json(req): Json<NewStudy>) -> ApiResult<Response> {
    let today = chrono::Local::now().date_naive();
    let info = blocking(move || svc.create(&req.title, req.seed, today)).await?;
    Ok((StatusCode::CREATED, Json(info)).into_response())
}

async fn list_studies(State(svc): State<Shared>) -> ApiResult<Response> {
    Ok(Json(blocking(move || svc.list()).await?).into_response())
}

async fn study_info(State(svc): State<Shared>, Path(id): Path<String>) -> ApiResult<Response> {
    let study = svc.get(&id)?;
    Ok(Json(crate::service::StudyInfo::from(&*study)).into_response())
}

#[derive(Deserialize)]
struct RosterOptions {
    #[serde(default = "yes")]
    identity: bool,
}

fn yes() -> bool {
    true
}

async fn import_roster(
    State(svc): State<Shared>,
    Path(id): Path<String>,
    Query(opts): Query<RosterOptions>,
    body: String,
) -> ApiResult<Response> {
    let roster = blocking(move || svc.import_roster(&id, &body, opts.identity)).await?;
    Ok(Json(json!({ "roster": roster })).into_response())
}

async fn questionnaire(State(svc): State<Shared>, Path(id): Path<String>) -> ApiResult<Response> {
    Ok(Json(svc.questionnaire(&id)?).into_response())
}

async fn responses(
    State(svc): State<Shared>,
    Path(id): Path<String>,
    Json(answers): Json<Vec<AnswerRecord>>,
) -> ApiResult<Response> {
    let report = blocking(move || svc.add_responses(&id, &answers)).await?;
    Ok(Json(report).into_response())
}

async fn analyze(State(svc): State<Shared>, Path(id): Path<String>) -> ApiResult<Response> {
    Ok(Json(blocking(move || svc.analyze(&id)).await?).into_response())
}

async fn graphs(State(svc): State<Shared>, Path(id): Path<String>) -> ApiResult<Response> {
    Ok(Json(svc.graph_names(&id)?).into_response())
}

async fn graph(State(svc): State<Shared>, Path((id, name)): Path<(String, String)>) -> ApiResult<Response> {
    Ok(Json(svc.graph(&id, &name)?).into_response())
}

async fn individual(State(svc): State<Shared>, Path((id, pid)): Path<(String, u32)>) -> ApiResult<Response> {
    Ok(Json(svc.individual(&id, pid)?).into_response())
}

async fn mediators(State(svc): State<Shared>, Path((id, pid)): Path<(String, u32)>) -> ApiResult<Response> {
    Ok(Json(svc.mediators(&id, pid)?).into_response())
}

async fn influencers(State(svc): State<Shared>, Path((id, pid)): Path<(String, u32)>) -> ApiResult<Response> {
    Ok(Json(svc.influencers(&id, pid)?).into_response())
}

/// `<graph>.net` gives Pajek, `<graph>.csv` the edge list.
async fn export(State(svc): State<Shared>, Path((id, file)): Path<(String, String)>) -> ApiResult<Response> {
    let (name, format, mime) = if let Some(name) = file.strip_suffix(".net") {
        (name, ExportFormat::Pajek, "text/plain; charset=utf-8")
    } else if let Some(name) = file.strip_suffix(".csv") {
        (name, ExportFormat::Csv, "text/csv; charset=utf-8")
    } else {
        return Err(ServiceError::NotFound(format!("unknown export {file:?}, use <graph>.net or <graph>.csv")));
    };
    let text = svc.export(&id, name, format)?;
    Ok(([(header::CONTENT_TYPE, mime)], text).into_response())
}

pub fn router(svc: Arc<Service>, assets: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/studies", post(create_study).get(list_studies))
        .route("/studies/{id}", get(study_info))
        .route("/studies/{id}/roster", post(import_roster))
        .route("/studies/{id}/questionnaire", get(questionnaire))
        .route("/studies/{id}/responses", post(responses))
        .route("/studies/{id}/analyze", post(analyze))
        .route("/studies/{id}/graphs", get(graphs))
        .route("/studies/{id}/graphs/{name}", get(graph))
        .route("/studies/{id}/individuals/{pid}", get(individual))
        .route("/studies/{id}/individuals/{pid}/mediators", get(mediators))
        .route("/studies/{id}/individuals/{pid}/influencers", get(influencers))
        .route("/studies/{id}/export/{file}", get(export))
        .with_state(svc);
    match assets {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}
