use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use labov_core::lint::LintFinding;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ApiError {
    #[error("{message}")]
    BadRequest { message: String, findings: Vec<LintFinding> },
    #[error("{0}")]
    NotFound(String),
    /// The writer's version token is not the stored one.
    #[error("stale version token; the fragment was changed by another writer")]
    Conflict { current: String },
    #[error("a version token is required (If-Match header or \"version\" field)")]
    VersionRequired,
    #[error("{0}")]
    Forbidden(String),
    #[error("{0}")]
    Internal(String),
}

impl ApiError {
    pub fn bad_request(message: impl ToString) -> Self {
        ApiError::BadRequest { message: message.to_string(), findings: Vec::new() }
    }

    pub fn status(&self) -> StatusCode {
        match self {
            ApiError::BadRequest { .. } => StatusCode::BAD_REQUEST,
            ApiError::NotFound(_) => StatusCode::NOT_FOUND,
            ApiError::Conflict { .. } => StatusCode::CONFLICT,
            ApiError::VersionRequired => StatusCode::PRECONDITION_REQUIRED,
            ApiError::Forbidden(_) => StatusCode::FORBIDDEN,
            ApiError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

impl From<std::io::Error> for ApiError {
    fn from(e: std::io::Error) -> Self {
        ApiError::Internal(e.to_string())
    }
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    error: String,
    #[serde(skip_serializing_if = "<[LintFinding]>::is_empty")]
    findings: &'a [LintFinding],
    #[serde(skip_serializing_if = "Option::is_none")]
    current_version: Option<&'a str>,
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let findings: &[LintFinding] = match &self {
            ApiError::BadRequest { findings, .. } => findings,
            _ => &[],
        };
        let current_version = match &self {
            ApiError::Conflict { current } => Some(current.as_str()),
            _ => None,
        };
        let body = ErrorBody { error: self.to_string(), findings, current_version };
        (self.status(), Json(body)).into_response()
    }
}
