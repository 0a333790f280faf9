use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCode {
    BadRequest,
    UnknownGame,
    UnknownRulebook,
    UnknownSession,
    UnknownRun,
    SessionDone,
    SessionBusy,
    NotFound,
    Internal,
}

impl ErrorCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCode::BadRequest => "bad_request",
            ErrorCode::UnknownGame => "unknown_game",
            ErrorCode::UnknownRulebook => "unknown_rulebook",
            ErrorCode::UnknownSession => "unknown_session",
            ErrorCode::UnknownRun => "unknown_run",
            ErrorCode::SessionDone => "session_done",
            ErrorCode::SessionBusy => "session_busy",
            ErrorCode::NotFound => "not_found",
            ErrorCode::Internal => "internal",
        }
    }

    pub fn status(self) -> StatusCode {
        match self {
            ErrorCode::BadRequest => StatusCode::BAD_REQUEST,
            ErrorCode::UnknownGame
            | ErrorCode::UnknownRulebook
            | ErrorCode::UnknownSession
            | ErrorCode::UnknownRun
            | ErrorCode::NotFound => StatusCode::NOT_FOUND,
            ErrorCode::SessionDone | ErrorCode::SessionBusy => StatusCode::CONFLICT,
            ErrorCode::Internal => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

/// Error response rendered as `{"error": {"code", "message"}}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApiError {
    pub code: ErrorCode,
    pub message: String,
}

impl ApiError {
    pub fn new(code: ErrorCode, message: impl Into<String>) -> Self {
        ApiError { code, message: message.into() }
    }

    pub fn bad_request(message: impl Into<String>) -> Self {
        ApiError::new(ErrorCode::BadRequest, message)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorEnvelope {
    pub error: ErrorBody,
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = ErrorEnvelope { error: ErrorBody { code: self.code.as_str().to_string(), message: self.message } };
        (self.code.status(), Json(body)).into_response()
    }
}
