//! Wire messages. Every request gets exactly one reply.

use critiq_core::analyze::IssueFlags;
use critiq_core::annotate::{AnnotationLayer, ExplanationTable};
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Request {
    /// `doc` is validated on receipt; the raw value is what gets logged.
    DesignUpdate {
        session_id: String,
        doc: Value,
    },
    GetAnnotations {
        session_id: String,
        principle: String,
        mode: String,
    },
    ToggleCritiques {
        session_id: String,
        enabled: bool,
    },
    GetStatus {
        session_id: String,
    },
}

impl Request {
    pub fn session_id(&self) -> &str {
        match self {
            Request::DesignUpdate { session_id, .. }
            | Request::GetAnnotations { session_id, .. }
            | Request::ToggleCritiques { session_id, .. }
            | Request::GetStatus { session_id } => session_id,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("request serialization is infallible")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    /// Not JSON, or not a known request shape.
    BadRequest,
    SchemaViolation,
    UnknownSession,
    UnknownPrinciple,
    UnknownMode,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Reply {
    Ack {
        session_id: String,
    },
    Annotations {
        session_id: String,
        principle: String,
        mode: String,
        layer: AnnotationLayer,
        explanation: ExplanationTable,
        stale: bool,
    },
    Status {
        session_id: String,
        issue_flags: IssueFlags,
        critiques_enabled: bool,
        /// Flags are current but the UI should hide them.
        suppressed: bool,
    },
    Error {
        code: ErrorCode,
        detail: String,
    },
}

impl Reply {
    pub fn error(code: ErrorCode, detail: impl Into<String>) -> Reply {
        Reply::Error {
            code,
            detail: detail.into(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reply serialization is infallible")
    }
}

/// Parses one request, mapping malformed input to an error reply.
pub fn parse_request(bytes: &[u8]) -> Result<Request, Box<Reply>> {
    serde_json::from_slice(bytes)
        .map_err(|e| Box::new(Reply::error(ErrorCode::BadRequest, e.to_string())))
}
