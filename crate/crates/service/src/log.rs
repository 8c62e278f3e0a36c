//! Append-only interaction log.

use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::protocol::Request;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LogEvent {
    PrincipleClick,
    AnnotationViewed,
    DesignSnapshot,
    Toggle,
    StatusRequest,
}

/// One line of a session log. Field names are part of the file format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogRecord {
    pub ts: u64,
    pub session_id: String,
    pub event: LogEvent,
    pub payload: Value,
}

pub trait LogSink: Send + Sync {
    fn append(&self, record: &LogRecord) -> io::Result<()>;
}

/// Keeps records in memory, for tests and for `--no-log` runs.
#[derive(Debug, Default)]
pub struct MemoryLog(Mutex<Vec<LogRecord>>);

impl MemoryLog {
    pub fn records(&self) -> Vec<LogRecord> {
        self.0.lock().expect("log lock").clone()
    }
}

impl LogSink for MemoryLog {
    fn append(&self, record: &LogRecord) -> io::Result<()> {
        self.0.lock().expect("log lock").push(record.clone());
        Ok(())
    }
}

/// One `<session>.jsonl` file per session under a directory.
#[derive(Debug)]
pub struct JsonlLog {
    dir: PathBuf,
    files: Mutex<HashMap<String, File>>,
}

impl JsonlLog {
    pub fn new(dir: impl Into<PathBuf>) -> io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Self {
            dir,
            files: Mutex::new(HashMap::new()),
        })
    }

    pub fn path_for(&self, session_id: &str) -> PathBuf {
        self.dir.join(format!("{}.jsonl", file_stem(session_id)))
    }
}

// session ids come off the wire; keep them from escaping the log directory
fn file_stem(session_id: &str) -> String {
    let stem: String = session_id
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect();
    if stem.is_empty() {
        "_".into()
    } else {
        stem
    }
}

impl LogSink for JsonlLog {
    fn append(&self, record: &LogRecord) -> io::Result<()> {
        let mut files = self.files.lock().expect("log lock");
        let file = match files.get_mut(&record.session_id) {
            Some(f) => f,
            None => {
                let f = OpenOptions::new()
                    .create(true)
                    .append(true)
                    .open(self.path_for(&record.session_id))?;
                files.entry(record.session_id.clone()).or_insert(f)
            }
        };
        let mut line = serde_json::to_string(record).map_err(io::Error::other)?;
        line.push('\n');
        file.write_all(line.as_bytes())
    }
}

pub fn read_jsonl(path: &Path) -> io::Result<Vec<LogRecord>> {
    let reader = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(io::Error::other)?);
    }
    Ok(out)
}

/// The record logged for a request, before it is handled.
pub(crate) fn record_for(req: &Request, ts: u64) -> LogRecord {
    let (event, payload) = match req {
        Request::DesignUpdate { doc, .. } => (LogEvent::DesignSnapshot, doc.clone()),
        Request::GetAnnotations {
            principle, mode, ..
        } => (
            LogEvent::PrincipleClick,
            json!({ "principle": principle, "mode": mode }),
        ),
        Request::ToggleCritiques { enabled, .. } => {
            (LogEvent::Toggle, json!({ "enabled": enabled }))
        }
        Request::GetStatus { .. } => (LogEvent::StatusRequest, Value::Null),
    };
    LogRecord {
        ts,
        session_id: req.session_id().to_string(),
        event,
        payload,
    }
}

/// Rebuilds the request sequence from a log. `annotation_viewed` records
/// follow a served `principle_click` and add nothing.
pub fn replay_requests(records: &[LogRecord]) -> Vec<Request> {
    records
        .iter()
        .filter_map(|r| {
            let session_id = r.session_id.clone();
            let field = |k: &str| {
                r.payload
                    .get(k)
                    .and_then(Value::as_str)
                    .unwrap_or_default()
                    .to_string()
            };
            Some(match r.event {
                LogEvent::DesignSnapshot => Request::DesignUpdate {
                    session_id,
                    doc: r.payload.clone(),
                },
                LogEvent::PrincipleClick => Request::GetAnnotations {
                    session_id,
                    principle: field("principle"),
                    mode: field("mode"),
                },
                LogEvent::Toggle => Request::ToggleCritiques {
                    session_id,
                    enabled: r
                        .payload
                        .get("enabled")
                        .and_then(Value::as_bool)
                        .unwrap_or(true),
                },
                LogEvent::StatusRequest => Request::GetStatus { session_id },
                LogEvent::AnnotationViewed => return None,
            })
        })
        .collect()
}
