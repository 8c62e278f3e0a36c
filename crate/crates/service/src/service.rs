//! Session state machine: debounced recompute, cached assets, replies.

use std::collections::HashMap;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use critiq_core::analyze::{detect_all, measure_all, CritiqueResult, Principle, Thresholds};
use critiq_core::annotate::{generate_all, AnnotationAsset, Context, Mode};
use critiq_core::metrics::FallbackMetrics;
use critiq_core::model::{parse_design_value, Color, DesignDocument};
use serde_json::json;

use crate::clock::Clock;
use crate::log::{record_for, LogEvent, LogRecord, LogSink};
use crate::protocol::{parse_request, ErrorCode, Reply, Request};

/// Trailing debounce between the last design update and the recompute.
pub const DEBOUNCE_MS: u64 = 4000;

/// Everything derived from one document version. Swapped as a unit.
#[derive(Debug)]
pub struct Assets {
    pub version: u64,
    pub result: CritiqueResult,
    /// Four principles × two modes, hierarchy first.
    pub items: Vec<AnnotationAsset>,
}

impl Assets {
    pub fn compute(doc: &DesignDocument, version: u64) -> Assets {
        let provider = FallbackMetrics;
        let result = detect_all(doc, &provider);
        let extents = measure_all(doc, &provider);
        let thresholds = Thresholds::default();
        let items = generate_all(&Context::new(doc, &result, &extents, &thresholds));
        Assets {
            version,
            result,
            items,
        }
    }

    pub fn get(&self, principle: Principle, mode: Mode) -> &AnnotationAsset {
        self.items
            .iter()
            .find(|a| a.principle == principle && a.mode == mode)
            .expect("all eight assets are generated")
    }
}

#[derive(Debug)]
struct Session {
    doc: DesignDocument,
    version: u64,
    assets: Option<Arc<Assets>>,
    critiques_enabled: bool,
    last_update_ms: u64,
    /// At most one pending recompute.
    deadline: Option<u64>,
    recomputes: u64,
}

impl Session {
    fn new(now: u64) -> Self {
        Self {
            doc: DesignDocument::new(1080.0, 1080.0, Color::hex("#ffffff")),
            version: 0,
            assets: None,
            critiques_enabled: true,
            last_update_ms: now,
            deadline: None,
            recomputes: 0,
        }
    }

    fn is_stale(&self) -> bool {
        self.assets
            .as_ref()
            .is_none_or(|a| a.version != self.version)
    }

    fn recompute(&mut self) {
        self.assets = Some(Arc::new(Assets::compute(&self.doc, self.version)));
        self.deadline = None;
        self.recomputes += 1;
    }

    /// Assets for the current document, computing them now if needed.
    fn fresh(&mut self) -> Arc<Assets> {
        if self.is_stale() {
            self.recompute();
        }
        Arc::clone(self.assets.as_ref().expect("just computed"))
    }
}

/// Per-session snapshot for monitoring and tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SessionInfo {
    pub stale: bool,
    pub pending_deadline: Option<u64>,
    pub recomputes: u64,
    pub critiques_enabled: bool,
    pub last_update_ms: u64,
}

pub struct CritiqueService {
    clock: Arc<dyn Clock>,
    log: Arc<dyn LogSink>,
    debounce_ms: u64,
    sessions: Mutex<HashMap<String, Arc<Mutex<Session>>>>,
    last_ts: Mutex<HashMap<String, u64>>,
}

impl CritiqueService {
    pub fn new(clock: Arc<dyn Clock>, log: Arc<dyn LogSink>) -> Self {
        Self {
            clock,
            log,
            debounce_ms: DEBOUNCE_MS,
            sessions: Mutex::new(HashMap::new()),
            last_ts: Mutex::new(HashMap::new()),
        }
    }

    pub fn with_debounce(mut self, ms: u64) -> Self {
        self.debounce_ms = ms;
        self
    }

    fn session(&self, id: &str) -> Option<Arc<Mutex<Session>>> {
        self.sessions
            .lock()
            .expect("sessions lock")
            .get(id)
            .cloned()
    }

    fn session_or_create(&self, id: &str) -> Arc<Mutex<Session>> {
        let now = self.clock.now_ms();
        Arc::clone(
            self.sessions
                .lock()
                .expect("sessions lock")
                .entry(id.to_string())
                .or_insert_with(|| Arc::new(Mutex::new(Session::new(now)))),
        )
    }

    // timestamps never go backwards within a session
    fn append(&self, mut record: LogRecord) {
        {
            let mut last = self.last_ts.lock().expect("log ts lock");
            let prev = last.entry(record.session_id.clone()).or_insert(0);
            record.ts = record.ts.max(*prev);
            *prev = record.ts;
        }
        if let Err(e) = self.log.append(&record) {
            log::warn!("dropping log record for {}: {e}", record.session_id);
        }
    }

    /// Decodes and handles one framed message.
    pub fn handle_bytes(&self, bytes: &[u8]) -> Reply {
        match parse_request(bytes) {
            Ok(req) => self.handle(&req),
            Err(reply) => *reply,
        }
    }

    pub fn handle(&self, req: &Request) -> Reply {
        let now = self.clock.now_ms();
        self.append(record_for(req, now));
        match req {
            Request::DesignUpdate { session_id, doc } => {
                let doc = match parse_design_value(doc) {
                    Ok(d) => d,
                    Err(e) => return Reply::error(ErrorCode::SchemaViolation, e.to_string()),
                };
                let session = self.session_or_create(session_id);
                let mut s = session.lock().expect("session lock");
                s.doc = doc;
                s.version += 1;
                s.last_update_ms = now;
                s.deadline = Some(now + self.debounce_ms);
                Reply::Ack {
                    session_id: session_id.clone(),
                }
            }
            Request::GetAnnotations {
                session_id,
                principle,
                mode,
            } => {
                let Some(session) = self.session(session_id) else {
                    return unknown_session(session_id);
                };
                let Ok(p) = Principle::from_str(principle) else {
                    return Reply::error(
                        ErrorCode::UnknownPrinciple,
                        format!("unknown principle `{principle}`"),
                    );
                };
                let Ok(m) = Mode::from_str(mode) else {
                    return Reply::error(ErrorCode::UnknownMode, format!("unknown mode `{mode}`"));
                };
                let assets = session.lock().expect("session lock").fresh();
                let asset = assets.get(p, m);
                self.append(LogRecord {
                    ts: self.clock.now_ms(),
                    session_id: session_id.clone(),
                    event: LogEvent::AnnotationViewed,
                    payload: json!({ "principle": principle, "mode": mode }),
                });
                Reply::Annotations {
                    session_id: session_id.clone(),
                    principle: p.as_str().to_string(),
                    mode: m.as_str().to_string(),
                    layer: asset.layer.clone(),
                    explanation: asset.explanation.clone(),
                    stale: false,
                }
            }
            Request::ToggleCritiques {
                session_id,
                enabled,
            } => {
                let Some(session) = self.session(session_id) else {
                    return unknown_session(session_id);
                };
                let mut s = session.lock().expect("session lock");
                s.critiques_enabled = *enabled;
                status(session_id, &mut s)
            }
            Request::GetStatus { session_id } => {
                let Some(session) = self.session(session_id) else {
                    return unknown_session(session_id);
                };
                let mut s = session.lock().expect("session lock");
                status(session_id, &mut s)
            }
        }
    }

    /// Runs every recompute whose debounce has expired. Returns how many ran.
    pub fn tick(&self) -> usize {
        let now = self.clock.now_ms();
        let sessions: Vec<Arc<Mutex<Session>>> = self
            .sessions
            .lock()
            .expect("sessions lock")
            .values()
            .cloned()
            .collect();
        let mut ran = 0;
        for session in sessions {
            let mut s = session.lock().expect("session lock");
            if s.deadline.is_some_and(|d| d <= now) {
                s.recompute();
                ran += 1;
            }
        }
        ran
    }

    /// Earliest pending recompute across sessions.
    pub fn next_deadline(&self) -> Option<u64> {
        self.sessions
            .lock()
            .expect("sessions lock")
            .values()
            .filter_map(|s| s.lock().expect("session lock").deadline)
            .min()
    }

    pub fn session_info(&self, id: &str) -> Option<SessionInfo> {
        let session = self.session(id)?;
        let s = session.lock().expect("session lock");
        Some(SessionInfo {
            stale: s.is_stale(),
            pending_deadline: s.deadline,
            recomputes: s.recomputes,
            critiques_enabled: s.critiques_enabled,
            last_update_ms: s.last_update_ms,
        })
    }

    /// Current cached assets without forcing a recompute.
    pub fn cached_assets(&self, id: &str) -> Option<Arc<Assets>> {
        let session = self.session(id)?;
        let s = session.lock().expect("session lock");
        s.assets.clone()
    }

    pub fn session_ids(&self) -> Vec<String> {
        let mut ids: Vec<String> = self
            .sessions
            .lock()
            .expect("sessions lock")
            .keys()
            .cloned()
            .collect();
        ids.sort();
        ids
    }
}

fn unknown_session(id: &str) -> Reply {
    Reply::error(ErrorCode::UnknownSession, format!("unknown session `{id}`"))
}

fn status(session_id: &str, s: &mut Session) -> Reply {
    let assets = s.fresh();
    Reply::Status {
        session_id: session_id.to_string(),
        issue_flags: assets.result.issue_flags,
        critiques_enabled: s.critiques_enabled,
        suppressed: !s.critiques_enabled,
    }
}
