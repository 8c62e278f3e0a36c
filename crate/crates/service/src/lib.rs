//! Live critique service. Clients push design updates and pull annotation
//! layers, explanations and per-principle status. Recomputation is debounced
//! per session, and a read of stale state recomputes synchronously, so
//! replies always reflect the latest update received.

pub mod clock;
pub mod log;
pub mod net;
pub mod protocol;
pub mod service;

pub use clock::{Clock, SimClock, SystemClock};
pub use log::{read_jsonl, replay_requests, JsonlLog, LogEvent, LogRecord, LogSink, MemoryLog};
pub use net::{read_frame, write_frame, Client, Server, DEFAULT_PORT};
pub use protocol::{parse_request, ErrorCode, Reply, Request};
pub use service::{Assets, CritiqueService, SessionInfo, DEBOUNCE_MS};
