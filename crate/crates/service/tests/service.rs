use std::sync::Arc;

use critiq_service::{
    replay_requests, Clock, CritiqueService, ErrorCode, LogEvent, MemoryLog, Reply, Request,
    SimClock, DEBOUNCE_MS,
};
use serde_json::{json, Value};

const SEED: &str = include_str!("fixtures/seed.json");

fn seed() -> Value {
    serde_json::from_str(SEED).unwrap()
}

fn empty() -> Value {
    json!({"canvas_width": 1080, "canvas_height": 1080, "background": "#ffffff", "elements": []})
}

fn service() -> (CritiqueService, SimClock, Arc<MemoryLog>) {
    let clock = SimClock::new(1_000_000);
    let log = Arc::new(MemoryLog::default());
    let svc = CritiqueService::new(Arc::new(clock.clone()), log.clone());
    (svc, clock, log)
}

fn update(id: &str, doc: Value) -> Request {
    Request::DesignUpdate {
        session_id: id.into(),
        doc,
    }
}

fn annotations(id: &str, principle: &str, mode: &str) -> Request {
    Request::GetAnnotations {
        session_id: id.into(),
        principle: principle.into(),
        mode: mode.into(),
    }
}

fn status(id: &str) -> Request {
    Request::GetStatus {
        session_id: id.into(),
    }
}

fn flags(reply: &Reply) -> [bool; 4] {
    match reply {
        Reply::Status { issue_flags: f, .. } => [f.hierarchy, f.alignment, f.whitespace, f.unity],
        other => panic!("expected status, got {other:?}"),
    }
}

/// Sends `n` updates one second apart, then advances the clock in 100 ms steps
/// for ten seconds, ticking each step. Returns the recompute count.
fn burst(n: usize) -> (u64, Vec<u64>) {
    let (svc, clock, _) = service();
    let start = clock.now_ms();
    for _ in 0..n {
        svc.handle(&update("s", seed()));
        clock.advance(1000);
    }
    let mut fired_at = Vec::new();
    for _ in 0..100 {
        if svc.tick() > 0 {
            fired_at.push(clock.now_ms() - start);
        }
        clock.advance(100);
    }
    (svc.session_info("s").unwrap().recomputes, fired_at)
}

#[test]
fn bursts_recompute_once_after_the_last_update() {
    for n in [1usize, 3, 10] {
        let (count, fired) = burst(n);
        assert_eq!(count, 1, "burst of {n}");
        // last update at (n-1) s; trailing edge fires 4 s later
        assert_eq!(
            fired,
            vec![(n as u64 - 1) * 1000 + DEBOUNCE_MS],
            "burst of {n}"
        );
    }
}

#[test]
fn separated_updates_recompute_separately() {
    let (svc, clock, _) = service();
    svc.handle(&update("s", seed()));
    clock.advance(DEBOUNCE_MS);
    assert_eq!(svc.tick(), 1);
    clock.advance(500);
    svc.handle(&update("s", empty()));
    clock.advance(DEBOUNCE_MS - 1);
    assert_eq!(svc.tick(), 0);
    clock.advance(1);
    assert_eq!(svc.tick(), 1);
    assert_eq!(svc.session_info("s").unwrap().recomputes, 2);
}

#[test]
fn stale_read_recomputes_synchronously() {
    let (svc, clock, _) = service();
    svc.handle(&update("s", empty()));
    clock.advance(DEBOUNCE_MS);
    svc.tick();
    svc.handle(&update("s", seed()));
    clock.advance(1000);
    assert!(svc.session_info("s").unwrap().stale);
    let reply = svc.handle(&annotations("s", "hierarchy", "solution"));
    match &reply {
        Reply::Annotations { stale, layer, .. } => {
            assert!(!stale);
            // the seed has a weak point of entry; the empty doc had none
            assert!(layer.colors().iter().any(|c| c.as_str() == "#d62728"));
        }
        other => panic!("{other:?}"),
    }
    let info = svc.session_info("s").unwrap();
    assert!(!info.stale);
    assert_eq!(info.pending_deadline, None);
    // the pending debounce was absorbed by the forced recompute
    clock.advance(DEBOUNCE_MS);
    assert_eq!(svc.tick(), 0);
}

#[test]
fn seed_raises_all_four_flags_and_empty_none() {
    let (svc, _, _) = service();
    svc.handle(&update("seed", seed()));
    svc.handle(&update("empty", empty()));
    assert_eq!(flags(&svc.handle(&status("seed"))), [true; 4]);
    assert_eq!(flags(&svc.handle(&status("empty"))), [false; 4]);
}

#[test]
fn toggle_only_suppresses() {
    let (svc, _, _) = service();
    svc.handle(&update("s", seed()));
    let before = svc.handle(&status("s"));
    let toggled = svc.handle(&Request::ToggleCritiques {
        session_id: "s".into(),
        enabled: false,
    });
    assert_eq!(flags(&before), flags(&toggled));
    match svc.handle(&status("s")) {
        Reply::Status {
            suppressed,
            critiques_enabled,
            ..
        } => assert!(suppressed && !critiques_enabled),
        other => panic!("{other:?}"),
    }
    // annotations are unaffected by the toggle
    assert!(matches!(
        svc.handle(&annotations("s", "unity", "awareness")),
        Reply::Annotations { .. }
    ));
}

#[test]
fn errors_are_replies() {
    let (svc, _, _) = service();
    let code = |r: Reply| match r {
        Reply::Error { code, .. } => code,
        other => panic!("{other:?}"),
    };
    assert_eq!(
        code(svc.handle(&status("nobody"))),
        ErrorCode::UnknownSession
    );
    svc.handle(&update("s", empty()));
    assert_eq!(
        code(svc.handle(&annotations("s", "balance", "awareness"))),
        ErrorCode::UnknownPrinciple
    );
    assert_eq!(
        code(svc.handle(&annotations("s", "unity", "loud"))),
        ErrorCode::UnknownMode
    );
    assert_eq!(
        code(svc.handle(&update("s", json!({"canvas_width": -1})))),
        ErrorCode::SchemaViolation
    );
    assert_eq!(code(svc.handle_bytes(b"not json")), ErrorCode::BadRequest);
    assert_eq!(
        code(svc.handle_bytes(br#"{"type":"shout"}"#)),
        ErrorCode::BadRequest
    );
}

#[test]
fn identical_requests_get_identical_bytes() {
    let (svc, _, _) = service();
    svc.handle(&update("s", seed()));
    for p in ["hierarchy", "alignment", "whitespace", "unity"] {
        for m in ["awareness", "solution"] {
            let a = svc.handle(&annotations("s", p, m)).to_json();
            let b = svc.handle(&annotations("s", p, m)).to_json();
            assert_eq!(a, b);
        }
    }
}

#[test]
fn sessions_do_not_see_each_other() {
    let (svc, clock, _) = service();
    svc.handle(&update("a", seed()));
    svc.handle(&update("b", empty()));
    clock.advance(10);
    svc.handle(&update("a", seed()));
    assert_eq!(flags(&svc.handle(&status("b"))), [false; 4]);
    assert_eq!(flags(&svc.handle(&status("a"))), [true; 4]);
    assert_eq!(svc.session_info("b").unwrap().recomputes, 1);
    assert_eq!(svc.session_ids(), vec!["a".to_string(), "b".to_string()]);
}

#[test]
fn every_request_is_logged_and_replayable() {
    let (svc, clock, log) = service();
    let script = vec![
        update("s", seed()),
        annotations("s", "hierarchy", "awareness"),
        status("s"),
        Request::ToggleCritiques {
            session_id: "s".into(),
            enabled: false,
        },
        annotations("s", "balance", "solution"),
        update("s", empty()),
        annotations("s", "unity", "solution"),
        status("ghost"),
    ];
    for req in &script {
        let before = log.records().len();
        svc.handle(req);
        assert!(log.records().len() > before, "{req:?} was not logged");
        clock.advance(250);
    }
    let records = log.records();
    assert_eq!(replay_requests(&records), script);
    let viewed = records
        .iter()
        .filter(|r| r.event == LogEvent::AnnotationViewed)
        .count();
    assert_eq!(viewed, 2);
    let mut last = 0;
    for r in records.iter().filter(|r| r.session_id == "s") {
        assert!(r.ts >= last);
        last = r.ts;
    }
}

#[test]
fn replaying_a_log_reproduces_replies() {
    let (svc, _, log) = service();
    let script = [
        update("s", seed()),
        annotations("s", "alignment", "solution"),
        status("s"),
    ];
    let first: Vec<String> = script.iter().map(|r| svc.handle(r).to_json()).collect();
    let (again, _, _) = service();
    let second: Vec<String> = replay_requests(&log.records())
        .iter()
        .map(|r| again.handle(r).to_json())
        .collect();
    assert_eq!(first, second);
}
