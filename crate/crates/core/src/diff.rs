//! Property-level comparison of two design documents.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use serde_json::Value;

use crate::model::{DesignDocument, Element};

/// One differing scalar. `before`/`after` are `None` when the element is
/// absent on that side.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChangeEntry {
    /// Element id, or `background` / `canvas` for document-level properties.
    pub target: String,
    pub path: String,
    pub before: Option<Value>,
    pub after: Option<Value>,
}

impl ChangeEntry {
    /// The same change seen from the other side.
    pub fn reversed(&self) -> ChangeEntry {
        ChangeEntry {
            target: self.target.clone(),
            path: self.path.clone(),
            before: self.after.clone(),
            after: self.before.clone(),
        }
    }
}

impl fmt::Display for ChangeEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &Option<Value>| match v {
            None => "absent".to_string(),
            Some(Value::Object(_)) => "element".to_string(),
            Some(v) => v.to_string(),
        };
        write!(
            f,
            "{} ({} \u{2192} {})",
            self.path,
            show(&self.before),
            show(&self.after)
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ChangeSet {
    pub entries: Vec<ChangeEntry>,
}

impl ChangeSet {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }
}

impl fmt::Display for ChangeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return writeln!(f, "no changes");
        }
        for e in &self.entries {
            writeln!(f, "{e}")?;
        }
        Ok(())
    }
}

fn to_fields(el: &Element) -> serde_json::Map<String, Value> {
    match serde_json::to_value(el) {
        Ok(Value::Object(map)) => map,
        _ => unreachable!("elements serialize to objects"),
    }
}

/// Lists every scalar property that differs between `a` and `b`.
///
/// Entries come in a fixed order: canvas properties, removed elements (in `a`
/// order), then elements present in `b` (in `b` order). Relative stacking order
/// among shared elements is reported as `elements[id].order`.
pub fn diff_designs(a: &DesignDocument, b: &DesignDocument) -> ChangeSet {
    let mut entries = Vec::new();
    let mut scalar = |target: &str, path: String, before: Value, after: Value| {
        if before != after {
            entries.push(ChangeEntry {
                target: target.to_string(),
                path,
                before: Some(before),
                after: Some(after),
            });
        }
    };
    scalar(
        "canvas",
        "canvas_width".into(),
        a.canvas_width.into(),
        b.canvas_width.into(),
    );
    scalar(
        "canvas",
        "canvas_height".into(),
        a.canvas_height.into(),
        b.canvas_height.into(),
    );
    scalar(
        "background",
        "background".into(),
        a.background.as_str().into(),
        b.background.as_str().into(),
    );

    let in_b: HashMap<&str, &Element> = b.elements.iter().map(|e| (e.id(), e)).collect();
    let in_a: HashMap<&str, &Element> = a.elements.iter().map(|e| (e.id(), e)).collect();

    for el in &a.elements {
        if !in_b.contains_key(el.id()) {
            entries.push(ChangeEntry {
                target: el.id().to_string(),
                path: format!("elements[{}]", el.id()),
                before: Some(Value::Object(to_fields(el))),
                after: None,
            });
        }
    }

    // rank among elements present on both sides
    let shared_a: Vec<&str> = a
        .elements
        .iter()
        .map(Element::id)
        .filter(|id| in_b.contains_key(id))
        .collect();
    let rank_a: HashMap<&str, usize> = shared_a
        .iter()
        .enumerate()
        .map(|(i, id)| (*id, i))
        .collect();
    let mut rank_b = 0usize;

    for el in &b.elements {
        let id = el.id();
        let Some(old) = in_a.get(id) else {
            entries.push(ChangeEntry {
                target: id.to_string(),
                path: format!("elements[{id}]"),
                before: None,
                after: Some(Value::Object(to_fields(el))),
            });
            continue;
        };
        let ra = rank_a[id];
        if ra != rank_b {
            entries.push(ChangeEntry {
                target: id.to_string(),
                path: format!("elements[{id}].order"),
                before: Some(ra.into()),
                after: Some(rank_b.into()),
            });
        }
        rank_b += 1;

        let before = to_fields(old);
        let after = to_fields(el);
        let mut keys: Vec<&String> = before.keys().collect();
        for k in after.keys() {
            if !before.contains_key(k) {
                keys.push(k);
            }
        }
        for k in keys {
            let bv = before.get(k).cloned().unwrap_or(Value::Null);
            let av = after.get(k).cloned().unwrap_or(Value::Null);
            if bv != av {
                entries.push(ChangeEntry {
                    target: id.to_string(),
                    path: format!("elements[{id}].{k}"),
                    before: Some(bv),
                    after: Some(av),
                });
            }
        }
    }
    ChangeSet { entries }
}
