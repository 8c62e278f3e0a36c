use std::collections::BTreeSet;

use serde::Serialize;

use super::{Action, AnchorKind, Extents, Issue, IssueKind, Suggestion, Thresholds};
use crate::geom::Rect;
use crate::metrics::{wrap_lines, MetricsProvider, TextExtent, WRAP_EPS};
use crate::model::{DesignDocument, TextElement};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Edge {
    Left,
    Right,
    Top,
    Bottom,
}

impl Edge {
    pub const ALL: [Edge; 4] = [Edge::Left, Edge::Right, Edge::Top, Edge::Bottom];

    pub fn as_str(&self) -> &'static str {
        match self {
            Edge::Left => "left",
            Edge::Right => "right",
            Edge::Top => "top",
            Edge::Bottom => "bottom",
        }
    }

    /// Distance from `r` to this canvas edge.
    pub fn distance(&self, r: &Rect, doc: &DesignDocument) -> f64 {
        match self {
            Edge::Left => r.x,
            Edge::Right => doc.canvas_width - r.right(),
            Edge::Top => r.y,
            Edge::Bottom => doc.canvas_height - r.bottom(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Horizontal,
    Vertical,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarginViolation {
    pub element_id: String,
    pub edge: Edge,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairViolation {
    pub id_a: String,
    pub id_b: String,
    /// Signed; negative when the boxes overlap.
    pub gap: f64,
    pub direction: Direction,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RaggedElement {
    pub element_id: String,
    pub lines: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct WhitespaceReport {
    pub margin: f64,
    pub margin_violations: Vec<MarginViolation>,
    pub pair_violations: Vec<PairViolation>,
    pub ragged_elements: Vec<RaggedElement>,
    pub issues: Vec<Issue>,
}

/// Separation between two boxes along the axis that separates them most.
pub fn separation(a: &Rect, b: &Rect) -> (f64, Direction) {
    let gx = a.gap_x(b);
    let gy = a.gap_y(b);
    if gx >= gy {
        (gx, Direction::Horizontal)
    } else {
        (gy, Direction::Vertical)
    }
}

/// Indices of non-final, non-blank lines shorter than `ratio` of the longest.
pub fn ragged_lines(widths: &[f64], ratio: f64) -> Vec<usize> {
    if widths.iter().filter(|w| **w > 0.0).count() < 2 {
        return Vec::new();
    }
    let max = widths.iter().copied().fold(0.0, f64::max);
    let last = widths.len() - 1;
    widths
        .iter()
        .enumerate()
        .filter(|(i, w)| *i < last && **w > 0.0 && **w < ratio * max)
        .map(|(i, _)| i)
        .collect()
}

pub fn analyze_whitespace(
    doc: &DesignDocument,
    extents: &Extents,
    provider: &dyn MetricsProvider,
    t: &Thresholds,
) -> WhitespaceReport {
    let margin = t.margin(doc);
    let far = t.far_filter(doc);
    let texts: Vec<(&TextElement, &TextExtent)> = doc
        .text_elements()
        .filter_map(|el| {
            let ext = extents.get(&el.id)?;
            (!ext.is_empty()).then_some((el, ext))
        })
        .collect();

    let mut report = WhitespaceReport {
        margin,
        ..Default::default()
    };
    let target = margin + t.move_slack;

    for (el, ext) in &texts {
        let bbox = ext.overall_bbox;
        let hits: Vec<(Edge, f64)> = Edge::ALL
            .into_iter()
            .map(|e| (e, e.distance(&bbox, doc)))
            .filter(|(_, d)| *d < margin)
            .collect();
        if hits.is_empty() {
            continue;
        }
        let hit = |e: Edge| hits.iter().find(|(h, _)| *h == e).map(|(_, d)| *d);
        let shift =
            |lo: Option<f64>, hi: Option<f64>, span: f64, start: f64, extent: f64| match (lo, hi) {
                (Some(_), Some(_)) => (span - extent) / 2.0 - start,
                (Some(d), None) => target - d,
                (None, Some(d)) => -(target - d),
                (None, None) => 0.0,
            };
        let dx = shift(
            hit(Edge::Left),
            hit(Edge::Right),
            doc.canvas_width,
            bbox.x,
            bbox.width,
        );
        let dy = shift(
            hit(Edge::Top),
            hit(Edge::Bottom),
            doc.canvas_height,
            bbox.y,
            bbox.height,
        );
        for (edge, distance) in &hits {
            report.margin_violations.push(MarginViolation {
                element_id: el.id.clone(),
                edge: *edge,
                distance: *distance,
            });
        }
        report.issues.push(Issue::new(
            IssueKind::MarginTooSmall,
            vec![el.id.clone()],
            vec![Suggestion::new(
                Action::MoveBy { dx, dy },
                vec![el.id.clone()],
            )],
        ));
    }

    for i in 0..texts.len() {
        for j in (i + 1)..texts.len() {
            let (a, ea) = texts[i];
            let (b, eb) = texts[j];
            let (ra, rb) = (ea.overall_bbox, eb.overall_bbox);
            let (gap, direction) = separation(&ra, &rb);
            if gap > far {
                continue;
            }
            let threshold = ea.line_height.max(eb.line_height);
            if gap >= threshold {
                continue;
            }
            // move whichever sits further along the separating axis
            let b_later = match direction {
                Direction::Horizontal => rb.x >= ra.x,
                Direction::Vertical => rb.y >= ra.y,
            };
            let mover = if b_later { b } else { a };
            let push = threshold + t.move_slack - gap;
            let (dx, dy) = match direction {
                Direction::Horizontal => (push, 0.0),
                Direction::Vertical => (0.0, push),
            };
            report.pair_violations.push(PairViolation {
                id_a: a.id.clone(),
                id_b: b.id.clone(),
                gap,
                direction,
                threshold,
            });
            report.issues.push(Issue::new(
                IssueKind::ElementsTooClose,
                vec![a.id.clone(), b.id.clone()],
                vec![Suggestion::new(
                    Action::MoveBy { dx, dy },
                    vec![mover.id.clone()],
                )],
            ));
        }
    }

    for (el, ext) in &texts {
        let widths: Vec<f64> = ext.lines.iter().map(|l| l.bbox.width).collect();
        let offending = ragged_lines(&widths, t.ragged_ratio);
        if offending.is_empty() {
            continue;
        }
        report.ragged_elements.push(RaggedElement {
            element_id: el.id.clone(),
            lines: offending,
        });
        let action = even_out(el, doc, provider, t);
        report.issues.push(Issue::new(
            IssueKind::RaggedLines,
            vec![el.id.clone()],
            vec![Suggestion::new(action, vec![el.id.clone()])],
        ));
    }

    report
}

/// Finds the box width closest to the current one whose greedy wrap is not
/// ragged, preferring widths that keep the box inside the margins. Falls back
/// to joining explicit line breaks when no width works.
fn even_out(
    el: &TextElement,
    doc: &DesignDocument,
    provider: &dyn MetricsProvider,
    t: &Thresholds,
) -> Action {
    let margin = t.margin(doc);
    let anchor = AnchorKind::of_align(el.internal_align);
    let anchor_x = anchor.position(el.x, el.box_width);
    let width_of = |s: &str| provider.text_width(s, &el.font_family, el.font_style, el.font_size);

    let search = |content: &str| -> Option<(f64, f64)> {
        let widest_word = content.split_whitespace().map(width_of).fold(0.0, f64::max);
        let widest_paragraph = content
            .split('\n')
            .map(|p| width_of(&p.split_whitespace().collect::<Vec<_>>().join(" ")))
            .fold(0.0, f64::max);
        let lo = widest_word.ceil().max(1.0) as i64;
        let hi = widest_paragraph.ceil().max(lo as f64) as i64;
        // greedy wrap only changes where some run of words starts to fit
        let mut breaks = BTreeSet::new();
        for paragraph in content.split('\n') {
            let words: Vec<&str> = paragraph.split_whitespace().collect();
            for i in 0..words.len() {
                for j in i + 2..=words.len() {
                    let c = width_of(&words[i..j].join(" "));
                    if c > hi as f64 + WRAP_EPS {
                        break;
                    }
                    breaks.insert((c - WRAP_EPS).ceil() as i64);
                }
            }
        }
        let mut best: Option<(bool, f64, f64, f64)> = None;
        let mut even = false;
        for w in lo..=hi {
            if w == lo || breaks.contains(&w) {
                let widths: Vec<f64> = wrap_lines(content, w as f64, width_of)
                    .iter()
                    .map(|l| width_of(l))
                    .collect();
                even = ragged_lines(&widths, t.ragged_ratio).is_empty();
            }
            if !even {
                continue;
            }
            let w = w as f64;
            let x = anchor.x_for(anchor_x, w);
            let inside = x >= margin && x + w <= doc.canvas_width - margin;
            let dist = (w - el.box_width).abs();
            let better = match best {
                None => true,
                Some((b_in, b_dist, _, _)) => {
                    (inside && !b_in) || (inside == b_in && dist < b_dist)
                }
            };
            if better {
                best = Some((inside, dist, w, x));
            }
        }
        best.map(|(_, _, w, x)| (w, x))
    };

    if let Some((box_width, x)) = search(&el.content) {
        return Action::EvenOutLines {
            box_width,
            x,
            content: None,
        };
    }
    let joined = el.content.split_whitespace().collect::<Vec<_>>().join(" ");
    let (box_width, x) = search(&joined).unwrap_or_else(|| {
        let w = width_of(&joined).ceil().max(1.0);
        (w, anchor.x_for(anchor_x, w))
    });
    Action::EvenOutLines {
        box_width,
        x,
        content: Some(joined),
    }
}
