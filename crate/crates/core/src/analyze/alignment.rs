use std::cmp::Reverse;

use serde::Serialize;

use super::{Action, Issue, IssueKind, Suggestion, Thresholds};
use crate::model::{DesignDocument, TextAlign, TextElement};

/// Which vertical line of a text box an alignment axis runs through.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AnchorKind {
    Left,
    Center,
    Right,
}

impl AnchorKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            AnchorKind::Left => "left",
            AnchorKind::Center => "center",
            AnchorKind::Right => "right",
        }
    }

    pub fn of_align(align: TextAlign) -> AnchorKind {
        match align {
            TextAlign::Left | TextAlign::Justify => AnchorKind::Left,
            TextAlign::Center => AnchorKind::Center,
            TextAlign::Right => AnchorKind::Right,
        }
    }

    pub fn text_align(&self) -> TextAlign {
        match self {
            AnchorKind::Left => TextAlign::Left,
            AnchorKind::Center => TextAlign::Center,
            AnchorKind::Right => TextAlign::Right,
        }
    }

    /// Anchor position of a box with this kind.
    pub fn position(&self, x: f64, box_width: f64) -> f64 {
        match self {
            AnchorKind::Left => x,
            AnchorKind::Center => x + box_width / 2.0,
            AnchorKind::Right => x + box_width,
        }
    }

    /// Box `x` that puts this anchor at `axis_x`.
    pub fn x_for(&self, axis_x: f64, box_width: f64) -> f64 {
        match self {
            AnchorKind::Left => axis_x,
            AnchorKind::Center => axis_x - box_width / 2.0,
            AnchorKind::Right => axis_x - box_width,
        }
    }
}

/// Anchor kind and x position of a text element, from its internal alignment.
pub fn anchor_of(el: &TextElement) -> (AnchorKind, f64) {
    let kind = AnchorKind::of_align(el.internal_align);
    (kind, kind.position(el.x, el.box_width))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlignmentGroup {
    pub axis_kind: AnchorKind,
    pub axis_x: f64,
    /// Document order.
    pub members: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mismatch {
    pub element_id: String,
    pub external_side: AnchorKind,
    pub internal_align: TextAlign,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct AlignmentReport {
    /// Ordered by kind, then axis position.
    pub groups: Vec<AlignmentGroup>,
    pub mismatches: Vec<Mismatch>,
    pub issues: Vec<crate::analyze::Issue>,
}

impl AlignmentReport {
    pub fn group_of(&self, id: &str) -> Option<usize> {
        self.groups
            .iter()
            .position(|g| g.members.iter().any(|m| m == id))
    }
}

/// Canvas third holding the box center.
pub fn external_side(el: &TextElement, canvas_width: f64) -> AnchorKind {
    let center = el.x + el.box_width / 2.0;
    if center < canvas_width / 3.0 {
        AnchorKind::Left
    } else if center > 2.0 * canvas_width / 3.0 {
        AnchorKind::Right
    } else {
        AnchorKind::Center
    }
}

fn group_anchors(texts: &[&TextElement], tol: f64) -> Vec<AlignmentGroup> {
    let mut groups = Vec::new();
    for kind in [AnchorKind::Left, AnchorKind::Center, AnchorKind::Right] {
        let mut anchors: Vec<(f64, usize)> = texts
            .iter()
            .enumerate()
            .filter_map(|(i, el)| {
                let (k, pos) = anchor_of(el);
                (k == kind).then_some((pos, i))
            })
            .collect();
        anchors.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

        let mut current: Vec<(f64, usize)> = Vec::new();
        let mut flush = |run: &mut Vec<(f64, usize)>| {
            if run.is_empty() {
                return;
            }
            let axis_x = run.iter().map(|(p, _)| p).sum::<f64>() / run.len() as f64;
            let mut idx: Vec<usize> = run.iter().map(|(_, i)| *i).collect();
            idx.sort_unstable();
            groups.push(AlignmentGroup {
                axis_kind: kind,
                axis_x,
                members: idx.into_iter().map(|i| texts[i].id.clone()).collect(),
            });
            run.clear();
        };
        for a in anchors {
            if let Some(first) = current.first() {
                if a.0 - first.0 > tol {
                    flush(&mut current);
                }
            }
            current.push(a);
        }
        flush(&mut current);
    }
    groups
}

pub fn analyze_alignment(doc: &DesignDocument, t: &Thresholds) -> AlignmentReport {
    let texts: Vec<&TextElement> = doc.text_elements().collect();
    let groups = group_anchors(&texts, t.align_tolerance);
    let mut issues = Vec::new();

    if groups.len() > t.max_alignment_groups {
        let surplus = groups.len() - t.max_alignment_groups;
        // smallest first; among equals, the group whose first member comes latest
        let first_pos = |g: &AlignmentGroup| {
            texts
                .iter()
                .position(|el| el.id == g.members[0])
                .unwrap_or(usize::MAX)
        };
        let mut order: Vec<usize> = (0..groups.len()).collect();
        order.sort_by_key(|&i| (groups[i].members.len(), Reverse(first_pos(&groups[i]))));
        let moved: Vec<usize> = order[..surplus].to_vec();
        let kept: Vec<usize> = order[surplus..].to_vec();

        // largest kept group, earliest first member on ties
        let largest = |candidates: &mut dyn Iterator<Item = usize>| {
            candidates.min_by_key(|&i| (Reverse(groups[i].members.len()), first_pos(&groups[i])))
        };

        let mut moved_sorted = moved.clone();
        moved_sorted.sort_unstable();
        let mut targets = Vec::new();
        let mut suggestions = Vec::new();
        for gi in moved_sorted {
            let g = &groups[gi];
            let same_kind = largest(
                &mut kept
                    .iter()
                    .copied()
                    .filter(|&k| groups[k].axis_kind == g.axis_kind),
            );
            let dest = same_kind
                .or_else(|| largest(&mut kept.iter().copied()))
                .expect("at least one group is kept");
            targets.extend(g.members.iter().cloned());
            suggestions.push(Suggestion::new(
                Action::MergeToAxis {
                    axis_kind: groups[dest].axis_kind,
                    axis_x: groups[dest].axis_x,
                },
                g.members.clone(),
            ));
        }
        issues.push(Issue::new(IssueKind::TooManyGroups, targets, suggestions));
    }

    let mut mismatches = Vec::new();
    for el in &texts {
        let side = external_side(el, doc.canvas_width);
        if AnchorKind::of_align(el.internal_align) != side {
            mismatches.push(Mismatch {
                element_id: el.id.clone(),
                external_side: side,
                internal_align: el.internal_align,
            });
            issues.push(Issue::new(
                IssueKind::InternalExternalMismatch,
                vec![el.id.clone()],
                vec![Suggestion::new(
                    Action::ChangeInternalAlign {
                        align: side.text_align(),
                    },
                    vec![el.id.clone()],
                )],
            ));
        }
    }

    AlignmentReport {
        groups,
        mismatches,
        issues,
    }
}
