use serde::Serialize;

use super::{Action, Extents, Issue, IssueKind, Suggestion, Thresholds};
use crate::kmeans::kmeans_1d;
use crate::model::{DesignDocument, TextElement};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EmphasisLevel {
    Low,
    Medium,
    High,
}

impl EmphasisLevel {
    pub fn as_str(&self) -> &'static str {
        match self {
            EmphasisLevel::Low => "low",
            EmphasisLevel::Medium => "medium",
            EmphasisLevel::High => "high",
        }
    }

    pub fn for_line_height(center: f64, t: &Thresholds) -> EmphasisLevel {
        if center >= t.high_line_height {
            EmphasisLevel::High
        } else if center >= t.medium_line_height {
            EmphasisLevel::Medium
        } else {
            EmphasisLevel::Low
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmphasisAssignment {
    pub element_id: String,
    pub line_height: f64,
    pub level: EmphasisLevel,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct HierarchyReport {
    /// In document order.
    pub assignments: Vec<EmphasisAssignment>,
    /// Ascending.
    pub cluster_centers: Vec<f64>,
    pub title_candidate: Option<String>,
    pub issues: Vec<Issue>,
}

impl HierarchyReport {
    pub fn level_of(&self, id: &str) -> Option<EmphasisLevel> {
        self.assignments
            .iter()
            .find(|a| a.element_id == id)
            .map(|a| a.level)
    }
}

/// Font size whose line height first reaches the high threshold, plus slack.
pub(crate) fn enlarge_size(el: &TextElement, t: &Thresholds) -> f64 {
    let exact = snap(t.high_line_height / el.line_height_multiplier);
    exact.ceil() + t.size_slack
}

/// Largest whole font size whose line height stays below the high threshold,
/// minus slack.
pub(crate) fn shrink_size(el: &TextElement, t: &Thresholds) -> f64 {
    let exact = snap(t.high_line_height / el.line_height_multiplier);
    (exact.floor() - t.size_slack).max(1.0)
}

// drop representation noise such as 40.00000000000001
fn snap(v: f64) -> f64 {
    (v * 1e9).round() / 1e9
}

pub fn analyze_hierarchy(
    doc: &DesignDocument,
    extents: &Extents,
    t: &Thresholds,
) -> HierarchyReport {
    let texts: Vec<(&TextElement, f64)> = doc
        .text_elements()
        .filter_map(|el| {
            let ext = extents.get(&el.id)?;
            (!ext.is_empty()).then_some((el, ext.line_height))
        })
        .collect();
    if texts.is_empty() {
        return HierarchyReport::default();
    }

    let heights: Vec<f64> = texts.iter().map(|(_, h)| *h).collect();
    let mut distinct = heights.clone();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    let k = distinct.len().min(3);
    let clusters = kmeans_1d(&heights, k).expect("non-empty finite line heights");

    let assignments: Vec<EmphasisAssignment> = texts
        .iter()
        .map(|(el, h)| {
            let cluster = clusters
                .iter()
                .find(|c| c.contains(*h))
                .expect("every value lands in a cluster");
            EmphasisAssignment {
                element_id: el.id.clone(),
                line_height: *h,
                level: EmphasisLevel::for_line_height(cluster.center, t),
            }
        })
        .collect();

    // largest line height, then topmost, then document order
    let (title, _) = texts
        .iter()
        .enumerate()
        .max_by(|(ia, (a, ha)), (ib, (b, hb))| {
            ha.total_cmp(hb).then(b.y.total_cmp(&a.y)).then(ib.cmp(ia))
        })
        .map(|(_, pair)| *pair)
        .expect("non-empty");

    let high: Vec<&EmphasisAssignment> = assignments
        .iter()
        .filter(|a| a.level == EmphasisLevel::High)
        .collect();

    let mut issues = Vec::new();
    if high.is_empty() {
        issues.push(Issue::new(
            IssueKind::WeakPointOfEntry,
            vec![title.id.clone()],
            vec![Suggestion::new(
                Action::Enlarge {
                    font_size: enlarge_size(title, t).max(title.font_size),
                },
                vec![title.id.clone()],
            )],
        ));
    } else if high.len() >= 2 {
        let competitors: Vec<&TextElement> = high
            .iter()
            .filter(|a| a.element_id != title.id)
            .filter_map(|a| doc.text(&a.element_id))
            .collect();
        let mut suggestions = vec![Suggestion::new(
            Action::Enlarge {
                font_size: enlarge_size(title, t).max(title.font_size + t.size_slack),
            },
            vec![title.id.clone()],
        )];
        suggestions.extend(competitors.iter().map(|c| {
            Suggestion::new(
                Action::Shrink {
                    font_size: shrink_size(c, t),
                },
                vec![c.id.clone()],
            )
        }));
        issues.push(Issue::new(
            IssueKind::CompetingEmphasis,
            competitors.iter().map(|c| c.id.clone()).collect(),
            suggestions,
        ));
    }

    HierarchyReport {
        assignments,
        cluster_centers: clusters.iter().map(|c| c.center).collect(),
        title_candidate: Some(title.id.clone()),
        issues,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyze::measure_all;
    use crate::metrics::FallbackMetrics;
    use crate::model::{Color, Element, FontStyle, TextAlign};

    fn text(id: &str, y: f64, size: f64) -> Element {
        Element::Text(TextElement {
            id: id.into(),
            x: 100.0,
            y,
            box_width: 800.0,
            content: format!("Text {id}"),
            font_family: "Inter".into(),
            font_style: FontStyle::Regular,
            font_size: size,
            line_height_multiplier: 1.2,
            color: Color::hex("#000"),
            internal_align: TextAlign::Left,
        })
    }

    fn run(elements: Vec<Element>) -> HierarchyReport {
        let mut doc = DesignDocument::new(1080.0, 1080.0, Color::hex("#fff"));
        doc.elements = elements;
        let ext = measure_all(&doc, &FallbackMetrics);
        analyze_hierarchy(&doc, &ext, &Thresholds::default())
    }

    #[test]
    fn title_over_body_is_clean() {
        let r = run(vec![
            text("title", 100.0, 48.0),
            text("a", 300.0, 14.0),
            text("b", 400.0, 14.0),
            text("c", 500.0, 14.0),
        ]);
        assert_eq!(r.level_of("title"), Some(EmphasisLevel::High));
        assert_eq!(r.level_of("a"), Some(EmphasisLevel::Low));
        assert_eq!(r.cluster_centers.len(), 2);
        assert!((r.cluster_centers[1] - 57.6).abs() < 1e-9);
        assert!(r.issues.is_empty());
        assert_eq!(r.title_candidate.as_deref(), Some("title"));
    }

    #[test]
    fn uniform_small_text_is_weak() {
        let r = run(vec![text("a", 100.0, 16.0), text("b", 200.0, 16.0)]);
        assert_eq!(r.issues.len(), 1);
        let issue = &r.issues[0];
        assert_eq!(issue.kind, IssueKind::WeakPointOfEntry);
        assert_eq!(issue.message, "No elements seem to be visually emphasized");
        assert_eq!(issue.target_ids, vec!["a".to_string()]);
        assert_eq!(
            issue.suggestions[0].action,
            Action::Enlarge { font_size: 35.0 }
        );
    }

    #[test]
    fn two_large_elements_compete() {
        let r = run(vec![
            text("body", 400.0, 14.0),
            text("second", 300.0, 48.0),
            text("title", 100.0, 48.0),
        ]);
        let issue = &r.issues[0];
        assert_eq!(issue.kind, IssueKind::CompetingEmphasis);
        assert_eq!(r.title_candidate.as_deref(), Some("title"));
        assert_eq!(issue.target_ids, vec!["second".to_string()]);
        assert!(issue
            .suggestions
            .iter()
            .any(|s| s.action == Action::Shrink { font_size: 32.0 } && s.target_ids == ["second"]));
    }

    #[test]
    fn no_text_no_report() {
        let r = run(vec![]);
        assert!(r.assignments.is_empty() && r.issues.is_empty());
        assert!(r.title_candidate.is_none());
    }

    #[test]
    fn threshold_sizes() {
        let t = Thresholds::default();
        let sized = |mult: f64| {
            let Element::Text(mut el) = text("x", 0.0, 16.0) else {
                unreachable!()
            };
            el.line_height_multiplier = mult;
            el
        };
        assert_eq!(enlarge_size(&sized(1.2), &t), 35.0);
        assert_eq!(shrink_size(&sized(1.2), &t), 32.0);
        assert_eq!(enlarge_size(&sized(1.0), &t), 41.0);
        assert_eq!(shrink_size(&sized(1.0), &t), 39.0);
    }
}
