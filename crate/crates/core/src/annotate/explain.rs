use serde::Serialize;

use super::layers::{awareness_groups, level_color, solution_groups, unity_element_color};
use super::{fmt_num, join_names, palette, Context, Mode};
use crate::analyze::{Action, Edge, Issue, IssueKind, Principle, UnityProperty};
use crate::model::Color;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExplanationRow {
    pub color: Color,
    pub text: String,
}

impl ExplanationRow {
    fn new(color: Color, text: impl Into<String>) -> Self {
        Self {
            color,
            text: text.into(),
        }
    }
}

/// Textual mirror of one annotation layer.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExplanationTable {
    pub principle: Principle,
    pub mode: Mode,
    pub rows: Vec<ExplanationRow>,
    /// Present in solution mode only; empty when nothing needs fixing.
    pub suggested_actions: Option<Vec<ExplanationRow>>,
}

impl ExplanationTable {
    /// Distinct swatch colors over rows and suggested actions.
    pub fn swatch_colors(&self) -> Vec<Color> {
        let mut c: Vec<Color> = self.all_rows().map(|r| r.color.clone()).collect();
        c.sort();
        c.dedup();
        c
    }

    pub fn all_rows(&self) -> impl Iterator<Item = &ExplanationRow> {
        self.rows
            .iter()
            .chain(self.suggested_actions.iter().flatten())
    }

    /// Plain-text rendering, one row per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            out.push_str(&format!("[{}] {}\n", r.color, r.text));
        }
        if let Some(actions) = &self.suggested_actions {
            out.push_str("Suggested Actions:\n");
            if actions.is_empty() {
                out.push_str("  none\n");
            }
            for r in actions {
                out.push_str(&format!("  [{}] {}\n", r.color, r.text));
            }
        }
        out
    }
}

pub fn gen_explanation(principle: Principle, mode: Mode, ctx: &Context<'_>) -> ExplanationTable {
    let (rows, suggested_actions) = match mode {
        Mode::Awareness => (awareness_rows(principle, ctx), None),
        Mode::Solution => {
            let issues = ctx.result.issues_for(principle);
            if issues.is_empty() {
                (confirmation_rows(principle, ctx), Some(Vec::new()))
            } else {
                let rows = issues.iter().map(|i| issue_row(i, ctx)).collect();
                let actions = issues
                    .iter()
                    .flat_map(|i| &i.suggestions)
                    .map(|s| {
                        ExplanationRow::new(
                            palette::green(),
                            action_text(&s.action, &s.target_ids, ctx),
                        )
                    })
                    .collect();
                (rows, Some(actions))
            }
        }
    };
    let table = ExplanationTable {
        principle,
        mode,
        rows,
        suggested_actions,
    };
    debug_assert_eq!(table.swatch_colors(), {
        let groups = match mode {
            Mode::Awareness => awareness_groups(principle, ctx),
            Mode::Solution => solution_groups(principle, ctx),
        };
        let mut c: Vec<Color> = groups.into_iter().map(|g| g.color).collect();
        c.sort();
        c.dedup();
        c
    });
    table
}

fn nearest_edge(r: &crate::geom::Rect, ctx: &Context<'_>) -> Edge {
    Edge::ALL
        .into_iter()
        .min_by(|a, b| a.distance(r, ctx.doc).total_cmp(&b.distance(r, ctx.doc)))
        .expect("four edges")
}

fn awareness_rows(principle: Principle, ctx: &Context<'_>) -> Vec<ExplanationRow> {
    let mut rows = Vec::new();
    match principle {
        Principle::Hierarchy => {
            for a in &ctx.result.hierarchy.assignments {
                rows.push(ExplanationRow::new(
                    level_color(a.level),
                    format!(
                        "{} in the design has {} visual emphasis.",
                        ctx.name(&a.element_id),
                        a.level.as_str()
                    ),
                ));
            }
        }
        Principle::Alignment => {
            let groups = &ctx.result.alignment.groups;
            for (i, g) in groups.iter().enumerate() {
                let mut text = format!(
                    "Text in the design forms {} alignment group{} with {}.",
                    groups.len(),
                    if groups.len() == 1 { "" } else { "s" },
                    ctx.names(&g.members)
                );
                for id in &g.members {
                    if let Some(el) = ctx.doc.text(id) {
                        text.push_str(&format!(
                            " {} is {}-aligned.",
                            ctx.name(id),
                            el.internal_align.as_str()
                        ));
                    }
                }
                rows.push(ExplanationRow::new(palette::group(i), text));
            }
        }
        Principle::Whitespace => {
            for el in ctx.doc.text_elements() {
                let Some(r) = ctx.bbox(&el.id) else { continue };
                rows.push(ExplanationRow::new(
                    Color::hex(palette::GRAY_BOX),
                    format!(
                        "{} is on the {} side of the canvas. Note other nearby elements and the lengths of the lines of text.",
                        ctx.name(&el.id),
                        nearest_edge(&r, ctx).as_str()
                    ),
                ));
            }
            rows.push(ExplanationRow::new(
                palette::guide(),
                format!(
                    "Dashed lines mark a canvas margin of {} px.",
                    fmt_num(ctx.thresholds.margin(ctx.doc))
                ),
            ));
        }
        Principle::Unity => {
            for (i, el) in ctx.doc.text_elements().enumerate() {
                rows.push(ExplanationRow::new(
                    unity_element_color(i),
                    format!(
                        "{} in the design has the following text properties: {}, {}, {} px, {}.",
                        ctx.name(&el.id),
                        el.font_family,
                        el.font_style.as_str(),
                        fmt_num(el.font_size),
                        el.color
                    ),
                ));
            }
            rows.push(ExplanationRow::new(
                palette::guide(),
                format!("Across the design there are {}.", count_list(ctx)),
            ));
        }
    }
    rows
}

fn count_list(ctx: &Context<'_>) -> String {
    let counts = ctx.result.unity.distinct_counts;
    UnityProperty::ALL
        .iter()
        .map(|p| format!("{} {}", counts.get(*p), p.plural()))
        .collect::<Vec<_>>()
        .join(", ")
}

fn title_name(ctx: &Context<'_>) -> Option<String> {
    ctx.result
        .hierarchy
        .title_candidate
        .as_deref()
        .map(|id| ctx.name(id))
}

fn issue_row(issue: &Issue, ctx: &Context<'_>) -> ExplanationRow {
    let names = ctx.names(&issue.target_ids);
    let text = match issue.kind {
        IssueKind::WeakPointOfEntry => format!(
            "The title {} does not seem particularly emphasized.",
            title_name(ctx).unwrap_or(names)
        ),
        IssueKind::CompetingEmphasis => format!(
            "The title {} does not seem particularly emphasized compared to {}, making it difficult to recognize what is most important.",
            title_name(ctx).unwrap_or_default(),
            names
        ),
        IssueKind::TooManyGroups => format!(
            "Text in the design forms many separate alignment groups with {names}, which can make the design appear somewhat incohesive."
        ),
        IssueKind::InternalExternalMismatch => {
            let m = ctx
                .result
                .alignment
                .mismatches
                .iter()
                .find(|m| issue.target_ids.contains(&m.element_id));
            let (side, internal) = m
                .map(|m| (m.external_side.as_str(), m.internal_align.as_str()))
                .unwrap_or(("", ""));
            format!(
                "{names}'s relative positioning on the canvas skews {side}, which does not match with the text being {internal}-aligned."
            )
        }
        IssueKind::MarginTooSmall => {
            let edges: Vec<String> = ctx
                .result
                .whitespace
                .margin_violations
                .iter()
                .filter(|v| issue.target_ids.contains(&v.element_id))
                .map(|v| v.edge.as_str().to_string())
                .collect();
            format!(
                "{names} placed quite close to the {} edge, which can make the design appear somewhat crowded.",
                join_names(&edges)
            )
        }
        IssueKind::ElementsTooClose => format!(
            "{names} placed quite close to each other, which can make the design appear somewhat crowded."
        ),
        IssueKind::RaggedLines => format!(
            "The line breaks in {names} creates uneven text lengths, which can somewhat disrupt the visual flow of the text."
        ),
        IssueKind::TooManyVariances => format!(
            "{names} in the design use many different text properties: {}, which can make your design seem incohesive.",
            count_list(ctx)
        ),
    };
    ExplanationRow::new(palette::red(), text)
}

fn direction_words(d: f64, pos: &str, neg: &str) -> Option<String> {
    if d.abs() < 1e-9 {
        None
    } else if d > 0.0 {
        Some(format!("{} px {pos}", fmt_num(d)))
    } else {
        Some(format!("{} px {neg}", fmt_num(-d)))
    }
}

fn action_text(action: &Action, targets: &[String], ctx: &Context<'_>) -> String {
    let names = ctx.names(targets);
    match action {
        Action::Enlarge { font_size } => {
            format!("Enlarge {names} to {} px.", fmt_num(*font_size))
        }
        Action::Shrink { font_size } => {
            format!("Shrink {names} to {} px.", fmt_num(*font_size))
        }
        Action::MoveBy { dx, dy } => {
            let parts: Vec<String> = [
                direction_words(*dx, "right", "left"),
                direction_words(*dy, "down", "up"),
            ]
            .into_iter()
            .flatten()
            .collect();
            format!("Move {names} {}.", join_names(&parts))
        }
        Action::ChangeInternalAlign { align } => {
            format!("Make {names} {}-aligned.", align.as_str())
        }
        Action::MergeToAxis { axis_kind, axis_x } => format!(
            "Align {names} to the {} axis at x = {}.",
            axis_kind.as_str(),
            fmt_num(*axis_x)
        ),
        Action::ReducePropertyCount {
            property,
            target_count,
            remap,
        } => {
            let changes: Vec<String> = remap
                .iter()
                .map(|r| format!("{} to {}", r.from, r.to))
                .collect();
            format!(
                "Reduce the number of {} to {} by changing {}.",
                property.plural(),
                target_count,
                join_names(&changes)
            )
        }
        Action::EvenOutLines {
            box_width, content, ..
        } => {
            let mut text = format!("Set the box width of {names} to {} px", fmt_num(*box_width));
            if content.is_some() {
                text.push_str(" and remove its manual line breaks");
            }
            text.push_str(" to even out the line lengths.");
            text
        }
    }
}

fn confirmation_rows(principle: Principle, ctx: &Context<'_>) -> Vec<ExplanationRow> {
    let text = match principle {
        Principle::Hierarchy => match title_name(ctx) {
            Some(t) => format!("The title {t} is clearly emphasized."),
            None => "No text needs a clearer point of entry.".to_string(),
        },
        Principle::Alignment => {
            let n = ctx.result.alignment.groups.len();
            format!(
                "Text in the design forms {n} alignment group{}, each matching its position on the canvas.",
                if n == 1 { "" } else { "s" }
            )
        }
        Principle::Whitespace => format!(
            "Text keeps clear of the {} px canvas margin and of other elements, with even line lengths.",
            fmt_num(ctx.thresholds.margin(ctx.doc))
        ),
        Principle::Unity => format!(
            "Text in the design uses a consistent set of properties: {}.",
            count_list(ctx)
        ),
    };
    vec![ExplanationRow::new(palette::green(), text)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyze::{detect_all, measure_all, Thresholds};
    use crate::metrics::FallbackMetrics;
    use crate::model::parse_design;

    fn table(json: &str, principle: Principle, mode: Mode) -> ExplanationTable {
        let doc = parse_design(json).unwrap();
        let result = detect_all(&doc, &FallbackMetrics);
        let extents = measure_all(&doc, &FallbackMetrics);
        let t = Thresholds::default();
        gen_explanation(principle, mode, &Context::new(&doc, &result, &extents, &t))
    }

    const POSTER: &str = r##"{"canvas_width":1080,"canvas_height":1080,"background":"#fff","elements":[
      {"type":"text","id":"title","x":100,"y":100,"box_width":880,"content":"Summer Festival of Lights",
       "font_family":"Inter","font_style":"bold","font_size":48,"color":"#000","internal_align":"left"},
      {"type":"text","id":"body","x":100,"y":300,"box_width":880,"content":"Join us",
       "font_family":"Inter","font_style":"regular","font_size":14,"color":"#000","internal_align":"left"}]}"##;

    #[test]
    fn high_emphasis_row() {
        let t = table(POSTER, Principle::Hierarchy, Mode::Awareness);
        assert_eq!(
            t.rows[0].text,
            "\u{201c}Summer Festival of L\u{2026}\u{201d} in the design has high visual emphasis."
        );
        assert_eq!(t.rows[0].color, Color::hex(palette::EMPHASIS_HIGH));
        assert!(t.suggested_actions.is_none());
    }

    #[test]
    fn clean_solution_confirms_only() {
        let t = table(POSTER, Principle::Hierarchy, Mode::Solution);
        assert_eq!(t.rows.len(), 1);
        assert_eq!(t.rows[0].color, palette::green());
        assert_eq!(t.suggested_actions, Some(Vec::new()));
    }

    #[test]
    fn unity_issue_uses_template() {
        let mut elements = Vec::new();
        for (i, size) in [10, 12, 14, 16].iter().enumerate() {
            elements.push(format!(
                r##"{{"type":"text","id":"t{i}","x":100,"y":{},"box_width":300,"content":"Line {i}",
                "font_family":"Inter","font_style":"regular","font_size":{size},"color":"#000","internal_align":"left"}}"##,
                100 + i * 100
            ));
        }
        let json = format!(
            r##"{{"canvas_width":1080,"canvas_height":1080,"background":"#fff","elements":[{}]}}"##,
            elements.join(",")
        );
        let t = table(&json, Principle::Unity, Mode::Solution);
        assert!(t.rows[0]
            .text
            .contains("use many different text properties"));
        assert!(t.rows[0].text.contains("4 sizes"));
        let actions = t.suggested_actions.unwrap();
        assert_eq!(actions.len(), 1);
        assert_eq!(actions[0].color, palette::green());
    }
}
