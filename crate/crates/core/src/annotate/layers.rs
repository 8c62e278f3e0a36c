use super::{palette, AnnotationLayer, Context, GroupColor, Mode, Primitive, Stroke};
use crate::analyze::{
    anchor_of, Action, AnchorKind, EmphasisLevel, Issue, IssueKind, Principle, UnityProperty,
};
use crate::geom::{Point, Rect};
use crate::model::Color;

const FILL_OPACITY: f64 = 0.35;
const ISSUE_OPACITY: f64 = 0.45;
const ARROW_LEN: f64 = 18.0;
const LABEL_STEP: f64 = 14.0;

pub(crate) fn level_color(level: EmphasisLevel) -> Color {
    Color::hex(match level {
        EmphasisLevel::Low => palette::EMPHASIS_LOW,
        EmphasisLevel::Medium => palette::EMPHASIS_MEDIUM,
        EmphasisLevel::High => palette::EMPHASIS_HIGH,
    })
}

pub(crate) fn level_group(level: EmphasisLevel) -> String {
    format!("{} emphasis", level.as_str())
}

pub(crate) fn alignment_group_name(i: usize) -> String {
    format!("alignment group {}", i + 1)
}

/// Color of each text element in the unity awareness layer, by document order.
pub(crate) fn unity_element_color(i: usize) -> Color {
    palette::group(i)
}

/// Semantic groups of an awareness layer; shared with the explanation table.
pub(crate) fn awareness_groups(principle: Principle, ctx: &Context<'_>) -> Vec<GroupColor> {
    match principle {
        Principle::Hierarchy => {
            let mut levels: Vec<EmphasisLevel> = ctx
                .result
                .hierarchy
                .assignments
                .iter()
                .map(|a| a.level)
                .collect();
            levels.sort_by(|a, b| b.cmp(a));
            levels.dedup();
            levels
                .into_iter()
                .map(|l| GroupColor {
                    group: level_group(l),
                    color: level_color(l),
                })
                .collect()
        }
        Principle::Alignment => (0..ctx.result.alignment.groups.len())
            .map(|i| GroupColor {
                group: alignment_group_name(i),
                color: palette::group(i),
            })
            .collect(),
        Principle::Whitespace => {
            let mut groups = Vec::new();
            if ctx.doc.text_elements().any(|t| ctx.bbox(&t.id).is_some()) {
                groups.push(GroupColor {
                    group: "text".into(),
                    color: Color::hex(palette::GRAY_BOX),
                });
            }
            groups.push(GroupColor {
                group: "margin guide".into(),
                color: palette::guide(),
            });
            groups
        }
        Principle::Unity => {
            let mut groups: Vec<GroupColor> = ctx
                .doc
                .text_elements()
                .enumerate()
                .map(|(i, t)| GroupColor {
                    group: t.id.clone(),
                    color: unity_element_color(i),
                })
                .collect();
            groups.push(GroupColor {
                group: "distinct counts".into(),
                color: palette::guide(),
            });
            groups
        }
    }
}

/// Semantic groups of a solution layer; shared with the explanation table.
pub(crate) fn solution_groups(principle: Principle, ctx: &Context<'_>) -> Vec<GroupColor> {
    if ctx.result.issues_for(principle).is_empty() {
        vec![GroupColor {
            group: "confirmed".into(),
            color: palette::green(),
        }]
    } else {
        vec![
            GroupColor {
                group: "issue".into(),
                color: palette::red(),
            },
            GroupColor {
                group: "suggestion".into(),
                color: palette::green(),
            },
        ]
    }
}

struct Builder<'c, 'a> {
    ctx: &'c Context<'a>,
    prims: Vec<Primitive>,
}

impl<'c, 'a> Builder<'c, 'a> {
    fn new(ctx: &'c Context<'a>) -> Self {
        Self {
            ctx,
            prims: Vec::new(),
        }
    }

    fn rect(&mut self, rect: Rect, color: Color, opacity: f64) {
        self.prims.push(Primitive::FilledRect {
            rect,
            color,
            opacity,
        });
    }

    fn line(&mut self, from: Point, to: Point, color: Color) {
        self.prims.push(Primitive::DashedLine {
            from: self.ctx.clamp(from),
            to: self.ctx.clamp(to),
            color,
        });
    }

    fn arrow(&mut self, from: Point, to: Point, color: Color, stroke: Stroke) {
        self.prims.push(Primitive::Arrow {
            from: self.ctx.clamp(from),
            to: self.ctx.clamp(to),
            color,
            stroke,
        });
    }

    fn label(&mut self, at: Point, text: impl Into<String>, color: Color) {
        self.prims.push(Primitive::Label {
            at: self.ctx.clamp(at),
            text: text.into(),
            color,
        });
    }

    fn vertical_guide(&mut self, x: f64, color: Color) {
        let h = self.ctx.doc.canvas_height;
        self.line(Point::new(x, 0.0), Point::new(x, h), color);
    }

    fn margin_guides(&mut self, color: Color) {
        let m = self.ctx.thresholds.margin(self.ctx.doc);
        let (w, h) = (self.ctx.doc.canvas_width, self.ctx.doc.canvas_height);
        self.line(Point::new(m, 0.0), Point::new(m, h), color.clone());
        self.line(Point::new(w - m, 0.0), Point::new(w - m, h), color.clone());
        self.line(Point::new(0.0, m), Point::new(w, m), color.clone());
        self.line(Point::new(0.0, h - m), Point::new(w, h - m), color);
    }

    /// Four diagonal arrows at the box corners, outward or inward.
    fn corner_arrows(&mut self, r: Rect, outward: bool) {
        let corners = [
            (Point::new(r.x, r.y), -1.0, -1.0),
            (Point::new(r.right(), r.y), 1.0, -1.0),
            (Point::new(r.x, r.bottom()), -1.0, 1.0),
            (Point::new(r.right(), r.bottom()), 1.0, 1.0),
        ];
        let d = ARROW_LEN / std::f64::consts::SQRT_2;
        for (c, sx, sy) in corners {
            let out = Point::new(c.x + sx * d, c.y + sy * d);
            if outward {
                self.arrow(c, out, palette::green(), Stroke::Solid);
            } else {
                self.arrow(out, c, palette::green(), Stroke::Solid);
            }
        }
    }

    /// Label position beside a box, flipping left when it would leave the canvas.
    fn beside(&self, r: Rect, width: f64) -> f64 {
        let right = r.right() + 8.0;
        if right + width <= self.ctx.doc.canvas_width {
            right
        } else {
            r.x - 8.0 - width
        }
    }

    fn finish(
        mut self,
        principle: Principle,
        mode: Mode,
        groups: Vec<GroupColor>,
    ) -> AnnotationLayer {
        self.prims.sort_by_key(Primitive::z_rank);
        AnnotationLayer {
            principle,
            mode,
            primitives: self.prims,
            group_color_map: groups,
        }
    }
}

pub fn gen_awareness(principle: Principle, ctx: &Context<'_>) -> AnnotationLayer {
    let mut b = Builder::new(ctx);
    match principle {
        Principle::Hierarchy => {
            for a in &ctx.result.hierarchy.assignments {
                if let Some(r) = ctx.bbox(&a.element_id) {
                    b.rect(r, level_color(a.level), FILL_OPACITY);
                }
            }
        }
        Principle::Alignment => {
            for (i, g) in ctx.result.alignment.groups.iter().enumerate() {
                let color = palette::group(i);
                b.vertical_guide(g.axis_x, color.clone());
                for id in &g.members {
                    let Some(el) = ctx.doc.text(id) else { continue };
                    if let Some(r) = ctx.outline(id) {
                        b.rect(r, color.clone(), FILL_OPACITY);
                        b.label(
                            Point::new(r.x, r.y - 4.0),
                            el.internal_align.as_str(),
                            color.clone(),
                        );
                    }
                }
            }
        }
        Principle::Whitespace => {
            for el in ctx.doc.text_elements() {
                if let Some(ext) = ctx.extents.get(&el.id) {
                    for line in ext.inked_lines() {
                        b.prims.push(Primitive::GrayBox { rect: line.bbox });
                    }
                }
            }
            b.margin_guides(palette::guide());
        }
        Principle::Unity => {
            for (i, el) in ctx.doc.text_elements().enumerate() {
                let color = unity_element_color(i);
                let Some(r) = ctx.outline(&el.id) else {
                    continue;
                };
                b.rect(r, color.clone(), FILL_OPACITY);
                let x = b.beside(r, 110.0);
                let rows = [
                    el.font_family.clone(),
                    el.font_style.as_str().to_string(),
                    format!("{} px", super::fmt_num(el.font_size)),
                    el.color.to_string(),
                ];
                for (row, text) in rows.into_iter().enumerate() {
                    b.label(
                        Point::new(x, r.y + LABEL_STEP * (row as f64 + 1.0)),
                        text,
                        color.clone(),
                    );
                }
            }
            count_panel(&mut b, |_| palette::guide());
        }
    }
    let groups = awareness_groups(principle, ctx);
    b.finish(principle, Mode::Awareness, groups)
}

/// Distinct-count labels stacked in the top-right corner.
fn count_panel(b: &mut Builder<'_, '_>, color_of: impl Fn(UnityProperty) -> Color) -> Vec<Point> {
    let counts = b.ctx.result.unity.distinct_counts;
    let m = b.ctx.thresholds.margin(b.ctx.doc);
    let x = b.ctx.doc.canvas_width - m - 120.0;
    let mut anchors = Vec::new();
    for (i, p) in UnityProperty::ALL.into_iter().enumerate() {
        let at = Point::new(x, m + LABEL_STEP * (i as f64 + 1.0));
        b.label(at, format!("{} {}", counts.get(p), p.plural()), color_of(p));
        anchors.push(at);
    }
    anchors
}

pub fn gen_solution(principle: Principle, ctx: &Context<'_>) -> AnnotationLayer {
    let mut b = Builder::new(ctx);
    let issues = ctx.result.issues_for(principle);
    if issues.is_empty() {
        confirm(&mut b, principle);
    } else {
        for issue in issues {
            mark_issue(&mut b, issue);
        }
        if principle == Principle::Unity {
            let flagged: Vec<UnityProperty> = issues
                .iter()
                .flat_map(|i| &i.suggestions)
                .filter_map(|s| match &s.action {
                    Action::ReducePropertyCount { property, .. } => Some(*property),
                    _ => None,
                })
                .collect();
            let anchors = count_panel(&mut b, |p| {
                if flagged.contains(&p) {
                    palette::red()
                } else {
                    palette::guide()
                }
            });
            for (p, at) in UnityProperty::ALL.into_iter().zip(anchors) {
                if flagged.contains(&p) {
                    let x = at.x - 10.0;
                    b.arrow(
                        Point::new(x, at.y - 12.0),
                        Point::new(x, at.y + 2.0),
                        palette::green(),
                        Stroke::Solid,
                    );
                }
            }
        }
    }
    let groups = solution_groups(principle, ctx);
    b.finish(principle, Mode::Solution, groups)
}

fn confirm(b: &mut Builder<'_, '_>, principle: Principle) {
    let ctx = b.ctx;
    match principle {
        Principle::Hierarchy => {
            if let Some(r) = ctx
                .result
                .hierarchy
                .title_candidate
                .as_deref()
                .and_then(|id| ctx.bbox(id))
            {
                b.rect(r, palette::green(), FILL_OPACITY);
            }
        }
        Principle::Alignment => {
            for g in &ctx.result.alignment.groups {
                b.vertical_guide(g.axis_x, palette::green());
                for id in &g.members {
                    if let Some(r) = ctx.outline(id) {
                        b.rect(r, palette::green(), FILL_OPACITY);
                    }
                }
            }
        }
        Principle::Whitespace => b.margin_guides(palette::green()),
        Principle::Unity => {
            count_panel(b, |_| palette::green());
        }
    }
}

fn mark_issue(b: &mut Builder<'_, '_>, issue: &Issue) {
    let ctx = b.ctx;
    if issue.kind == IssueKind::RaggedLines {
        for ragged in &ctx.result.whitespace.ragged_elements {
            if !issue.target_ids.contains(&ragged.element_id) {
                continue;
            }
            let Some(ext) = ctx.extents.get(&ragged.element_id) else {
                continue;
            };
            for &i in &ragged.lines {
                let line = ext.lines[i].bbox;
                b.rect(line, palette::red(), ISSUE_OPACITY);
                b.label(
                    Point::new(line.right() + 6.0, line.y + line.height * 0.8),
                    "\u{27f7}",
                    palette::green(),
                );
            }
        }
    } else {
        for id in &issue.target_ids {
            if let Some(r) = ctx.outline(id) {
                b.rect(r, palette::red(), ISSUE_OPACITY);
            }
        }
    }

    for s in &issue.suggestions {
        for id in &s.target_ids {
            let Some(el) = ctx.doc.text(id) else { continue };
            let Some(r) = ctx.outline(id) else { continue };
            match &s.action {
                Action::Enlarge { font_size } | Action::Shrink { font_size } => {
                    let outward = matches!(s.action, Action::Enlarge { .. });
                    b.corner_arrows(r, outward);
                    b.label(
                        Point::new(r.right() + 14.0, r.y - 6.0),
                        format!("{} px", super::fmt_num(*font_size)),
                        palette::green(),
                    );
                }
                Action::MoveBy { dx, dy } => {
                    let c = r.center();
                    b.arrow(
                        c,
                        Point::new(c.x + dx, c.y + dy),
                        palette::green(),
                        Stroke::Solid,
                    );
                }
                Action::ChangeInternalAlign { align } => {
                    let (_, from_x) = anchor_of(el);
                    let to_x = AnchorKind::of_align(*align).position(el.x, el.box_width);
                    let y = r.center().y;
                    b.arrow(
                        Point::new(from_x, y),
                        Point::new(to_x, y),
                        palette::green(),
                        Stroke::Dashed,
                    );
                }
                Action::MergeToAxis { axis_x, .. } => {
                    let (_, from_x) = anchor_of(el);
                    let y = r.center().y;
                    b.arrow(
                        Point::new(from_x, y),
                        Point::new(*axis_x, y),
                        palette::green(),
                        Stroke::Solid,
                    );
                }
                Action::ReducePropertyCount { .. } => {}
                Action::EvenOutLines { box_width, x, .. } => {
                    let y = r.bottom() + 6.0;
                    b.line(
                        Point::new(*x, y),
                        Point::new(x + box_width, y),
                        palette::green(),
                    );
                }
            }
        }
        if let Action::MergeToAxis { axis_x, .. } = s.action {
            b.vertical_guide(axis_x, palette::green());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyze::{detect_all, measure_all, Thresholds};
    use crate::metrics::FallbackMetrics;
    use crate::model::{parse_design, DesignDocument};

    fn layers(doc: &DesignDocument, principle: Principle) -> (AnnotationLayer, AnnotationLayer) {
        let result = detect_all(doc, &FallbackMetrics);
        let extents = measure_all(doc, &FallbackMetrics);
        let t = Thresholds::default();
        let ctx = Context::new(doc, &result, &extents, &t);
        (
            gen_awareness(principle, &ctx),
            gen_solution(principle, &ctx),
        )
    }

    fn empty() -> DesignDocument {
        parse_design(
            r##"{"canvas_width":1080,"canvas_height":1080,"background":"#fff","elements":[]}"##,
        )
        .unwrap()
    }

    #[test]
    fn empty_whitespace_still_has_margin_guides() {
        let (aware, _) = layers(&empty(), Principle::Whitespace);
        assert_eq!(aware.primitives.len(), 4);
        assert!(aware
            .primitives
            .iter()
            .all(|p| matches!(p, Primitive::DashedLine { .. })));
        let (aware, _) = layers(&empty(), Principle::Hierarchy);
        assert!(aware.primitives.is_empty());
    }

    #[test]
    fn two_alignment_groups_two_colors() {
        let doc = parse_design(
            r##"{"canvas_width":1080,"canvas_height":1080,"background":"#fff","elements":[
              {"type":"text","id":"a","x":60,"y":100,"box_width":300,"content":"One",
               "font_family":"Inter","font_style":"regular","font_size":16,"color":"#000","internal_align":"left"},
              {"type":"text","id":"b","x":60,"y":200,"box_width":300,"content":"Two",
               "font_family":"Inter","font_style":"regular","font_size":16,"color":"#000","internal_align":"left"},
              {"type":"text","id":"c","x":700,"y":300,"box_width":300,"content":"Three",
               "font_family":"Inter","font_style":"regular","font_size":16,"color":"#000","internal_align":"right"}]}"##,
        )
        .unwrap();
        let (aware, _) = layers(&doc, Principle::Alignment);
        let guides = aware
            .primitives
            .iter()
            .filter(|p| matches!(p, Primitive::DashedLine { .. }))
            .count();
        assert_eq!(guides, 2);
        let mut fills: Vec<Color> = aware
            .primitives
            .iter()
            .filter_map(|p| match p {
                Primitive::FilledRect { color, .. } => Some(color.clone()),
                _ => None,
            })
            .collect();
        fills.sort();
        fills.dedup();
        assert_eq!(fills.len(), 2);
    }

    #[test]
    fn z_order_is_monotone() {
        let doc = parse_design(
            r##"{"canvas_width":1080,"canvas_height":1080,"background":"#fff","elements":[
              {"type":"text","id":"a","x":60,"y":100,"box_width":300,"content":"One",
               "font_family":"Inter","font_style":"regular","font_size":16,"color":"#000","internal_align":"center"}]}"##,
        )
        .unwrap();
        for p in Principle::ALL {
            let (a, s) = layers(&doc, p);
            for layer in [a, s] {
                let ranks: Vec<u8> = layer.primitives.iter().map(Primitive::z_rank).collect();
                assert!(ranks.windows(2).all(|w| w[0] <= w[1]), "{p}");
            }
        }
    }
}
