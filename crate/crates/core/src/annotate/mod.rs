//! Annotation overlays, their explanation tables and SVG rendering.
//!
//! Awareness layers surface structure with neutral colors only. Solution
//! layers mark problems in red and proposed edits in green; with no problems
//! they confirm the relevant elements in green.

mod explain;
mod layers;
mod svg;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::analyze::{CritiqueResult, Extents, Principle, Thresholds};
use crate::geom::{Point, Rect};
use crate::model::{Color, DesignDocument};

pub use explain::{gen_explanation, ExplanationRow, ExplanationTable};
pub use layers::{gen_awareness, gen_solution};
pub use svg::render_svg;

/// Colors drawn from the Tableau 10/20 palettes.
pub mod palette {
    use crate::model::Color;

    pub const ISSUE_RED: &str = "#d62728";
    pub const SUGGESTION_GREEN: &str = "#2ca02c";
    pub const GUIDE_GRAY: &str = "#7f7f7f";
    pub const GRAY_BOX: &str = "#c7c7c7";

    pub const EMPHASIS_LOW: &str = "#c7c7c7";
    pub const EMPHASIS_MEDIUM: &str = "#aec7e8";
    pub const EMPHASIS_HIGH: &str = "#1f77b4";

    /// Colors for arbitrary semantic groups in awareness layers.
    pub const GROUP_SERIES: [&str; 9] = [
        "#1f77b4", "#ff7f0e", "#9467bd", "#17becf", "#8c564b", "#e377c2", "#bcbd22", "#ffbb78",
        "#c5b0d5",
    ];

    /// Everything an awareness layer may use besides the guide gray.
    pub fn awareness_series() -> Vec<Color> {
        let mut out: Vec<Color> = [EMPHASIS_LOW, EMPHASIS_MEDIUM, EMPHASIS_HIGH]
            .into_iter()
            .chain(GROUP_SERIES)
            .map(Color::hex)
            .collect();
        out.dedup();
        out.sort();
        out.dedup();
        out
    }

    pub fn group(i: usize) -> Color {
        Color::hex(GROUP_SERIES[i % GROUP_SERIES.len()])
    }

    pub fn red() -> Color {
        Color::hex(ISSUE_RED)
    }

    pub fn green() -> Color {
        Color::hex(SUGGESTION_GREEN)
    }

    pub fn guide() -> Color {
        Color::hex(GUIDE_GRAY)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Awareness,
    Solution,
}

impl Mode {
    pub const ALL: [Mode; 2] = [Mode::Awareness, Mode::Solution];

    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Awareness => "awareness",
            Mode::Solution => "solution",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown mode `{0}`")]
pub struct UnknownMode(pub String);

impl FromStr for Mode {
    type Err = UnknownMode;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Mode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| UnknownMode(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stroke {
    Solid,
    Dashed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Primitive {
    FilledRect {
        rect: Rect,
        color: Color,
        opacity: f64,
    },
    DashedLine {
        from: Point,
        to: Point,
        color: Color,
    },
    /// Head at `to`.
    Arrow {
        from: Point,
        to: Point,
        color: Color,
        stroke: Stroke,
    },
    Label {
        at: Point,
        text: String,
        color: Color,
    },
    /// Text abstracted to a plain block.
    GrayBox { rect: Rect },
}

impl Primitive {
    pub fn color(&self) -> Color {
        match self {
            Primitive::FilledRect { color, .. }
            | Primitive::DashedLine { color, .. }
            | Primitive::Arrow { color, .. }
            | Primitive::Label { color, .. } => color.clone(),
            Primitive::GrayBox { .. } => Color::hex(palette::GRAY_BOX),
        }
    }

    /// Paint order: fills, guides, arrows, labels.
    pub fn z_rank(&self) -> u8 {
        match self {
            Primitive::FilledRect { .. } | Primitive::GrayBox { .. } => 0,
            Primitive::DashedLine { .. } => 1,
            Primitive::Arrow { .. } => 2,
            Primitive::Label { .. } => 3,
        }
    }

    pub fn points(&self) -> Vec<Point> {
        match self {
            Primitive::FilledRect { rect, .. } | Primitive::GrayBox { rect } => vec![
                Point::new(rect.x, rect.y),
                Point::new(rect.right(), rect.bottom()),
            ],
            Primitive::DashedLine { from, to, .. } | Primitive::Arrow { from, to, .. } => {
                vec![*from, *to]
            }
            Primitive::Label { at, .. } => vec![*at],
        }
    }
}

/// A named semantic group and the color it is drawn in.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupColor {
    pub group: String,
    pub color: Color,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnnotationLayer {
    pub principle: Principle,
    pub mode: Mode,
    pub primitives: Vec<Primitive>,
    pub group_color_map: Vec<GroupColor>,
}

impl AnnotationLayer {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("layer serialization is infallible")
    }

    pub fn colors(&self) -> Vec<Color> {
        let mut c: Vec<Color> = self.primitives.iter().map(Primitive::color).collect();
        c.sort();
        c.dedup();
        c
    }
}

/// Everything the annotation generators look at.
#[derive(Debug, Clone, Copy)]
pub struct Context<'a> {
    pub doc: &'a DesignDocument,
    pub result: &'a CritiqueResult,
    pub extents: &'a Extents,
    pub thresholds: &'a Thresholds,
}

impl<'a> Context<'a> {
    pub fn new(
        doc: &'a DesignDocument,
        result: &'a CritiqueResult,
        extents: &'a Extents,
        thresholds: &'a Thresholds,
    ) -> Self {
        Self {
            doc,
            result,
            extents,
            thresholds,
        }
    }

    pub(crate) fn bbox(&self, id: &str) -> Option<Rect> {
        self.extents
            .get(id)
            .filter(|e| !e.is_empty())
            .map(|e| e.overall_bbox)
    }

    /// Measured box even when it has no ink; alignment and unity cover
    /// every text element.
    pub(crate) fn outline(&self, id: &str) -> Option<Rect> {
        self.extents.get(id).map(|e| e.overall_bbox)
    }

    pub(crate) fn name(&self, id: &str) -> String {
        self.doc
            .text(id)
            .map(|t| t.display_name())
            .unwrap_or_else(|| format!("\u{201c}{id}\u{201d}"))
    }

    pub(crate) fn names(&self, ids: &[String]) -> String {
        join_names(&ids.iter().map(|id| self.name(id)).collect::<Vec<_>>())
    }

    /// Keeps derived points within the canvas plus 5% slack.
    pub(crate) fn clamp(&self, p: Point) -> Point {
        let sx = 0.05 * self.doc.canvas_width;
        let sy = 0.05 * self.doc.canvas_height;
        Point::new(
            p.x.clamp(-sx, self.doc.canvas_width + sx),
            p.y.clamp(-sy, self.doc.canvas_height + sy),
        )
    }
}

/// "A", "A and B", "A, B and C".
pub(crate) fn join_names(names: &[String]) -> String {
    match names {
        [] => String::new(),
        [one] => one.clone(),
        [init @ .., last] => format!("{} and {last}", init.join(", ")),
    }
}

/// Compact, stable number formatting for text output.
pub(crate) fn fmt_num(v: f64) -> String {
    let s = format!("{:.2}", v);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

/// Layer and table for one principle and mode.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnnotationAsset {
    pub principle: Principle,
    pub mode: Mode,
    pub layer: AnnotationLayer,
    pub explanation: ExplanationTable,
}

/// All eight layers with their explanations, hierarchy first, awareness before solution.
pub fn generate_all(ctx: &Context<'_>) -> Vec<AnnotationAsset> {
    let mut out = Vec::with_capacity(8);
    for principle in Principle::ALL {
        for mode in Mode::ALL {
            let layer = match mode {
                Mode::Awareness => gen_awareness(principle, ctx),
                Mode::Solution => gen_solution(principle, ctx),
            };
            let explanation = gen_explanation(principle, mode, ctx);
            out.push(AnnotationAsset {
                principle,
                mode,
                layer,
                explanation,
            });
        }
    }
    out
}
