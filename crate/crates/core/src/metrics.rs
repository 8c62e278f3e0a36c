//! Per-line text measurement from font metrics.
//!
//! Content is split on `\n`, then each paragraph is greedily word-wrapped at
//! the element's `box_width`, breaking only at whitespace. Line `i` sits at
//! `y + i * line_height`; its box height is `(ascent + descent) * font_size`.

use serde::Serialize;

use crate::geom::Rect;
use crate::model::{FontStyle, TextAlign, TextElement};

pub(crate) const WRAP_EPS: f64 = 1e-9;

/// Glyph advance and vertical metrics. Implementations must be immutable
/// after construction and scale linearly with font size.
pub trait MetricsProvider: Send + Sync {
    fn advance(&self, ch: char, family: &str, style: FontStyle, font_size: f64) -> f64;
    fn ascent_ratio(&self, family: &str) -> f64;
    fn descent_ratio(&self, family: &str) -> f64;

    fn text_width(&self, text: &str, family: &str, style: FontStyle, font_size: f64) -> f64 {
        text.chars()
            .map(|c| self.advance(c, family, style, font_size))
            .sum()
    }
}

/// Every glyph advances `0.6 * font_size`; ascent 0.8, descent 0.2.
#[derive(Debug, Clone, Copy, Default)]
pub struct FallbackMetrics;

pub const FALLBACK_ADVANCE_RATIO: f64 = 0.6;

impl MetricsProvider for FallbackMetrics {
    fn advance(&self, _ch: char, _family: &str, _style: FontStyle, font_size: f64) -> f64 {
        FALLBACK_ADVANCE_RATIO * font_size
    }

    fn ascent_ratio(&self, _family: &str) -> f64 {
        0.8
    }

    fn descent_ratio(&self, _family: &str) -> f64 {
        0.2
    }

    // one multiplication instead of a running sum keeps widths exact
    fn text_width(&self, text: &str, _family: &str, _style: FontStyle, font_size: f64) -> f64 {
        text.chars().count() as f64 * font_size * FALLBACK_ADVANCE_RATIO
    }
}

pub fn fallback_provider() -> FallbackMetrics {
    FallbackMetrics
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LineBox {
    pub line_index: usize,
    pub text: String,
    pub bbox: Rect,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TextExtent {
    pub element_id: String,
    pub lines: Vec<LineBox>,
    pub overall_bbox: Rect,
    pub line_height: f64,
}

impl TextExtent {
    /// Lines carrying visible text.
    pub fn inked_lines(&self) -> impl Iterator<Item = &LineBox> {
        self.lines.iter().filter(|l| l.bbox.width > 0.0)
    }

    pub fn max_line_width(&self) -> f64 {
        self.lines.iter().map(|l| l.bbox.width).fold(0.0, f64::max)
    }

    pub fn is_empty(&self) -> bool {
        self.inked_lines().next().is_none()
    }
}

/// Greedy wrap of `content` into lines no wider than `max_width`. A single
/// word wider than the box gets a line of its own.
pub fn wrap_lines(content: &str, max_width: f64, width_of: impl Fn(&str) -> f64) -> Vec<String> {
    if content.is_empty() {
        return Vec::new();
    }
    let mut lines = Vec::new();
    for paragraph in content.split('\n') {
        let mut current = String::new();
        for word in paragraph.split_whitespace() {
            if current.is_empty() {
                current.push_str(word);
                continue;
            }
            let candidate = format!("{current} {word}");
            if width_of(&candidate) <= max_width + WRAP_EPS {
                current = candidate;
            } else {
                lines.push(std::mem::take(&mut current));
                current.push_str(word);
            }
        }
        lines.push(current);
    }
    lines
}

pub fn measure_text(element: &TextElement, provider: &dyn MetricsProvider) -> TextExtent {
    let family = element.font_family.as_str();
    let width_of = |s: &str| provider.text_width(s, family, element.font_style, element.font_size);
    let line_height = element.line_height();
    let box_height =
        (provider.ascent_ratio(family) + provider.descent_ratio(family)) * element.font_size;

    let lines: Vec<LineBox> = wrap_lines(&element.content, element.box_width, width_of)
        .into_iter()
        .enumerate()
        .map(|(i, text)| {
            let width = width_of(&text);
            let offset = match element.internal_align {
                TextAlign::Left | TextAlign::Justify => 0.0,
                TextAlign::Center => (element.box_width - width) / 2.0,
                TextAlign::Right => element.box_width - width,
            };
            let height = if text.is_empty() { 0.0 } else { box_height };
            LineBox {
                line_index: i,
                bbox: Rect::new(
                    element.x + offset,
                    element.y + i as f64 * line_height,
                    width,
                    height,
                ),
                text,
            }
        })
        .collect();

    let overall_bbox = lines
        .iter()
        .filter(|l| !l.text.is_empty())
        .map(|l| l.bbox)
        .reduce(|a, b| a.union(&b))
        .unwrap_or(Rect::new(element.x, element.y, 0.0, 0.0));

    TextExtent {
        element_id: element.id.clone(),
        lines,
        overall_bbox,
        line_height,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Color;

    fn text(content: &str, size: f64, box_width: f64, align: TextAlign) -> TextElement {
        TextElement {
            id: "t".into(),
            x: 100.0,
            y: 50.0,
            box_width,
            content: content.into(),
            font_family: "Inter".into(),
            font_style: FontStyle::Regular,
            font_size: size,
            line_height_multiplier: 1.2,
            color: Color::hex("#000"),
            internal_align: align,
        }
    }

    #[test]
    fn empty_content_has_no_lines() {
        let ext = measure_text(&text("", 10.0, 100.0, TextAlign::Left), &FallbackMetrics);
        assert!(ext.lines.is_empty());
        assert_eq!(ext.overall_bbox, Rect::new(100.0, 50.0, 0.0, 0.0));
    }

    #[test]
    fn fallback_width_of_hi() {
        let ext = measure_text(&text("Hi", 10.0, 100.0, TextAlign::Left), &FallbackMetrics);
        assert_eq!(ext.lines.len(), 1);
        assert_eq!(ext.lines[0].bbox.width, 12.0);
        assert_eq!(ext.lines[0].bbox.height, 10.0);
    }

    #[test]
    fn fallback_advances() {
        let p = fallback_provider();
        assert_eq!(p.advance('W', "Anything", FontStyle::Regular, 20.0), 12.0);
        assert_eq!(
            p.text_width("abcdefghij", "Inter", FontStyle::Bold, 16.0),
            96.0
        );
    }

    #[test]
    fn explicit_newlines_step_by_line_height() {
        let ext = measure_text(
            &text("a\nb", 10.0, 100.0, TextAlign::Left),
            &FallbackMetrics,
        );
        assert_eq!(ext.line_height, 12.0);
        assert_eq!(ext.lines.len(), 2);
        assert_eq!(ext.lines[0].bbox.y, 50.0);
        assert_eq!(ext.lines[1].bbox.y, 62.0);
        assert_eq!(ext.overall_bbox, Rect::new(100.0, 50.0, 6.0, 22.0));
    }

    #[test]
    fn alignment_offsets() {
        let center = measure_text(
            &text("Hi", 10.0, 100.0, TextAlign::Center),
            &FallbackMetrics,
        );
        assert_eq!(center.lines[0].bbox.x, 100.0 + 44.0);
        let right = measure_text(&text("Hi", 10.0, 100.0, TextAlign::Right), &FallbackMetrics);
        assert_eq!(right.lines[0].bbox.x, 188.0);
        let justify = measure_text(
            &text("Hi", 10.0, 100.0, TextAlign::Justify),
            &FallbackMetrics,
        );
        assert_eq!(justify.lines[0].bbox.x, 100.0);
    }

    #[test]
    fn greedy_wrap_breaks_at_spaces() {
        // each char is 6 px at size 10; "aaa bbb" = 42 px
        let ext = measure_text(
            &text("aaa bbb ccc", 10.0, 45.0, TextAlign::Left),
            &FallbackMetrics,
        );
        let lines: Vec<&str> = ext.lines.iter().map(|l| l.text.as_str()).collect();
        assert_eq!(lines, vec!["aaa bbb", "ccc"]);
    }

    #[test]
    fn long_word_overflows_on_its_own_line() {
        let ext = measure_text(
            &text("a verylongword b", 10.0, 30.0, TextAlign::Left),
            &FallbackMetrics,
        );
        let lines: Vec<&str> = ext.lines.iter().map(|l| l.text.as_str()).collect();
        assert_eq!(lines, vec!["a", "verylongword", "b"]);
        assert_eq!(ext.lines[1].bbox.width, 72.0);
    }

    #[test]
    fn blank_lines_do_not_grow_the_box() {
        let ext = measure_text(
            &text("a\n\n", 10.0, 100.0, TextAlign::Left),
            &FallbackMetrics,
        );
        assert_eq!(ext.lines.len(), 3);
        assert_eq!(ext.overall_bbox.height, 10.0);
    }
}
