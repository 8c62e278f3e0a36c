use std::fmt::Write;

use super::{fmt_num, AnnotationLayer, Primitive, Stroke};
use crate::analyze::Extents;
use crate::geom::Point;
use crate::model::{DesignDocument, Element};

const HEAD_LEN: f64 = 10.0;
const HEAD_HALF_WIDTH: f64 = 5.0;

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

fn n(v: f64) -> String {
    fmt_num(v)
}

/// Triangle with its tip at `to`.
fn arrow_head(from: Point, to: Point) -> Option<[Point; 3]> {
    let (dx, dy) = (to.x - from.x, to.y - from.y);
    let len = dx.hypot(dy);
    if len < 1e-9 {
        return None;
    }
    let (ux, uy) = (dx / len, dy / len);
    let back = Point::new(to.x - ux * HEAD_LEN, to.y - uy * HEAD_LEN);
    Some([
        to,
        Point::new(back.x - uy * HEAD_HALF_WIDTH, back.y + ux * HEAD_HALF_WIDTH),
        Point::new(back.x + uy * HEAD_HALF_WIDTH, back.y - ux * HEAD_HALF_WIDTH),
    ])
}

/// Standalone SVG of the design, optionally with one annotation layer on top.
/// Output is a pure function of the inputs.
pub fn render_svg(
    doc: &DesignDocument,
    layer: Option<&AnnotationLayer>,
    extents: &Extents,
) -> String {
    let (w, h) = (n(doc.canvas_width), n(doc.canvas_height));
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{w}" height="{h}" fill="{}"/>"#,
        doc.background
    );

    for el in &doc.elements {
        match el {
            Element::Text(t) => {
                let Some(ext) = extents.get(&t.id) else {
                    continue;
                };
                for line in ext.inked_lines() {
                    let weight = if t.font_style.is_bold() {
                        "bold"
                    } else {
                        "normal"
                    };
                    let style = if t.font_style.is_italic() {
                        "italic"
                    } else {
                        "normal"
                    };
                    let _ = writeln!(
                        s,
                        r#"<text x="{}" y="{}" font-family="{}" font-size="{}" font-weight="{weight}" font-style="{style}" fill="{}">{}</text>"#,
                        n(line.bbox.x),
                        n(line.bbox.y + 0.8 * t.font_size),
                        escape(&t.font_family),
                        n(t.font_size),
                        t.color,
                        escape(&line.text)
                    );
                }
            }
            Element::Image(img) => {
                let _ = writeln!(
                    s,
                    r##"<rect x="{}" y="{}" width="{}" height="{}" fill="#e0e0e0" stroke="#9e9e9e"/>"##,
                    n(img.x),
                    n(img.y),
                    n(img.width),
                    n(img.height)
                );
            }
            Element::Graphic(g) => {
                let _ = writeln!(
                    s,
                    r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{}"/>"#,
                    n(g.x),
                    n(g.y),
                    n(g.width),
                    n(g.height),
                    g.fill
                );
            }
        }
    }

    if let Some(layer) = layer {
        let _ = writeln!(
            s,
            r#"<g class="annotation" data-principle="{}" data-mode="{}">"#,
            layer.principle, layer.mode
        );
        for p in &layer.primitives {
            write_primitive(&mut s, p);
        }
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    s
}

fn write_primitive(s: &mut String, p: &Primitive) {
    match p {
        Primitive::FilledRect {
            rect,
            color,
            opacity,
        } => {
            let _ = writeln!(
                s,
                r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{color}" fill-opacity="{}" stroke="{color}"/>"#,
                n(rect.x),
                n(rect.y),
                n(rect.width),
                n(rect.height),
                n(*opacity)
            );
        }
        Primitive::GrayBox { rect } => {
            let _ = writeln!(
                s,
                r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{}"/>"#,
                n(rect.x),
                n(rect.y),
                n(rect.width),
                n(rect.height),
                p.color()
            );
        }
        Primitive::DashedLine { from, to, color } => {
            let _ = writeln!(
                s,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{color}" stroke-width="2" stroke-dasharray="8 6"/>"#,
                n(from.x),
                n(from.y),
                n(to.x),
                n(to.y)
            );
        }
        Primitive::Arrow {
            from,
            to,
            color,
            stroke,
        } => {
            let dash = match stroke {
                Stroke::Solid => "",
                Stroke::Dashed => r#" stroke-dasharray="6 4""#,
            };
            let _ = writeln!(
                s,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{color}" stroke-width="3"{dash}/>"#,
                n(from.x),
                n(from.y),
                n(to.x),
                n(to.y)
            );
            if let Some(head) = arrow_head(*from, *to) {
                let pts: Vec<String> = head
                    .iter()
                    .map(|q| format!("{},{}", n(q.x), n(q.y)))
                    .collect();
                let _ = writeln!(s, r#"<polygon points="{}" fill="{color}"/>"#, pts.join(" "));
            }
        }
        Primitive::Label { at, text, color } => {
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" fill="{color}">{}</text>"#,
                n(at.x),
                n(at.y),
                escape(text)
            );
        }
    }
}
