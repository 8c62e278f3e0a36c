#![allow(dead_code)]

use critiq_core::model::{
    Color, DesignDocument, Element, FontStyle, GraphicElement, ImageElement, TextAlign, TextElement,
};
use proptest::prelude::*;

pub const FAMILIES: [&str; 5] = ["Inter", "Roboto", "Lora", "Courier", "Georgia"];
pub const COLORS: [&str; 6] = [
    "#000000", "#222222", "#1a1a80", "#aa3300", "#ffffff", "#336699",
];

pub fn content() -> impl Strategy<Value = String> {
    prop::collection::vec(("[a-z]{1,9}", prop::bool::weighted(0.15)), 0..14).prop_map(|words| {
        let mut s = String::new();
        for (i, (w, newline)) in words.into_iter().enumerate() {
            if i > 0 {
                s.push(if newline { '\n' } else { ' ' });
            }
            s.push_str(&w);
        }
        s
    })
}

pub fn text(id: String) -> impl Strategy<Value = TextElement> {
    (
        (0u32..2000, 0u32..2000, 40u32..1200),
        content(),
        0..FAMILIES.len(),
        0..4usize,
        (6u32..160, 10u32..17),
        0..COLORS.len(),
        0..4usize,
    )
        .prop_map(
            move |((x, y, w), content, fam, style, (size, lh), color, align)| TextElement {
                id: id.clone(),
                x: x as f64 * 0.5,
                y: y as f64 * 0.5,
                box_width: w as f64 * 0.5,
                content,
                font_family: FAMILIES[fam].to_string(),
                font_style: FontStyle::ALL[style],
                font_size: size as f64 * 0.5,
                line_height_multiplier: lh as f64 / 10.0,
                color: Color::hex(COLORS[color]),
                internal_align: TextAlign::ALL[align],
            },
        )
}

fn other(id: String) -> impl Strategy<Value = Element> {
    (
        any::<bool>(),
        0u32..1000,
        0u32..1000,
        1u32..400,
        1u32..400,
        0..COLORS.len(),
    )
        .prop_map(move |(image, x, y, w, h, c)| {
            let (x, y, width, height) = (x as f64, y as f64, w as f64, h as f64);
            if image {
                Element::Image(ImageElement {
                    id: id.clone(),
                    x,
                    y,
                    width,
                    height,
                    source: "placeholder.png".into(),
                })
            } else {
                Element::Graphic(GraphicElement {
                    id: id.clone(),
                    x,
                    y,
                    width,
                    height,
                    shape: "rect".into(),
                    fill: Color::hex(COLORS[c]),
                })
            }
        })
}

/// Random valid documents with up to `max_texts` text elements and a few
/// non-text elements.
pub fn document(max_texts: usize) -> impl Strategy<Value = DesignDocument> {
    (0..=max_texts, 0..3usize, 600u32..1600, 600u32..1600).prop_flat_map(|(nt, no, w, h)| {
        let texts: Vec<_> = (0..nt)
            .map(|i| text(format!("t{i}")).prop_map(Element::Text).boxed())
            .collect();
        let others: Vec<_> = (0..no).map(|i| other(format!("o{i}")).boxed()).collect();
        (texts, others).prop_map(move |(mut t, o)| {
            t.extend(o);
            let mut doc = DesignDocument::new(w as f64, h as f64, Color::hex("#ffffff"));
            doc.elements = t;
            doc
        })
    })
}
