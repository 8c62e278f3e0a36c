//! Canvas document schema, validation and canonical serialization.
//!
//! Canonical key order for the top level is `canvas_width, canvas_height,
//! background, elements`. Each element starts with `type`, then `id`, `x`, `y`
//! and the kind-specific fields in the order they are declared below. Numbers
//! are written in their shortest round-trip form (always with a fractional
//! part, e.g. `1080.0`); colors are normalized to lowercase `#rrggbb`.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;
use serde_json::{Map, Value};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("schema violation at `{path}`: {reason}")]
    SchemaViolation { path: String, reason: String },
    #[error("duplicate element id `{0}`")]
    DuplicateId(String),
}

impl ModelError {
    fn schema(path: impl Into<String>, reason: impl Into<String>) -> Self {
        ModelError::SchemaViolation {
            path: path.into(),
            reason: reason.into(),
        }
    }
}

/// sRGB color, stored as lowercase `#rrggbb`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Color(String);

impl Color {
    /// Accepts `#rgb` or `#rrggbb`, any case.
    pub fn parse(s: &str) -> Option<Color> {
        let hex = s.strip_prefix('#')?;
        if !hex.chars().all(|c| c.is_ascii_hexdigit()) {
            return None;
        }
        let hex = hex.to_ascii_lowercase();
        match hex.len() {
            6 => Some(Color(format!("#{hex}"))),
            3 => {
                let expanded: String = hex.chars().flat_map(|c| [c, c]).collect();
                Some(Color(format!("#{expanded}")))
            }
            _ => None,
        }
    }

    /// Panics on malformed input; meant for literals.
    pub fn hex(s: &str) -> Color {
        Color::parse(s).unwrap_or_else(|| panic!("invalid color literal {s:?}"))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FontStyle {
    Regular,
    Bold,
    Italic,
    BoldItalic,
}

impl FontStyle {
    pub const ALL: [FontStyle; 4] = [
        FontStyle::Regular,
        FontStyle::Bold,
        FontStyle::Italic,
        FontStyle::BoldItalic,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            FontStyle::Regular => "regular",
            FontStyle::Bold => "bold",
            FontStyle::Italic => "italic",
            FontStyle::BoldItalic => "bold-italic",
        }
    }

    pub fn from_name(s: &str) -> Option<FontStyle> {
        FontStyle::ALL.into_iter().find(|v| v.as_str() == s)
    }

    pub fn is_bold(&self) -> bool {
        matches!(self, FontStyle::Bold | FontStyle::BoldItalic)
    }

    pub fn is_italic(&self) -> bool {
        matches!(self, FontStyle::Italic | FontStyle::BoldItalic)
    }
}

/// How text is aligned inside its own box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TextAlign {
    Left,
    Center,
    Right,
    Justify,
}

impl TextAlign {
    pub const ALL: [TextAlign; 4] = [
        TextAlign::Left,
        TextAlign::Center,
        TextAlign::Right,
        TextAlign::Justify,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            TextAlign::Left => "left",
            TextAlign::Center => "center",
            TextAlign::Right => "right",
            TextAlign::Justify => "justify",
        }
    }

    pub fn from_name(s: &str) -> Option<TextAlign> {
        TextAlign::ALL.into_iter().find(|v| v.as_str() == s)
    }
}

pub const DEFAULT_LINE_HEIGHT_MULTIPLIER: f64 = 1.2;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TextElement {
    pub id: String,
    pub x: f64,
    pub y: f64,
    pub box_width: f64,
    pub content: String,
    pub font_family: String,
    pub font_style: FontStyle,
    pub font_size: f64,
    pub line_height_multiplier: f64,
    pub color: Color,
    pub internal_align: TextAlign,
}

impl TextElement {
    /// Line pitch in pixels. Font sizes are taken as pixel sizes.
    pub fn line_height(&self) -> f64 {
        self.line_height_multiplier * self.font_size
    }

    /// Up to the first 20 characters of the content, newlines flattened, with an
    /// ellipsis when truncated.
    pub fn display_name(&self) -> String {
        const MAX: usize = 20;
        let flat: String = self
            .content
            .chars()
            .map(|c| if c == '\n' { ' ' } else { c })
            .collect();
        let flat = flat.trim();
        if flat.chars().count() > MAX {
            let head: String = flat.chars().take(MAX).collect();
            format!("\u{201c}{}\u{2026}\u{201d}", head.trim_end())
        } else if flat.is_empty() {
            format!("\u{201c}{}\u{201d}", self.id)
        } else {
            format!("\u{201c}{flat}\u{201d}")
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImageElement {
    pub id: String,
    pub x: f64,
    pub y: f64,
    pub width: f64,
    pub height: f64,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphicElement {
    pub id: String,
    pub x: f64,
    pub y: f64,
    pub width: f64,
    pub height: f64,
    pub shape: String,
    pub fill: Color,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Element {
    Text(TextElement),
    Image(ImageElement),
    Graphic(GraphicElement),
}

impl Element {
    pub fn id(&self) -> &str {
        match self {
            Element::Text(e) => &e.id,
            Element::Image(e) => &e.id,
            Element::Graphic(e) => &e.id,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Element::Text(_) => "text",
            Element::Image(_) => "image",
            Element::Graphic(_) => "graphic",
        }
    }

    pub fn as_text(&self) -> Option<&TextElement> {
        match self {
            Element::Text(t) => Some(t),
            _ => None,
        }
    }

    pub fn as_text_mut(&mut self) -> Option<&mut TextElement> {
        match self {
            Element::Text(t) => Some(t),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignDocument {
    pub canvas_width: f64,
    pub canvas_height: f64,
    pub background: Color,
    pub elements: Vec<Element>,
}

impl DesignDocument {
    pub fn new(canvas_width: f64, canvas_height: f64, background: Color) -> Self {
        Self {
            canvas_width,
            canvas_height,
            background,
            elements: Vec::new(),
        }
    }

    pub fn text_elements(&self) -> impl Iterator<Item = &TextElement> {
        self.elements.iter().filter_map(Element::as_text)
    }

    pub fn element(&self, id: &str) -> Option<&Element> {
        self.elements.iter().find(|e| e.id() == id)
    }

    pub fn text(&self, id: &str) -> Option<&TextElement> {
        self.element(id).and_then(Element::as_text)
    }

    pub fn text_mut(&mut self, id: &str) -> Option<&mut TextElement> {
        self.elements
            .iter_mut()
            .find(|e| e.id() == id)
            .and_then(Element::as_text_mut)
    }

    pub fn min_dimension(&self) -> f64 {
        self.canvas_width.min(self.canvas_height)
    }

    /// Checks every document invariant.
    pub fn validate(&self) -> Result<(), ModelError> {
        positive(self.canvas_width, "canvas_width")?;
        positive(self.canvas_height, "canvas_height")?;
        let mut seen = HashSet::new();
        for (i, el) in self.elements.iter().enumerate() {
            let base = format!("elements[{i}]");
            if el.id().is_empty() {
                return Err(ModelError::schema(
                    format!("{base}.id"),
                    "must be non-empty",
                ));
            }
            if !seen.insert(el.id()) {
                return Err(ModelError::DuplicateId(el.id().to_string()));
            }
            match el {
                Element::Text(t) => {
                    finite(t.x, &format!("{base}.x"))?;
                    finite(t.y, &format!("{base}.y"))?;
                    positive(t.box_width, &format!("{base}.box_width"))?;
                    positive(t.font_size, &format!("{base}.font_size"))?;
                    positive(
                        t.line_height_multiplier,
                        &format!("{base}.line_height_multiplier"),
                    )?;
                }
                Element::Image(ImageElement {
                    x,
                    y,
                    width,
                    height,
                    ..
                })
                | Element::Graphic(GraphicElement {
                    x,
                    y,
                    width,
                    height,
                    ..
                }) => {
                    finite(*x, &format!("{base}.x"))?;
                    finite(*y, &format!("{base}.y"))?;
                    non_negative(*width, &format!("{base}.width"))?;
                    non_negative(*height, &format!("{base}.height"))?;
                }
            }
        }
        Ok(())
    }
}

fn finite(v: f64, path: &str) -> Result<(), ModelError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(ModelError::schema(path, "must be a finite number"))
    }
}

fn positive(v: f64, path: &str) -> Result<(), ModelError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(ModelError::schema(path, "must be a number greater than 0"))
    }
}

fn non_negative(v: f64, path: &str) -> Result<(), ModelError> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(ModelError::schema(path, "must be a number no less than 0"))
    }
}

/// Parses and validates a design document.
pub fn parse_design(json_text: &str) -> Result<DesignDocument, ModelError> {
    let value: Value =
        serde_json::from_str(json_text).map_err(|e| ModelError::Json(e.to_string()))?;
    parse_design_value(&value)
}

/// Same as [`parse_design`] for an already decoded JSON value.
pub fn parse_design_value(value: &Value) -> Result<DesignDocument, ModelError> {
    let root = Obj::new(value, String::new())?;
    let elements_value = root.field("elements")?;
    let list = elements_value
        .as_array()
        .ok_or_else(|| ModelError::schema("elements", "expected an array"))?;
    let mut elements = Vec::with_capacity(list.len());
    for (i, v) in list.iter().enumerate() {
        elements.push(parse_element(v, format!("elements[{i}]"))?);
    }
    let doc = DesignDocument {
        canvas_width: root.num("canvas_width")?,
        canvas_height: root.num("canvas_height")?,
        background: root.color("background")?,
        elements,
    };
    doc.validate()?;
    Ok(doc)
}

fn parse_element(value: &Value, path: String) -> Result<Element, ModelError> {
    let obj = Obj::new(value, path)?;
    let kind = obj.str("type")?;
    let id = obj.str("id")?.to_string();
    let x = obj.num("x")?;
    let y = obj.num("y")?;
    match kind {
        "text" => {
            let style = obj.str("font_style")?;
            let align = obj.str("internal_align")?;
            Ok(Element::Text(TextElement {
                id,
                x,
                y,
                box_width: obj.num("box_width")?,
                content: obj.str("content")?.to_string(),
                font_family: obj.str("font_family")?.to_string(),
                font_style: FontStyle::from_name(style).ok_or_else(|| {
                    obj.violation(
                        "font_style",
                        "expected one of regular, bold, italic, bold-italic",
                    )
                })?,
                font_size: obj.num("font_size")?,
                line_height_multiplier: obj
                    .opt_num("line_height_multiplier")?
                    .unwrap_or(DEFAULT_LINE_HEIGHT_MULTIPLIER),
                color: obj.color("color")?,
                internal_align: TextAlign::from_name(align).ok_or_else(|| {
                    obj.violation(
                        "internal_align",
                        "expected one of left, center, right, justify",
                    )
                })?,
            }))
        }
        "image" => Ok(Element::Image(ImageElement {
            id,
            x,
            y,
            width: obj.num("width")?,
            height: obj.num("height")?,
            source: obj.str("source")?.to_string(),
        })),
        "graphic" => Ok(Element::Graphic(GraphicElement {
            id,
            x,
            y,
            width: obj.num("width")?,
            height: obj.num("height")?,
            shape: obj.str("shape")?.to_string(),
            fill: obj.color("fill")?,
        })),
        other => Err(obj.violation(
            "type",
            format!("unknown element type {other:?}; expected text, image or graphic"),
        )),
    }
}

/// A JSON object plus the path it was reached by, for error reporting.
struct Obj<'a> {
    map: &'a Map<String, Value>,
    path: String,
}

impl<'a> Obj<'a> {
    fn new(value: &'a Value, path: String) -> Result<Self, ModelError> {
        match value.as_object() {
            Some(map) => Ok(Self { map, path }),
            None => Err(ModelError::schema(
                if path.is_empty() { "$" } else { &path },
                "expected an object",
            )),
        }
    }

    fn path_of(&self, name: &str) -> String {
        if self.path.is_empty() {
            name.to_string()
        } else {
            format!("{}.{name}", self.path)
        }
    }

    fn violation(&self, name: &str, reason: impl Into<String>) -> ModelError {
        ModelError::schema(self.path_of(name), reason)
    }

    fn field(&self, name: &str) -> Result<&'a Value, ModelError> {
        self.map
            .get(name)
            .ok_or_else(|| self.violation(name, "missing field"))
    }

    fn num(&self, name: &str) -> Result<f64, ModelError> {
        self.field(name)?
            .as_f64()
            .ok_or_else(|| self.violation(name, "expected a number"))
    }

    fn opt_num(&self, name: &str) -> Result<Option<f64>, ModelError> {
        match self.map.get(name) {
            None | Some(Value::Null) => Ok(None),
            Some(v) => v
                .as_f64()
                .map(Some)
                .ok_or_else(|| self.violation(name, "expected a number")),
        }
    }

    fn str(&self, name: &str) -> Result<&'a str, ModelError> {
        self.field(name)?
            .as_str()
            .ok_or_else(|| self.violation(name, "expected a string"))
    }

    fn color(&self, name: &str) -> Result<Color, ModelError> {
        let s = self.str(name)?;
        Color::parse(s).ok_or_else(|| {
            self.violation(name, format!("expected a #rgb or #rrggbb color, got {s:?}"))
        })
    }
}

/// Canonical compact JSON. Equal documents give identical bytes.
pub fn serialize_design(doc: &DesignDocument) -> String {
    serde_json::to_string(doc).expect("document serialization is infallible")
}

/// Canonical JSON, indented for humans.
pub fn serialize_design_pretty(doc: &DesignDocument) -> String {
    serde_json::to_string_pretty(doc).expect("document serialization is infallible")
}

#[cfg(test)]
mod tests {
    use super::*;

    const EMPTY: &str =
        r##"{"canvas_width":1080,"canvas_height":1080,"background":"#ffffff","elements":[]}"##;

    #[test]
    fn parses_empty_document() {
        let doc = parse_design(EMPTY).unwrap();
        assert_eq!(doc.elements.len(), 0);
        assert_eq!(doc.canvas_width, 1080.0);
    }

    #[test]
    fn missing_canvas_width_names_the_path() {
        let err = parse_design(r##"{"canvas_height":1080,"background":"#ffffff","elements":[]}"##)
            .unwrap_err();
        match err {
            ModelError::SchemaViolation { path, .. } => assert_eq!(path, "canvas_width"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn nested_errors_carry_element_index() {
        let err = parse_design(
            r##"{"canvas_width":100,"canvas_height":100,"background":"#fff","elements":[
              {"type":"text","id":"a","x":0,"y":0,"box_width":10,"content":"x",
               "font_family":"Inter","font_style":"regular","font_size":"big",
               "color":"#000","internal_align":"left"}]}"##,
        )
        .unwrap_err();
        assert_eq!(
            err,
            ModelError::SchemaViolation {
                path: "elements[0].font_size".into(),
                reason: "expected a number".into()
            }
        );
    }

    #[test]
    fn rejects_bad_enums_and_values() {
        let base = |field: &str| {
            format!(
                r##"{{"canvas_width":100,"canvas_height":100,"background":"#fff","elements":[
                  {{"type":"text","id":"a","x":0,"y":0,"box_width":10,"content":"x",
                   "font_family":"Inter","font_style":"regular","font_size":12,
                   "color":"#000","internal_align":"left",{field}}}]}}"##
            )
        };
        let cases = [
            (r#""font_style":"oblique""#, "elements[0].font_style"),
            (r#""internal_align":"middle""#, "elements[0].internal_align"),
            (
                r#""line_height_multiplier":0"#,
                "elements[0].line_height_multiplier",
            ),
            (r#""color":"red""#, "elements[0].color"),
        ];
        for (field, path) in cases {
            // later duplicate keys win in serde_json
            match parse_design(&base(field)).unwrap_err() {
                ModelError::SchemaViolation { path: p, .. } => assert_eq!(p, path, "{field}"),
                other => panic!("unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn zero_canvas_is_rejected() {
        let err = parse_design(
            r##"{"canvas_width":0,"canvas_height":1080,"background":"#ffffff","elements":[]}"##,
        )
        .unwrap_err();
        assert!(
            matches!(err, ModelError::SchemaViolation { ref path, .. } if path == "canvas_width")
        );
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let err = parse_design(
            r##"{"canvas_width":10,"canvas_height":10,"background":"#fff","elements":[
              {"type":"image","id":"a","x":0,"y":0,"width":1,"height":1,"source":"a.png"},
              {"type":"graphic","id":"a","x":0,"y":0,"width":1,"height":1,"shape":"rect","fill":"#000"}]}"##,
        )
        .unwrap_err();
        assert_eq!(err, ModelError::DuplicateId("a".into()));
    }

    #[test]
    fn malformed_json_is_reported() {
        assert!(matches!(parse_design("{"), Err(ModelError::Json(_))));
        assert!(matches!(
            parse_design("[]"),
            Err(ModelError::SchemaViolation { ref path, .. }) if path == "$"
        ));
    }

    #[test]
    fn multiplier_defaults() {
        let doc = parse_design(
            r##"{"canvas_width":100,"canvas_height":100,"background":"#FFF","elements":[
              {"type":"text","id":"a","x":0,"y":0,"box_width":10,"content":"x",
               "font_family":"Inter","font_style":"bold-italic","font_size":12,
               "color":"#000","internal_align":"justify"}]}"##,
        )
        .unwrap();
        let t = doc.text("a").unwrap();
        assert_eq!(t.line_height_multiplier, 1.2);
        assert_eq!(t.font_style, FontStyle::BoldItalic);
        assert_eq!(doc.background.as_str(), "#ffffff");
    }

    #[test]
    fn empty_document_golden() {
        let doc = parse_design(EMPTY).unwrap();
        assert_eq!(
            serialize_design(&doc),
            r##"{"canvas_width":1080.0,"canvas_height":1080.0,"background":"#ffffff","elements":[]}"##
        );
    }

    #[test]
    fn display_name_truncates() {
        let t = TextElement {
            id: "t".into(),
            x: 0.0,
            y: 0.0,
            box_width: 10.0,
            content: "Summer Festival 2024\nLive music".into(),
            font_family: "Inter".into(),
            font_style: FontStyle::Regular,
            font_size: 10.0,
            line_height_multiplier: 1.2,
            color: Color::hex("#000"),
            internal_align: TextAlign::Left,
        };
        assert_eq!(
            t.display_name(),
            "\u{201c}Summer Festival 2024\u{2026}\u{201d}"
        );
    }
}
