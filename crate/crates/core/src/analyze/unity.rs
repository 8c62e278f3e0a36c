use serde::Serialize;

use super::{Action, Issue, IssueKind, Suggestion, Thresholds, ValueRemap};
use crate::model::{DesignDocument, TextElement};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UnityProperty {
    FontFamily,
    FontStyle,
    FontSize,
    Color,
}

impl UnityProperty {
    pub const ALL: [UnityProperty; 4] = [
        UnityProperty::FontFamily,
        UnityProperty::FontStyle,
        UnityProperty::FontSize,
        UnityProperty::Color,
    ];

    /// Plural noun used in explanations.
    pub fn plural(&self) -> &'static str {
        match self {
            UnityProperty::FontFamily => "font families",
            UnityProperty::FontStyle => "styles",
            UnityProperty::FontSize => "sizes",
            UnityProperty::Color => "colors",
        }
    }

    pub fn short(&self) -> &'static str {
        match self {
            UnityProperty::FontFamily => "family",
            UnityProperty::FontStyle => "style",
            UnityProperty::FontSize => "size",
            UnityProperty::Color => "color",
        }
    }
}

/// Canonical string form of a property value; sizes use the shortest
/// round-trip decimal.
pub fn property_value(el: &TextElement, p: UnityProperty) -> String {
    match p {
        UnityProperty::FontFamily => el.font_family.clone(),
        UnityProperty::FontStyle => el.font_style.as_str().to_string(),
        UnityProperty::FontSize => format!("{}", el.font_size),
        UnityProperty::Color => el.color.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnityTuple {
    pub element_id: String,
    pub font_family: String,
    pub font_style: String,
    pub font_size: f64,
    pub color: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct DistinctCounts {
    pub font_family: usize,
    pub font_style: usize,
    pub font_size: usize,
    pub color: usize,
}

impl DistinctCounts {
    pub fn get(&self, p: UnityProperty) -> usize {
        match p {
            UnityProperty::FontFamily => self.font_family,
            UnityProperty::FontStyle => self.font_style,
            UnityProperty::FontSize => self.font_size,
            UnityProperty::Color => self.color,
        }
    }

    fn set(&mut self, p: UnityProperty, n: usize) {
        match p {
            UnityProperty::FontFamily => self.font_family = n,
            UnityProperty::FontStyle => self.font_style = n,
            UnityProperty::FontSize => self.font_size = n,
            UnityProperty::Color => self.color = n,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct UnityReport {
    pub tuples: Vec<UnityTuple>,
    pub distinct_counts: DistinctCounts,
    pub issues: Vec<Issue>,
}

/// (value, frequency) in order of first appearance.
fn frequencies(values: &[String]) -> Vec<(String, usize)> {
    let mut out: Vec<(String, usize)> = Vec::new();
    for v in values {
        match out.iter_mut().find(|(u, _)| u == v) {
            Some((_, n)) => *n += 1,
            None => out.push((v.clone(), 1)),
        }
    }
    out
}

/// Folds the rarest values into the most frequent one until at most `keep`
/// remain. All values sharing the lowest frequency are folded together;
/// frequency ties for the destination go to the earliest value.
pub fn plan_remap(values: &[String], keep: usize) -> Vec<ValueRemap> {
    let mut freq = frequencies(values);
    let mut remap = Vec::new();
    while freq.len() > keep.max(1) {
        // max_by_key keeps the last maximum; scan in reverse for the earliest
        let top = freq
            .iter()
            .enumerate()
            .rev()
            .max_by_key(|(_, (_, n))| *n)
            .map(|(i, _)| i)
            .expect("non-empty");
        let min = freq
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != top)
            .map(|(_, (_, n))| *n)
            .min()
            .expect("more than one value");
        let to = freq[top].0.clone();
        let mut absorbed = 0;
        let mut kept = Vec::with_capacity(freq.len());
        for (i, (v, n)) in freq.into_iter().enumerate() {
            if i != top && n == min {
                absorbed += n;
                remap.push(ValueRemap {
                    from: v,
                    to: to.clone(),
                });
            } else {
                kept.push((v, n));
            }
        }
        freq = kept;
        if let Some(entry) = freq.iter_mut().find(|(v, _)| *v == to) {
            entry.1 += absorbed;
        }
    }
    remap
}

pub fn analyze_unity(doc: &DesignDocument, t: &Thresholds) -> UnityReport {
    let texts: Vec<&TextElement> = doc.text_elements().collect();
    let tuples = texts
        .iter()
        .map(|el| UnityTuple {
            element_id: el.id.clone(),
            font_family: el.font_family.clone(),
            font_style: el.font_style.as_str().to_string(),
            font_size: el.font_size,
            color: el.color.to_string(),
        })
        .collect();

    let mut counts = DistinctCounts::default();
    let mut issues = Vec::new();
    for p in UnityProperty::ALL {
        let values: Vec<String> = texts.iter().map(|el| property_value(el, p)).collect();
        let distinct = frequencies(&values).len();
        counts.set(p, distinct);
        if distinct <= t.max_variances {
            continue;
        }
        let remap = plan_remap(&values, t.max_variances);
        let targets: Vec<String> = texts
            .iter()
            .zip(&values)
            .filter(|(_, v)| remap.iter().any(|r| r.from == **v))
            .map(|(el, _)| el.id.clone())
            .collect();
        issues.push(Issue::new(
            IssueKind::TooManyVariances,
            targets.clone(),
            vec![Suggestion::new(
                Action::ReducePropertyCount {
                    property: p,
                    target_count: t.max_variances,
                    remap,
                },
                targets,
            )],
        ));
    }

    UnityReport {
        tuples,
        distinct_counts: counts,
        issues,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Color, Element, FontStyle, TextAlign};

    fn strings(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn text(id: &str, size: f64, color: &str) -> Element {
        Element::Text(TextElement {
            id: id.into(),
            x: 100.0,
            y: 100.0,
            box_width: 300.0,
            content: "Text".into(),
            font_family: "Inter".into(),
            font_style: FontStyle::Regular,
            font_size: size,
            line_height_multiplier: 1.2,
            color: Color::hex(color),
            internal_align: TextAlign::Left,
        })
    }

    fn doc(elements: Vec<Element>) -> DesignDocument {
        let mut d = DesignDocument::new(1080.0, 1080.0, Color::hex("#fff"));
        d.elements = elements;
        d
    }

    #[test]
    fn uniform_styling_counts_one() {
        let r = analyze_unity(
            &doc((0..5)
                .map(|i| text(&format!("t{i}"), 14.0, "#000"))
                .collect()),
            &Thresholds::default(),
        );
        assert_eq!(
            r.distinct_counts,
            DistinctCounts {
                font_family: 1,
                font_style: 1,
                font_size: 1,
                color: 1
            }
        );
        assert!(r.issues.is_empty());
    }

    #[test]
    fn four_sizes_is_too_many() {
        let r = analyze_unity(
            &doc(vec![
                text("a", 10.0, "#000"),
                text("b", 12.0, "#000"),
                text("c", 14.0, "#000"),
                text("d", 16.0, "#000"),
            ]),
            &Thresholds::default(),
        );
        assert_eq!(r.distinct_counts.font_size, 4);
        assert_eq!(r.issues.len(), 1);
        assert_eq!(r.issues[0].kind, IssueKind::TooManyVariances);
    }

    #[test]
    fn three_colors_is_fine() {
        let r = analyze_unity(
            &doc(vec![
                text("a", 10.0, "#000"),
                text("b", 10.0, "#f00"),
                text("c", 10.0, "#00f"),
            ]),
            &Thresholds::default(),
        );
        assert_eq!(r.distinct_counts.color, 3);
        assert!(r.issues.is_empty());
    }

    #[test]
    fn remap_folds_rarest_tier_into_most_frequent() {
        let values = strings(&["10", "12", "10", "14", "12", "10", "16"]);
        let remap = plan_remap(&values, 3);
        let pairs: Vec<(&str, &str)> = remap
            .iter()
            .map(|r| (r.from.as_str(), r.to.as_str()))
            .collect();
        assert_eq!(pairs, vec![("14", "10"), ("16", "10")]);
    }

    #[test]
    fn remap_ties_go_to_first_appearance() {
        let values = strings(&["a", "b", "c", "d", "a", "b"]);
        let remap = plan_remap(&values, 3);
        let pairs: Vec<(&str, &str)> = remap
            .iter()
            .map(|r| (r.from.as_str(), r.to.as_str()))
            .collect();
        assert_eq!(pairs, vec![("c", "a"), ("d", "a")]);
    }
}
