//! Scripted application of suggestions.

use thiserror::Error;

use super::{property_value, Action, AnchorKind, Issue, Suggestion, UnityProperty};
use crate::model::{Color, DesignDocument, FontStyle};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixError {
    #[error("suggestion targets `{0}`, which is not a text element of this document")]
    StaleSuggestion(String),
    #[error("cannot apply remapped value {value:?} to {property:?}")]
    BadRemapValue {
        property: UnityProperty,
        value: String,
    },
}

/// Returns `doc` with the suggestion's edit applied.
pub fn apply_suggestion(doc: &DesignDocument, s: &Suggestion) -> Result<DesignDocument, FixError> {
    let mut out = doc.clone();
    for id in &s.target_ids {
        if out.text(id).is_none() {
            return Err(FixError::StaleSuggestion(id.clone()));
        }
    }
    for id in &s.target_ids {
        let el = out.text_mut(id).expect("checked above");
        match &s.action {
            Action::Enlarge { font_size } | Action::Shrink { font_size } => {
                el.font_size = *font_size;
            }
            Action::MoveBy { dx, dy } => {
                el.x += dx;
                el.y += dy;
            }
            Action::ChangeInternalAlign { align } => el.internal_align = *align,
            Action::MergeToAxis { axis_kind, axis_x } => {
                if AnchorKind::of_align(el.internal_align) != *axis_kind {
                    el.internal_align = axis_kind.text_align();
                }
                el.x = axis_kind.x_for(*axis_x, el.box_width);
            }
            Action::ReducePropertyCount {
                property, remap, ..
            } => {
                let current = property_value(el, *property);
                let Some(r) = remap.iter().find(|r| r.from == current) else {
                    continue;
                };
                let bad = || FixError::BadRemapValue {
                    property: *property,
                    value: r.to.clone(),
                };
                match property {
                    UnityProperty::FontFamily => el.font_family = r.to.clone(),
                    UnityProperty::FontStyle => {
                        el.font_style = FontStyle::from_name(&r.to).ok_or_else(bad)?
                    }
                    UnityProperty::FontSize => {
                        el.font_size = r.to.parse::<f64>().map_err(|_| bad())?
                    }
                    UnityProperty::Color => el.color = Color::parse(&r.to).ok_or_else(bad)?,
                }
            }
            Action::EvenOutLines {
                box_width,
                x,
                content,
            } => {
                el.box_width = *box_width;
                el.x = *x;
                if let Some(c) = content {
                    el.content = c.clone();
                }
            }
        }
    }
    Ok(out)
}

/// Applies every suggestion attached to `issue`, in order.
pub fn apply_issue(doc: &DesignDocument, issue: &Issue) -> Result<DesignDocument, FixError> {
    issue
        .suggestions
        .iter()
        .try_fold(doc.clone(), |d, s| apply_suggestion(&d, s))
}
