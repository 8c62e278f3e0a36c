//! The four principle analyzers and their shared report types.

mod alignment;
mod fix;
mod hierarchy;
mod unity;
mod whitespace;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::metrics::{measure_text, MetricsProvider, TextExtent};
use crate::model::{DesignDocument, TextAlign};

pub use alignment::{
    analyze_alignment, anchor_of, AlignmentGroup, AlignmentReport, AnchorKind, Mismatch,
};
pub use fix::{apply_issue, apply_suggestion, FixError};
pub use hierarchy::{analyze_hierarchy, EmphasisAssignment, EmphasisLevel, HierarchyReport};
pub use unity::{
    analyze_unity, property_value, DistinctCounts, UnityProperty, UnityReport, UnityTuple,
};
pub use whitespace::{
    analyze_whitespace, Direction, Edge, MarginViolation, PairViolation, RaggedElement,
    WhitespaceReport,
};

/// Measured extents keyed by element id.
pub type Extents = BTreeMap<String, TextExtent>;

/// Tunable analyzer constants. Lengths are pixels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Thresholds {
    /// Line height at or above which a cluster counts as high emphasis.
    pub high_line_height: f64,
    /// Line height at or above which a cluster counts as medium emphasis.
    pub medium_line_height: f64,
    /// Anchors within this distance share an alignment axis.
    pub align_tolerance: f64,
    pub max_alignment_groups: usize,
    /// Minimum canvas margin as a fraction of the smaller canvas side.
    pub margin_ratio: f64,
    /// Pairs separated by more than this fraction of the smaller side are ignored.
    pub far_ratio: f64,
    /// Non-final lines shorter than this fraction of the longest line are ragged.
    pub ragged_ratio: f64,
    /// Distinct values allowed per text property.
    pub max_variances: usize,
    /// Extra points added past a size threshold when resizing.
    pub size_slack: f64,
    /// Extra pixels added past a distance threshold when moving.
    pub move_slack: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            high_line_height: 40.0,
            medium_line_height: 20.0,
            align_tolerance: 4.0,
            max_alignment_groups: 3,
            margin_ratio: 0.03,
            far_ratio: 0.25,
            ragged_ratio: 0.6,
            max_variances: 3,
            size_slack: 1.0,
            move_slack: 1.0,
        }
    }
}

impl Thresholds {
    pub fn margin(&self, doc: &DesignDocument) -> f64 {
        self.margin_ratio * doc.min_dimension()
    }

    pub fn far_filter(&self, doc: &DesignDocument) -> f64 {
        self.far_ratio * doc.min_dimension()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Principle {
    Hierarchy,
    Alignment,
    Whitespace,
    Unity,
}

impl Principle {
    pub const ALL: [Principle; 4] = [
        Principle::Hierarchy,
        Principle::Alignment,
        Principle::Whitespace,
        Principle::Unity,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Principle::Hierarchy => "hierarchy",
            Principle::Alignment => "alignment",
            Principle::Whitespace => "whitespace",
            Principle::Unity => "unity",
        }
    }

    pub fn title(&self) -> &'static str {
        match self {
            Principle::Hierarchy => "Hierarchy",
            Principle::Alignment => "Alignment",
            Principle::Whitespace => "Whitespace",
            Principle::Unity => "Unity",
        }
    }
}

impl fmt::Display for Principle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown principle `{0}`")]
pub struct UnknownPrinciple(pub String);

impl FromStr for Principle {
    type Err = UnknownPrinciple;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Principle::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| UnknownPrinciple(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IssueKind {
    WeakPointOfEntry,
    CompetingEmphasis,
    TooManyGroups,
    InternalExternalMismatch,
    MarginTooSmall,
    ElementsTooClose,
    RaggedLines,
    TooManyVariances,
}

impl IssueKind {
    pub const ALL: [IssueKind; 8] = [
        IssueKind::WeakPointOfEntry,
        IssueKind::CompetingEmphasis,
        IssueKind::TooManyGroups,
        IssueKind::InternalExternalMismatch,
        IssueKind::MarginTooSmall,
        IssueKind::ElementsTooClose,
        IssueKind::RaggedLines,
        IssueKind::TooManyVariances,
    ];

    pub fn principle(&self) -> Principle {
        match self {
            IssueKind::WeakPointOfEntry | IssueKind::CompetingEmphasis => Principle::Hierarchy,
            IssueKind::TooManyGroups | IssueKind::InternalExternalMismatch => Principle::Alignment,
            IssueKind::MarginTooSmall | IssueKind::ElementsTooClose | IssueKind::RaggedLines => {
                Principle::Whitespace
            }
            IssueKind::TooManyVariances => Principle::Unity,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            IssueKind::WeakPointOfEntry => "weak_point_of_entry",
            IssueKind::CompetingEmphasis => "competing_emphasis",
            IssueKind::TooManyGroups => "too_many_groups",
            IssueKind::InternalExternalMismatch => "internal_external_mismatch",
            IssueKind::MarginTooSmall => "margin_too_small",
            IssueKind::ElementsTooClose => "elements_too_close",
            IssueKind::RaggedLines => "ragged_lines",
            IssueKind::TooManyVariances => "too_many_variances",
        }
    }

    /// Short one-line summary shown in reports.
    pub fn message(&self) -> &'static str {
        match self {
            IssueKind::WeakPointOfEntry => "No elements seem to be visually emphasized",
            IssueKind::CompetingEmphasis => "Non-title text competes with the title for emphasis",
            IssueKind::TooManyGroups => "Too many alignment groups",
            IssueKind::InternalExternalMismatch => {
                "Internal alignment does not match the position on the canvas"
            }
            IssueKind::MarginTooSmall => "Too close to the canvas edge",
            IssueKind::ElementsTooClose => "Elements too close to each other",
            IssueKind::RaggedLines => "Uneven line lengths",
            IssueKind::TooManyVariances => "Too many variances in text",
        }
    }
}

impl fmt::Display for IssueKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Rewrites `from` to `to` for one text property.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValueRemap {
    pub from: String,
    pub to: String,
}

/// A scripted edit. Every parameter needed to perform it is carried along.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Action {
    Enlarge {
        font_size: f64,
    },
    Shrink {
        font_size: f64,
    },
    MoveBy {
        dx: f64,
        dy: f64,
    },
    ChangeInternalAlign {
        align: TextAlign,
    },
    MergeToAxis {
        axis_kind: AnchorKind,
        axis_x: f64,
    },
    ReducePropertyCount {
        property: UnityProperty,
        target_count: usize,
        remap: Vec<ValueRemap>,
    },
    /// Re-break lines by resizing the box (the anchor edge stays put); when
    /// `content` is set the explicit line breaks are replaced as well.
    EvenOutLines {
        box_width: f64,
        x: f64,
        content: Option<String>,
    },
}

impl Action {
    pub fn name(&self) -> &'static str {
        match self {
            Action::Enlarge { .. } => "enlarge",
            Action::Shrink { .. } => "shrink",
            Action::MoveBy { .. } => "move_by",
            Action::ChangeInternalAlign { .. } => "change_internal_align",
            Action::MergeToAxis { .. } => "merge_to_axis",
            Action::ReducePropertyCount { .. } => "reduce_property_count",
            Action::EvenOutLines { .. } => "even_out_lines",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Suggestion {
    pub action: Action,
    pub target_ids: Vec<String>,
}

impl Suggestion {
    pub fn new(action: Action, target_ids: Vec<String>) -> Self {
        Self { action, target_ids }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Issue {
    pub principle: Principle,
    pub kind: IssueKind,
    pub target_ids: Vec<String>,
    pub message_template_id: String,
    pub message: String,
    /// Edits that together resolve the issue, primary first.
    pub suggestions: Vec<Suggestion>,
}

impl Issue {
    pub fn new(kind: IssueKind, target_ids: Vec<String>, suggestions: Vec<Suggestion>) -> Self {
        debug_assert!(!target_ids.is_empty());
        debug_assert!(!suggestions.is_empty());
        Self {
            principle: kind.principle(),
            kind,
            target_ids,
            message_template_id: format!("{}.solution.{}", kind.principle(), kind),
            message: kind.message().to_string(),
            suggestions,
        }
    }
}

/// Per-principle "has issues" flags.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct IssueFlags {
    pub hierarchy: bool,
    pub alignment: bool,
    pub whitespace: bool,
    pub unity: bool,
}

impl IssueFlags {
    pub fn get(&self, p: Principle) -> bool {
        match p {
            Principle::Hierarchy => self.hierarchy,
            Principle::Alignment => self.alignment,
            Principle::Whitespace => self.whitespace,
            Principle::Unity => self.unity,
        }
    }

    pub fn any(&self) -> bool {
        Principle::ALL.iter().any(|p| self.get(*p))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CritiqueResult {
    pub hierarchy: HierarchyReport,
    pub alignment: AlignmentReport,
    pub whitespace: WhitespaceReport,
    pub unity: UnityReport,
    pub issue_flags: IssueFlags,
}

impl CritiqueResult {
    pub fn issues_for(&self, p: Principle) -> &[Issue] {
        match p {
            Principle::Hierarchy => &self.hierarchy.issues,
            Principle::Alignment => &self.alignment.issues,
            Principle::Whitespace => &self.whitespace.issues,
            Principle::Unity => &self.unity.issues,
        }
    }

    pub fn issues(&self) -> impl Iterator<Item = &Issue> {
        Principle::ALL
            .into_iter()
            .flat_map(|p| self.issues_for(p).iter())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("critique serialization is infallible")
    }
}

/// Measures every text element.
pub fn measure_all(doc: &DesignDocument, provider: &dyn MetricsProvider) -> Extents {
    doc.text_elements()
        .map(|t| (t.id.clone(), measure_text(t, provider)))
        .collect()
}

pub fn detect_all(doc: &DesignDocument, provider: &dyn MetricsProvider) -> CritiqueResult {
    let extents = measure_all(doc, provider);
    detect_with_extents(doc, &extents, provider, &Thresholds::default())
}

pub fn detect_all_with(
    doc: &DesignDocument,
    provider: &dyn MetricsProvider,
    thresholds: &Thresholds,
) -> CritiqueResult {
    let extents = measure_all(doc, provider);
    detect_with_extents(doc, &extents, provider, thresholds)
}

/// Runs the analyzers on extents that were already measured with `provider`.
pub fn detect_with_extents(
    doc: &DesignDocument,
    extents: &Extents,
    provider: &dyn MetricsProvider,
    thresholds: &Thresholds,
) -> CritiqueResult {
    let hierarchy = analyze_hierarchy(doc, extents, thresholds);
    let alignment = analyze_alignment(doc, thresholds);
    let whitespace = analyze_whitespace(doc, extents, provider, thresholds);
    let unity = analyze_unity(doc, thresholds);
    let issue_flags = IssueFlags {
        hierarchy: !hierarchy.issues.is_empty(),
        alignment: !alignment.issues.is_empty(),
        whitespace: !whitespace.issues.is_empty(),
        unity: !unity.issues.is_empty(),
    };
    CritiqueResult {
        hierarchy,
        alignment,
        whitespace,
        unity,
        issue_flags,
    }
}
