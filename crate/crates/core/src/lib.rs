//! Heuristic critique of canvas designs against four visual-design
//! principles: hierarchy, alignment, whitespace and unity.
//!
//! The pipeline is `parse_design` → `detect_all` → `gen_awareness` /
//! `gen_solution` / `gen_explanation` → `render_svg`. Everything here is a
//! pure function of its inputs.

pub mod analyze;
pub mod annotate;
pub mod diff;
pub mod geom;
pub mod kmeans;
pub mod metrics;
pub mod model;

pub use analyze::{
    apply_issue, apply_suggestion, detect_all, detect_all_with, CritiqueResult, Issue, IssueKind,
    Principle, Suggestion, Thresholds,
};
pub use annotate::{
    gen_awareness, gen_explanation, gen_solution, generate_all, render_svg, AnnotationAsset,
    AnnotationLayer, Context, ExplanationTable, Mode,
};
pub use diff::{diff_designs, ChangeEntry, ChangeSet};
pub use metrics::{fallback_provider, measure_text, FallbackMetrics, MetricsProvider, TextExtent};
pub use model::{parse_design, serialize_design, DesignDocument, Element, ModelError};
