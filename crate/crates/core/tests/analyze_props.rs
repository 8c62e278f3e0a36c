mod common;

use std::collections::BTreeSet;

use critiq_core::analyze::{
    detect_all, measure_all, property_value, EmphasisLevel, IssueKind, Principle, Thresholds,
    UnityProperty,
};
use critiq_core::metrics::FallbackMetrics;
use critiq_core::model::DesignDocument;
use proptest::prelude::*;

fn level(doc: &DesignDocument, id: &str) -> Option<EmphasisLevel> {
    detect_all(doc, &FallbackMetrics).hierarchy.level_of(id)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn distinct_counts_match_set_cardinality(doc in common::document(10)) {
        let result = detect_all(&doc, &FallbackMetrics);
        let mut over = false;
        for p in UnityProperty::ALL {
            let set: BTreeSet<String> = doc.text_elements().map(|t| property_value(t, p)).collect();
            prop_assert_eq!(result.unity.distinct_counts.get(p), set.len(), "{:?}", p);
            over |= set.len() > 3;
        }
        let flagged = result.unity.issues.iter().any(|i| i.kind == IssueKind::TooManyVariances);
        prop_assert_eq!(flagged, over);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn flags_mirror_reports(doc in common::document(8)) {
        let r = detect_all(&doc, &FallbackMetrics);
        for p in Principle::ALL {
            prop_assert_eq!(r.issue_flags.get(p), !r.issues_for(p).is_empty());
            for issue in r.issues_for(p) {
                prop_assert_eq!(issue.principle, p);
                prop_assert_eq!(issue.kind.principle(), p);
                prop_assert!(!issue.target_ids.is_empty());
                prop_assert!(!issue.suggestions.is_empty());
            }
        }
    }

    #[test]
    fn every_text_element_in_exactly_one_group(doc in common::document(8)) {
        let r = detect_all(&doc, &FallbackMetrics);
        for t in doc.text_elements() {
            let n = r.alignment.groups.iter().filter(|g| g.members.contains(&t.id)).count();
            prop_assert_eq!(n, 1, "{}", t.id);
        }
        let members: usize = r.alignment.groups.iter().map(|g| g.members.len()).sum();
        prop_assert_eq!(members, doc.text_elements().count());
    }

    #[test]
    fn violations_lie_below_thresholds(doc in common::document(8)) {
        let r = detect_all(&doc, &FallbackMetrics);
        let t = Thresholds::default();
        for v in &r.whitespace.margin_violations {
            prop_assert!(v.distance < t.margin(&doc));
        }
        for v in &r.whitespace.pair_violations {
            prop_assert!(v.gap < v.threshold);
        }
        let extents = measure_all(&doc, &FallbackMetrics);
        for e in &r.whitespace.ragged_elements {
            prop_assert!(extents[&e.element_id].inked_lines().count() >= 2);
        }
    }

    #[test]
    fn detection_is_deterministic(doc in common::document(8)) {
        prop_assert_eq!(
            detect_all(&doc, &FallbackMetrics).to_json(),
            detect_all(&doc, &FallbackMetrics).to_json()
        );
    }

    #[test]
    fn larger_font_never_lowers_emphasis(doc in common::document(6), pick in any::<prop::sample::Index>(), grow in 1u32..60) {
        let ids: Vec<String> = doc.text_elements().filter(|t| !t.content.trim().is_empty()).map(|t| t.id.clone()).collect();
        prop_assume!(!ids.is_empty());
        let id = &ids[pick.index(ids.len())];
        let before = level(&doc, id).unwrap();
        let mut bigger = doc.clone();
        bigger.text_mut(id).unwrap().font_size += grow as f64 * 0.5;
        let after = level(&bigger, id).unwrap();
        prop_assert!(after >= before, "{id}: {before:?} → {after:?}");
    }
}
