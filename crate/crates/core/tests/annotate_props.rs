mod common;

use std::collections::BTreeSet;

use critiq_core::analyze::{detect_all, measure_all, Thresholds};
use critiq_core::annotate::{generate_all, palette, render_svg, Context, Mode, Primitive};
use critiq_core::geom::Rect;
use critiq_core::metrics::FallbackMetrics;
use critiq_core::model::{Color, DesignDocument};
use proptest::prelude::*;

fn close(a: &Rect, b: &Rect) -> bool {
    (a.x - b.x).abs() <= 0.5
        && (a.y - b.y).abs() <= 0.5
        && (a.width - b.width).abs() <= 0.5
        && (a.height - b.height).abs() <= 0.5
}

fn check(doc: &DesignDocument) -> Result<(), TestCaseError> {
    let result = detect_all(doc, &FallbackMetrics);
    let extents = measure_all(doc, &FallbackMetrics);
    let t = Thresholds::default();
    let ctx = Context::new(doc, &result, &extents, &t);
    let neutral: BTreeSet<Color> = [palette::guide(), Color::hex(palette::GRAY_BOX)].into();
    let boxes: Vec<Rect> = extents
        .values()
        .flat_map(|e| std::iter::once(e.overall_bbox).chain(e.lines.iter().map(|l| l.bbox)))
        .collect();
    let (cw, ch) = (doc.canvas_width, doc.canvas_height);

    for asset in generate_all(&ctx) {
        let layer = &asset.layer;
        let colors: BTreeSet<Color> = layer.colors().into_iter().collect();
        let groups: BTreeSet<Color> = layer
            .group_color_map
            .iter()
            .map(|g| g.color.clone())
            .collect();
        let swatches: BTreeSet<Color> = asset.explanation.swatch_colors().into_iter().collect();
        let tag = format!("{} {}", layer.principle, layer.mode);

        prop_assert_eq!(&groups, &swatches, "{}", tag);
        for c in &colors {
            prop_assert!(
                groups.contains(c) || neutral.contains(c),
                "{tag}: stray {c}"
            );
        }
        let has_issues = !result.issues_for(layer.principle).is_empty();
        match layer.mode {
            Mode::Awareness => {
                prop_assert!(
                    !colors.contains(&palette::red()) && !colors.contains(&palette::green()),
                    "{}",
                    tag
                );
                prop_assert!(asset.explanation.suggested_actions.is_none());
            }
            Mode::Solution if has_issues => {
                prop_assert!(
                    colors.contains(&palette::red()) && colors.contains(&palette::green()),
                    "{}",
                    tag
                );
                prop_assert!(!asset
                    .explanation
                    .suggested_actions
                    .as_ref()
                    .unwrap()
                    .is_empty());
            }
            Mode::Solution => {
                prop_assert!(!colors.contains(&palette::red()), "{}", tag);
                prop_assert_eq!(
                    asset.explanation.suggested_actions.as_deref(),
                    Some(&[][..])
                );
            }
        }
        for row in asset.explanation.all_rows() {
            prop_assert!(
                !row.text.contains('[') && !row.text.contains(']'),
                "{}",
                row.text
            );
            prop_assert!(
                !row.text.contains("\u{201c}\u{201d}") && !row.text.contains("  "),
                "{}",
                row.text
            );
            prop_assert!(!row.text.trim().is_empty());
        }
        let ranks: Vec<u8> = layer.primitives.iter().map(Primitive::z_rank).collect();
        prop_assert!(ranks.windows(2).all(|w| w[0] <= w[1]));
        for p in &layer.primitives {
            if let Primitive::FilledRect { rect, .. } = p {
                prop_assert!(boxes.iter().any(|b| close(b, rect)), "{tag}: {rect:?}");
            }
            if matches!(
                p,
                Primitive::DashedLine { .. } | Primitive::Arrow { .. } | Primitive::Label { .. }
            ) {
                for q in p.points() {
                    prop_assert!(q.x >= -0.05 * cw - 1e-9 && q.x <= 1.05 * cw + 1e-9);
                    prop_assert!(q.y >= -0.05 * ch - 1e-9 && q.y <= 1.05 * ch + 1e-9);
                }
            }
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn layers_obey_palette_and_match_their_tables(doc in common::document(8)) {
        check(&doc)?;
    }

    #[test]
    fn generation_and_rendering_are_deterministic(doc in common::document(6)) {
        let render = |doc: &DesignDocument| {
            let result = detect_all(doc, &FallbackMetrics);
            let extents = measure_all(doc, &FallbackMetrics);
            let t = Thresholds::default();
            let ctx = Context::new(doc, &result, &extents, &t);
            generate_all(&ctx)
                .iter()
                .map(|a| format!("{}{}", serde_json::to_string(a).unwrap(), render_svg(doc, Some(&a.layer), &extents)))
                .collect::<String>()
        };
        prop_assert_eq!(render(&doc), render(&doc));
    }
}
