//! Text forms of an analysis, for `critiq analyze`.

use std::fmt::Write;

use critiq_core::analyze::{Action, CritiqueResult, Issue, Principle};
use critiq_core::annotate::ExplanationTable;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Md,
}

pub struct Analysis<'a> {
    pub source: &'a str,
    pub result: &'a CritiqueResult,
    pub principles: Vec<Principle>,
    pub explanations: Vec<ExplanationTable>,
}

impl Analysis<'_> {
    pub fn issues(&self) -> impl Iterator<Item = &Issue> {
        self.principles
            .iter()
            .flat_map(|p| self.result.issues_for(*p).iter())
    }

    pub fn has_issues(&self) -> bool {
        self.issues().next().is_some()
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Md => self.to_markdown(),
        }
    }

    pub fn to_json(&self) -> String {
        let flags: Map<String, Value> = self
            .principles
            .iter()
            .map(|p| {
                (
                    p.as_str().to_string(),
                    self.result.issue_flags.get(*p).into(),
                )
            })
            .collect();
        let mut out = json!({
            "source": self.source,
            "issue_flags": flags,
            "issues": self.issues().collect::<Vec<_>>(),
        });
        if !self.explanations.is_empty() {
            out["explanations"] = serde_json::to_value(&self.explanations).expect("serializable");
        }
        let mut s = serde_json::to_string_pretty(&out).expect("serializable");
        s.push('\n');
        s
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# Critique of {}", self.source);
        for p in &self.principles {
            let issues = self.result.issues_for(*p);
            let _ = writeln!(s, "\n## {}", p.title());
            if issues.is_empty() {
                let _ = writeln!(s, "\nNo issues.");
            }
            for issue in issues {
                let _ = writeln!(
                    s,
                    "\n- **{}**: {} ({})",
                    issue.kind,
                    issue.message,
                    issue.target_ids.join(", ")
                );
                for sg in &issue.suggestions {
                    let _ = writeln!(
                        s,
                        "  - {} on {}: {}",
                        sg.action.name(),
                        sg.target_ids.join(", "),
                        action_params(&sg.action)
                    );
                }
            }
            for table in self.explanations.iter().filter(|t| t.principle == *p) {
                let _ = writeln!(s, "\n### {} explanation\n", table.mode);
                for row in &table.rows {
                    let _ = writeln!(s, "- `{}` {}", row.color, row.text);
                }
                if let Some(actions) = &table.suggested_actions {
                    let _ = writeln!(s, "\nSuggested actions:\n");
                    if actions.is_empty() {
                        let _ = writeln!(s, "- none");
                    }
                    for row in actions {
                        let _ = writeln!(s, "- `{}` {}", row.color, row.text);
                    }
                }
            }
        }
        s
    }
}

fn action_params(action: &Action) -> String {
    let v = serde_json::to_value(action).expect("serializable");
    let Value::Object(map) = v else {
        return String::new();
    };
    map.iter()
        .filter(|(k, _)| k.as_str() != "kind")
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(", ")
}
