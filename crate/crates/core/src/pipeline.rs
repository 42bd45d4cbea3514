//! Search refinement: run one pattern over a corpus and measure how far
//! it narrows the result set.
//!
//! A document is matched when `find` succeeds anywhere in its full text
//! (documents are single subjects, never split into lines). The report
//! keeps corpus order throughout, counts matches per document, and
//! records which documents the step budget cut off; those are reported,
//! not silently dropped, since an unevaluated document is a potential
//! false negative.

use crate::corpus::Corpus;
use crate::matcher::{find_all, span_text, MatchBudget, Span};
use crate::nfa::compile;
use crate::syntax::{parse, SyntaxError};

/// Knobs for [`refine`]. The default budget is unlimited and the capture
/// sample list is capped at 20 entries.
#[derive(Debug, Clone)]
pub struct RefineOptions {
    pub budget: MatchBudget,
    pub capture_sample_cap: usize,
}

impl Default for RefineOptions {
    fn default() -> Self {
        RefineOptions {
            budget: MatchBudget::UNLIMITED,
            capture_sample_cap: 20,
        }
    }
}

/// Per-document tally for a matched document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocumentStats {
    pub id: String,
    pub match_count: usize,
    pub first_match_span: Span,
}

/// One captured substring, kept as a sample up to the configured cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaptureSample {
    pub id: String,
    pub group_index: usize,
    pub captured_text: String,
}

/// A document the step budget cut off before the search resolved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedDocument {
    pub id: String,
    pub steps: u64,
}

/// The outcome of refining a corpus with one pattern.
///
/// `matched_docs` and `total_docs` are the authoritative integers; the
/// ratio and percentage are derived from them on demand so the exact
/// relationship `ratio * total == matched` never decays through float
/// round-trips.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinementReport {
    pub pattern: String,
    pub total_docs: usize,
    pub matched_docs: usize,
    /// Exactly the matched documents, in corpus order.
    pub per_document: Vec<DocumentStats>,
    pub capture_samples: Vec<CaptureSample>,
    /// Documents excluded because a find exceeded the budget, in corpus
    /// order.
    pub skipped: Vec<SkippedDocument>,
}

impl RefinementReport {
    /// matched / total, or 0 for an empty corpus.
    pub fn reduction_ratio(&self) -> f64 {
        if self.total_docs == 0 {
            0.0
        } else {
            self.matched_docs as f64 / self.total_docs as f64
        }
    }

    /// The ratio as a percentage with two decimals and a `%` suffix,
    /// rounded half-up in integer arithmetic: 117 of 61371 renders as
    /// "0.19%".
    pub fn percentage(&self) -> String {
        render_percentage(self.matched_docs, self.total_docs)
    }
}

fn render_percentage(matched: usize, total: usize) -> String {
    if total == 0 {
        return "0.00%".to_string();
    }
    // Percentage in hundredths of a percent, rounded half-up:
    // round(matched / total * 10000) = (2 * matched * 10000 + total) / (2 * total).
    let hundredths = (2 * matched as u128 * 10_000 + total as u128) / (2 * total as u128);
    format!("{}.{:02}%", hundredths / 100, hundredths % 100)
}

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Pattern(#[from] SyntaxError),
    #[error("group-out-of-range: group {requested}, pattern has groups 1..={available}")]
    GroupOutOfRange { requested: usize, available: u32 },
}

/// Runs `pattern` over every document and assembles the report.
///
/// Pattern problems are errors; budget exhaustion on a document is data
/// (the document lands in `skipped`).
pub fn refine(
    corpus: &Corpus,
    pattern: &str,
    options: &RefineOptions,
) -> Result<RefinementReport, PipelineError> {
    let parsed = parse(pattern)?;
    let machine = compile(&parsed);

    let mut per_document = Vec::new();
    let mut capture_samples = Vec::new();
    let mut skipped = Vec::new();
    for document in &corpus.documents {
        let matches = match find_all(&machine, &document.text, &options.budget) {
            Ok(matches) => matches,
            Err(exceeded) => {
                skipped.push(SkippedDocument {
                    id: document.id.clone(),
                    steps: exceeded.steps,
                });
                continue;
            }
        };
        if matches.is_empty() {
            continue;
        }
        per_document.push(DocumentStats {
            id: document.id.clone(),
            match_count: matches.len(),
            first_match_span: matches[0].span,
        });
        for hit in &matches {
            for group_index in 1..=hit.group_count() {
                if capture_samples.len() >= options.capture_sample_cap {
                    break;
                }
                if let Some(span) = hit.group(group_index) {
                    capture_samples.push(CaptureSample {
                        id: document.id.clone(),
                        group_index,
                        captured_text: span_text(&document.text, span),
                    });
                }
            }
        }
    }

    Ok(RefinementReport {
        pattern: pattern.to_string(),
        total_docs: corpus.len(),
        matched_docs: per_document.len(),
        per_document,
        capture_samples,
        skipped,
    })
}

/// The captured text of group `group_index` for every match in every
/// document, in corpus order then find order. Matches where the group took
/// no part contribute nothing, as do documents the budget cut off.
pub fn extract_captures(
    corpus: &Corpus,
    pattern: &str,
    group_index: usize,
    budget: &MatchBudget,
) -> Result<Vec<CaptureSample>, PipelineError> {
    let parsed = parse(pattern)?;
    if group_index == 0 || group_index > parsed.group_count as usize {
        return Err(PipelineError::GroupOutOfRange {
            requested: group_index,
            available: parsed.group_count,
        });
    }
    let machine = compile(&parsed);

    let mut entries = Vec::new();
    for document in &corpus.documents {
        let Ok(matches) = find_all(&machine, &document.text, budget) else {
            continue;
        };
        for hit in matches {
            if let Some(span) = hit.group(group_index) {
                entries.push(CaptureSample {
                    id: document.id.clone(),
                    group_index,
                    captured_text: span_text(&document.text, span),
                });
            }
        }
    }
    Ok(entries)
}

/// Output layout for [`format_report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    /// Human-oriented summary plus one `id<TAB>matchCount` line per
    /// matched document.
    Text,
    /// One JSON record per matched document plus a trailing summary
    /// record.
    JsonLines,
}

/// Renders a report deterministically in the requested format.
pub fn format_report(report: &RefinementReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Text => format_text(report),
        ReportFormat::JsonLines => format_json_lines(report),
    }
}

fn format_text(report: &RefinementReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("pattern: {}\n", report.pattern));
    if report.total_docs == 0 {
        out.push_str("documents: 0 (empty corpus)\n");
    } else {
        out.push_str(&format!("documents: {}\n", report.total_docs));
    }
    out.push_str(&format!(
        "matched: {} ({})\n",
        report.matched_docs,
        report.percentage()
    ));
    for skipped in &report.skipped {
        out.push_str(&format!(
            "skipped: {} (budget exceeded after {} steps)\n",
            skipped.id, skipped.steps
        ));
    }
    for stats in &report.per_document {
        out.push_str(&format!("{}\t{}\n", stats.id, stats.match_count));
    }
    out
}

fn format_json_lines(report: &RefinementReport) -> String {
    let mut out = String::new();
    for stats in &report.per_document {
        let record = serde_json::json!({
            "id": stats.id,
            "matchCount": stats.match_count,
            "firstMatchSpan": {
                "start": stats.first_match_span.start,
                "end": stats.first_match_span.end,
            },
        });
        out.push_str(&record.to_string());
        out.push('\n');
    }
    let summary = serde_json::json!({
        "summary": {
            "pattern": report.pattern,
            "totalDocs": report.total_docs,
            "matchedDocs": report.matched_docs,
            "percentage": report.percentage(),
            "skipped": report.skipped.iter().map(|s| s.id.as_str()).collect::<Vec<_>>(),
        },
    });
    out.push_str(&summary.to_string());
    out.push('\n');
    out
}
