use super::plan::ExperimentPlan;
use super::record::RunRecord;
use super::stats::{gap_table, summarize, GapRow, SummaryStats};
use crate::algorithm::Variant;
use serde::{Deserialize, Serialize};

pub const REPORT_SCHEMA: u32 = 1;

/// JSON report: the plan, per-group statistics, and the gap table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub plan: ExperimentPlan,
    pub records: usize,
    pub summary: Vec<SummaryStats>,
    pub gaps: Vec<GapRow>,
}

pub fn build_report(plan: &ExperimentPlan, records: &[RunRecord], baseline: Variant) -> Report {
    let summary = summarize(records, plan.metric);
    let gaps = gap_table(&summary, baseline);
    Report {
        schema: REPORT_SCHEMA,
        plan: plan.clone(),
        records: records.len(),
        summary,
        gaps,
    }
}
