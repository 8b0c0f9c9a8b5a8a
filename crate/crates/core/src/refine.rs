//! Prompt rendering and the validate-and-retry loop, driven by a pluggable
//! evaluator so it runs without any external model.

use crate::tour::{validate_tour, TourVerdict};
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use std::panic::{catch_unwind, AssertUnwindSafe};
use thiserror::Error;

pub const NAME_PLACEHOLDER: &str = "{{algorithm name}}";
pub const SIGNATURE_PLACEHOLDER: &str = "{{the signature of an the main function}}";
pub const CODE_PLACEHOLDER: &str = "{{algorithm code}}";

const DEFAULT_TEMPLATE: &str = include_str!("../data/refine_prompt.txt");
const CORRECTION_TEXT: &str = include_str!("../data/correction.txt");

/// Feedback sent after a candidate produced an invalid tour.
pub fn correction_feedback() -> &'static str {
    CORRECTION_TEXT.trim_end()
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RefineError {
    #[error("template lacks placeholder {0}")]
    MissingPlaceholder(&'static str),
    #[error("template contains placeholder {0} more than once")]
    DuplicatePlaceholder(&'static str),
    #[error("template contains unknown placeholder {0}")]
    UnknownPlaceholder(String),
    #[error("request field '{0}' is empty")]
    EmptyField(&'static str),
    #[error("attempt {attempt} outside 1..={max}")]
    AttemptOutOfRange { attempt: usize, max: usize },
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptTemplate {
    pub body: String,
}

impl PromptTemplate {
    pub fn new(body: impl Into<String>) -> Self {
        PromptTemplate { body: body.into() }
    }
}

impl Default for PromptTemplate {
    fn default() -> Self {
        PromptTemplate::new(DEFAULT_TEMPLATE)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefinementRequest {
    pub algorithm_name: String,
    pub main_signature: String,
    pub code: String,
}

impl RefinementRequest {
    fn check(&self) -> Result<(), RefineError> {
        for (name, value) in [
            ("algorithm_name", &self.algorithm_name),
            ("main_signature", &self.main_signature),
            ("code", &self.code),
        ] {
            if value.trim().is_empty() {
                return Err(RefineError::EmptyField(name));
            }
        }
        Ok(())
    }
}

/// Substitutes each placeholder once, in a single left-to-right pass, so
/// placeholder-like text inside the substituted fields is left untouched.
pub fn render_prompt(t: &PromptTemplate, r: &RefinementRequest) -> Result<String, RefineError> {
    r.check()?;
    let fields = [
        (NAME_PLACEHOLDER, r.algorithm_name.as_str()),
        (SIGNATURE_PLACEHOLDER, r.main_signature.as_str()),
        (CODE_PLACEHOLDER, r.code.as_str()),
    ];
    for (placeholder, _) in fields {
        match t.body.matches(placeholder).count() {
            0 => return Err(RefineError::MissingPlaceholder(placeholder)),
            1 => {}
            _ => return Err(RefineError::DuplicatePlaceholder(placeholder)),
        }
    }
    let mut out = String::with_capacity(t.body.len() + r.code.len() + 64);
    let mut rest = t.body.as_str();
    while let Some(start) = rest.find("{{") {
        out.push_str(&rest[..start]);
        let tail = &rest[start..];
        let (placeholder, value) = fields
            .iter()
            .find(|(p, _)| tail.starts_with(p))
            .ok_or_else(|| {
                let end = tail.find("}}").map_or(tail.len().min(40), |e| e + 2);
                RefineError::UnknownPlaceholder(tail[..end].to_string())
            })?;
        out.push_str(value);
        rest = &tail[placeholder.len()..];
    }
    out.push_str(rest);
    Ok(out)
}

/// Linear decrease with a floor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TemperatureSchedule {
    pub start: f64,
    pub decrement: f64,
    pub floor: f64,
    pub max_attempts: usize,
}

impl Default for TemperatureSchedule {
    fn default() -> Self {
        TemperatureSchedule {
            start: 1.0,
            decrement: 0.2,
            floor: 0.2,
            max_attempts: 5,
        }
    }
}

impl TemperatureSchedule {
    pub fn validate(&self) -> Result<(), RefineError> {
        let bad = |m: &str| Err(RefineError::InvalidSchedule(m.to_string()));
        if !(self.start > 0.0 && self.floor > 0.0 && self.decrement >= 0.0) {
            return bad("start and floor must be positive, decrement non-negative");
        }
        if self.start < self.floor {
            return bad("start is below floor");
        }
        if self.max_attempts == 0 {
            return bad("max_attempts must be at least 1");
        }
        Ok(())
    }
}

/// Temperature for the 1-based `attempt`.
pub fn next_temperature(s: &TemperatureSchedule, attempt: usize) -> Result<f64, RefineError> {
    if attempt == 0 || attempt > s.max_attempts {
        return Err(RefineError::AttemptOutOfRange {
            attempt,
            max: s.max_attempts,
        });
    }
    Ok((s.start - (attempt - 1) as f64 * s.decrement).max(s.floor))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Valid,
    ExecutionError { message: String },
    InvalidSolution,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationOutcome {
    #[serde(flatten)]
    pub verdict: Verdict,
    /// 1-based.
    pub attempt: usize,
    pub temperature: f64,
    /// Feedback sent with this attempt; `None` on the first.
    pub feedback: Option<String>,
}

/// Maps a tour check onto the loop's verdicts. An empty order for `n == 0`
/// counts as valid.
pub fn validate_candidate_tour(order: &[usize], n: usize) -> Verdict {
    match validate_tour(order, n) {
        TourVerdict::Valid => Verdict::Valid,
        _ => Verdict::InvalidSolution,
    }
}

/// Produces a new candidate from the previous input. The first call gets the
/// rendered prompt; later calls get the previous candidate plus feedback.
pub trait Evaluator {
    fn evaluate(&mut self, input: &str, temperature: f64, feedback: Option<&str>) -> (String, Verdict);
}

impl<F> Evaluator for F
where
    F: FnMut(&str, f64, Option<&str>) -> (String, Verdict),
{
    fn evaluate(&mut self, input: &str, temperature: f64, feedback: Option<&str>) -> (String, Verdict) {
        self(input, temperature, feedback)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinementReport {
    pub succeeded: bool,
    pub attempts: usize,
    /// Attempts after the first.
    pub corrections: usize,
    /// Both an execution error and an invalid solution occurred.
    pub both_failures: bool,
    pub outcomes: Vec<ValidationOutcome>,
    pub temperatures: Vec<f64>,
    pub final_candidate: Option<String>,
    /// Set when the evaluator panicked; the loop stops there.
    pub evaluator_panic: Option<String>,
}

/// Runs attempts until a valid verdict or `max_attempts`. Execution errors
/// are fed back verbatim; invalid solutions get the fixed correction text.
pub fn refinement_loop<E: Evaluator>(
    r: &RefinementRequest,
    t: &PromptTemplate,
    s: &TemperatureSchedule,
    evaluator: &mut E,
) -> Result<RefinementReport, RefineError> {
    s.validate()?;
    let prompt = render_prompt(t, r)?;
    let mut report = RefinementReport {
        succeeded: false,
        attempts: 0,
        corrections: 0,
        both_failures: false,
        outcomes: Vec::new(),
        temperatures: Vec::new(),
        final_candidate: None,
        evaluator_panic: None,
    };
    let mut input = prompt;
    let mut feedback: Option<String> = None;
    for attempt in 1..=s.max_attempts {
        let temperature = next_temperature(s, attempt)?;
        let call = catch_unwind(AssertUnwindSafe(|| evaluator.evaluate(&input, temperature, feedback.as_deref())));
        let (candidate, verdict) = match call {
            Ok(v) => v,
            Err(payload) => {
                let message = payload
                    .downcast_ref::<&str>()
                    .map(|s| s.to_string())
                    .or_else(|| payload.downcast_ref::<String>().cloned())
                    .unwrap_or_else(|| "evaluator panicked".to_string());
                report.evaluator_panic = Some(message);
                break;
            }
        };
        report.attempts = attempt;
        report.temperatures.push(temperature);
        report.outcomes.push(ValidationOutcome {
            verdict: verdict.clone(),
            attempt,
            temperature,
            feedback: feedback.take(),
        });
        report.final_candidate = Some(candidate.clone());
        match verdict {
            Verdict::Valid => {
                report.succeeded = true;
                break;
            }
            Verdict::ExecutionError { message } => feedback = Some(message),
            Verdict::InvalidSolution => feedback = Some(correction_feedback().to_string()),
        }
        input = candidate;
    }
    report.corrections = report.attempts.saturating_sub(1);
    let saw = |f: fn(&Verdict) -> bool| report.outcomes.iter().any(|o| f(&o.verdict));
    report.both_failures =
        saw(|v| matches!(v, Verdict::ExecutionError { .. })) && saw(|v| matches!(v, Verdict::InvalidSolution));
    Ok(report)
}

/// One recorded evaluator call.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluatorCall {
    pub input: String,
    pub temperature: f64,
    pub feedback: Option<String>,
}

/// Replays a fixed verdict sequence and records every call. Once the script
/// runs out it keeps answering with an execution error.
#[derive(Debug, Clone, Default)]
pub struct ScriptedEvaluator {
    script: VecDeque<Verdict>,
    pub calls: Vec<EvaluatorCall>,
}

impl ScriptedEvaluator {
    pub fn new(script: impl IntoIterator<Item = Verdict>) -> Self {
        ScriptedEvaluator {
            script: script.into_iter().collect(),
            calls: Vec::new(),
        }
    }
}

impl Evaluator for ScriptedEvaluator {
    fn evaluate(&mut self, input: &str, temperature: f64, feedback: Option<&str>) -> (String, Verdict) {
        self.calls.push(EvaluatorCall {
            input: input.to_string(),
            temperature,
            feedback: feedback.map(str::to_string),
        });
        let verdict = self.script.pop_front().unwrap_or(Verdict::ExecutionError {
            message: "script exhausted".into(),
        });
        (format!("candidate {}", self.calls.len()), verdict)
    }
}
