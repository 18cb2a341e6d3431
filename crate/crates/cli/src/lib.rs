//! JSON front end: job parsing, method selection and batch evaluation.

mod job;
mod ordering;

use rayon::prelude::*;
use serde_json::{json, Value};

pub use job::{
    run_job, ComplexOut, DiagnosticsOut, JobResult, JobSpec, LinearOut, LinearSpec, MethodChoice,
    Overrides, ScheduleSpec, ValidJob,
};
pub use ordering::{convert_ordering, from_xxpp, vector_from_xxpp, vector_to_xxpp, Ordering};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SCHEMA: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug)]
pub enum JobError {
    /// Malformed or inconsistent input; nothing was evaluated.
    Schema(String),
    Numerical(gaussphase::Error),
}

impl std::fmt::Display for JobError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            JobError::Schema(m) => write!(f, "schema error: {m}"),
            JobError::Numerical(e) => write!(f, "numerical error: {e}"),
        }
    }
}

impl std::error::Error for JobError {}

impl JobError {
    pub fn exit_code(&self) -> i32 {
        match self {
            JobError::Schema(_) => EXIT_SCHEMA,
            JobError::Numerical(_) => EXIT_NUMERICAL,
        }
    }

    /// `{"error": {"kind": .., "code": .., "message": .., "details": ..}}`.
    pub fn to_json(&self, job: Option<usize>) -> Value {
        let mut body = match self {
            JobError::Schema(m) => json!({ "kind": "schema", "code": "invalid_input", "message": m }),
            JobError::Numerical(e) => {
                let (code, details) = numerical_details(e);
                json!({ "kind": "numerical", "code": code, "message": e.to_string(), "details": details })
            }
        };
        if let Some(i) = job {
            body["job"] = json!(i);
        }
        json!({ "error": body })
    }
}

fn numerical_details(e: &gaussphase::Error) -> (&'static str, Value) {
    use gaussphase::Error as E;
    match e {
        E::SingularPropagator { time, det } => ("singular_propagator", json!({ "time": time, "det": det })),
        E::QuadratureNotConverged {
            estimate_re,
            estimate_im,
            error,
        } => (
            "quadrature_not_converged",
            json!({ "estimate": { "re": estimate_re, "im": estimate_im }, "error": error }),
        ),
        E::MethodNotApplicable { method, reason } => {
            ("method_not_applicable", json!({ "method": method, "reason": reason }))
        }
        E::NotPositiveDefinite { min_eigenvalue } => {
            ("not_positive_definite", json!({ "min_eigenvalue": min_eigenvalue }))
        }
        E::ProbabilityOutOfRange { log_det } => ("probability_out_of_range", json!({ "log_det": log_det })),
        E::NotSymplectic { residual, allowed } => {
            ("not_symplectic", json!({ "residual": residual, "allowed": allowed }))
        }
        E::FockTooLarge { dim, cap } => ("fock_too_large", json!({ "dim": dim, "cap": cap })),
        _ => ("numerical_failure", Value::Null),
    }
}

/// A single job object or an array of them.
#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Single(JobSpec),
    Batch(Vec<JobSpec>),
}

pub fn parse_input(text: &str) -> Result<Input, (JobError, Option<usize>)> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| (JobError::Schema(format!("invalid JSON: {e}")), None))?;
    match value {
        Value::Array(items) => items
            .into_iter()
            .enumerate()
            .map(|(i, v)| serde_json::from_value(v).map_err(|e| (JobError::Schema(e.to_string()), Some(i))))
            .collect::<Result<Vec<_>, _>>()
            .map(Input::Batch),
        v @ Value::Object(_) => serde_json::from_value(v)
            .map(Input::Single)
            .map_err(|e| (JobError::Schema(e.to_string()), None)),
        _ => Err((JobError::Schema("expected a job object or an array of jobs".into()), None)),
    }
}

fn outcome_json(r: &Result<JobResult, JobError>) -> Value {
    match r {
        Ok(res) => serde_json::to_value(res).expect("results serialize"),
        Err(e) => e.to_json(None),
    }
}

/// Full pipeline on the text of an input file: returns the output document
/// and the process exit code. Every job is validated before any is run, so a
/// schema error never comes with partial results. Batch results keep input
/// order; numerical failures appear in place as error objects.
pub fn process(text: &str, overrides: &Overrides) -> (Value, i32) {
    let (mut jobs, batch) = match parse_input(text) {
        Ok(Input::Single(j)) => (vec![j], false),
        Ok(Input::Batch(js)) => (js, true),
        Err((e, i)) => return (e.to_json(i), EXIT_SCHEMA),
    };
    for j in &mut jobs {
        j.apply(overrides);
    }
    let mut valid = Vec::with_capacity(jobs.len());
    for (i, j) in jobs.iter().enumerate() {
        match j.validate() {
            Ok(v) => valid.push(v),
            Err(e) => return (e.to_json(batch.then_some(i)), EXIT_SCHEMA),
        }
    }
    let results: Vec<_> = valid.par_iter().map(ValidJob::run).collect();
    let code = if results.iter().any(|r| r.is_err()) {
        EXIT_NUMERICAL
    } else {
        EXIT_OK
    };
    let doc = if batch {
        Value::Array(results.iter().map(outcome_json).collect())
    } else {
        outcome_json(&results[0])
    };
    (doc, code)
}
