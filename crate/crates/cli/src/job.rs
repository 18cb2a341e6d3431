use gaussphase::amplitude::Method;
use gaussphase::fock::FockConfig;
use gaussphase::quadrature::QuadConfig;
use gaussphase::time_dependent::trotter_symplectic;
use gaussphase::{
    amplitude_time_dependent, heisenberg_symplectic, reduce_linear, vacuum_amplitude,
    AmplitudeOptions, AmplitudeResult, LinearHamiltonian, QuadHamiltonian,
    TabulatedSchedule, TrotterConfig,
};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::ordering::{convert_ordering, from_xxpp, vector_from_xxpp, vector_to_xxpp, Ordering};
use crate::JobError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodChoice {
    #[default]
    Auto,
    Passive,
    Active,
    SingleMode,
    Williamson,
    General,
    FockOracle,
}

impl MethodChoice {
    fn method(self) -> Option<Method> {
        match self {
            MethodChoice::Auto => None,
            MethodChoice::Passive => Some(Method::Passive),
            MethodChoice::Active => Some(Method::Active),
            MethodChoice::SingleMode => Some(Method::SingleMode),
            MethodChoice::Williamson => Some(Method::Williamson),
            MethodChoice::General => Some(Method::General),
            MethodChoice::FockOracle => Some(Method::FockOracle),
        }
    }
}

impl std::str::FromStr for MethodChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| format!("unknown method {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleSpec {
    pub times: Vec<f64>,
    pub matrices: Vec<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearSpec {
    pub rbar: Vec<f64>,
    #[serde(default = "default_hbar")]
    pub hbar: f64,
}

fn default_hbar() -> f64 {
    2.0
}

/// One job as read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub modes: usize,
    #[serde(rename = "H", default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<ScheduleSpec>,
    /// Required with `H`; defaults to the last knot for schedules.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(default)]
    pub ordering: Ordering,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linear: Option<LinearSpec>,
    #[serde(default)]
    pub method: MethodChoice,
    /// Absolute and relative target of the phase quadrature.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    /// Trotter steps for schedules.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(default)]
    pub richardson: bool,
    /// Fock cutoff for `fock_oracle`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<usize>,
    #[serde(default)]
    pub emit_symplectic: bool,
}

/// Command-line settings that replace the per-job values.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub method: Option<MethodChoice>,
    pub steps: Option<usize>,
    pub tol: Option<f64>,
    pub cutoff: Option<usize>,
    pub emit_symplectic: bool,
    pub ordering: Option<Ordering>,
}

impl JobSpec {
    pub fn apply(&mut self, o: &Overrides) {
        if let Some(m) = o.method {
            self.method = m;
        }
        if o.steps.is_some() {
            self.steps = o.steps;
        }
        if o.tol.is_some() {
            self.tol = o.tol;
        }
        if o.cutoff.is_some() {
            self.cutoff = o.cutoff;
        }
        if o.emit_symplectic {
            self.emit_symplectic = true;
        }
        if let Some(ord) = o.ordering {
            self.ordering = ord;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexOut {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsOut {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature_error: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_det_r: Option<f64>,
    pub steps: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature_magnitude: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub magnitude_discrepancy: Option<f64>,
    pub magnitude_flagged: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fock_error: Option<f64>,
    pub sign_flipped: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearOut {
    pub theta: f64,
    pub delta: Vec<f64>,
    /// Generator of the remaining quadratic unitary, `H t`.
    pub quadratic: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobResult {
    pub alpha: ComplexOut,
    /// `arg alpha` in `(-pi, pi]`.
    pub phase: f64,
    /// Phase continued from `0` at `t = 0`.
    pub unwrapped_phase: f64,
    pub magnitude: f64,
    pub probability: f64,
    pub method: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symplectic: Option<Vec<Vec<f64>>>,
    pub diagnostics: DiagnosticsOut,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linear: Option<LinearOut>,
}

enum Generator {
    Constant(QuadHamiltonian<f64>, f64),
    Schedule(TabulatedSchedule<f64>, f64),
}

/// A job whose inputs passed every schema check.
pub struct ValidJob {
    generator: Generator,
    ordering: Ordering,
    linear: Option<(DVector<f64>, f64)>,
    options: AmplitudeOptions<f64>,
    trotter: TrotterConfig,
    emit_symplectic: bool,
}

fn schema(msg: impl Into<String>) -> JobError {
    JobError::Schema(msg.into())
}

fn matrix(rows: &[Vec<f64>], modes: usize, what: &str) -> Result<DMatrix<f64>, JobError> {
    let n = 2 * modes;
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(schema(format!("{what} must be {n}x{n} for {modes} modes")));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

fn hamiltonian(rows: &[Vec<f64>], modes: usize, ord: Ordering, what: &str) -> Result<QuadHamiltonian<f64>, JobError> {
    let m = convert_ordering(&matrix(rows, modes, what)?, ord);
    QuadHamiltonian::with_modes(modes, m).map_err(|e| schema(format!("{what}: {e}")))
}

fn rows_of(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

impl JobSpec {
    pub fn validate(&self) -> Result<ValidJob, JobError> {
        let modes = self.modes;
        if modes == 0 {
            return Err(schema("modes must be at least 1"));
        }
        let ord = self.ordering;
        let t_ok = |t: f64| t.is_finite();
        let generator = match (&self.h, &self.schedule) {
            (Some(_), Some(_)) => return Err(schema("give either H or schedule, not both")),
            (None, None) => return Err(schema("missing H or schedule")),
            (Some(rows), None) => {
                let t = self.t.ok_or_else(|| schema("t is required with H"))?;
                if !t_ok(t) {
                    return Err(schema("t must be finite"));
                }
                Generator::Constant(hamiltonian(rows, modes, ord, "H")?, t)
            }
            (None, Some(s)) => {
                if s.times.len() != s.matrices.len() || s.times.is_empty() {
                    return Err(schema("schedule needs one matrix per knot and at least one knot"));
                }
                if s.times[0] != 0.0 {
                    return Err(schema("schedule must start at t = 0"));
                }
                let mats = s
                    .matrices
                    .iter()
                    .enumerate()
                    .map(|(k, rows)| hamiltonian(rows, modes, ord, &format!("schedule.matrices[{k}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                let tab = TabulatedSchedule::new(s.times.clone(), mats).map_err(|e| schema(e.to_string()))?;
                let last = *s.times.last().unwrap();
                let t = self.t.unwrap_or(last);
                if !(t_ok(t) && t >= 0.0 && t <= last) {
                    return Err(schema(format!("t must lie in [0, {last}] for this schedule")));
                }
                if !matches!(self.method, MethodChoice::Auto | MethodChoice::General) {
                    return Err(schema("schedules support only the auto or general method"));
                }
                if self.linear.is_some() {
                    return Err(schema("linear terms are not supported with schedules"));
                }
                Generator::Schedule(tab, t)
            }
        };
        let linear = match &self.linear {
            None => None,
            Some(l) => {
                if l.rbar.len() != 2 * modes {
                    return Err(schema(format!("linear.rbar must have length {}", 2 * modes)));
                }
                if !l.rbar.iter().all(|x| x.is_finite()) {
                    return Err(schema("linear.rbar must be finite"));
                }
                if !(l.hbar > 0.0 && l.hbar.is_finite()) {
                    return Err(schema("linear.hbar must be positive"));
                }
                Some((vector_to_xxpp(&DVector::from_vec(l.rbar.clone()), ord), l.hbar))
            }
        };
        let mut options = AmplitudeOptions::<f64> {
            method: self.method.method(),
            ..AmplitudeOptions::default()
        };
        if let Some(tol) = self.tol {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(schema("tol must be positive"));
            }
            options.quadrature = QuadConfig {
                abs_tol: tol,
                rel_tol: tol,
                ..QuadConfig::default()
            };
        }
        if let Some(c) = self.cutoff {
            options.fock_cutoff = c;
        }
        if self.method == MethodChoice::FockOracle {
            if modes > 2 {
                return Err(schema("fock_oracle is limited to at most 2 modes"));
            }
            FockConfig::<f64>::new(options.fock_cutoff, modes).map_err(|e| schema(e.to_string()))?;
        }
        let trotter = match self.steps {
            Some(0) => return Err(schema("steps must be at least 1")),
            Some(n) => TrotterConfig::new(n).map_err(|e| schema(e.to_string()))?,
            None => TrotterConfig::default(),
        }
        .with_richardson(self.richardson);
        Ok(ValidJob {
            generator,
            ordering: ord,
            linear,
            options,
            trotter,
            emit_symplectic: self.emit_symplectic,
        })
    }
}

impl ValidJob {
    pub fn run(&self) -> Result<JobResult, JobError> {
        let num = JobError::Numerical;
        let (res, sym) = match &self.generator {
            Generator::Constant(h, t) => {
                let res = vacuum_amplitude(h, *t, &self.options).map_err(num)?;
                let sym = if self.emit_symplectic {
                    Some(heisenberg_symplectic(h, *t).map_err(num)?.into_matrix())
                } else {
                    None
                };
                (res, sym)
            }
            Generator::Schedule(s, t) => {
                let res = amplitude_time_dependent(s, *t, &self.trotter).map_err(num)?;
                let sym = match (self.emit_symplectic, *t > 0.0) {
                    (false, _) => None,
                    (true, false) => Some(DMatrix::identity(2 * s_modes(s), 2 * s_modes(s))),
                    (true, true) => Some(trotter_symplectic(s, *t, self.trotter.steps).map_err(num)?.into_matrix()),
                };
                (res, sym)
            }
        };
        let linear = match (&self.linear, &self.generator) {
            (Some((rbar, hbar)), Generator::Constant(h, t)) => {
                let ht = h.scaled(*t);
                let lh = LinearHamiltonian::with_hbar(ht.clone(), rbar.clone(), *hbar).map_err(num)?;
                let red = reduce_linear(&lh).map_err(num)?;
                Some(LinearOut {
                    theta: red.theta,
                    delta: vector_from_xxpp(&red.delta, self.ordering).iter().copied().collect(),
                    quadratic: rows_of(&from_xxpp(red.quadratic.matrix(), self.ordering)),
                })
            }
            _ => None,
        };
        Ok(result(&res, sym.map(|s| rows_of(&from_xxpp(&s, self.ordering))), linear))
    }
}

fn s_modes(s: &TabulatedSchedule<f64>) -> usize {
    use gaussphase::HamiltonianSchedule;
    s.modes()
}

fn result(r: &AmplitudeResult<f64>, symplectic: Option<Vec<Vec<f64>>>, linear: Option<LinearOut>) -> JobResult {
    let d = &r.diagnostics;
    JobResult {
        alpha: ComplexOut {
            re: r.alpha.re,
            im: r.alpha.im,
        },
        phase: r.phase,
        unwrapped_phase: r.unwrapped_phase,
        magnitude: r.magnitude,
        probability: d.probability.unwrap_or(r.magnitude * r.magnitude),
        method: r.method.to_string(),
        symplectic,
        diagnostics: DiagnosticsOut {
            quadrature_error: d.quadrature_error,
            min_det_r: d.min_det_r,
            steps: d.steps,
            quadrature_magnitude: d.quadrature_magnitude,
            magnitude_discrepancy: d.magnitude_discrepancy,
            magnitude_flagged: d.magnitude_flagged,
            fock_error: d.fock_error,
            sign_flipped: d.sign_flipped,
        },
        linear,
    }
}

/// Validates and evaluates one job.
pub fn run_job(spec: &JobSpec) -> Result<JobResult, JobError> {
    spec.validate()?.run()
}
