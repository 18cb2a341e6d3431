//! Vacuum-to-vacuum amplitude `<0| exp(-i r^T H r t / 2hbar) |0>` for
//! time-independent quadratic Hamiltonians.
//!
//! Every method reports a phase that is continuous in `t` and vanishes at
//! `t = 0`; `phase` is that value wrapped into `(-pi, pi]`.

mod branch;
mod closed_form;
mod general;
mod ladder;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fock::{vacuum_amplitude_fock, FockConfig};
use crate::quadrature::QuadConfig;
use crate::scalar::{cabs, carg, cexp, ci, lit, wrap_phase, Real, C};
use crate::symplectic::{heisenberg_symplectic, vacuum_probability, QuadHamiltonian};

pub use closed_form::{
    amplitude_active, amplitude_passive, amplitude_single_mode, amplitude_williamson,
    single_mode_argument,
};
pub use general::{amplitude_general, propagate_rs, SINGULAR_DET};
pub use ladder::{classify, ladder_form, lambda_matrix, LadderForm, LambdaMatrix, CLASSIFY_TOL};

pub(crate) use general::riccati_integrand;
/// Magnitude disagreement with the determinant formula that gets flagged.
pub const MAGNITUDE_FLAG_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Passive,
    Active,
    SingleMode,
    Williamson,
    General,
    FockOracle,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Passive,
        Method::Active,
        Method::SingleMode,
        Method::Williamson,
        Method::General,
        Method::FockOracle,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Passive => "passive",
            Method::Active => "active",
            Method::SingleMode => "single_mode",
            Method::Williamson => "williamson",
            Method::General => "general",
            Method::FockOracle => "fock_oracle",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown method {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics<T: Real> {
    /// Error bound of the phase integral (general and time-dependent paths).
    pub quadrature_error: Option<T>,
    /// Smallest `|det R(t')|` met while integrating.
    pub min_det_r: Option<T>,
    /// Integrand evaluations, branch-tracking samples or trotter steps.
    pub steps: usize,
    /// `1/sqrt(det[(S S^T + I)/2])`.
    pub probability: Option<T>,
    /// Modulus implied by the phase integral.
    pub quadrature_magnitude: Option<T>,
    /// `| |alpha| - sqrt(probability) |` for the method's own modulus.
    pub magnitude_discrepancy: Option<T>,
    pub magnitude_flagged: bool,
    /// Cutoff-convergence estimate of the Fock oracle.
    pub fock_error: Option<T>,
    /// Negative definite input evaluated as `(-H)(-t)`.
    pub sign_flipped: bool,
}

impl<T: Real> Default for Diagnostics<T> {
    fn default() -> Self {
        Self {
            quadrature_error: None,
            min_det_r: None,
            steps: 0,
            probability: None,
            quadrature_magnitude: None,
            magnitude_discrepancy: None,
            magnitude_flagged: false,
            fock_error: None,
            sign_flipped: false,
        }
    }
}

impl<T: Real> Diagnostics<T> {
    pub(crate) fn set_probability(&mut self, probability: T, method_magnitude: T) {
        let disc = (method_magnitude - probability.sqrt()).abs();
        self.probability = Some(probability);
        self.magnitude_discrepancy = Some(disc);
        self.magnitude_flagged = disc > lit(MAGNITUDE_FLAG_TOL);
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeResult<T: Real> {
    pub alpha: C<T>,
    /// `arg alpha` in `(-pi, pi]`.
    pub phase: T,
    /// Phase continued from `0` at `t = 0`.
    pub unwrapped_phase: T,
    pub magnitude: T,
    pub method: Method,
    pub diagnostics: Diagnostics<T>,
}

impl<T: Real> AmplitudeResult<T> {
    pub(crate) fn from_polar(magnitude: T, unwrapped_phase: T, method: Method, diagnostics: Diagnostics<T>) -> Self {
        // adding zero turns -0 into +0
        let unwrapped_phase = unwrapped_phase + T::zero();
        Self {
            alpha: cexp(ci(unwrapped_phase)) * magnitude,
            phase: wrap_phase(unwrapped_phase),
            unwrapped_phase,
            magnitude,
            method,
            diagnostics,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeOptions<T: Real> {
    /// `None` selects by [`classify`].
    pub method: Option<Method>,
    pub classify_tol: T,
    pub quadrature: QuadConfig<T>,
    /// Cutoff used when the Fock oracle is requested.
    pub fock_cutoff: usize,
}

impl<T: Real> Default for AmplitudeOptions<T> {
    fn default() -> Self {
        Self {
            method: None,
            classify_tol: lit(CLASSIFY_TOL),
            quadrature: QuadConfig::default(),
            fock_cutoff: 40,
        }
    }
}

impl<T: Real> AmplitudeOptions<T> {
    pub fn with_method(method: Method) -> Self {
        Self {
            method: Some(method),
            ..Self::default()
        }
    }
}

/// Computes `alpha` with the requested (or cheapest applicable) method and
/// cross-checks its modulus against the determinant formula.
pub fn vacuum_amplitude<T: Real>(
    h: &QuadHamiltonian<T>,
    t: T,
    opts: &AmplitudeOptions<T>,
) -> Result<AmplitudeResult<T>> {
    if !t.is_finite() {
        return Err(Error::InvalidParameter("evolution time must be finite".into()));
    }
    let lf = ladder_form(h);
    let method = opts.method.unwrap_or_else(|| classify(&lf, opts.classify_tol));
    let mut result = match method {
        Method::Passive => amplitude_passive(h, t, opts.classify_tol)?,
        Method::Active => amplitude_active(&lf, t, opts.classify_tol)?,
        Method::SingleMode => amplitude_single_mode(h, t)?,
        Method::Williamson => amplitude_williamson(h, t)?,
        Method::General => return amplitude_general(h, t, &opts.quadrature),
        Method::FockOracle => {
            let cfg = FockConfig::new(opts.fock_cutoff, h.modes())?;
            let out = vacuum_amplitude_fock(h, t, &cfg)?;
            let mut diag = Diagnostics::default();
            diag.fock_error = Some(out.error_estimate);
            let mut r = AmplitudeResult::from_polar(cabs(out.value), carg(out.value), Method::FockOracle, diag);
            r.alpha = out.value;
            r
        }
    };
    let s = heisenberg_symplectic(h, t)?;
    let p = vacuum_probability(&s)?;
    result.diagnostics.set_probability(p, result.magnitude);
    Ok(result)
}
