//! Closed-form amplitudes: passive, active, single-mode and Williamson.

use nalgebra::DMatrix;

use crate::decompositions::{takagi, williamson};
use crate::error::{Error, Result};
use crate::scalar::{ccos, cexp, ci, cr, csinc, csqrt, lit, CMat, Real, C};
use crate::symplectic::QuadHamiltonian;

use super::branch::inverse_sqrt_continuous;
use super::ladder::{is_definite, ladder_form, LadderForm};
use super::{AmplitudeResult, Diagnostics, Method};

fn not_applicable(method: &'static str, reason: impl Into<String>) -> Error {
    Error::MethodNotApplicable {
        method,
        reason: reason.into(),
    }
}

/// `alpha = exp(-i t tr H / 4)`; the vacuum is an eigenstate of the
/// normal-ordered part.
pub fn amplitude_passive<T: Real>(h: &QuadHamiltonian<T>, t: T, tol: T) -> Result<AmplitudeResult<T>> {
    let lf = ladder_form(h);
    if lf.f_norm() > tol * lf.scale {
        return Err(not_applicable("passive", "pairing coefficients f are nonzero"));
    }
    let phase = -t * lf.trace_term;
    Ok(AmplitudeResult::from_polar(
        T::one(),
        phase,
        Method::Passive,
        Diagnostics::default(),
    ))
}

/// `alpha = prod_j (cosh s_j t)^{-1/2}` with `s` the Takagi values of `2f`.
pub fn amplitude_active<T: Real>(lf: &LadderForm<T>, t: T, tol: T) -> Result<AmplitudeResult<T>> {
    if lf.omega_norm() > tol * lf.scale {
        return Err(not_applicable("active", "number-conserving coefficients omega are nonzero"));
    }
    let two_f = &lf.f * cr(lit::<T>(2.0));
    let tk = takagi(&two_f)?;
    // log-domain product so large squeezing does not overflow
    let log_mag = tk.s.iter().fold(T::zero(), |acc, s| {
        let x = (*s * t).abs();
        // ln cosh x = x + ln(1 + e^{-2x}) - ln 2
        acc - lit::<T>(0.5) * (x + (T::one() + (-x - x).exp()).ln() - lit::<T>(2.0).ln())
    });
    let mut diag = Diagnostics::default();
    diag.steps = tk.s.len();
    Ok(AmplitudeResult::from_polar(log_mag.exp(), T::zero(), Method::Active, diag))
}

/// `cos(t sqrt(det H)) + i t (tr H / 2) sinc(t sqrt(det H))` for a given
/// choice of `sqrt(det H)`.
pub fn single_mode_argument<T: Real>(det_root: C<T>, trace: T, t: T) -> C<T> {
    let x = det_root * cr(t);
    ccos(x) + ci(t * trace * lit(0.5)) * csinc(x)
}

/// One-mode closed form `alpha = z(t)^{-1/2}`, branch continued from `t = 0`.
pub fn amplitude_single_mode<T: Real>(h: &QuadHamiltonian<T>, t: T) -> Result<AmplitudeResult<T>> {
    if h.modes() != 1 {
        return Err(not_applicable("single_mode", format!("needs one mode, got {}", h.modes())));
    }
    let det = h.matrix().determinant();
    let trace = h.trace();
    let root = csqrt(cr(det));
    let rate = root.re.abs() + root.im.abs() + trace.abs() + T::one();
    let tracked = inverse_sqrt_continuous(|tp| Ok(single_mode_argument(root, trace, tp)), t, rate)?;
    let mut diag = Diagnostics::default();
    diag.steps = tracked.samples;
    Ok(AmplitudeResult::from_polar(
        tracked.magnitude,
        tracked.phase,
        Method::SingleMode,
        diag,
    ))
}

/// Williamson route for definite `H`:
/// `alpha = e^{-i t Σd/2} det(I - K(d)[T T^T - I]/2)^{-1/2}` with
/// `K(d) = ⊕(e^{-i d_j t} - 1) ⊕ ⊕(e^{-i d_j t} - 1)`. Negative definite
/// inputs use `H t = (-H)(-t)`.
pub fn amplitude_williamson<T: Real>(h: &QuadHamiltonian<T>, t: T) -> Result<AmplitudeResult<T>> {
    if !is_definite(h) {
        // report the positive-definiteness failure from the decomposition
        williamson(h)?;
        return Err(not_applicable("williamson", "Hamiltonian is not definite"));
    }
    let (h_pos, t_eff, flipped) = if h.matrix().trace() < T::zero() {
        (h.scaled(-T::one()), -t, true)
    } else {
        (h.clone(), t, false)
    };
    let factors = williamson(&h_pos)?;
    let m = h.modes();
    let n = 2 * m;
    let tm = factors.t.matrix();
    let p = (tm * tm.transpose() - DMatrix::<T>::identity(n, n)).map(cr) * cr(lit::<T>(0.5));
    let d = factors.d.clone();
    let z = |tp: T| -> Result<C<T>> {
        let mut mat = CMat::<T>::identity(n, n);
        for i in 0..n {
            let k = cexp(ci(-d[i % m] * tp)) - cr(T::one());
            for j in 0..n {
                mat[(i, j)] -= k * p[(i, j)];
            }
        }
        Ok(mat.determinant())
    };
    let rate = d.iter().fold(T::zero(), |a, x| a + *x) * lit(2.0) + T::one();
    let tracked = inverse_sqrt_continuous(z, t_eff, rate)?;
    let dsum = d.iter().fold(T::zero(), |a, x| a + *x);
    let phase = -t_eff * dsum * lit(0.5) + tracked.phase;
    let mut diag = Diagnostics::default();
    diag.steps = tracked.samples;
    diag.sign_flipped = flipped;
    Ok(AmplitudeResult::from_polar(
        tracked.magnitude,
        phase,
        Method::Williamson,
        diag,
    ))
}
