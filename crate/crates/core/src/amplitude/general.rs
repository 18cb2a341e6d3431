//! General path: the Riccati equation for the pair coefficients, linearized
//! into `d/dt (R; S) = i Λ (R; S)`, and the amplitude as the exponential of a
//! quadrature over `tr H/4 + tr[f^† S R^{-1}]`.

use std::cell::Cell;

use crate::error::{Error, Result};
use crate::expm::matrix_exponential;
use crate::quadrature::{integrate, QuadConfig};
use crate::scalar::{cabs, ci, cr, lit, to_f64, CMat, Real, C};
use crate::symplectic::{heisenberg_symplectic, vacuum_probability, QuadHamiltonian};

use super::ladder::{ladder_form, lambda_matrix, LadderForm, LambdaMatrix};
use super::{AmplitudeResult, Diagnostics, Method};

/// `|det R|` below which the propagator is declared singular.
pub const SINGULAR_DET: f64 = 1e-300;

/// First block column `(R(t), S(t))` of `exp(i Λ t)`.
pub fn propagate_rs<T: Real>(lam: &LambdaMatrix<T>, t: T) -> Result<(CMat<T>, CMat<T>)> {
    let n = lam.0.nrows();
    let m = n / 2;
    let e = matrix_exponential(&lam.0.map(|z| z * ci(t)))?;
    Ok((
        e.view((0, 0), (m, m)).into_owned(),
        e.view((m, 0), (m, m)).into_owned(),
    ))
}

/// `tr H/4 + tr[f^† S R^{-1}]` and `|det R|`.
pub(crate) fn riccati_integrand<T: Real>(
    lf: &LadderForm<T>,
    r: CMat<T>,
    s: &CMat<T>,
    time: T,
) -> Result<(C<T>, T)> {
    let lu = r.lu();
    let det = cabs(lu.determinant());
    if !(det >= lit::<T>(SINGULAR_DET)) {
        return Err(Error::SingularPropagator {
            time: to_f64(time),
            det: to_f64(det),
        });
    }
    let rhs = lf.f.adjoint() * s;
    let y = lu.solve(&rhs).ok_or(Error::SingularPropagator {
        time: to_f64(time),
        det: to_f64(det),
    })?;
    Ok((cr(lf.trace_term) + y.trace(), det))
}

/// Vacuum amplitude for an arbitrary quadratic Hamiltonian.
///
/// The reported modulus is `sqrt` of the determinant formula for the vacuum
/// probability; the modulus implied by the quadrature is kept in the
/// diagnostics as an independent check.
pub fn amplitude_general<T: Real>(
    h: &QuadHamiltonian<T>,
    t: T,
    quad: &QuadConfig<T>,
) -> Result<AmplitudeResult<T>> {
    let lf = ladder_form(h);
    let lam = lambda_matrix(&lf);
    let min_det = Cell::new(T::max_value().unwrap());
    let outcome = integrate(
        |tp| {
            let (r, s) = propagate_rs(&lam, tp)?;
            let (g, det) = riccati_integrand(&lf, r, &s, tp)?;
            if det < min_det.get() {
                min_det.set(det);
            }
            Ok(g)
        },
        T::zero(),
        t,
        quad,
    )?;
    // alpha = exp(-i ∫g): log|alpha| = Im ∫g, phase = -Re ∫g
    let integral = outcome.value;
    let quad_magnitude = integral.im.exp();
    let phase = -integral.re;

    let s = heisenberg_symplectic(h, t)?;
    let probability = vacuum_probability(&s)?;
    let magnitude = probability.sqrt();

    let mut diag = Diagnostics::default();
    diag.quadrature_error = Some(outcome.error);
    diag.min_det_r = if outcome.evaluations > 0 {
        Some(min_det.get())
    } else {
        None
    };
    diag.steps = outcome.evaluations;
    diag.quadrature_magnitude = Some(quad_magnitude);
    diag.set_probability(probability, quad_magnitude);
    Ok(AmplitudeResult::from_polar(magnitude, phase, Method::General, diag))
}
