//! Time-dependent quadratic Hamiltonians: the `(R, S)` system is propagated
//! by a midpoint-sampled product of exponentials and the phase integral is
//! taken on the same grid.

use nalgebra::DMatrix;

use crate::amplitude::{
    ladder_form, lambda_matrix, riccati_integrand, AmplitudeResult, Diagnostics, Method,
};
use crate::error::{Error, Result};
use crate::expm::matrix_exponential;
use crate::scalar::{cabs, ci, lit, CMat, RMat, Real, C};
use crate::symplectic::{omega_matrix, vacuum_probability, QuadHamiltonian, SymplecticMatrix};

/// `t -> H(t)` on `[0, t]`.
///
/// Implementations are shared across threads by batch evaluation, hence `Sync`.
pub trait HamiltonianSchedule<T: Real>: Sync {
    fn modes(&self) -> usize;

    fn evaluate(&self, t: T) -> Result<QuadHamiltonian<T>>;

    /// Natural end of the schedule, if it has one.
    fn end_time(&self) -> Option<T> {
        None
    }
}

/// Schedule given by an evaluation rule returning the `2M x 2M` matrix.
pub struct FnSchedule<F> {
    modes: usize,
    rule: F,
}

impl<F> FnSchedule<F> {
    pub fn new(modes: usize, rule: F) -> Self {
        Self { modes, rule }
    }
}

impl<T, F> HamiltonianSchedule<T> for FnSchedule<F>
where
    T: Real,
    F: Fn(T) -> RMat<T> + Sync,
{
    fn modes(&self) -> usize {
        self.modes
    }

    fn evaluate(&self, t: T) -> Result<QuadHamiltonian<T>> {
        QuadHamiltonian::with_modes(self.modes, (self.rule)(t))
            .map_err(|e| Error::Schedule(format!("at t = {t}: {e}")))
    }
}

/// Knots `t_0 < t_1 < ...` with linear interpolation in between.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedSchedule<T: Real> {
    times: Vec<T>,
    matrices: Vec<QuadHamiltonian<T>>,
}

impl<T: Real> TabulatedSchedule<T> {
    pub fn new(times: Vec<T>, matrices: Vec<QuadHamiltonian<T>>) -> Result<Self> {
        if times.is_empty() || times.len() != matrices.len() {
            return Err(Error::Schedule(format!(
                "{} knots but {} matrices",
                times.len(),
                matrices.len()
            )));
        }
        if !times.iter().all(|t| t.is_finite()) {
            return Err(Error::Schedule("knot times must be finite".into()));
        }
        if let Some(w) = times.windows(2).find(|w| !(w[1] > w[0])) {
            return Err(Error::Schedule(format!(
                "knot times must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        let m = matrices[0].modes();
        if matrices.iter().any(|h| h.modes() != m) {
            return Err(Error::Schedule("all knots must have the same mode count".into()));
        }
        Ok(Self { times, matrices })
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }
}

impl<T: Real> HamiltonianSchedule<T> for TabulatedSchedule<T> {
    fn modes(&self) -> usize {
        self.matrices[0].modes()
    }

    fn evaluate(&self, t: T) -> Result<QuadHamiltonian<T>> {
        let first = self.times[0];
        let last = *self.times.last().unwrap();
        // grid arithmetic may overshoot the last knot by an ulp or so
        let slack = lit::<T>(1e-12) * (T::one() + last.abs());
        if !(t >= first - slack && t <= last + slack) {
            return Err(Error::Schedule(format!(
                "t = {t} outside the tabulated range [{first}, {last}]"
            )));
        }
        let k = self.times.partition_point(|x| *x <= t);
        if k == 0 {
            return Ok(self.matrices[0].clone());
        }
        if k >= self.times.len() {
            return Ok(self.matrices[self.times.len() - 1].clone());
        }
        let (t0, t1) = (self.times[k - 1], self.times[k]);
        let w = (t - t0) / (t1 - t0);
        let h = self.matrices[k - 1].matrix() * (T::one() - w) + self.matrices[k].matrix() * w;
        QuadHamiltonian::new(h)
    }

    fn end_time(&self) -> Option<T> {
        self.times.last().copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrotterConfig {
    pub steps: usize,
    /// Combine `steps` and `2 steps` to cancel the leading `dt^2` error.
    pub richardson: bool,
}

impl Default for TrotterConfig {
    fn default() -> Self {
        Self {
            steps: 256,
            richardson: false,
        }
    }
}

impl TrotterConfig {
    pub fn new(steps: usize) -> Result<Self> {
        if steps == 0 {
            return Err(Error::InvalidParameter("trotter steps must be at least 1".into()));
        }
        Ok(Self {
            steps,
            richardson: false,
        })
    }

    pub fn with_richardson(mut self, on: bool) -> Self {
        self.richardson = on;
        self
    }
}

/// `(R, S)` after every step; `samples[k]` belongs to `t_k = k dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrotterTrace<T: Real> {
    pub dt: T,
    pub samples: Vec<(CMat<T>, CMat<T>)>,
}

impl<T: Real> TrotterTrace<T> {
    pub fn r(&self) -> &CMat<T> {
        &self.samples.last().unwrap().0
    }

    pub fn s(&self) -> &CMat<T> {
        &self.samples.last().unwrap().1
    }
}

fn check_time<T: Real>(t: T) -> Result<()> {
    if !(t > T::zero() && t.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "trotterized evolution needs a positive finite time, got {t}"
        )));
    }
    Ok(())
}

fn midpoint<T: Real>(k: usize, dt: T) -> T {
    dt * (lit::<T>(k as f64) + lit(0.5))
}

/// `prod_{k = steps..1} exp(i Λ(t_k^mid) dt)` applied to `(I, 0)`.
pub fn propagate_rs_td<T, S>(schedule: &S, t: T, steps: usize) -> Result<TrotterTrace<T>>
where
    T: Real,
    S: HamiltonianSchedule<T> + ?Sized,
{
    check_time(t)?;
    let cfg = TrotterConfig::new(steps)?;
    let m = schedule.modes();
    let dt = t / lit(cfg.steps as f64);
    let mut y = CMat::<T>::zeros(2 * m, m);
    y.view_mut((0, 0), (m, m)).fill_with_identity();
    let split = |y: &CMat<T>| (y.rows(0, m).into_owned(), y.rows(m, m).into_owned());
    let mut samples = Vec::with_capacity(steps + 1);
    samples.push(split(&y));
    for k in 0..steps {
        let h = schedule.evaluate(midpoint(k, dt))?;
        let lam = lambda_matrix(&ladder_form(&h));
        let step = matrix_exponential(&lam.0.map(|z| z * ci(dt)))?;
        y = step * y;
        samples.push(split(&y));
    }
    Ok(TrotterTrace { dt, samples })
}

/// `prod_{k = steps..1} exp(Omega H(t_k^mid) dt)`.
pub fn trotter_symplectic<T, S>(schedule: &S, t: T, steps: usize) -> Result<SymplecticMatrix<T>>
where
    T: Real,
    S: HamiltonianSchedule<T> + ?Sized,
{
    check_time(t)?;
    TrotterConfig::new(steps)?;
    let m = schedule.modes();
    let omega = omega_matrix::<T>(m)?;
    let dt = t / lit(steps as f64);
    let mut acc = DMatrix::<T>::identity(2 * m, 2 * m);
    for k in 0..steps {
        let h = schedule.evaluate(midpoint(k, dt))?;
        acc = matrix_exponential(&(&omega * h.matrix() * dt))? * acc;
    }
    SymplecticMatrix::new(acc)
}

struct Pass<T: Real> {
    /// Trapezoid value of `∫ g` and the same rule on every other node.
    integral: C<T>,
    coarse: Option<C<T>>,
    log_probability: T,
    min_det: T,
}

fn single_pass<T, S>(schedule: &S, t: T, steps: usize) -> Result<Pass<T>>
where
    T: Real,
    S: HamiltonianSchedule<T> + ?Sized,
{
    let trace = propagate_rs_td(schedule, t, steps)?;
    let dt = trace.dt;
    let mut g = Vec::with_capacity(steps + 1);
    let mut min_det = T::max_value().unwrap();
    for (k, (r, s)) in trace.samples.iter().enumerate() {
        let tk = dt * lit(k as f64);
        let lf = ladder_form(&schedule.evaluate(tk)?);
        let (gk, det) = riccati_integrand(&lf, r.clone(), s, tk).map_err(|e| match e {
            Error::SingularPropagator { det, .. } => Error::SingularPropagator {
                time: crate::scalar::to_f64(tk),
                det,
            },
            other => other,
        })?;
        min_det = min_det.min(det);
        g.push(gk);
    }
    let trapezoid = |stride: usize| {
        let h = dt * lit(stride as f64);
        let inner = g.iter().step_by(stride).fold(C::new(T::zero(), T::zero()), |a, b| a + b);
        (inner - (g[0] + g[steps]) * lit::<T>(0.5)) * h
    };
    let integral = trapezoid(1);
    let coarse = steps.is_multiple_of(2).then(|| trapezoid(2));
    let sym = trotter_symplectic(schedule, t, steps)?;
    let p = vacuum_probability(&sym)?;
    Ok(Pass {
        integral,
        coarse,
        log_probability: p.ln(),
        min_det,
    })
}

/// `alpha = exp(-i ∫ g)` with `g = tr H(t')/4 + tr[f(t')^† S R^{-1}]` on the
/// trotter grid (trapezoid rule). The modulus is taken from the determinant
/// formula for the trotterized symplectic propagator.
pub fn amplitude_time_dependent<T, S>(
    schedule: &S,
    t: T,
    cfg: &TrotterConfig,
) -> Result<AmplitudeResult<T>>
where
    T: Real,
    S: HamiltonianSchedule<T> + ?Sized,
{
    TrotterConfig::new(cfg.steps)?;
    if t == T::zero() {
        let mut diag = Diagnostics::default();
        diag.set_probability(T::one(), T::one());
        return Ok(AmplitudeResult::from_polar(T::one(), T::zero(), Method::General, diag));
    }
    let base = single_pass(schedule, t, cfg.steps)?;
    let (integral, log_p, error, min_det, steps) = if cfg.richardson {
        let fine = single_pass(schedule, t, 2 * cfg.steps)?;
        let third = lit::<T>(1.0 / 3.0);
        let four = lit::<T>(4.0);
        (
            (fine.integral * four - base.integral) * third,
            (fine.log_probability * four - base.log_probability) * third,
            Some(cabs(fine.integral - base.integral) * third),
            base.min_det.min(fine.min_det),
            3 * cfg.steps,
        )
    } else {
        let err = base.coarse.map(|c| cabs(base.integral - c) / lit(3.0));
        (base.integral, base.log_probability, err, base.min_det, cfg.steps)
    };
    let probability = log_p.exp().min(T::one());
    let quad_magnitude = integral.im.exp();
    let mut diag = Diagnostics::default();
    diag.quadrature_error = error;
    diag.min_det_r = Some(min_det);
    diag.steps = steps;
    diag.quadrature_magnitude = Some(quad_magnitude);
    diag.set_probability(probability, quad_magnitude);
    Ok(AmplitudeResult::from_polar(
        probability.sqrt(),
        -integral.re,
        Method::General,
        diag,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amplitude::{amplitude_general, amplitude_passive, propagate_rs, vacuum_amplitude, AmplitudeOptions};
    use crate::fock::{vacuum_amplitude_fock_trotter, FockConfig};
    use crate::quadrature::QuadConfig;
    use crate::scalar::cmax_abs;
    use nalgebra::dmatrix;

    fn h2() -> RMat<f64> {
        dmatrix![
            0.6, 0.1, 0.3, 0.4;
            0.1, -0.2, -0.1, 0.2;
            0.3, -0.1, 0.1, 0.0;
            0.4, 0.2, 0.0, 0.5
        ]
    }

    fn smooth() -> impl HamiltonianSchedule<f64> {
        FnSchedule::new(2, |t: f64| {
            let mut h = h2() * (1.0 + 0.5 * (2.0 * t).sin());
            h[(0, 0)] += 0.3 * t * t;
            h[(1, 3)] += 0.2 * t.cos();
            h[(3, 1)] += 0.2 * t.cos();
            h
        })
    }

    #[test]
    fn constant_schedule_collapses() {
        let h = QuadHamiltonian::new(h2()).unwrap();
        let sched = FnSchedule::new(2, |_t: f64| h2());
        let tr = propagate_rs_td(&sched, 1.1, 16).unwrap();
        let (r, s) = propagate_rs(&lambda_matrix(&ladder_form(&h)), 1.1).unwrap();
        assert!(cmax_abs(&(tr.r() - r)) < 1e-12);
        assert!(cmax_abs(&(tr.s() - s)) < 1e-12);
        assert_eq!(tr.samples.len(), 17);
    }

    #[test]
    fn second_order_in_steps() {
        let sched = smooth();
        let t = 1.2;
        let runs: Vec<_> = [16, 32, 64, 128]
            .iter()
            .map(|&n| propagate_rs_td(&sched, t, n).unwrap())
            .collect();
        let e: Vec<f64> = runs
            .windows(2)
            .map(|w| cmax_abs(&(w[0].r() - w[1].r())).max(cmax_abs(&(w[0].s() - w[1].s()))))
            .collect();
        for w in e.windows(2) {
            let ratio = w[0] / w[1];
            assert!((3.5..=4.5).contains(&ratio), "{ratio}");
        }
    }

    #[test]
    fn aligned_piecewise_constant_is_exact() {
        let h1 = dmatrix![1.0, 0.2; 0.2, -0.4];
        let h2 = dmatrix![0.3, -0.5; -0.5, 0.8];
        let (a, b) = (h1.clone(), h2.clone());
        let sched = FnSchedule::new(1, move |t: f64| if t < 0.5 { a.clone() } else { b.clone() });
        let tr = propagate_rs_td(&sched, 1.0, 10).unwrap();
        let l1 = lambda_matrix(&ladder_form(&QuadHamiltonian::new(h1).unwrap())).0;
        let l2 = lambda_matrix(&ladder_form(&QuadHamiltonian::new(h2).unwrap())).0;
        let e = matrix_exponential(&(l2 * ci(0.5))).unwrap() * matrix_exponential(&(l1 * ci(0.5))).unwrap();
        assert!((tr.r()[(0, 0)] - e[(0, 0)]).norm() < 1e-13);
        assert!((tr.s()[(0, 0)] - e[(1, 0)]).norm() < 1e-13);
    }

    #[test]
    fn constant_passive_schedule() {
        let hp = dmatrix![1.0, 0.3, 0.0, 0.2; 0.3, 0.5, -0.2, 0.0; 0.0, -0.2, 1.0, 0.3; 0.2, 0.0, 0.3, 0.5];
        let h = QuadHamiltonian::new(hp.clone()).unwrap();
        let sched = FnSchedule::new(2, move |_t: f64| hp.clone());
        let a = amplitude_time_dependent(&sched, 1.4, &TrotterConfig::new(512).unwrap()).unwrap();
        let p = amplitude_passive(&h, 1.4, 1e-12).unwrap();
        assert!((a.alpha - p.alpha).norm() < 1e-8);
    }

    #[test]
    fn constant_general_schedule() {
        let h = QuadHamiltonian::new(h2()).unwrap();
        let exact = amplitude_general(&h, 0.9, &QuadConfig::default()).unwrap();
        let sched = FnSchedule::new(2, |_t: f64| h2());
        let mut errs = Vec::new();
        for n in [16, 32, 64] {
            let a = amplitude_time_dependent(&sched, 0.9, &TrotterConfig::new(n).unwrap()).unwrap();
            assert!((a.magnitude - exact.magnitude).abs() < 1e-12);
            errs.push((a.alpha - exact.alpha).norm());
        }
        assert!(errs[2] < 1e-4);
        let ratio = errs[1] / errs[2];
        assert!((3.5..=4.5).contains(&ratio), "{ratio}");
        let rich = amplitude_time_dependent(&sched, 0.9, &TrotterConfig::new(16).unwrap().with_richardson(true)).unwrap();
        assert!((rich.alpha - exact.alpha).norm() < errs[2]);
    }

    #[test]
    fn ramped_squeezer_against_fock() {
        let t = 1.0;
        let ramp = |s: f64| dmatrix![s / t, 0.0; 0.0, -s / t];
        let sched = FnSchedule::new(1, ramp);
        let steps = 200;
        let a = amplitude_time_dependent(&sched, t, &TrotterConfig::new(steps).unwrap()).unwrap();
        let cfg = FockConfig::new(40, 1).unwrap();
        let oracle = vacuum_amplitude_fock_trotter(|s| QuadHamiltonian::new(ramp(s)), t, steps, &cfg).unwrap();
        assert!((a.alpha - oracle).norm() < 1e-4);
        // trapezoid modulus is second order; the extrapolated one clears the flag
        assert!(a.diagnostics.magnitude_discrepancy.unwrap() < 1e-5);
        let rich = amplitude_time_dependent(&sched, t, &TrotterConfig::new(steps).unwrap().with_richardson(true)).unwrap();
        assert!(!rich.diagnostics.magnitude_flagged);
    }

    #[test]
    fn tabulated_interpolation() {
        let h0 = QuadHamiltonian::new(dmatrix![1.0, 0.0; 0.0, 1.0]).unwrap();
        let h1 = QuadHamiltonian::new(dmatrix![3.0, 1.0; 1.0, -1.0]).unwrap();
        let tab = TabulatedSchedule::new(vec![0.0, 2.0], vec![h0, h1]).unwrap();
        let mid = tab.evaluate(0.5).unwrap();
        assert_eq!(mid.matrix(), &dmatrix![1.5, 0.25; 0.25, 0.5]);
        assert_eq!(tab.end_time(), Some(2.0));
        assert!(tab.evaluate(2.5).is_err());
        assert!(tab.evaluate(-0.1).is_err());
        let a = amplitude_time_dependent(&tab, 2.0, &TrotterConfig::new(64).unwrap()).unwrap();
        assert!(a.magnitude > 0.0 && a.magnitude <= 1.0);

        let k = QuadHamiltonian::<f64>::zeros(1).unwrap();
        assert!(TabulatedSchedule::new(vec![0.0, 0.0], vec![k.clone(), k.clone()]).is_err());
        assert!(TabulatedSchedule::new(vec![0.0], vec![k.clone(), k.clone()]).is_err());
        let two = QuadHamiltonian::<f64>::zeros(2).unwrap();
        assert!(TabulatedSchedule::new(vec![0.0, 1.0], vec![k, two]).is_err());
    }

    #[test]
    fn bad_inputs() {
        let sched = FnSchedule::new(1, |_t: f64| dmatrix![1.0, 2.0; 0.0, 1.0]);
        assert!(matches!(propagate_rs_td(&sched, 1.0, 4), Err(Error::Schedule(_))));
        let ok = FnSchedule::new(1, |_t: f64| dmatrix![1.0, 0.0; 0.0, 1.0]);
        assert!(propagate_rs_td(&ok, 0.0, 4).is_err());
        assert!(propagate_rs_td(&ok, 1.0, 0).is_err());
        let a = amplitude_time_dependent(&ok, 0.0, &TrotterConfig::default()).unwrap();
        assert_eq!(a.alpha, C::new(1.0, 0.0));
    }

    #[test]
    fn matches_time_independent_dispatch() {
        let sched = FnSchedule::new(1, |_t: f64| dmatrix![-1.0, 0.0; 0.0, 0.0]);
        let h = QuadHamiltonian::new(dmatrix![-1.0, 0.0; 0.0, 0.0]).unwrap();
        let exact = vacuum_amplitude(&h, 2.0, &AmplitudeOptions::default()).unwrap();
        let a = amplitude_time_dependent(&sched, 2.0, &TrotterConfig::new(256).unwrap().with_richardson(true)).unwrap();
        assert!((a.alpha - exact.alpha).norm() < 1e-9);
    }
}
