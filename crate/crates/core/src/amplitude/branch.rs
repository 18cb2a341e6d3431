//! Continuous branch of `z(t)^{-1/2}` along `t' ∈ [0, t]` anchored at `z(0) = 1`.

use crate::error::Result;
use crate::scalar::{cabs, carg, lit, to_f64, Real, C};

/// Largest accepted change of `arg z` between neighbouring samples.
const MAX_STEP_ARG: f64 = std::f64::consts::FRAC_PI_4;
const MAX_DEPTH: usize = 48;

#[derive(Debug, Clone, Copy)]
pub(crate) struct TrackedInverseSqrt<T: Real> {
    /// `|z(t)|^{-1/2}`
    pub magnitude: T,
    /// `-arg_cont z(t) / 2`
    pub phase: T,
    pub samples: usize,
}

/// Samples `z` on a uniform grid of at least `max(32, 8 rate |t|)` points,
/// bisecting any step whose argument change exceeds `pi/4`, and accumulates
/// the argument continuously.
pub(crate) fn inverse_sqrt_continuous<T, F>(z: F, t: T, rate: T) -> Result<TrackedInverseSqrt<T>>
where
    T: Real,
    F: Fn(T) -> Result<C<T>>,
{
    let n = (8.0 * to_f64(rate) * to_f64(t).abs()).ceil().max(32.0).min(1e6) as usize;
    let z0 = z(T::zero())?;
    let mut arg = carg(z0);
    let mut samples = 1;
    let mut prev_t = T::zero();
    let mut prev_z = z0;
    for k in 1..=n {
        let tk = t * lit::<T>(k as f64 / n as f64);
        let zk = z(tk)?;
        arg += refine(&z, prev_t, prev_z, tk, zk, 0, &mut samples)?;
        samples += 1;
        prev_t = tk;
        prev_z = zk;
    }
    let half = lit::<T>(0.5);
    Ok(TrackedInverseSqrt {
        magnitude: T::one() / cabs(prev_z).sqrt(),
        phase: -arg * half,
        samples,
    })
}

fn refine<T, F>(z: &F, ta: T, za: C<T>, tb: T, zb: C<T>, depth: usize, samples: &mut usize) -> Result<T>
where
    T: Real,
    F: Fn(T) -> Result<C<T>>,
{
    let step = carg(zb / za);
    if step.abs() < lit(MAX_STEP_ARG) || depth >= MAX_DEPTH {
        return Ok(step);
    }
    let tm = (ta + tb) * lit(0.5);
    let zm = z(tm)?;
    *samples += 1;
    Ok(refine(z, ta, za, tm, zm, depth + 1, samples)? + refine(z, tm, zm, tb, zb, depth + 1, samples)?)
}
