//! Hamiltonians with a linear part, `exp[-(i/hbar)(r^T H r / 2 + r^T rbar)]`,
//! split as `e^{i theta} W(delta) U` with `U = exp[-(i/2hbar) r^T H r]` and
//! `W(delta) = exp[(i/hbar) r^T Omega delta]`.
//!
//! The evolution time is absorbed into `H` here: callers pass `H t`.
//! Nothing below inverts `H`, so singular quadratic parts are fine.

use nalgebra::{ComplexField, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::expm::matrix_exponential;
use crate::scalar::{lit, Real};
use crate::symplectic::{omega_matrix, QuadHamiltonian};

fn check_square<N: ComplexField>(a: &DMatrix<N>) -> Result<usize> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "expected a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    Ok(a.nrows())
}

/// `exp` of `[[A, I, 0], [0, 0, I], [0, 0, 0]]` truncated to `blocks` block rows.
fn augmented<N: ComplexField<RealField: Real>>(a: &DMatrix<N>, blocks: usize) -> Result<DMatrix<N>> {
    let n = check_square(a)?;
    let mut big = DMatrix::<N>::zeros(blocks * n, blocks * n);
    big.view_mut((0, 0), (n, n)).copy_from(a);
    for b in 1..blocks {
        big.view_mut(((b - 1) * n, b * n), (n, n))
            .fill_with_identity();
    }
    matrix_exponential(&big)
}

/// `F1(A) = sum_n A^n / (n+1)! = (e^A - I) A^{-1}`.
pub fn phi1_matrix<N: ComplexField<RealField: Real>>(a: &DMatrix<N>) -> Result<DMatrix<N>> {
    let n = check_square(a)?;
    let e = augmented(a, 2)?;
    Ok(e.view((0, n), (n, n)).into_owned())
}

/// `F2(A) = sum_n A^n / (n+2)! = (e^A - A - I) A^{-2}`.
pub fn phi2_matrix<N: ComplexField<RealField: Real>>(a: &DMatrix<N>) -> Result<DMatrix<N>> {
    let n = check_square(a)?;
    let e = augmented(a, 3)?;
    Ok(e.view((0, 2 * n), (n, n)).into_owned())
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearHamiltonian<T: Real> {
    /// Quadratic part with the time already multiplied in.
    pub h: QuadHamiltonian<T>,
    pub rbar: DVector<T>,
    pub hbar: T,
}

impl<T: Real> LinearHamiltonian<T> {
    /// `hbar` defaults to 2.
    pub fn new(h: QuadHamiltonian<T>, rbar: DVector<T>) -> Result<Self> {
        Self::with_hbar(h, rbar, lit(2.0))
    }

    pub fn with_hbar(h: QuadHamiltonian<T>, rbar: DVector<T>, hbar: T) -> Result<Self> {
        if rbar.len() != 2 * h.modes() {
            return Err(Error::Dimension(format!(
                "linear term has length {}, expected {}",
                rbar.len(),
                2 * h.modes()
            )));
        }
        if !rbar.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite);
        }
        if !(hbar > T::zero() && hbar.is_finite()) {
            return Err(Error::InvalidParameter(format!("hbar must be positive, got {hbar}")));
        }
        Ok(Self { h, rbar, hbar })
    }
}

/// `Q = e^{i theta} W(delta) U` with `U` generated by `quadratic`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedForm<T: Real> {
    pub theta: T,
    pub delta: DVector<T>,
    pub quadratic: QuadHamiltonian<T>,
}

/// `delta = F1(Omega H) Omega rbar`, `theta = -(1/2hbar) rbar^T F2(Omega H) Omega rbar`.
///
/// `delta` is the shift `Q^dag r Q - U^dag r U`; at `H = 0` it is `Omega rbar`.
pub fn reduce_linear<T: Real>(lh: &LinearHamiltonian<T>) -> Result<ReducedForm<T>> {
    let omega = omega_matrix::<T>(lh.h.modes())?;
    let a = &omega * lh.h.matrix();
    let w = &omega * &lh.rbar;
    let delta = phi1_matrix(&a)? * &w;
    let theta = -(lh.rbar.dot(&(phi2_matrix(&a)? * &w))) / (lit::<T>(2.0) * lh.hbar);
    Ok(ReducedForm {
        theta,
        delta,
        quadratic: lh.h.clone(),
    })
}
