//! Quadrature conventions, Hamiltonian and symplectic matrix types, the
//! Heisenberg propagator and the vacuum-survival probability.
//!
//! Quadratures are ordered `x_1..x_M, p_1..p_M` throughout. The Hamiltonian
//! operator is `r^T H r / 2hbar`; since quadratures scale as `sqrt(hbar)`,
//! no quantity computed here depends on `hbar`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::expm::matrix_exponential;
use crate::scalar::{all_finite, lit, max_abs, precision_tol, to_f64, RMat, Real};

/// Relative asymmetry accepted on ingestion.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Relative residual accepted for `S Omega S^T = Omega`.
pub const SYMPLECTIC_TOL: f64 = 1e-10;

/// The block matrix `[[0, I], [-I, 0]]` of size `2M x 2M`.
pub fn omega_matrix<T: Real>(modes: usize) -> Result<RMat<T>> {
    if modes == 0 {
        return Err(Error::InvalidModeCount(0));
    }
    let n = 2 * modes;
    Ok(DMatrix::from_fn(n, n, |i, j| {
        if j == i + modes {
            T::one()
        } else if i == j + modes {
            -T::one()
        } else {
            T::zero()
        }
    }))
}

/// A real symmetric `2M x 2M` matrix defining `r^T H r / 2hbar`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadHamiltonian<T: Real> {
    modes: usize,
    matrix: RMat<T>,
}

impl<T: Real> QuadHamiltonian<T> {
    /// Validates shape, finiteness and symmetry, then stores the exact
    /// symmetrization `(H + H^T)/2`.
    pub fn new(matrix: RMat<T>) -> Result<Self> {
        let (r, c) = matrix.shape();
        if r != c || r % 2 != 0 {
            return Err(Error::Dimension(format!(
                "Hamiltonian must be 2M x 2M, got {r}x{c}"
            )));
        }
        if r == 0 {
            return Err(Error::InvalidModeCount(0));
        }
        if !all_finite(&matrix) {
            return Err(Error::NonFinite);
        }
        let scale = max_abs(&matrix);
        let asym = max_abs(&(&matrix - matrix.transpose()));
        let allowed = precision_tol::<T>(SYMMETRY_TOL, 1) * scale;
        if asym > allowed {
            return Err(Error::NotSymmetric {
                asymmetry: to_f64(asym),
                allowed: to_f64(allowed),
            });
        }
        let sym = (&matrix + matrix.transpose()) * lit::<T>(0.5);
        Ok(Self {
            modes: r / 2,
            matrix: sym,
        })
    }

    /// As [`QuadHamiltonian::new`], additionally checking the mode count.
    pub fn with_modes(modes: usize, matrix: RMat<T>) -> Result<Self> {
        if modes == 0 {
            return Err(Error::InvalidModeCount(0));
        }
        if matrix.nrows() != 2 * modes {
            return Err(Error::Dimension(format!(
                "{modes} modes need a {n}x{n} matrix, got {}x{}",
                matrix.nrows(),
                matrix.ncols(),
                n = 2 * modes
            )));
        }
        Self::new(matrix)
    }

    pub fn from_row_slice(modes: usize, data: &[T]) -> Result<Self> {
        let n = 2 * modes;
        if data.len() != n * n {
            return Err(Error::Dimension(format!(
                "expected {} entries, got {}",
                n * n,
                data.len()
            )));
        }
        Self::with_modes(modes, DMatrix::from_row_slice(n, n, data))
    }

    pub fn zeros(modes: usize) -> Result<Self> {
        Self::with_modes(modes, DMatrix::zeros(2 * modes, 2 * modes))
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn matrix(&self) -> &RMat<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> RMat<T> {
        self.matrix
    }

    pub fn trace(&self) -> T {
        self.matrix.trace()
    }

    /// Largest absolute entry.
    pub fn max_norm(&self) -> T {
        max_abs(&self.matrix)
    }

    /// `c H`, used for the sign flip of negative definite inputs and for
    /// absorbing the evolution time.
    pub fn scaled(&self, c: T) -> Self {
        Self {
            modes: self.modes,
            matrix: &self.matrix * c,
        }
    }

    /// Diagonal blocks `E`, `G` and the off-diagonal block `F` of
    /// `H = [[E, F], [F^T, G]]`.
    pub fn blocks(&self) -> (RMat<T>, RMat<T>, RMat<T>) {
        let m = self.modes;
        (
            self.matrix.view((0, 0), (m, m)).into_owned(),
            self.matrix.view((0, m), (m, m)).into_owned(),
            self.matrix.view((m, m), (m, m)).into_owned(),
        )
    }
}

/// A real `2M x 2M` matrix with `S Omega S^T = Omega`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix<T: Real> {
    modes: usize,
    matrix: RMat<T>,
}

impl<T: Real> SymplecticMatrix<T> {
    pub fn new(matrix: RMat<T>) -> Result<Self> {
        let (r, c) = matrix.shape();
        if r != c || r % 2 != 0 || r == 0 {
            return Err(Error::Dimension(format!(
                "symplectic matrix must be 2M x 2M, got {r}x{c}"
            )));
        }
        if !all_finite(&matrix) {
            return Err(Error::NonFinite);
        }
        let out = Self {
            modes: r / 2,
            matrix,
        };
        let (residual, allowed) = out.residual();
        if residual > allowed {
            return Err(Error::NotSymplectic {
                residual: to_f64(residual),
                allowed: to_f64(allowed),
            });
        }
        Ok(out)
    }

    pub fn identity(modes: usize) -> Result<Self> {
        if modes == 0 {
            return Err(Error::InvalidModeCount(0));
        }
        Ok(Self {
            modes,
            matrix: DMatrix::identity(2 * modes, 2 * modes),
        })
    }

    /// `max|S Omega S^T - Omega|` together with the accepted bound.
    pub fn residual(&self) -> (T, T) {
        let omega = omega_matrix::<T>(self.modes).expect("modes >= 1");
        let res = &self.matrix * &omega * self.matrix.transpose() - &omega;
        let s = max_abs(&self.matrix);
        (
            max_abs(&res),
            precision_tol::<T>(SYMPLECTIC_TOL, 2 * self.modes) * T::one().max(s * s),
        )
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn matrix(&self) -> &RMat<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> RMat<T> {
        self.matrix
    }
}

/// `S = exp(Omega H t)`, the propagator of the quadratures in the Heisenberg
/// picture.
pub fn heisenberg_symplectic<T: Real>(h: &QuadHamiltonian<T>, t: T) -> Result<SymplecticMatrix<T>> {
    let omega = omega_matrix::<T>(h.modes())?;
    let gen = omega * h.matrix() * t;
    SymplecticMatrix::new(matrix_exponential(&gen)?)
}

/// `ln det[(S S^T + I)/2]`, evaluated through a Cholesky factorization.
pub fn log_det_husimi<T: Real>(s: &SymplecticMatrix<T>) -> Result<T> {
    let n = s.matrix().nrows();
    let q = (s.matrix() * s.matrix().transpose() + DMatrix::identity(n, n)) * lit::<T>(0.5);
    let chol = q
        .cholesky()
        .ok_or_else(|| Error::InvalidParameter("(S S^T + I)/2 is not positive definite".into()))?;
    let two = lit::<T>(2.0);
    Ok(chol
        .l_dirty()
        .diagonal()
        .iter()
        .fold(T::zero(), |acc, d| acc + two * d.ln()))
}

/// `|<0|U|0>|^2 = 1/sqrt(det[(S S^T + I)/2])`.
pub fn vacuum_probability<T: Real>(s: &SymplecticMatrix<T>) -> Result<T> {
    let log_det = log_det_husimi(s)?;
    let p = (-log_det * lit::<T>(0.5)).exp();
    if !(p > T::zero()) || !p.is_finite() {
        return Err(Error::ProbabilityOutOfRange {
            log_det: to_f64(log_det),
        });
    }
    Ok(p.min(T::one()))
}

/// `H' = M^T H M`: the Hamiltonian whose vacuum amplitude equals
/// `<psi|U|psi>` for `|psi> = Y|0>` with `Y^dag r Y = M r`.
pub fn conjugate_hamiltonian<T: Real>(
    h: &QuadHamiltonian<T>,
    m: &SymplecticMatrix<T>,
) -> Result<QuadHamiltonian<T>> {
    if h.modes() != m.modes() {
        return Err(Error::Dimension(format!(
            "Hamiltonian has {} modes, symplectic matrix {}",
            h.modes(),
            m.modes()
        )));
    }
    let prod = m.matrix().transpose() * h.matrix() * m.matrix();
    let sym = (&prod + prod.transpose()) * lit::<T>(0.5);
    Ok(QuadHamiltonian {
        modes: h.modes(),
        matrix: sym,
    })
}
