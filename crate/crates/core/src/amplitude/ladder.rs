//! Ladder-operator form `H = tr H/4 + Σ ω_ij a_i^† a_j + Σ (f_ij a_i^† a_j^† + h.c.)`.

use nalgebra::DMatrix;

use crate::decompositions::definiteness;
use crate::error::Result;
use crate::scalar::{cmax_abs, cr, lit, CMat, Real, C};
use crate::symplectic::QuadHamiltonian;

use super::Method;

/// Default relative tolerance for recognizing passive and active Hamiltonians.
pub const CLASSIFY_TOL: f64 = 1e-12;

/// Complex symmetric pair coefficients `f`, Hermitian number-conserving
/// coefficients `omega` and the constant `tr H / 4`.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderForm<T: Real> {
    pub f: CMat<T>,
    pub omega: CMat<T>,
    pub trace_term: T,
    /// `max|H|`, the scale for classification tolerances.
    pub scale: T,
}

impl<T: Real> LadderForm<T> {
    pub fn modes(&self) -> usize {
        self.f.nrows()
    }

    /// Inverts the defining identities to recover `H`.
    pub fn to_hamiltonian(&self) -> Result<QuadHamiltonian<T>> {
        let m = self.modes();
        let two = lit::<T>(2.0);
        let mut h = DMatrix::<T>::zeros(2 * m, 2 * m);
        for i in 0..m {
            for j in 0..m {
                let f = self.f[(i, j)];
                let w = self.omega[(i, j)];
                // E - G = 4 Re f, E + G = 2 Re ω
                let e = two * f.re + w.re;
                let g = w.re - two * f.re;
                // (F + F^T)/2 = 2 Im f, (F - F^T)/2 = -Im ω
                let fij = two * f.im - w.im;
                h[(i, j)] = e;
                h[(m + i, m + j)] = g;
                h[(i, m + j)] = fij;
                h[(m + j, i)] = fij;
            }
        }
        QuadHamiltonian::with_modes(m, h)
    }

    pub fn f_norm(&self) -> T {
        cmax_abs(&self.f)
    }

    pub fn omega_norm(&self) -> T {
        cmax_abs(&self.omega)
    }
}

/// Rewrites `r^T H r / 2hbar` in ladder operators.
///
/// With `H = [[E, F], [F^T, G]]`:
/// `4 f_ij = E_ij - G_ij + i (F_ij + F_ji)` and
/// `2 ω_ij = E_ij + G_ij + i (F_ji - F_ij)`.
pub fn ladder_form<T: Real>(h: &QuadHamiltonian<T>) -> LadderForm<T> {
    let m = h.modes();
    let (e, fb, g) = h.blocks();
    let quarter = lit::<T>(0.25);
    let half = lit::<T>(0.5);
    let f = DMatrix::from_fn(m, m, |i, j| {
        C::new(
            (e[(i, j)] - g[(i, j)]) * quarter,
            (fb[(i, j)] + fb[(j, i)]) * quarter,
        )
    });
    let omega = DMatrix::from_fn(m, m, |i, j| {
        C::new(
            (e[(i, j)] + g[(i, j)]) * half,
            (fb[(j, i)] - fb[(i, j)]) * half,
        )
    });
    LadderForm {
        f,
        omega,
        trace_term: h.trace() * quarter,
        scale: h.max_norm(),
    }
}

/// Cheapest applicable method, in the order passive, active, single-mode,
/// Williamson, general.
pub fn classify<T: Real>(lf: &LadderForm<T>, tol: T) -> Method {
    let bound = tol * lf.scale;
    if lf.f_norm() <= bound {
        return Method::Passive;
    }
    if lf.omega_norm() <= bound {
        return Method::Active;
    }
    if lf.modes() == 1 {
        return Method::SingleMode;
    }
    if let Ok(h) = lf.to_hamiltonian() {
        if is_definite(&h) {
            return Method::Williamson;
        }
    }
    Method::General
}

/// Strictly positive or strictly negative definite at the Williamson threshold.
pub(crate) fn is_definite<T: Real>(h: &QuadHamiltonian<T>) -> bool {
    let (min, max) = definiteness(h);
    let norm = min.abs().max(max.abs());
    let thr = lit::<T>(crate::decompositions::DEFINITENESS_TOL) * norm;
    norm > T::zero() && (min > thr || max < -thr)
}

/// `Λ = [[ω^T, 2 f^†], [-2 f, -ω]]`.
///
/// With `X = S R^{-1}` this linearises `i dX/dt = ω X + X ω^T + 2 f + 2 X f^† X`,
/// which keeps `X` symmetric. Putting all of ω on one side (`[[0, ·], [·, -2ω]]`)
/// only agrees when ω commutes with `X`, e.g. a single mode.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaMatrix<T: Real>(pub CMat<T>);

pub fn lambda_matrix<T: Real>(lf: &LadderForm<T>) -> LambdaMatrix<T> {
    let m = lf.modes();
    let two = cr(lit::<T>(2.0));
    let mut lam = CMat::<T>::zeros(2 * m, 2 * m);
    lam.view_mut((0, m), (m, m)).copy_from(&(lf.f.adjoint() * two));
    lam.view_mut((m, 0), (m, m)).copy_from(&(&lf.f * (-two)));
    lam.view_mut((0, 0), (m, m)).copy_from(&lf.omega.transpose());
    lam.view_mut((m, m), (m, m)).copy_from(&(-&lf.omega));
    LambdaMatrix(lam)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;
    use rand::{Rng, SeedableRng};

    fn close(a: C<f64>, b: C<f64>) -> bool {
        (a - b).norm() < 1e-15
    }

    #[test]
    fn phase_gate_ladder_coefficients() {
        let h = QuadHamiltonian::new(dmatrix![-1.0, 0.0; 0.0, 0.0]).unwrap();
        let lf = ladder_form(&h);
        assert!(close(lf.f[(0, 0)], C::new(-0.25, 0.0)));
        assert!(close(lf.omega[(0, 0)], C::new(-0.5, 0.0)));
        assert_eq!(lf.trace_term, -0.25);
    }

    #[test]
    fn squeezer_is_active() {
        let h = QuadHamiltonian::new(dmatrix![1.0, 0.0; 0.0, -1.0]).unwrap();
        let lf = ladder_form(&h);
        assert!(close(lf.f[(0, 0)], C::new(0.5, 0.0)));
        assert!(close(lf.omega[(0, 0)], C::new(0.0, 0.0)));
        assert_eq!(classify(&lf, 1e-12), Method::Active);
    }

    #[test]
    fn passive_structure_has_no_pairing() {
        let h = QuadHamiltonian::new(dmatrix![
            1.0, 0.2, 0.0, 0.5;
            0.2, 3.0, -0.5, 0.0;
            0.0, -0.5, 1.0, 0.2;
            0.5, 0.0, 0.2, 3.0
        ])
        .unwrap();
        let lf = ladder_form(&h);
        assert_eq!(lf.f_norm(), 0.0);
        assert_eq!(classify(&lf, 1e-12), Method::Passive);
        let herm = &lf.omega - lf.omega.adjoint();
        assert!(cmax_abs(&herm) == 0.0);
    }

    #[test]
    fn classification_order() {
        let id = QuadHamiltonian::new(DMatrix::<f64>::identity(4, 4)).unwrap();
        // identity is passive before it is positive definite
        assert_eq!(classify(&ladder_form(&id), 1e-12), Method::Passive);
        let pd = QuadHamiltonian::new(dmatrix![
            2.0, 0.1, 0.0, 0.0;
            0.1, 1.0, 0.0, 0.3;
            0.0, 0.0, 1.0, 0.0;
            0.0, 0.3, 0.0, 3.0
        ])
        .unwrap();
        assert_eq!(classify(&ladder_form(&pd), 1e-12), Method::Williamson);
        assert_eq!(classify(&ladder_form(&pd.scaled(-1.0)), 1e-12), Method::Williamson);
        let single = QuadHamiltonian::new(dmatrix![2.0, 0.3; 0.3, 1.0]).unwrap();
        assert_eq!(classify(&ladder_form(&single), 1e-12), Method::SingleMode);
        let cz = QuadHamiltonian::new(dmatrix![
            0.0, -1.0, 0.0, 0.0;
            -1.0, 0.0, 0.0, 0.0;
            0.0, 0.0, 0.0, 0.0;
            0.0, 0.0, 0.0, 0.0
        ])
        .unwrap();
        assert_eq!(classify(&ladder_form(&cz), 1e-12), Method::General);
        let zero = QuadHamiltonian::<f64>::zeros(2).unwrap();
        assert_eq!(classify(&ladder_form(&zero), 1e-12), Method::Passive);
    }

    #[test]
    fn round_trip_reconstruction() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(17);
        for m in 1..=4 {
            let a = DMatrix::<f64>::from_fn(2 * m, 2 * m, |_, _| rng.gen_range(-1.0..1.0));
            let h = QuadHamiltonian::new(&a + a.transpose()).unwrap();
            let lf = ladder_form(&h);
            assert!(cmax_abs(&(&lf.f - lf.f.transpose())) <= 1e-15);
            assert!(cmax_abs(&(&lf.omega - lf.omega.adjoint())) <= 1e-15);
            let back = lf.to_hamiltonian().unwrap();
            assert!((back.matrix() - h.matrix()).amax() <= 1e-12 * h.max_norm());
        }
    }

    #[test]
    fn lambda_blocks() {
        let h = QuadHamiltonian::new(dmatrix![-1.0, 0.0; 0.0, 0.0]).unwrap();
        let lam = lambda_matrix(&ladder_form(&h)).0;
        let expect = dmatrix![-0.5, -0.5; 0.5, 0.5].map(|x| C::new(x, 0.0));
        assert!(cmax_abs(&(lam - expect)) < 1e-15);

        let passive = QuadHamiltonian::new(DMatrix::<f64>::identity(4, 4) * 2.0).unwrap();
        let lam = lambda_matrix(&ladder_form(&passive)).0;
        assert!(cmax_abs(&lam.view((0, 2), (2, 2)).into_owned()) == 0.0);
        assert!(cmax_abs(&lam.view((2, 0), (2, 2)).into_owned()) == 0.0);
        assert!(close(lam[(0, 0)], C::new(2.0, 0.0)) && close(lam[(3, 3)], C::new(-2.0, 0.0)));

        let active = QuadHamiltonian::new(dmatrix![1.0, 0.0; 0.0, -1.0]).unwrap();
        let lam = lambda_matrix(&ladder_form(&active)).0;
        // off-diagonal blocks are -(each other)^†, diagonal blocks vanish
        assert!(close(lam[(0, 1)], -lam[(1, 0)].conj()));
        assert!(lam[(0, 0)].norm() == 0.0 && lam[(1, 1)].norm() == 0.0);
    }
}
