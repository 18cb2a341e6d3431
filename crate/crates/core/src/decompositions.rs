//! Williamson normal form of positive definite Hamiltonians and the
//! Autonne–Takagi factorization of complex symmetric matrices.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::scalar::{cabs, ci, cmax_abs, cr, lit, max_abs, to_complex, to_f64, CMat, RMat, Real, C};
use crate::symplectic::{omega_matrix, QuadHamiltonian, SymplecticMatrix};

/// Smallest eigenvalue accepted as positive, relative to the spectral norm.
pub const DEFINITENESS_TOL: f64 = 1e-10;
/// Relative gap below which singular values are treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-8;

/// `H = T^T (d ⊕ d) T` with `T` symplectic and `d` sorted descending.
#[derive(Debug, Clone)]
pub struct WilliamsonFactors<T: Real> {
    pub t: SymplecticMatrix<T>,
    pub d: DVector<T>,
}

impl<T: Real> WilliamsonFactors<T> {
    /// `T^T (d ⊕ d) T`.
    pub fn reconstruct(&self) -> RMat<T> {
        let m = self.d.len();
        let dd = DVector::from_fn(2 * m, |i, _| self.d[i % m]);
        let t = self.t.matrix();
        t.transpose() * DMatrix::from_diagonal(&dd) * t
    }
}

/// `F = W diag(s) W^T` with `W` unitary and `s` descending.
#[derive(Debug, Clone)]
pub struct TakagiFactors<T: Real> {
    pub w: CMat<T>,
    pub s: DVector<T>,
}

impl<T: Real> TakagiFactors<T> {
    pub fn reconstruct(&self) -> CMat<T> {
        let sd = DMatrix::from_diagonal(&self.s.map(cr));
        &self.w * sd * self.w.transpose()
    }
}

fn sorted_eigen<T: Real>(m: RMat<T>) -> (Vec<T>, RMat<T>) {
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .expect("finite eigenvalues")
    });
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = DMatrix::from_fn(eig.eigenvectors.nrows(), order.len(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    (vals, vecs)
}

/// Checks strict positive definiteness; returns `(min, max)` eigenvalues.
pub fn definiteness<T: Real>(h: &QuadHamiltonian<T>) -> (T, T) {
    let eig = SymmetricEigen::new(h.matrix().clone());
    let min = eig.eigenvalues.iter().cloned().fold(T::max_value().unwrap(), |a, b| a.min(b));
    let max = eig.eigenvalues.iter().cloned().fold(T::min_value().unwrap(), |a, b| a.max(b));
    (min, max)
}

/// True when `H` is strictly positive definite at the library threshold.
pub fn is_positive_definite<T: Real>(h: &QuadHamiltonian<T>) -> bool {
    let (min, max) = definiteness(h);
    let norm = min.abs().max(max.abs());
    norm > T::zero() && min > lit::<T>(DEFINITENESS_TOL) * norm
}

/// Williamson decomposition through `A = H^{1/2} Omega H^{1/2}`: the
/// eigenvectors of the Hermitian matrix `iA` with eigenvalues `-d_j` have
/// real and imaginary parts that form the orthogonal matrix bringing `A` to
/// `[[0, d], [-d, 0]]`, and `T = (d ⊕ d)^{-1/2} O^T H^{1/2}`.
pub fn williamson<T: Real>(h: &QuadHamiltonian<T>) -> Result<WilliamsonFactors<T>> {
    let m = h.modes();
    let n = 2 * m;
    let (vals, vecs) = sorted_eigen(h.matrix().clone());
    let norm = vals[0].abs().max(vals[n - 1].abs());
    if !(norm > T::zero()) || vals[0] <= lit::<T>(DEFINITENESS_TOL) * norm {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: to_f64(vals[0]),
        });
    }
    let sqrt_vals = DVector::from_iterator(n, vals.iter().map(|v| v.sqrt()));
    let h_half = &vecs * DMatrix::from_diagonal(&sqrt_vals) * vecs.transpose();

    let omega = omega_matrix::<T>(m)?;
    let a = &h_half * omega * &h_half;
    let ia = to_complex(&a).map(|z| z * ci(T::one()));
    // iA is Hermitian; symmetrize away roundoff before the solver sees it
    let ia = (&ia + ia.adjoint()) * cr(lit::<T>(0.5));
    let eig = SymmetricEigen::new(ia);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| {
        eig.eigenvalues[x]
            .partial_cmp(&eig.eigenvalues[y])
            .expect("finite eigenvalues")
    });

    let sqrt2 = lit::<T>(2.0).sqrt();
    let mut ortho = RMat::<T>::zeros(n, n);
    let mut d = DVector::<T>::zeros(m);
    for (j, &idx) in order.iter().take(m).enumerate() {
        d[j] = -eig.eigenvalues[idx];
        let mut v = eig.eigenvectors.column(idx).into_owned();
        // fix the free phase: largest component real positive
        let mut best = 0;
        for k in 1..n {
            if cabs(v[k]) > cabs(v[best]) + lit::<T>(1e-12) {
                best = k;
            }
        }
        let pivot = v[best];
        let phase = pivot.conj() / cr(cabs(pivot));
        v *= phase;
        for k in 0..n {
            ortho[(k, j)] = v[k].re * sqrt2;
            ortho[(k, m + j)] = v[k].im * sqrt2;
        }
    }
    if d.iter().any(|x| !(*x > T::zero())) {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: to_f64(vals[0]),
        });
    }

    let inv_sqrt_d = DVector::from_fn(n, |i, _| T::one() / d[i % m].sqrt());
    let t = DMatrix::from_diagonal(&inv_sqrt_d) * ortho.transpose() * h_half;
    Ok(WilliamsonFactors {
        t: SymplecticMatrix::new(t)?,
        d,
    })
}

/// Autonne–Takagi factorization.
///
/// With `F = A + iB`, a Takagi vector `w = x + iy` obeys `F conj(w) = s w`,
/// equivalently `[[A, B], [B, -A]] (x; y) = s (x; y)`. The real embedding has
/// eigenvalues `±s_j`; the nonnegative half gives the factors. Vectors for
/// (numerically) zero singular values are re-orthogonalized as complex
/// vectors, since the `+0` and `-0` eigenvectors of the embedding mix.
pub fn takagi<T: Real>(f: &CMat<T>) -> Result<TakagiFactors<T>> {
    let (r, c) = f.shape();
    if r != c || r == 0 {
        return Err(Error::Dimension(format!("Takagi needs a square matrix, got {r}x{c}")));
    }
    if !f.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let scale = cmax_abs(f);
    let asym = cmax_abs(&(f - f.transpose()));
    let allowed = lit::<T>(1e-12) * scale;
    if asym > allowed {
        return Err(Error::NotSymmetric {
            asymmetry: to_f64(asym),
            allowed: to_f64(allowed),
        });
    }
    let m = r;
    let sym = (f + f.transpose()) * cr(lit::<T>(0.5));
    if scale == T::zero() {
        return Ok(TakagiFactors {
            w: CMat::identity(m, m),
            s: DVector::zeros(m),
        });
    }

    let a = sym.map(|z| z.re);
    let b = sym.map(|z| z.im);
    let mut emb = RMat::<T>::zeros(2 * m, 2 * m);
    emb.view_mut((0, 0), (m, m)).copy_from(&a);
    emb.view_mut((0, m), (m, m)).copy_from(&b);
    emb.view_mut((m, 0), (m, m)).copy_from(&b);
    emb.view_mut((m, m), (m, m)).copy_from(&(-&a));

    let (vals, vecs) = sorted_eigen(emb);
    let top = vals[2 * m - 1];
    let tol = lit::<T>(DEGENERACY_TOL) * top;

    let mut w = CMat::<T>::zeros(m, m);
    let mut s = DVector::<T>::zeros(m);
    let mut filled = 0;
    for idx in (0..2 * m).rev() {
        if filled == m || vals[idx] <= tol {
            break;
        }
        let mut col = vecs.column(idx).into_owned();
        let mut best = 0;
        for k in 1..2 * m {
            if col[k].abs() > col[best].abs() + lit::<T>(1e-12) {
                best = k;
            }
        }
        if col[best] < T::zero() {
            col = -col;
        }
        for k in 0..m {
            w[(k, filled)] = C::new(col[k], col[m + k]);
        }
        s[filled] = vals[idx];
        filled += 1;
    }

    if filled < m {
        let cluster: Vec<usize> = (0..2 * m).filter(|&i| vals[i].abs() <= tol).collect();
        for idx in cluster {
            if filled == m {
                break;
            }
            let mut cand = DVector::<C<T>>::from_fn(m, |k, _| C::new(vecs[(k, idx)], vecs[(m + k, idx)]));
            for pass in 0..2 {
                let _ = pass;
                for j in 0..filled {
                    let wj = w.column(j);
                    let proj = wj.dotc(&cand);
                    cand -= wj * proj;
                }
            }
            let nrm = cand.norm();
            if nrm < lit(0.5) {
                continue;
            }
            cand /= cr(nrm);
            let mut best = 0;
            for k in 1..m {
                if cabs(cand[k]) > cabs(cand[best]) + lit::<T>(1e-12) {
                    best = k;
                }
            }
            let pivot = cand[best];
            cand *= pivot.conj() / cr(cabs(pivot));
            w.set_column(filled, &cand);
            s[filled] = T::zero();
            filled += 1;
        }
    }
    if filled < m {
        return Err(Error::InvalidParameter(
            "Takagi factorization failed to complete the null space".into(),
        ));
    }
    Ok(TakagiFactors { w, s })
}

/// Max-norm reconstruction residual of Williamson factors, relative to `max|H|`.
pub fn williamson_residual<T: Real>(h: &QuadHamiltonian<T>, f: &WilliamsonFactors<T>) -> T {
    max_abs(&(f.reconstruct() - h.matrix())) / h.max_norm()
}
