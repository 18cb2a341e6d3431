//! Brute-force reference: quadratic (and linear) quadrature Hamiltonians as
//! matrices on a truncated multimode Fock space.
//!
//! Operators are assembled straight from `x = sqrt(hbar/2)(a + a^dag)` and
//! `p = -i sqrt(hbar/2)(a - a^dag)` acting on number states, with
//! intermediate states allowed one level above the cutoff. The stored matrix
//! is therefore the exact projection `P K P` of the infinite-dimensional
//! operator, and it is built without going through the ladder-form
//! coefficients used by the fast paths.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::expm::matrix_exponential;
use crate::scalar::{cabs, ci, cmax_abs, cr, lit, to_f64, CMat, RMat, Real, C};
use crate::symplectic::{omega_matrix, QuadHamiltonian};

/// Largest truncated dimension `(N+1)^M` the oracle accepts.
pub const MAX_FOCK_DIM: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockConfig<T: Real> {
    /// Photon-number cutoff per mode; each mode keeps `cutoff + 1` levels.
    pub cutoff: usize,
    pub modes: usize,
    pub hbar: T,
    /// Agreement required between cutoffs `N` and `N - 4`.
    pub tolerance: T,
}

impl<T: Real> FockConfig<T> {
    pub fn new(cutoff: usize, modes: usize) -> Result<Self> {
        let cfg = Self {
            cutoff,
            modes,
            hbar: lit(2.0),
            tolerance: lit(1e-6),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_hbar(mut self, hbar: T) -> Result<Self> {
        self.hbar = hbar;
        self.validate()?;
        Ok(self)
    }

    pub fn with_tolerance(mut self, tol: T) -> Self {
        self.tolerance = tol;
        self
    }

    pub fn levels(&self) -> usize {
        self.cutoff + 1
    }

    pub fn dim(&self) -> usize {
        self.levels().checked_pow(self.modes as u32).unwrap_or(usize::MAX)
    }

    pub fn validate(&self) -> Result<()> {
        if self.modes == 0 {
            return Err(Error::InvalidModeCount(0));
        }
        if self.cutoff < 4 {
            return Err(Error::FockConfig(format!(
                "cutoff must be at least 4, got {}",
                self.cutoff
            )));
        }
        if !(self.hbar > T::zero()) {
            return Err(Error::FockConfig("hbar must be positive".into()));
        }
        let dim = self.dim();
        if dim > MAX_FOCK_DIM {
            return Err(Error::FockTooLarge {
                dim,
                cap: MAX_FOCK_DIM,
            });
        }
        Ok(())
    }

    fn index(&self, occ: &[usize]) -> Option<usize> {
        let mut idx = 0;
        for &n in occ {
            if n > self.cutoff {
                return None;
            }
            idx = idx * self.levels() + n;
        }
        Some(idx)
    }

    fn occupation(&self, mut idx: usize) -> Vec<usize> {
        let mut occ = vec![0; self.modes];
        for k in (0..self.modes).rev() {
            occ[k] = idx % self.levels();
            idx /= self.levels();
        }
        occ
    }
}

/// Truncated `(a, a^dag)` on `n + 1` levels.
pub fn ladder_matrices<T: Real>(n: usize) -> (CMat<T>, CMat<T>) {
    let a = DMatrix::from_fn(n + 1, n + 1, |r, c| {
        if c == r + 1 {
            cr(lit::<T>(c as f64).sqrt())
        } else {
            C::new(T::zero(), T::zero())
        }
    });
    let ad = a.adjoint();
    (a, ad)
}

/// Dense operator on the truncated Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator<T: Real> {
    pub config: FockConfig<T>,
    pub matrix: CMat<T>,
}

impl<T: Real> FockOperator<T> {
    pub fn hermiticity_residual(&self) -> T {
        cmax_abs(&(&self.matrix - self.matrix.adjoint()))
    }

    /// Leading `k x k` block (all modes below `k` photons only when `M = 1`).
    pub fn low_block(&self, k: usize) -> CMat<T> {
        self.matrix.view((0, 0), (k, k)).into_owned()
    }

    /// `exp(-i K s)` of this (Hermitian) generator.
    pub fn evolution(&self, s: T) -> Result<FockOperator<T>> {
        let gen = self.matrix.map(|z| z * ci(-s));
        Ok(FockOperator {
            config: self.config,
            matrix: matrix_exponential(&gen)?,
        })
    }

    /// Operator product `self * other`.
    pub fn compose(&self, other: &FockOperator<T>) -> FockOperator<T> {
        FockOperator {
            config: self.config,
            matrix: &self.matrix * &other.matrix,
        }
    }

    pub fn scale(&self, z: C<T>) -> FockOperator<T> {
        FockOperator {
            config: self.config,
            matrix: self.matrix.map(|v| v * z),
        }
    }
}

/// Compressed sparse rows; generators are far too sparse to store densely at
/// the larger oracle sizes.
#[derive(Debug, Clone)]
pub(crate) struct SparseOperator<T: Real> {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C<T>>,
}

impl<T: Real> SparseOperator<T> {
    fn from_map(dim: usize, map: BTreeMap<(usize, usize), C<T>>) -> Self {
        let mut row_ptr = vec![0; dim + 1];
        let mut cols = Vec::with_capacity(map.len());
        let mut vals = Vec::with_capacity(map.len());
        for ((r, c), v) in map {
            if v.re == T::zero() && v.im == T::zero() {
                continue;
            }
            row_ptr[r + 1] += 1;
            cols.push(c);
            vals.push(v);
        }
        for r in 0..dim {
            row_ptr[r + 1] += row_ptr[r];
        }
        Self {
            dim,
            row_ptr,
            cols,
            vals,
        }
    }

    fn apply(&self, v: &DVector<C<T>>) -> DVector<C<T>> {
        DVector::from_fn(self.dim, |r, _| {
            let mut acc = C::new(T::zero(), T::zero());
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.vals[k] * v[self.cols[k]];
            }
            acc
        })
    }

    fn norm_inf(&self) -> T {
        (0..self.dim)
            .map(|r| {
                (self.row_ptr[r]..self.row_ptr[r + 1])
                    .fold(T::zero(), |acc, k| acc + cabs(self.vals[k]))
            })
            .fold(T::zero(), |a, b| a.max(b))
    }

    fn to_dense(&self) -> CMat<T> {
        let mut m = CMat::zeros(self.dim, self.dim);
        for r in 0..self.dim {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                m[(r, self.cols[k])] += self.vals[k];
            }
        }
        m
    }

    /// `exp(-i K s) v` by substepped Taylor series.
    fn evolve(&self, v: &DVector<C<T>>, s: T) -> DVector<C<T>> {
        let norm = self.norm_inf() * s.abs();
        let substeps = (to_f64(norm) / 0.5).ceil().max(1.0) as usize;
        let ds = s / lit(substeps as f64);
        let factor = ci(-ds);
        let mut state = v.clone();
        let tiny = lit::<T>(1e-18);
        for _ in 0..substeps {
            let mut term = state.clone();
            let mut acc = state.clone();
            for k in 1..80 {
                term = self.apply(&term) * (factor / cr(lit(k as f64)));
                acc += &term;
                if term.norm() <= tiny * acc.norm() {
                    break;
                }
            }
            state = acc;
        }
        state
    }
}

/// A number state with occupations beyond the cutoff allowed.
type Ket<T> = Vec<(Vec<usize>, C<T>)>;

/// Applies quadrature `k` (`x_k` for `k < M`, `p_{k-M}` otherwise).
fn apply_quadrature<T: Real>(ket: &Ket<T>, k: usize, modes: usize, hbar: T) -> Ket<T> {
    let amp = (hbar * lit(0.5)).sqrt();
    let (mode, is_p) = if k < modes { (k, false) } else { (k - modes, true) };
    let mut out = Vec::with_capacity(2 * ket.len());
    for (occ, c) in ket {
        let n = occ[mode];
        // lowering part: sqrt(n) |n-1>
        if n > 0 {
            let mut o = occ.clone();
            o[mode] -= 1;
            let coef = amp * lit::<T>(n as f64).sqrt();
            let z = if is_p { ci(-coef) } else { cr(coef) };
            out.push((o, *c * z));
        }
        // raising part: sqrt(n+1) |n+1>
        let mut o = occ.clone();
        o[mode] += 1;
        let coef = amp * lit::<T>((n + 1) as f64).sqrt();
        let z = if is_p { ci(coef) } else { cr(coef) };
        out.push((o, *c * z));
    }
    out
}

/// `K = r^T Q r / 2hbar + r^T v / hbar` projected onto the truncated space.
pub(crate) fn quadrature_operator<T: Real>(
    quad: Option<&RMat<T>>,
    lin: Option<&DVector<T>>,
    cfg: &FockConfig<T>,
) -> Result<SparseOperator<T>> {
    cfg.validate()?;
    let n = 2 * cfg.modes;
    if let Some(q) = quad {
        if q.nrows() != n || q.ncols() != n {
            return Err(Error::Dimension(format!(
                "operator matrix must be {n}x{n} for {} modes",
                cfg.modes
            )));
        }
    }
    if let Some(v) = lin {
        if v.len() != n {
            return Err(Error::Dimension(format!("linear term must have length {n}")));
        }
    }
    let dim = cfg.dim();
    let hbar = cfg.hbar;
    let mut map: BTreeMap<(usize, usize), C<T>> = BTreeMap::new();
    for col in 0..dim {
        let start: Ket<T> = vec![(cfg.occupation(col), cr(T::one()))];
        let singles: Vec<Ket<T>> = (0..n)
            .map(|l| apply_quadrature(&start, l, cfg.modes, hbar))
            .collect();
        let mut push = |occ: &[usize], z: C<T>| {
            if let Some(row) = cfg.index(occ) {
                *map.entry((row, col)).or_insert(C::new(T::zero(), T::zero())) += z;
            }
        };
        if let Some(v) = lin {
            for l in 0..n {
                if v[l] == T::zero() {
                    continue;
                }
                let w = cr(v[l] / hbar);
                for (occ, c) in &singles[l] {
                    push(occ, *c * w);
                }
            }
        }
        if let Some(q) = quad {
            for l in 0..n {
                for k in 0..n {
                    if q[(k, l)] == T::zero() {
                        continue;
                    }
                    let w = cr(q[(k, l)] / (lit::<T>(2.0) * hbar));
                    for (occ, c) in apply_quadrature(&singles[l], k, cfg.modes, hbar) {
                        push(&occ, c * w);
                    }
                }
            }
        }
    }
    Ok(SparseOperator::from_map(dim, map))
}

/// Dense Hamiltonian `r^T H r / 2hbar` on the truncated space.
pub fn build_hamiltonian_fock<T: Real>(
    h: &QuadHamiltonian<T>,
    cfg: &FockConfig<T>,
) -> Result<FockOperator<T>> {
    check_modes(h.modes(), cfg)?;
    let op = quadrature_operator(Some(h.matrix()), None, cfg)?;
    let m = op.to_dense();
    Ok(FockOperator {
        config: *cfg,
        matrix: (&m + m.adjoint()) * cr(lit::<T>(0.5)),
    })
}

/// Dense Hermitian generator `(r^T H r / 2 + r^T rbar) / hbar` of
/// `exp[-(i/hbar)(r^T H r / 2 + r^T rbar)]`.
pub fn build_affine_generator_fock<T: Real>(
    h: &QuadHamiltonian<T>,
    rbar: &DVector<T>,
    cfg: &FockConfig<T>,
) -> Result<FockOperator<T>> {
    check_modes(h.modes(), cfg)?;
    let op = quadrature_operator(Some(h.matrix()), Some(rbar), cfg)?;
    let m = op.to_dense();
    Ok(FockOperator {
        config: *cfg,
        matrix: (&m + m.adjoint()) * cr(lit::<T>(0.5)),
    })
}

/// Weyl operator `W(r) = exp((i/hbar) r_hat^T Omega r)`.
pub fn build_weyl_fock<T: Real>(r: &DVector<T>, cfg: &FockConfig<T>) -> Result<FockOperator<T>> {
    cfg.validate()?;
    if r.len() != 2 * cfg.modes {
        return Err(Error::Dimension(format!(
            "displacement must have length {}",
            2 * cfg.modes
        )));
    }
    // W = exp(-i K) with K = -(1/hbar) r_hat^T (Omega r)
    let v = -(omega_matrix::<T>(cfg.modes)? * r);
    let op = quadrature_operator(None, Some(&v), cfg)?;
    let k = FockOperator {
        config: *cfg,
        matrix: op.to_dense(),
    };
    k.evolution(T::one())
}

fn check_modes<T: Real>(modes: usize, cfg: &FockConfig<T>) -> Result<()> {
    if modes != cfg.modes {
        return Err(Error::Dimension(format!(
            "Hamiltonian has {modes} modes, Fock configuration {}",
            cfg.modes
        )));
    }
    Ok(())
}

/// Oracle amplitude with a cutoff-convergence estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockAmplitude<T: Real> {
    pub value: C<T>,
    /// `|alpha_N - alpha_{N-4}|`.
    pub error_estimate: T,
    pub converged: bool,
    pub cutoff: usize,
}

fn vacuum_state<T: Real>(dim: usize) -> DVector<C<T>> {
    let mut v = DVector::from_element(dim, C::new(T::zero(), T::zero()));
    v[0] = cr(T::one());
    v
}

fn raw_vacuum_amplitude<T: Real>(h: &QuadHamiltonian<T>, t: T, cfg: &FockConfig<T>) -> Result<C<T>> {
    let op = quadrature_operator(Some(h.matrix()), None, cfg)?;
    let out = op.evolve(&vacuum_state(cfg.dim()), t);
    Ok(out[0])
}

/// `<0| exp(-i H_trunc t) |0>` compared across cutoffs `N` and `N - 4`.
pub fn vacuum_amplitude_fock<T: Real>(
    h: &QuadHamiltonian<T>,
    t: T,
    cfg: &FockConfig<T>,
) -> Result<FockAmplitude<T>> {
    check_modes(h.modes(), cfg)?;
    cfg.validate()?;
    let value = raw_vacuum_amplitude(h, t, cfg)?;
    let coarse_cfg = FockConfig {
        cutoff: cfg.cutoff - 4,
        ..*cfg
    };
    let coarse = if coarse_cfg.cutoff >= 1 {
        raw_vacuum_amplitude(h, t, &coarse_cfg)?
    } else {
        value
    };
    let error_estimate = cabs(value - coarse);
    Ok(FockAmplitude {
        value,
        error_estimate,
        converged: error_estimate <= cfg.tolerance,
        cutoff: cfg.cutoff,
    })
}

/// `<0| prod_k exp(-i H(t_k^mid) dt) |0>` with midpoint sampling, the
/// truncated-space counterpart of the trotterized linear-system propagation.
pub fn vacuum_amplitude_fock_trotter<T, F>(
    hamiltonian_at: F,
    t: T,
    steps: usize,
    cfg: &FockConfig<T>,
) -> Result<C<T>>
where
    T: Real,
    F: Fn(T) -> Result<QuadHamiltonian<T>>,
{
    cfg.validate()?;
    if steps == 0 {
        return Err(Error::InvalidParameter("steps must be positive".into()));
    }
    let dt = t / lit(steps as f64);
    let mut state = vacuum_state(cfg.dim());
    for k in 0..steps {
        let mid = dt * (lit::<T>(k as f64) + lit(0.5));
        let h = hamiltonian_at(mid)?;
        check_modes(h.modes(), cfg)?;
        let op = quadrature_operator(Some(h.matrix()), None, cfg)?;
        state = op.evolve(&state, dt);
    }
    Ok(state[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    #[test]
    fn ladder_matrix_elements() {
        let (a, ad) = ladder_matrices::<f64>(2);
        let expect = dmatrix![0.0, 1.0, 0.0; 0.0, 0.0, 2f64.sqrt(); 0.0, 0.0, 0.0].map(cr);
        assert!(cmax_abs(&(&a - expect)) < 1e-15);
        let comm = &a * &ad - &ad * &a;
        let mut id = CMat::<f64>::identity(3, 3);
        id[(2, 2)] = cr(-2.0);
        assert!(cmax_abs(&(comm - id)) < 1e-14);
        assert!(a.column(0).iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn config_limits() {
        assert!(FockConfig::<f64>::new(3, 1).is_err());
        assert!(matches!(
            FockConfig::<f64>::new(16, 3),
            Err(Error::FockTooLarge { dim: 4913, .. })
        ));
        assert!(FockConfig::<f64>::new(15, 3).is_ok());
        assert!(FockConfig::<f64>::new(10, 1).unwrap().with_hbar(-1.0).is_err());
    }

    #[test]
    fn harmonic_oscillator_is_number_plus_half() {
        for hbar in [1.0f64, 2.0] {
            let cfg = FockConfig::new(12, 1).unwrap().with_hbar(hbar).unwrap();
            let h = QuadHamiltonian::new(DMatrix::<f64>::identity(2, 2)).unwrap();
            let op = build_hamiltonian_fock(&h, &cfg).unwrap();
            let expect = CMat::from_diagonal(&DVector::from_fn(13, |n, _| cr(n as f64 + 0.5)));
            assert!(cmax_abs(&(&op.matrix - expect)) < 1e-13);
        }
    }

    #[test]
    fn passive_commutes_with_number() {
        // E = G, F antisymmetric
        let h = QuadHamiltonian::new(dmatrix![
            1.0, 0.3, 0.0, 0.4;
            0.3, 2.0, -0.4, 0.0;
            0.0, -0.4, 1.0, 0.3;
            0.4, 0.0, 0.3, 2.0
        ])
        .unwrap();
        let cfg = FockConfig::new(8, 2).unwrap();
        let op = build_hamiltonian_fock(&h, &cfg).unwrap();
        let n_tot = CMat::from_diagonal(&DVector::from_fn(cfg.dim(), |i, _| {
            let occ = cfg.occupation(i);
            cr((occ[0] + occ[1]) as f64)
        }));
        let comm = &op.matrix * &n_tot - &n_tot * &op.matrix;
        assert!(cmax_abs(&comm) < 1e-12);
        assert!(op.hermiticity_residual() < 1e-12);
    }

    #[test]
    fn phase_gate_generator_matches_position_square() {
        let hbar = 2.0;
        let cfg = FockConfig::new(10, 1).unwrap();
        let h = QuadHamiltonian::new(dmatrix![-1.0, 0.0; 0.0, 0.0]).unwrap();
        let op = build_hamiltonian_fock(&h, &cfg).unwrap();
        let (a, ad) = ladder_matrices::<f64>(10);
        let x = (&a + &ad) * cr((hbar / 2.0f64).sqrt());
        let expect = (&x * &x) * cr(-1.0 / (2.0 * hbar));
        // truncation only touches the top two levels of x^2
        let diff = (&op.matrix - expect).view((0, 0), (9, 9)).into_owned();
        assert!(cmax_abs(&diff) < 1e-13);
    }

    #[test]
    fn oracle_amplitudes_against_closed_forms() {
        let cfg = FockConfig::new(40, 1).unwrap();
        let gate = QuadHamiltonian::new(dmatrix![-1.0, 0.0; 0.0, 0.0]).unwrap();
        let a = vacuum_amplitude_fock(&gate, 0.5, &cfg).unwrap();
        let expect = C::new(1.0, -0.25).inv().sqrt();
        assert!((a.value - expect).norm() < 1e-6, "{:?} vs {expect}", a.value);

        let cfg = FockConfig::new(60, 1).unwrap();
        let sq = QuadHamiltonian::new(dmatrix![1.0, 0.0; 0.0, -1.0]).unwrap();
        let a = vacuum_amplitude_fock(&sq, 1.0, &cfg).unwrap();
        assert!((a.value - cr(1.0 / 1f64.cosh().sqrt())).norm() < 1e-6);
        assert!(a.converged);
    }

    #[test]
    fn passive_oracle_has_unit_modulus() {
        let h = QuadHamiltonian::new(dmatrix![
            1.5, 0.2, 0.0, -0.7;
            0.2, 0.5, 0.7, 0.0;
            0.0, 0.7, 1.5, 0.2;
            -0.7, 0.0, 0.2, 0.5
        ])
        .unwrap();
        let cfg = FockConfig::new(10, 2).unwrap();
        for t in [0.3f64, 1.1, 4.0] {
            let a = vacuum_amplitude_fock(&h, t, &cfg).unwrap();
            assert!((a.value.norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn weyl_inverse_and_composition() {
        let cfg = FockConfig::new(40, 1).unwrap();
        let hbar = cfg.hbar;
        let r1 = DVector::from_vec(vec![0.4, -0.3]);
        let r2 = DVector::from_vec(vec![-0.2, 0.5]);
        let w0 = build_weyl_fock(&DVector::zeros(2), &cfg).unwrap();
        assert!(cmax_abs(&(&w0.matrix - CMat::identity(41, 41))) < 1e-14);

        let w1 = build_weyl_fock(&r1, &cfg).unwrap();
        let wm1 = build_weyl_fock(&(-&r1), &cfg).unwrap();
        let id = w1.compose(&wm1).low_block(10);
        assert!(cmax_abs(&(id - CMat::identity(10, 10))) < 1e-8);

        let w2 = build_weyl_fock(&r2, &cfg).unwrap();
        let w12 = build_weyl_fock(&(&r1 + &r2), &cfg).unwrap();
        let omega = omega_matrix::<f64>(1).unwrap();
        let phase = -(r1.transpose() * &omega * &r2)[(0, 0)] / (2.0 * hbar);
        let lhs = w1.compose(&w2).low_block(10);
        let rhs = w12.scale(C::new(0.0, phase).exp()).low_block(10);
        assert!(cmax_abs(&(lhs - rhs)) < 1e-8);
    }

    #[test]
    fn weyl_shifts_quadratures() {
        // W^dag x W = x + r_x on the low block
        let cfg = FockConfig::new(40, 1).unwrap();
        let r = DVector::from_vec(vec![0.3, 0.0]);
        let w = build_weyl_fock(&r, &cfg).unwrap();
        let (a, ad) = ladder_matrices::<f64>(40);
        let x = (&a + &ad) * cr(1.0);
        let shifted = w.matrix.adjoint() * &x * &w.matrix;
        let diff = (shifted - x - CMat::identity(41, 41) * cr(0.3)).view((0, 0), (10, 10)).into_owned();
        assert!(cmax_abs(&diff) < 1e-8);
    }
}
