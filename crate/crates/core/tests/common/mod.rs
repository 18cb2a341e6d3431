//! Random Hamiltonian families and independent reference formulas shared by
//! the integration tests.
#![allow(dead_code)]

use gaussphase::QuadHamiltonian;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn sym(rng: &mut StdRng, n: usize, scale: f64) -> DMatrix<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-scale..scale));
    (&a + a.transpose()) * 0.5
}

pub fn blocks(e: &DMatrix<f64>, f: &DMatrix<f64>, g: &DMatrix<f64>) -> QuadHamiltonian<f64> {
    let m = e.nrows();
    let mut h = DMatrix::zeros(2 * m, 2 * m);
    h.view_mut((0, 0), (m, m)).copy_from(e);
    h.view_mut((0, m), (m, m)).copy_from(f);
    h.view_mut((m, 0), (m, m)).copy_from(&f.transpose());
    h.view_mut((m, m), (m, m)).copy_from(g);
    QuadHamiltonian::new(h).unwrap()
}

pub fn random_h(rng: &mut StdRng, m: usize, scale: f64) -> QuadHamiltonian<f64> {
    QuadHamiltonian::new(sym(rng, 2 * m, scale)).unwrap()
}

/// Number conserving: `E = G` symmetric, `F` antisymmetric.
pub fn random_passive(rng: &mut StdRng, m: usize) -> QuadHamiltonian<f64> {
    let e = sym(rng, m, 1.0);
    let a = DMatrix::from_fn(m, m, |_, _| rng.gen_range(-1.0..1.0));
    let f = (&a - a.transpose()) * 0.5;
    blocks(&e, &f, &e)
}

/// Pure pairing: `E = -G` symmetric, `F` symmetric.
pub fn random_active(rng: &mut StdRng, m: usize) -> QuadHamiltonian<f64> {
    let e = sym(rng, m, 1.0);
    let f = sym(rng, m, 1.0);
    blocks(&e, &f, &(-&e))
}

pub fn random_pd(rng: &mut StdRng, m: usize) -> QuadHamiltonian<f64> {
    let a = DMatrix::from_fn(2 * m, 2 * m, |_, _| rng.gen_range(-1.0..1.0));
    let h = a.transpose() * &a * 0.5 + DMatrix::identity(2 * m, 2 * m) * 0.2;
    QuadHamiltonian::new(h).unwrap()
}

pub fn omega(m: usize) -> DMatrix<f64> {
    let mut w = DMatrix::zeros(2 * m, 2 * m);
    for j in 0..m {
        w[(j, m + j)] = 1.0;
        w[(m + j, j)] = -1.0;
    }
    w
}

/// `1/sqrt(det[(S S^T + I)/2])` with `S` from nalgebra's own exponential.
pub fn reference_probability(h: &QuadHamiltonian<f64>, t: f64) -> f64 {
    let n = h.matrix().nrows();
    let s = (omega(n / 2) * h.matrix() * t).exp();
    let k = (&s * s.transpose() + DMatrix::identity(n, n)) * 0.5;
    1.0 / k.determinant().sqrt()
}

/// `1/sqrt(1 + i c)` on the principal branch (continuous for real `c`).
pub fn inv_sqrt_one_plus_i(c: f64) -> Complex64 {
    Complex64::new(1.0, c).sqrt().inv()
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |a, x| a.max(x.abs()))
}
