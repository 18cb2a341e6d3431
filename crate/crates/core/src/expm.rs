//! Matrix exponential by scaling and squaring with diagonal Padé approximants.
//!
//! Degree selection follows Higham's 2005 backward-error analysis for double
//! precision; the chosen degree keeps the backward error of the scaled
//! problem below the unit roundoff. No diagonalization is attempted, so
//! defective inputs (nilpotent generators, shear-like propagators) are handled
//! the same way as any other matrix.

use nalgebra::{ComplexField, DMatrix};

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

const THETA_3: f64 = 1.495585217958292e-2;
const THETA_5: f64 = 2.539398330063230e-1;
const THETA_7: f64 = 9.504178996162932e-1;
const THETA_9: f64 = 2.097847961257068;
const THETA_13: f64 = 5.371920351148152;

const PADE_3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE_5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE_7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const PADE_9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const PADE_13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Induced 1-norm (max column sum of moduli).
pub fn norm1<N>(a: &DMatrix<N>) -> N::RealField
where
    N: ComplexField,
    N::RealField: Real,
{
    a.column_iter()
        .map(|c| {
            c.iter()
                .fold(<N::RealField as num_traits::Zero>::zero(), |acc, v| acc + v.clone().modulus())
        })
        .fold(<N::RealField as num_traits::Zero>::zero(), nalgebra::RealField::max)
}

/// `exp(A)` for a square real or complex matrix.
pub fn matrix_exponential<N>(a: &DMatrix<N>) -> Result<DMatrix<N>>
where
    N: ComplexField,
    N::RealField: Real,
{
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "matrix exponential needs a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    if !a.iter().all(|v| v.clone().is_finite()) {
        return Err(Error::NonFinite);
    }
    let n = a.nrows();
    if n == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }

    let norm = norm1(a);
    let (u, v, squarings) = if norm <= lit(THETA_3) {
        let (u, v) = pade_low(a, &PADE_3);
        (u, v, 0)
    } else if norm <= lit(THETA_5) {
        let (u, v) = pade_low(a, &PADE_5);
        (u, v, 0)
    } else if norm <= lit(THETA_7) {
        let (u, v) = pade_low(a, &PADE_7);
        (u, v, 0)
    } else if norm <= lit(THETA_9) {
        let (u, v) = pade_low(a, &PADE_9);
        (u, v, 0)
    } else {
        let ratio = norm / lit(THETA_13);
        let s = nalgebra::try_convert::<N::RealField, f64>(ratio)
            .unwrap_or(f64::MAX)
            .log2()
            .ceil()
            .max(0.0) as i32;
        let scale = N::from_real(lit(0.5f64.powi(s)));
        let scaled = a.map(|x| x * scale.clone());
        let (u, v) = pade_13(&scaled);
        (u, v, s as u32)
    };

    let numer = &v + &u;
    let denom = &v - &u;
    let mut r = denom
        .lu()
        .solve(&numer)
        .ok_or_else(|| Error::InvalidParameter("Padé denominator is singular".into()))?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    Ok(r)
}

fn coeff<N: ComplexField>(b: f64) -> N
where
    N::RealField: Real,
{
    N::from_real(lit(b))
}

/// Odd/even split for degrees 3 through 9.
fn pade_low<N>(a: &DMatrix<N>, b: &[f64]) -> (DMatrix<N>, DMatrix<N>)
where
    N: ComplexField,
    N::RealField: Real,
{
    let n = a.nrows();
    let ident = DMatrix::<N>::identity(n, n);
    let a2 = a * a;
    let mut odd = ident.scale_coeff(coeff::<N>(b[1]));
    let mut even = ident.scale_coeff(coeff::<N>(b[0]));
    let mut power = ident;
    let mut k = 2;
    while k < b.len() {
        power = &power * &a2;
        even += power.scale_coeff(coeff::<N>(b[k]));
        if k + 1 < b.len() {
            odd += power.scale_coeff(coeff::<N>(b[k + 1]));
        }
        k += 2;
    }
    (a * odd, even)
}

fn pade_13<N>(a: &DMatrix<N>) -> (DMatrix<N>, DMatrix<N>)
where
    N: ComplexField,
    N::RealField: Real,
{
    let b = |i: usize| coeff::<N>(PADE_13[i]);
    let n = a.nrows();
    let ident = DMatrix::<N>::identity(n, n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let inner_u = a6.scale_coeff(b(13)) + a4.scale_coeff(b(11)) + a2.scale_coeff(b(9));
    let u = a * (&a6 * inner_u
        + a6.scale_coeff(b(7))
        + a4.scale_coeff(b(5))
        + a2.scale_coeff(b(3))
        + ident.scale_coeff(b(1)));

    let inner_v = a6.scale_coeff(b(12)) + a4.scale_coeff(b(10)) + a2.scale_coeff(b(8));
    let v = &a6 * inner_v
        + a6.scale_coeff(b(6))
        + a4.scale_coeff(b(4))
        + a2.scale_coeff(b(2))
        + ident.scale_coeff(b(0));
    (u, v)
}

trait ScaleCoeff<N> {
    fn scale_coeff(&self, c: N) -> Self;
}

impl<N: ComplexField> ScaleCoeff<N> for DMatrix<N> {
    fn scale_coeff(&self, c: N) -> Self {
        self.map(|x| x * c.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::C;
    use nalgebra::dmatrix;
    use rand::{Rng, SeedableRng};

    fn max_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
        (a - b).amax()
    }

    #[test]
    fn zero_gives_identity() {
        let z = DMatrix::<f64>::zeros(3, 3);
        assert_eq!(matrix_exponential(&z).unwrap(), DMatrix::identity(3, 3));
    }

    #[test]
    fn rotation_generator() {
        for &t in &[0.01, 0.3, 1.7, 12.0, 100.0] {
            let a = dmatrix![0.0, t; -t, 0.0];
            let e = matrix_exponential(&a).unwrap();
            let expect = dmatrix![t.cos(), t.sin(); -t.sin(), t.cos()];
            assert!(max_diff(&e, &expect) < 1e-13 * (1.0 + t), "t = {t}");
        }
    }

    #[test]
    fn nilpotent_series_terminates() {
        let a = dmatrix![0.0, 1.0; 0.0, 0.0];
        let e = matrix_exponential(&a).unwrap();
        assert!(max_diff(&e, &dmatrix![1.0, 1.0; 0.0, 1.0]) < 1e-15);
    }

    #[test]
    fn defective_jordan_block_with_large_norm() {
        // exp([[l, 1], [0, l]] t) = e^{l t} [[1, t], [0, 1]]
        let (l, t): (f64, f64) = (-0.5, 7.0);
        let a = dmatrix![l * t, t; 0.0, l * t];
        let e = matrix_exponential(&a).unwrap();
        let s = (l * t).exp();
        assert!(max_diff(&e, &dmatrix![s, s * t; 0.0, s]) < 1e-14);
    }

    #[test]
    fn complex_scalar_case() {
        let z = C::new(0.3, -2.1);
        let a = DMatrix::from_element(1, 1, z);
        let e = matrix_exponential(&a).unwrap()[(0, 0)];
        let expect = C::new(0.3f64.exp() * (-2.1f64).cos(), 0.3f64.exp() * (-2.1f64).sin());
        assert!((e - expect).norm() < 1e-14);
    }

    #[test]
    fn inverse_property_on_random_inputs() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for _ in 0..20 {
            let a = DMatrix::<f64>::from_fn(10, 10, |_, _| rng.gen_range(-1.0..1.0));
            let e = matrix_exponential(&a).unwrap();
            let einv = matrix_exponential(&(-&a)).unwrap();
            let prod = &e * &einv;
            let cond = norm1(&e) * norm1(&einv);
            assert!(max_diff(&prod, &DMatrix::identity(10, 10)) < 1e-13 * cond);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            matrix_exponential(&DMatrix::<f64>::zeros(2, 3)),
            Err(Error::Dimension(_))
        ));
        let mut a = DMatrix::<f64>::zeros(2, 2);
        a[(0, 1)] = f64::NAN;
        assert_eq!(matrix_exponential(&a), Err(Error::NonFinite));
    }

    #[test]
    fn single_precision_instantiation() {
        let a = dmatrix![0.0f32, 1.0; -1.0, 0.0];
        let e = matrix_exponential(&a).unwrap();
        assert!((e[(0, 0)] - 1.0f32.cos()).abs() < 1e-6);
    }
}
