use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Quadrature layout of a `2M` vector: `xxpp = (x_1..x_M, p_1..p_M)`,
/// `xpxp = (x_1, p_1, x_2, p_2, ..)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ordering {
    #[default]
    Xxpp,
    Xpxp,
}

impl FromStr for Ordering {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "xxpp" => Ok(Ordering::Xxpp),
            "xpxp" => Ok(Ordering::Xpxp),
            other => Err(format!("unknown ordering {other:?} (expected xxpp or xpxp)")),
        }
    }
}

impl fmt::Display for Ordering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ordering::Xxpp => "xxpp",
            Ordering::Xpxp => "xpxp",
        })
    }
}

/// `perm[i]` is the xpxp index of xxpp entry `i`.
fn xpxp_index(n: usize) -> Vec<usize> {
    let m = n / 2;
    (0..n).map(|i| if i < m { 2 * i } else { 2 * (i - m) + 1 }).collect()
}

/// Re-expresses a quadratic form given in `from` ordering in xxpp.
pub fn convert_ordering(h: &DMatrix<f64>, from: Ordering) -> DMatrix<f64> {
    match from {
        Ordering::Xxpp => h.clone(),
        Ordering::Xpxp => {
            let p = xpxp_index(h.nrows());
            DMatrix::from_fn(h.nrows(), h.ncols(), |i, j| h[(p[i], p[j])])
        }
    }
}

/// Inverse of [`convert_ordering`]: an xxpp matrix written in `to` ordering.
pub fn from_xxpp(h: &DMatrix<f64>, to: Ordering) -> DMatrix<f64> {
    match to {
        Ordering::Xxpp => h.clone(),
        Ordering::Xpxp => {
            let p = xpxp_index(h.nrows());
            let mut out = DMatrix::zeros(h.nrows(), h.ncols());
            for i in 0..h.nrows() {
                for j in 0..h.ncols() {
                    out[(p[i], p[j])] = h[(i, j)];
                }
            }
            out
        }
    }
}

pub fn vector_to_xxpp(v: &DVector<f64>, from: Ordering) -> DVector<f64> {
    match from {
        Ordering::Xxpp => v.clone(),
        Ordering::Xpxp => {
            let p = xpxp_index(v.len());
            DVector::from_fn(v.len(), |i, _| v[p[i]])
        }
    }
}

pub fn vector_from_xxpp(v: &DVector<f64>, to: Ordering) -> DVector<f64> {
    match to {
        Ordering::Xxpp => v.clone(),
        Ordering::Xpxp => {
            let p = xpxp_index(v.len());
            let mut out = DVector::zeros(v.len());
            for i in 0..v.len() {
                out[p[i]] = v[i];
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_mode_permutation() {
        let h = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 2.0, 3.0, 4.0]));
        let out = convert_ordering(&h, Ordering::Xpxp);
        assert_eq!(out.diagonal().as_slice(), &[1.0, 3.0, 2.0, 4.0]);
        // for two modes the swap is its own inverse
        assert_eq!(convert_ordering(&out, Ordering::Xpxp), h);
        assert_eq!(convert_ordering(&h, Ordering::Xxpp), h);
    }

    #[test]
    fn round_trips() {
        for m in 1..=4 {
            let n = 2 * m;
            let h = DMatrix::from_fn(n, n, |i, j| (i * n + j) as f64);
            let v = DVector::from_fn(n, |i, _| i as f64);
            for o in [Ordering::Xxpp, Ordering::Xpxp] {
                assert_eq!(from_xxpp(&convert_ordering(&h, o), o), h);
                assert_eq!(vector_from_xxpp(&vector_to_xxpp(&v, o), o), v);
            }
        }
        let v = DVector::from_vec(vec![1.0, 10.0, 2.0, 20.0, 3.0, 30.0]);
        assert_eq!(vector_to_xxpp(&v, Ordering::Xpxp).as_slice(), &[1.0, 2.0, 3.0, 10.0, 20.0, 30.0]);
    }

    #[test]
    fn tags() {
        assert_eq!("xpxp".parse::<Ordering>().unwrap(), Ordering::Xpxp);
        assert!("ppxx".parse::<Ordering>().is_err());
    }
}
