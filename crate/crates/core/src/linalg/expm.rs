//! Matrix exponential with two independent routes: diagonalization and
//! scaling-and-squaring of the Taylor series.

use super::{eig_general, CMat, C64};
use crate::error::{Error, Result};

/// Eigenvector matrices with a pivot ratio below this are treated as too
/// ill-conditioned for the diagonalization route.
const CONDITION_FLOOR: f64 = 1e-8;
const MAX_TERMS: usize = 40;

/// `e^a`, via diagonalization when the eigenbasis is well conditioned and
/// scaling-and-squaring otherwise.
pub fn expm(a: &CMat) -> Result<CMat> {
    match expm_eigen(a) {
        Ok(e) => Ok(e),
        Err(Error::Singular) | Err(Error::NoConvergence { .. }) => expm_series(a),
        Err(e) => Err(e),
    }
}

/// `e^a = V diag(e^λ) V^-1`. Fails with [`Error::Singular`] when `a` is not
/// (numerically) diagonalizable.
pub fn expm_eigen(a: &CMat) -> Result<CMat> {
    let pairs = eig_general(a)?;
    let n = a.rows();
    let mut vecs = CMat::zeros(n, n);
    let mut scaled = CMat::zeros(n, n);
    for (j, p) in pairs.iter().enumerate() {
        let ev = p.value.exp();
        for i in 0..n {
            vecs[(i, j)] = p.vector[i];
            scaled[(i, j)] = p.vector[i] * ev;
        }
    }
    if min_pivot_ratio(&vecs) < CONDITION_FLOOR {
        return Err(Error::Singular);
    }
    // X V = V D  =>  V^T X^T = (V D)^T
    let xt = vecs.transpose().solve(&scaled.transpose())?;
    Ok(xt.transpose())
}

/// Taylor series with the argument scaled until its Frobenius norm is below
/// one half, then squared back.
pub fn expm_series(a: &CMat) -> Result<CMat> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            op: "expm_series",
            left: a.shape(),
            right: a.shape(),
        });
    }
    let n = a.rows();
    let norm = a.frobenius();
    let squarings = if norm < 0.5 {
        0
    } else {
        (norm / 0.5).log2().floor() as i32 + 1
    };
    let b = a.scale_real(0.5_f64.powi(squarings));

    let mut sum = CMat::identity(n);
    let mut term = CMat::identity(n);
    let mut done = false;
    for k in 1..=MAX_TERMS {
        term = (&term * &b).scale(C64::new(1.0 / k as f64, 0.0));
        sum = &sum + &term;
        if term.frobenius() <= f64::EPSILON * 1e-3 * sum.frobenius() {
            done = true;
            break;
        }
    }
    if !done {
        return Err(Error::NoConvergence {
            routine: "expm_series",
            iterations: MAX_TERMS,
        });
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    Ok(sum)
}

/// Smallest |pivot| / largest |pivot| from partial-pivoting elimination; a
/// cheap conditioning proxy.
fn min_pivot_ratio(m: &CMat) -> f64 {
    let n = m.rows();
    let mut a = m.clone();
    let (mut lo, mut hi) = (f64::INFINITY, 0.0_f64);
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[(i, k)].norm().total_cmp(&a[(j, k)].norm()))
            .unwrap();
        let pv = a[(p, k)].norm();
        lo = lo.min(pv);
        hi = hi.max(pv);
        if pv == 0.0 {
            return 0.0;
        }
        for j in 0..n {
            let t = a[(p, j)];
            a[(p, j)] = a[(k, j)];
            a[(k, j)] = t;
        }
        for i in k + 1..n {
            let f = a[(i, k)] / a[(k, k)];
            for j in k..n {
                let t = a[(k, j)];
                a[(i, j)] -= f * t;
            }
        }
    }
    if hi == 0.0 {
        0.0
    } else {
        lo / hi
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, ZERO};
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn exp_of_zero_is_identity() {
        let z = CMat::zeros(4, 4);
        assert!(expm(&z).unwrap().max_abs_diff(&CMat::identity(4)).unwrap() < 1e-15);
        assert!(
            expm_series(&z)
                .unwrap()
                .max_abs_diff(&CMat::identity(4))
                .unwrap()
                < 1e-15
        );
    }

    #[test]
    fn diagonal_phases() {
        let a = CMat::diag(&[c(0.0, FRAC_PI_2), c(0.0, -FRAC_PI_2)]);
        let expected = CMat::diag(&[c(0.0, 1.0), c(0.0, -1.0)]);
        assert!(expm_eigen(&a).unwrap().max_abs_diff(&expected).unwrap() < 1e-15);
        assert!(expm_series(&a).unwrap().max_abs_diff(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn nilpotent_falls_back_to_series() {
        // Jordan block: not diagonalizable, e^N = 1 + N
        let nil = CMat::from_rows(&[[ZERO, c(1.0, 0.0)], [ZERO, ZERO]]);
        assert!(expm_eigen(&nil).is_err());
        let e = expm(&nil).unwrap();
        let expected = CMat::from_real_rows(&[[1.0, 1.0], [0.0, 1.0]]);
        assert!(e.max_abs_diff(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn large_norm_argument() {
        // e^{diag(5, -3)} through many squarings
        let a = CMat::from_real_rows(&[[5.0, 0.0], [0.0, -3.0]]);
        let e = expm_series(&a).unwrap();
        assert!((e[(0, 0)].re - 5f64.exp()).abs() < 1e-12 * 5f64.exp());
        assert!((e[(1, 1)].re - (-3f64).exp()).abs() < 1e-14);
    }
}
