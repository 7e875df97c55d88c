//! One-sided (Hestenes) Jacobi SVD for small square complex matrices.

use super::{CMat, C64, ZERO};
use crate::error::{Error, Result};

/// `input = left * diag(singulars) * right^dagger`.
#[derive(Clone, Debug)]
pub struct SvdResult {
    pub left: CMat,
    /// Nonnegative, descending.
    pub singulars: Vec<f64>,
    pub right: CMat,
}

impl SvdResult {
    pub fn max_singular(&self) -> f64 {
        self.singulars.first().copied().unwrap_or(0.0)
    }

    pub fn reconstruct(&self) -> CMat {
        self.reconstruct_with(&self.singulars)
    }

    /// `left * diag(values) * right^dagger` for replacement singular values.
    pub fn reconstruct_with(&self, values: &[f64]) -> CMat {
        let n = self.singulars.len();
        let mut ls = self.left.clone();
        for j in 0..n {
            for i in 0..n {
                ls[(i, j)] *= values[j];
            }
        }
        &ls * &self.right.adjoint()
    }
}

const MAX_DIM: usize = 8;
const MAX_SWEEPS: usize = 80;

pub fn svd(a: &CMat) -> Result<SvdResult> {
    if !a.is_square() || a.rows() > MAX_DIM {
        return Err(Error::DimensionMismatch {
            op: "svd",
            left: a.shape(),
            right: (MAX_DIM, MAX_DIM),
        });
    }
    let n = a.rows();
    let mut w = a.clone();
    let mut v = CMat::identity(n);

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, ZERO);
                for i in 0..n {
                    alpha += w[(i, p)].norm_sqr();
                    beta += w[(i, q)].norm_sqr();
                    gamma += w[(i, p)].conj() * w[(i, q)];
                }
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // Rotate the phase of column q so the Gram entry is real,
                // then apply a real Jacobi rotation.
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for m in [&mut w, &mut v] {
                    for i in 0..n {
                        let x = m[(i, p)];
                        let y = m[(i, q)] * phase;
                        m[(i, p)] = x * cs - y * sn;
                        m[(i, q)] = x * sn + y * cs;
                    }
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            routine: "svd",
            iterations: MAX_SWEEPS,
        });
    }

    let norms: Vec<f64> = (0..n)
        .map(|j| (0..n).map(|i| w[(i, j)].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let sigma_max = norms[order[0]];
    let floor = (n as f64) * f64::EPSILON * sigma_max;
    let mut left = CMat::zeros(n, n);
    let mut right = CMat::zeros(n, n);
    let mut singulars = Vec::with_capacity(n);
    let mut missing = Vec::new();
    for (dst, &src) in order.iter().enumerate() {
        let s = norms[src];
        singulars.push(s);
        right.set_column(dst, &v.column(src));
        if s > floor && s > 0.0 {
            let col: Vec<C64> = w.column(src).iter().map(|z| z / s).collect();
            left.set_column(dst, &col);
        } else {
            missing.push(dst);
        }
    }
    complete_orthonormal(&mut left, &missing);
    Ok(SvdResult {
        left,
        singulars,
        right,
    })
}

/// Fills the listed columns so that `m` becomes unitary, given that the other
/// columns are already orthonormal.
fn complete_orthonormal(m: &mut CMat, missing: &[usize]) {
    let n = m.rows();
    let mut filled: Vec<usize> = (0..n).filter(|j| !missing.contains(j)).collect();
    for &dst in missing {
        let mut best: Option<(f64, Vec<C64>)> = None;
        for e in 0..n {
            let mut x = vec![ZERO; n];
            x[e] = C64::new(1.0, 0.0);
            for _ in 0..2 {
                for &j in &filled {
                    let col = m.column(j);
                    let proj: C64 = col.iter().zip(&x).map(|(c, xi)| c.conj() * xi).sum();
                    for (xi, ci) in x.iter_mut().zip(&col) {
                        *xi -= proj * ci;
                    }
                }
            }
            let nx = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if best.as_ref().is_none_or(|(b, _)| nx > *b) {
                best = Some((nx, x));
            }
        }
        let (nx, x) = best.expect("dimension is positive");
        let col: Vec<C64> = x.iter().map(|z| z / nx).collect();
        m.set_column(dst, &col);
        filled.push(dst);
    }
}
