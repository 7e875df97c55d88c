//! General (non-Hermitian) eigendecomposition via Householder reduction to
//! Hessenberg form, shifted complex QR iteration to Schur form, and
//! back-substitution for the right eigenvectors.

use super::{CMat, Ket, C64, ONE, ZERO};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct EigPair {
    pub value: C64,
    /// Right eigenvector with unit euclidean norm.
    pub vector: Ket,
}

const MAX_DIM: usize = 8;
const ITERS_PER_EIGENVALUE: usize = 60;

/// Right eigenpairs of a square matrix of dimension <= 8, ordered by
/// descending real part, ties broken by descending imaginary part.
pub fn eig_general(a: &CMat) -> Result<Vec<EigPair>> {
    if !a.is_square() || a.rows() > MAX_DIM {
        return Err(Error::DimensionMismatch {
            op: "eig_general",
            left: a.shape(),
            right: (MAX_DIM, MAX_DIM),
        });
    }
    let n = a.rows();
    let (t, z) = schur(a)?;
    let tnorm = match t.frobenius() {
        f if f > 0.0 => f,
        _ => 1.0,
    };

    let mut pairs = Vec::with_capacity(n);
    for k in 0..n {
        let lambda = t[(k, k)];
        let mut x = vec![ZERO; n];
        x[k] = ONE;
        for i in (0..k).rev() {
            let s: C64 = (i + 1..=k).map(|j| t[(i, j)] * x[j]).sum();
            let mut denom = t[(i, i)] - lambda;
            if denom.norm() < f64::EPSILON * tnorm {
                denom = C64::new(f64::EPSILON * tnorm, 0.0);
            }
            x[i] = -s / denom;
        }
        let v: Vec<C64> = (0..n)
            .map(|r| (0..=k).map(|j| z[(r, j)] * x[j]).sum())
            .collect();
        let vector = Ket::new(v).and_then(|v| v.normalized())?;
        pairs.push(EigPair {
            value: lambda,
            vector,
        });
    }
    sort_pairs(&mut pairs);
    Ok(pairs)
}

fn sort_pairs(pairs: &mut [EigPair]) {
    let scale = pairs.iter().map(|p| p.value.norm()).fold(1.0_f64, f64::max);
    let tie = 1e-9 * scale;
    let before = |x: C64, y: C64| {
        if (x.re - y.re).abs() > tie {
            x.re > y.re
        } else {
            x.im > y.im
        }
    };
    // Insertion sort: the tolerance comparison is not a total order.
    for i in 1..pairs.len() {
        let mut j = i;
        while j > 0 && before(pairs[j].value, pairs[j - 1].value) {
            pairs.swap(j, j - 1);
            j -= 1;
        }
    }
}

/// Complex Schur decomposition `a = z * t * z^dagger` with `t` upper
/// triangular.
fn schur(a: &CMat) -> Result<(CMat, CMat)> {
    let n = a.rows();
    let (mut h, mut z) = hessenberg(a);
    if n == 1 {
        return Ok((h, z));
    }
    let anorm = h.frobenius();
    let eps = f64::EPSILON;

    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    let cap = ITERS_PER_EIGENVALUE * n;
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let mut s = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            if s == 0.0 {
                s = anorm;
            }
            if h[(l, l - 1)].norm() <= eps * s {
                h[(l, l - 1)] = ZERO;
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > cap {
            return Err(Error::NoConvergence {
                routine: "eig_general",
                iterations: total,
            });
        }

        let mu = if iter.is_multiple_of(10) {
            // exceptional shift to break cycles
            h[(hi, hi)] + C64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        for k in l..=hi {
            h[(k, k)] -= mu;
        }
        let mut rots = Vec::with_capacity(hi - l);
        for k in l..hi {
            let (cs, sn) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..n {
                let (x, y) = (h[(k, j)], h[(k + 1, j)]);
                h[(k, j)] = x * cs + sn * y;
                h[(k + 1, j)] = -sn.conj() * x + y * cs;
            }
            rots.push((cs, sn));
        }
        for (off, &(cs, sn)) in rots.iter().enumerate() {
            let k = l + off;
            let last = (k + 2).min(hi);
            for r in 0..=last {
                let (x, y) = (h[(r, k)], h[(r, k + 1)]);
                h[(r, k)] = x * cs + sn.conj() * y;
                h[(r, k + 1)] = -sn * x + y * cs;
            }
            for r in 0..n {
                let (x, y) = (z[(r, k)], z[(r, k + 1)]);
                z[(r, k)] = x * cs + sn.conj() * y;
                z[(r, k + 1)] = -sn * x + y * cs;
            }
        }
        for k in l..=hi {
            h[(k, k)] += mu;
        }
    }
    // clear the strictly lower part left by rounding
    for i in 1..n {
        for j in 0..i {
            h[(i, j)] = ZERO;
        }
    }
    Ok((h, z))
}

/// Eigenvalue of `[[a, b], [c, d]]` closest to `d`.
fn wilkinson(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half_tr = (a + d) * 0.5;
    let disc = ((a - d) * 0.5 * ((a - d) * 0.5) + b * c).sqrt();
    let l1 = half_tr + disc;
    let l2 = half_tr - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Rotation `[[c, s], [-conj(s), c]]` with real `c` mapping `(f, g)` to
/// `(r, 0)`.
fn givens(f: C64, g: C64) -> (C64, C64) {
    if g == ZERO {
        return (ONE, ZERO);
    }
    if f == ZERO {
        return (ZERO, g.conj() / g.norm());
    }
    let fa = f.norm();
    let rho = fa.hypot(g.norm());
    let phase = f / fa;
    (C64::new(fa / rho, 0.0), phase * g.conj() / rho)
}

/// Householder reduction `a = q * h * q^dagger` with `h` upper Hessenberg.
fn hessenberg(a: &CMat) -> (CMat, CMat) {
    let n = a.rows();
    let mut h = a.clone();
    let mut q = CMat::identity(n);
    for k in 0..n.saturating_sub(2) {
        let x: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let phase = if x[0] == ZERO {
            ONE
        } else {
            x[0] / x[0].norm()
        };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // h <- (1 - 2vv^dagger) h
        for j in 0..n {
            let s: C64 = v
                .iter()
                .enumerate()
                .map(|(i, vi)| vi.conj() * h[(k + 1 + i, j)])
                .sum();
            for (i, vi) in v.iter().enumerate() {
                h[(k + 1 + i, j)] -= *vi * s * 2.0;
            }
        }
        // h <- h (1 - 2vv^dagger), q <- q (1 - 2vv^dagger)
        for m in [&mut h, &mut q] {
            for r in 0..n {
                let s: C64 = v
                    .iter()
                    .enumerate()
                    .map(|(i, vi)| m[(r, k + 1 + i)] * vi)
                    .sum();
                for (i, vi) in v.iter().enumerate() {
                    m[(r, k + 1 + i)] -= s * vi.conj() * 2.0;
                }
            }
        }
    }
    (h, q)
}
